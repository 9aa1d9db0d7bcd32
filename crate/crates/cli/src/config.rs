//! Run configuration: an optional JSON document overlaid by command-line
//! flags, resolved into a concrete family on a concrete envelope.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use exact_twolevel::families::{
    cubic_chi, gaussian_chi, poly_chi, CubicFamily, GaussianFamily, PolyConvention, PolyFamily,
};
use exact_twolevel::Error;
use exact_twolevel::solver::{
    saturating, ChiAnsatz, ConstantEnvelope, Envelope, ErfEnvelope, Eta, ModulatedEnvelope,
};
use serde::Deserialize;

use crate::angle::parse_angle;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every command. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// gaussian | poly | cubic | saturation
    #[arg(long)]
    pub family: Option<String>,
    /// Family or envelope parameter, `name=value` (repeatable).
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    /// constant | modulated | erf
    #[arg(long)]
    pub envelope: Option<String>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Target χ(T); radians or `pi/N`.
    #[arg(long = "chi-final")]
    pub chi_final: Option<String>,
    #[arg(long)]
    pub bx: Option<f64>,
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    #[arg(long = "T-min")]
    pub t_min: Option<f64>,
    #[arg(long = "T-max")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON document with the same keys (`T`, `T_min`, ... for the capitalised flags).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// An angle in a config file: a number or a `pi/N` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AngleValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    /// Optional; must name the subcommand being run.
    command: Option<String>,
    family: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    envelope: Option<String>,
    t_end: Option<f64>,
    samples: Option<usize>,
    chi_final: Option<AngleValue>,
    bx: Option<f64>,
    #[serde(rename = "T")]
    t_final: Option<f64>,
    #[serde(rename = "T_min")]
    t_min: Option<f64>,
    #[serde(rename = "T_max")]
    t_max: Option<f64>,
    steps: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Fully merged configuration. Numeric fields stay optional: defaults depend
/// on the command and family.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub family: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub envelope: Option<String>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub chi_final: Option<f64>,
    pub bx: Option<f64>,
    pub t_final: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

impl RunConfig {
    pub fn from_flags(flags: Flags, command: &str) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| malformed(format!("bad config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        if let Some(c) = file.command.as_deref().filter(|&c| c != command) {
            return Err(malformed(format!("config is for `{c}`, not `{command}`")));
        }
        let mut params = file.params;
        for kv in &flags.params {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| malformed(format!("--param expects name=value, got {kv:?}")))?;
            let v = parse_angle(v).map_err(malformed)?;
            params.insert(k.trim().to_string(), v);
        }
        let chi_final = match (flags.chi_final, file.chi_final) {
            (Some(s), _) | (None, Some(AngleValue::Text(s))) => Some(parse_angle(&s).map_err(malformed)?),
            (None, Some(AngleValue::Number(x))) => Some(x),
            (None, None) => None,
        };
        Ok(Self {
            family: flags.family.or(file.family),
            params,
            envelope: flags.envelope.or(file.envelope),
            t_end: flags.t_end.or(file.t_end),
            samples: flags.samples.or(file.samples),
            chi_final,
            bx: flags.bx.or(file.bx),
            t_final: flags.t_final.or(file.t_final),
            t_min: flags.t_min.or(file.t_min),
            t_max: flags.t_max.or(file.t_max),
            steps: flags.steps.or(file.steps),
            tol: flags.tol.or(file.tol),
            out: flags.out.or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
        })
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(201)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-6)
    }

    fn param(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    fn check_params(&self, allowed: &[&str]) -> Result<(), CliError> {
        for k in self.params.keys() {
            let poly_coefficient = k.strip_prefix('a').is_some_and(|n| n.parse::<usize>().is_ok());
            if !allowed.contains(&k.as_str()) && !(allowed.contains(&"a*") && poly_coefficient) {
                return Err(malformed(format!("unknown parameter {k:?} (allowed: {})", allowed.join(", "))));
            }
        }
        Ok(())
    }

    /// Cubic sweep from `--chi-final`, `--bx`, `--T`, or `--param a=…`.
    pub fn cubic(&self, default_chi: f64, default_bx_t: f64) -> Result<CubicFamily, CliError> {
        self.check_params(&["a"])?;
        let t = self.t_final.unwrap_or(1.0);
        let bx = self.bx.unwrap_or(default_bx_t / t);
        Ok(match self.params.get("a") {
            Some(&a) => CubicFamily::new(a, bx, t)?,
            None => CubicFamily::for_target(self.chi_final.unwrap_or(default_chi), bx, t)?,
        })
    }

    fn beta0(&self) -> Result<f64, CliError> {
        let beta0 = self.param("beta0", 1.0);
        if !(beta0 > 0.0 && beta0.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta0 must be positive, got {beta0}")).into());
        }
        Ok(beta0)
    }

    fn envelope(&self, default: &str) -> Result<(Arc<dyn Envelope>, &'static [&'static str]), CliError> {
        let name = self.envelope.as_deref().unwrap_or(default);
        Ok(match name {
            "constant" => (Arc::new(ConstantEnvelope::new(self.beta0()?)), &["beta0"]),
            "modulated" => (Arc::new(ModulatedEnvelope::new(self.beta0()?)), &["beta0"]),
            "erf" => (
                Arc::new(ErfEnvelope::new(
                    self.param("mu", 0.25),
                    self.param("nu", 3.0),
                    self.param("t0", 5.0),
                )?),
                &["mu", "nu", "t0"],
            ),
            other => return Err(malformed(format!("unknown envelope {other:?}"))),
        })
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let family = self.family.as_deref().unwrap_or("cubic");
        match family {
            "gaussian" => {
                let (env, env_params) = self.envelope("erf")?;
                let mut allowed = env_params.to_vec();
                allowed.extend(["mu", "nu", "t0"]);
                self.check_params(&allowed)?;
                // validates μ, ν even when another envelope is chosen
                let fam = GaussianFamily::new(self.param("mu", 0.25), self.param("nu", 3.0), self.param("t0", 5.0))?;
                let t_end = if self.envelope.as_deref().unwrap_or("erf") == "erf" {
                    2.0 * fam.t_center
                } else {
                    4.0
                };
                Ok(Problem {
                    name: "gaussian",
                    chi: Box::new(gaussian_chi(env.clone())),
                    env,
                    t_end: self.t_end.unwrap_or(t_end),
                    poly: None,
                })
            }
            "poly" => {
                let (env, env_params) = self.envelope("modulated")?;
                let mut allowed = env_params.to_vec();
                allowed.extend(["k", "beta0", "a*"]);
                self.check_params(&allowed)?;
                let k = self.param("k", 6.0);
                if !(k >= 2.0 && k.fract() == 0.0 && k <= 1e4) {
                    return Err(Error::InvalidParameter(format!("k must be an even integer, got {k}")).into());
                }
                let k = k as usize;
                let a: Vec<f64> = (1..=k / 2)
                    .map(|j| {
                        let default = if 2 * j == k { 4.0 / PI } else { 0.0 };
                        self.param(&format!("a{}", 2 * j), default)
                    })
                    .collect();
                if let Some(bad) = self.params.keys().find(|name| {
                    name.strip_prefix('a')
                        .and_then(|n| n.parse::<usize>().ok())
                        .is_some_and(|n| n % 2 == 1 || n > k || n == 0)
                }) {
                    return Err(Error::InvalidParameter(format!("coefficient {bad} does not exist for k = {k}")).into());
                }
                let fam = PolyFamily::new(k, a, self.param("beta0", 1.0), PolyConvention::PerB)?;
                Ok(Problem {
                    name: "poly",
                    chi: Box::new(poly_chi(&fam, env.clone())),
                    env,
                    t_end: self.t_end.unwrap_or(4.0),
                    poly: Some(fam),
                })
            }
            "cubic" => {
                if self.envelope.is_some() {
                    return Err(malformed("the cubic family fixes its envelope to b_x"));
                }
                let fam = self.cubic(PI / 2.0, 1.8)?;
                Ok(Problem {
                    name: "cubic",
                    chi: Box::new(cubic_chi(fam)),
                    env: Arc::new(fam.envelope()),
                    t_end: fam.t_final,
                    poly: None,
                })
            }
            "saturation" => {
                let (env, env_params) = self.envelope("modulated")?;
                self.check_params(env_params)?;
                Ok(Problem {
                    name: "saturation",
                    chi: Box::new(saturating(env.clone(), Eta::Plus)),
                    env,
                    t_end: self.t_end.unwrap_or(4.0),
                    poly: None,
                })
            }
            other => Err(malformed(format!("unknown family {other:?}"))),
        }
    }
}

/// A resolved family on its envelope.
pub struct Problem {
    pub name: &'static str,
    pub chi: Box<dyn ChiAnsatz>,
    pub env: Arc<dyn Envelope>,
    pub t_end: f64,
    pub poly: Option<PolyFamily>,
}
