//! Angles as plain radians or multiples/fractions of π: `1.2`, `pi`,
//! `-pi/4`, `pi/2.1`, `3pi/4`, `3*pi/4`. Plain fractions such as `1/2` are
//! accepted too, so the same parser serves ordinary parameter values.

use std::f64::consts::PI;

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let text = s.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || format!("cannot parse angle {s:?}");
    if let Ok(x) = text.parse::<f64>() {
        return x.is_finite().then_some(x).ok_or_else(bad);
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, text.as_str()),
    };
    let Some(at) = body.find("pi") else {
        let (num, den) = body.split_once('/').ok_or_else(bad)?;
        let (num, den) = (num.trim().parse::<f64>(), den.trim().parse::<f64>());
        let x = sign * num.map_err(|_| bad())? / den.map_err(|_| bad())?;
        return x.is_finite().then_some(x).ok_or_else(bad);
    };
    let coef = body[..at].trim().trim_end_matches('*').trim();
    let coef = if coef.is_empty() {
        1.0
    } else {
        coef.parse::<f64>().map_err(|_| bad())?
    };
    let rest = body[at + 2..].trim();
    let den = match rest.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    let x = sign * coef * PI / den;
    if x.is_finite() && den != 0.0 {
        Ok(x)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2.1").unwrap(), PI / 2.1);
        assert_eq!(parse_angle(" -pi/4 ").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("π/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("1/2").unwrap(), 0.5);
        assert_eq!(parse_angle("-3/4").unwrap(), -0.75);
        for bad in ["", "pie", "pi/0", "pi/x", "2pi3", "inf", "1/0", "1/", "/2"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
