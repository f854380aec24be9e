//! Angle arguments accept either plain decimals or `pi`-expressions:
//! `pi`, `-pi/2`, `2pi/3`, `0.5pi`.

use std::f64::consts::PI;

pub fn parse_angle(raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let Some(at) = s.find("pi") else {
        return s
            .parse::<f64>()
            .map_err(|_| format!("cannot parse angle '{raw}'"));
    };
    let (before, rest) = (&s[..at], &s[at + 2..]);
    let coeff = match before {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("cannot parse coefficient in '{raw}'"))?,
    };
    let divisor = match rest {
        "" => 1.0,
        d if d.starts_with('/') => {
            let v = d[1..]
                .parse::<f64>()
                .map_err(|_| format!("cannot parse divisor in '{raw}'"))?;
            if v == 0.0 {
                return Err(format!("zero divisor in '{raw}'"));
            }
            v
        }
        _ => return Err(format!("unexpected trailing text in '{raw}'")),
    };
    Ok(coeff * PI / divisor)
}

/// Comma-separated list of angle expressions.
pub fn parse_angle_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(parse_angle).collect()
}
