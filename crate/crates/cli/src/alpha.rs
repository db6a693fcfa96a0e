//! Parsing of angle expressions such as `pi/8`, `2pi/3`, `2*pi/3`, `π` or `0.75`.

use std::f64::consts::PI;

pub fn parse_alpha(text: &str) -> Result<f64, String> {
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase()
        .replace('π', "pi");
    if compact.is_empty() {
        return Err("empty angle expression".into());
    }

    let (numerator, denominator) = match compact.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (compact.as_str(), None),
    };
    let mut value = match numerator.strip_suffix("pi") {
        Some(coefficient) => {
            let coefficient = coefficient.strip_suffix('*').unwrap_or(coefficient);
            if coefficient.is_empty() {
                PI
            } else {
                number(coefficient, text)? * PI
            }
        }
        None => number(numerator, text)?,
    };
    if let Some(d) = denominator {
        let d = number(d, text)?;
        if d == 0.0 {
            return Err(format!("division by zero in `{text}`"));
        }
        value /= d;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not a finite angle"))
    }
}

fn number(part: &str, whole: &str) -> Result<f64, String> {
    part.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("cannot parse angle `{whole}` (expected e.g. pi/8, 2pi/3 or 0.5)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_forms() {
        assert_eq!(parse_alpha("pi/8").unwrap(), PI / 8.0);
        assert_eq!(parse_alpha("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_alpha("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_alpha("π").unwrap(), PI);
        assert_eq!(parse_alpha(" PI / 2 ").unwrap(), PI / 2.0);
        assert_eq!(parse_alpha("0.5").unwrap(), 0.5);
        assert_eq!(parse_alpha("3/4").unwrap(), 0.75);
    }

    #[test]
    fn malformed() {
        for bad in ["", "pi/0", "tau", "pi/", "2pi3", "1e999", "pi*"] {
            assert!(parse_alpha(bad).is_err(), "{bad}");
        }
    }
}
