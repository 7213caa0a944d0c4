//! Text syntax for complex parameters: `a+bi`, `a-bi`, `bi`, `a`, where each
//! of `a`, `b` is a decimal or a rational `p/q`.

use crate::error::{Error, Result};
use crate::sphere::Complex;

/// Parses a real number, accepting `p/q`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse number `{s}`"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_complex(s: &str) -> Result<Complex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidParameter(format!("cannot parse complex number `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(parse_real(&t)?, 0.0));
    };
    // last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s)?,
    };
    Ok(Complex::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::format_complex;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("0.2+1.592i").unwrap(), c(0.2, 1.592));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("4i").unwrap(), c(0.0, 4.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse_complex("-3").unwrap(), c(-3.0, 0.0));
        assert_eq!(parse_complex("5/6").unwrap(), c(5.0 / 6.0, 0.0));
        assert_eq!(parse_complex("1/2+3/4i").unwrap(), c(0.5, 0.75));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "abc", "1+", "1/0", "2j", "1+2i+3i", "nan", "inf"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn round_trips_the_formatter() {
        for z in [c(0.2, 1.592), c(-1.0, -0.5), c(3.0, 0.0), c(1e-20, -7e10)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
