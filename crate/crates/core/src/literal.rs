//! Complex literals of the form `0.5+1.2i`, `-0.3-0.7i`, `2`, `1e-3i`.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Syntax {
        pos: 0,
        msg: format!("bad complex literal `{text}`"),
    };
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent or the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_text, im_text) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im = match im_text {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re_text.parse::<f64>().map_err(|_| bad())?;
        Ok(C64::new(re, im))
    } else {
        Ok(C64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

/// Inverse of [`parse_complex`] using shortest round-trip floats.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        return format!("{}", z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}
