//! Complex numbers on the command line: `a+bi` or `[a,b]`.

use rtcalc_core::C64;

/// Parses `0.4`, `0.4+0.2i`, `-1e-3-2i`, `2i`, `-i` or `[0.4, 0.2]`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let bad = || format!("cannot parse {s:?} as a complex number (use a+bi or [a,b])");
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let re = parts[0].parse::<f64>().map_err(|_| bad())?;
        let im = parts[1].parse::<f64>().map_err(|_| bad())?;
        return Ok(C64::new(re, im));
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// `a+bi` with shortest round-trip digits.
pub fn format_complex(z: C64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
