use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Principal-branch power `exp(p · Log z)` with `arg z ∈ (−π, π]`.
///
/// Integer exponents are evaluated by repeated multiplication, `p = 1/2`
/// by the principal square root. `0^p = 0` for `p > 0`.
pub fn principal_power<T: Real>(z: Complex<T>, p: T) -> Result<Complex<T>> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("non-finite exponent {p}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite(format!("power of non-finite base {z}")));
    }
    if z.re == T::zero() && z.im == T::zero() {
        return if p > T::zero() {
            Ok(Complex::new(T::zero(), T::zero()))
        } else {
            Err(Error::Domain(format!("0 raised to non-positive power {p}")))
        };
    }
    if p == T::one() {
        return Ok(z);
    }
    // -0.0 imaginary parts would select arg = -π; fold onto the +π side.
    let z = if z.im == T::zero() {
        Complex::new(z.re, T::zero())
    } else {
        z
    };
    let out = if p.fract() == T::zero() && p.abs() <= T::lit(64.0) {
        let n = p.to_i32().unwrap_or(0);
        z.powi(n)
    } else if p == T::lit(0.5) {
        z.sqrt()
    } else {
        (z.ln() * p).exp()
    };
    if out.re.is_finite() && out.im.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite(format!("({z})^{p}")))
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2<T: Real>(v: &[Complex<T>]) -> T {
    // scaled accumulation avoids overflow for large iterates
    let scale = modulus_max(v);
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let sum = v.iter().fold(T::zero(), |acc, z| {
        let a = z.re / scale;
        let b = z.im / scale;
        acc + a * a + b * b
    });
    scale * sum.sqrt()
}

/// Largest component modulus (the infinity norm over moduli).
pub fn modulus_max<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| {
        let m = z.norm();
        if m.is_nan() {
            T::nan()
        } else {
            acc.max(m)
        }
    })
}

/// Parses `re`, `imi`, or `re±imi` (e.g. `179.5-1i`, `2e-3+4i`, `-i`).
pub fn parse_complex(s: &str) -> Result<Complex<f64>> {
    let s = s.trim();
    let err = || Error::Parse {
        source_name: "complex literal".into(),
        line: 1,
        message: format!("cannot parse {s:?} as a complex number"),
    };
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| Complex::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| err())?;
            let im = parse_im(&body[k..])?;
            Ok(Complex::new(re, im))
        }
        None => Ok(Complex::new(0.0, parse_im(body)?)),
    }
}

/// Comma-separated list of complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex<f64>>> {
    s.split(',').map(parse_complex).collect()
}

/// Inverse of [`parse_complex`]; omits a zero imaginary part.
pub fn format_complex(z: Complex<f64>) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
