use crate::error::{Error, Result};
use crate::scalar::Real;

// Stirling series for ln Γ, used once the argument has been shifted past
// STIRLING_MIN. Coefficients are B_2k / (2k (2k-1)).
const STIRLING_MIN: f64 = 12.0;
const STIRLING_COEF: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// Gamma function for positive real arguments.
///
/// Positive integers up to 171 are evaluated as exact factorial products so
/// that ratios such as `Γ(n+1)/Γ(n)` reduce to `n` without rounding noise.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gamma requires a finite positive argument, got {x}"
        )));
    }
    if x.fract() == T::zero() && x <= T::lit(171.0) {
        let n = x.to_usize().unwrap_or(0);
        let mut acc = T::one();
        for k in 2..n {
            acc = acc * T::from_count(k);
        }
        return Ok(acc);
    }
    if x < T::lit(0.5) {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        let other = positive_branch(T::one() - x);
        return Ok(pi / ((pi * x).sin() * other));
    }
    let value = positive_branch(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!("gamma({x}) overflows")))
    }
}

fn positive_branch<T: Real>(x: T) -> T {
    // Γ(x) = Γ(x + m) / (x (x+1) ... (x+m-1))
    let mut shifted = x;
    let mut divisor = T::one();
    while shifted < T::lit(STIRLING_MIN) {
        divisor = divisor * shifted;
        shifted = shifted + T::one();
    }
    stirling(shifted) / divisor
}

fn stirling<T: Real>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    let mut pow = inv;
    for &c in STIRLING_COEF.iter() {
        series = series + T::lit(c) * pow;
        pow = pow * inv2;
    }
    let sqrt_two_pi = (T::lit(2.0) * T::PI()).sqrt();
    // x^(x-1/2) split in two halves so large arguments do not overflow early.
    let half = x.powf((x - T::lit(0.5)) / T::lit(2.0));
    sqrt_two_pi * half * (half * (series - x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(rel(gamma(0.5).unwrap(), sqrt_pi) < 1e-14);
        assert!(rel(gamma(1.5).unwrap(), sqrt_pi / 2.0) < 1e-14);
    }

    #[test]
    fn matches_high_precision_reference() {
        // reference values from a 50-digit evaluation
        let cases = [
            (0.1, 9.513_507_698_668_732),
            (0.3, 2.991_568_987_687_590_6),
            (1.9, 0.961_765_831_907_387_4),
            (2.5, 1.329_340_388_179_137),
            (7.25, 1_155.381_013_919_989_7),
            (30.7, 9.528_117_499_079_501e31),
            (170.5, 5.562_092_414_56e305),
        ];
        for (x, want) in cases {
            let got = gamma(x).unwrap();
            assert!(rel(got, want) < 1e-12, "gamma({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn recurrence_on_grid() {
        for i in 1..=50 {
            let x = i as f64 / 10.0;
            let g1 = gamma(x + 1.0).unwrap();
            let g0 = gamma(x).unwrap();
            assert!((g1 - x * g0).abs() <= 1e-10 * g1, "x = {x}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-1.5), Err(Error::Domain(_))));
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = gamma(0.5_f32).unwrap();
        assert!((g - std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }
}
