use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::complex::{parse_complex_list, principal_power};
use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Univariate polynomial with complex coefficients, lowest power first.
///
/// Trailing zero coefficients are trimmed on construction, so
/// `coeffs().len() == degree() + 1` always holds. Derivatives may produce
/// constants (degree 0); solvers reject anything below degree 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + serde::de::DeserializeOwned")]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Domain("polynomial coefficients must be finite".into()));
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(T::zero(), T::zero()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex::new(T::zero(), T::zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                coeffs: vec![Complex::new(T::zero(), T::zero())],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * T::from_count(n))
            .collect();
        Self { coeffs }
    }
}

impl Polynomial<f64> {
    /// Parses a comma-separated coefficient list, lowest degree first
    /// (`-1,0,0,1` is x³ − 1).
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_complex_list(s)?)
    }
}

pub fn poly_eval<T: Real>(f: &Polynomial<T>, x: Complex<T>) -> Complex<T> {
    f.eval(x)
}

pub fn classical_derivative<T: Real>(f: &Polynomial<T>) -> Polynomial<T> {
    f.derivative()
}

/// Caputo derivative of order `beta ∈ (0, 1]` of a fixed polynomial.
///
/// Applies `D[xⁿ] = Γ(n+1)/Γ(n+1−β) · x^{n−β}` term by term with the
/// principal branch for the fractional power. The Gamma ratios are computed
/// once at construction.
#[derive(Clone, Debug)]
pub struct CaputoOperator<T> {
    beta: T,
    // (power n, coefficient · Γ(n+1)/Γ(n+1−β))
    terms: Vec<(usize, Complex<T>)>,
}

impl<T: Real> CaputoOperator<T> {
    pub fn new(f: &Polynomial<T>, beta: T) -> Result<Self> {
        if !(beta > T::zero() && beta <= T::one()) {
            return Err(Error::Domain(format!(
                "fractional order must lie in (0, 1], got {beta}"
            )));
        }
        let mut terms = Vec::with_capacity(f.degree());
        for (n, &c) in f.coeffs().iter().enumerate().skip(1) {
            if c.re == T::zero() && c.im == T::zero() {
                continue;
            }
            let np1 = T::from_count(n + 1);
            let ratio = gamma(np1)? / gamma(np1 - beta)?;
            terms.push((n, c * ratio));
        }
        Ok(Self { beta, terms })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn apply(&self, x: Complex<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(n, w) in &self.terms {
            let exponent = T::from_count(n) - self.beta;
            let power = if exponent == T::zero() {
                Complex::new(T::one(), T::zero())
            } else {
                principal_power(x, exponent)?
            };
            acc = acc + w * power;
        }
        if acc.re.is_finite() && acc.im.is_finite() {
            Ok(acc)
        } else {
            Err(Error::NonFinite(format!("Caputo derivative at {x}")))
        }
    }
}

pub fn caputo_derivative<T: Real>(f: &Polynomial<T>, beta: T, x: Complex<T>) -> Result<Complex<T>> {
    CaputoOperator::new(f, beta)?.apply(x)
}
