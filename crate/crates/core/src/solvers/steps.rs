use num_complex::Complex;

use super::floor::{FloorGuard, ROOT_HIT_FLOOR};
use super::params::{Method, SolverParams};
use crate::error::{Error, Result};
use crate::numeric::{gamma, principal_power, CaputoOperator, Polynomial};
use crate::scalar::Real;

/// The INVM intermediate vectors `(y, z)`.
pub type Substeps<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// A polynomial bound to the scheme parameters, with the Caputo weights and
/// `Γ(β+1)` precomputed. `alpha` may be changed between steps.
#[derive(Clone, Debug)]
pub struct Scheme<T> {
    f: Polynomial<T>,
    inv_lead: Complex<T>,
    caputo: CaputoOperator<T>,
    gamma_beta1: T,
    inv_beta: T,
    alpha: T,
}

impl<T: Real> Scheme<T> {
    pub fn new(f: &Polynomial<T>, alpha: T, beta: T) -> Result<Self> {
        if f.degree() < 1 {
            return Err(Error::InvalidParams("polynomial must have degree at least 1".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams("alpha must be finite".into()));
        }
        let caputo = CaputoOperator::new(f, beta)?;
        Ok(Self {
            f: f.clone(),
            inv_lead: f.leading().inv(),
            caputo,
            gamma_beta1: gamma(beta + T::one())?,
            inv_beta: T::one() / beta,
            alpha,
        })
    }

    pub fn from_params(f: &Polynomial<T>, params: &SolverParams<T>) -> Result<Self> {
        Self::new(f, params.alpha, params.beta)
    }

    pub fn polynomial(&self) -> &Polynomial<T> {
        &self.f
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn set_alpha(&mut self, alpha: T) {
        self.alpha = alpha;
    }

    pub fn step(&self, method: Method, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        match method {
            Method::Wdk => self.wdk(x),
            Method::Nourein => self.nourein(x),
            Method::Zhm => self.zhm(x),
            Method::Invm => self.invm(x),
        }
    }

    fn check_len(&self, x: &[Complex<T>]) -> Result<()> {
        if x.len() != self.f.degree() {
            return Err(Error::InvalidParams(format!(
                "expected {} approximations for a degree-{} polynomial, got {}",
                self.f.degree(),
                self.f.degree(),
                x.len()
            )));
        }
        if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("approximation vector".into()));
        }
        Ok(())
    }

    /// `f(xᵢ) / (aₙ ∏_{j≠i} (xᵢ − cⱼ))` against an arbitrary set of centres.
    fn correction_against(
        &self,
        xi: Complex<T>,
        i: usize,
        centres: &[Complex<T>],
        guard: &FloorGuard<T>,
    ) -> Result<Complex<T>> {
        let mut denom = Complex::new(T::one(), T::zero());
        for (j, &cj) in centres.iter().enumerate() {
            if j != i {
                denom = denom * guard.guard(xi - cj, "approximation separation")?;
            }
        }
        let denom = guard.guard(denom, "correction denominator")?;
        Ok(self.f.eval(xi) * self.inv_lead / denom)
    }

    fn weierstrass(&self, x: &[Complex<T>], guard: &FloorGuard<T>) -> Result<Vec<Complex<T>>> {
        x.iter()
            .enumerate()
            .map(|(i, &xi)| self.correction_against(xi, i, x, guard))
            .collect()
    }

    pub fn wdk(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        let w = self.weierstrass(x, &guard)?;
        finish(x.iter().zip(&w).map(|(&xi, &wi)| xi - wi).collect())
    }

    pub fn nourein(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        let w = self.weierstrass(x, &guard)?;
        let mut out = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            let mut sum = Complex::new(T::one(), T::zero());
            for (j, (&xj, &wj)) in x.iter().zip(&w).enumerate() {
                if j != i {
                    sum = sum + wj / guard.guard(xi - wj - xj, "Nourein inner denominator")?;
                }
            }
            out.push(xi - w[i] / guard.guard(sum, "Nourein denominator")?);
        }
        finish(out)
    }

    pub fn zhm(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        let w = self.weierstrass(x, &guard)?;
        let one = Complex::new(T::one(), T::zero());
        let four = T::lit(4.0);
        let mut out = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            let mut spread = Complex::new(T::zero(), T::zero());
            let mut coupling = Complex::new(T::zero(), T::zero());
            for (j, (&xj, &wj)) in x.iter().zip(&w).enumerate() {
                if j == i {
                    continue;
                }
                spread = spread + (xi - xj);
                let d = guard.guard(xi - xj, "approximation separation")?
                    * guard.guard(xi - wj - xj, "ZHM inner denominator")?;
                coupling = coupling + wj / d;
            }
            let g = w[i] / guard.guard(spread, "ZHM spread")?;
            let k = one + g * g + w[i] * coupling * four;
            let root_k = principal_power(k, T::lit(0.5))?;
            let denom = guard.guard(one + g + root_k, "ZHM denominator")?;
            out.push(xi - w[i] / denom);
        }
        finish(out)
    }

    /// The `(Γ(β+1) f/Dᶜf)` ratio of one component.
    fn fractional_ratio(&self, j: usize, xj: Complex<T>, fx: Complex<T>) -> Result<Complex<T>> {
        let d = self.caputo.apply(xj)?;
        let q = fx / d * self.gamma_beta1;
        if d.norm() < T::lit(ROOT_HIT_FLOOR) || !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::DegenerateDerivative { index: j });
        }
        Ok(q)
    }

    /// The predictor `y` and corrector `z` vectors of the inverse scheme.
    pub fn invm_substeps(&self, x: &[Complex<T>]) -> Result<Substeps<T>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        self.substeps_guarded(x, &guard)
    }

    fn substeps_guarded(&self, x: &[Complex<T>], guard: &FloorGuard<T>) -> Result<Substeps<T>> {
        let one = Complex::new(T::one(), T::zero());
        let two = T::lit(2.0);
        let mut ys = Vec::with_capacity(x.len());
        let mut zs = Vec::with_capacity(x.len());
        for (j, &xj) in x.iter().enumerate() {
            let fx = self.f.eval(xj);
            let q = self.fractional_ratio(j, xj, fx)?;
            let y = xj - principal_power(q, self.inv_beta)?;
            let fy = self.f.eval(y);
            let z = if fy.norm() < T::lit(ROOT_HIT_FLOOR) {
                y
            } else {
                let u = fx / fy;
                let damp = guard.guard(one + u * self.alpha, "1 + alpha·u")?;
                let bracket = q * (one + u * two / damp);
                y - principal_power(bracket, self.inv_beta)?
            };
            if !(y.re.is_finite() && y.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("sub-step of component {j}")));
            }
            ys.push(y);
            zs.push(z);
        }
        Ok((ys, zs))
    }

    /// Approximations closer to zero than the floor are moved out to it, since
    /// the inverse update divides by them.
    fn shift_off_zero(&self, x: &[Complex<T>], guard: &FloorGuard<T>) -> Result<Vec<Complex<T>>> {
        x.iter().map(|&xi| guard.guard(xi, "approximation near zero")).collect()
    }

    /// Inverse update in the compact form `xᵢ − 𝒫*/(1 + 𝒫*/xᵢ)` with
    /// `𝒫* = f(xᵢ)/(aₙ ∏_{j≠i}(xᵢ − zⱼ))`.
    pub fn invm(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        let x = self.shift_off_zero(x, &guard)?;
        let (_, z) = self.substeps_guarded(&x, &guard)?;
        let one = Complex::new(T::one(), T::zero());
        let mut out = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            let p = self.correction_against(xi, i, &z, &guard)?;
            let denom = guard.guard(one + p / xi, "1 + P*/x")?;
            out.push(xi - p / denom);
        }
        finish(out)
    }

    /// Same update written as the single rational expression
    /// `xᵢ² ∏(xᵢ − zⱼ) / (xᵢ ∏(xᵢ − zⱼ) + f(xᵢ)/aₙ)`.
    pub fn invm_full_form(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(x)?;
        let guard = FloorGuard::for_state(x);
        let x = self.shift_off_zero(x, &guard)?;
        let (_, z) = self.substeps_guarded(&x, &guard)?;
        let mut out = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            let mut prod = Complex::new(T::one(), T::zero());
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    prod = prod * guard.guard(xi - zj, "approximation separation")?;
                }
            }
            let num = xi * xi * prod;
            let den = guard.guard(xi * prod + self.f.eval(xi) * self.inv_lead, "rational denominator")?;
            out.push(num / den);
        }
        finish(out)
    }
}

fn finish<T: Real>(out: Vec<Complex<T>>) -> Result<Vec<Complex<T>>> {
    if out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(out)
    } else {
        Err(Error::NonFinite("updated approximation".into()))
    }
}

pub fn wdk_step<T: Real>(f: &Polynomial<T>, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Scheme::new(f, T::zero(), T::one())?.wdk(x)
}

pub fn nourein_step<T: Real>(f: &Polynomial<T>, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Scheme::new(f, T::zero(), T::one())?.nourein(x)
}

pub fn zhm_step<T: Real>(f: &Polynomial<T>, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Scheme::new(f, T::zero(), T::one())?.zhm(x)
}

pub fn invm_substeps<T: Real>(f: &Polynomial<T>, x: &[Complex<T>], params: &SolverParams<T>) -> Result<Substeps<T>> {
    Scheme::from_params(f, params)?.invm_substeps(x)
}

pub fn invm_step<T: Real>(f: &Polynomial<T>, x: &[Complex<T>], params: &SolverParams<T>) -> Result<Vec<Complex<T>>> {
    Scheme::from_params(f, params)?.invm(x)
}

pub fn invm_step_full_form<T: Real>(
    f: &Polynomial<T>,
    x: &[Complex<T>],
    params: &SolverParams<T>,
) -> Result<Vec<Complex<T>>> {
    Scheme::from_params(f, params)?.invm_full_form(x)
}
