use serde::{Deserialize, Serialize};

use super::params::LleParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Piecewise-affine fit of `y(h)`. With two segments the first covers
/// `h ≤ h_split`, the second `h > h_split`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit<T> {
    pub lambda1: T,
    pub intercept1: T,
    pub lambda2: Option<T>,
    pub intercept2: Option<T>,
    pub h_split: Option<usize>,
    pub sse: T,
    pub segments: u8,
}

impl<T: Real> SlopeFit<T> {
    /// Value of the fitted model at `h`.
    pub fn predict(&self, h: usize) -> T {
        let x = T::from_count(h);
        match (self.h_split, self.lambda2, self.intercept2) {
            (Some(s), Some(l2), Some(c2)) if h > s => c2 + l2 * x,
            _ => self.intercept1 + self.lambda1 * x,
        }
    }
}

/// Least-squares line through `pts`: (slope, intercept, sse).
fn line<T: Real>(pts: &[(usize, T)]) -> (T, T, T) {
    let n = T::from_count(pts.len());
    let mx = pts.iter().fold(T::zero(), |a, p| a + T::from_count(p.0)) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for &(h, y) in pts {
        let dx = T::from_count(h) - mx;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (y - my);
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let sse = pts.iter().fold(T::zero(), |a, &(h, y)| {
        let r = y - (icpt + slope * T::from_count(h));
        a + r * r
    });
    (slope, icpt, sse)
}

/// Best one- or two-segment least-squares fit.
///
/// Two segments need at least two points each and must cut the one-segment
/// SSE by `min_two_segment_gain` (relative) and by more than a rounding-level
/// tolerance. Among near-equal splits the later one wins.
pub fn fit_best_slope<T: Real>(points: &[(usize, T)], params: &LleParams<T>) -> Result<SlopeFit<T>> {
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| p.0);
    pts.dedup_by_key(|p| p.0);
    if pts.len() < 2 || pts.len() != points.len() {
        return Err(Error::InsufficientData(
            "slope fit needs at least two points with distinct horizons".into(),
        ));
    }
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::NonFinite("log-error curve".into()));
    }
    let (l1, c1, sse1) = line(&pts);
    let one = SlopeFit {
        lambda1: l1,
        intercept1: c1,
        lambda2: None,
        intercept2: None,
        h_split: None,
        sse: sse1,
        segments: 1,
    };

    let scale = pts.iter().fold(T::one(), |a, p| a + p.1 * p.1);
    let eps = T::lit(1e-12) * scale;
    let mut best: Option<SlopeFit<T>> = None;
    for m in 2..=pts.len().saturating_sub(2) {
        let (a, ca, sa) = line(&pts[..m]);
        let (b, cb, sb) = line(&pts[m..]);
        let cand = SlopeFit {
            lambda1: a,
            intercept1: ca,
            lambda2: Some(b),
            intercept2: Some(cb),
            h_split: Some(pts[m - 1].0),
            sse: sa + sb,
            segments: 2,
        };
        if best.is_none_or(|bf| cand.sse <= bf.sse + eps) {
            best = Some(cand);
        }
    }
    match best {
        Some(two) if two.sse < (T::one() - params.min_two_segment_gain) * sse1 && sse1 - two.sse > eps => Ok(two),
        _ => Ok(one),
    }
}
