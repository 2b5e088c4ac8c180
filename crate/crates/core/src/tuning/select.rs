use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lle::LyapunovProfile;

/// Thresholds for calling an α well behaved.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionCriteria {
    pub min_negative_fraction: f64,
    pub max_transient_fraction: f64,
    pub max_positive_excursion: f64,
    /// Trailing share of windows averaged into `mean_late_lambda1`.
    pub late_window_fraction: f64,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        Self {
            min_negative_fraction: 0.8,
            max_transient_fraction: 0.3,
            max_positive_excursion: 0.5,
            late_window_fraction: 0.5,
        }
    }
}

impl SelectionCriteria {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if !unit(self.min_negative_fraction) || !unit(self.max_transient_fraction) || !unit(self.late_window_fraction) {
            return Err(Error::InvalidParams(
                "min_negative_fraction, max_transient_fraction and late_window_fraction must lie in (0, 1]".into(),
            ));
        }
        if !(self.max_positive_excursion > 0.0 && self.max_positive_excursion.is_finite()) {
            return Err(Error::InvalidParams("max_positive_excursion must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileFeatures {
    /// Share of windows with `λ₁ < 0`.
    pub negative_fraction: f64,
    /// First window index from which `λ₁ < 0` holds to the end; the profile
    /// length if the tail is never all negative.
    pub transient_end_index: usize,
    /// `max(0, max λ₁)`.
    pub max_excursion: f64,
    pub mean_late_lambda1: f64,
    pub len: usize,
}

pub fn features_from_lambda1(lambda1: &[f64], late_window_fraction: f64) -> Result<ProfileFeatures> {
    let n = lambda1.len();
    if n == 0 {
        return Err(Error::InsufficientData("empty profile".into()));
    }
    let negative = lambda1.iter().filter(|&&v| v < 0.0).count();
    let transient_end_index = lambda1.iter().rposition(|&v| !(v < 0.0)).map_or(0, |i| i + 1);
    let max_excursion = lambda1.iter().fold(0.0f64, |m, &v| m.max(v));
    let late = ((late_window_fraction * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    let mean_late_lambda1 = lambda1[n - late..].iter().sum::<f64>() / late as f64;
    Ok(ProfileFeatures {
        negative_fraction: negative as f64 / n as f64,
        transient_end_index,
        max_excursion,
        mean_late_lambda1,
        len: n,
    })
}

pub fn profile_features(p: &LyapunovProfile<f64>, late_window_fraction: f64) -> Result<ProfileFeatures> {
    features_from_lambda1(&p.lambda1(), late_window_fraction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    WellBehaved,
    Poor,
}

pub fn classify_alpha(f: &ProfileFeatures, criteria: &SelectionCriteria) -> Classification {
    let ok = f.negative_fraction >= criteria.min_negative_fraction
        && f.transient_end_index as f64 <= criteria.max_transient_fraction * f.len as f64
        && f.max_excursion <= criteria.max_positive_excursion;
    if ok {
        Classification::WellBehaved
    } else {
        Classification::Poor
    }
}

/// One α with the features of every profile computed for it (for example
/// both observables of both cases).
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaCandidate {
    pub alpha: f64,
    pub profiles: Vec<ProfileFeatures>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub alpha: f64,
    /// Worst value over the candidate's profiles.
    pub negative_fraction: f64,
    /// Worst value over the candidate's profiles.
    pub transient_end_index: usize,
    /// Worst value over the candidate's profiles.
    pub max_excursion: f64,
    /// Average over the candidate's profiles.
    pub mean_late_lambda1: f64,
    pub profiles: usize,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub per_alpha: Vec<AlphaRecord>,
    pub selected_alpha: f64,
    /// True when no α was well behaved and the fallback rule picked one.
    pub fallback: bool,
    pub justification: String,
    pub observables: Vec<String>,
    pub case_labels: Vec<String>,
    pub criteria: SelectionCriteria,
}

fn record(c: &AlphaCandidate, criteria: &SelectionCriteria) -> Result<AlphaRecord> {
    if c.profiles.is_empty() {
        return Err(Error::InsufficientData(format!("alpha {} has no profiles", c.alpha)));
    }
    let well = c
        .profiles
        .iter()
        .all(|f| classify_alpha(f, criteria) == Classification::WellBehaved);
    let n = c.profiles.len() as f64;
    Ok(AlphaRecord {
        alpha: c.alpha,
        negative_fraction: c
            .profiles
            .iter()
            .map(|f| f.negative_fraction)
            .fold(f64::INFINITY, f64::min),
        transient_end_index: c.profiles.iter().map(|f| f.transient_end_index).max().unwrap_or(0),
        max_excursion: c.profiles.iter().map(|f| f.max_excursion).fold(0.0, f64::max),
        mean_late_lambda1: c.profiles.iter().map(|f| f.mean_late_lambda1).sum::<f64>() / n,
        profiles: c.profiles.len(),
        classification: if well {
            Classification::WellBehaved
        } else {
            Classification::Poor
        },
    })
}

/// Picks the well-behaved α with the most negative late-window `λ₁`
/// (ties: shorter transient, then smaller α). An α counts as well behaved
/// only if every one of its profiles is. Without any well-behaved α the one
/// with the largest negative fraction is taken and the report is flagged.
pub fn select_alpha(
    candidates: &[AlphaCandidate],
    criteria: &SelectionCriteria,
    observables: Vec<String>,
    case_labels: Vec<String>,
) -> Result<TuningReport> {
    criteria.validate()?;
    if candidates.is_empty() {
        return Err(Error::InsufficientData("no alpha candidates to select from".into()));
    }
    let per_alpha = candidates
        .iter()
        .map(|c| record(c, criteria))
        .collect::<Result<Vec<_>>>()?;

    let well: Vec<&AlphaRecord> = per_alpha
        .iter()
        .filter(|r| r.classification == Classification::WellBehaved)
        .collect();
    let (chosen, fallback, justification) = if let Some(best) = well.iter().copied().min_by(|a, b| {
        a.mean_late_lambda1
            .total_cmp(&b.mean_late_lambda1)
            .then(a.transient_end_index.cmp(&b.transient_end_index))
            .then(a.alpha.total_cmp(&b.alpha))
    }) {
        let why = format!(
            "{} of {} alpha values are well behaved; alpha {} has the most negative mean late-window lambda1 ({:.4})",
            well.len(),
            per_alpha.len(),
            best.alpha,
            best.mean_late_lambda1
        );
        (best, false, why)
    } else {
        let best = per_alpha
            .iter()
            .min_by(|a, b| {
                b.negative_fraction
                    .total_cmp(&a.negative_fraction)
                    .then(a.mean_late_lambda1.total_cmp(&b.mean_late_lambda1))
                    .then(a.alpha.total_cmp(&b.alpha))
            })
            .expect("candidates is nonempty");
        let why = format!(
            "no alpha is well behaved; alpha {} has the largest negative-window fraction ({:.3})",
            best.alpha, best.negative_fraction
        );
        (best, true, why)
    };
    Ok(TuningReport {
        selected_alpha: chosen.alpha,
        fallback,
        justification,
        per_alpha: per_alpha.clone(),
        observables,
        case_labels,
        criteria: *criteria,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feats(l: &[f64]) -> ProfileFeatures {
        features_from_lambda1(l, 0.5).unwrap()
    }

    #[test]
    fn feature_examples() {
        let f = feats(&[-1.0; 6]);
        assert_eq!(
            (f.negative_fraction, f.transient_end_index, f.max_excursion),
            (1.0, 0, 0.0)
        );
        let f = feats(&[1.0; 6]);
        assert_eq!(
            (f.negative_fraction, f.transient_end_index, f.max_excursion),
            (0.0, 6, 1.0)
        );
        let f = feats(&[0.2, -0.1, -0.3, -0.3]);
        assert_eq!((f.negative_fraction, f.transient_end_index), (0.75, 1));
        assert_eq!(f.max_excursion, 0.2);
        assert_eq!(f.mean_late_lambda1, -0.3);
        assert!(features_from_lambda1(&[], 0.5).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = SelectionCriteria::default();
        assert_eq!(classify_alpha(&feats(&[-1.0; 6]), &c), Classification::WellBehaved);
        assert_eq!(classify_alpha(&feats(&[1.0; 6]), &c), Classification::Poor);
        assert_eq!(
            classify_alpha(&feats(&[0.2, -0.1, -0.3, -0.3]), &c),
            Classification::Poor
        );
    }

    #[test]
    fn selection_examples() {
        let c = SelectionCriteria::default();
        let cand = |alpha: f64, l: &[f64]| AlphaCandidate {
            alpha,
            profiles: vec![feats(l)],
        };
        let r = select_alpha(&[cand(2.0, &[-1.0; 4])], &c, vec![], vec![]).unwrap();
        assert_eq!(r.selected_alpha, 2.0);
        let r = select_alpha(&[cand(0.0, &[1.0; 4]), cand(3.0, &[-1.0; 4])], &c, vec![], vec![]).unwrap();
        assert_eq!((r.selected_alpha, r.fallback), (3.0, false));
        let r = select_alpha(&[cand(1.0, &[-1.0; 4]), cand(4.0, &[-2.0; 4])], &c, vec![], vec![]).unwrap();
        assert_eq!(r.selected_alpha, 4.0);
        let r = select_alpha(
            &[cand(1.0, &[1.0; 4]), cand(4.0, &[1.0, 1.0, 1.0, -1.0])],
            &c,
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!((r.selected_alpha, r.fallback), (4.0, true));
        assert!(select_alpha(&[], &c, vec![], vec![]).is_err());
    }

    #[test]
    fn criteria_validation() {
        let bad = SelectionCriteria {
            min_negative_fraction: 1.01,
            ..SelectionCriteria::default()
        };
        assert!(bad.validate().is_err());
        assert!(SelectionCriteria::default().validate().is_ok());
    }
}
