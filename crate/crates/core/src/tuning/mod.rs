//! α classification from Lyapunov profiles and an online adaptive-α solver.

mod adaptive;
mod select;

pub use adaptive::{adaptive_solve, trailing_slope, AdaptiveOutcome, AlphaSwitch, Watch};
pub use select::{
    classify_alpha, features_from_lambda1, profile_features, select_alpha, AlphaCandidate, AlphaRecord, Classification,
    ProfileFeatures, SelectionCriteria, TuningReport,
};
