//! Local largest Lyapunov exponents from observable matrices.
//!
//! Each window of `L = look_back + h_max` consecutive iterations yields one
//! micro-series per run. A kNN regressor forecasts the value `h` steps past
//! the look-back block; the log of the geometric-mean forecast error grows
//! roughly linearly in `h`, and the slope of the first segment of a one- or
//! two-segment affine fit is taken as `λ₁` for that window.

mod fit;
mod knn;
mod params;
mod profile;

pub use fit::{fit_best_slope, SlopeFit};
pub use knn::{knn_gmae, knn_gmae_with_split, log_gmae_curve, make_batch, train_test_split};
pub use params::LleParams;
pub use profile::{
    lyapunov_profile, profile_file_name, profile_matrix, read_profile_csv, write_curve_plot_csv, write_profile_csv,
    write_window_plot_csv, LyapunovProfile, ProfileEntry,
};
