//! Jittered initial-vector ensembles, α scans and the headerless CSV
//! matrix format.

mod csv;
mod initials;
mod scan;

pub use csv::{
    format_real, matrix_file_name, parse_matrix_file_name, read_initials_csv, read_matrix_csv, write_initials_csv,
    write_matrix_csv, MatrixMeta,
};
pub(crate) use initials::mix_seed;
pub use initials::{generate_initials, run_seed};
pub use scan::{run_ensemble, run_ensemble_from, EnsembleConfig, EnsembleMatrix, Observable};
