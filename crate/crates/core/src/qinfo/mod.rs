//! Wigner–Yanase skew information, the W-matrix of one emitter, local
//! quantum uncertainty and the event detectors built on them.

mod events;
mod operator;
mod wmatrix;
mod wysi;

pub use events::{
    detect_double_sudden_change, locate_extrema, ExtremaReport, SuddenChangeReport, ROOT_TOLERANCE,
    TIE_TOLERANCE,
};
pub use operator::{
    build_jx, build_jy, build_jz, local_sigma_matrix_elements, Axis, LocalPaulis, SymmetricOperator,
};
pub use wmatrix::{lqu, symmetric_eigenvalues, w_matrix, WMatrix};
pub use wysi::{variance, variance_local, wysi_local, wysi_sigma_z_local, wysi_symmetric};
