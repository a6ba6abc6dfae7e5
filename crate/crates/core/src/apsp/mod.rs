pub mod dense;
pub mod sparse;
pub mod decr_exact;
pub mod decr_approx;
pub mod las_vegas;
