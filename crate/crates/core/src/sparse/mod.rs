//! Sparse SPD storage, products, file I/O and generators.

mod csr;
pub mod generate;
pub mod mtx;

pub use csr::{CsrMatrix, LinearOperator};
pub use generate::{gen_gmrf_grid, gen_pentadiagonal};
pub use mtx::{load_matrix_market, read_matrix_market, write_matrix_market, MmSymmetry};
