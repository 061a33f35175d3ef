//! Numerical brute-force checks: spectra, random points of the fibre, the
//! symplectic slice, its form, and the isotropy algebra.

mod eigen;
pub mod linalg;
mod prng;
mod sample;
mod slice;

pub use eigen::{eig_hermitian, spectrum_deviation};
pub use prng::Prng;
pub use sample::{random_unitary, sample_KM_conjugate};
pub use slice::{
    isotropy_group_check, symplectic_form_check, tangent_slice_dims, tangent_slice_dims_at, u_basis, IsotropyReport,
    SliceBlock, SliceReport, RANK_TOL,
};
