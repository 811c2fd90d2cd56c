//! Classical seeds: X-variable and A-variable mutation as exact
//! rational/Laurent computation, principal coefficients and F-polynomials,
//! closed-form verification of the cyclic transformation, and the
//! octahedral-recursion oracle for the duality word on A-variables.

mod frac;
mod octahedron;
mod seeds;
mod tau;

pub use frac::FracLaurent;
pub use octahedron::{
    face_var_names, gamma_m, octahedral_dual_values, octahedral_expand,
    schutzenberger_trop_check, OctahedralTable,
};
pub use seeds::{a_apply_word_values, x_apply_word_values, APrinSeed, ASeed, XSeed};
pub use tau::{satellite_c_vectors, tau_word, verify_tau_closed_form, TauMatch, TauReport};
