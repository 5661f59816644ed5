//! Operators acting on radial functions: spherical means, multipliers,
//! lacunary and Hardy-Littlewood maximal functions, and the scalar bounds
//! used to check them.
//!
//! Every operator acts on radial inputs only, so empirical norms computed
//! here are lower bounds for the true operator norms.

pub mod bounds;
pub mod family;
pub mod maximal;
pub mod means;
pub mod region;

pub use bounds::{
    conjugate, cz_tail_integrals, empirical_operator_norm, empirical_operator_norms, global_series_terms,
    global_summability, i3_sup, kunze_stein_ratios, kunze_stein_rhs, kunze_stein_rhs_profile, loglog_slope,
    OperatorDescriptor,
};
pub use family::{FamilyMember, MemberSpec, TestFamily};
pub use maximal::{hl_maximal, lacunary_maximal, local_global_parts, LacunaryMaximal, LacunarySet, MaximalParts};
pub use means::{
    apply_multiplier, convolve_profile, convolve_profile_at, direct_radial_convolution, spherical_mean, symbol_row,
    symbol_rows, KernelProfile, Route, SphereRule,
};
