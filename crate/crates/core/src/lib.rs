//! Harmonic analysis of radial functions on real hyperbolic space.
//!
//! The crate provides the spherical Fourier transform, the complex-order
//! spherical multipliers `m^alpha_t`, spherical means, lacunary maximal
//! operators and a harness that checks their quantitative estimates
//! numerically. All algorithms are generic over the scalar type through
//! [`num::Real`]; the aliases below fix `f64`.

// Validation is written as `!(x > y)` so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod num;
pub mod operators;
pub mod quadrature;
pub mod specfun;
pub mod symbols;
pub mod transform;

pub use error::{Error, NumericalFailure, Result};
pub use geometry::Dimension;

pub type HyperPoint64 = geometry::HyperPoint<f64>;
pub type PhiTable64 = specfun::PhiTable<f64>;
pub type RadialGrid64 = transform::RadialGrid<f64>;
pub type SpectralGrid64 = transform::SpectralGrid<f64>;
pub type RadialFunction64 = transform::RadialFunction<f64>;
pub type SpectralFunction64 = transform::SpectralFunction<f64>;
pub type SphericalTransform64 = transform::SphericalTransform<f64>;
pub type MultiplierSpec64 = symbols::MultiplierSpec<f64>;
pub type SymbolTable64 = symbols::SymbolTable<f64>;
pub type TestFamily64 = operators::TestFamily<f64>;
pub type LacunarySet64 = operators::LacunarySet<f64>;
pub type LacunaryMaximal64 = operators::LacunaryMaximal<f64>;
pub type KernelProfile64 = operators::KernelProfile<f64>;
pub type OperatorDescriptor64 = operators::OperatorDescriptor<f64>;
