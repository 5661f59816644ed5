//! Operators assembled from the transform, the symbols and the family.

use std::sync::{Arc, OnceLock};

use hyperlac::num::re;
use hyperlac::operators::bounds::global_symbol_sups;
use hyperlac::operators::{
    direct_radial_convolution, empirical_operator_norm, local_global_parts, LacunarySet, OperatorDescriptor, TestFamily,
};
use hyperlac::specfun::spherical_phi;
use hyperlac::transform::{lp_norm, spectral_convolve, RadialFunction, RadialGrid, SphericalTransform};
use hyperlac::{Dimension, SphericalTransform64};

fn dim2() -> Dimension {
    Dimension::new(2).unwrap()
}

fn default_n2() -> Arc<SphericalTransform64> {
    static TR: OnceLock<Arc<SphericalTransform64>> = OnceLock::new();
    Arc::clone(TR.get_or_init(|| Arc::new(SphericalTransform::default_for(dim2()).unwrap())))
}

#[test]
fn spectral_and_direct_convolution_agree_on_gaussians() {
    let tr = default_n2();
    let small = Arc::new(RadialGrid::new(dim2(), 12.0, 256).unwrap());
    let f = |r: f64| (-r * r).exp();
    let g = |r: f64| (-2.0 * r * r).exp();
    let spectral = spectral_convolve(
        &tr,
        &RadialFunction::from_fn(Arc::clone(tr.radial_grid()), f).unwrap(),
        &RadialFunction::from_fn(Arc::clone(tr.radial_grid()), g).unwrap(),
    )
    .unwrap()
    .value;
    let direct = direct_radial_convolution(
        &RadialFunction::from_fn(Arc::clone(&small), f).unwrap(),
        &RadialFunction::from_fn(Arc::clone(&small), g).unwrap(),
    )
    .unwrap();
    let scale = direct.sup();
    for &r in small.nodes().iter().filter(|&&r| r <= 6.0) {
        let err = (spectral.eval(r) - direct.eval(r)).norm();
        assert!(err <= 1e-3 * scale, "r = {r}: error {err} against {scale}");
    }
}

#[test]
fn identity_has_unit_norm_on_the_family() {
    let tr = default_n2();
    let family = TestFamily::default_for(&tr).unwrap();
    for p in [1.25, 2.0, 4.0] {
        let norm = empirical_operator_norm(&tr, &OperatorDescriptor::Identity, &family, p).unwrap();
        assert!((norm - 1.0).abs() < 1e-12, "p = {p}: {norm}");
    }
}

#[test]
fn spherical_mean_is_an_l2_contraction_below_phi_zero() {
    let tr = default_n2();
    let family = TestFamily::default_for(&tr).unwrap();
    for t in [0.5, 1.0, 3.0] {
        let bound = spherical_phi(re(0.0), t, dim2()).unwrap().re;
        let norm = empirical_operator_norm(&tr, &OperatorDescriptor::SphericalMean { t }, &family, 2.0).unwrap();
        assert!(norm <= bound * (1.0 + 1e-3), "t = {t}: {norm} > {bound}");
    }
}

#[test]
fn global_part_is_bounded_by_the_symbol_sums() {
    let tr = default_n2();
    let f = RadialFunction::from_fn(Arc::clone(tr.radial_grid()), |r| (-r * r).exp()).unwrap();
    let set = LacunarySet::new(6, 6).unwrap();
    let (_, global) = local_global_parts(&tr, re(0.0), &f, &set).unwrap();
    let ratio = lp_norm(&global, 2.0).unwrap() / lp_norm(&f, 2.0).unwrap();
    let bound: f64 = global_symbol_sups(&tr, re(0.0), 6).unwrap().iter().sum();
    assert!(ratio > 0.0 && ratio <= bound, "{ratio} > {bound}");
}
