//! Scalar quantities bounding the maximal operators: the Kunze-Stein
//! weighted integral, the summability of the global part, the `I_3` sum of
//! the local part, the Calderon-Zygmund tail integrals and empirical
//! operator norms.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::num::{re, Cplx, Real};
use crate::quadrature::{GaussJacobi, GaussLegendre};
use crate::symbols::{check_alpha, heat_symbol, MultiplierSpec, SymbolTable};
use crate::transform::{lp_norm, spectral_convolve, RadialFunction, SphericalTransform};

use super::family::TestFamily;
use super::maximal::{LacunaryMaximal, LacunarySet};
use super::means::{apply_multiplier, spherical_mean, symbol_rows, KernelProfile, Route};

/// Conjugate exponent `p / (p - 1)`, infinite at `p = 1`.
pub fn conjugate<T: Real>(p: T) -> T {
    if p == T::one() {
        T::infinity()
    } else if p.is_infinite() {
        T::one()
    } else {
        p / (p - T::one())
    }
}

fn check_kunze_stein_p<T: Real>(p: T) -> Result<()> {
    if p > T::one() && p < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "Kunze-Stein exponent must lie in (1, 2), got {p}"
        )))
    }
}

/// `int e^{-(n-1) r / p'} kappa(r) sigma_{n-1} sinh^{n-1} r dr` for a
/// nonnegative kernel sampled on its grid.
pub fn kunze_stein_rhs<T: Real>(kappa: &RadialFunction<T>, p: T) -> Result<T> {
    check_kunze_stein_p(p)?;
    if let Some(v) = kappa.values().iter().find(|v| v.re < T::zero() || v.im != T::zero()) {
        return Err(Error::Domain(format!(
            "Kunze-Stein kernel must be nonnegative, found {v}"
        )));
    }
    let grid = kappa.grid();
    let rate = T::from_usize_lossy(grid.dimension().get() - 1) / conjugate(p);
    Ok(kappa
        .values()
        .iter()
        .zip(grid.nodes().iter().zip(grid.weights()))
        .fold(T::zero(), |acc, (v, (&r, &w))| acc + w * v.re * (-rate * r).exp()))
}

/// [`kunze_stein_rhs`] for a kernel given by its quadrature profile.
pub fn kunze_stein_rhs_profile<T: Real>(kappa: &KernelProfile<T>, p: T) -> Result<T> {
    check_kunze_stein_p(p)?;
    if let Some(w) = kappa.weights.iter().find(|w| w.re < T::zero() || w.im != T::zero()) {
        return Err(Error::Domain(format!(
            "Kunze-Stein kernel must be nonnegative, found weight {w}"
        )));
    }
    let rate = T::from_usize_lossy(kappa.n.get() - 1) / conjugate(p);
    Ok(kappa
        .nodes
        .iter()
        .zip(&kappa.weights)
        .fold(T::zero(), |acc, (&r, w)| acc + w.re * (-rate * r).exp()))
}

/// Profile of the majorant `e^{-(n-1)j} (j - r)^{Re alpha - 1} 1_{(j-1/2, j]}(r)`
/// of the global kernel near its edge.
pub fn edge_majorant_profile<T: Real>(n: Dimension, re_alpha: T, j: usize) -> Result<KernelProfile<T>> {
    if !(re_alpha > T::zero()) || j == 0 {
        return Err(Error::Precondition(format!(
            "edge majorant needs Re alpha > 0 and j >= 1, got ({re_alpha}, {j})"
        )));
    }
    let jf = T::from_usize_lossy(j);
    let nm1 = n.get() - 1;
    let gj = GaussJacobi::<T>::new(24, T::zero(), re_alpha - T::one())?;
    let half = T::lit(0.5);
    let sigma: T = n.sphere_area();
    let scale = (-T::from_usize_lossy(nm1) * jf).exp();
    // u = j - r on (0, 1/2]; the rule carries the weight u^{Re alpha - 1}.
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (u, w) in gj.mapped(T::zero(), half) {
        let r = jf - u;
        nodes.push(r);
        weights.push(re(w * scale * sigma * r.sinh().powi(nm1 as i32)));
    }
    Ok(KernelProfile { n, nodes, weights })
}

/// Terms `a_j = rhs(edge majorant_j)^p`, `j = 1..=count`, of the series
/// that controls the global part; `a_{j+1} / a_j -> e^{-(n-1)(p-1)}`.
pub fn global_series_terms<T: Real>(n: Dimension, re_alpha: T, p: T, count: usize) -> Result<Vec<T>> {
    (1..=count)
        .map(|j| Ok(kunze_stein_rhs_profile(&edge_majorant_profile(n, re_alpha, j)?, p)?.powf(p)))
        .collect()
}

/// One evaluation of the Kunze-Stein ratio `||f * kappa||_p / (||f||_p rhs(kappa, p))`.
#[derive(Debug, Clone)]
pub struct KunzeSteinSample<T: Real> {
    pub member: String,
    pub kernel: String,
    pub ratio: T,
}

/// Ratios over every pair of family member and kernel, for every exponent
/// in `ps`. The result is indexed `[p][pair]`.
pub fn kunze_stein_ratios<T: Real>(
    tr: &SphericalTransform<T>,
    family: &TestFamily<T>,
    kernels: &[(String, RadialFunction<T>)],
    ps: &[T],
) -> Result<Vec<Vec<KunzeSteinSample<T>>>> {
    if kernels.is_empty() {
        return Err(Error::Empty("kernel list"));
    }
    for &p in ps {
        check_kunze_stein_p(p)?;
    }
    let pairs: Vec<(usize, usize)> = (0..family.len())
        .flat_map(|i| (0..kernels.len()).map(move |k| (i, k)))
        .collect();
    let conv: Vec<RadialFunction<T>> = pairs
        .par_iter()
        .map(|&(i, k)| Ok(spectral_convolve(tr, &family.members()[i].f, &kernels[k].1)?.value))
        .collect::<Result<_>>()?;
    ps.iter()
        .map(|&p| {
            pairs
                .iter()
                .zip(&conv)
                .map(|(&(i, k), g)| {
                    let m = &family.members()[i];
                    let rhs = kunze_stein_rhs(&kernels[k].1, p)?;
                    let nf = lp_norm(&m.f, p)?;
                    if !(rhs > T::zero()) || !(nf > T::zero()) {
                        return Err(Error::DivisionByZero("Kunze-Stein ratio"));
                    }
                    Ok(KunzeSteinSample {
                        member: m.spec.to_string(),
                        kernel: kernels[k].0.clone(),
                        ratio: lp_norm(g, p)? / (nf * rhs),
                    })
                })
                .collect()
        })
        .collect()
}

/// `sup_lambda |m^alpha_j(lambda)|` over the spectral grid for `j = 1..=k_max`.
pub fn global_symbol_sups<T: Real>(tr: &SphericalTransform<T>, alpha: Cplx<T>, k_max: usize) -> Result<Vec<T>> {
    let ts: Vec<T> = (1..=k_max).map(T::from_usize_lossy).collect();
    Ok(symbol_rows(tr, alpha, &ts)?
        .iter()
        .map(|row| row.iter().fold(T::zero(), |m, v| m.max(v.norm())))
        .collect())
}

/// Partial sums `(sum_{j<=k} sup|m_j|^2, sum_{j<=k} j^2 e^{-(n-1)j})` for `k = 1..=k_max`.
pub fn global_summability<T: Real>(tr: &SphericalTransform<T>, alpha: Cplx<T>, k_max: usize) -> Result<Vec<(T, T)>> {
    let sups = global_symbol_sups(tr, alpha, k_max)?;
    let nm1 = T::from_usize_lossy(tr.dimension().get() - 1);
    let mut lhs = T::zero();
    let mut rhs = T::zero();
    Ok(sups
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let j = T::from_usize_lossy(i + 1);
            lhs = lhs + s * s;
            rhs = rhs + j * j * (-nm1 * j).exp();
            (lhs, rhs)
        })
        .collect())
}

/// `sup_lambda sum_{j=1}^{J} |m^alpha_{2^{-j}}(lambda) - m^alpha_{2^{-j}}(0) e^{-2^{-2j} lambda^2}|^2`
/// over the given spectral points.
pub fn i3_sup<T: Real>(alpha: Cplx<T>, n: Dimension, lambdas: &[T], j_max: usize) -> Result<T> {
    check_alpha(n, alpha)?;
    if j_max == 0 {
        return Ok(T::zero());
    }
    if lambdas.is_empty() {
        return Err(Error::Empty("spectral grid"));
    }
    let lmax = lambdas.iter().fold(T::one(), |m, &l| m.max(l.abs()));
    let per_j: Vec<Vec<T>> = (1..=j_max)
        .into_par_iter()
        .map(|j| {
            let t = T::lit(0.5f64.powi(j as i32));
            let table = SymbolTable::new(&MultiplierSpec::new(n, alpha, t)?, lmax)?;
            let m0 = table.eval(T::zero())?;
            lambdas
                .iter()
                .map(|&l| Ok((table.eval(l)? - m0 * heat_symbol(t * t, l)?).norm_sqr()))
                .collect()
        })
        .collect::<Result<_>>()?;
    // Summation runs over j in a fixed order for every lambda.
    Ok((0..lambdas.len())
        .map(|k| per_j.iter().fold(T::zero(), |acc, row| acc + row[k]))
        .fold(T::zero(), T::max))
}

/// `(J1, J2)` of the Calderon-Zygmund tail estimate, with `e = 2^j r_l`:
/// `J1 = 2 int_{2^{-j} - 3 r_l}^{2^{-j}} 2^{nj} r^{n-1} (1 - 2^j r)^{Re alpha - 1} dr`,
/// `J2 = e int_{r_l}^{2^{-j} - r_l} 2^{nj} r^{n-1} (1 - 2^j r)^{Re alpha - 2} dr`.
/// After `x = 2^j r` both depend on `(j, r_l)` only through `e`.
pub fn cz_tail_integrals<T: Real>(alpha: Cplx<T>, n: Dimension, j: u32, r_l: T) -> Result<(T, T)> {
    let a = alpha.re;
    if !(a > T::zero()) {
        return Err(Error::Precondition(format!(
            "tail integrals need Re alpha > 0, got {a}"
        )));
    }
    let e = T::lit(2f64.powi(j as i32)) * r_l;
    if !(r_l > T::zero()) || e > T::one() {
        return Err(Error::Precondition(format!("need 0 < 2^j r_l <= 1, got {e}")));
    }
    let k = (n.get() - 1) as i32;
    let lo = (T::one() - T::lit(3.0) * e).max(T::zero());
    let gj = GaussJacobi::<T>::new(32, a - T::one(), T::zero())?;
    let j1 = T::lit(2.0) * gj.integrate(lo, T::one(), |x| x.powi(k));
    let j2 = if e >= T::lit(0.5) {
        T::zero()
    } else {
        // y = 1 - x on [e, 1 - e], then v = ln y.
        let gl = GaussLegendre::<T>::new(16);
        let (v0, v1) = (e.ln(), (T::one() - e).ln());
        let panels = (v1 - v0).ceil().to_usize().unwrap_or(1).max(1);
        let h = (v1 - v0) / T::from_usize_lossy(panels);
        let mut acc = T::zero();
        for p in 0..panels {
            let s = v0 + h * T::from_usize_lossy(p);
            acc = acc
                + gl.integrate(s, s + h, |v| {
                    let y = v.exp();
                    (T::one() - y).powi(k) * ((a - T::one()) * v).exp()
                });
        }
        e * acc
    };
    Ok((j1, j2))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Precondition(
            "regression needs at least two paired samples".into(),
        ));
    }
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let m = T::from_usize_lossy(xs.len());
    let mx = lx.iter().fold(T::zero(), |a, &b| a + b) / m;
    let my = ly.iter().fold(T::zero(), |a, &b| a + b) / m;
    let (sxy, sxx) = lx.iter().zip(&ly).fold((T::zero(), T::zero()), |(sxy, sxx), (&x, &y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    if sxx == T::zero() {
        return Err(Error::DivisionByZero("regression with coincident abscissae"));
    }
    Ok(sxy / sxx)
}

/// An operator acting on radial functions.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorDescriptor<T: Real> {
    Identity,
    /// `A_t`.
    SphericalMean {
        t: T,
    },
    /// `m^alpha_t(D)`.
    Multiplier {
        alpha: Cplx<T>,
        t: T,
    },
    /// `L^alpha` over the lacunary set with depths `(J, K)`.
    Lacunary {
        alpha: Cplx<T>,
        j: usize,
        k: usize,
    },
}

impl<T: Real> std::fmt::Display for OperatorDescriptor<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Identity => write!(f, "identity"),
            Self::SphericalMean { t } => write!(f, "mean(t={t})"),
            Self::Multiplier { alpha, t } => write!(f, "multiplier(alpha={alpha};t={t})"),
            Self::Lacunary { alpha, j, k } => write!(f, "lacunary(alpha={alpha};J={j};K={k})"),
        }
    }
}

/// Outputs `op f` for every member of the family.
pub fn apply_to_family<T: Real>(
    tr: &Arc<SphericalTransform<T>>,
    op: &OperatorDescriptor<T>,
    family: &TestFamily<T>,
) -> Result<Vec<RadialFunction<T>>> {
    match op {
        OperatorDescriptor::Identity => Ok(family.members().iter().map(|m| m.f.clone()).collect()),
        OperatorDescriptor::SphericalMean { t } => family
            .members()
            .iter()
            .map(|m| spherical_mean(tr, &m.f, *t, Route::Spectral))
            .collect(),
        OperatorDescriptor::Multiplier { alpha, t } => {
            let spec = MultiplierSpec::new(tr.dimension(), *alpha, *t)?;
            family
                .members()
                .iter()
                .map(|m| apply_multiplier(tr, &spec, &m.f))
                .collect()
        }
        OperatorDescriptor::Lacunary { alpha, j, k } => {
            let op = LacunaryMaximal::new(Arc::clone(tr), *alpha, LacunarySet::new(*j, *k)?)?;
            family.members().iter().map(|m| op.apply(&m.f)).collect()
        }
    }
}

/// `max_f ||op f||_p / ||f||_p` over the family for each `p` in `ps`. Values
/// are lower bounds for the operator norms on `L^p`.
pub fn empirical_operator_norms<T: Real>(
    tr: &Arc<SphericalTransform<T>>,
    op: &OperatorDescriptor<T>,
    family: &TestFamily<T>,
    ps: &[T],
) -> Result<Vec<T>> {
    if family.is_empty() {
        return Err(Error::Empty("test family"));
    }
    let outs = apply_to_family(tr, op, family)?;
    ps.iter()
        .map(|&p| {
            family.members().iter().zip(&outs).try_fold(T::zero(), |best, (m, g)| {
                let nf = lp_norm(&m.f, p)?;
                Ok(best.max(lp_norm(g, p)? / nf))
            })
        })
        .collect()
}

pub fn empirical_operator_norm<T: Real>(
    tr: &Arc<SphericalTransform<T>>,
    op: &OperatorDescriptor<T>,
    family: &TestFamily<T>,
    p: T,
) -> Result<T> {
    Ok(empirical_operator_norms(tr, op, family, &[p])?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive_real, Tolerance};
    use crate::transform::RadialGrid;
    use std::f64::consts::PI;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(conjugate(1.5_f64), 3.0);
        assert_eq!(conjugate(2.0_f64), 2.0);
        assert!(conjugate(1.0_f64).is_infinite());
        assert_eq!(conjugate(f64::INFINITY), 1.0);
    }

    #[test]
    fn kunze_stein_rhs_indicator_oracle() {
        let g = Arc::new(RadialGrid::new(dim(2), 4.0, 512).unwrap());
        // Smooth stand-in for the indicator whose integral the oracle matches on [0,1].
        let kappa = RadialFunction::from_fn(Arc::clone(&g), |r| if r <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let rhs = kunze_stein_rhs(&kappa, 1.5).unwrap();
        let oracle = adaptive_real(
            |r: f64| (-r / 3.0).exp() * 2.0 * PI * r.sinh(),
            0.0,
            1.0,
            4,
            Tolerance::tight(),
        )
        .unwrap();
        // The grid has panel edges at multiples of 1/4, so the indicator is integrated exactly.
        assert!((rhs - oracle).abs() < 1e-12 * oracle, "{rhs} vs {oracle}");
        let zero = RadialFunction::zeros(Arc::clone(&g));
        assert_eq!(kunze_stein_rhs(&zero, 1.5).unwrap(), 0.0);
        let neg = kappa.scale(re(-1.0));
        assert!(kunze_stein_rhs(&neg, 1.5).is_err());
        assert!(kunze_stein_rhs(&kappa, 2.0).is_err());
    }

    #[test]
    fn global_series_ratio() {
        for n in [2, 3] {
            for &p in &[1.2, 1.5, 1.8] {
                let terms = global_series_terms(dim(n), 1.0, p, 20).unwrap();
                let ratio = terms[19] / terms[18];
                let target = (-((n - 1) as f64) * (p - 1.0)).exp();
                assert!((ratio / target - 1.0).abs() < 1e-2, "n={n} p={p}: {ratio} vs {target}");
            }
        }
    }

    #[test]
    fn i3_basic_properties() {
        let lambdas: Vec<f64> = (0..=400).map(|k| k as f64 * 0.5).collect();
        assert_eq!(i3_sup(re(0.0), dim(2), &lambdas, 0).unwrap(), 0.0);
        let a = i3_sup(re(0.0), dim(2), &lambdas, 10).unwrap();
        let b = i3_sup(re(0.0), dim(2), &lambdas, 20).unwrap();
        let c = i3_sup(re(0.0), dim(2), &lambdas, 40).unwrap();
        assert!(a <= b && b.is_finite());
        assert!((c - b).abs() <= 1e-3 * b);
    }

    #[test]
    fn cz_tails_examples() {
        let half = re(0.5);
        let rls: Vec<f64> = (12..=20).rev().map(|k| 2f64.powi(-k)).collect();
        let j1: Vec<f64> = rls
            .iter()
            .map(|&r| cz_tail_integrals(half, dim(2), 8, r).unwrap().0)
            .collect();
        let s1 = loglog_slope(&rls, &j1).unwrap();
        assert!((s1 - 0.5).abs() < 0.05, "{s1}");
        let j2: Vec<f64> = rls
            .iter()
            .map(|&r| cz_tail_integrals(re(2.0), dim(2), 8, r).unwrap().1)
            .collect();
        let s2 = loglog_slope(&rls, &j2).unwrap();
        assert!((s2 - 1.0).abs() < 0.05, "{s2}");
        let (a, b) = cz_tail_integrals(re(1.0), dim(3), 8, 1e-30).unwrap();
        assert!(a < 1e-20 && b < 1e-20);
        assert!(cz_tail_integrals(re(0.0), dim(2), 8, 1e-3).is_err());
        assert!(cz_tail_integrals(re(1.0), dim(2), 8, 1.0).is_err());
    }

    #[test]
    fn loglog_slope_of_power() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.7)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 1.7).abs() < 1e-12);
        assert!(loglog_slope(&xs[..1], &ys[..1]).is_err());
    }
}
