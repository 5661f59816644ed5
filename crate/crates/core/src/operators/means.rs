//! Spherical means, the multipliers `m^alpha_t(D)` and brute-force radial
//! convolution.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{two_point_distance, Dimension};
use crate::num::{re, Cplx, Real};
use crate::quadrature::{GaussLegendre, SingularEndpointRule};
use crate::specfun::angular_normalizer;
use crate::symbols::{kernel_k, MultiplierSpec, SymbolTable};
use crate::transform::{RadialFunction, SphericalTransform};

/// Which algorithm evaluates a spherical mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Multiply the spherical transform by `phi_lambda(t)` and invert.
    Spectral,
    /// Angular quadrature of `f` over the sphere `S(x, t)`.
    Direct,
}

/// Feature scale of `f` in the distance variable that the angular panels
/// must resolve near `theta = 0`.
const ANGLE_RESOLUTION: f64 = 0.2;
const ANGLE_ORDER: usize = 8;

/// Angular quadrature for averages over a sphere of radius `s` centred at
/// distance `r` from the origin:
/// `c_n int_0^pi g(d(r, s, theta)) sin^{n-2} theta d theta`.
///
/// Near `theta = 0` the distance behaves like `sqrt((r-s)^2 + sinh r sinh s theta^2)`,
/// so panels halve geometrically from `pi` until one panel spans at most
/// `ANGLE_RESOLUTION` in distance.
#[derive(Debug, Clone)]
pub struct SphereRule<T: Real> {
    n: Dimension,
    cn: T,
    gl: GaussLegendre<T>,
}

impl<T: Real> SphereRule<T> {
    pub fn new(n: Dimension) -> Self {
        Self {
            n,
            cn: angular_normalizer(n),
            gl: GaussLegendre::new(ANGLE_ORDER),
        }
    }

    pub fn average<G: Fn(T) -> Cplx<T>>(&self, g: G, r: T, s: T) -> Cplx<T> {
        let scale = (r.sinh() * s.sinh()).sqrt().max(T::one());
        let theta_min = T::lit(ANGLE_RESOLUTION) / scale;
        let k = (self.n.get() - 2) as i32;
        let mut acc = re(T::zero());
        let mut panel = |lo: T, hi: T| {
            for (th, w) in self.gl.mapped(lo, hi) {
                acc = acc + g(two_point_distance(r, s, th)) * (w * th.sin().powi(k));
            }
        };
        let mut hi = T::PI();
        while hi > theta_min {
            let lo = hi / T::lit(2.0);
            panel(lo, hi);
            hi = lo;
        }
        panel(T::zero(), hi);
        acc * self.cn
    }
}

/// `phi_lambda(t)` or `m^alpha_t(lambda)` at every spectral node of `tr`.
pub fn symbol_row<T: Real>(tr: &SphericalTransform<T>, spec: &MultiplierSpec<T>) -> Result<Vec<Cplx<T>>> {
    symbol_rows(tr, spec.alpha, &[spec.t]).map(|mut rows| rows.pop().expect("one radius gives one row"))
}

/// [`symbol_row`] for several radii. The order `alpha = 0` goes through the
/// spherical-function table, any other order through the Mehler integral.
pub fn symbol_rows<T: Real>(tr: &SphericalTransform<T>, alpha: Cplx<T>, ts: &[T]) -> Result<Vec<Vec<Cplx<T>>>> {
    let n = tr.dimension();
    for &t in ts {
        MultiplierSpec::new(n, alpha, t)?;
    }
    if alpha == re(T::zero()) {
        return tr.phi_rows(ts);
    }
    let sgrid = tr.spectral_grid();
    ts.par_iter()
        .map(|&t| {
            let spec = MultiplierSpec::new(n, alpha, t)?;
            SymbolTable::new(&spec, sgrid.lambda_max())?.eval_many(sgrid.nodes())
        })
        .collect()
}

/// `A_t f`, the average of `f` over spheres of radius `t`.
pub fn spherical_mean<T: Real>(
    tr: &SphericalTransform<T>,
    f: &RadialFunction<T>,
    t: T,
    route: Route,
) -> Result<RadialFunction<T>> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::Precondition(format!("sphere radius must be > 0, got {t}")));
    }
    match route {
        Route::Spectral => {
            let row = tr.phi_rows(&[t])?.pop().expect("one row");
            Ok(tr.apply_symbol(f, &row)?.value)
        }
        Route::Direct => {
            let grid = Arc::clone(f.grid());
            let rule = SphereRule::new(grid.dimension());
            let values = grid
                .nodes()
                .par_iter()
                .map(|&r| rule.average(|d| f.eval(d), r, t))
                .collect();
            RadialFunction::from_values(grid, values)
        }
    }
}

/// `m^alpha_t(D) f` through the spherical transform.
pub fn apply_multiplier<T: Real>(
    tr: &SphericalTransform<T>,
    spec: &MultiplierSpec<T>,
    f: &RadialFunction<T>,
) -> Result<RadialFunction<T>> {
    if spec.n != tr.dimension() {
        return Err(Error::GridMismatch("multiplier and transform disagree on dimension"));
    }
    let row = symbol_row(tr, spec)?;
    Ok(tr.apply_symbol(f, &row)?.value)
}

/// A radial kernel `kappa` given by a quadrature rule for the polar measure:
/// `int kappa(d(o, y)) g(y) dy ~ sum_j weights_j g(nodes_j)` for radial `g`.
#[derive(Debug, Clone)]
pub struct KernelProfile<T: Real> {
    pub n: Dimension,
    pub nodes: Vec<T>,
    pub weights: Vec<Cplx<T>>,
}

/// Panels of the kernel rules are at most this wide.
const KERNEL_PANEL: f64 = 0.5;
/// Halvings toward a complex-exponent endpoint; the neglected relative
/// contribution is of order `KERNEL_PANEL 2^{-KERNEL_HALVINGS}`.
const KERNEL_HALVINGS: usize = 14;

impl<T: Real> KernelProfile<T> {
    /// Samples of `kappa` on its own radial grid.
    pub fn from_radial(kappa: &RadialFunction<T>) -> Self {
        let grid = kappa.grid();
        let (nodes, weights) = kappa
            .values()
            .iter()
            .zip(grid.nodes().iter().zip(grid.weights()))
            .filter(|(v, _)| v.norm() > T::zero())
            .map(|(&v, (&r, &w))| (r, v * w))
            .unzip();
        Self {
            n: grid.dimension(),
            nodes,
            weights,
        }
    }

    /// `K^alpha_t / sigma_{n-1}`, the convolution kernel of `m^alpha_t(D)`
    /// (`Re alpha > 0`). The endpoint factor `(cosh t - cosh s)^{alpha-1}` is
    /// integrated in `u = t - s` with a Jacobi-type rule.
    pub fn multiplier_kernel(spec: &MultiplierSpec<T>) -> Result<Self> {
        // Validates Re alpha > 0.
        kernel_k(spec, T::zero())?;
        let t = spec.t;
        let beta = spec.alpha - T::one();
        let halvings = if beta.im == T::zero() { 4 } else { KERNEL_HALVINGS };
        let rule = SingularEndpointRule::with_halvings(t, beta, T::lit(KERNEL_PANEL), halvings)?;
        let k = (spec.n.get() - 1) as i32;
        let mut nodes = Vec::with_capacity(rule.nodes.len());
        let mut weights = Vec::with_capacity(rule.nodes.len());
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = t - u;
            // sigma cancels: (K / sigma) * sigma sinh^{n-1}(s).
            nodes.push(s);
            weights.push(w * kernel_k(spec, s)? * s.sinh().powi(k));
        }
        Ok(Self {
            n: spec.n,
            nodes,
            weights,
        })
    }

    /// `1_{B(o,t)} / |B(o,t)|`, whose convolution is the ball average.
    pub fn ball_average(n: Dimension, t: T) -> Result<Self> {
        Self::ball_indicator(n, t, true)
    }

    /// `c 1_{B(o,t)}` with `c = 1/|B(o,t)|` when `normalized`, else `c = 1`.
    pub fn ball_indicator(n: Dimension, t: T, normalized: bool) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::Precondition(format!("ball radius must be > 0, got {t}")));
        }
        let gl = GaussLegendre::<T>::new(ANGLE_ORDER);
        let panels = (t / T::lit(KERNEL_PANEL)).ceil().to_usize().unwrap_or(1).max(1);
        let width = t / T::from_usize_lossy(panels);
        let sigma: T = n.sphere_area();
        let k = (n.get() - 1) as i32;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in 0..panels {
            let lo = width * T::from_usize_lossy(p);
            for (s, w) in gl.mapped(lo, lo + width) {
                nodes.push(s);
                weights.push(re(w * sigma * s.sinh().powi(k)));
            }
        }
        if normalized {
            let vol = weights.iter().fold(T::zero(), |a, w| a + w.re);
            for w in &mut weights {
                *w = *w / vol;
            }
        }
        Ok(Self { n, nodes, weights })
    }

    /// Scales `kappa` by a radial factor `h(s)`.
    pub fn reweighted<H: Fn(T) -> Cplx<T>>(&self, h: H) -> Self {
        Self {
            n: self.n,
            nodes: self.nodes.clone(),
            weights: self.nodes.iter().zip(&self.weights).map(|(&s, &w)| w * h(s)).collect(),
        }
    }

    /// `int kappa dmu`.
    pub fn mass(&self) -> Cplx<T> {
        self.weights.iter().fold(re(T::zero()), |a, &w| a + w)
    }
}

/// `(f * kappa)(r) = sum_j w_j (A_{s_j} f)(r)`, every sphere average
/// computed by angular quadrature.
pub fn convolve_profile_at<T: Real>(
    rule: &SphereRule<T>,
    f: &RadialFunction<T>,
    kappa: &KernelProfile<T>,
    r: T,
) -> Cplx<T> {
    kappa
        .nodes
        .iter()
        .zip(&kappa.weights)
        .fold(re(T::zero()), |acc, (&s, &w)| {
            acc + w * rule.average(|d| f.eval(d), r, s)
        })
}

/// [`convolve_profile_at`] at every node of the grid of `f`.
pub fn convolve_profile<T: Real>(f: &RadialFunction<T>, kappa: &KernelProfile<T>) -> Result<RadialFunction<T>> {
    let grid = Arc::clone(f.grid());
    if grid.dimension() != kappa.n {
        return Err(Error::GridMismatch("kernel and function disagree on dimension"));
    }
    let rule = SphereRule::new(kappa.n);
    let values = grid
        .nodes()
        .par_iter()
        .map(|&r| convolve_profile_at(&rule, f, kappa, r))
        .collect();
    RadialFunction::from_values(grid, values)
}

/// `(f * kappa)(x) = int f(y) kappa(d(x, y)) dy` by brute-force double quadrature.
pub fn direct_radial_convolution<T: Real>(
    f: &RadialFunction<T>,
    kappa: &RadialFunction<T>,
) -> Result<RadialFunction<T>> {
    convolve_profile(f, &KernelProfile::from_radial(kappa))
}
