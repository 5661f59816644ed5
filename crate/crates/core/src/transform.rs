//! Discretised spherical Fourier transform for radial functions.
//!
//! The radial side uses composite Gauss-Legendre panels on `[0, R_max]`
//! with weights carrying the polar measure `sigma_{n-1} sinh^{n-1} r dr`.
//! The spectral side uses composite Gauss-Legendre panels on
//! `[0, Lambda_max]` with weights carrying `C_n |c(lambda)|^{-2} d lambda`.
//! A [`SphericalTransform`] caches the `phi_lambda(r)` matrix for a grid pair.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::num::{re, Cplx, Real};
use crate::quadrature::GaussLegendre;
use crate::specfun::{plancherel_constant, plancherel_density, PhiTable};

/// Relative threshold of the truncation checks on both sides.
pub const TAIL_REL: f64 = 1e-8;

/// Round-off allowance of a forward sum, in units of `eps * sum |w_i f_i|`.
const NOISE_ULPS: f64 = 64.0;

/// Panel layout shared by both grid kinds.
#[derive(Debug, Clone)]
struct Panels<T: Real> {
    width: T,
    count: usize,
    ref_nodes: Vec<T>,
    bary: Vec<T>,
    nodes: Vec<T>,
    base_weights: Vec<T>,
}

impl<T: Real> Panels<T> {
    fn new(extent: T, total: usize, order: usize) -> Result<Self> {
        if !(extent > T::zero()) || !extent.is_finite() {
            return Err(Error::Precondition(format!("grid extent must be > 0, got {extent}")));
        }
        if total == 0 || !total.is_multiple_of(order) {
            return Err(Error::Precondition(format!(
                "node count {total} must be a positive multiple of the panel order {order}"
            )));
        }
        let count = total / order;
        let width = extent / T::from_usize_lossy(count);
        let gl = GaussLegendre::<T>::new(order);
        let mut nodes = Vec::with_capacity(total);
        let mut base_weights = Vec::with_capacity(total);
        for p in 0..count {
            let a = width * T::from_usize_lossy(p);
            let b = if p + 1 == count { extent } else { a + width };
            for (x, w) in gl.mapped(a, b) {
                nodes.push(x);
                base_weights.push(w);
            }
        }
        let bary = (0..order)
            .map(|j| {
                let prod = (0..order)
                    .filter(|&k| k != j)
                    .fold(T::one(), |acc, k| acc * (gl.nodes[j] - gl.nodes[k]));
                prod.recip()
            })
            .collect();
        Ok(Self {
            width,
            count,
            ref_nodes: gl.nodes,
            bary,
            nodes,
            base_weights,
        })
    }

    fn order(&self) -> usize {
        self.ref_nodes.len()
    }

    /// Panel-wise barycentric interpolation of nodal `values` at `x`.
    fn interpolate(&self, values: &[Cplx<T>], x: T) -> Cplx<T> {
        let extent = self.width * T::from_usize_lossy(self.count);
        if x < T::zero() || x > extent * (T::one() + T::lit(1e-12)) {
            return re(T::zero());
        }
        let p = (x / self.width).floor().to_usize().unwrap_or(0).min(self.count - 1);
        let a = self.width * T::from_usize_lossy(p);
        let local = (x - a) / self.width * T::lit(2.0) - T::one();
        let k = self.order();
        let vals = &values[p * k..(p + 1) * k];
        let mut num = re(T::zero());
        let mut den = T::zero();
        for ((&node, &b), &v) in self.ref_nodes.iter().zip(&self.bary).zip(vals) {
            let d = local - node;
            if d == T::zero() {
                return v;
            }
            let c = b / d;
            num = num + v * c;
            den = den + c;
        }
        num / den
    }
}

fn panel_order(total: usize) -> usize {
    if total >= 512 && total.is_multiple_of(32) {
        32
    } else if total.is_multiple_of(16) {
        16
    } else {
        8
    }
}

/// Radial quadrature grid on `[0, R_max]` for the polar measure.
#[derive(Debug, Clone)]
pub struct RadialGrid<T: Real> {
    n: Dimension,
    r_max: T,
    panels: Panels<T>,
    weights: Vec<T>,
}

impl<T: Real> RadialGrid<T> {
    pub const DEFAULT_R_MAX: f64 = 16.0;
    pub const DEFAULT_NODES: usize = 2560;

    pub fn new(n: Dimension, r_max: T, nodes: usize) -> Result<Self> {
        let panels = Panels::new(r_max, nodes, panel_order(nodes))?;
        let sigma: T = n.sphere_area();
        let k = (n.get() - 1) as i32;
        let weights = panels
            .nodes
            .iter()
            .zip(&panels.base_weights)
            .map(|(&r, &w)| w * sigma * r.sinh().powi(k))
            .collect();
        Ok(Self {
            n,
            r_max,
            panels,
            weights,
        })
    }

    pub fn default_for(n: Dimension) -> Self {
        Self::new(n, T::lit(Self::DEFAULT_R_MAX), Self::DEFAULT_NODES).expect("default radial grid is valid")
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.panels.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.panels.nodes
    }

    /// Weights including `sigma_{n-1} sinh^{n-1} r`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Plain `dr` weights.
    pub fn dr_weights(&self) -> &[T] {
        &self.panels.base_weights
    }

    pub fn panel_width(&self) -> T {
        self.panels.width
    }

    /// Interpolates nodal values at `r`; zero outside `[0, R_max]`.
    pub fn interpolate(&self, values: &[Cplx<T>], r: T) -> Cplx<T> {
        self.panels.interpolate(values, r)
    }

    /// Polar-measure weight `sigma_{n-1} sinh^{n-1} r`.
    pub fn measure_density(&self, r: T) -> T {
        self.n.sphere_area::<T>() * r.sinh().powi((self.n.get() - 1) as i32)
    }
}

/// Spectral quadrature grid on `[0, Lambda_max]` for the Plancherel measure.
#[derive(Debug, Clone)]
pub struct SpectralGrid<T: Real> {
    n: Dimension,
    lambda_max: T,
    panels: Panels<T>,
    density: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> SpectralGrid<T> {
    pub const DEFAULT_LAMBDA_MAX: f64 = 256.0;
    pub const DEFAULT_NODES: usize = 4096;
    const ORDER: usize = 16;

    pub fn new(n: Dimension, lambda_max: T, nodes: usize) -> Result<Self> {
        let panels = Panels::new(lambda_max, nodes, Self::ORDER.min(panel_order(nodes)))?;
        let cn: T = plancherel_constant(n);
        let density = panels
            .nodes
            .iter()
            .map(|&l| plancherel_density(l, n))
            .collect::<Result<Vec<T>>>()?;
        let weights = density
            .iter()
            .zip(&panels.base_weights)
            .map(|(&d, &w)| cn * d * w)
            .collect();
        Ok(Self {
            n,
            lambda_max,
            panels,
            density,
            weights,
        })
    }

    pub fn default_for(n: Dimension) -> Self {
        Self::new(n, T::lit(Self::DEFAULT_LAMBDA_MAX), Self::DEFAULT_NODES).expect("default spectral grid is valid")
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn lambda_max(&self) -> T {
        self.lambda_max
    }

    pub fn len(&self) -> usize {
        self.panels.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.panels.nodes
    }

    /// Weights including `C_n |c(lambda)|^{-2}`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `|c(lambda_k)|^{-2}` at the nodes.
    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn interpolate(&self, values: &[Cplx<T>], lambda: T) -> Cplx<T> {
        self.panels.interpolate(values, lambda.abs())
    }
}

/// Samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct RadialFunction<T: Real> {
    grid: Arc<RadialGrid<T>>,
    values: Vec<Cplx<T>>,
}

impl<T: Real> RadialFunction<T> {
    pub fn from_values(grid: Arc<RadialGrid<T>>, values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("radial values do not match grid length"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("radial function has non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(grid: Arc<RadialGrid<T>>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| re(f(r))).collect();
        Self::from_values(grid, values)
    }

    pub fn from_complex_fn<F: Fn(T) -> Cplx<T>>(grid: Arc<RadialGrid<T>>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::from_values(grid, values)
    }

    pub fn zeros(grid: Arc<RadialGrid<T>>) -> Self {
        let values = vec![re(T::zero()); grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Cplx<T>> {
        self.values
    }

    /// Interpolated value at `r`; zero beyond `R_max`.
    pub fn eval(&self, r: T) -> Cplx<T> {
        self.grid.interpolate(&self.values, r)
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_radial_grid(self, other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| re(v.norm())).collect(),
        }
    }

    /// Pointwise maximum of moduli.
    pub fn max_abs(&self, other: &Self) -> Result<Self> {
        same_radial_grid(self, other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| re(a.norm().max(b.norm())))
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == T::zero())
    }

    /// `sup |f|`.
    pub fn sup(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }
}

fn same_radial_grid<T: Real>(a: &RadialFunction<T>, b: &RadialFunction<T>) -> Result<()> {
    if Arc::ptr_eq(&a.grid, &b.grid) || a.grid.nodes() == b.grid.nodes() {
        Ok(())
    } else {
        Err(Error::GridMismatch("radial functions live on different grids"))
    }
}

/// Samples of a function of `lambda` on a [`SpectralGrid`].
#[derive(Debug, Clone)]
pub struct SpectralFunction<T: Real> {
    grid: Arc<SpectralGrid<T>>,
    values: Vec<Cplx<T>>,
    noise_floor: T,
}

impl<T: Real> SpectralFunction<T> {
    pub fn from_values(grid: Arc<SpectralGrid<T>>, values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("spectral values do not match grid length"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("spectral function has non-finite values".into()));
        }
        Ok(Self {
            grid,
            values,
            noise_floor: T::zero(),
        })
    }

    pub fn from_fn<F: Fn(T) -> Cplx<T>>(grid: Arc<SpectralGrid<T>>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&l| f(l)).collect();
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn eval(&self, lambda: T) -> Cplx<T> {
        self.grid.interpolate(&self.values, lambda)
    }

    /// Absolute round-off level of the values; magnitudes below it carry no signal.
    pub fn noise_floor(&self) -> T {
        self.noise_floor
    }

    pub fn with_noise_floor(mut self, floor: T) -> Self {
        self.noise_floor = floor;
        self
    }

    /// Pointwise product with symbol values given at the grid nodes.
    pub fn multiply(&self, symbol: &[Cplx<T>]) -> Result<Self> {
        if symbol.len() != self.values.len() {
            return Err(Error::GridMismatch("symbol length does not match spectral grid"));
        }
        let sup = symbol.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(symbol).map(|(&a, &b)| a * b).collect(),
            noise_floor: self.noise_floor * sup,
        })
    }

    /// `L^2` norm against the Plancherel weights.
    pub fn l2_norm(&self) -> T {
        self.values
            .iter()
            .zip(self.grid.weights())
            .fold(T::zero(), |acc, (v, &w)| acc + w * v.norm_sqr())
            .sqrt()
    }
}

/// A transform result together with its estimated truncation tail.
#[derive(Debug, Clone)]
pub struct Transformed<X, T> {
    pub value: X,
    pub tail_bound: T,
}

/// Grid pair with the cached `phi_lambda(r)` matrix.
#[derive(Debug, Clone)]
pub struct SphericalTransform<T: Real> {
    rgrid: Arc<RadialGrid<T>>,
    sgrid: Arc<SpectralGrid<T>>,
    table: Arc<PhiTable<T>>,
    phi0_at_rmax: T,
}

impl<T: Real> SphericalTransform<T> {
    pub fn new(rgrid: Arc<RadialGrid<T>>, sgrid: Arc<SpectralGrid<T>>) -> Result<Self> {
        let n = rgrid.dimension();
        if sgrid.dimension() != n {
            return Err(Error::GridMismatch("radial and spectral grids disagree on dimension"));
        }
        let table = PhiTable::new(n, sgrid.nodes(), rgrid.nodes())?;
        let phi0 = PhiTable::new(n, &[T::zero()], &[rgrid.r_max()])?.get(0, 0);
        Ok(Self {
            rgrid,
            sgrid,
            table: Arc::new(table),
            phi0_at_rmax: phi0,
        })
    }

    pub fn default_for(n: Dimension) -> Result<Self> {
        Self::new(
            Arc::new(RadialGrid::default_for(n)),
            Arc::new(SpectralGrid::default_for(n)),
        )
    }

    pub fn dimension(&self) -> Dimension {
        self.rgrid.dimension()
    }

    pub fn radial_grid(&self) -> &Arc<RadialGrid<T>> {
        &self.rgrid
    }

    pub fn spectral_grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.sgrid
    }

    pub fn phi_table(&self) -> &PhiTable<T> {
        &self.table
    }

    fn check_radial(&self, f: &RadialFunction<T>) -> Result<()> {
        if Arc::ptr_eq(f.grid(), &self.rgrid) || f.grid().nodes() == self.rgrid.nodes() {
            Ok(())
        } else {
            Err(Error::GridMismatch("radial function is not on this transform's grid"))
        }
    }

    fn check_spectral(&self, f: &SpectralFunction<T>) -> Result<()> {
        if Arc::ptr_eq(f.grid(), &self.sgrid) || f.grid().nodes() == self.sgrid.nodes() {
            Ok(())
        } else {
            Err(Error::GridMismatch("spectral function is not on this transform's grid"))
        }
    }

    /// Envelope of the forward integrand at `R_max`: `|f(R)| sigma sinh^{n-1}(R) phi_0(R)`.
    pub fn forward_tail(&self, f: &RadialFunction<T>) -> T {
        let last = f.values().last().map(|v| v.norm()).unwrap_or(T::zero());
        last * self.rgrid.measure_density(self.rgrid.r_max()) * self.phi0_at_rmax
    }

    /// Envelope of the inverse integrand at `Lambda_max`: `|F(Lambda)| C_n |c(Lambda)|^{-2}`,
    /// with `|F(Lambda)|` reduced by the spectrum's round-off floor.
    pub fn inverse_tail(&self, big_f: &SpectralFunction<T>) -> Result<T> {
        let n = self.dimension();
        let last = big_f.values().last().map(|v| v.norm()).unwrap_or(T::zero());
        let last = (last - big_f.noise_floor()).max(T::zero());
        let lm = self.sgrid.lambda_max();
        Ok(last * plancherel_constant::<T>(n) * plancherel_density(lm, n)?)
    }

    /// `Ff(lambda_k) = sum_i w_i f(r_i) phi_{lambda_k}(r_i)`, without the tail check.
    pub fn forward_unchecked(&self, f: &RadialFunction<T>) -> Result<SpectralFunction<T>> {
        self.check_radial(f)?;
        let w = self.rgrid.weights();
        let wf: Vec<Cplx<T>> = f.values().iter().zip(w).map(|(&v, &wi)| v * wi).collect();
        let values: Vec<Cplx<T>> = (0..self.sgrid.len())
            .into_par_iter()
            .map(|k| {
                self.table
                    .row(k)
                    .iter()
                    .zip(&wf)
                    .fold(re(T::zero()), |acc, (&p, &v)| acc + v * p)
            })
            .collect();
        // |phi| <= 1, so each sum carries round-off of order eps * sum |w f|.
        let mass = wf.iter().fold(T::zero(), |acc, v| acc + v.norm());
        let floor = T::lit(NOISE_ULPS) * T::epsilon() * mass;
        Ok(SpectralFunction::from_values(Arc::clone(&self.sgrid), values)?.with_noise_floor(floor))
    }

    pub fn forward(&self, f: &RadialFunction<T>) -> Result<Transformed<SpectralFunction<T>, T>> {
        let tail = self.forward_tail(f);
        let l1 = lp_norm(f, T::one())?;
        let allowance = T::lit(TAIL_REL) * l1;
        if tail > allowance {
            return Err(Error::TailTooLarge {
                side: "radial",
                tail: tail.to_f64_lossy(),
                allowance: allowance.to_f64_lossy(),
            });
        }
        Ok(Transformed {
            value: self.forward_unchecked(f)?,
            tail_bound: tail,
        })
    }

    /// `f(r_i) = sum_k W_k F(lambda_k) phi_{lambda_k}(r_i)`, without the tail check.
    pub fn inverse_unchecked(&self, big_f: &SpectralFunction<T>) -> Result<RadialFunction<T>> {
        self.check_spectral(big_f)?;
        let wf: Vec<Cplx<T>> = big_f
            .values()
            .iter()
            .zip(self.sgrid.weights())
            .map(|(&v, &w)| v * w)
            .collect();
        let nr = self.rgrid.len();
        // Accumulate rows in fixed lambda order per chunk of radii.
        let chunk = 64;
        let mut values = vec![re(T::zero()); nr];
        values.par_chunks_mut(chunk).enumerate().for_each(|(c, out)| {
            let j0 = c * chunk;
            for (k, &wk) in wf.iter().enumerate() {
                let row = &self.table.row(k)[j0..j0 + out.len()];
                for (o, &p) in out.iter_mut().zip(row) {
                    *o = *o + wk * p;
                }
            }
        });
        RadialFunction::from_values(Arc::clone(&self.rgrid), values)
    }

    /// The inverse tail envelope, or `TailTooLarge` when it exceeds
    /// `TAIL_REL` times the weighted `L^1` norm of the spectrum.
    pub fn check_inverse_tail(&self, big_f: &SpectralFunction<T>) -> Result<T> {
        let tail = self.inverse_tail(big_f)?;
        let l1 = big_f
            .values()
            .iter()
            .zip(self.sgrid.weights())
            .fold(T::zero(), |acc, (v, &w)| acc + w * v.norm());
        let allowance = T::lit(TAIL_REL) * l1;
        if tail > allowance {
            return Err(Error::TailTooLarge {
                side: "spectral",
                tail: tail.to_f64_lossy(),
                allowance: allowance.to_f64_lossy(),
            });
        }
        Ok(tail)
    }

    pub fn inverse(&self, big_f: &SpectralFunction<T>) -> Result<Transformed<RadialFunction<T>, T>> {
        let tail = self.check_inverse_tail(big_f)?;
        Ok(Transformed {
            value: self.inverse_unchecked(big_f)?,
            tail_bound: tail,
        })
    }

    /// `m(D) f`: forward transform, multiply by symbol values at the spectral nodes, invert.
    pub fn apply_symbol(&self, f: &RadialFunction<T>, symbol: &[Cplx<T>]) -> Result<Transformed<RadialFunction<T>, T>> {
        let fwd = self.forward(f)?;
        let prod = fwd.value.multiply(symbol)?;
        let inv = self.inverse(&prod)?;
        Ok(Transformed {
            value: inv.value,
            tail_bound: fwd.tail_bound + inv.tail_bound,
        })
    }

    /// `phi_{lambda_k}(t)` at every spectral node for each radius in `ts`,
    /// returned as one row per radius.
    pub fn phi_rows(&self, ts: &[T]) -> Result<Vec<Vec<Cplx<T>>>> {
        let table = PhiTable::new(self.dimension(), self.sgrid.nodes(), ts)?;
        Ok((0..ts.len())
            .map(|j| (0..self.sgrid.len()).map(|k| re(table.get(k, j))).collect())
            .collect())
    }

    /// Spherical transform of a kernel given by its own quadrature:
    /// `sum_j weights_j phi_{lambda_k}(nodes_j)`, where `weights` already
    /// include the kernel values and the polar measure.
    pub fn transform_on_nodes(&self, nodes: &[T], weights: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        if nodes.len() != weights.len() {
            return Err(Error::GridMismatch("kernel nodes and weights differ in length"));
        }
        let table = PhiTable::new(self.dimension(), self.sgrid.nodes(), nodes)?;
        Ok((0..self.sgrid.len())
            .into_par_iter()
            .map(|k| {
                table
                    .row(k)
                    .iter()
                    .zip(weights)
                    .fold(re(T::zero()), |acc, (&p, &w)| acc + w * p)
            })
            .collect())
    }
}

/// `L^p` norm in polar coordinates; `p = inf` gives the sup norm.
pub fn lp_norm<T: Real>(f: &RadialFunction<T>, p: T) -> Result<T> {
    if !(p > T::zero()) {
        return Err(Error::Domain(format!("L^p exponent must be > 0, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.sup());
    }
    let s = f
        .values()
        .iter()
        .zip(f.grid().weights())
        .fold(T::zero(), |acc, (v, &w)| acc + w * v.norm().powf(p));
    Ok(s.powf(p.recip()))
}

pub fn forward_sft<T: Real>(
    tr: &SphericalTransform<T>,
    f: &RadialFunction<T>,
) -> Result<Transformed<SpectralFunction<T>, T>> {
    tr.forward(f)
}

pub fn inverse_sft<T: Real>(
    tr: &SphericalTransform<T>,
    big_f: &SpectralFunction<T>,
) -> Result<Transformed<RadialFunction<T>, T>> {
    tr.inverse(big_f)
}

/// `| ||f||_2 - ||Ff||_2 | / ||f||_2`.
pub fn plancherel_defect<T: Real>(tr: &SphericalTransform<T>, f: &RadialFunction<T>) -> Result<T> {
    let nf = lp_norm(f, T::lit(2.0))?;
    if nf == T::zero() {
        return Err(Error::DivisionByZero("Plancherel defect of the zero function"));
    }
    let big = tr.forward(f)?.value.l2_norm();
    Ok((nf - big).abs() / nf)
}

/// `f * g` through the transform: `F(f*g) = Ff Fg`.
pub fn spectral_convolve<T: Real>(
    tr: &SphericalTransform<T>,
    f: &RadialFunction<T>,
    g: &RadialFunction<T>,
) -> Result<Transformed<RadialFunction<T>, T>> {
    let ff = tr.forward(f)?;
    let fg = tr.forward(g)?;
    // The product is formed in a fixed order so f*g and g*f agree bitwise.
    let prod: Vec<Cplx<T>> = ff
        .value
        .values()
        .iter()
        .zip(fg.value.values())
        .map(|(&a, &b)| sym_mul(a, b))
        .collect();
    let floor =
        ff.value.noise_floor() * sup_abs(fg.value.values()) + fg.value.noise_floor() * sup_abs(ff.value.values());
    let spec = SpectralFunction::from_values(Arc::clone(tr.spectral_grid()), prod)?.with_noise_floor(floor);
    let inv = tr.inverse(&spec)?;
    Ok(Transformed {
        value: inv.value,
        tail_bound: ff.tail_bound + fg.tail_bound + inv.tail_bound,
    })
}

fn sup_abs<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.norm()))
}

/// Complex product that is bitwise symmetric in its arguments.
#[inline]
fn sym_mul<T: Real>(a: Cplx<T>, b: Cplx<T>) -> Cplx<T> {
    let rr = a.re * b.re;
    let ii = a.im * b.im;
    let x = a.re * b.im;
    let y = a.im * b.re;
    Cplx::new(rr - ii, x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball_volume;
    use crate::num::cplx;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn small_transform(n: usize) -> SphericalTransform<f64> {
        let d = dim(n);
        SphericalTransform::new(
            Arc::new(RadialGrid::new(d, 12.0, 768).unwrap()),
            Arc::new(SpectralGrid::new(d, 48.0, 768).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn radial_grid_integrates_balls() {
        for n in [2, 3, 4] {
            let g = RadialGrid::<f64>::default_for(dim(n));
            for t in 1..=16 {
                let t = t as f64;
                let s: f64 = g
                    .nodes()
                    .iter()
                    .zip(g.weights())
                    .filter(|(&r, _)| r <= t)
                    .map(|(_, &w)| w)
                    .sum();
                let v = ball_volume(t, dim(n));
                assert!((s - v).abs() <= 1e-6 * v, "n={n} t={t}: {s} vs {v}");
            }
        }
    }

    #[test]
    fn grids_reject_bad_layouts() {
        assert!(RadialGrid::<f64>::new(dim(2), 12.0, 100).is_err());
        assert!(RadialGrid::<f64>::new(dim(2), 0.0, 256).is_err());
        assert!(SpectralGrid::<f64>::new(dim(2), 10.0, 0).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_polynomials_within_panels() {
        let g = Arc::new(RadialGrid::<f64>::new(dim(2), 12.0, 256).unwrap());
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
        for &r in &[0.0, 0.013, 0.5, 1.7, 3.3] {
            assert!((f.eval(r).re - (-r * r).exp()).abs() < 1e-9, "r={r}");
        }
        assert_eq!(f.eval(12.5).re, 0.0);
    }

    #[test]
    fn forward_of_zero_and_linearity() {
        let tr = small_transform(2);
        let g = Arc::clone(tr.radial_grid());
        let z = RadialFunction::zeros(Arc::clone(&g));
        assert!(tr.forward(&z).unwrap().value.values().iter().all(|v| v.norm() == 0.0));
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
        let h = RadialFunction::from_fn(Arc::clone(&g), |r| (-2.0 * (r - 1.0).powi(2)).exp()).unwrap();
        let (a, b) = (cplx(0.7, -0.2), cplx(-1.3, 0.0));
        let lhs = tr.forward(&f.scale(a).add(&h.scale(b)).unwrap()).unwrap().value;
        let ff = tr.forward(&f).unwrap().value;
        let fh = tr.forward(&h).unwrap().value;
        for k in 0..lhs.values().len() {
            let rhs = ff.values()[k] * a + fh.values()[k] * b;
            assert!((lhs.values()[k] - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
        // Real input gives real output.
        assert!(ff.values().iter().all(|v| v.im == 0.0));
    }

    #[test]
    fn round_trip_gaussian_n2() {
        let tr = SphericalTransform::<f64>::default_for(dim(2)).unwrap();
        let g = Arc::clone(tr.radial_grid());
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
        let back = tr.inverse(&tr.forward(&f).unwrap().value).unwrap().value;
        let err = f
            .values()
            .iter()
            .zip(back.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        assert!(err <= 1e-3 * f.sup(), "max error {err}");
    }

    #[test]
    fn tail_check_rejects_slow_decay() {
        let tr = small_transform(3);
        let g = Arc::clone(tr.radial_grid());
        let f = RadialFunction::from_fn(g, |r| (-r).exp()).unwrap();
        assert!(matches!(tr.forward(&f), Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn lp_norm_properties() {
        let g = Arc::new(RadialGrid::<f64>::default_for(dim(2)));
        let z = RadialFunction::zeros(Arc::clone(&g));
        assert_eq!(lp_norm(&z, 1.0).unwrap(), 0.0);
        let t = 3.0;
        let ind = RadialFunction::from_fn(Arc::clone(&g), |r| if r <= t { 1.0 } else { 0.0 }).unwrap();
        let v = 2.0 * std::f64::consts::PI * (t.cosh() - 1.0);
        assert!((lp_norm(&ind, 1.0).unwrap() - v).abs() < 1e-9 * v);
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| (r - 2.0) * (-r).exp()).unwrap();
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), f.sup());
        let c = 2.5;
        let a = lp_norm(&f.scale(re(-c)), 1.5).unwrap();
        assert!((a - c * lp_norm(&f, 1.5).unwrap()).abs() < 1e-12 * a);
        let sq = RadialFunction::from_fn(Arc::clone(&g), |r| ((r - 2.0) * (-r).exp()).powi(2)).unwrap();
        let l2 = lp_norm(&f, 2.0).unwrap();
        assert!((l2 - lp_norm(&sq, 1.0).unwrap().sqrt()).abs() < 1e-13 * l2);
        assert!(lp_norm(&f, 0.0).is_err());
    }

    #[test]
    fn plancherel_defect_small_and_scale_invariant() {
        for n in [2, 3, 4] {
            let tr = SphericalTransform::<f64>::default_for(dim(n)).unwrap();
            let g = Arc::clone(tr.radial_grid());
            let f = RadialFunction::from_fn(g, |r| (-r * r).exp()).unwrap();
            let d = plancherel_defect(&tr, &f).unwrap();
            assert!(d <= 1e-3, "n={n} defect {d}");
            let d2 = plancherel_defect(&tr, &f.scale(re(3.0))).unwrap();
            assert!((d - d2).abs() <= 1e-12);
        }
        let tr = small_transform(2);
        let z = RadialFunction::zeros(Arc::clone(tr.radial_grid()));
        assert!(matches!(plancherel_defect(&tr, &z), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn convolution_commutes_exactly() {
        let tr = small_transform(2);
        let g = Arc::clone(tr.radial_grid());
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap();
        let h = RadialFunction::from_fn(Arc::clone(&g), |r| (-(r - 1.0).powi(2) * 3.0).exp()).unwrap();
        let a = spectral_convolve(&tr, &f, &h).unwrap().value;
        let b = spectral_convolve(&tr, &h, &f).unwrap().value;
        assert_eq!(a.values(), b.values());
        let z = RadialFunction::zeros(g);
        let c = spectral_convolve(&tr, &f, &z).unwrap().value;
        assert!(c.is_zero());
    }
}
