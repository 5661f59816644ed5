//! Hyperboloid model of real hyperbolic space `H^n`.
//!
//! Points live in `R^{1+n}` on the sheet `[x,x] = 1, x_0 >= 1`. The radial
//! code paths never build points; they only need [`two_point_distance`] and
//! [`ball_volume`].

use crate::error::{Error, Result};
use crate::num::{acosh1p, sphere_area, Real};
use crate::quadrature::GaussLegendre;

/// Dimension `n >= 2` of the hyperbolic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Half the exponential volume growth rate, `(n-1)/2`.
    #[inline]
    pub fn rho<T: Real>(self) -> T {
        T::from_usize_lossy(self.0 - 1) / T::lit(2.0)
    }

    /// Surface area `sigma_{n-1}` of the unit sphere `S^{n-1}`.
    pub fn sphere_area<T: Real>(self) -> T {
        sphere_area(self.0)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const SHEET_TOL: f64 = 1e-12;
const CLAMP_TOL: f64 = 1e-10;

/// A point of `H^n` in ambient coordinates `(x_0, ..., x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperPoint<T: Real> {
    coords: Vec<T>,
}

impl<T: Real> HyperPoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Dimension(coords.len().saturating_sub(1)));
        }
        let x0 = coords[0];
        if !(x0 >= T::one()) {
            return Err(Error::NotOnHyperboloid(format!("x_0 = {x0} < 1")));
        }
        let q = lorentz_raw(&coords, &coords);
        let scale = T::one().max(x0 * x0);
        if (q - T::one()).abs() > T::lit(SHEET_TOL) * scale {
            return Err(Error::NotOnHyperboloid(format!("[x,x] = {q}")));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: Dimension) -> Self {
        let mut coords = vec![T::zero(); n.get() + 1];
        coords[0] = T::one();
        Self { coords }
    }

    /// The point `(cosh r, sigma sinh r)` for a direction `sigma` in `R^n`.
    ///
    /// `sigma` is normalized before use; it must be nonzero.
    pub fn polar(r: T, sigma: &[T]) -> Result<Self> {
        let norm = sigma.iter().fold(T::zero(), |acc, &s| acc + s * s).sqrt();
        if sigma.len() < 2 || !(norm > T::zero()) || r < T::zero() {
            return Err(Error::Precondition(
                "polar coordinates need r >= 0 and a nonzero direction in R^n, n >= 2".into(),
            ));
        }
        let (sh, ch) = (r.sinh(), r.cosh());
        let mut coords = Vec::with_capacity(sigma.len() + 1);
        coords.push(ch);
        coords.extend(sigma.iter().map(|&s| s / norm * sh));
        Ok(Self { coords })
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Distance to the origin, `|x| = arcosh x_0`.
    pub fn radius(&self) -> T {
        acosh1p((self.coords[0] - T::one()).max(T::zero()))
    }
}

fn lorentz_raw<T: Real>(x: &[T], y: &[T]) -> T {
    x[1..]
        .iter()
        .zip(&y[1..])
        .fold(x[0] * y[0], |acc, (&a, &b)| acc - a * b)
}

/// The Lorentz form `[x,y] = x_0 y_0 - x_1 y_1 - ... - x_n y_n`.
pub fn lorentz_form<T: Real>(x: &HyperPoint<T>, y: &HyperPoint<T>) -> T {
    lorentz_raw(&x.coords, &y.coords)
}

/// Geodesic distance `arcosh [x,y]`.
///
/// Evaluated as `2 asinh(|x-y|_L / 2)` where `|x-y|_L^2 = -[x-y, x-y] = 2([x,y]-1)`,
/// which is symmetric in its arguments bit for bit and accurate for nearby
/// points.
pub fn distance<T: Real>(x: &HyperPoint<T>, y: &HyperPoint<T>) -> Result<T> {
    if x.dimension() != y.dimension() {
        return Err(Error::Precondition("points of different dimension".into()));
    }
    let d0 = x.coords[0] - y.coords[0];
    let spatial = x.coords[1..]
        .iter()
        .zip(&y.coords[1..])
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
    let q = spatial - d0 * d0;
    if q < T::zero() {
        // q = 2([x,y] - 1): tolerate round-off below 1.
        if q < -T::lit(2.0 * CLAMP_TOL) {
            return Err(Error::LorentzBelowOne((T::one() + q / T::lit(2.0)).to_f64_lossy()));
        }
        return Ok(T::zero());
    }
    Ok(T::lit(2.0) * (q.sqrt() / T::lit(2.0)).asinh())
}

/// Distance from the origin to a point at polar radius `r` of the sphere
/// `S(o', t)` where `o'` is at distance `r` from the origin, measured at angle
/// `theta` (hyperbolic law of cosines).
///
/// `cosh rho = cosh r cosh t - sinh r sinh t cos theta`, evaluated as
/// `1 + 2 sinh^2((r-t)/2) + 2 sinh r sinh t sin^2(theta/2)` to avoid
/// cancellation.
pub fn two_point_distance<T: Real>(r: T, t: T, theta: T) -> T {
    let two = T::lit(2.0);
    let a = ((r - t) / two).sinh();
    let s = (theta / two).sin();
    let delta = two * a * a + two * r.sinh() * t.sinh() * s * s;
    acosh1p(delta)
}

/// Volume of a geodesic ball of radius `t`: `sigma_{n-1} int_0^t sinh^{n-1}`.
pub fn ball_volume<T: Real>(t: T, n: Dimension) -> T {
    if !(t > T::zero()) {
        return T::zero();
    }
    let rule = GaussLegendre::<T>::new(16);
    let panels = t.ceil().to_usize().unwrap_or(1).max(1);
    let width = t / T::from_usize_lossy(panels);
    let k = (n.get() - 1) as i32;
    let mut acc = T::zero();
    for p in 0..panels {
        let a = width * T::from_usize_lossy(p);
        acc = acc + rule.integrate(a, a + width, |r| r.sinh().powi(k));
    }
    n.sphere_area::<T>() * acc
}
