//! The lacunary maximal operator, its local and global parts, and the
//! Hardy-Littlewood maximal function.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::num::{Cplx, Real};
use crate::transform::{RadialFunction, SpectralFunction, SphericalTransform};

use super::means::{convolve_profile, symbol_rows, KernelProfile};

/// Truncated lacunary radii `{2^{-j} : 1 <= j <= J} U {1, ..., K}`, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct LacunarySet<T: Real> {
    j_max: usize,
    k_max: usize,
    values: Vec<T>,
}

impl<T: Real> LacunarySet<T> {
    pub fn new(j_max: usize, k_max: usize) -> Result<Self> {
        if j_max == 0 || k_max == 0 {
            return Err(Error::Precondition(format!(
                "lacunary depths must be positive, got (J, K) = ({j_max}, {k_max})"
            )));
        }
        let mut values: Vec<T> = (1..=j_max).rev().map(|j| T::lit(0.5f64.powi(j as i32))).collect();
        values.extend((1..=k_max).map(T::from_usize_lossy));
        Ok(Self { j_max, k_max, values })
    }

    pub fn depths(&self) -> (usize, usize) {
        (self.j_max, self.k_max)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The dyadic radii `2^{-J}, ..., 1/2`.
    pub fn dyadic(&self) -> &[T] {
        &self.values[..self.j_max]
    }

    /// The integer radii `1, ..., K`.
    pub fn integers(&self) -> &[T] {
        &self.values[self.j_max..]
    }
}

/// Pointwise maxima of `|m^alpha_t(D) f|` over the dyadic and the integer radii.
#[derive(Debug, Clone)]
pub struct MaximalParts<T: Real> {
    /// Supremum over `t = 2^{-j}`.
    pub local: RadialFunction<T>,
    /// Supremum over integer `t`.
    pub global: RadialFunction<T>,
}

impl<T: Real> MaximalParts<T> {
    /// The full lacunary maximal function, `max(local, global)`.
    pub fn combined(&self) -> Result<RadialFunction<T>> {
        self.local.max_abs(&self.global)
    }
}

/// Symbol rows for every radius of a lacunary set, reusable across inputs.
#[derive(Debug, Clone)]
pub struct LacunaryMaximal<T: Real> {
    tr: Arc<SphericalTransform<T>>,
    alpha: Cplx<T>,
    set: LacunarySet<T>,
    rows: Vec<Vec<Cplx<T>>>,
}

impl<T: Real> LacunaryMaximal<T> {
    pub fn new(tr: Arc<SphericalTransform<T>>, alpha: Cplx<T>, set: LacunarySet<T>) -> Result<Self> {
        let rows = symbol_rows(&tr, alpha, set.values())?;
        Ok(Self { tr, alpha, set, rows })
    }

    pub fn alpha(&self) -> Cplx<T> {
        self.alpha
    }

    pub fn set(&self) -> &LacunarySet<T> {
        &self.set
    }

    /// `|m^alpha_t(D) f|` for the radius at position `index` of the set.
    fn single(&self, big: &SpectralFunction<T>, index: usize) -> Result<RadialFunction<T>> {
        let prod = big.multiply(&self.rows[index])?;
        Ok(self.tr.inverse(&prod)?.value.abs())
    }

    fn sup_over(&self, big: &SpectralFunction<T>, range: std::ops::Range<usize>) -> Result<RadialFunction<T>> {
        // Per-radius results land in fixed slots and are reduced in index order.
        let parts: Vec<RadialFunction<T>> = range
            .into_par_iter()
            .map(|i| self.single(big, i))
            .collect::<Result<_>>()?;
        let mut it = parts.into_iter();
        let first = it.next().ok_or(Error::Empty("radius set"))?;
        it.try_fold(first, |acc, g| acc.max_abs(&g))
    }

    pub fn parts(&self, f: &RadialFunction<T>) -> Result<MaximalParts<T>> {
        let big = self.tr.forward(f)?.value;
        let j = self.set.j_max;
        Ok(MaximalParts {
            local: self.sup_over(&big, 0..j)?,
            global: self.sup_over(&big, j..self.rows.len())?,
        })
    }

    pub fn apply(&self, f: &RadialFunction<T>) -> Result<RadialFunction<T>> {
        self.parts(f)?.combined()
    }

    /// `|m^alpha_t(D) f|` for one radius of the set.
    pub fn at_radius(&self, f: &RadialFunction<T>, index: usize) -> Result<RadialFunction<T>> {
        if index >= self.rows.len() {
            return Err(Error::Domain(format!("radius index {index} outside the lacunary set")));
        }
        self.single(&self.tr.forward(f)?.value, index)
    }
}

/// `L^alpha f = sup_{t in Lambda} |m^alpha_t(D) f|`.
pub fn lacunary_maximal<T: Real>(
    tr: &Arc<SphericalTransform<T>>,
    alpha: Cplx<T>,
    f: &RadialFunction<T>,
    set: &LacunarySet<T>,
) -> Result<RadialFunction<T>> {
    LacunaryMaximal::new(Arc::clone(tr), alpha, set.clone())?.apply(f)
}

/// `(l, g)`: the suprema over the dyadic and the integer radii.
pub fn local_global_parts<T: Real>(
    tr: &Arc<SphericalTransform<T>>,
    alpha: Cplx<T>,
    f: &RadialFunction<T>,
    set: &LacunarySet<T>,
) -> Result<(RadialFunction<T>, RadialFunction<T>)> {
    let p = LacunaryMaximal::new(Arc::clone(tr), alpha, set.clone())?.parts(f)?;
    Ok((p.local, p.global))
}

/// `f*(x) = max_{t in ts} |B(x,t)|^{-1} int_{B(x,t)} |f|`, every ball
/// average computed by direct quadrature on the grid of `f`.
pub fn hl_maximal<T: Real>(f: &RadialFunction<T>, ts: &[T]) -> Result<RadialFunction<T>> {
    if ts.is_empty() {
        return Err(Error::Empty("radius grid"));
    }
    let n = f.grid().dimension();
    let abs = f.abs();
    let mut out = RadialFunction::zeros(Arc::clone(f.grid()));
    for &t in ts {
        let avg = convolve_profile(&abs, &KernelProfile::ball_average(n, t)?)?;
        out = out.max_abs(&avg)?;
    }
    Ok(out)
}

/// Pointwise maximum of values, as a nonnegative function.
pub fn pointwise_max<T: Real>(fs: &[RadialFunction<T>]) -> Result<RadialFunction<T>> {
    let mut it = fs.iter();
    let first = it.next().ok_or(Error::Empty("function list"))?.abs();
    it.try_fold(first, |acc, g| acc.max_abs(g))
}

/// `true` when `a <= b (1 + rel) + abs` at every node.
pub fn dominated<T: Real>(a: &RadialFunction<T>, b: &RadialFunction<T>, rel: T, abs: T) -> bool {
    a.values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| x.norm() <= y.norm() * (T::one() + rel) + abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dimension;
    use crate::num::re;
    use crate::operators::means::{spherical_mean, Route};
    use crate::transform::RadialGrid;
    use std::sync::OnceLock;

    fn tr2() -> Arc<SphericalTransform<f64>> {
        static TR: OnceLock<Arc<SphericalTransform<f64>>> = OnceLock::new();
        Arc::clone(TR.get_or_init(|| Arc::new(SphericalTransform::default_for(Dimension::new(2).unwrap()).unwrap())))
    }

    fn gaussian(tr: &SphericalTransform<f64>) -> RadialFunction<f64> {
        RadialFunction::from_fn(Arc::clone(tr.radial_grid()), |r| (-r * r).exp()).unwrap()
    }

    #[test]
    fn lacunary_set_layout() {
        let s = LacunarySet::<f64>::new(3, 2).unwrap();
        assert_eq!(s.values(), &[0.125, 0.25, 0.5, 1.0, 2.0]);
        assert_eq!(s.dyadic(), &[0.125, 0.25, 0.5]);
        assert_eq!(s.integers(), &[1.0, 2.0]);
        assert!(LacunarySet::<f64>::new(0, 2).is_err());
    }

    #[test]
    fn singleton_and_monotone() {
        let tr = tr2();
        let f = gaussian(&tr);
        let set = LacunarySet::new(1, 1).unwrap();
        let op = LacunaryMaximal::new(Arc::clone(&tr), re(0.0), set).unwrap();
        let half = spherical_mean(&tr, &f, 0.5, Route::Spectral).unwrap().abs();
        let single = op.at_radius(&f, 0).unwrap();
        for (a, b) in single.values().iter().zip(half.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let small = lacunary_maximal(&tr, re(0.0), &f, &LacunarySet::new(5, 5).unwrap()).unwrap();
        let large = lacunary_maximal(&tr, re(0.0), &f, &LacunarySet::new(10, 10).unwrap()).unwrap();
        assert!(dominated(&small, &large, 0.0, 0.0));
    }

    #[test]
    fn parts_bracket_the_maximal_function() {
        let tr = tr2();
        let f = gaussian(&tr);
        let set = LacunarySet::new(6, 6).unwrap();
        let (l, g) = local_global_parts(&tr, re(0.0), &f, &set).unwrap();
        let full = lacunary_maximal(&tr, re(0.0), &f, &set).unwrap();
        assert!(dominated(&l, &full, 0.0, 0.0) && dominated(&g, &full, 0.0, 0.0));
        assert!(dominated(&full, &l.add(&g).unwrap(), 0.0, 0.0));
        let z = RadialFunction::zeros(Arc::clone(tr.radial_grid()));
        let (lz, gz) = local_global_parts(&tr, re(0.0), &z, &set).unwrap();
        assert!(lz.is_zero() && gz.is_zero());
    }

    #[test]
    fn value_near_origin_is_max_of_profile() {
        let tr = tr2();
        let f = gaussian(&tr);
        let set = LacunarySet::new(20, 20).unwrap();
        let op = LacunaryMaximal::new(Arc::clone(&tr), re(0.0), set.clone()).unwrap();
        let mut at0 = 0.0f64;
        for i in 0..set.values().len() {
            let big = tr.forward(&f).unwrap().value.multiply(&op.rows[i]).unwrap();
            at0 = at0.max(tr.inverse(&big).unwrap().value.eval(0.0).norm());
        }
        let oracle = set.values().iter().fold(0.0f64, |m, &t| m.max((-t * t).exp()));
        assert!((at0 - oracle).abs() < 1e-6, "{at0} vs {oracle}");
    }

    #[test]
    fn hardy_littlewood_dominates_ball_averages() {
        let g = Arc::new(RadialGrid::new(Dimension::new(2).unwrap(), 12.0, 256).unwrap());
        let f = RadialFunction::from_fn(Arc::clone(&g), |r| if r < 1.0 { 1.0 } else { 0.0 }).unwrap();
        let ts = [0.25, 0.5, 1.0, 2.0];
        let fstar = hl_maximal(&f, &ts).unwrap();
        for &t in &ts {
            let avg = convolve_profile(&f, &KernelProfile::ball_average(g.dimension(), t).unwrap()).unwrap();
            assert!(dominated(&avg, &fstar, 0.0, 0.0));
        }
        let z = RadialFunction::zeros(Arc::clone(&g));
        assert!(hl_maximal(&z, &ts).unwrap().is_zero());
        assert!(hl_maximal(&f, &[]).is_err());
    }
}
