//! Dense `phi_lambda(r)` matrix for real `lambda`, by a fourth-order Magnus
//! integrator for `u = sinh^rho(r) phi`, which solves
//! `u'' + (lambda^2 + rho (1 - rho) / sinh^2 r) u = 0`.

use rayon::prelude::*;

use super::phi_closed_form_n3;
use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::num::{ln_sinh, Real};

/// Relative step near the origin, where the potential varies on scale `r`.
const REL_STEP: f64 = 0.01;
const MAX_STEP: f64 = 0.01;
const START: f64 = 1e-3;
const SERIES_TERMS: usize = 200;
const SERIES_RADIUS: f64 = 0.5;
const SERIES_PHASE: f64 = 4.0;

/// `phi_{lambda_i}(r_j)` for all pairs, stored row-major by `lambda`.
#[derive(Debug, Clone)]
pub struct PhiTable<T: Real> {
    n: Dimension,
    lambdas: Vec<T>,
    radii: Vec<T>,
    values: Vec<T>,
}

struct Step<T> {
    start: T,
    h: T,
    v1: T,
    v2: T,
    /// Index into `radii` whose value is reached at the end of this step.
    targets: std::ops::Range<usize>,
}

impl<T: Real> PhiTable<T> {
    /// Builds the table. `radii` may be in any order; `lambdas` must be real.
    pub fn new(n: Dimension, lambdas: &[T], radii: &[T]) -> Result<Self> {
        if radii.iter().any(|&r| !(r >= T::zero()) || !r.is_finite()) {
            return Err(Error::Domain("radii must be finite and >= 0".into()));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::Domain("spectral nodes must be finite".into()));
        }
        let nr = radii.len();
        let mut values = vec![T::zero(); lambdas.len() * nr];
        if n.get() == 3 {
            values
                .par_chunks_mut(nr.max(1))
                .zip(lambdas.par_iter())
                .for_each(|(row, &l)| {
                    for (v, &r) in row.iter_mut().zip(radii) {
                        *v = phi_closed_form_n3(l, r);
                    }
                });
        } else if nr > 0 && !lambdas.is_empty() {
            let lmax = lambdas.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
            let r0 = T::lit(START).min(T::lit(0.25) / lmax.max(T::one()));
            let mut order: Vec<usize> = (0..nr).collect();
            order.sort_by(|&a, &b| radii[a].partial_cmp(&radii[b]).expect("finite radii"));
            let first_ode = order.partition_point(|&j| radii[j] <= r0);
            let steps = build_mesh(n, r0, &order[first_ode..], radii, first_ode);
            let rho: T = n.rho();
            let ln_sinh_targets: Vec<T> = radii
                .iter()
                .map(|&r| if r > T::zero() { ln_sinh(r) } else { T::zero() })
                .collect();
            values.par_chunks_mut(nr).zip(lambdas.par_iter()).for_each(|(row, &l)| {
                let l2 = l * l;
                // The series is cancellation-free while |l| r stays O(1).
                let r_series = T::lit(SERIES_RADIUS).min(T::lit(SERIES_PHASE) / l.abs());
                let i0 = steps.partition_point(|st| st.start <= r_series).max(1) - 1;
                let (start, before) = if steps.is_empty() {
                    (r0, first_ode)
                } else {
                    (steps[i0].start, steps[i0].targets.start)
                };
                for &j in &order[..before] {
                    row[j] = series(n, l2, radii[j]).0;
                }
                let (phi0, dphi0) = series(n, l2, start);
                let (s0, c0) = (start.sinh(), start.cosh());
                let sr = s0.powf(rho);
                let mut u = sr * phi0;
                let mut du = rho * c0 * s0.powf(rho - T::one()) * phi0 + sr * dphi0;
                for step in &steps[i0.min(steps.len())..] {
                    let (nu, ndu) = magnus_step(step, l2, u, du);
                    u = nu;
                    du = ndu;
                    for &j in &order[step.targets.clone()] {
                        row[j] = u * (-rho * ln_sinh_targets[j]).exp();
                    }
                }
            });
        }
        Ok(Self {
            n,
            lambdas: lambdas.to_vec(),
            radii: radii.to_vec(),
            values,
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    #[inline]
    pub fn get(&self, i_lambda: usize, j_r: usize) -> T {
        self.values[i_lambda * self.radii.len() + j_r]
    }

    /// Row of `phi_{lambda_i}` over all radii.
    pub fn row(&self, i_lambda: usize) -> &[T] {
        let nr = self.radii.len();
        &self.values[i_lambda * nr..(i_lambda + 1) * nr]
    }
}

fn build_mesh<T: Real>(n: Dimension, r0: T, order: &[usize], radii: &[T], offset: usize) -> Vec<Step<T>> {
    let rho: T = n.rho();
    let pot = rho * (T::one() - rho);
    let sq3 = T::lit(3f64.sqrt() / 6.0);
    let half = T::lit(0.5);
    let mut steps = Vec::new();
    let mut cur = r0;
    let mut k = 0;
    while k < order.len() {
        let next_target = radii[order[k]];
        let h_pref = (cur * T::lit(REL_STEP)).min(T::lit(MAX_STEP));
        let end = if cur + h_pref >= next_target {
            next_target
        } else {
            cur + h_pref
        };
        let h = end - cur;
        let start_k = k;
        while k < order.len() && radii[order[k]] <= end {
            k += 1;
        }
        if h > T::zero() {
            let r1 = cur + (half - sq3) * h;
            let r2 = cur + (half + sq3) * h;
            let v = |r: T| {
                let s = r.sinh();
                pot / (s * s)
            };
            steps.push(Step {
                start: cur,
                h,
                v1: v(r1),
                v2: v(r2),
                targets: offset + start_k..offset + k,
            });
        } else if let Some(last) = steps.last_mut() {
            // Coincident radii land on the previous step's end.
            last.targets.end = offset + k;
        } else {
            // Target equal to r0 itself is handled by the series path.
            unreachable!("targets at r0 are evaluated by the series");
        }
        cur = end;
    }
    steps
}

#[inline]
fn magnus_step<T: Real>(step: &Step<T>, l2: T, u: T, du: T) -> (T, T) {
    let h = step.h;
    let q1 = l2 + step.v1;
    let q2 = l2 + step.v2;
    let qbar = (q1 + q2) * T::lit(0.5);
    let d = T::lit(3f64.sqrt() / 12.0) * h * h * (q2 - q1);
    let theta2 = h * h * qbar - d * d;
    // exp(Omega) = c I + s Omega with Omega = [[d, h], [-h qbar, -d]].
    let (c, s) = if theta2.abs() < T::lit(1e-8) {
        (
            T::one() - theta2 / T::lit(2.0) + theta2 * theta2 / T::lit(24.0),
            T::one() - theta2 / T::lit(6.0) + theta2 * theta2 / T::lit(120.0),
        )
    } else if theta2 > T::zero() {
        let th = theta2.sqrt();
        (th.cos(), th.sin() / th)
    } else {
        let th = (-theta2).sqrt();
        (th.cosh(), th.sinh() / th)
    };
    let nu = c * u + s * (d * u + h * du);
    let ndu = c * du + s * (-h * qbar * u - d * du);
    (nu, ndu)
}

/// `phi` and `d phi / dr` from the hypergeometric series
/// `2F1(rho + i l, rho - i l; n/2; -sinh^2(r/2))`, valid for small `r` and `l r`.
fn series<T: Real>(n: Dimension, l2: T, r: T) -> (T, T) {
    let rho: T = n.rho();
    let c = T::from_usize_lossy(n.get()) / T::lit(2.0);
    let sh = (r / T::lit(2.0)).sinh();
    let z = -sh * sh;
    let f = |shift: T| {
        // 2F1(rho+shift +- i l; c+shift; z) with numerator products (rho+shift+j)^2 + l^2.
        let mut term = T::one();
        let mut sum = T::one();
        for j in 0..SERIES_TERMS {
            let jf = T::from_usize_lossy(j);
            let a = rho + shift + jf;
            term = term * (a * a + l2) / ((c + shift + jf) * (jf + T::one())) * z;
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        sum
    };
    let phi = f(T::zero());
    let dphi = -(rho * rho + l2) * r.sinh() / T::from_usize_lossy(n.get()) * f(T::one());
    (phi, dphi)
}
