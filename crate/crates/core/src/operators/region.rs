//! Boundaries of the `(1/p, Re alpha)` regions where the maximal operators
//! are bounded, and the complex-interpolation line between two exponents.

use crate::error::{Error, Result};
use crate::geometry::Dimension;

/// Which maximal operator a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    /// The lacunary maximal operator.
    Lacunary,
    /// The full spherical maximal operator over all `t > 0`.
    Full,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lacunary => "lacunary",
            Self::Full => "full",
        }
    }
}

/// A point `(1/p, Re alpha)`; `inv_p` lies in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub inv_p: f64,
    pub re_alpha: f64,
}

impl RegionPoint {
    pub fn new(inv_p: f64, re_alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&inv_p) {
            return Err(Error::Domain(format!("1/p must lie in [0, 1], got {inv_p}")));
        }
        Ok(Self { inv_p, re_alpha })
    }
}

/// `p_n`: 4 for `n = 2`, `2(n+1)/(n-1)` otherwise.
pub fn critical_exponent(n: Dimension) -> f64 {
    let nf = n.get() as f64;
    if n.get() == 2 {
        4.0
    } else {
        2.0 * (nf + 1.0) / (nf - 1.0)
    }
}

/// Lower bound on `Re alpha` for boundedness on `L^p`; `p = inf` is allowed.
///
/// Lacunary: `(n-1)|1/p - 1/2| - (n-1)/2`.
/// Full: `(1-n) + n/p` for `p <= 2`,
/// `(2-n)/p - (p-2)/(p p_n (p_n - 2))` for `2 < p <= p_n`,
/// `(2-n)/p - 1/(p p_n)` beyond.
pub fn region_threshold(p: f64, n: Dimension, which: Curve) -> Result<f64> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::Domain(format!("exponent must satisfy p > 1, got {p}")));
    }
    let nf = n.get() as f64;
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(match which {
        Curve::Lacunary => (nf - 1.0) * (inv - 0.5).abs() - (nf - 1.0) / 2.0,
        Curve::Full => {
            let pn = critical_exponent(n);
            if p <= 2.0 {
                (1.0 - nf) + nf * inv
            } else if p <= pn {
                (2.0 - nf) * inv - (p - 2.0) * inv / (pn * (pn - 2.0))
            } else {
                (2.0 - nf) * inv - inv / pn
            }
        }
    })
}

/// Named vertices of both boundaries:
/// lacunary `O, D, E` and full `O, A, B, C`.
pub fn anchor_points(n: Dimension) -> Vec<(&'static str, Curve, RegionPoint)> {
    let nf = n.get() as f64;
    let pn = critical_exponent(n);
    let pt = |x: f64, y: f64| RegionPoint { inv_p: x, re_alpha: y };
    vec![
        ("O", Curve::Lacunary, pt(0.0, 0.0)),
        ("D", Curve::Lacunary, pt(0.5, (1.0 - nf) / 2.0)),
        ("E", Curve::Lacunary, pt(1.0, 0.0)),
        ("O", Curve::Full, pt(0.0, 0.0)),
        ("A", Curve::Full, pt(1.0 / pn, (2.0 - nf) / pn - 1.0 / (pn * pn))),
        ("B", Curve::Full, pt(0.5, (2.0 - nf) / 2.0)),
        ("C", Curve::Full, pt(1.0, 1.0)),
    ]
}

/// Samples of a boundary at `count` equispaced values of `1/p` in `[0, 1)`,
/// together with the limit at `1/p = 1`.
pub fn polyline(n: Dimension, which: Curve, count: usize) -> Result<Vec<RegionPoint>> {
    if count < 2 {
        return Err(Error::Precondition("polyline needs at least two samples".into()));
    }
    let mut out = Vec::with_capacity(count + 1);
    for k in 0..count {
        let inv = k as f64 / count as f64;
        let p = if inv == 0.0 { f64::INFINITY } else { 1.0 / inv };
        out.push(RegionPoint {
            inv_p: inv,
            re_alpha: region_threshold(p, n, which)?,
        });
    }
    // Limits at p = 1: vertex E of the lacunary curve, vertex C of the full one.
    let end = match which {
        Curve::Lacunary => 0.0,
        Curve::Full => 1.0,
    };
    out.push(RegionPoint {
        inv_p: 1.0,
        re_alpha: end,
    });
    Ok(out)
}

/// `Re alpha` on the interpolation line through `(1/p0, alpha0)` and `(1/2, alpha1)`:
/// `alpha0 (1/p - 1/2)/(1/p0 - 1/2) + alpha1 (1/p0 - 1/p)/(1/p0 - 1/2)`.
pub fn interpolation_alpha(alpha0: f64, p0: f64, alpha1: f64, p: f64) -> Result<f64> {
    if !(p0 > 1.0 && p0 < 2.0) {
        return Err(Error::Domain(format!("p0 must lie in (1, 2), got {p0}")));
    }
    if !(p >= p0 && p <= 2.0) {
        return Err(Error::Domain(format!("p must lie in [p0, 2] = [{p0}, 2], got {p}")));
    }
    let d = 1.0 / p0 - 0.5;
    Ok(alpha0 * (1.0 / p - 0.5) / d + alpha1 * (1.0 / p0 - 1.0 / p) / d)
}

/// Minimum of [`interpolation_alpha`] at fixed `p` over the admissible grid
/// `alpha0 = delta`, `alpha1 = (1-n)/2 + delta`, `p0 = 1 + delta` for the given
/// offsets `delta > 0` (each combination with `p0 <= p`).
pub fn interpolation_infimum(n: Dimension, p: f64, deltas: &[f64]) -> Result<f64> {
    let nf = n.get() as f64;
    let mut best = f64::INFINITY;
    for &d0 in deltas {
        for &d1 in deltas {
            for &dp in deltas {
                let p0 = 1.0 + dp;
                if d0 <= 0.0 || d1 <= 0.0 || dp <= 0.0 || p0 >= 2.0 || p0 > p {
                    continue;
                }
                best = best.min(interpolation_alpha(d0, p0, (1.0 - nf) / 2.0 + d1, p)?);
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Empty("admissible interpolation grid"))
    }
}

/// The limiting value `1 - n + (n-1)/p` approached by [`interpolation_infimum`].
pub fn interpolation_limit(n: Dimension, p: f64) -> f64 {
    let nf = n.get() as f64;
    1.0 - nf + (nf - 1.0) / p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn lacunary_anchors() {
        for n in [2, 3, 5] {
            let nf = n as f64;
            assert_eq!(
                region_threshold(2.0, dim(n), Curve::Lacunary).unwrap(),
                (1.0 - nf) / 2.0
            );
            assert_eq!(region_threshold(f64::INFINITY, dim(n), Curve::Lacunary).unwrap(), 0.0);
            assert!(region_threshold(1.0 + 1e-12, dim(n), Curve::Lacunary).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn full_anchors() {
        for n in [2, 3, 4] {
            let nf = n as f64;
            let pn = critical_exponent(dim(n));
            assert_eq!(region_threshold(2.0, dim(n), Curve::Full).unwrap(), (2.0 - nf) / 2.0);
            let a = region_threshold(pn, dim(n), Curve::Full).unwrap();
            assert!((a - ((2.0 - nf) / pn - 1.0 / (pn * pn))).abs() < 1e-15);
            // Continuity at p_n from above.
            let above = region_threshold(pn * (1.0 + 1e-12), dim(n), Curve::Full).unwrap();
            assert!((above - a).abs() < 1e-10);
        }
        assert_eq!(critical_exponent(dim(2)), 4.0);
        assert_eq!(critical_exponent(dim(3)), 4.0);
        assert!(region_threshold(1.0, dim(2), Curve::Full).is_err());
    }

    #[test]
    fn lacunary_below_full() {
        for n in [2, 3, 4] {
            for k in 0..100 {
                let p = 1.0 + 31.0 * (k as f64 + 1.0) / 100.0;
                let l = region_threshold(p, dim(n), Curve::Lacunary).unwrap();
                let f = region_threshold(p, dim(n), Curve::Full).unwrap();
                assert!(l < f, "n={n} p={p}: {l} vs {f}");
            }
        }
    }

    #[test]
    fn polyline_contains_anchors() {
        let line = polyline(dim(2), Curve::Lacunary, 100).unwrap();
        assert!(line.iter().any(|q| q.inv_p == 0.5 && q.re_alpha == -0.5));
        assert_eq!(
            line.last().unwrap(),
            &RegionPoint {
                inv_p: 1.0,
                re_alpha: 0.0
            }
        );
        let full = polyline(dim(3), Curve::Full, 100).unwrap();
        assert_eq!(full.last().unwrap().re_alpha, 1.0);
    }

    #[test]
    fn interpolation_endpoints_and_infimum() {
        assert!((interpolation_alpha(0.3, 1.5, -0.4, 1.5).unwrap() - 0.3).abs() < 1e-15);
        assert!((interpolation_alpha(0.3, 1.5, -0.4, 2.0).unwrap() + 0.4).abs() < 1e-15);
        assert!(interpolation_alpha(0.3, 1.5, -0.4, 1.2).is_err());
        let deltas: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
        for n in [2, 3] {
            for &p in &[1.25, 1.5, 1.9] {
                let inf = interpolation_infimum(dim(n), p, &deltas).unwrap();
                assert!((inf - interpolation_limit(dim(n), p)).abs() < 1e-3);
            }
        }
    }
}
