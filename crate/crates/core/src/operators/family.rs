//! Radial test functions over which empirical operator norms are taken.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::num::Real;
use crate::transform::{RadialFunction, RadialGrid, SphericalTransform};

/// A parametrised radial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemberSpec {
    /// `exp(-a r^2)`.
    Gaussian { a: f64 },
    /// `exp(-4 (r-R)^2) + exp(-4 (r+R)^2)`, even in `r` and so smooth at the origin.
    ShiftedBump { center: f64 },
    /// `(1 + x + x^2/3) exp(-x)` with `x = b r`. The polynomial cancels the
    /// odd terms of order 1 and 3 at the origin, so the profile is smooth to
    /// fifth order there and its transform decays like `lambda^{-(n+5)}`.
    ExpTail { b: f64 },
    /// `(erf((r - inner)/width) - erf((r - outer)/width)) / 2`.
    SmoothedAnnulus { inner: f64, outer: f64, width: f64 },
}

impl MemberSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::ShiftedBump { .. } => "bump",
            Self::ExpTail { .. } => "exptail",
            Self::SmoothedAnnulus { .. } => "annulus",
        }
    }

    pub fn profile<T: Real>(&self, r: T) -> T {
        let lit = T::lit;
        match *self {
            Self::Gaussian { a } => (-lit(a) * r * r).exp(),
            Self::ShiftedBump { center } => {
                let c = lit(center);
                let four = lit(4.0);
                (-four * (r - c) * (r - c)).exp() + (-four * (r + c) * (r + c)).exp()
            }
            Self::ExpTail { b } => {
                let x = lit(b) * r;
                (T::one() + x + x * x / lit(3.0)) * (-x).exp()
            }
            Self::SmoothedAnnulus { inner, outer, width } => {
                let w = lit(width);
                ((r - lit(inner)) / w).erf() / lit(2.0) - ((r - lit(outer)) / w).erf() / lit(2.0)
            }
        }
    }

    /// Default members for dimension `n`.
    pub fn defaults(n: Dimension) -> Vec<MemberSpec> {
        let nf = n.get() as f64;
        let mut v: Vec<MemberSpec> = [0.25, 1.0, 4.0].iter().map(|&a| Self::Gaussian { a }).collect();
        v.extend([1.0, 2.0, 4.0].iter().map(|&center| Self::ShiftedBump { center }));
        v.extend([nf + 1.0, nf + 2.0].iter().map(|&b| Self::ExpTail { b }));
        v.push(Self::SmoothedAnnulus {
            inner: 1.5,
            outer: 3.0,
            width: 0.25,
        });
        v
    }
}

impl fmt::Display for MemberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Gaussian { a } => write!(f, "gaussian({a})"),
            Self::ShiftedBump { center } => write!(f, "bump({center})"),
            Self::ExpTail { b } => write!(f, "exptail({b})"),
            Self::SmoothedAnnulus { inner, outer, width } => write!(f, "annulus({inner};{outer};{width})"),
        }
    }
}

impl FromStr for MemberSpec {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `gaussian(0.25)` or `annulus(1.5;3;0.25)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config {
            key: "family".into(),
            msg: format!("{msg} in member `{s}`"),
        };
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| bad("missing `(`"))?;
        if !s.ends_with(')') {
            return Err(bad("missing `)`"));
        }
        let name = &s[..open];
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(';')
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad("non-numeric parameter")))
            .collect::<Result<_>>()?;
        if args.iter().any(|a| !a.is_finite()) {
            return Err(bad("non-finite parameter"));
        }
        let one = |args: &[f64]| {
            if args.len() == 1 && args[0] > 0.0 {
                Ok(args[0])
            } else {
                Err(bad("expected one positive parameter"))
            }
        };
        match name {
            "gaussian" => Ok(Self::Gaussian { a: one(&args)? }),
            "bump" => Ok(Self::ShiftedBump { center: one(&args)? }),
            "exptail" => Ok(Self::ExpTail { b: one(&args)? }),
            "annulus" => match args[..] {
                [inner, outer, width] if 0.0 <= inner && inner < outer && width > 0.0 => {
                    Ok(Self::SmoothedAnnulus { inner, outer, width })
                }
                _ => Err(bad("expected inner;outer;width with 0 <= inner < outer, width > 0")),
            },
            _ => Err(bad("unknown member kind")),
        }
    }
}

/// A sampled family member.
#[derive(Debug, Clone)]
pub struct FamilyMember<T: Real> {
    pub spec: MemberSpec,
    pub f: RadialFunction<T>,
}

/// Nonempty set of sampled test functions; every member passes both
/// transform tail checks on the grid it was built for.
#[derive(Debug, Clone)]
pub struct TestFamily<T: Real> {
    members: Vec<FamilyMember<T>>,
}

impl<T: Real> TestFamily<T> {
    pub fn new(tr: &SphericalTransform<T>, specs: &[MemberSpec]) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Empty("test family"));
        }
        let grid: Arc<RadialGrid<T>> = Arc::clone(tr.radial_grid());
        let members = specs
            .iter()
            .map(|&spec| {
                let f = RadialFunction::from_fn(Arc::clone(&grid), |r| spec.profile(r))?;
                if f.is_zero() {
                    return Err(Error::Precondition(format!(
                        "family member {spec} vanishes on the grid"
                    )));
                }
                let big = tr.forward(&f)?.value;
                tr.check_inverse_tail(&big)?;
                Ok(FamilyMember { spec, f })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { members })
    }

    pub fn default_for(tr: &SphericalTransform<T>) -> Result<Self> {
        Self::new(tr, &MemberSpec::defaults(tr.dimension()))
    }

    pub fn members(&self) -> &[FamilyMember<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `"gaussian(0.25)|bump(1)|..."`.
    pub fn descriptor(&self) -> String {
        self.members
            .iter()
            .map(|m| m.spec.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_spec_round_trips_through_text() {
        for spec in MemberSpec::defaults(Dimension::new(3).unwrap()) {
            let back: MemberSpec = spec.to_string().parse().unwrap();
            assert_eq!(back, spec);
        }
        assert!("gaussian(-1)".parse::<MemberSpec>().is_err());
        assert!("wave(1)".parse::<MemberSpec>().is_err());
        assert!("annulus(3;1;0.2)".parse::<MemberSpec>().is_err());
    }

    #[test]
    fn bump_is_even() {
        let s = MemberSpec::ShiftedBump { center: 2.0 };
        assert!((s.profile(0.3_f64) - s.profile(-0.3_f64)).abs() < 1e-16);
    }

    #[test]
    fn empty_family_is_rejected() {
        let tr = SphericalTransform::<f64>::new(
            Arc::new(RadialGrid::new(Dimension::new(2).unwrap(), 12.0, 256).unwrap()),
            Arc::new(crate::transform::SpectralGrid::new(Dimension::new(2).unwrap(), 64.0, 1024).unwrap()),
        )
        .unwrap();
        assert!(matches!(TestFamily::new(&tr, &[]), Err(Error::Empty(_))));
    }
}
