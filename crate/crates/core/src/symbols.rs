//! The complex-order multiplier symbols `m^alpha_t`, their kernels, the heat
//! symbol, and fitted-constant checks of the symbol estimates.
//!
//! The symbol is evaluated as
//! `m^alpha_t(lambda) = A(alpha, t) int_0^t (cosh t - cosh s)^{alpha + (n-3)/2} cos(lambda s) ds`
//! with
//! `A = 2^{rho + alpha} Gamma(n/2) / (sqrt(pi) Gamma(alpha + rho)) * e^{alpha t} (e^t - 1)^{-2 alpha} sinh(t)^{2-n}`,
//! the normalisation under which `m^0_t(lambda) = phi_lambda(t)`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, NumericalFailure, Result};
use crate::geometry::Dimension;
use crate::num::{ln_sinh, re, Cplx, Real};
use crate::quadrature::Tolerance;
use crate::specfun::{ln_gamma_real, log_gamma_complex, mehler_conical_integral_with, mehler_exponent, MehlerRule};

/// Margin kept from the boundary `Re alpha = (1-n)/2` of the admissible half-plane.
pub const ALPHA_MARGIN: f64 = 1e-3;

/// `(n, alpha, t)` identifying the symbol `m^alpha_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSpec<T: Real> {
    pub n: Dimension,
    pub alpha: Cplx<T>,
    pub t: T,
}

impl<T: Real> MultiplierSpec<T> {
    pub fn new(n: Dimension, alpha: Cplx<T>, t: T) -> Result<Self> {
        check_alpha(n, alpha)?;
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::Precondition(format!("radius t must be finite and > 0, got {t}")));
        }
        Ok(Self { n, alpha, t })
    }

    /// Exponent `alpha + (n-3)/2` of the Mehler integrand.
    pub fn beta(&self) -> Cplx<T> {
        mehler_exponent(self.alpha, self.n)
    }

    pub fn with_t(&self, t: T) -> Result<Self> {
        Self::new(self.n, self.alpha, t)
    }
}

/// Errors unless `Re alpha > (1-n)/2 + ALPHA_MARGIN`.
pub fn check_alpha<T: Real>(n: Dimension, alpha: Cplx<T>) -> Result<()> {
    let bound = (T::one() - T::from_usize_lossy(n.get())) / T::lit(2.0) + T::lit(ALPHA_MARGIN);
    if alpha.re > bound && alpha.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "Re alpha = {} must exceed (1-n)/2 + {ALPHA_MARGIN} = {bound} for n = {n}",
            alpha.re
        )))
    }
}

/// `ln(e^t - 1)`, accurate for small and large `t`.
fn ln_expm1<T: Real>(t: T) -> T {
    if t > T::lit(30.0) {
        t + (-(-t).exp()).ln_1p()
    } else {
        t.exp_m1().ln()
    }
}

/// Prefactor `A(alpha, t)` multiplying the Mehler integral.
pub fn symbol_prefactor<T: Real>(spec: &MultiplierSpec<T>) -> Result<Cplx<T>> {
    let n = spec.n;
    let rho: T = n.rho();
    let nf = T::from_usize_lossy(n.get());
    let two = T::lit(2.0);
    let a = spec.alpha;
    let t = spec.t;
    let ln = (a + rho) * two.ln() + re(ln_gamma_real(nf / two) - T::PI().ln() / two) - log_gamma_complex(a + rho)?
        + a * t
        - a * two * ln_expm1(t)
        + re((two - nf) * ln_sinh(t));
    Ok(ln.exp())
}

/// Tolerance used by the single-point symbol evaluators.
fn symbol_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-14,
        rel: 1e-11,
        max_evals: 1 << 20,
    }
}

/// `m^alpha_t(lambda)` for real `lambda`.
pub fn symbol_m<T: Real>(spec: &MultiplierSpec<T>, lambda: T) -> Result<Cplx<T>> {
    let integral = mehler_conical_integral_with(lambda, spec.t, spec.alpha, spec.n, symbol_tolerance())?;
    Ok(symbol_prefactor(spec)? * integral)
}

/// `d/d lambda m^alpha_t(lambda)` by quadrature of the differentiated integrand.
pub fn symbol_m_derivative<T: Real>(spec: &MultiplierSpec<T>, lambda: T) -> Result<Cplx<T>> {
    SymbolTable::new(spec, lambda.abs().max(T::one()))?.derivative(lambda)
}

/// Symbol evaluator for many `lambda` at fixed `(n, alpha, t)`.
#[derive(Debug, Clone)]
pub struct SymbolTable<T: Real> {
    spec: MultiplierSpec<T>,
    prefactor: Cplx<T>,
    rule: MehlerRule<T>,
}

impl<T: Real> SymbolTable<T> {
    /// Valid for `|lambda| <= lambda_max`.
    pub fn new(spec: &MultiplierSpec<T>, lambda_max: T) -> Result<Self> {
        Ok(Self {
            spec: *spec,
            prefactor: symbol_prefactor(spec)?,
            rule: MehlerRule::new(spec.t, spec.beta(), lambda_max)?,
        })
    }

    pub fn spec(&self) -> &MultiplierSpec<T> {
        &self.spec
    }

    fn check_range(&self, lambda: T) -> Result<()> {
        if lambda.abs() > self.rule.lambda_max * (T::one() + T::lit(1e-12)) {
            Err(Error::Domain(format!(
                "lambda = {lambda} beyond the table range {}",
                self.rule.lambda_max
            )))
        } else {
            Ok(())
        }
    }

    pub fn eval(&self, lambda: T) -> Result<Cplx<T>> {
        self.check_range(lambda)?;
        Ok(self.prefactor * self.rule.eval(lambda))
    }

    pub fn derivative(&self, lambda: T) -> Result<Cplx<T>> {
        self.check_range(lambda)?;
        Ok(self.prefactor * self.rule.eval_derivative(lambda))
    }

    pub fn eval_many(&self, lambdas: &[T]) -> Result<Vec<Cplx<T>>> {
        lambdas.iter().map(|&l| self.eval(l)).collect()
    }
}

/// Kernel `K^alpha_t(r)` of the operator `M^alpha_t`, defined for `Re alpha > 0`:
/// `Gamma(alpha)^{-1} (2 e^t)^alpha (e^t - 1)^{-2 alpha} sinh(t)^{2-n} (cosh t - cosh r)^{alpha-1} 1_{[0,t]}(r)`.
///
/// Its spherical transform is `sigma_{n-1} m^alpha_t`.
/// At `r = t` the value is the finite limit for `alpha = 1`, zero for
/// `Re alpha > 1` and infinite otherwise.
pub fn kernel_k<T: Real>(spec: &MultiplierSpec<T>, r: T) -> Result<Cplx<T>> {
    let a = spec.alpha;
    if !(a.re > T::zero()) {
        return Err(Error::Precondition(format!(
            "kernel representation needs Re alpha > 0, got {a}"
        )));
    }
    let t = spec.t;
    if r < T::zero() {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    if r > t {
        return Ok(re(T::zero()));
    }
    let one = re(T::one());
    let two = T::lit(2.0);
    let nf = T::from_usize_lossy(spec.n.get());
    let ln_pref = -log_gamma_complex(a)? + a * (two.ln() + t) - a * two * ln_expm1(t) + re((two - nf) * ln_sinh(t));
    if r == t {
        if a == one {
            return Ok(ln_pref.exp());
        }
        if a.re > T::one() {
            return Ok(re(T::zero()));
        }
        return Ok(re(T::infinity()));
    }
    let ln_d = two.ln() + ln_sinh((t + r) / two) + ln_sinh((t - r) / two);
    Ok((ln_pref + (a - one) * ln_d).exp())
}

/// Majorants `(K1, K2)` of `|K^alpha_t|` for `t >= 1`:
/// `K1 = e^{-(n-1)(t-1/2)} 1_{[0, t-1/2]}(r)` and
/// `K2 = e^{-(n-1)t} (t-r)^{Re alpha - 1} 1_{(t-1/2, t]}(r)`.
pub fn kernel_split<T: Real>(spec: &MultiplierSpec<T>, r: T) -> Result<(T, T)> {
    let t = spec.t;
    if t < T::one() {
        return Err(Error::Precondition(format!("kernel split needs t >= 1, got {t}")));
    }
    if !(spec.alpha.re > T::zero()) {
        return Err(Error::Precondition(format!(
            "kernel split needs Re alpha > 0, got {}",
            spec.alpha
        )));
    }
    let nm1 = T::from_usize_lossy(spec.n.get() - 1);
    let half = T::lit(0.5);
    let k1 = if r >= T::zero() && r <= t - half {
        (-nm1 * (t - half)).exp()
    } else {
        T::zero()
    };
    let k2 = if r > t - half && r <= t {
        (-nm1 * t).exp() * (t - r).powf(spec.alpha.re - T::one())
    } else {
        T::zero()
    };
    Ok((k1, k2))
}

/// Majorant `t^{-n} (1 - r/t)^{Re alpha - 1} 1_{[0,1)}(r/t)` of `|K^alpha_t|` for `0 < t <= 1`.
pub fn kernel_ktilde<T: Real>(spec: &MultiplierSpec<T>, r: T) -> Result<T> {
    let t = spec.t;
    if t > T::one() {
        return Err(Error::Precondition(format!("K-tilde needs 0 < t <= 1, got {t}")));
    }
    if !(spec.alpha.re > T::zero()) {
        return Err(Error::Precondition(format!(
            "K-tilde needs Re alpha > 0, got {}",
            spec.alpha
        )));
    }
    if r < T::zero() || r >= t {
        return Ok(T::zero());
    }
    let nf = T::from_usize_lossy(spec.n.get());
    Ok(t.powf(-nf) * (T::one() - r / t).powf(spec.alpha.re - T::one()))
}

/// Heat symbol `e^{-t lambda^2}`.
pub fn heat_symbol<T: Real>(t: T, lambda: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Precondition(format!("heat time must be > 0, got {t}")));
    }
    Ok((-t * lambda * lambda).exp())
}

/// Which symbol estimate is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimateKind {
    /// `|m| <= C (1 + t) e^{-rho t}` for all `t > 0`.
    Decay,
    /// `|dm/d lambda| <= C t` for `0 < t <= 1`.
    Derivative,
    /// `|m| <= C (|lambda| t)^{-(Re alpha + rho)}` for `0 < t <= 1`, `|lambda| t >= 1`.
    HighFreq,
}

impl EstimateKind {
    pub const ALL: [EstimateKind; 3] = [Self::Decay, Self::Derivative, Self::HighFreq];

    pub fn id(self) -> &'static str {
        match self {
            Self::Decay => "symbol-decay",
            Self::Derivative => "symbol-derivative",
            Self::HighFreq => "symbol-highfreq",
        }
    }

    /// Human-readable statement of the inequality, used as the CSV anchor.
    pub fn anchor(self) -> &'static str {
        match self {
            Self::Decay => "|m| <~ (1+t) exp(-(n-1)t/2)",
            Self::Derivative => "|dm/dlambda| <~ t for t<=1",
            Self::HighFreq => "|m| <~ (|lambda|t)^-(Re alpha+(n-1)/2) for t<=1<=|lambda|t",
        }
    }

    pub fn in_domain<T: Real>(self, t: T, lambda: T) -> bool {
        let ok_t = t > T::zero() && t.is_finite();
        match self {
            Self::Decay => ok_t,
            Self::Derivative => ok_t && t <= T::one(),
            Self::HighFreq => ok_t && t <= T::one() && lambda.abs() * t >= T::one(),
        }
    }
}

impl fmt::Display for EstimateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A finite set of `(t, lambda)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateGrid<T: Real> {
    pub points: Vec<(T, T)>,
    pub label: String,
}

impl<T: Real> EstimateGrid<T> {
    /// Cartesian product of `ts` and `lambdas`, keeping only points in the kind's domain.
    pub fn restricted(kind: EstimateKind, ts: &[T], lambdas: &[T], label: impl Into<String>) -> Self {
        let points = ts
            .iter()
            .flat_map(|&t| lambdas.iter().map(move |&l| (t, l)))
            .filter(|&(t, l)| kind.in_domain(t, l))
            .collect();
        Self {
            points,
            label: label.into(),
        }
    }

    pub fn from_points(points: Vec<(T, T)>, label: impl Into<String>) -> Self {
        Self {
            points,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Outcome of a fitted-constant check.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate_id: String,
    pub n: usize,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub fitted_c: f64,
    pub worst_ratio: f64,
    pub slack: f64,
    pub pass: bool,
    pub calibration: String,
    pub validation: String,
    /// `(t, lambda)` where the validation maximum occurs.
    pub worst_point: (f64, f64),
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str = "estimate_id,n,re_alpha,im_alpha,C,worst_ratio,slack,pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.9e},{:.9e},{},{}",
            self.estimate_id,
            self.n,
            self.alpha_re,
            self.alpha_im,
            self.fitted_c,
            self.worst_ratio,
            self.slack,
            self.pass
        )
    }
}

/// Ratio `|quantity| / bound` at one point.
fn estimate_ratio<T: Real>(
    kind: EstimateKind,
    n: Dimension,
    alpha: Cplx<T>,
    table: &SymbolTable<T>,
    t: T,
    lambda: T,
) -> Result<T> {
    let rho: T = n.rho();
    Ok(match kind {
        EstimateKind::Decay => table.eval(lambda)?.norm() / ((T::one() + t) * (-rho * t).exp()),
        EstimateKind::Derivative => table.derivative(lambda)?.norm() / t,
        EstimateKind::HighFreq => table.eval(lambda)?.norm() * (lambda.abs() * t).powf(alpha.re + rho),
    })
}

/// Maximum ratio over a grid together with its location. Points are grouped
/// by `t`, evaluated in parallel, and reduced in a fixed order.
pub fn max_ratio<T: Real>(
    kind: EstimateKind,
    n: Dimension,
    alpha: Cplx<T>,
    grid: &EstimateGrid<T>,
) -> Result<(T, (T, T))> {
    if grid.is_empty() {
        return Err(Error::Empty("estimate grid"));
    }
    if let Some(&(t, l)) = grid.points.iter().find(|&&(t, l)| !kind.in_domain(t, l)) {
        return Err(Error::Domain(format!(
            "point (t={t}, lambda={l}) lies outside the domain of {kind}"
        )));
    }
    let mut ts: Vec<T> = grid.points.iter().map(|p| p.0).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite t"));
    ts.dedup();
    let per_t: Vec<Result<(T, (T, T))>> = ts
        .par_iter()
        .map(|&t| {
            let lams: Vec<T> = grid.points.iter().filter(|p| p.0 == t).map(|p| p.1).collect();
            let lmax = lams.iter().fold(T::one(), |m, &l| m.max(l.abs()));
            let spec = MultiplierSpec::new(n, alpha, t)?;
            let table = SymbolTable::new(&spec, lmax)?;
            let mut best = (T::neg_infinity(), (t, T::zero()));
            for &l in &lams {
                let r = estimate_ratio(kind, n, alpha, &table, t, l)?;
                if !r.is_finite() {
                    return Err(Error::Numerical(Box::new(NumericalFailure {
                        n: n.get(),
                        alpha: alpha.to_string(),
                        p: "-".into(),
                        t: t.to_string(),
                        lambda: l.to_string(),
                        msg: format!("non-finite {kind} ratio"),
                    })));
                }
                if r > best.0 {
                    best = (r, (t, l));
                }
            }
            Ok(best)
        })
        .collect();
    let mut best = (T::neg_infinity(), (T::zero(), T::zero()));
    for item in per_t {
        let b = item?;
        if b.0 > best.0 {
            best = b;
        }
    }
    Ok(best)
}

/// Fitted-constant check: `C` is the calibration maximum; the check passes
/// when the validation maximum is at most `slack * C`.
pub fn check_estimate<T: Real>(
    kind: EstimateKind,
    alpha: Cplx<T>,
    n: Dimension,
    calibration: &EstimateGrid<T>,
    validation: &EstimateGrid<T>,
    slack: T,
) -> Result<EstimateReport> {
    check_alpha(n, alpha)?;
    if !(slack > T::zero()) {
        return Err(Error::Precondition(format!("slack must be > 0, got {slack}")));
    }
    let (c, _) = max_ratio(kind, n, alpha, calibration)?;
    let (worst, at) = max_ratio(kind, n, alpha, validation)?;
    Ok(EstimateReport {
        estimate_id: kind.id().to_string(),
        n: n.get(),
        alpha_re: alpha.re.to_f64_lossy(),
        alpha_im: alpha.im.to_f64_lossy(),
        fitted_c: c.to_f64_lossy(),
        worst_ratio: worst.to_f64_lossy(),
        slack: slack.to_f64_lossy(),
        pass: worst <= slack * c,
        calibration: format!("{} ({} points)", calibration.label, calibration.len()),
        validation: format!("{} ({} points)", validation.label, validation.len()),
        worst_point: (at.0.to_f64_lossy(), at.1.to_f64_lossy()),
    })
}

/// Default calibration and validation grids for a kind over `lambda in [0, 200]`.
pub fn default_estimate_grids<T: Real>(kind: EstimateKind) -> (EstimateGrid<T>, EstimateGrid<T>) {
    estimate_grids(kind, 200.0)
}

/// Calibration grid `t = 2^k` (`k = -10..=3`) against 12 spectral points in
/// `[0, lambda_max]`, and a validation grid four times finer in each direction.
pub fn estimate_grids<T: Real>(kind: EstimateKind, lambda_max: f64) -> (EstimateGrid<T>, EstimateGrid<T>) {
    let cal_t: Vec<T> = (-10..=3).map(|k| T::lit(2f64.powi(k))).collect();
    let val_t: Vec<T> = (-40..=12).map(|k| T::lit(2f64.powf(k as f64 / 4.0))).collect();
    let cal_l: Vec<T> = spectral_points(12, lambda_max);
    let val_l: Vec<T> = spectral_points(48, lambda_max);
    (
        EstimateGrid::restricted(
            kind,
            &cal_t,
            &cal_l,
            format!("t=2^k k=-10..3; 12 lambda in [0,{lambda_max}]"),
        ),
        EstimateGrid::restricted(
            kind,
            &val_t,
            &val_l,
            format!("t=2^(k/4) k=-40..12; 48 lambda in [0,{lambda_max}]"),
        ),
    )
}

/// `count` points in `[0, max]`: zero followed by a geometric sequence from
/// `1/4` up to `max`.
pub fn spectral_points<T: Real>(count: usize, max: f64) -> Vec<T> {
    assert!(count >= 2);
    let lo: f64 = 0.25;
    let ratio = (max / lo).powf(1.0 / (count as f64 - 2.0));
    std::iter::once(T::zero())
        .chain((0..count - 1).map(|k| T::lit(lo * ratio.powi(k as i32))))
        .collect()
}
