//! Special functions on the real hyperbolic space: complex log-gamma, the
//! elementary spherical function, the conical Legendre (Mehler) integral,
//! the Harish-Chandra c-function and the Plancherel density.

mod phi_table;

pub use phi_table::PhiTable;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::num::{cplx, ln_sinh, re, Cplx, Real};
use crate::quadrature::{adaptive, SingularEndpointRule, Tolerance};

const STIRLING_SHIFT: f64 = 15.0;
const REFLECTION_BELOW: f64 = -20.0;

/// Bernoulli coefficients `B_{2k} / (2k (2k-1))` for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Principal-branch-agnostic `ln Gamma(z)`: `exp` of the result is `Gamma(z)`.
pub fn log_gamma_complex<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    if z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round() {
        return Err(Error::Pole(z.re.to_f64_lossy()));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log-gamma of non-finite {z}")));
    }
    if z.re < T::lit(REFLECTION_BELOW) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let one = re(T::one());
        return Ok(re(T::PI().ln()) - ln_sin_pi(z) - log_gamma_complex(one - z)?);
    }
    let mut shifted = z;
    let mut acc = re(T::zero());
    while shifted.re < T::lit(STIRLING_SHIFT) {
        acc = acc + shifted.ln();
        shifted = shifted + T::one();
    }
    Ok(stirling(shifted) - acc)
}

fn stirling<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let half = T::lit(0.5);
    let ln_two_pi = (T::PI() + T::PI()).ln();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = re(T::zero());
    let mut pow = inv;
    for &c in &STIRLING {
        series = series + pow * T::lit(c);
        pow = pow * inv2;
    }
    (z - half) * z.ln() - z + re(ln_two_pi * half) + series
}

/// `ln sin(pi z)` without overflow for large `|Im z|`.
fn ln_sin_pi<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let pi = T::PI();
    let i = cplx(T::zero(), T::one());
    if z.im.abs() < T::lit(5.0) {
        return (z * pi).sin().ln();
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); factor out the dominant exponential.
    let two = T::lit(2.0);
    if z.im > T::zero() {
        -i * z * pi + (re(T::one()) - (i * z * pi * two).exp()).ln() - (i * two).ln()
    } else {
        i * z * pi + (re(T::one()) - (-i * z * pi * two).exp()).ln() - (-i * two).ln()
    }
}

/// `ln Gamma(x)` for real `x > 0`.
pub fn ln_gamma_real<T: Real>(x: T) -> T {
    log_gamma_complex(re(x)).map(|z| z.re).unwrap_or(T::nan())
}

/// Harish-Chandra c-function `Gamma(n-1)/Gamma(rho) * Gamma(i l)/Gamma(i l + rho)`.
pub fn c_function<T: Real>(lambda: T, n: Dimension) -> Result<Cplx<T>> {
    let rho: T = n.rho();
    let nm1 = T::from_usize_lossy(n.get() - 1);
    let il = cplx(T::zero(), lambda);
    let ln = re(ln_gamma_real(nm1) - ln_gamma_real(rho)) + log_gamma_complex(il)? - log_gamma_complex(il + rho)?;
    Ok(ln.exp())
}

/// `|c(lambda)|^{-2}`; zero at `lambda = 0` by continuity.
///
/// The normalising constant of the inversion formula is
/// [`plancherel_constant`]; the full spectral measure is their product.
pub fn plancherel_density<T: Real>(lambda: T, n: Dimension) -> Result<T> {
    if lambda < T::zero() || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "Plancherel density needs finite lambda >= 0, got {lambda}"
        )));
    }
    if lambda == T::zero() {
        return Ok(T::zero());
    }
    let rho: T = n.rho();
    let nm1 = T::from_usize_lossy(n.get() - 1);
    let il = cplx(T::zero(), lambda);
    let ln_abs_c =
        ln_gamma_real(nm1) - ln_gamma_real(rho) + log_gamma_complex(il)?.re - log_gamma_complex(il + rho)?.re;
    Ok((-(ln_abs_c + ln_abs_c)).exp())
}

/// Constant `C_n` with `f(r) = C_n int_0^inf Ff(lambda) phi_lambda(r) |c(lambda)|^{-2} d lambda`
/// when `Ff(lambda) = sigma_{n-1} int_0^inf f(r) phi_lambda(r) sinh^{n-1} r dr`.
pub fn plancherel_constant<T: Real>(n: Dimension) -> T {
    let nf = T::from_usize_lossy(n.get());
    let two = T::lit(2.0);
    let ln = (nf - T::lit(3.0)) * two.ln() + ln_gamma_real(nf / two) - (nf / two + T::one()) * T::PI().ln();
    ln.exp()
}

/// `Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))`, the mass normaliser of `sin^{n-2}` on `[0, pi]`.
pub fn angular_normalizer<T: Real>(n: Dimension) -> T {
    let nf = T::from_usize_lossy(n.get());
    let two = T::lit(2.0);
    (ln_gamma_real(nf / two) - ln_gamma_real((nf - T::one()) / two) - T::PI().sqrt().ln()).exp()
}

/// Validates a spectral parameter: real, or `i mu` with `|mu| <= rho`.
fn admissible_lambda<T: Real>(lambda: Cplx<T>, n: Dimension) -> Result<()> {
    let rho: T = n.rho();
    let tol = T::epsilon() * T::lit(16.0);
    let ok = lambda.im == T::zero() || (lambda.re == T::zero() && lambda.im.abs() <= rho + tol);
    if ok && lambda.re.is_finite() && lambda.im.is_finite() {
        Ok(())
    } else {
        Err(Error::SpectralParameter(format!(
            "lambda = {lambda} must be real or purely imaginary with |Im| <= {rho}"
        )))
    }
}

/// Elementary spherical function `phi_lambda(r)` by adaptive quadrature of
/// its Harish-Chandra integral representation. This is the reference route;
/// [`PhiTable`] is the fast route used by the transforms.
pub fn spherical_phi<T: Real>(lambda: Cplx<T>, r: T, n: Dimension) -> Result<Cplx<T>> {
    spherical_phi_with(lambda, r, n, Tolerance::tight())
}

pub fn spherical_phi_with<T: Real>(lambda: Cplx<T>, r: T, n: Dimension, tol: Tolerance) -> Result<Cplx<T>> {
    admissible_lambda(lambda, n)?;
    if r < T::zero() {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    if r == T::zero() {
        return Ok(re(T::one()));
    }
    let rho: T = n.rho();
    let expo = cplx(-lambda.im - rho, lambda.re);
    if expo.norm() == T::zero() {
        return Ok(re(T::one()));
    }
    let sinh_r = r.sinh();
    let e_minus = (-r).exp();
    let power = n.get() as i32 - 2;
    let two = T::lit(2.0);
    let integrand = |s: T| -> Cplx<T> {
        let half = (s / two).sin();
        // cosh r - cos s sinh r, written without cancellation.
        let b = e_minus + two * half * half * sinh_r;
        (expo * b.ln()).exp() * s.sin().powi(power)
    };
    // The phase lambda ln B sweeps 2 lambda r; seed enough segments to see it.
    let sweeps = (lambda.re.abs() * r * two / T::PI()).ceil();
    let initial = sweeps.to_usize().unwrap_or(1).clamp(1, 1 << 14) + 4;
    let total = adaptive(integrand, T::zero(), T::PI(), initial, tol)?;
    Ok(total * angular_normalizer::<T>(n))
}

/// Closed form for `n = 3`: `sin(lambda r) / (lambda sinh r)`.
pub fn phi_closed_form_n3<T: Real>(lambda: T, r: T) -> T {
    if r == T::zero() {
        return T::one();
    }
    let lr = lambda * r;
    let sinc = if lr.abs() < T::lit(1e-4) {
        T::one() - lr * lr / T::lit(6.0)
    } else {
        lr.sin() / lr
    };
    if r < T::lit(1e-4) {
        return sinc / (T::one() + r * r / T::lit(6.0));
    }
    sinc * r / r.sinh()
}

/// Precomputed rule for the Mehler integral
/// `I(lambda) = int_0^t (cosh t - cosh s)^beta cos(lambda s) ds`
/// at fixed `(t, beta)`, valid for `|lambda| <= lambda_max`.
///
/// Stores nodes `s_k` and complex weights `c_k = w_k (cosh t - cosh s_k)^beta`
/// so each evaluation is a single cosine sum.
#[derive(Debug, Clone)]
pub struct MehlerRule<T: Real> {
    pub t: T,
    pub beta: Cplx<T>,
    pub lambda_max: T,
    nodes: Vec<T>,
    weights: Vec<Cplx<T>>,
}

/// Panels are never wider than this, so 16-point Gauss-Legendre resolves
/// `cos(lambda s)` to round-off for `lambda * width <= 8`.
const MEHLER_MAX_WIDTH: f64 = 0.5;
const MEHLER_OSC: f64 = 8.0;

impl<T: Real> MehlerRule<T> {
    pub fn new(t: T, beta: Cplx<T>, lambda_max: T) -> Result<Self> {
        let width = T::lit(MEHLER_MAX_WIDTH).min(T::lit(MEHLER_OSC) / lambda_max.abs().max(T::one()));
        Self::with_width(t, beta, lambda_max, width)
    }

    fn with_width(t: T, beta: Cplx<T>, lambda_max: T, width: T) -> Result<Self> {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::Precondition(format!("Mehler radius must be > 0, got {t}")));
        }
        if !(beta.re > -T::one()) {
            return Err(Error::Precondition(format!(
                "Mehler exponent must have real part > -1, got {beta}"
            )));
        }
        let rule = SingularEndpointRule::new(t, beta, width)?;
        let two = T::lit(2.0);
        let mut nodes = Vec::with_capacity(rule.nodes.len());
        let mut weights = Vec::with_capacity(rule.nodes.len());
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            // cosh t - cosh(t - u) = 2 sinh(t - u/2) sinh(u/2)
            let ln_d = two.ln() + ln_sinh(t - u / two) + ln_sinh(u / two);
            nodes.push(t - u);
            weights.push(w * (beta * ln_d).exp());
        }
        Ok(Self {
            t,
            beta,
            lambda_max: lambda_max.abs(),
            nodes,
            weights,
        })
    }

    pub fn eval(&self, lambda: T) -> Cplx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(re(T::zero()), |acc, (&s, &w)| acc + w * (lambda * s).cos())
    }

    /// `d/d lambda` of [`Self::eval`], by the differentiated integrand `-s sin(lambda s)`.
    pub fn eval_derivative(&self, lambda: T) -> Cplx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(re(T::zero()), |acc, (&s, &w)| acc - w * (s * (lambda * s).sin()))
    }

    /// `sum |c_k|`, the scale below which cancellation makes values meaningless.
    pub fn abs_mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, w| acc + w.norm())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `int_0^t (cosh t - cosh s)^{alpha + (n-3)/2} cos(lambda s) ds` to the given
/// tolerance. The rule is refined by halving the panel width until two
/// successive values agree.
pub fn mehler_conical_integral<T: Real>(lambda: T, t: T, alpha: Cplx<T>, n: Dimension) -> Result<Cplx<T>> {
    mehler_conical_integral_with(lambda, t, alpha, n, Tolerance::default())
}

pub fn mehler_conical_integral_with<T: Real>(
    lambda: T,
    t: T,
    alpha: Cplx<T>,
    n: Dimension,
    tol: Tolerance,
) -> Result<Cplx<T>> {
    let beta = mehler_exponent(alpha, n);
    let mut width = T::lit(MEHLER_MAX_WIDTH).min(T::lit(MEHLER_OSC) / lambda.abs().max(T::one()));
    let first = MehlerRule::with_width(t, beta, lambda, width)?;
    let mut prev_val = first.eval(lambda);
    let mut evals = first.len();
    loop {
        width = width / T::lit(2.0);
        let next = MehlerRule::with_width(t, beta, lambda, width)?;
        let val = next.eval(lambda);
        evals += next.len();
        let diff = (val - prev_val).norm();
        let scale = val
            .norm()
            .max(next.abs_mass() * T::epsilon() * T::lit(64.0) / T::lit(tol.rel));
        if diff <= T::lit(tol.abs).max(T::lit(tol.rel) * scale) {
            return Ok(val);
        }
        if evals > tol.max_evals {
            return Err(Error::Quadrature(format!(
                "Mehler integral at t={t}, lambda={lambda}, alpha={alpha}: successive refinements differ by {diff:.3e}"
            )));
        }
        prev_val = val;
    }
}

/// Exponent `alpha + (n-3)/2` of the Mehler integrand.
pub fn mehler_exponent<T: Real>(alpha: Cplx<T>, n: Dimension) -> Cplx<T> {
    alpha + (T::from_usize_lossy(n.get()) - T::lit(3.0)) / T::lit(2.0)
}

/// Conical Legendre function `P^{-mu}_{-1/2 + i lambda}(cosh t)` for `Re mu > -1/2`,
/// via `sqrt(2/pi) sinh(t)^{-mu} / Gamma(mu + 1/2) int_0^t (cosh t - cosh s)^{mu - 1/2} cos(lambda s) ds`.
pub fn conical_legendre<T: Real>(mu: Cplx<T>, lambda: T, t: T) -> Result<Cplx<T>> {
    let half = T::lit(0.5);
    let beta = mu - half;
    if !(beta.re > -T::one()) {
        return Err(Error::Precondition(format!(
            "conical order needs Re mu > -1/2, got {mu}"
        )));
    }
    if t == T::zero() {
        // P^{-mu}(1) = 0 for Re mu > 0 and 1 for mu = 0.
        return Ok(if mu.norm() == T::zero() {
            re(T::one())
        } else {
            re(T::zero())
        });
    }
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_evals: 1 << 20,
    };
    let n_eff = Dimension::new(2)?;
    // With n = 2 the Mehler exponent alpha - 1/2 equals mu - 1/2 at alpha = mu.
    let integral = mehler_conical_integral_with(lambda, t, mu, n_eff, tol)?;
    let pref = (re(T::lit(0.5) * (T::lit(2.0) / T::PI()).ln()) - mu * ln_sinh(t) - log_gamma_complex(mu + half)?).exp();
    Ok(pref * integral)
}

/// `Complex` zero, exported for symmetry with [`re`].
pub fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma_complex(re(1.0_f64)).unwrap().norm() < 1e-15);
        let v = log_gamma_complex(re(0.5_f64)).unwrap();
        assert!((v.re - PI.sqrt().ln()).abs() < 1e-14);
        let g = log_gamma_complex(cplx(0.0_f64, 1.0)).unwrap();
        let mod2 = (g.re * 2.0).exp();
        assert!((mod2 - PI / PI.sinh()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_poles() {
        for k in 0..4 {
            assert!(matches!(log_gamma_complex(re(-(k as f64))), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn log_gamma_recurrence_and_conjugation() {
        let pts = [
            cplx(0.3_f64, 0.0),
            cplx(-2.7, 0.4),
            cplx(0.0, 256.0),
            cplx(1.5, -3.0),
            cplx(-35.2, 1.1),
            cplx(12.0, 40.0),
        ];
        for &z in &pts {
            let a = log_gamma_complex(z + 1.0).unwrap();
            let b = log_gamma_complex(z).unwrap() + z.ln();
            let diff = a - b;
            // Equal modulo 2 pi i.
            let k = (diff.im / (2.0 * PI)).round();
            assert!(
                (diff - cplx(0.0, 2.0 * PI * k)).norm() < 1e-12 * (1.0 + a.norm()),
                "z={z}"
            );
            let c = log_gamma_complex(z.conj()).unwrap();
            let g = log_gamma_complex(z).unwrap();
            assert!((c.exp() - g.exp().conj()).norm() <= 1e-12 * g.exp().norm(), "z={z}");
        }
    }

    #[test]
    fn plancherel_density_closed_forms() {
        for &l in &[1e-3_f64, 0.5, 1.0, 7.0, 100.0, 256.0] {
            let d3 = plancherel_density(l, dim(3)).unwrap();
            assert!((d3 - l * l).abs() <= 1e-12 * l * l);
            let d2 = plancherel_density(l, dim(2)).unwrap();
            let exact = PI * l * (PI * l).tanh();
            assert!((d2 - exact).abs() <= 1e-12 * exact);
        }
        assert_eq!(plancherel_density(0.0_f64, dim(2)).unwrap(), 0.0);
        assert!(plancherel_density(-1.0_f64, dim(2)).is_err());
    }

    #[test]
    fn plancherel_density_small_lambda_rank_one() {
        for n in 2..=5 {
            let a = plancherel_density(1e-4_f64, dim(n)).unwrap() / 1e-8;
            let b = plancherel_density(1e-5, dim(n)).unwrap() / 1e-10;
            assert!(a > 0.0 && (a - b).abs() < 1e-6 * a, "n={n}");
        }
    }

    #[test]
    fn plancherel_constant_n3() {
        assert!((plancherel_constant::<f64>(dim(3)) - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn phi_at_origin_and_trivial_endpoint() {
        for n in 2..=5 {
            let d = dim(n);
            let rho: f64 = d.rho();
            assert_eq!(spherical_phi(re(3.0), 0.0, d).unwrap(), re(1.0));
            for &r in &[0.1, 1.0, 5.0] {
                let v = spherical_phi(cplx(0.0, -rho), r, d).unwrap();
                assert!((v - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_matches_n3_closed_form() {
        for &l in &[0.0_f64, 0.3, 1.0, 10.0, 60.0] {
            for &r in &[0.01, 0.5, 1.0, 4.0, 8.0] {
                let v = spherical_phi(re(l), r, dim(3)).unwrap();
                let exact = phi_closed_form_n3(l, r);
                assert!((v.re - exact).abs() < 1e-11, "l={l} r={r}: {} vs {exact}", v.re);
                assert!(v.im.abs() < 1e-11);
            }
        }
    }

    #[test]
    fn phi_golden_n3() {
        let v = spherical_phi(re(1.0_f64), 1.0, dim(3)).unwrap();
        let golden = 1f64.sin() / 1f64.sinh();
        assert!((v.re - golden).abs() < 1e-12);
    }

    #[test]
    fn phi_bounds_and_continuity() {
        for n in [2, 4] {
            let d = dim(n);
            for &r in &[0.05, 0.7, 2.0, 6.0] {
                let p0 = spherical_phi(re(0.0_f64), r, d).unwrap().re;
                let p_eps = spherical_phi(re(1e-8), r, d).unwrap().re;
                assert!((p0 - p_eps).abs() <= 1e-6);
                assert!(p0 <= 1.0 + 1e-12);
                for &l in &[0.5, 3.0, 20.0] {
                    let v = spherical_phi(re(l), r, d).unwrap();
                    assert!(v.norm() <= p0 + 1e-10);
                    let neg = spherical_phi(re(-l), r, d).unwrap();
                    assert!((v - neg).norm() < 1e-10);
                    assert!(v.im.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn phi_rejects_general_complex_lambda() {
        assert!(matches!(
            spherical_phi(cplx(1.0_f64, 0.2), 1.0, dim(2)),
            Err(Error::SpectralParameter(_))
        ));
        assert!(spherical_phi(cplx(0.0_f64, 0.7), 1.0, dim(2)).is_err());
    }

    #[test]
    fn mehler_examples() {
        let d2 = dim(2);
        // alpha = 1, n = 2: exponent 1/2.
        for &t in &[0.3_f64, 1.0, 3.0] {
            let v = mehler_conical_integral(0.0, t, re(1.0), d2).unwrap();
            // Oracle: substitute s = t - u^2.
            let oracle = crate::quadrature::adaptive_real(
                |u: f64| {
                    let s = t - u * u;
                    (t.cosh() - s.cosh()).max(0.0).sqrt() * 2.0 * u
                },
                0.0,
                t.sqrt(),
                8,
                Tolerance::tight(),
            )
            .unwrap();
            assert!((v.re - oracle).abs() < 1e-10 * oracle.max(1.0));
            assert!(v.im.abs() < 1e-14);
            let a = mehler_conical_integral(3.7, t, re(0.25), d2).unwrap();
            let b = mehler_conical_integral(-3.7, t, re(0.25), d2).unwrap();
            assert!((a - b).norm() < 1e-14);
        }
        assert!(mehler_conical_integral(1.0, 1.0, re(-0.5), d2).is_err());
        assert!(mehler_conical_integral(1.0, 0.0, re(0.5), d2).is_err());
    }

    #[test]
    fn mehler_singular_exponent_against_oracle() {
        // Exponent -0.9 at n = 2, alpha = -0.4, compared with u = v^{10} substitution.
        let (t, l) = (1.3_f64, 5.0);
        let v = mehler_conical_integral(l, t, re(-0.4), dim(2)).unwrap();
        let oracle = crate::quadrature::adaptive_real(
            |w: f64| {
                let u = w.powi(10);
                let s = t - u;
                let d = 2.0 * (t - u / 2.0).sinh() * (u / 2.0).sinh();
                d.powf(-0.9) * (l * s).cos() * 10.0 * w.powi(9)
            },
            0.0,
            t.powf(0.1),
            16,
            Tolerance::tight(),
        )
        .unwrap();
        assert!((v.re - oracle).abs() < 1e-8, "{} vs {oracle}", v.re);
    }

    #[test]
    fn legendre_form_reproduces_phi() {
        for n in [2usize, 3, 4] {
            let d = dim(n);
            let mu = (n as f64) / 2.0 - 1.0;
            let pref = (((n as f64) / 2.0 - 1.0) * 2f64.ln() + ln_gamma_real((n as f64) / 2.0)).exp();
            for &r in &[0.01, 0.5, 2.0, 8.0] {
                for &l in &[0.0, 1.0, 13.0, 50.0] {
                    let p = conical_legendre(re(mu), l, r).unwrap();
                    let via = p * pref * r.sinh().powf(1.0 - (n as f64) / 2.0);
                    let phi = spherical_phi(re(l), r, d).unwrap();
                    let err = (via - phi).norm();
                    assert!(
                        err <= 1e-8 * phi.norm().max(1e-300) + 1e-14,
                        "n={n} r={r} l={l}: {via} vs {phi}"
                    );
                }
            }
        }
    }

    #[test]
    fn mehler_derivative_matches_finite_difference() {
        let rule = MehlerRule::new(0.8_f64, cplx(0.5, 1.0), 50.0).unwrap();
        for &l in &[0.0, 2.0, 17.0, 49.0] {
            let h = 1e-5;
            let fd = (rule.eval(l + h) - rule.eval(l - h)) / (2.0 * h);
            assert!((fd - rule.eval_derivative(l)).norm() < 1e-7);
        }
    }

    #[test]
    fn single_precision_phi() {
        let v = spherical_phi_with(re(1.0_f32), 1.0, dim(3), Tolerance::default()).unwrap();
        assert!((v.re - (1f32.sin() / 1f32.sinh())).abs() < 1e-5);
    }
}
