//! Quadrature rules: Gauss-Legendre, Gauss-Jacobi, adaptive Gauss-Kronrod,
//! and a graded rule for integrands with an algebraic endpoint singularity.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{re, Cplx, Real};
use crate::specfun::ln_gamma_real;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Newton iteration in f64 for the root, then a final polish in T.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Jacobi rule for the weight `(1-x)^a (1+x)^b` on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussJacobi<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub a: T,
    pub b: T,
}

impl<T: Real> GaussJacobi<T> {
    /// Newton iteration on the three-term recurrence, seeded with the classic
    /// asymptotic root estimates. Requires `a, b > -1`.
    pub fn new(n: usize, a: T, b: T) -> Result<Self> {
        let (af, bf) = (a.to_f64_lossy(), b.to_f64_lossy());
        if n == 0 || !(af > -1.0) || !(bf > -1.0) {
            return Err(Error::Precondition(format!(
                "Gauss-Jacobi needs n >= 1 and exponents > -1, got n={n}, a={af}, b={bf}"
            )));
        }
        let nf = n as f64;
        let mut xs = vec![0.0f64; n];
        let mut ws = vec![0.0f64; n];
        let mut z = 0.0f64;
        for i in 0..n {
            // Initial guesses for the largest roots first.
            z = match i {
                0 => {
                    let an = af / nf;
                    let bn = bf / nf;
                    let r1 = (1.0 + af) * (2.78 / (4.0 + nf * nf) + 0.768 * an / nf);
                    let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
                    1.0 - r1 / r2
                }
                1 => {
                    let r1 = (4.1 + af) / ((1.0 + af) * (1.0 + 0.156 * af));
                    let r2 = 1.0 + 0.06 * (nf - 8.0) * (1.0 + 0.12 * af) / nf;
                    let r3 = 1.0 + 0.012 * bf * (1.0 + 0.25 * af.abs()) / nf;
                    z - (1.0 - z) * r1 * r2 * r3
                }
                2 => {
                    let r1 = (1.67 + 0.28 * af) / (1.0 + 0.37 * af);
                    let r2 = 1.0 + 0.22 * (nf - 8.0) / nf;
                    let r3 = 1.0 + 8.0 * bf / ((JACOBI_GUESS + bf) * nf * nf);
                    z - (xs[0] - z) * r1 * r2 * r3
                }
                _ if i == n - 2 => {
                    let r1 = (1.0 + 0.235 * bf) / (0.766 + 0.119 * bf);
                    let r2 = 1.0 / (1.0 + 0.639 * (nf - 4.0) / (1.0 + 0.71 * (nf - 4.0)));
                    let r3 = 1.0 / (1.0 + 20.0 * af / ((7.5 + af) * nf * nf));
                    z + (z - xs[n - 4]) * r1 * r2 * r3
                }
                _ if i == n - 1 => {
                    let r1 = (1.0 + 0.37 * bf) / (1.67 + 0.28 * bf);
                    let r2 = 1.0 / (1.0 + 0.22 * (nf - 8.0) / nf);
                    let r3 = 1.0 / (1.0 + 8.0 * af / ((JACOBI_GUESS + af) * nf * nf));
                    z + (z - xs[n - 3]) * r1 * r2 * r3
                }
                _ => 3.0 * xs[i - 1] - 3.0 * xs[i - 2] + xs[i - 3],
            };
            let mut dp = 0.0;
            let mut p2 = 0.0;
            let mut converged = false;
            for _ in 0..200 {
                let (p1, p2v, d) = jacobi_eval(n, af, bf, z);
                dp = d;
                p2 = p2v;
                let z1 = z;
                z = z1 - p1 / dp;
                if (z - z1).abs() <= 1e-15 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Quadrature(format!(
                    "Gauss-Jacobi root {i} of {n} did not converge"
                )));
            }
            let alfbet = af + bf;
            let lnw = lg(af + nf) + lg(bf + nf) - lg(nf + 1.0) - lg(nf + alfbet + 1.0);
            let temp = 2.0 * nf + alfbet;
            xs[i] = z;
            ws[i] = lnw.exp() * temp * 2f64.powf(alfbet) / (dp * p2);
        }
        // Stored ascending.
        xs.reverse();
        ws.reverse();
        Ok(Self {
            nodes: xs.into_iter().map(T::lit).collect(),
            weights: ws.into_iter().map(T::lit).collect(),
            a,
            b,
        })
    }

    /// Approximates `int_lo^hi (hi - s)^a (s - lo)^b g(s) ds`.
    /// Nodes and weights for `int_lo^hi (hi - s)^a (s - lo)^b g(s) ds`.
    pub fn mapped(&self, lo: T, hi: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (hi - lo) / T::lit(2.0);
        let scale = half.powf(self.a + self.b + T::one());
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (lo + half * (x + T::one()), w * scale))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, lo: T, hi: T, mut g: F) -> T {
        self.mapped(lo, hi).fold(T::zero(), |acc, (s, w)| acc + w * g(s))
    }
}

fn lg(x: f64) -> f64 {
    ln_gamma_real(x)
}

/// Returns `(P_n, P_{n-1}, P_n')` for the Jacobi polynomial at `z`.
fn jacobi_eval(n: usize, a: f64, b: f64, z: f64) -> (f64, f64, f64) {
    let alfbet = a + b;
    let mut p1 = (a - b + (alfbet + 2.0) * z) / 2.0;
    let mut p2 = 1.0;
    let mut p3;
    for j in 2..=n {
        let jf = j as f64;
        p3 = p2;
        p2 = p1;
        let temp = 2.0 * jf + alfbet;
        let an = 2.0 * jf * (jf + alfbet) * (temp - 2.0);
        let bn = (temp - 1.0) * (a * a - b * b + temp * (temp - 2.0) * z);
        let cn = 2.0 * (jf - 1.0 + a) * (jf - 1.0 + b) * temp;
        p1 = (bn * p2 - cn * p3) / an;
    }
    let nf = n as f64;
    let temp = 2.0 * nf + alfbet;
    let dp = (nf * (a - b - temp * z) * p1 + 2.0 * (nf + a) * (nf + b) * p2) / (temp * (1.0 - z * z));
    (p1, p2, dp)
}

#[allow(clippy::excessive_precision)]
const GK15_XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const GK15_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const GK15_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Tolerances and evaluation budget for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-8,
            max_evals: 1 << 20,
        }
    }
}

impl Tolerance {
    pub fn tight() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_evals: 1 << 20,
        }
    }
}

fn gk15<T: Real, F: FnMut(T) -> Cplx<T>>(f: &mut F, a: T, b: T) -> (Cplx<T>, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let fc = f(mid);
    let mut kron = fc * T::lit(GK15_WK[7]);
    let mut gauss = fc * T::lit(GK15_WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(GK15_XK[j]);
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + s * T::lit(GK15_WK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(GK15_WG[j / 2]);
        }
    }
    let err = ((kron - gauss) * half).norm();
    (kron * half, err)
}

/// Globally adaptive Gauss-Kronrod (7, 15) integration of a complex integrand.
///
/// `initial` splits `[a, b]` into that many equal segments before adapting,
/// which is how callers resolve known oscillation.
pub fn adaptive<T: Real, F: FnMut(T) -> Cplx<T>>(
    mut f: F,
    a: T,
    b: T,
    initial: usize,
    tol: Tolerance,
) -> Result<Cplx<T>> {
    if a == b {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let initial = initial.max(1);
    let width = (b - a) / T::from_usize_lossy(initial);
    let mut segs: Vec<(T, T, Cplx<T>, T)> = (0..initial)
        .map(|k| {
            let lo = a + width * T::from_usize_lossy(k);
            let hi = if k + 1 == initial { b } else { lo + width };
            let (v, e) = gk15(&mut f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    let mut evals = 15 * initial;
    loop {
        let total = segs.iter().fold(Complex::new(T::zero(), T::zero()), |acc, s| acc + s.2);
        let err = segs.iter().fold(T::zero(), |acc, s| acc + s.3);
        let target = T::lit(tol.abs).max(T::lit(tol.rel) * total.norm());
        if err <= target {
            return Ok(total);
        }
        if evals + 30 > tol.max_evals {
            return Err(Error::Quadrature(format!(
                "budget of {} evaluations exhausted on [{a}, {b}] (error estimate {err:.3e})",
                tol.max_evals
            )));
        }
        let (idx, _) = segs.iter().enumerate().fold(
            (0, T::neg_infinity()),
            |best, (i, s)| {
                if s.3 > best.1 {
                    (i, s.3)
                } else {
                    best
                }
            },
        );
        let (lo, hi, _, _) = segs[idx];
        let mid = (lo + hi) / T::lit(2.0);
        if !(mid > lo && mid < hi) {
            return Err(Error::Quadrature(format!(
                "interval [{lo}, {hi}] cannot be bisected further"
            )));
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evals += 30;
        segs[idx] = (lo, mid, v1, e1);
        segs.push((mid, hi, v2, e2));
    }
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, initial: usize, tol: Tolerance) -> Result<T> {
    adaptive(|x| re(f(x)), a, b, initial, tol).map(|z| z.re)
}

/// Node/weight list for `int_0^len F(u) du` where `F(u) ~ u^beta h(u)` with
/// `h` smooth and `Re beta > -1`.
///
/// Geometric panels refine toward `u = 0`; panels away from it are capped at
/// `max_width` so oscillatory factors stay resolved. The innermost piece
/// `[0, u_min]` is handled by a Gauss-Jacobi rule when `beta` is real and by
/// the leading term `F(u_min) u_min / (beta + 1)` otherwise. Weights are
/// complex because that leading term is.
#[derive(Debug, Clone)]
pub struct SingularEndpointRule<T: Real> {
    pub nodes: Vec<T>,
    pub weights: Vec<Cplx<T>>,
}

/// Constant of the classic end-root estimates for Gauss-Jacobi nodes.
#[allow(clippy::approx_constant)]
const JACOBI_GUESS: f64 = 6.28;
const PANEL_ORDER: usize = 16;
const JACOBI_ORDER: usize = 16;
const COMPLEX_TAIL_REL: f64 = 1e-13;
const REAL_HALVINGS: usize = 4;

impl<T: Real> SingularEndpointRule<T> {
    pub fn new(len: T, beta: Cplx<T>, max_width: T) -> Result<Self> {
        let halvings = if beta.im == T::zero() {
            REAL_HALVINGS
        } else {
            (-T::lit(COMPLEX_TAIL_REL).log2()).ceil().to_usize().unwrap_or(44)
        };
        Self::with_halvings(len, beta, max_width, halvings)
    }

    /// As [`Self::new`] with an explicit number of geometric halvings toward
    /// `u = 0`. For complex `beta` the leading-term tail on `[0, u_min]` has
    /// relative error of order `u_min`, so fewer halvings trade accuracy for
    /// nodes.
    pub fn with_halvings(len: T, beta: Cplx<T>, max_width: T, halvings: usize) -> Result<Self> {
        if !(beta.re > -T::one()) {
            return Err(Error::Precondition(format!(
                "endpoint exponent must have real part > -1, got {}",
                beta.re
            )));
        }
        if !(len > T::zero()) {
            return Err(Error::Precondition("empty integration range".into()));
        }
        let gl = GaussLegendre::<T>::new(PANEL_ORDER);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let w0 = len.min(max_width);
        // Uniform panels on [w0, len].
        let span = len - w0;
        if span > T::zero() {
            let count = (span / max_width).ceil().to_usize().unwrap_or(1).max(1);
            let width = span / T::from_usize_lossy(count);
            for k in 0..count {
                let lo = w0 + width * T::from_usize_lossy(k);
                let hi = if k + 1 == count { len } else { lo + width };
                for (x, w) in gl.mapped(lo, hi) {
                    nodes.push(x);
                    weights.push(re(w));
                }
            }
        }
        let real_beta = beta.im == T::zero();
        let mut hi = w0;
        for _ in 0..halvings {
            let lo = hi / T::lit(2.0);
            for (x, w) in gl.mapped(lo, hi) {
                nodes.push(x);
                weights.push(re(w));
            }
            hi = lo;
        }
        let u_min = hi;
        if real_beta {
            // (u_min - u)^0 (u - 0)^beta on [0, u_min]: Jacobi exponents a=0, b=beta.
            let gj = GaussJacobi::<T>::new(JACOBI_ORDER, T::zero(), beta.re)?;
            let half = u_min / T::lit(2.0);
            let scale = half.powf(beta.re + T::one());
            for (&x, &w) in gj.nodes.iter().zip(&gj.weights) {
                let u = half * (x + T::one());
                // Rule integrates u^beta g(u); callers supply F = u^beta g.
                nodes.push(u);
                weights.push(re(w * scale / u.powf(beta.re)));
            }
        } else {
            nodes.push(u_min);
            weights.push(re(u_min) / (beta + T::one()));
        }
        Ok(Self { nodes, weights })
    }

    pub fn integrate<F: FnMut(T) -> Cplx<T>>(&self, mut f: F) -> Cplx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&u, &w)| acc + w * f(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let gl = GaussLegendre::<f64>::new(8);
        let v = gl.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
        let s: f64 = gl.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_oscillatory_resolution() {
        let gl = GaussLegendre::<f64>::new(32);
        let w = 25.6;
        let v = gl.integrate(-1.0, 1.0, |x| (w * x).cos());
        assert!((v - 2.0 * w.sin() / w).abs() < 1e-14);
    }

    #[test]
    fn gauss_jacobi_matches_beta_function() {
        // int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
        for &(a, b) in &[(0.0, -0.5), (-0.9, 0.3), (0.5, 0.5), (2.0, -0.99)] {
            let gj = GaussJacobi::<f64>::new(12, a, b).unwrap();
            let s: f64 = gj.weights.iter().sum();
            let exact = (2f64.powf(a + b + 1.0).ln() + lg(a + 1.0) + lg(b + 1.0) - lg(a + b + 2.0)).exp();
            assert!((s - exact).abs() < 1e-11 * exact, "a={a} b={b}: {s} vs {exact}");
            // Exact on x^5.
            let m5: f64 = gj.nodes.iter().zip(&gj.weights).map(|(x, w)| w * x.powi(5)).sum();
            let oracle = adaptive_real(
                |x: f64| (1.0 - x).powf(a) * (1.0 + x).powf(b) * x.powi(5),
                -1.0,
                1.0,
                1,
                Tolerance::default(),
            );
            if a >= 0.0 && b >= 0.0 {
                assert!((m5 - oracle.unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gauss_jacobi_rejects_bad_exponents() {
        assert!(GaussJacobi::<f64>::new(5, -1.0, 0.0).is_err());
        assert!(GaussJacobi::<f64>::new(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = adaptive_real(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1, Tolerance::tight()).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn adaptive_reports_budget_exhaustion() {
        let tol = Tolerance {
            abs: 1e-15,
            rel: 1e-15,
            max_evals: 100,
        };
        let r = adaptive_real(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, 1, tol);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn singular_rule_real_and_complex_exponents() {
        // int_0^1 u^beta cos(3u) du against a fine substitution oracle.
        for &beta in &[-0.999, -0.6, -0.3, 0.0, 0.5, 1.7] {
            let rule = SingularEndpointRule::<f64>::new(1.0, re(beta), 0.5).unwrap();
            let v = rule.integrate(|u| re(u.powf(beta) * (3.0 * u).cos())).re;
            // u = v^{1/(beta+1)} removes the singularity.
            let k = 1.0 / (beta + 1.0);
            let oracle = adaptive_real(|v: f64| k * (3.0 * v.powf(k)).cos(), 0.0, 1.0, 4, Tolerance::tight()).unwrap();
            assert!(
                (v - oracle).abs() < 1e-10 * oracle.abs().max(1.0),
                "beta={beta}: {v} vs {oracle}"
            );
        }
        let beta = Complex::new(-0.4, 1.0);
        let rule = SingularEndpointRule::<f64>::new(2.0, beta, 0.5).unwrap();
        let v = rule.integrate(|u| (re(u).ln() * beta).exp() * (-u).exp());
        // Oracle: substitution u = e^{-y}.
        let oracle = adaptive(
            |y: f64| {
                let u = (-y).exp();
                (re(u).ln() * (beta + 1.0)).exp() * (-u).exp()
            },
            -(2f64.ln()),
            80.0,
            64,
            Tolerance::tight(),
        )
        .unwrap();
        assert!((v - oracle).norm() < 1e-10, "{v} vs {oracle}");
    }
}
