//! Special functions and the spectral route to ln T.
//!
//! Every Dirichlet-type series here has rational phases, so it splits over
//! residue classes into Hurwitz zeta functions, which are evaluated (with
//! their s-derivative) by Euler–Maclaurin summation. The torsion is then
//! assembled from the original eigenvalue sums of the scalar and coexact
//! vector Laplacians, without using the cancellation that leads to the
//! closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::characters::{CharacterTable, ClassFunction};
use crate::exactmath::RationalAngle;
use crate::groups::FiniteSymmetryGroup;
use crate::torsion::{finish, twist_values, Convention, TorsionError, TorsionResult, TwistSpec};

/// Largest acceptable truncation-error estimate for spectral values.
pub const SPECTRAL_BUDGET: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("pole at s = 1")]
    PoleAtOne,
    #[error("invalid zeta parameters: {0}")]
    InvalidParams(String),
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("truncation error estimate {estimate:e} exceeds the budget {budget:e}")]
    ConvergenceBudgetExceeded { estimate: f64, budget: f64 },
}

/// Numerical knobs shared by the kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaParams {
    /// Number of Bernoulli correction terms in Euler–Maclaurin (even, 2–12).
    pub em_order: u32,
    /// Terms summed directly before switching to asymptotics (>= 10).
    pub cutoff: u32,
    /// Order `R` of the binomial expansion of `(n²−1)^{−s}` (>= 2).
    pub binom_trunc: u32,
}

impl Default for ZetaParams {
    fn default() -> Self {
        Self {
            em_order: 12,
            cutoff: 10,
            binom_trunc: 8,
        }
    }
}

impl ZetaParams {
    pub fn validate(&self) -> Result<(), ZetaError> {
        if self.em_order % 2 != 0 || !(2..=12).contains(&self.em_order) {
            return Err(ZetaError::InvalidParams(format!("em_order {} not even in 2..=12", self.em_order)));
        }
        if self.cutoff < 10 {
            return Err(ZetaError::InvalidParams(format!("cutoff {} < 10", self.cutoff)));
        }
        if self.binom_trunc < 2 {
            return Err(ZetaError::InvalidParams(format!("binom_trunc {} < 2", self.binom_trunc)));
        }
        Ok(())
    }
}

/// `B_{2k}/(2k)!` for `k = 1..=m`, from the exact recurrence
/// `Σ_{j<n+1} C(n+1, j) B_j = 0`.
fn bernoulli_over_factorial(m: usize) -> Vec<f64> {
    type Q = Ratio<i128>;
    let n_max = 2 * m;
    let mut b = vec![Q::from_integer(1)];
    for n in 1..=n_max {
        let mut acc = Q::from_integer(0);
        let mut binom: i128 = 1; // C(n+1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += *bj * binom;
            binom = binom * (n as i128 + 1 - j as i128) / (j as i128 + 1);
        }
        b.push(-acc / (n as i128 + 1));
    }
    let mut fact = 1.0f64;
    let mut out = Vec::with_capacity(m);
    for k in 1..=n_max {
        fact *= k as f64;
        if k % 2 == 0 {
            let v = b[k];
            out.push(*v.numer() as f64 / *v.denom() as f64 / fact);
        }
    }
    out
}

/// `ζ(s, a)` and `∂ζ/∂s` by Euler–Maclaurin: `N` direct terms, the integral
/// and half-term, and `em_order` Bernoulli corrections.
pub fn hurwitz_zeta_jet(s: Complex64, a: f64, params: &ZetaParams) -> Result<(Complex64, Complex64), ZetaError> {
    if (s - 1.0).norm() == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    em_jet(s, a, params)
}

/// `ζ(s, a) − 1/(s−1)` and its derivative at `s = 1`, i.e. `−ψ(a)` and
/// `−γ₁(a)`.
pub fn hurwitz_finite_part_at_one(a: f64, params: &ZetaParams) -> Result<(f64, f64), ZetaError> {
    let (v, d) = em_jet(Complex64::new(1.0, 0.0), a, params)?;
    Ok((v.re, d.re))
}

fn em_jet(s: Complex64, a: f64, params: &ZetaParams) -> Result<(Complex64, Complex64), ZetaError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(ZetaError::BadArgument(format!("Hurwitz parameter a = {a} must be positive")));
    }
    let n = params.cutoff as usize + s.norm().ceil() as usize;
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let x = k as f64 + a;
        let t = (-s * x.ln()).exp();
        value += t;
        deriv -= t * x.ln();
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let xs = (-s * lx).exp(); // x^{-s}
    let sm1 = s - 1.0;
    if sm1.norm() == 0.0 {
        // x^{1−s}/(s−1) − 1/(s−1) at s = 1
        value += -lx;
        deriv += 0.5 * lx * lx;
    } else {
        value += xs * x / sm1;
        deriv += -lx * xs * x / sm1 - xs * x / (sm1 * sm1);
    }
    value += xs * 0.5;
    deriv -= lx * xs * 0.5;
    // Σ B_{2k}/(2k)! (s)_{2k−1} x^{−s−2k+1}
    let mut poch = s; // (s)_1
    let mut dpoch = Complex64::new(1.0, 0.0);
    let mut xpow = xs / x;
    for (k, coef) in bernoulli_over_factorial(params.em_order as usize).into_iter().enumerate() {
        if k > 0 {
            for j in [2 * k - 1, 2 * k] {
                dpoch = dpoch * (s + j as f64) + poch;
                poch *= s + j as f64;
            }
            xpow /= x * x;
        }
        value += coef * poch * xpow;
        deriv += coef * (dpoch - lx * poch) * xpow;
    }
    Ok((value, deriv))
}

pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64, ZetaError> {
    Ok(hurwitz_zeta_jet(s, a, &ZetaParams::default())?.0)
}

/// `∂ζ(s, a)/∂s`.
pub fn hurwitz_zeta_deriv(s: Complex64, a: f64) -> Result<Complex64, ZetaError> {
    Ok(hurwitz_zeta_jet(s, a, &ZetaParams::default())?.1)
}

/// `ψ(x)` for `x > 0`: minus the finite part of `ζ(s, x)` at `s = 1`, from
/// the same Euler–Maclaurin expansion.
pub fn digamma(x: f64) -> f64 {
    let params = ZetaParams::default();
    let n = params.cutoff as usize;
    let mut direct = 0.0;
    for k in 0..n {
        direct += 1.0 / (k as f64 + x);
    }
    let big = n as f64 + x;
    let mut tail = big.ln() - 0.5 / big;
    let mut pow = 1.0;
    for (k, coef) in bernoulli_over_factorial(params.em_order as usize).into_iter().enumerate() {
        pow /= big * big;
        // B_{2k}/(2k) = coef · (2k−1)!
        let fact: f64 = (1..=(2 * k + 1)).map(|v| v as f64).product();
        tail -= coef * fact * pow;
    }
    tail - direct
}

/// Euler's constant as `−ψ(1)`.
pub fn euler_gamma() -> f64 {
    -digamma(1.0)
}

/// `ψ(p/q) + ψ(1 − p/q)` by Gauss' formula
/// `−2γ − 2 ln q + 2 Σ_k cos(2πpk/q) ln 2sin(πk/q)`. For `p ∈ {0, q}` the
/// formula returns `−2γ`, i.e. `ψ(0)` regularised to `ψ(1)`.
pub fn digamma_rational(p: i64, q: i64) -> Result<f64, ZetaError> {
    if q < 1 || p < 0 || p > q {
        return Err(ZetaError::BadArgument(format!("need 0 <= p <= q, got p={p}, q={q}")));
    }
    let mut sum = 0.0;
    for k in 1..q {
        let c = (2.0 * PI * ((p * k) % q) as f64 / q as f64).cos();
        sum += c * (2.0 * (PI * k as f64 / q as f64).sin()).ln();
    }
    Ok(-2.0 * euler_gamma() - 2.0 * (q as f64).ln() + 2.0 * sum)
}

/// `Σ_{n >= start} e^{2πinφ} (n + w)^{−s}` and its s-derivative, by
/// splitting `n` into residue classes mod the denominator of `φ`. At `s = 1`
/// with `φ ≠ 0` the Hurwitz poles cancel and only finite parts remain.
pub fn lerch_jet(
    phi: RationalAngle,
    s: Complex64,
    w: f64,
    start: i64,
    params: &ZetaParams,
) -> Result<(Complex64, Complex64), ZetaError> {
    let q = *phi.turns().denom();
    let a = *phi.turns().numer();
    if start as f64 + w <= 0.0 {
        return Err(ZetaError::BadArgument(format!("first term n + w = {} must be positive", start as f64 + w)));
    }
    let qf = q as f64;
    let lq = qf.ln();
    let qs = (-s * lq).exp();
    let at_one = (s - 1.0).norm() == 0.0;
    if at_one && phi.is_zero() {
        return Err(ZetaError::PoleAtOne);
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for n in start..start + q {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * ((a * n).rem_euclid(q)) as f64 / qf);
        let (z, dz) = em_jet(s, (n as f64 + w) / qf, params)?;
        value += phase * qs * z;
        deriv += phase * qs * (dz - lq * z);
    }
    Ok((value, deriv))
}

/// `Ξ(α, s, w) = Σ_{n>=2} e^{inα} (n + w)^{−s}`.
pub fn lerch_xi(alpha: RationalAngle, s: Complex64, w: f64) -> Result<Complex64, ZetaError> {
    if w <= -2.0 {
        return Err(ZetaError::BadArgument(format!("w = {w} must exceed -2")));
    }
    if alpha.is_zero() && (s - 1.0).norm() == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    Ok(lerch_jet(alpha, s, w, 2, &ZetaParams::default())?.0)
}

/// One-dimensional Epstein function `Z|g,h|(s) = Σ_n |n+g|^{−s} e^{2πinh}`
/// (the `n = 0` term omitted when `g = 0`) and its s-derivative.
pub fn epstein_z_jet(
    g: RationalAngle,
    h: RationalAngle,
    s: Complex64,
    params: &ZetaParams,
) -> Result<(Complex64, Complex64), ZetaError> {
    if h.is_zero() && (s - 1.0).norm() == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    let gt = g.turns();
    let gf = *gt.numer() as f64 / *gt.denom() as f64;
    let minus_h = RationalAngle::new(-*h.turns().numer(), *h.turns().denom());
    // n >= 0 (n >= 1 when g = 0), and n = −m, m >= 1
    let start = if g.is_zero() { 1 } else { 0 };
    let (v1, d1) = lerch_jet(h, s, gf, start, params)?;
    let (v2, d2) = lerch_jet(minus_h, s, -gf, 1, params)?;
    Ok((v1 + v2, d1 + d2))
}

pub fn epstein_z(g: RationalAngle, h: RationalAngle, s: Complex64) -> Result<Complex64, ZetaError> {
    Ok(epstein_z_jet(g, h, s, &ZetaParams::default())?.0)
}

/// `Z′|0,h|(0)` through the Hurwitz reduction.
pub fn epstein_prime_at_zero(h: RationalAngle) -> Result<f64, ZetaError> {
    Ok(epstein_z_jet(RationalAngle::zero(), h, Complex64::new(0.0, 0.0), &ZetaParams::default())?.1.re)
}

/// `Z′|0,h|(0) = −γ − ln 2π − ½(ψ(h) + ψ(1−h))` with the digamma pair from
/// Gauss' formula; `h = 0` gives `−ln 2π`.
pub fn epstein_prime_at_zero_gauss(h: RationalAngle) -> Result<f64, ZetaError> {
    let t = h.turns();
    Ok(-euler_gamma() - (2.0 * PI).ln() - 0.5 * digamma_rational(*t.numer(), *t.denom())?)
}

/// `|lhs − rhs|` for `Z|g,h|(2s) = π^{2s−½} Γ(½−s)/Γ(s) e^{−2πigh} Z|h,−g|(1−2s)`
/// at real `s`.
pub fn funce_residual(g: RationalAngle, h: RationalAngle, s: f64) -> Result<f64, ZetaError> {
    let params = ZetaParams::default();
    let lhs = epstein_z_jet(g, h, Complex64::new(2.0 * s, 0.0), &params)?.0;
    let minus_g = RationalAngle::new(-*g.turns().numer(), *g.turns().denom());
    let dual = epstein_z_jet(h, minus_g, Complex64::new(1.0 - 2.0 * s, 0.0), &params)?.0;
    let gh = g.turns() * h.turns();
    let phase = Complex64::from_polar(1.0, -2.0 * PI * *gh.numer() as f64 / *gh.denom() as f64);
    let rhs = PI.powf(2.0 * s - 0.5) * gamma(0.5 - s) / gamma(s) * phase * dual;
    Ok((lhs - rhs).norm())
}

/// `χ_n(θ_L) χ_n(θ_R) = Re Σ c·n^p e^{2πinφ}` for a class with rotation
/// angles `(α, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiProduct {
    pub terms: Vec<(Complex64, u32, RationalAngle)>,
}

impl ChiProduct {
    pub fn new(alpha: RationalAngle, beta: RationalAngle) -> Self {
        let ca = alpha.radians().cos();
        let cb = beta.radians().cos();
        let neg_beta = RationalAngle::new(-*beta.turns().numer(), *beta.turns().denom());
        let degenerate = alpha == beta || alpha == neg_beta;
        let terms = if !degenerate {
            // (cos nα − cos nβ)/(cos α − cos β)
            let d = ca - cb;
            vec![(Complex64::new(1.0 / d, 0.0), 0, alpha), (Complex64::new(-1.0 / d, 0.0), 0, beta)]
        } else if alpha.is_zero() || alpha == RationalAngle::new(1, 2) {
            // n² cos(nα)/cos α
            vec![(Complex64::new(1.0 / ca, 0.0), 2, alpha)]
        } else {
            // n sin(nα)/sin α
            vec![(Complex64::new(0.0, -1.0 / alpha.radians().sin()), 1, alpha)]
        };
        Self { terms }
    }

    pub fn at(&self, n: i64) -> f64 {
        self.terms
            .iter()
            .map(|(c, p, phi)| {
                let e = Complex64::from_polar(1.0, n as f64 * phi.radians());
                (c * e).re * (n as f64).powi(*p as i32)
            })
            .sum()
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `d/ds Σ_{n>=2} n^p e^{inφ} (n+w)^{−2s}` at `s = 0`, via
/// `n^p = Σ_k C(p,k) (n+w)^k (−w)^{p−k}`.
fn shifted_family_prime(phi: RationalAngle, p: u32, w: f64, params: &ZetaParams) -> Result<Complex64, ZetaError> {
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=p {
        let coef = binomial(p, k) * (-w).powi((p - k) as i32);
        let (_, d) = lerch_jet(phi, Complex64::new(-(k as f64), 0.0), w, 2, params)?;
        total += coef * 2.0 * d;
    }
    Ok(total)
}

/// `d/ds Σ_{n>=2} n^p e^{inφ} (n²−1)^{−s}` at `s = 0`: direct terms below
/// the cutoff `N`, then `(n²−1)^{−s} = n^{−2s} Σ_r (s)_r/r! n^{−2r}` truncated
/// at `r = R`. Returns the derivative and a bound on the dropped terms.
fn product_family_prime(phi: RationalAngle, p: u32, params: &ZetaParams) -> Result<(Complex64, f64), ZetaError> {
    let n_cut = params.cutoff as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for n in 2..n_cut {
        let e = Complex64::from_polar(1.0, phi.radians() * n as f64);
        total -= e * (n as f64).powi(p as i32) * ((n * n - 1) as f64).ln();
    }
    // r = 0 contributes 2·∂_z at z = −p; r >= 1 contributes (1/r)·value at 2r − p
    let (_, d0) = lerch_jet(phi, Complex64::new(-(p as f64), 0.0), 0.0, n_cut, params)?;
    total += 2.0 * d0;
    for r in 1..=params.binom_trunc {
        let z = Complex64::new(2.0 * r as f64 - p as f64, 0.0);
        let (v, _) = lerch_jet(phi, z, 0.0, n_cut, params)?;
        total += v / r as f64;
    }
    // dropped: Σ_{r>R} (1/r) Σ_{n>=N} n^{p−2r} <= Σ (1/r)(N^{p−2r} + N^{p+1−2r}/(2r−p−1))
    let nf = n_cut as f64;
    let mut bound = 0.0;
    for r in params.binom_trunc + 1..params.binom_trunc + 200 {
        let e = p as f64 - 2.0 * r as f64;
        let term = (nf.powf(e) + nf.powf(e + 1.0) / (-e - 1.0)) / r as f64;
        bound += term;
        if term < 1e-30 {
            break;
        }
    }
    Ok((total, bound))
}

/// Which Laplacian a spectral zeta function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSpec {
    /// 0: minimal scalar, eigenvalues `n(n+2)`; 1: coexact vector, `(n+1)²`.
    pub form_degree: u8,
}

/// Class-level `ζ′_p(γ; 0)` with its truncation-error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralValue {
    pub value: f64,
    pub error_estimate: f64,
}

/// Partial zeta derivative for one class:
/// `ζ₀(γ;s) = Σ_{n>=2} χ_nχ_n (n²−1)^{−s}` and
/// `ζ₁(γ;s) = Σ_{n>=2} χ_nχ_n ((n+1)^{−2s} + (n−1)^{−2s})
///   − 4 Σ_{n>=1} cos nθ_L cos nθ_R n^{−2s} + 2^{−2s}`.
pub fn class_zeta_prime(
    alpha: RationalAngle,
    beta: RationalAngle,
    spec: SpectralSpec,
    params: &ZetaParams,
) -> Result<SpectralValue, ZetaError> {
    params.validate()?;
    let chi = ChiProduct::new(alpha, beta);
    match spec.form_degree {
        0 => {
            let mut total = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            for (c, p, phi) in &chi.terms {
                let (d, b) = product_family_prime(*phi, *p, params)?;
                total += c * d;
                err += c.norm() * b;
            }
            Ok(SpectralValue {
                value: total.re,
                error_estimate: err,
            })
        }
        1 => {
            let mut total = Complex64::new(0.0, 0.0);
            for (c, p, phi) in &chi.terms {
                total += c * (shifted_family_prime(*phi, *p, 1.0, params)? + shifted_family_prime(*phi, *p, -1.0, params)?);
            }
            // 4 cos nθ_L cos nθ_R = 2(cos nα + cos nβ)
            let zero = Complex64::new(0.0, 0.0);
            let da = lerch_jet(alpha, zero, 0.0, 1, params)?.1;
            let db = lerch_jet(beta, zero, 0.0, 1, params)?.1;
            total -= 2.0 * 2.0 * (da + db);
            total -= 2.0 * std::f64::consts::LN_2;
            Ok(SpectralValue {
                value: total.re,
                error_estimate: 0.0,
            })
        }
        d => Err(ZetaError::BadArgument(format!("form degree {d} not in {{0, 1}}"))),
    }
}

/// `τ′(γ; 0) = ½ζ₁′ − ζ₀′` for one class, from the uncancelled sums.
pub fn spectral_tau_prime(alpha: RationalAngle, beta: RationalAngle, params: &ZetaParams) -> Result<SpectralValue, ZetaError> {
    let z0 = class_zeta_prime(alpha, beta, SpectralSpec { form_degree: 0 }, params)?;
    let z1 = class_zeta_prime(alpha, beta, SpectralSpec { form_degree: 1 }, params)?;
    let out = SpectralValue {
        value: 0.5 * z1.value - z0.value,
        error_estimate: z0.error_estimate + z1.error_estimate,
    };
    if out.error_estimate > SPECTRAL_BUDGET {
        return Err(ZetaError::ConvergenceBudgetExceeded {
            estimate: out.error_estimate,
            budget: SPECTRAL_BUDGET,
        });
    }
    Ok(out)
}

/// Raw group average `Σ_p χ*(p) (c_p/|G|) τ′(C_p; 0)` by the spectral route.
pub fn spectral_group_average(
    g: &FiniteSymmetryGroup,
    chi: &ClassFunction,
    params: &ZetaParams,
) -> Result<SpectralValue, ZetaError> {
    let order = g.order() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (p, cls) in g.classes.iter().enumerate() {
        let w = chi.values[p].conj() * (cls.size as f64 / order);
        if w.norm() == 0.0 {
            continue;
        }
        let tau = spectral_tau_prime(cls.alpha, cls.beta, params)?;
        total += w * tau.value;
        err += w.norm() * tau.error_estimate;
    }
    Ok(SpectralValue {
        value: total.re,
        error_estimate: err,
    })
}

/// ln T by the spectral route, in the same conventions as the closed form.
pub fn torsion_spectral(
    g: &FiniteSymmetryGroup,
    table: &CharacterTable,
    twist: &TwistSpec,
    conv: Convention,
    params: &ZetaParams,
) -> Result<TorsionResult, TorsionError> {
    let chi = twist_values(g, table, twist)?;
    let raw = spectral_group_average(g, &chi, params)?;
    Ok(finish(g, &chi, twist, conv, "spectral", raw.value, None))
}

/// `F(γ; 0)` and `F′(γ; 0)` for
/// `F(s) = Σ_{n>=2} [(n+1)^{−2s} + (n−1)^{−2s} − 2(n²−1)^{−s}] χ_nχ_n`,
/// with `Σ n^p e^{inφ}(n²−u²)^{−s}` expanded in powers of `u²` at `u = 1`
/// (each power a Lerch value at `n >= 2`), rather than split at a cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cancellation {
    pub f0: f64,
    pub f0_prime: f64,
}

pub fn cancellation_check(
    alpha: RationalAngle,
    beta: RationalAngle,
    params: &ZetaParams,
) -> Result<Cancellation, ZetaError> {
    params.validate()?;
    let chi = ChiProduct::new(alpha, beta);
    let mut f0 = Complex64::new(0.0, 0.0);
    let mut f1 = Complex64::new(0.0, 0.0);
    for (c, p, phi) in &chi.terms {
        let p = *p;
        // Ξ families with shifts w = ±1
        for w in [1.0f64, -1.0] {
            for k in 0..=p {
                let coef = binomial(p, k) * (-w).powi((p - k) as i32);
                let (v, d) = lerch_jet(*phi, Complex64::new(-(k as f64), 0.0), w, 2, params)?;
                f0 += c * coef * v;
                f1 += c * coef * 2.0 * d;
            }
        }
        // Υ at u = 1: the r = 0 term, then Σ_{r>=1} Ξ(φ, 2r−p, 0)/r
        let (v, d) = lerch_jet(*phi, Complex64::new(-(p as f64), 0.0), 0.0, 2, params)?;
        f0 -= 2.0 * c * v;
        f1 -= 2.0 * c * 2.0 * d;
        let mut r = 1u32;
        loop {
            let z = Complex64::new(2.0 * r as f64 - p as f64, 0.0);
            if (z - 1.0).norm() == 0.0 && phi.is_zero() {
                return Err(ZetaError::PoleAtOne);
            }
            let (v, _) = lerch_jet(*phi, z, 0.0, 2, params)?;
            let term = v / r as f64;
            f1 -= 2.0 * c * term;
            if (term.norm() < 1e-14 && r > p) || r > 200 {
                break;
            }
            r += 1;
        }
    }
    Ok(Cancellation { f0: f0.re, f0_prime: f1.re })
}

/// `ζ₃(s) = Σ_{n>=2} n²(n²−1)^{−s}`: derivative at 0 through the binomial
/// expansion, with the truncation bound.
pub fn zeta3_prime_at_zero(params: &ZetaParams) -> Result<SpectralValue, ZetaError> {
    params.validate()?;
    let (d, b) = product_family_prime(RationalAngle::zero(), 2, params)?;
    Ok(SpectralValue {
        value: d.re,
        error_estimate: b,
    })
}

/// `4ζ′(−2) + 4ζ′(0) + 2 ln 2 − 2ζ₃′(0)`, which vanishes.
pub fn full_sphere_identity_residual(params: &ZetaParams) -> Result<f64, ZetaError> {
    let zp_m2 = hurwitz_zeta_jet(Complex64::new(-2.0, 0.0), 1.0, params)?.1.re;
    let zp_0 = hurwitz_zeta_jet(Complex64::new(0.0, 0.0), 1.0, params)?.1.re;
    let z3 = zeta3_prime_at_zero(params)?;
    Ok(4.0 * zp_m2 + 4.0 * zp_0 + 2.0 * std::f64::consts::LN_2 - 2.0 * z3.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use statrs::function::gamma::digamma as digamma_oracle;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn ang(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_over_factorial(3);
        assert_abs_diff_eq!(b[0], 1.0 / 12.0, epsilon = 1e-16);
        assert_abs_diff_eq!(b[1], -1.0 / 720.0, epsilon = 1e-18);
        assert_abs_diff_eq!(b[2], 1.0 / 30240.0, epsilon = 1e-18);
    }

    #[test]
    fn riemann_values() {
        let (z0, d0) = hurwitz_zeta_jet(c(0.0), 1.0, &ZetaParams::default()).unwrap();
        assert_abs_diff_eq!(z0.re, -0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(d0.re, -0.5 * (2.0 * PI).ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(hurwitz_zeta(c(2.0), 1.0).unwrap().re, PI * PI / 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(hurwitz_zeta(c(-2.0), 1.0).unwrap().re, 0.0, epsilon = 1e-13);
        assert_eq!(hurwitz_zeta(c(1.0), 0.5), Err(ZetaError::PoleAtOne));
        assert!(hurwitz_zeta(c(2.0), 0.0).is_err());
    }

    #[test]
    fn hurwitz_against_direct_sum() {
        // Z1 with an integral tail correction on the oracle
        let n = 1_000_000usize;
        let a = 0.7;
        let mut direct = 0.0;
        for k in (0..n).rev() {
            direct += (k as f64 + a).powi(-3);
        }
        let x = n as f64 + a;
        direct += 0.5 / (x * x) + 0.5 / (x * x * x);
        assert_abs_diff_eq!(hurwitz_zeta(c(3.0), a).unwrap().re, direct, epsilon = 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for (s, a) in [(0.3, 0.25), (-1.5, 0.8), (2.5, 1.7)] {
            let fd = (hurwitz_zeta(c(s + h), a).unwrap() - hurwitz_zeta(c(s - h), a).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(hurwitz_zeta_deriv(c(s), a).unwrap().re, fd.re, epsilon = 1e-8);
        }
    }

    #[test]
    fn complex_argument() {
        // ζ(s) on the critical line near the first zero 1/2 + 14.1347i
        let z = hurwitz_zeta(Complex64::new(0.5, 14.134725141734693), 1.0).unwrap();
        assert!(z.norm() < 1e-9, "{z}");
    }

    #[test]
    fn digamma_and_euler() {
        assert_abs_diff_eq!(euler_gamma(), 0.5772156649015329, epsilon = 1e-15);
        for x in [0.1, 0.5, 1.0, 2.3, 7.0] {
            assert_abs_diff_eq!(digamma(x), digamma_oracle(x), epsilon = 1e-12);
        }
        let g = euler_gamma();
        assert_abs_diff_eq!(
            digamma_rational(1, 2).unwrap(),
            -2.0 * g - 4.0 * std::f64::consts::LN_2,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(digamma_rational(5, 5).unwrap(), -2.0 * g, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma_rational(0, 7).unwrap(), -2.0 * g, epsilon = 1e-13);
        assert!(digamma_rational(4, 3).is_err());
    }

    #[test]
    fn gauss_formula_against_series() {
        // Z3
        for q in 2..=30i64 {
            for p in 1..q {
                let x = p as f64 / q as f64;
                let series = digamma_oracle(x) + digamma_oracle(1.0 - x);
                assert_abs_diff_eq!(digamma_rational(p, q).unwrap(), series, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn epstein_examples() {
        let z = epstein_z(RationalAngle::zero(), RationalAngle::zero(), c(3.0)).unwrap();
        assert_abs_diff_eq!(z.re, 2.0 * hurwitz_zeta(c(3.0), 1.0).unwrap().re, epsilon = 1e-13);
        assert_abs_diff_eq!(
            epstein_prime_at_zero(RationalAngle::zero()).unwrap(),
            -(2.0 * PI).ln(),
            epsilon = 1e-12
        );
        let alt = epstein_z(RationalAngle::zero(), ang(1, 2), c(2.0)).unwrap();
        assert_abs_diff_eq!(alt.re, -PI * PI / 6.0, epsilon = 1e-12);
        assert_eq!(
            epstein_z(RationalAngle::zero(), RationalAngle::zero(), c(1.0)),
            Err(ZetaError::PoleAtOne)
        );
    }

    #[test]
    fn epstein_derivative_two_ways() {
        // Z2
        for q in 2..=30 {
            for a in 1..q {
                let h = ang(a, q);
                let direct = epstein_prime_at_zero(h).unwrap();
                let gauss = epstein_prime_at_zero_gauss(h).unwrap();
                assert_abs_diff_eq!(direct, gauss, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn pole_structure_near_one() {
        for h in [ang(1, 3), ang(1, 4), ang(2, 5)] {
            let s = 1.0 + 1e-6;
            let eps = s - 1.0;
            let z = epstein_z(h, RationalAngle::zero(), c(s)).unwrap().re;
            let x = h.turns();
            let x = *x.numer() as f64 / *x.denom() as f64;
            let want = 2.0 / eps - digamma_oracle(x) - digamma_oracle(1.0 - x);
            assert_abs_diff_eq!(z, want, epsilon = 1e-4);
        }
    }

    #[test]
    fn functional_equation() {
        // Z5, plus a shifted case g ≠ 0
        for s in [0.2, 0.4, 0.7] {
            for h in [ang(1, 3), ang(1, 4), ang(2, 5)] {
                assert!(funce_residual(RationalAngle::zero(), h, s).unwrap() < 1e-9);
            }
            assert!(funce_residual(ang(1, 3), ang(1, 4), s).unwrap() < 1e-9);
        }
        // the variant with Γ(s − ½) in place of Γ(½ − s) fails
        let s = 0.3;
        let h = ang(1, 3);
        let lhs = epstein_z(RationalAngle::zero(), h, c(2.0 * s)).unwrap();
        let dual = epstein_z(h, RationalAngle::zero(), c(1.0 - 2.0 * s)).unwrap();
        let swapped = PI.powf(2.0 * s - 0.5) * gamma(s - 0.5) / gamma(s) * dual;
        assert!((lhs - swapped).norm() > 1e-2);
    }

    #[test]
    fn xi_examples() {
        let z = lerch_xi(RationalAngle::zero(), c(3.0), 0.0).unwrap();
        assert_abs_diff_eq!(z.re, hurwitz_zeta(c(3.0), 1.0).unwrap().re - 1.0, epsilon = 1e-13);
        // w = −1: e^{iα} Σ_{m>=1} e^{imα} m^{−s}
        let a = ang(1, 7);
        let lhs = lerch_xi(a, c(2.5), -1.0).unwrap();
        let rhs = Complex64::from_polar(1.0, a.radians()) * lerch_jet(a, c(2.5), 0.0, 1, &ZetaParams::default()).unwrap().0;
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-13);
        // brute force at s = 4
        let a = ang(1, 5);
        let mut direct = Complex64::new(0.0, 0.0);
        for n in (2..10_000).rev() {
            direct += Complex64::from_polar(1.0, a.radians() * n as f64) / (n as f64).powi(4);
        }
        assert_abs_diff_eq!((lerch_xi(a, c(4.0), 0.0).unwrap() - direct).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn chi_product_matches_su2_characters() {
        use crate::characters::su2_character;
        for (a, b) in [(ang(1, 5), ang(2, 5)), (ang(1, 3), ang(1, 3)), (ang(1, 4), ang(3, 4)), (ang(0, 1), ang(0, 1)), (ang(1, 2), ang(1, 2)), (ang(0, 1), ang(1, 2))] {
            let chi = ChiProduct::new(a, b);
            let tl = RationalAngle::new(*(a.turns() - b.turns()).numer(), *(a.turns() - b.turns()).denom() * 2);
            let tr = RationalAngle::new(*(a.turns() + b.turns()).numer(), *(a.turns() + b.turns()).denom() * 2);
            for n in 1..12u32 {
                let want = su2_character(n, tl) * su2_character(n, tr);
                assert_abs_diff_eq!(chi.at(n as i64), want, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn cancellation_identity_and_twisted() {
        let p = ZetaParams::default();
        for (a, b) in [(ang(0, 1), ang(0, 1)), (ang(1, 5), ang(2, 5)), (ang(1, 3), ang(1, 3)), (ang(1, 2), ang(1, 2))] {
            let r = cancellation_check(a, b, &p).unwrap();
            assert!(r.f0.abs() < 1e-10 && r.f0_prime.abs() < 1e-9, "{a} {b} {r:?}");
        }
        assert!(full_sphere_identity_residual(&p).unwrap().abs() < 1e-10);
    }

    #[test]
    fn finite_part_at_one_is_minus_digamma() {
        for a in [0.2, 1.0, 2.5] {
            let (v, _) = hurwitz_finite_part_at_one(a, &ZetaParams::default()).unwrap();
            assert_abs_diff_eq!(v, -digamma_oracle(a), epsilon = 1e-12);
        }
        // Σ_{n>=1} (−1)^n / n = −ln 2
        let v = lerch_jet(ang(1, 2), c(1.0), 0.0, 1, &ZetaParams::default()).unwrap().0;
        assert_abs_diff_eq!(v.re, -std::f64::consts::LN_2, epsilon = 1e-13);
    }

    #[test]
    fn spectral_class_values_match_closed_form() {
        use crate::torsion::tau_prime_numerators;
        let p = ZetaParams::default();
        for (a, b, q) in [(0i64, 0i64, 1i64), (1, 1, 2), (1, 3, 10), (1, 1, 10), (2, 3, 5), (1, 0, 4), (0, 1, 2)] {
            let spectral = spectral_tau_prime(ang(a, q), ang(b, q), &p).unwrap();
            let closed = tau_prime_numerators(a, b, q).numeric;
            assert_abs_diff_eq!(spectral.value, closed, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectral_group_examples() {
        use crate::characters::standard_table;
        use crate::groups::{build_group, GroupSpec};
        let p = ZetaParams::default();
        let run = |spec: GroupSpec, twist: TwistSpec, conv: Convention| {
            let g = build_group(spec).unwrap();
            let t = standard_table(&g).unwrap();
            torsion_spectral(&g, &t, &twist, conv, &p).unwrap().numeric
        };
        let ln2pi2 = (2.0 * PI * PI).ln();
        assert_abs_diff_eq!(run(GroupSpec::lens(1), TwistSpec::Trivial, Convention::PaperTable), ln2pi2, epsilon = 1e-9);
        assert_abs_diff_eq!(
            run(GroupSpec::BinaryIcosahedral, TwistSpec::Trivial, Convention::PaperTable),
            ln2pi2 - 120f64.ln(),
            epsilon = 1e-9
        );
        let g = build_group(GroupSpec::lens(10)).unwrap();
        let t = standard_table(&g).unwrap();
        let label = t.labels()[1].to_string();
        let v = torsion_spectral(&g, &t, &TwistSpec::Irrep { label }, Convention::Doubled, &p).unwrap();
        let lens = crate::torsion::torsion_lens(10, [1, 1], 1, Convention::Doubled).unwrap();
        assert_abs_diff_eq!(v.numeric, lens.numeric, epsilon = 1e-9);
    }

    #[test]
    fn budget_and_parameter_checks() {
        let tight = ZetaParams {
            binom_trunc: 2,
            ..ZetaParams::default()
        };
        assert!(matches!(
            spectral_tau_prime(ang(0, 1), ang(0, 1), &tight),
            Err(ZetaError::ConvergenceBudgetExceeded { .. })
        ));
        assert!(ZetaParams { em_order: 3, ..ZetaParams::default() }.validate().is_err());
        assert!(ZetaParams { cutoff: 5, ..ZetaParams::default() }.validate().is_err());
        let z = class_zeta_prime(ang(0, 1), ang(0, 1), SpectralSpec { form_degree: 2 }, &ZetaParams::default());
        assert!(z.is_err());
    }
}
