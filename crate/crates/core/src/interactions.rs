//! Effective electron–electron interactions.
//!
//! For a pair of Landau states the Coulomb repulsion averaged over the
//! transverse plane is a convex combination of rescaled regularized
//! potentials:
//!
//! ```text
//! W_{m,m'}(d) = Σ_j b_j (1/sqrt 2) V_j(d / sqrt 2),   b_j >= 0, Σ b_j = 1.
//! ```
//!
//! The coefficients come out of a change of variables
//! σ = (ζ₁+ζ₂)/sqrt2, τ = (ζ₁-ζ₂)/sqrt2, binomial expansion, the angular
//! integral (odd cosine powers vanish), and the radial moments
//! ∫ u^a e^{-u} du = a!. Everything is integer arithmetic, so the weights
//! are computed as exact rationals and converted to floats once. The same
//! reduction with an antisymmetrized pair ζ₁^j ζ₂^k - ζ₁^k ζ₂^j yields the
//! Slater-pair weights, supported on odd indices only; an N-orbital Slater
//! determinant averages the pair weights over all orbital pairs.
//!
//! Every decomposition here is cross-checked against brute-force quadrature
//! of the original double integral over the transverse plane
//! ([`oracle_w_direct`], [`oracle_w_slater_pair`]); the oracles never touch
//! the coefficient algebra.
//!
//! Note: expanding |ζ₁|²|ζ₂|² in the (s, t, θ) variables gives
//! (s⁴ + t⁴ - 2 s²t² cos 2θ)/4. The oracle integrates the original
//! integrand, so any slip in that algebra would show up as a cross-check
//! failure; `tests::product_expansion_regression` pins the expansion.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use libm::lgamma as ln_gamma;

use crate::error::CoreError;
use crate::potentials::{scaled_vm, LandauIndex};
use crate::quadrature::{laguerre_rule, legendre_rule, refine_to_tolerance, QuadratureSpec};
use crate::Result;

/// Oracles do brute-force tensor quadrature; keep them at desk scale.
pub const ORACLE_MAX_INDEX: LandauIndex = 8;

/// Where a coefficient vector came from.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CoefficientOrigin {
    ProductPair { m1: LandauIndex, m2: LandauIndex },
    SlaterPair { j: LandauIndex, k: LandauIndex },
    Determinant { orbitals: Vec<LandauIndex> },
    Custom,
}

/// A pair of Landau indices; Slater pairs additionally require m1 != m2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairLabel {
    pub m1: LandauIndex,
    pub m2: LandauIndex,
}

/// Convex weights b_j over the terms (1/sqrt2) V_j(x/sqrt2).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoefficientVector {
    weights: Vec<f64>,
    origin: CoefficientOrigin,
}

const WEIGHT_NEG_SLACK: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-10;

impl CoefficientVector {
    /// Validates convexity (within numeric slack) and per-origin length.
    pub fn new(weights: Vec<f64>, origin: CoefficientOrigin) -> Result<Self> {
        if weights.is_empty() {
            return Err(CoreError::InvalidInput(
                "coefficient vector must be nonempty".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| **w < -WEIGHT_NEG_SLACK) {
            return Err(CoreError::InvalidInput(format!(
                "negative coefficient {w} beyond slack"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(CoreError::InvalidInput(format!(
                "coefficients sum to {sum}, expected 1"
            )));
        }
        let max_len = match &origin {
            CoefficientOrigin::ProductPair { m1, m2 } => Some((m1 + m2 + 1) as usize),
            CoefficientOrigin::SlaterPair { j, k } => Some((j + k + 1) as usize),
            CoefficientOrigin::Determinant { orbitals } => {
                let n = orbitals.len();
                Some((orbitals[n - 2] + orbitals[n - 1] + 1) as usize)
            }
            CoefficientOrigin::Custom => None,
        };
        if let Some(limit) = max_len {
            if weights.len() > limit {
                return Err(CoreError::InvalidInput(format!(
                    "coefficient vector of length {} exceeds limit {} for {:?}",
                    weights.len(),
                    limit,
                    origin
                )));
            }
        }
        Ok(Self { weights, origin })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn origin(&self) -> &CoefficientOrigin {
        &self.origin
    }

    /// Mean index Σ_j j b_j; the tail of the interaction behaves like
    /// (1/x)(1 - (mean+1)/x² + ...).
    pub fn mean_index(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(j, w)| j as f64 * w)
            .sum()
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

fn normalize_to_f64(raw: &[BigInt]) -> Result<Vec<f64>> {
    let total: BigInt = raw.iter().sum();
    if total.is_zero() {
        return Err(CoreError::InvalidInput(
            "coefficient normalization: zero total weight".into(),
        ));
    }
    raw.iter()
        .map(|w| {
            if w.is_negative() {
                return Err(CoreError::InvalidInput(format!(
                    "exact coefficient computation produced negative weight {w}"
                )));
            }
            BigRational::new(w.clone(), total.clone())
                .to_f64()
                .ok_or_else(|| CoreError::InvalidInput("rational overflowed f64".into()))
        })
        .collect()
}

fn pair_raw_weights(m1: LandauIndex, m2: LandauIndex) -> Vec<BigInt> {
    let total_m = m1 + m2;
    let mut raw = vec![BigInt::zero(); (total_m + 1) as usize];
    // even powers of cos θ only; odd ones integrate to zero
    for p in (0..=total_m).step_by(2) {
        // S_p = Σ_{i+j=p} (-1)^j C(m1,i) C(m2,j); symmetric in (m1, m2)
        // since (-1)^j = (-1)^i for even p.
        let mut s_p = BigInt::zero();
        for i in 0..=p.min(m1) {
            let j = p - i;
            if j > m2 {
                continue;
            }
            let term = binomial(m1, i) * binomial(m2, j);
            if j % 2 == 0 {
                s_p += term;
            } else {
                s_p -= term;
            }
        }
        if s_p.is_zero() {
            continue;
        }
        let theta_factor = binomial(p, p / 2);
        let k_pow = total_m - p;
        for r in 0..=k_pow {
            let b = (k_pow - r + p / 2) as usize;
            raw[b] += &s_p
                * &theta_factor
                * binomial(k_pow, r)
                * factorial(r + p / 2)
                * factorial(k_pow - r + p / 2);
        }
    }
    raw
}

/// Convex weights of W_{m1,m2}, the interaction of a simple product pair.
/// Exact combinatorial computation; for m1 = m2 all odd entries vanish.
pub fn pair_coefficients(m1: LandauIndex, m2: LandauIndex) -> Result<CoefficientVector> {
    let weights = normalize_to_f64(&pair_raw_weights(m1, m2))?;
    CoefficientVector::new(weights, CoefficientOrigin::ProductPair { m1, m2 })
}

/// Antisymmetrized-pair amplitude A_α (scaled by 2^{(j+k)/2}; the common
/// factor cancels in normalization). Zero for even α.
fn antisym_amplitude(j: LandauIndex, k: LandauIndex, alpha: u32) -> BigInt {
    let mut a = BigInt::zero();
    for nu in 0..=alpha.min(j) {
        let mu = alpha - nu;
        if mu > k {
            continue;
        }
        let sign_mu = if mu % 2 == 0 { 1 } else { -1 };
        let sign_nu = if nu % 2 == 0 { 1 } else { -1 };
        a += BigInt::from(sign_mu - sign_nu) * binomial(j, nu) * binomial(k, mu);
    }
    a
}

fn slater_pair_raw_weights(j: LandauIndex, k: LandauIndex) -> Result<Vec<BigInt>> {
    if j == k {
        return Err(CoreError::InvalidInput(
            "antisymmetrized pair with equal indices vanishes".into(),
        ));
    }
    let total = j + k;
    let mut raw = vec![BigInt::zero(); (total + 1) as usize];
    for alpha in (1..=total).step_by(2) {
        let a = antisym_amplitude(j, k, alpha);
        raw[alpha as usize] = &a * &a * factorial(total - alpha) * factorial(alpha);
    }
    Ok(raw)
}

/// Convex weights of the antisymmetrized pair interaction W_det^{j,k};
/// supported on odd indices only.
pub fn slater_pair_coefficients(j: LandauIndex, k: LandauIndex) -> Result<CoefficientVector> {
    let weights = normalize_to_f64(&slater_pair_raw_weights(j, k)?)?;
    CoefficientVector::new(weights, CoefficientOrigin::SlaterPair { j, k })
}

/// Convex weights of the full determinant interaction
/// W_det = (2/(N(N-1))) Σ_{j<k} W_det^{m_j,m_k}: the uniform average of the
/// pair weights, zero-padded to index m_{N-1} + m_N.
pub fn det_coefficients(m_list: &[LandauIndex]) -> Result<CoefficientVector> {
    if m_list.len() < 2 {
        return Err(CoreError::InvalidInput(
            "determinant interaction needs at least two orbitals".into(),
        ));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CoreError::InvalidInput(
            "orbital list must be strictly increasing (duplicates vanish under antisymmetry)"
                .into(),
        ));
    }
    let n = m_list.len();
    let max_len = (m_list[n - 2] + m_list[n - 1] + 1) as usize;
    // exact average: Σ_pairs raw_pair / sum(raw_pair), accumulated as rationals
    let mut acc = vec![BigRational::zero(); max_len];
    for a in 0..n {
        for b in (a + 1)..n {
            let raw = slater_pair_raw_weights(m_list[a], m_list[b])?;
            let total: BigInt = raw.iter().sum();
            for (idx, w) in raw.into_iter().enumerate() {
                acc[idx] += BigRational::new(w, total.clone());
            }
        }
    }
    let pairs = BigRational::from(BigInt::from((n * (n - 1) / 2) as u64));
    let weights = acc
        .iter()
        .map(|w| {
            (w / &pairs)
                .to_f64()
                .ok_or_else(|| CoreError::InvalidInput("rational overflowed f64".into()))
        })
        .collect::<Result<Vec<f64>>>()?;
    CoefficientVector::new(
        weights,
        CoefficientOrigin::Determinant {
            orbitals: m_list.to_vec(),
        },
    )
}

/// Evaluates W(x) = Σ_j b_j (1/sqrt2) V_j(x/sqrt2).
pub fn eval_w(coeffs: &CoefficientVector, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    let mut sum = 0.0;
    for (j, &b) in coeffs.weights().iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        sum += b * scaled_vm(j as LandauIndex, x, quad)?;
    }
    Ok(sum)
}

struct OracleGeometry {
    u_rule: std::sync::Arc<crate::quadrature::Rule>,
    thetas: Vec<f64>,
    theta_weight: f64,
    w_max: f64,
    t_scale: f64,
}

fn oracle_geometry(total_m: u32, x: f64, n_theta: usize) -> OracleGeometry {
    let u_rule = laguerre_rule((total_m + 4) as usize);
    let thetas = (0..n_theta)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n_theta as f64)
        .collect();
    let theta_weight = 2.0 * std::f64::consts::PI / n_theta as f64;
    // t-integral after t = (x/sqrt2) sinh(w): t dt / sqrt(x² + 2t²) = (x/2) sinh(w) dw
    let t_max = (f64::from(total_m).max(1.0) + 0.5).sqrt() + 8.0;
    let t_scale = x / std::f64::consts::SQRT_2;
    let w_max = (t_max / t_scale).asinh();
    OracleGeometry {
        u_rule,
        thetas,
        theta_weight,
        w_max,
        t_scale,
    }
}

fn oracle_check_args(m1: LandauIndex, m2: LandauIndex, x: f64) -> Result<()> {
    if m1 > ORACLE_MAX_INDEX || m2 > ORACLE_MAX_INDEX {
        return Err(CoreError::InvalidInput(format!(
            "oracle indices capped at {ORACLE_MAX_INDEX}, got ({m1}, {m2})"
        )));
    }
    if !(x > 0.0) {
        return Err(CoreError::InvalidInput(
            "oracle quadrature requires x > 0".into(),
        ));
    }
    Ok(())
}

/// Brute-force quadrature of the product-pair interaction
///
/// ```text
/// W = (1/(π m1! m2!)) ∫ e^{-u} du ∫ t e^{-t²}/sqrt(x²+2t²) dt ∫ dθ
///       [(u+t²+2 sqrt(u) t cosθ)/2]^{m1} [(u+t²-2 sqrt(u) t cosθ)/2]^{m2}
/// ```
///
/// over (u = s², t, θ). Laguerre in u (the θ-averaged integrand is a
/// polynomial in u, so the rule is exact), uniform trapezoid in θ (exact
/// beyond the trigonometric degree), sinh-mapped Gauss–Legendre in t with
/// node doubling. Entirely independent of `pair_coefficients`.
pub fn oracle_w_direct(
    m1: LandauIndex,
    m2: LandauIndex,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    oracle_check_args(m1, m2, x)?;
    let n_theta = 8 * (m1 + m2 + 1) as usize;
    let geo = oracle_geometry(m1 + m2, x, n_theta);
    let prefactor =
        (-(ln_gamma(f64::from(m1) + 1.0) + ln_gamma(f64::from(m2) + 1.0))).exp() / std::f64::consts::PI;
    let eval = |n_t: usize, geo: &OracleGeometry| -> f64 {
        let t_rule = legendre_rule(n_t);
        let mut acc = 0.0;
        for (tn, tw) in t_rule.nodes.iter().zip(&t_rule.weights) {
            let w = 0.5 * geo.w_max * (tn + 1.0);
            let t = geo.t_scale * w.sinh();
            let tfac = 0.5 * x * w.sinh() * (-t * t).exp() * tw * 0.5 * geo.w_max;
            let mut inner = 0.0;
            for (u, uw) in geo.u_rule.nodes.iter().zip(&geo.u_rule.weights) {
                let su = u.sqrt();
                let mut th_sum = 0.0;
                for &theta in &geo.thetas {
                    let c = 2.0 * su * t * theta.cos();
                    let a = 0.5 * (u + t * t + c);
                    let b = 0.5 * (u + t * t - c);
                    th_sum += a.powi(m1 as i32) * b.powi(m2 as i32);
                }
                inner += uw * th_sum;
            }
            acc += tfac * inner * geo.theta_weight;
        }
        acc * prefactor
    };
    // θ resolution is exact beyond the trig degree; verify once by doubling.
    let check_n = quad.node_count.max(16);
    let coarse = eval(check_n, &geo);
    let geo2 = oracle_geometry(m1 + m2, x, 2 * n_theta);
    let fine = eval(check_n, &geo2);
    if (coarse - fine).abs() > 1e-10 * fine.abs().max(1.0) {
        return Err(CoreError::Accuracy {
            context: "oracle theta resolution",
            best: fine,
            error_bound: (coarse - fine).abs(),
        });
    }
    refine_to_tolerance(quad, "oracle_w_direct", |n_t| eval(n_t, &geo))
}

/// Brute-force quadrature of the antisymmetrized pair interaction
///
/// ```text
/// W_det^{j,k} = (1/(2π j! k!)) ∫∫∫ |z1^j z2^k - z1^k z2^j|²
///                e^{-u-t²} / sqrt(x²+2t²) ... ,
/// z1 = (s + t e^{iθ})/sqrt2,  z2 = (s - t e^{iθ})/sqrt2,  s = sqrt(u),
/// ```
///
/// normalized so the result behaves like 1/x at infinity. Independent of
/// `slater_pair_coefficients`.
pub fn oracle_w_slater_pair(
    j: LandauIndex,
    k: LandauIndex,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if j == k {
        return Err(CoreError::InvalidInput(
            "antisymmetrized pair with equal indices vanishes".into(),
        ));
    }
    oracle_check_args(j, k, x)?;
    let n_theta = 8 * (j + k + 1) as usize;
    let geo = oracle_geometry(j + k, x, n_theta);
    let prefactor = (-(ln_gamma(f64::from(j) + 1.0) + ln_gamma(f64::from(k) + 1.0))).exp()
        / (2.0 * std::f64::consts::PI);
    let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
    let eval = |n_t: usize, geo: &OracleGeometry| -> f64 {
        let t_rule = legendre_rule(n_t);
        let mut acc = 0.0;
        for (tn, tw) in t_rule.nodes.iter().zip(&t_rule.weights) {
            let w = 0.5 * geo.w_max * (tn + 1.0);
            let t = geo.t_scale * w.sinh();
            let tfac = 0.5 * x * w.sinh() * (-t * t).exp() * tw * 0.5 * geo.w_max;
            let mut inner = 0.0;
            for (u, uw) in geo.u_rule.nodes.iter().zip(&geo.u_rule.weights) {
                let s = u.sqrt();
                let mut th_sum = 0.0;
                for &theta in &geo.thetas {
                    let tau = Complex64::from_polar(t, theta);
                    let z1 = (Complex64::new(s, 0.0) + tau) * inv_sqrt2;
                    let z2 = (Complex64::new(s, 0.0) - tau) * inv_sqrt2;
                    let diff = z1.powi(j as i32) * z2.powi(k as i32)
                        - z1.powi(k as i32) * z2.powi(j as i32);
                    th_sum += diff.norm_sqr();
                }
                inner += uw * th_sum;
            }
            acc += tfac * inner * geo.theta_weight;
        }
        acc * prefactor
    };
    refine_to_tolerance(quad, "oracle_w_slater_pair", |n_t| eval(n_t, &geo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::potentials::scaled_vm;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn pair_00_is_single_term() {
        let c = pair_coefficients(0, 0).unwrap();
        assert_eq!(c.weights(), &[1.0]);
    }

    #[test]
    fn pair_11_frozen_weights() {
        // Oracle-confirmed exact values 1/2, 0, 1/2.
        let c = pair_coefficients(1, 1).unwrap();
        assert_eq!(c.weights(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn pair_22_and_23_frozen_weights() {
        let c = pair_coefficients(2, 2).unwrap();
        assert_eq!(c.weights(), &[0.375, 0.0, 0.25, 0.0, 0.375]);
        let c = pair_coefficients(2, 3).unwrap();
        assert_eq!(
            c.weights(),
            &[5.0 / 16.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 16.0, 5.0 / 16.0]
        );
    }

    #[test]
    fn equal_pair_parity_selection() {
        for m in 0..=6u32 {
            let c = pair_coefficients(m, m).unwrap();
            for (idx, w) in c.weights().iter().enumerate() {
                if idx % 2 == 1 {
                    assert_eq!(*w, 0.0, "odd entry {idx} nonzero for m={m}");
                }
            }
        }
    }

    #[test]
    fn pair_symmetry_exact() {
        for (m1, m2) in [(0u32, 3u32), (1, 4), (2, 5), (3, 7)] {
            assert_eq!(
                pair_coefficients(m1, m2).unwrap().weights(),
                pair_coefficients(m2, m1).unwrap().weights()
            );
        }
    }

    #[test]
    fn slater_pair_frozen_weights() {
        assert_eq!(slater_pair_coefficients(0, 1).unwrap().weights(), &[0.0, 1.0]);
        assert_eq!(
            slater_pair_coefficients(1, 2).unwrap().weights(),
            &[0.0, 0.25, 0.0, 0.75]
        );
        assert_eq!(
            slater_pair_coefficients(2, 3).unwrap().weights(),
            &[0.0, 0.125, 0.0, 0.25, 0.0, 0.625]
        );
    }

    #[test]
    fn slater_pair_even_entries_vanish_and_sum_to_one() {
        for (j, k) in [(0u32, 1u32), (0, 5), (2, 3), (3, 8), (1, 10)] {
            let c = slater_pair_coefficients(j, k).unwrap();
            let mut sum = 0.0;
            for (idx, w) in c.weights().iter().enumerate() {
                if idx % 2 == 0 {
                    assert_eq!(*w, 0.0, "even entry {idx} nonzero for ({j},{k})");
                }
                sum += w;
            }
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slater_pair_equal_indices_rejected() {
        assert!(slater_pair_coefficients(3, 3).is_err());
    }

    #[test]
    fn slater_pair_odd_total_support() {
        // j + k = 5: support within {1, 3, 5}
        let c = slater_pair_coefficients(2, 3).unwrap();
        for (idx, w) in c.weights().iter().enumerate() {
            if *w > 0.0 {
                assert!(idx % 2 == 1 && idx <= 5);
            }
        }
    }

    #[test]
    fn det_of_two_orbitals_is_the_pair() {
        let d = det_coefficients(&[0, 1]).unwrap();
        assert_eq!(d.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn det_012_frozen_weights() {
        // mean of slater pairs (0,1), (0,2), (1,2) = [0, 3/4, 0, 1/4]
        let d = det_coefficients(&[0, 1, 2]).unwrap();
        assert_eq!(d.weights(), &[0.0, 0.75, 0.0, 0.25]);
    }

    #[test]
    fn det_rejects_unsorted_or_duplicate() {
        assert!(det_coefficients(&[0, 0, 1]).is_err());
        assert!(det_coefficients(&[2, 1]).is_err());
        assert!(det_coefficients(&[4]).is_err());
    }

    #[test]
    fn det_canonical_support_is_odd_up_to_2n_minus_3() {
        for n in 2..=8usize {
            let orbitals: Vec<u32> = (0..n as u32).collect();
            let d = det_coefficients(&orbitals).unwrap();
            assert_eq!(d.weights().len(), 2 * n - 2);
            for (idx, w) in d.weights().iter().enumerate() {
                if idx % 2 == 0 {
                    assert_eq!(*w, 0.0);
                } else {
                    assert!(*w > 0.0, "odd entry {idx} should be positive for N={n}");
                }
            }
        }
    }

    #[test]
    fn eval_w_single_weight_closed_form() {
        let c = CoefficientVector::new(vec![1.0], CoefficientOrigin::Custom).unwrap();
        let v = eval_w(&c, 0.0, &quad()).unwrap();
        assert_relative_eq!(
            v,
            crate::potentials::SQRT_PI / std::f64::consts::SQRT_2,
            epsilon = 1e-13
        );
    }

    #[test]
    fn w00_reduces_to_scaled_v0() {
        let c = pair_coefficients(0, 0).unwrap();
        for &x in &[0.2, 1.0, 4.0] {
            assert_relative_eq!(
                eval_w(&c, x, &quad()).unwrap(),
                scaled_vm(0, x, &quad()).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn oracle_matches_scaled_v0_for_00() {
        for &x in &[0.1, 0.8, 3.0] {
            let o = oracle_w_direct(0, 0, x, &quad()).unwrap();
            let direct = scaled_vm(0, x, &quad()).unwrap();
            assert_relative_eq!(o, direct, epsilon = 1e-8);
        }
    }

    #[test]
    fn oracle_cross_checks_pairs() {
        let q = quad();
        for (m1, m2) in [(1u32, 1u32), (2, 3), (0, 2)] {
            let c = pair_coefficients(m1, m2).unwrap();
            for &x in &[0.5, 1.0, 2.0] {
                let via_coeffs = eval_w(&c, x, &q).unwrap();
                let via_oracle = oracle_w_direct(m1, m2, x, &q).unwrap();
                assert_relative_eq!(via_coeffs, via_oracle, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn oracle_cross_checks_slater_pairs() {
        let q = quad();
        for (j, k) in [(0u32, 1u32), (1, 2), (2, 5)] {
            let c = slater_pair_coefficients(j, k).unwrap();
            for &x in &[0.5, 2.0] {
                let via_coeffs = eval_w(&c, x, &q).unwrap();
                let via_oracle = oracle_w_slater_pair(j, k, x, &q).unwrap();
                assert_relative_eq!(via_coeffs, via_oracle, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn slater_oracle_01_is_scaled_v1() {
        let o = oracle_w_slater_pair(0, 1, 1.0, &quad()).unwrap();
        assert_relative_eq!(o, scaled_vm(1, 1.0, &quad()).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn oracle_rejects_large_indices_and_nonpositive_x() {
        assert!(oracle_w_direct(9, 0, 1.0, &quad()).is_err());
        assert!(oracle_w_direct(1, 1, 0.0, &quad()).is_err());
        assert!(oracle_w_slater_pair(0, 9, 1.0, &quad()).is_err());
    }

    #[test]
    fn interaction_tail_behaves_like_inverse_x() {
        let c = pair_coefficients(3, 4).unwrap();
        let w = eval_w(&c, 400.0, &quad()).unwrap();
        assert!((400.0 * w - 1.0).abs() < 1e-3);
    }

    #[test]
    fn interaction_lower_bound_by_top_index() {
        // W_{m1,m2}(x) >= (1/sqrt2) V_{m1+m2}(x/sqrt2)
        let q = quad();
        for (m1, m2) in [(1u32, 1u32), (2, 3), (0, 4)] {
            let c = pair_coefficients(m1, m2).unwrap();
            for &x in &[0.1, 1.0, 5.0, 20.0] {
                let w = eval_w(&c, x, &q).unwrap();
                let floor = scaled_vm(m1 + m2, x, &q).unwrap();
                assert!(w >= floor - 1e-9, "floor fails for ({m1},{m2}) at x={x}");
            }
        }
    }

    #[test]
    fn product_expansion_regression() {
        // |ζ1|²|ζ2|² in (s,t,θ) variables is (s⁴+t⁴-2s²t²cos2θ)/4:
        // equality of both routes pinned at a few points.
        for &(s, t, th) in &[(0.7f64, 1.3f64, 0.4f64), (1.0, 1.0, 1.1), (2.0, 0.3, 2.9)] {
            let z1_sq = 0.5 * (s * s + t * t + 2.0 * s * t * th.cos());
            let z2_sq = 0.5 * (s * s + t * t - 2.0 * s * t * th.cos());
            let expanded =
                0.25 * (s.powi(4) + t.powi(4) - 2.0 * s * s * t * t * (2.0 * th).cos());
            assert_relative_eq!(z1_sq * z2_sq, expanded, epsilon = 1e-12);
        }
    }

    #[test]
    fn coefficient_vector_validation() {
        assert!(CoefficientVector::new(vec![0.5, 0.6], CoefficientOrigin::Custom).is_err());
        assert!(CoefficientVector::new(vec![-0.1, 1.1], CoefficientOrigin::Custom).is_err());
        assert!(CoefficientVector::new(vec![], CoefficientOrigin::Custom).is_err());
        // length cap for product pairs
        assert!(CoefficientVector::new(
            vec![0.0, 0.0, 1.0],
            CoefficientOrigin::ProductPair { m1: 1, m2: 0 }
        )
        .is_err());
    }

    #[test]
    fn mean_index_of_equal_pair() {
        // For (1,1): 0·1/2 + 2·1/2 = 1.
        assert_relative_eq!(pair_coefficients(1, 1).unwrap().mean_index(), 1.0);
    }
}
