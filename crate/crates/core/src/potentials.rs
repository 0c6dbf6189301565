//! Regularized Coulomb potentials of the lowest Landau band.
//!
//! `V_m(x)` is the 3D Coulomb potential averaged over the transverse profile
//! of the Landau state with angular momentum -m (unit field):
//!
//! ```text
//! V_m(x) = (1/m!) ∫₀^∞ s^{2m+1} e^{-s²} / sqrt(x² + s²) ds · 2
//!        = (1/m!) ∫₀^∞ u^m e^{-u} / sqrt(x² + u) du
//! ```
//!
//! Properties used throughout: V_m is even, monotonically decreasing in |x|,
//! decreasing in m, bracketed by 1/sqrt(x²+m+1) < V_m(x) < 1/sqrt(x²+m), and
//! behaves like 1/|x| at infinity.
//!
//! Evaluation dispatches by regime:
//! - m = 0 at moderate x: closed form sqrt(pi) e^{x²} erfc(|x|),
//! - large x (x² above a configurable multiple of m+1): asymptotic series
//!   in 1/x²,
//! - otherwise: quadrature after the substitution s = |x| sinh(w), which
//!   removes the branch point at s = ±ix and leaves an entire integrand:
//!
//! ```text
//! V_m(x) = (2/m!) |x|^{2m+1} ∫₀^W sinh^{2m+1}(w) e^{-x² sinh²(w)} dw.
//! ```
//!
//! The 1/m! is folded into the exponent through log-gamma, so large m never
//! overflows.

use libm::{erfc, lgamma as ln_gamma};

use crate::error::CoreError;
use crate::quadrature::{legendre_rule, refine_to_tolerance, QuadratureSpec};
use crate::Result;

/// Angular-momentum label of a Landau state. Nonnegative by construction.
pub type LandauIndex = u32;

pub const SQRT_PI: f64 = 1.772453850905516;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Nuclear charge and field strength. The effective mass M = B^{-1/2} of the
/// one-dimensional model is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    z: f64,
    b: f64,
}

impl FieldParams {
    pub fn new(z: f64, b: f64) -> Result<Self> {
        if !(z > 0.0) || !(b > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "FieldParams requires Z > 0 and B > 0, got Z={z}, B={b}"
            )));
        }
        Ok(Self { z, b })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// M = B^{-1/2}.
    pub fn effective_mass(&self) -> f64 {
        1.0 / self.b.sqrt()
    }
}

/// Regime-switch thresholds for `eval_vm`.
#[derive(Debug, Clone, Copy)]
pub struct VmRegimes {
    /// Use the erfc closed form for m = 0 while x² <= this value.
    pub erfc_x2_max: f64,
    /// Use the asymptotic series when x² > factor · (m+1).
    pub asymptotic_x2_factor: f64,
}

impl Default for VmRegimes {
    fn default() -> Self {
        Self {
            erfc_x2_max: 100.0,
            asymptotic_x2_factor: 100.0,
        }
    }
}

/// V_m(0) = Γ(m + 1/2) / m!.
pub fn vm_at_origin(m: LandauIndex) -> f64 {
    (ln_gamma(f64::from(m) + 0.5) - ln_gamma(f64::from(m) + 1.0)).exp()
}

/// Evaluates V_m(x) with the default regime switches.
pub fn eval_vm(m: LandauIndex, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    eval_vm_with_regimes(m, x, quad, &VmRegimes::default())
}

/// Evaluates V_m(x) with explicit regime switches (tests use this to force
/// the quadrature path against the closed forms).
pub fn eval_vm_with_regimes(
    m: LandauIndex,
    x: f64,
    quad: &QuadratureSpec,
    regimes: &VmRegimes,
) -> Result<f64> {
    quad.validate()?;
    let xa = x.abs();
    if xa == 0.0 {
        return Ok(vm_at_origin(m));
    }
    let x2 = xa * xa;
    if m == 0 && x2 <= regimes.erfc_x2_max {
        return Ok(SQRT_PI * x2.exp() * erfc(xa));
    }
    if x2 > regimes.asymptotic_x2_factor * (f64::from(m) + 1.0) {
        return Ok(vm_asymptotic(m, xa));
    }
    vm_quadrature(m, xa, quad)
}

/// 1/|x| expansion: V_m(x) ~ (1/|x|) Σ_k (-1)^k (2k)!/(4^k k!²) (m+k)!/(m! x^{2k}).
/// Valid (terms decreasing) while m + k < x²; the regime switch guarantees a
/// comfortable margin, so truncation error is far below machine precision.
fn vm_asymptotic(m: LandauIndex, xa: f64) -> f64 {
    let x2 = xa * xa;
    let mf = f64::from(m);
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut k = 0.0;
    loop {
        sum += term;
        let next = -term * (2.0 * k + 1.0) * (mf + k + 1.0) / (2.0 * (k + 1.0) * x2);
        if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
            break;
        }
        term = next;
        k += 1.0;
    }
    sum / xa
}

fn vm_quadrature(m: LandauIndex, xa: f64, quad: &QuadratureSpec) -> Result<f64> {
    let mf = f64::from(m);
    // Upper cutoff in s: the integrand peaks at s ≈ sqrt(m + 1/2) and the
    // exponent has dropped by >= 45 at s_peak + 8 (relative tail < 1e-19).
    let s_max = (mf + 0.5).sqrt() + 8.0;
    let w_max = (s_max / xa).asinh();
    let ln_norm = std::f64::consts::LN_2 - ln_gamma(mf + 1.0);
    refine_to_tolerance(quad, "eval_vm quadrature", |n| {
        let rule = legendre_rule(n);
        let mut acc = 0.0;
        for (node, weight) in rule.nodes.iter().zip(&rule.weights) {
            let w = 0.5 * w_max * (node + 1.0);
            let s = xa * w.sinh();
            let ln_f = (2.0 * mf + 1.0) * s.ln() - s * s + ln_norm;
            acc += weight * ln_f.exp();
        }
        acc * 0.5 * w_max
    })
}

/// V_m^B(x) = sqrt(B) · V_m(sqrt(B) · x), the unit-field rescaling.
pub fn eval_vm_field(m: LandauIndex, b: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(b > 0.0) {
        return Err(CoreError::InvalidInput(format!(
            "field strength must be positive, got {b}"
        )));
    }
    let sb = b.sqrt();
    Ok(sb * eval_vm(m, sb * x, quad)?)
}

/// Slater-average nuclear potential V_av(x) = (1/N) Σ_{j=0}^{N-1} V_j(x).
pub fn eval_vav(n: u32, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    if n < 1 {
        return Err(CoreError::InvalidInput("V_av requires N >= 1".into()));
    }
    let mut sum = 0.0;
    for j in 0..n {
        sum += eval_vm(j, x, quad)?;
    }
    Ok(sum / f64::from(n))
}

/// The envelope 1/sqrt(x²+m+1) < V_m(x) < 1/sqrt(x²+m). The upper bound is
/// unbounded at m = 0, x = 0; `upper` is `None` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmEnvelope {
    pub lower: f64,
    pub upper: Option<f64>,
}

pub fn vm_envelope(m: LandauIndex, x: f64) -> VmEnvelope {
    let x2 = x * x;
    let mf = f64::from(m);
    let lower = 1.0 / (x2 + mf + 1.0).sqrt();
    let upper = if m == 0 && x == 0.0 {
        None
    } else {
        Some(1.0 / (x2 + mf).sqrt())
    };
    VmEnvelope { lower, upper }
}

/// V_m values tabulated over a grid, one row per requested m.
#[derive(Debug, Clone)]
pub struct VmTable {
    pub ms: Vec<LandauIndex>,
    pub xs: Vec<f64>,
    /// values[i][j] = V_{ms[i]}(xs[j])
    pub values: Vec<Vec<f64>>,
}

pub fn vm_table(
    m_list: &[LandauIndex],
    xs: &[f64],
    quad: &QuadratureSpec,
) -> Result<VmTable> {
    let mut values = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let mut row = Vec::with_capacity(xs.len());
        for &x in xs {
            row.push(eval_vm(m, x, quad)?);
        }
        values.push(row);
    }
    Ok(VmTable {
        ms: m_list.to_vec(),
        xs: xs.to_vec(),
        values,
    })
}

/// Diagnostic for the refined average identity
/// V_av(x) ≈ 2 V_N(x) - (2x²/N)(1/x - V_{N-1}(x)).
/// Exposed for inspection only; the identity is an approximation chain, not
/// an invariant of this crate.
#[derive(Debug, Clone, Copy)]
pub struct VavDiagnostic {
    pub exact: f64,
    pub refined: f64,
}

pub fn vav_refined_diagnostic(n: u32, x: f64, quad: &QuadratureSpec) -> Result<VavDiagnostic> {
    if n < 1 {
        return Err(CoreError::InvalidInput("V_av requires N >= 1".into()));
    }
    if x == 0.0 {
        return Err(CoreError::InvalidInput(
            "refined V_av identity carries a 1/x term; x must be nonzero".into(),
        ));
    }
    let exact = eval_vav(n, x, quad)?;
    let vn = eval_vm(n, x, quad)?;
    let vnm1 = eval_vm(n - 1, x, quad)?;
    let xa = x.abs();
    let refined = 2.0 * vn - (2.0 * xa * xa / f64::from(n)) * (1.0 / xa - vnm1);
    Ok(VavDiagnostic { exact, refined })
}

/// Scaled interaction term (1/sqrt 2) V_j(x / sqrt 2) that convex
/// combinations of effective interactions are built from.
pub fn scaled_vm(j: LandauIndex, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(eval_vm(j, x / SQRT_2, quad)? / SQRT_2)
}
