//! Quadrature primitives: Gauss–Legendre and Gauss–Laguerre rules with
//! cached nodes, and a node-doubling refinement driver.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::CoreError;
use crate::Result;

/// Tolerance and refinement policy for adaptive quadrature.
///
/// `node_count` is the initial rule size; each refinement doubles it, up to
/// `max_refinements` times, until two successive estimates agree within
/// `max(abs_tol, rel_tol * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 64,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_refinements: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(CoreError::InvalidInput(format!(
                "quadrature node_count must be >= 2, got {}",
                self.node_count
            )));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(CoreError::InvalidInput(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn agrees(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol.max(self.rel_tol * b.abs())
    }
}

/// Nodes and weights of a fixed quadrature rule.
#[derive(Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static LEGENDRE_CACHE: RwLock<Option<HashMap<usize, Arc<Rule>>>> = RwLock::new(None);
static LAGUERRE_CACHE: RwLock<Option<HashMap<usize, Arc<Rule>>>> = RwLock::new(None);

fn cached(cache: &RwLock<Option<HashMap<usize, Arc<Rule>>>>, n: usize, make: fn(usize) -> Rule) -> Arc<Rule> {
    if let Some(map) = cache.read().unwrap().as_ref() {
        if let Some(rule) = map.get(&n) {
            return Arc::clone(rule);
        }
    }
    let rule = Arc::new(make(n));
    cache
        .write()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(n, Arc::clone(&rule));
    rule
}

/// Gauss–Legendre rule on [-1, 1].
pub fn legendre_rule(n: usize) -> Arc<Rule> {
    cached(&LEGENDRE_CACHE, n, compute_legendre)
}

/// Gauss–Laguerre rule for the weight e^{-u} on [0, ∞).
pub fn laguerre_rule(n: usize) -> Arc<Rule> {
    cached(&LAGUERRE_CACHE, n, compute_laguerre)
}

fn compute_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            // derivative from the recurrence: P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Laguerre recurrence evaluated on the exponentially scaled functions
/// l_k = L_k e^{-x/2}, which stay O(1) for all k and x. Returns (l_n, l_{n-1}).
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64) {
    let mut l0 = (-0.5 * x).exp();
    let mut l1 = (1.0 - x) * l0;
    if n == 0 {
        return (l0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - x) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l1, l0)
}

fn compute_laguerre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = if i == 0 {
            3.0 / (1.0 + 2.4 * nf)
        } else if i == 1 {
            nodes[0] + 15.0 / (1.0 + 2.5 * nf)
        } else {
            let ai = (i - 1) as f64;
            nodes[i - 1] + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (nodes[i - 1] - nodes[i - 2])
        };
        for _ in 0..100 {
            let (ln, lnm1) = laguerre_scaled(n, x);
            // Newton step for L_n using L_n' = n (L_n - L_{n-1}) / x.
            let dx = x * ln / (nf * (ln - lnm1));
            x -= dx;
            if dx.abs() < 1e-14 * x.max(1.0) {
                break;
            }
        }
        nodes[i] = x;
        // w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2), evaluated through the scaled
        // recurrence so the e^{-x} weight never overflows.
        let (lnp1, _) = laguerre_scaled(n + 1, x);
        let ln_w = x.ln() - 2.0 * ((nf + 1.0) * lnp1.abs()).ln() - x;
        weights[i] = ln_w.exp();
    }
    Rule { nodes, weights }
}

/// Runs `estimate` with doubling node counts until two successive values
/// agree within the spec's tolerance. Returns the converged value or an
/// accuracy error carrying the best estimate.
pub fn refine_to_tolerance(
    spec: &QuadratureSpec,
    context: &'static str,
    mut estimate: impl FnMut(usize) -> f64,
) -> Result<f64> {
    spec.validate()?;
    let mut n = spec.node_count.max(16);
    let mut prev = estimate(n);
    for _ in 0..=spec.max_refinements {
        n *= 2;
        let cur = estimate(n);
        if spec.agrees(prev, cur) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(CoreError::Accuracy {
        context,
        best: prev,
        error_bound: f64::NAN,
    })
}
