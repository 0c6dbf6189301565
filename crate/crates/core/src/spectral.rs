//! Discretized one-dimensional Schrödinger problems.
//!
//! The effective Hamiltonian acts on [-L, L] with Dirichlet boundary
//! conditions (ghost nodes beyond both ends), discretized by second-order
//! central differences into a symmetric tridiagonal operator with constant
//! off-diagonal -1/(M h²). Ground states come from Sturm bisection plus
//! inverse iteration. On top of that:
//!
//! - Hartree mean field: product ansatz Φ = φ⊗…⊗φ, each electron feeling
//!   -Z Ṽ + (N-1) (W ⋆ |φ|²), a variational upper bound for the symmetric
//!   ground state.
//! - Exact two-electron: restarted Lanczos on the 2D grid restricted to
//!   symmetric functions φ(x₁,x₂) = φ(x₂,x₁).
//! - Binding tests E(N) < E(N-1) and maximum-ionization scans over N.

use crate::error::CoreError;
use crate::models::ModelSpec;
use crate::quadrature::QuadratureSpec;
use crate::Result;

/// Uniform symmetric grid on [-L, L]; n odd so x = 0 is a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_extent: f64,
    points: usize,
}

impl Grid1D {
    pub fn new(half_extent: f64, points: usize) -> Result<Self> {
        if !(half_extent > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "grid half extent must be positive, got {half_extent}"
            )));
        }
        if points < 3 || points % 2 == 0 {
            return Err(CoreError::InvalidInput(format!(
                "grid needs an odd number of points >= 3, got {points}"
            )));
        }
        Ok(Self {
            half_extent,
            points,
        })
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.node(i))
    }
}

/// Symmetric tridiagonal operator -1/M d²/dx² + V with Dirichlet boundary.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub grid: Grid1D,
}

impl DiscreteOperator {
    /// Spectral scale used for relative tolerances.
    fn scale(&self) -> f64 {
        let dmax = self.diagonal.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let omax = self.off_diagonal.first().map_or(0.0, |o| o.abs());
        dmax + 2.0 * omax
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = v.len();
        let off = self.off_diagonal[0];
        for i in 0..n {
            let mut acc = self.diagonal[i] * v[i];
            if i > 0 {
                acc += off * v[i - 1];
            }
            if i + 1 < n {
                acc += off * v[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// SCF iteration controls for the Hartree solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfOptions {
    pub max_iterations: usize,
    pub mixing: f64,
    pub energy_tol: f64,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            mixing: 0.5,
            energy_tol: 1e-10,
        }
    }
}

impl ScfOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || !(self.mixing > 0.0 && self.mixing <= 1.0) || !(self.energy_tol > 0.0)
        {
            return Err(CoreError::InvalidInput(format!("bad SCF options {self:?}")));
        }
        Ok(())
    }
}

/// Relative binding tolerance: bound means e_N < e_{N-1} - tol·|e_{N-1}|.
pub const DEFAULT_BINDING_TOL_REL: f64 = 1e-8;

/// Central-difference discretization of -1/M d²/dx² + potential(x).
pub fn discretize(
    grid: Grid1D,
    effective_mass: f64,
    potential: impl Fn(f64) -> f64,
) -> Result<DiscreteOperator> {
    if !(effective_mass > 0.0) {
        return Err(CoreError::InvalidInput(format!(
            "effective mass must be positive, got {effective_mass}"
        )));
    }
    let h = grid.spacing();
    let kin = 1.0 / (effective_mass * h * h);
    let n = grid.points();
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        let v = potential(grid.node(i));
        if !v.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "potential is not finite at x = {}",
                grid.node(i)
            )));
        }
        diagonal.push(2.0 * kin + v);
    }
    Ok(DiscreteOperator {
        diagonal,
        off_diagonal: vec![-kin; n - 1],
        grid,
    })
}

/// Number of eigenvalues strictly below `lambda` (Sturm sequence).
fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - lambda;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let d_safe = if d.abs() < 1e-300 {
            if d >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            d
        };
        d = (diag[i] - lambda) - off[i - 1] * off[i - 1] / d_safe;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves (A - sigma I) x = b in place by the Thomas algorithm; `sigma` must
/// sit strictly below the spectrum so the shifted matrix is positive
/// definite.
fn shifted_solve(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];
    d[0] = diag[0] - sigma;
    c[0] = off[0] / d[0];
    b[0] /= d[0];
    for i in 1..n {
        d[i] = (diag[i] - sigma) - off[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = off[i] / d[i];
        }
        b[i] = (b[i] - off[i - 1] * b[i - 1]) / d[i];
    }
    for i in (0..n - 1).rev() {
        b[i] -= c[i] * b[i + 1];
    }
}

/// Smallest eigenvalue and eigenvector, normalized so Σ v_i² h = 1.
///
/// Sturm bisection brackets the eigenvalue, inverse iteration from a shift
/// just below it recovers the vector, and the Rayleigh quotient sharpens the
/// returned energy.
pub fn ground_state(op: &DiscreteOperator, tol: f64) -> Result<(f64, Vec<f64>)> {
    if !(tol > 0.0) {
        return Err(CoreError::InvalidInput("tolerance must be positive".into()));
    }
    let diag = &op.diagonal;
    let off = &op.off_diagonal;
    let n = diag.len();
    let scale = op.scale();
    // Gershgorin bracket
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let width_target = (tol.min(1e-10) * scale.max(1.0)).max(1e-14 * scale.max(1.0));
    let mut iterations = 0;
    while hi - lo > width_target && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let sigma = lo - (hi - lo).max(1e-13 * scale.max(1.0));
    // inverse iteration from a positive start (the ground state is nodeless)
    let h = op.grid.spacing();
    let mut v = vec![1.0; n];
    let mut energy = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..50 {
        shifted_solve(diag, off, sigma, &mut v);
        let norm = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(CoreError::Accuracy {
                context: "inverse iteration",
                best: energy,
                error_bound: hi - lo,
            });
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        let mut av = vec![0.0; n];
        op.apply(&v, &mut av);
        energy = v.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>();
        let residual: f64 = av
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - energy * b) * (a - energy * b))
            .sum::<f64>()
            .sqrt();
        if residual <= (tol * scale.max(1.0)).max(1e-13 * scale.max(1.0)) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CoreError::Accuracy {
            context: "ground_state inverse iteration",
            best: energy,
            error_bound: hi - lo,
        });
    }
    let norm_h = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    for x in v.iter_mut() {
        *x /= norm_h;
    }
    // sign convention: nodeless and positive
    if v[n / 2] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    Ok((energy, v))
}

const BOUNDARY_GUARD_NODES: usize = 5;
const BOUNDARY_GUARD_MASS: f64 = 1e-6;

fn boundary_mass(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    let k = BOUNDARY_GUARD_NODES.min(n / 2);
    let head: f64 = v[..k].iter().map(|x| x * x).sum();
    let tail: f64 = v[n - k..].iter().map(|x| x * x).sum();
    (head + tail) * h
}

fn nuclear_table(model: &ModelSpec, grid: Grid1D, quad: &QuadratureSpec) -> Result<Vec<f64>> {
    grid.nodes()
        .map(|x| model.nuclear_potential(x, quad))
        .collect()
}

fn interaction_table(model: &ModelSpec, grid: Grid1D, quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let h = grid.spacing();
    (0..grid.points())
        .map(|k| crate::interactions::eval_w(model.interaction(), k as f64 * h, quad))
        .collect()
}

/// Ground energy e_0(1, Z, sqrt(B)) of -sqrt(B) d²/dx² - Z Ṽ(x), i.e. the
/// discretization with effective mass M = B^{-1/2}.
pub fn single_electron_energy(
    z: f64,
    b: f64,
    model: &ModelSpec,
    grid: Grid1D,
    tol: f64,
) -> Result<f64> {
    let quad = QuadratureSpec::default();
    let v_nuc = nuclear_table(model, grid, &quad)?;
    let op = build_single_op(z, b, grid, &v_nuc)?;
    let (energy, vector) = ground_state(&op, tol)?;
    let bm = boundary_mass(&vector, grid.spacing());
    if bm > BOUNDARY_GUARD_MASS {
        return Err(CoreError::DomainTooSmall {
            boundary_mass: bm,
            suggested_half_extent: 2.0 * grid.half_extent(),
        });
    }
    Ok(energy)
}

fn build_single_op(z: f64, b: f64, grid: Grid1D, v_nuc: &[f64]) -> Result<DiscreteOperator> {
    if !(b > 0.0) || !(z > 0.0) {
        return Err(CoreError::InvalidInput(format!(
            "require Z > 0 and B > 0, got Z={z}, B={b}"
        )));
    }
    let mass = 1.0 / b.sqrt();
    let h = grid.spacing();
    let kin = 1.0 / (mass * h * h);
    let diagonal = v_nuc.iter().map(|v| 2.0 * kin - z * v).collect();
    Ok(DiscreteOperator {
        diagonal,
        off_diagonal: vec![-kin; grid.points() - 1],
        grid,
    })
}

/// Doubles the half extent (keeping the spacing) until the boundary-mass
/// guard passes. Grids grow at most `max_doublings` times.
pub fn single_electron_energy_auto(
    z: f64,
    b: f64,
    model: &ModelSpec,
    initial: Grid1D,
    tol: f64,
    max_doublings: u32,
) -> Result<(f64, Grid1D)> {
    let mut grid = initial;
    let h = initial.spacing();
    for _ in 0..=max_doublings {
        match single_electron_energy(z, b, model, grid, tol) {
            Ok(e) => return Ok((e, grid)),
            Err(CoreError::DomainTooSmall { .. }) => {
                let l = 2.0 * grid.half_extent();
                let n = ((2.0 * l / h).round() as usize) | 1;
                grid = Grid1D::new(l, n.max(3))?;
            }
            Err(e) => return Err(e),
        }
    }
    Err(CoreError::DomainTooSmall {
        boundary_mass: f64::NAN,
        suggested_half_extent: 2.0 * grid.half_extent(),
    })
}

/// Hartree solve outcome.
#[derive(Debug, Clone)]
pub struct HartreeResult {
    pub energy: f64,
    pub iterations: usize,
    /// Last SCF energy change.
    pub residual: f64,
    pub orbital: Vec<f64>,
}

/// Self-consistent product-ansatz energy for N electrons:
/// each orbital solves the mean-field equation with -Z Ṽ plus
/// (N-1)·(W ⋆ |φ|²); the reported value is the variational functional
/// N⟨φ|T - ZṼ|φ⟩ + (N(N-1)/2)⟨φ|(W⋆|φ|²)|φ⟩, an upper bound to the
/// symmetric ground energy.
pub fn hartree_energy(
    n_electrons: u32,
    z: f64,
    b: f64,
    model: &ModelSpec,
    grid: Grid1D,
    opts: &ScfOptions,
) -> Result<HartreeResult> {
    opts.validate()?;
    if n_electrons < 1 {
        return Err(CoreError::InvalidInput("need N >= 1".into()));
    }
    let quad = QuadratureSpec::default();
    let v_nuc = nuclear_table(model, grid, &quad)?;
    let bare = build_single_op(z, b, grid, &v_nuc)?;
    let (e1, phi1) = ground_state(&bare, opts.energy_tol)?;
    if n_electrons == 1 {
        return Ok(HartreeResult {
            energy: e1,
            iterations: 0,
            residual: 0.0,
            orbital: phi1,
        });
    }
    let w_diff = interaction_table(model, grid, &quad)?;
    let n = grid.points();
    let h = grid.spacing();
    let nf = f64::from(n_electrons);
    let pair_count = nf * (nf - 1.0) / 2.0;

    let convolve = |rho: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let mut acc = 0.0;
            for (j, r) in rho.iter().enumerate() {
                let k = i.abs_diff(j);
                acc += w_diff[k] * r;
            }
            out[i] = acc * h;
        }
    };
    let functional = |phi: &[f64]| -> f64 {
        let mut hphi = vec![0.0; n];
        bare.apply(phi, &mut hphi);
        let one_body: f64 = phi.iter().zip(&hphi).map(|(a, b)| a * b).sum::<f64>() * h;
        let rho: Vec<f64> = phi.iter().map(|p| p * p).collect();
        let mut conv = vec![0.0; n];
        convolve(&rho, &mut conv);
        let two_body: f64 = rho.iter().zip(&conv).map(|(r, c)| r * c).sum::<f64>() * h;
        nf * one_body + pair_count * two_body
    };

    // strongly repulsive systems relax toward a box-filling density; seed
    // from whichever of the localized and uniform starts scores lower
    let mut orbital = phi1;
    {
        let uniform = vec![1.0 / (2.0 * grid.half_extent()); n];
        let mut conv0 = vec![0.0; n];
        convolve(&uniform, &mut conv0);
        let kin = -bare.off_diagonal[0];
        let diagonal: Vec<f64> = (0..n)
            .map(|i| 2.0 * kin - z * v_nuc[i] + (nf - 1.0) * conv0[i])
            .collect();
        let op = DiscreteOperator {
            diagonal,
            off_diagonal: bare.off_diagonal.clone(),
            grid,
        };
        if let Ok((_, phi_u)) = ground_state(&op, opts.energy_tol) {
            if functional(&phi_u) < functional(&orbital) {
                orbital = phi_u;
            }
        }
    }
    let mut rho: Vec<f64> = orbital.iter().map(|p| p * p).collect();
    // the mean-field response scales with (N-1)·W, so the stable mixing
    // window shrinks like 1/N; cap the requested value accordingly
    let mut mixing = opts.mixing.min(4.0 / nf);
    let mixing_floor = (mixing / 64.0).min(1e-3);
    let mut energy = functional(&orbital);
    let mut history = Vec::new();
    let mut conv = vec![0.0; n];
    for it in 1..=opts.max_iterations {
        convolve(&rho, &mut conv);
        let kin = -bare.off_diagonal[0];
        let diagonal: Vec<f64> = (0..n)
            .map(|i| 2.0 * kin - z * v_nuc[i] + (nf - 1.0) * conv[i])
            .collect();
        let op = DiscreteOperator {
            diagonal,
            off_diagonal: bare.off_diagonal.clone(),
            grid,
        };
        let (_eps, phi) = ground_state(&op, opts.energy_tol)?;
        let e_new = functional(&phi);
        let change = (e_new - energy).abs();
        history.push(change);
        if e_new > energy {
            mixing = (0.5 * mixing).max(mixing_floor);
        }
        let keep = e_new <= energy;
        if keep {
            orbital = phi.clone();
        }
        if change <= opts.energy_tol * energy.abs().max(1.0) {
            return Ok(HartreeResult {
                energy: e_new.min(energy),
                iterations: it,
                residual: change,
                orbital,
            });
        }
        let new_rho: Vec<f64> = phi.iter().map(|p| p * p).collect();
        for (r, nr) in rho.iter_mut().zip(&new_rho) {
            *r = (1.0 - mixing) * *r + mixing * nr;
        }
        energy = e_new.min(energy);
    }
    Err(CoreError::NonConvergence {
        iterations: opts.max_iterations,
        last_residual: history.last().copied().unwrap_or(f64::NAN),
        residual_history: history,
    })
}

/// Desk-scale guard for the 2D eigenproblem.
pub const TWO_ELECTRON_MAX_POINTS: usize = 600;

/// Lowest eigenvalue of the symmetric two-electron operator
/// T⊗I + I⊗T + v(x₁) + v(x₂) + w(x₁-x₂) on the grid, with `v` and the
/// difference table `w` supplied directly. Building block for
/// [`exact_two_electron`] and for separability tests with w ≡ 0.
pub fn two_electron_ground(
    grid: Grid1D,
    effective_mass: f64,
    v_single: &[f64],
    w_diff: &[f64],
    tol: f64,
) -> Result<f64> {
    let n = grid.points();
    if n > TWO_ELECTRON_MAX_POINTS {
        return Err(CoreError::SizeLimit(format!(
            "two-electron grid {n} exceeds {TWO_ELECTRON_MAX_POINTS} points per axis"
        )));
    }
    if v_single.len() != n || w_diff.len() != n {
        return Err(CoreError::InvalidInput(
            "potential tables must match the grid".into(),
        ));
    }
    let h = grid.spacing();
    let kin = 1.0 / (effective_mass * h * h);
    let dim = n * n;

    let matvec = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let mut acc =
                    (4.0 * kin + v_single[i] + v_single[j] + w_diff[i.abs_diff(j)]) * x[idx];
                if i > 0 {
                    acc -= kin * x[idx - n];
                }
                if i + 1 < n {
                    acc -= kin * x[idx + n];
                }
                if j > 0 {
                    acc -= kin * x[idx - 1];
                }
                if j + 1 < n {
                    acc -= kin * x[idx + 1];
                }
                y[idx] = acc;
            }
        }
    };
    let symmetrize = |x: &mut [f64]| {
        for i in 0..n {
            for j in (i + 1)..n {
                let a = x[i * n + j];
                let b = x[j * n + i];
                let m = 0.5 * (a + b);
                x[i * n + j] = m;
                x[j * n + i] = m;
            }
        }
    };

    // start from the symmetric nodeless product of 1D ground states
    let op1 = DiscreteOperator {
        diagonal: v_single.iter().map(|v| 2.0 * kin + v).collect(),
        off_diagonal: vec![-kin; n - 1],
        grid,
    };
    let (_, phi) = ground_state(&op1, tol.max(1e-12))?;
    let mut start = vec![0.0; dim];
    for i in 0..n {
        for j in 0..n {
            start[i * n + j] = phi[i] * phi[j];
        }
    }

    let scale = {
        let vmax = v_single.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let wmax = w_diff.iter().fold(0.0f64, |a, w| a.max(w.abs()));
        8.0 * kin + 2.0 * vmax + wmax
    };
    let res_target = (tol * scale.max(1.0)).max(1e-12 * scale.max(1.0));
    let max_basis = 80usize.min(dim);

    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut q0 = start;
    symmetrize(&mut q0);
    let n0 = norm(&q0);
    for a in q0.iter_mut() {
        *a /= n0;
    }

    let mut best_theta = f64::INFINITY;
    for _restart in 0..40 {
        let mut basis: Vec<Vec<f64>> = vec![q0.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut hq = vec![0.0; dim];
        let mut theta = f64::INFINITY;
        let mut ritz: Vec<f64> = Vec::new();
        for k in 0..max_basis {
            matvec(&basis[k], &mut hq);
            let alpha: f64 = basis[k].iter().zip(&hq).map(|(a, b)| a * b).sum();
            alphas.push(alpha);
            let mut r = hq.clone();
            // full reorthogonalization keeps the basis clean despite restarts
            for q in &basis {
                let c: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
            for q in &basis {
                let c: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
            symmetrize(&mut r);
            let beta = norm(&r);
            // smallest Ritz pair of the current tridiagonal projection
            let (th, coeffs) = small_tridiag_ground(&alphas, &betas);
            theta = th;
            ritz = coeffs;
            let resid_est = if ritz.is_empty() {
                f64::INFINITY
            } else {
                beta * ritz.last().unwrap().abs()
            };
            if resid_est <= res_target || beta < 1e-13 * scale.max(1.0) || k + 1 == max_basis {
                break;
            }
            betas.push(beta);
            let mut next = r;
            for a in next.iter_mut() {
                *a /= beta;
            }
            basis.push(next);
        }
        // assemble Ritz vector and verify the true residual
        let mut v = vec![0.0; dim];
        for (c, q) in ritz.iter().zip(&basis) {
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi += c * qi;
            }
        }
        symmetrize(&mut v);
        let nv = norm(&v);
        for a in v.iter_mut() {
            *a /= nv;
        }
        let mut hv = vec![0.0; dim];
        matvec(&v, &mut hv);
        let rq: f64 = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let resid = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rq * b) * (a - rq * b))
            .sum::<f64>()
            .sqrt();
        best_theta = best_theta.min(rq);
        if resid <= res_target {
            return Ok(rq);
        }
        let _ = theta;
        q0 = v;
    }
    Err(CoreError::Accuracy {
        context: "two-electron Lanczos",
        best: best_theta,
        error_bound: res_target,
    })
}

/// Smallest eigenpair of the Lanczos tridiagonal projection.
fn small_tridiag_ground(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    if k == 1 {
        return (alphas[0], vec![1.0]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { betas[i - 1].abs() } else { 0.0 }
            + if i < k - 1 { betas[i].abs() } else { 0.0 };
        lo = lo.min(alphas[i] - r);
        hi = hi.max(alphas[i] + r);
    }
    let scale = (hi - lo).max(1e-300);
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(alphas, betas, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * scale {
            break;
        }
    }
    let sigma = lo - 1e-12 * scale;
    let mut v = vec![1.0; k];
    for _ in 0..4 {
        shifted_solve(alphas, betas, sigma, &mut v);
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in v.iter_mut() {
            *a /= nv;
        }
    }
    (0.5 * (lo + hi), v)
}

/// Lowest symmetric eigenvalue of the discretized two-electron Hamiltonian
/// for the given model.
pub fn exact_two_electron(
    z: f64,
    b: f64,
    model: &ModelSpec,
    grid: Grid1D,
    tol: f64,
) -> Result<f64> {
    let quad = QuadratureSpec::default();
    let v_nuc = nuclear_table(model, grid, &quad)?;
    let v_single: Vec<f64> = v_nuc.iter().map(|v| -z * v).collect();
    let w_diff = interaction_table(model, grid, &quad)?;
    two_electron_ground(grid, 1.0 / b.sqrt(), &v_single, &w_diff, tol)
}

/// Which many-body solver backs a binding test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Hartree,
    Exact2,
}

#[derive(Debug, Clone, Copy)]
pub struct BindingOutcome {
    pub bound: bool,
    pub e_n: f64,
    pub e_n_minus_1: f64,
}

/// Single-electron energy without the boundary-mass guard: comparisons in
/// binding tests must still work when a marginal state fills the box.
fn single_electron_energy_unguarded(
    z: f64,
    b: f64,
    model: &ModelSpec,
    grid: Grid1D,
    tol: f64,
) -> Result<f64> {
    let quad = QuadratureSpec::default();
    let v_nuc = nuclear_table(model, grid, &quad)?;
    let op = build_single_op(z, b, grid, &v_nuc)?;
    Ok(ground_state(&op, tol)?.0)
}

fn energy_for(
    n: u32,
    z: f64,
    b: f64,
    model: &ModelSpec,
    solver: SolverKind,
    grid: Grid1D,
    opts: &ScfOptions,
) -> Result<f64> {
    match n {
        0 => Ok(0.0),
        1 => single_electron_energy_unguarded(z, b, model, grid, opts.energy_tol),
        _ => match solver {
            SolverKind::Hartree => Ok(hartree_energy(n, z, b, model, grid, opts)?.energy),
            SolverKind::Exact2 => {
                if n > 2 {
                    return Err(CoreError::InvalidInput(
                        "exact2 solver handles N <= 2 only".into(),
                    ));
                }
                exact_two_electron(z, b, model, grid, opts.energy_tol)
            }
        },
    }
}

/// Tests E(N) < E(N-1) - tol·|E(N-1)| with the chosen solver.
pub fn binding_test(
    n: u32,
    z: f64,
    b: f64,
    model: &ModelSpec,
    solver: SolverKind,
    grid: Grid1D,
    opts: &ScfOptions,
    binding_tol_rel: f64,
) -> Result<BindingOutcome> {
    if n < 1 {
        return Err(CoreError::InvalidInput("binding test needs N >= 1".into()));
    }
    let e_prev = energy_for(n - 1, z, b, model, solver, grid, opts)?;
    let e_n = energy_for(n, z, b, model, solver, grid, opts)?;
    Ok(BindingOutcome {
        bound: e_n < e_prev - binding_tol_rel * e_prev.abs(),
        e_n,
        e_n_minus_1: e_prev,
    })
}

/// One row of a maximum-ionization scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub n: u32,
    pub energy: Option<f64>,
    pub bound: bool,
    pub iterations: usize,
    pub residual: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct NmaxScan {
    /// Largest N for which binding held; 0 if none did.
    pub n_max: u32,
    /// True when binding still held at the cap.
    pub truncated: bool,
    pub rows: Vec<ScanRow>,
}

/// Hartree (single-electron for N = 1) energy of one scan row; errors are
/// returned so callers can record them without aborting. The N = 1 solve
/// keeps the boundary-mass guard so an undersized grid surfaces in the row.
pub fn scan_energy(
    n: u32,
    z: f64,
    b: f64,
    model: &ModelSpec,
    grid: Grid1D,
    opts: &ScfOptions,
) -> Result<(f64, usize, f64)> {
    if n == 1 {
        single_electron_energy(z, b, model, grid, opts.energy_tol).map(|e| (e, 0, 0.0))
    } else {
        hartree_energy(n, z, b, model, grid, opts).map(|r| (r.energy, r.iterations, r.residual))
    }
}

/// Derives binding flags and n_max from per-N solve outcomes; each energy
/// is compared to the last successful one.
pub fn fold_scan(
    outcomes: Vec<(u32, Result<(f64, usize, f64)>)>,
    binding_tol_rel: f64,
) -> NmaxScan {
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut e_prev = 0.0f64;
    let mut n_max = 0;
    let mut last_bound = false;
    for (n, solved) in outcomes {
        match solved {
            Ok((energy, iterations, residual)) => {
                let bound = energy < e_prev - binding_tol_rel * e_prev.abs();
                rows.push(ScanRow {
                    n,
                    energy: Some(energy),
                    bound,
                    iterations,
                    residual,
                    error: None,
                });
                if bound {
                    n_max = n;
                }
                last_bound = bound;
                e_prev = energy;
            }
            Err(e) => {
                rows.push(ScanRow {
                    n,
                    energy: None,
                    bound: false,
                    iterations: 0,
                    residual: f64::NAN,
                    error: Some(e.to_string()),
                });
                last_bound = false;
            }
        }
    }
    NmaxScan {
        n_max,
        truncated: last_bound,
        rows,
    }
}

/// Increments N from 1, testing binding with the Hartree solver; per-N
/// failures are recorded without aborting the scan.
pub fn nmax_scan(
    z: f64,
    b: f64,
    model: &ModelSpec,
    cap: u32,
    grid: Grid1D,
    opts: &ScfOptions,
    binding_tol_rel: f64,
) -> Result<NmaxScan> {
    if cap < 1 {
        return Err(CoreError::InvalidInput("scan cap must be >= 1".into()));
    }
    let outcomes = (1..=cap)
        .map(|n| (n, scan_energy(n, z, b, model, grid, opts)))
        .collect();
    Ok(fold_scan(outcomes, binding_tol_rel))
}
