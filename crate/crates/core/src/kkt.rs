//! The discrete first-order system: state equation, adjoint equation with
//! nodal state-constraint multipliers, the control projection and the
//! complementarity conditions, solved by a semismooth Newton method.
//!
//! Unknowns are interleaved per interior node as `(y, p)` followed by `mu`
//! when the node carries a state constraint. This keeps the Newton matrix
//! banded with bandwidth about three times the grid width.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};
use crate::fem::{
    assemble_mass, assemble_stiffness, at, element, load_vector, local, nonlinear_vector, ClampState, DofMap, Load,
    P1Function, ProjectedControl,
};
use crate::linalg::{solve_general, SparseMatrix};
use crate::mesh::{constraint_nodes, Mesh, Region};
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::QuadratureRule;

pub type FieldFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// A state bound: a constant (possibly infinite) or a function of `x`.
#[derive(Clone)]
pub enum StateBound {
    Constant(f64),
    Function(FieldFn),
}

impl StateBound {
    pub fn eval(&self, x: [f64; 2]) -> f64 {
        match self {
            StateBound::Constant(c) => *c,
            StateBound::Function(f) => f(x),
        }
    }
}

impl fmt::Debug for StateBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateBound::Constant(c) => write!(f, "Constant({c})"),
            StateBound::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// One instance of the control problem.
#[derive(Clone)]
pub struct OcpSpec {
    pub alpha: f64,
    pub y0: FieldFn,
    pub u_a: f64,
    pub u_b: f64,
    pub y_a: StateBound,
    pub y_b: StateBound,
    pub region: Region,
    pub phi: Nonlinearity,
}

impl fmt::Debug for OcpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OcpSpec")
            .field("alpha", &self.alpha)
            .field("u_a", &self.u_a)
            .field("u_b", &self.u_b)
            .field("y_a", &self.y_a)
            .field("y_b", &self.y_b)
            .field("region", &self.region)
            .field("phi", &self.phi)
            .finish()
    }
}

impl OcpSpec {
    /// Unconstrained problem with desired state `y0`.
    pub fn unconstrained(alpha: f64, phi: Nonlinearity, y0: FieldFn) -> Self {
        OcpSpec {
            alpha,
            y0,
            u_a: f64::NEG_INFINITY,
            u_b: f64::INFINITY,
            y_a: StateBound::Constant(f64::NEG_INFINITY),
            y_b: StateBound::Constant(f64::INFINITY),
            region: Region::None,
            phi,
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        OcpSpec {
            alpha,
            ..self.clone()
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(invalid("alpha must be positive and finite"));
        }
        if !(self.u_a <= self.u_b) || self.u_a.is_nan() || self.u_b.is_nan() {
            return Err(invalid("control bounds must satisfy u_a <= u_b"));
        }
        if self.u_a == f64::INFINITY || self.u_b == f64::NEG_INFINITY {
            return Err(invalid("control bounds admit no control"));
        }
        Ok(())
    }
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct KktOptions {
    /// Target for the maximum norm of the stacked residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Complementarity scaling `c`.
    pub c: f64,
    /// Cut kinked triangles along the clamp level lines.
    pub exact_clamp: bool,
    pub desired_load: DesiredLoad,
}

/// How `int y0 psi_i` enters the adjoint equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DesiredLoad {
    /// `y0` sampled at the points of the volume rule.
    #[default]
    Quadrature,
    /// One-point centroid rule per triangle.
    Centroid,
}

impl Default for KktOptions {
    fn default() -> Self {
        KktOptions {
            tol: 1e-10,
            max_iter: 100,
            c: 1.0,
            exact_clamp: true,
            desired_load: DesiredLoad::Quadrature,
        }
    }
}

/// A converged discrete KKT point.
#[derive(Debug, Clone)]
pub struct KktSolution {
    pub y: P1Function,
    pub p: P1Function,
    /// Multipliers at `constraint_nodes`, same order.
    pub mu: Vec<f64>,
    /// Interior nodes carrying a state constraint.
    pub constraint_nodes: Vec<usize>,
    pub iterations: usize,
    pub residual_inf: f64,
    pub active_lower: Vec<usize>,
    pub active_upper: Vec<usize>,
    /// Share of the domain where the control sits on a bound.
    pub control_active_measure: f64,
    pub control: ProjectedControl,
    pub alpha: f64,
}

impl KktSolution {
    /// `(mu^a, mu^b)` as nodal vectors, with `mu = mu^b - mu^a`.
    pub fn mu_split(&self, mesh: &Mesh) -> (Vec<f64>, Vec<f64>) {
        let mut lower = vec![0.0; mesh.num_nodes()];
        let mut upper = vec![0.0; mesh.num_nodes()];
        for (&k, &m) in self.constraint_nodes.iter().zip(&self.mu) {
            lower[k] = (-m).max(0.0);
            upper[k] = m.max(0.0);
        }
        (lower, upper)
    }

    /// `J = 1/2 ||y_h - y0||^2 + alpha/2 ||u_h||^2`.
    pub fn objective(&self, mesh: &Mesh, spec: &OcpSpec) -> f64 {
        objective(mesh, spec, &self.y, &self.control)
    }
}

/// `1/2 ||y - y0||^2 + alpha/2 ||u||^2`, `y0` sampled at quadrature points.
pub fn objective(mesh: &Mesh, spec: &OcpSpec, y: &P1Function, u: &ProjectedControl) -> f64 {
    let rule = QuadratureRule::degree8();
    let tracking = crate::fem::integrate(mesh, &rule, |t, b, x| {
        let d = at(b, local(&y.values, mesh.triangles()[t])) - (spec.y0)(x);
        d * d
    });
    0.5 * tracking + 0.5 * spec.alpha * u.l2_norm_squared(mesh, &rule)
}

/// The control `clamp(-p_h/alpha, u_a, u_b)`, not itself a P1 function.
pub fn control_from_adjoint(p: &P1Function, spec: &OcpSpec) -> ProjectedControl {
    ProjectedControl {
        g: p.values.iter().map(|v| -v / spec.alpha).collect(),
        lower: spec.u_a,
        upper: spec.u_b,
        exact: true,
    }
}

/// Nodal complementarity function
/// `mu - max(0, mu + c (y - y_b)) - min(0, mu + c (y - y_a))`.
pub fn complementarity(mu: f64, y: f64, y_a: f64, y_b: f64, c: f64) -> f64 {
    mu - (mu + c * (y - y_b)).max(0.0) - (mu + c * (y - y_a)).min(0.0)
}

/// Blocks of the stacked residual. `state` and `adjoint` are indexed by
/// interior node, `complementarity` by constraint node.
#[derive(Debug, Clone, PartialEq)]
pub struct KktResidual {
    pub state: Vec<f64>,
    pub adjoint: Vec<f64>,
    pub complementarity: Vec<f64>,
}

impl KktResidual {
    pub fn inf_norm(&self) -> f64 {
        self.state
            .iter()
            .chain(&self.adjoint)
            .chain(&self.complementarity)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Residual of the discrete optimality system at `(y, p, mu)`, with `mu`
/// given per constraint node (see [`KktSolution::constraint_nodes`]).
pub fn kkt_residual(mesh: &Mesh, spec: &OcpSpec, y: &P1Function, p: &P1Function, mu: &[f64]) -> Result<KktResidual> {
    kkt_residual_with(mesh, spec, &KktOptions::default(), y, p, mu)
}

/// As [`kkt_residual`] for the discretization chosen in `opts`.
pub fn kkt_residual_with(
    mesh: &Mesh,
    spec: &OcpSpec,
    opts: &KktOptions,
    y: &P1Function,
    p: &P1Function,
    mu: &[f64],
) -> Result<KktResidual> {
    let sys = System::new(mesh, spec, opts)?;
    if mu.len() != sys.cons.len() || y.values.len() != mesh.num_nodes() || p.values.len() != mesh.num_nodes() {
        return Err(invalid("shapes of y, p, mu do not match the problem"));
    }
    let mut muv = vec![0.0; mesh.num_nodes()];
    for (c, &m) in sys.cons.iter().zip(mu) {
        muv[c.node] = m;
    }
    let (f1, f2, f3) = sys.blocks(&y.values, &p.values, &muv);
    Ok(KktResidual {
        state: f1,
        adjoint: f2,
        complementarity: f3,
    })
}

#[derive(Debug, Clone, Copy)]
struct Constraint {
    node: usize,
    lower: f64,
    upper: f64,
}

/// Everything fixed during one Newton solve.
struct System<'a> {
    mesh: &'a Mesh,
    spec: &'a OcpSpec,
    opts: KktOptions,
    rule: QuadratureRule,
    dofs: DofMap,
    stiffness: SparseMatrix,
    mass: SparseMatrix,
    /// `int y0 psi_i`
    target: Vec<f64>,
    cons: Vec<Constraint>,
    /// Per node: position of its `y` unknown, or `usize::MAX` on the boundary.
    base: Vec<usize>,
    /// Per node: index into `cons`, or `usize::MAX`.
    con_of: Vec<usize>,
    size: usize,
}

impl<'a> System<'a> {
    fn new(mesh: &'a Mesh, spec: &'a OcpSpec, opts: &KktOptions) -> Result<Self> {
        spec.check()?;
        let rule = QuadratureRule::degree8();
        let dofs = DofMap::new(mesh);
        let mut cons = Vec::new();
        for &k in &constraint_nodes(mesh, &spec.region).indices {
            let x = mesh.nodes()[k];
            let (lower, upper) = (spec.y_a.eval(x), spec.y_b.eval(x));
            if !(lower < upper) {
                return Err(Error::InfeasibleSpec { node: k });
            }
            if mesh.is_boundary(k) {
                // y_h vanishes there; the constraint is either void or unsatisfiable
                if !(lower <= 0.0 && 0.0 <= upper) {
                    return Err(Error::InfeasibleSpec { node: k });
                }
                continue;
            }
            if lower == f64::NEG_INFINITY && upper == f64::INFINITY {
                continue;
            }
            cons.push(Constraint { node: k, lower, upper });
        }
        let mut con_of = vec![usize::MAX; mesh.num_nodes()];
        for (i, c) in cons.iter().enumerate() {
            con_of[c.node] = i;
        }
        let mut base = vec![usize::MAX; mesh.num_nodes()];
        let mut size = 0;
        for &k in dofs.nodes() {
            base[k] = size;
            size += if con_of[k] == usize::MAX { 2 } else { 3 };
        }
        let y0 = spec.y0.clone();
        let f = move |x: [f64; 2]| y0(x);
        let target = match opts.desired_load {
            DesiredLoad::Quadrature => load_vector(mesh, Load::Analytic(&f), &rule),
            DesiredLoad::Centroid => load_vector(mesh, Load::Analytic(&f), &QuadratureRule::centroid()),
        };
        Ok(System {
            mesh,
            spec,
            opts: opts.clone(),
            rule,
            stiffness: assemble_stiffness(mesh),
            mass: assemble_mass(mesh),
            dofs,
            target,
            cons,
            base,
            con_of,
            size,
        })
    }

    fn control(&self, p: &[f64]) -> ProjectedControl {
        ProjectedControl {
            g: p.iter().map(|v| -v / self.spec.alpha).collect(),
            lower: self.spec.u_a,
            upper: self.spec.u_b,
            exact: self.opts.exact_clamp,
        }
    }

    /// `int phi'(y_h) p_h psi_i`
    fn weighted_adjoint(&self, y: &[f64], p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.mesh.num_nodes()];
        for t in 0..self.mesh.triangles().len() {
            let e = element(self.mesh, t);
            let (yv, pv) = (local(y, e.nodes), local(p, e.nodes));
            for (b, w) in self.rule.points.iter().zip(&self.rule.weights) {
                let c = w * e.area * self.spec.phi.dphi(at(b, yv)) * at(b, pv);
                for i in 0..3 {
                    out[e.nodes[i]] += c * b[i];
                }
            }
        }
        out
    }

    fn blocks(&self, y: &[f64], p: &[f64], mu: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let ay = self.stiffness.mul_vec(y);
        let ny = nonlinear_vector(self.mesh, &self.spec.phi, y, &self.rule);
        let bu = self.control(p).load_vector(self.mesh, &self.rule);
        let ap = self.stiffness.mul_vec(p);
        let wp = self.weighted_adjoint(y, p);
        let my = self.mass.mul_vec(y);
        let nodes = self.dofs.nodes();
        let f1 = nodes.iter().map(|&k| ay[k] + ny[k] - bu[k]).collect();
        let f2 = nodes
            .iter()
            .map(|&k| ap[k] + wp[k] - my[k] + self.target[k] - mu[k])
            .collect();
        let f3 = self
            .cons
            .iter()
            .map(|c| complementarity(mu[c.node], y[c.node], c.lower, c.upper, self.opts.c))
            .collect();
        (f1, f2, f3)
    }

    fn unpack(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.mesh.num_nodes();
        let (mut y, mut p, mut mu) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for &k in self.dofs.nodes() {
            let b = self.base[k];
            y[k] = z[b];
            p[k] = z[b + 1];
            if self.con_of[k] != usize::MAX {
                mu[k] = z[b + 2];
            }
        }
        (y, p, mu)
    }

    fn pack(&self, y: &[f64], p: &[f64], mu: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.size];
        for &k in self.dofs.nodes() {
            let b = self.base[k];
            z[b] = y[k];
            z[b + 1] = p[k];
            if self.con_of[k] != usize::MAX {
                z[b + 2] = mu[k];
            }
        }
        z
    }

    fn residual(&self, z: &[f64]) -> Vec<f64> {
        let (y, p, mu) = self.unpack(z);
        let (f1, f2, f3) = self.blocks(&y, &p, &mu);
        let mut r = vec![0.0; self.size];
        for (d, &k) in self.dofs.nodes().iter().enumerate() {
            let b = self.base[k];
            r[b] = f1[d];
            r[b + 1] = f2[d];
            let c = self.con_of[k];
            if c != usize::MAX {
                r[b + 2] = f3[c];
            }
        }
        r
    }

    /// Generalized derivative of the stacked residual.
    fn jacobian(&self, z: &[f64]) -> SparseMatrix {
        let (y, p, mu) = self.unpack(z);
        let phi = &self.spec.phi;
        let ctrl = self.control(&p);
        let inv_alpha = 1.0 / self.spec.alpha;
        let mut trip = Vec::with_capacity(self.mesh.triangles().len() * 9 * 5 + self.size);
        for t in 0..self.mesh.triangles().len() {
            let e = element(self.mesh, t);
            let (yv, pv) = (local(&y, e.nodes), local(&p, e.nodes));
            // W = int phi'(y) psi psi, V = int phi''(y) p psi psi
            let mut w = [[0.0; 3]; 3];
            let mut v = [[0.0; 3]; 3];
            for (b, wq) in self.rule.points.iter().zip(&self.rule.weights) {
                let yq = at(b, yv);
                let c1 = wq * e.area * phi.dphi(yq);
                let c2 = wq * e.area * phi.ddphi(yq) * at(b, pv);
                for i in 0..3 {
                    for j in 0..3 {
                        w[i][j] += c1 * b[i] * b[j];
                        v[i][j] += c2 * b[i] * b[j];
                    }
                }
            }
            let mut free = [[0.0; 3]; 3];
            ctrl.for_each_point(&e, &self.rule, |b, wq, state| {
                if state == ClampState::Free {
                    for i in 0..3 {
                        for j in 0..3 {
                            free[i][j] += wq * b[i] * b[j];
                        }
                    }
                }
            });
            for i in 0..3 {
                let bi = self.base[e.nodes[i]];
                if bi == usize::MAX {
                    continue;
                }
                for j in 0..3 {
                    let bj = self.base[e.nodes[j]];
                    if bj == usize::MAX {
                        continue;
                    }
                    let a = self.stiffness_local(&e, i, j);
                    let m = e.area / 12.0 * if i == j { 2.0 } else { 1.0 };
                    trip.push((bi, bj, a + w[i][j]));
                    trip.push((bi, bj + 1, inv_alpha * free[i][j]));
                    trip.push((bi + 1, bj, v[i][j] - m));
                    trip.push((bi + 1, bj + 1, a + w[i][j]));
                }
            }
        }
        for c in &self.cons {
            let b = self.base[c.node];
            trip.push((b + 1, b + 2, -1.0));
            let m = mu[c.node];
            let yk = y[c.node];
            let cc = self.opts.c;
            if m + cc * (yk - c.upper) > 0.0 || m + cc * (yk - c.lower) < 0.0 {
                trip.push((b + 2, b, -cc));
            } else {
                trip.push((b + 2, b + 2, 1.0));
            }
        }
        SparseMatrix::from_triplets(self.size, &trip)
    }

    #[inline]
    fn stiffness_local(&self, e: &crate::fem::Element, i: usize, j: usize) -> f64 {
        e.area * (e.grads[i][0] * e.grads[j][0] + e.grads[i][1] * e.grads[j][1])
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn two_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Initial iterate for [`solve_kkt_from`].
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    pub y: Vec<f64>,
    pub p: Vec<f64>,
    /// Nodal multipliers (zero off the constraint nodes).
    pub mu: Vec<f64>,
}

impl WarmStart {
    pub fn from_solution(sol: &KktSolution, mesh: &Mesh) -> Self {
        let mut mu = vec![0.0; mesh.num_nodes()];
        for (&k, &m) in sol.constraint_nodes.iter().zip(&sol.mu) {
            mu[k] = m;
        }
        WarmStart {
            y: sol.y.values.clone(),
            p: sol.p.values.clone(),
            mu,
        }
    }
}

/// Semismooth Newton from `y = p = mu = 0`.
pub fn solve_kkt(spec: &OcpSpec, mesh: &Mesh, opts: &KktOptions) -> Result<KktSolution> {
    solve_kkt_from(spec, mesh, opts, None)
}

/// Semismooth Newton from an optional warm start.
///
/// Every iteration solves with the generalized derivative and halves the
/// step (at most 30 times) until `||F||_2` satisfies an Armijo decrease.
pub fn solve_kkt_from(spec: &OcpSpec, mesh: &Mesh, opts: &KktOptions, start: Option<&WarmStart>) -> Result<KktSolution> {
    if !(opts.tol > 0.0) || !(opts.c > 0.0) {
        return Err(invalid("tolerance and complementarity scaling must be positive"));
    }
    let sys = System::new(mesh, spec, opts)?;
    let mut z = match start {
        Some(w) => {
            if w.y.len() != mesh.num_nodes() || w.p.len() != mesh.num_nodes() || w.mu.len() != mesh.num_nodes() {
                return Err(invalid("warm start does not match the mesh"));
            }
            sys.pack(&w.y, &w.p, &w.mu)
        }
        None => vec![0.0; sys.size],
    };
    let mut r = sys.residual(&z);
    let mut iterations = 0;
    while inf_norm(&r) > opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::NewtonDivergence {
                iterations,
                residual: inf_norm(&r),
            });
        }
        iterations += 1;
        let jac = sys.jacobian(&z);
        let step = solve_general(&jac, &r)?;
        let norm0 = two_norm(&r);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=crate::fem::MAX_HALVINGS {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(a, s)| a - lambda * s).collect();
            let rt = sys.residual(&trial);
            if two_norm(&rt) <= (1.0 - 1e-4 * lambda) * norm0 || inf_norm(&rt) <= opts.tol {
                accepted = Some((trial, rt));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, rt)) => {
                z = trial;
                r = rt;
            }
            None => {
                return Err(Error::NewtonDivergence {
                    iterations,
                    residual: inf_norm(&r),
                })
            }
        }
    }
    let (y, p, mu) = sys.unpack(&z);
    let mut active_lower = Vec::new();
    let mut active_upper = Vec::new();
    for c in &sys.cons {
        let (m, yk) = (mu[c.node], y[c.node]);
        if m + opts.c * (yk - c.upper) > 0.0 {
            active_upper.push(c.node);
        } else if m + opts.c * (yk - c.lower) < 0.0 {
            active_lower.push(c.node);
        }
    }
    let control = sys.control(&p);
    let control_active_measure = control.active_measure(mesh, &sys.rule);
    Ok(KktSolution {
        mu: sys.cons.iter().map(|c| mu[c.node]).collect(),
        constraint_nodes: sys.cons.iter().map(|c| c.node).collect(),
        y: P1Function { values: y },
        p: P1Function { values: p },
        iterations,
        residual_inf: inf_norm(&r),
        active_lower,
        active_upper,
        control_active_measure,
        control,
        alpha: spec.alpha,
    })
}

/// Solves for each `alpha` in descending order, warm starting from the
/// previous converged point and retrying cold when that fails.
pub fn alpha_sweep(spec: &OcpSpec, alphas: &[f64], mesh: &Mesh, opts: &KktOptions) -> Result<Vec<Result<KktSolution>>> {
    if alphas.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(invalid("alpha values must be strictly descending"));
    }
    let mut out = Vec::with_capacity(alphas.len());
    let mut warm: Option<WarmStart> = None;
    for &alpha in alphas {
        let s = spec.with_alpha(alpha);
        let mut res = solve_kkt_from(&s, mesh, opts, warm.as_ref());
        if res.is_err() && warm.is_some() {
            res = solve_kkt(&s, mesh, opts);
        }
        if let Ok(sol) = &res {
            warm = Some(WarmStart::from_solution(sol, mesh));
        }
        out.push(res);
    }
    Ok(out)
}
