//! Linear finite elements on a [`Mesh`]: assembly of the stiffness, mass and
//! semilinear forms, the discrete state solve `y_h = G_h(u)`, the Ritz
//! projection and `L^q` norms of P1 functions.
//!
//! Matrices are assembled over all nodes. Homogeneous Dirichlet conditions
//! are imposed by restricting to the interior through a [`DofMap`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::linalg::{solve_spd, SparseMatrix};
use crate::mesh::Mesh;
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::QuadratureRule;

/// Default residual tolerance of [`solve_state`].
pub const STATE_TOL: f64 = 1e-12;
/// Default Newton iteration budget of [`solve_state`].
pub const STATE_MAX_ITER: usize = 50;
/// Step halvings allowed per Newton iteration.
pub const MAX_HALVINGS: usize = 30;

/// Nodal coefficient vector of a continuous piecewise linear function.
#[derive(Debug, Clone, PartialEq)]
pub struct P1Function {
    pub values: Vec<f64>,
}

impl P1Function {
    pub fn zeros(mesh: &Mesh) -> Self {
        P1Function {
            values: vec![0.0; mesh.num_nodes()],
        }
    }

    pub fn from_values(mesh: &Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_nodes() {
            return Err(invalid("P1 function needs one value per mesh node"));
        }
        Ok(P1Function { values })
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(mesh: &Mesh, f: impl Fn([f64; 2]) -> f64) -> Self {
        P1Function {
            values: mesh.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    /// Nodal interpolant of `f` with boundary values set to zero.
    pub fn interpolate_zero_trace(mesh: &Mesh, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = mesh
            .nodes()
            .iter()
            .zip(mesh.boundary_mask())
            .map(|(&x, &b)| if b { 0.0 } else { f(x) })
            .collect();
        P1Function { values }
    }

    pub fn has_zero_trace(&self, mesh: &Mesh) -> bool {
        self.values
            .iter()
            .zip(mesh.boundary_mask())
            .all(|(v, &b)| !b || *v == 0.0)
    }

    pub fn eval(&self, mesh: &Mesh, x: [f64; 2]) -> f64 {
        let (t, b) = mesh.locate(x);
        let tri = mesh.triangles()[t];
        b[0] * self.values[tri[0]] + b[1] * self.values[tri[1]] + b[2] * self.values[tri[2]]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Numbering of the interior nodes, which carry the unknowns of `X_h0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    node_to_dof: Vec<Option<usize>>,
    dof_to_node: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Self {
        let mut node_to_dof = vec![None; mesh.num_nodes()];
        let mut dof_to_node = Vec::new();
        for (k, &b) in mesh.boundary_mask().iter().enumerate() {
            if !b {
                node_to_dof[k] = Some(dof_to_node.len());
                dof_to_node.push(k);
            }
        }
        DofMap {
            node_to_dof,
            dof_to_node,
        }
    }

    pub fn len(&self) -> usize {
        self.dof_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof_to_node.is_empty()
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        self.node_to_dof[node]
    }

    pub fn node(&self, dof: usize) -> usize {
        self.dof_to_node[dof]
    }

    pub fn nodes(&self) -> &[usize] {
        &self.dof_to_node
    }

    /// Interior entries of a nodal vector.
    pub fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.dof_to_node.iter().map(|&k| nodal[k]).collect()
    }

    /// Nodal vector with the given interior values and zeros on the boundary.
    pub fn extend(&self, interior: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.node_to_dof.len()];
        for (d, &k) in self.dof_to_node.iter().enumerate() {
            out[k] = interior[d];
        }
        out
    }

    /// Interior block of a matrix assembled over all nodes.
    pub fn restrict_matrix(&self, a: &SparseMatrix) -> SparseMatrix {
        a.submatrix(&self.dof_to_node)
    }
}

/// Area and barycentric gradients of one triangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Element {
    pub nodes: [usize; 3],
    pub verts: [[f64; 2]; 3],
    pub area: f64,
    pub grads: [[f64; 2]; 3],
}

pub(crate) fn element(mesh: &Mesh, t: usize) -> Element {
    let nodes = mesh.triangles()[t];
    let v = mesh.vertices(t);
    let det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    let mut grads = [[0.0; 2]; 3];
    for k in 0..3 {
        let a = v[(k + 1) % 3];
        let b = v[(k + 2) % 3];
        grads[k] = [(a[1] - b[1]) / det, (b[0] - a[0]) / det];
    }
    Element {
        nodes,
        verts: v,
        area: 0.5 * det.abs(),
        grads,
    }
}

#[inline]
pub(crate) fn at(b: &[f64; 3], v: [f64; 3]) -> f64 {
    b[0] * v[0] + b[1] * v[1] + b[2] * v[2]
}

#[inline]
pub(crate) fn local(values: &[f64], nodes: [usize; 3]) -> [f64; 3] {
    [values[nodes[0]], values[nodes[1]], values[nodes[2]]]
}

#[inline]
fn physical(e: &Element, b: &[f64; 3]) -> [f64; 2] {
    [
        b[0] * e.verts[0][0] + b[1] * e.verts[1][0] + b[2] * e.verts[2][0],
        b[0] * e.verts[0][1] + b[1] * e.verts[1][1] + b[2] * e.verts[2][1],
    ]
}

/// `int grad psi_j . grad psi_i` over all nodes.
pub fn assemble_stiffness(mesh: &Mesh) -> SparseMatrix {
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        for a in 0..3 {
            for b in 0..3 {
                let g = e.grads[a][0] * e.grads[b][0] + e.grads[a][1] * e.grads[b][1];
                trip.push((e.nodes[a], e.nodes[b], e.area * g));
            }
        }
    }
    SparseMatrix::from_triplets(mesh.num_nodes(), &trip)
}

/// `int psi_j psi_i` over all nodes, from the closed-form element matrix.
pub fn assemble_mass(mesh: &Mesh) -> SparseMatrix {
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        for a in 0..3 {
            for b in 0..3 {
                let m = if a == b { 2.0 } else { 1.0 };
                trip.push((e.nodes[a], e.nodes[b], e.area * m / 12.0));
            }
        }
    }
    SparseMatrix::from_triplets(mesh.num_nodes(), &trip)
}

/// `int w(x) psi_j psi_i` over all nodes, where the weight is given per
/// element and barycentric quadrature point.
pub fn assemble_weighted_mass(
    mesh: &Mesh,
    rule: &QuadratureRule,
    mut weight: impl FnMut(usize, &[f64; 3]) -> f64,
) -> SparseMatrix {
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        let mut loc = [[0.0; 3]; 3];
        for (b, w) in rule.points.iter().zip(&rule.weights) {
            let c = w * weight(t, b);
            for i in 0..3 {
                for j in 0..3 {
                    loc[i][j] += c * b[i] * b[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                trip.push((e.nodes[i], e.nodes[j], e.area * loc[i][j]));
            }
        }
    }
    SparseMatrix::from_triplets(mesh.num_nodes(), &trip)
}

/// Where a variationally discretized control sits relative to its bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClampState {
    Lower,
    Free,
    Upper,
}

/// The control `x -> clamp(g_h(x), lower, upper)` for a P1 function `g_h`.
///
/// The control is kinked inside triangles that the level lines `g_h = lower`
/// or `g_h = upper` cross. With `exact` set, such triangles are cut along
/// those lines and every piece is integrated exactly; otherwise the clamp is
/// simply sampled at the quadrature points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedControl {
    pub g: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl ProjectedControl {
    pub fn value(&self, g: f64) -> f64 {
        if g < self.lower {
            self.lower
        } else if g > self.upper {
            self.upper
        } else {
            g
        }
    }

    pub fn state(&self, g: f64) -> ClampState {
        if g < self.lower {
            ClampState::Lower
        } else if g > self.upper {
            ClampState::Upper
        } else {
            ClampState::Free
        }
    }

    pub fn eval(&self, mesh: &Mesh, x: [f64; 2]) -> f64 {
        let (t, b) = mesh.locate(x);
        self.value(at(&b, local(&self.g, mesh.triangles()[t])))
    }

    /// Calls `f(b, weight, state)` for each quadrature point of element `t`;
    /// `weight` already includes the (sub-)element area.
    pub(crate) fn for_each_point(
        &self,
        e: &Element,
        rule: &QuadratureRule,
        mut f: impl FnMut(&[f64; 3], f64, ClampState),
    ) {
        let gv = local(&self.g, e.nodes);
        let gmin = gv[0].min(gv[1]).min(gv[2]);
        let gmax = gv[0].max(gv[1]).max(gv[2]);
        let whole = if gmin >= self.lower && gmax <= self.upper {
            Some(ClampState::Free)
        } else if gmax <= self.lower {
            Some(ClampState::Lower)
        } else if gmin >= self.upper {
            Some(ClampState::Upper)
        } else {
            None
        };
        if let Some(state) = whole {
            for (b, w) in rule.points.iter().zip(&rule.weights) {
                f(b, w * e.area, state);
            }
            return;
        }
        if !self.exact {
            for (b, w) in rule.points.iter().zip(&rule.weights) {
                f(b, w * e.area, self.state(at(b, gv)));
            }
            return;
        }
        let corners = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mut pieces: Vec<(Vec<[f64; 3]>, ClampState)> = Vec::with_capacity(3);
        if self.lower.is_finite() {
            let lower = self.lower;
            pieces.push((
                clip(&corners, |b| lower - at(b, gv)),
                ClampState::Lower,
            ));
        }
        if self.upper.is_finite() {
            let upper = self.upper;
            pieces.push((
                clip(&corners, |b| at(b, gv) - upper),
                ClampState::Upper,
            ));
        }
        let mut free = corners.to_vec();
        if self.lower.is_finite() {
            let lower = self.lower;
            free = clip(&free, |b| at(b, gv) - lower);
        }
        if self.upper.is_finite() {
            let upper = self.upper;
            free = clip(&free, |b| upper - at(b, gv));
        }
        pieces.push((free, ClampState::Free));
        for (poly, state) in &pieces {
            for k in 1..poly.len().saturating_sub(1) {
                let (p0, p1, p2) = (poly[0], poly[k], poly[k + 1]);
                let ratio = ((p1[1] - p0[1]) * (p2[2] - p0[2]) - (p2[1] - p0[1]) * (p1[2] - p0[2])).abs();
                if ratio == 0.0 {
                    continue;
                }
                for (s, w) in rule.points.iter().zip(&rule.weights) {
                    let b = [
                        s[0] * p0[0] + s[1] * p1[0] + s[2] * p2[0],
                        s[0] * p0[1] + s[1] * p1[1] + s[2] * p2[1],
                        s[0] * p0[2] + s[1] * p1[2] + s[2] * p2[2],
                    ];
                    f(&b, w * ratio * e.area, *state);
                }
            }
        }
    }

    /// `int u psi_i` over all nodes.
    pub fn load_vector(&self, mesh: &Mesh, rule: &QuadratureRule) -> Vec<f64> {
        let mut out = vec![0.0; mesh.num_nodes()];
        for t in 0..mesh.triangles().len() {
            let e = element(mesh, t);
            let gv = local(&self.g, e.nodes);
            self.for_each_point(&e, rule, |b, w, _| {
                let u = self.value(at(b, gv));
                for i in 0..3 {
                    out[e.nodes[i]] += w * u * b[i];
                }
            });
        }
        out
    }

    /// Derivative of the load with respect to the nodal values of `g`:
    /// `int_{free} psi_j psi_i`.
    pub fn free_mass(&self, mesh: &Mesh, rule: &QuadratureRule) -> SparseMatrix {
        let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
        for t in 0..mesh.triangles().len() {
            let e = element(mesh, t);
            let mut loc = [[0.0; 3]; 3];
            self.for_each_point(&e, rule, |b, w, state| {
                if state == ClampState::Free {
                    for i in 0..3 {
                        for j in 0..3 {
                            loc[i][j] += w * b[i] * b[j];
                        }
                    }
                }
            });
            for i in 0..3 {
                for j in 0..3 {
                    if loc[i][j] != 0.0 {
                        trip.push((e.nodes[i], e.nodes[j], loc[i][j]));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(mesh.num_nodes(), &trip)
    }

    /// `int u^2`.
    pub fn l2_norm_squared(&self, mesh: &Mesh, rule: &QuadratureRule) -> f64 {
        let mut sum = 0.0;
        for t in 0..mesh.triangles().len() {
            let e = element(mesh, t);
            let gv = local(&self.g, e.nodes);
            self.for_each_point(&e, rule, |b, w, _| {
                let u = self.value(at(b, gv));
                sum += w * u * u;
            });
        }
        sum
    }

    /// Share of the domain (by quadrature weight) where the clamp is active.
    pub fn active_measure(&self, mesh: &Mesh, rule: &QuadratureRule) -> f64 {
        let mut sum = 0.0;
        for t in 0..mesh.triangles().len() {
            let e = element(mesh, t);
            self.for_each_point(&e, rule, |_, w, state| {
                if state != ClampState::Free {
                    sum += w;
                }
            });
        }
        sum
    }
}

/// Sutherland–Hodgman clip of a convex polygon in barycentric coordinates
/// against the half-plane `s >= 0` of an affine `s`.
fn clip(poly: &[[f64; 3]], s: impl Fn(&[f64; 3]) -> f64) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let p = poly[k];
        let q = poly[(k + 1) % poly.len()];
        let (sp, sq) = (s(&p), s(&q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push([
                p[0] + t * (q[0] - p[0]),
                p[1] + t * (q[1] - p[1]),
                p[2] + t * (q[2] - p[2]),
            ]);
        }
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

/// Right-hand side of the state equation.
#[derive(Clone, Copy)]
pub enum Load<'a> {
    Zero,
    /// A P1 function given by nodal values.
    Nodal(&'a [f64]),
    /// A function evaluated at the quadrature points.
    Analytic(&'a dyn Fn([f64; 2]) -> f64),
    /// A variationally discretized control.
    Projected(&'a ProjectedControl),
}

/// `int f psi_i` over all nodes.
pub fn load_vector(mesh: &Mesh, load: Load<'_>, rule: &QuadratureRule) -> Vec<f64> {
    match load {
        Load::Zero => vec![0.0; mesh.num_nodes()],
        Load::Nodal(v) => assemble_mass(mesh).mul_vec(v),
        Load::Analytic(f) => {
            let mut out = vec![0.0; mesh.num_nodes()];
            for t in 0..mesh.triangles().len() {
                let e = element(mesh, t);
                for (b, w) in rule.points.iter().zip(&rule.weights) {
                    let c = w * e.area * f(physical(&e, b));
                    for i in 0..3 {
                        out[e.nodes[i]] += c * b[i];
                    }
                }
            }
            out
        }
        Load::Projected(c) => c.load_vector(mesh, rule),
    }
}

/// `int phi(y_h) psi_i` over all nodes.
pub fn nonlinear_vector(mesh: &Mesh, phi: &Nonlinearity, y: &[f64], rule: &QuadratureRule) -> Vec<f64> {
    let mut out = vec![0.0; mesh.num_nodes()];
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        let yv = local(y, e.nodes);
        for (b, w) in rule.points.iter().zip(&rule.weights) {
            let c = w * e.area * phi.phi(at(b, yv));
            for i in 0..3 {
                out[e.nodes[i]] += c * b[i];
            }
        }
    }
    out
}

/// Interior residual `A y + N(y) - b(u)` of the discrete state equation.
pub fn assemble_semilinear_residual(
    mesh: &Mesh,
    phi: &Nonlinearity,
    y: &P1Function,
    load: Load<'_>,
) -> Vec<f64> {
    let rule = QuadratureRule::degree8();
    let dofs = DofMap::new(mesh);
    semilinear_residual(mesh, &assemble_stiffness(mesh), &dofs, phi, &y.values, load, &rule)
}

/// As [`assemble_semilinear_residual`] with an explicit quadrature rule.
pub fn assemble_semilinear_residual_with(
    mesh: &Mesh,
    phi: &Nonlinearity,
    y: &P1Function,
    load: Load<'_>,
    rule: &QuadratureRule,
) -> Vec<f64> {
    let dofs = DofMap::new(mesh);
    semilinear_residual(mesh, &assemble_stiffness(mesh), &dofs, phi, &y.values, load, rule)
}

pub(crate) fn semilinear_residual(
    mesh: &Mesh,
    stiffness: &SparseMatrix,
    dofs: &DofMap,
    phi: &Nonlinearity,
    y: &[f64],
    load: Load<'_>,
    rule: &QuadratureRule,
) -> Vec<f64> {
    let ay = stiffness.mul_vec(y);
    let ny = nonlinear_vector(mesh, phi, y, rule);
    let b = load_vector(mesh, load, rule);
    dofs.nodes().iter().map(|&k| ay[k] + ny[k] - b[k]).collect()
}

/// Interior block of `A + W(y)` with `W(y)_ij = int phi'(y_h) psi_j psi_i`.
pub fn assemble_semilinear_jacobian(mesh: &Mesh, phi: &Nonlinearity, y: &P1Function) -> SparseMatrix {
    let rule = QuadratureRule::degree8();
    let dofs = DofMap::new(mesh);
    let full = jacobian_full(mesh, &assemble_stiffness(mesh), phi, &y.values, &rule);
    dofs.restrict_matrix(&full)
}

pub(crate) fn jacobian_full(
    mesh: &Mesh,
    stiffness: &SparseMatrix,
    phi: &Nonlinearity,
    y: &[f64],
    rule: &QuadratureRule,
) -> SparseMatrix {
    let w = assemble_weighted_mass(mesh, rule, |t, b| {
        phi.dphi(at(b, local(y, mesh.triangles()[t])))
    });
    add(stiffness, &w)
}

/// Entrywise sum of two matrices of the same dimension.
pub(crate) fn add(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let mut trip = Vec::with_capacity(a.nnz() + b.nnz());
    for m in [a, b] {
        for i in 0..m.dim() {
            trip.extend(m.row(i).map(|(j, v)| (i, j, v)));
        }
    }
    SparseMatrix::from_triplets(a.dim(), &trip)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn two_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Solves `A y + N(y) = b(u)` in `X_h0` by damped Newton from `y = 0`.
///
/// Steps are halved (at most [`MAX_HALVINGS`] times) until the residual norm
/// decreases. Returns once `||residual||_inf <= tol`.
pub fn solve_state(
    mesh: &Mesh,
    phi: &Nonlinearity,
    load: Load<'_>,
    tol: f64,
    max_iter: usize,
) -> Result<P1Function> {
    if !(tol > 0.0) {
        return Err(invalid("state tolerance must be positive"));
    }
    let rule = QuadratureRule::degree8();
    let dofs = DofMap::new(mesh);
    let stiffness = assemble_stiffness(mesh);
    let b = load_vector(mesh, load, &rule);
    let residual = |y: &[f64]| -> Vec<f64> {
        let ay = stiffness.mul_vec(y);
        let ny = nonlinear_vector(mesh, phi, y, &rule);
        dofs.nodes().iter().map(|&k| ay[k] + ny[k] - b[k]).collect()
    };
    let mut y = vec![0.0; mesh.num_nodes()];
    let mut r = residual(&y);
    for _ in 0..max_iter {
        if inf_norm(&r) <= tol {
            return Ok(P1Function { values: y });
        }
        let jac = dofs.restrict_matrix(&jacobian_full(mesh, &stiffness, phi, &y, &rule));
        let step = solve_spd(&jac, &r)?;
        let norm0 = two_norm(&r);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = y.clone();
            for (d, &k) in dofs.nodes().iter().enumerate() {
                trial[k] -= lambda * step[d];
            }
            let rt = residual(&trial);
            if two_norm(&rt) < norm0 || inf_norm(&rt) <= tol {
                accepted = Some((trial, rt));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, rt)) => {
                y = trial;
                r = rt;
            }
            None => break,
        }
    }
    if inf_norm(&r) <= tol {
        return Ok(P1Function { values: y });
    }
    Err(Error::NewtonDivergence {
        iterations: max_iter,
        residual: inf_norm(&r),
    })
}

/// Ritz projection of a zero-trace function given through its gradient:
/// `int grad R_h w . grad v_h = int grad w . grad v_h` for all `v_h` in `X_h0`.
pub fn ritz_projection(mesh: &Mesh, grad_w: impl Fn([f64; 2]) -> [f64; 2]) -> Result<P1Function> {
    let rule = QuadratureRule::degree8();
    let dofs = DofMap::new(mesh);
    let mut rhs = vec![0.0; mesh.num_nodes()];
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        for (b, w) in rule.points.iter().zip(&rule.weights) {
            let g = grad_w(physical(&e, b));
            for i in 0..3 {
                rhs[e.nodes[i]] += w * e.area * (g[0] * e.grads[i][0] + g[1] * e.grads[i][1]);
            }
        }
    }
    let a = dofs.restrict_matrix(&assemble_stiffness(mesh));
    let x = solve_spd(&a, &dofs.restrict(&rhs))?;
    Ok(P1Function {
        values: dofs.extend(&x),
    })
}

/// `(int |f|^q)^(1/q)`.
///
/// Exact up to rounding for integer `q`: even powers are polynomials on every
/// triangle, and for odd `q` triangles where `f` changes sign are cut along the
/// zero line first. Other exponents use a degree-12 rule and are only
/// approximate on sign-changing triangles.
pub fn lq_norm(mesh: &Mesh, f: &P1Function, q: f64) -> Result<f64> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid("lq_norm needs finite q >= 2"));
    }
    if f.values.len() != mesh.num_nodes() {
        return Err(invalid("P1 function does not match the mesh"));
    }
    let integer = q == libm::floor(q) && q <= 64.0;
    let rule = if integer {
        QuadratureRule::for_degree(q as usize)
    } else {
        QuadratureRule::collapsed(12)
    };
    let odd = integer && (q as u64) % 2 == 1;
    let corners = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut sum = 0.0;
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        let fv = local(&f.values, e.nodes);
        let pos = fv.iter().any(|&v| v > 0.0);
        let neg = fv.iter().any(|&v| v < 0.0);
        if odd && pos && neg {
            for sign in [1.0, -1.0] {
                let poly = clip(&corners, |b| sign * at(b, fv));
                for k in 1..poly.len().saturating_sub(1) {
                    let (p0, p1, p2) = (poly[0], poly[k], poly[k + 1]);
                    let ratio = ((p1[1] - p0[1]) * (p2[2] - p0[2]) - (p2[1] - p0[1]) * (p1[2] - p0[2])).abs();
                    for (s, w) in rule.points.iter().zip(&rule.weights) {
                        let b = [
                            s[0] * p0[0] + s[1] * p1[0] + s[2] * p2[0],
                            s[0] * p0[1] + s[1] * p1[1] + s[2] * p2[1],
                            s[0] * p0[2] + s[1] * p1[2] + s[2] * p2[2],
                        ];
                        sum += w * ratio * e.area * powi_abs(sign * at(&b, fv), q);
                    }
                }
            }
        } else {
            for (b, w) in rule.points.iter().zip(&rule.weights) {
                sum += w * e.area * powi_abs(at(b, fv), q);
            }
        }
    }
    Ok(libm::pow(sum, 1.0 / q))
}

/// How [`norm_with`] evaluates `int |f|^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormQuadrature {
    /// As [`lq_norm`].
    #[default]
    Exact,
    /// One-point centroid rule per triangle. Cheaper and only first-order
    /// accurate, but it is what many legacy codes report.
    Centroid,
}

/// `L^q` norm of `f` under the chosen evaluation.
pub fn norm_with(mesh: &Mesh, f: &P1Function, q: f64, how: NormQuadrature) -> Result<f64> {
    match how {
        NormQuadrature::Exact => lq_norm(mesh, f, q),
        NormQuadrature::Centroid => {
            if !(q >= 2.0) || !q.is_finite() {
                return Err(invalid("lq_norm needs finite q >= 2"));
            }
            if f.values.len() != mesh.num_nodes() {
                return Err(invalid("P1 function does not match the mesh"));
            }
            let mut sum = 0.0;
            for t in 0..mesh.triangles().len() {
                let e = element(mesh, t);
                let fv = local(&f.values, e.nodes);
                sum += e.area * powi_abs((fv[0] + fv[1] + fv[2]) / 3.0, q);
            }
            Ok(libm::pow(sum, 1.0 / q))
        }
    }
}

#[inline]
fn powi_abs(v: f64, q: f64) -> f64 {
    let a = v.abs();
    if q == 4.0 {
        let a2 = a * a;
        a2 * a2
    } else if q == 2.0 {
        a * a
    } else {
        libm::pow(a, q)
    }
}

/// Integral of a function given at the quadrature points of every element.
pub fn integrate(mesh: &Mesh, rule: &QuadratureRule, mut f: impl FnMut(usize, &[f64; 3], [f64; 2]) -> f64) -> f64 {
    let mut sum = 0.0;
    for t in 0..mesh.triangles().len() {
        let e = element(mesh, t);
        for (b, w) in rule.points.iter().zip(&rule.weights) {
            sum += w * e.area * f(t, b, physical(&e, b));
        }
    }
    sum
}
