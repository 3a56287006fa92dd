//! Uniform triangulations of the unit square and the constraint node set.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

/// Uniform Friedrichs–Keller triangulation of `(0,1)^2`.
///
/// Nodes are numbered row-major, `k = j * (n + 1) + i` for the node at
/// `(i / n, j / n)`. Every grid square is split along the diagonal from its
/// lower-left to its upper-right corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    n: usize,
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
}

impl Mesh {
    pub fn build_uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("mesh needs at least 2 subdivisions per side"));
        }
        let m = n + 1;
        let step = 1.0 / n as f64;
        let mut nodes = Vec::with_capacity(m * m);
        let mut boundary = Vec::with_capacity(m * m);
        for j in 0..m {
            for i in 0..m {
                nodes.push([i as f64 * step, j as f64 * step]);
                boundary.push(i == 0 || j == 0 || i == n || j == n);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let v00 = j * m + i;
                let v10 = v00 + 1;
                let v01 = v00 + m;
                let v11 = v01 + 1;
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }
        Ok(Mesh {
            n,
            nodes,
            triangles,
            boundary,
        })
    }

    /// Subdivisions per side.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Longest edge length, `sqrt(2) / n`.
    pub fn h(&self) -> f64 {
        core::f64::consts::SQRT_2 / self.n as f64
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary[node]
    }

    /// Interior node indices in increasing order.
    pub fn interior_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&k| !self.boundary[k]).collect()
    }

    pub fn vertices(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Signed area of triangle `t` (positive for every triangle of this mesh).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    /// Locates the triangle containing `x` and its barycentric coordinates.
    /// Points outside the closed unit square are clamped onto it.
    pub fn locate(&self, x: [f64; 2]) -> (usize, [f64; 3]) {
        let n = self.n;
        let nf = n as f64;
        let sx = (x[0].clamp(0.0, 1.0)) * nf;
        let sy = (x[1].clamp(0.0, 1.0)) * nf;
        let i = (libm::floor(sx) as usize).min(n - 1);
        let j = (libm::floor(sy) as usize).min(n - 1);
        let lx = sx - i as f64;
        let ly = sy - j as f64;
        let square = j * n + i;
        if ly <= lx {
            // [v00, v10, v11]
            (2 * square, [1.0 - lx, lx - ly, ly])
        } else {
            // [v00, v11, v01]
            (2 * square + 1, [1.0 - ly, lx, ly - lx])
        }
    }
}

/// Point predicate used for user-defined constraint regions.
pub type RegionPredicate = Arc<dyn Fn([f64; 2]) -> bool + Send + Sync>;

/// Descriptor of the compact constraint region `K`.
#[derive(Clone, Default)]
pub enum Region {
    /// `K` empty: no state constraints.
    #[default]
    None,
    /// Every interior node is a constraint node (`K` = closure of the domain with
    /// bounds compatible on the boundary).
    AllInterior,
    /// Closed axis-aligned box `[x0, x1] x [y0, y1]`.
    Box { x: [f64; 2], y: [f64; 2] },
    /// Arbitrary region, tested on vertices, edge midpoints and centroid.
    Predicate(RegionPredicate),
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::None => write!(f, "None"),
            Region::AllInterior => write!(f, "AllInterior"),
            Region::Box { x, y } => write!(f, "Box({x:?} x {y:?})"),
            Region::Predicate(_) => write!(f, "Predicate(..)"),
        }
    }
}

/// Sorted, deduplicated nodes carrying nodal state constraints.
#[derive(Debug, Clone)]
pub struct ConstraintNodeSet {
    pub indices: Vec<usize>,
    pub region: Region,
}

impl ConstraintNodeSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.indices.binary_search(&node).is_ok()
    }
}

/// Vertices of all triangles that meet `region`.
pub fn constraint_nodes(mesh: &Mesh, region: &Region) -> ConstraintNodeSet {
    let mut indices = match region {
        Region::None => Vec::new(),
        Region::AllInterior => mesh.interior_nodes(),
        Region::Box { x, y } => collect_vertices(mesh, |t| {
            triangle_meets_box(&mesh.vertices(t), *x, *y)
        }),
        Region::Predicate(pred) => collect_vertices(mesh, |t| {
            let [a, b, c] = mesh.vertices(t);
            let mid = |p: [f64; 2], q: [f64; 2]| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
            let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
            [a, b, c, mid(a, b), mid(b, c), mid(c, a), centroid]
                .into_iter()
                .any(|p| pred(p))
        }),
    };
    indices.sort_unstable();
    indices.dedup();
    ConstraintNodeSet {
        indices,
        region: region.clone(),
    }
}

fn collect_vertices(mesh: &Mesh, mut hit: impl FnMut(usize) -> bool) -> Vec<usize> {
    let mut out = Vec::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        if hit(t) {
            out.extend_from_slice(tri);
        }
    }
    out
}

/// Separating-axis test between a closed triangle and a closed box.
/// Touching counts as intersecting.
fn triangle_meets_box(tri: &[[f64; 2]; 3], bx: [f64; 2], by: [f64; 2]) -> bool {
    const EPS: f64 = 1e-14;
    let axes_box = [([1.0, 0.0], bx), ([0.0, 1.0], by)];
    for (axis, range) in axes_box {
        let (lo, hi) = project(tri, axis);
        if hi < range[0] - EPS || lo > range[1] + EPS {
            return false;
        }
    }
    let corners = [[bx[0], by[0]], [bx[1], by[0]], [bx[1], by[1]], [bx[0], by[1]]];
    for e in 0..3 {
        let p = tri[e];
        let q = tri[(e + 1) % 3];
        let normal = [q[1] - p[1], p[0] - q[0]];
        let (tlo, thi) = project(tri, normal);
        let (blo, bhi) = project(&corners, normal);
        if thi < blo - EPS || tlo > bhi + EPS {
            return false;
        }
    }
    true
}

fn project(points: &[[f64; 2]], axis: [f64; 2]) -> (f64, f64) {
    points
        .iter()
        .map(|p| p[0] * axis[0] + p[1] * axis[1])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}
