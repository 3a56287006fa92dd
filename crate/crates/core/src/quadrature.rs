//! Quadrature on triangles in barycentric form.
//!
//! Weights sum to one; multiply by the triangle area when integrating.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    /// 16-point fully symmetric rule, exact for total degree 8.
    pub fn degree8() -> Self {
        const W0: f64 = 0.144_315_607_677_787_17;
        const ORBITS3: [(f64, f64); 3] = [
            (0.095_091_634_267_284_625, 0.459_292_588_292_723_16),
            (0.103_217_370_534_718_25, 0.170_569_307_751_760_21),
            (0.032_458_497_623_198_080, 0.050_547_228_317_030_975),
        ];
        const W6: f64 = 0.027_230_314_174_434_994;
        const A6: f64 = 0.008_394_777_409_957_605_3;
        const B6: f64 = 0.263_112_829_634_638_11;

        let third = 1.0 / 3.0;
        let mut points = alloc::vec![[third, third, third]];
        let mut weights = alloc::vec![W0];
        for (w, a) in ORBITS3 {
            let c = 1.0 - 2.0 * a;
            points.extend_from_slice(&[[a, a, c], [a, c, a], [c, a, a]]);
            weights.extend_from_slice(&[w; 3]);
        }
        let c = 1.0 - A6 - B6;
        for p in [
            [A6, B6, c],
            [A6, c, B6],
            [B6, A6, c],
            [B6, c, A6],
            [c, A6, B6],
            [c, B6, A6],
        ] {
            points.push(p);
            weights.push(W6);
        }
        QuadratureRule {
            points,
            weights,
            degree: 8,
        }
    }

    /// Collapsed (Duffy) Gauss–Legendre product rule exact for total degree
    /// `degree`. Not symmetric, but available for any degree.
    pub fn collapsed(degree: usize) -> Self {
        let m = (degree + 3) / 2;
        let (x, w) = gauss_legendre(m);
        let mut points = Vec::with_capacity(m * m);
        let mut weights = Vec::with_capacity(m * m);
        for i in 0..m {
            // s in (0,1) along the first Cartesian axis
            let s = 0.5 * (x[i] + 1.0);
            let ws = 0.5 * w[i];
            for j in 0..m {
                let t = 0.5 * (x[j] + 1.0);
                let wt = 0.5 * w[j];
                let px = s;
                let py = t * (1.0 - s);
                points.push([1.0 - px - py, px, py]);
                // reference triangle area is 1/2, weights are normalized to 1
                weights.push(2.0 * ws * wt * (1.0 - s));
            }
        }
        QuadratureRule {
            points,
            weights,
            degree,
        }
    }

    /// Smallest rule this module offers with at least the requested exactness.
    /// One point, exact for degree 1.
    pub fn centroid() -> Self {
        QuadratureRule {
            points: alloc::vec![[1.0 / 3.0; 3]],
            weights: alloc::vec![1.0],
            degree: 1,
        }
    }

    pub fn for_degree(degree: usize) -> Self {
        if degree <= 8 {
            Self::degree8()
        } else {
            Self::collapsed(degree)
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integral over the triangle with vertices `v` of `f(x, barycentric)`.
    pub fn integrate(
        &self,
        v: &[[f64; 2]; 3],
        mut f: impl FnMut([f64; 2], [f64; 3]) -> f64,
    ) -> f64 {
        let area = 0.5
            * libm::fabs((v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
                - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]));
        let mut sum = 0.0;
        for (b, w) in self.points.iter().zip(&self.weights) {
            let x = [
                b[0] * v[0][0] + b[1] * v[1][0] + b[2] * v[2][0],
                b[0] * v[0][1] + b[1] * v[1][1] + b[2] * v[2][1],
            ];
            sum += w * f(x, *b);
        }
        area * sum
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` via Newton on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; m];
    let mut w = alloc::vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
