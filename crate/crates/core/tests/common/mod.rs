#![allow(dead_code, clippy::too_many_arguments, clippy::neg_cmp_op_on_partial_ord)]

pub mod reference;

use optcert_core::certificate::{certify, uniform_kappa};
use optcert_core::constants::{gn_constant, l_r};
use optcert_core::experiments::{desired_state, Desired};
use optcert_core::fem::{
    assemble_mass, assemble_semilinear_jacobian, assemble_semilinear_residual, lq_norm, solve_state, DofMap, Load,
    P1Function, ProjectedControl,
};
use optcert_core::kkt::{kkt_residual_with, objective, solve_kkt, KktOptions, KktSolution, OcpSpec};
use optcert_core::mesh::Mesh;
use optcert_core::nonlinearity::Nonlinearity;
use optcert_core::quadrature::QuadratureRule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn builtins() -> Vec<Nonlinearity> {
    vec![Nonlinearity::cubic(), Nonlinearity::quintic()]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn young_lemma(samples: usize) -> Check {
    let mut rng = rng(1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let a: f64 = rng.gen_range(0.0..=10.0);
        let b: f64 = rng.gen_range(0.0..=10.0);
        let l: f64 = 3.0 - rng.gen_range(0.0..3.0);
        let m: f64 = 3.0 - rng.gen_range(0.0..3.0);
        let lhs = a.powf(l) * b.powf(m);
        let rhs = l.powf(l) * m.powf(m) / (l + m).powf(l + m) * (a + b).powf(l + m);
        let gap = lhs - rhs;
        // relative slack for the large values; absolute for the small ones
        if gap > 1e-12 + 1e-14 * rhs {
            return Err(format!("a={a} b={b} lambda={l} mu={m}: {lhs} > {rhs}"));
        }
        worst = worst.max(gap);
    }
    Ok(format!("{samples} samples, largest lhs - rhs = {worst:.3e}"))
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson on `[0, 1]`.
pub fn adaptive(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(0.0), f(0.5), f(1.0));
    let whole = (fa + 4.0 * fm + fb) / 6.0;
    simpson(&f, 0.0, 1.0, fa, fm, fb, whole, tol, 40)
}

pub fn lemma_one(samples: usize) -> Check {
    let mut rng = rng(2);
    let mut worst = f64::NEG_INFINITY;
    for phi in builtins() {
        let lr = l_r(phi.r(), phi.M()).map_err(|e| e.to_string())?;
        for _ in 0..samples {
            let a: f64 = rng.gen_range(-5.0..=5.0);
            let b: f64 = rng.gen_range(-5.0..=5.0);
            let mean = adaptive(|t| phi.dphi(t * a + (1.0 - t) * b), 1e-12);
            let lhs = (mean - phi.dphi(b)).abs();
            let rhs = (a - b).abs() * lr * mean.max(0.0).powf(1.0 / phi.r());
            if lhs > rhs + 1e-9 {
                return Err(format!("{}: a={a} b={b}: {lhs} > {rhs}", phi.label()));
            }
            worst = worst.max(lhs - rhs);
        }
    }
    Ok(format!("{samples} samples per nonlinearity, largest lhs - rhs = {worst:.3e}"))
}

pub fn jacobian_fd() -> Check {
    let mesh = Mesh::build_uniform(8).unwrap();
    let dofs = DofMap::new(&mesh);
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for phi in builtins() {
        for _ in 0..5 {
            let mut random = |s: f64| {
                let v: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-s..s)).collect();
                P1Function { values: v.into_iter().enumerate().map(|(k, v)| if mesh.is_boundary(k) { 0.0 } else { v }).collect() }
            };
            let (y, d) = (random(2.0), random(1.0));
            let eps = 1e-7;
            let shifted = |s: f64| P1Function {
                values: y.values.iter().zip(&d.values).map(|(a, b)| a + s * b).collect(),
            };
            let rp = assemble_semilinear_residual(&mesh, &phi, &shifted(eps), Load::Zero);
            let rm = assemble_semilinear_residual(&mesh, &phi, &shifted(-eps), Load::Zero);
            let jd = assemble_semilinear_jacobian(&mesh, &phi, &y).mul_vec(&dofs.restrict(&d.values));
            for ((p, m), j) in rp.iter().zip(&rm).zip(&jd) {
                worst = worst.max(((p - m) / (2.0 * eps) - j).abs() / (1.0 + j.abs()));
            }
        }
    }
    if worst <= 1e-5 {
        Ok(format!("largest scaled deviation {worst:.3e}"))
    } else {
        Err(format!("largest scaled deviation {worst:.3e} > 1e-5"))
    }
}

pub fn reference_triangle() -> Check {
    // int over the unit right triangle of lambda_1^4 = 2 |T| 4!/6! = 1/30
    let exact = 1.0 / 30.0;
    let rule = QuadratureRule::degree8();
    let quad: f64 = rule.points.iter().zip(&rule.weights).map(|(b, w)| 0.5 * w * b[0].powi(4)).sum();
    let mut rng = rng(4);
    let n = 1_000_000;
    let mut acc = 0.0;
    let mut hits = 0usize;
    while hits < n {
        let (x, y): (f64, f64) = (rng.gen(), rng.gen());
        if x + y <= 1.0 {
            acc += (1.0 - x - y).powi(4);
            hits += 1;
        }
    }
    let mc = 0.5 * acc / n as f64;
    // hat function of the centre node of the n = 2 mesh: six triangles of area 1/8
    let mesh = Mesh::build_uniform(2).unwrap();
    let hat = P1Function::interpolate(&mesh, |x| if x == [0.5, 0.5] { 1.0 } else { 0.0 });
    let norm4 = lq_norm(&mesh, &hat, 4.0).unwrap().powi(4);
    let errs = [(quad - exact).abs(), (norm4 - 6.0 / 8.0 / 15.0).abs(), (mc - exact).abs()];
    if errs[0] <= 1e-14 && errs[1] <= 1e-14 && errs[2] <= 1e-3 {
        Ok(format!("rule {:.1e}, lq_norm {:.1e}, Monte Carlo {:.1e}", errs[0], errs[1], errs[2]))
    } else {
        Err(format!("errors {errs:?}"))
    }
}

/// Residual, complementarity sign and feasibility of a converged point.
pub fn kkt_invariants(mesh: &Mesh, spec: &OcpSpec, opts: &KktOptions, sol: &KktSolution) -> Check {
    let tol = opts.tol;
    let res = kkt_residual_with(mesh, spec, opts, &sol.y, &sol.p, &sol.mu).map_err(|e| e.to_string())?;
    let state = res.state.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let adjoint = res.adjoint.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if state > tol || adjoint > tol {
        return Err(format!("alpha={:e}: state {state:e}, adjoint {adjoint:e}", spec.alpha));
    }
    for (&k, &mu) in sol.constraint_nodes.iter().zip(&sol.mu) {
        let x = mesh.nodes()[k];
        let (ya, yb, y) = (spec.y_a.eval(x), spec.y_b.eval(x), sol.y.values[k]);
        if y < ya - tol || y > yb + tol {
            return Err(format!("alpha={:e}: node {k} infeasible ({ya} <= {y} <= {yb})", spec.alpha));
        }
        if (mu > tol && (y - yb).abs() > tol) || (mu < -tol && (y - ya).abs() > tol) {
            return Err(format!("alpha={:e}: node {k} has mu={mu:e} off its bound (y={y})", spec.alpha));
        }
        if (mu > tol && !sol.active_upper.contains(&k)) || (mu < -tol && !sol.active_lower.contains(&k)) {
            return Err(format!("alpha={:e}: node {k} has mu={mu:e} outside the matching active set", spec.alpha));
        }
    }
    Ok(format!("residual {:.2e}", res.inf_norm()))
}

/// `J` at `clamp(g)` for a P1 function `g`, or `None` if the state leaves the bounds.
pub fn objective_at(mesh: &Mesh, spec: &OcpSpec, g: Vec<f64>) -> Option<f64> {
    let ctrl = ProjectedControl {
        g,
        lower: spec.u_a,
        upper: spec.u_b,
        exact: true,
    };
    let y = solve_state(mesh, &spec.phi, Load::Projected(&ctrl), 1e-13, 50).ok()?;
    for &k in &mesh.interior_nodes() {
        let x = mesh.nodes()[k];
        if y.values[k] < spec.y_a.eval(x) - 1e-12 || y.values[k] > spec.y_b.eval(x) + 1e-12 {
            return None;
        }
    }
    Some(objective(mesh, spec, &y, &ctrl))
}

/// Samples random feasible controls around a strictly certified solution.
pub fn certified_spot_check(mesh: &Mesh, spec: &OcpSpec, samples: usize, seed: u64) -> Check {
    let sol = solve_kkt(spec, mesh, &KktOptions::default()).map_err(|e| e.to_string())?;
    let cert = certify(&sol, spec, mesh).map_err(|e| e.to_string())?;
    if !(cert.margin > 0.0) {
        return Err(format!("not strictly certified (kappa {})", cert.kappa));
    }
    let j0 = sol.objective(mesh, spec);
    let g0 = sol.control.g.clone();
    let mut rng = rng(seed);
    let mut tried = 0;
    let mut least = f64::INFINITY;
    while tried < samples {
        let scale = 10f64.powf(rng.gen_range(-4.0..1.0)) * (1.0 + g0.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        let g: Vec<f64> = g0.iter().map(|v| v + scale * rng.gen_range(-1.0..1.0)).collect();
        let Some(j) = objective_at(mesh, spec, g) else { continue };
        tried += 1;
        if j < j0 - 1e-12 {
            return Err(format!("J(u~) = {j:.15e} < J(u_h) = {j0:.15e}"));
        }
        least = least.min(j - j0);
    }
    Ok(format!("{samples} feasible controls, smallest J(u~) - J(u_h) = {least:.3e}"))
}

/// `||u_n - u_2n||_{L^2}` along the refinement family and the uniform kappa.
pub fn refinement_study(ns: &[usize], alpha: f64) -> Result<(Vec<f64>, Option<f64>), String> {
    let mut sols = Vec::new();
    let mut certs = Vec::new();
    for &n in ns {
        let mesh = Mesh::build_uniform(n).unwrap();
        let spec = OcpSpec::unconstrained(alpha, Nonlinearity::cubic(), desired_state(Desired::A1));
        let sol = solve_kkt(&spec, &mesh, &KktOptions::default()).map_err(|e| e.to_string())?;
        certs.push(certify(&sol, &spec, &mesh).map_err(|e| e.to_string())?);
        sols.push((mesh, sol));
    }
    let mut diffs = Vec::new();
    for w in sols.windows(2) {
        let (coarse, fine) = (&w[0], &w[1]);
        // the coarse control interpolated onto the nested fine mesh is exact for P1
        let g: Vec<f64> = fine.0.nodes().iter().map(|&x| coarse.1.control.eval(&coarse.0, x)).collect();
        let d: Vec<f64> = fine.1.control.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let md = assemble_mass(&fine.0).mul_vec(&d);
        diffs.push(d.iter().zip(&md).map(|(a, b)| a * b).sum::<f64>().sqrt());
    }
    Ok((diffs, uniform_kappa(&certs)))
}

pub fn gn_reference() -> (f64, f64) {
    let c4 = gn_constant(4.0).unwrap().c_q;
    let c6 = gn_constant(6.0).unwrap().c_q;
    (1.0 / c4, 1.0 / c6.sqrt())
}

/// Nodal max errors of the state solver against `sin(pi x) sin(pi y)` and
/// the observed orders between consecutive meshes.
pub fn manufactured_orders(phi: &Nonlinearity, ns: &[usize]) -> (Vec<f64>, Vec<f64>) {
    use std::f64::consts::PI;
    let exact = |x: [f64; 2]| (PI * x[0]).sin() * (PI * x[1]).sin();
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let mesh = Mesh::build_uniform(n).unwrap();
            let f = |x: [f64; 2]| 2.0 * PI * PI * exact(x) + phi.phi(exact(x));
            let y = solve_state(&mesh, phi, Load::Analytic(&f), 1e-13, 50).unwrap();
            mesh.nodes().iter().zip(&y.values).fold(0.0f64, |e, (x, v)| e.max((v - exact(*x)).abs()))
        })
        .collect();
    let orders = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    (errs, orders)
}
