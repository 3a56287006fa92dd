//! The benchmark problems: two nonlinearities, four constraint cases and
//! three desired states, each run as a sweep over `alpha`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::str::FromStr;

use crate::certificate::{certify_with, Certificate, Verdict};
use crate::error::{invalid, Error, Result};
use crate::fem::{NormQuadrature, P1Function};
use crate::kkt::{alpha_sweep, DesiredLoad, FieldFn, KktOptions, KktSolution, OcpSpec, StateBound};
use crate::mesh::{Mesh, Region};
use crate::nonlinearity::Nonlinearity;

/// The ten `alpha` values of every reference table, descending.
pub const DEFAULT_ALPHAS: [f64; 10] = [1e3, 1e2, 1e1, 1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// `phi(s) = s^3`
    Cubic,
    /// `phi(s) = s^5`
    Quintic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Unconstrained,
    /// `-5 <= u <= 5`
    ControlConstrained,
    /// `-1 <= y <= 1` at every interior node
    StateConstrained,
    /// Cubic nonlinearity, `y0 = -1` and the tent-shaped lower state bound.
    Neitzel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Desired {
    /// `2 sin(2 pi x1) sin(2 pi x2)`
    A1,
    /// `60 + 160 (x1 (x1 - 1) + x2 (x2 - 1))`
    A2,
    /// `-1`
    NeitzelConst,
}

impl FromStr for Example {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(Example::Cubic),
            "quintic" => Ok(Example::Quintic),
            _ => Err(invalid("example must be cubic or quintic")),
        }
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unconstrained" => Ok(Case::Unconstrained),
            "control" | "control_constrained" => Ok(Case::ControlConstrained),
            "state" | "state_constrained" => Ok(Case::StateConstrained),
            "neitzel" => Ok(Case::Neitzel),
            _ => Err(invalid("case must be unconstrained, control, state or neitzel")),
        }
    }
}

impl FromStr for Desired {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(Desired::A1),
            "a2" => Ok(Desired::A2),
            "neitzel_const" | "neitzel" => Ok(Desired::NeitzelConst),
            _ => Err(invalid("desired state must be a1, a2 or neitzel_const")),
        }
    }
}

pub fn desired_state(tag: Desired) -> FieldFn {
    match tag {
        Desired::A1 => Arc::new(|x: [f64; 2]| 2.0 * libm::sin(2.0 * PI * x[0]) * libm::sin(2.0 * PI * x[1])),
        Desired::A2 => Arc::new(|x: [f64; 2]| 60.0 + 160.0 * (x[0] * (x[0] - 1.0) + x[1] * (x[1] - 1.0))),
        Desired::NeitzelConst => Arc::new(|_| -1.0),
    }
}

/// `-2/3 + min((x1+x2)/2, (1+x1-x2)/2, (1-x1+x2)/2, 1-(x1+x2)/2)`
pub fn neitzel_lower_bound(x: [f64; 2]) -> f64 {
    let m = (0.5 * (x[0] + x[1]))
        .min(0.5 * (1.0 + x[0] - x[1]))
        .min(0.5 * (1.0 - x[0] + x[1]))
        .min(1.0 - 0.5 * (x[0] + x[1]));
    -2.0 / 3.0 + m
}

/// One benchmark run.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub example: Example,
    pub case: Case,
    pub desired: Desired,
    /// Strictly descending.
    pub alphas: Vec<f64>,
    pub n: usize,
    pub exact_clamp: bool,
    pub norm: NormQuadrature,
    /// Defaults to the one-point rule, which reproduces the reference tables.
    pub desired_load: DesiredLoad,
    /// Newton iteration budget per alpha.
    pub max_iter: usize,
    /// Replaces the example's nonlinearity when set.
    pub phi: Option<Nonlinearity>,
}

impl ScenarioSpec {
    /// Checks the combination and fills the forced choices of the Neitzel case.
    pub fn new(example: Example, case: Case, desired: Option<Desired>, alphas: Vec<f64>, n: usize) -> Result<Self> {
        let desired = match (case, desired) {
            (Case::Neitzel, None | Some(Desired::NeitzelConst)) => Desired::NeitzelConst,
            (Case::Neitzel, Some(_)) => return Err(invalid("the neitzel case fixes the desired state to -1")),
            (_, Some(Desired::NeitzelConst)) => {
                return Err(invalid("the constant desired state belongs to the neitzel case"))
            }
            (_, Some(d)) => d,
            (_, None) => return Err(invalid("a desired state (a1 or a2) is required")),
        };
        if case == Case::Neitzel && example != Example::Cubic {
            return Err(invalid("the neitzel case uses the cubic nonlinearity"));
        }
        if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(invalid("alphas must be positive and finite"));
        }
        let mut alphas = alphas;
        alphas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        alphas.dedup();
        if n < 2 {
            return Err(invalid("mesh needs at least 2 subdivisions per side"));
        }
        Ok(ScenarioSpec {
            example,
            case,
            desired,
            alphas,
            n,
            exact_clamp: true,
            norm: NormQuadrature::Exact,
            desired_load: DesiredLoad::Centroid,
            max_iter: KktOptions::default().max_iter,
            phi: None,
        })
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        match (&self.phi, self.example) {
            (Some(p), _) => p.clone(),
            (None, Example::Cubic) => Nonlinearity::cubic(),
            (None, Example::Quintic) => Nonlinearity::quintic(),
        }
    }

    pub fn ocp(&self, alpha: f64) -> OcpSpec {
        let mut spec = OcpSpec::unconstrained(alpha, self.nonlinearity(), desired_state(self.desired));
        match self.case {
            Case::Unconstrained => {}
            Case::ControlConstrained => {
                spec.u_a = -5.0;
                spec.u_b = 5.0;
            }
            Case::StateConstrained => {
                spec.y_a = StateBound::Constant(-1.0);
                spec.y_b = StateBound::Constant(1.0);
                spec.region = Region::AllInterior;
            }
            Case::Neitzel => {
                spec.y_a = StateBound::Function(Arc::new(neitzel_lower_bound));
                spec.region = Region::AllInterior;
            }
        }
        spec
    }

    pub fn options(&self) -> KktOptions {
        KktOptions {
            exact_clamp: self.exact_clamp,
            desired_load: self.desired_load,
            max_iter: self.max_iter,
            ..KktOptions::default()
        }
    }
}

/// A converged row of a scenario table.
#[derive(Debug, Clone)]
pub struct RowData {
    pub pnorm: f64,
    pub eta: f64,
    pub j: f64,
    pub verdict: Verdict,
    pub iterations: usize,
    pub residual: f64,
    pub certificate: Certificate,
    pub solution: KktSolution,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub alpha: f64,
    pub outcome: core::result::Result<RowData, String>,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub mesh: Mesh,
    pub rows: Vec<Row>,
}

impl ScenarioResult {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.outcome.is_err())
    }
}

/// Runs the sweep and certifies every converged row. Solver failures become
/// rows carrying the error message.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<ScenarioResult> {
    let mesh = Mesh::build_uniform(spec.n)?;
    let template = spec.ocp(spec.alphas[0]);
    let sweep = alpha_sweep(&template, &spec.alphas, &mesh, &spec.options())?;
    let mut rows = Vec::with_capacity(sweep.len());
    for (&alpha, res) in spec.alphas.iter().zip(sweep) {
        let ocp = spec.ocp(alpha);
        let outcome = res.and_then(|sol| {
            let cert = certify_with(&sol, &ocp, &mesh, spec.norm)?;
            Ok(RowData {
                pnorm: cert.norm,
                eta: cert.threshold,
                j: sol.objective(&mesh, &ocp),
                verdict: cert.verdict,
                iterations: sol.iterations,
                residual: sol.residual_inf,
                certificate: cert,
                solution: sol,
            })
        });
        rows.push(Row {
            alpha,
            outcome: outcome.map_err(|e| alloc::format!("{e}")),
        });
    }
    Ok(ScenarioResult { mesh, rows })
}

/// Nodal fields of a solution: `y`, `p`, `u` (clamp at the nodes), `mu_a`, `mu_b`.
pub fn nodal_fields(sol: &KktSolution, mesh: &Mesh) -> Vec<(&'static str, P1Function)> {
    let u = sol.control.g.iter().map(|&g| sol.control.value(g)).collect();
    let (mu_a, mu_b) = sol.mu_split(mesh);
    alloc::vec![
        ("y", sol.y.clone()),
        ("p", sol.p.clone()),
        ("u", P1Function { values: u }),
        ("mu_a", P1Function { values: mu_a }),
        ("mu_b", P1Function { values: mu_b }),
    ]
}
