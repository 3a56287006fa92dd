//! Expanding command line selections into scenarios.

use anyhow::{anyhow, bail, Result};
use optcert_core::experiments::{Case, Desired, Example, ScenarioSpec};

/// Comma-separated alpha list, e.g. `1e-6,1e-3,1`.
pub fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    let alphas = s
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| anyhow!("bad alpha value {a:?}")))
        .collect::<Result<Vec<_>>>()?;
    if alphas.is_empty() {
        bail!("no alpha values given");
    }
    Ok(alphas)
}

/// Short name such as `cubic_control_a1`, used in file names.
pub fn scenario_tag(s: &ScenarioSpec) -> String {
    let example = match s.example {
        Example::Cubic => "cubic",
        Example::Quintic => "quintic",
    };
    let case = match s.case {
        Case::Unconstrained => "unconstrained",
        Case::ControlConstrained => "control",
        Case::StateConstrained => "state",
        Case::Neitzel => "neitzel",
    };
    match s.desired {
        Desired::A1 => format!("{example}_{case}_a1"),
        Desired::A2 => format!("{example}_{case}_a2"),
        Desired::NeitzelConst => format!("{example}_{case}"),
    }
}

/// The alpha values whose fields are shown in the reference figures.
pub fn featured_alphas(s: &ScenarioSpec) -> Vec<f64> {
    match (s.case, s.example) {
        (Case::Neitzel, _) => vec![1e-3],
        (_, Example::Quintic) => vec![1e-5, 1.0],
        _ => vec![1e-1],
    }
}

/// The cartesian product of the requested examples, cases and desired states.
#[derive(Debug, Clone)]
pub struct Selection {
    pub examples: Vec<Example>,
    pub cases: Vec<Case>,
    pub desired: Vec<Desired>,
}

impl Selection {
    /// Neitzel runs ignore the desired-state list and only pair with the
    /// cubic example; other cases require a desired state.
    pub fn expand(&self, alphas: &[f64], n: usize) -> Result<Vec<ScenarioSpec>> {
        let mut out = Vec::new();
        for &example in &self.examples {
            for &case in &self.cases {
                if case == Case::Neitzel {
                    if example != Example::Cubic {
                        continue;
                    }
                    out.push(ScenarioSpec::new(example, case, None, alphas.to_vec(), n)?);
                    continue;
                }
                if self.desired.is_empty() {
                    bail!("--desired is required for the {case:?} case");
                }
                for &d in &self.desired {
                    out.push(ScenarioSpec::new(example, case, Some(d), alphas.to_vec(), n)?);
                }
            }
        }
        if out.is_empty() {
            bail!("the selection contains no valid scenario (the neitzel case needs the cubic example)");
        }
        Ok(out)
    }
}
