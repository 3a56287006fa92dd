//! The global-optimality test `||p_h||_{L^q} <= eta(alpha, r)` for a
//! computed KKT point.

use core::fmt;

use crate::constants::{eta_for, q_of_r};
use crate::error::{Error, Result};
use crate::fem::{norm_with, NormQuadrature};
use crate::kkt::{KktOptions, KktSolution, OcpSpec};
use crate::mesh::Mesh;

/// Width of the band around the threshold that counts as equality.
pub const EQUALITY_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Norm strictly below the threshold: the unique global minimum.
    UniqueGlobal,
    /// Norm equal to the threshold within [`EQUALITY_BAND`]: a global minimum.
    Global,
    /// Norm above the threshold: the test says nothing.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::UniqueGlobal => "unique_global",
            Verdict::Global => "global",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn is_certified(self) -> bool {
        self != Verdict::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares a norm against a threshold.
pub fn verdict_of(norm: f64, threshold: f64) -> Verdict {
    let margin = threshold - norm;
    if margin.abs() <= EQUALITY_BAND {
        Verdict::Global
    } else if margin > 0.0 {
        Verdict::UniqueGlobal
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub norm: f64,
    pub threshold: f64,
    pub q: f64,
    /// `threshold - norm`
    pub margin: f64,
    /// `norm / threshold`, zero for an unbounded threshold.
    pub kappa: f64,
    pub verdict: Verdict,
}

/// Builds the certificate from an already computed norm.
pub fn certificate_from_norm(norm: f64, alpha: f64, r: f64, m: f64) -> Result<Certificate> {
    let q = q_of_r(r)?;
    let threshold = eta_for(alpha, r, m)?;
    let kappa = if threshold.unbounded { 0.0 } else { norm / threshold.value };
    Ok(Certificate {
        norm,
        threshold: threshold.value,
        q,
        margin: threshold.value - norm,
        kappa,
        verdict: verdict_of(norm, threshold.value),
    })
}

/// Certifies a converged solution with the exact `L^q` norm.
pub fn certify(sol: &KktSolution, spec: &OcpSpec, mesh: &Mesh) -> Result<Certificate> {
    certify_with(sol, spec, mesh, NormQuadrature::Exact)
}

pub fn certify_with(sol: &KktSolution, spec: &OcpSpec, mesh: &Mesh, how: NormQuadrature) -> Result<Certificate> {
    if !(sol.residual_inf <= KktOptions::default().tol) {
        return Err(Error::InvalidInput(alloc::format!(
            "solution is not converged (residual {:e})",
            sol.residual_inf
        )));
    }
    let r = spec.phi.r();
    let norm = norm_with(mesh, &sol.p, q_of_r(r)?, how)?;
    certificate_from_norm(norm, spec.alpha, r, spec.phi.M())
}

/// Largest `kappa` over a family of certificates if every one is below 1.
pub fn uniform_kappa(sweep: &[Certificate]) -> Option<f64> {
    if sweep.is_empty() || sweep.iter().any(|c| !(c.kappa < 1.0)) {
        return None;
    }
    Some(sweep.iter().fold(0.0, |m, c| m.max(c.kappa)))
}
