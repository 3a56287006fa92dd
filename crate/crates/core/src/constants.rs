//! Analytic constants behind the optimality threshold.
//!
//! Three computable upper bounds on the two-dimensional Gagliardo–Nirenberg
//! constant
//!
//! ```text
//! ||f||_q <= C ||f||_2^(2/q) ||grad f||_2^(1 - 2/q),   q >= 2,
//! ```
//!
//! the exponents `q(r)`, `rho(r)` and the threshold `eta(alpha, r)` that a
//! discrete adjoint norm must stay below for the stationary point to be a
//! global minimizer.

use core::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::special::beta;

/// Default tail tolerance of the infinite product bound.
pub const PRODUCT_TAIL_TOL: f64 = 1e-15;
/// Hard cap on the last product index.
pub const PRODUCT_MAX_INDEX: u32 = 64;

/// Babenko–Beckner constant `k_B(p) = (p/2pi)^(1/p) (p'/2pi)^(-1/p')`, `1 < p <= 2`.
pub fn k_babenko(p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(invalid("k_babenko needs 1 < p <= 2"));
    }
    let pc = p / (p - 1.0);
    Ok(libm::pow(p / (2.0 * PI), 1.0 / p) * libm::pow(pc / (2.0 * PI), -1.0 / pc))
}

/// `C_{2,s}` for `1 <= s < 2`; `C_{2,1} = 2 sqrt(pi)`.
pub fn c22theta(s: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&s) {
        return Err(invalid("c22theta needs 1 <= s < 2"));
    }
    if s == 1.0 {
        return Ok(2.0 * libm::sqrt(PI));
    }
    let b = beta(2.0 / s, 3.0 - 2.0 / s)?;
    Ok(libm::pow(2.0, 1.0 / s)
        * libm::pow((2.0 - s) / (s - 1.0), (s - 1.0) / s)
        * libm::sqrt(2.0 * PI * b))
}

fn theta_of(q: f64) -> f64 {
    1.0 - 2.0 / q
}

/// First bound, `(theta C_{2,2 theta})^(-theta)`, defined for `q >= 4`.
pub fn gn_bound_1(q: f64) -> Result<f64> {
    if !(q >= 4.0) || !q.is_finite() {
        return Err(Error::NotApplicable(alloc::format!(
            "first bound requires q >= 4, got {q}"
        )));
    }
    let theta = theta_of(q);
    Ok(libm::pow(theta * c22theta(2.0 * theta)?, -theta))
}

/// Second bound, built from the Babenko–Beckner constant; `q > 2`.
pub fn gn_bound_2(q: f64) -> Result<f64> {
    if !(q > 2.0) || !q.is_finite() {
        return Err(invalid("second bound requires q > 2"));
    }
    let theta = theta_of(q);
    let prefactor = 1.0
        / libm::sqrt(libm::pow(theta, theta) * libm::pow(1.0 - theta, 1.0 - theta));
    let b = beta(1.0, 2.0 * (1.0 - theta) / (2.0 * theta))?;
    Ok(prefactor
        * libm::pow(2.0 * PI * b, theta / 2.0)
        * k_babenko(4.0 / (2.0 + 2.0 * theta))?)
}

/// Third bound, the infinite product
/// `(1/pi)^((q-2)/(2q)) prod_{j>=2} (2^j/(2^j+q-2))^((2^j+2-q)/(2^j q))`.
///
/// Returns the value and the last index `j` included. Summation runs in log
/// space and stops at the first factor whose log-magnitude is below
/// `tail_tol`, or at [`PRODUCT_MAX_INDEX`]. The tolerance test only applies
/// once `2^j >= 2 (q - 2)`: before that an exponent can vanish exactly
/// (`2^j = q - 2`, e.g. `j = 2` at `q = 6`) while later factors are still large.
pub fn gn_bound_3(q: f64, tail_tol: f64) -> Result<(f64, u32)> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid("third bound requires q >= 2"));
    }
    if !(tail_tol > 0.0) {
        return Err(invalid("tail tolerance must be positive"));
    }
    let settled = |j: u32| libm::ldexp(1.0, j as i32) >= 2.0 * (q - 2.0);
    let (log, last) = product_log(q, |j, term| {
        j >= PRODUCT_MAX_INDEX || (settled(j) && term.abs() < tail_tol)
    });
    Ok((libm::exp(log), last))
}

/// Log of the product bound with exactly the factors `j = 2..=last`.
pub fn gn_bound_3_log_fixed(q: f64, last: u32) -> f64 {
    product_log(q, |j, _| j >= last).0
}

fn product_log(q: f64, mut stop: impl FnMut(u32, f64) -> bool) -> (f64, u32) {
    let mut log = -(q - 2.0) / (2.0 * q) * libm::log(PI);
    let mut j = 2u32;
    loop {
        let pow2 = libm::ldexp(1.0, j as i32);
        let exponent = (pow2 + 2.0 - q) / (pow2 * q);
        // log(2^j / (2^j + q - 2)) without cancellation
        let term = -exponent * libm::log1p((q - 2.0) / pow2);
        log += term;
        if stop(j, term) {
            return (log, j);
        }
        j += 1;
    }
}

/// Which upper bound feeds the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundSelection {
    /// The product bound. It reproduces the reference constants
    /// `C_4^{-1} = 1.543145399297809` and `C_6^{-1/2} = 1.271251384316953`.
    #[default]
    Product,
    /// Smallest of the available bounds.
    Minimum,
}

/// Which bound is smallest at a given exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnBundle {
    pub q: f64,
    pub theta: f64,
    /// Only present for `q >= 4`.
    pub c1: Option<f64>,
    /// Absent at `q = 2`, where the bound degenerates.
    pub c2: Option<f64>,
    pub c3: f64,
    /// The constant used downstream, per `selection`.
    pub c_q: f64,
    pub selection: BoundSelection,
    /// Smallest available bound and which one it is.
    pub minimum: f64,
    pub attained_by: BoundKind,
    pub truncation_terms: u32,
}

/// All bounds at exponent `q`, with `c_q` chosen as [`BoundSelection::Product`].
pub fn gn_constant(q: f64) -> Result<GnBundle> {
    gn_constant_with(q, BoundSelection::default())
}

pub fn gn_constant_with(q: f64, selection: BoundSelection) -> Result<GnBundle> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid("gn_constant needs q >= 2"));
    }
    let c1 = if q >= 4.0 { Some(gn_bound_1(q)?) } else { None };
    let c2 = if q > 2.0 { Some(gn_bound_2(q)?) } else { None };
    let (c3, terms) = gn_bound_3(q, PRODUCT_TAIL_TOL)?;
    let mut minimum = c3;
    let mut attained_by = BoundKind::Third;
    for (value, kind) in [(c1, BoundKind::First), (c2, BoundKind::Second)] {
        if let Some(v) = value {
            if v < minimum {
                minimum = v;
                attained_by = kind;
            }
        }
    }
    let c_q = match selection {
        BoundSelection::Product => c3,
        BoundSelection::Minimum => minimum,
    };
    Ok(GnBundle {
        q,
        theta: theta_of(q),
        c1,
        c2,
        c3,
        c_q,
        selection,
        minimum,
        attained_by,
        truncation_terms: terms,
    })
}

/// Norm exponent `q = (3r - 2)/(r - 1)`.
pub fn q_of_r(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((3.0 * r - 2.0) / (r - 1.0))
}

/// `rho = (r + q)/(r q)`.
pub fn rho_of(r: f64) -> Result<f64> {
    let q = q_of_r(r)?;
    Ok((r + q) / (r * q))
}

/// `d_r = q^(-1/q) r^(-1/r) rho^(-rho)`.
pub fn d_r(r: f64) -> Result<f64> {
    let q = q_of_r(r)?;
    let rho = rho_of(r)?;
    Ok(libm::pow(q, -1.0 / q) * libm::pow(r, -1.0 / r) * libm::pow(rho, -rho))
}

/// `e_r = (1 - rho/2)^(1 - rho/2) (rho/2)^(rho/2)`.
pub fn e_r(r: f64) -> Result<f64> {
    let half = rho_of(r)? / 2.0;
    Ok(libm::pow(1.0 - half, 1.0 - half) * libm::pow(half, half))
}

/// `L_r = M ((r-1)/(2r-1))^((r-1)/r)`.
pub fn l_r(r: f64, m: f64) -> Result<f64> {
    check_r(r)?;
    if !(m >= 0.0) {
        return Err(invalid("M must be nonnegative"));
    }
    Ok(m * libm::pow((r - 1.0) / (2.0 * r - 1.0), (r - 1.0) / r))
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(invalid("structural exponent r must satisfy r > 1"));
    }
    Ok(())
}

/// Value of the threshold. `M = 0` leaves it unbounded: `value` is `+inf`
/// and `unbounded` is set, and every adjoint passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub value: f64,
    pub unbounded: bool,
}

/// `eta(alpha, r) = alpha^(rho/2) C_q^((2-2r)/r) M^-1 ((r-1)/(2r-1))^((1-r)/r)
///  q^(1/q) r^(1/r) rho^(rho/2) (2 - rho)^(rho/2 - 1)`.
pub fn eta(alpha: f64, r: f64, m: f64, c_q: f64) -> Result<Threshold> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid("alpha must be positive"));
    }
    check_r(r)?;
    if !(m >= 0.0) {
        return Err(invalid("M must be nonnegative"));
    }
    if !(c_q > 0.0) || !c_q.is_finite() {
        return Err(invalid("C_q must be positive"));
    }
    if m == 0.0 {
        return Ok(Threshold {
            value: f64::INFINITY,
            unbounded: true,
        });
    }
    let q = q_of_r(r)?;
    let rho = rho_of(r)?;
    let value = libm::pow(alpha, rho / 2.0)
        * libm::pow(c_q, (2.0 - 2.0 * r) / r)
        / m
        * libm::pow((r - 1.0) / (2.0 * r - 1.0), (1.0 - r) / r)
        * libm::pow(q, 1.0 / q)
        * libm::pow(r, 1.0 / r)
        * libm::pow(rho, rho / 2.0)
        * libm::pow(2.0 - rho, rho / 2.0 - 1.0);
    Ok(Threshold {
        value,
        unbounded: false,
    })
}

/// Threshold for a nonlinearity's `(r, M)` with the default bound selection.
pub fn eta_for(alpha: f64, r: f64, m: f64) -> Result<Threshold> {
    let bundle = gn_constant(q_of_r(r)?)?;
    eta(alpha, r, m, bundle.c_q)
}
