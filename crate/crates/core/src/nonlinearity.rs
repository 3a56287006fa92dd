//! The monotone nonlinearity `phi` of the state equation.
//!
//! Besides `phi` and its first two derivatives, a [`Nonlinearity`] carries the
//! structural pair `(r, M)` with `|phi''(s)| <= M phi'(s)^(1/r)` for all `s`.
//! That pair fixes the norm exponent and the certificate threshold.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;

use crate::error::{invalid, Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Cubic,
    Quintic,
    /// `|s|^(k-2) s`
    Power(f64),
    Custom {
        phi: ScalarFn,
        dphi: ScalarFn,
        ddphi: ScalarFn,
    },
}

#[derive(Clone)]
pub struct Nonlinearity {
    kind: Kind,
    r: f64,
    m: f64,
    label: String,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("label", &self.label)
            .field("r", &self.r)
            .field("M", &self.m)
            .finish()
    }
}

impl Nonlinearity {
    /// `phi(s) = s^3` with `r = 2`, `M = 2 sqrt(3)`.
    pub fn cubic() -> Self {
        Nonlinearity {
            kind: Kind::Cubic,
            r: 2.0,
            m: 2.0 * libm::sqrt(3.0),
            label: "cubic".to_string(),
        }
    }

    /// `phi(s) = s^5` with `r = 4/3`, `M = 20 / 5^(3/4)`.
    pub fn quintic() -> Self {
        Nonlinearity {
            kind: Kind::Quintic,
            r: 4.0 / 3.0,
            m: 20.0 / libm::pow(5.0, 0.75),
            label: "quintic".to_string(),
        }
    }

    /// `phi(s) = |s|^(k-2) s` for `k > 3`, with `r = (k-2)/(k-3)` and
    /// `M = (k-2)(k-1)^(1/(k-2))`.
    pub fn power(k: f64) -> Result<Self> {
        if !(k > 3.0) || !k.is_finite() {
            return Err(invalid("power nonlinearity needs exponent k > 3"));
        }
        Ok(Nonlinearity {
            kind: Kind::Power(k),
            r: (k - 2.0) / (k - 3.0),
            m: (k - 2.0) * libm::pow(k - 1.0, 1.0 / (k - 2.0)),
            label: alloc::format!("power:{k}"),
        })
    }

    /// User-supplied nonlinearity. `r > 1` and `M >= 0` are checked; the
    /// structural inequality itself is only checked by [`Self::check_assumption`].
    pub fn custom(
        label: &str,
        phi: ScalarFn,
        dphi: ScalarFn,
        ddphi: ScalarFn,
        r: f64,
        m: f64,
    ) -> Result<Self> {
        if !(r > 1.0) || !(m >= 0.0) {
            return Err(invalid("custom nonlinearity needs r > 1 and M >= 0"));
        }
        Ok(Nonlinearity {
            kind: Kind::Custom { phi, dphi, ddphi },
            r,
            m,
            label: label.to_string(),
        })
    }

    /// Parses the CLI spelling `cubic`, `quintic` or `power:<k>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(Self::cubic()),
            "quintic" => Ok(Self::quintic()),
            _ => match s.strip_prefix("power:") {
                Some(k) => Self::power(
                    k.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid("power:<k> needs a numeric exponent"))?,
                ),
                None => Err(invalid("expected cubic, quintic or power:<k>")),
            },
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    #[allow(non_snake_case)]
    pub fn M(&self) -> f64 {
        self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Polynomial degree of `phi` when it is a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Cubic => Some(3),
            Kind::Quintic => Some(5),
            Kind::Power(k) if *k == 4.0 => Some(3),
            _ => None,
        }
    }

    #[inline]
    pub fn phi(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Cubic => s * s * s,
            Kind::Quintic => {
                let s2 = s * s;
                s2 * s2 * s
            }
            Kind::Power(k) => libm::pow(s.abs(), k - 2.0) * s,
            Kind::Custom { phi, .. } => phi(s),
        }
    }

    #[inline]
    pub fn dphi(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Cubic => 3.0 * s * s,
            Kind::Quintic => {
                let s2 = s * s;
                5.0 * s2 * s2
            }
            Kind::Power(k) => (k - 1.0) * libm::pow(s.abs(), k - 2.0),
            Kind::Custom { dphi, .. } => dphi(s),
        }
    }

    #[inline]
    pub fn ddphi(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Cubic => 6.0 * s,
            Kind::Quintic => 20.0 * s * s * s,
            Kind::Power(k) => (k - 1.0) * (k - 2.0) * libm::pow(s.abs(), k - 3.0) * sign(s),
            Kind::Custom { ddphi, .. } => ddphi(s),
        }
    }

    /// Checks monotonicity and `|phi''| <= M phi'^(1/r)` on `samples` equispaced
    /// points of `[-bound, bound]`.
    pub fn check_assumption(&self, bound: f64, samples: usize) -> Result<()> {
        let samples = samples.max(2);
        for k in 0..samples {
            let s = -bound + 2.0 * bound * k as f64 / (samples - 1) as f64;
            let d1 = self.dphi(s);
            let lhs = self.ddphi(s).abs();
            let rhs = self.m * libm::pow(d1.max(0.0), 1.0 / self.r);
            if d1 < 0.0 || lhs > rhs + 1e-9 * (1.0 + rhs) {
                return Err(Error::AssumptionViolated { s, lhs, rhs });
            }
        }
        Ok(())
    }
}

fn sign(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else if s < 0.0 {
        -1.0
    } else {
        0.0
    }
}
