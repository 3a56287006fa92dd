//! Gamma and Beta for positive real arguments.

use crate::error::{invalid, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    a
}

/// `Gamma(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid("gamma needs a finite positive argument"));
    }
    Ok(gamma_pos(x))
}

fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_pos(x + 1.0) / x;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so that large arguments do not overflow early
    let half = libm::pow(t, 0.5 * (z + 0.5));
    libm::sqrt(2.0 * core::f64::consts::PI) * half * libm::exp(-t) * half * lanczos_sum(z)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid("ln_gamma needs a finite positive argument"));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - libm::log(x));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * libm::log(2.0 * core::f64::consts::PI) + (z + 0.5) * libm::log(t) - t
        + libm::log(lanczos_sum(z)))
}

/// `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)` for `a, b > 0`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(invalid("beta needs finite positive arguments"));
    }
    if a == 1.0 {
        return Ok(1.0 / b);
    }
    if b == 1.0 {
        return Ok(1.0 / a);
    }
    if a + b < 140.0 {
        Ok(gamma_pos(a) * gamma_pos(b) / gamma_pos(a + b))
    } else {
        Ok(libm::exp(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?))
    }
}
