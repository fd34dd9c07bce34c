//! Thin wrappers over `libm` so numerics are identical with and without `std`.

pub(crate) use libm::{cos, exp, log, pow, sin, sqrt, tan};

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Unit complex number `exp(i phi)`.
#[inline]
pub(crate) fn cis(phi: f64) -> crate::Complex {
    crate::Complex::new(cos(phi), sin(phi))
}

/// Phase factor `z / |z|`, with `1` for `z = 0`.
#[inline]
pub(crate) fn unit_phase(z: crate::Complex) -> crate::Complex {
    let r = hypot(z.re, z.im);
    if r == 0.0 {
        crate::Complex::new(1.0, 0.0)
    } else {
        z / r
    }
}

pub(crate) const FRAC_PI_2: f64 = core::f64::consts::FRAC_PI_2;
