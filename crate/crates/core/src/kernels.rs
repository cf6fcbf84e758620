//! Closed forms of the Hermite and Laguerre heat kernels, their analytic
//! s-derivatives, the mixed derivative, the odd-reflected difference kernel,
//! and the pointwise bound envelopes used by the estimate-verification layer.
//!
//! Every kernel is assembled through a merged-exponent decomposition: the
//! Gaussian and Bessel exponents combine into
//! `-[(x - e^{-s}y)^2 + (y - e^{-s}x)^2] / (2(1 - e^{-2s}))`,
//! which is never positive, so no input can overflow the exponential.

use crate::error::{contract, domain, Result};
use crate::real::Real;
use crate::specfun::bessel::bessel_i_scaled_unchecked;

/// Stabilized exponent decomposition of a heat kernel value:
/// `value = exp(quadratic_part + prefactor_log)`.
#[derive(Debug, Clone, Copy)]
pub struct StableExponent<R> {
    /// `-[(x - e^{-s}y)^2 + (y - e^{-s}x)^2] / (2(1 - e^{-2s}))`
    pub quadratic_part: R,
    pub prefactor_log: R,
}

impl<R: Real> StableExponent<R> {
    /// Decomposition of the Hermite heat kernel `W_s(x, y)`.
    pub fn hermite(x: R, y: R, s: R) -> Result<Self> {
        ensure_time(s)?;
        let two = R::of(2.0);
        let d = R::one_minus_exp_neg(two * s);
        Ok(Self {
            quadratic_part: gaussian_quadratic(x, y, s),
            prefactor_log: -(R::PI().ln() + s + d.ln()) / two,
        })
    }

    /// Decomposition of the Laguerre heat kernel `W_s^alpha(x, y)`, with the
    /// Bessel factor folded into the log prefactor in scaled form.
    pub fn laguerre(x: R, y: R, s: R, alpha: R) -> Result<Self> {
        ensure_time(s)?;
        ensure_halfline(x)?;
        ensure_halfline(y)?;
        let two = R::of(2.0);
        let em = (-s).exp();
        let d = R::one_minus_exp_neg(two * s);
        let w = two * x * y * em / d;
        let scaled = bessel_i_scaled_unchecked(alpha, w);
        Ok(Self {
            quadratic_part: gaussian_quadratic(x, y, s),
            prefactor_log: ((two * em / d).sqrt() * w.sqrt() * scaled).ln(),
        })
    }

    pub fn value(&self) -> R {
        (self.quadratic_part + self.prefactor_log).exp()
    }
}

/// The merged Gaussian exponent
/// `-[(x - e^{-s}y)^2 + (y - e^{-s}x)^2] / (2(1 - e^{-2s}))`.
#[inline]
pub(crate) fn gaussian_quadratic<R: Real>(x: R, y: R, s: R) -> R {
    let two = R::of(2.0);
    let em = (-s).exp();
    let d = R::one_minus_exp_neg(two * s);
    let u = x - em * y;
    let v = y - em * x;
    -(u * u + v * v) / (two * d)
}

/// `y z e^{-s} / (1 - e^{-2s})`: the quantity whose size against 1 selects
/// the small- or large-argument Bessel regime (half the Bessel argument).
#[inline]
pub fn bessel_region_ratio<R: Real>(y: R, z: R, s: R) -> R {
    y * z * (-s).exp() / R::one_minus_exp_neg(R::of(2.0) * s)
}

/// Hermite heat kernel `W_t(x, y)`.
pub fn hermite_heat_kernel<R: Real>(x: R, y: R, t: R) -> Result<R> {
    Ok(StableExponent::hermite(x, y, t)?.value())
}

#[inline]
pub(crate) fn hermite_kernel_unchecked<R: Real>(x: R, y: R, t: R) -> R {
    let two = R::of(2.0);
    let d = R::one_minus_exp_neg(two * t);
    let pref = ((-t).exp() / d).sqrt() / R::PI().sqrt();
    pref * gaussian_quadratic(x, y, t).exp()
}

/// `d/ds W_s(x, y)`, by the explicit bracket formula.
pub fn hermite_heat_kernel_ds<R: Real>(x: R, y: R, s: R) -> Result<R> {
    ensure_time(s)?;
    Ok(hermite_ds_unchecked(x, y, s))
}

#[inline]
pub(crate) fn hermite_ds_unchecked<R: Real>(x: R, y: R, s: R) -> R {
    let two = R::of(2.0);
    let em = (-s).exp();
    let em2 = em * em;
    let d = R::one_minus_exp_neg(two * s);
    let u = x - em * y;
    let v = y - em * x;
    let q = u * u + v * v;
    let bracket = R::one() + em2 + two * em * (y * u + x * v) - two * em2 * q / d;
    let pref = (-s / two).exp() / (two * R::PI().sqrt() * d * d.sqrt());
    -pref * (-q / (two * d)).exp() * bracket
}

/// Mixed derivative `d^2/(dy ds) W_s(y, z)`, the kernel behind the gradient
/// cone estimate.
pub fn hermite_heat_kernel_dyds<R: Real>(y: R, z: R, s: R) -> Result<R> {
    ensure_time(s)?;
    Ok(hermite_dyds_unchecked(y, z, s))
}

#[inline]
pub(crate) fn hermite_dyds_unchecked<R: Real>(y: R, z: R, s: R) -> R {
    let two = R::of(2.0);
    let em = (-s).exp();
    let em2 = em * em;
    let d = R::one_minus_exp_neg(two * s);
    let u = y - em * z;
    let v = z - em * y;
    let q = u * u + v * v;
    let first = -((u - v * em) / d) * hermite_ds_unchecked(y, z, s);
    let pref = two / R::PI().sqrt() * (-q / (two * d)).exp() * (-s / two).exp() / (d * d.sqrt());
    first - pref * (em * v - em2 * (u - em * v) / d)
}

/// Laguerre heat kernel `W_t^alpha(x, y)` for `x, y, t > 0`.
pub fn laguerre_heat_kernel<R: Real>(x: R, y: R, t: R, alpha: R) -> Result<R> {
    ensure_time(t)?;
    ensure_halfline(x)?;
    ensure_halfline(y)?;
    Ok(laguerre_kernel_unchecked(x, y, t, alpha))
}

#[inline]
pub(crate) fn laguerre_kernel_unchecked<R: Real>(x: R, y: R, t: R, alpha: R) -> R {
    let two = R::of(2.0);
    let em = (-t).exp();
    let d = R::one_minus_exp_neg(two * t);
    let w = two * x * y * em / d;
    (two * em / d).sqrt()
        * w.sqrt()
        * bessel_i_scaled_unchecked(alpha, w)
        * gaussian_quadratic(x, y, t).exp()
}

/// `d/ds W_s^alpha(y, z)` in scaled-Bessel form.  The `(yz)^{alpha+1/2}` and
/// Bessel-argument powers cancel analytically, leaving only order-`alpha`
/// scaled Bessel values and the merged Gaussian exponent.
pub fn laguerre_heat_kernel_ds<R: Real>(y: R, z: R, s: R, alpha: R) -> Result<R> {
    ensure_time(s)?;
    ensure_halfline(y)?;
    ensure_halfline(z)?;
    Ok(laguerre_ds_unchecked(y, z, s, alpha))
}

#[inline]
pub(crate) fn laguerre_ds_unchecked<R: Real>(y: R, z: R, s: R, alpha: R) -> R {
    let one = R::one();
    let two = R::of(2.0);
    let em = (-s).exp();
    let em2 = em * em;
    let d = R::one_minus_exp_neg(two * s);
    let r = em / d;
    let w = two * y * z * r;
    let i_a = bessel_i_scaled_unchecked(alpha, w);
    let i_a1 = bessel_i_scaled_unchecked(alpha + one, w);
    let c = (one + em2) / d;
    let yz = y * z;
    let sqrt_yz = yz.sqrt();
    let term1 = two * sqrt_yz * r * (two * (y * y + z * z) * r * r - (alpha + one) * c) * i_a;
    let term2 = -R::of(4.0) * yz * sqrt_yz * r * r * c * i_a1;
    gaussian_quadratic(y, z, s).exp() * (term1 + term2)
}

/// `d/ds [W_s(y, z) - W_s(y, -z)]`: the derivative of the kernel that
/// represents the heat semigroup acting on odd extensions.
pub fn odd_reflected_kernel_ds<R: Real>(y: R, z: R, s: R) -> Result<R> {
    ensure_time(s)?;
    ensure_halfline(z)?;
    Ok(odd_reflected_ds_unchecked(y, z, s))
}

#[inline]
pub(crate) fn odd_reflected_ds_unchecked<R: Real>(y: R, z: R, s: R) -> R {
    hermite_ds_unchecked(y, z, s) - hermite_ds_unchecked(y, -z, s)
}

/// Kernel value and s-derivative at one point.
#[derive(Debug, Clone, Copy)]
pub struct KernelEval<R> {
    pub x: R,
    pub y: R,
    pub s: R,
    pub value: R,
    pub ds_value: R,
}

impl<R: Real> KernelEval<R> {
    pub fn hermite(x: R, y: R, s: R) -> Result<Self> {
        Ok(Self {
            x,
            y,
            s,
            value: hermite_heat_kernel(x, y, s)?,
            ds_value: hermite_heat_kernel_ds(x, y, s)?,
        })
    }

    pub fn laguerre(x: R, y: R, s: R, alpha: R) -> Result<Self> {
        Ok(Self {
            x,
            y,
            s,
            value: laguerre_heat_kernel(x, y, s, alpha)?,
            ds_value: laguerre_heat_kernel_ds(x, y, s, alpha)?,
        })
    }
}

/// Identifies one of the closed-form pointwise bound envelopes.  Each maps to
/// the right-hand side of its inequality without the multiplicative constant;
/// constants are fitted downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeId {
    /// Bound for `|d/ds W_s(x, y)|`.
    HermiteDs,
    /// Bound for the mixed derivative `|d^2/(dy ds) W_s(y, z)|`.
    HermiteMixed,
    /// Bound for `|d/ds W_s^alpha|` in the small Bessel-argument region.
    LaguerreSmall,
    /// Bound for `|d/ds W_s^alpha|` in the large Bessel-argument region.
    LaguerreLarge,
    /// Bound for `|d/ds (W_s^alpha - W_s)|` in the large-argument region.
    Difference,
}

/// Evaluate the envelope at `(a, b, s)` (first slot is `x` or `y` depending
/// on the inequality; `alpha` only enters the small-argument Laguerre bound).
pub fn envelope<R: Real>(tag: EnvelopeId, a: R, b: R, s: R, alpha: Option<R>) -> Result<R> {
    ensure_time(s)?;
    let two = R::of(2.0);
    let d = R::one_minus_exp_neg(two * s);
    match tag {
        EnvelopeId::HermiteDs => {
            let q = -gaussian_quadratic(a, b, s) * two * d; // (x-e^{-s}y)^2 + ...
            Ok((-q / (R::of(8.0) * d)).exp() * (-s / two).exp() / (d * d.sqrt()))
        }
        EnvelopeId::HermiteMixed => {
            let q = -gaussian_quadratic(a, b, s) * two * d;
            Ok((-q / (R::of(16.0) * d)).exp() * (-s / two).exp() / (d * d))
        }
        EnvelopeId::LaguerreSmall => {
            let alpha = alpha.ok_or_else(|| contract("LaguerreSmall envelope needs alpha"))?;
            ensure_halfline(a)?;
            ensure_halfline(b)?;
            ensure_region(a, b, s, true)?;
            let yz = a * b;
            Ok(yz.powf(alpha + R::of(0.5))
                * (-(a * a + b * b) / (R::of(8.0) * s)).exp()
                * (-(alpha + R::one()) * s).exp()
                / d.powf(alpha + two))
        }
        EnvelopeId::LaguerreLarge => {
            ensure_halfline(a)?;
            ensure_halfline(b)?;
            ensure_region(a, b, s, false)?;
            Ok(gaussian_quadratic(a, b, s).exp()
                * (-R::of(1.5) * s).exp()
                / (d * d * d.sqrt())
                * (a * a + b * b))
        }
        EnvelopeId::Difference => {
            ensure_halfline(a)?;
            ensure_halfline(b)?;
            ensure_region(a, b, s, false)?;
            let diff = a - b;
            let one_minus_em = R::one_minus_exp_neg(s);
            Ok((-diff * diff / (two * s)).exp() * (s / two).exp()
                / (a * b * one_minus_em.sqrt()))
        }
    }
}

fn ensure_region<R: Real>(y: R, z: R, s: R, small: bool) -> Result<()> {
    let ratio = bessel_region_ratio(y, z, s);
    if small && ratio > R::one() {
        return Err(domain(format!(
            "point is outside the small-argument region (ratio {ratio} > 1)"
        )));
    }
    if !small && ratio < R::one() {
        return Err(domain(format!(
            "point is outside the large-argument region (ratio {ratio} < 1)"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_time<R: Real>(s: R) -> Result<()> {
    if !(s > R::zero()) {
        return Err(domain(format!("time parameter {s} must be positive")));
    }
    Ok(())
}

pub(crate) fn ensure_halfline<R: Real>(x: R) -> Result<()> {
    if !(x > R::zero()) {
        return Err(domain(format!("half-line argument {x} must be positive")));
    }
    Ok(())
}
