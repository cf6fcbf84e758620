//! Orthonormal Laguerre functions on the half line.
//!
//! `phi_n^alpha(x) = sqrt(2 n! / Gamma(n+1+alpha)) e^{-x^2/2} x^{alpha+1/2}
//! L_n^alpha(x^2)`, evaluated through the normalized polynomial recurrence
//! so that no factorial or binomial ever leaves the representable range.

use crate::error::{domain, Result};
use crate::real::Real;

use super::gamma::ln_gamma;

/// `phi_n^alpha(x)` for `x > 0`, `alpha > -1/2`.
///
/// The half-line endpoint `x = 0` is excluded; the limit value there is `0`
/// for every order since the factor `x^{alpha+1/2}` has a positive exponent.
pub fn laguerre_function<R: Real>(n: usize, alpha: R, x: R) -> Result<R> {
    validate(alpha, x)?;
    let mut buf = Vec::with_capacity(n + 1);
    laguerre_all_unchecked(n, alpha, x, &mut buf);
    Ok(buf[n])
}

/// `phi_0^alpha(x), ..., phi_nmax^alpha(x)` in one pass.
pub fn laguerre_function_all<R: Real>(nmax: usize, alpha: R, x: R) -> Result<Vec<R>> {
    validate(alpha, x)?;
    let mut out = Vec::with_capacity(nmax + 1);
    laguerre_all_unchecked(nmax, alpha, x, &mut out);
    Ok(out)
}

pub(crate) fn laguerre_all_unchecked<R: Real>(nmax: usize, alpha: R, x: R, out: &mut Vec<R>) {
    out.clear();
    let u = x * x;
    // normalized polynomials l_n(u) = sqrt(n!/Gamma(n+1+alpha)) L_n^alpha(u)
    out.push((-ln_gamma(alpha + R::one())).exp().sqrt());
    if nmax >= 1 {
        out.push((R::one() + alpha - u) * (-ln_gamma(R::of(2.0) + alpha)).exp().sqrt());
    }
    for k in 1..nmax {
        let kf = R::of_usize(k);
        let next = ((R::of(2.0) * kf + R::one() + alpha - u) * out[k]
            - (kf * (kf + alpha)).sqrt() * out[k - 1])
            / ((kf + R::one()) * (kf + R::one() + alpha)).sqrt();
        out.push(next);
    }
    let factor = R::of(2.0).sqrt() * x.powf(alpha + R::of(0.5)) * (-u / R::of(2.0)).exp();
    for v in out.iter_mut() {
        *v = *v * factor;
    }
}

fn validate<R: Real>(alpha: R, x: R) -> Result<()> {
    if !(alpha > R::of(-0.5)) {
        return Err(domain(format!("laguerre type alpha = {alpha} must exceed -1/2")));
    }
    if !(x > R::zero()) {
        return Err(domain(format!("laguerre argument x = {x} must be positive")));
    }
    Ok(())
}
