//! Orthonormal Hermite functions evaluated by the normalized three-term
//! recurrence.  No factorials are materialized, so the evaluation stays in
//! range for orders in the thousands.

use crate::real::Real;

/// `h_n(x)`: the L2-orthonormal Hermite function of order `n`.
///
/// Seeded by `h_0(x) = pi^{-1/4} e^{-x^2/2}` and advanced by
/// `h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}`.
pub fn hermite_function<R: Real>(n: usize, x: R) -> R {
    let h0 = seed(x);
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = x * R::of(2.0).sqrt() * h0;
    for k in 1..n {
        let kf = R::of_usize(k);
        let next = x * (R::of(2.0) / (kf + R::one())).sqrt() * cur
            - (kf / (kf + R::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_0(x), ..., h_nmax(x)` in one upward pass.
pub fn hermite_function_all<R: Real>(nmax: usize, x: R) -> Vec<R> {
    let mut out = Vec::with_capacity(nmax + 1);
    hermite_function_all_into(nmax, x, &mut out);
    out
}

pub(crate) fn hermite_function_all_into<R: Real>(nmax: usize, x: R, out: &mut Vec<R>) {
    out.clear();
    out.push(seed(x));
    if nmax == 0 {
        return;
    }
    out.push(x * R::of(2.0).sqrt() * out[0]);
    for k in 1..nmax {
        let kf = R::of_usize(k);
        let next =
            x * (R::of(2.0) / (kf + R::one())).sqrt() * out[k] - (kf / (kf + R::one())).sqrt() * out[k - 1];
        out.push(next);
    }
}

#[inline]
fn seed<R: Real>(x: R) -> R {
    R::PI().powf(R::of(-0.25)) * (-x * x / R::of(2.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use crate::testsupport::dd_hermite_function;

    #[test]
    fn order_zero_at_origin() {
        let want = 0.751_125_544_464_942_5_f64; // pi^{-1/4}
        assert!((hermite_function(0, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn order_one_explicit() {
        // h_1(1) = sqrt(2) pi^{-1/4} e^{-1/2}
        let want = 0.644_288_365_113_475_2_f64;
        assert!((hermite_function(1, 1.0) - want).abs() < 1e-14);
    }

    #[test]
    fn matches_extended_precision_recurrence() {
        let got: f64 = hermite_function(50, 3.7);
        let want = dd_hermite_function(50, 3.7);
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "got {got}, oracle {want}"
        );
    }

    #[test]
    fn matches_direct_polynomial_route_low_orders() {
        // h_n = H_n e^{-x^2/2} / sqrt(sqrt(pi) 2^n n!), H_n by its own recurrence
        for &x in &[-2.3_f64, 0.4, 1.9] {
            let mut hp = 1.0_f64; // H_0
            let mut h = 2.0 * x; // H_1
            for n in 0..=12usize {
                let poly = if n == 0 {
                    1.0
                } else if n == 1 {
                    2.0 * x
                } else {
                    h
                };
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                let norm = (std::f64::consts::PI.sqrt() * 2f64.powi(n as i32) * fact).sqrt();
                let direct = poly * (-x * x / 2.0).exp() / norm;
                let rec = hermite_function(n, x);
                assert!(
                    ((rec - direct) / direct).abs() < 1e-12,
                    "n={n} x={x}: {rec} vs {direct}"
                );
                if n >= 1 {
                    let next = 2.0 * x * h - 2.0 * (n as f64) * hp;
                    hp = h;
                    h = next;
                }
            }
        }
    }

    #[test]
    fn orthonormal_under_line_quadrature() {
        let rule = quad::gl_on(-12.0_f64, 12.0, 200);
        let table: Vec<Vec<f64>> = rule
            .nodes
            .iter()
            .map(|&x| hermite_function_all(30, x))
            .collect();
        let mut worst = 0.0_f64;
        for n in 0..=30 {
            for m in n..=30 {
                let mut acc = 0.0;
                for (j, &w) in rule.weights.iter().enumerate() {
                    acc += w * table[j][n] * table[j][m];
                }
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        assert!(worst < 1e-9, "worst orthonormality defect {worst}");
    }

    #[test]
    fn no_overflow_for_extreme_orders() {
        let v: f64 = hermite_function(2000, 40.0);
        assert!(v.is_finite());
        let v2: f64 = hermite_function(2000, 1.0);
        assert!(v2.is_finite() && v2.abs() < 1.0);
    }

    #[test]
    fn f32_agrees_with_f64_at_low_order() {
        let a = hermite_function(5, 1.2_f32);
        let b = hermite_function(5, 1.2_f64);
        assert!((a as f64 - b).abs() < 1e-5);
    }
}
