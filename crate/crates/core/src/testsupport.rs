//! Test-only extended-precision oracles, independent of the production code
//! paths they check.  Double-double arithmetic built from error-free
//! transforms gives roughly 31 significant digits.

#![allow(dead_code)]

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from(q1)));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul(Dd::from(q2)));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        let (hi, lo2) = quick_two_sum(hi, lo + q3);
        Dd { hi, lo: lo2 }
    }

    pub fn sqrt(self) -> Dd {
        // one Newton step on the f64 seed doubles the accurate digits
        let s = Dd::from(self.hi.sqrt());
        let refined = s.add(self.div(s)).mul(Dd::from(0.5));
        refined
    }

    pub fn scale(self, v: f64) -> Dd {
        self.mul(Dd::from(v))
    }
}

/// Orthonormal Hermite function by the normalized recurrence in
/// double-double arithmetic.
pub fn dd_hermite_function(n: usize, x: f64) -> f64 {
    let xd = Dd::from(x);
    // pi^{-1/4} to double-double precision
    let quarter_root_pi = Dd {
        hi: 0.751_125_544_464_942_5,
        lo: -2.467_625_172_698_3e-17,
    };
    let half_x2 = xd.mul(xd).mul(Dd::from(0.5));
    let e = dd_exp_neg(half_x2);
    let h0 = quarter_root_pi.mul(e);
    if n == 0 {
        return h0.value();
    }
    let mut prev = h0;
    let mut cur = xd.mul(Dd::from(2.0).sqrt()).mul(h0);
    for k in 1..n {
        let a = Dd::from(2.0).div(Dd::from((k + 1) as f64)).sqrt();
        let b = Dd::from(k as f64).div(Dd::from((k + 1) as f64)).sqrt();
        let next = xd.mul(a).mul(cur).sub(b.mul(prev));
        prev = cur;
        cur = next;
    }
    cur.value()
}

/// `e^{-t}` for `t >= 0` by argument reduction plus the Taylor series in
/// double-double arithmetic.
fn dd_exp_neg(t: Dd) -> Dd {
    // e^{-t} = (e^{-t/2^k})^{2^k} with t/2^k < 1/2
    let mut k = 0u32;
    let mut tv = t;
    while tv.hi > 0.5 {
        tv = tv.mul(Dd::from(0.5));
        k += 1;
    }
    // Taylor for e^{-u}, u in [0, 1/2]
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for j in 1..60 {
        term = term.mul(tv).div(Dd::from(j as f64)).mul(Dd::from(-1.0));
        sum = sum.add(term);
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    for _ in 0..k {
        sum = sum.mul(sum);
    }
    sum
}

/// Scaled Bessel series `e^{-z} I_alpha(z)` summed in double-double
/// arithmetic (the gamma seed is f64-accurate, which is ample for the
/// 1e-9 comparisons the oracle backs).
pub fn dd_bessel_series_scaled(alpha: f64, z: f64) -> f64 {
    let g = crate::specfun::gamma::gamma(alpha + 1.0);
    let q = Dd::from(z).mul(Dd::from(z)).mul(Dd::from(0.25));
    let mut term = Dd::from(1.0).div(Dd::from(g));
    let mut sum = term;
    for k in 0..500 {
        let kf = (k + 1) as f64;
        term = term.mul(q).div(Dd::from(kf)).div(Dd::from(kf + alpha));
        sum = sum.add(term);
        if term.hi < sum.hi * 1e-35 {
            break;
        }
    }
    let scale = dd_exp_neg(Dd::from(z));
    let pw = dd_pow(Dd::from(z / 2.0), alpha);
    sum.mul(scale).mul(pw).value()
}

/// `b^e` for positive `b` via f64 log plus one correction step.
fn dd_pow(b: Dd, e: f64) -> Dd {
    let guess = b.hi.powf(e);
    // correct: guess * (b / guess^{1/e})^e ~ guess * (1 + e*(b - g)/g)
    let g_root = Dd::from(guess.powf(1.0 / e));
    let rel = b.sub(g_root).div(g_root);
    Dd::from(guess).mul(Dd::from(1.0).add(rel.mul(Dd::from(e))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_arithmetic_exact_cases() {
        let a = Dd::from(1.0).div(Dd::from(3.0));
        let b = a.mul(Dd::from(3.0));
        assert!((b.value() - 1.0).abs() < 1e-30);
        let s = Dd::from(2.0).sqrt();
        assert!((s.mul(s).value() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn dd_exp_matches_f64() {
        for &t in &[0.0_f64, 0.3, 1.7, 12.0] {
            let got = dd_exp_neg(Dd::from(t)).value();
            assert!(((got - (-t).exp()) / got.max(1e-300)).abs() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn dd_hermite_low_orders_match_closed_forms() {
        let h0 = dd_hermite_function(0, 0.0);
        assert!((h0 - 0.751_125_544_464_942_5).abs() < 1e-15);
        let h1 = dd_hermite_function(1, 1.0);
        assert!((h1 - 0.644_288_365_113_475_2).abs() < 1e-15);
    }
}
