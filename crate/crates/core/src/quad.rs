//! Gauss-Legendre rules and the composite rules (panelled, log-spaced,
//! square-root mapped) that the semigroup and cone integrals are built on.

use crate::real::Real;

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone)]
pub struct Rule<R> {
    pub nodes: Vec<R>,
    pub weights: Vec<R>,
}

impl<R: Real> Rule<R> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Apply the rule to a function.
    pub fn integrate<F: FnMut(R) -> R>(&self, mut f: F) -> R {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(R::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// Affine image on `[a, b]` of a base rule on `[-1, 1]`.
    pub fn mapped_to(&self, a: R, b: R) -> Rule<R> {
        let half = (b - a) / R::of(2.0);
        let mid = (a + b) / R::of(2.0);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

/// Legendre polynomial `P_n` and its derivative at `x`, by the three-term
/// recurrence (derivative recurred alongside, stable at the endpoints).
fn legendre_with_derivative<R: Real>(n: usize, x: R) -> (R, R) {
    if n == 0 {
        return (R::one(), R::zero());
    }
    let mut p0 = R::one();
    let mut p1 = x;
    let mut d0 = R::zero();
    let mut d1 = R::one();
    for k in 2..=n {
        let kf = R::of_usize(k);
        let km1 = R::of_usize(k - 1);
        let two_km1_p1 = R::of_usize(2 * k - 1);
        let p2 = (two_km1_p1 * x * p1 - km1 * p0) / kf;
        let d2 = (two_km1_p1 * (p1 + x * d1) - km1 * d0) / kf;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// Gauss-Legendre rule with `n` points on `[-1, 1]`.
pub fn gauss_legendre<R: Real>(n: usize) -> Rule<R> {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![R::zero(); n];
    let mut weights = vec![R::zero(); n];
    let nf = R::of_usize(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (R::PI() * (R::of_usize(i) + R::of(0.75)) / (nf + R::of(0.5))).cos();
        for _ in 0..64 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z = z - dz;
            if dz.abs() <= R::epsilon() * (R::one() + z.abs()) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        let w = R::of(2.0) / ((R::one() - z * z) * d * d);
        nodes[i] = -z;
        weights[i] = w;
        nodes[n - 1 - i] = z;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// Gauss-Legendre rule on `[a, b]`.
pub fn gl_on<R: Real>(a: R, b: R, n: usize) -> Rule<R> {
    gauss_legendre(n).mapped_to(a, b)
}

/// Composite Gauss-Legendre rule over consecutive panels bounded by `edges`,
/// with `per` nodes per panel.
pub fn gl_panels<R: Real>(edges: &[R], per: usize) -> Rule<R> {
    assert!(edges.len() >= 2, "need at least one panel");
    let base = gauss_legendre(per);
    let mut nodes = Vec::with_capacity(per * (edges.len() - 1));
    let mut weights = Vec::with_capacity(per * (edges.len() - 1));
    for pair in edges.windows(2) {
        let panel = base.mapped_to(pair[0], pair[1]);
        nodes.extend(panel.nodes);
        weights.extend(panel.weights);
    }
    Rule { nodes, weights }
}

/// Composite rule on `[a, b]` with panels equally spaced in `log t`
/// (8-point Gauss-Legendre per panel, `n` nodes total rounded up to a
/// multiple of eight).  Resolves integrands with structure at both the
/// small-`t` apex and the large-`t` tail.
pub fn log_rule<R: Real>(a: R, b: R, n: usize) -> Rule<R> {
    assert!(a > R::zero() && b > a, "log rule needs 0 < a < b");
    let per = 8;
    let panels = n.div_ceil(per).max(1);
    let (la, lb) = (a.ln(), b.ln());
    let edges: Vec<R> = (0..=panels)
        .map(|i| (la + (lb - la) * R::of_usize(i) / R::of_usize(panels)).exp())
        .collect();
    gl_panels(&edges, per)
}

/// Geometrically spaced point set on `[a, b]` (`n` points, endpoints included).
pub fn log_spaced<R: Real>(a: R, b: R, n: usize) -> Vec<R> {
    assert!(a > R::zero() && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * R::of_usize(i) / R::of_usize(n - 1)).exp())
        .collect()
}

/// Rule for `(0, b]` built from a Gauss-Legendre rule in `u` with `x = u^2`.
///
/// The square-root map absorbs the `x^{alpha+1/2}` endpoint behaviour of the
/// Laguerre functions (every Laguerre-side integrand is a function of `x^2`
/// times that factor), so plain Gauss-Legendre converges spectrally even for
/// `alpha` close to `-1/2`.
pub fn halfline_rule<R: Real>(b: R, n: usize) -> Rule<R> {
    assert!(b > R::zero());
    let base = gl_on(R::zero(), b.sqrt(), n);
    Rule {
        nodes: base.nodes.iter().map(|&u| u * u).collect(),
        weights: base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(&u, &w)| R::of(2.0) * u * w)
            .collect(),
    }
}
