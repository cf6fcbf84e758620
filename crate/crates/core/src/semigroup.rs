//! The heat semigroups applied to functions, by two independent routes:
//! spectral multiplication on expansion coefficients and kernel-integral
//! quadrature on sampled functions.  Also the odd extension and the heat
//! maximal function.

use crate::error::{contract, domain, Result};
use crate::kernels;
use crate::quad;
use crate::real::Real;
use crate::specfun::{BasisFunctionTable, BasisId, Domain};

/// A sampled real function with paired quadrature weights.
#[derive(Debug, Clone)]
pub struct GridFunction<R> {
    pub domain: Domain,
    pub nodes: Vec<R>,
    pub values: Vec<R>,
    pub weights: Vec<R>,
}

impl<R: Real> GridFunction<R> {
    pub fn from_parts(domain: Domain, nodes: Vec<R>, values: Vec<R>, weights: Vec<R>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() != weights.len() || nodes.is_empty() {
            return Err(contract("grid arrays must be nonempty and of equal length"));
        }
        if nodes.windows(2).any(|p| p[1] <= p[0]) {
            return Err(contract("grid nodes must be strictly increasing"));
        }
        if weights.iter().any(|&w| !(w > R::zero())) {
            return Err(contract("grid weights must be positive"));
        }
        if domain == Domain::HalfLine && !(nodes[0] > R::zero()) {
            return Err(contract("half-line grid nodes must be positive"));
        }
        Ok(Self { domain, nodes, values, weights })
    }

    /// Sample `f` on a Gauss-Legendre grid over `[a, b]`.
    pub fn sample_line<F: Fn(R) -> R>(a: R, b: R, n: usize, f: F) -> Self {
        let rule = quad::gl_on(a, b, n);
        Self::from_rule(Domain::Line, rule, f)
    }

    /// Sample `f` on the square-root-mapped grid over `(0, b]`.
    pub fn sample_halfline<F: Fn(R) -> R>(b: R, n: usize, f: F) -> Self {
        let rule = quad::halfline_rule(b, n);
        Self::from_rule(Domain::HalfLine, rule, f)
    }

    /// Sample `f` on a composite line grid with panels bounded by `edges`.
    /// Used when the function has structure too fine for a single panel.
    pub fn sample_line_panels<F: Fn(R) -> R>(edges: &[R], per: usize, f: F) -> Self {
        let rule = quad::gl_panels(edges, per);
        Self::from_rule(Domain::Line, rule, f)
    }

    /// Default line grid: 512 Gauss-Legendre nodes on [-10, 10].
    pub fn default_line<F: Fn(R) -> R>(f: F) -> Self {
        Self::sample_line(R::of(-10.0), R::of(10.0), 512, f)
    }

    /// Default half-line grid: 512 mapped nodes on (0, 14].
    pub fn default_halfline<F: Fn(R) -> R>(f: F) -> Self {
        Self::sample_halfline(R::of(14.0), 512, f)
    }

    fn from_rule<F: Fn(R) -> R>(domain: Domain, rule: quad::Rule<R>, f: F) -> Self {
        let values = rule.nodes.iter().map(|&x| f(x)).collect();
        Self { domain, nodes: rule.nodes, values, weights: rule.weights }
    }

    /// `(sum w_i |f_i|^p)^{1/p}`.
    pub fn lp_norm(&self, p: R) -> R {
        let total = self
            .values
            .iter()
            .zip(&self.weights)
            .fold(R::zero(), |acc, (&v, &w)| acc + w * v.abs().powf(p));
        total.powf(R::one() / p)
    }

    /// Quadrature of the sampled values against the weights.
    pub fn integral(&self) -> R {
        self.values
            .iter()
            .zip(&self.weights)
            .fold(R::zero(), |acc, (&v, &w)| acc + w * v)
    }
}

/// Finite coefficient vector against one of the orthonormal bases.
#[derive(Debug, Clone)]
pub struct SpectralExpansion<R> {
    pub basis: BasisId<R>,
    pub coeffs: Vec<R>,
}

impl<R: Real> SpectralExpansion<R> {
    pub fn new(basis: BasisId<R>, coeffs: Vec<R>) -> Self {
        Self { basis, coeffs }
    }

    /// The unit coefficient vector `e_n`.
    pub fn unit(basis: BasisId<R>, n: usize) -> Self {
        let mut coeffs = vec![R::zero(); n + 1];
        coeffs[n] = R::one();
        Self { basis, coeffs }
    }

    /// Parseval: the L2 norm equals the Euclidean norm of the coefficients.
    pub fn l2_norm(&self) -> R {
        self.coeffs
            .iter()
            .fold(R::zero(), |acc, &a| acc + a * a)
            .sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.l2_norm();
        if n > R::zero() {
            for a in &mut self.coeffs {
                *a = *a / n;
            }
        }
        self
    }

    pub fn eval(&self, x: R) -> Result<R> {
        let vals = self.basis.evaluate_all(self.coeffs.len().saturating_sub(1), x)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&vals)
            .fold(R::zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// `W_t f(x)` through the eigenvalue multipliers.
    pub fn eval_heat(&self, x: R, t: R) -> Result<R> {
        kernels::ensure_time(t)?;
        let vals = self.basis.evaluate_all(self.coeffs.len().saturating_sub(1), x)?;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .zip(&vals)
            .fold(R::zero(), |acc, ((n, &a), &b)| {
                acc + a * (-self.basis.eigenvalue(n) * t).exp() * b
            }))
    }

    /// `d/ds W_s f(x) = -sum_n lambda_n e^{-lambda_n s} a_n b_n(x)`.
    pub fn eval_heat_ds(&self, x: R, s: R) -> Result<R> {
        kernels::ensure_time(s)?;
        let vals = self.basis.evaluate_all(self.coeffs.len().saturating_sub(1), x)?;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .zip(&vals)
            .fold(R::zero(), |acc, ((n, &a), &b)| {
                let lambda = self.basis.eigenvalue(n);
                acc - lambda * (-lambda * s).exp() * a * b
            }))
    }
}

/// A function in whichever representation the caller has: sampled on a grid
/// or as a finite expansion.  Operations that admit an exact spectral route
/// use it for expansion inputs.
#[derive(Debug, Clone)]
pub enum FunctionRep<R> {
    Grid(GridFunction<R>),
    Spectral(SpectralExpansion<R>),
}

impl<R: Real> FunctionRep<R> {
    pub fn domain(&self) -> Domain {
        match self {
            FunctionRep::Grid(g) => g.domain,
            FunctionRep::Spectral(e) => e.basis.domain(),
        }
    }
}

/// Expansion coefficients of a sampled function: coefficient `n` is the
/// quadrature approximation of the inner product with the `n`-th basis
/// function.
pub fn expand<R: Real>(
    f: &GridFunction<R>,
    basis: BasisId<R>,
    nmax: usize,
) -> Result<SpectralExpansion<R>> {
    if f.domain != basis.domain() {
        return Err(contract("grid domain does not match the basis domain"));
    }
    let table = BasisFunctionTable::new(basis, nmax, &f.nodes)?;
    let coeffs = (0..=nmax)
        .map(|n| {
            table
                .row(n)
                .iter()
                .zip(&f.values)
                .zip(&f.weights)
                .fold(R::zero(), |acc, ((&b, &v), &w)| acc + w * b * v)
        })
        .collect();
    Ok(SpectralExpansion::new(basis, coeffs))
}

/// Heat semigroup on coefficients: coefficient `n` is scaled by
/// `e^{-lambda_n t}`.
pub fn apply_heat_spectral<R: Real>(
    e: &SpectralExpansion<R>,
    t: R,
) -> Result<SpectralExpansion<R>> {
    kernels::ensure_time(t)?;
    let coeffs = e
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &a)| a * (-e.basis.eigenvalue(n) * t).exp())
        .collect();
    Ok(SpectralExpansion::new(e.basis, coeffs))
}

/// Heat semigroup by kernel quadrature: `W_t f(x) ~ sum_j w_j K(x, y_j, t) f_j`.
pub fn apply_heat_integral<R: Real>(
    f: &GridFunction<R>,
    t: R,
    basis: BasisId<R>,
    x: R,
) -> Result<R> {
    kernels::ensure_time(t)?;
    if f.domain != basis.domain() {
        return Err(contract("grid domain does not match the basis domain"));
    }
    let acc = match basis {
        BasisId::HermiteLine => {
            f.nodes
                .iter()
                .zip(&f.values)
                .zip(&f.weights)
                .fold(R::zero(), |acc, ((&y, &v), &w)| {
                    acc + w * kernels::hermite_kernel_unchecked(x, y, t) * v
                })
        }
        BasisId::LaguerreHalfLine { alpha } => {
            kernels::ensure_halfline(x)?;
            f.nodes
                .iter()
                .zip(&f.values)
                .zip(&f.weights)
                .fold(R::zero(), |acc, ((&y, &v), &w)| {
                    acc + w * kernels::laguerre_kernel_unchecked(x, y, t, alpha) * v
                })
        }
    };
    Ok(acc)
}

/// `d/ds W_s f(x)`: differentiation under the integral for grid inputs, the
/// exact eigenvalue route for expansion inputs.
pub fn apply_heat_ds<R: Real>(
    f: &FunctionRep<R>,
    s: R,
    basis: BasisId<R>,
    x: R,
) -> Result<R> {
    kernels::ensure_time(s)?;
    match f {
        FunctionRep::Spectral(e) => {
            if e.basis != basis {
                return Err(contract("expansion basis does not match the requested basis"));
            }
            e.eval_heat_ds(x, s)
        }
        FunctionRep::Grid(g) => {
            if g.domain != basis.domain() {
                return Err(contract("grid domain does not match the basis domain"));
            }
            let acc = match basis {
                BasisId::HermiteLine => g
                    .nodes
                    .iter()
                    .zip(&g.values)
                    .zip(&g.weights)
                    .fold(R::zero(), |acc, ((&y, &v), &w)| {
                        acc + w * kernels::hermite_ds_unchecked(x, y, s) * v
                    }),
                BasisId::LaguerreHalfLine { alpha } => {
                    kernels::ensure_halfline(x)?;
                    g.nodes
                        .iter()
                        .zip(&g.values)
                        .zip(&g.weights)
                        .fold(R::zero(), |acc, ((&y, &v), &w)| {
                            acc + w * kernels::laguerre_ds_unchecked(x, y, s, alpha) * v
                        })
                }
            };
            Ok(acc)
        }
    }
}

/// Odd extension of a half-line function to the line: `f_o(-x) = -f(x)`.
pub fn odd_extension<R: Real>(f: &GridFunction<R>) -> Result<GridFunction<R>> {
    if f.domain != Domain::HalfLine {
        return Err(contract("odd extension takes a half-line function"));
    }
    let n = f.nodes.len();
    let mut nodes = Vec::with_capacity(2 * n);
    let mut values = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for j in (0..n).rev() {
        nodes.push(-f.nodes[j]);
        values.push(-f.values[j]);
        weights.push(f.weights[j]);
    }
    nodes.extend_from_slice(&f.nodes);
    values.extend_from_slice(&f.values);
    weights.extend_from_slice(&f.weights);
    GridFunction::from_parts(Domain::Line, nodes, values, weights)
}

/// `max_{t in grid} |W_t f(x)|`: a log-spaced proxy (and lower bound) for the
/// heat maximal function `sup_{t>0} |W_t f(x)|`.
pub fn maximal_heat<R: Real>(
    f: &GridFunction<R>,
    basis: BasisId<R>,
    x: R,
    t_grid: &[R],
) -> Result<R> {
    if t_grid.is_empty() {
        return Err(contract("maximal function needs a nonempty time grid"));
    }
    if t_grid.iter().any(|&t| !(t > R::zero())) {
        return Err(domain("maximal function time grid must be positive"));
    }
    let mut best = R::zero();
    for &t in t_grid {
        let v = apply_heat_integral(f, t, basis, x)?.abs();
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Default proxy grid for `sup_{t>0}`: 64 log-spaced times in [1e-3, 10].
pub fn default_t_grid<R: Real>() -> Vec<R> {
    quad::log_spaced(R::of(1e-3), R::of(10.0), 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre_function;

    fn hermite_basis() -> BasisId<f64> {
        BasisId::hermite()
    }

    #[test]
    fn expand_recovers_a_basis_function() {
        let f = GridFunction::default_line(|x| crate::specfun::hermite_function(3, x));
        let e = expand(&f, hermite_basis(), 8).unwrap();
        for (n, &c) in e.coeffs.iter().enumerate() {
            let target = if n == 3 { 1.0 } else { 0.0 };
            assert!((c - target).abs() < 1e-9, "coeff {n} = {c}");
        }
    }

    #[test]
    fn expand_satisfies_parseval() {
        let w = 1.0 / 5.0_f64.sqrt();
        let f = GridFunction::default_line(|x| {
            w * (crate::specfun::hermite_function(0, x)
                + 2.0 * crate::specfun::hermite_function(5, x))
        });
        let e = expand(&f, hermite_basis(), 12).unwrap();
        let total: f64 = e.coeffs.iter().map(|c| c * c).sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn expand_recovers_laguerre_function() {
        let basis = BasisId::laguerre(0.5_f64).unwrap();
        let f = GridFunction::default_halfline(|x| laguerre_function(2, 0.5, x).unwrap());
        let e = expand(&f, basis, 6).unwrap();
        for (n, &c) in e.coeffs.iter().enumerate() {
            let target = if n == 2 { 1.0 } else { 0.0 };
            assert!((c - target).abs() < 1e-8, "coeff {n} = {c}");
        }
    }

    #[test]
    fn expand_rejects_domain_mismatch() {
        let f = GridFunction::default_line(|x| x);
        assert!(expand(&f, BasisId::laguerre(0.5).unwrap(), 4).is_err());
    }

    #[test]
    fn heat_multipliers_on_eigenfunctions() {
        let e = SpectralExpansion::unit(hermite_basis(), 3);
        let h = apply_heat_spectral(&e, 0.2).unwrap();
        assert!((h.coeffs[3] - (-0.7_f64).exp()).abs() < 1e-15);

        let basis = BasisId::laguerre(0.5_f64).unwrap();
        let e = SpectralExpansion::unit(basis, 1);
        let h = apply_heat_spectral(&e, 0.1).unwrap();
        assert!((h.coeffs[1] - (-0.35_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn semigroup_law_is_exact_on_multipliers() {
        let e = SpectralExpansion::new(hermite_basis(), vec![0.3, -1.0, 0.0, 2.0]);
        let twice = apply_heat_spectral(&apply_heat_spectral(&e, 0.4).unwrap(), 0.9).unwrap();
        let once = apply_heat_spectral(&e, 1.3).unwrap();
        for (a, b) in twice.coeffs.iter().zip(&once.coeffs) {
            assert!((a - b).abs() <= 1e-16 + 1e-15 * b.abs());
        }
    }

    #[test]
    fn integral_route_matches_spectral_route() {
        // Hermite eigenfunction
        let f = GridFunction::default_line(|x| crate::specfun::hermite_function(3, x));
        let got = apply_heat_integral(&f, 0.2, hermite_basis(), 1.0).unwrap();
        let want = (-0.7_f64).exp() * crate::specfun::hermite_function(3, 1.0);
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");

        // zero function
        let z = GridFunction::default_line(|_| 0.0);
        assert_eq!(apply_heat_integral(&z, 0.2, hermite_basis(), 1.0).unwrap(), 0.0);

        // Laguerre eigenfunction
        let basis = BasisId::laguerre(1.0_f64).unwrap();
        let f = GridFunction::default_halfline(|x| laguerre_function(0, 1.0, x).unwrap());
        let got = apply_heat_integral(&f, 0.3, basis, 2.0).unwrap();
        let want = (-0.6_f64).exp() * laguerre_function(0, 1.0, 2.0).unwrap();
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn heat_ds_routes_agree() {
        // eigenfunction closed form
        let e = FunctionRep::Spectral(SpectralExpansion::unit(hermite_basis(), 2));
        let got = apply_heat_ds(&e, 0.5, hermite_basis(), 0.7).unwrap();
        let want = -2.5 * (-2.5 * 0.5_f64).exp() * crate::specfun::hermite_function(2, 0.7);
        assert!(((got - want) / want).abs() < 1e-13);

        // integral route against the spectral route on a two-term function
        let spectral = SpectralExpansion::new(
            hermite_basis(),
            vec![1.0 / 2.0_f64.sqrt(), 0.0, 0.0, 0.0, 1.0 / 2.0_f64.sqrt()],
        );
        let grid = GridFunction::default_line(|x| {
            (crate::specfun::hermite_function(0, x) + crate::specfun::hermite_function(4, x))
                / 2.0_f64.sqrt()
        });
        let a = apply_heat_ds(&FunctionRep::Spectral(spectral), 0.5, hermite_basis(), 0.7).unwrap();
        let b = apply_heat_ds(&FunctionRep::Grid(grid), 0.5, hermite_basis(), 0.7).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");

        // Laguerre eigenfunction eigenvalue
        let basis = BasisId::laguerre(0.5_f64).unwrap();
        let e = FunctionRep::Spectral(SpectralExpansion::unit(basis, 2));
        let got = apply_heat_ds(&e, 0.3, basis, 1.1).unwrap();
        let want = -5.5 * (-5.5 * 0.3_f64).exp() * laguerre_function(2, 0.5, 1.1).unwrap();
        assert!(((got - want) / want).abs() < 1e-13);
    }

    #[test]
    fn odd_extension_properties() {
        let f = GridFunction::default_halfline(|x| laguerre_function(0, 0.5, x).unwrap());
        let fo = odd_extension(&f).unwrap();
        let n = f.nodes.len();
        assert_eq!(fo.nodes.len(), 2 * n);
        assert_eq!(fo.values[0], -f.values[n - 1]);
        assert_eq!(fo.nodes[0], -f.nodes[n - 1]);

        // constant 1 on nodes maps to -1 on the mirrored nodes
        let ones = GridFunction::default_halfline(|_| 1.0);
        let ones_o = odd_extension(&ones).unwrap();
        assert!(ones_o.values[..n].iter().all(|&v| v == -1.0));

        // W_s(f_o) is odd in x (sampled check)
        for &x in &[0.4_f64, 1.3, 2.2] {
            let plus = apply_heat_integral(&fo, 0.5, BasisId::hermite(), x).unwrap();
            let minus = apply_heat_integral(&fo, 0.5, BasisId::hermite(), -x).unwrap();
            assert!((plus + minus).abs() < 1e-12, "x={x}");
        }

        // odd functions are spanned by odd Hermite functions
        let e = expand(&fo, BasisId::hermite(), 11).unwrap();
        for n in (0..=11).step_by(2) {
            assert!(e.coeffs[n].abs() < 1e-8, "even coeff {n} = {}", e.coeffs[n]);
        }

        assert!(odd_extension(&GridFunction::default_line(|x: f64| x)).is_err());
    }

    #[test]
    fn maximal_heat_on_a_positive_eigenfunction() {
        let f = GridFunction::default_line(|x| crate::specfun::hermite_function(0, x));
        let t_grid = default_t_grid::<f64>();
        let got = maximal_heat(&f, hermite_basis(), 0.0, &t_grid).unwrap();
        // decay is monotone on eigenfunctions: the max sits at the smallest
        // times, where the sup equals h_0(0) up to the e^{-t/2} factor and
        // the kernel-quadrature resolution
        let want = crate::specfun::hermite_function(0, 0.0);
        assert!(((got - want) / want).abs() < 1e-2, "{got} vs {want}");
        assert!(got <= want * (1.0 + 1e-2));

        let z = GridFunction::default_line(|_| 0.0);
        assert_eq!(maximal_heat(&z, hermite_basis(), 0.0, &t_grid).unwrap(), 0.0);

        assert!(maximal_heat(&f, hermite_basis(), 0.0, &[]).is_err());
    }

    #[test]
    fn maximal_heat_stable_under_time_grid_refinement() {
        let f = GridFunction::default_line(|x| {
            0.6 * crate::specfun::hermite_function(1, x)
                + 0.8 * crate::specfun::hermite_function(2, x)
        });
        let coarse = quad::log_spaced(1e-3_f64, 10.0, 64);
        let fine = quad::log_spaced(1e-3_f64, 10.0, 128);
        let x = 0.9;
        let a = maximal_heat(&f, hermite_basis(), x, &coarse).unwrap();
        let b = maximal_heat(&f, hermite_basis(), x, &fine).unwrap();
        assert!(((a - b) / b).abs() <= 1e-4, "{a} vs {b}");
    }

    #[test]
    fn l2_contraction_bound() {
        // ||W_t f||_2 <= e^{-t/2} ||f||_2 holds exactly on the spectral route
        let e = SpectralExpansion::new(hermite_basis(), vec![0.5, -0.5, 0.7]).normalized();
        let h = apply_heat_spectral(&e, 0.8).unwrap();
        assert!(h.l2_norm() <= (-0.4_f64).exp() * e.l2_norm() + 1e-15);

        let basis = BasisId::laguerre(2.0_f64).unwrap();
        let e = SpectralExpansion::new(basis, vec![0.5, -0.5, 0.7]).normalized();
        let h = apply_heat_spectral(&e, 0.8).unwrap();
        // smallest eigenvalue alpha + 1 = 3
        assert!(h.l2_norm() <= (-2.4_f64).exp() * e.l2_norm() + 1e-15);
    }

    #[test]
    fn grid_function_validation() {
        assert!(GridFunction::from_parts(
            Domain::Line,
            vec![0.0, 1.0],
            vec![1.0],
            vec![1.0, 1.0]
        )
        .is_err());
        assert!(GridFunction::from_parts(
            Domain::Line,
            vec![1.0, 0.5],
            vec![1.0, 1.0],
            vec![1.0, 1.0]
        )
        .is_err());
        assert!(GridFunction::from_parts(
            Domain::HalfLine,
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0]
        )
        .is_err());
        assert!(GridFunction::from_parts(
            Domain::Line,
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, -1.0]
        )
        .is_err());
    }
}
