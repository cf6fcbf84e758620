//! The verification harness: L^p norms, boundedness / reverse / equivalence
//! sweeps, weak-type profiles, the polarization identity, envelope-constant
//! fitting for every kernel estimate, Hardy-operator checks, and the H^1
//! diagnostics.  Everything here runs at working precision (`f64`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::areagfun::{
    area_g_halfline_value, area_g_value, kernel_cone_norm, ConeNormVariant, ConeQuadratureSpec,
    ConeIntegrator,
};
use crate::error::{contract, domain, Error, Result};
use crate::kernels::{
    self, bessel_region_ratio, envelope, hermite_heat_kernel, hermite_heat_kernel_ds,
    laguerre_heat_kernel, laguerre_heat_kernel_ds, EnvelopeId,
};
use crate::quad;
use crate::report::{self, Csv};
use crate::semigroup::{
    default_t_grid, expand, maximal_heat, FunctionRep, GridFunction, SpectralExpansion,
};
use crate::specfun::{hermite_function_all, laguerre_function_all, BasisId, Domain};

/// Ratio statistics of an operator over a test family.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub p: f64,
    pub family_size: usize,
    /// `||T f||_p / ||f||_p` per family member.
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
    /// Set when the requested exponents fall outside the range the
    /// boundedness statements cover; the numbers are still reported.
    pub outside_hypothesis: bool,
}

impl NormReport {
    /// One row per test function.
    pub fn to_csv(&self, operator: &str, q: f64) -> Csv {
        let mut csv = Csv::new();
        csv.meta("report", "norm-ratios")
            .meta("operator", operator)
            .meta("q", q)
            .meta("p", self.p)
            .meta("family_size", self.family_size)
            .meta("outside_hypothesis", self.outside_hypothesis);
        csv.header(&["function", "ratio"]);
        for (i, r) in self.ratios.iter().enumerate() {
            csv.row(vec![report::int(i), report::num(*r)]);
        }
        csv
    }

    fn from_ratios(p: f64, ratios: Vec<f64>, outside: bool) -> Result<Self> {
        if ratios.is_empty() {
            return Err(contract("norm report needs a nonempty family"));
        }
        if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(contract("degenerate ratio in norm report (zero function in family?)"));
        }
        let sup = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let inf = ratios.iter().cloned().fold(f64::MAX, f64::min);
        Ok(Self {
            p,
            family_size: ratios.len(),
            ratios,
            sup_ratio: sup,
            inf_ratio: inf,
            outside_hypothesis: outside,
        })
    }
}

/// Level-set products `lambda * measure{g f > lambda}`.
#[derive(Debug, Clone)]
pub struct WeakTypeProfile {
    pub lambdas: Vec<f64>,
    pub products: Vec<f64>,
    pub l1_norm: f64,
    /// `sup_lambda lambda * measure{g f > lambda} / ||f||_1`.
    pub sup_product_ratio: f64,
}

impl WeakTypeProfile {
    /// One row per threshold.
    pub fn to_csv(&self, operator: &str, q: f64) -> Csv {
        let mut csv = Csv::new();
        csv.meta("report", "weak-type-profile")
            .meta("operator", operator)
            .meta("q", q)
            .meta("l1_norm", report::fmt_sig(self.l1_norm))
            .meta("sup_product_ratio", report::fmt_sig(self.sup_product_ratio));
        csv.header(&["lambda", "product"]);
        for (l, p) in self.lambdas.iter().zip(&self.products) {
            csv.row(vec![report::num(*l), report::num(*p)]);
        }
        csv
    }
}

/// A fitted constant for an inequality `LHS <= C * RHS`.
#[derive(Debug, Clone)]
pub struct EnvelopeFitReport {
    pub inequality_id: String,
    /// Max of LHS/RHS over the training grid.
    pub c_fit: f64,
    pub margin: f64,
    pub n_training: usize,
    pub n_validation: usize,
    /// Validation points where `LHS > margin * c_fit * RHS`.
    pub violations: Vec<Violation>,
}

impl EnvelopeFitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// One row per validation violation (none when the fit passes).
    pub fn to_csv(&self) -> Csv {
        let mut csv = Csv::new();
        csv.meta("report", "envelope-fit")
            .meta("inequality_id", &self.inequality_id)
            .meta("c_fit", report::fmt_sig(self.c_fit))
            .meta("margin", self.margin)
            .meta("n_training", self.n_training)
            .meta("n_validation", self.n_validation)
            .meta("pass", self.passed());
        csv.header(&["a", "b", "s", "lhs", "rhs"]);
        for v in &self.violations {
            csv.row(vec![
                report::num(v.point[0]),
                report::num(v.point[1]),
                report::num(v.point[2]),
                report::num(v.lhs),
                report::num(v.rhs),
            ]);
        }
        csv
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Violation {
    pub point: [f64; 3],
    pub lhs: f64,
    pub rhs: f64,
}

/// Exact and quadrature sides of the polarization identity.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationReport {
    pub alpha: f64,
    /// `sum_n a_n b_n`.
    pub exact: f64,
    /// The cone integral with weight `dt dy / (t |J_t(y)|)`.
    pub quadrature: f64,
    pub rel_err: f64,
}

/// The two L^1 quantities the H^1 characterization compares.
#[derive(Debug, Clone, Copy)]
pub struct H1Diagnostic {
    pub maximal_l1: f64,
    pub l1_plus_g_l1: f64,
    /// `maximal_l1 / l1_plus_g_l1`; absent when both vanish.
    pub ratio: Option<f64>,
}

/// Shared evaluation policy for the sweeps.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Cone policy; the `q` field is overridden per sweep.
    pub cone: ConeQuadratureSpec<f64>,
    /// Evaluation grid (nodes and L^p weights) on the line.
    pub line_eval: quad::Rule<f64>,
    /// Evaluation grid on the half line.
    pub halfline_eval: quad::Rule<f64>,
    /// Sampling policy `(b, n)` when a spectral input must be sampled to a
    /// half-line grid.
    pub halfline_sample: (f64, usize),
}

impl SweepConfig {
    pub fn standard() -> Self {
        Self {
            cone: ConeQuadratureSpec::standard(2.0),
            line_eval: quad::gl_on(-8.0, 8.0, 160),
            halfline_eval: quad::halfline_rule(10.0, 160),
            halfline_sample: (12.0, 220),
        }
    }
}

/// `(sum_i w_i |f_i|^p)^{1/p}` with the grid's quadrature weights.
pub fn lp_norm(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(domain(format!("L^p norm exponent p = {p} must be at least 1")));
    }
    if values.len() != weights.len() {
        return Err(contract("values and weights must have equal length"));
    }
    let total: f64 = values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| w * v.abs().powf(p))
        .sum();
    Ok(total.powf(1.0 / p))
}

/// The operators the boundedness statements cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOperator {
    /// `g^q` for the Hermite semigroup over the line cone.
    AreaHermite,
    /// `g^q` for the Laguerre semigroup over the half-line cone.
    AreaLaguerre,
    /// `g^{q,+}`: the Hermite integrand on odd extensions over the
    /// half-line cone.
    AreaHalfLine,
}

/// g-function values of one family member on the evaluation grid.
pub fn g_values(
    op: SweepOperator,
    q: f64,
    f: &FunctionRep<f64>,
    alpha: Option<f64>,
    cfg: &SweepConfig,
) -> Result<Vec<f64>> {
    let spec = ConeQuadratureSpec { q, ..cfg.cone };
    match op {
        SweepOperator::AreaHermite => {
            let basis = BasisId::hermite();
            cfg.line_eval
                .nodes
                .par_iter()
                .map(|&x| area_g_value(f, x, &spec, basis))
                .collect()
        }
        SweepOperator::AreaLaguerre => {
            let alpha = alpha.ok_or_else(|| contract("Laguerre sweep needs alpha"))?;
            let basis = BasisId::laguerre(alpha)?;
            cfg.halfline_eval
                .nodes
                .par_iter()
                .map(|&x| area_g_value(f, x, &spec, basis))
                .collect()
        }
        SweepOperator::AreaHalfLine => {
            let grid = match f {
                FunctionRep::Grid(g) => g.clone(),
                FunctionRep::Spectral(e) => {
                    if e.basis.domain() != Domain::HalfLine {
                        return Err(contract("the half-line operator takes half-line functions"));
                    }
                    let (b, n) = cfg.halfline_sample;
                    let e = e.clone();
                    GridFunction::sample_halfline(b, n, move |x| e.eval(x).unwrap_or(0.0))
                }
            };
            cfg.halfline_eval
                .nodes
                .par_iter()
                .map(|&x| area_g_halfline_value(&grid, x, &spec))
                .collect()
        }
    }
}

fn eval_grid_of(op: SweepOperator, cfg: &SweepConfig) -> &quad::Rule<f64> {
    match op {
        SweepOperator::AreaHermite => &cfg.line_eval,
        _ => &cfg.halfline_eval,
    }
}

/// Sample a function representation on an evaluation rule.
fn sample_on(f: &FunctionRep<f64>, rule: &quad::Rule<f64>) -> Vec<f64> {
    match f {
        FunctionRep::Spectral(e) => rule.nodes.iter().map(|&x| e.eval(x).unwrap_or(0.0)).collect(),
        FunctionRep::Grid(g) => {
            // a grid rep carries its own quadrature; interpolation would lie,
            // so evaluate L^p norms on the native grid instead (see callers)
            g.values.clone()
        }
    }
}

fn lp_norm_of(f: &FunctionRep<f64>, p: f64, rule: &quad::Rule<f64>) -> Result<f64> {
    match f {
        FunctionRep::Spectral(_) => lp_norm(&sample_on(f, rule), &rule.weights, p),
        FunctionRep::Grid(g) => lp_norm(&g.values, &g.weights, p),
    }
}

/// Ratio statistics `||g^q f||_p / ||f||_p` over a family.
pub fn boundedness_sweep(
    op: SweepOperator,
    q: f64,
    p: f64,
    family: &[FunctionRep<f64>],
    alpha: Option<f64>,
    cfg: &SweepConfig,
) -> Result<NormReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(domain(format!("boundedness sweep needs 1 < p < inf, got {p}")));
    }
    let eval = eval_grid_of(op, cfg);
    let mut ratios = Vec::with_capacity(family.len());
    for f in family {
        let g = g_values(op, q, f, alpha, cfg)?;
        let num = lp_norm(&g, &eval.weights, p)?;
        let den = lp_norm_of(f, p, eval)?;
        ratios.push(num / den);
    }
    NormReport::from_ratios(p, ratios, q < 2.0)
}

/// As `boundedness_sweep`, but over precomputed g-values (so several `p`
/// can share one sweep).
pub fn norm_report_from_values(
    op: SweepOperator,
    gvals: &[Vec<f64>],
    family: &[FunctionRep<f64>],
    p: f64,
    q: f64,
    cfg: &SweepConfig,
) -> Result<NormReport> {
    let eval = eval_grid_of(op, cfg);
    let mut ratios = Vec::with_capacity(family.len());
    for (g, f) in gvals.iter().zip(family) {
        let num = lp_norm(g, &eval.weights, p)?;
        let den = lp_norm_of(f, p, eval)?;
        ratios.push(num / den);
    }
    NormReport::from_ratios(p, ratios, q < 2.0)
}

/// Level-set profile `lambda -> lambda * measure{x: g^q f(x) > lambda}` on
/// the given evaluation rule.
pub fn weak_type_profile(
    op: SweepOperator,
    q: f64,
    f: &FunctionRep<f64>,
    lambdas: &[f64],
    alpha: Option<f64>,
    eval: &quad::Rule<f64>,
    cfg: &SweepConfig,
) -> Result<WeakTypeProfile> {
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(domain("weak-type thresholds must be positive"));
    }
    let spec = ConeQuadratureSpec { q, ..cfg.cone };
    let g: Vec<f64> = match op {
        SweepOperator::AreaHermite => eval
            .nodes
            .par_iter()
            .map(|&x| area_g_value(f, x, &spec, BasisId::hermite()))
            .collect::<Result<_>>()?,
        SweepOperator::AreaLaguerre => {
            let alpha = alpha.ok_or_else(|| contract("Laguerre sweep needs alpha"))?;
            let basis = BasisId::laguerre(alpha)?;
            eval.nodes
                .par_iter()
                .map(|&x| area_g_value(f, x, &spec, basis))
                .collect::<Result<_>>()?
        }
        SweepOperator::AreaHalfLine => {
            let grid = match f {
                FunctionRep::Grid(g) if g.domain == Domain::HalfLine => g,
                _ => {
                    return Err(contract(
                        "the half-line operator profiles sampled half-line functions",
                    ))
                }
            };
            eval.nodes
                .par_iter()
                .map(|&x| area_g_halfline_value(grid, x, &spec))
                .collect::<Result<_>>()?
        }
    };
    let l1_norm = match f {
        FunctionRep::Grid(gf) => gf.lp_norm(1.0),
        FunctionRep::Spectral(_) => lp_norm(&sample_on(f, eval), &eval.weights, 1.0)?,
    };
    let products: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let measure: f64 = g
                .iter()
                .zip(&eval.weights)
                .filter(|(&gv, _)| gv > l)
                .map(|(_, &w)| w)
                .sum();
            l * measure
        })
        .collect();
    let sup = products.iter().cloned().fold(0.0, f64::max);
    Ok(WeakTypeProfile {
        lambdas: lambdas.to_vec(),
        products,
        l1_norm,
        sup_product_ratio: sup / l1_norm,
    })
}

/// Direct and reverse ratio statistics for the Laguerre area g-function.
#[derive(Debug, Clone)]
pub struct EquivalencePair {
    /// `||g^q f||_p / ||f||_p`.
    pub direct: NormReport,
    /// `||f||_p / ||g^q f||_p`.
    pub reverse: NormReport,
}

/// The reverse inequality and the two-sided equivalence: direct and reverse
/// ratios of the Laguerre area g-function.  The reverse statement covers
/// `1 < q <= 2`; other `q` are reported with the outside-hypothesis flag.
pub fn reverse_and_equivalence(
    q: f64,
    p: f64,
    alpha: f64,
    family: &[FunctionRep<f64>],
    cfg: &SweepConfig,
) -> Result<EquivalencePair> {
    let outside = !(q > 1.0 && q <= 2.0);
    let direct = boundedness_sweep(SweepOperator::AreaLaguerre, q, p, family, Some(alpha), cfg)?;
    let reverse_ratios = direct.ratios.iter().map(|r| 1.0 / r).collect();
    let reverse = NormReport::from_ratios(p, reverse_ratios, outside)?;
    let direct = NormReport {
        outside_hypothesis: outside || direct.outside_hypothesis,
        ..direct
    };
    Ok(EquivalencePair { direct, reverse })
}

/// Quadrature policy for the polarization identity.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationConfig {
    pub x_max: f64,
    /// Panels of eight Gauss-Legendre nodes for the outer x integral.
    pub n_x_panels: usize,
    pub cone: ConeQuadratureSpec<f64>,
}

impl PolarizationConfig {
    pub fn standard() -> Self {
        Self {
            x_max: 12.0,
            n_x_panels: 24,
            cone: ConeQuadratureSpec::standard(2.0),
        }
    }
}

/// Check `sum_n a_n b_n = 8 int int_{Gamma_+(x)} [s d/ds W^a_s f] [s d/ds
/// W^a_s h] dt dy / (t |J_t(y)|) dx` with `|J_t(y)| = min(2t, y + t)`.
pub fn polarization_check(
    a: &[f64],
    b: &[f64],
    alpha: f64,
    cfg: &PolarizationConfig,
) -> Result<PolarizationReport> {
    let basis = BasisId::laguerre(alpha)?;
    if a.is_empty() || b.is_empty() {
        return Err(contract("polarization needs nonempty coefficient vectors"));
    }
    let exact: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();

    let nmax = a.len().max(b.len()) - 1;
    let lam: Vec<f64> = (0..=nmax).map(|n| basis.eigenvalue(n)).collect();
    let pad = |v: &[f64]| {
        let mut out = v.to_vec();
        out.resize(nmax + 1, 0.0);
        out
    };
    let ca = pad(a);
    let cb = pad(b);

    let edges: Vec<f64> = (0..=cfg.n_x_panels)
        .map(|i| cfg.x_max * i as f64 / cfg.n_x_panels as f64)
        .collect();
    let x_rule = quad::gl_panels(&edges, 8);

    let spec = cfg.cone;
    let inner: Vec<f64> = x_rule
        .nodes
        .par_iter()
        .map(|&x| -> Result<f64> {
            let integ = ConeIntegrator::from_spec(&spec);
            let mut last_t = f64::NAN;
            let mut ma = vec![0.0; nmax + 1];
            let mut mb = vec![0.0; nmax + 1];
            let mut row: Vec<f64> = Vec::with_capacity(nmax + 1);
            let total = integ.integrate(
                |t, out| {
                    // half-line cone slice, split where |J_t(y)| switches
                    let lo = (x - t).max(0.0);
                    let hi = x + t;
                    if lo < t && t < hi {
                        out.push((lo, t));
                        out.push((t, hi));
                    } else {
                        out.push((lo, hi));
                    }
                },
                |y, t| {
                    if t != last_t {
                        last_t = t;
                        let s = t * t;
                        for n in 0..=nmax {
                            let m = -lam[n] * (-lam[n] * s).exp() * s;
                            ma[n] = m * ca[n];
                            mb[n] = m * cb[n];
                        }
                    }
                    basis
                        .evaluate_all_into(nmax, y, &mut row)
                        .expect("cone nodes stay positive");
                    let mut ua = 0.0;
                    let mut ub = 0.0;
                    for n in 0..=nmax {
                        ua += ma[n] * row[n];
                        ub += mb[n] * row[n];
                    }
                    let j_len = (2.0 * t).min(y + t);
                    ua * ub / (t * j_len)
                },
            );
            Ok(total)
        })
        .collect::<Result<_>>()?;

    let quadrature = 8.0
        * inner
            .iter()
            .zip(&x_rule.weights)
            .map(|(v, w)| v * w)
            .sum::<f64>();
    let rel_err = (quadrature - exact).abs() / exact.abs().max(1e-12);
    Ok(PolarizationReport {
        alpha,
        exact,
        quadrature,
        rel_err,
    })
}

/// Fit the constant of an inequality `LHS <= C * RHS`.
///
/// Samplers return `None` at points outside the inequality's region.  The
/// fitted constant is the max of `LHS/RHS` over the training grid; every
/// validation point must satisfy `LHS <= margin * C * RHS`.
pub fn envelope_fit<L, Rh>(
    inequality_id: &str,
    lhs: L,
    rhs: Rh,
    training: &[[f64; 3]],
    validation: &[[f64; 3]],
    margin: f64,
) -> Result<EnvelopeFitReport>
where
    L: Fn([f64; 3]) -> Option<f64> + Sync,
    Rh: Fn([f64; 3]) -> Option<f64> + Sync,
{
    let eval_points = |points: &[[f64; 3]]| -> Result<Vec<([f64; 3], f64, f64)>> {
        points
            .par_iter()
            .filter_map(|&pt| {
                let l = match lhs(pt) {
                    Some(l) => l,
                    None => return None,
                };
                let r = match rhs(pt) {
                    Some(r) => r,
                    None => return None,
                };
                // both sides underflowing to zero carries no information
                if l == 0.0 && r == 0.0 {
                    return None;
                }
                Some((pt, l, r))
            })
            .map(|(pt, l, r)| {
                if !(r > 0.0) {
                    return Err(Error::GridDesign(format!(
                        "{inequality_id}: RHS = {r} at ({}, {}, {})",
                        pt[0], pt[1], pt[2]
                    )));
                }
                Ok((pt, l, r))
            })
            .collect()
    };

    let train = eval_points(training)?;
    if train.is_empty() {
        return Err(Error::GridDesign(format!(
            "{inequality_id}: no training point falls inside the region"
        )));
    }
    let c_fit = train
        .iter()
        .map(|(_, l, r)| l / r)
        .fold(0.0_f64, f64::max);

    let val = eval_points(validation)?;
    let violations: Vec<Violation> = val
        .iter()
        .filter(|(_, l, r)| *l > margin * c_fit * r)
        .map(|&(point, lhs, rhs)| Violation { point, lhs, rhs })
        .collect();

    Ok(EnvelopeFitReport {
        inequality_id: inequality_id.to_string(),
        c_fit,
        margin,
        n_training: train.len(),
        n_validation: val.len(),
        violations,
    })
}

/// Default fit margin on validation grids.
pub const FIT_MARGIN: f64 = 2.0;

fn lattice(lo: f64, hi: f64, step: f64, offset: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut v = lo + offset;
    while v <= hi + 1e-12 {
        out.push(v);
        v += step;
    }
    out
}

fn s_grid() -> Vec<f64> {
    quad::log_spaced(0.01, 4.0, 16)
}

/// Pointwise grids `(a, b, s)`: lattice x lattice x 16 log-spaced times.
fn pointwise_grid(lo: f64, hi: f64, offset: f64) -> Vec<[f64; 3]> {
    let xs = lattice(lo, hi, 0.5, offset);
    let ss = s_grid();
    let mut out = Vec::with_capacity(xs.len() * xs.len() * ss.len());
    for &a in &xs {
        for &b in &xs {
            for &s in &ss {
                out.push([a, b, s]);
            }
        }
    }
    out
}

/// Pair grids `(x, z, 0)` for the cone-norm inequalities, with an optional
/// diagonal exclusion `|x - z| >= 0.2`.
fn pair_grid(offset: f64, exclude_diagonal: bool) -> Vec<[f64; 3]> {
    let xs = lattice(0.2, 6.0, 0.5, offset);
    let mut out = Vec::new();
    for &x in &xs {
        for &z in &xs {
            if exclude_diagonal && (x - z).abs() < 0.2 - 1e-12 {
                continue;
            }
            out.push([x, z, 0.0]);
        }
    }
    out
}

/// The full envelope-fit suite: the pointwise derivative bounds, the cone
/// norm estimates, and the dyadic-band and far-field majorants, one report
/// per inequality (per `alpha` where the inequality depends on it).
pub fn envelope_suite(alphas: &[f64], cfg: &SweepConfig) -> Result<Vec<EnvelopeFitReport>> {
    let mut reports = Vec::new();
    let q = 2.0;
    let spec = cfg.cone;

    // pointwise bound on the time derivative of the Hermite kernel
    let train = pointwise_grid(-4.0, 4.0, 0.0);
    let val = pointwise_grid(-4.0, 4.0, 0.25);
    reports.push(envelope_fit(
        "hermite-ds-pointwise",
        |p| hermite_heat_kernel_ds(p[0], p[1], p[2]).ok().map(f64::abs),
        |p| envelope(EnvelopeId::HermiteDs, p[0], p[1], p[2], None).ok(),
        &train,
        &val,
        FIT_MARGIN,
    )?);

    // pointwise bound on the mixed derivative
    reports.push(envelope_fit(
        "hermite-mixed-pointwise",
        |p| kernels::hermite_heat_kernel_dyds(p[0], p[1], p[2]).ok().map(f64::abs),
        |p| envelope(EnvelopeId::HermiteMixed, p[0], p[1], p[2], None).ok(),
        &train,
        &val,
        FIT_MARGIN,
    )?);

    let htrain = pointwise_grid(0.2, 6.0, 0.0);
    let hval = pointwise_grid(0.2, 6.0, 0.25);
    for &alpha in alphas {
        // small Bessel-argument bound on the Laguerre derivative
        reports.push(envelope_fit(
            &format!("laguerre-ds-small[alpha={alpha}]"),
            |p| {
                (bessel_region_ratio(p[0], p[1], p[2]) <= 1.0)
                    .then(|| laguerre_heat_kernel_ds(p[0], p[1], p[2], alpha).unwrap().abs())
            },
            |p| envelope(EnvelopeId::LaguerreSmall, p[0], p[1], p[2], Some(alpha)).ok(),
            &htrain,
            &hval,
            FIT_MARGIN,
        )?);

        // large Bessel-argument bound
        reports.push(envelope_fit(
            &format!("laguerre-ds-large[alpha={alpha}]"),
            |p| {
                (bessel_region_ratio(p[0], p[1], p[2]) >= 1.0)
                    .then(|| laguerre_heat_kernel_ds(p[0], p[1], p[2], alpha).unwrap().abs())
            },
            |p| envelope(EnvelopeId::LaguerreLarge, p[0], p[1], p[2], None).ok(),
            &htrain,
            &hval,
            FIT_MARGIN,
        )?);

        // difference of the two kernels in the large-argument region
        reports.push(envelope_fit(
            &format!("difference-pointwise[alpha={alpha}]"),
            |p| {
                (bessel_region_ratio(p[0], p[1], p[2]) >= 1.0).then(|| {
                    (laguerre_heat_kernel_ds(p[0], p[1], p[2], alpha).unwrap()
                        - hermite_heat_kernel_ds(p[0], p[1], p[2]).unwrap())
                    .abs()
                })
            },
            |p| envelope(EnvelopeId::Difference, p[0], p[1], p[2], None).ok(),
            &htrain,
            &hval,
            FIT_MARGIN,
        )?);
    }

    // cone norm of the Hermite derivative kernel against 1/|x-z|
    let ptrain = pair_grid(0.0, true);
    let pval = pair_grid(0.25, true);
    reports.push(envelope_fit(
        "hermite-ds-cone",
        |p| kernel_cone_norm(p[0], p[1], q, &spec, ConeNormVariant::HermiteDs, None).ok(),
        |p| Some(1.0 / (p[0] - p[1]).abs()),
        &ptrain,
        &pval,
        FIT_MARGIN,
    )?);

    // cone norm of the mixed derivative against 1/|x-z|^2
    reports.push(envelope_fit(
        "hermite-mixed-cone",
        |p| kernel_cone_norm(p[0], p[1], q, &spec, ConeNormVariant::HermiteMixed, None).ok(),
        |p| Some(1.0 / (p[0] - p[1]).powi(2)),
        &ptrain,
        &pval,
        FIT_MARGIN,
    )?);

    let ftrain = pair_grid(0.0, false);
    let fval = pair_grid(0.25, false);
    for &alpha in alphas {
        // far-field bound on the Laguerre cone norm: 1/x left, 1/z right
        reports.push(envelope_fit(
            &format!("laguerre-cone-farfield[alpha={alpha}]"),
            |p| {
                let (x, z) = (p[0], p[1]);
                (z < x / 2.0 || z > 2.0 * x).then(|| {
                    kernel_cone_norm(x, z, q, &spec, ConeNormVariant::LaguerreFull, Some(alpha))
                        .unwrap()
                })
            },
            |p| {
                let (x, z) = (p[0], p[1]);
                if z < x / 2.0 {
                    Some(1.0 / x)
                } else if z > 2.0 * x {
                    Some(1.0 / z)
                } else {
                    None
                }
            },
            &ftrain,
            &fval,
            FIT_MARGIN,
        )?);

        // small-region cone norm against z^{a+1/2}/(x+z)^{a+3/2}
        reports.push(envelope_fit(
            &format!("laguerre-cone-small[alpha={alpha}]"),
            |p| {
                kernel_cone_norm(p[0], p[1], q, &spec, ConeNormVariant::LaguerreSmall, Some(alpha))
                    .ok()
            },
            |p| Some(p[1].powf(alpha + 0.5) / (p[0] + p[1]).powf(alpha + 1.5)),
            &ftrain,
            &fval,
            FIT_MARGIN,
        )?);

        // large-region cone norm against max^2/|x-z|^3
        reports.push(envelope_fit(
            &format!("laguerre-cone-large[alpha={alpha}]"),
            |p| {
                kernel_cone_norm(p[0], p[1], q, &spec, ConeNormVariant::LaguerreLarge, Some(alpha))
                    .ok()
            },
            |p| Some(p[0].max(p[1]).powi(2) / (p[0] - p[1]).abs().powi(3)),
            &ptrain,
            &pval,
            FIT_MARGIN,
        )?);

        // dyadic band: the difference kernel against (1/z)(1 + sqrt(z/|x-z|))
        reports.push(envelope_fit(
            &format!("difference-cone-band[alpha={alpha}]"),
            |p| {
                let (x, z) = (p[0], p[1]);
                (z > x / 2.0 && z < 2.0 * x).then(|| {
                    kernel_cone_norm(x, z, q, &spec, ConeNormVariant::Difference, Some(alpha))
                        .unwrap()
                })
            },
            |p| {
                let (x, z) = (p[0], p[1]);
                Some((1.0 + (z / (x - z).abs()).sqrt()) / z)
            },
            &ptrain,
            &pval,
            FIT_MARGIN,
        )?);

        // far-left bound on the large-region norm: z^{a+1/2}/x^{a+3/2}
        reports.push(envelope_fit(
            &format!("laguerre-cone-large-farleft[alpha={alpha}]"),
            |p| {
                let (x, z) = (p[0], p[1]);
                (z < x / 2.0).then(|| {
                    kernel_cone_norm(x, z, 2.0, &spec, ConeNormVariant::LaguerreLarge, Some(alpha))
                        .unwrap()
                })
            },
            |p| Some(p[1].powf(alpha + 0.5) / p[0].powf(alpha + 1.5)),
            &ftrain,
            &fval,
            FIT_MARGIN,
        )?);
    }

    // odd-reflected difference kernel far left of the diagonal: z/x^2
    reports.push(envelope_fit(
        "oddreflected-cone-farleft",
        |p| {
            let (x, z) = (p[0], p[1]);
            (z < x / 2.0).then(|| {
                kernel_cone_norm(x, z, 2.0, &spec, ConeNormVariant::OddReflected, None).unwrap()
            })
        },
        |p| Some(p[1] / (p[0] * p[0])),
        &ftrain,
        &fval,
        FIT_MARGIN,
    )?);

    Ok(reports)
}

/// The three Hardy-type operators the transference argument reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyOperator {
    /// `H_0 f(x) = (1/x) int_0^x f`.
    Averaging,
    /// `H_inf f(x) = int_x^inf f(z)/z dz`.
    DualAveraging,
    /// `B f(x) = int_{x/2}^{2x} (1/z)(1 + sqrt(z/|z-x|)) f(z) dz`.
    LocalBand,
}

/// `(1/x) int_0^x f`, with panels split at the interior `edges`.
pub fn hardy_avg<F: Fn(f64) -> f64>(f: &F, x: f64, edges: &[f64]) -> f64 {
    let mut cuts = vec![0.0];
    cuts.extend(edges.iter().copied().filter(|&e| e > 0.0 && e < x));
    cuts.push(x);
    let rule = quad::gl_panels(&cuts, 32);
    rule.integrate(f) / x
}

/// `int_x^upper f(z)/z dz`, with panels split at the interior `edges`.
pub fn hardy_dual<F: Fn(f64) -> f64>(f: &F, x: f64, upper: f64, edges: &[f64]) -> f64 {
    if upper <= x {
        return 0.0;
    }
    let mut cuts = vec![x];
    cuts.extend(edges.iter().copied().filter(|&e| e > x && e < upper));
    cuts.push(upper);
    let rule = quad::gl_panels(&cuts, 32);
    rule.integrate(|z| f(z) / z)
}

/// The dyadic-band operator with the square-root singular kernel; the
/// substitutions `z = x(1 - w^2/2)` and `z = x(1 + w^2)` make both sides
/// smooth.
pub fn hardy_band<F: Fn(f64) -> f64>(f: &F, x: f64) -> f64 {
    let base = quad::gl_on(0.0, 1.0, 48);
    let left = base.integrate(|w| {
        let z = x * (1.0 - w * w / 2.0);
        (1.0 + (z / (x - z)).sqrt()) / z * f(z) * x * w
    });
    let right = base.integrate(|w| {
        let z = x * (1.0 + w * w);
        (1.0 + (z / (z - x)).sqrt()) / z * f(z) * 2.0 * x * w
    });
    left + right
}

/// Ratio statistics of one Hardy operator over a family of closures.
pub fn hardy_boundedness(
    op: HardyOperator,
    p: f64,
    family: &[Box<dyn Fn(f64) -> f64 + Sync>],
    x_rule: &quad::Rule<f64>,
    upper: f64,
) -> Result<NormReport> {
    match op {
        HardyOperator::Averaging | HardyOperator::DualAveraging => {
            if !(p > 1.0) || !p.is_finite() {
                return Err(domain("the averaging Hardy operators need 1 < p < inf"));
            }
        }
        HardyOperator::LocalBand => {
            if !(p >= 1.0) {
                return Err(domain("the band operator needs p >= 1"));
            }
        }
    }
    let mut ratios = Vec::with_capacity(family.len());
    for f in family {
        let tf: Vec<f64> = x_rule
            .nodes
            .par_iter()
            .map(|&x| match op {
                HardyOperator::Averaging => hardy_avg(f, x, &[]),
                HardyOperator::DualAveraging => hardy_dual(f, x, upper, &[]),
                HardyOperator::LocalBand => hardy_band(f, x),
            })
            .collect();
        let fv: Vec<f64> = x_rule.nodes.iter().map(|&x| f(x)).collect();
        let num = lp_norm(&tf, &x_rule.weights, p)?;
        let den = lp_norm(&fv, &x_rule.weights, p)?;
        ratios.push(num / den);
    }
    NormReport::from_ratios(p, ratios, false)
}

/// `||sup_t W_t^alpha f||_1` against `||f||_1 + ||g^2 f||_1`.
pub fn h1_diagnostic(f: &GridFunction<f64>, alpha: f64, cfg: &SweepConfig) -> Result<H1Diagnostic> {
    let basis = BasisId::laguerre(alpha)?;
    if f.domain != Domain::HalfLine {
        return Err(contract("the H^1 diagnostic takes half-line functions"));
    }
    let t_grid = default_t_grid::<f64>();
    let maximal: Vec<f64> = cfg
        .halfline_eval
        .nodes
        .par_iter()
        .map(|&x| maximal_heat(f, basis, x, &t_grid))
        .collect::<Result<_>>()?;
    let maximal_l1 = lp_norm(&maximal, &cfg.halfline_eval.weights, 1.0)?;

    let l1 = f.lp_norm(1.0);
    // the g-function of the sampled input through its expansion (the routes
    // agree to quadrature accuracy; the spectral one is exact in time)
    let rep = FunctionRep::Spectral(expand(f, basis, 16)?);
    let spec = ConeQuadratureSpec { q: 2.0, ..cfg.cone };
    let g: Vec<f64> = cfg
        .halfline_eval
        .nodes
        .par_iter()
        .map(|&x| area_g_value(&rep, x, &spec, basis))
        .collect::<Result<_>>()?;
    let g_l1 = lp_norm(&g, &cfg.halfline_eval.weights, 1.0)?;

    let denom = l1 + g_l1;
    Ok(H1Diagnostic {
        maximal_l1,
        l1_plus_g_l1: denom,
        ratio: (denom > 0.0 || maximal_l1 > 0.0).then(|| maximal_l1 / denom),
    })
}

// ---------------------------------------------------------------------------
// test families

/// Seed-pinned random unit-L2 vectors in the span of the first `n_terms`
/// basis functions.
pub fn random_family(
    basis: BasisId<f64>,
    n_terms: usize,
    count: usize,
    seed: u64,
) -> Vec<SpectralExpansion<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coeffs: Vec<f64> = (0..n_terms).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            SpectralExpansion::new(basis, coeffs).normalized()
        })
        .collect()
}

/// The first `count` basis functions as expansions.
pub fn eigen_family(basis: BasisId<f64>, count: usize) -> Vec<SpectralExpansion<f64>> {
    (0..count).map(|n| SpectralExpansion::unit(basis, n)).collect()
}

/// Random expansions with positive coefficients bounded away from zero.
pub fn positive_family(
    basis: BasisId<f64>,
    n_terms: usize,
    count: usize,
    seed: u64,
) -> Vec<SpectralExpansion<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coeffs: Vec<f64> = (0..n_terms).map(|_| rng.gen_range(0.1..=1.0)).collect();
            SpectralExpansion::new(basis, coeffs).normalized()
        })
        .collect()
}

/// Unit-L1-mass Gaussian bump of the given width, sampled on a composite
/// line grid fine enough to resolve it.
pub fn gaussian_bump(width: f64) -> GridFunction<f64> {
    let edges = [-10.0, -2.0, -0.5, -0.1, 0.1, 0.5, 2.0, 10.0];
    let norm = width * (2.0 * std::f64::consts::PI).sqrt();
    GridFunction::sample_line_panels(&edges, 64, move |x| {
        (-x * x / (2.0 * width * width)).exp() / norm
    })
}

/// Evaluation rule matched to the bump family (fine near the origin).
pub fn bump_eval_rule() -> quad::Rule<f64> {
    let edges = [-10.0, -2.0, -0.5, -0.1, 0.1, 0.5, 2.0, 10.0];
    quad::gl_panels(&edges, 64)
}

// ---------------------------------------------------------------------------
// consistency checks shared by the CLI and the acceptance suite

/// Max absolute gap between the closed Hermite kernel and its truncated
/// eigen-series on the standard grid.
pub fn mehler_hermite_max_err(nmax: usize) -> f64 {
    let xs: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
    let ts = [0.1, 0.5, 1.0, 2.0];
    let mut worst = 0.0_f64;
    for &x in &xs {
        let hx = hermite_function_all(nmax, x);
        for &y in &xs {
            let hy = hermite_function_all(nmax, y);
            for &t in &ts {
                let series: f64 = (0..=nmax)
                    .map(|n| (-(n as f64 + 0.5) * t).exp() * hx[n] * hy[n])
                    .sum();
                let closed = hermite_heat_kernel(x, y, t).unwrap();
                worst = worst.max((closed - series).abs());
            }
        }
    }
    worst
}

/// Laguerre analogue on the positive part of the grid.
pub fn mehler_laguerre_max_err(nmax: usize, alphas: &[f64]) -> Result<f64> {
    let xs = [1.0, 2.0, 3.0, 4.0];
    let ts = [0.1, 0.5, 1.0, 2.0];
    let mut worst = 0.0_f64;
    for &alpha in alphas {
        for &x in &xs {
            let px = laguerre_function_all(nmax, alpha, x)?;
            for &y in &xs {
                let py = laguerre_function_all(nmax, alpha, y)?;
                for &t in &ts {
                    let series: f64 = (0..=nmax)
                        .map(|n| (-(2.0 * n as f64 + alpha + 1.0) * t).exp() * px[n] * py[n])
                        .sum();
                    let closed = laguerre_heat_kernel(x, y, t, alpha)?;
                    worst = worst.max((closed - series).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Max relative error of the two analytic s-derivative formulas against
/// central finite differences on the standard grids (absolute error is used
/// where the derivative nearly vanishes).
pub fn derivative_formula_max_rel_err(alphas: &[f64]) -> Result<f64> {
    // Step chosen so the h^2 truncation stays below 1e-5 even deep in the
    // Gaussian tail, where the log-derivatives in s are steep; the kernel
    // values are smooth enough that round-off stays orders below that.
    let h = 2e-5;
    let ts = [0.1, 0.5, 1.0, 2.0];
    let mut worst = 0.0_f64;
    let xs: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
    for &x in &xs {
        for &y in &xs {
            for &s in &ts {
                let fd = (hermite_heat_kernel(x, y, s + h)? - hermite_heat_kernel(x, y, s - h)?)
                    / (2.0 * h);
                let got = hermite_heat_kernel_ds(x, y, s)?;
                if fd.abs() < 1e-10 {
                    worst = worst.max((got - fd).abs() / 1e-9 * 1e-5);
                } else {
                    worst = worst.max(((got - fd) / fd).abs());
                }
            }
        }
    }
    let pos = [1.0, 2.0, 3.0, 4.0];
    for &alpha in alphas {
        for &y in &pos {
            for &z in &pos {
                for &s in &ts {
                    let fd = (laguerre_heat_kernel(y, z, s + h, alpha)?
                        - laguerre_heat_kernel(y, z, s - h, alpha)?)
                        / (2.0 * h);
                    let got = laguerre_heat_kernel_ds(y, z, s, alpha)?;
                    if fd.abs() < 1e-10 {
                        worst = worst.max((got - fd).abs() / 1e-9 * 1e-5);
                    } else {
                        worst = worst.max(((got - fd) / fd).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Max absolute gap of `W^{1/2}_t(x,y) = W_t(x,y) - W_t(x,-y)`.
pub fn half_integer_max_err() -> f64 {
    let xs: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
    let ts = [0.1, 0.5, 1.0];
    let mut worst = 0.0_f64;
    for &x in &xs {
        for &y in &xs {
            for &t in &ts {
                let lhs = laguerre_heat_kernel(x, y, t, 0.5).unwrap();
                let rhs = hermite_heat_kernel(x, y, t).unwrap()
                    - hermite_heat_kernel(x, -y, t).unwrap();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

/// Max relative deviation of `||g^2 f||_2` from `||f||_2 / 2` over a family
/// of line expansions.
pub fn l2_isometry_max_dev(family: &[SpectralExpansion<f64>], cfg: &SweepConfig) -> Result<f64> {
    let spec = ConeQuadratureSpec { q: 2.0, ..cfg.cone };
    let basis = BasisId::hermite();
    let mut worst = 0.0_f64;
    for e in family {
        let f = FunctionRep::Spectral(e.clone());
        let g: Vec<f64> = cfg
            .line_eval
            .nodes
            .par_iter()
            .map(|&x| area_g_value(&f, x, &spec, basis))
            .collect::<Result<_>>()?;
        let norm = lp_norm(&g, &cfg.line_eval.weights, 2.0)?;
        let l2 = e.l2_norm();
        worst = worst.max((norm - 0.5 * l2).abs() / l2);
    }
    Ok(worst)
}

/// `|int d/ds W_s(0, y) dy|` at `s = 1` (the heat semigroup is not
/// conservative; the integral stays away from zero).
pub fn non_conservation_value() -> f64 {
    let rule = quad::gl_on(-10.0_f64, 10.0, 512);
    rule.integrate(|y| kernels::hermite_ds_unchecked(0.0, y, 1.0)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre_function;

    fn small_cfg() -> SweepConfig {
        SweepConfig {
            cone: ConeQuadratureSpec {
                n_t: 48,
                n_y: 16,
                ..ConeQuadratureSpec::standard(2.0)
            },
            line_eval: quad::gl_on(-8.0, 8.0, 96),
            halfline_eval: quad::halfline_rule(10.0, 96),
            halfline_sample: (12.0, 180),
        }
    }

    #[test]
    fn lp_norm_basics() {
        let f = GridFunction::default_line(|x| crate::specfun::hermite_function(0, x));
        let n = lp_norm(&f.values, &f.weights, 2.0).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
        assert_eq!(lp_norm(&[0.0, 0.0], &[1.0, 1.0], 3.0).unwrap(), 0.0);
        assert!(lp_norm(&[1.0], &[1.0], 0.5).is_err());

        let basis = BasisId::laguerre(0.5).unwrap();
        let g = GridFunction::default_halfline(|x| {
            laguerre_function(0, 0.5, x).unwrap() + laguerre_function(1, 0.5, x).unwrap()
        });
        let n = lp_norm(&g.values, &g.weights, 2.0).unwrap();
        assert!((n - 2.0_f64.sqrt()).abs() < 1e-9, "{n}");
        let _ = basis;
    }

    #[test]
    fn hermite_eigenfunction_ratios_are_one_half() {
        let cfg = small_cfg();
        let family: Vec<FunctionRep<f64>> = eigen_family(BasisId::hermite(), 4)
            .into_iter()
            .map(FunctionRep::Spectral)
            .collect();
        let report =
            boundedness_sweep(SweepOperator::AreaHermite, 2.0, 2.0, &family, None, &cfg).unwrap();
        for r in &report.ratios {
            assert!((r - 0.5).abs() < 1e-4, "ratio {r}");
        }
        assert!(!report.outside_hypothesis);

        let below =
            boundedness_sweep(SweepOperator::AreaHermite, 1.5, 2.0, &family[..1], None, &cfg)
                .unwrap();
        assert!(below.outside_hypothesis);
    }

    #[test]
    fn ratio_reports_are_scale_invariant() {
        let cfg = small_cfg();
        let base = SpectralExpansion::new(BasisId::hermite(), vec![0.3, -0.4, 0.85]);
        let scaled = SpectralExpansion::new(BasisId::hermite(), vec![0.6, -0.8, 1.7]);
        let fam = vec![
            FunctionRep::Spectral(base),
            FunctionRep::Spectral(scaled),
        ];
        let report =
            boundedness_sweep(SweepOperator::AreaHermite, 2.0, 4.0, &fam, None, &cfg).unwrap();
        assert!(
            ((report.ratios[0] - report.ratios[1]) / report.ratios[0]).abs() < 1e-12,
            "{:?}",
            report.ratios
        );
    }

    #[test]
    fn laguerre_eigenfunction_ratios_clip_toward_one_half() {
        let cfg = small_cfg();
        let basis = BasisId::laguerre(0.5).unwrap();
        let family: Vec<FunctionRep<f64>> = eigen_family(basis, 4)
            .into_iter()
            .map(FunctionRep::Spectral)
            .collect();
        let report =
            boundedness_sweep(SweepOperator::AreaLaguerre, 2.0, 2.0, &family, Some(0.5), &cfg)
                .unwrap();
        for r in &report.ratios {
            assert!(*r > 0.4 && *r <= 0.5 + 1e-3, "ratio {r}");
        }
    }

    #[test]
    fn weak_type_products_behave() {
        let cfg = small_cfg();
        let f = FunctionRep::Grid(gaussian_bump(0.1));
        let eval = bump_eval_rule();
        let lambdas = quad::log_spaced(1e-2, 1e3, 24);
        let profile = weak_type_profile(
            SweepOperator::AreaHermite,
            2.0,
            &f,
            &lambdas,
            None,
            &eval,
            &cfg,
        )
        .unwrap();
        assert!((profile.l1_norm - 1.0).abs() < 1e-8, "{}", profile.l1_norm);
        assert!(profile.sup_product_ratio.is_finite() && profile.sup_product_ratio > 0.0);
        // products vanish for thresholds above the max
        assert_eq!(*profile.products.last().unwrap(), 0.0);

        let zero = FunctionRep::Grid(GridFunction::sample_line(-1.0, 1.0, 32, |_| 0.0));
        let profile = weak_type_profile(
            SweepOperator::AreaHermite,
            2.0,
            &zero,
            &lambdas,
            None,
            &eval,
            &cfg,
        )
        .unwrap();
        assert!(profile.products.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn report_csv_adapters_have_one_row_per_item() {
        let report = NormReport::from_ratios(2.0, vec![0.5, 0.49, 0.51], false).unwrap();
        let text = report.to_csv("area-hermite", 2.0).render();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
        assert!(text.contains("# operator=area-hermite"));

        let profile = WeakTypeProfile {
            lambdas: vec![0.1, 1.0],
            products: vec![0.3, 0.0],
            l1_norm: 1.0,
            sup_product_ratio: 0.3,
        };
        let text = profile.to_csv("area-hermite", 2.0).render();
        assert!(text.contains("lambda,product"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);

        let fit = EnvelopeFitReport {
            inequality_id: "demo".into(),
            c_fit: 1.0,
            margin: 2.0,
            n_training: 10,
            n_validation: 10,
            violations: vec![],
        };
        assert!(fit.to_csv().render().contains("# pass=true"));
    }

    #[test]
    fn weak_type_supports_the_halfline_operator() {
        let cfg = SweepConfig {
            cone: ConeQuadratureSpec {
                n_t: 24,
                n_y: 8,
                ..ConeQuadratureSpec::standard(2.0)
            },
            halfline_eval: quad::halfline_rule(8.0, 24),
            ..small_cfg()
        };
        let f = FunctionRep::Grid(GridFunction::sample_halfline(8.0, 96, |x| {
            laguerre_function(0, 0.5, x).unwrap()
        }));
        let lambdas = [0.01, 0.1, 1.0];
        let eval = quad::halfline_rule(8.0, 24);
        let profile = weak_type_profile(
            SweepOperator::AreaHalfLine,
            2.0,
            &f,
            &lambdas,
            None,
            &eval,
            &cfg,
        )
        .unwrap();
        assert!(profile.sup_product_ratio.is_finite() && profile.sup_product_ratio > 0.0);

        // spectral input is rejected: the operator integrates samples
        let s = FunctionRep::Spectral(SpectralExpansion::unit(
            BasisId::laguerre(0.5).unwrap(),
            0,
        ));
        assert!(weak_type_profile(
            SweepOperator::AreaHalfLine,
            2.0,
            &s,
            &lambdas,
            None,
            &eval,
            &cfg
        )
        .is_err());
    }

    #[test]
    fn polarization_unit_and_orthogonal_cases() {
        let cfg = PolarizationConfig::standard();
        // a = b = e_0: exact 1
        let r = polarization_check(&[1.0], &[1.0], 0.5, &cfg).unwrap();
        assert!(r.rel_err <= 1e-3, "unit case rel_err {}", r.rel_err);
        assert_eq!(r.exact, 1.0);

        // orthogonal pair: exact 0
        let r = polarization_check(&[0.0, 1.0], &[0.0, 0.0, 1.0], 0.5, &cfg).unwrap();
        assert_eq!(r.exact, 0.0);
        assert!(r.quadrature.abs() <= 1e-4, "orthogonal case {}", r.quadrature);
    }

    #[test]
    fn polarization_mixed_pair() {
        let cfg = PolarizationConfig::standard();
        let s6 = 6.0_f64.sqrt();
        let s2 = 2.0_f64.sqrt();
        let a = [1.0 / s6, 2.0 / s6, 0.0, -1.0 / s6];
        let b = [0.0, 1.0 / s2, 1.0 / s2, 0.0];
        let r = polarization_check(&a, &b, 0.5, &cfg).unwrap();
        let want = 2.0 / 12.0_f64.sqrt();
        assert!((r.exact - want).abs() < 1e-15);
        assert!(r.rel_err <= 1e-3, "rel_err {}", r.rel_err);
    }

    #[test]
    fn envelope_fit_degenerate_and_errors() {
        let train = [[1.0, 1.0, 0.5], [2.0, 1.0, 0.5]];
        let val = [[1.5, 1.0, 0.5]];
        // zero LHS: c_fit = 0 and no violations
        let r = envelope_fit("zero", |_| Some(0.0), |_| Some(1.0), &train, &val, 2.0).unwrap();
        assert_eq!(r.c_fit, 0.0);
        assert!(r.passed());

        // RHS = 0 at a sampled point is a grid-design error
        assert!(envelope_fit("bad", |_| Some(1.0), |_| Some(0.0), &train, &val, 2.0).is_err());

        // empty region is a grid-design error
        assert!(envelope_fit("empty", |_| None::<f64>, |_| Some(1.0), &train, &val, 2.0).is_err());

        // a genuine violation is caught
        let r = envelope_fit(
            "viol",
            |p| Some(if p[0] > 1.4 { 10.0 } else { 1.0 }),
            |_| Some(1.0),
            &[[1.0, 1.0, 0.5]],
            &val,
            2.0,
        )
        .unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn hardy_averaging_matches_indicator_closed_form() {
        // f = 1 on (0, 1]: H_0 f(x) = 1 for x <= 1, 1/x beyond
        let f = |z: f64| if z <= 1.0 { 1.0 } else { 0.0 };
        for &x in &[0.5_f64, 1.0] {
            let got = hardy_avg(&f, x, &[1.0]);
            assert!((got - 1.0).abs() < 1e-12, "x={x}: {got}");
        }
        for &x in &[2.0_f64, 5.0] {
            let got = hardy_avg(&f, x, &[1.0]);
            assert!((got - 1.0 / x).abs() < 1e-12, "x={x}: {got}");
        }
        // dual operator on the same indicator: int_x^1 dz/z = -ln x
        let got = hardy_dual(&f, 0.25, 40.0, &[1.0]);
        assert!((got - 4.0_f64.ln()).abs() < 1e-10, "{got}");
    }

    #[test]
    fn band_operator_is_scale_invariant_on_constants() {
        let one = |_: f64| 1.0;
        let a = hardy_band(&one, 1.0);
        let b = hardy_band(&one, 7.0);
        assert!(((a - b) / a).abs() < 1e-12);
        assert!((a - 4.719_837_861_953_873).abs() < 1e-9, "{a}");
    }

    #[test]
    fn hardy_sweep_has_stable_finite_ratios() {
        let draw_family = |seed: u64| -> Vec<Box<dyn Fn(f64) -> f64 + Sync>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..30)
                .map(|_| {
                    let c1: f64 = rng.gen_range(0.2..1.0);
                    let mu: f64 = rng.gen_range(0.5..3.0);
                    let s: f64 = rng.gen_range(0.3..1.0);
                    Box::new(move |x: f64| c1 * (-(x - mu) * (x - mu) / (2.0 * s * s)).exp())
                        as Box<dyn Fn(f64) -> f64 + Sync>
                })
                .collect()
        };
        let fam_a = draw_family(7);
        let fam_b = draw_family(8);
        let x_rule = quad::halfline_rule(40.0, 128);
        for op in [
            HardyOperator::Averaging,
            HardyOperator::DualAveraging,
            HardyOperator::LocalBand,
        ] {
            let ra = hardy_boundedness(op, 2.0, &fam_a, &x_rule, 40.0).unwrap();
            let rb = hardy_boundedness(op, 2.0, &fam_b, &x_rule, 40.0).unwrap();
            assert!(ra.sup_ratio.is_finite() && ra.sup_ratio > 0.0);
            assert!(ra.sup_ratio < 50.0, "{op:?}: {}", ra.sup_ratio);
            let drift = (ra.sup_ratio - rb.sup_ratio).abs() / ra.sup_ratio;
            assert!(drift < 0.5, "{op:?}: unstable under resampling ({drift})");
        }
        assert!(hardy_boundedness(HardyOperator::Averaging, 1.0, &fam_a, &x_rule, 40.0).is_err());
    }

    #[test]
    fn h1_diagnostic_on_the_ground_state() {
        let cfg = small_cfg();
        let f = GridFunction::default_halfline(|x| laguerre_function(0, 0.5, x).unwrap());
        let d = h1_diagnostic(&f, 0.5, &cfg).unwrap();
        assert!(d.maximal_l1.is_finite() && d.maximal_l1 > 0.0);
        assert!(d.l1_plus_g_l1 > 0.0);
        let r = d.ratio.unwrap();
        assert!(r > 0.0 && r.is_finite(), "ratio {r}");

        let zero = GridFunction::sample_halfline(5.0, 64, |_| 0.0);
        let d = h1_diagnostic(&zero, 0.5, &cfg).unwrap();
        assert!(d.ratio.is_none());
        assert_eq!(d.maximal_l1, 0.0);
    }

    #[test]
    fn families_are_seeded_and_normalized() {
        let a = random_family(BasisId::hermite(), 16, 5, 42);
        let b = random_family(BasisId::hermite(), 16, 5, 42);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.coeffs, y.coeffs);
        }
        for e in &a {
            assert!((e.l2_norm() - 1.0).abs() < 1e-12);
        }
        let c = random_family(BasisId::hermite(), 16, 5, 43);
        assert_ne!(a[0].coeffs, c[0].coeffs);

        for e in positive_family(BasisId::hermite(), 8, 4, 1) {
            assert!(e.coeffs.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn non_conservation_integral_is_visibly_nonzero() {
        let v = non_conservation_value();
        assert!(v > 1e-6, "integral {v}");
        // order of magnitude pinned by the leading eigenfunction term
        assert!(v > 0.1 && v < 1.0, "integral {v}");
    }
}
