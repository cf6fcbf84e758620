//! Quadrature over parabolic cones: the area g-functions, the vertical
//! g-function, and the cone norms of fixed kernel slices that back the
//! Calderon-Zygmund style estimates.
//!
//! The cone `Gamma(x) = {(y, t): |x - y| < t}` carries the weight
//! `dt dy / t^2`; the integrand is `|s d/ds W_s f(y)|^q` evaluated at
//! `s = t^2`.  Times are integrated by a composite Gauss-Legendre rule with
//! panels equally spaced in `log t`; each time slice is integrated by
//! Gauss-Legendre in `y`.

use crate::error::{contract, domain, Error, Result};
use crate::kernels;
use crate::quad;
use crate::real::Real;
use crate::semigroup::{apply_heat_ds, FunctionRep, GridFunction};
use crate::specfun::{BasisId, Domain};

/// Truncation and node-count policy for cone integrals.
#[derive(Debug, Clone, Copy)]
pub struct ConeQuadratureSpec<R> {
    pub t_min: R,
    pub t_max: R,
    /// Total log-spaced time nodes.
    pub n_t: usize,
    /// Gauss-Legendre nodes per time slice.
    pub n_y: usize,
    /// The exponent of the cone norm.
    pub q: R,
}

impl<R: Real> ConeQuadratureSpec<R> {
    /// The default policy: `t` in [1e-3, 6] with 96 nodes, 32 nodes per
    /// slice.  The substitution `s = t^2` makes the integrand decay like
    /// `e^{-c t^2}` at the top and vanish algebraically at the apex, so the
    /// log spacing resolves both ends.
    pub fn standard(q: R) -> Self {
        Self {
            t_min: R::of(1e-3),
            t_max: R::of(6.0),
            n_t: 96,
            n_y: 32,
            q,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > R::zero() && self.t_max > self.t_min) {
            return Err(contract("cone spec needs 0 < t_min < t_max"));
        }
        if self.n_t < 8 || self.n_y < 8 {
            return Err(contract("cone spec needs n_t, n_y >= 8"));
        }
        if !(self.q > R::one()) {
            return Err(contract("cone norm exponent q must exceed 1"));
        }
        Ok(())
    }

    /// One refinement step: both node counts doubled.
    pub fn doubled(&self) -> Self {
        Self {
            n_t: self.n_t * 2,
            n_y: self.n_y * 2,
            ..*self
        }
    }
}

/// Restriction of a half-line cone to the small or large Bessel-argument
/// region of a fixed second kernel argument `z` (the regions where
/// `y z e^{-t^2} / (1 - e^{-2 t^2})` is at most or at least 1).
#[derive(Debug, Clone, Copy)]
pub enum ConeRegionFilter<R> {
    All,
    SmallBessel { z: R },
    LargeBessel { z: R },
}

impl<R: Real> ConeRegionFilter<R> {
    /// Intersect one time slice `(a, b)` with the region.  The boundary in
    /// `y` solves `y z e^{-s}/(1 - e^{-2s}) = 1` at `s = t^2`, i.e.
    /// `y = 2 sinh(t^2) / z`; sub-slices get their own nodes.
    fn clip(&self, a: R, b: R, t: R, out: &mut Vec<(R, R)>) {
        match *self {
            ConeRegionFilter::All => out.push((a, b)),
            ConeRegionFilter::SmallBessel { z } => {
                let cut = R::of(2.0) * (t * t).sinh() / z;
                if a < cut {
                    out.push((a, b.min(cut)));
                }
            }
            ConeRegionFilter::LargeBessel { z } => {
                let cut = R::of(2.0) * (t * t).sinh() / z;
                if b > cut {
                    out.push((a.max(cut), b));
                }
            }
        }
    }
}

/// A g-function value with its refinement bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct GFunctionResult<R> {
    pub x: R,
    pub value: R,
    /// Change of the value under one doubling of both node counts.
    pub refinement_delta: R,
}

/// Shared engine: tensor quadrature over the truncated cone.
pub(crate) struct ConeIntegrator<R> {
    t_nodes: Vec<R>,
    t_weights: Vec<R>,
    y_base: quad::Rule<R>,
}

impl<R: Real> ConeIntegrator<R> {
    pub(crate) fn new(t_min: R, t_max: R, n_t: usize, n_y: usize) -> Self {
        let t_rule = quad::log_rule(t_min, t_max, n_t);
        Self {
            t_nodes: t_rule.nodes,
            t_weights: t_rule.weights,
            y_base: quad::gauss_legendre(n_y),
        }
    }

    pub(crate) fn from_spec(spec: &ConeQuadratureSpec<R>) -> Self {
        Self::new(spec.t_min, spec.t_max, spec.n_t, spec.n_y)
    }

    /// `sum_t w_t sum_{(a,b) in slices(t)} sum_y w_y f(y, t)`.
    ///
    /// `f` is called with monotone `t`: integrands cache per-`t` state by
    /// comparing against the previous value.
    pub(crate) fn integrate<S, F>(&self, mut slices: S, mut f: F) -> R
    where
        S: FnMut(R, &mut Vec<(R, R)>),
        F: FnMut(R, R) -> R,
    {
        let half = R::of(0.5);
        let mut intervals: Vec<(R, R)> = Vec::with_capacity(4);
        let mut acc = R::zero();
        for (&t, &wt) in self.t_nodes.iter().zip(&self.t_weights) {
            intervals.clear();
            slices(t, &mut intervals);
            for &(a, b) in &intervals {
                if !(b > a) {
                    continue;
                }
                let hw = (b - a) * half;
                let mid = (a + b) * half;
                let mut slice_acc = R::zero();
                for (&xi, &wy) in self.y_base.nodes.iter().zip(&self.y_base.weights) {
                    slice_acc = slice_acc + wy * f(mid + hw * xi, t);
                }
                acc = acc + wt * hw * slice_acc;
            }
        }
        acc
    }
}

fn cone_slice<R: Real>(dom: Domain, x: R, t: R) -> (R, R) {
    match dom {
        Domain::Line => (x - t, x + t),
        Domain::HalfLine => ((x - t).max(R::zero()), x + t),
    }
}

/// Per-`t` state of the spectral cone integrand: the multipliers
/// `-lambda_n a_n e^{-lambda_n t^2} t^2` and the leftover `t^{-2/q}` scaling,
/// refreshed whenever `t` moves.
struct SpectralConeIntegrand<R> {
    basis: BasisId<R>,
    lambdas: Vec<R>,
    coeffs: Vec<R>,
    q: R,
    last_t: R,
    scale: R,
    mult: Vec<R>,
    scratch: Vec<R>,
}

impl<R: Real> SpectralConeIntegrand<R> {
    fn new(basis: BasisId<R>, coeffs: &[R], q: R) -> Self {
        let lambdas = (0..coeffs.len()).map(|n| basis.eigenvalue(n)).collect();
        Self {
            basis,
            lambdas,
            coeffs: coeffs.to_vec(),
            q,
            last_t: R::nan(),
            scale: R::zero(),
            mult: vec![R::zero(); coeffs.len()],
            scratch: Vec::with_capacity(coeffs.len()),
        }
    }

    /// `t^{2q-2} |d/ds W_s f(y)|^q` at `s = t^2`.
    fn eval(&mut self, y: R, t: R) -> R {
        if t != self.last_t {
            self.last_t = t;
            let s = t * t;
            self.scale = t.powf(R::of(2.0) * self.q - R::of(2.0));
            for ((m, &a), &l) in self.mult.iter_mut().zip(&self.coeffs).zip(&self.lambdas) {
                *m = -l * a * (-l * s).exp();
            }
        }
        let nmax = self.coeffs.len() - 1;
        self.basis
            .evaluate_all_into(nmax, y, &mut self.scratch)
            .expect("cone nodes stay inside the basis domain");
        let ds = self
            .mult
            .iter()
            .zip(&self.scratch)
            .fold(R::zero(), |acc, (&m, &b)| acc + m * b);
        self.scale * ds.abs().powf(self.q)
    }
}

/// The area g-function
/// `{ int_{Gamma(x)} |(s d/ds W_s f(y))_{s=t^2}|^q dt dy / t^2 }^{1/q}`,
/// over the line cone (Hermite) or the half-line cone (Laguerre).
pub fn area_g<R: Real>(
    f: &FunctionRep<R>,
    x: R,
    spec: &ConeQuadratureSpec<R>,
    basis: BasisId<R>,
) -> Result<GFunctionResult<R>> {
    let value = area_g_value(f, x, spec, basis)?;
    let refined = area_g_value(f, x, &spec.doubled(), basis)?;
    Ok(GFunctionResult {
        x,
        value,
        refinement_delta: (refined - value).abs(),
    })
}

/// The g-function value without the refinement pass (norm sweeps aggregate
/// many values and track convergence at the report level instead).
pub fn area_g_value<R: Real>(
    f: &FunctionRep<R>,
    x: R,
    spec: &ConeQuadratureSpec<R>,
    basis: BasisId<R>,
) -> Result<R> {
    spec.validate()?;
    let dom = basis.domain();
    if f.domain() != dom {
        return Err(contract("function domain does not match the basis domain"));
    }
    if dom == Domain::HalfLine && !(x > R::zero()) {
        return Err(domain(format!("half-line evaluation point x = {x} must be positive")));
    }
    let integ = ConeIntegrator::from_spec(spec);
    let q = spec.q;
    let total = match f {
        FunctionRep::Spectral(e) => {
            if e.basis != basis {
                return Err(contract("expansion basis does not match the requested basis"));
            }
            let mut integrand = SpectralConeIntegrand::new(basis, &e.coeffs, q);
            integ.integrate(
                |t, out| out.push(cone_slice(dom, x, t)),
                |y, t| integrand.eval(y, t),
            )
        }
        FunctionRep::Grid(g) => {
            let two = R::of(2.0);
            integ.integrate(
                |t, out| out.push(cone_slice(dom, x, t)),
                |y, t| {
                    let ds = grid_heat_ds(g, t * t, basis, y);
                    t.powf(two * q - two) * ds.abs().powf(q)
                },
            )
        }
    };
    Ok(total.powf(R::one() / q))
}

/// `d/ds W_s f(y)` for grid inputs without per-point validation.
fn grid_heat_ds<R: Real>(g: &GridFunction<R>, s: R, basis: BasisId<R>, y: R) -> R {
    match basis {
        BasisId::HermiteLine => g
            .nodes
            .iter()
            .zip(&g.values)
            .zip(&g.weights)
            .fold(R::zero(), |acc, ((&z, &v), &w)| {
                acc + w * kernels::hermite_ds_unchecked(y, z, s) * v
            }),
        BasisId::LaguerreHalfLine { alpha } => g
            .nodes
            .iter()
            .zip(&g.values)
            .zip(&g.weights)
            .fold(R::zero(), |acc, ((&z, &v), &w)| {
                acc + w * kernels::laguerre_ds_unchecked(y, z, s, alpha) * v
            }),
    }
}

/// The half-line Hermite area g-function `g^{q,+}`: the Hermite integrand
/// with `f` replaced by its odd extension, integrated over `Gamma_+(x)`.
/// The action on the odd extension is carried by the reflected difference
/// kernel, so only half-line samples of `f` are needed.
pub fn area_g_halfline_hermite<R: Real>(
    f: &GridFunction<R>,
    x: R,
    spec: &ConeQuadratureSpec<R>,
) -> Result<GFunctionResult<R>> {
    let value = area_g_halfline_value(f, x, spec)?;
    let refined = area_g_halfline_value(f, x, &spec.doubled())?;
    Ok(GFunctionResult {
        x,
        value,
        refinement_delta: (refined - value).abs(),
    })
}

pub fn area_g_halfline_value<R: Real>(
    f: &GridFunction<R>,
    x: R,
    spec: &ConeQuadratureSpec<R>,
) -> Result<R> {
    spec.validate()?;
    if f.domain != Domain::HalfLine {
        return Err(contract("the half-line g-function takes a half-line sample"));
    }
    if !(x > R::zero()) {
        return Err(domain(format!("half-line evaluation point x = {x} must be positive")));
    }
    let integ = ConeIntegrator::from_spec(spec);
    let q = spec.q;
    let two = R::of(2.0);
    let total = integ.integrate(
        |t, out| out.push(cone_slice(Domain::HalfLine, x, t)),
        |y, t| {
            let s = t * t;
            let ds = f
                .nodes
                .iter()
                .zip(&f.values)
                .zip(&f.weights)
                .fold(R::zero(), |acc, ((&z, &v), &w)| {
                    acc + w * kernels::odd_reflected_ds_unchecked(y, z, s) * v
                });
            t.powf(two * q - two) * ds.abs().powf(q)
        },
    );
    Ok(total.powf(R::one() / q))
}

/// Policy for one-dimensional time integrals.
#[derive(Debug, Clone, Copy)]
pub struct LogGridSpec<R> {
    pub t_min: R,
    pub t_max: R,
    pub n: usize,
}

impl<R: Real> LogGridSpec<R> {
    /// Default for the vertical g-function: `t` in [1e-6, 36].  The area
    /// identity substitutes `u = t^2`, so the vertical range is the square
    /// of the cone range.
    pub fn standard() -> Self {
        Self {
            t_min: R::of(1e-6),
            t_max: R::of(36.0),
            n: 160,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > R::zero() && self.t_max > self.t_min) || self.n < 8 {
            return Err(contract("log grid needs 0 < t_min < t_max and n >= 8"));
        }
        Ok(())
    }
}

/// The vertical g-function
/// `g_r(f)(x) = { int_0^inf |t d/dt W_t f(x)|^r dt/t }^{1/r}`, `r > 1`.
pub fn vertical_g<R: Real>(
    f: &FunctionRep<R>,
    x: R,
    r: R,
    basis: BasisId<R>,
    t_spec: &LogGridSpec<R>,
) -> Result<R> {
    if !(r > R::one()) {
        return Err(domain(format!("vertical g exponent r = {r} must exceed 1")));
    }
    t_spec.validate()?;
    let rule = quad::log_rule(t_spec.t_min, t_spec.t_max, t_spec.n);
    let mut acc = R::zero();
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let ds = apply_heat_ds(f, t, basis, x)?;
        acc = acc + w * (t * ds).abs().powf(r) / t;
    }
    Ok(acc.powf(R::one() / r))
}

/// Both sides of the change-of-variables identity:
/// `(||g^q_W f||_{L^q}^q, ||g_q f||_{L^q}^q)`, each by its own quadrature.
pub fn gnorm_identity_sides<R: Real>(
    f: &FunctionRep<R>,
    q: R,
    spec: &ConeQuadratureSpec<R>,
) -> Result<(R, R)> {
    let basis = BasisId::hermite();
    let spec = ConeQuadratureSpec { q, ..*spec };
    spec.validate()?;
    let x_rule = quad::gl_on(R::of(-10.0), R::of(10.0), 128);
    let v_spec = LogGridSpec {
        t_min: spec.t_min * spec.t_min,
        t_max: spec.t_max * spec.t_max,
        n: 160,
    };
    let mut area = R::zero();
    let mut vertical = R::zero();
    for (&x, &w) in x_rule.nodes.iter().zip(&x_rule.weights) {
        area = area + w * area_g_value(f, x, &spec, basis)?.powf(q);
        vertical = vertical + w * vertical_g(f, x, q, basis, &v_spec)?.powf(q);
    }
    Ok((area, vertical))
}

/// `| ||g^q_W f||_{L^q}^q - ||g_q f||_{L^q}^q |`: the change of variables
/// `u = t^2` makes the two norms equal exactly.
pub fn gnorm_identity_gap<R: Real>(
    f: &FunctionRep<R>,
    q: R,
    spec: &ConeQuadratureSpec<R>,
) -> Result<R> {
    let (area, vertical) = gnorm_identity_sides(f, q, spec)?;
    Ok((area - vertical).abs())
}

/// Which fixed-kernel cone norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeNormVariant {
    /// `d/ds W_s(y, z)` over the line cone.
    HermiteDs,
    /// `d^2/(dy ds) W_s(y, z)` over the line cone.
    HermiteMixed,
    /// `d/ds W_s^alpha(y, z)` over the half-line cone.
    LaguerreFull,
    /// The same restricted to the small Bessel-argument region.
    LaguerreSmall,
    /// The same restricted to the large Bessel-argument region.
    LaguerreLarge,
    /// `d/ds [W_s(y, z) - W_s(y, -z)]` over the half-line cone.
    OddReflected,
    /// `d/ds [W_s^alpha(y, z) - W_s(y, z)]` over the half-line cone.
    Difference,
}

impl ConeNormVariant {
    fn needs_alpha(&self) -> bool {
        matches!(
            self,
            ConeNormVariant::LaguerreFull
                | ConeNormVariant::LaguerreSmall
                | ConeNormVariant::LaguerreLarge
                | ConeNormVariant::Difference
        )
    }

    fn domain(&self) -> Domain {
        match self {
            ConeNormVariant::HermiteDs | ConeNormVariant::HermiteMixed => Domain::Line,
            _ => Domain::HalfLine,
        }
    }
}

/// The cone norm of a kernel slice:
/// `{ int_{Gamma(x) (cap region)} |(s D(y, z))_{s=t^2}|^q dt dy/t^2 }^{1/q}`
/// where `D` is the derivative kernel selected by `variant`, fixed at second
/// argument `z`.  The `q` argument overrides the exponent in `spec`.
pub fn kernel_cone_norm<R: Real>(
    x: R,
    z: R,
    q: R,
    spec: &ConeQuadratureSpec<R>,
    variant: ConeNormVariant,
    alpha: Option<R>,
) -> Result<R> {
    let spec = ConeQuadratureSpec { q, ..*spec };
    spec.validate()?;
    if variant.needs_alpha() && alpha.is_none() {
        return Err(contract("this cone norm variant needs alpha"));
    }
    let dom = variant.domain();
    if dom == Domain::HalfLine {
        kernels::ensure_halfline(x)?;
        kernels::ensure_halfline(z)?;
    }
    let filter = match variant {
        ConeNormVariant::LaguerreSmall => ConeRegionFilter::SmallBessel { z },
        ConeNormVariant::LaguerreLarge => ConeRegionFilter::LargeBessel { z },
        _ => ConeRegionFilter::All,
    };
    let a = alpha.unwrap_or_else(R::zero);
    let two = R::of(2.0);
    let integ = ConeIntegrator::from_spec(&spec);
    let total = integ.integrate(
        |t, out| {
            let (lo, hi) = cone_slice(dom, x, t);
            filter.clip(lo, hi, t, out);
        },
        |y, t| {
            let s = t * t;
            let d = match variant {
                ConeNormVariant::HermiteDs => kernels::hermite_ds_unchecked(y, z, s),
                ConeNormVariant::HermiteMixed => kernels::hermite_dyds_unchecked(y, z, s),
                ConeNormVariant::LaguerreFull
                | ConeNormVariant::LaguerreSmall
                | ConeNormVariant::LaguerreLarge => kernels::laguerre_ds_unchecked(y, z, s, a),
                ConeNormVariant::OddReflected => kernels::odd_reflected_ds_unchecked(y, z, s),
                ConeNormVariant::Difference => {
                    kernels::laguerre_ds_unchecked(y, z, s, a)
                        - kernels::hermite_ds_unchecked(y, z, s)
                }
            };
            t.powf(two * q - two) * d.abs().powf(q)
        },
    );
    Ok(total.powf(R::one() / q))
}

/// The majorants behind the Hardy-operator reduction: `1/x` far left of the
/// diagonal, `1/z` far right, and `H(x, z) = (1/z)(1 + sqrt(z/|z-x|))` on
/// the dyadic band `x/2 < z < 2x`.
#[derive(Debug, Clone, Copy)]
pub struct HardyMajorants<R> {
    /// `1/x`, present when `z < x/2`.
    pub far_left: Option<R>,
    /// `1/z`, present when `z > 2x`.
    pub far_right: Option<R>,
    /// `H(x, z)`, present when `x/2 < z < 2x`, `z != x`.
    pub local: Option<R>,
}

pub fn hardy_majorants<R: Real>(x: R, z: R) -> Result<HardyMajorants<R>> {
    kernels::ensure_halfline(x)?;
    kernels::ensure_halfline(z)?;
    if z == x {
        return Err(Error::Singular(format!(
            "H(x, z) is singular on the diagonal (x = z = {x})"
        )));
    }
    let two = R::of(2.0);
    let half = R::of(0.5);
    Ok(HardyMajorants {
        far_left: (z < x * half).then(|| x.recip()),
        far_right: (z > two * x).then(|| z.recip()),
        local: (z > x * half && z < two * x)
            .then(|| (R::one() + (z / (z - x).abs()).sqrt()) / z),
    })
}
