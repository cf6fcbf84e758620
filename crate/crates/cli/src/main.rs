//! Batch front end: evaluate kernels and g-functions, run the verification
//! suites, and emit CSV tables.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
//! 3 I/O error.

// `!(b > a)` rejects NaN grid bounds along with reversed ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lpheat::areagfun::{area_g, gnorm_identity_sides, ConeQuadratureSpec};
use lpheat::kernels::KernelEval;
use lpheat::quad;
use lpheat::report::{int, num, text, Csv};
use lpheat::semigroup::{FunctionRep, GridFunction, SpectralExpansion};
use lpheat::specfun::BasisId;
use lpheat::verify::{
    self, envelope_suite, h1_diagnostic, norm_report_from_values, polarization_check,
    reverse_and_equivalence, weak_type_profile, PolarizationConfig, SweepConfig, SweepOperator,
};

#[derive(Parser)]
#[command(
    name = "lpheat",
    version,
    about = "Heat-semigroup area g-functions for the Hermite and Laguerre settings: tables and verification suites, CSV out"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a heat kernel and its s-derivative on an (x, y) grid
    Kernel(KernelArgs),
    /// Tabulate an area g-function on an x-grid
    Gfun(GfunArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
    /// Check the polarization identity on coefficient pairs
    Polarize(PolarizeArgs),
    /// Fit the constants of the kernel estimates on held-out grids
    Envelope(EnvelopeArgs),
    /// H^1 diagnostic ratios over a positive test family
    H1(H1Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Hermite,
    Laguerre,
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Basis::Hermite => "hermite",
            Basis::Laguerre => "laguerre",
        })
    }
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum)]
    basis: Basis,
    /// Laguerre type parameter (> -1/2); required for the Laguerre basis
    #[arg(long)]
    alpha: Option<f64>,
    /// Time parameter (> 0)
    #[arg(long)]
    t: f64,
    /// x grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    xgrid: String,
    /// y grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    ygrid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GfunArgs {
    #[arg(long, value_enum)]
    basis: Basis,
    #[arg(long)]
    alpha: Option<f64>,
    /// Cone norm exponent (> 1)
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    /// Input function: "eigen:N" or "random:K"
    #[arg(long)]
    f: String,
    /// x grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    xgrid: String,
    #[arg(long, default_value_t = 1e-3)]
    t_min: f64,
    #[arg(long, default_value_t = 6.0)]
    t_max: f64,
    #[arg(long, default_value_t = 96)]
    n_t: usize,
    #[arg(long, default_value_t = 32)]
    n_y: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Mehler,
    Derivative,
    HalfInteger,
    L2Isometry,
    GnormIdentity,
    Boundedness,
    WeakType,
    Reverse,
    NonConservation,
    All,
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Suite::Mehler => "mehler",
            Suite::Derivative => "derivative",
            Suite::HalfInteger => "half-integer",
            Suite::L2Isometry => "l2-isometry",
            Suite::GnormIdentity => "gnorm-identity",
            Suite::Boundedness => "boundedness",
            Suite::WeakType => "weak-type",
            Suite::Reverse => "reverse",
            Suite::NonConservation => "non-conservation",
            Suite::All => "all",
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Laguerre type parameters for the suites that use them
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 2.0])]
    alpha: Vec<f64>,
    /// Random family size for the norm sweeps
    #[arg(long, default_value_t = 50)]
    family_size: usize,
    /// Norm exponents for the boundedness and reverse sweeps
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.25, 2.0, 4.0, 8.0])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolarizeArgs {
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Number of random coefficient pairs (plus the unit and orthogonal cases)
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5])]
    alpha: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct H1Args {
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum AppError {
    Usage(String),
    Io(std::io::Error),
}

impl From<lpheat::Error> for AppError {
    fn from(e: lpheat::Error) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Kernel(a) => run_kernel(a),
        Command::Gfun(a) => run_gfun(a),
        Command::Verify(a) => run_verify(a),
        Command::Polarize(a) => run_polarize(a),
        Command::Envelope(a) => run_envelope(a),
        Command::H1(a) => run_h1(a),
    };
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(3)
        }
    }
}

/// Parse "start:stop:count" into an inclusive uniform grid.
fn parse_grid(spec: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Usage(format!(
            "grid '{spec}' must be start:stop:count"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| AppError::Usage(format!("bad grid start '{}'", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| AppError::Usage(format!("bad grid stop '{}'", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| AppError::Usage(format!("bad grid count '{}'", parts[2])))?;
    if n == 0 || (n > 1 && !(b > a)) {
        return Err(AppError::Usage(format!("grid '{spec}' is empty or reversed")));
    }
    Ok((0..n)
        .map(|i| {
            if n == 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

fn basis_of(basis: Basis, alpha: Option<f64>) -> Result<BasisId<f64>, AppError> {
    match basis {
        Basis::Hermite => Ok(BasisId::hermite()),
        Basis::Laguerre => {
            let alpha =
                alpha.ok_or_else(|| AppError::Usage("laguerre basis needs --alpha".into()))?;
            Ok(BasisId::laguerre(alpha)?)
        }
    }
}

/// Parse "eigen:N" or "random:K" into an expansion.
fn parse_function(
    spec: &str,
    basis: BasisId<f64>,
    seed: u64,
) -> Result<SpectralExpansion<f64>, AppError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| AppError::Usage(format!("function '{spec}' must be eigen:N or random:K")))?;
    let k: usize = arg
        .parse()
        .map_err(|_| AppError::Usage(format!("bad function index '{arg}'")))?;
    match kind {
        "eigen" => Ok(SpectralExpansion::unit(basis, k)),
        "random" => {
            if k == 0 {
                return Err(AppError::Usage("random:K needs K >= 1".into()));
            }
            Ok(verify::random_family(basis, k, 1, seed).remove(0))
        }
        other => Err(AppError::Usage(format!(
            "unknown function kind '{other}' (want eigen or random)"
        ))),
    }
}

fn run_kernel(a: KernelArgs) -> Result<bool, AppError> {
    if a.basis == Basis::Hermite && a.alpha.is_some() {
        return Err(AppError::Usage("--alpha applies to the laguerre basis only".into()));
    }
    let basis = basis_of(a.basis, a.alpha)?;
    let xs = parse_grid(&a.xgrid)?;
    let ys = parse_grid(&a.ygrid)?;

    let mut csv = Csv::new();
    csv.meta("command", "kernel")
        .meta("basis", a.basis)
        .meta("alpha", a.alpha.map_or("none".into(), |v| v.to_string()))
        .meta("t", a.t)
        .meta("xgrid", &a.xgrid)
        .meta("ygrid", &a.ygrid);
    csv.header(&["x", "y", "t", "value", "ds_value"]);
    for &x in &xs {
        for &y in &ys {
            let eval = match basis {
                BasisId::HermiteLine => KernelEval::hermite(x, y, a.t)?,
                BasisId::LaguerreHalfLine { alpha } => KernelEval::laguerre(x, y, a.t, alpha)?,
            };
            csv.row(vec![num(x), num(y), num(a.t), num(eval.value), num(eval.ds_value)]);
        }
    }
    csv.write(a.out.as_deref())?;
    Ok(true)
}

fn run_gfun(a: GfunArgs) -> Result<bool, AppError> {
    let basis = basis_of(a.basis, a.alpha)?;
    let xs = parse_grid(&a.xgrid)?;
    let f = FunctionRep::Spectral(parse_function(&a.f, basis, a.seed)?);
    let spec = ConeQuadratureSpec {
        t_min: a.t_min,
        t_max: a.t_max,
        n_t: a.n_t,
        n_y: a.n_y,
        q: a.q,
    };
    spec.validate()?;

    let mut csv = Csv::new();
    csv.meta("command", "gfun")
        .meta("basis", a.basis)
        .meta("alpha", a.alpha.map_or("none".into(), |v| v.to_string()))
        .meta("q", a.q)
        .meta("f", &a.f)
        .meta("xgrid", &a.xgrid)
        .meta("t_min", a.t_min)
        .meta("t_max", a.t_max)
        .meta("n_t", a.n_t)
        .meta("n_y", a.n_y)
        .meta("seed", a.seed);
    csv.header(&["x", "value", "refinement_delta"]);
    for &x in &xs {
        let r = area_g(&f, x, &spec, basis)?;
        csv.row(vec![num(x), num(r.value), num(r.refinement_delta)]);
    }
    csv.write(a.out.as_deref())?;
    Ok(true)
}

struct CheckTable {
    csv: Csv,
    all_pass: bool,
}

impl CheckTable {
    fn new(meta: &[(&str, String)]) -> Self {
        let mut csv = Csv::new();
        for (k, v) in meta {
            csv.meta(k, v);
        }
        csv.header(&["check", "metric", "threshold", "pass"]);
        Self {
            csv,
            all_pass: true,
        }
    }

    fn push(&mut self, name: &str, metric: f64, threshold: f64, pass: bool) {
        self.all_pass &= pass;
        self.csv.row(vec![
            text(name),
            num(metric),
            num(threshold),
            text(if pass { "true" } else { "false" }),
        ]);
    }

    /// metric must be <= threshold
    fn push_le(&mut self, name: &str, metric: f64, threshold: f64) {
        self.push(name, metric, threshold, metric <= threshold);
    }
}

fn run_verify(a: VerifyArgs) -> Result<bool, AppError> {
    let cfg = SweepConfig::standard();
    let alphas_str = a
        .alpha
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut table = CheckTable::new(&[
        ("command", "verify".into()),
        ("suite", a.suite.to_string()),
        ("alpha", alphas_str),
        ("family_size", a.family_size.to_string()),
        (
            "p",
            a.p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ),
        ("seed", a.seed.to_string()),
    ]);

    let want = |s: Suite, which: Suite| s == which || s == Suite::All;

    if want(a.suite, Suite::Mehler) {
        table.push_le("mehler-hermite", verify::mehler_hermite_max_err(200), 1e-8);
        table.push_le(
            "mehler-laguerre",
            verify::mehler_laguerre_max_err(300, &a.alpha)?,
            1e-7,
        );
    }
    if want(a.suite, Suite::Derivative) {
        table.push_le(
            "derivative-vs-finite-differences",
            verify::derivative_formula_max_rel_err(&a.alpha)?,
            1e-5,
        );
    }
    if want(a.suite, Suite::HalfInteger) {
        table.push_le("half-integer-reduction", verify::half_integer_max_err(), 1e-10);
    }
    if want(a.suite, Suite::L2Isometry) {
        let mut family = verify::eigen_family(BasisId::hermite(), 16);
        family.extend(verify::random_family(
            BasisId::hermite(),
            16,
            a.family_size,
            a.seed,
        ));
        table.push_le(
            "l2-isometry",
            verify::l2_isometry_max_dev(&family, &cfg)?,
            1e-4,
        );
    }
    if want(a.suite, Suite::GnormIdentity) {
        let spec = ConeQuadratureSpec::standard(2.0);
        let h0 = FunctionRep::Spectral(SpectralExpansion::unit(BasisId::hermite(), 0));
        let rand8 = FunctionRep::Spectral(
            verify::random_family(BasisId::hermite(), 8, 1, a.seed).remove(0),
        );
        for q in [2.0, 4.0] {
            for (name, f) in [("h0", &h0), ("random8", &rand8)] {
                let (area, vertical) = gnorm_identity_sides(f, q, &spec)?;
                table.push_le(
                    &format!("gnorm-identity[q={q},f={name}]"),
                    (area - vertical).abs() / vertical,
                    1e-4,
                );
            }
        }
    }
    if want(a.suite, Suite::Boundedness) {
        for (op, alpha) in [
            (SweepOperator::AreaHermite, None),
            (SweepOperator::AreaLaguerre, a.alpha.first().copied()),
        ] {
            let basis = match op {
                SweepOperator::AreaHermite => BasisId::hermite(),
                _ => BasisId::laguerre(alpha.unwrap())?,
            };
            let fams: Vec<Vec<FunctionRep<f64>>> = [a.seed, a.seed + 1]
                .iter()
                .map(|&s| {
                    verify::random_family(basis, 16, a.family_size, s)
                        .into_iter()
                        .map(FunctionRep::Spectral)
                        .collect()
                })
                .collect();
            let gv: Vec<Vec<Vec<f64>>> = fams
                .iter()
                .map(|fam| {
                    fam.iter()
                        .map(|f| verify::g_values(op, 2.0, f, alpha, &cfg))
                        .collect::<lpheat::Result<_>>()
                })
                .collect::<lpheat::Result<_>>()?;
            for &p in &a.p {
                let ra = norm_report_from_values(op, &gv[0], &fams[0], p, 2.0, &cfg)?;
                let rb = norm_report_from_values(op, &gv[1], &fams[1], p, 2.0, &cfg)?;
                let drift = (ra.sup_ratio - rb.sup_ratio).abs() / ra.sup_ratio;
                let name = match op {
                    SweepOperator::AreaHermite => format!("boundedness-hermite[p={p}]"),
                    _ => format!("boundedness-laguerre[p={p}]"),
                };
                table.push(
                    &name,
                    ra.sup_ratio,
                    f64::INFINITY,
                    ra.sup_ratio.is_finite() && drift <= 0.10,
                );
            }
        }
    }
    if want(a.suite, Suite::WeakType) {
        let eval = verify::bump_eval_rule();
        let lambdas = quad::log_spaced(1e-2, 1e3, 32);
        let mut sups = Vec::new();
        for width in [0.1, 0.05, 0.025] {
            let f = FunctionRep::Grid(verify::gaussian_bump(width));
            let profile =
                weak_type_profile(SweepOperator::AreaHermite, 2.0, &f, &lambdas, None, &eval, &cfg)?;
            sups.push(profile.sup_product_ratio);
        }
        let spread = sups.iter().cloned().fold(f64::MIN, f64::max)
            / sups.iter().cloned().fold(f64::MAX, f64::min);
        table.push_le("weak-type-bump-spread", spread, 2.0);
    }
    if want(a.suite, Suite::Reverse) {
        for &alpha in &a.alpha {
            let basis = BasisId::laguerre(alpha)?;
            for q in [1.5, 2.0] {
                for &p in a.p.iter().filter(|p| **p <= 4.0) {
                    let fam_a: Vec<FunctionRep<f64>> =
                        verify::random_family(basis, 16, a.family_size, a.seed)
                            .into_iter()
                            .map(FunctionRep::Spectral)
                            .collect();
                    let fam_b: Vec<FunctionRep<f64>> =
                        verify::random_family(basis, 16, a.family_size, a.seed + 1)
                            .into_iter()
                            .map(FunctionRep::Spectral)
                            .collect();
                    let ea = reverse_and_equivalence(q, p, alpha, &fam_a, &cfg)?;
                    let eb = reverse_and_equivalence(q, p, alpha, &fam_b, &cfg)?;
                    let drift =
                        (ea.reverse.sup_ratio - eb.reverse.sup_ratio).abs() / ea.reverse.sup_ratio;
                    table.push(
                        &format!("reverse[alpha={alpha},q={q},p={p}]"),
                        ea.reverse.sup_ratio,
                        f64::INFINITY,
                        ea.reverse.sup_ratio.is_finite() && drift <= 0.10,
                    );
                }
            }
            let eigen: Vec<FunctionRep<f64>> = verify::eigen_family(basis, 16)
                .into_iter()
                .map(FunctionRep::Spectral)
                .collect();
            let pair = reverse_and_equivalence(2.0, 2.0, alpha, &eigen, &cfg)?;
            let in_range = pair
                .direct
                .ratios
                .iter()
                .all(|r| *r > 0.4 && *r <= 0.5 + 1e-3);
            table.push(
                &format!("corollary-range[alpha={alpha}]"),
                pair.direct.sup_ratio,
                0.5 + 1e-3,
                in_range,
            );
        }
    }
    if want(a.suite, Suite::NonConservation) {
        let v = verify::non_conservation_value();
        table.push("non-conservation", v, 1e-6, v > 1e-6);
    }

    table.csv.write(a.out.as_deref())?;
    Ok(table.all_pass)
}

fn run_polarize(a: PolarizeArgs) -> Result<bool, AppError> {
    let cfg = PolarizationConfig::standard();
    let mut csv = Csv::new();
    csv.meta("command", "polarize")
        .meta("alpha", a.alpha)
        .meta("pairs", a.pairs)
        .meta("seed", a.seed);
    csv.header(&["pair", "exact", "quadrature", "rel_err", "pass"]);
    let mut all_pass = true;
    let mut push = |csv: &mut Csv, name: String, r: &verify::PolarizationReport, tol_rel: f64| {
        let pass = if r.exact == 0.0 {
            r.quadrature.abs() <= 1e-4
        } else {
            r.rel_err <= tol_rel
        };
        all_pass &= pass;
        csv.row(vec![
            text(name),
            num(r.exact),
            num(r.quadrature),
            num(r.rel_err),
            text(if pass { "true" } else { "false" }),
        ]);
    };

    let unit = polarization_check(&[1.0], &[1.0], a.alpha, &cfg)?;
    push(&mut csv, "unit".into(), &unit, 1e-3);
    let orth = polarization_check(&[0.0, 1.0], &[0.0, 0.0, 1.0], a.alpha, &cfg)?;
    push(&mut csv, "orthogonal".into(), &orth, 1e-3);

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    };
    let mut produced = 0;
    while produced < a.pairs {
        let va = draw(&mut rng);
        let vb = draw(&mut rng);
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        if dot.abs() < 0.1 {
            continue;
        }
        let r = polarization_check(&va, &vb, a.alpha, &cfg)?;
        push(&mut csv, format!("random{produced}"), &r, 1e-3);
        produced += 1;
    }

    csv.write(a.out.as_deref())?;
    Ok(all_pass)
}

fn run_envelope(a: EnvelopeArgs) -> Result<bool, AppError> {
    let cfg = SweepConfig::standard();
    let reports = envelope_suite(&a.alpha, &cfg)?;
    let mut csv = Csv::new();
    let alphas_str = a
        .alpha
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    csv.meta("command", "envelope")
        .meta("alpha", alphas_str)
        .meta("margin", verify::FIT_MARGIN);
    csv.header(&[
        "inequality_id",
        "c_fit",
        "n_training",
        "n_validation",
        "n_violations",
        "pass",
    ]);
    let mut all_pass = true;
    for r in &reports {
        all_pass &= r.passed();
        csv.row(vec![
            text(r.inequality_id.clone()),
            num(r.c_fit),
            int(r.n_training),
            int(r.n_validation),
            int(r.violations.len()),
            text(if r.passed() { "true" } else { "false" }),
        ]);
    }
    csv.write(a.out.as_deref())?;
    Ok(all_pass)
}

fn run_h1(a: H1Args) -> Result<bool, AppError> {
    let cfg = SweepConfig::standard();
    let basis = BasisId::laguerre(a.alpha)?;
    let family = verify::positive_family(basis, 8, a.count, a.seed);
    let mut csv = Csv::new();
    csv.meta("command", "h1")
        .meta("alpha", a.alpha)
        .meta("count", a.count)
        .meta("seed", a.seed);
    csv.header(&["index", "maximal_l1", "l1_plus_g_l1", "ratio"]);
    let mut ratios = Vec::new();
    for (i, e) in family.iter().enumerate() {
        let e = e.clone();
        let f = GridFunction::default_halfline(move |x| e.eval(x).unwrap_or(0.0));
        let d = h1_diagnostic(&f, a.alpha, &cfg)?;
        let ratio = d.ratio.unwrap_or(f64::NAN);
        ratios.push(ratio);
        csv.row(vec![
            int(i),
            num(d.maximal_l1),
            num(d.l1_plus_g_l1),
            num(ratio),
        ]);
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let mut summary = String::new();
    let _ = write!(summary, "{:.6}", max / min);
    csv.meta("ratio_spread", summary);
    csv.write(a.out.as_deref())?;
    Ok(max / min <= 25.0)
}
