//! The `frobstat` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 work budget exceeded, 3 I/O or
//! archive-format error, 4 a `verify` check failed.

mod specfile;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use frobstat::archive::{ArchiveError, TraceArchive};
use frobstat::curves::{trace_sweep, CurveError};
use frobstat::euler::{euler_product, lt_constant, sig10, EulerError, ImageData};
use frobstat::matcount::{
    centralizer_dim, closed_count, enumerate_trace_counts, kloosterman, kloosterman_moment_check, min_class_dim,
    EigenProfile, MatcountError, TraceTable,
};
use frobstat::satotate::{mc_density, phi, write_density_csv, DensityError, DensityEstimate};
use frobstat::stats::{
    default_checkpoints, ek_cdf, ek_moments, gaussian_moment, nu_histogram, pi_a, write_ek_csv, write_nu_csv,
    write_pi_csv, StatsError,
};
use frobstat::{CurveModel, DEFAULT_BUDGET};

pub use specfile::parse_curve_spec;
pub use verify::{run_suite, Suite};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const WORKERS_ENV: &str = "FROBSTAT_WORKERS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
    Io(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Io(_) => 3,
            CliError::Failed(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) | CliError::Io(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ArchiveError> for CliError {
    fn from(e: ArchiveError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Budget(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MatcountError> for CliError {
    fn from(e: MatcountError) -> Self {
        match e {
            MatcountError::Budget(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}
usage_from!(EulerError, DensityError, StatsError);

#[derive(Parser, Debug)]
#[command(name = "frobstat", version, about = "Frobenius trace statistics for hyperelliptic Jacobians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a1 at every good prime up to --xmax and write an archive.
    Sweep(SweepArgs),
    /// pi_A(x, t) at checkpoints, with the -t count alongside.
    Pi(PiArgs),
    /// Histogram of the number of distinct prime factors of a1.
    NuHist(NuHistArgs),
    /// Empirical Erdős–Kac distribution against the normal CDF.
    Ek(EkArgs),
    /// Normalised moments of nu(a1).
    Moments(MomentsArgs),
    /// Euler product P_{g,t} with its tail interval.
    Euler(EulerArgs),
    /// Lang–Trotter style constant c(A, t).
    Constant(ConstantArgs),
    /// Trace-class counts |C(m, t)| in GSp_2g(Z/mZ).
    GroupCount(GroupCountArgs),
    /// Kloosterman sums mod l, optionally with a moment check.
    Kloosterman(KloostermanArgs),
    /// Closed-form Sato–Tate density for g = 1, 2.
    Density(DensityArgs),
    /// Monte Carlo Sato–Tate density for any g.
    McDensity(McDensityArgs),
    /// Class dimension of an eigenvalue profile, or the minimum over profiles.
    Centralizer(CentralizerArgs),
    /// Run a self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Built-in curve label (J1, J2, J3).
    #[arg(long, default_value = "J1", conflicts_with = "spec")]
    curve: String,
    /// Curve spec file (genus=, f=, bad=, label=).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long)]
    xmax: u64,
    /// Worker threads (default: $FROBSTAT_WORKERS or the core count).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PiArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t: i64,
    /// Comma-separated checkpoints (default: powers of two from 2^8).
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<u64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NuHistArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Lower end of the prime range (inclusive).
    #[arg(long, default_value_t = 0)]
    lo: u64,
    /// Upper end of the prime range (exclusive; default: past x_max).
    #[arg(long)]
    hi: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EkArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated tau grid (default: -2 to 2 in steps of 0.25).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    taus: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    kmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EulerArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    t: i64,
    /// Prime cutoff L.
    #[arg(long = "L", default_value_t = 100_000)]
    cutoff: u64,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, allow_negative_numbers = true)]
    t: i64,
    #[arg(long = "L", default_value_t = 100_000)]
    cutoff: u64,
    /// `surjective`, `none`, or a table file of `m t count group_order` lines.
    #[arg(long, default_value = "surjective")]
    image: String,
    /// Phi(0); defaults to the closed-form value for the genus.
    #[arg(long)]
    phi0: Option<f64>,
}

#[derive(Args, Debug)]
struct GroupCountArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    m: u64,
    /// Count by exhaustive enumeration instead of closed forms.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KloostermanArgs {
    #[arg(long)]
    l: u64,
    /// Also check the r-th moment identity.
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McDensityArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CentralizerArgs {
    #[arg(long)]
    n: u32,
    /// Restrict the minimum to trace-zero feasible profiles.
    #[arg(long)]
    trace_zero: bool,
    /// Half the multiplicity of eigenvalue 1 (evaluates a single profile).
    #[arg(long, requires = "y")]
    x: Option<u32>,
    /// Half the multiplicity of eigenvalue -1.
    #[arg(long, requires = "x")]
    y: Option<u32>,
    /// Comma-separated multiplicities of the pairs {λ, 1/λ}.
    #[arg(long, value_delimiter = ',')]
    partition: Vec<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
}

/// Run with `args` (program name excluded); returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("frobstat".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let is_info = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            if is_info {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    let ctx = Ctx { hash: config_hash(&args) };
    match dispatch(cli.command, &ctx, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// First 16 hex digits of SHA-256 over the NUL-joined arguments.
pub fn config_hash(args: &[String]) -> String {
    let digest = Sha256::digest(args.join("\0").as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct Ctx {
    hash: String,
}

impl Ctx {
    fn trailer(&self) -> String {
        format!("# frobstat {VERSION} config={}\n", self.hash)
    }

    /// Writes a CSV body plus the metadata trailer to `path`, or to `out`.
    /// Returns whether a file was written.
    fn emit_csv(&self, path: Option<&Path>, mut body: Vec<u8>, out: &mut dyn Write) -> Result<bool, CliError> {
        body.extend_from_slice(self.trailer().as_bytes());
        match path {
            Some(p) => {
                fs::write(p, &body).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Ok(true)
            }
            None => {
                out.write_all(&body)?;
                Ok(false)
            }
        }
    }
}

fn workers(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(w) = flag {
        return if w == 0 { Err(CliError::Usage("--workers must be positive".into())) } else { Ok(w) };
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&w| w > 0)
            .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn load_curve(args: &CurveArgs) -> Result<CurveModel, CliError> {
    match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_curve_spec(&text).map_err(|e| CliError::Usage(format!("--spec {}: {e}", path.display())))
        }
        None => Ok(CurveModel::builtin(&args.curve)?),
    }
}

fn load_archive(path: &Path) -> Result<TraceArchive, CliError> {
    TraceArchive::load(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn grid(points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    Ok((0..points).map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64).collect())
}

fn dispatch(cmd: Command, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Sweep(a) => {
            let curve = load_curve(&a.curve)?;
            let archive = trace_sweep(&curve, a.xmax, workers(a.workers)?)?;
            archive.save(&a.out).map_err(|e| CliError::Io(format!("{}: {e}", a.out.display())))?;
            writeln!(out, "sweep {} x_max={} records={} -> {}", curve.label(), a.xmax, archive.records.len(), a.out.display())?;
        }
        Command::Pi(a) => {
            let archive = load_archive(&a.input)?;
            let cps = a.checkpoints.unwrap_or_else(|| default_checkpoints(archive.x_max));
            if cps.is_empty() {
                return Err(CliError::Usage("no checkpoints: archive x_max is below 256".into()));
            }
            let table = pi_a(&archive, a.t, &cps)?;
            let mut body = Vec::new();
            write_pi_csv(&mut body, &table)?;
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                let last = cps.len() - 1;
                let r2 = if cps.len() >= 3 { format!(" r2={:.6}", table.fit().r2) } else { String::new() };
                writeln!(
                    out,
                    "pi t={} x={} count={} count_neg_t={}{r2}",
                    a.t, cps[last], table.values[last], table.values_neg[last]
                )?;
            }
        }
        Command::NuHist(a) => {
            let archive = load_archive(&a.input)?;
            let hi = a.hi.unwrap_or(archive.x_max.saturating_add(1));
            let hist = nu_histogram(&archive, a.lo, hi);
            let mut body = Vec::new();
            write_nu_csv(&mut body, &hist)?;
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                let total: u64 = hist.values().sum();
                writeln!(out, "nu-hist range=[{},{}) total={total} {hist:?}", a.lo, hi)?;
            }
        }
        Command::Ek(a) => {
            let archive = load_archive(&a.input)?;
            let taus = a.taus.unwrap_or_else(|| (-8..=8).map(|i| i as f64 * 0.25).collect());
            let report = ek_cdf(&archive, &taus)?;
            let mut body = Vec::new();
            write_ek_csv(&mut body, &report)?;
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                writeln!(out, "ek x_max={} sup_distance={:.6}", archive.x_max, report.sup_distance)?;
            }
        }
        Command::Moments(a) => {
            let archive = load_archive(&a.input)?;
            let moments = ek_moments(&archive, a.kmax)?;
            let mut body = b"k,moment,gaussian\n".to_vec();
            for (k, m) in (1..).zip(&moments) {
                writeln!(body, "{k},{m:.10},{}", gaussian_moment(k))?;
            }
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                writeln!(out, "moments x_max={} k_max={}", archive.x_max, a.kmax)?;
            }
        }
        Command::Euler(a) => {
            let e = euler_product(a.g, a.t, a.cutoff)?;
            writeln!(out, "{e}")?;
        }
        Command::Constant(a) => {
            let image = match a.image.as_str() {
                "surjective" => ImageData::surjective(),
                "none" => ImageData::none(),
                path => {
                    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                    text.parse()?
                }
            };
            let phi0 = match a.phi0 {
                Some(v) => v,
                None => phi(a.g, 0.0)?,
            };
            let c = lt_constant(a.g, a.t, phi0, &image, a.cutoff)?;
            writeln!(
                out,
                "c(A,{}) = {} in [{}, {}] (g={}, L={}, m_At={})",
                a.t,
                sig10(c.value),
                sig10(c.lower),
                sig10(c.upper),
                a.g,
                a.cutoff,
                c.m_at
            )?;
        }
        Command::GroupCount(a) => group_count(a, ctx, out)?,
        Command::Kloosterman(a) => {
            let mut body = b"alpha,k\n".to_vec();
            for alpha in 1..a.l {
                writeln!(body, "{alpha},{:.12}", kloosterman(a.l, alpha as i64)?)?;
            }
            let moment = match a.r {
                Some(r) if r < 2 => return Err(CliError::Usage("--r must be at least 2".into())),
                Some(r) => {
                    let c = kloosterman_moment_check(a.l, r, a.budget)?;
                    let verdict = if c.pass { "pass" } else { "FAIL" };
                    Some(format!("moment l={} r={r} lhs={:.9} rhs={} {verdict}", a.l, c.lhs, c.rhs))
                }
                None => None,
            };
            if let Some(line) = &moment {
                writeln!(body, "# {line}")?;
            }
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                writeln!(out, "kloosterman l={}", a.l)?;
                if let Some(line) = moment {
                    writeln!(out, "{line}")?;
                }
            }
        }
        Command::Density(a) => {
            let rows = grid(a.points)?
                .into_iter()
                .map(|x| Ok(DensityEstimate { x, phi: phi(a.g, x)?, stderr: 0.0 }))
                .collect::<Result<Vec<_>, DensityError>>()?;
            let mut body = Vec::new();
            write_density_csv(&mut body, &rows)?;
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                writeln!(out, "density g={} points={}", a.g, a.points)?;
            }
        }
        Command::McDensity(a) => {
            if a.g == 0 {
                return Err(CliError::Usage("--g must be positive".into()));
            }
            let rows = mc_density(a.g, a.samples, a.seed, &grid(a.points)?, workers(a.workers)?)?;
            let mut body = Vec::new();
            write_density_csv(&mut body, &rows)?;
            if ctx.emit_csv(a.out.as_deref(), body, out)? {
                writeln!(out, "mc-density g={} samples={} seed={}", a.g, a.samples, a.seed)?;
            }
        }
        Command::Centralizer(a) => match (a.x, a.y) {
            (Some(x), Some(y)) => {
                let p = EigenProfile::new(a.n, x, y, a.partition).map_err(CliError::from)?;
                let (dim_z, d) = centralizer_dim(&p);
                writeln!(out, "n={} x={} y={} partition={:?} dim_Z={dim_z} d={d}", a.n, x, y, p.partition)?;
            }
            _ => {
                let (d, p) = min_class_dim(a.n, a.trace_zero)?;
                writeln!(
                    out,
                    "n={} trace_zero={} min_d={d} at x={} y={} partition={:?}",
                    a.n, a.trace_zero, p.x, p.y, p.partition
                )?;
            }
        },
        Command::Verify(a) => {
            let checks = run_suite(a.suite);
            let passed = checks.iter().filter(|c| c.pass).count();
            for c in &checks {
                writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            writeln!(out, "verify: {passed}/{} passed", checks.len())?;
            if passed != checks.len() {
                return Err(CliError::Failed(format!("{} check(s) failed", checks.len() - passed)));
            }
        }
    }
    Ok(())
}

fn group_count(a: GroupCountArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let closed_available = a.m >= 2 && (a.g == 1 || a.g == 2) && frobstat::arith::is_prime(a.m);
    let table = if a.enumerate {
        enumerate_trace_counts(a.g, a.m, a.budget)?
    } else if closed_available {
        TraceTable::closed_form(a.g, a.m)?
    } else {
        return Err(CliError::Usage(format!(
            "no closed form for g={} m={}; pass --enumerate",
            a.g, a.m
        )));
    };
    let mut body = b"t,count,closed_form\n".to_vec();
    let mut agree = true;
    for t in 0..a.m as i64 {
        let closed = if closed_available { Some(closed_count(a.g, a.m, t)?) } else { None };
        agree &= closed.is_none_or(|c| c == table.count(t));
        let closed_str = closed.map_or(String::new(), |c| c.to_string());
        writeln!(body, "{t},{},{closed_str}", table.count(t))?;
    }
    if ctx.emit_csv(a.out.as_deref(), body, out)? {
        let source = if a.enumerate { "enumerated" } else { "closed-form" };
        let check = if closed_available { format!(" matches_closed_form={agree}") } else { String::new() };
        writeln!(out, "group-count g={} m={} order={} source={source}{check}", a.g, a.m, table.group_order)?;
    }
    Ok(())
}
