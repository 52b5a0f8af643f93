//! `quakelab`: experiments on earthquake maps of the disk.
//!
//! Exit codes: 0 success, 1 usage or IO error, 2 experiment FAIL,
//! 3 numerical non-convergence.

mod report;
mod svg;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use quake_core::analysis::{qs_constant_estimate, symmetric_modulus};
use quake_core::barycentric::{
    asymptotic_conformality_profile, barycentric_extension, beltrami_estimate, ExtensionConfig,
};
use quake_core::circle::{normalize_three_points, CircleMap, Tabulated, STANDARD_TRIPLE};
use quake_core::convergence::{convergence_experiment, MeasureSequence, Normalization, TestWindow};
use quake_core::earthquake::EarthquakeSpec;
use quake_core::generators::{
    gen_chain, gen_dyadic_family, gen_fan, gen_random_bounded, WeightRule,
};
use quake_core::hyp::{ccw_offset, DiskPoint};
use quake_core::io::{fmt17, parse_manifest, read_lamination, write_lamination};
use quake_core::lamination::MeasuredLamination;
use quake_core::par::Exec;
use quake_core::QuakeError;

use report::{Cell, Table};
use svg::Plot;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(QuakeError),
    Fail(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Fail(_) => 2,
            CliError::Core(QuakeError::NoConvergence { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Fail(m) => write!(f, "FAIL: {m}"),
        }
    }
}

impl From<QuakeError> for CliError {
    fn from(e: QuakeError) -> Self {
        CliError::Core(e)
    }
}

type Res<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "quakelab",
    version,
    about = "Earthquake maps of the hyperbolic disk"
)]
struct Cli {
    /// Run sampling loops on one thread (results are identical either way).
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a lamination file.
    Gen(GenArgs),
    /// Exact and sampled norm.
    Norm(NormArgs),
    /// Tabulate the boundary map.
    Boundary(BoundaryArgs),
    /// Extreme image cross-ratios of square quadruples.
    Qs(QsArgs),
    /// Symmetric modulus per scale.
    Sym(SymArgs),
    /// Asymptotic mass profile.
    Profile(ProfileArgs),
    /// Decay table for a sequence of laminations.
    Converge(ConvergeArgs),
    /// Barycentric extension, Beltrami coefficient and conformality profile.
    Barycentric(BaryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Dyadic,
    Fan,
    Chain,
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when absent).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Atom count (random, fan, chain).
    #[arg(long)]
    atoms: Option<usize>,
    /// Target norm (random).
    #[arg(long, default_value_t = 1.0)]
    norm: f64,
    /// Required for the random family.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of levels (dyadic).
    #[arg(long)]
    depth: Option<usize>,
    /// Weight rule (dyadic): `pow2`, `invsq`, `const:W`, `table:W1,W2,...`.
    #[arg(long, default_value = "pow2")]
    rule: String,
    /// Shared endpoint (fan).
    #[arg(long, default_value_t = 0.0)]
    vertex: f64,
    /// Comma-separated weights, one shared or one per atom (fan).
    #[arg(long, default_value = "1")]
    weights: String,
    /// Distance between consecutive atoms (chain).
    #[arg(long, default_value_t = 0.3)]
    spacing: f64,
    /// Common weight (chain).
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct NormArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundaryArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Post-compose so that 0, 2π/3, 4π/3 are fixed.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct QsArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SymArgs {
    file: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.01, 0.001])]
    scales: Vec<f64>,
    /// Samples per scale.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ProfileArgs {
    file: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.03, 0.01, 0.003, 0.001])]
    tlist: Vec<f64>,
    /// Hyperbolic radius of the probing disks.
    #[arg(long, default_value_t = 0.5)]
    r0: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConvergeArgs {
    /// One lamination path per line, last line `limit: <path>`.
    manifest: PathBuf,
    #[arg(long, default_value_t = 4000)]
    grid: usize,
    #[arg(long, default_value_t = 0.99)]
    window_r: f64,
    #[arg(long, default_value_t = 0.05)]
    bandwidth: f64,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BaryArgs {
    /// Lamination file; its earthquake boundary map is extended.
    #[arg(required_unless_present = "tabulated", conflicts_with = "tabulated")]
    file: Option<PathBuf>,
    /// Circle map given as `x h(x)` lines instead of a lamination.
    #[arg(long)]
    tabulated: Option<PathBuf>,
    /// Point `re,im` at which to evaluate.
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "profile",
        conflicts_with = "profile"
    )]
    at: Option<String>,
    /// Largest |Beltrami| on each circle of `--radii`.
    #[arg(long)]
    profile: bool,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.7, 0.9, 0.95, 0.99])]
    radii: Vec<f64>,
    /// Points per circle for `--profile`.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 1024)]
    quadrature: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn load(path: &Path) -> Res<MeasuredLamination> {
    if !path.exists() {
        return Err(CliError::Io(format!("{}: no such file", path.display())));
    }
    Ok(read_lamination(path)?)
}

fn quake(mu: &MeasuredLamination) -> CircleMap {
    CircleMap::Earthquake(EarthquakeSpec::with_default_base(mu.clone()).boundary_map())
}

fn parse_list(s: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("`{x}`: {e}")))
        })
        .collect()
}

fn parse_rule(s: &str) -> Res<WeightRule> {
    Ok(match s {
        "pow2" => WeightRule::Pow2,
        "invsq" => WeightRule::InvSquare,
        _ => {
            if let Some(w) = s.strip_prefix("const:") {
                WeightRule::Constant(parse_list(w)?[0])
            } else if let Some(t) = s.strip_prefix("table:") {
                WeightRule::Table(parse_list(t)?)
            } else {
                return Err(CliError::Usage(format!("unknown weight rule `{s}`")));
            }
        }
    })
}

fn parse_point(s: &str) -> Res<DiskPoint> {
    match parse_list(s)?.as_slice() {
        &[re, im] => DiskPoint::from_re_im(re, im).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage(format!("expected `re,im`, got `{s}`"))),
    }
}

fn read_tabulated(path: &Path) -> Res<CircleMap> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut knots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        match v.as_slice() {
            &[x, y] => knots.push((x, y)),
            _ => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected two numbers",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(CircleMap::Tabulated(Tabulated::new(knots)?))
}

fn cmd_gen(a: &GenArgs) -> Res {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this family")))
    };
    let (mu, desc) = match a.family {
        Family::Random => {
            let seed = a.seed.ok_or_else(|| {
                CliError::Usage("--seed is required for the random family".into())
            })?;
            let n = need(a.atoms, "atoms")?;
            (
                gen_random_bounded(n, a.norm, seed)?,
                format!("random atoms={n} norm={} seed={seed}", fmt17(a.norm)),
            )
        }
        Family::Dyadic => {
            let d = need(a.depth, "depth")?;
            (
                gen_dyadic_family(d, &parse_rule(&a.rule)?)?,
                format!("dyadic depth={d} rule={}", a.rule),
            )
        }
        Family::Fan => {
            let n = need(a.atoms, "atoms")?;
            (
                gen_fan(n, a.vertex, &parse_list(&a.weights)?)?,
                format!(
                    "fan atoms={n} vertex={} weights={}",
                    fmt17(a.vertex),
                    a.weights
                ),
            )
        }
        Family::Chain => {
            let n = need(a.atoms, "atoms")?;
            (
                gen_chain(n, a.spacing, a.weight)?,
                format!(
                    "chain atoms={n} spacing={} weight={}",
                    fmt17(a.spacing),
                    fmt17(a.weight)
                ),
            )
        }
    };
    let text = format!("# {desc}\n{}", write_lamination(&mu));
    match &a.output.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_norm(a: &NormArgs, exec: Exec) -> Res {
    let mu = load(&a.file)?;
    let exact = mu.thurston_norm_witness(exec);
    let sampled = mu.sampled_norm(a.samples, a.seed, exec);
    let mut t = Table::new(&[
        "exact_norm",
        "sampled_norm",
        "chain_first",
        "chain_last",
        "segment_start_re",
        "segment_start_im",
        "segment_end_re",
        "segment_end_im",
    ]);
    t.config("file", a.file.display())
        .config("atoms", mu.len())
        .config("samples", a.samples)
        .config("seed", a.seed);
    let seg = sampled.witness;
    let part = |f: fn(C64) -> f64, start: bool| -> Cell {
        seg.map(|s| {
            f(if start {
                s.start().value()
            } else {
                s.end().value()
            })
        })
        .into()
    };
    t.row(vec![
        exact.value.into(),
        sampled.value.into(),
        exact.pair.map(|p| p.0).into(),
        exact.pair.map(|p| p.1).into(),
        part(|z| z.re, true),
        part(|z| z.im, true),
        part(|z| z.re, false),
        part(|z| z.im, false),
    ]);
    t.write(a.output.out.as_deref())
}

fn cmd_boundary(a: &BoundaryArgs) -> Res {
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let mu = load(&a.file)?;
    let mut h = quake(&mu);
    if a.normalize {
        h = normalize_three_points(h, STANDARD_TRIPLE)?;
    }
    let xs: Vec<f64> = (0..a.grid)
        .map(|k| TAU * k as f64 / a.grid as f64)
        .collect();
    let img: Vec<f64> = xs.iter().map(|&x| h.eval(x)).collect();
    let mut lift = Vec::with_capacity(a.grid);
    for (k, &y) in img.iter().enumerate() {
        lift.push(if k == 0 {
            y
        } else {
            lift[k - 1] + ccw_offset(img[k - 1], y)
        });
    }
    let mut t = Table::new(&["x", "image", "lift"]);
    t.config("file", a.file.display())
        .config("atoms", mu.len())
        .config("grid", a.grid)
        .config("normalize", a.normalize);
    for k in 0..a.grid {
        t.row(vec![xs[k].into(), img[k].into(), lift[k].into()]);
    }
    t.write(a.output.out.as_deref())?;
    if let Some(p) = &a.svg {
        Plot::new("boundary map", "angle", "image angle (lifted)")
            .series("E", xs.iter().copied().zip(lift.iter().copied()).collect())
            .write(p, &command_line())?;
    }
    Ok(())
}

fn cmd_qs(a: &QsArgs, exec: Exec) -> Res {
    let mu = load(&a.file)?;
    let r = qs_constant_estimate(&quake(&mu), a.samples, a.seed, exec)?;
    let mut t = Table::new(&["extreme", "cross_ratio", "q1", "q2", "q3", "q4"]);
    t.config("file", a.file.display())
        .config("atoms", mu.len())
        .config("samples", a.samples)
        .config("seed", a.seed);
    for (name, cr, q) in [
        ("min", r.cr_min, r.witness_min),
        ("max", r.cr_max, r.witness_max),
    ] {
        let mut row = vec![Cell::Text(name.into()), cr.into()];
        row.extend(q.map(Cell::from));
        t.row(row);
    }
    t.write(a.output.out.as_deref())
}

fn cmd_sym(a: &SymArgs, exec: Exec) -> Res {
    let mu = load(&a.file)?;
    let p = symmetric_modulus(&quake(&mu), &a.scales, a.samples, a.seed, exec)?;
    let mut t = Table::new(&["scale", "beta"]);
    t.config("file", a.file.display())
        .config("atoms", mu.len())
        .config(
            "scales",
            a.scales
                .iter()
                .map(|&s| fmt17(s))
                .collect::<Vec<_>>()
                .join(","),
        )
        .config("samples_per_scale", a.samples)
        .config("seed", a.seed);
    for (&s, &b) in p.scales.iter().zip(&p.beta) {
        t.row(vec![s.into(), b.into()]);
    }
    t.write(a.output.out.as_deref())?;
    if let Some(path) = &a.svg {
        Plot::new("symmetric modulus", "scale", "beta")
            .log_x()
            .series(
                "beta",
                p.scales
                    .iter()
                    .copied()
                    .zip(p.beta.iter().copied())
                    .collect(),
            )
            .write(path, &command_line())?;
    }
    Ok(())
}

fn cmd_profile(a: &ProfileArgs, exec: Exec) -> Res {
    let mu = load(&a.file)?;
    let values = a
        .tlist
        .iter()
        .map(|&tv| mu.asymptotic_profile(tv, a.r0, a.samples, a.seed, exec))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["t", "profile"]);
    t.config("file", a.file.display())
        .config("atoms", mu.len())
        .config("r0", fmt17(a.r0))
        .config(
            "tlist",
            a.tlist
                .iter()
                .map(|&s| fmt17(s))
                .collect::<Vec<_>>()
                .join(","),
        )
        .config("samples", a.samples)
        .config("seed", a.seed);
    for (&tv, &v) in a.tlist.iter().zip(&values) {
        t.row(vec![tv.into(), v.into()]);
    }
    t.write(a.output.out.as_deref())?;
    if let Some(path) = &a.svg {
        Plot::new("asymptotic profile", "t", "sup disk mass")
            .log_x()
            .series("profile", a.tlist.iter().copied().zip(values).collect())
            .write(path, &command_line())?;
    }
    Ok(())
}

fn cmd_converge(a: &ConvergeArgs, exec: Exec) -> Res {
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| CliError::io(&a.manifest, e))?;
    let base = a.manifest.parent().unwrap_or(Path::new("."));
    let m = parse_manifest(&text, base)?;
    let seq = MeasureSequence::new(
        m.sequence
            .iter()
            .map(|p| load(p))
            .collect::<Res<Vec<_>>>()?,
    );
    let limit = load(&m.limit)?;
    let window = TestWindow::new(a.window_r, a.bandwidth)?;
    let table = convergence_experiment(&seq, &limit, a.grid, &window, exec)?;
    let mut t = Table::new(&[
        "index",
        "norm",
        "weak_star_discrepancy",
        "boundary_sup_distance",
    ]);
    let norm = match table.normalization {
        Normalization::CommonStratum(z) => format!("common stratum of {}", z.value()),
        Normalization::ThreePoint(p) => format!("three-point {}", p.map(fmt17).join(",")),
    };
    t.config("manifest", a.manifest.display())
        .config("members", seq.len())
        .config("grid", a.grid)
        .config("window_r", fmt17(a.window_r))
        .config("bandwidth", fmt17(a.bandwidth))
        .config("normalization", norm);
    for r in &table.rows {
        t.row(vec![
            r.index.into(),
            r.norm.into(),
            r.discrepancy.into(),
            r.sup_distance.into(),
        ]);
    }
    let verdict = if table.pass { "PASS" } else { "FAIL" };
    t.footer("verdict", verdict);
    t.write(a.output.out.as_deref())?;
    if let Some(path) = &a.svg {
        let col = |f: fn(&quake_core::convergence::DecayRow) -> f64| {
            table
                .rows
                .iter()
                .map(|r| (r.index as f64, f(r)))
                .collect::<Vec<_>>()
        };
        Plot::new("decay table", "index", "value")
            .log_y()
            .series("weak* discrepancy", col(|r| r.discrepancy))
            .series("boundary sup distance", col(|r| r.sup_distance))
            .write(path, &command_line())?;
    }
    if table.pass {
        Ok(())
    } else {
        Err(CliError::Fail(
            "measures and boundary maps do not decay jointly".into(),
        ))
    }
}

fn cmd_barycentric(a: &BaryArgs, exec: Exec) -> Res {
    let (h, source) = match (&a.file, &a.tabulated) {
        (Some(f), _) => (quake(&load(f)?), f.display().to_string()),
        (None, Some(t)) => (read_tabulated(t)?, format!("tabulated {}", t.display())),
        (None, None) => {
            return Err(CliError::Usage(
                "a lamination file or --tabulated is required".into(),
            ))
        }
    };
    let cfg = ExtensionConfig {
        quadrature_n: a.quadrature,
        tol: a.tol,
        max_iter: a.max_iter,
        ..ExtensionConfig::default()
    };
    let echo = |t: &mut Table| {
        t.config("map", &source)
            .config("quadrature", cfg.quadrature_n)
            .config("tol", fmt17(cfg.tol))
            .config("max_iter", cfg.max_iter)
            .config("damping", fmt17(cfg.damping))
            .config("refinements", cfg.refinements);
    };
    if a.profile {
        let rows = asymptotic_conformality_profile(&h, &a.radii, a.samples, &cfg, exec)?;
        let mut t = Table::new(&["radius", "max_beltrami"]);
        echo(&mut t);
        t.config("points_per_circle", a.samples);
        for &(r, v) in &rows {
            t.row(vec![r.into(), v.into()]);
        }
        t.write(a.output.out.as_deref())?;
        if let Some(path) = &a.svg {
            Plot::new("asymptotic conformality", "radius", "max |Beltrami|")
                .series("profile", rows)
                .write(path, &command_line())?;
        }
        return Ok(());
    }
    let z = parse_point(a.at.as_deref().expect("clap enforces --at or --profile"))?;
    let ext = barycentric_extension(&h, z, &cfg)?;
    let belt = beltrami_estimate(&h, z, None, &cfg)?;
    let mut t = Table::new(&[
        "z_re",
        "z_im",
        "w_re",
        "w_im",
        "residual",
        "iterations",
        "nodes",
        "beltrami_re",
        "beltrami_im",
        "beltrami_abs",
    ]);
    echo(&mut t);
    let (zv, wv) = (z.value(), ext.w.value());
    t.row(vec![
        zv.re.into(),
        zv.im.into(),
        wv.re.into(),
        wv.im.into(),
        ext.residual.into(),
        ext.iterations.into(),
        ext.nodes.into(),
        belt.value.re.into(),
        belt.value.im.into(),
        belt.value.norm().into(),
    ]);
    t.write(a.output.out.as_deref())
}

fn run(cli: Cli) -> Res {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Norm(a) => cmd_norm(a, exec),
        Cmd::Boundary(a) => cmd_boundary(a),
        Cmd::Qs(a) => cmd_qs(a, exec),
        Cmd::Sym(a) => cmd_sym(a, exec),
        Cmd::Profile(a) => cmd_profile(a, exec),
        Cmd::Converge(a) => cmd_converge(a, exec),
        Cmd::Barycentric(a) => cmd_barycentric(a, exec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quakelab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
