//! The `orbitsim` command line.
//!
//! Exit codes: 0 on success, 1 on runtime errors (IO, bad map files, failed
//! verification), 2 on usage errors. Relative `--out` paths and default
//! output names are placed under `$ORBITSIM_OUT_DIR` when it is set.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::dynmap::{builtin, format_uni_map, MapDescription, MapKind, RationalPoint};
use crate::experiments::{
    self, avoidance_scan, histogram, ks_statistic, mean, newton_map, output, periodicity_scan, ram_meet_probability,
    run_cycle_sweep, sn_curve, ExperimentError, MapSource, RamMeetConfig, ResultRow, SweepConfig,
};
use crate::ffield::first_primes;
use crate::orbit::DEFAULT_BUDGET;
use crate::randmodel::{
    cycle_pmf_asymptotic, cycle_pmf_exact, d2_constant, empty_intersection_prob, euler_product, normalized_cdf,
    normalized_density, simulate_random_map, survival_alpha, IntersectionMode, ModelDistribution, NormalizedCycleLaw,
    EXACT_CAP,
};

pub const OUT_DIR_ENV: &str = "ORBITSIM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "orbitsim", version, about = "Orbits of maps modulo primes and random-map statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cycle statistics of one orbit at every prime below a bound
    Sweep(SweepArgs),
    /// Normalised histogram of a sweep with the model density overlaid
    Hist(HistArgs),
    /// Fraction of random maps whose cycle meets the ramification locus
    Ramprob(RamArgs),
    /// Cumulative empty-intersection counts S(N) for random maps of A^3
    Sncurve(SnArgs),
    /// Whether alpha lies in the orbit of beta modulo each prime
    Avoid(AvoidArgs),
    /// Whether alpha is periodic modulo each prime
    Periodic(PeriodicArgs),
    /// Random-map model queries
    Model {
        #[command(subcommand)]
        query: ModelQuery,
    },
    /// Monte Carlo orbits of uniformly random maps
    Simulate(SimulateArgs),
    /// Write the Newton map of an integer polynomial as a map file
    Newton(NewtonArgs),
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Builtin map name (dim1, dim3, x3plus1, x2plus1)
    #[arg(long, conflicts_with = "map")]
    builtin: Option<String>,
    /// Builtin map name or path to a map file
    #[arg(long)]
    map: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Start point overriding the map file, e.g. `1,2,3`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<RationalPoint>>,
    /// Sweep primes p < PMAX
    #[arg(long)]
    pmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Step evaluations per prime before a row is censored
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug, Args)]
struct HistArgs {
    /// Sweep CSV to read
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    width: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RandomFamilyArgs {
    /// Coefficients are uniform on [-B, B]
    #[arg(long, default_value_t = 100)]
    coeff_bound: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug, Args)]
struct RamArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 500)]
    maps: u64,
    /// Use the first PRIMES primes
    #[arg(long, default_value_t = 100)]
    primes: usize,
    /// Integer start point (default: the origin)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<i64>>,
    #[command(flatten)]
    family: RandomFamilyArgs,
}

#[derive(Debug, Args)]
struct SnArgs {
    #[arg(long, default_value_t = 50)]
    maps: u64,
    #[arg(long, default_value_t = 500)]
    primes: usize,
    #[command(flatten)]
    family: RandomFamilyArgs,
}

#[derive(Debug, Args)]
struct AvoidArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, allow_hyphen_values = true)]
    alpha: RationalPoint,
    /// Orbit start (default: the map file's start point)
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<RationalPoint>,
    #[arg(long)]
    pmax: u64,
    /// Modulus for the residue-class breakdown; 0 disables it
    #[arg(long, default_value_t = 3)]
    classmod: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct PeriodicArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Point tested for periodicity (default: the map file's start point)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<RationalPoint>,
    #[arg(long)]
    pmax: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum ModelQuery {
    /// Prob(tau > k - 1) for a random map on n points
    Alpha {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Prob(lambda = l)
    Pmf {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        n: u64,
        /// Use the erfc approximation instead of the exact sum
        #[arg(long)]
        asymptotic: bool,
    },
    /// Limiting density sqrt(pi) erfc(s) of lambda / sqrt(2n)
    Density {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Limiting distribution function of lambda / sqrt(2n)
    Cdf {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Probability that the cycle misses a ramification locus of density 1/p in A^d
    Intersection {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        asymptotic: bool,
    },
    /// prod over p <= pmax of (1 - sqrt(pi/2) p^(1 - d/2))
    Euler {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        pmax: u64,
    },
    /// Limiting empty-intersection probability in dimension 2
    D2const,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct NewtonArgs {
    /// Coefficients from the constant term up, e.g. `-2,0,1` for x^2 - 2
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    coeffs: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<RationalPoint>,
    /// Output map file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(msg) => Failure::Usage(msg),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for '--{flag}': {msg}"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Hist(a) => hist(a),
        Command::Ramprob(a) => ramprob(a),
        Command::Sncurve(a) => sncurve(a),
        Command::Avoid(a) => avoid(a),
        Command::Periodic(a) => periodic(a),
        Command::Model { query } => model(query),
        Command::Simulate(a) => simulate(a),
        Command::Newton(a) => newton(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn out_path(out: Option<PathBuf>, default_name: &str) -> PathBuf {
    let p = out.unwrap_or_else(|| PathBuf::from(default_name));
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p,
    }
}

fn jobs(j: Option<usize>) -> Result<usize, Failure> {
    match j {
        Some(0) => Err(usage("jobs", "must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

impl MapArgs {
    fn source(&self) -> Result<(MapSource, String), Failure> {
        match (&self.builtin, &self.map) {
            (Some(name), _) => {
                if builtin::source(name).is_none() {
                    return Err(usage(
                        "builtin",
                        format!("unknown map `{name}` (known: {})", builtin::NAMES.join(", ")),
                    ));
                }
                Ok((MapSource::Builtin(name.clone()), name.clone()))
            }
            (None, Some(m)) => {
                let path = Path::new(m);
                if !path.exists() && builtin::source(m).is_some() {
                    Ok((MapSource::Builtin(m.clone()), m.clone()))
                } else {
                    Ok((MapSource::File(path.to_path_buf()), m.clone()))
                }
            }
            (None, None) => Err(Failure::Usage("one of '--builtin' or '--map' is required".into())),
        }
    }

    fn load(&self) -> Result<(MapDescription, String), Failure> {
        let (src, label) = self.source()?;
        Ok((src.load()?, label))
    }
}

fn map_meta(desc: &MapDescription, label: &str) -> Value {
    json!({ "source": label, "sha256": output::sha256_hex(&desc.text), "dimension": desc.map.dimension() })
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

fn sweep(a: SweepArgs) -> CliResult {
    if a.pmax < 3 {
        return Err(usage("pmax", "must be at least 3"));
    }
    let (src, label) = a.map.source()?;
    let desc = src.load()?;
    let workers = jobs(a.jobs)?;
    let out = out_path(a.out, "sweep.csv");
    let config = SweepConfig {
        map: MapSource::Inline(desc.clone()),
        start: a.start.clone(),
        prime_bound: a.pmax,
        seed: a.seed,
        output: Some(out.clone()),
        workers,
        budget: a.budget,
    };
    let rows = run_cycle_sweep(&config)?;
    output::write_sweep_csv(&out, &rows)?;
    let start = a.start.or(desc.start.clone()).unwrap_or_default();
    output::write_preamble(
        &out,
        "sweep",
        json!({
            "map": map_meta(&desc, &label),
            "start": start.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "pmax": a.pmax,
            "seed": a.seed,
            "jobs": workers,
            "budget": a.budget,
            "verify_fraction": experiments::VERIFY_FRACTION,
        }),
    )?;
    print_sweep_summary(&rows);
    println!("wrote {}", out.display());
    Ok(())
}

fn ctildes(rows: &[ResultRow]) -> Vec<f64> {
    rows.iter().filter(|r| r.is_complete()).filter_map(|r| r.ctilde).collect()
}

fn print_sweep_summary(rows: &[ResultRow]) {
    let good = rows.iter().filter(|r| r.good).count();
    let censored = rows.iter().filter(|r| r.censored).count();
    println!("primes: {}  good: {good}  censored: {censored}", rows.len());
    let c = ctildes(rows);
    if let Ok(m) = mean(&c) {
        println!("mean ctilde: {m:.6}  (model {:.6})", NormalizedCycleLaw::MEAN);
        let meets = rows.iter().filter(|r| r.meets_ram == Some(true)).count();
        println!("cycles meeting the ramification locus: {meets} of {}", c.len());
    }
}

fn model_cdf(t: f64) -> f64 {
    normalized_cdf(t).unwrap_or(0.0)
}

fn hist(a: HistArgs) -> CliResult {
    if !(a.width > 0.0 && a.width.is_finite()) {
        return Err(usage("width", "must be positive"));
    }
    let rows = output::read_sweep_csv(&a.input)?;
    let values = ctildes(&rows);
    let bins = histogram(&values, a.width, &NormalizedCycleLaw)?;
    let default_name = format!("{}.hist.csv", stem(&a.input));
    let out = match a.out {
        Some(o) => out_path(Some(o), ""),
        None => a.input.with_file_name(default_name),
    };
    output::write_hist_csv(&out, &bins)?;
    let ks = ks_statistic(&values, model_cdf)?;
    output::write_preamble(
        &out,
        "hist",
        json!({ "input": a.input.display().to_string(), "width": a.width, "values": values.len(), "ks": ks }),
    )?;
    println!("values: {}  mean ctilde: {:.6}  KS distance: {ks:.6}", values.len(), mean(&values)?);
    println!("wrote {}", out.display());
    Ok(())
}

fn family_config(dim: usize, primes: usize, maps: u64, f: &RandomFamilyArgs) -> Result<RamMeetConfig, Failure> {
    if maps == 0 {
        return Err(usage("maps", "must be at least 1"));
    }
    if primes == 0 {
        return Err(usage("primes", "must be at least 1"));
    }
    let mut c = RamMeetConfig::new(dim, first_primes(primes), maps);
    c.coeff_bound = f.coeff_bound;
    c.seed = f.seed;
    c.workers = jobs(f.jobs)?;
    c.budget = f.budget;
    Ok(c)
}

fn family_meta(c: &RamMeetConfig, start: &[i64]) -> Value {
    json!({
        "dimension": c.dimension,
        "degree": 2,
        "maps": c.map_count,
        "primes": c.primes.len(),
        "max_prime": c.primes.last().map(|p| p.get()),
        "coeff_bound": c.coeff_bound,
        "seed": c.seed,
        "start": start,
        "jobs": c.workers,
        "budget": c.budget,
    })
}

fn ramprob(a: RamArgs) -> CliResult {
    if !(1..=3).contains(&a.dim) {
        return Err(usage("dim", "must be 1, 2 or 3"));
    }
    let mut c = family_config(a.dim, a.primes, a.maps, &a.family)?;
    if let Some(s) = &a.start {
        if s.len() != a.dim {
            return Err(usage("start", format!("needs {} coordinates", a.dim)));
        }
    }
    c.start = a.start.clone();
    let rows = ram_meet_probability(&c)?;
    let out = out_path(a.family.out.clone(), &format!("ramprob_d{}.csv", a.dim));
    output::write_table(
        &out,
        &["p", "good_maps", "meets", "censored", "fraction"],
        rows.iter().map(|r| {
            vec![
                r.p.to_string(),
                r.good_maps.to_string(),
                r.meets.to_string(),
                r.censored.to_string(),
                r.fraction().map(|f| f.to_string()).unwrap_or_default(),
            ]
        }),
    )?;
    let start = a.start.unwrap_or_else(|| vec![0; a.dim]);
    output::write_preamble(&out, "ramprob", family_meta(&c, &start))?;
    if let Some(last) = rows.iter().rev().find(|r| r.fraction().is_some()) {
        println!("p = {}: {} of {} maps meet the ramification locus", last.p, last.meets, last.good_maps);
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn sncurve(a: SnArgs) -> CliResult {
    let c = family_config(3, a.primes, a.maps, &a.family)?;
    let rows = sn_curve(&c)?;
    let out = out_path(a.family.out.clone(), "sncurve.csv");
    output::write_sn_csv(&out, &rows)?;
    output::write_preamble(&out, "sncurve", family_meta(&c, &[0, 0, 0]))?;
    if let Some(last) = rows.last() {
        println!("N = {}: S(N) = {:.4}  model = {:.4}", last.n, last.s_n, last.model);
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn uni_map(desc: &MapDescription, flag: &str) -> Result<crate::dynmap::IntegerUniMap, Failure> {
    match &desc.map {
        MapKind::Uni(m) => Ok(m.clone()),
        MapKind::System(_) => Err(usage(flag, "needs a map of P^1 (dim = 1)")),
    }
}

fn default_point(given: Option<RationalPoint>, desc: &MapDescription, flag: &str) -> Result<RationalPoint, Failure> {
    given
        .or_else(|| desc.start.as_ref().map(|s| s[0]))
        .ok_or_else(|| Failure::Usage(format!("'--{flag}' is required: the map declares no start point")))
}

fn avoid(a: AvoidArgs) -> CliResult {
    if a.pmax < 3 {
        return Err(usage("pmax", "must be at least 3"));
    }
    let (desc, label) = a.map.load()?;
    let flag = if a.map.builtin.is_some() { "builtin" } else { "map" };
    let map = uni_map(&desc, flag)?;
    let beta = default_point(a.beta, &desc, "beta")?;
    let workers = jobs(a.jobs)?;
    let report = avoidance_scan(&map, a.alpha, beta, a.pmax, a.classmod, workers)?;
    let out = out_path(a.out, "avoid.csv");
    output::write_table(
        &out,
        &["p", "hit", "index", "censored"],
        report.rows.iter().map(|r| {
            vec![
                r.p.to_string(),
                if r.censored { String::new() } else { r.hit.is_some().to_string() },
                r.hit.map(|m| m.to_string()).unwrap_or_default(),
                r.censored.to_string(),
            ]
        }),
    )?;
    output::write_preamble(
        &out,
        "avoid",
        json!({
            "map": map_meta(&desc, &label),
            "alpha": a.alpha.to_string(),
            "beta": beta.to_string(),
            "pmax": a.pmax,
            "classmod": a.classmod,
            "jobs": workers,
            "skipped": report.skipped,
        }),
    )?;
    println!(
        "good primes: {}  skipped: {}  censored: {}  hits: {}  density: {}",
        report.rows.len(),
        report.skipped.len(),
        report.censored(),
        report.hits(),
        report.density().map(|d| format!("{d:.6}")).unwrap_or_else(|| "n/a".into())
    );
    for c in &report.classes {
        let f = c.fraction().map(|d| format!("{d:.6}")).unwrap_or_else(|| "n/a".into());
        println!("class {} mod {}: {} of {} primes  density {f}", c.residue, report.class_mod, c.hits, c.primes);
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn periodic(a: PeriodicArgs) -> CliResult {
    if a.pmax < 3 {
        return Err(usage("pmax", "must be at least 3"));
    }
    let (desc, label) = a.map.load()?;
    let flag = if a.map.builtin.is_some() { "builtin" } else { "map" };
    let map = uni_map(&desc, flag)?;
    let alpha = default_point(a.alpha, &desc, "alpha")?;
    let workers = jobs(a.jobs)?;
    let report = periodicity_scan(&map, alpha, a.pmax, workers)?;
    let out = out_path(a.out, "periodic.csv");
    output::write_table(&out, &["p", "periodic"], report.rows.iter().map(|(p, b)| vec![p.to_string(), b.to_string()]))?;
    output::write_preamble(
        &out,
        "periodic",
        json!({
            "map": map_meta(&desc, &label),
            "alpha": alpha.to_string(),
            "pmax": a.pmax,
            "jobs": workers,
            "skipped": report.skipped,
            "censored": report.censored,
        }),
    )?;
    let frac = report.periodic_fraction().map(|f| format!("{f:.6}")).unwrap_or_else(|| "n/a".into());
    println!(
        "good primes: {}  periodic: {}  non-periodic: {}  periodic fraction: {frac}",
        report.rows.len(),
        report.periodic_count(),
        report.non_periodic_count()
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn model_err(flag: &str) -> impl Fn(crate::randmodel::ModelError) -> Failure + '_ {
    move |e| usage(flag, e)
}

fn model(q: ModelQuery) -> CliResult {
    match q {
        ModelQuery::Alpha { k, n } => {
            if n == 0 {
                return Err(usage("n", "must be positive"));
            }
            println!("{}", survival_alpha(k, n));
        }
        ModelQuery::Pmf { l, n, asymptotic } => {
            if asymptotic {
                println!("{}", cycle_pmf_asymptotic(l as f64, n as f64));
            } else {
                println!("{}", cycle_pmf_exact(l, n).map_err(model_err("n"))?);
            }
        }
        ModelQuery::Density { s } => println!("{}", normalized_density(s).map_err(model_err("s"))?),
        ModelQuery::Cdf { t } => println!("{}", normalized_cdf(t).map_err(model_err("t"))?),
        ModelQuery::Intersection { p, d, asymptotic } => {
            let mode = if asymptotic { IntersectionMode::Asymptotic } else { IntersectionMode::ExactHybrid };
            let e = empty_intersection_prob(p, d, mode).map_err(model_err("d"))?;
            println!("{}", e.probability);
            println!("tail bound: {:e}  exact pmf: {}", e.tail_bound, e.exact_pmf);
        }
        ModelQuery::Euler { d, pmax } => {
            let e = euler_product(d, pmax).map_err(model_err("d"))?;
            println!("{:e}", e.product);
            println!(
                "log product: {}  factors: {}  skipped: {:?}  verdict: {:?}",
                e.log_product, e.factors, e.skipped, e.verdict
            );
        }
        ModelQuery::D2const => println!("{:.6}", d2_constant()),
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> CliResult {
    if a.n == 0 {
        return Err(usage("n", "must be positive"));
    }
    if a.trials == 0 {
        return Err(usage("trials", "must be positive"));
    }
    let workers = jobs(a.jobs)?;
    let stats = experiments::with_workers(workers, || simulate_random_map(a.n, a.trials, a.seed));
    let exact = if a.n <= EXACT_CAP { ModelDistribution::new(a.n).ok() } else { None };
    let model_pmf = |l: u64| match &exact {
        Some(d) => d.cycle_pmf(l),
        None => cycle_pmf_asymptotic(l as f64, a.n as f64),
    };
    let out = out_path(a.out, "simulate.csv");
    let max_l = stats.lambda_counts.len().saturating_sub(1) as u64;
    output::write_table(
        &out,
        &["lambda", "empirical", "model"],
        (1..=max_l).map(|l| vec![l.to_string(), stats.pmf_lambda(l).to_string(), model_pmf(l).to_string()]),
    )?;
    output::write_preamble(&out, "simulate", json!({ "n": a.n, "trials": a.trials, "seed": a.seed, "jobs": workers }))?;
    print!("mean lambda: {:.4}  mean tau: {:.4}", stats.mean_lambda(), stats.mean_tau());
    match &exact {
        Some(d) => println!("  (model {:.4}, {:.4})", d.mean_cycle_len(), d.mean_tau()),
        None => println!(),
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn newton(a: NewtonArgs) -> CliResult {
    let map = match newton_map(&a.coeffs) {
        Err(ExperimentError::NotSquarefree) => return Err(usage("coeffs", "polynomial is not squarefree")),
        Err(ExperimentError::Config(msg)) => return Err(usage("coeffs", msg)),
        r => r?,
    };
    let f = crate::dynmap::IntPoly::from_univariate(&a.coeffs);
    let text = format_uni_map(&map, a.start, &format!("Newton map of f(x) = {f}"));
    match a.out {
        None => print!("{text}"),
        Some(o) => {
            let out = out_path(Some(o), "");
            std::fs::write(&out, text).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["orbitsim"]), 2);
        assert_eq!(run(["orbitsim", "frobnicate"]), 2);
        assert_eq!(run(["orbitsim", "sweep", "--builtin", "dim1"]), 2);
        assert_eq!(run(["orbitsim", "sweep", "--builtin", "nope", "--pmax", "10"]), 2);
        assert_eq!(run(["orbitsim", "model", "euler", "--d", "2", "--pmax", "10"]), 2);
        assert_eq!(run(["orbitsim", "newton", "--coeffs", "0,0,1"]), 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["orbitsim", "--help"]), 0);
    }

    #[test]
    fn missing_map_file_is_runtime_error() {
        assert_eq!(run(["orbitsim", "sweep", "--map", "/nonexistent/x.map", "--pmax", "10"]), 1);
    }
}
