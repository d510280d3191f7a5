//! `mapgrowth`: experiments on the growth of Lipschitz homotopy classes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! guard (iteration budget).

mod plot;
mod space;

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use mapgrowth::cw_spaces::{preset, verify_zeta, Family};
use mapgrowth::graded_lie::LieAlgebra;
use mapgrowth::growth_count::{
    count_grid, count_pairs, fit_growth, l_grid, CountOptions, GrowthError, GrowthSample, Spacing,
    DEFAULT_BUDGET,
};
use mapgrowth::lip_cost::{
    budget_sweep, example2_side_conditions, BudgetError, SideConditions, DEFAULT_CONSTANT,
};
use mapgrowth::rational::parse_rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use space::{SpaceArgs, SpaceKind};

/// Largest degree `hall` will enumerate unless `--cap` raises it.
const HALL_CAP: u32 = 24;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Resource(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Resource(m) => write!(f, "resource limit: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::BudgetExceeded { .. } => CliError::Resource(e.to_string()),
            GrowthError::Fit(_) | GrowthError::Pool(_) => CliError::Verification(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BudgetError> for CliError {
    fn from(e: BudgetError) -> Self {
        match e {
            BudgetError::TooLarge(_) => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mapgrowth", version, about = "Growth of Lipschitz homotopy classes of maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Log => Spacing::Log,
            SpacingArg::Linear => Spacing::Linear,
        }
    }
}

#[derive(Debug, clap::Args)]
struct CountArgs {
    /// Maximum loop iterations before giving up with exit code 3.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Group values of `a` sharing the same bound on `|b|`.
    #[arg(long)]
    blocked: bool,
}

impl CountArgs {
    fn options(&self) -> CountOptions {
        CountOptions {
            budget: self.budget,
            blocked: self.blocked,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the space realizing a target exponent `r > 4`.
    Solve {
        #[arg(long)]
        r: String,
    },
    /// Exact number of realizable degree pairs at one L.
    Count {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "L")]
        big_l: u64,
        #[command(flatten)]
        count: CountArgs,
        /// Append an `L,count` row to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count on a grid of L, fit the growth exponent, and plot.
    Estimate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 16)]
        lmin: u64,
        #[arg(long, default_value_t = 256)]
        lmax: u64,
        #[arg(long, default_value_t = 9)]
        points: usize,
        #[arg(long, value_enum, default_value = "log")]
        spacing: SpacingArg,
        #[command(flatten)]
        count: CountArgs,
        /// Directory for samples.csv, fit.json and plot.svg.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for the grid; defaults to the available cores.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// List a Hall basis with its dimension table and Poincaré-series check.
    Hall {
        /// Lie degrees of the generators, e.g. `2,3`.
        #[arg(value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[arg(long, default_value_t = HALL_CAP)]
        cap: u32,
    },
    /// Check that the attaching class is a nonzero Hall element.
    VerifyZeta {
        #[arg(long = "l")]
        ell: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Check the Lipschitz budgets on random admissible degree pairs.
    Budget {
        #[arg(long, value_enum, default_value = "example1")]
        space: SpaceKind,
        /// One or more values of L, comma separated.
        #[arg(long = "L", value_delimiter = ',', default_value = "100")]
        big_l: Vec<u64>,
        #[arg(long, default_value = "1/5")]
        eps: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for report.json; the report goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mapgrowth: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve { r } => cmd_solve(&r),
        Command::Count {
            space,
            big_l,
            count,
            out,
        } => cmd_count(&space, big_l, count.options(), out.as_deref()),
        Command::Estimate {
            space,
            lmin,
            lmax,
            points,
            spacing,
            count,
            out,
            workers,
        } => {
            let config = EstimateConfig {
                lmin,
                lmax,
                points,
                spacing: spacing.into(),
                options: count.options(),
                out,
                workers: workers.unwrap_or_else(default_workers),
            };
            cmd_estimate(&space, &config)
        }
        Command::Hall {
            degrees,
            max_degree,
            cap,
        } => cmd_hall(&degrees, max_degree, cap),
        Command::VerifyZeta { ell, m, p, q } => cmd_verify_zeta(ell, m, p, q),
        Command::Budget {
            space,
            big_l,
            eps,
            trials,
            seed,
            out,
        } => cmd_budget(space, &big_l, &eps, trials, seed, out.as_deref()),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn print_json(v: &impl Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(path, s + "\n")?;
    Ok(())
}

fn cmd_solve(r: &str) -> Result<(), CliError> {
    let r = parse_rational(r).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = mapgrowth::cw_spaces::solve_parameters(r).map_err(|e| CliError::Usage(e.to_string()))?;
    print_json(&spec.to_json())
}

fn cmd_count(space: &SpaceArgs, l: u64, opts: CountOptions, out: Option<&Path>) -> Result<(), CliError> {
    if l == 0 {
        return Err(CliError::Usage("--L must be at least 1".into()));
    }
    let system = space.resolve()?;
    let count = count_pairs(&system, l, opts)?;
    println!("{count}");
    if let Some(path) = out {
        let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if fresh {
            w.write_record(["L", "count"]).map_err(csv_err)?;
        }
        w.write_record([l.to_string(), count.to_string()]).map_err(csv_err)?;
        w.flush()?;
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

struct EstimateConfig {
    lmin: u64,
    lmax: u64,
    points: usize,
    spacing: Spacing,
    options: CountOptions,
    out: PathBuf,
    workers: usize,
}

impl EstimateConfig {
    fn validate(&self) -> Result<Vec<u64>, CliError> {
        if self.points < 4 {
            return Err(CliError::Usage(format!("--points must be at least 4, got {}", self.points)));
        }
        if self.lmin < 2 {
            return Err(CliError::Usage(format!("--lmin must be at least 2, got {}", self.lmin)));
        }
        if self.lmax <= self.lmin {
            return Err(CliError::Usage("--lmax must exceed --lmin".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let ls = l_grid(self.lmin, self.lmax, self.points, self.spacing)?;
        if ls.len() < 4 {
            return Err(CliError::Usage(format!(
                "the grid {}..{} has only {} distinct values of L",
                self.lmin,
                self.lmax,
                ls.len()
            )));
        }
        Ok(ls)
    }
}

fn cmd_estimate(space: &SpaceArgs, config: &EstimateConfig) -> Result<(), CliError> {
    let ls = config.validate()?;
    let system = space.resolve()?;
    fs::create_dir_all(&config.out)?;

    // rows are flushed as soon as each grid prefix is done, so an interrupted
    // run leaves every completed row on disk
    let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(config.out.join("samples.csv"))?));
    writer.write_record(["L", "count"]).map_err(csv_err)?;
    writer.flush()?;
    let writer = Mutex::new((writer, None::<CliError>));
    let samples = count_grid(&system, &ls, config.options, config.workers, |s: &GrowthSample| {
        let mut guard = writer.lock().expect("csv writer lock");
        let (w, failed) = &mut *guard;
        if failed.is_some() {
            return;
        }
        let res = w
            .write_record([s.l.to_string(), s.count.to_string()])
            .map_err(csv_err)
            .and_then(|()| w.flush().map_err(CliError::from));
        if let Err(e) = res {
            *failed = Some(e);
        }
    });
    let (_, failed) = writer.into_inner().expect("csv writer lock");
    let samples = samples?;
    if let Some(e) = failed {
        return Err(e);
    }

    let fit = fit_growth(&samples)?;
    write_json(&config.out.join("fit.json"), &fit)?;
    fs::write(config.out.join("plot.svg"), plot::render(&samples, &fit))?;
    print_json(&fit)
}

fn cmd_hall(degrees: &[u32], max_degree: u32, cap: u32) -> Result<(), CliError> {
    if max_degree > cap {
        return Err(CliError::Usage(format!(
            "max degree {max_degree} exceeds the cap {cap}; pass --cap to raise it"
        )));
    }
    if degrees.contains(&0) {
        return Err(CliError::Usage("generator degrees must be positive".into()));
    }
    let alg = LieAlgebra::from_degrees(degrees).map_err(|e| CliError::Usage(e.to_string()))?;
    let basis = alg.hall_basis(max_degree);
    let report = alg.hilbert_check(max_degree);

    let mut out = io::stdout().lock();
    let names: Vec<String> = alg
        .generators()
        .iter()
        .map(|g| format!("{} (degree {})", g.name, g.lie_degree()))
        .collect();
    writeln!(out, "generators: {}", names.join(", "))?;
    writeln!(out, "hall basis through degree {max_degree}: {} elements", basis.len())?;
    for h in &basis {
        writeln!(out, "  {:>3}  {}", h.degree(), alg.display(h.tree()))?;
    }
    writeln!(out, "degree  dim  tensor  product")?;
    for row in &report.rows {
        writeln!(
            out,
            "{:>6}  {:>3}  {:>6}  {:>7}",
            row.degree, row.basis_dim, row.tensor_coeff, row.product_coeff
        )?;
    }
    match report.first_mismatch {
        None => writeln!(out, "hilbert check: pass")?,
        Some(d) => {
            writeln!(out, "hilbert check: FAIL at degree {d}")?;
            return Err(CliError::Verification(format!("Poincaré series mismatch at degree {d}")));
        }
    }
    Ok(())
}

fn cmd_verify_zeta(ell: u32, m: u32, p: u32, q: u32) -> Result<(), CliError> {
    let v = verify_zeta(ell, m, p, q).map_err(|e| CliError::Usage(e.to_string()))?;
    print_json(&v)?;
    if v.pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!("ζ = {} is not a nonzero Hall element", v.zeta)))
    }
}

fn cmd_budget(
    space: SpaceKind,
    ls: &[u64],
    eps: &str,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if ls.is_empty() || ls.iter().any(|&l| l < 2) {
        return Err(CliError::Usage("every --L must be at least 2".into()));
    }
    let (report, pass) = match space {
        SpaceKind::Example1 => {
            let eps = parse_rational(eps).map_err(|e| CliError::Usage(e.to_string()))?;
            let spec = preset(Family::Example1);
            let sweep = budget_sweep(&spec, ls, eps, trials, seed, DEFAULT_CONSTANT)?;
            let pass = sweep.pass();
            let mut v = serde_json::to_value(&sweep).map_err(|e| CliError::Io(e.to_string()))?;
            v["space"] = json!("example1");
            v["pass"] = json!(pass);
            (v, pass)
        }
        SpaceKind::Example2 => example2_budget(ls, trials, seed)?,
        other => {
            return Err(CliError::Usage(format!(
                "budget checks exist for example1 and example2, not {other:?}"
            )))
        }
    };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_json(&dir.join("report.json"), &report)?;
            eprintln!("wrote {}", dir.join("report.json").display());
        }
        None => print_json(&report)?,
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(budget_failure_summary(&report)))
    }
}

fn budget_failure_summary(report: &Value) -> String {
    let mut parts = Vec::new();
    if report["all_stages_pass"] == json!(false) {
        parts.push("some stage exceeded its budget".to_string());
    }
    if report["e_identity"] == json!(false) {
        parts.push("a²b ≠ st + e for some trial".to_string());
    }
    if let Some(slopes) = report["slopes"].as_array() {
        for s in slopes.iter().filter(|s| s["flat"] == json!(false)) {
            parts.push(format!(
                "{} ratio slope {:.3} (observed exponent {:.3}, claimed {:.3})",
                s["stage"].as_str().unwrap_or("?"),
                s["slope"].as_f64().unwrap_or(f64::NAN),
                s["observed_exponent"].as_f64().unwrap_or(f64::NAN),
                s["claimed_exponent"].as_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    if let Some(levels) = report["levels"].as_array() {
        for lev in levels.iter().filter(|l| l["pass"] == json!(false)) {
            parts.push(format!("side conditions fail at L = {}", lev["L"]));
        }
    }
    parts.join("; ")
}

#[derive(Serialize)]
struct SideLevel {
    #[serde(rename = "L")]
    l: u64,
    trials: usize,
    pairs: Vec<(String, String)>,
    checks: Vec<SideConditions>,
    pass: bool,
}

/// Side conditions for `example2` on random pairs with `|a| ≤ L³`,
/// `|b| ≤ L⁴`, `|ab| ≤ L⁶`.
fn example2_budget(ls: &[u64], trials: usize, seed: u64) -> Result<(Value, bool), CliError> {
    let constant = DEFAULT_CONSTANT as u128;
    let mut levels = Vec::new();
    for &l in ls {
        let l3 = (l as i128).checked_pow(3);
        let l4 = (l as i128).checked_pow(4);
        let l6 = (l as i128).checked_pow(6);
        let (Some(l3), Some(l4), Some(l6)) = (l3, l4, l6) else {
            return Err(CliError::Resource(format!("L = {l} is too large for example2 checks")));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ l.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut pairs = Vec::with_capacity(trials);
        let mut checks = Vec::with_capacity(trials);
        for _ in 0..trials {
            let a: i128 = rng.random_range(-l3..=l3);
            let b_lim = if a == 0 { l4 } else { (l6 / a.abs()).min(l4) };
            let b: i128 = rng.random_range(-b_lim..=b_lim);
            checks.push(example2_side_conditions(l, a, b, constant)?);
            pairs.push((a.to_string(), b.to_string()));
        }
        let pass = checks.iter().all(|c| c.st_le_2l && c.figure_bound);
        levels.push(SideLevel {
            l,
            trials,
            pairs,
            checks,
            pass,
        });
    }
    let pass = levels.iter().all(|l| l.pass);
    let report = json!({
        "space": "example2",
        "seed": seed,
        "constant": DEFAULT_CONSTANT,
        "trials": trials,
        "levels": levels,
        "pass": pass,
    });
    Ok((report, pass))
}
