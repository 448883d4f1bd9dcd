//! `zonolab`: compute, verify, search and sample from the command line.
//!
//! Exit codes: 0 success, 1 a violation or failed check, 2 usage or input
//! error, 3 numerical failure.

mod manifest;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use manifest::RunManifest;
use zonolab::functionals::{power_k_volume_with, steiner_polynomial_with, EnumerationLimits, FunctionalsReport};
use zonolab::inequalities::{verify_theorem_suite, Suite, SuiteParams};
use zonolab::radii::{ratio_report_with, CircumOptions};
use zonolab::search::{constrained_minimize, thm5_counterexample, SearchConfig};
use zonolab::stochastic::{
    asymptotic_probe, cauchy_surface_integral, expected_random_wedge, family_member, kubota_intrinsic_integral,
    statistical_check, steiner_mc_volume, ProbeFamily, StatisticalVerdict,
};
use zonolab::zonotope::{make_cube, projection_body};
use zonolab::{digest, GeneratorSet, ZonoError};

#[derive(Parser)]
#[command(name = "zonolab", version, about = "Intrinsic volumes, radii and extremal problems for zonotopes")]
struct Cli {
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, global = true, env = "ZONOLAB_WORKERS", default_value_t = 0)]
    workers: usize,

    /// Where to write the run manifest; defaults to `manifest.json` in the
    /// output directory, or stderr when there is none.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact functionals of a generator set read from a JSON file.
    Compute(ComputeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Run an extremal search described by a JSON config.
    Search(SearchArgs),
    /// Write members of a zonotope family and their asymptotic table.
    Sample(SampleArgs),
}

#[derive(Args, Serialize)]
struct ComputeArgs {
    #[serde(skip)]
    input: PathBuf,
    /// Everything below that is defined for the input.
    #[arg(long)]
    all: bool,
    /// Report `V_k` individually (repeatable).
    #[arg(long = "vk", value_name = "K")]
    vk: Vec<usize>,
    #[arg(long)]
    radii: bool,
    #[arg(long)]
    steiner: bool,
    /// Total k-volume of power `--alpha` (repeatable).
    #[arg(long = "power-k", value_name = "K")]
    power_k: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    projection_body: bool,
    /// Lift the combinatorial enumeration bounds.
    #[arg(long)]
    allow_large: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Also write a CSV header and row.
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Suite name; `zonolab verify list` prints them.
    suite: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Shift size for the odd-dimensional counterexample.
    #[arg(long, default_value_t = 1e-2)]
    v_scale: f64,
    /// Directory for the suite CSV, summary and manifest.
    #[arg(long)]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    config: PathBuf,
    /// Run directory; defaults to `runs/<digest>-seed<seed>`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    /// random-uniform, planar-regular or fibonacci-sphere.
    family: String,
    /// Sizes: `50`, `8,16,32` or `2..64`.
    #[arg(long, default_value = "8..16")]
    n: String,
    /// Dimension; defaults to 2 for planar-regular and 3 otherwise.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "samples")]
    out_dir: PathBuf,
}

const MC_SUITES: [&str; 4] = ["lemma6", "cauchy", "kubota", "steiner"];
const COUNTEREXAMPLE_SUITE: &str = "thm5-counterexample";

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ZonoError> for Failure {
    fn from(e: ZonoError) -> Self {
        let code = match e {
            ZonoError::Numerical(_) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers;
    let result = zonolab::par::with_workers(workers, || run(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let mut m = RunManifest::start(cli.workers);
    let manifest_path = cli.manifest.clone();
    let (code, out_dir) = match cli.command {
        Command::Compute(a) => (compute(a, &mut m)?, None),
        Command::Verify(a) => {
            let dir = a.out_dir.clone();
            (verify(a, &mut m)?, dir)
        }
        Command::Search(a) => search(a, &mut m)?,
        Command::Sample(a) => {
            let dir = a.out_dir.clone();
            (sample(a, &mut m)?, Some(dir))
        }
    };
    let json = m.finish().to_json();
    match manifest_path.or_else(|| out_dir.map(|d| d.join("manifest.json"))) {
        Some(p) => write(&p, &(json + "\n"))?,
        None => eprintln!("manifest: {}", json.replace('\n', " ")),
    }
    Ok(code)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_failure(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn resolve_seed(seed: Option<u64>, m: &mut RunManifest) -> u64 {
    let s = seed.unwrap_or_else(|| {
        m.seed_from_entropy = true;
        rand::random()
    });
    m.seed = Some(s);
    s
}

fn compute(a: ComputeArgs, m: &mut RunManifest) -> CmdResult {
    let text = read(&a.input)?;
    let gs = GeneratorSet::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.input.display())))?;
    m.config(&json!({ "input": digest::generators(&gs), "flags": &a }));
    let limits = EnumerationLimits { allow_large: a.allow_large };
    let d = gs.dim();
    let mut report = FunctionalsReport::basic(&gs, limits)?;
    for &k in &a.vk {
        if k > d {
            return Err(Failure::usage(format!("--vk {k}: must be at most d = {d}")));
        }
        report.selected.insert(format!("V_{k}"), report.intrinsic_volumes[k]);
    }
    let full = gs.is_full_dimensional();
    if a.radii || a.all && full {
        report.radii = Some(ratio_report_with(&gs, CircumOptions { allow_large: a.allow_large, ..Default::default() })?);
    }
    if a.steiner || a.all {
        report.steiner = Some(steiner_polynomial_with(&gs, limits)?);
    }
    let mut power_ks = a.power_k.clone();
    if a.all && power_ks.is_empty() {
        power_ks = (1..=d).collect();
    }
    for k in power_ks {
        report.power_volumes.push(power_k_volume_with(&gs, k, a.alpha, limits)?);
    }
    if a.projection_body {
        report.projection_body = Some(projection_body(&gs)?);
    } else if a.all {
        match projection_body(&gs) {
            Ok(pb) => report.projection_body = Some(pb),
            Err(e) => {
                report.methods.insert("projection_body".into(), format!("undefined:{e}"));
            }
        }
    }
    let json = report.to_json() + "\n";
    match &a.out {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = &a.csv {
        write(p, &format!("{}\n{}\n", report.csv_header(), report.csv_row()))?;
    }
    Ok(0)
}

fn verify(a: VerifyArgs, m: &mut RunManifest) -> CmdResult {
    if a.suite == "list" {
        for s in Suite::ALL {
            println!("{s}");
        }
        for s in MC_SUITES.iter().chain([&COUNTEREXAMPLE_SUITE]) {
            println!("{s}");
        }
        return Ok(0);
    }
    if a.suite == COUNTEREXAMPLE_SUITE {
        m.config(&json!({ "suite": a.suite, "d": a.d, "v_scale": a.v_scale }));
        let r = thm5_counterexample(a.d, a.v_scale)?;
        let holds = r.cirr_prime < r.cirr_reg && r.width_rel_diff <= 1e-12;
        let summary = json!({
            "suite": a.suite,
            "holds": holds,
            "margin": r.margin(),
            "record": r,
        });
        emit_summary(&a.out_dir, &summary, None)?;
        return Ok(if holds { 0 } else { 1 });
    }
    if MC_SUITES.contains(&a.suite.as_str()) {
        let seed = resolve_seed(a.seed, m);
        m.config(&json!({ "suite": a.suite, "d": a.d, "samples": a.samples, "seed": seed }));
        let v = mc_suite(&a.suite, a.d, a.samples, seed)?;
        let summary = json!({
            "suite": a.suite,
            "d": a.d,
            "holds": v.passed,
            "z_score": v.check.z_score(),
            "verdict": v,
        });
        emit_summary(&a.out_dir, &summary, None)?;
        return Ok(if v.passed { 0 } else { 1 });
    }
    let suite: Suite = a.suite.parse().map_err(|e: ZonoError| {
        Failure::usage(format!("{e}, {}", MC_SUITES.iter().chain([&COUNTEREXAMPLE_SUITE]).copied().collect::<Vec<_>>().join(", ")))
    })?;
    let seed = resolve_seed(a.seed, m);
    m.config(&json!({ "suite": a.suite, "d": a.d, "trials": a.trials, "seed": seed }));
    let report = verify_theorem_suite(suite, SuiteParams::new(a.trials, seed, a.d))?;
    let summary: serde_json::Value = serde_json::from_str(&report.summary_json()).expect("summary is JSON");
    emit_summary(&a.out_dir, &summary, Some(report.to_csv()))?;
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn mc_suite(name: &str, d: usize, samples: usize, seed: u64) -> Result<StatisticalVerdict, Failure> {
    let cube = || make_cube(d, 1.0);
    Ok(match name {
        "lemma6" => statistical_check(samples, 4.0, |s| expected_random_wedge(d, s, seed))?,
        "cauchy" => {
            let c = cube()?;
            statistical_check(samples, 4.0, |s| cauchy_surface_integral(&c, s, seed))?
        }
        "kubota" => {
            let c = cube()?;
            statistical_check(samples, 4.0, |s| kubota_intrinsic_integral(&c, 1, d - 1, s, seed))?
        }
        "steiner" => {
            let c = cube()?;
            statistical_check(samples, 4.0, |s| steiner_mc_volume(&c, 1.0, s, seed))?
        }
        _ => unreachable!("caller checks the suite name"),
    })
}

fn emit_summary(out_dir: &Option<PathBuf>, summary: &serde_json::Value, csv: Option<String>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(summary).expect("summary serializes") + "\n";
    print!("{text}");
    if let Some(dir) = out_dir {
        write(&dir.join("summary.json"), &text)?;
        if let Some(csv) = csv {
            write(&dir.join("suite.csv"), &csv)?;
        }
    }
    Ok(())
}

fn search(a: SearchArgs, m: &mut RunManifest) -> Result<(u8, Option<PathBuf>), Failure> {
    let text = read(&a.config)?;
    let mut config: SearchConfig =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.config.display())))?;
    config.validate()?;
    config.seed = Some(resolve_seed(config.seed, m));
    m.config(&config);
    let outcome = constrained_minimize(&config)?;
    let dir = a.out_dir.unwrap_or_else(|| {
        PathBuf::from("runs").join(format!("{}-seed{}", &m.config_digest[..12], outcome.seed))
    });
    outcome.write_run_dir(&dir).map_err(|e| io_failure(&dir, e))?;
    println!(
        "{}",
        json!({
            "objective_value": outcome.objective_value,
            "best_restart": outcome.best_restart,
            "seed": outcome.seed,
            "run_dir": dir.display().to_string(),
        })
    );
    Ok((0, Some(dir)))
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("--n: expected `50`, `8,16,32` or `2..64`, got `{spec}`"));
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn sample(a: SampleArgs, m: &mut RunManifest) -> CmdResult {
    let family: ProbeFamily = a.family.parse()?;
    let d = a.d.unwrap_or(if family == ProbeFamily::PlanarRegular { 2 } else { 3 });
    let sizes = parse_sizes(&a.n)?;
    let seed = resolve_seed(a.seed, m);
    m.config(&json!({ "family": family, "d": d, "n": sizes, "seed": seed }));
    for &n in &sizes {
        let gs = family_member(family, d, n, seed)?;
        write(&a.out_dir.join(format!("{family}-d{d}-n{n}.json")), &(gs.to_json() + "\n"))?;
    }
    let table = asymptotic_probe(family, d, &sizes, seed)?;
    write(&a.out_dir.join(format!("{family}-d{d}-probe.csv")), &table.to_csv())?;
    let summary = serde_json::to_string_pretty(&table).expect("table serializes") + "\n";
    write(&a.out_dir.join(format!("{family}-d{d}-probe.json")), &summary)?;
    let violations: Vec<usize> = table.rows.iter().filter(|r| !r.lower_bounds_hold()).map(|r| r.n).collect();
    println!(
        "{}",
        json!({
            "family": family,
            "d": d,
            "sizes": sizes.len(),
            "fitted_ratio_exponent": table.fitted_ratio_exponent(),
            "bound_violations_at_n": violations,
            "out_dir": a.out_dir.display().to_string(),
        })
    );
    Ok(if violations.is_empty() { 0 } else { 1 })
}
