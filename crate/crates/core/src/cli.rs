//! Command-line front end.
//!
//! Exit codes: 0 for a complete run (or a clean verification), 2 for an
//! incomplete run or a failed verification, 1 for usage, configuration and
//! I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analytic::{analytic_report, l4_hessian_params, Family};
use crate::aniso::AnisoProblem;
use crate::bridge::{pair_solutions, PairingReport};
use crate::error::{Error, Result};
use crate::interval::IntervalBox;
use crate::masses::MassVector;
use crate::nbody::ReducedNBodyProblem;
use crate::report::{verify_report, write_atomic, Payload, ReportFile};
use crate::search::{
    enumerate_aniso, enumerate_nbody, light_bodies, resume, two_heavy_region, Checkpoint,
    EnumerationReport, ProblemSpec, PruningMode, SearchSettings, ShapeClass,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ccenum",
    version,
    about = "Rigorous enumeration of planar central configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all solutions of the anisotropic problem.
    AnisoEnumerate(RunConfig),
    /// Enumerate zeros of the reduced n-body system in a region.
    NbodyEnumerate(RunConfig),
    /// Closed-form solution families, certified.
    Analytic(AnalyticArgs),
    /// Pair a finite-mass run with an anisotropic run.
    Compare(CompareArgs),
    /// Re-check every certificate in a report.
    Verify(VerifyArgs),
}

/// Parameters of an enumeration run. Every field can come from the config
/// file (same names, snake_case) or from a flag; flags win.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// TOML file with any of these settings.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Number of light bodies (anisotropic problem).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Use masses 1/k.
    #[arg(long)]
    pub equal_masses: Option<bool>,
    /// Comma-separated masses (all bodies, in order).
    #[arg(long, value_delimiter = ',')]
    pub masses: Option<Vec<f64>>,

    /// 0-based body whose y coordinate is pinned (n-body problem).
    #[arg(long)]
    pub gauge: Option<usize>,
    /// Reduced-system box as comma-separated `lo,hi` pairs, flattened.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub region: Option<Vec<f64>>,
    /// Light-body masses for the (2 + k) setup.
    #[arg(long, value_delimiter = ',')]
    pub light_masses: Option<Vec<f64>>,
    /// The two heavy masses for the (2 + k) setup.
    #[arg(long, value_delimiter = ',')]
    pub heavy_masses: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub light_x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub light_y: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub heavy_x: Option<Vec<f64>>,

    #[arg(long)]
    pub epsilon_c3: Option<f64>,
    #[arg(long)]
    pub max_boxes: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// full | floor-only
    #[arg(long)]
    pub pruning: Option<String>,
    #[arg(long)]
    pub split_ratio: Option<f64>,
    /// Search one symmetric image of each solution and rebuild the rest.
    #[arg(long)]
    pub symmetry: Option<bool>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint_every: Option<u64>,
    /// Continue from a checkpoint file.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub progress_every: Option<u64>,
    /// Seed for sampling-based self-tests; enumeration is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Report file (JSON).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Write certificate midpoints as CSV point sets for plotting.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($flags:ident, $file:ident, $($f:ident),* $(,)?) => {
        RunConfig { config: None, $($f: $flags.$f.or($file.$f)),* }
    };
}

impl RunConfig {
    /// Flags override values loaded from the config file.
    fn resolve(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        let flags = self;
        Ok(merge_fields!(
            flags,
            file,
            k,
            a,
            b,
            equal_masses,
            masses,
            gauge,
            region,
            light_masses,
            heavy_masses,
            light_x,
            light_y,
            heavy_x,
            epsilon_c3,
            max_boxes,
            workers,
            pruning,
            split_ratio,
            symmetry,
            checkpoint,
            checkpoint_every,
            resume,
            progress_every,
            seed,
            out,
            emit_plot_data,
        ))
    }

    fn settings(&self) -> Result<SearchSettings> {
        let mut s = SearchSettings::default();
        if let Some(v) = self.epsilon_c3 {
            s.epsilon_c3 = v;
        }
        if let Some(v) = self.max_boxes {
            s.max_boxes = v;
        }
        if let Some(v) = self.workers {
            s.workers = v;
        }
        if let Some(v) = self.split_ratio {
            s.split_ratio = v;
        }
        if let Some(v) = self.symmetry {
            s.symmetry = v;
        }
        if let Some(v) = self.checkpoint_every {
            s.checkpoint_every = v;
        }
        if let Some(v) = self.progress_every {
            s.progress_every = v;
        }
        s.checkpoint_path = self.checkpoint.clone();
        if s.checkpoint_every > 0 && s.checkpoint_path.is_none() {
            return Err(config_error(
                "checkpoint",
                "checkpoint_every needs a checkpoint path",
            ));
        }
        s.pruning = match self.pruning.as_deref() {
            None | Some("full") => PruningMode::Full,
            Some("floor-only") | Some("floor_only") => PruningMode::FloorOnly,
            Some(other) => {
                return Err(config_error(
                    "pruning",
                    &format!("unknown mode {other:?} (full | floor-only)"),
                ))
            }
        };
        s.validate()?;
        Ok(s)
    }

    fn aniso_problem(&self) -> Result<AnisoProblem> {
        let a = self.a.ok_or_else(|| config_error("a", "missing"))?;
        let b = self.b.ok_or_else(|| config_error("b", "missing"))?;
        let mu = match (&self.masses, self.equal_masses.unwrap_or(false)) {
            (Some(m), false) => {
                if let Some(k) = self.k {
                    if k != m.len() {
                        return Err(config_error(
                            "masses",
                            &format!("{} masses given but k = {k}", m.len()),
                        ));
                    }
                }
                MassVector::from_values(m).map_err(|e| config_error("masses", &e.to_string()))?
            }
            (None, true) => {
                let k = self.k.ok_or_else(|| config_error("k", "missing"))?;
                MassVector::equal(k, 1.0).map_err(|e| config_error("k", &e.to_string()))?
            }
            (Some(_), true) => return Err(config_error("masses", "conflicts with equal_masses")),
            (None, false) => return Err(config_error("masses", "give masses or equal_masses")),
        };
        AnisoProblem::new(mu, a, b)
    }

    fn nbody_problem(&self) -> Result<(ReducedNBodyProblem, IntervalBox)> {
        if let Some(light) = &self.light_masses {
            let heavy = self
                .heavy_masses
                .as_ref()
                .ok_or_else(|| config_error("heavy_masses", "missing"))?;
            if heavy.len() != 2 {
                return Err(config_error("heavy_masses", "need exactly two values"));
            }
            let pair = |v: &Option<Vec<f64>>, key: &str| -> Result<(f64, f64)> {
                match v.as_deref() {
                    Some([lo, hi]) => Ok((*lo, *hi)),
                    _ => Err(config_error(key, "need `lo,hi`")),
                }
            };
            let lx = pair(&self.light_x, "light_x")?;
            let ly = pair(&self.light_y, "light_y")?;
            let hx = pair(&self.heavy_x, "heavy_x")?;
            let k = light.len();
            let mut m = light.clone();
            m.extend_from_slice(heavy);
            let masses = MassVector::from_values(&m)
                .map_err(|e| config_error("light_masses", &e.to_string()))?;
            let prob = ReducedNBodyProblem::new(masses, k)?;
            let region = two_heavy_region(k, [lx, ly], hx)
                .map_err(|e| config_error("light_x", &e.to_string()))?;
            return Ok((prob, region));
        }
        let m = self
            .masses
            .as_ref()
            .ok_or_else(|| config_error("masses", "missing"))?;
        let masses =
            MassVector::from_values(m).map_err(|e| config_error("masses", &e.to_string()))?;
        let gauge = self.gauge.unwrap_or(0);
        let prob = ReducedNBodyProblem::new(masses, gauge)
            .map_err(|e| config_error("gauge", &e.to_string()))?;
        let flat = self
            .region
            .as_ref()
            .ok_or_else(|| config_error("region", "missing"))?;
        if flat.len() != 2 * prob.dim() {
            return Err(config_error(
                "region",
                &format!(
                    "need {} values (lo,hi per coordinate), got {}",
                    2 * prob.dim(),
                    flat.len()
                ),
            ));
        }
        let pairs: Vec<(f64, f64)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        let region =
            IntervalBox::from_bounds(&pairs).map_err(|e| config_error("region", &e.to_string()))?;
        Ok((prob, region))
    }
}

fn config_error(key: &str, message: &str) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.to_string(),
    }
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| {
        let key = e
            .message()
            .split('`')
            .nth(1)
            .unwrap_or("config")
            .to_string();
        Error::Config {
            key,
            message: e.to_string().trim().to_string(),
        }
    })
}

#[derive(Args, Debug)]
struct AnalyticArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Mass of each body; the body count is `1/mu`.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Ok(match s {
        "triangle" | "isosceles-triangle" => Family::Triangle,
        "rhombus" => Family::Rhombus,
        "rectangle" => Family::Rectangle,
        "collinear-x" => Family::CollinearX,
        "collinear-y" => Family::CollinearY,
        _ => return Err(format!("unknown family {s:?}")),
    })
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Report of the finite-mass (n-body) run.
    pgu: PathBuf,
    /// Report of the anisotropic run.
    phu: PathBuf,
    #[arg(long, default_value_t = 5e-3)]
    threshold: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write the side-by-side table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    report: PathBuf,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::AnisoEnumerate(cfg) => {
            let cfg = cfg.resolve()?;
            let settings = cfg.settings()?;
            let start = Instant::now();
            let report = match &cfg.resume {
                Some(path) => resume(Checkpoint::load(path)?, &settings)?,
                None => enumerate_aniso(&cfg.aniso_problem()?, &settings)?,
            };
            finish_enumeration(&cfg, report, start)
        }
        Command::NbodyEnumerate(cfg) => {
            let cfg = cfg.resolve()?;
            let settings = cfg.settings()?;
            let start = Instant::now();
            let report = match &cfg.resume {
                Some(path) => resume(Checkpoint::load(path)?, &settings)?,
                None => {
                    let (prob, region) = cfg.nbody_problem()?;
                    enumerate_nbody(&prob, &region, &settings)?
                }
            };
            finish_enumeration(&cfg, report, start)
        }
        Command::Analytic(args) => run_analytic(args),
        Command::Compare(args) => run_compare(args),
        Command::Verify(args) => run_verify(&args.report),
    }
}

fn paint(text: &str, code: &str) -> String {
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    if color {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn status_word(complete: bool) -> String {
    if complete {
        paint("COMPLETE", "32")
    } else {
        paint("INCOMPLETE", "31")
    }
}

fn finish_enumeration(cfg: &RunConfig, report: EnumerationReport, start: Instant) -> Result<i32> {
    let elapsed = start.elapsed().as_secs_f64();
    println!("{}", summary(&report));
    println!("{} in {elapsed:.1}s", status_word(report.complete));
    if let Some(path) = &cfg.emit_plot_data {
        write_atomic(path, plot_csv(&report).as_bytes())?;
    }
    let complete = report.complete;
    if let Some(path) = &cfg.out {
        let echo = serde_json::to_value(cfg)?;
        ReportFile::new(echo, elapsed, Payload::Enumeration(report)).save(path)?;
    }
    Ok(if complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

/// Human-readable digest of a run.
pub fn summary(report: &EnumerationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "problem {}", report.problem_id);
    let st = &report.stats;
    let _ = writeln!(
        s,
        "boxes {}  pruned by bounds {}  excluded {}  collision splits {}  undecided {}",
        st.boxes_processed,
        st.pruned_by_bounds,
        st.pruned_by_krawczyk,
        st.collision_splits,
        st.undecided
    );
    let _ = writeln!(s, "certificates {}", report.certificates.len());
    for shape in ShapeClass::ALL {
        let n = report.count(shape);
        if n > 0 {
            let _ = writeln!(s, "  {:<30} {n}", shape.label());
        }
    }
    s.pop();
    s
}

fn plot_csv(report: &EnumerationReport) -> String {
    let mut s = String::from("certificate,shape,body,x,y\n");
    for (i, c) in report.certificates.iter().enumerate() {
        for (b, p) in report
            .problem
            .point_positions(&c.midpoint)
            .iter()
            .enumerate()
        {
            let _ = writeln!(s, "{i},{},{b},{:.17e},{:.17e}", c.shape_class, p.0, p.1);
        }
    }
    s
}

fn run_analytic(args: AnalyticArgs) -> Result<i32> {
    let k = match (args.k, args.mu) {
        (Some(k), _) => k,
        (None, Some(mu)) if mu > 0.0 => {
            let k = (1.0 / mu).round() as usize;
            if ((k as f64) * mu - 1.0).abs() > 1e-9 {
                return Err(config_error("mu", "must be 1/k for an integer k"));
            }
            k
        }
        (None, None) => match args.family {
            Family::Triangle => 3,
            Family::Rhombus | Family::Rectangle => 4,
            _ => return Err(config_error("k", "missing")),
        },
        _ => return Err(config_error("mu", "must be positive")),
    };
    let start = Instant::now();
    let report = analytic_report(k, args.a, args.b, args.family)?;
    for (name, v) in &report.parameters {
        println!("{name} = {:.12} (width {:.1e})", v.mid(), v.width());
    }
    println!("certificates {}", report.certificates.len());
    if let Some(path) = &args.out {
        let echo = serde_json::json!({
            "family": args.family, "k": k, "a": args.a, "b": args.b,
        });
        ReportFile::new(
            echo,
            start.elapsed().as_secs_f64(),
            Payload::Analytic(report),
        )
        .save(path)?;
    }
    Ok(EXIT_OK)
}

fn enumeration(path: &Path) -> Result<EnumerationReport> {
    match ReportFile::load(path)?.payload {
        Payload::Enumeration(r) => Ok(r),
        _ => Err(Error::InvalidProblem(format!(
            "{} is not an enumeration report",
            path.display()
        ))),
    }
}

/// Checks that the limit problem matches the finite-mass setup: same light
/// mass ratios and `(a, b)` close to the Hessian at the equilateral point.
fn check_compatible(pgu: &EnumerationReport, phu: &EnumerationReport) -> Result<()> {
    let (ProblemSpec::Nbody(p), ProblemSpec::Aniso(q)) = (&pgu.problem, &phu.problem) else {
        return Err(Error::InvalidProblem(
            "compare needs an n-body report and an anisotropic report".into(),
        ));
    };
    let light = light_bodies(p);
    if light.len() != q.k() {
        return Err(Error::InvalidProblem(format!(
            "{} light bodies against a {}-body limit problem",
            light.len(),
            q.k()
        )));
    }
    let theta: f64 = light.iter().map(|&i| p.masses.get(i).mid()).sum();
    for (n, &i) in light.iter().enumerate() {
        let rel = p.masses.get(i).mid() / theta;
        if (rel - q.mu.get(n).mid()).abs() > 1e-6 {
            return Err(Error::InvalidProblem(
                "light mass ratios differ from the limit masses".into(),
            ));
        }
    }
    let heavy: Vec<f64> = (0..p.n())
        .filter(|i| !light.contains(i))
        .map(|i| p.masses.get(i).mid())
        .collect();
    if heavy.len() == 2 {
        let s = heavy[0] + heavy[1];
        let ab = l4_hessian_params(heavy[0] / s, 1.0 - heavy[0] / s)?;
        if (ab.a.mid() - q.a).abs() > 1e-3 || (ab.b.mid() - q.b).abs() > 1e-3 {
            return Err(Error::InvalidProblem(format!(
                "limit problem has (a, b) = ({}, {}), heavy bodies give ({:.6}, {:.6})",
                q.a,
                q.b,
                ab.a.mid(),
                ab.b.mid()
            )));
        }
    }
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<i32> {
    let pgu = enumeration(&args.pgu)?;
    let phu = enumeration(&args.phu)?;
    check_compatible(&pgu, &phu)?;
    let start = Instant::now();
    let pairing = pair_solutions(&pgu, &phu, args.threshold)?;
    print!("{}", pairing_table(&pairing));
    println!(
        "pairs {}  unmatched {} / {}  max discrepancy {:.3e}",
        pairing.pairs.len(),
        pairing.unmatched_pgu.len(),
        pairing.unmatched_phu.len(),
        pairing.max_discrepancy
    );
    if let Some(path) = &args.csv {
        write_atomic(path, pairing_csv(&pairing).as_bytes())?;
    }
    let ok = pairing.is_perfect() && pgu.complete && phu.complete;
    if let Some(path) = &args.out {
        let echo = serde_json::json!({
            "pgu": args.pgu, "phu": args.phu, "threshold": args.threshold,
        });
        ReportFile::new(
            echo,
            start.elapsed().as_secs_f64(),
            Payload::Pairing(pairing),
        )
        .save(path)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_INCOMPLETE })
}

fn pairing_table(p: &PairingReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>4} {:>4} {:>4} {:>14} {:>14} {:>14} {:>14}",
        "pgu", "phu", "body", "normalized x", "normalized y", "limit x", "limit y"
    );
    for m in &p.pairs {
        for (body, (q, &j)) in m.normalized.iter().zip(&m.relabel).enumerate() {
            let t = m.limit[j];
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>4} {:>14.9} {:>14.9} {:>14.9} {:>14.9}",
                m.pgu, m.phu, body, q.0, q.1, t.0, t.1
            );
        }
    }
    s
}

fn pairing_csv(p: &PairingReport) -> String {
    let mut s =
        String::from("pgu,phu,body,normalized_x,normalized_y,limit_x,limit_y,discrepancy\n");
    for m in &p.pairs {
        for (body, (q, &j)) in m.normalized.iter().zip(&m.relabel).enumerate() {
            let t = m.limit[j];
            let _ = writeln!(
                s,
                "{},{},{body},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                m.pgu, m.phu, q.0, q.1, t.0, t.1, m.discrepancy
            );
        }
    }
    s
}

fn run_verify(path: &Path) -> Result<i32> {
    let report = ReportFile::load(path)?;
    let summary = verify_report(&report)?;
    for i in &summary.failed {
        println!("certificate {i}: FAILED");
    }
    println!(
        "verified {} certificates, {} failed",
        summary.checked,
        summary.failed.len()
    );
    Ok(if summary.ok() {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    })
}
