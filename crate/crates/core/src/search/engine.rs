//! Work-stack driver shared by both problem families.
//!
//! Boxes are taken from a depth-first stack in fixed-size batches. A batch is
//! processed in parallel, but outcomes are applied in batch order, so the
//! result does not depend on the number of workers.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::symmetry::{close_orbits, order_contract, Symmetry};
use super::{
    make_certificate, EnumerationReport, Origin, ProblemSpec, PruningMode, SearchSettings,
    SearchStats, SolutionCertificate, UndecidedBox, UndecidedReason, METHOD,
};
use crate::aniso::AnisoProblem;
use crate::bounds::SearchBounds;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::krawczyk::{
    krawczyk_step, newton_point, refine, Certified, KrawczykOutcome, KrawczykStatus, Residual,
};
use crate::pairs::max_dist_up;

const BATCH: usize = 256;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Resumable state of an interrupted run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub problem_id: String,
    pub problem: ProblemSpec,
    pub bounds: SearchBounds,
    pub initial_region: IntervalBox,
    pub settings: SearchSettings,
    pub pending: Vec<IntervalBox>,
    pub certificates: Vec<SolutionCertificate>,
    pub undecided: Vec<UndecidedBox>,
    pub stats: SearchStats,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text)?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint version {} (expected {CHECKPOINT_VERSION})",
                cp.version
            )));
        }
        if cp.problem.id() != cp.problem_id {
            return Err(Error::Checkpoint(
                "problem id does not match the stored problem".into(),
            ));
        }
        Ok(cp)
    }

    /// Writes through a temporary file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self)?;
        crate::report::write_atomic(path, text.as_bytes())
    }
}

impl ProblemSpec {
    fn bodies(&self) -> usize {
        match self {
            ProblemSpec::Aniso(p) => p.k(),
            ProblemSpec::Nbody(p) => p.n(),
        }
    }

    fn positions(&self, x: &IntervalBox) -> Vec<(Interval, Interval)> {
        match self {
            ProblemSpec::Aniso(_) => AnisoProblem::positions(x),
            ProblemSpec::Nbody(p) => p.positions(x),
        }
    }

    /// Box coordinates that move body `i`.
    fn vars_of_body(&self, i: usize) -> Vec<usize> {
        match self {
            ProblemSpec::Aniso(_) => vec![2 * i, 2 * i + 1],
            ProblemSpec::Nbody(p) if i == p.n() - 1 => (0..Residual::dim(p)).collect(),
            ProblemSpec::Nbody(p) => (0..2).filter_map(|a| p.var_index(i, a)).collect(),
        }
    }

    fn contract(&self, x: &IntervalBox) -> Option<IntervalBox> {
        match self {
            ProblemSpec::Aniso(p) => p.contract_com(x),
            ProblemSpec::Nbody(_) => Some(x.clone()),
        }
    }

    fn cluster_excluded(&self, x: &IntervalBox) -> bool {
        match self {
            ProblemSpec::Aniso(p) => p.inertia_excluded(x) || p.cluster_excluded(x),
            ProblemSpec::Nbody(p) => p.inertia_excluded(x) || p.cluster_excluded(x),
        }
    }

    fn rows_excluded(&self, x: &IntervalBox) -> bool {
        match self {
            ProblemSpec::Aniso(p) => p.rows_excluded(x),
            ProblemSpec::Nbody(p) => p.rows_excluded(x),
        }
    }

    fn eval(&self, x: &IntervalBox) -> Result<IntervalBox> {
        match self {
            ProblemSpec::Aniso(p) => p.eval(x),
            ProblemSpec::Nbody(p) => p.eval(x),
        }
    }

    pub(crate) fn step(&self, x: &IntervalBox) -> Result<KrawczykOutcome> {
        match self {
            ProblemSpec::Aniso(p) => krawczyk_step(p, x),
            ProblemSpec::Nbody(p) => krawczyk_step(p, x),
        }
    }

    pub(crate) fn newton(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            ProblemSpec::Aniso(p) => newton_point(p, x, 12, 1e-14),
            ProblemSpec::Nbody(p) => newton_point(p, x, 12, 1e-14),
        }
    }

    pub(crate) fn refine(&self, c: Certified, iters: usize) -> Certified {
        match self {
            ProblemSpec::Aniso(p) => refine(p, c, iters),
            ProblemSpec::Nbody(p) => refine(p, c, iters),
        }
    }

    pub(crate) fn residual_norm(&self, x: &[f64]) -> f64 {
        let f = match self {
            ProblemSpec::Aniso(p) => p.eval_point(x),
            ProblemSpec::Nbody(p) => p.eval_point(x),
        };
        f.map_or(f64::INFINITY, |v| v.iter().fold(0.0, |m, r| m.max(r.abs())))
    }
}

enum Kind {
    Pruned,
    Excluded,
    Certified(Box<SolutionCertificate>),
    Undecided(IntervalBox),
    Split(IntervalBox, IntervalBox),
    /// Contracted enough to be worth another pass without splitting.
    Retry(IntervalBox),
}

/// See `Ctx::split_pair`.
const PAIR_SPLIT_FRACTION: f64 = 0.25;

struct Outcome {
    kind: Kind,
    /// Volume removed by contraction before the final verdict.
    pruned_vol: f64,
    excluded_vol: f64,
    collision_split: bool,
}

struct Ctx<'a> {
    problem: &'a ProblemSpec,
    problem_id: &'a str,
    bounds: &'a SearchBounds,
    settings: &'a SearchSettings,
    scale: Vec<f64>,
    /// `None` when the symmetry reduction is off or there is nothing to use.
    symmetry: Option<Symmetry>,
}

impl Ctx<'_> {
    fn process(&self, x: &IntervalBox) -> Result<Outcome> {
        let mut out = Outcome {
            kind: Kind::Pruned,
            pruned_vol: 0.0,
            excluded_vol: 0.0,
            collision_split: false,
        };
        let orig = x;
        let full = self.settings.pruning == PruningMode::Full;
        let ordered = match &self.symmetry {
            None => None,
            Some(sym) => match order_contract(x, sym) {
                Some(y) => Some(y),
                None => {
                    out.pruned_vol = x.volume();
                    return Ok(out);
                }
            },
        };
        let x0 = ordered.as_ref().unwrap_or(x);
        let x = if full {
            match self.problem.contract(x0) {
                Some(c) => c,
                None => {
                    out.pruned_vol = x.volume();
                    return Ok(out);
                }
            }
        } else {
            x0.clone()
        };
        out.pruned_vol = orig.volume() - x.volume();
        let take_rest = |mut out: Outcome, kind: Kind, vol: f64, excluded: bool| {
            if excluded {
                out.excluded_vol += vol;
            } else {
                out.pruned_vol += vol;
            }
            out.kind = kind;
            out
        };

        let pos = self.problem.positions(&x);
        let n = self.problem.bodies();
        let mut collision = None;
        for i in 0..n {
            for j in i + 1..n {
                if max_dist_up(pos[i], pos[j]) < self.bounds.min_pair_dist(i, j) {
                    return Ok(take_rest(out, Kind::Pruned, x.volume(), false));
                }
                if collision.is_none()
                    && (pos[i].0 - pos[j].0).contains_zero()
                    && (pos[i].1 - pos[j].1).contains_zero()
                {
                    collision = Some((i, j));
                }
            }
        }
        if full && self.problem.cluster_excluded(&x) {
            return Ok(take_rest(out, Kind::Pruned, x.volume(), false));
        }
        if let Some((i, j)) = collision {
            // The full evaluation would fail; the rows clear of the
            // collision may still exclude the box.
            if self.problem.rows_excluded(&x) {
                return Ok(take_rest(out, Kind::Excluded, x.volume(), true));
            }
            out.collision_split = true;
            let (a, b) = self.split_pair(&x, i, j);
            return Ok(take_rest(out, Kind::Split(a, b), 0.0, false));
        }

        match self.problem.eval(&x) {
            Ok(f) if f.iter().any(|c| !c.contains_zero()) => {
                return Ok(take_rest(out, Kind::Excluded, x.volume(), true));
            }
            Ok(_) => {}
            Err(Error::PossibleCollision { i, j }) => {
                out.collision_split = true;
                let (a, b) = self.split_pair(&x, i, j);
                return Ok(take_rest(out, Kind::Split(a, b), 0.0, false));
            }
            Err(e) => return Err(e),
        }

        let k = match self.problem.step(&x) {
            Ok(k) => k,
            Err(Error::PossibleCollision { i, j }) => {
                out.collision_split = true;
                let (a, b) = self.split_pair(&x, i, j);
                return Ok(take_rest(out, Kind::Split(a, b), 0.0, false));
            }
            Err(e) => return Err(e),
        };
        match k.status {
            KrawczykStatus::Excluded => Ok(take_rest(out, Kind::Excluded, x.volume(), true)),
            KrawczykStatus::UniqueZero => {
                let cert = Certified {
                    region: x,
                    image: k.image.expect("unique zero has an image"),
                    contraction_norm: k.contraction_norm,
                };
                let cert = self.problem.refine(cert, self.settings.refine_iterations);
                let c = make_certificate(self.problem, self.problem_id, cert, Origin::Enumeration);
                out.kind = Kind::Certified(Box::new(c));
                Ok(out)
            }
            KrawczykStatus::Undecided => {
                let y = k.refined.unwrap_or_else(|| x.clone());
                out.excluded_vol += x.volume() - y.volume();
                if y.width() < self.settings.epsilon_c3 {
                    out.kind = Kind::Undecided(y);
                } else if y.volume() < 0.5 * x.volume() && y.width() < x.width() {
                    out.kind = Kind::Retry(y);
                } else {
                    let (a, b) = self.split_guided(&y, k.newton_estimate.as_deref());
                    out.kind = Kind::Split(a, b);
                }
                Ok(out)
            }
        }
    }

    /// Cuts the coordinate that is widest relative to the initial box.
    fn split(&self, x: &IntervalBox) -> (IntervalBox, IntervalBox) {
        let vars: Vec<usize> = (0..x.dims()).collect();
        self.split_among(x, &vars)
    }

    /// Like `split`, but keeps the cut away from `zero`, an estimate of a
    /// zero inside the box, so that it is not cut in half.
    fn split_guided(&self, x: &IntervalBox, zero: Option<&[f64]>) -> (IntervalBox, IntervalBox) {
        let vars: Vec<usize> = (0..x.dims()).collect();
        let v = self.widest(x, &vars);
        let ratio = match zero {
            Some(z) if x.contains_point(z) => cut_ratio(x, v, z[v], self.settings.split_ratio),
            _ => self.settings.split_ratio,
        };
        x.bisect(v, ratio)
    }

    /// Cuts one of the coordinates that move bodies `i` or `j`, unless the
    /// pair is already much narrower than the rest of the box; then the
    /// obstruction is the other bodies and a plain split is better. Without
    /// the cluster tests only the distance floor removes a tight pair, so
    /// the pair is always cut.
    fn split_pair(&self, x: &IntervalBox, i: usize, j: usize) -> (IntervalBox, IntervalBox) {
        let mut vars = self.problem.vars_of_body(i);
        vars.extend(self.problem.vars_of_body(j));
        vars.sort_unstable();
        vars.dedup();
        let rel = |v: &usize| x[*v].width() / self.scale[*v];
        let pair_w = vars.iter().map(rel).fold(0.0, f64::max);
        let all_w = (0..x.dims()).map(|v| rel(&v)).fold(0.0, f64::max);
        let full = self.settings.pruning == PruningMode::Full;
        if vars.is_empty() || (full && pair_w < PAIR_SPLIT_FRACTION * all_w) {
            return self.split(x);
        }
        self.split_among(x, &vars)
    }

    fn split_among(&self, x: &IntervalBox, vars: &[usize]) -> (IntervalBox, IntervalBox) {
        x.bisect(self.widest(x, vars), self.settings.split_ratio)
    }

    /// The coordinate among `vars` widest relative to the initial box.
    fn widest(&self, x: &IntervalBox, vars: &[usize]) -> usize {
        let mut best = vars[0];
        let mut best_rel = -1.0;
        for &v in vars {
            let rel = x[v].width() / self.scale[v];
            if rel > best_rel {
                best = v;
                best_rel = rel;
            }
        }
        best
    }
}

/// Split ratio for coordinate `v` that leaves the zero coordinate `z` at
/// least a tenth of the width away from the cut.
fn cut_ratio(x: &IntervalBox, v: usize, z: f64, r: f64) -> f64 {
    let (lo, w) = (x[v].lo(), x[v].width());
    if !(w > 0.0) || (z - (lo + r * w)).abs() >= 0.1 * w {
        return r;
    }
    let rel = (z - lo) / w;
    if rel + 0.3 < 0.95 {
        rel + 0.3
    } else {
        rel - 0.3
    }
}

/// Widths of the initial box, used to compare coordinates when splitting.
fn scales(region: &IntervalBox) -> Vec<f64> {
    region
        .iter()
        .map(|c| if c.width() > 0.0 { c.width() } else { 1.0 })
        .collect()
}

#[cfg(feature = "parallel")]
fn process_batch(ctx: &Ctx<'_>, batch: &[IntervalBox], workers: usize) -> Vec<Result<Outcome>> {
    use rayon::prelude::*;
    let run = || batch.par_iter().map(|x| ctx.process(x)).collect();
    if workers == 1 {
        return batch.iter().map(|x| ctx.process(x)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn process_batch(ctx: &Ctx<'_>, batch: &[IntervalBox], _workers: usize) -> Vec<Result<Outcome>> {
    batch.iter().map(|x| ctx.process(x)).collect()
}

fn worker_count(requested: usize) -> usize {
    if requested > 0 {
        return requested;
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub(crate) fn run(
    problem: ProblemSpec,
    bounds: SearchBounds,
    region: IntervalBox,
    settings: &SearchSettings,
    resume: Option<Checkpoint>,
) -> Result<EnumerationReport> {
    settings.validate()?;
    let problem_id = problem.id();
    let (mut stack, mut certs, mut undecided, mut stats) = match resume {
        Some(cp) => {
            if cp.problem_id != problem_id {
                return Err(Error::Checkpoint(
                    "checkpoint belongs to a different problem".into(),
                ));
            }
            (cp.pending, cp.certificates, cp.undecided, cp.stats)
        }
        None => {
            let stats = SearchStats {
                volume: super::VolumeLedger {
                    initial: region.volume(),
                    ..Default::default()
                },
                ..Default::default()
            };
            (vec![region.clone()], Vec::new(), Vec::new(), stats)
        }
    };
    let ctx = Ctx {
        problem: &problem,
        problem_id: &problem_id,
        bounds: &bounds,
        settings,
        scale: scales(&region),
        symmetry: if settings.symmetry {
            Symmetry::new(&problem, &region)
        } else {
            None
        },
    };
    let workers = worker_count(settings.workers);
    let mut last_checkpoint = stats.boxes_processed;
    let mut last_progress = stats.boxes_processed;
    let started = std::time::Instant::now();

    while !stack.is_empty() && stats.boxes_processed < settings.max_boxes {
        let room = (settings.max_boxes - stats.boxes_processed).min(BATCH as u64) as usize;
        let take = room.min(stack.len());
        let batch: Vec<IntervalBox> = stack.split_off(stack.len() - take);
        let outcomes = process_batch(&ctx, &batch, workers);
        for (x, res) in batch.iter().zip(outcomes) {
            let o = res?;
            stats.boxes_processed += 1;
            stats.volume.pruned += o.pruned_vol;
            stats.volume.excluded += o.excluded_vol;
            if o.collision_split {
                stats.collision_splits += 1;
            }
            match o.kind {
                Kind::Pruned => stats.pruned_by_bounds += 1,
                Kind::Excluded => stats.pruned_by_krawczyk += 1,
                Kind::Certified(c) => {
                    stats.certified += 1;
                    stats.volume.certified += x.volume() - o.pruned_vol - o.excluded_vol;
                    certs.push(*c);
                }
                Kind::Undecided(y) => {
                    stats.undecided += 1;
                    stats.volume.undecided += y.volume();
                    undecided.push(UndecidedBox {
                        region: y,
                        reason: UndecidedReason::BelowThreshold,
                    });
                }
                Kind::Split(a, b) => {
                    stats.splits += 1;
                    stack.push(b);
                    stack.push(a);
                }
                Kind::Retry(y) => stack.push(y),
            }
        }
        if settings.progress_every > 0
            && stats.boxes_processed - last_progress >= settings.progress_every
        {
            last_progress = stats.boxes_processed;
            let v = &stats.volume;
            eprintln!(
                "[{:>8.1}s] boxes {} pending {} certified {} undecided {} resolved volume {:.6}",
                started.elapsed().as_secs_f64(),
                stats.boxes_processed,
                stack.len(),
                stats.certified,
                stats.undecided,
                v.accounted() / v.initial
            );
        }
        if settings.checkpoint_every > 0
            && stats.boxes_processed - last_checkpoint >= settings.checkpoint_every
        {
            if let Some(path) = &settings.checkpoint_path {
                last_checkpoint = stats.boxes_processed;
                Checkpoint {
                    version: CHECKPOINT_VERSION,
                    problem_id: problem_id.clone(),
                    problem: problem.clone(),
                    bounds: bounds.clone(),
                    initial_region: region.clone(),
                    settings: settings.clone(),
                    pending: stack.clone(),
                    certificates: certs.clone(),
                    undecided: undecided.clone(),
                    stats: stats.clone(),
                }
                .save(path)?;
            }
        }
    }
    for y in stack.drain(..).rev() {
        stats.undecided += 1;
        stats.volume.undecided += y.volume();
        undecided.push(UndecidedBox {
            region: y,
            reason: UndecidedReason::Budget,
        });
    }

    let mut certs = match &ctx.symmetry {
        Some(sym) => close_orbits(&problem, &problem_id, certs, sym)?,
        None => certs,
    };
    certs.sort_by(|a, b| cmp_points(&a.midpoint, &b.midpoint));
    let mut shape_counts = BTreeMap::new();
    for c in &certs {
        *shape_counts.entry(c.shape_class).or_insert(0) += 1;
    }
    let complete = undecided.is_empty();
    Ok(EnumerationReport {
        problem_id,
        problem,
        bounds,
        settings: settings.clone(),
        initial_region: region,
        method: METHOD.to_string(),
        certificates: certs,
        shape_counts,
        stats,
        undecided,
        complete,
    })
}

pub fn cmp_points(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
