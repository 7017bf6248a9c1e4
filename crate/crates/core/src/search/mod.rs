//! Branch-and-bound enumeration of all zeros in a box.
//!
//! Every box popped from the work stack ends up in exactly one class:
//! pruned by an a-priori bound, excluded (no zero, C1), certified (exactly one
//! non-degenerate zero, C2), undecided below the width threshold (C3), or
//! split. A run is complete iff no box is left undecided.

mod engine;
mod shape;
mod symmetry;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::aniso::AnisoProblem;
use crate::bounds::SearchBounds;
use crate::error::{Error, Result};
use crate::hexfloat::{hex_f64, hex_vec, to_hex};
use crate::interval::{Interval, IntervalBox};
use crate::krawczyk::{inflate, krawczyk_step, Certified, KrawczykStatus, Residual};
use crate::nbody::{check_gauge_validity, ReducedNBodyProblem};

pub use engine::{cmp_points, Checkpoint, CHECKPOINT_VERSION};
pub use shape::{classify_points, ShapeClass};

/// Which optional pruning tests run in addition to Krawczyk and the
/// pairwise distance floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruningMode {
    /// Center-of-mass contraction and the subcluster virial test.
    Full,
    /// Distance floor only.
    FloorOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    /// Undecided boxes narrower than this in every coordinate are C3.
    #[serde(with = "hex_f64")]
    pub epsilon_c3: f64,
    /// Budget on processed boxes; exhausting it leaves the run incomplete.
    pub max_boxes: u64,
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
    /// Write a checkpoint every this many processed boxes (0 = never).
    pub checkpoint_every: u64,
    #[serde(skip)]
    pub checkpoint_path: Option<PathBuf>,
    pub pruning: PruningMode,
    /// Fraction of the width at which boxes are cut. Slightly off one half
    /// so that symmetric zeros do not land on cut planes.
    #[serde(with = "hex_f64")]
    pub split_ratio: f64,
    /// Krawczyk refinement steps applied to each certificate.
    pub refine_iterations: usize,
    /// Print a status line to stderr every this many boxes (0 = quiet).
    #[serde(default)]
    pub progress_every: u64,
    /// Search one labeling per class of equal masses and recover the others
    /// by relabeling certified boxes.
    #[serde(default = "enabled")]
    pub symmetry: bool,
}

fn enabled() -> bool {
    true
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            epsilon_c3: 1e-10,
            max_boxes: 100_000_000,
            workers: 0,
            checkpoint_every: 0,
            checkpoint_path: None,
            pruning: PruningMode::Full,
            split_ratio: 0.4609375 + 1.0 / 4096.0,
            refine_iterations: 40,
            progress_every: 0,
            symmetry: true,
        }
    }
}

impl SearchSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: &str| {
            Err(Error::Config {
                key: key.into(),
                message: message.into(),
            })
        };
        if !(self.epsilon_c3 > 0.0 && self.epsilon_c3.is_finite()) {
            return bad("epsilon_c3", "must be positive and finite");
        }
        if self.max_boxes == 0 {
            return bad("max_boxes", "must be positive");
        }
        if !(self.split_ratio > 0.1 && self.split_ratio < 0.9) {
            return bad("split_ratio", "must lie in (0.1, 0.9)");
        }
        Ok(())
    }
}

/// Where a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Enumeration,
    Analytic,
}

/// A box proven to contain exactly one non-degenerate zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionCertificate {
    pub problem_id: String,
    /// Box on which the Krawczyk image lies strictly inside.
    #[serde(rename = "box")]
    pub region: IntervalBox,
    /// Krawczyk image of `region`; encloses the zero.
    pub krawczyk_image: IntervalBox,
    #[serde(with = "hex_vec")]
    pub midpoint: Vec<f64>,
    #[serde(with = "hex_f64")]
    pub midpoint_residual_norm: f64,
    /// Upper bound of `||I - Y J(box)||_inf`.
    #[serde(with = "hex_f64")]
    pub contraction_norm: f64,
    pub shape_class: ShapeClass,
    pub origin: Origin,
    /// For the reduced `n`-body system: whether `x_{k1}` and `x_n` are
    /// separated, so the zero is a genuine central configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_valid: Option<bool>,
}

/// Why a box was left undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndecidedReason {
    BelowThreshold,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UndecidedBox {
    #[serde(rename = "box")]
    pub region: IntervalBox,
    pub reason: UndecidedReason,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub boxes_processed: u64,
    /// Removed by the distance floor, center of mass, or virial tests.
    pub pruned_by_bounds: u64,
    /// Excluded by interval evaluation or the Krawczyk operator.
    pub pruned_by_krawczyk: u64,
    pub collision_splits: u64,
    pub splits: u64,
    pub certified: u64,
    pub undecided: u64,
    /// Volume bookkeeping for covering audits.
    pub volume: VolumeLedger,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VolumeLedger {
    pub initial: f64,
    pub pruned: f64,
    pub excluded: f64,
    pub certified: f64,
    pub undecided: f64,
}

impl VolumeLedger {
    pub fn accounted(&self) -> f64 {
        self.pruned + self.excluded + self.certified + self.undecided
    }
}

/// The problem a report answers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Aniso(AnisoProblem),
    Nbody(ReducedNBodyProblem),
}

impl ProblemSpec {
    /// Stable identifier built from exact parameter encodings.
    pub fn id(&self) -> String {
        let masses = |m: &[Interval]| {
            m.iter()
                .map(|v| format!("[{},{}]", to_hex(v.lo()), to_hex(v.hi())))
                .collect::<Vec<_>>()
                .join(";")
        };
        match self {
            ProblemSpec::Aniso(p) => format!(
                "aniso:k={}:a={}:b={}:mu={}",
                p.k(),
                to_hex(p.a),
                to_hex(p.b),
                masses(p.mu.as_slice())
            ),
            ProblemSpec::Nbody(p) => format!(
                "nbody:n={}:k1={}:m={}",
                p.n(),
                p.gauge,
                masses(p.masses.as_slice())
            ),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ProblemSpec::Aniso(p) => p.dim(),
            ProblemSpec::Nbody(p) => Residual::dim(p),
        }
    }

    /// Krawczyk status of a box under this problem's residual.
    pub fn krawczyk_status(
        &self,
        x: &IntervalBox,
    ) -> Result<(KrawczykStatus, Option<IntervalBox>)> {
        let out = match self {
            ProblemSpec::Aniso(p) => krawczyk_step(p, x)?,
            ProblemSpec::Nbody(p) => krawczyk_step(p, x)?,
        };
        Ok((out.status, out.image))
    }

    /// Planar positions of every body at a point.
    pub fn point_positions(&self, x: &[f64]) -> Vec<(f64, f64)> {
        let b = IntervalBox::from_point(x);
        let pos = match self {
            ProblemSpec::Aniso(_) => AnisoProblem::positions(&b),
            ProblemSpec::Nbody(p) => p.positions(&b),
        };
        pos.iter().map(|p| (p.0.mid(), p.1.mid())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub problem: ProblemSpec,
    pub problem_id: String,
    pub bounds: SearchBounds,
    pub settings: SearchSettings,
    pub initial_region: IntervalBox,
    /// Description of the Krawczyk variant used.
    pub method: String,
    pub certificates: Vec<SolutionCertificate>,
    pub shape_counts: BTreeMap<ShapeClass, usize>,
    pub stats: SearchStats,
    pub undecided: Vec<UndecidedBox>,
    pub complete: bool,
}

pub const METHOD: &str = "Krawczyk K(X) = m - Y F(m) + (I - Y J(X))(X - m), m = interval midpoint, \
Y = floating inverse of mid J(X) (partial pivoting); unique zero iff K(X) lies in the interior of X \
with one-ulp margin; outward rounding by error-free transformations";

impl EnumerationReport {
    pub fn count(&self, shape: ShapeClass) -> usize {
        self.shape_counts.get(&shape).copied().unwrap_or(0)
    }
}

/// Default box for the anisotropic problem: `[-Bx, Bx] x [-By, By]` per body.
pub fn aniso_initial_region(prob: &AnisoProblem, bounds: &SearchBounds) -> IntervalBox {
    (0..prob.k())
        .flat_map(|_| {
            [
                Interval::spanning(-bounds.max_abs_x, bounds.max_abs_x),
                Interval::spanning(-bounds.max_abs_y, bounds.max_abs_y),
            ]
        })
        .collect()
}

/// Enumerates every solution of the anisotropic system inside the a-priori box.
pub fn enumerate_aniso(
    prob: &AnisoProblem,
    settings: &SearchSettings,
) -> Result<EnumerationReport> {
    if prob.a <= 0.0 || prob.b <= 0.0 {
        return Err(Error::InvalidProblem(
            "enumeration needs a > 0 and b > 0; one non-positive coefficient confines \
             solutions to an axis (use the collinear solver)"
                .into(),
        ));
    }
    if prob.a == prob.b {
        return Err(Error::InvalidProblem(
            "a = b is rotationally degenerate and cannot be certified".into(),
        ));
    }
    let bounds = SearchBounds::aniso(&prob.mu, prob.a, prob.b)?;
    let region = aniso_initial_region(prob, &bounds);
    engine::run(
        ProblemSpec::Aniso(prob.clone()),
        bounds,
        region,
        settings,
        None,
    )
}

/// Enumerates every zero of the reduced system inside `region`.
pub fn enumerate_nbody(
    prob: &ReducedNBodyProblem,
    region: &IntervalBox,
    settings: &SearchSettings,
) -> Result<EnumerationReport> {
    if region.dims() != Residual::dim(prob) {
        return Err(Error::DimensionMismatch {
            expected: Residual::dim(prob),
            found: region.dims(),
        });
    }
    let bounds = SearchBounds::nbody(&prob.masses);
    engine::run(
        ProblemSpec::Nbody(prob.clone()),
        bounds,
        region.clone(),
        settings,
        None,
    )
}

/// Continues an interrupted run from a checkpoint.
pub fn resume(checkpoint: Checkpoint, settings: &SearchSettings) -> Result<EnumerationReport> {
    let problem = checkpoint.problem.clone();
    let bounds = checkpoint.bounds.clone();
    let region = checkpoint.initial_region.clone();
    engine::run(problem, bounds, region, settings, Some(checkpoint))
}

/// Reduced box for the `(2 + k)` setup: light bodies `0..k` in `light`, the
/// first heavy body (index `k`, the gauge body) on the x axis in `heavy_x`,
/// and the second heavy body eliminated.
pub fn two_heavy_region(
    k: usize,
    light: [(f64, f64); 2],
    heavy_x: (f64, f64),
) -> Result<IntervalBox> {
    let mut v = Vec::with_capacity(2 * k + 1);
    for _ in 0..k {
        v.push(Interval::new(light[0].0, light[0].1)?);
        v.push(Interval::new(light[1].0, light[1].1)?);
    }
    v.push(Interval::new(heavy_x.0, heavy_x.1)?);
    Ok(IntervalBox::new(v))
}

/// Tolerance for shape labels in normalized coordinates.
pub const SHAPE_TOL: f64 = 1e-6;
/// Looser tolerance for clusters of light bodies at finite mass, whose
/// normalized shapes deviate from the limit at order `Theta^(1/3)`.
pub const CLUSTER_SHAPE_TOL: f64 = 5e-2;

/// Labels a certificate by the geometry of its midpoint. For the reduced
/// `n`-body system the free (non-gauge, non-last) bodies whose masses are the
/// smallest are treated as the light cluster and normalized first.
pub fn classify_shape(cert: &SolutionCertificate, problem: &ProblemSpec) -> ShapeClass {
    match problem {
        ProblemSpec::Aniso(_) => {
            classify_points(&problem.point_positions(&cert.midpoint), SHAPE_TOL)
        }
        ProblemSpec::Nbody(p) => {
            let light = light_bodies(p);
            if light.len() < 2 {
                return ShapeClass::Other;
            }
            let pos = problem.point_positions(&cert.midpoint);
            let pts: Vec<(f64, f64)> = light.iter().map(|&i| pos[i]).collect();
            let mu: Vec<f64> = light.iter().map(|&i| p.masses.get(i).mid()).collect();
            let c = crate::bridge::normalize_cluster(&pts, &mu);
            classify_points(&c.p_tilde, CLUSTER_SHAPE_TOL)
        }
    }
}

/// Indices of the light bodies: those strictly lighter than the heaviest
/// body by a factor of at least 100.
pub fn light_bodies(p: &ReducedNBodyProblem) -> Vec<usize> {
    let m = p.masses.values();
    let heavy = m.iter().cloned().fold(0.0, f64::max);
    (0..m.len()).filter(|&i| m[i] * 100.0 < heavy).collect()
}

/// Re-checks one certificate: the box must certify again, the stored image
/// must contain the recomputed one, and the stored midpoint must lie in it.
pub fn verify_certificate(problem: &ProblemSpec, cert: &SolutionCertificate) -> Result<bool> {
    if cert.region.dims() != problem.dim() || cert.krawczyk_image.dims() != problem.dim() {
        return Ok(false);
    }
    if !cert.krawczyk_image.interior_of(&cert.region)
        || !cert.krawczyk_image.contains_point(&cert.midpoint)
    {
        return Ok(false);
    }
    let (status, image) = match problem.krawczyk_status(&cert.region) {
        Ok(v) => v,
        Err(Error::PossibleCollision { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    if status != KrawczykStatus::UniqueZero {
        return Ok(false);
    }
    let image = image.expect("unique zero has an image");
    if !image.subset_of(&cert.krawczyk_image) {
        return Ok(false);
    }
    if let ProblemSpec::Nbody(p) = problem {
        if cert.gauge_valid == Some(true) && !check_gauge_validity(&cert.krawczyk_image, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the stored form of a certified box.
pub(crate) fn make_certificate(
    problem: &ProblemSpec,
    problem_id: &str,
    c: Certified,
    origin: Origin,
) -> SolutionCertificate {
    let mut mid = c.midpoint();
    if let Some(z) = problem.newton(&mid) {
        if c.image.contains_point(&z) {
            mid = z;
        }
    }
    let gauge_valid = match problem {
        ProblemSpec::Nbody(p) => Some(check_gauge_validity(&c.image, p)),
        ProblemSpec::Aniso(_) => None,
    };
    let mut cert = SolutionCertificate {
        problem_id: problem_id.to_string(),
        region: c.region,
        krawczyk_image: c.image,
        midpoint_residual_norm: problem.residual_norm(&mid),
        midpoint: mid,
        contraction_norm: c.contraction_norm,
        shape_class: ShapeClass::Other,
        origin,
        gauge_valid,
    };
    cert.shape_class = classify_shape(&cert, problem);
    cert
}

/// Certifies the zero near an approximate point: Newton polish, then
/// Krawczyk on boxes of growing radius around it.
pub fn certify_point(
    problem: &ProblemSpec,
    approx: &[f64],
    origin: Origin,
) -> Result<Option<SolutionCertificate>> {
    if approx.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: approx.len(),
        });
    }
    let z = problem.newton(approx).unwrap_or_else(|| approx.to_vec());
    let center = IntervalBox::from_point(&z);
    for radius in [1e-12, 1e-10, 1e-8, 1e-6] {
        let x: IntervalBox = center
            .iter()
            .map(|c| Interval::centered(c.mid(), radius * (1.0 + c.mag())))
            .collect();
        let x = inflate(&x, 0.0, 2);
        match problem.certify_box(&x) {
            Ok(Some(c)) => {
                let c = problem.refine(c, SearchSettings::default().refine_iterations);
                return Ok(Some(make_certificate(problem, &problem.id(), c, origin)));
            }
            Ok(None) | Err(Error::PossibleCollision { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

impl ProblemSpec {
    fn certify_box(&self, x: &IntervalBox) -> Result<Option<Certified>> {
        match self {
            ProblemSpec::Aniso(p) => Certified::try_new(p, x),
            ProblemSpec::Nbody(p) => Certified::try_new(p, x),
        }
    }
}
