//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 4 includes eigenvalue inequalities that are false for heavy
//! mass ratios outside roughly (1/3, 2/3); that failure is expected and
//! reported, but does not fail the test target. Any other failure does.

mod common;

use std::time::Instant;

use ccenum::analytic::{
    isosceles_triangle, l4_hessian_params, moulton_axis, rectangle, rhombus, Axis,
};
use ccenum::aniso::AnisoProblem;
use ccenum::bridge::{continuation_residual, pair_solutions};
use ccenum::masses::MassVector;
use ccenum::nbody::ReducedNBodyProblem;
use ccenum::search::{
    enumerate_aniso, enumerate_nbody, two_heavy_region, EnumerationReport, SearchSettings,
    ShapeClass,
};
use ccenum::Interval;

type Pt = (f64, f64);

/// Criteria whose failure is expected; see the module comment.
const KNOWN_FAILURES: &[u32] = &[4];

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }
}

fn positions(r: &EnumerationReport, i: usize) -> Vec<Pt> {
    r.problem.point_positions(&r.certificates[i].midpoint)
}

/// True when `pts` equals `target` as a set of points, within `tol`.
fn same_set(pts: &[Pt], target: &[Pt], tol: f64) -> bool {
    pts.len() == target.len()
        && target.iter().all(|t| {
            pts.iter()
                .any(|p| (p.0 - t.0).abs() <= tol && (p.1 - t.1).abs() <= tol)
        })
}

/// Number of certificates whose configuration is `target` up to labeling.
fn count_matching(r: &EnumerationReport, target: &[Pt], tol: f64) -> usize {
    (0..r.certificates.len())
        .filter(|&i| same_set(&positions(r, i), target, tol))
        .count()
}

type IPt = (Interval, Interval);

/// Whether the enclosure `pts` (body order as given) meets some certified
/// region. Both hold the exact solution; the float midpoints of closed-form
/// enclosures can sit a few ulps outside boxes this narrow.
fn in_some_box(r: &EnumerationReport, pts: &[IPt]) -> bool {
    let x: Vec<Interval> = pts.iter().flat_map(|p| [p.0, p.1]).collect();
    r.certificates.iter().any(|c| {
        c.region
            .iter()
            .zip(&x)
            .all(|(u, v)| u.intersect(*v).is_some())
    })
}

fn zero() -> Interval {
    Interval::point(0.0)
}

fn aniso_run(k: usize) -> EnumerationReport {
    let p = AnisoProblem::equal_masses(k, 0.75, 2.25).unwrap();
    enumerate_aniso(&p, &SearchSettings::default()).unwrap()
}

fn criterion_1(k3: &EnumerationReport) -> Outcome {
    let mut o = Outcome::new();
    o.check(k3.complete, format!("complete: {}", k3.complete));
    o.check(
        k3.certificates.len() == 24,
        format!("{} certificates", k3.certificates.len()),
    );
    let (cx, cy, tri) = (
        k3.count(ShapeClass::CollinearX),
        k3.count(ShapeClass::CollinearY),
        k3.count(ShapeClass::IsoscelesTriangle),
    );
    o.check(
        (cx, cy, tri) == (6, 6, 12),
        format!("classes {cx}/{cy}/{tri}"),
    );
    let coords: Vec<f64> = k3
        .certificates
        .iter()
        .flat_map(|c| c.midpoint.clone())
        .collect();
    for t in [0.8220706914, 0.5699919822, -0.6964118400, 0.3466806372] {
        let best = coords
            .iter()
            .map(|c| (c - t).abs())
            .fold(f64::INFINITY, f64::min);
        o.check(best <= 1e-8, format!("{t} matched to {best:.1e}"));
    }
    o
}

fn criterion_2(k4: &EnumerationReport) -> Outcome {
    let mut o = Outcome::new();
    o.check(k4.complete, format!("complete: {}", k4.complete));
    o.check(
        k4.certificates.len() == 240,
        format!("{} certificates", k4.certificates.len()),
    );
    let want = [
        (ShapeClass::CollinearX, 24),
        (ShapeClass::CollinearY, 24),
        (ShapeClass::TriangleWithInteriorPoint, 48),
        (ShapeClass::EquilateralInIsosceles, 48),
        (ShapeClass::Rhombus, 24),
        (ShapeClass::Rectangle, 24),
        (ShapeClass::SlantedRhombus, 48),
    ];
    for (s, n) in want {
        o.check(k4.count(s) == n, format!("{s:?} {}", k4.count(s)));
    }

    let (rx, ry) = (0.8517357111, 0.3392209571);
    let rh = [(rx, 0.0), (-rx, 0.0), (0.0, ry), (0.0, -ry)];
    let n_rh = count_matching(k4, &rh, 1e-8);
    o.check(
        n_rh == 24,
        format!("rhombus midpoints matched by {n_rh} labelings"),
    );
    let (qx, qy) = (0.5124981464, 0.3168767565);
    let re = [(qx, qy), (qx, -qy), (-qx, qy), (-qx, -qy)];
    let n_re = count_matching(k4, &re, 1e-8);
    o.check(
        n_re == 24,
        format!("rectangle midpoints matched by {n_re} labelings"),
    );

    // Geometry measured on the enumerated solutions.
    let first = |s: ShapeClass| k4.certificates.iter().position(|c| c.shape_class == s);
    if let Some(i) = first(ShapeClass::Rhombus) {
        let p = positions(k4, i);
        let x = p.iter().map(|q| q.0.abs()).fold(0.0, f64::max);
        let y = p.iter().map(|q| q.1.abs()).fold(0.0, f64::max);
        let kr = y / x;
        o.check(
            (kr - 0.39827).abs() <= 1e-4,
            format!("diagonal ratio {kr:.6}"),
        );
    }
    if let Some(i) = first(ShapeClass::Rectangle) {
        let p = positions(k4, i);
        let phi = (p[0].1.abs()).atan2(p[0].0.abs());
        o.check(
            (phi - 0.553766).abs() <= 1e-5,
            format!("rectangle angle {phi:.7}"),
        );
    }
    o
}

fn criterion_3(k3: &EnumerationReport, k4: &EnumerationReport) -> Outcome {
    let mut o = Outcome::new();
    let (a, b) = (0.75, 2.25);

    let tri = isosceles_triangle(1.0 / 3.0, a, b)
        .unwrap()
        .expect("triangle exists");
    let (s0, r0) = ((4.0f64 / 3.0).cbrt(), (1.0f64 / 3.0).cbrt());
    o.check(
        (tri.s.mid() - s0).abs() <= 1e-9 && (tri.r.mid() - r0).abs() <= 1e-9,
        format!("triangle s = {:.12}, r = {:.12}", tri.s.mid(), tri.r.mid()),
    );
    let (tx, ty) = (tri.x, tri.y);
    let v = [(tx, zero()), (-tx * 0.5, ty), (-tx * 0.5, -ty)];
    o.check(
        in_some_box(k3, &v) && in_some_box(k3, &v.map(|(x, y)| (-x, y))),
        "triangle inside certified boxes",
    );
    // Side lengths of the enumerated triangles.
    let mut worst: f64 = 0.0;
    for (i, c) in k3.certificates.iter().enumerate() {
        if c.shape_class != ShapeClass::IsoscelesTriangle {
            continue;
        }
        let p = positions(k3, i);
        let mut d = [
            (p[0].0 - p[1].0).hypot(p[0].1 - p[1].1),
            (p[1].0 - p[2].0).hypot(p[1].1 - p[2].1),
            (p[0].0 - p[2].0).hypot(p[0].1 - p[2].1),
        ];
        d.sort_by(f64::total_cmp);
        // Base r is the shortest side, the legs s the two longer ones.
        worst = worst
            .max((d[0] - r0).abs())
            .max((d[1] - s0).abs())
            .max((d[2] - s0).abs());
    }
    o.check(
        worst <= 1e-9,
        format!("enumerated triangle sides within {worst:.1e}"),
    );

    let rh = rhombus(0.25, a, b).unwrap();
    let v = [
        (rh.x, zero()),
        (zero(), rh.y),
        (-rh.x, zero()),
        (zero(), -rh.y),
    ];
    o.check(in_some_box(k4, &v), "rhombus inside a certified box");
    let re = rectangle(0.25, a, b).unwrap();
    let v = [(re.x, re.y), (re.x, -re.y), (-re.x, -re.y), (-re.x, re.y)];
    o.check(in_some_box(k4, &v), "rectangle inside a certified box");

    for (k, r) in [(3, k3), (4, k4)] {
        let mu = MassVector::equal(k, 1.0).unwrap();
        for (axis, coeff) in [(Axis::X, a), (Axis::Y, b)] {
            let sols = moulton_axis(&mu, axis, coeff).unwrap();
            let on_axis = |c: &Interval| match axis {
                Axis::X => (*c, zero()),
                Axis::Y => (zero(), *c),
            };
            let inside = sols
                .iter()
                .filter(|s| in_some_box(r, &s.coords.iter().map(on_axis).collect::<Vec<_>>()))
                .count();
            o.check(
                inside == sols.len(),
                format!(
                    "k={k} {axis:?}-axis collinear: {inside}/{} inside",
                    sols.len()
                ),
            );
        }
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let l4 = l4_hessian_params(0.5, 0.5).unwrap();
    let ulps = |v: ccenum::Interval, x: f64| (v.hi() - v.lo()) / (x.next_up() - x);
    o.check(
        l4.a.contains(0.75)
            && l4.b.contains(2.25)
            && ulps(l4.a, 0.75) <= 4.0
            && ulps(l4.b, 2.25) <= 4.0,
        format!(
            "a = [{}, {}], b = [{}, {}]",
            l4.a.lo(),
            l4.a.hi(),
            l4.b.lo(),
            l4.b.hi()
        ),
    );

    let sqrt3 = Interval::point(3.0).sqrt().unwrap();
    let cap = (Interval::ONE + sqrt3.recip().unwrap()) * 1.5;
    let mut good = Vec::new();
    for i in 1..=99 {
        let m1 = i as f64 / 100.0;
        let e = l4_hessian_params(m1, 1.0 - m1).unwrap();
        let gap = e.b - e.a;
        if gap.hi() < sqrt3.lo() && gap.lo() >= 1.5 && e.b.hi() < cap.lo() {
            good.push(m1);
        }
    }
    let held = match (good.first(), good.last()) {
        (Some(lo), Some(hi)) => format!("hold only for m1 in [{lo}, {hi}]"),
        _ => "hold nowhere".into(),
    };
    o.check(
        good.len() == 99,
        format!(
            "eigenvalue inequalities {held} ({} of 99 grid masses)",
            good.len()
        ),
    );
    o
}

fn criterion_5(k3: &EnumerationReport) -> (Outcome, Option<EnumerationReport>) {
    let mut o = Outcome::new();
    let mu = 2.5e-8;
    let heavy = (1.0 - 0.75e-7) / 2.0;
    let masses = MassVector::from_values(&[mu, mu, mu, heavy, heavy]).unwrap();
    let p = ReducedNBodyProblem::new(masses, 3).unwrap();
    let region = two_heavy_region(3, [(-0.2, 0.2), (0.7, 1.0)], (0.49, 0.65)).unwrap();
    let r = enumerate_nbody(&p, &region, &SearchSettings::default()).unwrap();
    o.check(r.complete, format!("complete: {}", r.complete));
    o.check(
        r.certificates.len() == 24,
        format!("{} certificates", r.certificates.len()),
    );
    match pair_solutions(&r, k3, 5e-3) {
        Ok(pairing) => {
            o.check(
                pairing.is_perfect() && pairing.pairs.len() == 24,
                format!("{} matched pairs", pairing.pairs.len()),
            );
            o.check(
                pairing.max_discrepancy <= 5e-3,
                format!("max discrepancy {:.3e}", pairing.max_discrepancy),
            );
        }
        Err(e) => o.check(false, format!("pairing failed: {e}")),
    }
    (o, Some(r))
}

fn criterion_6(runs: &[&EnumerationReport]) -> Outcome {
    let mut o = Outcome::new();
    let mut record = |name: &str, res: common::Check| match res {
        Ok(()) => o.check(true, name.to_string()),
        Err(e) => o.check(false, format!("{name}: {e}")),
    };
    record("interval fuzzing", common::interval_fuzz(100_000));
    record("anisotropic Jacobians", common::aniso_jacobians(1000));
    record("reduced-system Jacobians", common::reduced_jacobians(1000));
    for r in runs {
        if matches!(r.problem, ccenum::search::ProblemSpec::Aniso(_)) {
            record("identities", common::certificate_identities(r));
            record("a-priori bounds", common::certificate_bounds(r));
        }
        record("floating Newton", common::newton_agreement(r));
    }
    o
}

fn criterion_7(k3: &EnumerationReport) -> Outcome {
    let mut o = Outcome::new();
    let Some(i) = k3
        .certificates
        .iter()
        .position(|c| c.shape_class == ShapeClass::IsoscelesTriangle)
    else {
        o.check(false, "no triangle certificate");
        return o;
    };
    let p_hat = positions(k3, i);
    let q_hat = [(-0.5, 0.0), (0.5, 0.0)];
    let x_star = (0.0, 3f64.sqrt() / 2.0);
    let thetas = [1e-6, 1e-8, 1e-10];
    let res: Vec<f64> = thetas
        .iter()
        .map(|&t| {
            continuation_residual(&q_hat, &[0.5, 0.5], x_star, &p_hat, &[1.0 / 3.0; 3], t).unwrap()
        })
        .collect();
    o.check(
        res.windows(2).all(|w| w[1] < w[0]),
        format!(
            "residuals {:?}",
            res.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>()
        ),
    );
    // Least-squares slope of log residual against log theta.
    let xs: Vec<f64> = thetas.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = res.iter().map(|r| r.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = num / den;
    o.check(
        (0.5..=1.2).contains(&slope),
        format!("log-log slope {slope:.3}"),
    );
    o
}

fn main() {
    let mut unexpected = Vec::new();
    let mut report = |n: u32, started: Instant, o: Outcome| {
        let secs = started.elapsed().as_secs_f64();
        if o.failures.is_empty() {
            println!("criterion {n}: PASS ({secs:.1}s) {}", o.notes.join("; "));
        } else {
            let known = if KNOWN_FAILURES.contains(&n) {
                " [known]"
            } else {
                ""
            };
            println!(
                "criterion {n}: FAIL{known} ({secs:.1}s) {}",
                o.failures.join("; ")
            );
            if !o.notes.is_empty() {
                println!("    passed parts: {}", o.notes.join("; "));
            }
            if known.is_empty() {
                unexpected.push(n);
            }
        }
    };

    let t = Instant::now();
    let k3 = aniso_run(3);
    report(1, t, criterion_1(&k3));

    let t = Instant::now();
    let k4 = aniso_run(4);
    report(2, t, criterion_2(&k4));

    let t = Instant::now();
    report(3, t, criterion_3(&k3, &k4));

    let t = Instant::now();
    report(4, t, criterion_4());

    let t = Instant::now();
    let (o5, pgu) = criterion_5(&k3);
    report(5, t, o5);

    let t = Instant::now();
    let mut runs = vec![&k3, &k4];
    runs.extend(pgu.as_ref());
    report(6, t, criterion_6(&runs));

    let t = Instant::now();
    report(7, t, criterion_7(&k3));

    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
