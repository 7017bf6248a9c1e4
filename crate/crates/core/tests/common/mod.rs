//! Checks shared by the property suite and the acceptance run. Each returns
//! a description of the first violation.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use ccenum::aniso::{collinear_matrix_a, eval_aniso, inertia_residuals, jac_aniso, AnisoProblem};
use ccenum::krawczyk::newton_point;
use ccenum::masses::MassVector;
use ccenum::nbody::{eval_rs, jac_rs, ReducedNBodyProblem};
use ccenum::search::{EnumerationReport, ProblemSpec, ShapeClass};
use ccenum::{Interval, IntervalBox};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rand_interval(rng: &mut StdRng, scale: f64) -> Interval {
    let a = rng.gen_range(-scale..scale);
    let w = rng.gen_range(0.0..scale) * if rng.gen_bool(0.2) { 1e-9 } else { 1.0 };
    Interval::new(a, a + w).unwrap()
}

fn rand_in(rng: &mut StdRng, x: Interval) -> f64 {
    if x.is_point() {
        return x.lo();
    }
    rng.gen_range(x.lo()..=x.hi())
}

fn sub_interval(rng: &mut StdRng, x: Interval) -> Interval {
    let (u, v) = (rand_in(rng, x), rand_in(rng, x));
    Interval::new(u.min(v), u.max(v)).unwrap()
}

/// Containment of sampled point results and inclusion monotonicity.
pub fn interval_fuzz(samples: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..samples {
        let scale = 10f64.powi(rng.gen_range(-3..4));
        let (x, y) = (
            rand_interval(&mut rng, scale),
            rand_interval(&mut rng, scale),
        );
        let (u, v) = (rand_in(&mut rng, x), rand_in(&mut rng, y));
        // A single correctly rounded operation lands between the rounded
        // bounds of the exact range.
        ensure!((x + y).contains(u + v), "{x:?} + {y:?} misses {u} + {v}");
        ensure!((x - y).contains(u - v), "{x:?} - {y:?} misses {u} - {v}");
        ensure!((x * y).contains(u * v), "{x:?} * {y:?} misses {u} * {v}");
        ensure!(x.sqr().contains(u * u), "{x:?}^2 misses {u}^2");
        if let Ok(q) = x.checked_div(y) {
            ensure!(q.contains(u / v), "{x:?} / {y:?} misses {u} / {v}");
        }
        ensure!(
            x.abs().sqrt().unwrap().contains(u.abs().sqrt()),
            "sqrt {x:?} misses {u}"
        );
        // cbrt and cube are not correctly rounded in libm; the enclosure of
        // the point and the enclosure of the range both hold the exact value.
        let pu = Interval::point(u);
        ensure!(
            x.cbrt().intersect(pu.cbrt()).is_some(),
            "cbrt {x:?} misses {u}"
        );
        ensure!(
            x.cube().intersect(pu.cube()).is_some(),
            "cube {x:?} misses {u}"
        );

        let (xs, ys) = (sub_interval(&mut rng, x), sub_interval(&mut rng, y));
        ensure!(
            (xs + ys).subset_of(x + y),
            "+ not monotone on {xs:?} {ys:?}"
        );
        ensure!(
            (xs - ys).subset_of(x - y),
            "- not monotone on {xs:?} {ys:?}"
        );
        ensure!(
            (xs * ys).subset_of(x * y),
            "* not monotone on {xs:?} {ys:?}"
        );
        ensure!(xs.sqr().subset_of(x.sqr()), "sqr not monotone on {xs:?}");
        ensure!(xs.cube().subset_of(x.cube()), "cube not monotone on {xs:?}");
        if let (Ok(a), Ok(b)) = (xs.checked_div(ys), x.checked_div(y)) {
            ensure!(a.subset_of(b), "/ not monotone on {xs:?} {ys:?}");
        }
    }
    Ok(())
}

fn rand_config(rng: &mut StdRng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

fn min_pair_dist(pos: &[(f64, f64)]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            d = d.min((pos[i].0 - pos[j].0).hypot(pos[i].1 - pos[j].1));
        }
    }
    d
}

/// Central differences of `f` at `x` against `jac`, relative to the size of
/// the Jacobian.
fn check_jacobian(
    f: impl Fn(&[f64]) -> Vec<f64>,
    jac: &ccenum::interval::Matrix,
    x: &[f64],
) -> Check {
    let size = (0..jac.rows())
        .flat_map(|r| (0..jac.cols()).map(move |c| (r, c)))
        .fold(1.0f64, |m, rc| m.max(jac[rc].abs()));
    for j in 0..x.len() {
        let h = 1e-6 * (1.0 + x[j].abs());
        let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..fp.len() {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            ensure!(
                (fd - jac[(i, j)]).abs() <= 1e-6 * size,
                "entry ({i}, {j}) is {} but differences give {fd} at {x:?}",
                jac[(i, j)]
            );
        }
    }
    Ok(())
}

pub fn aniso_jacobians(points: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < points {
        let k = rng.gen_range(2..=4);
        let mut mu: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = mu.iter().sum();
        mu.iter_mut().for_each(|m| *m /= total);
        let (a, b) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let p = AnisoProblem::new(MassVector::from_values(&mu).unwrap(), a, b).unwrap();
        let x = rand_config(&mut rng, 2 * k, 1.5);
        let pos: Vec<(f64, f64)> = x.chunks(2).map(|c| (c[0], c[1])).collect();
        if min_pair_dist(&pos) < 0.05 {
            continue;
        }
        let f = |y: &[f64]| {
            eval_aniso(&IntervalBox::from_point(y), &p)
                .unwrap()
                .midpoint()
        };
        let j = jac_aniso(&IntervalBox::from_point(&x), &p)
            .unwrap()
            .midpoint();
        check_jacobian(f, &j, &x)?;
        checked += 1;
    }
    Ok(())
}

pub fn reduced_jacobians(points: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(13);
    let mut checked = 0;
    while checked < points {
        let n = rng.gen_range(3..=5);
        let mut m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = m.iter().sum();
        m.iter_mut().for_each(|v| *v /= total);
        let gauge = rng.gen_range(0..n - 1);
        let p = ReducedNBodyProblem::new(MassVector::from_values(&m).unwrap(), gauge).unwrap();
        let x = rand_config(&mut rng, p.dim(), 1.5);
        let pos = p.positions(&IntervalBox::from_point(&x));
        let mids: Vec<(f64, f64)> = pos.iter().map(|q| (q.0.mid(), q.1.mid())).collect();
        if min_pair_dist(&mids) < 0.05 {
            continue;
        }
        let f = |y: &[f64]| eval_rs(&IntervalBox::from_point(y), &p).unwrap().midpoint();
        let j = jac_rs(&IntervalBox::from_point(&x), &p).unwrap().midpoint();
        check_jacobian(f, &j, &x)?;
        checked += 1;
    }
    Ok(())
}

/// Inertia identities, center of mass, and the eigenvector relation of the
/// collinear matrix at every certificate of an anisotropic run.
pub fn certificate_identities(r: &EnumerationReport) -> Check {
    let ProblemSpec::Aniso(p) = &r.problem else {
        return Err("not an anisotropic run".into());
    };
    let k = p.k();
    let mu = p.mu.as_slice();
    for c in &r.certificates {
        let x = &c.krawczyk_image;
        for (i, v) in inertia_residuals(x, p).unwrap().iter().enumerate() {
            ensure!(
                v.contains_zero(),
                "inertia identity {i} fails at {:?}",
                c.midpoint
            );
        }

        let sx: Interval = (0..k).map(|i| mu[i] * x[2 * i]).sum();
        let sy: Interval = (0..k).map(|i| mu[i] * x[2 * i + 1]).sum();
        ensure!(
            sx.contains_zero() && sy.contains_zero(),
            "center of mass off at {:?}",
            c.midpoint
        );

        if !matches!(
            c.shape_class,
            ShapeClass::CollinearX | ShapeClass::CollinearY
        ) {
            let a = collinear_matrix_a(x, p).unwrap();
            for (axis, coeff) in [(0, p.a), (1, p.b)] {
                let d: IntervalBox = (0..k - 1)
                    .map(|i| x[2 * i + axis] - x[2 * (i + 1) + axis])
                    .collect();
                let ad = a.mul_box(&d);
                for i in 0..k - 1 {
                    ensure!(
                        (ad[i] - d[i] * coeff).contains_zero(),
                        "A d = c d fails on axis {axis} at {:?}",
                        c.midpoint
                    );
                }
            }
        }
    }
    Ok(())
}

/// Size bound and pairwise distance floor at every certificate.
pub fn certificate_bounds(r: &EnumerationReport) -> Check {
    let b = &r.bounds;
    for c in &r.certificates {
        let pos = r.problem.point_positions(&c.midpoint);
        for (i, &(x, y)) in pos.iter().enumerate() {
            ensure!(
                x.abs() <= b.max_abs_x && y.abs() <= b.max_abs_y && x.hypot(y) <= b.radius,
                "body {i} outside the size bound at {:?}",
                c.midpoint
            );
            for (j, &(u, v)) in pos.iter().enumerate().skip(i + 1) {
                ensure!(
                    (x - u).hypot(y - v) >= b.min_pair_dist(i, j),
                    "bodies {i}, {j} closer than the floor at {:?}",
                    c.midpoint
                );
            }
        }
    }
    Ok(())
}

/// Floating Newton from a point of each certified region converges to the
/// certified zero.
pub fn newton_agreement(r: &EnumerationReport) -> Check {
    for c in &r.certificates {
        let start: Vec<f64> = c.region.iter().map(|v| v.lo() + 0.3 * v.width()).collect();
        let z = match &r.problem {
            ProblemSpec::Aniso(p) => newton_point(p, &start, 50, 1e-14),
            ProblemSpec::Nbody(p) => newton_point(p, &start, 50, 1e-14),
        };
        let Some(z) = z else {
            return Err(format!("Newton diverges from {start:?}"));
        };
        let d = z
            .iter()
            .zip(&c.midpoint)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        ensure!(
            d < 1e-10 && c.region.contains_point(&z),
            "Newton lands {d:e} away from {:?}",
            c.midpoint
        );
    }
    Ok(())
}
