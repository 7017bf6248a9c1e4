//! Closed-form and one-dimensional solution families of the anisotropic
//! problem, used as independent checks of the enumeration.
//!
//! Scalar equations are solved by bisection on certified signs of an
//! interval extension. Each scalar function involved is strictly monotone on
//! the bracket used, so the bracket encloses the unique root.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aniso::AnisoProblem;
use crate::bridge::{sym2_eigen, InducedAb};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox, IntervalMatrix};
use crate::krawczyk::{newton_point, refine, Certified, FnResidual};
use crate::masses::MassVector;
use crate::search::{certify_point, Origin, ProblemSpec, SolutionCertificate};

type Pt = (f64, f64);

const ROOT_TOL: f64 = 1e-13;

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

/// Enclosure of the root of an increasing function, given through an
/// interval extension, inside `[lo, hi]`.
fn bisect_increasing(
    f: impl Fn(Interval) -> Result<Interval>,
    mut lo: f64,
    mut hi: f64,
) -> Result<Interval> {
    if !(f(pt(lo))?.hi() < 0.0 && f(pt(hi))?.lo() > 0.0) {
        return Err(Error::Domain("bracket does not straddle a sign change"));
    }
    let narrow = |lo: f64, hi: f64| {
        hi - lo > ROOT_TOL * hi.abs().max(1.0) && {
            let m = 0.5 * (lo + hi);
            m > lo && m < hi
        }
    };
    while narrow(lo, hi) {
        let m = 0.5 * (lo + hi);
        let v = f(pt(m))?;
        if v.hi() < 0.0 {
            lo = m;
        } else if v.lo() > 0.0 {
            hi = m;
        } else {
            // Sign undecided at m: close in on it from both sides.
            let (mut a, mut b) = (m, m);
            while narrow(lo, a) {
                let t = 0.5 * (lo + a);
                if f(pt(t))?.hi() < 0.0 {
                    lo = t;
                } else {
                    a = t;
                }
            }
            while narrow(b, hi) {
                let t = 0.5 * (b + hi);
                if f(pt(t))?.lo() > 0.0 {
                    hi = t;
                } else {
                    b = t;
                }
            }
            break;
        }
    }
    Ok(Interval::from_bounds(lo, hi))
}

/// Doubles `hi` until `f(hi) > 0`.
fn grow_bracket(f: &impl Fn(Interval) -> Result<Interval>, mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        if f(pt(hi))?.lo() > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Domain("no upper bracket found"))
}

/// `t^(2/3)` for `t >= 0`.
fn pow23(t: Interval) -> Interval {
    t.cbrt().sqr()
}

fn check_positive(a: f64, b: f64, mu: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && mu > 0.0 && a.is_finite() && b.is_finite() && mu.is_finite()) {
        return Err(Error::InvalidProblem(
            "need a, b, mu positive and finite".into(),
        ));
    }
    Ok(())
}

/// Hessian eigen-data of the restricted three-body potential at `L4` for
/// primaries of masses `m1`, `m2` (`m1 + m2 = 1`).
pub fn l4_hessian_params(m1: f64, m2: f64) -> Result<InducedAb> {
    if !(m1 > 0.0 && m1 < 1.0 && m2 > 0.0 && m2 < 1.0) || (m1 + m2 - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProblem(
            "masses must lie in (0, 1) and sum to 1".into(),
        ));
    }
    let (m1, m2) = (pt(m1), pt(m2));
    let d = (Interval::ONE - m1 * m2 * 3.0).sqrt()?;
    let a = (Interval::ONE - d) * 1.5;
    let b = (Interval::ONE + d) * 1.5;
    let h = pt(3.0).sqrt()? * 0.75 * (m1 - m2);
    let rot = sym2_eigen(pt(0.75), h, pt(2.25))?;
    Ok(InducedAb {
        a,
        b,
        rotation: rot.rotation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSolution {
    /// Length of the two equal sides.
    pub s: Interval,
    /// Length of the base.
    pub r: Interval,
    /// Apex abscissa: vertices are `(x, 0)` and `(-x/2, +-y)`.
    pub x: Interval,
    pub y: Interval,
}

impl TriangleSolution {
    pub fn vertices(&self) -> [Pt; 3] {
        let (x, y) = (self.x.mid(), self.y.mid());
        [(x, 0.0), (-0.5 * x, y), (-0.5 * x, -y)]
    }

    /// Reflection through the `y` axis.
    pub fn mirrored(&self) -> [Pt; 3] {
        self.vertices().map(|(x, y)| (-x, y))
    }
}

/// Isosceles triangle symmetric about the `x` axis; `None` when
/// `b/a <= 5/12`, where it degenerates.
pub fn isosceles_triangle(mu: f64, a: f64, b: f64) -> Result<Option<TriangleSolution>> {
    check_positive(a, b, mu)?;
    if 12.0 * b <= 5.0 * a {
        return Ok(None);
    }
    let (mu, a, b) = (pt(mu), pt(a), pt(b));
    let s = (mu * 3.0).checked_div(a)?.cbrt();
    let denom = b - a.div_f64(3.0);
    let r = (mu * 2.0).checked_div(denom)?.cbrt();
    let y = mu.checked_div(denom * 4.0)?.cbrt();
    let x2 = (s.sqr() - y.sqr()) * (4.0 / 9.0);
    if x2.hi() <= 0.0 {
        return Ok(None);
    }
    let x = x2.sqrt()?;
    Ok(Some(TriangleSolution { s, r, x, y }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhombusSolution {
    /// Ratio of diagonals `y / x`.
    pub kratio: Interval,
    /// Side length.
    pub r: Interval,
    pub x: Interval,
    pub y: Interval,
}

impl RhombusSolution {
    pub fn vertices(&self) -> [Pt; 4] {
        let (x, y) = (self.x.mid(), self.y.mid());
        [(x, 0.0), (0.0, y), (-x, 0.0), (0.0, -y)]
    }
}

/// Rhombus `(+-x, 0), (0, +-y)` for four equal masses `mu`.
pub fn rhombus(mu: f64, a: f64, b: f64) -> Result<RhombusSolution> {
    check_positive(a, b, mu)?;
    let ratio = pt(a).checked_div(pt(b))?;
    let f = |k: Interval| -> Result<Interval> {
        let k3 = k.cube();
        let s3 = (Interval::ONE + k.sqr()).sqrt()?.cube();
        Ok((k3 * 8.0 + k3 * s3).checked_div(k3 * 8.0 + s3)? - ratio)
    };
    let khi = grow_bracket(&f, 1.0)?;
    let kratio = bisect_increasing(f, 0.0, khi)?;

    let (mu_i, a_i, b_i) = (pt(mu), pt(a), pt(b));
    // g1 is decreasing above its asymptotes; bisect on 4 - g1.
    let g = |r: Interval| -> Result<Interval> {
        let r3 = r.cube();
        let ta = (mu_i * 2.0).checked_div(a_i * r3 - mu_i * 2.0)?;
        let tb = (mu_i * 2.0).checked_div(b_i * r3 - mu_i * 2.0)?;
        Ok(pt(4.0) - pow23(ta) - pow23(tb))
    };
    let rlo = (pt(mu) * 9.0)
        .div_f64(4.0)
        .checked_div(pt(a.min(b)))?
        .cbrt()
        .hi();
    let rhi = grow_bracket(&g, 2.0 * rlo)?;
    let r = bisect_increasing(g, rlo, rhi)?;
    let x = r.checked_div((Interval::ONE + kratio.sqr()).sqrt()?)?;
    let y = x * kratio;
    Ok(RhombusSolution { kratio, r, x, y })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleSolution {
    /// Angle between a diagonal and the `x` axis.
    pub phi: Interval,
    /// Half the diagonal.
    pub r: Interval,
    pub x: Interval,
    pub y: Interval,
}

impl RectangleSolution {
    pub fn vertices(&self) -> [Pt; 4] {
        let (x, y) = (self.x.mid(), self.y.mid());
        [(x, y), (x, -y), (-x, -y), (-x, y)]
    }
}

/// Rectangle `(+-x, +-y)` for four equal masses `mu`. The angle equation is
/// solved in `t = tan(phi)`, where it reads `t^3 (c^3 + 1) / (s^3 + 1)` with
/// `c = 1/sqrt(1+t^2)`, `s = t c`; both sides are increasing in `phi`.
pub fn rectangle(mu: f64, a: f64, b: f64) -> Result<RectangleSolution> {
    check_positive(a, b, mu)?;
    let ratio = pt(a).checked_div(pt(b))?;
    let cos_sin = |t: Interval| -> Result<(Interval, Interval)> {
        let c = (Interval::ONE + t.sqr()).sqrt()?.recip()?;
        Ok((c, t * c))
    };
    let f = |t: Interval| -> Result<Interval> {
        let (c, s) = cos_sin(t)?;
        Ok((t.cube() * (c.cube() + 1.0)).checked_div(s.cube() + 1.0)? - ratio)
    };
    let thi = grow_bracket(&f, 1.0)?;
    let t = bisect_increasing(f, 0.0, thi)?;
    let phi = Interval::from_bounds(
        t.lo().atan().next_down().next_down(),
        t.hi().atan().next_up().next_up(),
    );

    let (mu_i, a_i, b_i) = (pt(mu), pt(a), pt(b));
    let g = |r: Interval| -> Result<Interval> {
        let r3 = r.cube();
        let ta = mu_i.checked_div(a_i * r3 * 4.0 - mu_i)?;
        let tb = mu_i.checked_div(b_i * r3 * 4.0 - mu_i)?;
        Ok(Interval::ONE - pow23(ta) - pow23(tb))
    };
    let rlo = pt(mu).checked_div(pt(a.min(b)) * 2.0)?.cbrt().hi();
    let rhi = grow_bracket(&g, 2.0 * rlo)?;
    let r = bisect_increasing(g, rlo, rhi)?;
    let (c, s) = cos_sin(t)?;
    Ok(RectangleSolution {
        phi,
        r,
        x: r * c,
        y: r * s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// One collinear solution on a coordinate axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollinearSolution {
    pub axis: Axis,
    /// Bodies listed from the most negative coordinate to the most positive.
    pub ordering: Vec<usize>,
    /// Certified enclosure of the axis coordinate of each body.
    pub coords: IntervalBox,
}

impl CollinearSolution {
    pub fn points(&self) -> Vec<Pt> {
        self.coords
            .iter()
            .map(|c| match self.axis {
                Axis::X => (c.mid(), 0.0),
                Axis::Y => (0.0, c.mid()),
            })
            .collect()
    }
}

/// Axis-restricted system `c mu_i x_i = sum_j mu_i mu_j (x_i - x_j)/|x_i - x_j|^3`.
fn collinear_system(mu: &MassVector, c: f64) -> impl crate::krawczyk::Residual + '_ {
    let k = mu.len();
    let m = mu.as_slice();
    let c = pt(c);
    FnResidual::new(
        k,
        move |x: &IntervalBox| {
            let mut out = Vec::with_capacity(k);
            for i in 0..k {
                let mut v = c * m[i] * x[i];
                for j in (0..k).filter(|&j| j != i) {
                    let d = x[i] - x[j];
                    let inv = d
                        .abs()
                        .cube()
                        .recip()
                        .map_err(|_| Error::PossibleCollision { i, j })?;
                    v = v - m[i] * m[j] * d * inv;
                }
                out.push(v);
            }
            Ok(IntervalBox::new(out))
        },
        move |x: &IntervalBox| {
            let mut jac = IntervalMatrix::zeros(k, k);
            for i in 0..k {
                jac[(i, i)] = c * m[i];
                for j in (0..k).filter(|&j| j != i) {
                    let d = x[i] - x[j];
                    let inv = d
                        .abs()
                        .cube()
                        .recip()
                        .map_err(|_| Error::PossibleCollision { i, j })?;
                    let t = m[i] * m[j] * inv * 2.0;
                    jac[(i, i)] = jac[(i, i)] + t;
                    jac[(i, j)] = -t;
                }
            }
            Ok(jac)
        },
    )
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn solve_ordering(mu: &MassVector, c: f64, ordering: &[usize]) -> Result<IntervalBox> {
    let k = mu.len();
    let sys = collinear_system(mu, c);
    let scale = (mu.total().mid() / c).cbrt();
    let mut guess = vec![0.0; k];
    for (rank, &body) in ordering.iter().enumerate() {
        guess[body] = scale * (rank as f64 - 0.5 * (k as f64 - 1.0)) / (k as f64).sqrt();
    }
    let z = newton_point(&sys, &guess, 100, 1e-15)
        .ok_or(Error::Domain("Newton failed on the collinear system"))?;
    if ordering.windows(2).any(|w| z[w[0]] >= z[w[1]]) {
        return Err(Error::Domain("Newton left the requested ordering"));
    }
    for radius in [1e-12, 1e-10, 1e-8] {
        let x: IntervalBox = z
            .iter()
            .map(|&v| Interval::centered(v, radius * (1.0 + v.abs())))
            .collect();
        if let Some(cert) = Certified::try_new(&sys, &x)? {
            return Ok(refine(&sys, cert, 40).image);
        }
    }
    Err(Error::Domain("collinear solution did not certify"))
}

/// All `k!` collinear solutions on one axis, one per ordering.
///
/// With equal masses one ordering is solved and the rest obtained by
/// relabeling; otherwise each ordering is solved separately.
pub fn moulton_axis(mu: &MassVector, axis: Axis, coeff: f64) -> Result<Vec<CollinearSolution>> {
    if !(coeff > 0.0 && coeff.is_finite()) {
        return Err(Error::InvalidProblem(
            "axis coefficient must be positive".into(),
        ));
    }
    let k = mu.len();
    let orderings = permutations(k);
    let base = if mu.all_equal() {
        let id: Vec<usize> = (0..k).collect();
        Some(solve_ordering(mu, coeff, &id)?)
    } else {
        None
    };
    orderings
        .into_iter()
        .map(|ordering| {
            let coords = match &base {
                Some(b) => {
                    let mut v = vec![Interval::ZERO; k];
                    for (rank, &body) in ordering.iter().enumerate() {
                        v[body] = b[rank];
                    }
                    IntervalBox::new(v)
                }
                None => solve_ordering(mu, coeff, &ordering)?,
            };
            Ok(CollinearSolution {
                axis,
                ordering,
                coords,
            })
        })
        .collect()
}

/// Which closed-form family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Triangle,
    Rhombus,
    Rectangle,
    CollinearX,
    CollinearY,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Triangle,
        Family::Rhombus,
        Family::Rectangle,
        Family::CollinearX,
        Family::CollinearY,
    ];
}

/// Closed-form solutions with their labeled certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub problem: ProblemSpec,
    pub family: Family,
    /// Named scalar enclosures (side lengths, ratios, angles).
    pub parameters: BTreeMap<String, Interval>,
    pub certificates: Vec<SolutionCertificate>,
}

/// Every distinct relabeling of a configuration.
fn labelings(points: &[Pt]) -> Vec<Vec<Pt>> {
    let mut out: Vec<Vec<Pt>> = Vec::new();
    for p in permutations(points.len()) {
        let q: Vec<Pt> = p.iter().map(|&i| points[i]).collect();
        let dup = out.iter().any(|o| {
            o.iter()
                .zip(&q)
                .all(|(a, b)| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12)
        });
        if !dup {
            out.push(q);
        }
    }
    out
}

fn flatten(points: &[Pt]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.0, p.1]).collect()
}

/// Builds one family for equal masses and certifies every labeling in the
/// full anisotropic system.
pub fn analytic_report(k: usize, a: f64, b: f64, family: Family) -> Result<AnalyticReport> {
    let prob = AnisoProblem::equal_masses(k, a, b)?;
    let mu = 1.0 / k as f64;
    let mut parameters = BTreeMap::new();
    let shapes: Vec<Vec<Pt>> = match family {
        Family::Triangle => {
            if k != 3 {
                return Err(Error::InvalidProblem(
                    "the triangle family needs k = 3".into(),
                ));
            }
            let mut shapes = Vec::new();
            if let Some(t) = isosceles_triangle(mu, a, b)? {
                parameters.insert("s".into(), t.s);
                parameters.insert("r".into(), t.r);
                shapes.push(t.vertices().to_vec());
                shapes.push(t.mirrored().to_vec());
            }
            // Triangles symmetric about the y axis: swap the roles of a and b.
            if let Some(t) = isosceles_triangle(mu, b, a)? {
                parameters.insert("s_swapped".into(), t.s);
                parameters.insert("r_swapped".into(), t.r);
                shapes.push(t.vertices().iter().map(|&(x, y)| (y, x)).collect());
                shapes.push(t.mirrored().iter().map(|&(x, y)| (y, x)).collect());
            }
            shapes
        }
        Family::Rhombus | Family::Rectangle if k != 4 => {
            return Err(Error::InvalidProblem(
                "rhombus and rectangle families need k = 4".into(),
            ));
        }
        Family::Rhombus => {
            let r = rhombus(mu, a, b)?;
            parameters.insert("kratio".into(), r.kratio);
            parameters.insert("r".into(), r.r);
            vec![r.vertices().to_vec()]
        }
        Family::Rectangle => {
            let r = rectangle(mu, a, b)?;
            parameters.insert("phi".into(), r.phi);
            parameters.insert("r".into(), r.r);
            vec![r.vertices().to_vec()]
        }
        Family::CollinearX | Family::CollinearY => {
            let (axis, coeff) = if family == Family::CollinearX {
                (Axis::X, a)
            } else {
                (Axis::Y, b)
            };
            let sols = moulton_axis(&prob.mu, axis, coeff)?;
            sols.iter().map(|s| s.points()).collect()
        }
    };
    let spec = ProblemSpec::Aniso(prob);
    let mut configs: Vec<Vec<Pt>> = Vec::new();
    for s in &shapes {
        if matches!(family, Family::CollinearX | Family::CollinearY) {
            configs.push(s.clone());
        } else {
            configs.extend(labelings(s));
        }
    }
    let mut certificates = Vec::new();
    for cfg in configs {
        let cert = certify_point(&spec, &flatten(&cfg), Origin::Analytic)?
            .ok_or(Error::Domain("closed-form solution failed to certify"))?;
        certificates.push(cert);
    }
    certificates.sort_by(|x, y| crate::search::cmp_points(&x.midpoint, &y.midpoint));
    Ok(AnalyticReport {
        problem: spec,
        family,
        parameters,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aniso::eval_aniso;

    fn residual_contains_zero(prob: &AnisoProblem, pts: &[Pt]) -> bool {
        let x = IntervalBox::from_point(&flatten(pts));
        eval_aniso(&x, prob)
            .unwrap()
            .iter()
            .all(|c| c.mag() < 1e-12)
    }

    #[test]
    fn l4_equal_masses_exact() {
        let p = l4_hessian_params(0.5, 0.5).unwrap();
        assert_eq!((p.a.lo(), p.a.hi()), (0.75, 0.75));
        assert_eq!((p.b.lo(), p.b.hi()), (2.25, 2.25));
        assert_eq!(p.rotation, 0.0);
        assert!(l4_hessian_params(0.0, 1.0).is_err());
        assert!(l4_hessian_params(0.3, 0.3).is_err());
    }

    #[test]
    fn l4_small_mass_limit() {
        let m1 = 1e-4;
        let p = l4_hessian_params(m1, 1.0 - m1).unwrap();
        let mm = m1 * (1.0 - m1);
        assert!((p.a.mid() - 2.25 * mm).abs() < 10.0 * mm * mm);
        let gap = p.b.mid() - p.a.mid();
        assert!(gap >= 1.5);
    }

    #[test]
    fn triangle_closed_form() {
        let t = isosceles_triangle(1.0 / 3.0, 0.75, 2.25).unwrap().unwrap();
        assert!((t.s.mid() - (4.0f64 / 3.0).cbrt()).abs() < 1e-14);
        assert!((t.r.mid() - (1.0f64 / 3.0).cbrt()).abs() < 1e-14);
        let v = t.mirrored();
        assert!((v[0].0 + 0.6964118400).abs() < 1e-8);
        assert!((v[1].0 - 0.3482059200).abs() < 1e-8);
        assert!((v[1].1.abs() - 0.3466806372).abs() < 1e-8);
        assert!(isosceles_triangle(1.0 / 3.0, 12.0, 5.0).unwrap().is_none());
        let e = isosceles_triangle(1.0 / 3.0, 1.0, 1.0).unwrap().unwrap();
        assert!((e.s.mid() - e.r.mid()).abs() < 1e-14);
        let prob = AnisoProblem::equal_masses(3, 0.75, 2.25).unwrap();
        assert!(residual_contains_zero(&prob, &t.vertices()));
    }

    #[test]
    fn rhombus_matches_table() {
        let r = rhombus(0.25, 0.75, 2.25).unwrap();
        assert!(r.kratio.width() < 1e-12 && r.x.width() < 1e-11);
        assert!((r.kratio.mid() - 0.39827).abs() < 1e-5);
        let v = r.vertices();
        assert!((v[0].0 - 0.8517357111).abs() < 1e-8);
        assert!((v[1].1 - 0.3392209571).abs() < 1e-8);
        let prob = AnisoProblem::equal_masses(4, 0.75, 2.25).unwrap();
        assert!(residual_contains_zero(&prob, &v));
        let sq = rhombus(0.25, 1.0, 1.0).unwrap();
        assert!(sq.kratio.contains(1.0) || (sq.kratio.mid() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rectangle_matches_table() {
        let r = rectangle(0.25, 0.75, 2.25).unwrap();
        assert!(r.phi.width() < 1e-12);
        assert!((r.phi.mid() - 0.553766).abs() < 1e-6);
        let v = r.vertices();
        assert!((v[0].0 - 0.5124981464).abs() < 1e-8);
        assert!((v[0].1 - 0.3168767565).abs() < 1e-8);
        let prob = AnisoProblem::equal_masses(4, 0.75, 2.25).unwrap();
        assert!(residual_contains_zero(&prob, &v));
        let sq = rectangle(0.25, 1.0, 1.0).unwrap();
        assert!((sq.phi.mid() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn moulton_examples() {
        let mu = MassVector::equal(3, 1.0).unwrap();
        let xs = moulton_axis(&mu, Axis::X, 0.75).unwrap();
        assert_eq!(xs.len(), 6);
        let c = &xs[0].coords;
        assert!((c[2].mid() - 0.8220706914).abs() < 1e-8 && c[1].mag() < 1e-12);
        let ys = moulton_axis(&mu, Axis::Y, 2.25).unwrap();
        assert!((ys[0].coords[2].mid() - 0.5699919822).abs() < 1e-8);
        let two = moulton_axis(&MassVector::equal(2, 1.0).unwrap(), Axis::X, 1.0).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two[0].coords[0].contains(-0.5) && two[0].coords[1].contains(0.5));
    }

    #[test]
    fn moulton_unequal_masses_each_ordering() {
        let mu = MassVector::from_values(&[0.5, 0.3, 0.2]).unwrap();
        let sols = moulton_axis(&mu, Axis::X, 1.0).unwrap();
        assert_eq!(sols.len(), 6);
        for s in &sols {
            let mid: Vec<f64> = s.ordering.iter().map(|&b| s.coords[b].mid()).collect();
            assert!(mid.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rhombus_family_has_24_labelings() {
        let rep = analytic_report(4, 0.75, 2.25, Family::Rhombus).unwrap();
        assert_eq!(rep.certificates.len(), 24);
    }
}
