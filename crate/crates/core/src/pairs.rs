//! Pairwise Newtonian kernels shared by both problem families.

use crate::error::{Error, Result};
use crate::interval::{inv_cube_from_sq, round, Interval};

/// `1/r^3` and the symmetric matrix `G(d) = I/r^3 - 3 d d^T / r^5` for a
/// separation `d = (dx, dy)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairKernel {
    pub inv3: Interval,
    pub gxx: Interval,
    pub gxy: Interval,
    pub gyy: Interval,
}

const UNIT: Interval = Interval::ONE;

fn clamp(x: Interval, lo: f64, hi: f64) -> Interval {
    x.intersect(Interval::from_bounds(lo, hi))
        .unwrap_or_else(|| Interval::from_bounds(lo, hi))
}

/// Fails with `PossibleCollision{i, j}` when `d` may vanish.
pub(crate) fn kernel(dx: Interval, dy: Interval, i: usize, j: usize) -> Result<PairKernel> {
    let (dx2, dy2) = (dx.sqr(), dy.sqr());
    let r2 = dx2 + dy2;
    let inv3 = inv_cube_from_sq(r2).map_err(|_| Error::PossibleCollision { i, j })?;
    let inv_r2 = r2.recip().map_err(|_| Error::PossibleCollision { i, j })?;
    // Direction cosines: cxx + cyy = 1, |cxy| <= 1/2.
    let cxx = clamp(dx2 * inv_r2, 0.0, 1.0);
    let cyy = clamp(dy2 * inv_r2, 0.0, 1.0);
    let cxx = clamp(cxx.intersect(UNIT - cyy).unwrap_or(cxx), 0.0, 1.0);
    let cyy = clamp(cyy.intersect(UNIT - cxx).unwrap_or(cyy), 0.0, 1.0);
    let cxy = clamp(dx * dy * inv_r2, -0.5, 0.5);
    Ok(PairKernel {
        inv3,
        gxx: inv3 * (UNIT - cxx * 3.0),
        gxy: -(inv3 * cxy * 3.0),
        gyy: inv3 * (UNIT - cyy * 3.0),
    })
}

fn sq_up(x: f64) -> f64 {
    round::mul_up(x, x)
}

fn sq_down(x: f64) -> f64 {
    round::mul_down(x, x)
}

/// Upper bound of the largest distance between two planar boxes.
pub(crate) fn max_dist_up(p: (Interval, Interval), q: (Interval, Interval)) -> f64 {
    let dx = (p.0 - q.0).mag();
    let dy = (p.1 - q.1).mag();
    round::sqrt_up(round::add_up(sq_up(dx), sq_up(dy)))
}

/// Virial test for a subcluster.
///
/// Let `S` be a set of bodies whose equations
/// `m_i L p_i = sum_{j != i} m_i m_j (p_i - p_j) / r_ij^3` all hold, with `L`
/// linear and `Psi(p) = L p - Phi(p)` where `Phi` is the field of the bodies
/// outside `S`. Dotting with `p_i - c` (`c` the center of mass of `S`) and
/// summing gives
///
/// ```text
/// sum_{i<j in S} m_i m_j / r_ij = sum_i m_i (Psi(p_i) - Psi(c)) . (p_i - c)
///                              <= Lip(Psi) / M_S * sum_{i<j} m_i m_j r_ij^2
/// ```
///
/// hence `D^3 >= M_S / Lip(Psi)` with `D` the diameter of `S`. Returns true
/// when the boxes force `D^3 < M_S / Lip(Psi)`, i.e. no solution is possible.
pub(crate) fn cluster_excluded(
    pos: &[(Interval, Interval)],
    masses: &[Interval],
    members: &[usize],
    linear_norm: f64,
) -> bool {
    if members.len() < 2 {
        return false;
    }
    let total = members.iter().map(|&i| masses[i]).sum::<Interval>().lo();
    let mut diam = 0.0f64;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            diam = diam.max(max_dist_up(pos[i], pos[j]));
        }
    }
    let d3 = round::mul_up(round::mul_up(diam, diam), diam);
    // Lip(Psi) is at least the linear part, so this is the weakest threshold.
    if d3 >= round::div_down(total, linear_norm) {
        return false;
    }
    let hull_x = members
        .iter()
        .map(|&i| pos[i].0)
        .reduce(Interval::hull)
        .unwrap();
    let hull_y = members
        .iter()
        .map(|&i| pos[i].1)
        .reduce(Interval::hull)
        .unwrap();
    let mut lip = linear_norm;
    for (j, &p) in pos.iter().enumerate() {
        if members.contains(&j) {
            continue;
        }
        // The derivative of d / |d|^3 has spectral norm 2 / |d|^3.
        let rho2 = round::add_down(sq_down((hull_x - p.0).mig()), sq_down((hull_y - p.1).mig()));
        if !(rho2 > 0.0) {
            return false;
        }
        let rho3 = round::mul_down(rho2, round::sqrt_down(rho2));
        lip = round::add_up(lip, round::div_up(round::mul_up(2.0, masses[j].hi()), rho3));
    }
    d3 < round::div_down(total, lip)
}

/// Sum of the equations of the members of a subcluster `S`,
///
/// ```text
/// sum_{i in S} m_i L p_i - sum_{i in S, j not in S} m_i m_j (p_i - p_j) / r_ij^3,
/// ```
///
/// where `L = diag(lx, ly)`; it vanishes at every solution. The forces inside
/// `S` cancel, so the sum stays bounded when members collide. `None` when a
/// member may collide with an outside body. With one member this is just
/// that body's equation.
pub(crate) fn cluster_sum(
    pos: &[(Interval, Interval)],
    masses: &[Interval],
    members: &[usize],
    lx: f64,
    ly: f64,
) -> Option<(Interval, Interval)> {
    let mut sx = Interval::ZERO;
    let mut sy = Interval::ZERO;
    for &i in members {
        sx = sx + masses[i] * pos[i].0 * lx;
        sy = sy + masses[i] * pos[i].1 * ly;
        for (j, &q) in pos.iter().enumerate() {
            if members.contains(&j) {
                continue;
            }
            let (dx, dy) = (pos[i].0 - q.0, pos[i].1 - q.1);
            let inv3 = inv_cube_from_sq(dx.sqr() + dy.sqr()).ok()?;
            let c = masses[i] * masses[j] * inv3;
            sx = sx - c * dx;
            sy = sy - c * dy;
        }
    }
    Some((sx, sy))
}

/// A tight cluster away from an equilibrium of the outside field is rejected
/// without resolving the collisions inside it.
pub(crate) fn cluster_sum_excluded(
    pos: &[(Interval, Interval)],
    masses: &[Interval],
    members: &[usize],
    lx: f64,
    ly: f64,
) -> bool {
    cluster_sum(pos, masses, members, lx, ly)
        .is_some_and(|(sx, sy)| !sx.contains_zero() || !sy.contains_zero())
}

/// Box form of the identity `sum_i m_i (a x_i^2 + b y_i^2) = sum_{i<j} m_i m_j / r_ij`,
/// which holds at every solution. Returns true when the pair sum is forced
/// above the quadratic form. This is the distance lower bound evaluated with
/// the moment of inertia of the box instead of a global radius.
pub(crate) fn inertia_excluded(
    pos: &[(Interval, Interval)],
    masses: &[Interval],
    a: f64,
    b: f64,
) -> bool {
    let lhs: Interval = pos
        .iter()
        .zip(masses)
        .map(|(p, &m)| m * (p.0.sqr() * a + p.1.sqr() * b))
        .sum();
    let mut rhs = 0.0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let mm = round::mul_down(masses[i].lo(), masses[j].lo());
            rhs = round::add_down(rhs, round::div_down(mm, max_dist_up(pos[i], pos[j])));
        }
    }
    rhs > lhs.hi()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64) -> Interval {
        Interval::point(x)
    }

    #[test]
    fn inertia_test_keeps_solutions_and_drops_tight_pairs() {
        // Two bodies of mass 1/2 with a = b = 1 sit at x = +-1/2, where the
        // identity holds with equality.
        let m = [pt(0.5), pt(0.5)];
        let x = 0.5;
        let sol = [(pt(x), pt(0.0)), (pt(-x), pt(0.0))];
        assert!(!inertia_excluded(&sol, &m, 1.0, 1.0));
        let near = |c: f64, r: f64| (Interval::centered(c, r), Interval::centered(0.0, r));
        let tight = [near(0.01, 0.001), near(-0.01, 0.001)];
        assert!(inertia_excluded(&tight, &m, 1.0, 1.0));
    }

    #[test]
    fn kernel_matches_scalar_formula() {
        let (dx, dy) = (0.3, -0.7);
        let k = kernel(pt(dx), pt(dy), 0, 1).unwrap();
        let r2: f64 = dx * dx + dy * dy;
        let r3 = r2 * r2.sqrt();
        let r5 = r3 * r2;
        assert!((k.inv3.mid() - 1.0 / r3).abs() < 1e-14);
        assert!((k.gxx.mid() - (1.0 / r3 - 3.0 * dx * dx / r5)).abs() < 1e-13);
        assert!((k.gxy.mid() + 3.0 * dx * dy / r5).abs() < 1e-13);
        assert!((k.gyy.mid() - (1.0 / r3 - 3.0 * dy * dy / r5)).abs() < 1e-13);
    }

    #[test]
    fn kernel_rejects_overlap() {
        let d = Interval::new(-0.1, 0.1).unwrap();
        assert!(matches!(
            kernel(d, d, 2, 5),
            Err(Error::PossibleCollision { i: 2, j: 5 })
        ));
    }

    #[test]
    fn tight_cluster_is_excluded() {
        // Two unit masses 1e-3 apart in a weak external field.
        let pos = [(pt(0.0), pt(0.0)), (pt(1e-3), pt(0.0)), (pt(10.0), pt(0.0))];
        let m = [pt(1.0), pt(1.0), pt(1.0)];
        assert!(cluster_excluded(&pos, &m, &[0, 1], 1.0));
        // A wide pair is not.
        let pos = [(pt(0.0), pt(0.0)), (pt(2.0), pt(0.0)), (pt(10.0), pt(0.0))];
        assert!(!cluster_excluded(&pos, &m, &[0, 1], 1.0));
    }

    #[test]
    fn two_body_solution_survives_the_cluster_test() {
        // m q = m^2 (2q)/(2q)^3 with m = 1/2: q = 2^(-2/3).
        let q = 2f64.powf(-2.0 / 3.0);
        let pos = [(pt(q), pt(0.0)), (pt(-q), pt(0.0))];
        let m = [pt(0.5), pt(0.5)];
        assert!(!cluster_excluded(&pos, &m, &[0, 1], 1.0));
    }
}
