//! Link between clusters of light bodies and the anisotropic limit problem.
//!
//! A cluster of `k` light bodies with total mass `Theta` near a relative
//! equilibrium `x*` of the heavy bodies is rescaled to
//! `p~ = (p - c) / Theta^(1/3)`, `mu~ = mu / Theta`; as `Theta -> 0` the
//! rescaled cluster solves the anisotropic problem whose coefficients are the
//! eigenvalues of the Hessian of
//!
//! ```text
//! V_res(p) = |p - c_Q|^2 / 2 + sum_i m_i / |p - q_i|
//! ```
//!
//! at `x*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::nbody::full_residual;
use crate::pairs::kernel;
use crate::search::{light_bodies, EnumerationReport, ProblemSpec};

type Pt = (f64, f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCluster {
    pub theta: f64,
    pub mu_tilde: Vec<f64>,
    pub p_tilde: Vec<Pt>,
    /// Center of mass of the cluster.
    pub c: Pt,
}

impl NormalizedCluster {
    /// Maps the rescaled positions back to the original frame.
    pub fn denormalize(&self) -> Vec<Pt> {
        let s = self.theta.cbrt();
        self.p_tilde
            .iter()
            .map(|p| (self.c.0 + p.0 * s, self.c.1 + p.1 * s))
            .collect()
    }
}

/// Rescales a cluster about its own center of mass.
pub fn normalize_cluster(points: &[Pt], mu: &[f64]) -> NormalizedCluster {
    assert_eq!(points.len(), mu.len(), "one mass per point");
    assert!(mu.iter().all(|&m| m > 0.0), "masses must be positive");
    let theta: f64 = mu.iter().sum();
    let cx = points.iter().zip(mu).map(|(p, m)| m * p.0).sum::<f64>() / theta;
    let cy = points.iter().zip(mu).map(|(p, m)| m * p.1).sum::<f64>() / theta;
    let s = theta.cbrt();
    NormalizedCluster {
        theta,
        mu_tilde: mu.iter().map(|m| m / theta).collect(),
        p_tilde: points
            .iter()
            .map(|p| ((p.0 - cx) / s, (p.1 - cy) / s))
            .collect(),
        c: (cx, cy),
    }
}

type IPt = (Interval, Interval);

fn ipt(p: Pt) -> IPt {
    (Interval::point(p.0), Interval::point(p.1))
}

/// `L4 = (0, sqrt(3)/2)` for primaries at `(-1/2, 0)` and `(1/2, 0)`.
pub fn l4_point() -> IPt {
    let h = Interval::point(3.0).sqrt().expect("positive") * 0.5;
    (Interval::ZERO, h)
}

fn check_separated(q: &[IPt], x: IPt) -> Result<()> {
    for (i, p) in q.iter().enumerate() {
        if (x.0 - p.0).contains_zero() && (x.1 - p.1).contains_zero() {
            return Err(Error::InvalidProblem(format!(
                "point coincides with heavy body {i}"
            )));
        }
    }
    Ok(())
}

/// Hessian of `V_res` at `x`: `I - sum_i m_i G(x - q_i)`.
fn hessian(q: &[IPt], m: &[Interval], x: IPt) -> Result<[Interval; 3]> {
    check_separated(q, x)?;
    let mut h = [Interval::ONE, Interval::ZERO, Interval::ONE];
    for (i, (p, &mi)) in q.iter().zip(m).enumerate() {
        let k = kernel(x.0 - p.0, x.1 - p.1, i, i)
            .map_err(|_| Error::InvalidProblem(format!("point coincides with heavy body {i}")))?;
        h[0] = h[0] - mi * k.gxx;
        h[1] = h[1] - mi * k.gxy;
        h[2] = h[2] - mi * k.gyy;
    }
    Ok(h)
}

/// Coefficients of the limit problem at `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedAb {
    /// Smaller eigenvalue.
    pub a: Interval,
    /// Larger eigenvalue.
    pub b: Interval,
    /// Angle of the eigenvector for `a`, in `(-pi/2, pi/2]`.
    pub rotation: f64,
}

/// Eigen-decomposition of the symmetric 2x2 matrix `[[p, h], [h, q]]`.
pub(crate) fn sym2_eigen(p: Interval, h: Interval, q: Interval) -> Result<InducedAb> {
    let half_tr = (p + q) * 0.5;
    let diff = (p - q) * 0.5;
    let disc = (diff.sqr() + h.sqr()).sqrt()?;
    let a = half_tr - disc;
    let b = half_tr + disc;
    let (pm, hm, qm, am) = (p.mid(), h.mid(), q.mid(), a.mid());
    let mut theta = if hm == 0.0 {
        if pm <= qm {
            0.0
        } else {
            std::f64::consts::FRAC_PI_2
        }
    } else {
        hm.atan2(am - qm)
    };
    while theta > std::f64::consts::FRAC_PI_2 {
        theta -= std::f64::consts::PI;
    }
    while theta <= -std::f64::consts::FRAC_PI_2 {
        theta += std::f64::consts::PI;
    }
    Ok(InducedAb {
        a,
        b,
        rotation: theta,
    })
}

/// `(a, b)` and rotation from the Hessian of `V_res` at `x_star`.
pub fn induced_ab(q: &[IPt], m: &[Interval], x_star: IPt) -> Result<InducedAb> {
    let [hxx, hxy, hyy] = hessian(q, m, x_star)?;
    sym2_eigen(hxx, hxy, hyy)
}

/// Enclosure of `grad V_res(x_star)`; contains zero at a relative equilibrium.
pub fn relequi_residual(q: &[IPt], m: &[Interval], x_star: IPt) -> Result<IPt> {
    check_separated(q, x_star)?;
    let total: Interval = m.iter().copied().sum();
    let cx = q
        .iter()
        .zip(m)
        .map(|(p, &mi)| mi * p.0)
        .sum::<Interval>()
        .checked_div(total)?;
    let cy = q
        .iter()
        .zip(m)
        .map(|(p, &mi)| mi * p.1)
        .sum::<Interval>()
        .checked_div(total)?;
    let mut gx = x_star.0 - cx;
    let mut gy = x_star.1 - cy;
    for (i, (p, &mi)) in q.iter().zip(m).enumerate() {
        let k = kernel(x_star.0 - p.0, x_star.1 - p.1, i, i)
            .map_err(|_| Error::InvalidProblem(format!("point coincides with heavy body {i}")))?;
        gx = gx - mi * k.inv3 * (x_star.0 - p.0);
        gy = gy - mi * k.inv3 * (x_star.1 - p.1);
    }
    Ok((gx, gy))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    /// Index into the finite-mass report's certificates.
    pub pgu: usize,
    /// Index into the limit report's certificates.
    pub phu: usize,
    /// `relabel[i]`: limit-problem body matched to light body `i`.
    pub relabel: Vec<usize>,
    pub normalized: Vec<Pt>,
    pub limit: Vec<Pt>,
    /// Largest per-body distance after relabeling.
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub threshold: f64,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_pgu: Vec<usize>,
    pub unmatched_phu: Vec<usize>,
    pub max_discrepancy: f64,
    /// The two reports hold different numbers of certificates.
    pub cardinality_mismatch: bool,
}

impl PairingReport {
    pub fn is_perfect(&self) -> bool {
        !self.cardinality_mismatch && self.unmatched_pgu.is_empty() && self.unmatched_phu.is_empty()
    }
}

/// Normalized light-body cluster of every certificate of a finite-mass run.
pub fn normalized_clusters(report: &EnumerationReport) -> Result<Vec<NormalizedCluster>> {
    let ProblemSpec::Nbody(p) = &report.problem else {
        return Err(Error::InvalidProblem("expected an n-body report".into()));
    };
    let light = light_bodies(p);
    if light.len() < 2 {
        return Err(Error::InvalidProblem(
            "report has fewer than two light bodies".into(),
        ));
    }
    let mu: Vec<f64> = light.iter().map(|&i| p.masses.get(i).mid()).collect();
    Ok(report
        .certificates
        .iter()
        .map(|c| {
            let pos = report.problem.point_positions(&c.midpoint);
            let pts: Vec<Pt> = light.iter().map(|&i| pos[i]).collect();
            normalize_cluster(&pts, &mu)
        })
        .collect())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(n: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..n - 1 {
        heap_permute(n - 1, a, out);
        if n.is_multiple_of(2) {
            a.swap(i, n - 1);
        } else {
            a.swap(0, n - 1);
        }
    }
    heap_permute(n - 1, a, out);
}

fn max_dist(a: &[Pt], b: &[Pt], relabel: &[usize]) -> f64 {
    a.iter()
        .zip(relabel)
        .map(|(p, &j)| (p.0 - b[j].0).hypot(p.1 - b[j].1))
        .fold(0.0, f64::max)
}

/// Matches finite-mass certificates to limit-problem certificates.
///
/// The cost of a pair is the largest per-body distance between the
/// normalized cluster and the limit configuration, minimized over body
/// relabelings; the assignment minimizes the total cost. Pairs above
/// `threshold` are reported as unmatched.
pub fn pair_solutions(
    pgu: &EnumerationReport,
    phu: &EnumerationReport,
    threshold: f64,
) -> Result<PairingReport> {
    let ProblemSpec::Aniso(limit) = &phu.problem else {
        return Err(Error::InvalidProblem(
            "second report must be an anisotropic run".into(),
        ));
    };
    let clusters = normalized_clusters(pgu)?;
    let k = limit.k();
    if let Some(c) = clusters.first() {
        if c.p_tilde.len() != k {
            return Err(Error::InvalidProblem(format!(
                "cluster of {} light bodies cannot pair with a {k}-body limit problem",
                c.p_tilde.len()
            )));
        }
    }
    let targets: Vec<Vec<Pt>> = phu
        .certificates
        .iter()
        .map(|c| phu.problem.point_positions(&c.midpoint))
        .collect();
    let perms = permutations(k);
    let mut cost = vec![vec![0.0; targets.len()]; clusters.len()];
    let mut best_perm = vec![vec![0usize; targets.len()]; clusters.len()];
    for (i, c) in clusters.iter().enumerate() {
        for (j, t) in targets.iter().enumerate() {
            let (pi, d) = perms
                .iter()
                .enumerate()
                .map(|(pi, p)| (pi, max_dist(&c.p_tilde, t, p)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("at least one permutation");
            cost[i][j] = d;
            best_perm[i][j] = pi;
        }
    }
    let assignment = hungarian(&cost);
    let mut pairs = Vec::new();
    let mut used_phu = vec![false; targets.len()];
    let mut unmatched_pgu = Vec::new();
    for (i, a) in assignment.iter().enumerate() {
        match *a {
            Some(j) if cost[i][j] <= threshold => {
                used_phu[j] = true;
                pairs.push(MatchedPair {
                    pgu: i,
                    phu: j,
                    relabel: perms[best_perm[i][j]].clone(),
                    normalized: clusters[i].p_tilde.clone(),
                    limit: targets[j].clone(),
                    discrepancy: cost[i][j],
                });
            }
            _ => unmatched_pgu.push(i),
        }
    }
    let unmatched_phu = (0..targets.len()).filter(|&j| !used_phu[j]).collect();
    let max_discrepancy = pairs.iter().map(|p| p.discrepancy).fold(0.0, f64::max);
    Ok(PairingReport {
        threshold,
        pairs,
        unmatched_pgu,
        unmatched_phu,
        max_discrepancy,
        cardinality_mismatch: clusters.len() != targets.len(),
    })
}

/// Minimum-cost assignment of rows to columns (Kuhn-Munkres with
/// potentials). Rectangular inputs leave the surplus side unassigned.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    let n = rows.max(cols);
    let big = cost.iter().flatten().fold(0.0f64, |m, &c| m.max(c)) * 2.0 + 1.0;
    let c = |i: usize, j: usize| {
        if i < rows && j < cols {
            cost[i][j]
        } else {
            big
        }
    };
    // 1-based arrays as in the classic formulation.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = c(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![None; rows];
    for j in 1..=n {
        let i = p[j];
        if i >= 1 && i <= rows && j <= cols {
            out[i - 1] = Some(j - 1);
        }
    }
    out
}

/// Residual of the full `(N + k)` system at the configuration predicted by
/// the limit problem: heavy bodies at `q_hat`, light bodies at
/// `x* + Theta^(1/3) p_hat` with masses `Theta mu_tilde`. The configuration
/// is shifted to its center of mass and each body's equation is divided by
/// its mass, so the value is an acceleration mismatch of order
/// `Theta^(2/3)`.
pub fn continuation_residual(
    q_hat: &[Pt],
    m: &[f64],
    x_star: Pt,
    p_hat: &[Pt],
    mu_tilde: &[f64],
    theta: f64,
) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::InvalidProblem("theta must be positive".into()));
    }
    if q_hat.len() != m.len() || p_hat.len() != mu_tilde.len() {
        return Err(Error::InvalidProblem("one mass per body".into()));
    }
    let s = theta.cbrt();
    let mut pos: Vec<Pt> = q_hat.to_vec();
    pos.extend(
        p_hat
            .iter()
            .map(|p| (x_star.0 + s * p.0, x_star.1 + s * p.1)),
    );
    let mut masses: Vec<f64> = m.to_vec();
    masses.extend(mu_tilde.iter().map(|mu| theta * mu));
    let total: f64 = masses.iter().sum();
    let cx = pos.iter().zip(&masses).map(|(p, w)| w * p.0).sum::<f64>() / total;
    let cy = pos.iter().zip(&masses).map(|(p, w)| w * p.1).sum::<f64>() / total;
    let ipos: Vec<IPt> = pos.iter().map(|p| ipt((p.0 - cx, p.1 - cy))).collect();
    let im: Vec<Interval> = masses.iter().map(|&w| Interval::point(w)).collect();
    let r = full_residual(&ipos, &im)?;
    Ok(r.iter()
        .zip(&masses)
        .map(|(ri, &w)| (ri.0.mid() / w).abs().max((ri.1.mid() / w).abs()))
        .fold(0.0, f64::max))
}

/// Embeds a limit-problem configuration into the full system around `x*`.
pub fn predicted_box(q_hat: &[Pt], x_star: Pt, p_hat: &[Pt], theta: f64) -> IntervalBox {
    let s = theta.cbrt();
    q_hat
        .iter()
        .copied()
        .chain(
            p_hat
                .iter()
                .map(|p| (x_star.0 + s * p.0, x_star.1 + s * p.1)),
        )
        .flat_map(|p| [Interval::point(p.0), Interval::point(p.1)])
        .collect()
}
