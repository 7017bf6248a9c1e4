//! Reduced central-configuration system of the planar `n`-body problem.
//!
//! Normalized central configurations solve `m_i q_i = f_i(q)` with
//! `f_i = sum_{j != i} m_i m_j (q_i - q_j) / r_ij^3` and center of mass at the
//! origin. The last body is eliminated through
//! `q_n = -(1/m_n) sum_{i<n} m_i q_i`, the `y` coordinate of the gauge body
//! `k1` is pinned to zero and its `y` equation dropped, leaving `2(n-1)-1`
//! equations in as many unknowns.
//!
//! Body indices are 0-based; the reduced box lists `x_0, y_0, ..., x_{n-2},
//! y_{n-2}` with `y_{k1}` omitted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox, IntervalMatrix};
use crate::krawczyk::Residual;
use crate::masses::MassVector;
use crate::pairs::{self, kernel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedNBodyProblem {
    pub masses: MassVector,
    /// 0-based index of the body whose `y` is pinned; must be below `n - 1`.
    pub gauge: usize,
}

impl ReducedNBodyProblem {
    pub fn new(masses: MassVector, gauge: usize) -> Result<Self> {
        let n = masses.len();
        if n < 2 {
            return Err(Error::InvalidProblem("need at least two bodies".into()));
        }
        if gauge >= n - 1 {
            return Err(Error::InvalidProblem(format!(
                "gauge index {gauge} must be below {}",
                n - 1
            )));
        }
        Ok(ReducedNBodyProblem { masses, gauge })
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    /// Number of unknowns, `2(n-1) - 1`.
    pub fn dim(&self) -> usize {
        2 * (self.n() - 1) - 1
    }

    /// Position of coordinate `axis` (0 = x, 1 = y) of `body` in the reduced
    /// box; `None` for the pinned `y` and for the eliminated last body.
    pub fn var_index(&self, body: usize, axis: usize) -> Option<usize> {
        if body >= self.n() - 1 || (body == self.gauge && axis == 1) {
            return None;
        }
        let flat = 2 * body + axis;
        Some(if flat > 2 * self.gauge + 1 {
            flat - 1
        } else {
            flat
        })
    }

    fn check(&self, cfg: &IntervalBox) -> Result<()> {
        if cfg.dims() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: cfg.dims(),
            });
        }
        Ok(())
    }

    /// Expands a reduced box to all `n` positions, `q_n` from the center of mass.
    pub fn positions(&self, cfg: &IntervalBox) -> Vec<(Interval, Interval)> {
        let n = self.n();
        let coord = |b: usize, a: usize| self.var_index(b, a).map_or(Interval::ZERO, |v| cfg[v]);
        let mut pos: Vec<(Interval, Interval)> =
            (0..n - 1).map(|b| (coord(b, 0), coord(b, 1))).collect();
        pos.push(self.last_body(&pos));
        pos
    }

    fn last_body(&self, pos: &[(Interval, Interval)]) -> (Interval, Interval) {
        let m = self.masses.as_slice();
        let mn = m[self.n() - 1];
        let sx: Interval = pos.iter().zip(m).map(|(p, &mi)| mi * p.0).sum();
        let sy: Interval = pos.iter().zip(m).map(|(p, &mi)| mi * p.1).sum();
        let inv = mn.recip().expect("masses are positive");
        (-(sx * inv), -(sy * inv))
    }

    /// Reduced box from a full point configuration (drops `y_{k1}` and `q_n`).
    pub fn reduce_point(&self, q: &[(f64, f64)]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        for (b, &(x, y)) in q.iter().enumerate().take(self.n() - 1) {
            v.push(x);
            if b != self.gauge {
                v.push(y);
            }
        }
        v
    }
}

/// Enclosure of `q_n = -(1/m_n) sum_{i<n} m_i q_i`.
pub fn com_fill(cfg: &IntervalBox, prob: &ReducedNBodyProblem) -> Result<(Interval, Interval)> {
    prob.check(cfg)?;
    Ok(*prob.positions(cfg).last().unwrap())
}

/// Residual `R_i = m_i q_i - f_i` for `i < n`, without the `y` row of `k1`.
pub fn eval_rs(cfg: &IntervalBox, prob: &ReducedNBodyProblem) -> Result<IntervalBox> {
    prob.check(cfg)?;
    let full = full_residual(&prob.positions(cfg), prob.masses.as_slice())?;
    let mut out = Vec::with_capacity(prob.dim());
    for (b, r) in full.iter().enumerate().take(prob.n() - 1) {
        out.push(r.0);
        if b != prob.gauge {
            out.push(r.1);
        }
    }
    Ok(IntervalBox::new(out))
}

/// `R_i = m_i q_i - f_i` for all bodies at explicit positions.
pub fn full_residual(
    pos: &[(Interval, Interval)],
    m: &[Interval],
) -> Result<Vec<(Interval, Interval)>> {
    let n = pos.len();
    let mut r: Vec<(Interval, Interval)> =
        (0..n).map(|i| (m[i] * pos[i].0, m[i] * pos[i].1)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let g = kernel(dx, dy, i, j)?;
            let c = m[i] * m[j] * g.inv3;
            let (tx, ty) = (c * dx, c * dy);
            r[i] = (r[i].0 - tx, r[i].1 - ty);
            r[j] = (r[j].0 + tx, r[j].1 + ty);
        }
    }
    Ok(r)
}

/// Forces `f_i` at explicit positions.
pub fn forces(pos: &[(Interval, Interval)], m: &[Interval]) -> Result<Vec<(Interval, Interval)>> {
    let r = full_residual(pos, m)?;
    Ok(r.iter()
        .zip(pos)
        .zip(m)
        .map(|((r, p), &mi)| (mi * p.0 - r.0, mi * p.1 - r.1))
        .collect())
}

/// Interval Jacobian of [`eval_rs`], including the chain rule through `q_n`.
pub fn jac_rs(cfg: &IntervalBox, prob: &ReducedNBodyProblem) -> Result<IntervalMatrix> {
    prob.check(cfg)?;
    let n = prob.n();
    let m = prob.masses.as_slice();
    let pos = prob.positions(cfg);
    // G blocks for every pair.
    let mut g = vec![vec![[Interval::ZERO; 3]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let k = kernel(pos[i].0 - pos[j].0, pos[i].1 - pos[j].1, i, j)?;
            g[i][j] = [k.gxx, k.gxy, k.gyy];
            g[j][i] = g[i][j];
        }
    }
    let blk = |gg: &[Interval; 3], r: usize, c: usize| gg[r + c];
    let nn = 2 * (n - 1);
    let mut full = IntervalMatrix::zeros(nn, nn);
    for i in 0..n - 1 {
        for l in 0..n - 1 {
            for r in 0..2 {
                for c in 0..2 {
                    // d f_i / d q_l
                    let mut df = m[i] * m[l] * blk(&g[i][n - 1], r, c);
                    if i == l {
                        let s: Interval = (0..n)
                            .filter(|&j| j != i)
                            .map(|j| m[i] * m[j] * blk(&g[i][j], r, c))
                            .sum();
                        df = df + s;
                    } else {
                        df = df - m[i] * m[l] * blk(&g[i][l], r, c);
                    }
                    let diag = if i == l && r == c {
                        m[i]
                    } else {
                        Interval::ZERO
                    };
                    full[(2 * i + r, 2 * l + c)] = diag - df;
                }
            }
        }
    }
    let pin = 2 * prob.gauge + 1;
    Ok(full.without(&[pin], &[pin]))
}

/// True iff the enclosures of `x_{k1}` and `x_n` are disjoint, the condition
/// under which a zero of the reduced system is a central configuration.
pub fn check_gauge_validity(cfg: &IntervalBox, prob: &ReducedNBodyProblem) -> bool {
    if cfg.dims() != prob.dim() {
        return false;
    }
    let pos = prob.positions(cfg);
    pos[prob.gauge].0.disjoint(pos[prob.n() - 1].0)
}

impl Residual for ReducedNBodyProblem {
    fn dim(&self) -> usize {
        ReducedNBodyProblem::dim(self)
    }

    fn eval(&self, x: &IntervalBox) -> Result<IntervalBox> {
        eval_rs(x, self)
    }

    fn jacobian(&self, x: &IntervalBox) -> Result<IntervalMatrix> {
        jac_rs(x, self)
    }
}

impl ReducedNBodyProblem {
    /// Bodies whose full equations are all present in the reduced system.
    fn free_bodies(&self) -> Vec<usize> {
        (0..self.n() - 1).filter(|&b| b != self.gauge).collect()
    }

    /// Identity `sum m_i |q_i|^2 = sum m_i m_j / r_ij` of normalized central
    /// configurations. It needs every equation, so it is only applied where
    /// the gauge is valid and zeros of the reduced system are central
    /// configurations.
    pub(crate) fn inertia_excluded(&self, cfg: &IntervalBox) -> bool {
        check_gauge_validity(cfg, self)
            && pairs::inertia_excluded(&self.positions(cfg), self.masses.as_slice(), 1.0, 1.0)
    }

    /// Natural evaluation of the rows of the reduced system that belong to
    /// bodies that cannot collide: both rows of a free body, the `x` row of
    /// the gauge body.
    pub(crate) fn rows_excluded(&self, cfg: &IntervalBox) -> bool {
        let pos = self.positions(cfg);
        let m = self.masses.as_slice();
        self.free_bodies()
            .into_iter()
            .any(|i| pairs::cluster_sum_excluded(&pos, m, &[i], 1.0, 1.0))
            || pairs::cluster_sum(&pos, m, &[self.gauge], 1.0, 1.0)
                .is_some_and(|(sx, _)| !sx.contains_zero())
    }

    /// Virial and equation-sum exclusion over subclusters of bodies other
    /// than `k1` and `n`, whose equations are all in the reduced system.
    pub(crate) fn cluster_excluded(&self, cfg: &IntervalBox) -> bool {
        let free = self.free_bodies();
        if free.len() < 2 {
            return false;
        }
        let pos = self.positions(cfg);
        (1u32..1 << free.len())
            .filter(|s| s.count_ones() >= 2)
            .any(|s| {
                let members: Vec<usize> = (0..free.len())
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| free[i])
                    .collect();
                pairs::cluster_excluded(&pos, self.masses.as_slice(), &members, 1.0)
                    || pairs::cluster_sum_excluded(&pos, self.masses.as_slice(), &members, 1.0, 1.0)
            })
    }
}
