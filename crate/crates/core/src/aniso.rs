//! Central configurations of `k` light bodies in an anisotropic plane.
//!
//! With potential
//!
//! ```text
//! W(p) = sum_i mu_i/2 (a x_i^2 + b y_i^2) + sum_{i<j} mu_i mu_j / r_ij
//! ```
//!
//! the equations are `mu_i a x_i = sum_{j != i} mu_i mu_j (x_i - x_j) / r_ij^3`
//! and the same with `b` and `y`. Configurations are stored as boxes with
//! layout `(x_1, y_1, ..., x_k, y_k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox, IntervalMatrix};
use crate::krawczyk::Residual;
use crate::masses::MassVector;
use crate::pairs::{self, kernel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnisoProblem {
    pub mu: MassVector,
    pub a: f64,
    pub b: f64,
}

impl AnisoProblem {
    /// Requires `sum mu = 1` (as an enclosure), finite `a, b`, and not both
    /// of them non-positive (no solutions exist then).
    pub fn new(mu: MassVector, a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidProblem("a and b must be finite".into()));
        }
        if a <= 0.0 && b <= 0.0 {
            return Err(Error::InvalidProblem(
                "a <= 0 and b <= 0: the system has no solutions".into(),
            ));
        }
        if mu.len() < 2 {
            return Err(Error::InvalidProblem("need at least two bodies".into()));
        }
        let total = mu.total();
        if total.lo() > 1.0 || total.hi() < 1.0 {
            let d = (total.mid() - 1.0).abs();
            if d > 1e-12 {
                return Err(Error::InvalidProblem(format!(
                    "masses must sum to 1, got {total}"
                )));
            }
        }
        Ok(AnisoProblem { mu, a, b })
    }

    pub fn equal_masses(k: usize, a: f64, b: f64) -> Result<Self> {
        AnisoProblem::new(MassVector::equal(k, 1.0)?, a, b)
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    fn check(&self, cfg: &IntervalBox) -> Result<()> {
        if cfg.dims() != 2 * self.k() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.k(),
                found: cfg.dims(),
            });
        }
        Ok(())
    }

    /// Body positions as `(x, y)` pairs.
    pub fn positions(cfg: &IntervalBox) -> Vec<(Interval, Interval)> {
        cfg.coords().chunks(2).map(|c| (c[0], c[1])).collect()
    }
}

/// Residual of the anisotropic system, dimension `2k`.
pub fn eval_aniso(cfg: &IntervalBox, prob: &AnisoProblem) -> Result<IntervalBox> {
    prob.check(cfg)?;
    let k = prob.k();
    let p = AnisoProblem::positions(cfg);
    let mu = prob.mu.as_slice();
    let mut fx: Vec<Interval> = (0..k).map(|i| mu[i] * p[i].0 * prob.a).collect();
    let mut fy: Vec<Interval> = (0..k).map(|i| mu[i] * p[i].1 * prob.b).collect();
    for i in 0..k {
        for j in i + 1..k {
            let dx = p[i].0 - p[j].0;
            let dy = p[i].1 - p[j].1;
            let g = kernel(dx, dy, i, j)?;
            let c = mu[i] * mu[j] * g.inv3;
            let (tx, ty) = (c * dx, c * dy);
            fx[i] = fx[i] - tx;
            fy[i] = fy[i] - ty;
            fx[j] = fx[j] + tx;
            fy[j] = fy[j] + ty;
        }
    }
    Ok(fx.into_iter().zip(fy).flat_map(|(x, y)| [x, y]).collect())
}

/// Interval Jacobian of [`eval_aniso`], `2k x 2k`.
pub fn jac_aniso(cfg: &IntervalBox, prob: &AnisoProblem) -> Result<IntervalMatrix> {
    prob.check(cfg)?;
    let k = prob.k();
    let p = AnisoProblem::positions(cfg);
    let mu = prob.mu.as_slice();
    let mut jac = IntervalMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        jac[(2 * i, 2 * i)] = mu[i] * prob.a;
        jac[(2 * i + 1, 2 * i + 1)] = mu[i] * prob.b;
    }
    for i in 0..k {
        for j in i + 1..k {
            let g = kernel(p[i].0 - p[j].0, p[i].1 - p[j].1, i, j)?;
            let mm = mu[i] * mu[j];
            let block = [[mm * g.gxx, mm * g.gxy], [mm * g.gxy, mm * g.gyy]];
            for (r, row) in block.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    jac[(2 * i + r, 2 * i + c)] = jac[(2 * i + r, 2 * i + c)] - v;
                    jac[(2 * j + r, 2 * j + c)] = jac[(2 * j + r, 2 * j + c)] - v;
                    jac[(2 * i + r, 2 * j + c)] = jac[(2 * i + r, 2 * j + c)] + v;
                    jac[(2 * j + r, 2 * i + c)] = jac[(2 * j + r, 2 * i + c)] + v;
                }
            }
        }
    }
    Ok(jac)
}

/// `lhs - rhs` of the three moment-of-inertia identities:
///
/// ```text
/// a sum mu_i x_i^2 = sum_{i<j} mu_i mu_j (x_i - x_j)^2 / r_ij^3
/// b sum mu_i y_i^2 = sum_{i<j} mu_i mu_j (y_i - y_j)^2 / r_ij^3
/// a sum mu_i x_i^2 + b sum mu_i y_i^2 = sum_{i<j} mu_i mu_j / r_ij
/// ```
///
/// All three contain zero at every solution.
pub fn inertia_residuals(cfg: &IntervalBox, prob: &AnisoProblem) -> Result<[Interval; 3]> {
    prob.check(cfg)?;
    let k = prob.k();
    let p = AnisoProblem::positions(cfg);
    let mu = prob.mu.as_slice();
    let ix: Interval = (0..k).map(|i| mu[i] * p[i].0.sqr()).sum::<Interval>() * prob.a;
    let iy: Interval = (0..k).map(|i| mu[i] * p[i].1.sqr()).sum::<Interval>() * prob.b;
    let (mut rx, mut ry, mut rv) = (Interval::ZERO, Interval::ZERO, Interval::ZERO);
    for i in 0..k {
        for j in i + 1..k {
            let dx = p[i].0 - p[j].0;
            let dy = p[i].1 - p[j].1;
            let g = kernel(dx, dy, i, j)?;
            let mm = mu[i] * mu[j];
            rx = rx + mm * dx.sqr() * g.inv3;
            ry = ry + mm * dy.sqr() * g.inv3;
            let r = (dx.sqr() + dy.sqr()).sqrt()?;
            rv = rv + mm * r.recip()?;
        }
    }
    Ok([ix - rx, iy - ry, ix + iy - rv])
}

/// Matrix `A` of the difference system: for every solution,
/// `A (x_1 - x_2, ..., x_{k-1} - x_k) = a (x_1 - x_2, ...)` and the same with
/// `y` and `b`.
pub fn collinear_matrix_a(cfg: &IntervalBox, prob: &AnisoProblem) -> Result<IntervalMatrix> {
    prob.check(cfg)?;
    let k = prob.k();
    let p = AnisoProblem::positions(cfg);
    let mu = prob.mu.as_slice();
    // w[i][t] = mu_t / r_it^3
    let mut w = vec![vec![Interval::ZERO; k]; k];
    for i in 0..k {
        for t in i + 1..k {
            let g = kernel(p[i].0 - p[t].0, p[i].1 - p[t].1, i, t)?;
            w[i][t] = mu[t] * g.inv3;
            w[t][i] = mu[i] * g.inv3;
        }
    }
    let head = |row: usize, j: usize| (0..=j).map(|t| w[row][t]).sum::<Interval>();
    let tail = |row: usize, j: usize| (j + 1..k).map(|t| w[row][t]).sum::<Interval>();
    let n = k - 1;
    let mut a = IntervalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = Interval::ZERO;
            if j < i {
                v = v - head(i, j);
            } else {
                v = v + tail(i, j);
            }
            if j <= i {
                v = v + head(i + 1, j);
            } else {
                v = v - tail(i + 1, j);
            }
            a[(i, j)] = v;
        }
    }
    Ok(a)
}

/// Scalar `W` at a point configuration (test oracle for the gradient structure).
pub fn potential_w(p: &[f64], prob: &AnisoProblem) -> f64 {
    let mu = prob.mu.values();
    let k = mu.len();
    let mut w = 0.0;
    for i in 0..k {
        let (x, y) = (p[2 * i], p[2 * i + 1]);
        w += 0.5 * mu[i] * (prob.a * x * x + prob.b * y * y);
        for j in i + 1..k {
            let r = (x - p[2 * j]).hypot(y - p[2 * j + 1]);
            w += mu[i] * mu[j] / r;
        }
    }
    w
}

impl Residual for AnisoProblem {
    fn dim(&self) -> usize {
        2 * self.k()
    }

    fn eval(&self, x: &IntervalBox) -> Result<IntervalBox> {
        eval_aniso(x, self)
    }

    fn jacobian(&self, x: &IntervalBox) -> Result<IntervalMatrix> {
        jac_aniso(x, self)
    }
}

impl AnisoProblem {
    /// Intersects every coordinate with the enclosure implied by the center
    /// of mass identity `sum mu_i p_i = 0` (valid at solutions when `a, b != 0`).
    /// `None` when the box is emptied.
    pub(crate) fn contract_com(&self, cfg: &IntervalBox) -> Option<IntervalBox> {
        let k = self.k();
        let mu = self.mu.as_slice();
        let mut out = cfg.clone();
        for axis in 0..2 {
            let coef = if axis == 0 { self.a } else { self.b };
            if coef == 0.0 {
                continue;
            }
            for i in 0..k {
                let rest: Interval = (0..k)
                    .filter(|&j| j != i)
                    .map(|j| mu[j] * out[2 * j + axis])
                    .sum();
                let implied = (-rest).checked_div(mu[i]).ok()?;
                out[2 * i + axis] = out[2 * i + axis].intersect(implied)?;
            }
        }
        Some(out)
    }

    /// Inertia identity `a sum mu x^2 + b sum mu y^2 = sum mu_i mu_j / r_ij`.
    pub(crate) fn inertia_excluded(&self, cfg: &IntervalBox) -> bool {
        pairs::inertia_excluded(
            &AnisoProblem::positions(cfg),
            self.mu.as_slice(),
            self.a,
            self.b,
        )
    }

    /// Natural evaluation of the equations of the bodies that cannot collide.
    pub(crate) fn rows_excluded(&self, cfg: &IntervalBox) -> bool {
        let pos = AnisoProblem::positions(cfg);
        (0..self.k())
            .any(|i| pairs::cluster_sum_excluded(&pos, self.mu.as_slice(), &[i], self.a, self.b))
    }

    /// Virial and equation-sum exclusion over every subcluster of at least
    /// two bodies.
    pub(crate) fn cluster_excluded(&self, cfg: &IntervalBox) -> bool {
        let k = self.k();
        let pos = AnisoProblem::positions(cfg);
        let lin = self.a.abs().max(self.b.abs());
        (1u32..1 << k).filter(|s| s.count_ones() >= 2).any(|s| {
            let members: Vec<usize> = (0..k).filter(|i| s >> i & 1 == 1).collect();
            pairs::cluster_excluded(&pos, self.mu.as_slice(), &members, lin)
                || (members.len() < k
                    && pairs::cluster_sum_excluded(
                        &pos,
                        self.mu.as_slice(),
                        &members,
                        self.a,
                        self.b,
                    ))
        })
    }
}
