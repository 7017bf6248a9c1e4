//! A-priori size and separation bounds for solutions.
//!
//! Size bounds are rounded up and distance floors rounded down, so a search
//! that prunes with them never discards a true solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::round::{
    add_up, cbrt_down, cbrt_up, div_down, div_up, mul_down, mul_up, sqrt_up,
};
use crate::masses::MassVector;

/// Upper bound of `2^(1/3) + 2^(-2/3)`.
fn branch_constant_up() -> f64 {
    add_up(cbrt_up(2.0), div_up(1.0, cbrt_down(4.0)))
}

/// Upper bound of `max |coordinate|` for `n` bodies, total mass `m`, and
/// stiffness `c > 0`: `min((n-1), (2^(1/3)+2^(-2/3)) (n-2)^(2/3) [n>=4]) (m/c)^(1/3)`.
fn size_bound_up(n: usize, m: f64, c: f64) -> f64 {
    let scale = cbrt_up(div_up(m, c));
    let mut best = mul_up((n - 1) as f64, scale);
    if n >= 4 {
        let nn = (n - 2) as f64;
        let alt = mul_up(mul_up(branch_constant_up(), cbrt_up(nn * nn)), scale);
        best = best.min(alt);
    }
    best
}

/// Coordinate bounds `(Bx, By)` for the anisotropic problem with `k` bodies.
/// A non-positive coefficient confines every body to the other axis.
pub fn aniso_size_bound(k: usize, total_mass: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if a <= 0.0 && b <= 0.0 {
        return Err(Error::InvalidProblem(
            "a <= 0 and b <= 0: the system has no solutions".into(),
        ));
    }
    if k < 2 || !(total_mass > 0.0) {
        return Err(Error::InvalidProblem(
            "need k >= 2 and positive total mass".into(),
        ));
    }
    let bx = if a > 0.0 {
        size_bound_up(k, total_mass, a)
    } else {
        0.0
    };
    let by = if b > 0.0 {
        size_bound_up(k, total_mass, b)
    } else {
        0.0
    };
    Ok((bx, by))
}

/// Floor `mu_i mu_j / (max(a, b) R^2)` on mutual distances (requires `a, b > 0`
/// and unit total mass).
pub fn aniso_min_dist(mu_i: f64, mu_j: f64, a: f64, b: f64, r: f64) -> f64 {
    div_down(mul_down(mu_i, mu_j), mul_up(a.max(b), mul_up(r, r)))
}

/// Bound on `max |q_i|` for normalized central configurations of `n` bodies.
pub fn nbody_size_bound(n: usize, total_mass: f64) -> f64 {
    assert!(n >= 2, "need at least two bodies");
    let m3 = cbrt_up(total_mass);
    let mut factor = (n - 1) as f64;
    if n >= 4 {
        let nn = (n - 2) as f64;
        factor = factor.min(mul_up(branch_constant_up(), cbrt_up(nn * nn)));
    }
    mul_up(m3, factor)
}

/// Floor `m_i m_j / (M R^2)` on mutual distances in a normalized configuration.
pub fn nbody_min_dist(m_i: f64, m_j: f64, total_mass: f64, r: f64) -> f64 {
    div_down(mul_down(m_i, m_j), mul_up(total_mass, mul_up(r, r)))
}

/// Bounds used to set up and prune one search; echoed into reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_abs_x: f64,
    pub max_abs_y: f64,
    /// Bound on `max_i |p_i|` used in the distance floors.
    pub radius: f64,
    /// `pair_floor[i][j]`: lower bound on `r_ij` at any solution.
    pub pair_floor: Vec<Vec<f64>>,
}

impl SearchBounds {
    pub fn min_pair_dist(&self, i: usize, j: usize) -> f64 {
        self.pair_floor[i][j]
    }

    /// Bounds for the anisotropic problem. The radius is `sqrt(Bx^2 + By^2)`,
    /// which bounds `|p_i|` for every body.
    pub fn aniso(mu: &MassVector, a: f64, b: f64) -> Result<Self> {
        let k = mu.len();
        let total = mu.total().hi();
        let (bx, by) = aniso_size_bound(k, total, a, b)?;
        let radius = sqrt_up(add_up(mul_up(bx, bx), mul_up(by, by)));
        let pair_floor = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j || a <= 0.0 || b <= 0.0 {
                            0.0
                        } else {
                            aniso_min_dist(mu.get(i).lo(), mu.get(j).lo(), a, b, radius)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SearchBounds {
            max_abs_x: bx,
            max_abs_y: by,
            radius,
            pair_floor,
        })
    }

    /// Bounds for normalized `n`-body central configurations.
    pub fn nbody(masses: &MassVector) -> Self {
        let n = masses.len();
        let total = masses.total().hi();
        let radius = nbody_size_bound(n, total);
        let pair_floor = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            nbody_min_dist(masses.get(i).lo(), masses.get(j).lo(), total, radius)
                        }
                    })
                    .collect()
            })
            .collect();
        SearchBounds {
            max_abs_x: radius,
            max_abs_y: radius,
            radius,
            pair_floor,
        }
    }
}
