//! Krawczyk existence/uniqueness test.
//!
//! For a box `X` with midpoint `m`, preconditioner `Y ≈ mid(J(X))^-1`:
//!
//! ```text
//! K(X) = m - Y F(m) + (I - Y J(X)) (X - m)
//! ```
//!
//! Every zero of `F` in `X` lies in `K(X)`. If `K(X) ∩ X = ∅` there is none;
//! if `K(X)` lies in the interior of `X` there is exactly one and the
//! Jacobian is nonsingular on `X`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox, IntervalMatrix, Matrix};

/// A square system `F: R^n -> R^n` with an interval Jacobian.
pub trait Residual {
    fn dim(&self) -> usize;

    /// Enclosure of `F` over the box.
    fn eval(&self, x: &IntervalBox) -> Result<IntervalBox>;

    /// Enclosure of `DF` over the box.
    fn jacobian(&self, x: &IntervalBox) -> Result<IntervalMatrix>;

    fn eval_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval(&IntervalBox::from_point(x))?.midpoint())
    }

    fn jacobian_point(&self, x: &[f64]) -> Result<Matrix> {
        Ok(self.jacobian(&IntervalBox::from_point(x))?.midpoint())
    }
}

/// Adapter turning a pair of closures into a [`Residual`].
pub struct FnResidual<F, J> {
    dim: usize,
    f: F,
    j: J,
}

impl<F, J> FnResidual<F, J>
where
    F: Fn(&IntervalBox) -> Result<IntervalBox>,
    J: Fn(&IntervalBox) -> Result<IntervalMatrix>,
{
    pub fn new(dim: usize, f: F, j: J) -> Self {
        FnResidual { dim, f, j }
    }
}

impl<F, J> Residual for FnResidual<F, J>
where
    F: Fn(&IntervalBox) -> Result<IntervalBox>,
    J: Fn(&IntervalBox) -> Result<IntervalMatrix>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &IntervalBox) -> Result<IntervalBox> {
        (self.f)(x)
    }

    fn jacobian(&self, x: &IntervalBox) -> Result<IntervalMatrix> {
        (self.j)(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KrawczykStatus {
    /// No zero in the box (C1).
    Excluded,
    /// Exactly one non-degenerate zero in the box (C2).
    UniqueZero,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct KrawczykOutcome {
    pub status: KrawczykStatus,
    /// `K(X)`; `None` when the preconditioner could not be formed.
    pub image: Option<IntervalBox>,
    /// `X ∩ K(X)`; `None` exactly when excluded.
    pub refined: Option<IntervalBox>,
    /// Upper bound of `||I - Y J(X)||_inf` (infinite if not formed).
    pub contraction_norm: f64,
    /// One Newton step from the midpoint, `m - Y f(m)`, when formed.
    pub newton_estimate: Option<Vec<f64>>,
}

/// One Krawczyk test on `x`.
///
/// A singular preconditioner yields `Undecided` with the box unchanged;
/// collisions inside `x` propagate as errors.
pub fn krawczyk_step<R: Residual + ?Sized>(sys: &R, x: &IntervalBox) -> Result<KrawczykOutcome> {
    let n = sys.dim();
    if x.dims() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dims(),
        });
    }
    let jac = sys.jacobian(x)?;
    let y = match jac.approx_mid_inverse() {
        Ok(y) => y,
        Err(Error::Singular) => return Ok(undecided(x)),
        Err(e) => return Err(e),
    };
    let m = x.midpoint();
    let fm = sys.eval(&IntervalBox::from_point(&m))?;

    let mut c = jac.left_mul_point(&y);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j {
                Interval::ONE
            } else {
                Interval::ZERO
            };
            c[(i, j)] = id - c[(i, j)];
        }
    }
    let contraction_norm = c.norm_inf();
    let dx = x.sub_point(&m);
    let cdx = c.mul_box(&dx);

    let step: Vec<Interval> = (0..n)
        .map(|i| {
            let mut yf = Interval::ZERO;
            for j in 0..n {
                let yij = y[(i, j)];
                if yij != 0.0 {
                    yf = yf + fm[j] * yij;
                }
            }
            Interval::point(m[i]) - yf
        })
        .collect();
    let newton_estimate = Some(step.iter().map(|v| v.mid()).collect());
    let image: IntervalBox = step.iter().zip(cdx.iter()).map(|(&s, &d)| s + d).collect();

    if image
        .iter()
        .any(|v| !v.lo().is_finite() || !v.hi().is_finite())
    {
        return Ok(KrawczykOutcome {
            status: KrawczykStatus::Undecided,
            image: None,
            refined: Some(x.clone()),
            contraction_norm: f64::INFINITY,
            newton_estimate,
        });
    }

    let refined = image.intersect(x);
    let status = if refined.is_none() {
        KrawczykStatus::Excluded
    } else if image.interior_of(x) {
        KrawczykStatus::UniqueZero
    } else {
        KrawczykStatus::Undecided
    };
    Ok(KrawczykOutcome {
        status,
        image: Some(image),
        refined,
        contraction_norm,
        newton_estimate,
    })
}

fn undecided(x: &IntervalBox) -> KrawczykOutcome {
    KrawczykOutcome {
        status: KrawczykStatus::Undecided,
        image: None,
        refined: Some(x.clone()),
        contraction_norm: f64::INFINITY,
        newton_estimate: None,
    }
}

/// A box proven to contain exactly one non-degenerate zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    /// Box on which `K(X)` lies strictly inside `X`.
    pub region: IntervalBox,
    /// `K(region)`; contains the zero.
    pub image: IntervalBox,
    pub contraction_norm: f64,
}

impl Certified {
    /// Certifies `x` or returns `None`.
    pub fn try_new<R: Residual + ?Sized>(sys: &R, x: &IntervalBox) -> Result<Option<Certified>> {
        let out = krawczyk_step(sys, x)?;
        Ok(match (out.status, out.image) {
            (KrawczykStatus::UniqueZero, Some(image)) => Some(Certified {
                region: x.clone(),
                image,
                contraction_norm: out.contraction_norm,
            }),
            _ => None,
        })
    }

    /// Midpoint of the zero enclosure.
    pub fn midpoint(&self) -> Vec<f64> {
        self.image.midpoint()
    }
}

/// Shrinks a certified box by iterating `X <- K(X)` while each new box still
/// certifies and the width drops by at least 10% per step. Once the image is
/// too tight to certify itself, a slightly inflated copy is tried instead.
pub fn refine<R: Residual + ?Sized>(sys: &R, cert: Certified, max_iter: usize) -> Certified {
    let mut cur = cert;
    'outer: for _ in 0..max_iter {
        let limit = 0.9 * cur.region.width();
        for candidate in [cur.image.clone(), inflate(&cur.image, 1.0, 16)] {
            if candidate.width() > limit {
                continue;
            }
            if let Ok(Some(next)) = Certified::try_new(sys, &candidate) {
                cur = next;
                continue 'outer;
            }
        }
        break;
    }
    cur
}

/// Widens every coordinate by `factor` times its width plus `ulps` units in
/// the last place of its largest endpoint.
pub fn inflate(x: &IntervalBox, factor: f64, ulps: u32) -> IntervalBox {
    x.iter()
        .map(|c| {
            let mut pad = c.width() * factor;
            let mut u = c.mag().max(f64::MIN_POSITIVE);
            for _ in 0..ulps {
                let next = u.next_up();
                pad += next - u;
                u = next;
            }
            Interval::centered(c.mid(), 0.5 * c.width() + pad)
        })
        .collect()
}

/// Plain floating Newton iteration; `None` if it diverges or hits a singular step.
pub fn newton_point<R: Residual + ?Sized>(
    sys: &R,
    start: &[f64],
    max_iter: usize,
    tol: f64,
) -> Option<Vec<f64>> {
    let mut x = start.to_vec();
    for _ in 0..max_iter {
        let f = sys.eval_point(&x).ok()?;
        let j = sys.jacobian_point(&x).ok()?;
        let step = j.solve(&f).ok()?;
        let mut size = 0.0f64;
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi -= si;
            size = size.max(si.abs());
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        if size <= tol * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Some(x);
        }
    }
    None
}
