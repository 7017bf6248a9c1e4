use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Positive body masses, each held as a rigorous enclosure.
///
/// Masses typed in as decimals become point intervals; rational masses such
/// as `1/3` built with [`MassVector::equal`] are enclosed exactly, so a
/// certificate covers the true rational value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassVector {
    masses: Vec<Interval>,
}

impl MassVector {
    pub fn new(masses: Vec<Interval>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidProblem("empty mass vector".into()));
        }
        if let Some(m) = masses.iter().find(|m| m.lo() <= 0.0) {
            return Err(Error::InvalidProblem(format!("mass {m} is not positive")));
        }
        Ok(MassVector { masses })
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem("non-finite mass".into()));
        }
        MassVector::new(values.iter().map(|&v| Interval::point(v)).collect())
    }

    /// `k` equal masses `total / k`.
    pub fn equal(k: usize, total: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidProblem("zero bodies".into()));
        }
        let m = Interval::point(total).div_f64(k as f64);
        MassVector::new(vec![m; k])
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Interval {
        self.masses[i]
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.masses
    }

    /// Midpoint values.
    pub fn values(&self) -> Vec<f64> {
        self.masses.iter().map(|m| m.mid()).collect()
    }

    pub fn total(&self) -> Interval {
        self.masses.iter().copied().sum()
    }

    /// True when all enclosures coincide (labels are interchangeable).
    pub fn all_equal(&self) -> bool {
        self.masses.windows(2).all(|w| w[0] == w[1])
    }

    pub fn concat(&self, other: &MassVector) -> MassVector {
        let mut masses = self.masses.clone();
        masses.extend_from_slice(&other.masses);
        MassVector { masses }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_thirds_enclose_one_third_and_sum_to_one() {
        let mu = MassVector::equal(3, 1.0).unwrap();
        assert!(mu.all_equal());
        let m = mu.get(0);
        assert!(m.lo() <= 1.0 / 3.0 && 1.0 / 3.0 <= m.hi());
        assert!(mu.total().contains(1.0));
    }

    #[test]
    fn rejects_non_positive() {
        assert!(MassVector::from_values(&[0.5, 0.0]).is_err());
        assert!(MassVector::from_values(&[]).is_err());
        assert!(MassVector::from_values(&[1.0, f64::NAN]).is_err());
    }
}
