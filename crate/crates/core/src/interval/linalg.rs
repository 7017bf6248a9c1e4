use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::{round, Interval};
use crate::error::{Error, Result};

/// Axis-aligned box: one [`Interval`] per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalBox(Vec<Interval>);

impl IntervalBox {
    pub fn new(coords: Vec<Interval>) -> Self {
        assert!(
            !coords.is_empty(),
            "interval box needs at least one coordinate"
        );
        IntervalBox(coords)
    }

    pub fn from_point(x: &[f64]) -> Self {
        IntervalBox::new(x.iter().map(|&v| Interval::point(v)).collect())
    }

    /// Box from `(lo, hi)` pairs, validated.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()
            .map(IntervalBox::new)
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.mid()).collect()
    }

    /// Largest coordinate width.
    pub fn width(&self) -> f64 {
        self.0.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn widths(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.width()).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dims() && self.0.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.dims() == other.dims() && self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(*b))
    }

    pub fn interior_of(&self, other: &IntervalBox) -> bool {
        self.dims() == other.dims() && self.0.iter().zip(&other.0).all(|(a, b)| a.interior_of(*b))
    }

    pub fn intersect(&self, other: &IntervalBox) -> Option<IntervalBox> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(*b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalBox)
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.hull(*b))
                .collect(),
        )
    }

    pub fn disjoint(&self, other: &IntervalBox) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a.disjoint(*b))
    }

    /// Splits coordinate `i` at the given fraction of its width.
    pub fn bisect(&self, i: usize, ratio: f64) -> (IntervalBox, IntervalBox) {
        let (a, b) = self.0[i].split_at_ratio(ratio);
        let mut left = self.clone();
        let mut right = self.clone();
        left.0[i] = a;
        right.0[i] = b;
        (left, right)
    }

    /// `self - c` for a point `c`, outward rounded.
    pub fn sub_point(&self, c: &[f64]) -> IntervalBox {
        IntervalBox(self.0.iter().zip(c).map(|(x, &v)| *x - v).collect())
    }

    /// Volume as a plain float product (for covering audits only).
    pub fn volume(&self) -> f64 {
        self.0.iter().map(|x| x.hi() - x.lo()).product()
    }

    pub fn into_inner(self) -> Vec<Interval> {
        self.0
    }
}

impl Index<usize> for IntervalBox {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntervalBox {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl FromIterator<Interval> for IntervalBox {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalBox::new(iter.into_iter().collect())
    }
}

/// Dense row-major float matrix (preconditioners, Newton steps).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::Singular);
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[(r, col)].abs().total_cmp(&a[(s, col)].abs()))
                .unwrap();
            let pv = a[(pivot, col)];
            if pv.abs() <= scale * 1e-14 || !pv.is_finite() {
                return Err(Error::Singular);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(r, j)] -= f * a[(col, j)];
                    inv[(r, j)] -= f * inv[(col, j)];
                }
            }
        }
        if inv.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// Solves `self * x = b` (via the inverse; systems here are tiny).
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        Ok(self.inverse()?.mul_vec(b))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense row-major interval matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn from_point(m: &Matrix) -> Self {
        IntervalMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|&v| Interval::point(v)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Interval> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged interval matrix rows");
        IntervalMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn midpoint(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mid()).collect(),
        }
    }

    /// Floating approximate inverse of the midpoint matrix.
    ///
    /// No rigor is claimed; the Krawczyk test restores it.
    pub fn approx_mid_inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        self.midpoint().inverse()
    }

    pub fn mul_box(&self, x: &IntervalBox) -> IntervalBox {
        assert_eq!(self.cols, x.dims());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `p * self` for a point matrix `p`.
    pub fn left_mul_point(&self, p: &Matrix) -> IntervalMatrix {
        assert_eq!(p.cols, self.rows);
        let mut out = IntervalMatrix::zeros(p.rows, self.cols);
        for i in 0..p.rows {
            for j in 0..self.cols {
                let mut acc = Interval::ZERO;
                for k in 0..p.cols {
                    let c = p[(i, k)];
                    if c != 0.0 {
                        acc = acc + self[(k, j)] * c;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Upper bound of the max-row-sum norm (infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0.0, |acc, j| round::add_up(acc, self[(i, j)].mag())))
            .fold(0.0, f64::max)
    }

    /// Upper bound of the Frobenius norm of the magnitude matrix.
    pub fn norm_frobenius(&self) -> f64 {
        let sum = self.data.iter().fold(0.0, |acc, x| {
            round::add_up(acc, round::mul_up(x.mag(), x.mag()))
        });
        round::sqrt_up(sum)
    }

    /// Rows and columns with the listed indices removed.
    pub fn without(&self, drop_rows: &[usize], drop_cols: &[usize]) -> IntervalMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|r| !drop_rows.contains(r)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|c| !drop_cols.contains(c)).collect();
        let mut out = IntervalMatrix::zeros(rows.len(), cols.len());
        for (oi, &i) in rows.iter().enumerate() {
            for (oj, &j) in cols.iter().enumerate() {
                out[(oi, oj)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}
