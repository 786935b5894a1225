//! Dense matrices over the rationals.

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::InvalidArgument(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Rational::zero() })
    }

    pub fn column(entries: Vec<Rational>) -> Self {
        let n = entries.len();
        Self {
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rational::to_f64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// `Aᵗ = -A` (which over the rationals forces a zero diagonal).
    pub fn is_alternating(&self) -> bool {
        self.is_square() && *self == -&self.transpose()
    }

    pub fn symmetric_part(&self) -> Self {
        (self + &self.transpose()).scale(&rational::half())
    }

    pub fn skew_part(&self) -> Self {
        (self - &self.transpose()).scale(&rational::half())
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        Self::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// `(a b; c d)` from four blocks with compatible shapes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch {
                op: "from_blocks",
                left: a.shape(),
                right: d.shape(),
            });
        }
        let (top, left) = (a.rows, a.cols);
        Ok(Self::from_fn(top + c.rows, left + b.cols, |i, j| {
            match (i < top, j < left) {
                (true, true) => a[(i, j)].clone(),
                (true, false) => b[(i, j - left)].clone(),
                (false, true) => c[(i - top, j)].clone(),
                (false, false) => d[(i - top, j - left)].clone(),
            }
        }))
    }

    pub fn direct_sum(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Column-stacking `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Exact inverse by Gauss-Jordan on `[A | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Self::identity(n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular("matrix"));
        }
        Ok(r.block(0, n, n, n))
    }

    /// Coefficients of the exact monic characteristic polynomial `det(tI - M)`,
    /// via Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Result<UniPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            mk = next;
            let am = self * &mk;
            coeffs[n - k] = -am.trace() / rational::int(k as i64);
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// All solutions of `A·X = B`: `particular + span(nullspace)` column-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: RatMatrix,
    /// Basis of the right nullspace of `A`, each a column vector.
    pub nullspace: Vec<RatMatrix>,
}

impl SolutionSet {
    pub fn dimension(&self) -> usize {
        self.nullspace.len()
    }

    /// `particular + Σ cᵢ·nullspaceᵢ` (applied to every column of the rhs).
    pub fn combine(&self, coeffs: &[Rational]) -> RatMatrix {
        let mut out = self.particular.clone();
        for (c, v) in coeffs.iter().zip(&self.nullspace) {
            for i in 0..out.rows() {
                for j in 0..out.cols() {
                    out[(i, j)] += c * &v[(i, 0)];
                }
            }
        }
        out
    }
}

/// Solves `a·x = rhs` exactly. `rhs` may have several columns.
pub fn solve_linear(a: &RatMatrix, rhs: &RatMatrix) -> Result<SolutionSet> {
    if a.rows() != rhs.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve_linear",
            left: a.shape(),
            right: rhs.shape(),
        });
    }
    let n = a.cols();
    let k = rhs.cols();
    let (r, pivots) = a.hstack(rhs)?.rref();
    if pivots.iter().any(|&p| p >= n) {
        return Err(Error::Inconsistent);
    }
    let mut particular = RatMatrix::zeros(n, k);
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..k {
            particular[(p, j)] = r[(row, n + j)].clone();
        }
    }
    Ok(SolutionSet {
        particular,
        nullspace: nullspace_from_rref(&r, &pivots, n),
    })
}

pub fn nullspace(a: &RatMatrix) -> Vec<RatMatrix> {
    let (r, pivots) = a.rref();
    nullspace_from_rref(&r, &pivots, a.cols())
}

fn nullspace_from_rref(r: &RatMatrix, pivots: &[usize], n: usize) -> Vec<RatMatrix> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            RatMatrix::column(v)
        })
        .collect()
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `checked_*` methods when
// shapes come from untrusted input.
impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        self.map(|v| -v)
    }
}

impl Neg for RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        -&self
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn swap2() -> RatMatrix {
        RatMatrix::from_i64(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn identity_is_neutral() {
        let m = RatMatrix::from_rows(vec![vec![rat(1, 2), int(-3)], vec![int(7), rat(2, 9)]]);
        assert_eq!(&RatMatrix::identity(2) * &m, m);
        assert_eq!(&m * &RatMatrix::identity(2), m);
    }

    #[test]
    fn swap_is_involution() {
        assert_eq!(&swap2() * &swap2(), RatMatrix::identity(2));
        assert_eq!(swap2().inverse().unwrap(), swap2());
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = RatMatrix::zeros(2, 3);
        let err = a.checked_mul(&a).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn inverse_of_coupling_block() {
        // [[1, λ], [λ, 1]] at λ = 1/2
        let l = rat(1, 2);
        let m = RatMatrix::from_rows(vec![vec![int(1), l.clone()], vec![l, int(1)]]);
        let expected = RatMatrix::from_rows(vec![vec![int(1), rat(-1, 2)], vec![rat(-1, 2), int(1)]])
            .scale(&rat(4, 3));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, expected);
        assert_eq!(&m * &inv, RatMatrix::identity(2));
        assert_eq!(RatMatrix::identity(4).inverse().unwrap(), RatMatrix::identity(4));
    }

    #[test]
    fn singular_inverse_fails() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(Error::Singular("matrix")));
        assert_eq!(m.det().unwrap(), int(0));
    }

    #[test]
    fn char_poly_examples() {
        let damped = RatMatrix::from_i64(&[&[-1, -1], &[1, 0]]);
        assert_eq!(damped.char_poly().unwrap(), UniPoly::from_i64(&[1, 1, 1]));
        assert_eq!(
            RatMatrix::identity(2).char_poly().unwrap(),
            UniPoly::from_i64(&[1, -2, 1])
        );
        assert!(RatMatrix::zeros(2, 3).char_poly().is_err());
    }

    #[test]
    fn char_poly_constant_is_det_of_negation() {
        let m = RatMatrix::from_i64(&[&[2, 1, 0], &[0, -1, 3], &[4, 1, 1]]);
        let cp = m.char_poly().unwrap();
        assert_eq!(cp.degree(), Some(3));
        assert_eq!(cp.coeff(0), (-&m).det().unwrap());
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = RatMatrix::column(vec![int(3), rat(1, 2)]);
        let s = solve_linear(&RatMatrix::identity(2), &b).unwrap();
        assert_eq!(s.particular, b);
        assert!(s.nullspace.is_empty());

        let zero_rhs = RatMatrix::zeros(2, 1);
        let s = solve_linear(&RatMatrix::zeros(2, 3), &zero_rhs).unwrap();
        assert_eq!(s.dimension(), 3);
        assert!(s.particular.is_zero());
    }

    #[test]
    fn solve_inconsistent() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let b = RatMatrix::column(vec![int(1), int(3)]);
        assert_eq!(solve_linear(&a, &b), Err(Error::Inconsistent));
    }

    #[test]
    fn solve_parametrizes_all_solutions() {
        let a = RatMatrix::from_i64(&[&[1, 2, -1], &[0, 1, 1]]);
        let b = RatMatrix::column(vec![int(4), int(1)]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.dimension(), 1);
        for c in [-3, 0, 5] {
            let x = s.combine(&[int(c)]);
            assert_eq!(&a * &x, b);
        }
    }

    #[test]
    fn blocks_round_trip() {
        let m = RatMatrix::from_i64(&[&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 10, 11, 12], &[13, 14, 15, 16]]);
        let rebuilt = RatMatrix::from_blocks(
            &m.block(0, 0, 2, 2),
            &m.block(0, 2, 2, 2),
            &m.block(2, 0, 2, 2),
            &m.block(2, 2, 2, 2),
        )
        .unwrap();
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn symmetry_predicates() {
        let a = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(a.is_alternating());
        assert!(!a.is_symmetric());
        assert!(swap2().is_symmetric());
        let m = RatMatrix::from_i64(&[&[1, 4], &[2, 3]]);
        assert_eq!(&m.symmetric_part() + &m.skew_part(), m);
    }
}
