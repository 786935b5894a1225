//! Block view of an evolution matrix, the second-order equations of motion
//! it encodes, and conjugation by the block-triangular group
//! `P = {(T X; 0 1)}` that preserves those equations.

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

/// A `2n×2n` evolution matrix on `ξ = (p, x)` with its `n×n` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    m: RatMatrix,
    n: usize,
}

impl BlockSystem {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.rows().is_multiple_of(2) {
            return Err(Error::OddDimension(m.rows()));
        }
        let n = m.rows() / 2;
        Ok(Self { m, n })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m11(&self) -> RatMatrix {
        self.m.block(0, 0, self.n, self.n)
    }

    pub fn m12(&self) -> RatMatrix {
        self.m.block(0, self.n, self.n, self.n)
    }

    pub fn m21(&self) -> RatMatrix {
        self.m.block(self.n, 0, self.n, self.n)
    }

    pub fn m22(&self) -> RatMatrix {
        self.m.block(self.n, self.n, self.n, self.n)
    }
}

/// `ẍ - B₁ẋ - B₂x = 0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationsOfMotion {
    pub b1: RatMatrix,
    pub b2: RatMatrix,
}

impl EquationsOfMotion {
    pub fn new(b1: RatMatrix, b2: RatMatrix) -> Result<Self> {
        if !b1.is_square() {
            return Err(Error::NotSquare {
                rows: b1.rows(),
                cols: b1.cols(),
            });
        }
        if b1.shape() != b2.shape() {
            return Err(Error::DimensionMismatch {
                op: "EquationsOfMotion",
                left: b1.shape(),
                right: b2.shape(),
            });
        }
        Ok(Self { b1, b2 })
    }

    pub fn n(&self) -> usize {
        self.b1.rows()
    }

    /// `(B₁ B₂; 1 0)`, the representative with `p = ẋ`.
    pub fn standard_matrix(&self) -> RatMatrix {
        let n = self.n();
        RatMatrix::from_blocks(&self.b1, &self.b2, &RatMatrix::identity(n), &RatMatrix::zeros(n, n))
            .expect("square blocks of equal size")
    }
}

/// `(T X; 0 1)` with `T` invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PElement {
    pub t: RatMatrix,
    pub x: RatMatrix,
}

impl PElement {
    pub fn new(t: RatMatrix, x: RatMatrix) -> Result<Self> {
        if !t.is_square() || t.shape() != x.shape() {
            return Err(Error::DimensionMismatch {
                op: "PElement",
                left: t.shape(),
                right: x.shape(),
            });
        }
        if !t.is_invertible() {
            return Err(Error::Singular("T"));
        }
        Ok(Self { t, x })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            t: RatMatrix::identity(n),
            x: RatMatrix::zeros(n, n),
        }
    }

    pub fn matrix(&self) -> RatMatrix {
        let n = self.t.rows();
        RatMatrix::from_blocks(&self.t, &self.x, &RatMatrix::zeros(n, n), &RatMatrix::identity(n))
            .expect("square blocks of equal size")
    }

    /// `(T⁻¹ -T⁻¹X; 0 1)`
    pub fn inverse_matrix(&self) -> RatMatrix {
        let n = self.t.rows();
        let ti = self.t.inverse().expect("T is invertible by construction");
        let top_right = -&(&ti * &self.x);
        RatMatrix::from_blocks(&ti, &top_right, &RatMatrix::zeros(n, n), &RatMatrix::identity(n))
            .expect("square blocks of equal size")
    }
}

/// `M` and `M₂₁` both invertible.
pub fn is_admissible(sys: &BlockSystem) -> bool {
    sys.matrix().is_invertible() && sys.m21().is_invertible()
}

/// `B₁ = M₂₁M₁₁M₂₁⁻¹ + M₂₂`, `B₂ = M₂₁M₁₂ - M₂₁M₁₁M₂₁⁻¹M₂₂`.
pub fn extract_eom(sys: &BlockSystem) -> Result<EquationsOfMotion> {
    let m21 = sys.m21();
    let m21_inv = m21.inverse().map_err(|_| Error::SingularM21)?;
    let conj = &(&m21 * &sys.m11()) * &m21_inv;
    let b1 = &conj + &sys.m22();
    let b2 = &(&m21 * &sys.m12()) - &(&conj * &sys.m22());
    EquationsOfMotion::new(b1, b2)
}

/// `M_std` and the conjugator `Λ` with `Λ⁻¹·M·Λ == M_std`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Standardization {
    pub m_std: RatMatrix,
    pub lambda: PElement,
}

/// Conjugates `M` into `(B₁ B₂; 1 0)` by `Λ = (M₂₁⁻¹, -M₂₁⁻¹M₂₂; 0, 1)`.
/// Requires only `M₂₁` invertible.
pub fn standardize(sys: &BlockSystem) -> Result<Standardization> {
    let m21_inv = sys.m21().inverse().map_err(|_| Error::SingularM21)?;
    let x = -&(&m21_inv * &sys.m22());
    let lambda = PElement::new(m21_inv, x)?;
    let m_std = p_conjugate(sys, &lambda)?.matrix().clone();
    debug_assert_eq!(m_std, extract_eom(sys)?.standard_matrix());
    Ok(Standardization { m_std, lambda })
}

/// `P⁻¹·M·P`
pub fn p_conjugate(sys: &BlockSystem, p: &PElement) -> Result<BlockSystem> {
    if p.t.rows() != sys.n() {
        return Err(Error::DimensionMismatch {
            op: "p_conjugate",
            left: sys.matrix().shape(),
            right: p.t.shape(),
        });
    }
    BlockSystem::new(&(&p.inverse_matrix() * sys.matrix()) * &p.matrix())
}

/// Whether two systems encode the same second-order equations.
pub fn same_eom(a: &BlockSystem, b: &BlockSystem) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    Ok(extract_eom(a)? == extract_eom(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Rational};

    fn ad_hoc(g: Rational, l: Rational) -> RatMatrix {
        let o = int(1);
        let z = int(0);
        RatMatrix::from_rows(vec![
            vec![-g.clone(), z.clone(), -o.clone(), -l.clone()],
            vec![z.clone(), g.clone(), -l.clone(), -o.clone()],
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), o, z.clone(), z],
        ])
    }

    #[test]
    fn admissibility() {
        let m = BlockSystem::new(ad_hoc(int(1), rat(1, 2))).unwrap();
        assert!(is_admissible(&m));
        let damped = BlockSystem::new(RatMatrix::from_i64(&[&[-1, -1], &[1, 0]])).unwrap();
        assert!(is_admissible(&damped));
        let bad = BlockSystem::new(RatMatrix::from_i64(&[&[1, 2], &[0, 3]])).unwrap();
        assert!(!is_admissible(&bad));
        assert_eq!(extract_eom(&bad), Err(Error::SingularM21));
    }

    #[test]
    fn ad_hoc_equations() {
        let (g, l) = (int(1), rat(1, 2));
        let eom = extract_eom(&BlockSystem::new(ad_hoc(g.clone(), l.clone())).unwrap()).unwrap();
        assert_eq!(eom.b1, RatMatrix::diag(&[-g.clone(), g]));
        assert_eq!(
            eom.b2,
            RatMatrix::from_rows(vec![vec![int(-1), -l.clone()], vec![-l, int(-1)]])
        );
    }

    #[test]
    fn standard_form_is_fixed() {
        let m = ad_hoc(int(2), rat(1, 3));
        let sys = BlockSystem::new(m.clone()).unwrap();
        let st = standardize(&sys).unwrap();
        assert_eq!(st.m_std, m);
        assert_eq!(st.lambda.matrix(), RatMatrix::identity(4));
        let eom = extract_eom(&sys).unwrap();
        assert_eq!(eom.standard_matrix(), m);
    }

    #[test]
    fn scaled_p_conjugation_changes_m21_only() {
        let m = ad_hoc(int(1), rat(1, 2));
        let sys = BlockSystem::new(m).unwrap();
        let p = PElement::new(RatMatrix::identity(2).scale(&int(2)), RatMatrix::zeros(2, 2)).unwrap();
        let c = p_conjugate(&sys, &p).unwrap();
        assert_eq!(c.m21(), RatMatrix::identity(2).scale(&int(2)));
        assert!(same_eom(&sys, &c).unwrap());
        let back = standardize(&c).unwrap();
        assert_eq!(&back.m_std, sys.matrix());
    }

    #[test]
    fn recovers_standard_form_from_conjugate() {
        let m = ad_hoc(int(1), rat(1, 2));
        let sys = BlockSystem::new(m.clone()).unwrap();
        let p = PElement::new(RatMatrix::diag(&[int(2), int(1)]), RatMatrix::zeros(2, 2)).unwrap();
        let c = p_conjugate(&sys, &p).unwrap();
        let st = standardize(&c).unwrap();
        assert_eq!(st.m_std, m);
        let lam = st.lambda.matrix();
        assert_eq!(&(&lam.inverse().unwrap() * c.matrix()) * &lam, st.m_std);
    }

    #[test]
    fn p_element_inverse() {
        let p = PElement::new(
            RatMatrix::from_i64(&[&[1, 2], &[0, 3]]),
            RatMatrix::from_i64(&[&[4, -1], &[2, 5]]),
        )
        .unwrap();
        assert_eq!(&p.matrix() * &p.inverse_matrix(), RatMatrix::identity(4));
        assert!(PElement::new(RatMatrix::zeros(2, 2), RatMatrix::zeros(2, 2)).is_err());
    }
}
