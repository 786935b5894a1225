//! Canonical-form surgery and quadratic Lagrangians.
//!
//! Given `ẍ = B₁ẋ + B₂x` and a symmetric invertible `S₁` with `S₁B₁`
//! alternating and `S₁B₂` symmetric, the standard matrix factors as
//! `(A₁ -S₁⁻¹; S₁⁻¹ 0)·(S₁ ⊕ S₂)` with `S₂ = -S₁B₂`. Splitting
//! `S₁B₁ = X - Xᵗ` with `X = ½S₁B₁` then gives a `P`-conjugate matrix
//! `M_can = J·H_can` generated by the canonical symplectic form.

use crate::error::{Error, Result};
use crate::factorization::ASPair;
use crate::matrix::RatMatrix;
use crate::multipoly::MultiPoly;
use crate::phase::PhaseVars;
use crate::rational;
use crate::reduction::{EquationsOfMotion, PElement};
use crate::symsolve::{find_invertible, symmetric_solutions, SearchConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalResult {
    pub s1: RatMatrix,
    pub s2: RatMatrix,
    pub x_mat: RatMatrix,
    pub h_can_matrix: RatMatrix,
    pub h_can: MultiPoly,
    pub m_can: RatMatrix,
    pub p_link: PElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticLagrangian {
    pub kinetic: RatMatrix,
    pub cross: RatMatrix,
    pub potential: RatMatrix,
    pub l: MultiPoly,
}

/// `J = (0 -1; 1 0)`, the inverse of the canonical `ω̲ = (0 1; -1 0)`.
pub fn canonical_j(n: usize) -> RatMatrix {
    let id = RatMatrix::identity(n);
    RatMatrix::from_blocks(&RatMatrix::zeros(n, n), &-&id, &id, &RatMatrix::zeros(n, n))
        .expect("square blocks")
}

/// Basis of symmetric `S₁` with `S₁B₁` alternating and `S₁B₂` symmetric.
pub fn s1_space(eom: &EquationsOfMotion) -> Vec<RatMatrix> {
    let b1t = eom.b1.transpose();
    let b2t = eom.b2.transpose();
    symmetric_solutions(eom.n(), |s| {
        vec![&(s * &eom.b1) + &(&b1t * s), &(s * &eom.b2) - &(&b2t * s)]
    })
}

pub fn solve_s1(eom: &EquationsOfMotion, search: &SearchConfig) -> Result<RatMatrix> {
    find_invertible(&s1_space(eom), search).ok_or(Error::NoCanonicalForm)
}

fn check_s1(eom: &EquationsOfMotion, s1: &RatMatrix) -> Result<()> {
    if s1.shape() != eom.b1.shape() {
        return Err(Error::DimensionMismatch {
            op: "S1",
            left: eom.b1.shape(),
            right: s1.shape(),
        });
    }
    if !s1.is_symmetric() || !s1.is_invertible() {
        return Err(Error::Precondition("S1 must be symmetric and invertible".into()));
    }
    if !(s1 * &eom.b1).is_alternating() {
        return Err(Error::Precondition("S1·B1 must be alternating".into()));
    }
    if !(s1 * &eom.b2).is_symmetric() {
        return Err(Error::Precondition("S1·B2 must be symmetric".into()));
    }
    Ok(())
}

/// `(B₁S₁⁻¹, -S₁⁻¹; S₁⁻¹, 0)` and `S₁ ⊕ -S₁B₂`, a factorization of the standard matrix.
pub fn semi_canonical_pair(eom: &EquationsOfMotion, s1: &RatMatrix) -> Result<ASPair> {
    check_s1(eom, s1)?;
    let n = eom.n();
    let s1i = s1.inverse()?;
    let a = RatMatrix::from_blocks(&(&eom.b1 * &s1i), &-&s1i, &s1i, &RatMatrix::zeros(n, n))?;
    let s2 = -&(s1 * &eom.b2);
    let s = RatMatrix::direct_sum(&[s1.clone(), s2]);
    ASPair::new(a, s)
}

pub fn build_canonical(eom: &EquationsOfMotion, s1: &RatMatrix, vars: &PhaseVars) -> Result<CanonicalResult> {
    check_s1(eom, s1)?;
    let n = eom.n();
    let s1i = s1.inverse()?;
    let x_mat = (s1 * &eom.b1).scale(&rational::half());
    let s2 = -&(s1 * &eom.b2);
    let s1i_x = &s1i * &x_mat;
    let xt = x_mat.transpose();
    let h = RatMatrix::from_blocks(&s1i, &s1i_x, &(&xt * &s1i), &(&(&xt * &s1i_x) + &s2))?;
    let m_can = &canonical_j(n) * &h;
    let p_link = PElement::new(s1i, s1i_x)?;

    let m_std = eom.standard_matrix();
    let lam = p_link.matrix();
    if &(&p_link.inverse_matrix() * &m_std) * &lam != m_can {
        return Err(Error::Precondition("P-conjugacy M_std → M_can failed".into()));
    }
    Ok(CanonicalResult {
        s1: s1.clone(),
        s2,
        x_mat,
        h_can: MultiPoly::quadratic_form(vars.all(), &h),
        h_can_matrix: h,
        m_can,
        p_link,
    })
}

impl QuadraticLagrangian {
    /// `L = ½(ẋᵗKẋ + xᵗCẋ + xᵗDx)` over `(x, ẋ)`.
    pub fn from_matrices(kinetic: RatMatrix, cross: RatMatrix, potential: RatMatrix, vars: &PhaseVars) -> Result<Self> {
        let n = vars.n();
        for m in [&kinetic, &cross, &potential] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    op: "QuadraticLagrangian",
                    left: (n, n),
                    right: m.shape(),
                });
            }
        }
        let half = rational::half();
        let q = RatMatrix::from_blocks(
            &potential.symmetric_part(),
            &cross.scale(&half),
            &cross.transpose().scale(&half),
            &kinetic.symmetric_part(),
        )?;
        Ok(Self {
            l: MultiPoly::quadratic_form(vars.lagrangian_vars(), &q),
            kinetic,
            cross,
            potential,
        })
    }

    /// Reads a homogeneous quadratic `L` in `(x₁…xₙ, ẋ₁…ẋₙ)`.
    pub fn from_poly(l: &MultiPoly) -> Result<Self> {
        let nv = l.nvars();
        if !nv.is_multiple_of(2) || l.terms().any(|(e, _)| e.iter().sum::<u32>() != 2) {
            return Err(Error::InvalidArgument(
                "Lagrangian must be a homogeneous quadratic in (x, x')".into(),
            ));
        }
        let n = nv / 2;
        let q = l.quadratic_hessian();
        Ok(Self {
            kinetic: q.block(n, n, n, n),
            cross: q.block(0, n, n, n).scale(&rational::int(2)),
            potential: q.block(0, 0, n, n),
            l: l.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.kinetic.rows()
    }
}

pub fn build_lagrangian(eom: &EquationsOfMotion, s1: &RatMatrix, vars: &PhaseVars) -> Result<QuadraticLagrangian> {
    check_s1(eom, s1)?;
    QuadraticLagrangian::from_matrices(s1.clone(), s1 * &eom.b1, s1 * &eom.b2, vars)
}

/// `K·ẍ = skew(C)·ẋ + sym(D)·x` solved for `(B₁, B₂)`.
pub fn euler_lagrange(ql: &QuadraticLagrangian) -> Result<EquationsOfMotion> {
    let k_inv = ql
        .kinetic
        .symmetric_part()
        .inverse()
        .map_err(|_| Error::Singular("kinetic matrix"))?;
    EquationsOfMotion::new(&k_inv * &ql.cross.skew_part(), &k_inv * &ql.potential.symmetric_part())
}

/// Equal up to a total time derivative `d/dt(xᵗGx)`.
pub fn lagrangian_equivalent(a: &QuadraticLagrangian, b: &QuadraticLagrangian) -> bool {
    a.n() == b.n()
        && a.kinetic.symmetric_part() == b.kinetic.symmetric_part()
        && a.cross.skew_part() == b.cross.skew_part()
        && a.potential.symmetric_part() == b.potential.symmetric_part()
}

/// `L + d/dt(xᵗGx)` for symmetric `G`.
pub fn add_gauge(ql: &QuadraticLagrangian, g: &RatMatrix, vars: &PhaseVars) -> Result<QuadraticLagrangian> {
    if !g.is_symmetric() {
        return Err(Error::Precondition("gauge matrix must be symmetric".into()));
    }
    // d/dt(xᵗGx) = 2xᵗGẋ = ½·xᵗ(4G)ẋ
    let cross = &ql.cross + &g.scale(&rational::int(4));
    QuadraticLagrangian::from_matrices(ql.kinetic.clone(), cross, ql.potential.clone(), vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Rational};

    fn dual(g: Rational, l: Rational) -> EquationsOfMotion {
        EquationsOfMotion::new(
            RatMatrix::from_rows(vec![vec![int(0), -g.clone()], vec![g, int(0)]]),
            RatMatrix::from_rows(vec![vec![int(-1), -l.clone()], vec![-l, int(-1)]]),
        )
        .unwrap()
    }

    fn bateman(g: Rational, l: Rational) -> EquationsOfMotion {
        EquationsOfMotion::new(
            RatMatrix::diag(&[-g.clone(), g]),
            RatMatrix::from_rows(vec![vec![int(-1), -l.clone()], vec![-l, int(-1)]]),
        )
        .unwrap()
    }

    #[test]
    fn s1_for_dual_is_identity() {
        let eom = dual(int(1), rat(1, 2));
        assert_eq!(s1_space(&eom), vec![RatMatrix::identity(2)]);
        assert_eq!(solve_s1(&eom, &SearchConfig::default()).unwrap(), RatMatrix::identity(2));
    }

    #[test]
    fn s1_for_bateman_is_swap() {
        let eom = bateman(int(1), rat(1, 2));
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(s1_space(&eom), vec![swap.clone()]);
        assert_eq!(solve_s1(&eom, &SearchConfig::default()).unwrap(), swap);
    }

    #[test]
    fn scalar_damping_has_no_canonical_form() {
        let eom = EquationsOfMotion::new(RatMatrix::diag(&[int(-1)]), RatMatrix::diag(&[int(-1)])).unwrap();
        assert!(s1_space(&eom).is_empty());
        assert_eq!(solve_s1(&eom, &SearchConfig::default()), Err(Error::NoCanonicalForm));
    }

    #[test]
    fn isotropic_oscillator() {
        let eom = EquationsOfMotion::new(RatMatrix::zeros(2, 2), -&RatMatrix::identity(2)).unwrap();
        let vars = PhaseVars::default_for(2);
        let c = build_canonical(&eom, &RatMatrix::identity(2), &vars).unwrap();
        assert_eq!(c.h_can.to_string(), "1/2*p^2 + 1/2*q^2 + 1/2*x^2 + 1/2*y^2");
        let l = build_lagrangian(&eom, &RatMatrix::identity(2), &vars).unwrap();
        assert_eq!(l.l.to_string(), "-1/2*x^2 - 1/2*y^2 + 1/2*x'^2 + 1/2*y'^2");
        assert_eq!(euler_lagrange(&l).unwrap(), eom);
    }

    #[test]
    fn canonical_soundness_identities() {
        let eom = bateman(rat(2, 3), rat(1, 5));
        let vars = PhaseVars::default_for(2);
        let s1 = solve_s1(&eom, &SearchConfig::default()).unwrap();
        let c = build_canonical(&eom, &s1, &vars).unwrap();
        assert!(c.h_can_matrix.is_symmetric());
        let omega_can = canonical_j(2).inverse().unwrap();
        assert_eq!(&omega_can * &c.m_can, c.h_can_matrix);
        let pair = semi_canonical_pair(&eom, &s1).unwrap();
        assert!(pair.factors(&eom.standard_matrix()));
    }

    #[test]
    fn rejects_bad_s1() {
        let eom = bateman(int(1), rat(1, 2));
        let vars = PhaseVars::default_for(2);
        assert!(matches!(
            build_canonical(&eom, &RatMatrix::identity(2), &vars),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn scalar_lagrangian() {
        let vars = PhaseVars::default_for(1);
        let ql = QuadraticLagrangian::from_matrices(
            RatMatrix::identity(1),
            RatMatrix::zeros(1, 1),
            -&RatMatrix::identity(1),
            &vars,
        )
        .unwrap();
        let eom = euler_lagrange(&ql).unwrap();
        assert_eq!(eom.b1, RatMatrix::zeros(1, 1));
        assert_eq!(eom.b2, RatMatrix::diag(&[int(-1)]));
        assert_eq!(QuadraticLagrangian::from_poly(&ql.l).unwrap(), ql);
        let doubled = QuadraticLagrangian::from_matrices(
            RatMatrix::identity(1).scale(&int(2)),
            RatMatrix::zeros(1, 1),
            RatMatrix::identity(1).scale(&int(-2)),
            &vars,
        )
        .unwrap();
        assert!(!lagrangian_equivalent(&ql, &doubled));
    }
}
