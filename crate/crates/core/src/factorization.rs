//! `M = A·S` with `A` alternating and invertible, `S` symmetric, and the
//! reading of such a pair as a constant symplectic form plus a quadratic
//! Hamiltonian.
//!
//! Convention: `ω̲ᵢⱼ = ω(∂ᵢ, ∂ⱼ)` and `i_X ω = -dH`, which gives
//! `ω̲·ξ̇ = ∇H`. Hence `ω̲ = A⁻¹`, `Hess(H) = S`, and the Poisson bracket
//! table `{ξᵢ, ξⱼ}` is `A` itself.

use crate::criterion::{self, companion};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::multipoly::MultiPoly;
use crate::phase::PhaseVars;
use crate::poly::UniPoly;
use crate::rational::Rational;
use crate::symsolve::{find_invertible, symmetric_solutions, SearchConfig};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASPair {
    pub a: RatMatrix,
    pub s: RatMatrix,
}

impl ASPair {
    /// Checks that `a` is alternating and invertible and `s` symmetric.
    pub fn new(a: RatMatrix, s: RatMatrix) -> Result<Self> {
        if !a.is_alternating() {
            return Err(Error::Precondition("A must be alternating".into()));
        }
        if !s.is_symmetric() {
            return Err(Error::Precondition("S must be symmetric".into()));
        }
        if a.shape() != s.shape() {
            return Err(Error::DimensionMismatch {
                op: "ASPair",
                left: a.shape(),
                right: s.shape(),
            });
        }
        if !a.is_invertible() {
            return Err(Error::Singular("A"));
        }
        Ok(Self { a, s })
    }

    pub fn product(&self) -> RatMatrix {
        &self.a * &self.s
    }

    /// All defining predicates hold and the product equals `m`.
    pub fn factors(&self, m: &RatMatrix) -> bool {
        self.a.is_alternating()
            && self.s.is_symmetric()
            && self.a.is_invertible()
            && self.a.shape() == m.shape()
            && self.product() == *m
    }
}

/// A factorization together with the dimension of the space of all
/// symmetric `S` compatible with `M` (invertible or not).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub pair: ASPair,
    pub solution_space_dim: usize,
}

/// Symmetric `S` with `MᵗS + SM = 0`; equivalently `M·S⁻¹` alternating.
pub fn symmetric_factor_space(m: &RatMatrix) -> Vec<RatMatrix> {
    let mt = m.transpose();
    symmetric_solutions(m.rows(), |s| vec![&(&mt * s) + &(s * m)])
}

pub fn factor(m: &RatMatrix, search: &SearchConfig) -> Result<Factorization> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.rows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.rows()));
    }
    if m.det()?.is_zero() {
        return Err(Error::SingularM);
    }
    let space = symmetric_factor_space(m);
    let Some(s) = find_invertible(&space, search) else {
        if !space.is_empty() && criterion::is_hamiltonian_candidate(m)? {
            return Err(Error::SearchExhausted(search.attempts));
        }
        return Err(Error::NotHamiltonian);
    };
    let a = m * &s.inverse()?;
    Ok(Factorization {
        pair: ASPair::new(a, s)?,
        solution_space_dim: space.len(),
    })
}

/// Closed-form factor pair of the companion block of an even monic
/// polynomial `t^{2r} - a_{2r-2}t^{2r-2} - … - a₀`.
///
/// With `b₀ = a₀`, `y₀ = 1/b₀`, `yₘ = -a_{2r-2m}/a₀` and
/// `Σ_{l=1}^{m} b_l y_{m-l} = -a_{2r-2m}`, the pair is
/// `A = J ⊕ A'`, `S = (1) ⊕ S'` where `A'` carries the `y`'s on its odd
/// anti-diagonals and `S'` carries the `b`'s on the lower-right anti-diagonals.
/// The product identity is checked; on failure the block is factored by the
/// general linear solve instead.
pub fn factor_companion_block(p: &UniPoly) -> Result<ASPair> {
    let p = p.monic();
    let deg = p.degree().unwrap_or(0);
    if deg == 0 || !deg.is_multiple_of(2) || !p.is_even() {
        return Err(Error::OddBlock);
    }
    let r = deg / 2;
    // a_{2m}: coefficients with the sign of the "t^{2r} - Σ a t" form
    let a = |k: usize| -p.coeff(k);
    let a0 = a(0);
    if a0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let mut y = vec![Rational::zero(); r.saturating_sub(1)];
    if r >= 2 {
        y[0] = a0.recip();
        for (m, ym) in y.iter_mut().enumerate().skip(1) {
            *ym = -a(2 * r - 2 * m) / &a0;
        }
    }
    let mut b = vec![Rational::zero(); r];
    b[0] = a0.clone();
    for m in 1..r {
        let mut acc = -a(2 * r - 2 * m);
        for l in 1..m {
            acc -= &b[l] * &y[m - l];
        }
        b[m] = acc / &y[0];
    }

    let n = 2 * r;
    let mut am = RatMatrix::zeros(n, n);
    am[(0, 1)] = -Rational::one();
    am[(1, 0)] = Rational::one();
    let sign = |e: usize| if e.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    for i in 0..n - 2 {
        for j in 0..n - 2 {
            let k = i + j;
            if k % 2 == 1 && k <= 2 * r - 3 {
                am[(2 + i, 2 + j)] = sign(i + 1) * &y[r - 2 - (k - 1) / 2];
            }
        }
    }
    let mut sm = RatMatrix::zeros(n, n);
    sm[(0, 0)] = Rational::one();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let Some(k) = (i + j).checked_sub(2 * r - 2) else {
                continue;
            };
            if k % 2 == 0 {
                let m = k / 2;
                let s = if m == 0 { sign(i + 1) } else { sign(i) };
                sm[(1 + i, 1 + j)] = s * &b[m];
            }
        }
    }
    let target = companion(&p);
    match ASPair::new(am, sm) {
        Ok(pair) if pair.product() == target => Ok(pair),
        _ => factor(&target, &SearchConfig::default()).map(|f| f.pair),
    }
}

/// `(Λ⁻¹AΛ⁻ᵗ, ΛᵗSΛ)`, a factorization of `Λ⁻¹(AS)Λ`.
pub fn conjugate_pair(pair: &ASPair, lambda: &RatMatrix) -> Result<ASPair> {
    if lambda.shape() != pair.a.shape() {
        return Err(Error::DimensionMismatch {
            op: "conjugate_pair",
            left: pair.a.shape(),
            right: lambda.shape(),
        });
    }
    let inv = lambda.inverse().map_err(|_| Error::Singular("conjugating matrix"))?;
    let a = &(&inv * &pair.a) * &inv.transpose();
    let s = &(&lambda.transpose() * &pair.s) * lambda;
    ASPair::new(a, s)
}

/// Factorization through the rational canonical form: each companion block
/// is factored in closed form and the direct sum is conjugated back.
pub fn factor_via_frobenius(m: &RatMatrix) -> Result<ASPair> {
    if !criterion::is_hamiltonian_candidate(m)? {
        return Err(Error::NotHamiltonian);
    }
    let f = criterion::frobenius(m)?;
    let blocks = f
        .invariant_factors
        .iter()
        .map(factor_companion_block)
        .collect::<Result<Vec<_>>>()?;
    let a = RatMatrix::direct_sum(&blocks.iter().map(|b| b.a.clone()).collect::<Vec<_>>());
    let s = RatMatrix::direct_sum(&blocks.iter().map(|b| b.s.clone()).collect::<Vec<_>>());
    let on_form = ASPair::new(a, s)?;
    conjugate_pair(&on_form, &f.transform.inverse()?)
}

/// `(ω̲, Hess H, H, {ξᵢ, ξⱼ})` for a factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianStructure {
    pub omega: RatMatrix,
    pub hessian: RatMatrix,
    pub h: MultiPoly,
    pub bracket_table: RatMatrix,
}

impl HamiltonianStructure {
    /// `Σ_{i<j} ω̲ᵢⱼ dξᵢ∧dξⱼ`, e.g. `dp∧dx + dq∧dy - 1/2*dx∧dy`.
    pub fn omega_display(&self, vars: &PhaseVars) -> String {
        two_form_display(&self.omega, &vars.all())
    }

    /// Nonzero brackets `{ξᵢ, ξⱼ}` with `i < j`.
    pub fn nonzero_brackets(&self, vars: &PhaseVars) -> Vec<(String, String, Rational)> {
        let names = vars.all();
        let n = names.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = &self.bracket_table[(i, j)];
                if !v.is_zero() {
                    out.push((names[i].clone(), names[j].clone(), v.clone()));
                }
            }
        }
        out
    }
}

pub fn two_form_display(omega: &RatMatrix, names: &[String]) -> String {
    let mut out = String::new();
    let n = omega.rows();
    for i in 0..n {
        for j in i + 1..n {
            let c = &omega[(i, j)];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("d{}∧d{}", names[i], names[j]));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn to_structure(pair: &ASPair, m: &RatMatrix, vars: &PhaseVars) -> Result<HamiltonianStructure> {
    if !pair.factors(m) {
        return Err(Error::Precondition("pair does not factor M".into()));
    }
    if vars.all().len() != m.rows() {
        return Err(Error::InvalidArgument("variable count does not match M".into()));
    }
    let omega = pair.a.inverse()?;
    if &omega * m != pair.s {
        return Err(Error::Precondition("ω̲·M differs from Hess(H)".into()));
    }
    Ok(HamiltonianStructure {
        h: MultiPoly::quadratic_form(vars.all(), &pair.s),
        hessian: pair.s.clone(),
        bracket_table: pair.a.clone(),
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn j2() -> RatMatrix {
        RatMatrix::from_i64(&[&[0, -1], &[1, 0]])
    }

    #[test]
    fn harmonic_oscillator_factors_trivially() {
        let f = factor(&j2(), &SearchConfig::default()).unwrap();
        assert!(f.pair.factors(&j2()));
        assert_eq!(f.solution_space_dim, 1);
        assert_eq!(f.pair.s.scale(&f.pair.s[(0, 0)].recip()), RatMatrix::identity(2));
    }

    #[test]
    fn damped_oscillator_has_no_factor() {
        let m = RatMatrix::from_i64(&[&[-1, -1], &[1, 0]]);
        assert_eq!(factor(&m, &SearchConfig::default()), Err(Error::NotHamiltonian));
    }

    #[test]
    fn companion_block_r1() {
        let p = UniPoly::from_i64(&[1, 0, 1]);
        let pair = factor_companion_block(&p).unwrap();
        assert_eq!(pair.a, j2());
        assert_eq!(pair.s, RatMatrix::identity(2));
        assert_eq!(pair.product(), j2());

        let pair = factor_companion_block(&UniPoly::from_i64(&[-4, 0, 1])).unwrap();
        assert_eq!(pair.product(), RatMatrix::from_i64(&[&[0, 4], &[1, 0]]));
        assert_eq!(pair.s, RatMatrix::diag(&[int(1), int(-4)]));
    }

    #[test]
    fn companion_block_r2_uses_recursion() {
        // t⁴ + 3t² + 3/4: a₀ = -3/4, a₂ = -3
        let p = UniPoly::new(vec![rat(3, 4), int(0), int(3), int(0), int(1)]);
        let pair = factor_companion_block(&p).unwrap();
        assert_eq!(pair.product(), companion(&p));
        // b₀ = a₀ sits on the anti-diagonal of S'; y₀ = 1/a₀ in A'.
        assert_eq!(pair.s[(1, 3)], rat(3, 4));
        assert_eq!(pair.a[(2, 3)], -rat(-4, 3));
        assert_eq!(pair.s[(3, 3)], -(rat(-3, 4) * int(-3)));
    }

    #[test]
    fn companion_block_general_r() {
        for r in 1..=5usize {
            let mut coeffs = vec![int(0); 2 * r + 1];
            coeffs[2 * r] = int(1);
            for m in 0..r {
                coeffs[2 * m] = rat(2 * m as i64 + 3, (m as i64 % 3) + 1) * int(if m % 2 == 0 { 1 } else { -1 });
            }
            let p = UniPoly::new(coeffs);
            let pair = factor_companion_block(&p).unwrap();
            assert_eq!(pair.product(), companion(&p), "r = {r}");
        }
    }

    #[test]
    fn companion_block_errors() {
        assert_eq!(
            factor_companion_block(&UniPoly::from_i64(&[0, 0, 1])),
            Err(Error::ZeroConstantTerm)
        );
        assert_eq!(factor_companion_block(&UniPoly::from_i64(&[1, 1, 1])), Err(Error::OddBlock));
    }

    #[test]
    fn conjugation_by_scalars() {
        let pair = ASPair::new(j2(), RatMatrix::diag(&[int(2), int(3)])).unwrap();
        assert_eq!(conjugate_pair(&pair, &RatMatrix::identity(2)).unwrap(), pair);
        let two = RatMatrix::identity(2).scale(&int(2));
        let c = conjugate_pair(&pair, &two).unwrap();
        assert_eq!(c.a, pair.a.scale(&rat(1, 4)));
        assert_eq!(c.s, pair.s.scale(&int(4)));
        assert_eq!(c.product(), pair.product());
        assert_eq!(
            conjugate_pair(&pair, &RatMatrix::zeros(2, 2)),
            Err(Error::Singular("conjugating matrix"))
        );
    }

    #[test]
    fn structure_of_harmonic_oscillator() {
        let pair = ASPair::new(j2(), RatMatrix::identity(2)).unwrap();
        let vars = PhaseVars::default_for(1);
        let st = to_structure(&pair, &j2(), &vars).unwrap();
        assert_eq!(st.h.to_string(), "1/2*p^2 + 1/2*x^2");
        assert_eq!(st.omega_display(&vars), "dp∧dx");
        assert_eq!(st.nonzero_brackets(&vars), vec![("p".into(), "x".into(), int(-1))]);
    }
}
