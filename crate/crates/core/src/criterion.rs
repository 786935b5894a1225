//! Rational canonical (Frobenius) form and the "M is conjugate to -M" test.
//!
//! The decomposition is built from cyclic subspaces. A vector whose local
//! minimal polynomial equals the minimal polynomial of the operator spans the
//! largest block; an invariant complement is cut out as the common kernel of
//! `f, f·M, …, f·M^{d-1}` for a functional `f` dual to the last Krylov
//! vector, and the procedure recurses on that complement.

use crate::error::{Error, Result};
use crate::matrix::{nullspace, solve_linear, RatMatrix};
use crate::poly::UniPoly;
use crate::rational::Rational;
use num_traits::{One, Zero};

/// Invariant factors (ascending divisibility chain), the block-diagonal
/// companion form, and `transform` with `transform⁻¹·M·transform == form`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusForm {
    pub invariant_factors: Vec<UniPoly>,
    pub form: RatMatrix,
    pub transform: RatMatrix,
}

/// Companion matrix with ones on the subdiagonal and `-c₀, …, -c_{d-1}` in
/// the last column, for monic `p = t^d + c_{d-1}t^{d-1} + … + c₀`.
pub fn companion(p: &UniPoly) -> RatMatrix {
    let p = p.monic();
    let d = p.degree().unwrap_or(0);
    let mut c = RatMatrix::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = Rational::one();
    }
    for i in 0..d {
        c[(i, d - 1)] = -p.coeff(i);
    }
    c
}

/// Monic minimal polynomial of `v` under `m`, plus its Krylov vectors
/// `v, Mv, …, M^{d-1}v`.
fn local_min_poly(m: &RatMatrix, v: &RatMatrix) -> (UniPoly, Vec<RatMatrix>) {
    let mut krylov: Vec<RatMatrix> = Vec::new();
    let mut next = v.clone();
    loop {
        if krylov.is_empty() && next.is_zero() {
            return (UniPoly::one(), krylov);
        }
        if !krylov.is_empty() {
            let basis = RatMatrix::from_columns(&krylov.iter().map(|k| k.col(0)).collect::<Vec<_>>());
            if let Ok(sol) = solve_linear(&basis, &next) {
                let k = krylov.len();
                let mut coeffs: Vec<Rational> = (0..k).map(|j| -sol.particular[(j, 0)].clone()).collect();
                coeffs.push(Rational::one());
                return (UniPoly::new(coeffs), krylov);
            }
        }
        let after = m * &next;
        krylov.push(next);
        next = after;
    }
}

/// Splits `lcm(p, q)` into coprime `a | p`, `c | q` with `a·c = lcm(p, q)`.
fn coprime_split(p: &UniPoly, q: &UniPoly) -> (UniPoly, UniPoly) {
    let g = p.gcd(q);
    let mut a = p.clone();
    let mut c = q.exact_div(&g);
    loop {
        let h = a.gcd(&c);
        if h.degree() == Some(0) {
            return (a.monic(), c.monic());
        }
        a = a.exact_div(&h);
        c = &c * &h;
    }
}

/// A vector whose local minimal polynomial is the minimal polynomial of `m`.
fn maximal_vector(m: &RatMatrix) -> (RatMatrix, UniPoly) {
    let n = m.rows();
    let mut best_v = RatMatrix::zeros(n, 1);
    let mut best_p = UniPoly::one();
    for i in 0..n {
        let e = RatMatrix::from_fn(n, 1, |r, _| if r == i { Rational::one() } else { Rational::zero() });
        let (q, _) = local_min_poly(m, &e);
        if q.divides(&best_p) {
            continue;
        }
        let (a, c) = coprime_split(&best_p, &q);
        let v1 = best_p.exact_div(&a).apply(m, &best_v);
        let w1 = q.exact_div(&c).apply(m, &e);
        best_v = &v1 + &w1;
        best_p = &a * &c;
        if best_p.degree() == Some(n) {
            break;
        }
    }
    (best_v, best_p)
}

/// Returns `(invariant factor, Krylov basis)` pairs, largest factor first.
fn decompose(m: &RatMatrix) -> Vec<(UniPoly, Vec<RatMatrix>)> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let (v, mu) = maximal_vector(m);
    let (_, krylov) = local_min_poly(m, &v);
    let d = krylov.len();
    debug_assert_eq!(mu.degree(), Some(d));
    if d == n {
        return vec![(mu, krylov)];
    }

    // f with f·Mⁱv = δ_{i,d-1}
    let kmat = RatMatrix::from_columns(&krylov.iter().map(|k| k.col(0)).collect::<Vec<_>>());
    let mut e_last = RatMatrix::zeros(d, 1);
    e_last[(d - 1, 0)] = Rational::one();
    let f = solve_linear(&kmat.transpose(), &e_last)
        .expect("Krylov vectors are independent")
        .particular
        .transpose();

    let mut phi_rows = Vec::with_capacity(d);
    let mut fr = f;
    for _ in 0..d {
        phi_rows.push(fr.row(0).to_vec());
        fr = &fr * m;
    }
    let phi = RatMatrix::from_rows(phi_rows);
    let complement = nullspace(&phi);
    debug_assert_eq!(complement.len(), n - d);
    let b = RatMatrix::from_columns(&complement.iter().map(|c| c.col(0)).collect::<Vec<_>>());
    let restricted = solve_linear(&b, &(m * &b))
        .expect("complement is invariant")
        .particular;

    let mut out = vec![(mu, krylov)];
    for (p, vecs) in decompose(&restricted) {
        out.push((p, vecs.iter().map(|w| &b * w).collect()));
    }
    out
}

pub fn frobenius(m: &RatMatrix) -> Result<FrobeniusForm> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut parts = decompose(m);
    parts.reverse();
    let invariant_factors: Vec<UniPoly> = parts.iter().map(|(p, _)| p.clone()).collect();
    let form = RatMatrix::direct_sum(&invariant_factors.iter().map(companion).collect::<Vec<_>>());
    let columns: Vec<Vec<Rational>> = parts
        .iter()
        .flat_map(|(_, vecs)| vecs.iter().map(|v| v.col(0)))
        .collect();
    let transform = if columns.is_empty() {
        RatMatrix::zeros(0, 0)
    } else {
        RatMatrix::from_columns(&columns)
    };
    Ok(FrobeniusForm {
        invariant_factors,
        form,
        transform,
    })
}

/// Whether `a` and `b` are similar over the rationals.
pub fn similar(a: &RatMatrix, b: &RatMatrix) -> Result<bool> {
    if a.shape() != b.shape() {
        return Ok(false);
    }
    Ok(frobenius(a)?.invariant_factors == frobenius(b)?.invariant_factors)
}

/// `P` with `P⁻¹·a·P == b`, when `a` and `b` are similar.
pub fn conjugator(a: &RatMatrix, b: &RatMatrix) -> Result<Option<RatMatrix>> {
    if a.shape() != b.shape() {
        return Ok(None);
    }
    let fa = frobenius(a)?;
    let fb = frobenius(b)?;
    if fa.invariant_factors != fb.invariant_factors {
        return Ok(None);
    }
    Ok(Some(&fa.transform * &fb.transform.inverse()?))
}

/// True iff every odd-degree coefficient of the characteristic polynomial vanishes.
pub fn even_char_poly(m: &RatMatrix) -> Result<bool> {
    Ok(m.char_poly()?.is_even())
}

fn check_even_square(m: &RatMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.rows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.rows()));
    }
    Ok(())
}

/// Whether invertible `m` is conjugate to `-m`, which is exactly when the
/// system `ξ̇ = Mξ` admits a quadratic Hamiltonian with a constant symplectic form.
pub fn is_hamiltonian_candidate(m: &RatMatrix) -> Result<bool> {
    check_even_square(m)?;
    if m.det()?.is_zero() {
        return Err(Error::SingularM);
    }
    if !even_char_poly(m)? {
        return Ok(false);
    }
    similar(m, &-m)
}
