//! Univariate polynomials with rational coefficients.

use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending degree; trailing zeros are trimmed so the
/// leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·tᵏ`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// True when every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// `p(-t)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Coefficients of `q` with `p(t) = q(t²)`; `None` if `p` is not even.
    pub fn even_part_in_square(&self) -> Option<Self> {
        self.is_even()
            .then(|| Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rational::to_f64(c))
    }

    /// `p(M)·v` by Horner's rule without forming `p(M)`.
    pub fn apply(&self, m: &RatMatrix, v: &RatMatrix) -> RatMatrix {
        let mut acc = RatMatrix::zeros(v.rows(), v.cols());
        for c in self.coeffs.iter().rev() {
            acc = m * &acc;
            acc = &acc + &v.scale(c);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); n - dd + 1];
        for k in (dd..=n).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = &rem[k] / &lc;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &f * dc;
            }
            quot[k - dd] = f;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }

    /// Renders in the variable `var`, highest degree first, e.g. `t^2 + t + 1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn display_matches_conventional_form() {
        assert_eq!(UniPoly::from_i64(&[1, 1, 1]).to_string(), "t^2 + t + 1");
        assert_eq!(UniPoly::from_i64(&[1, 0, 1]).to_string(), "t^2 + 1");
        let p = UniPoly::new(vec![rat(3, 4), int(0), int(3), int(0), int(1)]);
        assert_eq!(p.to_string(), "t^4 + 3*t^2 + 3/4");
        assert_eq!(UniPoly::from_i64(&[2, -3, 0, -1]).to_string(), "-t^3 - 3*t + 2");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }

    #[test]
    fn division_and_gcd() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = UniPoly::from_i64(&[-2, 1, 1]);
        let b = UniPoly::from_i64(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), UniPoly::from_i64(&[-1, 1]));
        let (q, r) = a.div_rem(&UniPoly::from_i64(&[-1, 1]));
        assert_eq!(q, UniPoly::from_i64(&[2, 1]));
        assert!(r.is_zero());
        let (q, r) = UniPoly::from_i64(&[1, 0, 1]).div_rem(&UniPoly::from_i64(&[0, 2]));
        assert_eq!(q, UniPoly::new(vec![int(0), rat(1, 2)]));
        assert_eq!(r, UniPoly::one());
    }

    #[test]
    fn evenness() {
        let p = UniPoly::from_i64(&[1, 0, 3, 0, 1]);
        assert!(p.is_even());
        assert_eq!(p.even_part_in_square(), Some(UniPoly::from_i64(&[1, 3, 1])));
        assert!(!UniPoly::from_i64(&[1, 1, 1]).is_even());
        assert_eq!(UniPoly::from_i64(&[1, 2, 3]).reflect(), UniPoly::from_i64(&[1, -2, 3]));
    }

    #[test]
    fn apply_to_matrix() {
        // p(t) = t² + 1 annihilates the rotation generator.
        let j = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let v = RatMatrix::column(vec![int(3), int(-2)]);
        assert!(UniPoly::from_i64(&[1, 0, 1]).apply(&j, &v).is_zero());
        assert_eq!(UniPoly::from_i64(&[0, 1]).apply(&j, &v), &j * &v);
    }
}
