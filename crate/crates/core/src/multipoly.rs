//! Sparse multivariate polynomials over the rationals with named variables.

use crate::matrix::RatMatrix;
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent multi-index, one entry per variable.
pub type Exponents = Vec<u32>;

/// A polynomial in a fixed, ordered list of variables. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        p.add_term(vec![0; n], c);
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: Vec<String>, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `½ ξᵗ·H·ξ` for a square `H` indexed like `vars`.
    pub fn quadratic_form(vars: Vec<String>, h: &RatMatrix) -> Self {
        let n = vars.len();
        assert_eq!(h.shape(), (n, n), "quadratic form shape");
        let half = rational::half();
        let mut p = Self::zero(vars);
        for i in 0..n {
            for j in 0..n {
                let c = &h[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, c * &half);
            }
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        assert_eq!(exps.len(), self.vars.len(), "exponent arity");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Same coefficients under new variable names (arity must match).
    pub fn with_vars(&self, vars: Vec<String>) -> Self {
        assert_eq!(vars.len(), self.vars.len(), "relabel arity");
        Self {
            vars,
            terms: self.terms.clone(),
        }
    }

    /// Re-homes the variables at positions `offset..offset+nvars` of a larger ring.
    pub fn embed(&self, vars: Vec<String>, offset: usize) -> Self {
        assert!(offset + self.vars.len() <= vars.len(), "embedding out of range");
        let width = vars.len();
        Self::from_terms(
            vars,
            self.terms.iter().map(|(e, c)| {
                let mut wide = vec![0; width];
                wide[offset..offset + e.len()].copy_from_slice(e);
                (wide, c.clone())
            }),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(e, c)| (e.clone(), c * k)),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c * rational::int(i64::from(e[i])));
        }
        p
    }

    /// Antiderivative in variable `i` with zero constant of integration.
    pub fn integrate(&self, i: usize) -> Self {
        let mut p = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            let d = rational::int(i64::from(e2[i]));
            p.add_term(e2, c / d);
        }
        p
    }

    /// Drops every term that involves any variable whose index is in `zeroed`.
    pub fn restrict_zero(&self, zeroed: impl Fn(usize) -> bool) -> Self {
        Self::from_terms(
            self.vars.clone(),
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().enumerate().all(|(k, &d)| d == 0 || !zeroed(k)))
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "evaluation arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&d, x)| acc * num_traits::pow(x.clone(), d as usize))
            })
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len(), "evaluation arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(rational::to_f64(c), |acc, (&d, x)| acc * x.powi(d as i32))
            })
            .sum()
    }

    /// Compiles to a float-only form for repeated evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Exponents, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), rational::to_f64(c)))
            .collect()
    }

    /// Hessian of the homogeneous quadratic part.
    pub fn quadratic_hessian(&self) -> RatMatrix {
        let n = self.vars.len();
        let mut h = RatMatrix::zeros(n, n);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() != 2 {
                continue;
            }
            let idx: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(k, &d)| std::iter::repeat_n(k, d as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                h[(i, i)] += c * rational::int(2);
            } else {
                h[(i, j)] += c.clone();
                h[(j, i)] += c.clone();
            }
        }
        h
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    fn monomial_string(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(k, &d)| {
                if d == 1 {
                    self.vars[k].clone()
                } else {
                    format!("{}^{}", self.vars[k], d)
                }
            })
            .collect();
        parts.join("*")
    }

    /// Terms ordered by descending total degree, then by variable order.
    fn display_order(&self) -> Vec<(&Exponents, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mono = self.monomial_string(e);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}
