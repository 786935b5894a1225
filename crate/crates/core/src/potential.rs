//! Polynomial force fields and their scalar potentials.

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;

/// Default bound on the total degree of a force component.
pub const MAX_FIELD_DEGREE: u32 = 6;

/// Force `f(x)` added to the right-hand side `ẍ = B₁ẋ + B₂x + f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyField {
    components: Vec<MultiPoly>,
}

impl PolyField {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        Self::with_max_degree(components, MAX_FIELD_DEGREE)
    }

    pub fn with_max_degree(components: Vec<MultiPoly>, max_degree: u32) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidArgument("empty force field".into()));
        };
        let vars = first.vars().to_vec();
        if components.len() != vars.len() {
            return Err(Error::InvalidArgument(format!(
                "{} components over {} variables",
                components.len(),
                vars.len()
            )));
        }
        if components.iter().any(|c| c.vars() != vars.as_slice()) {
            return Err(Error::InvalidArgument("components over different variables".into()));
        }
        if let Some(d) = components.iter().filter_map(MultiPoly::total_degree).max() {
            if d > max_degree {
                return Err(Error::InvalidArgument(format!(
                    "force degree {d} exceeds the bound {max_degree}"
                )));
            }
        }
        Ok(Self { components })
    }

    pub fn zero(vars: Vec<String>) -> Self {
        Self {
            components: vec![MultiPoly::zero(vars.clone()); vars.len()],
        }
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn vars(&self) -> &[String] {
        self.components[0].vars()
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    /// `K·f` for a square rational matrix `K`.
    pub fn transform(&self, k: &crate::matrix::RatMatrix) -> Result<Self> {
        if k.shape() != (self.n(), self.n()) {
            return Err(Error::DimensionMismatch {
                op: "PolyField::transform",
                left: (self.n(), self.n()),
                right: k.shape(),
            });
        }
        let comps = (0..self.n())
            .map(|i| {
                (0..self.n()).fold(MultiPoly::zero(self.vars().to_vec()), |acc, j| {
                    &acc + &self.components[j].scale(&k[(i, j)])
                })
            })
            .collect();
        Self::with_max_degree(comps, u32::MAX)
    }
}

/// True iff the Jacobian of `f` is symmetric.
pub fn check_conservative(f: &PolyField) -> bool {
    let c = f.components();
    (0..f.n()).all(|i| (i + 1..f.n()).all(|j| c[i].partial(j) == c[j].partial(i)))
}

/// `V` with `-∇V = f` and `V(0) = 0`, integrating along the coordinate axes
/// in the order `x₁, x₂, …`.
pub fn integrate_potential(f: &PolyField) -> Result<MultiPoly> {
    let order: Vec<usize> = (0..f.n()).collect();
    integrate_potential_in_order(f, &order)
}

/// As [`integrate_potential`] with an explicit axis order (a permutation).
pub fn integrate_potential_in_order(f: &PolyField, order: &[usize]) -> Result<MultiPoly> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..f.n()).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("axis order must be a permutation".into()));
    }
    if !check_conservative(f) {
        return Err(Error::NotConservative);
    }
    let mut v = MultiPoly::zero(f.vars().to_vec());
    for (step, &i) in order.iter().enumerate() {
        // path segment along xᵢ with the not-yet-visited axes still at zero
        let pending = &order[step + 1..];
        let along = f.components()[i].restrict_zero(|k| pending.contains(&k));
        v = &v - &along.integrate(i);
    }
    debug_assert!((0..f.n()).all(|j| -&v.partial(j) == f.components()[j]));
    Ok(v)
}
