//! Names for phase-space coordinates `ξ = (p, x)`.

use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVars {
    pub momenta: Vec<String>,
    pub positions: Vec<String>,
}

impl PhaseVars {
    /// `x`, `x y`, or `x1 … xn`, with their conjugate momenta.
    pub fn default_for(n: usize) -> Self {
        let positions: Vec<String> = match n {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            _ => (1..=n).map(|i| format!("x{i}")).collect(),
        };
        Self::from_positions(positions)
    }

    /// Momentum names follow the `x→p`, `y→q`, `z→r` convention
    /// (`x1→p1`, `y2→q2`); anything else becomes `p_<name>`.
    pub fn from_positions(positions: Vec<String>) -> Self {
        let conventional: Vec<Option<String>> = positions
            .iter()
            .map(|s| {
                let mut chars = s.chars();
                let head = match chars.next()? {
                    'x' => 'p',
                    'y' => 'q',
                    'z' => 'r',
                    _ => return None,
                };
                let rest: String = chars.collect();
                rest.chars()
                    .all(|c| c.is_ascii_digit())
                    .then(|| format!("{head}{rest}"))
            })
            .collect();
        let taken: HashSet<&String> = positions.iter().collect();
        let unique: HashSet<&Option<String>> = conventional.iter().collect();
        let ok = unique.len() == positions.len()
            && conventional
                .iter()
                .all(|c| c.as_ref().is_some_and(|c| !taken.contains(c)));
        let momenta = if ok {
            conventional.into_iter().flatten().collect()
        } else {
            positions.iter().map(|s| format!("p_{s}")).collect()
        };
        Self { momenta, positions }
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// `(p₁ … pₙ, x₁ … xₙ)`
    pub fn all(&self) -> Vec<String> {
        self.momenta.iter().chain(&self.positions).cloned().collect()
    }

    /// Velocity names `x'` used by Lagrangians, after the positions.
    pub fn lagrangian_vars(&self) -> Vec<String> {
        self.positions
            .iter()
            .cloned()
            .chain(self.positions.iter().map(|s| format!("{s}'")))
            .collect()
    }
}
