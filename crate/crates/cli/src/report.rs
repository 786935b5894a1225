//! Serializable pipeline report. Rationals are stored as `"p/q"` strings next
//! to their nearest doubles; only the strings are authoritative.

use hamiltonize::dynamics::StabilityReport;
use hamiltonize::rational::{self, parse_rational};
use hamiltonize::{MultiPoly, RatMatrix, Rational, UniPoly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixOut {
    pub exact: Vec<Vec<String>>,
    pub float: Vec<Vec<f64>>,
}

impl From<&RatMatrix> for MatrixOut {
    fn from(m: &RatMatrix) -> Self {
        Self {
            exact: m.to_rows().iter().map(|r| r.iter().map(rational::to_string).collect()).collect(),
            float: m.to_f64_rows(),
        }
    }
}

impl MatrixOut {
    pub fn to_matrix(&self) -> Option<RatMatrix> {
        let rows = self
            .exact
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return None;
        }
        Some(RatMatrix::from_rows(rows))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyOut {
    pub display: String,
    /// Ascending coefficients.
    pub coefficients: Vec<String>,
    pub float: Vec<f64>,
}

impl From<&UniPoly> for PolyOut {
    fn from(p: &UniPoly) -> Self {
        Self {
            display: p.to_string(),
            coefficients: p.coeffs().iter().map(rational::to_string).collect(),
            float: p.to_f64_coeffs(),
        }
    }
}

impl PolyOut {
    pub fn to_poly(&self) -> Option<UniPoly> {
        let c = self.coefficients.iter().map(|s| parse_rational(s)).collect::<Option<Vec<_>>>()?;
        Some(UniPoly::new(c))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub hamiltonian: bool,
    pub even_char_poly: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// `(ω̲, Hess H, H, brackets)` for one factor pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureOut {
    pub a: MatrixOut,
    pub s: MatrixOut,
    pub hamiltonian: String,
    pub two_form: String,
    pub omega: MatrixOut,
    pub brackets: Vec<Bracket>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationsOut {
    pub admissible: bool,
    pub b1: Option<MatrixOut>,
    pub b2: Option<MatrixOut>,
    pub m_std: Option<MatrixOut>,
    /// `Λ` with `Λ⁻¹·M·Λ = M_std`.
    pub lambda: Option<MatrixOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalOut {
    pub s1: MatrixOut,
    pub s2: MatrixOut,
    pub h_can: String,
    pub h_can_matrix: MatrixOut,
    pub m_can: MatrixOut,
    /// `P` with `P⁻¹·M_std·P = M_can`.
    pub p_link: MatrixOut,
    pub semi_canonical: StructureOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LagrangianOut {
    pub lagrangian: String,
    pub kinetic: MatrixOut,
    pub cross: MatrixOut,
    pub potential: MatrixOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialOut {
    pub force: Vec<String>,
    pub potential: Option<String>,
    /// Quadratic part plus potential, with the semi-canonical two-form.
    pub hamiltonian: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeOut {
    pub re: f64,
    pub im: f64,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityOut {
    /// When true the modes are values of `t²`, else of `t`.
    pub even: bool,
    pub discriminant: Option<String>,
    pub modes: Vec<ModeOut>,
    pub all_oscillatory: bool,
}

impl From<&StabilityReport> for StabilityOut {
    fn from(r: &StabilityReport) -> Self {
        Self {
            even: r.even,
            discriminant: r.discriminant.as_ref().map(rational::to_string),
            modes: r
                .modes
                .iter()
                .map(|m| ModeOut {
                    re: m.value.re,
                    im: m.value.im,
                    class: m.class.to_string(),
                })
                .collect(),
            all_oscillatory: r.all_oscillatory(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationOut {
    pub method: String,
    pub h: f64,
    pub t_end: f64,
    pub steps: usize,
    pub xi0: Vec<f64>,
    pub final_state: Vec<f64>,
    pub observable: Option<String>,
    pub drift: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub equations_text: Option<String>,
    pub params: BTreeMap<String, String>,
    pub variables: Vec<String>,
    pub evolution_matrix: MatrixOut,
    pub char_poly: Option<PolyOut>,
    pub verdict: Option<Verdict>,
    pub factorization: Option<StructureOut>,
    pub equations: Option<EquationsOut>,
    pub canonical: Option<CanonicalOut>,
    pub lagrangian: Option<LagrangianOut>,
    pub potential: Option<PotentialOut>,
    pub stability: Option<StabilityOut>,
    pub simulation: Option<SimulationOut>,
    pub notes: Vec<String>,
    pub error: Option<String>,
    pub exit_code: i32,
}

pub fn rat_string(r: &Rational) -> String {
    rational::to_string(r)
}

pub fn poly_string(p: &MultiPoly) -> String {
    p.to_string()
}

fn write_matrix(out: &mut String, title: &str, m: &MatrixOut) {
    let _ = writeln!(out, "  {title}:");
    let width = m.exact.iter().flatten().map(String::len).max().unwrap_or(1);
    for (row, frow) in m.exact.iter().zip(&m.float) {
        let exact: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        let float: Vec<String> = frow.iter().map(|v| format!("{v:>10.6}")).collect();
        let _ = writeln!(out, "    [{}]   ~ [{}]", exact.join(" "), float.join(" "));
    }
}

fn write_structure(out: &mut String, s: &StructureOut) {
    let _ = writeln!(out, "  H = {}", s.hamiltonian);
    let _ = writeln!(out, "  ω = {}", s.two_form);
    write_matrix(out, "A (bracket table)", &s.a);
    write_matrix(out, "S (Hessian of H)", &s.s);
    write_matrix(out, "ω̲", &s.omega);
    if !s.brackets.is_empty() {
        let b: Vec<String> = s
            .brackets
            .iter()
            .map(|b| format!("{{{},{}}} = {}", b.left, b.right, b.value))
            .collect();
        let _ = writeln!(out, "  brackets: {}", b.join(", "));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if let Some(t) = &self.equations_text {
            let _ = writeln!(out, "equations:");
            for l in t.lines() {
                let _ = writeln!(out, "  {l}");
            }
        }
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "parameters: {}", p.join(", "));
        }
        if !self.variables.is_empty() {
            let _ = writeln!(out, "variables: ({})", self.variables.join(", "));
            write_matrix(&mut out, "M", &self.evolution_matrix);
        }
        if let Some(cp) = &self.char_poly {
            let _ = writeln!(out, "characteristic polynomial: {}", cp.display);
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(
                out,
                "Hamiltonian: {}{}",
                if v.hamiltonian { "yes" } else { "no" },
                v.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
            );
        }
        if let Some(s) = &self.factorization {
            let _ = writeln!(out, "factorization M = A·S:");
            write_structure(&mut out, s);
        }
        if let Some(e) = &self.equations {
            let _ = writeln!(out, "admissible: {}", if e.admissible { "yes" } else { "no" });
            for (t, m) in [("B1", &e.b1), ("B2", &e.b2), ("M_std", &e.m_std), ("Λ", &e.lambda)] {
                if let Some(m) = m {
                    write_matrix(&mut out, t, m);
                }
            }
        }
        if let Some(c) = &self.canonical {
            let _ = writeln!(out, "canonical form:");
            let _ = writeln!(out, "  H_can = {}", c.h_can);
            write_matrix(&mut out, "S1", &c.s1);
            write_matrix(&mut out, "S2", &c.s2);
            write_matrix(&mut out, "M_can", &c.m_can);
            write_matrix(&mut out, "P (M_std → M_can)", &c.p_link);
            let _ = writeln!(out, "semi-canonical pair:");
            write_structure(&mut out, &c.semi_canonical);
        }
        if let Some(l) = &self.lagrangian {
            let _ = writeln!(out, "Lagrangian: L = {}", l.lagrangian);
        }
        if let Some(p) = &self.potential {
            let _ = writeln!(out, "force: ({})", p.force.join(", "));
            if let Some(v) = &p.potential {
                let _ = writeln!(out, "  V = {v}");
            }
            if let Some(h) = &p.hamiltonian {
                let _ = writeln!(out, "  H = {h}");
            }
            if let Some(n) = &p.note {
                let _ = writeln!(out, "  {n}");
            }
        }
        if let Some(s) = &self.stability {
            let var = if s.even { "t²" } else { "t" };
            let _ = writeln!(out, "stability ({var} roots):");
            for m in &s.modes {
                let _ = writeln!(out, "  {var} = {:.12} {:+.12}i  {}", m.re, m.im, m.class);
            }
            if let Some(d) = &s.discriminant {
                let _ = writeln!(out, "  discriminant in t²: {d}");
            }
            let _ = writeln!(out, "  all modes oscillatory: {}", if s.all_oscillatory { "yes" } else { "no" });
        }
        if let Some(s) = &self.simulation {
            let _ = writeln!(
                out,
                "simulation: {} h={} t_end={} steps={}",
                s.method, s.h, s.t_end, s.steps
            );
            let _ = writeln!(out, "  final state: {:?}", s.final_state);
            if let Some(d) = s.drift {
                let _ = writeln!(out, "  relative drift of H: {d:.3e}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        f.write_str(out.trim_end())
    }
}
