//! Floating-point verification layer: RK4 trajectories, conservation
//! checks and modal stability classification.
//!
//! Rationals are converted to the nearest `f64` once, on entry.

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::multipoly::MultiPoly;
use crate::poly::UniPoly;
use crate::potential::PolyField;
use crate::rational::{self, Rational};
use num_complex::Complex64;
use num_traits::Zero;
use std::fmt;
use std::io::{self, Write};

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub h: f64,
    pub method: &'static str,
}

impl Trajectory {
    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

struct CompiledPoly(Vec<(Vec<u32>, f64)>);

impl CompiledPoly {
    fn new(p: &MultiPoly) -> Self {
        Self(p.to_f64_terms())
    }

    fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(*c, |acc, (&d, x)| if d == 0 { acc } else { acc * x.powi(d as i32) })
            })
            .sum()
    }
}

struct Vectorfield {
    m: Vec<Vec<f64>>,
    force: Vec<CompiledPoly>,
    n: usize,
}

impl Vectorfield {
    fn eval(&self, xi: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.m) {
            *o = row.iter().zip(xi).map(|(a, b)| a * b).sum();
        }
        if !self.force.is_empty() {
            let x = &xi[self.n..];
            for (i, f) in self.force.iter().enumerate() {
                out[i] += f.eval(x);
            }
        }
    }
}

/// Classical RK4 on `ξ̇ = Mξ + (f(x); 0)` from `t = 0` to `t_end`.
///
/// The step is adjusted to `t_end / round(t_end / h)` so samples are uniform
/// and the last one lands on `t_end`.
pub fn simulate(m: &RatMatrix, f: Option<&PolyField>, xi0: &[f64], h: f64, t_end: f64) -> Result<Trajectory> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::InvalidArgument("evolution matrix must be square of even size".into()));
    }
    let dim = m.rows();
    if xi0.len() != dim {
        return Err(Error::DimensionMismatch {
            op: "simulate",
            left: m.shape(),
            right: (xi0.len(), 1),
        });
    }
    if !(h > 0.0 && h.is_finite() && t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument("h and t_end must be positive".into()));
    }
    let n = dim / 2;
    let force = match f {
        Some(f) if f.n() != n => {
            return Err(Error::DimensionMismatch {
                op: "simulate force",
                left: (n, 1),
                right: (f.n(), 1),
            })
        }
        Some(f) if !f.is_zero() => f.components().iter().map(CompiledPoly::new).collect(),
        _ => Vec::new(),
    };
    let field = Vectorfield {
        m: m.to_f64_rows(),
        force,
        n,
    };
    let steps = ((t_end / h).round() as usize).max(1);
    let h = t_end / steps as f64;

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut xi = xi0.to_vec();
    times.push(0.0);
    states.push(xi.clone());
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    for step in 1..=steps {
        field.eval(&xi, &mut k1);
        for i in 0..dim {
            tmp[i] = xi[i] + 0.5 * h * k1[i];
        }
        field.eval(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = xi[i] + 0.5 * h * k2[i];
        }
        field.eval(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = xi[i] + h * k3[i];
        }
        field.eval(&tmp, &mut k4);
        for i in 0..dim {
            xi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * h;
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { time: t });
        }
        times.push(t);
        states.push(xi.clone());
    }
    Ok(Trajectory {
        times,
        states,
        h,
        method: "rk4",
    })
}

/// `max_t |H(ξ(t)) - H(ξ(0))| / max(1, |H(ξ(0))|)`
pub fn observable_drift(traj: &Trajectory, h_poly: &MultiPoly) -> Result<f64> {
    let dim = traj.states.first().map_or(0, Vec::len);
    if h_poly.nvars() != dim {
        return Err(Error::InvalidArgument(format!(
            "observable has {} variables, state has {dim}",
            h_poly.nvars()
        )));
    }
    let hp = CompiledPoly::new(h_poly);
    let Some(first) = traj.states.first() else {
        return Ok(0.0);
    };
    let h0 = hp.eval(first);
    let scale = h0.abs().max(1.0);
    Ok(traj
        .states
        .iter()
        .map(|s| (hp.eval(s) - h0).abs() / scale)
        .fold(0.0, f64::max))
}

/// Observable values along the trajectory.
pub fn observable_series(traj: &Trajectory, h_poly: &MultiPoly) -> Vec<f64> {
    let hp = CompiledPoly::new(h_poly);
    traj.states.iter().map(|s| hp.eval(s)).collect()
}

/// CSV with header `t,<vars…>,H` and one row per sample.
pub fn write_csv<W: Write>(traj: &Trajectory, vars: &[String], h_poly: Option<&MultiPoly>, mut out: W) -> io::Result<()> {
    let mut header = vec!["t".to_string()];
    header.extend(vars.iter().cloned());
    if h_poly.is_some() {
        header.push("H".into());
    }
    writeln!(out, "{}", header.join(","))?;
    let hp = h_poly.map(CompiledPoly::new);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![t.to_string()];
        row.extend(s.iter().map(f64::to_string));
        if let Some(hp) = &hp {
            row.push(hp.eval(s).to_string());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeClass {
    Oscillatory,
    Growing,
    Decaying,
    Mixed,
    /// Root at zero (only reachable for singular input).
    Marginal,
}

impl fmt::Display for ModeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Oscillatory => "oscillatory",
            Self::Growing => "growing",
            Self::Decaying => "decaying",
            Self::Mixed => "mixed",
            Self::Marginal => "marginal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    /// `t²` for even characteristic polynomials, `t` otherwise.
    pub value: Complex64,
    pub class: ModeClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub char_poly: UniPoly,
    /// Whether the char poly is even; modes are then roots in `t²`.
    pub even: bool,
    /// Exact discriminant of the quadratic in `t²` (only for `2n = 4`).
    pub discriminant: Option<Rational>,
    pub modes: Vec<Mode>,
}

impl StabilityReport {
    pub fn all_oscillatory(&self) -> bool {
        self.even && self.modes.iter().all(|m| m.class == ModeClass::Oscillatory)
    }
}

const ROOT_TOL: f64 = 1e-9;

fn classify_square(u: Complex64) -> ModeClass {
    let scale = u.norm().max(1.0);
    if u.im.abs() > ROOT_TOL * scale {
        ModeClass::Mixed
    } else if u.re.abs() <= ROOT_TOL * scale {
        ModeClass::Marginal
    } else if u.re < 0.0 {
        ModeClass::Oscillatory
    } else {
        ModeClass::Growing
    }
}

fn classify_root(t: Complex64) -> ModeClass {
    let scale = t.norm().max(1.0);
    if t.re > ROOT_TOL * scale {
        ModeClass::Growing
    } else if t.re < -ROOT_TOL * scale {
        ModeClass::Decaying
    } else if t.im.abs() > ROOT_TOL * scale {
        ModeClass::Oscillatory
    } else {
        ModeClass::Marginal
    }
}

/// Roots of `u² + b·u + c` with cancellation-free formulas.
fn quadratic_roots(b: f64, c: f64, disc: f64) -> [Complex64; 2] {
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            return [Complex64::zero(), Complex64::zero()];
        }
        let (r1, r2) = (q, c / q);
        if r1 >= r2 {
            [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
        } else {
            [Complex64::new(r2, 0.0), Complex64::new(r1, 0.0)]
        }
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(-0.5 * b, im), Complex64::new(-0.5 * b, -im)]
    }
}

/// All complex roots of a real polynomial (ascending coefficients) by
/// Aberth-Ehrlich iteration.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| Complex64::new(v / lead, 0.0)).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Modal analysis of `ξ̇ = Mξ`.
pub fn stability(m: &RatMatrix) -> Result<StabilityReport> {
    let cp = m.char_poly()?;
    if let Some(q) = cp.even_part_in_square() {
        let (values, discriminant) = match q.degree() {
            Some(1) => (vec![Complex64::new(rational::to_f64(&-q.coeff(0)), 0.0)], None),
            Some(2) => {
                let (b, c) = (q.coeff(1), q.coeff(0));
                let disc = &b * &b - rational::int(4) * &c;
                let roots = quadratic_roots(rational::to_f64(&b), rational::to_f64(&c), rational::to_f64(&disc));
                (roots.to_vec(), Some(disc))
            }
            _ => (poly_roots(&q.to_f64_coeffs()), None),
        };
        let modes = values
            .into_iter()
            .map(|u| Mode {
                value: u,
                class: classify_square(u),
            })
            .collect();
        return Ok(StabilityReport {
            char_poly: cp,
            even: true,
            discriminant,
            modes,
        });
    }
    let modes = poly_roots(&cp.to_f64_coeffs())
        .into_iter()
        .map(|t| Mode {
            value: t,
            class: classify_root(t),
        })
        .collect();
    Ok(StabilityReport {
        char_poly: cp,
        even: false,
        discriminant: None,
        modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn oscillator() -> RatMatrix {
        RatMatrix::from_i64(&[&[0, -1], &[1, 0]])
    }

    #[test]
    fn harmonic_period() {
        let tr = simulate(&oscillator(), None, &[0.0, 1.0], 1e-3, 2.0 * std::f64::consts::PI).unwrap();
        let end = tr.last_state();
        assert!((end[0] - 0.0).abs() < 1e-10 && (end[1] - 1.0).abs() < 1e-10, "{end:?}");
        assert_eq!(tr.method, "rk4");
        assert_eq!(tr.times.len(), tr.states.len());
    }

    #[test]
    fn constant_observable_has_no_drift() {
        let tr = simulate(&oscillator(), None, &[0.3, 1.0], 1e-2, 10.0).unwrap();
        let c = MultiPoly::constant(vec!["p".into(), "x".into()], int(3));
        assert_eq!(observable_drift(&tr, &c).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_energy_drift() {
        let vars = vec!["p".to_string(), "x".to_string()];
        let h = MultiPoly::quadratic_form(vars, &RatMatrix::identity(2));
        let tr = simulate(&oscillator(), None, &[0.0, 1.0], 1e-3, 100.0).unwrap();
        let d = observable_drift(&tr, &h).unwrap();
        assert!(d <= 1e-10, "{d:e}");
    }

    #[test]
    fn damped_energy_decreases() {
        // ṗ = -p - x, ẋ = p; E = ½(p² + x²)
        let vars = vec!["p".to_string(), "x".to_string()];
        let e = MultiPoly::quadratic_form(vars, &RatMatrix::identity(2));
        let m = RatMatrix::from_i64(&[&[-1, -1], &[1, 0]]);
        let tr = simulate(&m, None, &[0.0, 1.0], 1e-2, 10.0).unwrap();
        let series = observable_series(&tr, &e);
        assert!(series.windows(2).all(|w| w[1] < w[0]));
        assert!(observable_drift(&tr, &e).unwrap() > 0.0);
    }

    #[test]
    fn blow_up_reports_time() {
        let m = RatMatrix::from_i64(&[&[400, 0], &[0, 400]]);
        match simulate(&m, None, &[1.0, 1.0], 0.1, 100.0) {
            Err(Error::NonFinite { time }) => assert!(time > 0.0 && time < 100.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(simulate(&oscillator(), None, &[1.0], 0.1, 1.0).is_err());
        assert!(simulate(&oscillator(), None, &[1.0, 0.0], -0.1, 1.0).is_err());
        assert!(simulate(&oscillator(), None, &[1.0, 0.0], 0.1, 0.0).is_err());
    }

    #[test]
    fn oscillator_stability() {
        let r = stability(&oscillator()).unwrap();
        assert!(r.even);
        assert_eq!(r.modes.len(), 1);
        assert_eq!(r.modes[0].value, Complex64::new(-1.0, 0.0));
        assert!(r.all_oscillatory());
    }

    #[test]
    fn damped_roots_decay() {
        let r = stability(&RatMatrix::from_i64(&[&[-1, -1], &[1, 0]])).unwrap();
        assert!(!r.even);
        assert_eq!(r.modes.len(), 2);
        assert!(r.modes.iter().all(|m| m.class == ModeClass::Decaying));
    }

    #[test]
    fn aberth_finds_known_roots() {
        // (u+1)(u+2)(u-3) = u³ - 7u - 6
        let mut roots = poly_roots(&[-6.0, -7.0, 0.0, 1.0]);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, e) in roots.iter().zip([-2.0, -1.0, 3.0]) {
            assert!((r.re - e).abs() < 1e-12 && r.im.abs() < 1e-12, "{r}");
        }
    }
}
