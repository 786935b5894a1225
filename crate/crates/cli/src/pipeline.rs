use crate::problem::{ProblemSpec, ResolvedSystem};
use crate::report::*;
use hamiltonize::canonicalizer::{build_canonical, build_lagrangian, semi_canonical_pair, solve_s1};
use hamiltonize::criterion::is_hamiltonian_candidate;
use hamiltonize::dynamics::{observable_drift, simulate, stability, Trajectory};
use hamiltonize::factorization::{factor, to_structure, ASPair};
use hamiltonize::potential::integrate_potential;
use hamiltonize::reduction::{extract_eom, is_admissible, standardize, BlockSystem};
use hamiltonize::{Error, MultiPoly, PhaseVars, RatMatrix, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_HAMILTONIAN: i32 = 2;
pub const EXIT_NOT_ADMISSIBLE: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

/// How far to run. Later stages include the earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Check,
    Factor,
    Standardize,
    Canonical,
    Lagrangian,
    Potential,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationRequest {
    pub h: f64,
    pub t_end: f64,
    /// Defaults to zero momenta and all positions at `0.1`.
    pub xi0: Option<Vec<f64>>,
}

impl Default for SimulationRequest {
    fn default() -> Self {
        Self {
            h: 1e-3,
            t_end: 100.0,
            xi0: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub stage: Stage,
    pub search: SearchConfig,
    pub simulation: Option<SimulationRequest>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            stage: Stage::Full,
            search: SearchConfig::default(),
            simulation: None,
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub vars: Option<PhaseVars>,
    pub trajectory: Option<Trajectory>,
    /// The conserved quantity used for the drift check.
    pub observable: Option<MultiPoly>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

fn empty_report(spec: &ProblemSpec) -> Report {
    Report {
        equations_text: None,
        params: spec.params.iter().map(|(k, v)| (k.clone(), rat_string(v))).collect(),
        variables: Vec::new(),
        evolution_matrix: MatrixOut {
            exact: Vec::new(),
            float: Vec::new(),
        },
        char_poly: None,
        verdict: None,
        factorization: None,
        equations: None,
        canonical: None,
        lagrangian: None,
        potential: None,
        stability: None,
        simulation: None,
        notes: Vec::new(),
        error: None,
        exit_code: EXIT_OK,
    }
}

fn structure_out(pair: &ASPair, m: &RatMatrix, vars: &PhaseVars) -> Result<StructureOut, Error> {
    let st = to_structure(pair, m, vars)?;
    Ok(StructureOut {
        a: (&pair.a).into(),
        s: (&pair.s).into(),
        hamiltonian: poly_string(&st.h),
        two_form: st.omega_display(vars),
        omega: (&st.omega).into(),
        brackets: st
            .nonzero_brackets(vars)
            .into_iter()
            .map(|(left, right, v)| Bracket {
                left,
                right,
                value: rat_string(&v),
            })
            .collect(),
    })
}

fn fail(mut out: Outcome, code: i32, msg: impl Into<String>) -> Outcome {
    out.report.exit_code = code;
    out.report.error = Some(msg.into());
    out
}

/// Criterion, factorization, reduction, canonical form, Lagrangian,
/// potential, stability and (optionally) simulation, stopping at the first
/// failure with everything computed so far kept in the report.
pub fn run(spec: &ProblemSpec, opts: &RunOptions) -> Outcome {
    let mut out = Outcome {
        report: empty_report(spec),
        vars: None,
        trajectory: None,
        observable: None,
    };
    let sys = match spec.resolve() {
        Ok(s) => s,
        Err(e) => return fail(out, EXIT_PARSE, e.to_string()),
    };
    run_resolved(&sys, opts, &mut out);
    out
}

fn bail(r: &mut Report, code: i32, msg: String) {
    r.exit_code = code;
    r.error = Some(msg);
}

fn run_resolved(sys: &ResolvedSystem, opts: &RunOptions, out: &mut Outcome) {
    out.vars = Some(sys.vars.clone());
    let r = &mut out.report;
    let vars = &sys.vars;
    let m = &sys.m;
    r.equations_text = sys.rendered();
    r.variables = vars.all();
    r.evolution_matrix = m.into();

    let cp = match m.char_poly() {
        Ok(cp) => cp,
        Err(e) => return bail(r, EXIT_PARSE, e.to_string()),
    };
    r.char_poly = Some((&cp).into());
    let even = cp.is_even();
    let verdict = match is_hamiltonian_candidate(m) {
        Ok(v) => Ok(v),
        Err(e @ (Error::SingularM | Error::OddDimension(_))) => Err(e.to_string()),
        Err(e) => return bail(r, EXIT_PARSE, e.to_string()),
    };
    let (hamiltonian, reason) = match verdict {
        Ok(true) => (true, None),
        Ok(false) if !even => (false, Some("characteristic polynomial has odd terms".to_string())),
        Ok(false) => (false, Some("M is not similar to -M".to_string())),
        Err(msg) => (false, Some(msg)),
    };
    r.verdict = Some(Verdict {
        hamiltonian,
        even_char_poly: even,
        reason: reason.clone(),
    });
    if !hamiltonian {
        return bail(r, EXIT_NOT_HAMILTONIAN, reason.unwrap_or_default());
    }
    if opts.stage == Stage::Check {
        return;
    }

    let fac = match factor(m, &opts.search) {
        Ok(f) => f,
        Err(Error::NotHamiltonian) => {
            return bail(r, EXIT_NOT_HAMILTONIAN, "no invertible symmetric factor".into())
        }
        Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
    };
    match structure_out(&fac.pair, m, vars) {
        Ok(s) => r.factorization = Some(s),
        Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
    }
    if fac.solution_space_dim > 1 {
        r.notes.push(format!(
            "the compatible symmetric factors form a {}-dimensional space; one invertible member is shown",
            fac.solution_space_dim
        ));
    }
    if opts.stage == Stage::Factor {
        return;
    }

    let block = BlockSystem::new(m.clone()).expect("criterion checked an even square matrix");
    if !is_admissible(&block) {
        r.equations = Some(EquationsOut {
            admissible: false,
            b1: None,
            b2: None,
            m_std: None,
            lambda: None,
        });
        return bail(r, EXIT_NOT_ADMISSIBLE, Error::SingularM21.to_string());
    }
    let (eom, st) = match (extract_eom(&block), standardize(&block)) {
        (Ok(e), Ok(s)) => (e, s),
        (Err(e), _) | (_, Err(e)) => return bail(r, EXIT_NOT_ADMISSIBLE, e.to_string()),
    };
    r.equations = Some(EquationsOut {
        admissible: true,
        b1: Some((&eom.b1).into()),
        b2: Some((&eom.b2).into()),
        m_std: Some((&st.m_std).into()),
        lambda: Some((&st.lambda.matrix()).into()),
    });
    if opts.stage == Stage::Standardize {
        return;
    }

    let s1 = match solve_s1(&eom, &opts.search) {
        Ok(s1) => Some(s1),
        Err(Error::NoCanonicalForm) => {
            r.notes.push(
                "no symmetric invertible S1 with S1·B1 alternating and S1·B2 symmetric; canonical form unavailable"
                    .into(),
            );
            None
        }
        Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
    };
    let semi = match &s1 {
        Some(s1) => {
            let built = build_canonical(&eom, s1, vars).and_then(|c| {
                let pair = semi_canonical_pair(&eom, s1)?;
                let semi = structure_out(&pair, &st.m_std, vars)?;
                Ok((c, pair, semi))
            });
            match built {
                Ok((c, pair, semi)) => {
                    r.canonical = Some(CanonicalOut {
                        s1: (&c.s1).into(),
                        s2: (&c.s2).into(),
                        h_can: poly_string(&c.h_can),
                        h_can_matrix: (&c.h_can_matrix).into(),
                        m_can: (&c.m_can).into(),
                        p_link: (&c.p_link.matrix()).into(),
                        semi_canonical: semi,
                    });
                    Some(pair)
                }
                Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
            }
        }
        None => None,
    };
    if opts.stage == Stage::Canonical {
        return;
    }

    if let Some(s1) = &s1 {
        match build_lagrangian(&eom, s1, vars) {
            Ok(l) => {
                r.lagrangian = Some(LagrangianOut {
                    lagrangian: poly_string(&l.l),
                    kinetic: (&l.kinetic).into(),
                    cross: (&l.cross).into(),
                    potential: (&l.potential).into(),
                })
            }
            Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
        }
    }
    if opts.stage == Stage::Lagrangian {
        return;
    }

    // The conserved quantity along ξ̇ = Mξ + (f; 0).
    let mut observable = None;
    if let Some(force) = sys.force() {
        let mut p = PotentialOut {
            force: force.components().iter().map(poly_string).collect(),
            potential: None,
            hamiltonian: None,
            note: None,
        };
        match (&semi, &s1) {
            (Some(pair), Some(s1)) => match force.transform(s1).and_then(|g| integrate_potential(&g)) {
                Ok(v) => {
                    let h = &MultiPoly::quadratic_form(vars.all(), &pair.s) + &v.embed(vars.all(), vars.n());
                    p.potential = Some(poly_string(&v));
                    p.hamiltonian = Some(poly_string(&h));
                    observable = Some(h);
                }
                Err(Error::NotConservative) => {
                    p.note = Some("S1·f is not a gradient; the nonlinear system is not covered".into());
                    r.potential = Some(p);
                    return bail(r, EXIT_NOT_HAMILTONIAN, Error::NotConservative.to_string());
                }
                Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
            },
            _ => p.note = Some("a potential needs the semi-canonical pair, which is unavailable".into()),
        }
        r.potential = Some(p);
    } else {
        observable = Some(MultiPoly::quadratic_form(vars.all(), &fac.pair.s));
    }
    if opts.stage == Stage::Potential {
        return;
    }

    match stability(m) {
        Ok(s) => r.stability = Some((&s).into()),
        Err(e) => return bail(r, EXIT_NUMERIC, e.to_string()),
    }

    let Some(req) = &opts.simulation else {
        return;
    };
    let dim = m.rows();
    let xi0 = req
        .xi0
        .clone()
        .unwrap_or_else(|| (0..dim).map(|i| if i < dim / 2 { 0.0 } else { 0.1 }).collect());
    let traj = match simulate(m, sys.force(), &xi0, req.h, req.t_end) {
        Ok(t) => t,
        Err(e @ Error::NonFinite { .. }) => return bail(r, EXIT_NUMERIC, e.to_string()),
        Err(e) => return bail(r, EXIT_PARSE, e.to_string()),
    };
    let drift = observable.as_ref().map(|h| observable_drift(&traj, h).expect("observable over phase variables"));
    r.simulation = Some(SimulationOut {
        method: traj.method.to_string(),
        h: traj.h,
        t_end: req.t_end,
        steps: traj.times.len() - 1,
        xi0,
        final_state: traj.last_state().to_vec(),
        observable: observable.as_ref().map(poly_string),
        drift,
    });
    out.trajectory = Some(traj);
    out.observable = observable;
}
