//! One-parameter sweeps, evaluated in parallel with results in grid order.

use crate::expr::{normalize_name, parse_constant, Bindings, ParseError};
use crate::pipeline::{run, RunOptions};
use crate::problem::ProblemSpec;
use crate::report::rat_string;
use hamiltonize::Rational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub values: Vec<Rational>,
}

/// `name=a:b:steps`, i.e. `steps + 1` equally spaced exact values from `a` to `b`.
pub fn parse_sweep(s: &str) -> Result<SweepSpec, ParseError> {
    let bad = || ParseError::Input(format!("expected name=a:b:steps, got `{s}`"));
    let (name, range) = s.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [a, b, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let a = parse_constant(a, &Bindings::new())?;
    let b = parse_constant(b, &Bindings::new())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(ParseError::Input("a sweep needs at least one step".into()));
    }
    let width = &b - &a;
    let values = (0..=steps)
        .map(|k| &a + &width * Rational::new(k.into(), steps.into()))
        .collect();
    Ok(SweepSpec {
        param: normalize_name(name.trim()),
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: String,
    pub exit_code: i32,
    pub hamiltonian: Option<bool>,
    pub all_oscillatory: Option<bool>,
    pub drift: Option<f64>,
}

pub fn run_sweep(base: &ProblemSpec, sweep: &SweepSpec, opts: &RunOptions) -> Vec<SweepRow> {
    sweep
        .values
        .par_iter()
        .map(|v| {
            let mut spec = base.clone();
            spec.params.insert(sweep.param.clone(), v.clone());
            let out = run(&spec, opts);
            let r = &out.report;
            SweepRow {
                value: rat_string(v),
                exit_code: r.exit_code,
                hamiltonian: r.verdict.as_ref().map(|v| v.hamiltonian),
                all_oscillatory: r.stability.as_ref().map(|s| s.all_oscillatory),
                drift: r.simulation.as_ref().and_then(|s| s.drift),
            }
        })
        .collect()
}
