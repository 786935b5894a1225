//! Built-in example systems.

use crate::expr::Bindings;
use crate::pipeline::{SimulationRequest, EXIT_NOT_HAMILTONIAN, EXIT_OK};
use crate::problem::ProblemSpec;
use hamiltonize::rational::{int, rat};
use hamiltonize::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    pub equations: &'static str,
    pub params: Vec<(&'static str, Rational)>,
    pub expected_exit: i32,
    pub simulation: SimulationRequest,
}

impl Demo {
    /// The demo problem with `overrides` applied on top of its defaults.
    pub fn spec(&self, overrides: &Bindings) -> ProblemSpec {
        let mut params: Bindings = self.params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        params.extend(overrides.clone());
        ProblemSpec::eom(self.equations, params)
    }
}

pub fn all() -> Vec<Demo> {
    let default_sim = SimulationRequest::default();
    vec![
        Demo {
            name: "damped",
            summary: "single damped oscillator",
            equations: "x'' + g*x' + x = 0",
            params: vec![("g", int(1))],
            expected_exit: EXIT_NOT_HAMILTONIAN,
            simulation: default_sim.clone(),
        },
        Demo {
            name: "bateman",
            summary: "damped/anti-damped oscillator pair with balanced loss and gain",
            equations: "x'' + g*x' + x = -l*y\ny'' - g*y' + y = -l*x",
            params: vec![("g", int(1)), ("l", rat(1, 2))],
            expected_exit: EXIT_OK,
            simulation: default_sim.clone(),
        },
        Demo {
            name: "dual",
            summary: "gyroscopically coupled pair, dual to the Bateman system",
            equations: "x'' + g*y' + x = -l*y\ny'' - g*x' + y = -l*x",
            params: vec![("g", int(1)), ("l", rat(1, 2))],
            expected_exit: EXIT_OK,
            simulation: default_sim.clone(),
        },
        Demo {
            name: "interaction",
            summary: "two cross-coupled Bateman pairs",
            equations: "x1'' + g1*x1' + x1 = -l1*x2 - l2*y2\n\
                        y1'' - g1*y1' + y1 = -l2*x2 - l1*y2\n\
                        x2'' + g2*x2' + x2 = -l1*x1 - l2*y1\n\
                        y2'' - g2*y2' + y2 = -l2*x1 - l1*y1",
            params: vec![("g1", int(1)), ("g2", rat(1, 2)), ("l1", rat(1, 3)), ("l2", rat(1, 4))],
            expected_exit: EXIT_OK,
            simulation: default_sim.clone(),
        },
        Demo {
            name: "henon-heiles",
            summary: "Hénon-Heiles force on the gyroscopic pair",
            equations: "x'' + g*y' + x = x^2 - y^2\ny'' - g*x' + y = -2*x*y",
            params: vec![("g", rat(1, 10))],
            expected_exit: EXIT_OK,
            simulation: SimulationRequest {
                h: 1e-3,
                t_end: 100.0,
                xi0: Some(vec![0.0, 0.0, 0.1, 0.1]),
            },
        },
    ]
}

pub fn find(name: &str) -> Option<Demo> {
    all().into_iter().find(|d| d.name == name)
}
