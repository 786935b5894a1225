use clap::{Args, Parser, Subcommand};
use hamiltonize::dynamics::write_csv;
use hamiltonize::SearchConfig;
use hamiltonize_cli::expr::{Bindings, ParseError};
use hamiltonize_cli::pipeline::{EXIT_NUMERIC, EXIT_OK, EXIT_PARSE};
use hamiltonize_cli::problem::{parse_binding, ProblemSpec};
use hamiltonize_cli::sweep::{parse_sweep, run_sweep};
use hamiltonize_cli::{demos, run, RunOptions, SimulationRequest, Stage};
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Decide whether linear (or polynomially forced) equations of motion are
/// Hamiltonian and construct the symplectic structure, canonical form and
/// Lagrangian.
#[derive(Parser, Debug)]
#[command(name = "hamiltonize", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the machine-readable report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write the simulated trajectory to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Seed for the invertible-member search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Integration step.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Integration horizon.
    #[arg(long = "t-end", global = true)]
    t_end: Option<f64>,
    /// Initial state (p…, x…), comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    xi0: Option<Vec<f64>>,
    /// Parameter binding `name=value`; repeatable.
    #[arg(long = "param", short = 'p', global = true, value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Also integrate the system and check conservation.
    #[arg(long, global = true)]
    simulate: bool,
    /// Run over `name=a:b:steps` and print one summary row per value.
    #[arg(long, global = true, value_name = "NAME=A:B:STEPS")]
    sweep: Option<String>,
}

#[derive(Args, Debug)]
struct Input {
    /// Equation text or matrix JSON file (`-` for stdin).
    file: Option<PathBuf>,
    /// Inline equations, `;` or newline separated.
    #[arg(long, short = 'e', conflicts_with = "file")]
    eom: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial and the Hamiltonian criterion.
    Check(Input),
    /// Factor M = A·S and print (H, ω).
    Factor(Input),
    /// Admissibility, (B1, B2) and the standard representative.
    Standardize(Input),
    /// Hamiltonian for the canonical symplectic form.
    Canonical(Input),
    /// Quadratic Lagrangian.
    Lagrangian(Input),
    /// Potential of the nonlinear force.
    Potential(Input),
    /// Full pipeline with an RK4 conservation check.
    Simulate(Input),
    /// Run a built-in example (`list` shows them).
    Demo { name: String },
}

fn read_input(input: &Input) -> Result<String, String> {
    match (&input.eom, &input.file) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some(p)) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s)
        }
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        (None, None) => Err("no input: give a FILE or --eom TEXT".into()),
    }
}

/// Writes one line to stdout, ignoring a closed pipe.
fn emit(line: impl std::fmt::Display) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn bindings(common: &Common) -> Result<Bindings, ParseError> {
    common.params.iter().map(|s| parse_binding(s)).collect()
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: Cli) -> Result<i32, (i32, String)> {
    let c = &cli.common;
    let params = bindings(c).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let (stage, spec, mut sim) = match &cli.command {
        Command::Demo { name } if name == "list" => {
            for d in demos::all() {
                emit(format_args!("{:<13} {}", d.name, d.summary));
            }
            return Ok(EXIT_OK);
        }
        Command::Demo { name } => {
            let demo = demos::find(name).ok_or_else(|| (EXIT_PARSE, format!("unknown demo `{name}`")))?;
            let sim = c.simulate.then(|| demo.simulation.clone());
            (Stage::Full, demo.spec(&params), sim)
        }
        cmd => {
            let (stage, input) = match cmd {
                Command::Check(i) => (Stage::Check, i),
                Command::Factor(i) => (Stage::Factor, i),
                Command::Standardize(i) => (Stage::Standardize, i),
                Command::Canonical(i) => (Stage::Canonical, i),
                Command::Lagrangian(i) => (Stage::Lagrangian, i),
                Command::Potential(i) => (Stage::Potential, i),
                Command::Simulate(i) => (Stage::Full, i),
                Command::Demo { .. } => unreachable!(),
            };
            let text = read_input(input).map_err(|e| (EXIT_PARSE, e))?;
            let spec = ProblemSpec::from_source(&text, params).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let simulate = c.simulate || matches!(cmd, Command::Simulate(_));
            let stage = if simulate { Stage::Full } else { stage };
            (stage, spec, simulate.then(SimulationRequest::default))
        }
    };
    if let Some(s) = sim.as_mut() {
        if let Some(h) = c.h {
            s.h = h;
        }
        if let Some(t) = c.t_end {
            s.t_end = t;
        }
        if let Some(x) = &c.xi0 {
            s.xi0 = Some(x.clone());
        }
    }
    let opts = RunOptions {
        stage,
        search: SearchConfig {
            seed: c.seed,
            ..SearchConfig::default()
        },
        simulation: sim,
    };

    if let Some(sw) = &c.sweep {
        let sweep = parse_sweep(sw).map_err(|e| (EXIT_PARSE, e.to_string()))?;
        let rows = run_sweep(&spec, &sweep, &opts);
        emit(format_args!("{:>12}  exit  hamiltonian  oscillatory  drift", sweep.param));
        let yn = |b: Option<bool>| b.map_or("-", |b| if b { "yes" } else { "no" });
        for r in &rows {
            let drift = r.drift.map_or("-".to_string(), |d| format!("{d:.3e}"));
            emit(format_args!(
                "{:>12}  {:>4}  {:>11}  {:>11}  {drift}",
                r.value,
                r.exit_code,
                yn(r.hamiltonian),
                yn(r.all_oscillatory)
            ));
        }
        if let Some(p) = &c.json {
            write_json(p, &rows).map_err(|e| (EXIT_NUMERIC, e))?;
        }
        return Ok(EXIT_OK);
    }

    let out = run(&spec, &opts);
    emit(&out.report);
    if let Some(p) = &c.json {
        write_json(p, &out.report).map_err(|e| (EXIT_NUMERIC, e))?;
    }
    if let (Some(p), Some(traj), Some(vars)) = (&c.csv, &out.trajectory, &out.vars) {
        let f = fs::File::create(p).map_err(|e| (EXIT_NUMERIC, format!("{}: {e}", p.display())))?;
        write_csv(traj, &vars.all(), out.observable.as_ref(), BufWriter::new(f))
            .map_err(|e| (EXIT_NUMERIC, format!("{}: {e}", p.display())))?;
    }
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE as u8 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
