use std::io::Write;
use std::path::PathBuf;

use fracsys::energy::{classify, PowerParams, Regime};
use fracsys::solvers::{
    minimize_direct, mountain_pass_from, picard_sublinear, random_positive_start, solve_general,
    ReportSummary, SolverReport,
};
use fracsys::spectral::{io, SpectralField};
use fracsys::verify::{
    critical_sweep, hypothesis_gate, hypothesis_gate_nl, regularity_probe,
    uniqueness_harness_seeds, GateInput, HypothesisReport, RegularityProbe, Theorem,
};
use fracsys::Error;
use serde::Serialize;

use crate::artifacts::Staging;
use crate::config::{FieldFormat, InitKind, RunConfig, SolverName};
use crate::Failure;

/// Trims a number to at most six decimals for messages.
pub fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn solver_failure(e: Error) -> Failure {
    match e {
        Error::Refused { reason, violations } => Failure::Refused {
            message: reason,
            violations,
        },
        other => Failure::Solver(other.to_string()),
    }
}

/// Refuses exponent pairs that the chosen power solver cannot handle.
pub fn gate_power(solver: SolverName, params: &PowerParams<f64>) -> Result<(), Failure> {
    let class = classify(params);
    let needed = match solver {
        SolverName::Direct | SolverName::Picard => Regime::Sublinear,
        _ => Regime::SuperlinearSubcritical,
    };
    let (p, q) = (params.p, params.q);
    let mut violations = Vec::new();
    if class.regime != needed {
        let cmp = if class.hyperbola_value < class.threshold {
            "<"
        } else if class.hyperbola_value > class.threshold {
            ">"
        } else {
            "="
        };
        violations.push(format!("regime is {}, solver needs {needed}", class.regime));
        violations.push(format!("pq = {}", short(params.pq())));
        violations.push(format!(
            "1/(p+1) + 1/(q+1) = 1/{} + 1/{} = {} {cmp} (n-2s)/n = {}",
            short(p + 1.0),
            short(q + 1.0),
            short(class.hyperbola_value),
            short(class.threshold)
        ));
    }
    if solver == SolverName::MountainPass && p > 1.0 {
        violations.push(format!("p = {} exceeds 1", short(p)));
    }
    if violations.is_empty() {
        return Ok(());
    }
    Err(Failure::Refused {
        message: format!(
            "{} solver refuses (p, q) = ({}, {}) with n = {}, s = {}: the pair is {}",
            solver_label(solver),
            short(p),
            short(q),
            params.n,
            short(params.s),
            class.regime
        ),
        violations,
    })
}

fn solver_label(s: SolverName) -> &'static str {
    match s {
        SolverName::Direct => "direct",
        SolverName::Picard => "picard",
        SolverName::MountainPass => "mountain-pass",
        SolverName::General => "general",
    }
}

#[derive(Serialize)]
struct FileRefs {
    u: String,
    v: String,
    trace: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    config: &'a RunConfig,
    summary: ReportSummary,
    hypotheses: HypothesisReport,
    regularity: RegularityProbe,
    files: FileRefs,
}

pub struct Outcome {
    pub converged: bool,
    pub out: PathBuf,
    pub line: String,
}

fn solve(config: &RunConfig) -> Result<(SolverReport<f64>, HypothesisReport), Failure> {
    config.check_shape()?;
    let basis = config.basis()?;
    let opts = config.options()?;
    let (s, p) = (config.params.s, config.params.p);
    if config.solver == SolverName::General {
        let nl = config.nonlinearity()?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Failure::Refused {
                message: "general solver needs 0 < p <= 1".into(),
                violations: vec![format!("p = {}", short(p))],
            });
        }
        let window = hypothesis_gate(Theorem::T1, basis.dim(), s, p, GateInput::None);
        if !window.satisfied {
            return Err(Failure::Refused {
                message: "parameters lie outside the existence window".into(),
                violations: window.violation_list(),
            });
        }
        let report = solve_general(&basis, &nl, p, s, &opts).map_err(solver_failure)?;
        return Ok((report, hypothesis_gate_nl(basis.dim(), s, p, &nl)));
    }
    let params = config.power_params()?;
    gate_power(config.solver, &params)?;
    let init = match config.init {
        InitKind::GroundState => SpectralField::ground_state(&basis),
        InitKind::Random => random_positive_start(&basis, s, opts.seed),
    };
    let report = match config.solver {
        SolverName::Direct => minimize_direct(&params, &init, &opts),
        SolverName::Picard => picard_sublinear(&params, &init, &opts),
        _ => mountain_pass_from(&params, &init, &opts),
    }
    .map_err(solver_failure)?;
    let hyp = hypothesis_gate(Theorem::T2, params.n, s, p, GateInput::Q(params.q));
    Ok((report, hyp))
}

fn write_field(
    st: &mut Staging,
    name: &str,
    field: &SpectralField<f64>,
    format: FieldFormat,
) -> Result<(), Failure> {
    st.write(name, |w| {
        match format {
            FieldFormat::Csv => io::write_csv(field, w),
            FieldFormat::Binary => io::write_binary(field, w),
        }
        .map_err(|e| Failure::Io(e.to_string()))
    })
}

pub fn run(config: &RunConfig, out: PathBuf) -> Result<Outcome, Failure> {
    let (report, hypotheses) = solve(config)?;
    let s = config.params.s;
    let regularity = regularity_probe(&report.u, s).map_err(solver_failure)?;
    let ext = config.field_format.extension();
    let files = FileRefs {
        u: format!("u.{ext}"),
        v: format!("v.{ext}"),
        trace: "trace.csv".into(),
    };
    let summary = report.summary(s);
    let line = format!(
        "{}: {} after {} iterations, energy {}, residual {:.3e}",
        report.solver,
        if report.converged { "converged" } else { "not converged" },
        report.iterations,
        report.energy,
        report.residual()
    );
    let mut st = Staging::new(&out)?;
    write_field(&mut st, &files.u, &report.u, config.field_format)?;
    write_field(&mut st, &files.v, &report.v, config.field_format)?;
    st.write(&files.trace, |w| {
        report
            .write_trace_csv(w)
            .map_err(|e| Failure::Io(e.to_string()))
    })?;
    let doc = RunReport {
        config,
        summary,
        hypotheses,
        regularity,
        files,
    };
    st.write("report.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &doc).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(w).map_err(|e| Failure::Io(e.to_string()))
    })?;
    let out = st.commit()?;
    Ok(Outcome {
        converged: report.converged,
        out,
        line,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Q(Vec<f64>),
    Seed(Vec<u64>),
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(arg: &str) -> Result<Self, String> {
        let (name, values) = arg
            .split_once('=')
            .ok_or_else(|| format!("axis {arg:?} is not of the form name=v1,v2,..."))?;
        let items: Vec<&str> = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .collect();
        match name.trim() {
            "q" => items
                .iter()
                .map(|v| match v.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(x),
                    _ => Err(format!("bad q value {v:?}")),
                })
                .collect::<Result<_, _>>()
                .map(Axis::Q),
            "seed" => items
                .iter()
                .map(|v| v.parse::<u64>().map_err(|_| format!("bad seed {v:?}")))
                .collect::<Result<_, _>>()
                .map(Axis::Seed),
            other => Err(format!("unknown sweep axis {other:?} (expected q or seed)")),
        }
    }
}

pub fn sweep(config: &RunConfig, axis: &Axis, out: PathBuf) -> Result<Outcome, Failure> {
    let basis = config.basis()?;
    let opts = config.options()?;
    let (ok, line, st) = match axis {
        Axis::Q(qs) => {
            // q comes from the axis; any value in the config is ignored
            let base = config.power_params_with_q(1.0)?;
            let table = critical_sweep(&basis, &base, qs, &opts).map_err(solver_failure)?;
            let mut st = Staging::new(&out)?;
            st.write("sweep.csv", |w| {
                table.write_csv(w).map_err(|e| Failure::Io(e.to_string()))
            })?;
            let done = table.rows.iter().filter(|r| r.converged).count();
            (
                table.all_converged(),
                format!("q sweep: {done} of {} runs converged", table.rows.len()),
                st,
            )
        }
        Axis::Seed(seeds) => {
            let params = config.power_params()?;
            let report =
                uniqueness_harness_seeds(&basis, &params, seeds, &opts).map_err(solver_failure)?;
            let mut st = Staging::new(&out)?;
            st.write("uniqueness.csv", |w| {
                report.write_csv(w).map_err(|e| Failure::Io(e.to_string()))
            })?;
            st.write("uniqueness.json", |w| {
                serde_json::to_writer_pretty(&mut *w, &report)
                    .map_err(|e| Failure::Io(e.to_string()))?;
                writeln!(w).map_err(|e| Failure::Io(e.to_string()))
            })?;
            (
                report.passed,
                format!(
                    "seed sweep: {} runs, spread {:.3e}, {}",
                    report.runs.len(),
                    report.spread,
                    if report.passed { "unique" } else { "not confirmed" }
                ),
                st,
            )
        }
    };
    let out = st.commit()?;
    Ok(Outcome {
        converged: ok,
        out,
        line,
    })
}
