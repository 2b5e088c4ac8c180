use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use fracroot::ensemble::format_real;
use fracroot::numeric::{format_complex, parse_complex_list, Polynomial};
use fracroot::presets::example;
use fracroot::solvers::{coc_from_trace, max_root_error, run_solver, Method, SolverParams, Status};
use fracroot::tuning::{adaptive_solve, Watch};
use fracroot::C64;

use crate::{default_out, parse_list, Diverged, UsageError};

/// Errors at or below this are treated as rounding noise by the COC estimate.
const COC_FLOOR: f64 = 1e-13;

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    example: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Starting vector, comma-separated complex values (e.g. "1.01,-0.5+0.87i,-0.5-0.87i").
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Start from the example's base vector for this case instead of --x0.
    #[arg(long, conflicts_with = "x0")]
    case: Option<u32>,
    /// Known roots for error and COC reporting; examples supply their own.
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
    #[arg(long, default_value = "INVM")]
    method: Method,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Switch among these alpha values when the step norms start growing (INVM only).
    #[arg(long, allow_hyphen_values = true)]
    adaptive: Option<String>,
    /// Trace CSV path [default: <out>/trace.csv].
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, env = "FRACROOT_OUT")]
    out: Option<PathBuf>,
}

struct Problem {
    f: Polynomial<f64>,
    x0: Vec<C64>,
    roots: Option<Vec<C64>>,
}

fn resolve(a: &SolveArgs) -> Result<Problem> {
    let preset = match a.example {
        Some(id) => Some(example(id).map_err(UsageError::from)?),
        None => None,
    };
    let f = match (&a.poly, preset) {
        (Some(p), _) => Polynomial::parse(p).map_err(UsageError::from)?,
        (None, Some(ex)) => ex.polynomial(),
        (None, None) => return Err(UsageError::msg("give --example or --poly").into()),
    };
    let x0 = match (&a.x0, a.case, preset) {
        (Some(s), _, _) => parse_complex_list(s).map_err(UsageError::from)?,
        (None, Some(c), Some(ex)) => ex.base(c).map_err(UsageError::from)?,
        _ => return Err(UsageError::msg("give --x0, or --case together with --example").into()),
    };
    if x0.len() != f.degree() {
        return Err(UsageError::msg(format!(
            "starting vector has {} components but the polynomial has degree {}",
            x0.len(),
            f.degree()
        ))
        .into());
    }
    let roots = match (&a.roots, preset) {
        (Some(s), _) => Some(parse_complex_list(s).map_err(UsageError::from)?),
        (None, Some(ex)) if a.poly.is_none() => Some(ex.roots()),
        _ => None,
    };
    Ok(Problem { f, x0, roots })
}

pub fn run(a: SolveArgs) -> Result<()> {
    let prob = resolve(&a)?;
    let params = SolverParams::new(a.alpha, a.beta)
        .with_max_iters(a.max_iters)
        .with_tol(a.tol);
    params.validate().map_err(UsageError::from)?;
    let candidates = match &a.adaptive {
        Some(s) => {
            if a.method != Method::Invm {
                return Err(UsageError::msg("--adaptive applies to INVM only").into());
            }
            Some(parse_list(s)?)
        }
        None => None,
    };
    let trace_path = a
        .trace
        .clone()
        .unwrap_or_else(|| a.out.clone().unwrap_or_else(default_out).join("trace.csv"));

    let start = Instant::now();
    let (trace, switches) = match &candidates {
        Some(c) => {
            let out = adaptive_solve(&prob.f, &prob.x0, &params, c, &Watch::default())?;
            (out.trace, out.switches)
        }
        None => (run_solver(&prob.f, &prob.x0, &params, a.method)?, Vec::new()),
    };
    let elapsed = start.elapsed();

    if let Some(dir) = trace_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = std::io::BufWriter::new(
        fs::File::create(&trace_path).with_context(|| format!("writing {}", trace_path.display()))?,
    );
    writeln!(w, "k,s_k,r_k")?;
    for (k, (s, r)) in trace.step_norms.iter().zip(&trace.residual_norms).enumerate() {
        writeln!(w, "{k},{},{}", format_real(*s), format_real(*r))?;
    }
    w.flush()?;

    let status = match trace.status {
        Status::Converged => "converged",
        Status::MaxItersReached => "max_iters_reached",
        Status::Diverged => "diverged",
    };
    println!("method {}  alpha {}  beta {}", a.method, a.alpha, a.beta);
    println!("status {status}");
    println!("iterations {}", trace.iterations_used);
    if let Some(r) = trace.final_residual() {
        println!("final residual {r:e}");
    }
    let x = trace.final_iterate();
    for (i, xi) in x.iter().enumerate() {
        println!("x[{i}] = {}  |f| = {:e}", format_complex(*xi), prob.f.eval(*xi).norm());
    }
    if let Some(roots) = &prob.roots {
        println!("max root error {:e}", max_root_error(x, roots));
    }
    let source = if prob.roots.is_some() {
        "root errors"
    } else {
        "residuals"
    };
    match coc_from_trace(&trace, prob.roots.as_deref(), COC_FLOOR) {
        Ok(q) => println!("coc {q:.4} (from {source})"),
        Err(_) => println!("coc n/a (too few admissible {source})"),
    }
    for s in &switches {
        println!("alpha switch after iteration {}: {} -> {}", s.iteration, s.from, s.to);
    }
    println!("wall time {:.3} ms", elapsed.as_secs_f64() * 1e3);
    println!("trace {}", trace_path.display());
    if trace.status == Status::Diverged {
        eprintln!("error: solver diverged");
        return Err(Diverged.into());
    }
    Ok(())
}
