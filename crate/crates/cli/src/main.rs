//! `qpcheck`: evaluate sigma/theta expressions, count and locate zeros, and
//! verify quasi-periodic identities from the command line.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use qpcheck_core::contour::Parallelogram;
use qpcheck_core::literal::{format_complex, parse_complex};
use qpcheck_core::qp::{
    eval_expr, eval_linform, parse_linform, parse_with, Bindings, BoundExpr, EvalContext,
    ParseOptions,
};
use qpcheck_core::verifier::{
    builtin_catalog, default_contexts, find_builtin, run_suite, verify, Body, IdentitySpec,
    VerificationReport, VerifyParams,
};
use qpcheck_core::{
    choose_admissible_base, lattice_new, locate_zeros, winding_count, Error, TauNome,
    WindingOptions,
};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qpcheck",
    version,
    about = "Verify functional equations between theta and sigma functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at bound symbols.
    Eval(EvalArgs),
    /// Verify a built-in or user identity.
    Verify(VerifyArgs),
    /// Count and locate zeros of an expression in a period cell.
    Zeros(ZerosArgs),
    /// Run the built-in catalog over several lattices.
    Suite(SuiteArgs),
    /// List the built-in identities.
    List,
}

#[derive(Args, Clone)]
struct CtxArgs {
    /// Nome parameter; enough for theta expressions.
    #[arg(long, conflicts_with_all = ["omega1", "omega3"])]
    tau: Option<String>,
    #[arg(long, requires = "omega3")]
    omega1: Option<String>,
    #[arg(long, requires = "omega1")]
    omega3: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    /// Name of the distinguished variable.
    #[arg(long, default_value = "z")]
    var: String,
    /// Symbol binding `name=value`; repeatable.
    #[arg(long = "bind")]
    binds: Vec<String>,
    #[command(flatten)]
    ctx: CtxArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "expr")]
    builtin: Option<String>,
    #[arg(long, requires_all = ["gen1", "gen2"])]
    expr: Option<String>,
    #[arg(long, default_value = "z")]
    var: String,
    #[arg(long)]
    gen1: Option<String>,
    #[arg(long)]
    gen2: Option<String>,
    /// Exhibited zero in the variable; repeatable.
    #[arg(long = "candidate")]
    candidates: Vec<String>,
    #[command(flatten)]
    ctx: CtxArgs,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, default_value = "z")]
    var: String,
    /// `auto` or a complex base point.
    #[arg(long, default_value = "auto")]
    base: String,
    #[arg(long)]
    gen1: String,
    #[arg(long)]
    gen2: String,
    #[arg(long = "bind")]
    binds: Vec<String>,
    #[command(flatten)]
    ctx: CtxArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Cell diameter at which subdivision stops.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    json: Option<PathBuf>,
    /// Lattice as `omega1,omega3`; repeatable. Defaults to three built-in lattices.
    #[arg(long = "ctx")]
    ctxs: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    tol: Option<f64>,
}

/// Failures that map to the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

type CliResult = Result<u8, Usage>;

fn complex(text: &str) -> Result<C64, Usage> {
    Ok(parse_complex(text)?)
}

fn context(args: &CtxArgs) -> Result<Option<EvalContext>, Usage> {
    match (&args.tau, &args.omega1, &args.omega3) {
        (Some(t), _, _) => Ok(Some(EvalContext::Nome(TauNome::new(complex(t)?)?))),
        (None, Some(w1), Some(w3)) => Ok(Some(EvalContext::Lattice(lattice_new(
            complex(w1)?,
            complex(w3)?,
        )?))),
        _ => Ok(None),
    }
}

fn required_context(args: &CtxArgs) -> Result<EvalContext, Usage> {
    context(args)?.ok_or_else(|| Usage("give --tau or --omega1/--omega3".into()))
}

fn bindings(binds: &[String]) -> Result<Bindings, Usage> {
    let mut out = Bindings::new();
    for b in binds {
        let (name, value) = b
            .split_once('=')
            .ok_or_else(|| Usage(format!("binding `{b}` is not name=value")))?;
        out.insert(name.trim().to_string(), complex(value)?);
    }
    Ok(out)
}

fn write_json(path: &Path, text: &str) -> Result<(), Usage> {
    if path == Path::new("-") {
        println!("{text}");
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> CliResult {
    let ctx = required_context(&a.ctx)?;
    let expr = parse_with(&a.expr, &ParseOptions::with_variable(&a.var))?;
    let s = eval_expr(&expr, &bindings(&a.binds)?, &ctx)?;
    println!("value {}", format_complex(s.value));
    println!("scale {:e}", s.scale);
    Ok(0)
}

fn print_report(r: &VerificationReport) {
    println!("identity     {}", r.identity);
    for m in &r.multipliers {
        match (&m.alpha, &m.beta, &m.scalar) {
            (Some(alpha), Some(beta), Some(scalar)) => {
                println!(
                    "multiplier   {}: scalar={scalar} alpha={alpha} beta={beta}",
                    m.generator
                )
            }
            _ => println!(
                "multiplier   {}: mismatch ({})",
                m.generator,
                m.detail.as_deref().unwrap_or("")
            ),
        }
    }
    if let Some(n) = &r.predicted_n {
        println!("predicted N  {}", n.0);
    }
    for z in &r.zeros {
        println!(
            "candidate    {}: symbolic={} residual={:.2e}",
            z.candidate, z.symbolic, z.residual
        );
    }
    if !r.zeros.is_empty() {
        println!("zero excess  {}", r.zero_excess);
    }
    for rel in &r.relations {
        println!(
            "relation     {}: {:.2e} (tol {:.0e})",
            rel.relation, rel.max_rel, rel.tolerance
        );
    }
    println!(
        "residual     {:.2e} over {} samples (seed {}, {} redrawn)",
        r.residuals.max_rel, r.residuals.samples, r.residuals.seed, r.residuals.rejected
    );
    if let Some(c) = &r.confirmation {
        println!(
            "confirmed    {:.2e} over {} samples (seed {})",
            c.max_rel, c.samples, c.seed
        );
    }
    for n in &r.notes {
        println!("note         {n}");
    }
    println!("verdict      {}", r.verdict);
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let spec = match (&a.builtin, &a.expr) {
        (Some(name), None) => find_builtin(name)?,
        (None, Some(expr)) => {
            let (g1, g2) = (
                a.gen1.as_deref().unwrap_or_default(),
                a.gen2.as_deref().unwrap_or_default(),
            );
            let cands: Vec<&str> = a.candidates.iter().map(String::as_str).collect();
            IdentitySpec::functional("user", expr, &a.var, (g1, g2), &cands)?
        }
        _ => return Err(Usage("give --builtin or --expr".into())),
    };
    let ctx = match context(&a.ctx)? {
        Some(c) => c,
        None => default_contexts()[0],
    };
    let params = VerifyParams {
        seed: a.seed,
        samples: a.samples,
        tol: a.tol,
    };
    let report = verify(&spec, &ctx, &params)?;
    match &a.json {
        Some(p) if p == Path::new("-") => write_json(p, &report.to_json())?,
        Some(p) => {
            write_json(p, &report.to_json())?;
            print_report(&report);
        }
        None => print_report(&report),
    }
    Ok(report.verdict.exit_code() as u8)
}

fn cmd_zeros(a: ZerosArgs) -> CliResult {
    let ctx = required_context(&a.ctx)?;
    let opts = ParseOptions::with_variable(&a.var);
    let expr = parse_with(&a.expr, &opts)?;
    let binds = bindings(&a.binds)?;
    let l1 = eval_linform(&parse_linform(&a.gen1, &opts)?, &binds, &ctx)?;
    let l2 = eval_linform(&parse_linform(&a.gen2, &opts)?, &binds, &ctx)?;
    let f = BoundExpr::new(expr, binds, ctx);
    let base = if a.base == "auto" {
        choose_admissible_base(&f, l1, l2, a.seed)?
    } else {
        complex(&a.base)?
    };
    let cell = Parallelogram::new(base, l1, l2)?;
    let cert = winding_count(&f, &cell, &WindingOptions::default())?;
    println!("base {}", format_complex(base));
    println!(
        "winding {} (min |f| on boundary {:.3e}, max phase step {:.3}, {} samples)",
        cert.winding, cert.min_abs_on_boundary, cert.max_phase_step, cert.samples_used
    );
    if cert.winding < 0 {
        return Err(Usage(
            "negative winding: the expression is not entire in the variable".into(),
        ));
    }
    for z in locate_zeros(&f, &cell, cert.winding, a.tol)? {
        println!(
            "zero {} multiplicity {}",
            format_complex(z.zero),
            z.multiplicity
        );
    }
    Ok(0)
}

fn cmd_suite(a: SuiteArgs) -> CliResult {
    let ctxs = if a.ctxs.is_empty() {
        default_contexts()
    } else {
        a.ctxs
            .iter()
            .map(|c| {
                let (w1, w3) = c
                    .split_once(',')
                    .ok_or_else(|| Usage(format!("context `{c}` is not omega1,omega3")))?;
                Ok(EvalContext::Lattice(lattice_new(
                    complex(w1)?,
                    complex(w3)?,
                )?))
            })
            .collect::<Result<Vec<_>, Usage>>()?
    };
    let params = VerifyParams {
        seed: a.seed,
        samples: a.samples,
        tol: a.tol,
    };
    let suite = run_suite(&ctxs, &params);
    for e in &suite.entries {
        let w1 = e
            .context
            .omega1
            .map_or(String::new(), |p| format_complex(C64::new(p[0], p[1])));
        let w3 = e
            .context
            .omega3
            .map_or(String::new(), |p| format_complex(C64::new(p[0], p[1])));
        let residual = e.report.as_ref().map_or(String::from("-"), |r| {
            format!("{:.2e}", r.residuals.max_rel)
        });
        let mut line = format!(
            "{:<13} {:<26} w1={w1} w3={w3} residual={residual}",
            e.verdict(),
            e.identity
        );
        if let Some(err) = &e.error {
            line.push_str(&format!(" error: {err}"));
        }
        println!("{line}");
    }
    println!(
        "{} verified, {} falsified, {} inconclusive",
        suite.verified, suite.falsified, suite.inconclusive
    );
    if let Some(p) = &a.json {
        write_json(p, &suite.to_json())?;
    }
    Ok(suite.exit_code() as u8)
}

fn cmd_list() -> CliResult {
    for spec in builtin_catalog() {
        let kind = match &spec.body {
            Body::Functional(f) => format!("{} terms in {}", f.expr.terms.len(), f.variable),
            Body::Relations(r) => format!("{} relations", r.len()),
        };
        println!(
            "{:<26} {:<6} {:<18} {}",
            spec.name, spec.family, kind, spec.description
        );
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Suite(a) => cmd_suite(a),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
