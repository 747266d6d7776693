use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qgauss::evaluator::{eval_phi_within, induction_check_within};
use qgauss::modular::{count_sqrt_closed, prime_power, sylvester_count};
use qgauss::oracle::{count_sqrt_brute_within, fourier_check_within, phi_numeric_within, sylvester_brute_within};
use qgauss::{selftest, sweep};
use qgauss::{ComplexApprox, DerivationTrace, Error, ExactGaussValue, GaussSumQuery, Limits, SqrtCountQuery};

use qgauss_cli::table::{Table, TableKind};

/// Exact quadratic Gauss sums and the checks behind them.
#[derive(Parser, Debug)]
#[command(name = "qgauss", version, about)]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance for numeric comparisons.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest modulus (and number of summed terms) accepted.
    #[arg(long, global = true, default_value_t = qgauss::limits::DEFAULT_MAX_MODULUS)]
    max_modulus: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Phi(a, b): exact when b is even, numeric always.
    Eval {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        /// Print the derivation trace.
        #[arg(long)]
        trace: bool,
    },
    /// Check Phi(a, 2b) = zeta8 * Phi(2b, -a) over 1 <= a <= max-a, 1 <= b <= max-b.
    VerifyLs {
        #[arg(long)]
        max_a: u64,
        #[arg(long)]
        max_b: u64,
    },
    /// Count x mod m with x^2 = t, by enumeration and (for prime powers) in closed form.
    CountSqrt {
        #[arg(allow_negative_numbers = true)]
        t: i64,
        #[arg(allow_negative_numbers = true)]
        m: i64,
    },
    /// Compare Phi(p^k, 2l) with its expansion over square-root counts.
    FourierCheck {
        p: u64,
        k: u32,
        #[arg(allow_negative_numbers = true)]
        l: i64,
    },
    /// Compare (a-1)(b-1)/2 with the lattice-point enumeration.
    Sylvester { a: u64, b: u64 },
    /// Replay the step extending the relation from b to b*p^k.
    InductionCheck { a: u64, b: u64, p: u64, k: u32 },
    /// Print a table of closed-form values with their numeric shadows.
    Table {
        kind: TableKind,
        /// Largest modulus for `lemma1`.
        #[arg(long, default_value_t = 16)]
        max: u64,
        /// Prime for `prop10` and `reflection`.
        #[arg(long)]
        p: Option<u64>,
        /// Largest exponent for `prop10`, `prop11` and `reflection`.
        #[arg(long, default_value_t = 6)]
        max_k: u32,
        /// Numerator offset l in Phi(p^k, 2l).
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        l: i64,
    },
    /// Run the full acceptance suite.
    SelfTest,
}

enum Failure {
    Check,
    Invalid(String),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_bound() {
            Failure::Bound(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("write failed: {e}"))
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    tol: f64,
    workers: usize,
    limits: Limits,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        json: cli.json,
        tol: cli.tol,
        workers: cli.workers.unwrap_or_else(sweep::default_workers),
        limits: Limits::default()
            .with_max_modulus(cli.max_modulus)
            .with_max_terms(cli.max_modulus),
    };
    let result = if ctx.tol.is_nan() || ctx.tol < 0.0 {
        Err(Failure::Invalid(format!("tolerance must be non-negative, got {}", ctx.tol)))
    } else {
        run(cli.command, &ctx)
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, ctx: &Ctx) -> Outcome {
    match command {
        Command::Eval { a, b, trace } => cmd_eval(ctx, a, b, trace),
        Command::VerifyLs { max_a, max_b } => cmd_verify_ls(ctx, max_a, max_b),
        Command::CountSqrt { t, m } => cmd_count_sqrt(ctx, t, m),
        Command::FourierCheck { p, k, l } => {
            let report = fourier_check_within(p, k, l, ctx.tol, &ctx.limits)?;
            print_report(ctx, &report)
        }
        Command::Sylvester { a, b } => cmd_sylvester(ctx, a, b),
        Command::InductionCheck { a, b, p, k } => {
            let report = induction_check_within(a, b, p, k, ctx.tol, &ctx.limits)?;
            print_report(ctx, &report)
        }
        Command::Table { kind, max, p, max_k, l } => {
            let table = Table::build(kind, max, p, max_k, l, &ctx.limits)?;
            let mut out = io::stdout().lock();
            if ctx.json {
                writeln!(out, "{}", table.to_json())?;
            } else {
                table.write_csv(&mut out)?;
            }
            Ok(())
        }
        Command::SelfTest => cmd_self_test(ctx),
    }
}

fn positive(n: i64) -> Result<u64, Failure> {
    if n <= 0 {
        return Err(Error::NonPositiveModulus(n).into());
    }
    Ok(n as u64)
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Invalid(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct EvalOutput {
    query: GaussSumQuery,
    exact: Option<ExactGaussValue>,
    numeric: ComplexApprox,
    agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<DerivationTrace>,
}

fn cmd_eval(ctx: &Ctx, a: i64, b: i64, show_trace: bool) -> Outcome {
    let query = GaussSumQuery::new(positive(a)?, b)?;
    let numeric = phi_numeric_within(query.modulus, b, &ctx.limits)?;
    let (exact, trace) = if b % 2 == 0 {
        let (value, trace) = eval_phi_within(&query, &ctx.limits)?;
        (Some(value), Some(trace))
    } else {
        (None, None)
    };
    let agrees = exact
        .as_ref()
        .map(|v| v.to_complex().agrees_with(&numeric, ctx.tol));
    if ctx.json {
        emit_json(&EvalOutput {
            query,
            exact,
            numeric,
            agrees,
            trace: trace.filter(|_| show_trace),
        })?;
    } else {
        println!("{query}");
        match &exact {
            Some(v) => println!("exact:   {v}"),
            None => println!("exact:   n/a (odd numerator)"),
        }
        println!("numeric: {numeric}");
        if agrees == Some(false) {
            println!("MISMATCH: exact and numeric values differ beyond tolerance {}", ctx.tol);
        }
        if let (true, Some(trace)) = (show_trace, &trace) {
            println!("trace:");
            for (i, step) in trace.steps.iter().enumerate() {
                println!("  {:>3}. {:<9} {} = {}", i + 1, step.rule.tag(), step.query, step.value);
            }
        }
    }
    verdict(agrees != Some(false))
}

fn cmd_verify_ls(ctx: &Ctx, max_a: u64, max_b: u64) -> Outcome {
    let summary = sweep::verify_ls_grid(max_a, max_b, ctx.tol, ctx.workers, &ctx.limits)?;
    if ctx.json {
        emit_json(&summary)?;
    } else {
        println!("range:    {}", summary.range);
        println!("cases:    {}", summary.total);
        println!("passes:   {}", summary.passes);
        println!("failures: {}", summary.failures.len());
        println!("time:     {:.2}s", summary.wall_time_secs);
        for report in &summary.failures {
            println!(
                "  FAIL {} at {}: difference {:.3e}",
                report.query,
                report.failing_step.as_deref().unwrap_or("?"),
                report.difference
            );
        }
    }
    verdict(summary.all_passed())
}

#[derive(Serialize)]
struct CountOutput {
    target: i64,
    modulus: u64,
    brute: u64,
    closed: Option<u64>,
    agrees: Option<bool>,
}

fn cmd_count_sqrt(ctx: &Ctx, t: i64, m: i64) -> Outcome {
    let m = positive(m)?;
    let brute = count_sqrt_brute_within(t, m, &ctx.limits)?;
    let closed = match prime_power(m) {
        Some(pp) => Some(count_sqrt_closed(&SqrtCountQuery::new_within(
            t,
            pp.prime,
            pp.exponent,
            &ctx.limits,
        )?)),
        None => None,
    };
    let agrees = closed.map(|c| c == brute);
    if ctx.json {
        emit_json(&CountOutput {
            target: t,
            modulus: m,
            brute,
            closed,
            agrees,
        })?;
    } else {
        println!("brute  {brute}");
        match closed {
            Some(c) => println!("closed {c}"),
            None => println!("closed n/a (not a prime power)"),
        }
        if agrees == Some(false) {
            println!("MISMATCH: closed form disagrees with enumeration");
        }
    }
    verdict(agrees != Some(false))
}

#[derive(Serialize)]
struct SylvesterOutput {
    a: u64,
    b: u64,
    closed: u64,
    brute: u64,
    agrees: bool,
}

fn cmd_sylvester(ctx: &Ctx, a: u64, b: u64) -> Outcome {
    let closed = sylvester_count(a, b)?;
    let brute = sylvester_brute_within(a, b, &ctx.limits)?;
    let agrees = closed == brute;
    if ctx.json {
        emit_json(&SylvesterOutput {
            a,
            b,
            closed,
            brute,
            agrees,
        })?;
    } else {
        println!("closed {closed}");
        println!("brute  {brute}");
        if !agrees {
            println!("MISMATCH: closed form disagrees with enumeration");
        }
    }
    verdict(agrees)
}

fn print_report(ctx: &Ctx, report: &qgauss::VerificationReport) -> Outcome {
    if ctx.json {
        emit_json(report)?;
    } else {
        println!("{}: {}", report.query, if report.passed { "PASS" } else { "FAIL" });
        if let Some(v) = &report.exact {
            println!("exact: {v}");
        }
        for step in &report.steps {
            println!(
                "  [{}] {:<24} difference {:.3e}",
                if step.passed { "ok" } else { "FAIL" },
                step.label,
                step.difference
            );
        }
    }
    verdict(report.passed)
}

fn cmd_self_test(ctx: &Ctx) -> Outcome {
    let mut outcomes = Vec::new();
    for criterion in selftest_plan(ctx.workers) {
        let outcome = criterion();
        if !ctx.json {
            println!("{}", outcome.line());
        }
        outcomes.push(outcome);
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    if ctx.json {
        emit_json(&outcomes)?;
    } else {
        println!("{passed}/{} criteria passed", outcomes.len());
    }
    verdict(passed == outcomes.len())
}

type Criterion = Box<dyn Fn() -> selftest::CriterionOutcome>;

fn selftest_plan(workers: usize) -> Vec<Criterion> {
    vec![
        Box::new(selftest::criterion_lemma1),
        Box::new(selftest::criterion_counting),
        Box::new(selftest::criterion_prime_powers),
        Box::new(selftest::criterion_reflection),
        Box::new(selftest::criterion_multiplicative),
        Box::new(move || selftest::criterion_reciprocity(workers)),
        Box::new(selftest::criterion_induction),
        Box::new(selftest::criterion_sylvester),
    ]
}
