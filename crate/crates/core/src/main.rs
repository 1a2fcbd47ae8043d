use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use approxsys::builtin::{builtin_by_name, semialgebraic_system, PolyFormula};
use approxsys::evaluator::{apply, compose, default_budget_base, geometric_schedule};
use approxsys::names::name_of_point;
use approxsys::system::enumerate;
use approxsys::verifier::{
    builtin_oracle, verify_condition1, verify_condition2, Outcome, PolynomialOracle, RefOracle,
    Verdict,
};
use approxsys::{Budget, Error, Point, Rat, Result, SharedSystem};

#[derive(Parser)]
#[command(name = "approxsys", version, about = "Evaluate and check approximation systems of real functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at a rational point to precision 1/(n+1).
    Eval(EvalArgs),
    /// Print the first enumerated quadruples of a system.
    Enumerate(EnumerateArgs),
    /// Sample the soundness (and optionally productivity) condition.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in system: division, max-division or cosine.
    #[arg(long)]
    system: Option<String>,
    /// Polynomial formula file in JSON.
    #[arg(long)]
    formula: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EvalSource {
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    formula: Option<PathBuf>,
    /// Comma-separated chain of unary built-ins, outermost first.
    #[arg(long)]
    compose: Option<String>,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum OutputMode {
    #[default]
    Plain,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: EvalSource,
    /// Comma-separated rational coordinates, e.g. 1,3 or 1/2,-0.25.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Output precision index n: the result is within 1/(n+1).
    #[arg(long, conflicts_with = "eps")]
    prec_index: Option<u64>,
    /// Output precision as a positive rational; uses the least n with 1/(n+1) <= eps.
    #[arg(long)]
    eps: Option<String>,
    /// Search step budget (default: base * 2^n).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    output: OutputMode,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 10)]
    count: u64,
    /// Enumeration indices scanned before giving up.
    #[arg(long, default_value_t = 100_000_000)]
    max_index: u64,
    #[arg(long, value_enum, default_value_t)]
    output: OutputMode,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1000)]
    quads: u64,
    #[arg(long, default_value_t = 10)]
    xi_per_quad: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check productivity at this point.
    #[arg(long, allow_hyphen_values = true)]
    cond2_point: Option<String>,
    /// Precision index for the productivity check.
    #[arg(long, default_value_t = 9)]
    prec_index: u64,
    #[arg(long, default_value_t = 64)]
    m_cap: u64,
    #[arg(long, default_value_t = 16)]
    a_samples: u64,
    /// Membership budget for the productivity check.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t)]
    output: OutputMode,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e @ Error::Timeout { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_formula(path: &PathBuf) -> Result<PolyFormula> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    PolyFormula::from_json_str(&text)
}

/// The system and, when one is known, its reference oracle.
fn resolve(source: &Source) -> Result<(SharedSystem, Option<Box<dyn RefOracle>>)> {
    if let Some(name) = &source.system {
        return Ok((builtin_by_name(name)?, builtin_oracle(name)));
    }
    let path = source.formula.as_ref().expect("clap enforces one source");
    let formula = load_formula(path)?;
    let oracle = formula
        .theta()
        .map(|t| Box::new(PolynomialOracle::new(t.clone())) as Box<dyn RefOracle>);
    Ok((Arc::new(semialgebraic_system(formula)), oracle))
}

/// Least `n` with `1/(n+1) <= eps`.
fn index_for_eps(eps: &str) -> Result<u64> {
    let eps: Rat = eps.parse()?;
    if eps.is_negative() || eps.is_zero() {
        return Err(Error::parse(&eps.to_string(), "precision must be positive"));
    }
    let inv = eps.recip().expect("nonzero");
    let q = inv.numer().clone();
    let d = inv.denom().clone();
    let ceil = (q + &d - 1u32) / d;
    let ceil: u64 = ceil
        .try_into()
        .map_err(|_| Error::parse(&eps.to_string(), "precision too fine"))?;
    Ok(ceil.saturating_sub(1))
}

fn decimal_digits(n: u64) -> usize {
    let mut digits = 0;
    let mut p: u128 = 1;
    while p < n as u128 + 1 {
        p *= 10;
        digits += 1;
    }
    digits + 1
}

fn cmd_eval(args: EvalArgs) -> Result<u8> {
    let n = match (&args.prec_index, &args.eps) {
        (Some(n), _) => *n,
        (None, Some(eps)) => index_for_eps(eps)?,
        (None, None) => return Err(Error::parse("", "one of --prec-index or --eps is required")),
    };
    let point = Point::parse_list(&args.point)?;
    let base = default_budget_base()?;
    let schedule = geometric_schedule(base);
    let budget = args.budget.map_or_else(|| schedule(n), Budget);

    let chain: Vec<SharedSystem> = match (&args.source.system, &args.source.formula, &args.source.compose) {
        (Some(name), _, _) => vec![builtin_by_name(name)?],
        (_, Some(path), _) => vec![Arc::new(semialgebraic_system(load_formula(path)?))],
        (_, _, Some(list)) => list
            .split(',')
            .map(|s| builtin_by_name(s.trim()))
            .collect::<Result<_>>()?,
        _ => unreachable!("clap enforces one source"),
    };
    let (outer, inner) = chain.split_first().expect("non-empty chain");
    let arg = name_of_point(point);
    let arg = if inner.is_empty() {
        arg
    } else {
        compose(inner, arg, schedule)?
    };
    let res = apply(&**outer, &arg, n, budget)?;
    let decimal = res.value.to_decimal(decimal_digits(n));
    match args.output {
        OutputMode::Plain => {
            println!("{}", res.value);
            println!("{decimal}");
        }
        OutputMode::Json => println!(
            "{}",
            json!({
                "value": res.value.to_string(),
                "decimal": decimal,
                "precision_index": res.precision_index,
                "search_steps": res.search_steps,
            })
        ),
    }
    Ok(0)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<u8> {
    let (sys, _) = resolve(&args.source)?;
    let mut quads = Vec::new();
    let mut k = 0;
    while (quads.len() as u64) < args.count && k < args.max_index {
        if let Some(q) = enumerate(&*sys, k) {
            quads.push(q);
        }
        k += 1;
    }
    match args.output {
        OutputMode::Plain => {
            for q in &quads {
                println!("{q}");
            }
        }
        OutputMode::Json => println!("{}", serde_json::to_string(&quads).expect("serializable")),
    }
    Ok(0)
}

fn print_verdict(label: &str, v: &Verdict, mode: OutputMode) {
    match mode {
        OutputMode::Json => println!("{}", v.to_json()),
        OutputMode::Plain => {
            let outcome = match v.outcome {
                Outcome::Pass => "pass",
                Outcome::CounterExample => "counterexample",
                Outcome::Inconclusive => "inconclusive",
            };
            println!("{label}: {outcome} ({}; seed {})", v.diagnostics, v.seed);
            if let Some(w) = &v.witness {
                println!("  quadruple: {}", w.quadruple);
                println!("  xi: {}", w.xi);
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let (sys, oracle) = resolve(&args.source)?;
    let oracle = oracle.ok_or_else(|| {
        Error::Format("no reference oracle: formula files need a \"theta\" field".into())
    })?;
    let mut verdicts = vec![(
        "condition 1",
        verify_condition1(&*sys, &*oracle, args.quads, args.xi_per_quad, args.seed),
    )];
    if let Some(p) = &args.cond2_point {
        let xi = Point::parse_list(p)?;
        Error::check_dim(sys.dim(), xi.dim())?;
        verdicts.push((
            "condition 2",
            verify_condition2(
                &*sys,
                &*oracle,
                &xi,
                args.prec_index,
                args.m_cap,
                args.a_samples,
                Budget(args.budget),
                args.seed,
            ),
        ));
    }
    for (label, v) in &verdicts {
        print_verdict(label, v, args.output);
    }
    let outcomes: Vec<Outcome> = verdicts.iter().map(|(_, v)| v.outcome).collect();
    Ok(if outcomes.contains(&Outcome::CounterExample) {
        3
    } else if outcomes.contains(&Outcome::Inconclusive) {
        4
    } else {
        0
    })
}
