use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use intclosure::checker::{
    check_equigenerated, check_finite_colength, check_integral_closure, mixed_report, validate_hypotheses, CheckOptions,
};
use intclosure::gb::max_gen_degree;
use intclosure::hilbert::graded_piece_length;
use intclosure::io::cache::Cache;
use intclosure::io::parse::{parse_problem, Problem, ProblemSpec};
use intclosure::io::report::{build_report, to_value, SCHEMA_VERSION};
use intclosure::mult::Engine;
use intclosure::{Error, Field, FieldSpec, GradedIdeal, PrimeField, Rational, Rationals, Result};
use serde_json::{json, Value};

const DEFAULT_CACHE_DIR: &str = ".intclosure-cache";

#[derive(Parser)]
#[command(name = "intclosure", version, about = "Integral dependence of homogeneous ideals via multiplicities")]
struct Cli {
    /// Progress and cache details on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    /// Where intermediate results are cached (default: ./.intclosure-cache).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute every cache hit and fail if it differs from the stored entry.
    #[arg(long, global = true)]
    validate_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Problem file defining ideals I ⊆ J.
    file: PathBuf,
    /// Slope of the diagonal; must exceed max(d(I), d(J)).
    #[arg(long)]
    c: Option<u32>,
    /// Vouch that the quotient ring is a domain.
    #[arg(long)]
    assert_domain: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Both ideals are generated in a single degree: compare RA-multiplicities
    /// instead of diagonal degrees in R[T].
    #[arg(long)]
    equigenerated: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether I and J have the same integral closure.
    Check(CheckArgs),
    /// Decide whether the closures of I and J differ by finite length.
    Colength(PairArgs),
    /// RA-multiplicities of one ideal, optionally with mixed multiplicities.
    RaMult {
        file: PathBuf,
        #[arg(long, default_value = "I")]
        ideal: String,
        /// Also report mixed multiplicities of the truncation in degree BETA.
        #[arg(long)]
        beta: Option<u32>,
    },
    /// Mixed-multiplicity tables of I and J in R and in R[T].
    Mixed {
        file: PathBuf,
        #[arg(long)]
        assert_domain: bool,
    },
    /// CSV of finite-level adic and saturated density values.
    Density {
        file: PathBuf,
        #[arg(long, default_value = "I")]
        ideal: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        x_from: String,
        #[arg(long, allow_hyphen_values = true)]
        x_to: String,
        #[arg(long)]
        x_step: String,
    },
    /// Compare fiber-cone pieces with directly computed graded lengths.
    Oracle {
        file: PathBuf,
        /// Only this ideal (default: every ideal in the file).
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long, default_value_t = 4)]
        levels: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Colength(_) => "colength",
            Command::RaMult { .. } => "ra-mult",
            Command::Mixed { .. } => "mixed",
            Command::Density { .. } => "density",
            Command::Oracle { .. } => "oracle",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Check(CheckArgs { pair: a, .. }) | Command::Colength(a) => &a.file,
            Command::RaMult { file, .. }
            | Command::Mixed { file, .. }
            | Command::Density { file, .. }
            | Command::Oracle { file, .. } => file,
        }
    }

    fn gives_verdict(&self) -> bool {
        matches!(self, Command::Check(_) | Command::Colength(_) | Command::Mixed { .. })
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    spec: &'a ProblemSpec,
    engine: Engine,
}

impl Ctx<'_> {
    fn note(&self, msg: impl AsRef<str>) {
        if self.cli.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = match &e {
                Error::Hypothesis(_) => (2, "hypothesis"),
                e if e.is_parse() => (3, "parse"),
                _ => (1, "error"),
            };
            let name = e.name();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "error": { "kind": kind, "name": name, "message": e.to_string() },
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let text = std::fs::read_to_string(cli.command.file())?;
    let spec = parse_problem(&text)?;
    let engine = if cli.no_cache {
        Engine::new()
    } else {
        let dir = cli.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        Engine::with_cache(Cache::open(dir)?.with_validation(cli.validate_cache))
    };
    let ctx = Ctx { cli, spec: &spec, engine };
    ctx.note(format!("ring {}[{}], {} ideal(s)", spec.field, spec.variables.join(","), spec.ideals.len()));
    let outcome = match spec.field {
        FieldSpec::Rationals => dispatch(&ctx, spec.instantiate(Rationals)?),
        FieldSpec::PrimeField { p } => {
            if cli.command.gives_verdict() {
                return Err(Error::Precondition(format!(
                    "verdicts are only computed over Q; GF {p} is available for ra-mult, density and oracle"
                )));
            }
            dispatch(&ctx, spec.instantiate(PrimeField::new(p)?)?)
        }
    };
    if let Some(cache) = ctx.engine.cache() {
        for w in cache.warnings() {
            eprintln!("warning: {w}");
        }
        let k = cache.counters();
        ctx.note(format!(
            "cache {}: {} hit(s), {} miss(es), {} discarded, {} validated",
            cache.dir().display(),
            k.hits,
            k.misses,
            k.discarded,
            k.validated
        ));
    }
    outcome
}

fn emit(ctx: &Ctx, result: Value, start: Instant) {
    let report = build_report(
        ctx.cli.command.name(),
        &ctx.spec.to_canonical_string(),
        result,
        &ctx.engine,
        start.elapsed(),
    );
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    ctx.note(format!("done in {:.2?}", start.elapsed()));
}

fn check_options<F: Field>(problem: &Problem<F>, a: &PairArgs) -> CheckOptions {
    CheckOptions {
        c: a.c.or(problem.options.c),
        assert_domain: a.assert_domain || problem.options.assert_domain,
    }
}

fn dispatch<F: Field>(ctx: &Ctx, problem: Problem<F>) -> Result<()> {
    let start = Instant::now();
    let eng = &ctx.engine;
    match &ctx.cli.command {
        Command::Check(CheckArgs { pair: a, equigenerated }) => {
            let (i, j) = (problem.ideal("I")?, problem.ideal("J")?);
            let opts = check_options(&problem, a);
            let h = validate_hypotheses(i, j)?;
            ctx.note(format!("hypotheses hold: dim R = {}, d = {}", h.dim_r, h.d_bold));
            if *equigenerated {
                let v = check_equigenerated(eng, i, j, &opts)?;
                ctx.note(format!("equigenerated: {:?}", v.closures_equal));
                emit(ctx, json!({ "hypothesis": to_value(&h), "verdict": to_value(&v) }), start);
                return Ok(());
            }
            let v = check_integral_closure(eng, i, j, &opts)?;
            let (r, s) = v.pair().expect("check records both diagonals");
            ctx.note(format!("c = {}: ({r}, {s})", v.c_used));
            let mut result = json!({
                "hypothesis": to_value(&h),
                "verdict": to_value(&v),
                "pair": [r, s],
            });
            if problem.options.oracle {
                result["oracle"] = oracle_rows(eng, &[("I", i), ("J", j)], Some(v.c_used), 4)?;
            }
            emit(ctx, result, start);
        }
        Command::Colength(a) => {
            let (i, j) = (problem.ideal("I")?, problem.ideal("J")?);
            let opts = check_options(&problem, a);
            let h = validate_hypotheses(i, j)?;
            let v = check_finite_colength(eng, i, j, &opts)?;
            emit(ctx, json!({ "hypothesis": to_value(&h), "verdict": to_value(&v) }), start);
        }
        Command::RaMult { ideal, beta, .. } => {
            let x = problem.ideal(ideal)?;
            let ra = eng.ra_multiplicities(x)?;
            let mut result = json!({
                "ideal": ideal,
                "e_R": x.ring().degree(),
                "ra_multiplicities": to_value(&ra),
            });
            if let Some(b) = beta {
                result["mixed_multiplicities"] = to_value(&eng.mixed_multiplicities(x, *b)?);
            }
            emit(ctx, result, start);
        }
        Command::Mixed { assert_domain, .. } => {
            let (i, j) = (problem.ideal("I")?, problem.ideal("J")?);
            let opts = CheckOptions {
                c: None,
                assert_domain: *assert_domain || problem.options.assert_domain,
            };
            let h = validate_hypotheses(i, j)?;
            let m = mixed_report(eng, i, j, &opts)?;
            if ctx.cli.verbose {
                for (ring, table) in [("R", &m.r_table), ("S", &m.s_table)] {
                    eprintln!("In the ring {ring}");
                    for row in table {
                        eprintln!("{}->{}", row.index, row.equal);
                    }
                }
            }
            emit(
                ctx,
                json!({
                    "hypothesis": to_value(&h),
                    "mixed": to_value(&m),
                    "closures_equal": m.sharp_verdict,
                }),
                start,
            );
        }
        Command::Density { ideal, n, x_from, x_to, x_step, .. } => {
            let x = problem.ideal(ideal)?;
            let xs = grid(x_from, x_to, x_step)?;
            let rows = eng.density_row(x, *n, &xs)?;
            println!("n,x_num,x_den,f_num,f_den,g_num,g_den");
            for s in rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    s.n,
                    s.x.numer(),
                    s.x.denom(),
                    s.adic_value.numer(),
                    s.adic_value.denom(),
                    s.saturated_value.numer(),
                    s.saturated_value.denom()
                );
            }
            ctx.note(format!("done in {:.2?}", start.elapsed()));
        }
        Command::Oracle { ideal, c, levels, .. } => {
            let chosen: Vec<(&str, &GradedIdeal<F>)> = match ideal {
                Some(name) => vec![(name.as_str(), problem.ideal(name)?)],
                None => problem.ideals.iter().map(|(n, i)| (n.as_str(), i)).collect(),
            };
            let rows = oracle_rows(eng, &chosen, *c, *levels)?;
            emit(ctx, json!({ "oracle": rows }), start);
        }
    }
    Ok(())
}

/// Fiber-cone pieces against linear-algebra lengths `l((I^n)_{cn})`.
fn oracle_rows<F: Field>(eng: &Engine, ideals: &[(&str, &GradedIdeal<F>)], c: Option<u32>, levels: u32) -> Result<Value> {
    let mut rows = Vec::new();
    let mut all = true;
    for (name, ideal) in ideals {
        if ideal.is_zero() {
            continue;
        }
        let c = c.unwrap_or(max_gen_degree(ideal)? + 1);
        let fc = eng.fiber_cone(ideal, c)?;
        for n in 1..=levels {
            let fiber = fc.piece_length(n).to_string();
            let length = graded_piece_length(ideal, n, c * n).to_string();
            let equal = fiber == length;
            all &= equal;
            rows.push(json!({ "ideal": name, "c": c, "n": n, "fiber": fiber, "length": length, "equal": equal }));
        }
    }
    Ok(json!({ "checks": rows, "all_equal": all }))
}

fn grid(from: &str, to: &str, step: &str) -> Result<Vec<Rational>> {
    let from: Rational = from.parse()?;
    let to: Rational = to.parse()?;
    let step: Rational = step.parse()?;
    if step.signum() <= 0 {
        return Err(Error::Precondition("--x-step must be positive".into()));
    }
    if from.signum() < 0 || to < from {
        return Err(Error::Precondition("need 0 <= --x-from <= --x-to".into()));
    }
    let mut xs = Vec::new();
    let mut x = from;
    while x <= to {
        xs.push(x.clone());
        x = x.add(&step);
    }
    Ok(xs)
}
