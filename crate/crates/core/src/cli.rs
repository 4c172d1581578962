//! Command-line front end. [`run_with`] does all the work so it can be
//! driven from tests; the binary only forwards `std::env::args`.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 budget exhausted or verdict unknown.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::circuit::{gen_fifo, parse_aag, tseitin_encode, unroll, write_aag, Bug, Netlist};
use crate::cnf::{
    parse_dimacs_clauses, parse_qdimacs, write_dimacs_clauses, write_qdimacs, Assignment, Clause, Lit, Var,
};
use crate::error::Error;
use crate::invgen::{
    check_global_invariant, describe_state_clause, diameter_check, fifo_summary_csv, gen_local_invariant_in,
    local_targets, run_fifo_pipelines, to_state_clause, CheckConfig, FifoPipelineConfig, GlobalCheck,
};
use crate::pqe::{qe, take_out, Engine, EngineConfig, PqeSolution};
use crate::propgen::{beats_ternary_sim, generate_property, symbsim_property, symbsim_targets, verify_symbsim_property};
use crate::reductions::{eq_check_pqe, interpolant_by_pqe, sat_by_pqe, EqVerdict, InterpolationResult};
use crate::verify::{check_pqe_solution_capped, Verdict, DEFAULT_FREE_VAR_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pqekit", version, about = "Partial quantifier elimination toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Settings shared by every verb that runs a take-out.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds per take-out.
    #[arg(long, default_value_t = 10.0)]
    time_budget: f64,
    /// Conflicts per SAT call.
    #[arg(long)]
    conflict_budget: Option<u64>,
    /// Clauses per take-out; 0 for no cap.
    #[arg(long, default_value_t = 5)]
    cap: usize,
    #[arg(long, default_value = "egplus")]
    engine: Engine,
    /// Machine-readable JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Worker threads for independent problems.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RunConfig {
    fn engine(&self) -> Result<EngineConfig, CliError> {
        if !(self.time_budget > 0.0) {
            return Err(CliError::Usage("--time-budget must be positive".into()));
        }
        if self.conflict_budget == Some(0) || self.jobs == 0 {
            return Err(CliError::Usage("budgets and --jobs must be positive".into()));
        }
        Ok(EngineConfig {
            engine: self.engine,
            seed: self.seed,
            conflict_budget: self.conflict_budget,
            time_budget: Some(Duration::from_secs_f64(self.time_budget)),
            clause_cap: (self.cap > 0).then_some(self.cap),
            ..EngineConfig::default()
        })
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Take-out, quantifier elimination and solution checking on QDIMACS.
    #[command(subcommand)]
    Pqe(PqeCmd),
    /// CNF encodings of AIGER circuits.
    #[command(subcommand)]
    Circ(CircCmd),
    /// Parametric FIFO generator.
    #[command(subcommand)]
    Fifo(FifoCmd),
    /// Property generation.
    #[command(subcommand)]
    Prop(PropCmd),
    /// Invariant generation and checking.
    #[command(subcommand)]
    Inv(InvCmd),
    /// Equivalence of two combinational AIGER circuits.
    Eqcheck {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Interpolant of two DIMACS clause lists with unsatisfiable conjunction.
    Interp {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Satisfiability of a DIMACS formula by taking out falsified clauses.
    Satpqe {
        file: PathBuf,
        /// Starting point as DIMACS literals; random from --seed otherwise.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<i32>>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Whether every reachable state is reachable in fewer than M steps.
    Diam {
        file: PathBuf,
        #[arg(short, long)]
        m: usize,
        #[command(flatten)]
        run: RunConfig,
    },
}

#[derive(Subcommand, Debug)]
enum PqeCmd {
    Take {
        file: PathBuf,
        /// 1-based clause index in file order.
        #[arg(long)]
        clause: usize,
        /// Write the solution here as well.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the provenance JSON here.
        #[arg(long)]
        provenance: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    Qe {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    Verify {
        file: PathBuf,
        #[arg(long)]
        clause: usize,
        /// DIMACS clause list to check.
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FREE_VAR_CAP)]
        max_free: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CircCmd {
    Encode {
        file: PathBuf,
    },
    Unroll {
        file: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Free variables S_0 and the inputs instead of S_k.
        #[arg(long)]
        symbsim: bool,
        #[arg(long)]
        no_init: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FifoCmd {
    Gen {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value_t = 5)]
        val: u64,
        #[arg(long, default_value = "none")]
        bug: Bug,
        /// AIGER output; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON sidecar with latch roles.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum PropCmd {
    /// Take clauses out of a combinational circuit with the inputs and
    /// outputs free.
    Gen {
        file: PathBuf,
        /// 1-based clause; seeded random targets otherwise.
        #[arg(long)]
        clause: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Properties of a k-frame unrolling under a random last-frame clause B.
    Symbsim {
        file: PathBuf,
        #[arg(short, long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 15)]
        b_len: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        run: RunConfig,
    },
}

#[derive(Subcommand, Debug)]
enum InvCmd {
    /// Local invariants of an AIGER circuit, or the seeded FIFO bug hunt
    /// with --fifo.
    Gen {
        file: Option<PathBuf>,
        #[arg(short, long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        problems: usize,
        #[arg(long)]
        fifo: bool,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "skip_val")]
        bug: Bug,
        #[arg(long, default_value_t = 10)]
        runs: u64,
        /// Seconds of PQE per run.
        #[arg(long, default_value_t = 2000.0)]
        run_budget: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Whether a state clause (latch i is DIMACS variable i+1) holds in
    /// every reachable state.
    Check {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        clause: Vec<i32>,
        #[arg(long, default_value_t = 20)]
        bmc: usize,
        #[arg(long, default_value_t = 10)]
        kind: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Res = std::result::Result<i32, CliError>;

/// Parses `args` (program name first) and runs the verb, writing results
/// to `out`. Returns the exit code.
pub fn run_with<I, S, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(out, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::Budget(_) => EXIT_UNKNOWN,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit<W: Write>(out: &mut W, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit_json<W: Write, T: Serialize>(out: &mut W, v: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).expect("reports serialize");
    emit(out, &s)?;
    emit(out, "\n")
}

fn aag(path: &Path) -> Result<Netlist, CliError> {
    Ok(parse_aag(&read(path)?)?)
}

fn clause_index(i: usize, len: usize) -> Result<usize, CliError> {
    if i == 0 || i > len {
        return Err(CliError::Usage(format!("--clause must be in 1..={len}")));
    }
    Ok(i - 1)
}

fn solution_code(sol: &PqeSolution) -> i32 {
    if sol.status.is_complete() {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch<W: Write>(cmd: Cmd, out: &mut W) -> Res {
    match cmd {
        Cmd::Pqe(c) => pqe(c, out),
        Cmd::Circ(c) => circ(c, out),
        Cmd::Fifo(FifoCmd::Gen { n, p, val, bug, out: path, meta }) => {
            let f = gen_fifo(n, p, val, bug)?;
            let text = write_aag(&f.netlist)?;
            match path {
                Some(p) => write_file(&p, &text)?,
                None => emit(out, &text)?,
            }
            if let Some(m) = meta {
                let sidecar = json!({ "n": n, "p": p, "val": val, "bug": bug, "meta": f.meta(),
                    "data": f.data, "size": f.size, "dout": f.dout });
                write_file(&m, &serde_json::to_string_pretty(&sidecar).unwrap())?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Prop(c) => prop(c, out),
        Cmd::Inv(c) => inv(c, out),
        Cmd::Eqcheck { a, b, run } => {
            let cfg = run.engine()?;
            let r = eq_check_pqe(&aag(&a)?, &aag(&b)?, &cfg)?;
            if run.json {
                emit_json(out, &r)?;
            } else {
                match &r.verdict {
                    EqVerdict::Inequivalent { cex } => {
                        let bits: String = cex.iter().map(|&b| if b { '1' } else { '0' }).collect();
                        emit(out, &format!("INEQUIVALENT output {} cex {bits}\n", r.output.unwrap_or(0)))?
                    }
                    EqVerdict::ConstantCase => emit(out, "EQUIVALENT (constant)\n")?,
                    EqVerdict::Equivalent => emit(out, "EQUIVALENT\n")?,
                }
            }
            Ok(if r.verdict.is_equivalent() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Interp { a, b, run } => {
            let cfg = run.engine()?;
            let (a, b) = (parse_dimacs_clauses(&read(&a)?)?, parse_dimacs_clauses(&read(&b)?)?);
            let r = interpolant_by_pqe(&a, &b, &EngineConfig { clause_cap: None, ..cfg })?;
            if run.json {
                emit_json(out, &r)?;
            }
            match r {
                InterpolationResult::Interpolant { clauses } => {
                    if !run.json {
                        emit(out, &write_dimacs_clauses(&clauses))?;
                    }
                    Ok(EXIT_OK)
                }
                InterpolationResult::NotAnInterpolant { failed, .. } => {
                    if !run.json {
                        emit(out, &format!("NOT_AN_INTERPOLANT {failed:?}\n"))?;
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Cmd::Satpqe { file, point, run } => {
            let cfg = run.engine()?;
            let f = parse_qdimacs(&read(&file)?)?;
            let x = match point {
                Some(p) => Assignment::from_dimacs(&p)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
                    (1..=f.max_var()).map(|v| (Var::new(v), rng.gen_bool(0.5))).collect()
                }
            };
            let sat = sat_by_pqe(f.clauses(), &x, &EngineConfig { clause_cap: None, ..cfg })?;
            if run.json {
                emit_json(out, &json!({ "satisfiable": sat, "seed": run.seed }))?;
            } else {
                emit(out, if sat { "SAT\n" } else { "UNSAT\n" })?;
            }
            Ok(if sat { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Diam { file, m, run } => {
            let cfg = run.engine()?;
            let below = diameter_check(&aag(&file)?, m, &EngineConfig { clause_cap: None, ..cfg })?;
            if run.json {
                emit_json(out, &json!({ "m": m, "diameter_below_m": below }))?;
            } else {
                emit(out, &format!("diameter {} {m}\n", if below { "<" } else { ">=" }))?;
            }
            Ok(if below { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn pqe<W: Write>(c: PqeCmd, out: &mut W) -> Res {
    match c {
        PqeCmd::Take { file, clause, out: path, provenance, run } => {
            let f = parse_qdimacs(&read(&file)?)?;
            let t = clause_index(clause, f.len())?;
            let sol = take_out(&f, t, &run.engine()?)?;
            let text = sol.to_dimacs();
            if let Some(p) = path {
                write_file(&p, &text)?;
            }
            if let Some(p) = provenance {
                write_file(&p, &sol.provenance_json())?;
            }
            if run.json {
                emit(out, &sol.provenance_json())?;
                emit(out, "\n")?;
            } else {
                emit(out, &text)?;
            }
            Ok(solution_code(&sol))
        }
        PqeCmd::Qe { file, out: path, run } => {
            let f = parse_qdimacs(&read(&file)?)?;
            let sol = qe(&f, &EngineConfig { clause_cap: None, ..run.engine()? })?;
            if let Some(p) = path {
                write_file(&p, &sol.to_dimacs())?;
            }
            if run.json {
                emit(out, &sol.provenance_json())?;
                emit(out, "\n")?;
            } else {
                emit(out, &sol.to_dimacs())?;
            }
            Ok(solution_code(&sol))
        }
        PqeCmd::Verify { file, clause, solution, max_free, json } => {
            let f = parse_qdimacs(&read(&file)?)?;
            let t = clause_index(clause, f.len())?;
            let h = parse_dimacs_clauses(&read(&solution)?)?;
            let r = check_pqe_solution_capped(&f, &[t], &h, max_free)?;
            if json {
                emit(out, &r.to_json())?;
                emit(out, "\n")?;
            } else {
                let line = match &r.verdict {
                    Verdict::Equivalent => "EQUIVALENT".to_string(),
                    Verdict::Inequivalent { witness } => format!("INEQUIVALENT witness {:?}", witness.lits().iter().map(|l| l.to_dimacs()).collect::<Vec<_>>()),
                    Verdict::Skipped { free_vars, cap } => format!("SKIPPED {free_vars} free variables > {cap}"),
                };
                emit(out, &format!("{line}\n"))?;
            }
            Ok(match r.verdict {
                Verdict::Equivalent => EXIT_OK,
                Verdict::Inequivalent { .. } => EXIT_NEGATIVE,
                Verdict::Skipped { .. } => EXIT_UNKNOWN,
            })
        }
    }
}

fn circ<W: Write>(c: CircCmd, out: &mut W) -> Res {
    match c {
        CircCmd::Encode { file } => {
            let e = tseitin_encode(&aag(&file)?);
            emit(out, &write_qdimacs(&e.formula))?;
        }
        CircCmd::Unroll { file, k, symbsim, no_init } => {
            let u = unroll(&aag(&file)?, k, !no_init)?;
            let f = if symbsim { u.symbsim_view() } else { u.formula };
            emit(out, &write_qdimacs(&f))?;
        }
    }
    Ok(EXIT_OK)
}

fn lits_text(c: &Clause) -> Vec<i32> {
    c.to_dimacs()
}

fn prop<W: Write>(c: PropCmd, out: &mut W) -> Res {
    match c {
        PropCmd::Gen { file, clause, count, run } => {
            let n = aag(&file)?;
            if !n.is_combinational() {
                return Err(CliError::Usage("prop gen expects a combinational circuit".into()));
            }
            let f = tseitin_encode(&n).formula;
            let targets = match clause {
                Some(i) => vec![clause_index(i, f.len())?],
                None => {
                    let mut ts: Vec<usize> = (0..f.len()).filter(|&i| f.is_quantified_clause(i).unwrap_or(false)).collect();
                    ts.shuffle(&mut ChaCha8Rng::seed_from_u64(run.seed));
                    ts.truncate(count);
                    ts
                }
            };
            let cfg = run.engine()?;
            let props = pool(run.jobs)?.install(|| {
                targets
                    .par_iter()
                    .map(|&t| generate_property(&f, t, &cfg))
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            let complete = props.iter().all(|p| p.status.is_complete());
            if run.json {
                emit_json(out, &json!({ "seed": run.seed, "properties": props }))?;
            } else {
                for p in &props {
                    emit(out, &format!("c target {} {}\n", p.target + 1, p.status))?;
                    emit(out, &write_dimacs_clauses(&p.clauses))?;
                }
            }
            Ok(if complete { EXIT_OK } else { EXIT_UNKNOWN })
        }
        PropCmd::Symbsim { file, k, b_len, count, run } => {
            let n = aag(&file)?;
            let u = unroll(&n, k, true)?;
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            let mut last = u.frames.states[k].clone();
            last.shuffle(&mut rng);
            last.truncate(b_len);
            last.sort();
            let b = Clause::new(last.iter().map(|&v| v.lit(rng.gen_bool(0.5))))?;
            let mut targets = symbsim_targets(&u, &b)?;
            targets.shuffle(&mut rng);
            targets.truncate(count);
            let cfg = run.engine()?;
            let results = pool(run.jobs)?.install(|| {
                targets
                    .par_iter()
                    .map(|&t| {
                        let p = symbsim_property(&u, &b, t, &cfg)?;
                        let checks = p
                            .clauses
                            .iter()
                            .map(|q| {
                                Ok(json!({
                                    "clause": lits_text(q),
                                    "verified": verify_symbsim_property(&u, &b, q)?,
                                    "beats_ternary_sim": beats_ternary_sim(&n, &u, q, &b),
                                }))
                            })
                            .collect::<crate::Result<Vec<_>>>()?;
                        Ok(json!({ "target": t + 1, "status": p.status, "clauses": checks }))
                    })
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            let report = json!({ "seed": run.seed, "k": k, "b": lits_text(&b), "properties": results });
            if run.json {
                emit_json(out, &report)?;
            } else {
                emit(out, &format!("B {b}\n"))?;
                for r in &results {
                    for c in r["clauses"].as_array().into_iter().flatten() {
                        emit(
                            out,
                            &format!(
                                "target {} clause {} verified {} beats_ternary {}\n",
                                r["target"], c["clause"], c["verified"], c["beats_ternary_sim"]
                            ),
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn inv<W: Write>(c: InvCmd, out: &mut W) -> Res {
    match c {
        InvCmd::Gen {
            file,
            k,
            problems,
            fifo,
            n,
            bug,
            runs,
            run_budget,
            csv,
            run,
        } => {
            let cfg = run.engine()?;
            if fifo {
                let mut base = FifoPipelineConfig::new(n, bug, run.seed);
                base.k = k;
                base.engine = EngineConfig { shrink: true, ..cfg };
                base.run_budget = Duration::from_secs_f64(run_budget);
                let seeds: Vec<u64> = (run.seed..run.seed + runs).collect();
                let reports = run_fifo_pipelines(&base, &seeds, run.jobs)?;
                let summary = fifo_summary_csv(&reports);
                if let Some(p) = csv {
                    write_file(&p, &summary)?;
                }
                if run.json {
                    emit_json(out, &reports)?;
                } else {
                    emit(out, &summary)?;
                    for r in &reports {
                        for c in r.unwanted() {
                            emit(out, &format!("seed {} unwanted: {}\n", r.seed, c.text))?;
                        }
                    }
                }
                return Ok(EXIT_OK);
            }
            let file = file.ok_or_else(|| CliError::Usage("inv gen needs a circuit file or --fifo".into()))?;
            let net = aag(&file)?;
            let u = unroll(&net, k, true)?;
            let mut targets = local_targets(&u);
            targets.shuffle(&mut ChaCha8Rng::seed_from_u64(run.seed));
            targets.truncate(problems);
            let props = pool(run.jobs)?.install(|| {
                targets
                    .par_iter()
                    .map(|&t| gen_local_invariant_in(&u, t, &cfg))
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            let mut rows = Vec::new();
            for p in &props {
                for c in &p.clauses {
                    let q = to_state_clause(&u, c).expect("last-frame clause");
                    rows.push(json!({ "target": p.target + 1, "status": p.status,
                        "clause": q.to_dimacs(), "text": describe_state_clause(&net, &q) }));
                }
            }
            if run.json {
                emit_json(out, &json!({ "seed": run.seed, "k": k, "invariants": rows }))?;
            } else {
                for r in &rows {
                    emit(out, &format!("{}\n", r["text"].as_str().unwrap_or("")))?;
                }
            }
            Ok(if props.iter().all(|p| p.status.is_complete()) { EXIT_OK } else { EXIT_UNKNOWN })
        }
        InvCmd::Check { file, clause, bmc, kind, json } => {
            let net = aag(&file)?;
            let q = Clause::new(clause.iter().map(|&l| Lit::from_dimacs(l)))?;
            let cfg = CheckConfig {
                bmc_bound: bmc,
                kind_depth: kind,
                ..CheckConfig::default()
            };
            let r = check_global_invariant(&net, &q, &cfg)?;
            if json {
                emit_json(out, &r)?;
            } else {
                let line = match &r {
                    GlobalCheck::Global { depth } => format!("GLOBAL depth {depth}"),
                    GlobalCheck::Falsified { trace } => format!("FALSIFIED after {} steps", trace.inputs.len()),
                    GlobalCheck::Unknown => "UNKNOWN".into(),
                };
                emit(out, &format!("{line}\n"))?;
            }
            Ok(match r {
                GlobalCheck::Global { .. } => EXIT_OK,
                GlobalCheck::Falsified { .. } => EXIT_NEGATIVE,
                GlobalCheck::Unknown => EXIT_UNKNOWN,
            })
        }
    }
}
