//! Invariant generation for sequential circuits.
//!
//! Local invariants come from taking clauses out of `∃Abs_k[F_k]`, where
//! only the last state copy `S_k` is free. Each clause is then checked
//! against every reachable state by bounded model checking and induction.
//!
//! Clauses over the state of a single frame use `Var(i + 1)` for latch `i`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{frame_clauses, gen_fifo, simulate, unroll, Bug, Fifo, Netlist, Unrolling};
use crate::cnf::{Clause, Lit, QuantifiedCnf, Var};
use crate::error::{Error, Result};
use crate::pqe::{take_out_many, EngineConfig};
use crate::propgen::{generate_property, Property};
use crate::sat::{implies, Model, SatConfig, Session, SolveOutcome};
use crate::verify::prune_redundant;

/// Variable of latch `i` in single-frame state clauses.
pub fn latch_var(i: usize) -> Var {
    Var::new(i as u32 + 1)
}

fn latch_of(v: Var) -> usize {
    v.index() as usize - 1
}

/// Translates a clause over `S_k` of `u` into latch space. `None` if it
/// mentions any other variable.
pub fn to_state_clause(u: &Unrolling, c: &Clause) -> Option<Clause> {
    let last = &u.frames.states[u.k()];
    let lits = c
        .lits()
        .iter()
        .map(|l| last.iter().position(|&v| v == l.var()).map(|i| latch_var(i).lit(l.is_positive())))
        .collect::<Option<Vec<Lit>>>()?;
    Some(Clause::new(lits).expect("source clause is not a tautology"))
}

/// Human-readable form such as `!data[0][1] | size[2]`.
pub fn describe_state_clause(n: &Netlist, q: &Clause) -> String {
    if q.is_empty() {
        return "false".into();
    }
    q.lits()
        .iter()
        .map(|l| {
            let name = n
                .latches()
                .get(latch_of(l.var()))
                .map_or_else(|| format!("s{}", l.var().index()), |x| x.name.clone());
            if l.is_positive() {
                name
            } else {
                format!("!{name}")
            }
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn check_state_clause(n: &Netlist, q: &Clause) -> Result<()> {
    match q.vars().find(|v| v.index() == 0 || latch_of(*v) >= n.latches().len()) {
        Some(v) => Err(Error::UnknownVariable(v)),
        None => Ok(()),
    }
}

/// Runs `k` transitions from the initial state and takes `target` out of
/// `∃Abs_k[F_k]`. The clauses mention `S_k` only.
pub fn gen_local_invariant(n: &Netlist, k: usize, target: usize, cfg: &EngineConfig) -> Result<Property> {
    let u = unroll(n, k, true)?;
    gen_local_invariant_in(&u, target, cfg)
}

/// [`gen_local_invariant`] on an existing unrolling.
pub fn gen_local_invariant_in(u: &Unrolling, target: usize, cfg: &EngineConfig) -> Result<Property> {
    let c = u.formula.clause(target)?;
    if !c.vars().any(|v| u.formula.is_free(v)) {
        return Err(Error::precondition(format!(
            "clause {target} has no variable of the last time frame"
        )));
    }
    generate_property(&u.formula, target, cfg)
}

/// Clauses of `u` with a variable of `S_k`, the candidates for taking out.
pub fn local_targets(u: &Unrolling) -> Vec<usize> {
    (0..u.formula.len())
        .filter(|&i| u.formula.clauses()[i].vars().any(|v| u.formula.is_free(v)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Deepest frame explored for a reachable counterexample.
    pub bmc_bound: usize,
    /// Deepest induction step tried.
    pub kind_depth: usize,
    /// Conflicts per SAT query.
    pub conflict_budget: Option<u64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            bmc_bound: 20,
            kind_depth: 10,
            conflict_budget: Some(200_000),
        }
    }
}

/// Path from the initial state to a state falsifying the clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CexTrace {
    /// `states[0]` is the initial state; one more state than inputs.
    pub states: Vec<Vec<bool>>,
    pub inputs: Vec<Vec<bool>>,
}

impl CexTrace {
    /// Re-simulates the inputs and checks that the states agree and the
    /// last one falsifies `q`.
    pub fn replays(&self, n: &Netlist, q: &Clause) -> bool {
        let t = simulate(n, &self.inputs);
        t.states == self.states && !q.is_satisfied_by(&with_dummy(t.last_state()))
    }
}

/// Latch values shifted so that `Var(i + 1)` reads latch `i`.
fn with_dummy(state: &[bool]) -> Vec<bool> {
    let mut v = Vec::with_capacity(state.len() + 1);
    v.push(false);
    v.extend_from_slice(state);
    v
}

/// Whether state clause `q` holds in `state`.
pub fn holds_in(q: &Clause, state: &[bool]) -> bool {
    q.is_satisfied_by(&with_dummy(state))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GlobalCheck {
    /// Proved by induction of the given depth.
    Global { depth: usize },
    Falsified { trace: CexTrace },
    Unknown,
}

impl GlobalCheck {
    pub fn status(&self) -> CandidateStatus {
        match self {
            GlobalCheck::Global { .. } => CandidateStatus::Global,
            GlobalCheck::Falsified { .. } => CandidateStatus::Falsified,
            GlobalCheck::Unknown => CandidateStatus::Unknown,
        }
    }
}

/// Time frames of a netlist inside one incremental solver.
struct Frames<'a> {
    net: &'a Netlist,
    session: Session,
    frames: Vec<Vec<Var>>,
    next_var: u32,
    init: bool,
}

impl<'a> Frames<'a> {
    fn new(net: &'a Netlist, init: bool, conflict_budget: Option<u64>) -> Frames<'a> {
        Frames {
            net,
            session: Session::new(SatConfig {
                conflict_budget,
                ..SatConfig::default()
            }),
            frames: Vec::new(),
            next_var: 1,
            init,
        }
    }

    fn fresh(&mut self) -> Var {
        self.next_var += 1;
        Var::new(self.next_var - 1)
    }

    fn push(&mut self) {
        let vars: Vec<Var> = (0..self.net.len()).map(|_| self.fresh()).collect();
        for c in frame_clauses(self.net, &vars) {
            self.session.add_clause(&c);
        }
        match self.frames.last() {
            Some(prev) => {
                for (i, l) in self.net.latches().iter().enumerate() {
                    let a = prev[self.net.next_of(i).index()].pos();
                    let c = vars[l.state.index()].pos();
                    self.session.add_lits(&[!a, c]);
                    self.session.add_lits(&[a, !c]);
                }
            }
            None if self.init => {
                for l in self.net.latches() {
                    self.session.add_lits(&[vars[l.state.index()].lit(l.init)]);
                }
            }
            None => {}
        }
        self.frames.push(vars);
    }

    fn ensure(&mut self, depth: usize) {
        while self.frames.len() <= depth {
            self.push();
        }
    }

    fn state_var(&self, j: usize, latch: usize) -> Var {
        self.frames[j][self.net.latches()[latch].state.index()]
    }

    fn lit_at(&self, j: usize, l: Lit) -> Lit {
        self.state_var(j, latch_of(l.var())).lit(l.is_positive())
    }

    fn clause_at(&self, j: usize, q: &Clause) -> Vec<Lit> {
        q.lits().iter().map(|&l| self.lit_at(j, l)).collect()
    }

    fn negation_at(&self, j: usize, q: &Clause) -> Vec<Lit> {
        q.lits().iter().map(|&l| !self.lit_at(j, l)).collect()
    }

    /// Requires frames `i` and `j` to differ in some latch.
    fn distinct(&mut self, i: usize, j: usize) {
        let mut any = Vec::new();
        for l in 0..self.net.latches().len() {
            let (a, b) = (self.state_var(i, l).pos(), self.state_var(j, l).pos());
            let d = self.fresh().pos();
            self.session.add_lits(&[!d, a, b]);
            self.session.add_lits(&[!d, !a, !b]);
            any.push(d);
        }
        self.session.add_lits(&any);
    }

    fn trace(&self, m: &Model, depth: usize) -> CexTrace {
        let read = |vars: &[Var], sigs: &mut dyn Iterator<Item = usize>| -> Vec<bool> {
            sigs.map(|s| m.value(vars[s]).unwrap_or(false)).collect()
        };
        let states = (0..=depth)
            .map(|j| read(&self.frames[j], &mut self.net.latches().iter().map(|l| l.state.index())))
            .collect();
        let inputs = (0..depth)
            .map(|j| read(&self.frames[j], &mut self.net.input_signals().into_iter().map(|s| s.index())))
            .collect();
        CexTrace { states, inputs }
    }
}

/// Global checks sharing one bounded unrolling and the set of clauses
/// proved so far. Proved clauses strengthen later induction queries.
pub struct InvariantChecker<'a> {
    net: &'a Netlist,
    cfg: CheckConfig,
    bmc: Frames<'a>,
    proven: Vec<Clause>,
    pending: Vec<Clause>,
}

impl<'a> InvariantChecker<'a> {
    pub fn new(net: &'a Netlist, cfg: CheckConfig) -> Result<InvariantChecker<'a>> {
        net.validate()?;
        Ok(InvariantChecker {
            net,
            cfg,
            bmc: Frames::new(net, true, cfg.conflict_budget),
            proven: Vec::new(),
            pending: Vec::new(),
        })
    }

    /// Clauses proved to hold in every reachable state.
    pub fn proven(&self) -> &[Clause] {
        &self.proven
    }

    pub fn is_proven(&self, q: &Clause) -> bool {
        self.proven.contains(q)
    }

    fn bmc_depth(&self) -> usize {
        self.cfg.bmc_bound.max(self.cfg.kind_depth)
    }

    fn falsify(&mut self, q: &Clause) -> Option<GlobalCheck> {
        for d in 0..=self.bmc_depth() {
            self.bmc.ensure(d);
            let assumptions = self.bmc.negation_at(d, q);
            match self.bmc.session.solve(&assumptions) {
                SolveOutcome::Sat(m) => {
                    return Some(GlobalCheck::Falsified {
                        trace: self.bmc.trace(&m, d),
                    })
                }
                SolveOutcome::Unsat(_) => {}
                SolveOutcome::Unknown => return Some(GlobalCheck::Unknown),
            }
        }
        None
    }

    /// Largest subset of the pending clauses that is inductive together
    /// with the proved ones. Its members all hold initially, so they are
    /// invariants.
    fn houdini(&mut self) -> Vec<Clause> {
        let mut f = Frames::new(self.net, false, self.cfg.conflict_budget);
        f.ensure(1);
        for q in &self.proven {
            for j in 0..2 {
                let c = f.clause_at(j, q);
                f.session.add_lits(&c);
            }
        }
        let acts: Vec<Lit> = self
            .pending
            .iter()
            .map(|q| {
                let a = f.fresh().pos();
                let mut c = f.clause_at(0, q);
                c.push(!a);
                f.session.add_lits(&c);
                a
            })
            .collect();
        let mut alive = vec![true; self.pending.len()];
        'outer: loop {
            for i in 0..self.pending.len() {
                if !alive[i] {
                    continue;
                }
                let mut assumptions: Vec<Lit> =
                    acts.iter().zip(&alive).filter(|(_, &a)| a).map(|(&l, _)| l).collect();
                assumptions.extend(f.negation_at(1, &self.pending[i]));
                match f.session.solve(&assumptions) {
                    SolveOutcome::Unsat(_) => {}
                    SolveOutcome::Sat(m) => {
                        for (j, q) in self.pending.iter().enumerate() {
                            if alive[j] && !f.clause_at(1, q).iter().any(|&l| m.lit_value(l) == Some(true)) {
                                alive[j] = false;
                            }
                        }
                        continue 'outer;
                    }
                    SolveOutcome::Unknown => {
                        alive[i] = false;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        let (keep, rest): (Vec<_>, Vec<_>) =
            std::mem::take(&mut self.pending).into_iter().zip(alive).partition(|(_, a)| *a);
        self.pending = rest.into_iter().map(|(q, _)| q).collect();
        keep.into_iter().map(|(q, _)| q).collect()
    }

    /// Induction with pairwise distinct states, strengthened by the proved
    /// clauses. Sound because BMC has covered every shallower depth.
    fn k_induction(&mut self, q: &Clause) -> Option<usize> {
        let mut f = Frames::new(self.net, false, self.cfg.conflict_budget);
        for d in 0..=self.cfg.kind_depth {
            f.ensure(d);
            for p in &self.proven {
                let c = f.clause_at(d, p);
                f.session.add_lits(&c);
            }
            for i in 0..d {
                f.distinct(i, d);
            }
            if d == 0 {
                continue;
            }
            let c = f.clause_at(d - 1, q);
            f.session.add_lits(&c);
            let assumptions = f.negation_at(d, q);
            match f.session.solve(&assumptions) {
                SolveOutcome::Unsat(_) => return Some(d),
                SolveOutcome::Sat(_) => {}
                SolveOutcome::Unknown => return None,
            }
        }
        None
    }

    /// Checks one clause. Clauses left unproved stay pending and may be
    /// proved by a later call together with newer clauses; see
    /// [`InvariantChecker::is_proven`].
    pub fn check(&mut self, q: &Clause) -> Result<GlobalCheck> {
        check_state_clause(self.net, q)?;
        if self.is_proven(q) {
            return Ok(GlobalCheck::Global { depth: 1 });
        }
        if let Some(r) = self.falsify(q) {
            return Ok(r);
        }
        if !self.pending.contains(q) {
            self.pending.push(q.clone());
        }
        let proved = self.houdini();
        self.proven.extend(proved);
        if self.is_proven(q) {
            return Ok(GlobalCheck::Global { depth: 1 });
        }
        if let Some(d) = self.k_induction(q) {
            self.pending.retain(|p| p != q);
            self.proven.push(q.clone());
            return Ok(GlobalCheck::Global { depth: d });
        }
        Ok(GlobalCheck::Unknown)
    }
}

/// Decides whether state clause `q` holds in every reachable state of `n`.
pub fn check_global_invariant(n: &Netlist, q: &Clause, cfg: &CheckConfig) -> Result<GlobalCheck> {
    InvariantChecker::new(n, *cfg)?.check(q)
}

/// `p_agg ⊨ q`.
pub fn implied_by_aggregate(p_agg: &[Clause], q: &Clause) -> Result<bool> {
    implies(p_agg, q, None).ok_or_else(|| Error::Budget("aggregate implication".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CandidateStatus {
    /// Holds after exactly `k` transitions; not checked further.
    LocalOnly,
    Global,
    Falsified,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCandidate {
    /// State clause in latch space.
    pub clause: Clause,
    pub text: String,
    pub status: CandidateStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<CexTrace>,
    pub implied_by_aggregate: bool,
    pub unwanted_flag: bool,
    /// Clause of `F_k` whose take-out produced the candidate.
    pub target: usize,
}

impl InvariantCandidate {
    fn record(&mut self, r: GlobalCheck) {
        self.status = r.status();
        match r {
            GlobalCheck::Global { depth } => self.depth = Some(depth),
            GlobalCheck::Falsified { trace } => self.trace = Some(trace),
            GlobalCheck::Unknown => {}
        }
    }
}

/// A proved clause over the data buffer alone says some buffer contents
/// are unreachable.
pub fn flag_unwanted_fifo(candidate: &InvariantCandidate, s_data: &BTreeSet<usize>) -> bool {
    candidate.status == CandidateStatus::Global && candidate.clause.vars().all(|v| s_data.contains(&latch_of(v)))
}

/// Specified invariant of a FIFO: the size never exceeds the capacity.
pub fn fifo_aggregate(f: &Fifo) -> Vec<Clause> {
    let w = f.size.len();
    ((f.n as u64 + 1)..(1u64 << w))
        .map(|v| {
            Clause::new(f.size.iter().enumerate().map(|(b, &i)| latch_var(i).lit((v >> b) & 1 == 0)))
                .expect("distinct latches")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FifoPipelineConfig {
    pub n: usize,
    pub p: usize,
    pub val: u64,
    pub bug: Bug,
    /// Time frames of the unrolling.
    pub k: usize,
    /// Orders the targets and seeds the engine.
    pub seed: u64,
    pub engine: EngineConfig,
    /// PQE problems per run.
    pub max_problems: usize,
    /// Candidates per run.
    pub clause_cap: usize,
    /// Wall-clock limit of the PQE part of a run.
    pub run_budget: Duration,
    pub check: CheckConfig,
    /// Drop solution clauses implied by `F_k` minus the target.
    pub prune: bool,
    pub stop_on_unwanted: bool,
}

impl FifoPipelineConfig {
    pub fn new(n: usize, bug: Bug, seed: u64) -> FifoPipelineConfig {
        let k = 5;
        FifoPipelineConfig {
            n,
            p: 4,
            val: 5,
            bug,
            k,
            seed,
            engine: EngineConfig {
                seed,
                shrink: true,
                clause_cap: Some(5),
                time_budget: Some(Duration::from_secs(10)),
                ..EngineConfig::default()
            },
            max_problems: 1000,
            clause_cap: 100,
            run_budget: Duration::from_secs(2000),
            check: CheckConfig {
                bmc_bound: 2 * n + 2,
                kind_depth: 10,
                conflict_budget: Some(200_000),
            },
            prune: true,
            stop_on_unwanted: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FifoRunReport {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub val: u64,
    pub bug: Bug,
    pub latches: usize,
    pub problems_tried: usize,
    pub problems_finished: usize,
    pub candidates: Vec<InvariantCandidate>,
    pub unwanted_found: bool,
    /// Seconds; the only field that varies between identical runs.
    pub runtime: f64,
}

impl FifoRunReport {
    pub fn unwanted(&self) -> impl Iterator<Item = &InvariantCandidate> {
        self.candidates.iter().filter(|c| c.unwanted_flag)
    }
}

/// One seeded invariant-generation run on a FIFO. Targets are clauses of
/// `F_k` with a last-frame variable, taken out in seeded random order.
/// Every new clause is checked globally right away.
pub fn run_fifo_pipeline(cfg: &FifoPipelineConfig) -> Result<FifoRunReport> {
    let start = Instant::now();
    let fifo = gen_fifo(cfg.n, cfg.p, cfg.val, cfg.bug)?;
    let net = &fifo.netlist;
    let u = unroll(net, cfg.k, true)?;
    let s_data: BTreeSet<usize> = fifo.s_data().into_iter().collect();
    let p_agg = fifo_aggregate(&fifo);
    let mut targets = local_targets(&u);
    targets.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));

    let mut checker = InvariantChecker::new(net, cfg.check)?;
    let mut report = FifoRunReport {
        seed: cfg.seed,
        n: cfg.n,
        p: cfg.p,
        k: cfg.k,
        val: cfg.val,
        bug: cfg.bug,
        latches: net.latches().len(),
        problems_tried: 0,
        problems_finished: 0,
        candidates: Vec::new(),
        unwanted_found: false,
        runtime: 0.0,
    };
    let deadline = start + cfg.run_budget;
    let mut seen: BTreeSet<Clause> = BTreeSet::new();
    for &t in targets.iter().take(cfg.max_problems) {
        if report.unwanted_found && cfg.stop_on_unwanted {
            break;
        }
        let now = Instant::now();
        if now >= deadline || report.candidates.len() >= cfg.clause_cap {
            break;
        }
        let mut ecfg = cfg.engine.clone();
        ecfg.time_budget = Some(ecfg.time_budget.map_or(deadline - now, |b| b.min(deadline - now)));
        let prop = if cfg.prune {
            gen_local_invariant_in(&u, t, &ecfg)?
        } else {
            let sol = crate::pqe::take_out(&u.formula, t, &ecfg)?;
            Property {
                clauses: sol.clauses,
                target: t,
                constraint: None,
                status: sol.status,
                stats: sol.stats,
            }
        };
        report.problems_tried += 1;
        if prop.status.is_complete() {
            report.problems_finished += 1;
        }
        for c in &prop.clauses {
            let q = to_state_clause(&u, c).expect("solution clauses are over the last frame");
            if !seen.insert(q.clone()) || report.candidates.len() >= cfg.clause_cap {
                continue;
            }
            let mut cand = InvariantCandidate {
                text: describe_state_clause(net, &q),
                implied_by_aggregate: implied_by_aggregate(&p_agg, &q)?,
                clause: q.clone(),
                status: CandidateStatus::LocalOnly,
                depth: None,
                trace: None,
                unwanted_flag: false,
                target: t,
            };
            cand.record(checker.check(&q)?);
            report.candidates.push(cand);
            for cand in &mut report.candidates {
                if cand.status == CandidateStatus::Unknown && checker.is_proven(&cand.clause) {
                    cand.status = CandidateStatus::Global;
                    cand.depth = Some(1);
                }
                cand.unwanted_flag = flag_unwanted_fifo(cand, &s_data);
            }
            report.unwanted_found = report.candidates.iter().any(|c| c.unwanted_flag);
        }
    }
    report.runtime = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Runs one pipeline per seed; `jobs` threads, results in seed order.
pub fn run_fifo_pipelines(base: &FifoPipelineConfig, seeds: &[u64], jobs: usize) -> Result<Vec<FifoRunReport>> {
    let run = |&s: &u64| {
        let mut c = base.clone();
        c.seed = s;
        c.engine.seed = s;
        run_fifo_pipeline(&c)
    };
    if jobs <= 1 {
        return seeds.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Parameter(e.to_string()))?;
    pool.install(|| seeds.par_iter().map(run).collect())
}

/// One CSV line per configuration: averages over the runs.
pub fn fifo_summary_csv(reports: &[FifoRunReport]) -> String {
    let mut out = String::from("n,latches,k,bug,runs,problems_solved,finished_pct,unwanted_runs,runtime_s\n");
    let mut keys: Vec<(usize, usize, Bug)> = reports.iter().map(|r| (r.n, r.k, r.bug)).collect();
    keys.dedup();
    for (n, k, bug) in keys {
        let rs: Vec<&FifoRunReport> = reports.iter().filter(|r| (r.n, r.k, r.bug) == (n, k, bug)).collect();
        let runs = rs.len() as f64;
        let tried: usize = rs.iter().map(|r| r.problems_tried).sum();
        let finished: usize = rs.iter().map(|r| r.problems_finished).sum();
        let pct = if tried == 0 { 0.0 } else { 100.0 * finished as f64 / tried as f64 };
        out.push_str(&format!(
            "{n},{},{k},{},{},{:.1},{:.0},{},{:.2}\n",
            rs[0].latches,
            serde_json::to_string(&bug).unwrap().trim_matches('"'),
            rs.len(),
            tried as f64 / runs,
            pct,
            rs.iter().filter(|r| r.unwanted_found).count(),
            rs.iter().map(|r| r.runtime).sum::<f64>() / runs,
        ));
    }
    out
}

/// Whether every state of `n` is reachable in fewer than `m` transitions.
///
/// A stutter input is added first, so "in `m` transitions" and "in at most
/// `m` transitions" coincide. The initial-state clauses of frame 1 are then
/// taken out of `∃Abs_m[I_0 ∧ I_1 ∧ T_m]`; they are redundant iff the
/// states reachable in `m - 1` and `m` transitions agree.
pub fn diameter_check(n: &Netlist, m: usize, cfg: &EngineConfig) -> Result<bool> {
    if m == 0 {
        return Err(Error::Parameter("diameter bound must be at least 1".into()));
    }
    let mut net = n.clone();
    net.validate()?;
    net.add_stutter();
    let u = unroll(&net, m, true)?;
    let mut f: QuantifiedCnf = u.formula.clone();
    let mut targets = Vec::new();
    for (l, &v) in net.latches().iter().zip(&u.frames.states[1]) {
        targets.push(f.push_clause(Clause::unit(v.lit(l.init)))?);
    }
    let sol = take_out_many(&f, &targets, cfg)?;
    if !sol.status.is_complete() {
        return Err(Error::Budget(format!("diameter check at m={m}: {}", sol.status)));
    }
    let rest = f.without_clauses(&targets);
    Ok(prune_redundant(&sol.clauses, rest.clauses()).is_empty())
}
