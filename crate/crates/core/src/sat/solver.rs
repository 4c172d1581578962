use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::{Model, SatBackend, SatConfig, SatStats, SolveOutcome};
use crate::cnf::{Clause, Lit};

const RESTART_BASE: f64 = 100.0;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

#[derive(Debug, Clone, Copy)]
struct Watch {
    cref: usize,
    blocker: Lit,
}

/// Conflict-driven solver with two watched literals, first-UIP learning,
/// activity-based branching, phase saving and Luby restarts.
///
/// Clauses are only ever added. Between `solve` calls the solver sits at
/// decision level 0.
#[derive(Debug, Clone)]
pub struct Session {
    cfg: SatConfig,
    clauses: Vec<ClauseData>,
    learnts: Vec<usize>,
    watches: Vec<Vec<Watch>>,
    value: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    polarity: Vec<bool>,
    used: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    stats: SatStats,
    rng: ChaCha8Rng,
    deadline: Option<Instant>,
    max_learnts: f64,
}

fn lit_val(value: &[Option<bool>], l: Lit) -> Option<bool> {
    value[l.var().index() as usize].map(|b| b == l.is_positive())
}

fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

impl Session {
    pub fn new(cfg: SatConfig) -> Session {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Session {
            cfg,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2],
            value: vec![None],
            level: vec![0],
            reason: vec![None],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            polarity: vec![false],
            used: vec![false],
            seen: vec![false],
            ok: true,
            stats: SatStats::default(),
            rng,
            deadline: None,
            max_learnts: 2000.0,
        }
    }

    pub fn with_clauses<'a>(cfg: SatConfig, clauses: impl IntoIterator<Item = &'a Clause>) -> Session {
        let mut s = Session::new(cfg);
        for c in clauses {
            s.add_clause(c);
        }
        s
    }

    pub fn config(&self) -> &SatConfig {
        &self.cfg
    }

    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.cfg.conflict_budget = budget;
    }

    pub fn set_shrink(&mut self, shrink: bool) {
        self.cfg.shrink_failed = shrink;
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn stats(&self) -> SatStats {
        self.stats
    }

    /// False once the clause set is known to be contradictory.
    pub fn is_consistent(&self) -> bool {
        self.ok
    }

    fn ensure_var(&mut self, v: usize) {
        while self.value.len() <= v {
            let (act, phase) = if self.cfg.seed == 0 {
                (0.0, false)
            } else {
                (self.rng.gen::<f64>() * 1e-5, self.rng.gen_bool(0.5))
            };
            self.value.push(None);
            self.level.push(0);
            self.reason.push(None);
            self.activity.push(act);
            self.polarity.push(phase);
            self.used.push(false);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
        }
        self.heap.grow(self.value.len());
    }

    fn mark_used(&mut self, l: Lit) {
        let v = l.var().index() as usize;
        self.ensure_var(v);
        if !self.used[v] {
            self.used[v] = true;
            if self.value[v].is_none() {
                self.heap.insert(v as u32, &self.activity);
            }
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var().index() as usize;
        debug_assert!(self.value[v].is_none());
        self.value[v] = Some(l.is_positive());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    pub fn add_clause(&mut self, clause: &Clause) {
        self.add_lits(clause.lits());
    }

    /// Adds a disjunction; the literals need not be normalized.
    pub fn add_lits(&mut self, lits: &[Lit]) {
        for &l in lits {
            self.mark_used(l);
        }
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut kept: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match lit_val(&self.value, l) {
                Some(true) => return,
                Some(false) => {}
                None => {
                    if kept.contains(&!l) {
                        return;
                    }
                    if !kept.contains(&l) {
                        kept.push(l);
                    }
                }
            }
        }
        match kept.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(kept, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> usize {
        let cref = self.clauses.len();
        self.watches[lits[0].code()].push(Watch {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].code()].push(Watch {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(ClauseData {
            lits,
            learnt,
            activity: 0.0,
            deleted: false,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn propagate(&mut self) -> Option<usize> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_val(&self.value, w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                if self.clauses[cref].deleted {
                    continue;
                }
                let lits = &mut self.clauses[cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let kept = Watch {
                    cref,
                    blocker: first,
                };
                if first != w.blocker && lit_val(&self.value, first) == Some(true) {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if lit_val(&self.value, lits[k]) != Some(false) {
                        lits.swap(1, k);
                        let nl = lits[1];
                        self.watches[nl.code()].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if lit_val(&self.value, first) == Some(false) {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit::from_code(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = q.var().index() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index() as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            let v = lit.var().index() as usize;
            p = Some(lit);
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[v].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict at positive level");

        // Local minimization: drop literals implied by others in the clause.
        let original = learnt.clone();
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let v = l.var().index() as usize;
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r].lits[1..].iter().all(|q| {
                    let qv = q.var().index() as usize;
                    self.seen[qv] || self.level[qv] == 0
                }),
            };
            if !redundant {
                keep.push(l);
            }
        }
        for l in &original {
            self.seen[l.var().index() as usize] = false;
        }
        let mut learnt = keep;

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index() as usize]
                    > self.level[learnt[max_i].var().index() as usize]
                {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var().index() as usize] as usize;
        }
        (learnt, bt)
    }

    /// Assumptions responsible for `p` being false.
    fn analyze_final(&mut self, p: Lit, assumptions: &[Lit]) -> Vec<Lit> {
        let mut failed = vec![p];
        if self.decision_level() == 0 {
            return failed;
        }
        self.seen[p.var().index() as usize] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let x = self.trail[i].var().index() as usize;
            if !self.seen[x] {
                continue;
            }
            match self.reason[x] {
                None => failed.push(self.trail[i]),
                Some(r) => {
                    for k in 1..self.clauses[r].lits.len() {
                        let qv = self.clauses[r].lits[k].var().index() as usize;
                        if self.level[qv] > 0 {
                            self.seen[qv] = true;
                        }
                    }
                }
            }
            self.seen[x] = false;
        }
        self.seen[p.var().index() as usize] = false;
        assumptions
            .iter()
            .copied()
            .filter(|a| failed.contains(a))
            .fold(Vec::new(), |mut acc, a| {
                if !acc.contains(&a) {
                    acc.push(a);
                }
                acc
            })
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index() as usize;
            self.value[v] = None;
            self.reason[v] = None;
            if self.cfg.phase_saving {
                self.polarity[v] = l.is_positive();
            }
            if self.used[v] {
                self.heap.insert(v as u32, &self.activity);
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl);
        self.qhead = self.trail.len();
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| {
                let cd = &self.clauses[c];
                let first = cd.lits[0];
                let locked = self.reason[first.var().index() as usize] == Some(c)
                    && lit_val(&self.value, first) == Some(true);
                !cd.deleted && cd.lits.len() > 2 && !locked
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .total_cmp(&self.clauses[b].activity)
                .then(a.cmp(&b))
        });
        for &c in &cands[..cands.len() / 2] {
            self.clauses[c].deleted = true;
            self.clauses[c].lits = Vec::new();
        }
        let clauses = &self.clauses;
        self.learnts.retain(|&c| !clauses[c].deleted);
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref].deleted);
        }
        self.max_learnts *= 1.1;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.value[v as usize].is_none() {
                let var = crate::cnf::Var::new(v);
                return Some(var.lit(self.polarity[v as usize]));
            }
        }
        None
    }

    fn model(&self) -> Model {
        Model::new(self.value.clone())
    }

    fn search(&mut self, assumptions: &[Lit]) -> SolveOutcome {
        self.stats.calls += 1;
        if !self.ok {
            return SolveOutcome::Unsat(Vec::new());
        }
        for &a in assumptions {
            self.mark_used(a);
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SolveOutcome::Unsat(Vec::new());
        }
        let mut conflicts = 0u64;
        let mut restarts = 0u64;
        let mut restart_limit = luby(2.0, 0) * RESTART_BASE;
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SolveOutcome::Unsat(Vec::new());
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if self.cfg.conflict_budget.is_some_and(|b| conflicts >= b) {
                    self.cancel_until(0);
                    return SolveOutcome::Unknown;
                }
                if conflicts % 32 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
                    self.cancel_until(0);
                    return SolveOutcome::Unknown;
                }
                continue;
            }
            if since_restart as f64 >= restart_limit {
                restarts += 1;
                since_restart = 0;
                restart_limit = luby(2.0, restarts) * RESTART_BASE;
                self.cancel_until(0);
                continue;
            }
            if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
            }
            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match lit_val(&self.value, a) {
                    Some(true) => self.trail_lim.push(self.trail.len()),
                    Some(false) => {
                        let failed = self.analyze_final(a, assumptions);
                        self.cancel_until(0);
                        return SolveOutcome::Unsat(failed);
                    }
                    None => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let decision = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => {
                        let m = self.model();
                        self.cancel_until(0);
                        return SolveOutcome::Sat(m);
                    }
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(decision, None);
        }
    }

    /// Solves under assumptions.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveOutcome {
        let out = self.search(assumptions);
        if !self.cfg.shrink_failed {
            return out;
        }
        let SolveOutcome::Unsat(mut core) = out else {
            return out;
        };
        let mut i = 0;
        while i < core.len() && core.len() > 1 {
            let trial: Vec<Lit> = core
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &l)| l)
                .collect();
            match self.search(&trial) {
                SolveOutcome::Unsat(smaller) => core = smaller,
                _ => i += 1,
            }
        }
        SolveOutcome::Unsat(core)
    }
}

impl SatBackend for Session {
    fn add_clause(&mut self, clause: &Clause) {
        Session::add_clause(self, clause)
    }

    fn solve(&mut self, assumptions: &[Lit]) -> SolveOutcome {
        Session::solve(self, assumptions)
    }

    fn stats(&self) -> SatStats {
        self.stats
    }

    fn set_deadline(&mut self, deadline: Option<Instant>) {
        Session::set_deadline(self, deadline)
    }
}
