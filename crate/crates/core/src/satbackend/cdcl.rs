//! Conflict-driven clause learning over plain CNF.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Budget, SatError, SatResult, UnknownReason};
use crate::encoding::CnfFormula;

const TRUE: u8 = 1;
const FALSE: u8 = 0;
const UNDEF: u8 = 2;

type Lit = u32;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    (v << 1) | (dimacs < 0) as u32
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn value(assigns: &[u8], l: Lit) -> u8 {
    let a = assigns[var(l)];
    if a == UNDEF {
        UNDEF
    } else {
        a ^ (l & 1) as u8
    }
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: usize,
    blocker: Lit,
}

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

/// Indexed binary max-heap of variables keyed by activity.
#[derive(Debug, Default)]
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn less(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::less(v, self.heap[parent], act) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::less(self.heap[r], self.heap[l], act) { r } else { l };
            if !Self::less(self.heap[child], v, act) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }
}

/// Luby sequence value at index `x` (0-based): 1 1 2 1 1 2 4 ...
fn luby(mut x: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

pub(super) struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    learnts: Vec<usize>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<u8>,
    phase: Vec<bool>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    seen: Vec<bool>,
    ok: bool,
    conflicts: u64,
}

impl Solver {
    pub(super) fn new(f: &CnfFormula, seed: u64) -> Result<Self, SatError> {
        if !f.xors.is_empty() {
            return Err(SatError::MalformedFormula("parity constraints must be lowered first".into()));
        }
        let n = f.num_vars as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let activity: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 1e-5).collect();
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            phase: vec![false; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap { heap: Vec::with_capacity(n), pos: vec![None; n] },
            seen: vec![false; n],
            ok: true,
            conflicts: 0,
        };
        for v in 0..n {
            s.heap.insert(v, &s.activity);
        }
        for c in &f.clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > n {
                    return Err(SatError::MalformedFormula(format!("literal {l} out of range 1..={n}")));
                }
            }
            s.add_clause(c.iter().map(|&l| lit_of(l)).collect());
        }
        Ok(s)
    }

    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        if !self.ok {
            return;
        }
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == w[1] ^ 1) {
            return;
        }
        lits.retain(|&l| value(&self.assigns, l) != FALSE);
        if lits.iter().any(|&l| value(&self.assigns, l) == TRUE) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> usize {
        let cref = self.clauses.len();
        self.watches[(lits[0] ^ 1) as usize].push(Watcher { cref, blocker: lits[1] });
        self.watches[(lits[1] ^ 1) as usize].push(Watcher { cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt, deleted: false, activity: 0.0 });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.assigns[v] = ((l & 1) ^ 1) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.clauses[w.cref].deleted {
                    continue;
                }
                if value(&self.assigns, w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[w.cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let kept = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && value(&self.assigns, first) == TRUE {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if value(&self.assigns, lits[k]) != FALSE {
                        lits.swap(1, k);
                        self.watches[(lits[1] ^ 1) as usize].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if value(&self.assigns, first) == FALSE {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            let grown = std::mem::replace(&mut self.watches[p as usize], ws);
            self.watches[p as usize].extend(grown);
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, c: usize) {
        self.clauses[c].activity += self.cla_inc;
        if self.clauses[c].activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP learning. Returns the learnt clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            if self.clauses[confl].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= self.decision_level() {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[var(lit)].expect("implied literal has a reason");
        }
        learnt[0] = p.unwrap() ^ 1;

        // drop literals implied by the rest of the clause
        let candidates = learnt.clone();
        let mut kept = vec![learnt[0]];
        for &l in &candidates[1..] {
            let redundant = match self.reason[var(l)] {
                None => false,
                Some(r) => self.clauses[r].lits[1..].iter().all(|&x| self.seen[var(x)] || self.level[var(x)] == 0),
            };
            if !redundant {
                kept.push(l);
            }
        }
        for &l in &candidates {
            self.seen[var(l)] = false;
        }
        let mut learnt = kept;
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            bt = self.level[var(learnt[1])];
        }
        (learnt, bt)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn locked(&self, c: usize) -> bool {
        let l0 = self.clauses[c].lits[0];
        self.reason[var(l0)] == Some(c) && value(&self.assigns, l0) == TRUE
    }

    fn reduce_db(&mut self) {
        let mut ls = std::mem::take(&mut self.learnts);
        ls.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a], &self.clauses[b]);
            ca.activity.partial_cmp(&cb.activity).unwrap().then(a.cmp(&b))
        });
        let half = ls.len() / 2;
        let mut keep = Vec::with_capacity(ls.len());
        for (k, &c) in ls.iter().enumerate() {
            if k < half && self.clauses[c].lits.len() > 2 && !self.locked(c) {
                self.clauses[c].deleted = true;
                self.clauses[c].lits = Vec::new();
            } else {
                keep.push(c);
            }
        }
        keep.sort_unstable();
        self.learnts = keep;
        let clauses = &self.clauses;
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !clauses[w.cref].deleted);
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(((v as u32) << 1) | (!self.phase[v]) as u32);
            }
        }
        None
    }

    pub(super) fn solve(&mut self, budget: &Budget) -> SatResult {
        if !self.ok || self.propagate().is_some() {
            self.ok = false;
            return SatResult::Unsat;
        }
        let start = Instant::now();
        let mut restarts = 0u64;
        let mut until_restart = 100 * luby(0);
        let mut max_learnts = (self.clauses.len() as f64 / 3.0).max(1000.0);
        let mut steps = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SatResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let l0 = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(l0, Some(cref));
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                if budget.max_conflicts.is_some_and(|m| self.conflicts >= m) {
                    return SatResult::Unknown(UnknownReason::ConflictBudget);
                }
                if self.conflicts.is_multiple_of(64) && budget.max_time.is_some_and(|t| start.elapsed() >= t) {
                    return SatResult::Unknown(UnknownReason::Timeout);
                }
                until_restart = until_restart.saturating_sub(1);
            } else {
                if until_restart == 0 {
                    restarts += 1;
                    until_restart = 100 * luby(restarts);
                    self.cancel_until(0);
                    continue;
                }
                if self.learnts.len() as f64 >= max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    max_learnts *= 1.1;
                }
                steps += 1;
                if steps.is_multiple_of(1024) && budget.max_time.is_some_and(|t| start.elapsed() >= t) {
                    return SatResult::Unknown(UnknownReason::Timeout);
                }
                match self.pick_branch() {
                    None => {
                        let mut model = vec![false; self.num_vars + 1];
                        for v in 0..self.num_vars {
                            model[v + 1] = self.assigns[v] == TRUE;
                        }
                        return SatResult::Sat(model);
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let v: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(v, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
