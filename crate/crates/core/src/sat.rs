//! A small CDCL SAT solver: two watched literals, first-UIP learning,
//! activity-based branching with phase saving and Luby restarts.
//! Deterministic for a fixed clause order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit(u32);

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit((var as u32) << 1)
    }

    pub fn neg(var: usize) -> Lit {
        Lit(((var as u32) << 1) | 1)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    /// The conflict budget ran out.
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct SatStats {
    pub decisions: u64,
    pub conflicts: u64,
}

const UNASSIGNED: u8 = 2;

pub(crate) struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    inconsistent: bool,
    pub stats: SatStats,
}

impl Solver {
    pub fn new(vars: usize) -> Self {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * vars],
            value: vec![UNASSIGNED; vars],
            level: vec![0; vars],
            reason: vec![None; vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; vars],
            var_inc: 1.0,
            phase: vec![false; vars],
            seen: vec![false; vars],
            inconsistent: false,
            stats: SatStats::default(),
        }
    }

    pub fn vars(&self) -> usize {
        self.value.len()
    }

    /// 1 true, 0 false, 2 unassigned.
    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[l.var()] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ l.is_neg() as u8,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var();
        self.value[v] = !l.is_neg() as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause before solving.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.inconsistent {
            return;
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => match self.lit_value(c[0]) {
                UNASSIGNED => self.enqueue(c[0], None),
                0 => self.inconsistent = true,
                _ => {}
            },
            _ => {
                let id = self.clauses.len();
                self.watches[c[0].index()].push(id);
                self.watches[c[1].index()].push(id);
                self.clauses.push(c);
            }
        }
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.value[first.var()] != UNASSIGNED
                    && (self.value[first.var()] ^ first.is_neg() as u8) == 1
                {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let lv = self.value[l.var()];
                    if lv == UNASSIGNED || (lv ^ l.is_neg() as u8) == 1 {
                        c.swap(1, k);
                        self.watches[c[1].index()].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                match self.lit_value(first) {
                    0 => {
                        conflict = Some(ci);
                        break;
                    }
                    _ => {
                        self.enqueue(first, Some(ci));
                        i += 1;
                    }
                }
            }
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    /// First-UIP learning; returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut pending = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == self.decision_level() {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var()] = false;
            pending -= 1;
            p = Some(lit);
            if pending == 0 {
                break;
            }
            confl = self.reason[lit.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict at a positive level");
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var()] > self.level[learnt[best].var()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[learnt[1].var()];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for l in self.trail.drain(lim..) {
            let v = l.var();
            self.phase[v] = !l.is_neg();
            self.value[v] = UNASSIGNED;
            self.reason[v] = None;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.vars() {
            if self.value[v] == UNASSIGNED && best.is_none_or(|b| self.activity[v] > self.activity[b]) {
                best = Some(v);
            }
        }
        best
    }

    fn luby(mut i: u64) -> u64 {
        // i-th term (from 0) of 1 1 2 1 1 2 4 ...
        let mut size = 1;
        let mut seq = 0;
        while size < i + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != i {
            size = (size - 1) >> 1;
            seq -= 1;
            i %= size;
        }
        1 << seq
    }

    pub fn solve(&mut self, conflict_budget: u64) -> SatResult {
        if self.inconsistent || self.propagate().is_some() {
            return SatResult::Unsat;
        }
        let mut restarts = 0;
        let mut until_restart = 100 * Self::luby(0);
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return SatResult::Unsat;
                }
                if self.stats.conflicts > conflict_budget {
                    return SatResult::Unknown;
                }
                let (learnt, back) = self.analyze(confl);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let id = self.clauses.len();
                    self.watches[learnt[0].index()].push(id);
                    self.watches[learnt[1].index()].push(id);
                    let first = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(first, Some(id));
                }
                self.var_inc /= 0.95;
                until_restart = until_restart.saturating_sub(1);
                continue;
            }
            if until_restart == 0 {
                restarts += 1;
                until_restart = 100 * Self::luby(restarts);
                self.backtrack(0);
            }
            match self.pick() {
                None => {
                    return SatResult::Sat(self.value.iter().map(|&v| v == 1).collect());
                }
                Some(v) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    let l = if self.phase[v] { Lit::pos(v) } else { Lit::neg(v) };
                    self.enqueue(l, None);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(xs: &[i32]) -> Vec<Lit> {
        xs.iter()
            .map(|&x| {
                let v = x.unsigned_abs() as usize - 1;
                if x > 0 { Lit::pos(v) } else { Lit::neg(v) }
            })
            .collect()
    }

    fn satisfies(model: &[bool], clauses: &[Vec<i32>]) -> bool {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&x| model[x.unsigned_abs() as usize - 1] == (x > 0))
        })
    }

    fn brute_force(vars: usize, clauses: &[Vec<i32>]) -> bool {
        (0..1u32 << vars).any(|m| {
            let model: Vec<bool> = (0..vars).map(|i| m >> i & 1 == 1).collect();
            satisfies(&model, clauses)
        })
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (0..15).map(Solver::luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let (p, h) = (5, 4);
        let var = |i: usize, j: usize| (i * h + j) as i32 + 1;
        let mut cs = Vec::new();
        for i in 0..p {
            cs.push((0..h).map(|j| var(i, j)).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    cs.push(vec![-var(a, j), -var(b, j)]);
                }
            }
        }
        let mut s = Solver::new(p * h);
        for c in &cs {
            s.add_clause(&clause(c));
        }
        assert_eq!(s.solve(u64::MAX), SatResult::Unsat);
    }

    #[test]
    fn agrees_with_brute_force_on_random_3cnf() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = move |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % m
        };
        for _ in 0..300 {
            let vars = 3 + next(8) as usize;
            let count = next(5 * vars as u64) as usize;
            let cs: Vec<Vec<i32>> = (0..count)
                .map(|_| {
                    (0..1 + next(3))
                        .map(|_| {
                            let v = 1 + next(vars as u64) as i32;
                            if next(2) == 0 { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let mut s = Solver::new(vars);
            for c in &cs {
                s.add_clause(&clause(c));
            }
            match s.solve(u64::MAX) {
                SatResult::Sat(model) => assert!(satisfies(&model, &cs)),
                SatResult::Unsat => assert!(!brute_force(vars, &cs), "{cs:?}"),
                SatResult::Unknown => unreachable!(),
            }
        }
    }
}
