//! Depth-first search with a node budget and deterministic parallel fan-out.
//!
//! A problem hands out children in its search order. The sequential first
//! witness is always the one reported, whatever the thread count: the tree
//! is split into an ordered frontier, frontier entries run in parallel, and
//! results are merged by frontier rank.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

/// Default node-expansion budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Search nodes visited.
    pub nodes: u64,
    /// `true` iff no branch was cut off by the budget.
    pub complete: bool,
}

/// Result of a first-witness search. `found == None` is a proof of absence
/// only when `stats.complete` holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub found: Option<T>,
    pub stats: SearchStats,
}

impl<T> SearchOutcome<T> {
    pub fn is_proven_absent(&self) -> bool {
        self.found.is_none() && self.stats.complete
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        SearchOutcome {
            found: self.found.map(f),
            stats: self.stats,
        }
    }
}

pub(crate) trait Problem: Sync {
    type State: Clone + Send;
    type Witness: Send;

    fn root(&self) -> Self::State;
    /// Appends the children of `state` in search order.
    fn children(&self, state: &Self::State, out: &mut Vec<Self::State>);
    /// A witness if `state` is a complete solution.
    fn witness(&self, state: &Self::State) -> Option<Self::Witness>;
}

enum Branch<W> {
    Found(W),
    Exhausted,
    Truncated,
    Cancelled,
}

struct Shared {
    nodes: AtomicU64,
    budget: u64,
    best_rank: AtomicUsize,
    truncated: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.truncated.store(true, Ordering::Relaxed);
            false
        } else {
            true
        }
    }
}

fn dfs<P: Problem>(p: &P, start: P::State, rank: usize, shared: &Shared) -> Branch<P::Witness> {
    let mut stack = vec![start];
    let mut buf = Vec::new();
    let mut steps: u32 = 0;
    while let Some(state) = stack.pop() {
        if !shared.tick() {
            return Branch::Truncated;
        }
        steps = steps.wrapping_add(1);
        if steps.is_multiple_of(1024) && shared.best_rank.load(Ordering::Relaxed) < rank {
            return Branch::Cancelled;
        }
        if let Some(w) = p.witness(&state) {
            return Branch::Found(w);
        }
        buf.clear();
        p.children(&state, &mut buf);
        stack.extend(buf.drain(..).rev());
    }
    Branch::Exhausted
}

/// Splits the tree into an ordered frontier of at least `target` states,
/// or fewer if the tree is small. Witness states stay in place as leaves.
fn frontier<P: Problem>(p: &P, target: usize, shared: &Shared) -> Option<Vec<P::State>> {
    let mut level = vec![p.root()];
    let mut buf = Vec::new();
    for _ in 0..64 {
        if level.len() >= target {
            return Some(level);
        }
        let mut next = Vec::with_capacity(level.len() * 2);
        let mut grew = false;
        for s in level {
            if p.witness(&s).is_some() {
                next.push(s);
                continue;
            }
            if !shared.tick() {
                return None;
            }
            buf.clear();
            p.children(&s, &mut buf);
            grew |= !buf.is_empty();
            next.append(&mut buf);
        }
        level = next;
        if !grew {
            break;
        }
    }
    Some(level)
}

pub(crate) fn find_first<P: Problem>(p: &P, budget: u64) -> SearchOutcome<P::Witness> {
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget,
        best_rank: AtomicUsize::new(usize::MAX),
        truncated: AtomicBool::new(false),
    };
    let threads = rayon::current_num_threads();
    let result = if threads <= 1 {
        match dfs(p, p.root(), 0, &shared) {
            Branch::Found(w) => Some(w),
            _ => None,
        }
    } else {
        match frontier(p, threads * 8, &shared) {
            None => None,
            Some(states) => {
                let results: Vec<Branch<P::Witness>> = states
                    .into_par_iter()
                    .enumerate()
                    .map(|(rank, s)| {
                        if shared.best_rank.load(Ordering::Relaxed) < rank {
                            return Branch::Cancelled;
                        }
                        let r = dfs(p, s, rank, &shared);
                        if matches!(r, Branch::Found(_)) {
                            shared.best_rank.fetch_min(rank, Ordering::Relaxed);
                        }
                        r
                    })
                    .collect();
                let mut found = None;
                for r in results {
                    match r {
                        Branch::Found(w) => {
                            found = Some(w);
                            break;
                        }
                        Branch::Exhausted => continue,
                        Branch::Truncated | Branch::Cancelled => break,
                    }
                }
                found
            }
        }
    };
    let nodes = shared.nodes.load(Ordering::Relaxed).min(budget);
    let complete = result.is_some() || !shared.truncated.load(Ordering::Relaxed);
    SearchOutcome {
        found: result,
        stats: SearchStats { nodes, complete },
    }
}

/// Counts all witnesses.
pub(crate) fn count_all<P: Problem>(p: &P, budget: u64) -> (u64, SearchStats) {
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget,
        best_rank: AtomicUsize::new(usize::MAX),
        truncated: AtomicBool::new(false),
    };
    let count_from = |start: P::State| -> u64 {
        let mut stack = vec![start];
        let mut buf = Vec::new();
        let mut count = 0;
        while let Some(state) = stack.pop() {
            if !shared.tick() {
                return count;
            }
            if p.witness(&state).is_some() {
                count += 1;
                continue;
            }
            buf.clear();
            p.children(&state, &mut buf);
            stack.extend(buf.drain(..).rev());
        }
        count
    };
    let threads = rayon::current_num_threads();
    let total = if threads <= 1 {
        count_from(p.root())
    } else {
        match frontier(p, threads * 8, &shared) {
            None => 0,
            Some(states) => states.into_par_iter().map(count_from).sum(),
        }
    };
    let truncated = shared.truncated.load(Ordering::Relaxed);
    (
        total,
        SearchStats {
            nodes: shared.nodes.load(Ordering::Relaxed).min(budget),
            complete: !truncated,
        },
    )
}
