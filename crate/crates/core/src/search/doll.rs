//! Russian-doll branch-and-bound for maximum independent sets in hypergraphs
//! whose edges have at most three vertices.
//!
//! Vertices are processed in index order. Level `k` answers "what is the
//! largest independent subset of vertices `0..k`?" by forcing vertex `k - 1`
//! in and asking for one more than level `k - 1`. Inside a level the search
//! branches on the highest undecided vertex, so the undecided vertices always
//! lie in a prefix whose answer is already known; that answer is the bound.

use std::time::{Duration, Instant};

use super::bits::Bits;
use super::{Budget, Hypergraph, SearchStats};

pub(crate) struct Meter {
    pub nodes: u64,
    started: Instant,
    max_nodes: Option<u64>,
    max_time: Option<Duration>,
    pub aborted: bool,
}

impl Meter {
    pub fn new(budget: &Budget) -> Self {
        Meter {
            nodes: 0,
            started: Instant::now(),
            max_nodes: budget.max_nodes,
            max_time: budget.max_time,
            aborted: false,
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    fn tick(&mut self) -> bool {
        if self.aborted {
            return false;
        }
        self.nodes += 1;
        if self.max_nodes.is_some_and(|cap| self.nodes > cap) {
            self.aborted = true;
        } else if self.nodes.is_multiple_of(4096) {
            if let Some(cap) = self.max_time {
                if self.started.elapsed() > cap {
                    self.aborted = true;
                }
            }
        }
        !self.aborted
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) struct Compiled<const W: usize> {
    n: usize,
    /// For each vertex, every edge through it minus the vertex itself.
    rests: Vec<Vec<Bits<W>>>,
    /// Vertices carrying a one-vertex edge.
    forbidden: Bits<W>,
}

impl<const W: usize> Compiled<W> {
    pub fn new(g: &Hypergraph) -> Self {
        assert!(g.vertices() <= Bits::<W>::CAPACITY);
        let mut rests = vec![Vec::new(); g.vertices()];
        let mut forbidden = Bits::empty();
        for edge in g.edges() {
            if let [v] = edge[..] {
                forbidden.insert(v);
                continue;
            }
            for &v in edge {
                let mut rest = Bits::empty();
                for &w in edge.iter().filter(|&&w| w != v) {
                    rest.insert(w);
                }
                rests[v].push(rest);
            }
        }
        Compiled {
            n: g.vertices(),
            rests,
            forbidden,
        }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    /// Adds `v` to `chosen`: returns the undecided set with `v` removed and
    /// every vertex that would now complete an edge excluded. `None` if `v`
    /// itself completes an edge.
    #[inline]
    fn include(&self, v: usize, chosen: Bits<W>, undecided: Bits<W>) -> Option<Bits<W>> {
        let chosen = chosen.with(v);
        let mut open_set = undecided.without(v);
        for rest in &self.rests[v] {
            if !rest.is_subset(&chosen.or(&open_set)) {
                continue;
            }
            let open = rest.and(&open_set);
            if open.is_empty() {
                return None;
            }
            if let Some(w) = open.single() {
                open_set.remove(w);
            }
        }
        Some(open_set)
    }
}

struct Dfs<'a, const W: usize, F> {
    g: &'a Compiled<W>,
    doll: &'a [usize],
    meter: &'a mut Meter,
    target: usize,
    sink: F,
}

impl<const W: usize, F: FnMut(Bits<W>) -> Flow> Dfs<'_, W, F> {
    fn run(&mut self, chosen: Bits<W>, size: usize, mut undecided: Bits<W>) -> Flow {
        loop {
            if !self.meter.tick() {
                return Flow::Stop;
            }
            if size >= self.target {
                return (self.sink)(chosen);
            }
            let Some(top) = undecided.highest() else {
                return Flow::Continue;
            };
            let room = self.doll[top + 1].min(undecided.count());
            if size + room < self.target {
                return Flow::Continue;
            }
            if let Some(next) = self.g.include(top, chosen, undecided) {
                if self.run(chosen.with(top), size + 1, next) == Flow::Stop {
                    return Flow::Stop;
                }
            }
            undecided.remove(top);
        }
    }
}

pub(crate) struct DollOutcome {
    /// `maxima[k]` is the answer for vertices `0..k`; shorter than `n + 1`
    /// when the budget ran out.
    pub maxima: Vec<usize>,
    /// An independent set of size `maxima.last()`.
    pub witness: Vec<usize>,
}

pub(crate) fn run_doll<const W: usize>(
    g: &Compiled<W>,
    meter: &mut Meter,
    on_level: &mut dyn FnMut(usize, usize, SearchStats),
) -> DollOutcome {
    let mut maxima = vec![0usize];
    let mut witness: Vec<usize> = Vec::new();
    for k in 1..=g.n {
        let v = k - 1;
        let prev = maxima[k - 1];
        let mut found = None;
        if !g.forbidden.contains(v) {
            let undecided = Bits::<W>::prefix(k).and_not(&g.forbidden);
            if let Some(rest) = g.include(v, Bits::empty(), undecided) {
                let mut dfs = Dfs {
                    g,
                    doll: &maxima,
                    meter: &mut *meter,
                    target: prev + 1,
                    sink: |set: Bits<W>| {
                        found = Some(set);
                        Flow::Stop
                    },
                };
                dfs.run(Bits::empty().with(v), 1, rest);
            }
        }
        if meter.aborted {
            break;
        }
        match found {
            Some(set) => {
                maxima.push(prev + 1);
                witness = set.ones();
            }
            None => maxima.push(prev),
        }
        on_level(k, maxima[k], SearchStats::from_meter(meter));
    }
    DollOutcome { maxima, witness }
}

/// Visits independent sets of size exactly `target` in include-first order
/// from the highest vertex down, i.e. in decreasing order of characteristic
/// vectors read from the top. `maxima` must be complete.
pub(crate) fn search_target<const W: usize>(
    g: &Compiled<W>,
    maxima: &[usize],
    target: usize,
    meter: &mut Meter,
    mut visit: impl FnMut(Vec<usize>) -> Flow,
) {
    debug_assert_eq!(maxima.len(), g.n + 1);
    let undecided = Bits::<W>::prefix(g.n).and_not(&g.forbidden);
    let mut dfs = Dfs {
        g,
        doll: maxima,
        meter,
        target,
        sink: |set: Bits<W>| visit(set.ones()),
    };
    dfs.run(Bits::empty(), 0, undecided);
}
