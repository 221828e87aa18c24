//! Exact maximum independent sets in small hypergraphs.
//!
//! Everything the crate calls "exact" reduces to this: the solutions of an
//! equation inside `[1,n]` (or modulo `m`) become edges over the candidate
//! elements, and an avoiding set is an independent set.

mod bits;
mod doll;

use std::collections::HashSet;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use doll::{run_doll, search_target, Compiled, Flow, Meter};

/// Largest instance (per connected component) the solver accepts.
pub const MAX_VERTICES: usize = 1024;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn from_meter(meter: &Meter) -> Self {
        SearchStats {
            nodes: meter.nodes,
            elapsed: meter.elapsed(),
        }
    }
}

/// Hypergraph on vertices `0..n`. Edges are stored sorted and deduplicated;
/// an edge with one vertex forbids that vertex outright.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: usize,
    edges: Vec<Vec<usize>>,
    seen: HashSet<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertices: usize) -> Self {
        Hypergraph {
            vertices,
            ..Default::default()
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Adds the edge on the distinct vertices of `verts`.
    pub fn add_edge(&mut self, verts: &[usize]) {
        let mut edge = verts.to_vec();
        edge.sort_unstable();
        edge.dedup();
        assert!(!edge.is_empty(), "edges must be nonempty");
        assert!(*edge.last().unwrap() < self.vertices, "edge vertex out of range");
        if self.seen.insert(edge.clone()) {
            self.edges.push(edge);
        }
    }

    /// Drops every edge that strictly contains another edge.
    pub fn simplified(&self) -> Hypergraph {
        let mut out = Hypergraph::new(self.vertices);
        let mut order: Vec<&Vec<usize>> = self.edges.iter().collect();
        order.sort_by_key(|e| e.len());
        for edge in order {
            let dominated = (1..edge.len()).any(|size| {
                subsets(edge, size).any(|sub| out.seen.contains(&sub))
            });
            if !dominated {
                out.add_edge(edge);
            }
        }
        out
    }

    /// True iff no edge lies inside `set`.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.vertices];
        for &v in set {
            member[v] = true;
        }
        !self.edges.iter().any(|e| e.iter().all(|&v| member[v]))
    }

    /// Connected components, each sorted ascending, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for edge in &self.edges {
            for &w in &edge[1..] {
                let (r1, r2) = (find(&mut parent, edge[0]), find(&mut parent, w));
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.vertices];
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(v);
        }
        groups
    }

    /// Sub-hypergraph on `verts` (ascending); vertex `i` of the result is
    /// `verts[i]`. Edges leaving `verts` are dropped.
    pub fn induced(&self, verts: &[usize]) -> Hypergraph {
        let mut index = vec![usize::MAX; self.vertices];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut out = Hypergraph::new(verts.len());
        for edge in &self.edges {
            if edge.iter().all(|&v| index[v] != usize::MAX) {
                let mapped: Vec<usize> = edge.iter().map(|&v| index[v]).collect();
                out.add_edge(&mapped);
            }
        }
        out
    }

    /// Same hypergraph with vertex `i` renamed `n - 1 - i`.
    pub fn reversed(&self) -> Hypergraph {
        let n = self.vertices;
        let mut out = Hypergraph::new(n);
        for edge in &self.edges {
            let mapped: Vec<usize> = edge.iter().map(|&v| n - 1 - v).collect();
            out.add_edge(&mapped);
        }
        out
    }
}

fn subsets(edge: &[usize], size: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = edge.len();
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == size)
        .map(move |m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| edge[i]).collect())
}

macro_rules! with_width {
    ($n:expr, $f:ident :: <W> ( $($arg:expr),* $(,)? )) => {
        match $n {
            0..=64 => $f::<1>($($arg),*),
            65..=128 => $f::<2>($($arg),*),
            129..=256 => $f::<4>($($arg),*),
            257..=512 => $f::<8>($($arg),*),
            513..=1024 => $f::<16>($($arg),*),
            v => return Err(Error::InstanceTooLarge { vertices: v, limit: MAX_VERTICES }),
        }
    };
}

/// A maximum independent set, or the best one found before the budget ran out.
#[derive(Clone, Debug)]
pub struct MaxOutcome {
    pub size: usize,
    /// Lexicographically least maximum set (ascending vertex order) when
    /// `optimal`.
    pub witness: Vec<usize>,
    pub optimal: bool,
    pub stats: SearchStats,
}

/// Solves each connected component separately. The union of the
/// per-component lexicographically least optima is the global one.
pub fn maximum_independent(g: &Hypergraph, budget: &Budget) -> Result<MaxOutcome> {
    let g = g.simplified();
    let mut meter = Meter::new(budget);
    let mut witness = Vec::new();
    for comp in g.components() {
        if comp.len() > MAX_VERTICES {
            return Err(Error::InstanceTooLarge {
                vertices: comp.len(),
                limit: MAX_VERTICES,
            });
        }
        let reversed = g.induced(&comp).reversed();
        let local = with_width!(reversed.vertices(), lex_least_maximum::<W>(&reversed, &mut meter));
        let len = comp.len();
        witness.extend(local.into_iter().map(|v| comp[len - 1 - v]));
        if meter.aborted {
            break;
        }
    }
    witness.sort_unstable();
    Ok(MaxOutcome {
        size: witness.len(),
        witness,
        optimal: !meter.aborted,
        stats: SearchStats::from_meter(&meter),
    })
}

/// On a reversed component: dolls over suffixes of the original order, then
/// the first include-first set of optimal size, which is the lex-least one.
fn lex_least_maximum<const W: usize>(g: &Hypergraph, meter: &mut Meter) -> Vec<usize> {
    let compiled = Compiled::<W>::new(g);
    let doll = run_doll(&compiled, meter, &mut |_, _, _| {});
    if meter.aborted {
        return doll.witness;
    }
    let best = *doll.maxima.last().unwrap();
    let mut first = None;
    search_target(&compiled, &doll.maxima, best, meter, |set| {
        first = Some(set);
        Flow::Stop
    });
    first.unwrap_or(doll.witness)
}

#[derive(Clone, Debug)]
pub struct AllOutcome {
    pub size: usize,
    /// Maximum sets in lexicographic order, at most `cap` of them.
    pub sets: Vec<Vec<usize>>,
    pub truncated: bool,
    pub optimal: bool,
    pub stats: SearchStats,
}

/// Every maximum independent set, up to `cap`, in lexicographic order.
pub fn all_maximum(g: &Hypergraph, cap: usize, budget: &Budget) -> Result<AllOutcome> {
    let reversed = g.simplified().reversed();
    let mut meter = Meter::new(budget);
    let (size, mut sets) = with_width!(
        reversed.vertices(),
        enumerate_maximum::<W>(&reversed, cap, &mut meter)
    );
    let n = g.vertices();
    for set in &mut sets {
        for v in set.iter_mut() {
            *v = n - 1 - *v;
        }
        set.sort_unstable();
    }
    let truncated = sets.len() > cap;
    sets.truncate(cap);
    Ok(AllOutcome {
        size,
        sets,
        truncated,
        optimal: !meter.aborted,
        stats: SearchStats::from_meter(&meter),
    })
}

fn enumerate_maximum<const W: usize>(
    g: &Hypergraph,
    cap: usize,
    meter: &mut Meter,
) -> (usize, Vec<Vec<usize>>) {
    let compiled = Compiled::<W>::new(g);
    let doll = run_doll(&compiled, meter, &mut |_, _, _| {});
    if meter.aborted {
        let size = doll.witness.len();
        return (size, vec![doll.witness]);
    }
    let best = *doll.maxima.last().unwrap();
    let mut sets = Vec::new();
    search_target(&compiled, &doll.maxima, best, meter, |set| {
        sets.push(set);
        if sets.len() > cap {
            Flow::Stop
        } else {
            Flow::Continue
        }
    });
    (best, sets)
}

#[derive(Clone, Debug)]
pub struct PrefixOutcome {
    /// `maxima[k]` = maximum independent subset of vertices `0..k`.
    pub maxima: Vec<usize>,
    pub complete: bool,
    pub stats: SearchStats,
}

/// Maximum independent set sizes of every prefix `0..k`, reported through
/// `on_level(k, size, stats so far)` as soon as each is known.
pub fn prefix_maxima(
    g: &Hypergraph,
    budget: &Budget,
    on_level: &mut dyn FnMut(usize, usize, SearchStats),
) -> Result<PrefixOutcome> {
    let g = g.simplified();
    let mut meter = Meter::new(budget);
    let maxima = with_width!(g.vertices(), forward_doll::<W>(&g, &mut meter, on_level));
    Ok(PrefixOutcome {
        complete: !meter.aborted,
        maxima,
        stats: SearchStats::from_meter(&meter),
    })
}

fn forward_doll<const W: usize>(
    g: &Hypergraph,
    meter: &mut Meter,
    on_level: &mut dyn FnMut(usize, usize, SearchStats),
) -> Vec<usize> {
    let compiled = Compiled::<W>::new(g);
    debug_assert_eq!(compiled.vertices(), g.vertices());
    run_doll(&compiled, meter, on_level).maxima
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(g: &Hypergraph) -> (usize, Vec<usize>) {
        let n = g.vertices();
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..1 << n {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !g.is_independent(&set) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => set.len() > b.len() || (set.len() == b.len() && set < *b),
            };
            if better {
                best = Some(set);
            }
        }
        let best = best.unwrap();
        (best.len(), best)
    }

    fn random_graph(seed: u64, n: usize, edges: usize) -> Hypergraph {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        let mut g = Hypergraph::new(n);
        for _ in 0..edges {
            let k = 1 + next() % 3;
            let verts: Vec<usize> = (0..k).map(|_| next() % n).collect();
            if k == 1 && next() % 4 != 0 {
                continue;
            }
            g.add_edge(&verts);
        }
        g
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        for seed in 0..300 {
            let n = 1 + (seed as usize % 14);
            let g = random_graph(seed, n, 3 * n);
            let (size, lex) = brute_force(&g);
            let got = maximum_independent(&g, &Budget::unlimited()).unwrap();
            assert!(got.optimal);
            assert_eq!(got.size, size, "seed {seed}");
            assert_eq!(got.witness, lex, "seed {seed}");
            let prefix = prefix_maxima(&g, &Budget::unlimited(), &mut |_, _, _| {}).unwrap();
            for k in 0..=n {
                let sub = g.induced(&(0..k).collect::<Vec<_>>());
                let want = if k == 0 { 0 } else { brute_force(&sub).0 };
                assert_eq!(prefix.maxima[k], want, "seed {seed} prefix {k}");
            }
        }
    }

    #[test]
    fn enumerates_every_maximum_set() {
        for seed in 0..100 {
            let n = 1 + (seed as usize % 12);
            let g = random_graph(seed, n, 2 * n);
            let (size, _) = brute_force(&g);
            let mut want = Vec::new();
            for mask in 0u32..1 << n {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                if set.len() == size && g.is_independent(&set) {
                    want.push(set);
                }
            }
            want.sort();
            let got = all_maximum(&g, 10_000, &Budget::unlimited()).unwrap();
            assert_eq!(got.sets, want, "seed {seed}");
            assert!(!got.truncated);
            let capped = all_maximum(&g, 1, &Budget::unlimited()).unwrap();
            assert_eq!(capped.sets, want[..1].to_vec());
            assert_eq!(capped.truncated, want.len() > 1);
        }
    }

    #[test]
    fn budget_yields_non_optimal_result() {
        let g = random_graph(7, 60, 400);
        let out = maximum_independent(&g, &Budget::nodes(50)).unwrap();
        assert!(!out.optimal);
        assert!(g.is_independent(&out.witness));
    }

    #[test]
    fn simplification_drops_supersets() {
        let mut g = Hypergraph::new(4);
        g.add_edge(&[0, 1]);
        g.add_edge(&[0, 1, 2]);
        g.add_edge(&[3]);
        g.add_edge(&[1, 2, 3]);
        g.add_edge(&[1, 2, 0]);
        let s = g.simplified();
        assert_eq!(s.edges().len(), 2);
    }

    #[test]
    fn components_partition_vertices() {
        let mut g = Hypergraph::new(6);
        g.add_edge(&[4, 1]);
        g.add_edge(&[1, 2, 5]);
        assert_eq!(g.components(), vec![vec![0], vec![1, 2, 4, 5], vec![3]]);
    }
}
