//! Exact oracle: `r_L(n)`, all extremal sets, modular densities and ratio
//! tables, all computed by [`crate::search`].

use serde::{Serialize, Serializer};

use crate::equation::{enumerate_solutions, ThreeVarEquation};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::rational::{ratio, Rational};
use crate::search::{self, Budget, Hypergraph, SearchStats};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: Budget,
}

impl SearchConfig {
    pub fn with_budget(budget: Budget) -> Self {
        SearchConfig { budget }
    }
}

/// Result of a maximum-size search over `[1,n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    /// Display form of the equation, e.g. `x+2y=4z` or `3x=2y`.
    pub equation: String,
    pub n: u64,
    pub max_size: usize,
    /// Lexicographically least maximum set when `optimal`.
    pub witness: IntSet,
    pub all_witnesses: Option<Vec<IntSet>>,
    /// False when the budget ran out; `max_size` is then only a lower bound.
    pub optimal: bool,
    pub stats: SearchStats,
}

impl Serialize for ExtremalResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Report<'a> {
            equation: &'a str,
            n: u64,
            size: usize,
            set: String,
            optimal: bool,
            nodes: u64,
            millis: u64,
        }
        Report {
            equation: &self.equation,
            n: self.n,
            size: self.max_size,
            set: self.witness.to_text(),
            optimal: self.optimal,
            nodes: self.stats.nodes,
            millis: self.stats.elapsed.as_millis() as u64,
        }
        .serialize(serializer)
    }
}

/// Solutions inside `[1,n]` as edges; vertex `i` is the integer `i + 1`.
pub fn solution_hypergraph(eq: &ThreeVarEquation, n: u64) -> Hypergraph {
    let mut g = Hypergraph::new(n as usize);
    for s in enumerate_solutions(eq, n) {
        g.add_edge(&[s.x as usize - 1, s.y as usize - 1, s.z as usize - 1]);
    }
    g
}

/// Edges `{bt, at}` of the two-variable equation `ax = by` inside `[1,n]`.
pub fn two_var_hypergraph(a: u64, b: u64, n: u64) -> Hypergraph {
    let mut g = Hypergraph::new(n as usize);
    let mut t = 1;
    while a.max(b) * t <= n {
        g.add_edge(&[(b * t) as usize - 1, (a * t) as usize - 1]);
        t += 1;
    }
    g
}

fn require_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvariantViolation(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn solve_graph(label: String, g: &Hypergraph, n: u64, cfg: &SearchConfig) -> Result<ExtremalResult> {
    let out = search::maximum_independent(g, &cfg.budget)?;
    let witness = IntSet::from_sorted_unchecked(n, out.witness.iter().map(|&v| v as u64 + 1).collect());
    let result = ExtremalResult {
        equation: label,
        n,
        max_size: out.size,
        witness,
        all_witnesses: None,
        optimal: out.optimal,
        stats: out.stats,
    };
    if result.optimal {
        Ok(result)
    } else {
        Err(Error::BudgetExceeded {
            nodes: result.stats.nodes,
            best: Some(Box::new(result)),
        })
    }
}

/// `r_L(n)` with the lexicographically least extremal set.
pub fn max_avoiding(eq: &ThreeVarEquation, n: u64, cfg: &SearchConfig) -> Result<ExtremalResult> {
    require_positive(n, "n")?;
    solve_graph(eq.to_string(), &solution_hypergraph(eq, n), n, cfg)
}

/// Maximum subset of `[1,n]` with no `x, y` such that `ax = by`.
pub fn max_avoiding_two_var(a: u64, b: u64, n: u64, cfg: &SearchConfig) -> Result<ExtremalResult> {
    require_positive(n, "n")?;
    solve_graph(format!("{a}x={b}y"), &two_var_hypergraph(a, b, n), n, cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSets {
    pub size: usize,
    pub sets: Vec<IntSet>,
    /// More than `cap` extremal sets exist.
    pub truncated: bool,
    pub stats: SearchStats,
}

/// Every maximum avoiding subset of `[1,n]` (up to `cap`), lexicographic order.
pub fn all_extremal(eq: &ThreeVarEquation, n: u64, cap: usize, cfg: &SearchConfig) -> Result<ExtremalSets> {
    require_positive(n, "n")?;
    if cap == 0 {
        return Err(Error::InvariantViolation("cap must be positive".into()));
    }
    let out = search::all_maximum(&solution_hypergraph(eq, n), cap, &cfg.budget)?;
    if !out.optimal {
        return Err(Error::BudgetExceeded {
            nodes: out.stats.nodes,
            best: None,
        });
    }
    let sets = out
        .sets
        .iter()
        .map(|s| IntSet::from_sorted_unchecked(n, s.iter().map(|&v| v as u64 + 1).collect()))
        .collect();
    Ok(ExtremalSets {
        size: out.size,
        sets,
        truncated: out.truncated,
        stats: out.stats,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    /// `sizes[k] = r_L(k)`; `sizes[0] = 0`. Shorter when incomplete.
    pub sizes: Vec<usize>,
    pub complete: bool,
    pub stats: SearchStats,
}

/// `r_L(k)` for every `k <= n_max`, streamed through `on_row(k, r_L(k), stats)`
/// as soon as each value is known.
pub fn prefix_profile(
    eq: &ThreeVarEquation,
    n_max: u64,
    cfg: &SearchConfig,
    on_row: &mut dyn FnMut(u64, usize, SearchStats),
) -> Result<Profile> {
    let g = solution_hypergraph(eq, n_max);
    let out = search::prefix_maxima(&g, &cfg.budget, &mut |k, size, stats| on_row(k as u64, size, stats))?;
    Ok(Profile {
        sizes: out.maxima,
        complete: out.complete,
        stats: out.stats,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lambda0Row {
    pub n: u64,
    pub size: usize,
    pub ratio: Rational,
    /// `r(prev) <= r(n) <= r(prev) + (n - prev)` against the previous row.
    pub monotone: bool,
}

/// Exact `r_L(n) / n` for each `n` in `n_list` (sorted, deduplicated).
pub fn lambda0_table(eq: &ThreeVarEquation, n_list: &[u64], cfg: &SearchConfig) -> Result<Vec<Lambda0Row>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let Some(&n_max) = ns.last() else {
        return Ok(Vec::new());
    };
    require_positive(ns[0], "n")?;
    let profile = prefix_profile(eq, n_max, cfg, &mut |_, _, _| {})?;
    if !profile.complete {
        return Err(Error::BudgetExceeded {
            nodes: profile.stats.nodes,
            best: None,
        });
    }
    let mut rows: Vec<Lambda0Row> = Vec::with_capacity(ns.len());
    for n in ns {
        let size = profile.sizes[n as usize];
        let monotone = rows.last().is_none_or(|prev| {
            size >= prev.size && size as u64 <= prev.size as u64 + (n - prev.n)
        });
        rows.push(Lambda0Row {
            n,
            size,
            ratio: ratio(size as i128, n as i128),
            monotone,
        });
    }
    Ok(rows)
}

/// Best residue set modulo `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularDensity {
    pub m: u64,
    pub rho: Rational,
    /// Residues in `[1,m]`, with `m` standing for the zero class.
    pub witness: IntSet,
}

/// Triples of residues in `[1,m]` with `ax + by = cz (mod m)`; vertex `i` is
/// the residue `i + 1`.
pub fn modular_hypergraph(eq: &ThreeVarEquation, m: u64) -> Hypergraph {
    let mut g = Hypergraph::new(m as usize);
    for x in 1..=m {
        for y in 1..=m {
            let lhs = (eq.a() * x + eq.b() * y) % m;
            for z in 1..=m {
                if (eq.c() * z) % m == lhs {
                    g.add_edge(&[x as usize - 1, y as usize - 1, z as usize - 1]);
                }
            }
        }
    }
    g
}

/// True iff no triple of residues in `residues` solves `eq` modulo `m`.
pub fn avoids_mod(eq: &ThreeVarEquation, residues: &IntSet, m: u64) -> bool {
    let r: Vec<u64> = residues.iter().collect();
    !r.iter().any(|&x| {
        r.iter().any(|&y| {
            let lhs = (eq.a() * x + eq.b() * y) % m;
            r.iter().any(|&z| (eq.c() * z) % m == lhs)
        })
    })
}

pub fn rho_m(eq: &ThreeVarEquation, m: u64, cfg: &SearchConfig) -> Result<ModularDensity> {
    require_positive(m, "m")?;
    let out = solve_graph(format!("{eq} mod {m}"), &modular_hypergraph(eq, m), m, cfg)?;
    Ok(ModularDensity {
        m,
        rho: ratio(out.max_size as i128, m as i128),
        witness: out.witness,
    })
}

/// Largest `rho_m` over `1 <= m <= m_max`; ties keep the smallest `m`.
/// A lower bound for `sup_m rho_m`.
pub fn rho_best(eq: &ThreeVarEquation, m_max: u64, cfg: &SearchConfig) -> Result<ModularDensity> {
    require_positive(m_max, "m_max")?;
    let mut best = rho_m(eq, 1, cfg)?;
    for m in 2..=m_max {
        let cur = rho_m(eq, m, cfg)?;
        if cur.rho > best.rho {
            best = cur;
        }
    }
    Ok(best)
}

/// `{x in [1,n] : x mod m in residues}`, reading residue 0 as `m`.
pub fn lift_residues(residues: &IntSet, m: u64, n: u64) -> IntSet {
    IntSet::from_predicate(n, |x| residues.contains((x - 1) % m + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::avoids;

    fn eq(a: u64, b: u64, c: u64) -> ThreeVarEquation {
        ThreeVarEquation::new(a, b, c).unwrap()
    }

    fn solve(e: &ThreeVarEquation, n: u64) -> ExtremalResult {
        max_avoiding(e, n, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn max_avoiding_examples() {
        let r = solve(&eq(1, 2, 4), 1);
        assert_eq!((r.max_size, r.witness.to_text()), (1, "1".to_string()));
        assert_eq!(solve(&eq(2, 2, 5), 10).max_size, 6);
        let r = solve(&eq(1, 2, 4), 14);
        assert_eq!(r.max_size, 8);
        assert!(avoids(&eq(1, 2, 4), &r.witness));
        assert!(r.optimal);
    }

    #[test]
    fn witness_is_lex_least() {
        let e = eq(1, 2, 4);
        let all = all_extremal(&e, 14, 100_000, &SearchConfig::default()).unwrap();
        assert!(!all.truncated);
        let r = solve(&e, 14);
        assert_eq!(all.sets[0], r.witness);
        let mut sorted = all.sets.clone();
        sorted.sort_by(|a, b| a.members().cmp(b.members()));
        assert_eq!(sorted, all.sets);
        assert!(all.sets.iter().all(|s| s.len() == 8 && avoids(&e, s)));
    }

    #[test]
    fn all_extremal_examples() {
        let one = all_extremal(&eq(1, 2, 4), 1, 5, &SearchConfig::default()).unwrap();
        assert_eq!(one.sets, vec![IntSet::new(1, [1]).unwrap()]);
        // x+2y=4z has a single extremal set at n = 14, so cap 2 is not hit.
        let e = eq(1, 2, 4);
        let brute: Vec<u32> = (0u32..1 << 14)
            .filter(|m| m.count_ones() == 8)
            .filter(|m| avoids(&e, &IntSet::from_predicate(14, |x| m >> (x - 1) & 1 == 1)))
            .collect();
        let capped = all_extremal(&e, 14, 2, &SearchConfig::default()).unwrap();
        assert_eq!(capped.sets.len(), brute.len().min(2));
        assert_eq!(capped.truncated, brute.len() > 2);
        let at_12 = all_extremal(&e, 12, 2, &SearchConfig::default()).unwrap();
        let brute_12 = (0u32..1 << 12)
            .filter(|m| m.count_ones() as usize == at_12.size)
            .filter(|m| avoids(&e, &IntSet::from_predicate(12, |x| m >> (x - 1) & 1 == 1)))
            .count();
        assert_eq!(at_12.truncated, brute_12 > 2);
    }

    #[test]
    fn rho_examples() {
        let cfg = SearchConfig::default();
        let r = rho_m(&eq(2, 2, 5), 2, &cfg).unwrap();
        assert_eq!(r.rho, ratio(1, 2));
        assert_eq!(r.witness.to_text(), "1");
        assert_eq!(rho_m(&eq(1, 2, 4), 1, &cfg).unwrap().rho, ratio(0, 1));
        assert_eq!(rho_best(&eq(2, 2, 5), 2, &cfg).unwrap().rho, ratio(1, 2));
        assert_eq!(rho_best(&eq(3, 1, 2), 1, &cfg).unwrap().rho, ratio(0, 1));
        assert!(avoids_mod(&eq(1, 2, 4), &IntSet::new(8, [1, 3, 5, 7]).unwrap(), 8));
        assert!(rho_best(&eq(1, 2, 4), 8, &cfg).unwrap().rho >= ratio(1, 2));
    }

    #[test]
    fn rho_b_pattern_for_family_two() {
        // Nonzero residues mod b force b | z when gcd(b, c) = 1.
        for (b, c) in [(2, 5), (3, 2), (3, 7), (4, 3)] {
            let r = rho_m(&eq(b, b, c), b, &SearchConfig::default()).unwrap();
            assert_eq!(r.rho, ratio(b as i128 - 1, b as i128), "b={b} c={c}");
        }
    }

    #[test]
    fn lambda0_examples() {
        let cfg = SearchConfig::default();
        let rows = lambda0_table(&eq(2, 2, 5), &[10, 5], &cfg).unwrap();
        assert_eq!(rows.iter().map(|r| r.ratio).collect::<Vec<_>>(), vec![ratio(3, 5); 2]);
        assert!(rows.iter().all(|r| r.monotone));
        let rows = lambda0_table(&eq(1, 2, 4), &[1, 7, 14], &cfg).unwrap();
        assert_eq!(rows[0].ratio, ratio(1, 1));
        assert_eq!(rows[1].ratio, ratio(4, 7));
        assert_eq!(rows[2].ratio, ratio(4, 7));
    }

    #[test]
    fn r_grows_by_at_most_one() {
        for e in [eq(1, 2, 4), eq(2, 2, 5), eq(1, 2, 13), eq(3, 1, 2)] {
            let p = prefix_profile(&e, 30, &SearchConfig::default(), &mut |_, _, _| {}).unwrap();
            for k in 1..=30 {
                assert!(p.sizes[k] >= p.sizes[k - 1] && p.sizes[k] <= p.sizes[k - 1] + 1);
                assert_eq!(p.sizes[k], solve(&e, k as u64).max_size, "{e} n={k}");
            }
        }
    }

    #[test]
    fn budget_exceeded_carries_best() {
        let err = max_avoiding(&eq(1, 2, 13), 60, &SearchConfig::with_budget(Budget::nodes(10))).unwrap_err();
        match err {
            Error::BudgetExceeded { best: Some(best), .. } => {
                assert!(!best.optimal);
                assert!(avoids(&eq(1, 2, 13), &best.witness));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_var_pairs() {
        let r = max_avoiding_two_var(2, 1, 10, &SearchConfig::default()).unwrap();
        assert_eq!(r.max_size, 6);
        assert_eq!(r.witness.to_text(), "1,3,4,5,7,9");
    }

    #[test]
    fn lifted_residues_avoid() {
        let e = eq(2, 2, 5);
        let r = rho_m(&e, 2, &SearchConfig::default()).unwrap();
        assert!(avoids(&e, &lift_residues(&r.witness, 2, 50)));
    }

    #[test]
    fn json_shape() {
        let r = solve(&eq(2, 2, 5), 10);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["size"], 6);
        // lex-least optimum; the hybrid set 1,3,5,7,9,10 is larger in lex order
        assert_eq!(v["set"], "1,2,5,7,8,9");
        assert_eq!(v["equation"], "2x+2y=5z");
        assert_eq!(v["optimal"], true);
        assert!(v.get("nodes").is_some() && v.get("millis").is_some());
    }
}
