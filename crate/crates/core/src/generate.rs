//! Avoiding sets on demand: incremental building, seeded random greedy
//! sampling and exhaustive enumeration for small `n`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equation::ThreeVarEquation;
use crate::intset::IntSet;

/// A growing avoiding subset of `[1,n]`.
#[derive(Clone, Debug)]
pub struct AvoidingBuilder {
    eq: ThreeVarEquation,
    n: u64,
    member: Vec<bool>,
    members: Vec<u64>,
}

impl AvoidingBuilder {
    pub fn new(eq: ThreeVarEquation, n: u64) -> Self {
        AvoidingBuilder {
            eq,
            n,
            member: vec![false; n as usize + 1],
            members: Vec::new(),
        }
    }

    fn has(&self, v: u64, extra: u64) -> bool {
        v == extra || (v >= 1 && v <= self.n && self.member[v as usize])
    }

    /// True iff adding `v` keeps the set avoiding.
    pub fn can_add(&self, v: u64) -> bool {
        if v == 0 || v > self.n || self.member[v as usize] {
            return false;
        }
        let (a, b, c) = (self.eq.a(), self.eq.b(), self.eq.c());
        let div = |num: u64, d: u64| num.is_multiple_of(d).then(|| num / d);
        self.members.iter().copied().chain([v]).all(|w| {
            // v as z with w as x; v as x with w as y; v as y with w as x
            let as_z = (c * v).checked_sub(a * w).and_then(|r| div(r, b)).is_some_and(|y| y > 0 && self.has(y, v));
            let as_x = div(a * v + b * w, c).is_some_and(|z| self.has(z, v));
            let as_y = div(a * w + b * v, c).is_some_and(|z| self.has(z, v));
            !(as_z || as_x || as_y)
        })
    }

    pub fn insert(&mut self, v: u64) -> bool {
        if !self.can_add(v) {
            return false;
        }
        self.member[v as usize] = true;
        self.members.push(v);
        true
    }

    fn pop(&mut self) {
        if let Some(v) = self.members.pop() {
            self.member[v as usize] = false;
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_set(&self) -> IntSet {
        IntSet::new(self.n, self.members.iter().copied()).expect("members lie in [1,n]")
    }
}

/// Seeded source of random avoiding sets: each sample visits `[1,n]` in a
/// shuffled order and keeps each admissible element with probability
/// `keep`.
pub struct RandomAvoiding {
    rng: ChaCha8Rng,
}

impl RandomAvoiding {
    pub fn new(seed: u64) -> Self {
        RandomAvoiding {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self, eq: &ThreeVarEquation, n: u64, keep: f64) -> IntSet {
        let mut order: Vec<u64> = (1..=n).collect();
        order.shuffle(&mut self.rng);
        let mut builder = AvoidingBuilder::new(*eq, n);
        for v in order {
            if self.rng.gen_bool(keep.clamp(0.0, 1.0)) {
                builder.insert(v);
            }
        }
        builder.to_set()
    }

    /// A sample with `n` uniform in `[1, n_max]` and `keep` uniform in
    /// `[0.3, 1]`.
    pub fn sample_any(&mut self, eq: &ThreeVarEquation, n_max: u64) -> IntSet {
        let n = self.rng.gen_range(1..=n_max);
        let keep = self.rng.gen_range(0.3..=1.0);
        self.sample(eq, n, keep)
    }
}

/// Calls `visit` on every avoiding subset of `[1,n]`, the empty set
/// included. The number of such sets grows exponentially; keep `n` small.
pub fn for_each_avoiding(eq: &ThreeVarEquation, n: u64, visit: &mut dyn FnMut(&IntSet)) {
    fn go(builder: &mut AvoidingBuilder, next: u64, visit: &mut dyn FnMut(&IntSet)) {
        if next > builder.n {
            visit(&builder.to_set());
            return;
        }
        go(builder, next + 1, visit);
        if builder.insert(next) {
            go(builder, next + 1, visit);
            builder.pop();
        }
    }
    let mut builder = AvoidingBuilder::new(*eq, n);
    go(&mut builder, 1, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::avoids;

    #[test]
    fn builder_matches_checker() {
        let eq = ThreeVarEquation::new(1, 2, 4).unwrap();
        let mut rng = RandomAvoiding::new(7);
        for _ in 0..200 {
            let set = rng.sample_any(&eq, 40);
            assert!(avoids(&eq, &set));
            // maximal when keep = 1
            let full = rng.sample(&eq, set.bound(), 1.0);
            let builder = {
                let mut b = AvoidingBuilder::new(eq, full.bound());
                for x in full.iter() {
                    assert!(b.insert(x));
                }
                b
            };
            assert!((1..=full.bound()).all(|x| full.contains(x) || !builder.can_add(x)));
        }
    }

    #[test]
    fn exhaustive_count_matches_brute_force() {
        for (a, b, c) in [(1, 2, 4), (2, 2, 5), (1, 2, 13)] {
            let eq = ThreeVarEquation::new(a, b, c).unwrap();
            let n = 12;
            let mut count = 0;
            for_each_avoiding(&eq, n, &mut |s| {
                assert!(avoids(&eq, s));
                count += 1;
            });
            let brute = (0u32..1 << n)
                .filter(|m| avoids(&eq, &IntSet::from_predicate(n, |x| m >> (x - 1) & 1 == 1)))
                .count();
            assert_eq!(count, brute);
        }
    }

    #[test]
    fn seeded_samples_repeat() {
        let eq = ThreeVarEquation::new(1, 3, 9).unwrap();
        let a: Vec<IntSet> = (0..5).map(|_| RandomAvoiding::new(3).sample(&eq, 30, 0.8)).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }
}
