//! Extremal k-system search over the monotone universe.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{enumerate_universe, pairwise_min_intersections, ArcError, ArcSystem, MonotoneArc};
use crate::bounds::przytycki_max_arcs;
use crate::parallel;

pub const DEFAULT_EXACT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest universe the exact search accepts.
    pub cap: usize,
    pub threads: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_EXACT_CAP,
            threads: 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
}

/// Compatibility graph of the universe: `i ~ j` when the two arcs meet at
/// most `k` times.
struct Compat {
    neighbours: Vec<Bits>,
}

impl Compat {
    fn new(universe: &[MonotoneArc], k: u64) -> Self {
        let u = universe.len();
        let mut neighbours = vec![Bits::empty(u); u];
        for i in 0..u {
            for j in i + 1..u {
                if pairwise_min_intersections(&universe[i], &universe[j]) <= k {
                    neighbours[i].insert(j);
                    neighbours[j].insert(i);
                }
            }
        }
        Self { neighbours }
    }

    /// Greedy colouring of the candidates into compatibility-independent
    /// classes; their number bounds any clique inside `cand`.
    fn colour_bound(&self, cand: &Bits) -> usize {
        let mut rest = cand.clone();
        let mut colours = 0;
        while !rest.is_empty() {
            colours += 1;
            let mut q = rest.clone();
            while let Some(v) = q.first() {
                rest.remove(v);
                q.remove(v);
                q = q.and_not(&self.neighbours[v]);
            }
        }
        colours
    }

    /// Include-first depth-first branch and bound. The first clique of
    /// maximum size met is the lexicographically smallest one.
    fn expand(&self, current: &mut Vec<usize>, cand: Bits, best: &mut Vec<usize>) {
        let Some(v) = cand.first() else {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        };
        if current.len() + self.colour_bound(&cand) <= best.len() {
            return;
        }
        current.push(v);
        self.expand(current, cand.and(&self.neighbours[v]), best);
        current.pop();
        let mut without = cand;
        without.remove(v);
        self.expand(current, without, best);
    }

    fn best_with_first(&self, v: usize, universe_len: usize) -> Vec<usize> {
        let mut cand = self.neighbours[v].clone();
        for u in 0..=v {
            if u < universe_len {
                cand.remove(u);
            }
        }
        let mut current = vec![v];
        let mut best = Vec::new();
        self.expand(&mut current, cand, &mut best);
        best
    }
}

/// Maximum k-system inside the monotone universe on `n` punctures, with the
/// lexicographically smallest witness among maximum ones.
pub fn max_k_system_exact(
    n: usize,
    k: u64,
    opts: ExactOptions,
) -> Result<(usize, ArcSystem), ArcError> {
    let universe = enumerate_universe(n);
    if universe.len() > opts.cap {
        return Err(ArcError::CapExceeded {
            universe: universe.len(),
            cap: opts.cap,
        });
    }
    let compat = Compat::new(&universe, k);
    let u = universe.len();
    let best = if opts.threads <= 1 {
        let mut all = Bits::empty(u);
        (0..u).for_each(|i| all.insert(i));
        let mut best = Vec::new();
        compat.expand(&mut Vec::new(), all, &mut best);
        best
    } else {
        let per_first: Vec<Vec<usize>> = parallel::with_threads(opts.threads, || {
            (0..u)
                .into_par_iter()
                .map(|v| compat.best_with_first(v, u))
                .collect()
        });
        // Largest size, then smallest first element.
        per_first.into_iter().fold(
            Vec::new(),
            |acc, c| if c.len() > acc.len() { c } else { acc },
        )
    };
    let arcs: Vec<MonotoneArc> = best.iter().map(|&i| universe[i].clone()).collect();
    let system = ArcSystem::new(n, k, arcs)?;
    check_przytycki(&system)?;
    Ok((system.len(), system))
}

/// Maximal (not necessarily maximum) k-system grown over a seeded shuffle of
/// the universe. Arcs are returned in lexicographic order.
pub fn max_k_system_greedy(n: usize, k: u64, seed: u64) -> Result<ArcSystem, ArcError> {
    greedy_k_system(n, k, seed, None)
}

/// Greedy growth stopped after `limit` arcs when given.
pub fn greedy_k_system(
    n: usize,
    k: u64,
    seed: u64,
    limit: Option<usize>,
) -> Result<ArcSystem, ArcError> {
    let mut universe = enumerate_universe(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    universe.shuffle(&mut rng);
    let mut chosen: Vec<MonotoneArc> = Vec::new();
    for arc in universe {
        if limit.is_some_and(|l| chosen.len() >= l) {
            break;
        }
        if chosen
            .iter()
            .all(|c| pairwise_min_intersections(c, &arc) <= k)
        {
            chosen.push(arc);
        }
    }
    chosen.sort();
    let system = ArcSystem::new(n, k, chosen)?;
    check_przytycki(&system)?;
    Ok(system)
}

/// Arc-count cap for a monotone system viewed on the `(n+1)`-punctured
/// sphere. A 0-system is checked against the 1-system bound.
pub fn przytycki_cap(n: usize, k: u64) -> f64 {
    przytycki_max_arcs(k.max(1), 1 - n as i64).value
}

fn check_przytycki(system: &ArcSystem) -> Result<(), ArcError> {
    let n = system.puncture_count();
    if n < 2 {
        return Ok(());
    }
    let cap = przytycki_cap(n, system.declared_k());
    if system.len() as f64 > cap {
        return Err(ArcError::PrzytyckiViolated {
            size: system.len(),
            bound: cap,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::validate_k_system;

    /// Exhaustive subset search over tiny universes.
    fn brute_force_max(n: usize, k: u64) -> usize {
        let u = enumerate_universe(n);
        let mut best = 0;
        for mask in 0u64..(1 << u.len()) {
            let chosen: Vec<&MonotoneArc> = (0..u.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &u[i])
                .collect();
            let ok = chosen.iter().enumerate().all(|(i, a)| {
                chosen[i + 1..]
                    .iter()
                    .all(|b| pairwise_min_intersections(a, b) <= k)
            });
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn exact_small_cases() {
        let opts = ExactOptions::default();
        assert_eq!(max_k_system_exact(3, 0, opts).unwrap().0, 4);
        assert_eq!(max_k_system_exact(3, 1, opts).unwrap().0, 4);
        assert_eq!(max_k_system_exact(2, 1, opts).unwrap().0, 1);
    }

    #[test]
    fn exact_matches_brute_force_on_four_punctures() {
        for k in 0..=3 {
            let (size, witness) = max_k_system_exact(4, k, ExactOptions::default()).unwrap();
            assert_eq!(size, brute_force_max(4, k), "k={k}");
            assert!(validate_k_system(&witness).is_empty());
        }
    }

    #[test]
    fn exact_is_thread_independent() {
        let opts = ExactOptions {
            cap: 26,
            threads: 1,
        };
        for k in 0..=2 {
            let a = max_k_system_exact(5, k, opts).unwrap();
            let b = max_k_system_exact(5, k, ExactOptions { threads: 3, ..opts }).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = max_k_system_exact(5, 1, ExactOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            ArcError::CapExceeded {
                universe: 26,
                cap: 24
            }
        ));
    }

    #[test]
    fn greedy_cases() {
        for seed in 0..5 {
            assert_eq!(max_k_system_greedy(3, 0, seed).unwrap().len(), 4);
        }
        assert_eq!(max_k_system_greedy(2, 5, 9).unwrap().len(), 1);
        let s = max_k_system_greedy(6, 1, 7).unwrap();
        assert!(s.len() <= 60);
        assert!(validate_k_system(&s).is_empty());
        assert_eq!(s, max_k_system_greedy(6, 1, 7).unwrap());
    }

    #[test]
    fn greedy_limit() {
        let s = greedy_k_system(6, 2, 3, Some(5)).unwrap();
        assert_eq!(s.len(), 5);
    }
}
