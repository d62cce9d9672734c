//! Stabilizer chains (Schreier-Sims) for permutation group orders.

use num_bigint::BigUint;
use rand::Rng;

use super::perm::Perm;
use crate::sample;

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `reps[b]` maps the base point to `b`; `inv_reps[b]` is its inverse.
    reps: Vec<Option<Perm>>,
    inv_reps: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut l = Level { base, gens: Vec::new(), reps: vec![None; n], inv_reps: vec![None; n], orbit: Vec::new() };
        l.rebuild(n);
        l
    }

    fn rebuild(&mut self, n: usize) {
        self.reps = vec![None; n];
        self.inv_reps = vec![None; n];
        let id = Perm::identity(n);
        self.inv_reps[self.base] = Some(id.clone());
        self.reps[self.base] = Some(id);
        self.orbit = vec![self.base];
        let mut k = 0;
        while k < self.orbit.len() {
            let b = self.orbit[k];
            for g in &self.gens {
                let c = g.apply(b);
                if self.reps[c].is_none() {
                    let u = self.reps[b].as_ref().expect("orbit point").then(g);
                    self.inv_reps[c] = Some(u.inverse());
                    self.reps[c] = Some(u);
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// A base and strong generating set.
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a verified chain: random sifting first, then the deterministic
    /// Schreier generator check, which alone guarantees correctness.
    pub fn new(gens: &[Perm], seed: u64) -> Self {
        let n = gens.first().map_or(0, |g| g.degree());
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain { n, levels: Vec::new() };
        for g in &gens {
            chain.insert(g.clone(), 0);
        }
        if gens.is_empty() {
            return chain;
        }
        chain.random_phase(&gens, seed);
        chain.verify();
        chain
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (j, l) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(l.base);
            if b == l.base {
                continue;
            }
            match &l.inv_reps[b] {
                Some(u) => g = g.then(u),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    /// Adds `h` as a strong generator on levels `lo..=hi`, where `hi` is the
    /// first level whose base point `h` moves (a new level if none).
    /// Returns `hi`.
    fn insert(&mut self, h: Perm, lo: usize) -> usize {
        let hi = match self.levels.iter().position(|l| h.apply(l.base) != l.base) {
            Some(hi) => hi,
            None => {
                let moved = (0..self.n).find(|&i| h.apply(i) != i).expect("nontrivial");
                self.levels.push(Level::new(moved, self.n));
                self.levels.len() - 1
            }
        };
        debug_assert!(hi >= lo);
        for l in lo..=hi {
            self.levels[l].gens.push(h.clone());
            self.levels[l].rebuild(self.n);
        }
        hi
    }

    fn sift_add(&mut self, g: Perm) -> bool {
        let (h, j) = self.strip(g, 0);
        if h.is_identity() {
            return false;
        }
        self.insert(h, j.min(1));
        true
    }

    fn random_phase(&mut self, gens: &[Perm], seed: u64) {
        let mut rng = sample::rng(seed);
        let mut pool: Vec<Perm> = gens.to_vec();
        while pool.len() < 10 {
            pool.push(gens[pool.len() % gens.len()].clone());
        }
        let mut acc = Perm::identity(self.n);
        let mut mix = |rng: &mut sample::SampleRng| {
            let i = rng.gen_range(0..pool.len());
            let mut j = rng.gen_range(0..pool.len() - 1);
            if j >= i {
                j += 1;
            }
            pool[i] = if rng.gen() { pool[i].then(&pool[j]) } else { pool[j].then(&pool[i]) };
            acc = acc.then(&pool[i]);
            acc.clone()
        };
        for _ in 0..50 {
            mix(&mut rng);
        }
        let mut quiet = 0;
        while quiet < 40 {
            let g = mix(&mut rng);
            if self.sift_add(g) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
    }

    /// For each level from the bottom, every Schreier generator must sift
    /// through the levels below it; failures are inserted and the check resumes
    /// from the level they reached.
    fn verify(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            match self.find_bad_schreier(lvl) {
                None => i -= 1,
                Some(h) => i = self.insert(h, lvl + 1) + 1,
            }
        }
    }

    fn find_bad_schreier(&self, lvl: usize) -> Option<Perm> {
        let l = &self.levels[lvl];
        for &b in &l.orbit {
            let ub = l.reps[b].as_ref().expect("orbit point");
            for s in &l.gens {
                let c = s.apply(b);
                let g = ub.then(s).then(l.inv_reps[c].as_ref().expect("orbit point"));
                if g.is_identity() {
                    continue;
                }
                let (h, _) = self.strip(g, lvl + 1);
                if !h.is_identity() {
                    return Some(h);
                }
            }
        }
        None
    }
}

/// Order of the group generated by `gens`.
pub fn group_order(gens: &[Perm]) -> BigUint {
    StabChain::new(gens, 0x5eed).order()
}
