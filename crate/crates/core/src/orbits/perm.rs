//! Permutations on `0..n` with left-to-right composition.

use std::collections::{HashSet, VecDeque};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// From images `i -> img[i]` (0-based). Panics if not a bijection.
    pub fn from_images(img: Vec<u32>) -> Self {
        let mut seen = vec![false; img.len()];
        for &i in &img {
            assert!((i as usize) < img.len() && !seen[i as usize], "not a permutation");
            seen[i as usize] = true;
        }
        Perm(img)
    }

    /// From 1-based cycles, e.g. `&[&[1, 5], &[2, 6]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                img[a - 1] = (b - 1) as u32;
            }
        }
        Perm::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self` first, then `o`.
    pub fn then(&self, o: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| o.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s + 1];
            seen[s] = true;
            let mut j = self.apply(s);
            while j != s {
                seen[j] = true;
                c.push(j + 1);
                j = self.apply(j);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// Order of the generated group by listing its elements; only for small groups.
/// Returns `None` once more than `bound` elements are found.
pub fn closure_order(gens: &[Perm], bound: usize) -> Option<usize> {
    let n = gens.first().map_or(0, |g| g.degree());
    let id = Perm::identity(n);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                if seen.len() > bound {
                    return None;
                }
                queue.push_back(q);
            }
        }
    }
    Some(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_composition() {
        let a = Perm::from_cycles(4, &[&[1, 2]]);
        let b = Perm::from_cycles(4, &[&[2, 3]]);
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1,3,2)");
        assert!(a.then(&a).is_identity());
        assert_eq!(a.then(&b).inverse().then(&a.then(&b)), Perm::identity(4));
    }

    #[test]
    fn symmetric_group_orders() {
        let s = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]);
        let t = Perm::from_cycles(5, &[&[1, 2]]);
        assert_eq!(closure_order(&[s, t], 1000), Some(120));
        let s = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]);
        assert_eq!(closure_order(&[s], 1000), Some(5));
    }
}
