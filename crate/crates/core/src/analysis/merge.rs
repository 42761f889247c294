//! Levels at which the sublevel sets `{f < eps}` around different roots join.
//!
//! Sweeping the grid nodes in increasing field value and joining each node to
//! its already-visited 4-neighbours gives, in one pass, every `eps` at which
//! two root-carrying components of the thresholded grid become connected.
//! This is the exact answer that bisection over `eps` on the connectivity test
//! converges to, for every merge at once.

use num_complex::Complex64;
use serde::Serialize;

use crate::fields::ScalarField;

struct DisjointSets {
    parent: Vec<usize>,
    roots: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            roots: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets and returns the root counts they had.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let counts = (self.roots[ra], self.roots[rb]);
        self.parent[rb] = ra;
        self.roots[ra] += self.roots[rb];
        Some(counts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MergeProfile {
    /// Number of roots placed on the grid.
    pub roots: usize,
    /// Roots that fell on a node already holding another root.
    pub coincident: usize,
    /// Field values at which two root-carrying components joined, ascending.
    pub levels: Vec<f64>,
}

impl MergeProfile {
    /// Number of separate root-carrying components just below `eps`.
    pub fn components_below(&self, eps: f64) -> usize {
        self.roots - self.coincident - self.levels.iter().filter(|&&l| l < eps).count()
    }

    pub fn first(&self) -> Option<f64> {
        self.levels.first().copied()
    }

    /// Level at which the root-carrying components first number at most
    /// `target`.
    pub fn level_for_components(&self, target: usize) -> Option<f64> {
        let start = self.roots - self.coincident;
        if target >= start {
            return Some(0.0);
        }
        self.levels.get(start - target - 1).copied()
    }
}

/// Merge levels of `f` with the given roots snapped to their nearest nodes.
/// Invalid nodes never join anything.
pub fn merge_profile(f: &ScalarField, roots: &[Complex64]) -> MergeProfile {
    let g = &f.spec;
    let n = g.len();
    let mut sets = DisjointSets::new(n);
    let mut coincident = 0;
    for &z in roots {
        let node = g.nearest(z);
        if sets.roots[node] > 0 {
            coincident += 1;
        }
        sets.roots[node] += 1;
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| f.values[i].is_finite()).collect();
    order.sort_by(|&a, &b| f.values[a].total_cmp(&f.values[b]));
    let mut visited = vec![false; n];
    let mut levels = Vec::new();
    for &i in &order {
        visited[i] = true;
        let (ix, iy) = (i % g.nx, i / g.nx);
        let mut neighbours = [None; 4];
        if ix > 0 {
            neighbours[0] = Some(i - 1);
        }
        if ix + 1 < g.nx {
            neighbours[1] = Some(i + 1);
        }
        if iy > 0 {
            neighbours[2] = Some(i - g.nx);
        }
        if iy + 1 < g.ny {
            neighbours[3] = Some(i + g.nx);
        }
        for j in neighbours.into_iter().flatten() {
            if !visited[j] {
                continue;
            }
            if let Some((a, b)) = sets.union(i, j) {
                if a > 0 && b > 0 {
                    levels.push(f.values[i]);
                }
            }
        }
    }
    MergeProfile {
        roots: roots.len(),
        coincident,
        levels,
    }
}
