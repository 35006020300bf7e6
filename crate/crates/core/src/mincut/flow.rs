//! Dinic max-flow over integer capacities.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num::Zero;

pub trait FlowNum: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> FlowNum for T {}

/// Residual graph; arc `2k` is forward, `2k + 1` its reverse.
pub struct FlowGraph<T> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<T>,
}

impl<T: FlowNum> FlowGraph<T> {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: T) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.residual.push(capacity);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.residual.push(T::zero());
        id
    }

    fn levels(&self, s: usize) -> Vec<i32> {
        let mut level = vec![-1; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if level[v] < 0 && self.residual[e] > T::zero() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> T {
        let mut total = T::zero();
        if s == t {
            return total;
        }
        loop {
            let mut level = self.levels(s);
            if level[t] < 0 {
                return total;
            }
            let mut next = vec![0usize; self.adj.len()];
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let bottleneck = path
                        .iter()
                        .map(|&e| &self.residual[e])
                        .min()
                        .cloned()
                        .unwrap_or_else(T::zero);
                    for &e in &path {
                        self.residual[e] = self.residual[e].clone() - bottleneck.clone();
                        self.residual[e ^ 1] = self.residual[e ^ 1].clone() + bottleneck.clone();
                    }
                    total = total + bottleneck;
                    // back up to the tail of the first saturated arc
                    let cut = path
                        .iter()
                        .position(|&e| self.residual[e].is_zero())
                        .unwrap_or(0);
                    path.truncate(cut);
                    u = path.last().map_or(s, |&e| self.to[e]);
                    continue;
                }
                let mut advanced = false;
                while next[u] < self.adj[u].len() {
                    let e = self.adj[u][next[u]];
                    let v = self.to[e];
                    if level[v] == level[u] + 1 && self.residual[e] > T::zero() {
                        path.push(e);
                        u = v;
                        advanced = true;
                        break;
                    }
                    next[u] += 1;
                }
                if advanced {
                    continue;
                }
                // dead end
                level[u] = -1;
                match path.pop() {
                    None => break,
                    Some(e) => {
                        u = self.to[e ^ 1];
                        next[u] += 1;
                    }
                }
            }
        }
    }

    /// Nodes reachable from `s` through arcs with positive residual capacity.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !seen[v] && self.residual[e] > T::zero() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS figure 26.1, max flow 23
        let mut g = FlowGraph::<i128>::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            g.add_arc(u, v, c);
        }
        assert_eq!(g.max_flow(0, 5), 23);
        let side = g.reachable(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowGraph::<i128>::new(3);
        g.add_arc(0, 1, 5);
        assert_eq!(g.max_flow(0, 2), 0);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let mut g = FlowGraph::<i128>::new(n);
        for u in 0..n - 1 {
            g.add_arc(u, u + 1, 3);
        }
        assert_eq!(g.max_flow(0, n - 1), 3);
    }
}
