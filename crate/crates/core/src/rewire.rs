//! Link relocation on a rooted DAG.

use rand::Rng;

use crate::error::Result;
use crate::order::PartialOrder;

/// A mutable DAG given by its links. Relocating a link keeps the graph
/// acyclic and keeps every non-root node reachable from the root.
#[derive(Debug, Clone)]
pub struct RewireGraph {
    edges: Vec<(usize, usize)>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    mark: Vec<u32>,
    stamp: u32,
}

impl RewireGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for &(u, v) in &edges {
            children[u].push(v);
            parents[v].push(u);
        }
        Self {
            edges,
            children,
            parents,
            mark: vec![0; n],
            stamp: 0,
        }
    }

    pub fn from_order(order: &PartialOrder) -> Self {
        Self::new(order.len(), order.hasse_edges().to_vec())
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Marks `v` and everything below it with a fresh stamp.
    fn mark_subtree(&mut self, v: usize) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let mut stack = vec![v];
        self.mark[v] = stamp;
        while let Some(x) = stack.pop() {
            for &c in &self.children[x] {
                if self.mark[c] != stamp {
                    self.mark[c] = stamp;
                    stack.push(c);
                }
            }
        }
    }

    /// Moves link `index` (u → v) to a new parent drawn uniformly from the
    /// nodes that are neither `v`, below `v`, nor already another parent of
    /// `v`. Drawing `u` again leaves the graph unchanged.
    pub fn relocate<R: Rng + ?Sized>(&mut self, index: usize, rng: &mut R) {
        let (u, v) = self.edges[index];
        self.mark_subtree(v);
        let stamp = self.stamp;
        for &p in &self.parents[v] {
            if p != u {
                self.mark[p] = stamp;
            }
        }
        // u itself is never marked, so at least one candidate exists
        let n = self.node_count();
        let new_parent = loop {
            let candidate = rng.random_range(0..n);
            if self.mark[candidate] != stamp {
                break candidate;
            }
        };
        if new_parent == u {
            return;
        }
        self.edges[index] = (new_parent, v);
        let pos = self.children[u]
            .iter()
            .position(|&c| c == v)
            .expect("link present");
        self.children[u].swap_remove(pos);
        self.children[new_parent].push(v);
        let pos = self.parents[v]
            .iter()
            .position(|&p| p == u)
            .expect("link present");
        self.parents[v][pos] = new_parent;
    }

    pub fn to_order(&self) -> Result<PartialOrder> {
        PartialOrder::from_edges(self.node_count(), &self.edges)
    }
}
