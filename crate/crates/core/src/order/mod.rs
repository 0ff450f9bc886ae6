//! Partial orders over a dense candidate set.
//!
//! A [`PartialOrder`] stores its Hasse diagram (the transitive reduction) as
//! a sorted edge list and caches the strict down set of every candidate as a
//! bitmask. An edge `(u, v)` means `u` precedes `v`; the down set `D(u)`
//! holds every candidate that `u` precedes, never `u` itself.

mod extensions;
mod generate;
mod parse;

pub use extensions::{for_each_linear_extension, linear_extensions, DEFAULT_EXTENSION_CAP};
pub use generate::{gen_bucket_order, gen_regular_tree, gen_total_order};
pub use parse::{parse_down_sets, parse_labels, parse_order, write_order};

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A candidate: its dense id and an optional display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate<'a> {
    pub id: usize,
    pub label: Option<&'a str>,
}

/// Strict down sets `D(x)` with their cached sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownSetTable {
    sets: Vec<FixedBitSet>,
    sizes: Vec<usize>,
}

impl DownSetTable {
    /// Builds a table from explicit bitmasks, checking irreflexivity and
    /// transitivity.
    pub fn from_sets(sets: Vec<FixedBitSet>) -> Result<Self> {
        let n = sets.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for (x, set) in sets.iter().enumerate() {
            if set.len() != n {
                return Err(Error::InvalidClosure(format!(
                    "down set of {x} has width {}, expected {n}",
                    set.len()
                )));
            }
            if set.contains(x) {
                return Err(Error::SelfLoop(x));
            }
        }
        for (x, set) in sets.iter().enumerate() {
            for y in set.ones() {
                if !sets[y].is_subset(set) {
                    return Err(Error::InvalidClosure(format!(
                        "{x} precedes {y} but not all of D({y})"
                    )));
                }
            }
        }
        Ok(Self::from_sets_unchecked(sets))
    }

    fn from_sets_unchecked(sets: Vec<FixedBitSet>) -> Self {
        let sizes = sets.iter().map(|s| s.count_ones(..)).collect();
        Self { sets, sizes }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, x: usize) -> &FixedBitSet {
        &self.sets[x]
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    pub fn size(&self, x: usize) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of comparable pairs, `Σ_x |D(x)|`.
    pub fn comparable_pairs(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Transitive closure of an acyclic edge list over `n` candidates.
///
/// Down sets are filled in reverse topological order by OR-ing the masks of
/// each node's direct successors.
pub fn transitive_closure(edges: &[(usize, usize)], n: usize) -> Result<DownSetTable> {
    let graph = Adjacency::new(n, edges)?;
    Ok(graph.closure(&graph.topological_order()?))
}

/// The unique transitive reduction of a strict partial order.
pub fn hasse_reduction(closure: &DownSetTable) -> Vec<(usize, usize)> {
    let n = closure.len();
    let mut edges = Vec::new();
    let mut implied = FixedBitSet::with_capacity(n);
    for x in 0..n {
        implied.clear();
        for z in closure.set(x).ones() {
            implied.union_with(closure.set(z));
        }
        edges.extend(closure.set(x).difference(&implied).map(|y| (x, y)));
    }
    edges
}

/// A validated partial order with its canonical Hasse edges and cached
/// strict closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    hasse: Vec<(usize, usize)>,
    down: DownSetTable,
    labels: Option<Vec<String>>,
}

impl PartialOrder {
    /// Builds an order from any acyclic relation. Duplicate and transitively
    /// implied edges are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let graph = Adjacency::new(n, edges)?;
        let topo = graph.topological_order()?;
        let down = graph.closure(&topo);
        let hasse = graph.reduce(&down);
        if hasse.len() < graph.edge_count {
            log::debug!(
                "dropped {} transitively implied edge(s)",
                graph.edge_count - hasse.len()
            );
        }
        Ok(Self {
            hasse,
            down,
            labels: None,
        })
    }

    /// Builds an order from a validated closure table.
    pub fn from_down_sets(down: DownSetTable) -> Self {
        let hasse = hasse_reduction(&down);
        Self {
            hasse,
            down,
            labels: None,
        }
    }

    /// Attaches display labels, one per candidate.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::DomainMismatch {
                left: self.len(),
                right: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Candidate count `|C|`.
    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn candidates(&self) -> impl Iterator<Item = Candidate<'_>> + '_ {
        (0..self.len()).map(|id| Candidate {
            id,
            label: self.labels.as_ref().map(|l| l[id].as_str()),
        })
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Hasse edges, sorted.
    pub fn hasse_edges(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn link_count(&self) -> usize {
        self.hasse.len()
    }

    pub fn down_sets(&self) -> &DownSetTable {
        &self.down
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        self.down.set(x)
    }

    /// Strict precedence: `x` is ranked before `y`.
    pub fn precedes(&self, x: usize, y: usize) -> bool {
        self.down.set(x).contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.precedes(x, y) || self.precedes(y, x)
    }

    /// True when no candidate precedes another.
    pub fn is_antichain(&self) -> bool {
        self.hasse.is_empty()
    }

    /// True when every pair of distinct candidates is comparable.
    pub fn is_total(&self) -> bool {
        let n = self.len();
        self.down.comparable_pairs() == n * (n - 1) / 2
    }

    /// Candidates with no predecessor, ascending.
    pub fn roots(&self) -> Vec<usize> {
        let mut has_parent = vec![false; self.len()];
        for &(_, v) in &self.hasse {
            has_parent[v] = true;
        }
        (0..self.len()).filter(|&x| !has_parent[x]).collect()
    }

    /// Fails with `NotRooted` unless the Hasse diagram has exactly one root.
    pub fn require_rooted(&self) -> Result<usize> {
        match self.roots().as_slice() {
            [root] => Ok(*root),
            roots => Err(Error::NotRooted(roots.len())),
        }
    }

    /// Level of every candidate: roots are on level 1, every other candidate
    /// sits one below its deepest Hasse parent.
    pub fn levels(&self) -> Vec<usize> {
        let n = self.len();
        let mut children = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(u, v) in &self.hasse {
            children[u].push(v);
            indegree[v] += 1;
        }
        let mut level = vec![1usize; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
        while let Some(u) = queue.pop_front() {
            for &v in &children[u] {
                level[v] = level[v].max(level[u] + 1);
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Moves every candidate `x` to the position of `perm[x]`: the result
    /// has `D'(perm[x]) = perm(D(x))`. Topology is unchanged.
    ///
    /// Panics if `perm` is not a permutation of `0..len()`.
    pub fn relabel(&self, perm: &[usize]) -> PartialOrder {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut seen = FixedBitSet::with_capacity(n);
        for &p in perm {
            assert!(p < n && !seen.put(p), "not a permutation");
        }
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            let target = &mut sets[perm[x]];
            for y in self.down.set(x).ones() {
                target.insert(perm[y]);
            }
        }
        let mut sizes = vec![0; n];
        for x in 0..n {
            sizes[perm[x]] = self.down.size(x);
        }
        let mut hasse: Vec<_> = self
            .hasse
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        hasse.sort_unstable();
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for x in 0..n {
                out[perm[x]] = l[x].clone();
            }
            out
        });
        PartialOrder {
            hasse,
            down: DownSetTable { sets, sizes },
            labels,
        }
    }

    /// Exchanges the positions of candidates `a` and `b`.
    pub fn swap_candidates(&self, a: usize, b: usize) -> PartialOrder {
        let mut perm: Vec<usize> = (0..self.len()).collect();
        perm.swap(a, b);
        self.relabel(&perm)
    }

    /// Fails with `DomainMismatch` if the two orders have different sizes.
    pub fn check_same_domain(&self, other: &PartialOrder) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }
}

/// A total order given as 1-based positions: `position[x]` is the rank of
/// candidate `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalOrderRanking {
    position: Vec<usize>,
}

impl TotalOrderRanking {
    pub fn from_positions(position: Vec<usize>) -> Result<Self> {
        let n = position.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut seen = vec![false; n];
        for (x, &p) in position.iter().enumerate() {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidClosure(format!(
                    "position {p} of candidate {x} is not part of a permutation of 1..={n}"
                )));
            }
            seen[p - 1] = true;
        }
        Ok(Self { position })
    }

    /// Builds a ranking from the candidates listed best first.
    pub fn from_sequence(sequence: &[usize]) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![0; n];
        for (rank, &x) in sequence.iter().enumerate() {
            if x >= n {
                return Err(Error::CandidateOutOfRange { id: x, n });
            }
            position[x] = rank + 1;
        }
        Self::from_positions(position)
    }

    /// Reads the ranking off a total order; fails on the first incomparable
    /// pair.
    pub fn from_order(order: &PartialOrder) -> Result<Self> {
        let n = order.len();
        if !order.is_total() {
            for x in 0..n {
                for y in x + 1..n {
                    if !order.comparable(x, y) {
                        return Err(Error::NotTotalOrder(x, y));
                    }
                }
            }
        }
        Ok(Self {
            position: (0..n).map(|x| n - order.down_sets().size(x)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    /// Candidates listed best first.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.len()];
        for (x, &p) in self.position.iter().enumerate() {
            seq[p - 1] = x;
        }
        seq
    }

    pub fn to_order(&self) -> PartialOrder {
        let seq = self.sequence();
        let edges: Vec<_> = seq.windows(2).map(|w| (w[0], w[1])).collect();
        PartialOrder::from_edges(self.len(), &edges).expect("a chain is acyclic")
    }
}

/// Successor lists of a raw edge set, deduplicated.
struct Adjacency {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Adjacency {
    fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::CandidateOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            succ[u].push(v);
        }
        let mut edge_count = 0;
        for (u, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
            for &v in list.iter() {
                pred[v].push(u);
            }
        }
        Ok(Self {
            succ,
            pred,
            edge_count,
        })
    }

    fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.succ.len();
        let mut indegree: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.succ[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(Error::CycleDetected(self.find_cycle(&indegree)))
        }
    }

    /// Walks predecessors among the nodes Kahn's algorithm could not remove
    /// until one repeats.
    fn find_cycle(&self, indegree: &[usize]) -> Vec<usize> {
        let start = indegree.iter().position(|&d| d > 0).expect("a stuck node");
        let mut visited_at = vec![usize::MAX; indegree.len()];
        let mut walk = Vec::new();
        let mut node = start;
        while visited_at[node] == usize::MAX {
            visited_at[node] = walk.len();
            walk.push(node);
            node = *self.pred[node]
                .iter()
                .find(|&&p| indegree[p] > 0)
                .expect("stuck nodes have a stuck predecessor");
        }
        let mut cycle = walk.split_off(visited_at[node]);
        cycle.reverse();
        cycle
    }

    fn closure(&self, topo: &[usize]) -> DownSetTable {
        let n = self.succ.len();
        let mut sets = vec![FixedBitSet::with_capacity(n); n];
        for &u in topo.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            for &v in &self.succ[u] {
                set.insert(v);
                set.union_with(&sets[v]);
            }
            sets[u] = set;
        }
        DownSetTable::from_sets_unchecked(sets)
    }

    /// A direct successor is a cover unless another direct successor
    /// already reaches it.
    fn reduce(&self, down: &DownSetTable) -> Vec<(usize, usize)> {
        let n = self.succ.len();
        let mut edges = Vec::with_capacity(self.edge_count);
        let mut implied = FixedBitSet::with_capacity(n);
        for (u, list) in self.succ.iter().enumerate() {
            implied.clear();
            for &v in list {
                implied.union_with(down.set(v));
            }
            edges.extend(
                list.iter()
                    .filter(|&&v| !implied.contains(v))
                    .map(|&v| (u, v)),
            );
        }
        edges
    }
}
