use super::{PartialOrder, TotalOrderRanking};
use crate::error::{Error, Result};

pub const DEFAULT_EXTENSION_CAP: usize = 1_000_000;

/// Visits every linear extension of `order` exactly once, as a sequence of
/// candidates listed best first. Returns the number visited.
///
/// Extensions are generated by repeatedly removing a minimal element, in
/// ascending id order at every branch. Fails with `ExtensionCapExceeded` as
/// soon as more than `cap` extensions exist.
pub fn for_each_linear_extension<F>(order: &PartialOrder, cap: usize, mut visit: F) -> Result<usize>
where
    F: FnMut(&[usize]),
{
    let n = order.len();
    let mut children = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(u, v) in order.hasse_edges() {
        children[u].push(v);
        indegree[v] += 1;
    }
    let mut state = Walk {
        children,
        indegree,
        placed: vec![false; n],
        prefix: Vec::with_capacity(n),
        count: 0,
        cap,
    };
    state.descend(&mut visit)?;
    Ok(state.count)
}

struct Walk {
    children: Vec<Vec<usize>>,
    indegree: Vec<usize>,
    placed: Vec<bool>,
    prefix: Vec<usize>,
    count: usize,
    cap: usize,
}

impl Walk {
    fn descend<F: FnMut(&[usize])>(&mut self, visit: &mut F) -> Result<()> {
        if self.prefix.len() == self.placed.len() {
            self.count += 1;
            if self.count > self.cap {
                return Err(Error::ExtensionCapExceeded(self.cap));
            }
            visit(&self.prefix);
            return Ok(());
        }
        for x in 0..self.placed.len() {
            if self.placed[x] || self.indegree[x] != 0 {
                continue;
            }
            self.placed[x] = true;
            self.prefix.push(x);
            for i in 0..self.children[x].len() {
                self.indegree[self.children[x][i]] -= 1;
            }
            let result = self.descend(visit);
            for i in 0..self.children[x].len() {
                self.indegree[self.children[x][i]] += 1;
            }
            self.prefix.pop();
            self.placed[x] = false;
            result?;
        }
        Ok(())
    }
}

/// Collects every linear extension of `order`; see
/// [`for_each_linear_extension`].
pub fn linear_extensions(order: &PartialOrder, cap: usize) -> Result<Vec<TotalOrderRanking>> {
    let mut out = Vec::new();
    for_each_linear_extension(order, cap, |seq| {
        out.push(TotalOrderRanking::from_sequence(seq).expect("a permutation"));
    })?;
    Ok(out)
}
