use super::PartialOrder;
use crate::error::{Error, Result};

/// Complete `branching`-ary tree of `depth` levels, labelled breadth first:
/// the root is 0 and the children of `i` are `b·i + 1 ..= b·i + b`.
pub fn gen_regular_tree(branching: usize, depth: usize) -> Result<PartialOrder> {
    let overflow = Error::Overflow { branching, depth };
    if branching == 0 || depth == 0 {
        return Err(Error::EmptyInput);
    }
    // (b^d - 1) / (b - 1), summed level by level so b = 1 needs no special case
    let mut n: u32 = 0;
    let mut width: u32 = 1;
    for level in 0..depth {
        n = n.checked_add(width).ok_or(overflow.clone())?;
        if level + 1 < depth {
            width = width
                .checked_mul(branching.try_into().map_err(|_| overflow.clone())?)
                .ok_or(overflow.clone())?;
        }
    }
    let n = n as usize;
    let edges: Vec<_> = (1..n)
        .map(|child| ((child - 1) / branching, child))
        .collect();
    PartialOrder::from_edges(n, &edges)
}

/// The chain `0 ≺ 1 ≺ … ≺ n-1`.
pub fn gen_total_order(n: usize) -> Result<PartialOrder> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    PartialOrder::from_edges(n, &edges)
}

/// Buckets of tied candidates, consecutive ids per bucket. Every member of
/// bucket `k` precedes every member of bucket `k + 1`.
pub fn gen_bucket_order(bucket_sizes: &[usize]) -> Result<PartialOrder> {
    if bucket_sizes.contains(&0) {
        return Err(Error::InfeasibleSpec(
            "bucket sizes must be at least 1".into(),
        ));
    }
    let mut edges = Vec::new();
    let mut start = 0;
    for pair in bucket_sizes.windows(2) {
        let (upper, lower) = (
            start..start + pair[0],
            start + pair[0]..start + pair[0] + pair[1],
        );
        for u in upper {
            edges.extend(lower.clone().map(|v| (u, v)));
        }
        start += pair[0];
    }
    PartialOrder::from_edges(bucket_sizes.iter().sum(), &edges)
}
