//! Splitting a cell's weakest users by how they compare with a reference
//! user once leakage toward a neighbouring cell is subtracted.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::ChannelStrengths;
use crate::scalar::Scalar;

/// Partition of slots `1..=count` of `cell` relative to `predecessor`.
///
/// `retained` holds `count` and every lower slot whose direct strength does
/// not exceed the reference user's direct strength minus its leakage toward
/// `predecessor`. `residual` holds the rest. Both are 1-based and ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UserPartition {
    pub cell: usize,
    pub predecessor: usize,
    pub count: usize,
    pub retained: Vec<usize>,
    pub residual: Vec<usize>,
}

/// Builds the partition; `cell`, `predecessor` and `count` are 1-based.
pub fn partition_users<T: Scalar>(
    net: &ChannelStrengths<T>,
    cell: usize,
    predecessor: usize,
    count: usize,
) -> Result<UserPartition> {
    let k_total = net.cells();
    if cell == 0 || cell > k_total || predecessor == 0 || predecessor > k_total {
        return Err(Error::Parameter(format!(
            "cells must lie in 1..={k_total}, got {cell} and {predecessor}"
        )));
    }
    if cell == predecessor {
        return Err(Error::Parameter("predecessor must differ from cell".into()));
    }
    let (i, p) = (cell - 1, predecessor - 1);
    if count == 0 || count > net.shape()[i] {
        return Err(Error::Parameter(format!(
            "count must lie in 1..={}, got {count}",
            net.shape()[i]
        )));
    }
    let top = count - 1;
    let reference = net.own(i, top) - net.a(i, top, p);
    let (mut retained, residual): (Vec<usize>, Vec<usize>) =
        (0..top).partition(|&s| reference.approx_ge(net.own(i, s)));
    retained.push(top);
    let one_based = |v: Vec<usize>| v.into_iter().map(|s| s + 1).collect();
    Ok(UserPartition {
        cell,
        predecessor,
        count,
        retained: one_based(retained),
        residual: one_based(residual),
    })
}

/// Checks the chain property of the residual users.
///
/// With the residual slots `q(1) < ... < q(n)` followed by `q(n+1) = count`,
/// each consecutive pair `(a, b) = (q(s), q(s+1))` must satisfy
///
/// * `own(b) - leak(b) < own(a)`,
/// * `own(b) - 2 leak(b) >= own(a) - leak(a)`,
/// * `leak(a) > leak(b)`,
///
/// where `leak` is the strength from the predecessor's base station. Every
/// network in the TIN regime passes.
pub fn residual_chain_holds<T: Scalar>(
    net: &ChannelStrengths<T>,
    partition: &UserPartition,
) -> bool {
    let (i, p) = (partition.cell - 1, partition.predecessor - 1);
    let chain: Vec<usize> = partition
        .residual
        .iter()
        .chain(std::iter::once(&partition.count))
        .map(|s| s - 1)
        .collect();
    chain.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        let (own_a, own_b) = (net.own(i, a), net.own(i, b));
        let (leak_a, leak_b) = (net.a(i, a, p), net.a(i, b, p));
        (own_b - leak_b).approx_lt(own_a)
            && (own_b - leak_b - leak_b).approx_ge(own_a - leak_a)
            && leak_a.approx_gt(leak_b)
    })
}
