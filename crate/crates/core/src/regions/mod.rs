//! Polyhedral GDoF regions reachable with treating interference as noise.
//!
//! For a chosen set of active users and a decoding order among them, the
//! reachable GDoF tuples form a polytope described by prefix-sum bounds in
//! each cell and one family of bounds per cyclic sequence of active cells.
//! The full TIN region is the union of these polytopes over all choices.

pub mod cyclic;
pub mod ia;
pub mod lp;
pub mod partition;
pub mod regime;

use itertools::Itertools;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::network::{ChannelStrengths, GdofTuple, UserId, UserMap};
use crate::scalar::{cmp_slices, Scalar};

pub use cyclic::{cyclic_sequence_count, cyclic_sequences};
pub use ia::{ia_sum_gdof, IaReport};
pub use partition::{partition_users, residual_chain_holds, UserPartition};
pub use regime::{classify_regime, implied_conditions_hold, is_ctin, is_tin, Regime};

/// Active users and their decoding order, one list per cell.
///
/// Users missing from a cell's list are inactive. The list order is the
/// decoding order of the remaining users.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubnetworkOrder {
    perms: Vec<Vec<usize>>,
}

impl SubnetworkOrder {
    /// All users active, identity order.
    pub fn identity(shape: &[usize]) -> Self {
        SubnetworkOrder {
            perms: shape.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// From 1-based slot lists; each list must hold distinct in-range slots.
    pub fn from_one_based(perms: Vec<Vec<usize>>, shape: &[usize]) -> Result<Self> {
        if perms.len() != shape.len() {
            return Err(Error::Dimension(format!(
                "order covers {} cells, network has {}",
                perms.len(),
                shape.len()
            )));
        }
        for (k, (perm, &n)) in perms.iter().zip(shape).enumerate() {
            let mut seen = vec![false; n];
            for &s in perm {
                if s == 0 || s > n || std::mem::replace(&mut seen[s - 1], true) {
                    return Err(Error::InvalidOrder(format!(
                        "cell {}: {perm:?} must list distinct slots in 1..={n}",
                        k + 1
                    )));
                }
            }
        }
        Ok(SubnetworkOrder {
            perms: perms
                .into_iter()
                .map(|p| p.into_iter().map(|s| s - 1).collect())
                .collect(),
        })
    }

    /// Identity order restricted to the given 1-based slot sets.
    pub fn identity_on(subnet: Vec<Vec<usize>>, shape: &[usize]) -> Result<Self> {
        let sorted = subnet
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Self::from_one_based(sorted, shape)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|p| p.iter().map(|s| s + 1).collect())
            .collect()
    }

    /// Active slots per cell, 1-based and sorted.
    pub fn subnetwork(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|p| p.iter().map(|s| s + 1).sorted().collect())
            .collect()
    }

    pub fn active_users(&self) -> usize {
        self.perms.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> usize {
        self.perms.len()
    }

    fn active_cells(&self) -> Vec<usize> {
        (0..self.perms.len())
            .filter(|&k| !self.perms[k].is_empty())
            .collect()
    }

    /// Every (active set, order) pair in search order: larger active sets
    /// first, ties broken by the sorted slot lists, then orders
    /// lexicographically.
    pub fn all(shape: &[usize]) -> Vec<SubnetworkOrder> {
        let subsets = shape
            .iter()
            .map(|&n| (0..n).powerset().collect::<Vec<_>>())
            .multi_cartesian_product()
            .sorted_by(|a, b| {
                let size = |s: &Vec<Vec<usize>>| s.iter().map(Vec::len).sum::<usize>();
                size(b).cmp(&size(a)).then_with(|| a.cmp(b))
            });
        let mut out = Vec::new();
        for subset in subsets {
            let orders = subset
                .iter()
                .map(|s| s.iter().copied().permutations(s.len()).collect::<Vec<_>>())
                .multi_cartesian_product();
            out.extend(orders.map(|perms| SubnetworkOrder { perms }));
        }
        out
    }
}

/// `sum of d over users <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint<T> {
    pub users: Vec<UserId>,
    pub bound: T,
}

/// A polytope of GDoF tuples: non-negative, zero on `zero`, and within every
/// constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralRegion<T> {
    pub shape: Vec<usize>,
    pub zero: Vec<UserId>,
    pub constraints: Vec<LinearConstraint<T>>,
}

impl<T: Scalar> PolyhedralRegion<T> {
    /// Same region with constraints sorted, for structural comparison.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.zero.sort();
        out.constraints.sort_by(|a, b| {
            a.users
                .cmp(&b.users)
                .then_with(|| cmp_slices(&[a.bound], &[b.bound]))
        });
        out
    }

    pub fn contains(&self, d: &GdofTuple<T>) -> bool {
        contains(self, d)
    }

    pub fn to_json(&self) -> Value {
        let ids = |users: &[UserId]| -> Vec<[usize; 2]> {
            users.iter().map(|u| [u.cell, u.slot]).collect()
        };
        serde_json::json!({
            "shape": self.shape,
            "zero": ids(&self.zero),
            "constraints": self.constraints.iter().map(|c| serde_json::json!({
                "users": ids(&c.users),
                "bound": c.bound.to_f64(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Region reachable with the given active users and decoding order.
pub fn polyhedral_region<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &SubnetworkOrder,
) -> Result<PolyhedralRegion<T>> {
    if order.shape() != net.cells() {
        return Err(Error::Dimension(format!(
            "order covers {} cells, network has {}",
            order.shape(),
            net.cells()
        )));
    }
    for (k, perm) in order.perms.iter().enumerate() {
        if perm.iter().any(|&s| s >= net.shape()[k]) {
            return Err(Error::InvalidOrder(format!(
                "cell {} lists a missing slot",
                k + 1
            )));
        }
    }
    let zero = net
        .user_ids()
        .filter(|u| {
            let (k, l) = u.zero_based();
            !order.perms[k].contains(&l)
        })
        .collect();
    let prefix = |k: usize, len: usize| -> Vec<UserId> {
        order.perms[k][..len]
            .iter()
            .map(|&s| UserId::from_zero(k, s))
            .collect()
    };

    let mut constraints = Vec::new();
    let active = order.active_cells();
    for &i in &active {
        for (pos, &s) in order.perms[i].iter().enumerate() {
            constraints.push(LinearConstraint {
                users: sorted(prefix(i, pos + 1)),
                bound: net.own(i, s),
            });
        }
    }
    for seq in cyclic_sequences(&active)
        .into_iter()
        .filter(|s| s.len() >= 2)
    {
        let choices = seq
            .iter()
            .map(|&i| 1..=order.perms[i].len())
            .multi_cartesian_product();
        for lens in choices {
            let mut users = Vec::new();
            let mut bound = T::zero();
            for (j, (&i, &len)) in seq.iter().zip(&lens).enumerate() {
                let prev = seq[(j + seq.len() - 1) % seq.len()];
                let s = order.perms[i][len - 1];
                users.extend(prefix(i, len));
                bound = bound + net.own(i, s) - net.a(i, s, prev);
            }
            constraints.push(LinearConstraint {
                users: sorted(users),
                bound,
            });
        }
    }
    Ok(PolyhedralRegion {
        shape: net.shape().to_vec(),
        zero,
        constraints,
    })
}

fn sorted(mut users: Vec<UserId>) -> Vec<UserId> {
    users.sort();
    users
}

/// Outer bound on the GDoF region of a network in the TIN regime: prefix
/// bounds per cell in ascending strength order plus the cyclic bounds over
/// all cells.
pub fn outer_bound_region<T: Scalar>(net: &ChannelStrengths<T>) -> Result<PolyhedralRegion<T>> {
    if !is_tin(net) {
        return Err(Error::Precondition(
            "outer bound applies only to networks in the TIN regime".into(),
        ));
    }
    let weakest = |k: usize, count: usize| (0..count).map(move |l| UserId::from_zero(k, l));
    let mut constraints = Vec::new();
    for k in 0..net.cells() {
        for l in 0..net.shape()[k] {
            constraints.push(LinearConstraint {
                users: weakest(k, l + 1).collect(),
                bound: net.own(k, l),
            });
        }
    }
    let cells: Vec<usize> = (0..net.cells()).collect();
    for cycle in cyclic_sequences(&cells) {
        if cycle.len() < 2 {
            continue;
        }
        for top in cycle
            .iter()
            .map(|&k| 0..net.shape()[k])
            .multi_cartesian_product()
        {
            let mut users = Vec::new();
            let mut bound = T::zero();
            for (j, &k) in cycle.iter().enumerate() {
                let from = if j == 0 {
                    cycle[cycle.len() - 1]
                } else {
                    cycle[j - 1]
                };
                users.extend(weakest(k, top[j] + 1));
                bound = bound + net.own(k, top[j]) - net.a(k, top[j], from);
            }
            users.sort();
            constraints.push(LinearConstraint { users, bound });
        }
    }
    Ok(PolyhedralRegion {
        shape: net.shape().to_vec(),
        zero: Vec::new(),
        constraints,
    })
}

/// Membership test against an explicit region.
pub fn contains<T: Scalar>(region: &PolyhedralRegion<T>, d: &GdofTuple<T>) -> bool {
    if d.shape() != region.shape {
        return false;
    }
    d.values().all(|v| v.approx_ge(T::zero()))
        && region.zero.iter().all(|u| d.get(*u).approx_eq(T::zero()))
        && region.constraints.iter().all(|c| {
            c.users
                .iter()
                .fold(T::zero(), |acc, u| acc + *d.get(*u))
                .approx_le(c.bound)
        })
}

/// Membership in the region of one (active set, order) pair without
/// materializing its constraints.
///
/// Each cyclic family is checked through its worst case: the left side
/// minus the bound splits into one term per cell of the cycle, and each
/// term depends only on that cell's prefix length.
struct FastMembership<'a, T> {
    net: &'a ChannelStrengths<T>,
    cycles: Vec<Vec<usize>>,
    slack: Vec<T>,
    prefix: Vec<T>,
}

impl<'a, T: Scalar> FastMembership<'a, T> {
    fn new(net: &'a ChannelStrengths<T>) -> Self {
        let cells: Vec<usize> = (0..net.cells()).collect();
        let k = net.cells();
        FastMembership {
            net,
            cycles: cyclic_sequences(&cells)
                .into_iter()
                .filter(|c| c.len() >= 2)
                .collect(),
            slack: vec![T::zero(); k * k],
            prefix: Vec::new(),
        }
    }

    fn check(&mut self, order: &SubnetworkOrder, d: &GdofTuple<T>) -> bool {
        let net = self.net;
        let k_total = net.cells();
        let mut worst: Vec<Option<T>> = vec![None; k_total * k_total];
        for (i, perm) in order.perms.iter().enumerate() {
            self.prefix.clear();
            let mut acc = T::zero();
            for &s in perm {
                acc = acc + *d.at(i, s);
                if !acc.approx_le(net.own(i, s)) {
                    return false;
                }
                self.prefix.push(acc);
            }
            for p in (0..k_total).filter(|&p| p != i) {
                worst[i * k_total + p] = perm
                    .iter()
                    .zip(&self.prefix)
                    .map(|(&s, &sum)| sum - net.own(i, s) + net.a(i, s, p))
                    .reduce(Scalar::max);
            }
        }
        for (idx, w) in worst.iter().enumerate() {
            self.slack[idx] = w.unwrap_or(T::zero());
        }
        'cycle: for cycle in &self.cycles {
            let mut total = T::zero();
            for (j, &i) in cycle.iter().enumerate() {
                let prev = cycle[(j + cycle.len() - 1) % cycle.len()];
                if worst[i * k_total + prev].is_none() {
                    continue 'cycle;
                }
                total = total + self.slack[i * k_total + prev];
            }
            if !total.approx_le(T::zero()) {
                return false;
            }
        }
        true
    }
}

/// Outcome of a TIN-region membership query.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// First (active set, order) pair whose region holds the tuple.
    pub witness: Option<SubnetworkOrder>,
}

/// Whether `d` lies in the union of all polyhedral regions of `net`.
pub fn tina_region_contains<T: Scalar>(
    net: &ChannelStrengths<T>,
    d: &GdofTuple<T>,
) -> Result<Membership> {
    if d.shape() != net.shape() {
        return Err(Error::Dimension("GDoF tuple does not match network".into()));
    }
    let not_member = Membership {
        member: false,
        witness: None,
    };
    if !d.values().all(|v| v.approx_ge(T::zero())) {
        return Ok(not_member);
    }
    let mut fast = FastMembership::new(net);
    for candidate in SubnetworkOrder::all(net.shape()) {
        let covers_support = net.user_ids().all(|u| {
            let (k, l) = u.zero_based();
            candidate.perms[k].contains(&l) || d.at(k, l).approx_eq(T::zero())
        });
        if covers_support && fast.check(&candidate, d) {
            return Ok(Membership {
                member: true,
                witness: Some(candidate),
            });
        }
    }
    Ok(not_member)
}

/// Optimum of a weighted-sum maximization over a region.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub argmax: GdofTuple<T>,
}

/// Maximizes `sum w_u d_u` over the region. Weights must be non-negative and
/// every bound must be non-negative (a negative bound makes the region empty).
pub fn max_weighted_sum<T: Scalar>(
    region: &PolyhedralRegion<T>,
    weights: &UserMap<T>,
) -> Result<LpSolution<T>> {
    if weights.shape() != region.shape {
        return Err(Error::Dimension("weights do not match region".into()));
    }
    if let Some((u, w)) = weights.iter().find(|(_, w)| **w < T::zero()) {
        return Err(Error::Parameter(format!("weight {w} for {u} is negative")));
    }
    if let Some(c) = region.constraints.iter().find(|c| c.bound < T::zero()) {
        return Err(Error::EmptyRegion {
            users: format!("{:?}", c.users),
            bound: c.bound.to_string(),
        });
    }
    let vars: Vec<UserId> = weights
        .iter()
        .map(|(u, _)| u)
        .filter(|u| !region.zero.contains(u))
        .collect();
    let objective: Vec<T> = vars.iter().map(|u| *weights.get(*u)).collect();
    let rows: Vec<Vec<T>> = region
        .constraints
        .iter()
        .map(|c| {
            vars.iter()
                .map(|u| {
                    if c.users.contains(u) {
                        T::one()
                    } else {
                        T::zero()
                    }
                })
                .collect()
        })
        .collect();
    let rhs: Vec<T> = region.constraints.iter().map(|c| c.bound).collect();
    match lp::maximize(&objective, &rows, &rhs) {
        lp::LpOutcome::Optimal { value, x } => {
            let mut argmax = UserMap::zeros(&region.shape);
            for (u, v) in vars.iter().zip(x) {
                argmax.set(*u, v);
            }
            Ok(LpSolution { value, argmax })
        }
        lp::LpOutcome::Unbounded => Err(Error::Precondition(
            "region is unbounded in the weight direction".into(),
        )),
    }
}

/// Weighted-sum maximum over the union of all polyhedral regions, with the
/// maximizing (active set, order) pair. Empty regions are skipped.
pub fn union_max_weighted_sum<T: Scalar>(
    net: &ChannelStrengths<T>,
    weights: &UserMap<T>,
) -> Result<(LpSolution<T>, SubnetworkOrder)> {
    let mut best: Option<(LpSolution<T>, SubnetworkOrder)> = None;
    for candidate in SubnetworkOrder::all(net.shape()) {
        let region = polyhedral_region(net, &candidate)?;
        let sol = match max_weighted_sum(&region, weights) {
            Ok(sol) => sol,
            Err(Error::EmptyRegion { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best
            .as_ref()
            .map_or(true, |(b, _)| sol.value.approx_gt(b.value))
        {
            best = Some((sol, candidate));
        }
    }
    best.ok_or_else(|| Error::Precondition("every polyhedral region is empty".into()))
}
