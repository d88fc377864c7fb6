//! Mapping TIN strategies between the downlink and the uplink.
//!
//! Setting one side's power exponents to the negated effective interference
//! of the other side never lowers any user's GDoF. The uplink-to-downlink
//! direction additionally needs the received powers at each base station to
//! increase along the decoding order; [`normalize_uplink`] enforces that
//! without lowering any user's uplink GDoF.

use serde::Serialize;

use crate::error::Result;
use crate::network::{ChannelStrengths, UserId, UserMap};
use crate::scalar::Scalar;
use crate::strategy::{
    check_strategy, effective_interference_ibc, effective_interference_imac, DecodingOrder,
    EffectiveLevels, Power, PowerAllocation, Side, Strategy,
};

fn negate_levels<T: Scalar>(
    power: &PowerAllocation<T>,
    levels: &EffectiveLevels<T>,
) -> PowerAllocation<T> {
    let cells = power
        .cells()
        .iter()
        .zip(levels.cells())
        .map(|(pc, lc)| {
            pc.iter()
                .zip(lc)
                .map(|(p, &g)| match p {
                    Power::Silent => Power::Silent,
                    Power::Level(_) => Power::Level(-g),
                })
                .collect()
        })
        .collect();
    UserMap::from_cells(cells)
}

/// Uplink exponents equal to the negated downlink effective interference.
pub fn dualize_ibc_to_imac<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<PowerAllocation<T>> {
    let gamma = effective_interference_ibc(net, order, power)?;
    Ok(negate_levels(power, &gamma))
}

/// Downlink exponents equal to the negated uplink effective interference.
///
/// No reordering is done here; see [`dualize`] for the normalizing variant.
pub fn dualize_imac_to_ibc<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<PowerAllocation<T>> {
    let gamma = effective_interference_imac(net, order, power)?;
    Ok(negate_levels(power, &gamma))
}

fn received<T: Scalar>(
    net: &ChannelStrengths<T>,
    power: &PowerAllocation<T>,
    k: usize,
    u: usize,
) -> Option<T> {
    power.at(k, u).exponent().map(|r| net.own(k, u) + r)
}

/// A pair of positions in one cell whose received powers are out of order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub cell: usize,
    /// 1-based decoding positions, `lower < upper`.
    pub lower: usize,
    pub upper: usize,
}

/// All position pairs where a later-decoded user arrives weaker than an
/// earlier one at their base station. Silent users count as arbitrarily weak.
pub fn received_power_violations<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<Vec<OrderViolation>> {
    check_strategy(net, order, power)?;
    let mut out = Vec::new();
    for k in 0..net.cells() {
        let perm = order.cell(k);
        for lo in 0..perm.len() {
            for hi in lo + 1..perm.len() {
                if weaker(
                    received(net, power, k, perm[hi]),
                    received(net, power, k, perm[lo]),
                ) {
                    out.push(OrderViolation {
                        cell: k + 1,
                        lower: lo + 1,
                        upper: hi + 1,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn weaker<T: Scalar>(a: Option<T>, b: Option<T>) -> bool {
    match (a, b) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x.approx_lt(y),
    }
}

pub fn satisfies_received_power_order<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<bool> {
    Ok(received_power_violations(net, order, power)?.is_empty())
}

/// One repair made by [`normalize_uplink`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationStep {
    pub cell: usize,
    /// 1-based position that received the silenced user.
    pub position: usize,
    pub silenced: UserId,
    pub promoted: UserId,
}

/// Uplink strategy with received powers sorted along the decoding order.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedUplink<T> {
    pub order: DecodingOrder,
    pub power: PowerAllocation<T>,
    pub steps: Vec<NormalizationStep>,
}

/// Repairs the received-power order of an uplink strategy.
///
/// Adjacent positions `(p, p+1)` with the user at `p+1` weaker are swapped and
/// that user, whose uplink GDoF was already zero, is silenced. Pairs are
/// handled in (cell, position) order until none remain. Swapping only
/// adjacent pairs keeps every other user's set of in-cell interferers the
/// same or smaller, so no user's GDoF drops.
pub fn normalize_uplink<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<NormalizedUplink<T>> {
    check_strategy(net, order, power)?;
    let mut order = order.clone();
    let mut power = power.clone();
    let mut steps = Vec::new();
    // Each step silences an audible user or moves a silent one down, so the
    // loop ends within n audible conversions plus n^2 moves per cell.
    let n: usize = net.shape().iter().map(|&l| l * (l + 1)).sum();
    'outer: loop {
        for k in 0..net.cells() {
            for lo in 0..net.shape()[k].saturating_sub(1) {
                let (a, b) = (order.cell(k)[lo], order.cell(k)[lo + 1]);
                if weaker(received(net, &power, k, b), received(net, &power, k, a)) {
                    order.swap(k, lo, lo + 1);
                    *power.at_mut(k, b) = Power::Silent;
                    steps.push(NormalizationStep {
                        cell: k + 1,
                        position: lo + 1,
                        silenced: UserId::from_zero(k, b),
                        promoted: UserId::from_zero(k, a),
                    });
                    assert!(steps.len() <= n, "uplink normalization failed to settle");
                    continue 'outer;
                }
            }
        }
        break;
    }
    Ok(NormalizedUplink {
        order,
        power,
        steps,
    })
}

/// Result of mapping a strategy to the opposite side.
#[derive(Clone, Debug, PartialEq)]
pub struct DualizationReport<T> {
    pub input: Strategy<T>,
    /// Uplink strategy actually dualized, after any normalization.
    pub normalized: Option<NormalizedUplink<T>>,
    /// Effective interference of the (normalized) input.
    pub levels: EffectiveLevels<T>,
    pub output: Strategy<T>,
    /// Whether the dualized uplink strategy meets the received-power order.
    pub order_ok: bool,
}

/// Maps `strategy` to the other side.
///
/// Uplink inputs that break the received-power order are normalized first
/// unless `normalize` is false, in which case the raw dual is returned and
/// `order_ok` is false.
pub fn dualize<T: Scalar>(
    net: &ChannelStrengths<T>,
    strategy: &Strategy<T>,
    normalize: bool,
) -> Result<DualizationReport<T>> {
    match strategy.side {
        Side::Ibc => {
            let levels = effective_interference_ibc(net, &strategy.order, &strategy.power)?;
            let output = Strategy {
                side: Side::Imac,
                order: strategy.order.clone(),
                power: negate_levels(&strategy.power, &levels),
            };
            Ok(DualizationReport {
                input: strategy.clone(),
                normalized: None,
                levels,
                output,
                order_ok: true,
            })
        }
        Side::Imac => {
            let ok = satisfies_received_power_order(net, &strategy.order, &strategy.power)?;
            let normalized = (!ok && normalize)
                .then(|| normalize_uplink(net, &strategy.order, &strategy.power))
                .transpose()?;
            let (order, power) = match &normalized {
                Some(n) => (&n.order, &n.power),
                None => (&strategy.order, &strategy.power),
            };
            let levels = effective_interference_imac(net, order, power)?;
            let output = Strategy {
                side: Side::Ibc,
                order: order.clone(),
                power: negate_levels(power, &levels),
            };
            Ok(DualizationReport {
                input: strategy.clone(),
                order_ok: ok || normalized.is_some(),
                normalized,
                levels,
                output,
            })
        }
    }
}
