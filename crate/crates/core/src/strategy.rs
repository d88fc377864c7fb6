//! Decoding orders, power exponents and the GDoF each user can reach when
//! every receiver treats interference as noise.
//!
//! On the downlink (IBC) each base station superposes its users' signals and
//! user `order(m)` peels off the messages of `order(1..m-1)` before its own.
//! On the uplink (IMAC) each base station decodes its users from the last
//! position of the order down to the first.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::network::{scalar_from_json, ChannelStrengths, GdofTuple, UserId, UserMap};
use crate::scalar::{max_ext, pos_ext, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Downlink broadcast.
    Ibc,
    /// Uplink multiple access.
    Imac,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::Ibc => Side::Imac,
            Side::Imac => Side::Ibc,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Ibc => "ibc",
            Side::Imac => "imac",
        })
    }
}

/// Per-cell successive-decoding order.
///
/// `position p` of cell `k` holds the slot decoded `p`-th on the downlink.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecodingOrder {
    perms: Vec<Vec<usize>>,
}

impl DecodingOrder {
    pub fn identity(shape: &[usize]) -> Self {
        DecodingOrder {
            perms: shape.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// Builds an order from 1-based slot lists, one per cell.
    pub fn from_one_based(perms: Vec<Vec<usize>>, shape: &[usize]) -> Result<Self> {
        if perms.len() != shape.len() {
            return Err(Error::Dimension(format!(
                "order covers {} cells, network has {}",
                perms.len(),
                shape.len()
            )));
        }
        let mut zero = Vec::with_capacity(perms.len());
        for (k, (perm, &n)) in perms.iter().zip(shape).enumerate() {
            let mut seen = vec![false; n];
            if perm.len() != n {
                return Err(Error::InvalidOrder(format!(
                    "cell {} lists {} users, expected {n}",
                    k + 1,
                    perm.len()
                )));
            }
            for &s in perm {
                if s == 0 || s > n || std::mem::replace(&mut seen[s - 1], true) {
                    return Err(Error::InvalidOrder(format!(
                        "cell {}: {perm:?} is not a permutation of 1..={n}",
                        k + 1
                    )));
                }
            }
            zero.push(perm.iter().map(|s| s - 1).collect());
        }
        Ok(DecodingOrder { perms: zero })
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|p| p.iter().map(|s| s + 1).collect())
            .collect()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.perms.iter().map(Vec::len).collect()
    }

    /// The user decoded at 1-based `position` of `cell`.
    pub fn user_at(&self, cell: usize, position: usize) -> UserId {
        UserId::new(cell, self.perms[cell - 1][position - 1] + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.perms
            .iter()
            .all(|p| p.iter().enumerate().all(|(i, &s)| i == s))
    }

    #[inline]
    pub(crate) fn cell(&self, k: usize) -> &[usize] {
        &self.perms[k]
    }

    pub(crate) fn swap(&mut self, k: usize, a: usize, b: usize) {
        self.perms[k].swap(a, b);
    }

    /// Every order for the given shape, lexicographic with cell 1 most
    /// significant.
    pub fn all(shape: &[usize]) -> Vec<DecodingOrder> {
        shape
            .iter()
            .map(|&n| (0..n).permutations(n).collect::<Vec<_>>())
            .multi_cartesian_product()
            .map(|perms| DecodingOrder { perms })
            .collect()
    }
}

/// Transmit power exponent of one user; `Silent` is an empty message.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Power<T> {
    Level(T),
    Silent,
}

impl<T: Scalar> Power<T> {
    pub fn exponent(self) -> Option<T> {
        match self {
            Power::Level(r) => Some(r),
            Power::Silent => None,
        }
    }

    pub fn is_silent(self) -> bool {
        matches!(self, Power::Silent)
    }

    pub fn to_json(self) -> Value {
        match self {
            Power::Level(r) => serde_json::json!(r.to_f64()),
            Power::Silent => Value::String("off".into()),
        }
    }
}

pub type PowerAllocation<T> = UserMap<Power<T>>;

/// Effective interference level per user.
pub type EffectiveLevels<T> = UserMap<T>;

/// A complete TIN strategy for one side of the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy<T> {
    pub side: Side,
    pub order: DecodingOrder,
    pub power: PowerAllocation<T>,
}

impl<T: Scalar> Strategy<T> {
    pub fn new(
        net: &ChannelStrengths<T>,
        side: Side,
        order: DecodingOrder,
        power: PowerAllocation<T>,
    ) -> Result<Self> {
        check_strategy(net, &order, &power)?;
        Ok(Strategy { side, order, power })
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "side": self.side,
            "order": self.order.to_one_based(),
            "r": self.power.cells().iter()
                .map(|c| c.iter().map(|p| p.to_json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Checks shapes against the network and that no exponent is positive.
pub fn check_strategy<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<()> {
    if order.shape() != net.shape() {
        return Err(Error::Dimension(format!(
            "order shape {:?} does not match network {:?}",
            order.shape(),
            net.shape()
        )));
    }
    if power.shape() != net.shape() {
        return Err(Error::Dimension(format!(
            "power shape {:?} does not match network {:?}",
            power.shape(),
            net.shape()
        )));
    }
    for (user, p) in power.iter() {
        if let Power::Level(r) = p {
            if *r > T::zero() {
                return Err(Error::InvalidPower {
                    user: user.to_string(),
                    reason: format!("exponent {r} is positive"),
                });
            }
        }
    }
    Ok(())
}

/// Parses `{"side": "ibc"|"imac", "order": [[..]], "r": [[number|"off"]]}`.
pub fn parse_strategy<T: Scalar>(text: &str, net: &ChannelStrengths<T>) -> Result<Strategy<T>> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let side: Side = root
        .get("side")
        .cloned()
        .ok_or_else(|| Error::Malformed("strategy needs a side".into()))
        .and_then(|v| {
            serde_json::from_value(v)
                .map_err(|_| Error::Malformed("side must be \"ibc\" or \"imac\"".into()))
        })?;
    let order = match root.get("order") {
        None => DecodingOrder::identity(net.shape()),
        Some(v) => {
            let perms: Vec<Vec<usize>> = serde_json::from_value(v.clone()).map_err(|_| {
                Error::Malformed("order must be a list of 1-based slot lists".into())
            })?;
            DecodingOrder::from_one_based(perms, net.shape())?
        }
    };
    let rows = root
        .get("r")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("strategy needs an r array".into()))?;
    let mut cells = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Malformed(format!("r[{k}] must be an array")))?;
        let mut cell = Vec::with_capacity(row.len());
        for (l, v) in row.iter().enumerate() {
            cell.push(match v {
                Value::String(s) if s == "off" => Power::Silent,
                _ => Power::Level(scalar_from_json(v, &format!("r[{k}][{l}]"))?),
            });
        }
        cells.push(cell);
    }
    Strategy::new(net, side, order, UserMap::from_cells(cells))
}

/// Highest exponent among the users of each cell.
fn cell_peaks<T: Scalar>(power: &PowerAllocation<T>) -> Vec<Option<T>> {
    power
        .cells()
        .iter()
        .map(|c| c.iter().fold(None, |m, p| max_ext(m, p.exponent())))
        .collect()
}

/// Strongest inter-cell interference seen by each downlink user.
fn downlink_interference<T: Scalar>(
    net: &ChannelStrengths<T>,
    power: &PowerAllocation<T>,
) -> UserMap<Option<T>> {
    let peaks = cell_peaks(power);
    let cells = (0..net.cells())
        .map(|k| {
            (0..net.shape()[k])
                .map(|s| {
                    peaks
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .fold(None, |m, (j, peak)| {
                            max_ext(m, peak.map(|r| net.a(k, s, j) + r))
                        })
                })
                .collect()
        })
        .collect();
    UserMap::from_cells(cells)
}

/// Strongest exponent decoded after each position (the suffix maximum).
fn later_peaks<T: Scalar>(order: &[usize], cell_power: &[Power<T>]) -> Vec<Option<T>> {
    let mut out = vec![None; order.len()];
    let mut acc = None;
    for pos in (0..order.len()).rev() {
        out[pos] = acc;
        acc = max_ext(acc, cell_power[order[pos]].exponent());
    }
    out
}

/// Downlink effective interference: the gap between a user's direct
/// strength and the GDoF it can decode, before adding its own exponent.
pub fn effective_interference_ibc<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<EffectiveLevels<T>> {
    check_strategy(net, order, power)?;
    let inter = downlink_interference(net, power);
    let mut out = UserMap::zeros(net.shape());
    for k in 0..net.cells() {
        let perm = order.cell(k);
        let later = later_peaks(perm, power.cell(k));
        for l in 0..perm.len() {
            let u = perm[l];
            let worst_receiver = perm[l..]
                .iter()
                .map(|&m| pos_ext(*inter.at(k, m)) - net.own(k, m))
                .reduce(Scalar::max)
                .expect("position range is non-empty");
            let excess = max_ext(later[l], Some(worst_receiver)).expect("finite");
            *out.at_mut(k, u) = net.own(k, u) + excess;
        }
    }
    Ok(out)
}

/// Downlink GDoF reachable by each user, evaluated from the decoding
/// constraints at every receiver that must resolve the user's message.
pub fn gdof_bounds_ibc<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<GdofTuple<T>> {
    check_strategy(net, order, power)?;
    let mut out = UserMap::zeros(net.shape());
    ibc_bounds_into(net, order, power, &mut out);
    Ok(out)
}

pub(crate) fn ibc_bounds_into<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
    out: &mut GdofTuple<T>,
) {
    let inter = downlink_interference(net, power);
    for k in 0..net.cells() {
        let perm = order.cell(k);
        let later = later_peaks(perm, power.cell(k));
        for l in 0..perm.len() {
            let u = perm[l];
            let Some(r) = power.at(k, u).exponent() else {
                *out.at_mut(k, u) = T::zero();
                continue;
            };
            let worst = perm[l..]
                .iter()
                .map(|&m| {
                    let direct = net.own(k, m);
                    let floor = max_ext(
                        max_ext(Some(T::zero()), later[l].map(|x| direct + x)),
                        *inter.at(k, m),
                    )
                    .expect("finite");
                    direct + r - floor
                })
                .reduce(Scalar::min)
                .expect("position range is non-empty");
            *out.at_mut(k, u) = worst.pos();
        }
    }
}

/// Uplink effective interference at each user's own base station.
pub fn effective_interference_imac<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<EffectiveLevels<T>> {
    check_strategy(net, order, power)?;
    let mut out = UserMap::zeros(net.shape());
    imac_levels_into(net, order, power, &mut out);
    Ok(out)
}

fn imac_levels_into<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
    out: &mut EffectiveLevels<T>,
) {
    for k in 0..net.cells() {
        // Strongest signal reaching base station k from other cells' users.
        let mut foreign = None;
        for j in (0..net.cells()).filter(|&j| j != k) {
            for (l, p) in power.cell(j).iter().enumerate() {
                foreign = max_ext(foreign, p.exponent().map(|r| net.a(j, l, k) + r));
            }
        }
        let mut earlier = None;
        for &u in order.cell(k) {
            *out.at_mut(k, u) = pos_ext(max_ext(earlier, foreign));
            earlier = max_ext(
                earlier,
                power.at(k, u).exponent().map(|r| net.own(k, u) + r),
            );
        }
    }
}

/// Uplink GDoF reachable by each user.
pub fn gdof_bounds_imac<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
) -> Result<GdofTuple<T>> {
    check_strategy(net, order, power)?;
    let mut out = UserMap::zeros(net.shape());
    imac_bounds_into(net, order, power, &mut out);
    Ok(out)
}

pub(crate) fn imac_bounds_into<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
    out: &mut GdofTuple<T>,
) {
    imac_levels_into(net, order, power, out);
    for k in 0..net.cells() {
        for l in 0..net.shape()[k] {
            let level = *out.at(k, l);
            *out.at_mut(k, l) = match power.at(k, l).exponent() {
                Some(r) => (net.own(k, l) + r - level).pos(),
                None => T::zero(),
            };
        }
    }
}

pub fn effective_interference<T: Scalar>(
    net: &ChannelStrengths<T>,
    strategy: &Strategy<T>,
) -> Result<EffectiveLevels<T>> {
    match strategy.side {
        Side::Ibc => effective_interference_ibc(net, &strategy.order, &strategy.power),
        Side::Imac => effective_interference_imac(net, &strategy.order, &strategy.power),
    }
}

pub fn gdof_bounds<T: Scalar>(
    net: &ChannelStrengths<T>,
    strategy: &Strategy<T>,
) -> Result<GdofTuple<T>> {
    match strategy.side {
        Side::Ibc => gdof_bounds_ibc(net, &strategy.order, &strategy.power),
        Side::Imac => gdof_bounds_imac(net, &strategy.order, &strategy.power),
    }
}

/// Whether `d` is non-negative and within the strategy's per-user bounds.
pub fn achievable_with_strategy<T: Scalar>(
    net: &ChannelStrengths<T>,
    strategy: &Strategy<T>,
    d: &GdofTuple<T>,
) -> Result<bool> {
    if d.shape() != net.shape() {
        return Err(Error::Dimension("GDoF tuple does not match network".into()));
    }
    let bounds = gdof_bounds(net, strategy)?;
    Ok(d.values().all(|v| v.approx_ge(T::zero())) && d.dominated_by(&bounds))
}

/// Finite-SNR performance of a downlink strategy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub nominal_snr: f64,
    pub sinr: Vec<Vec<f64>>,
    /// Achievable rate in bits per channel use.
    pub rate: Vec<Vec<f64>>,
    /// `rate / log2(nominal_snr)`, comparable with the GDoF bound.
    pub normalized: Vec<Vec<f64>>,
}

/// SINR and rate of each downlink user at nominal SNR `p`.
///
/// Each base station splits unit power equally across its users before
/// applying the exponents.
pub fn sinr_rates_ibc<T: Scalar>(
    net: &ChannelStrengths<T>,
    order: &DecodingOrder,
    power: &PowerAllocation<T>,
    p: f64,
) -> Result<RateReport> {
    check_strategy(net, order, power)?;
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::Parameter(format!(
            "nominal SNR must exceed 1, got {p}"
        )));
    }
    let net = net.to_float();
    let q: Vec<Vec<f64>> = (0..net.cells())
        .map(|k| {
            let share = net.shape()[k] as f64;
            power
                .cell(k)
                .iter()
                .map(|pw| pw.exponent().map_or(0.0, |r| p.powf(r.to_f64()) / share))
                .collect()
        })
        .collect();
    let cell_total: Vec<f64> = q.iter().map(|c| c.iter().sum()).collect();
    let mut sinr = Vec::with_capacity(net.cells());
    for (k, qk) in q.iter().enumerate() {
        let perm = order.cell(k);
        let mut cell = vec![0.0; perm.len()];
        for (l, &u) in perm.iter().enumerate() {
            if qk[u] == 0.0 {
                continue;
            }
            let later: f64 = perm[l + 1..].iter().map(|&s| qk[s]).sum();
            cell[u] = perm[l..]
                .iter()
                .map(|&m| {
                    let gain = p.powf(net.own(k, m));
                    let foreign: f64 = (0..net.cells())
                        .filter(|&j| j != k)
                        .map(|j| p.powf(net.a(k, m, j)) * cell_total[j])
                        .sum();
                    gain * qk[u] / (1.0 + gain * later + foreign)
                })
                .fold(f64::INFINITY, f64::min);
        }
        sinr.push(cell);
    }
    let rate: Vec<Vec<f64>> = sinr
        .iter()
        .map(|c| c.iter().map(|s| (1.0 + s).log2()).collect())
        .collect();
    let scale = p.log2();
    let normalized = rate
        .iter()
        .map(|c| c.iter().map(|r| r / scale).collect())
        .collect();
    Ok(RateReport {
        nominal_snr: p,
        sinr,
        rate,
        normalized,
    })
}
