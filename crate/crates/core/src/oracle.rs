//! Brute-force search over TIN strategies on a grid of power exponents.
//!
//! Every decoding order is combined with every assignment of exponents from
//! `{0, -step, -2 step, ..., -depth}` plus silence. The per-user GDoF of each
//! strategy is an inner approximation of the TIN region that tightens as the
//! step shrinks, independent of the polyhedral description.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::network::{ChannelStrengths, GdofTuple, UserMap};
use crate::scalar::{cmp_slices, Scalar};
use crate::strategy::{
    ibc_bounds_into, imac_bounds_into, DecodingOrder, Power, PowerAllocation, Side, Strategy,
};

/// Default cap on strategy evaluations.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// L-infinity distance under which float points are merged.
pub const FLOAT_DEDUP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub step: T,
    pub depth: T,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(step: T, depth: T) -> Result<Self> {
        if step.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Parameter(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if depth < T::zero() {
            return Err(Error::Parameter(format!(
                "grid depth must be non-negative, got {depth}"
            )));
        }
        Ok(GridSpec { step, depth })
    }

    /// Step 0.05, depth one above the strongest link.
    pub fn default_for(net: &ChannelStrengths<T>) -> Self {
        GridSpec {
            step: T::from_ratio(1, 20),
            depth: net.max_strength() + T::one(),
        }
    }

    /// Exponent levels from 0 downward, then silence.
    pub fn levels(&self) -> Vec<Power<T>> {
        let mut out = Vec::new();
        let mut r = T::zero();
        let mut i = 0i64;
        while (-r).approx_le(self.depth) {
            out.push(Power::Level(r));
            i += 1;
            r = -(self.step * T::from_i64(i));
        }
        out.push(Power::Silent);
        out
    }
}

/// Number of strategies the grid search visits.
pub fn strategy_count<T: Scalar>(net: &ChannelStrengths<T>, grid: &GridSpec<T>) -> u128 {
    let orders: u128 = net
        .shape()
        .iter()
        .map(|&n| (1..=n as u128).product::<u128>())
        .product();
    let levels = grid.levels().len() as u128;
    (0..net.total_users()).fold(orders, |acc, _| acc.saturating_mul(levels))
}

/// Calls `visit` with every grid strategy and its per-user GDoF, stopping
/// early when `visit` breaks.
pub fn for_each_grid_strategy<T, F>(
    net: &ChannelStrengths<T>,
    side: Side,
    grid: &GridSpec<T>,
    budget: u128,
    mut visit: F,
) -> Result<()>
where
    T: Scalar,
    F: FnMut(&DecodingOrder, &PowerAllocation<T>, &GdofTuple<T>) -> ControlFlow<()>,
{
    let required = strategy_count(net, grid);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let levels = grid.levels();
    let slots: Vec<(usize, usize)> = net
        .shape()
        .iter()
        .enumerate()
        .flat_map(|(k, &n)| (0..n).map(move |l| (k, l)))
        .collect();
    let mut bounds = UserMap::zeros(net.shape());
    for order in DecodingOrder::all(net.shape()) {
        let mut digits = vec![0usize; slots.len()];
        let mut power = UserMap::filled(net.shape(), levels[0]);
        'grid: loop {
            match side {
                Side::Ibc => ibc_bounds_into(net, &order, &power, &mut bounds),
                Side::Imac => imac_bounds_into(net, &order, &power, &mut bounds),
            }
            if visit(&order, &power, &bounds).is_break() {
                return Ok(());
            }
            // Odometer step, last user fastest.
            for pos in (0..slots.len()).rev() {
                let (k, l) = slots[pos];
                digits[pos] += 1;
                if digits[pos] < levels.len() {
                    *power.at_mut(k, l) = levels[digits[pos]];
                    continue 'grid;
                }
                digits[pos] = 0;
                *power.at_mut(k, l) = levels[0];
            }
            break;
        }
    }
    Ok(())
}

/// Distinct GDoF tuples reached on the grid, sorted lexicographically.
///
/// The float backend merges tuples closer than [`FLOAT_DEDUP`].
pub fn grid_achievable_points<T: Scalar>(
    net: &ChannelStrengths<T>,
    side: Side,
    grid: &GridSpec<T>,
    budget: u128,
) -> Result<Vec<GdofTuple<T>>> {
    let mut points: Vec<Vec<T>> = Vec::new();
    for_each_grid_strategy(net, side, grid, budget, |_, _, d| {
        points.push(d.to_flat());
        ControlFlow::Continue(())
    })?;
    points.sort_by(|a, b| cmp_slices(a, b));
    if T::EXACT {
        points.dedup();
    } else {
        points.dedup_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= FLOAT_DEDUP)
        });
    }
    points
        .into_iter()
        .map(|p| UserMap::from_flat(net.shape(), p))
        .collect()
}

/// Best weighted sum found by the grid search.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleBest<T> {
    pub value: T,
    pub point: GdofTuple<T>,
    pub strategy: Strategy<T>,
}

/// Largest `sum w_u d_u` over grid strategies; the first strategy reaching
/// the maximum is reported.
pub fn oracle_max_sum<T: Scalar>(
    net: &ChannelStrengths<T>,
    side: Side,
    grid: &GridSpec<T>,
    weights: &UserMap<T>,
    budget: u128,
) -> Result<OracleBest<T>> {
    if weights.shape() != net.shape() {
        return Err(Error::Dimension("weights do not match network".into()));
    }
    let w = weights.to_flat();
    let mut best: Option<OracleBest<T>> = None;
    for_each_grid_strategy(net, side, grid, budget, |order, power, d| {
        let value = d
            .values()
            .zip(&w)
            .fold(T::zero(), |acc, (&x, &wi)| acc + wi * x);
        if best.as_ref().map_or(true, |b| value.approx_gt(b.value)) {
            best = Some(OracleBest {
                value,
                point: d.clone(),
                strategy: Strategy {
                    side,
                    order: order.clone(),
                    power: power.clone(),
                },
            });
        }
        ControlFlow::Continue(())
    })?;
    best.ok_or_else(|| Error::Precondition("grid is empty".into()))
}

/// First grid strategy whose GDoF dominates `d`, if any.
pub fn oracle_achievable<T: Scalar>(
    net: &ChannelStrengths<T>,
    side: Side,
    grid: &GridSpec<T>,
    d: &GdofTuple<T>,
    budget: u128,
) -> Result<Option<Strategy<T>>> {
    if d.shape() != net.shape() {
        return Err(Error::Dimension("GDoF tuple does not match network".into()));
    }
    let mut found = None;
    for_each_grid_strategy(net, side, grid, budget, |order, power, bounds| {
        if d.dominated_by(bounds) {
            found = Some(Strategy {
                side,
                order: order.clone(),
                power: power.clone(),
            });
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(s: &str) -> Rational {
        Rational::from_decimal_str(s).unwrap()
    }

    fn single_cell() -> ChannelStrengths<Rational> {
        ChannelStrengths::from_nested(vec![vec![vec![q("0.6")], vec![q("1.0")]]]).unwrap()
    }

    #[test]
    fn levels_cover_depth_and_silence() {
        let g = GridSpec::new(q("0.25"), q("1")).unwrap();
        let lv = g.levels();
        assert_eq!(lv.len(), 6);
        assert_eq!(lv[0], Power::Level(q("0")));
        assert_eq!(lv[4], Power::Level(q("-1")));
        assert_eq!(lv[5], Power::Silent);
        assert!(GridSpec::new(q("0"), q("1")).is_err());
    }

    #[test]
    fn counts_and_budget() {
        let net = single_cell();
        let g = GridSpec::new(q("0.5"), q("1")).unwrap();
        // 2 orders times 4 levels per user.
        assert_eq!(strategy_count(&net, &g), 32);
        let mut seen = 0;
        for_each_grid_strategy(&net, Side::Ibc, &g, 32, |_, _, _| {
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, 32);
        assert!(matches!(
            grid_achievable_points(&net, Side::Ibc, &g, 31),
            Err(Error::BudgetExceeded {
                required: 32,
                budget: 31
            })
        ));
    }

    #[test]
    fn single_cell_oracle_reaches_the_fixture_point() {
        let net = single_cell();
        let g = GridSpec::default_for(&net);
        let target = UserMap::from_flat(&[2], vec![q("0.6"), q("0.4")]).unwrap();
        assert!(
            oracle_achievable(&net, Side::Ibc, &g, &target, DEFAULT_BUDGET)
                .unwrap()
                .is_some()
        );
        let ones = UserMap::filled(&[2], q("1"));
        let best = oracle_max_sum(&net, Side::Ibc, &g, &ones, DEFAULT_BUDGET).unwrap();
        assert_eq!(best.value, q("1"));
        let pts = grid_achievable_points(&net, Side::Imac, &g, DEFAULT_BUDGET).unwrap();
        assert!(pts
            .windows(2)
            .all(|w| cmp_slices(&w[0].to_flat(), &w[1].to_flat()).is_lt()));
        assert!(pts.contains(&target));
    }
}
