//! Random networks, strategies and GDoF tuples on decimal grids.
//!
//! Values are drawn as integer multiples of `1 / resolution`, so the exact
//! backend represents them without rounding.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::network::{ChannelStrengths, GdofTuple, UserMap};
use crate::scalar::Scalar;
use crate::strategy::{DecodingOrder, Power, PowerAllocation};

/// Draws strengths in `[0, max_units / resolution]` and sorts each cell by
/// direct strength.
pub fn random_network<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    shape: &[usize],
    max_units: i64,
    resolution: i64,
) -> ChannelStrengths<T> {
    let k_total = shape.len();
    let alpha = shape
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..k_total).map(|_| rng.gen_range(0..=max_units)).collect())
                .collect();
            rows.sort_by_key(|row| row[k]);
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|u| T::from_ratio(u, resolution))
                        .collect()
                })
                .collect()
        })
        .collect();
    ChannelStrengths::from_nested(alpha).expect("shape is valid by construction")
}

/// Draws a random shape with cell count and users per cell from the ranges.
pub fn random_shape<R: Rng + ?Sized>(
    rng: &mut R,
    cells: std::ops::RangeInclusive<usize>,
    users: std::ops::RangeInclusive<usize>,
) -> Vec<usize> {
    let k = rng.gen_range(cells);
    (0..k).map(|_| rng.gen_range(users.clone())).collect()
}

pub fn random_order<R: Rng + ?Sized>(rng: &mut R, shape: &[usize]) -> DecodingOrder {
    let perms = shape
        .iter()
        .map(|&n| {
            let mut p: Vec<usize> = (1..=n).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    DecodingOrder::from_one_based(perms, shape).expect("shuffled identity is a permutation")
}

/// Exponents in `[-depth_units / resolution, 0]`; each user is silent with
/// probability `silent`.
pub fn random_power<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    shape: &[usize],
    depth_units: i64,
    resolution: i64,
    silent: f64,
) -> PowerAllocation<T> {
    let cells = shape
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(silent) {
                        Power::Silent
                    } else {
                        Power::Level(T::from_ratio(-rng.gen_range(0..=depth_units), resolution))
                    }
                })
                .collect()
        })
        .collect();
    UserMap::from_cells(cells)
}

/// GDoF tuple with each user drawn from `[0, direct strength]`.
pub fn random_point_in_box<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    net: &ChannelStrengths<T>,
    resolution: i64,
) -> GdofTuple<T> {
    let cells = (0..net.cells())
        .map(|k| {
            (0..net.shape()[k])
                .map(|l| {
                    let top = (net.own(k, l).to_f64() * resolution as f64).floor() as i64;
                    T::from_ratio(rng.gen_range(0..=top.max(0)), resolution)
                })
                .collect()
        })
        .collect();
    UserMap::from_cells(cells)
}
