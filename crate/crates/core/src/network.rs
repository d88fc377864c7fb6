//! Channel-strength model of a multi-cell network.
//!
//! A network has `K` cells; cell `k` holds `L_k` users. Every user hears every
//! base station, and `strength(user, cell)` is the exponent of that link's
//! SNR. Users within a cell are expected in ascending order of the strength
//! from their own base station.
//!
//! User ids are 1-based. The JSON file format is positional: `alpha[k][l][i]`
//! is the strength from base station `i` to user `l` of cell `k`, all 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A user, identified by 1-based cell and slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UserId {
    pub cell: usize,
    pub slot: usize,
}

impl UserId {
    pub fn new(cell: usize, slot: usize) -> Self {
        assert!(cell >= 1 && slot >= 1, "user ids are 1-based");
        UserId { cell, slot }
    }

    pub(crate) fn from_zero(k: usize, l: usize) -> Self {
        UserId {
            cell: k + 1,
            slot: l + 1,
        }
    }

    pub(crate) fn zero_based(self) -> (usize, usize) {
        (self.cell - 1, self.slot - 1)
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "user {} of cell {}", self.slot, self.cell)
    }
}

/// One value per user, stored cell by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct UserMap<T> {
    cells: Vec<Vec<T>>,
}

/// A GDoF value per user.
pub type GdofTuple<T> = UserMap<T>;

impl<T> UserMap<T> {
    pub fn from_cells(cells: Vec<Vec<T>>) -> Self {
        UserMap { cells }
    }

    pub fn filled(shape: &[usize], value: T) -> Self
    where
        T: Clone,
    {
        UserMap {
            cells: shape.iter().map(|&n| vec![value.clone(); n]).collect(),
        }
    }

    /// Builds a map from values listed cell-major.
    pub fn from_flat(shape: &[usize], values: Vec<T>) -> Result<Self> {
        let total: usize = shape.iter().sum();
        if values.len() != total {
            return Err(Error::Dimension(format!(
                "expected {total} per-user values, got {}",
                values.len()
            )));
        }
        let mut it = values.into_iter();
        let cells = shape
            .iter()
            .map(|&n| it.by_ref().take(n).collect())
            .collect();
        Ok(UserMap { cells })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cells(&self) -> &[Vec<T>] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> &[T] {
        &self.cells[k]
    }

    pub fn get(&self, user: UserId) -> &T {
        let (k, l) = user.zero_based();
        &self.cells[k][l]
    }

    pub fn set(&mut self, user: UserId, value: T) {
        let (k, l) = user.zero_based();
        self.cells[k][l] = value;
    }

    pub(crate) fn at(&self, k: usize, l: usize) -> &T {
        &self.cells[k][l]
    }

    pub(crate) fn at_mut(&mut self, k: usize, l: usize) -> &mut T {
        &mut self.cells[k][l]
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, &T)> {
        self.cells.iter().enumerate().flat_map(|(k, cell)| {
            cell.iter()
                .enumerate()
                .map(move |(l, v)| (UserId::from_zero(k, l), v))
        })
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.cells.iter().flatten()
    }

    pub fn to_flat(&self) -> Vec<T>
    where
        T: Clone,
    {
        self.values().cloned().collect()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> UserMap<U> {
        UserMap {
            cells: self
                .cells
                .iter()
                .map(|cell| cell.iter().map(&mut f).collect())
                .collect(),
        }
    }
}

impl<T: Scalar> UserMap<T> {
    pub fn to_float(&self) -> UserMap<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Self::filled(shape, T::zero())
    }

    /// Componentwise `self <= other` under the backend's tolerance.
    pub fn dominated_by(&self, other: &UserMap<T>) -> bool {
        self.shape() == other.shape()
            && self
                .values()
                .zip(other.values())
                .all(|(a, b)| a.approx_le(*b))
    }

    pub fn sum(&self) -> T {
        self.values().fold(T::zero(), |acc, &v| acc + v)
    }
}

/// Link strengths of a network, indexed `[cell][slot][base station]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelStrengths<T> {
    users: Vec<usize>,
    alpha: Vec<Vec<Vec<T>>>,
}

/// A negative strength that was raised to zero on ingest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClampedEntry {
    pub user: UserId,
    pub from_cell: usize,
    pub original: f64,
}

/// A problem found by [`validate_network`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub user: UserId,
    pub message: String,
}

/// Record of the slot relabelling done by [`canonicalize`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotPermutation {
    /// `source[k][s]` is the original 1-based slot now stored at slot `s + 1`.
    pub source: Vec<Vec<usize>>,
}

impl<T: Scalar> ChannelStrengths<T> {
    /// Builds a network from nested `[cell][slot][base station]` strengths.
    /// Negative strengths are clamped to zero.
    pub fn from_nested(alpha: Vec<Vec<Vec<T>>>) -> Result<Self> {
        Ok(Self::from_nested_report(alpha)?.0)
    }

    fn from_nested_report(mut alpha: Vec<Vec<Vec<T>>>) -> Result<(Self, Vec<ClampedEntry>)> {
        let k_total = alpha.len();
        if k_total == 0 {
            return Err(Error::Dimension("network needs at least one cell".into()));
        }
        let mut clamped = Vec::new();
        for (k, cell) in alpha.iter_mut().enumerate() {
            if cell.is_empty() {
                return Err(Error::Dimension(format!("cell {} has no users", k + 1)));
            }
            for (l, row) in cell.iter_mut().enumerate() {
                if row.len() != k_total {
                    return Err(Error::Dimension(format!(
                        "user {} of cell {} lists {} strengths, expected {k_total}",
                        l + 1,
                        k + 1,
                        row.len()
                    )));
                }
                for (i, v) in row.iter_mut().enumerate() {
                    if *v < T::zero() {
                        clamped.push(ClampedEntry {
                            user: UserId::from_zero(k, l),
                            from_cell: i + 1,
                            original: v.to_f64(),
                        });
                        *v = T::zero();
                    }
                }
            }
        }
        let users = alpha.iter().map(Vec::len).collect();
        Ok((ChannelStrengths { users, alpha }, clamped))
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.users.len()
    }

    /// Users per cell.
    pub fn shape(&self) -> &[usize] {
        &self.users
    }

    pub fn total_users(&self) -> usize {
        self.users.iter().sum()
    }

    pub fn user_ids(&self) -> impl Iterator<Item = UserId> + '_ {
        self.users
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).map(move |l| UserId::from_zero(k, l)))
    }

    /// Strength from base station `from_cell` (1-based) to `user`.
    pub fn strength(&self, user: UserId, from_cell: usize) -> T {
        let (k, l) = user.zero_based();
        self.alpha[k][l][from_cell - 1]
    }

    /// Strength from a user's own base station.
    pub fn direct(&self, user: UserId) -> T {
        self.strength(user, user.cell)
    }

    /// 0-based link lookup: base station `i` to user `l` of cell `k`.
    #[inline]
    pub(crate) fn a(&self, k: usize, l: usize, i: usize) -> T {
        self.alpha[k][l][i]
    }

    #[inline]
    pub(crate) fn own(&self, k: usize, l: usize) -> T {
        self.alpha[k][l][k]
    }

    pub fn max_strength(&self) -> T {
        self.alpha
            .iter()
            .flatten()
            .flatten()
            .fold(T::zero(), |m, &v| m.max(v))
    }

    pub fn nested(&self) -> &[Vec<Vec<T>>] {
        &self.alpha
    }

    pub fn to_float(&self) -> ChannelStrengths<f64> {
        ChannelStrengths {
            users: self.users.clone(),
            alpha: self
                .alpha
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|row| row.iter().map(Scalar::to_f64).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "K": self.cells(),
            "L": self.users,
            "alpha": self.to_float().alpha,
        })
    }
}

/// Parses a network file, clamping negative strengths to zero.
pub fn parse_network<T: Scalar>(text: &str) -> Result<ChannelStrengths<T>> {
    Ok(parse_network_report(text)?.0)
}

/// Like [`parse_network`], also returning the entries that were clamped.
pub fn parse_network_report<T: Scalar>(
    text: &str,
) -> Result<(ChannelStrengths<T>, Vec<ClampedEntry>)> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Malformed("network must be a JSON object".into()))?;
    let k_total = obj
        .get("K")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("field K must be a non-negative integer".into()))?
        as usize;
    let shape: Vec<usize> = obj
        .get("L")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("field L must be an array".into()))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Malformed("entries of L must be integers".into()))
        })
        .collect::<Result<_>>()?;
    if shape.len() != k_total {
        return Err(Error::Dimension(format!(
            "K is {k_total} but L has {} entries",
            shape.len()
        )));
    }
    let cells = obj
        .get("alpha")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("field alpha must be an array".into()))?;
    if cells.len() != k_total {
        return Err(Error::Dimension(format!(
            "alpha has {} cells, expected {k_total}",
            cells.len()
        )));
    }
    let mut alpha = Vec::with_capacity(k_total);
    for (k, cell) in cells.iter().enumerate() {
        let rows = cell
            .as_array()
            .ok_or_else(|| Error::Malformed(format!("alpha[{k}] must be an array")))?;
        if rows.len() != shape[k] {
            return Err(Error::Dimension(format!(
                "alpha[{k}] has {} users, L says {}",
                rows.len(),
                shape[k]
            )));
        }
        let mut cell_rows = Vec::with_capacity(rows.len());
        for (l, row) in rows.iter().enumerate() {
            let entries = row
                .as_array()
                .ok_or_else(|| Error::Malformed(format!("alpha[{k}][{l}] must be an array")))?;
            if entries.len() != k_total {
                return Err(Error::Dimension(format!(
                    "alpha[{k}][{l}] has {} strengths, expected {k_total}",
                    entries.len()
                )));
            }
            let values = entries
                .iter()
                .enumerate()
                .map(|(i, v)| scalar_from_json(v, &format!("alpha[{k}][{l}][{i}]")))
                .collect::<Result<Vec<T>>>()?;
            cell_rows.push(values);
        }
        alpha.push(cell_rows);
    }
    ChannelStrengths::from_nested_report(alpha)
}

pub(crate) fn scalar_from_json<T: Scalar>(v: &Value, path: &str) -> Result<T> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    };
    T::from_decimal_str(&text).map_err(|source| Error::NonNumeric {
        path: path.to_string(),
        source,
    })
}

/// Reports users whose direct strengths are out of ascending order.
pub fn validate_network<T: Scalar>(net: &ChannelStrengths<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    for k in 0..net.cells() {
        for l in 1..net.shape()[k] {
            if net.own(k, l - 1).approx_gt(net.own(k, l)) {
                out.push(Violation {
                    user: UserId::from_zero(k, l),
                    message: format!(
                        "direct strength {} is below that of slot {} ({})",
                        net.own(k, l),
                        l,
                        net.own(k, l - 1)
                    ),
                });
            }
        }
    }
    out
}

/// Stable-sorts each cell by direct strength.
pub fn canonicalize<T: Scalar>(
    net: &ChannelStrengths<T>,
) -> (ChannelStrengths<T>, SlotPermutation) {
    let mut source = Vec::with_capacity(net.cells());
    let mut alpha = Vec::with_capacity(net.cells());
    for k in 0..net.cells() {
        let mut idx: Vec<usize> = (0..net.shape()[k]).collect();
        idx.sort_by(|&x, &y| {
            net.own(k, x)
                .partial_cmp(&net.own(k, y))
                .expect("NaN strength")
        });
        alpha.push(idx.iter().map(|&l| net.alpha[k][l].clone()).collect());
        source.push(idx.iter().map(|&l| l + 1).collect());
    }
    (
        ChannelStrengths {
            users: net.users.clone(),
            alpha,
        },
        SlotPermutation { source },
    )
}
