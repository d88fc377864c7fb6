//! Regime classification by pairwise strength conditions.
//!
//! Both regimes ask that, for every cell `i` and every pair of other cells
//! `j`, `k` (possibly equal), cell `i`'s users gain at least as much from
//! their own base station as they lose to `j`, with the weakest user of cell
//! `i` also dominating the leakage from `i` into cell `k`. The TIN regime is
//! the stricter of the two.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::ChannelStrengths;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "TIN")]
    Tin,
    #[serde(rename = "CTIN_ONLY")]
    CtinOnly,
    #[serde(rename = "GENERAL")]
    General,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Tin => "TIN",
            Regime::CtinOnly => "CTIN_ONLY",
            Regime::General => "GENERAL",
        })
    }
}

/// Iterates over `(i, j)` with `i != j`.
fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Conditions under which the polyhedral regions nest inside the identity
/// region.
pub fn is_ctin<T: Scalar>(net: &ChannelStrengths<T>) -> bool {
    let k_total = net.cells();
    ordered_pairs(k_total).all(|(i, j)| {
        let n = net.shape()[i];
        let ordered = (0..n).all(|l| {
            (0..l).all(|lp| {
                net.own(i, l)
                    .approx_ge(net.a(i, l, j) + net.own(i, lp) - net.a(i, lp, j))
            })
        });
        let leak = (0..k_total).filter(|&k| k != i).all(|k| {
            (0..net.shape()[k]).all(|lk| {
                let offset = if k != j { net.a(k, lk, j) } else { T::zero() };
                net.own(i, 0)
                    .approx_ge(net.a(i, 0, j) + net.a(k, lk, i) - offset)
            })
        });
        ordered && leak
    })
}

/// Conditions under which TIN reaches the whole GDoF region.
pub fn is_tin<T: Scalar>(net: &ChannelStrengths<T>) -> bool {
    let k_total = net.cells();
    ordered_pairs(k_total).all(|(i, j)| {
        let n = net.shape()[i];
        let ordered = (0..n).all(|l| {
            (0..l).all(|lp| {
                let own = net.own(i, l);
                let x = net.a(i, l, j);
                own.approx_ge(x + net.own(i, lp))
                    || own.approx_ge(x + x + net.own(i, lp) - net.a(i, lp, j))
            })
        });
        let leak = (0..k_total).filter(|&k| k != i).all(|k| {
            (0..net.shape()[k]).all(|lk| net.own(i, 0).approx_ge(net.a(i, 0, j) + net.a(k, lk, i)))
        });
        ordered && leak
    })
}

pub fn classify_regime<T: Scalar>(net: &ChannelStrengths<T>) -> Regime {
    if is_tin(net) {
        Regime::Tin
    } else if is_ctin(net) {
        Regime::CtinOnly
    } else {
        Regime::General
    }
}

/// Checks the user-level conditions that every network with the given label
/// must satisfy. A `General` label has none and is rejected.
pub fn implied_conditions_hold<T: Scalar>(
    net: &ChannelStrengths<T>,
    regime: Regime,
) -> Result<bool> {
    if regime == Regime::General {
        return Err(Error::Precondition(
            "no implied conditions for the general regime".into(),
        ));
    }
    let k_total = net.cells();
    let holds = ordered_pairs(k_total).all(|(i, j)| {
        (0..k_total).filter(|&k| k != i).all(|k| {
            (0..net.shape()[i]).all(|li| {
                (0..net.shape()[k]).all(|lk| {
                    let own = net.own(i, li);
                    let base = net.a(i, li, j) + net.a(k, lk, i);
                    let offset = if k != j { net.a(k, lk, j) } else { T::zero() };
                    let ctin = own.approx_ge(base - offset);
                    match regime {
                        Regime::Tin => ctin && own.approx_ge(base),
                        _ => ctin,
                    }
                })
            })
        })
    });
    Ok(holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(s: &str) -> Rational {
        Rational::from_decimal_str(s).unwrap()
    }

    fn two_cell(
        a11: [&str; 2],
        a12: [&str; 2],
        a22: &str,
        a21: &str,
    ) -> ChannelStrengths<Rational> {
        ChannelStrengths::from_nested(vec![
            vec![vec![q(a11[0]), q(a12[0])], vec![q(a11[1]), q(a12[1])]],
            vec![vec![q(a21), q(a22)]],
        ])
        .unwrap()
    }

    #[test]
    fn classifies_fixtures() {
        let tin = two_cell(["0.6", "1.0"], ["0.2", "0.1"], "1.0", "0.3");
        assert_eq!(classify_regime(&tin), Regime::Tin);
        assert!(implied_conditions_hold(&tin, Regime::Tin).unwrap());

        let ctin = two_cell(["1.0", "1.2"], ["0.5", "0.4"], "1.0", "0.2");
        assert_eq!(classify_regime(&ctin), Regime::CtinOnly);
        assert!(implied_conditions_hold(&ctin, Regime::CtinOnly).unwrap());

        let general = two_cell(["1.0", "1.2"], ["0.9", "0.4"], "1.0", "0.8");
        assert_eq!(classify_regime(&general), Regime::General);
        assert!(implied_conditions_hold(&general, Regime::General).is_err());
    }

    #[test]
    fn single_cell_is_tin() {
        let net =
            ChannelStrengths::from_nested(vec![vec![vec![q("0.3")], vec![q("0.9")]]]).unwrap();
        assert_eq!(classify_regime(&net), Regime::Tin);
    }

    #[test]
    fn float_backend_tolerates_rounding() {
        // 0.1 + 0.2 sits just above 0.3 in binary; the bound is met with equality.
        let net: ChannelStrengths<f64> =
            ChannelStrengths::from_nested(vec![vec![vec![0.3, 0.1]], vec![vec![0.2, 1.0]]])
                .unwrap();
        assert_eq!(classify_regime(&net), Regime::Tin);
    }
}
