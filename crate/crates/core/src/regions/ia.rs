//! Sum-GDoF of a two-cell network with two users in cell 1 and one in cell 2
//! when interference alignment is layered on top of TIN.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::network::ChannelStrengths;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct IaReport<T> {
    /// Sum-GDoF of the best TIN scheme.
    pub tin_sum: T,
    /// Extra sum-GDoF contributed by alignment.
    pub ia_gain: T,
    pub ia_sum: T,
    /// Whether the network is in the regime where alignment strictly helps.
    pub applicable: bool,
}

impl<T: Scalar> IaReport<T> {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "d_tina": self.tin_sum.to_f64(),
            "gamma_ia": self.ia_gain.to_f64(),
            "d_ia": self.ia_sum.to_f64(),
            "applicable": self.applicable,
        })
    }
}

pub fn ia_sum_gdof<T: Scalar>(net: &ChannelStrengths<T>) -> Result<IaReport<T>> {
    if net.shape() != [2, 1] {
        return Err(Error::Precondition(format!(
            "alignment report needs users per cell [2, 1], got {:?}",
            net.shape()
        )));
    }
    // Cell 1: weak user (direct, leak), strong user (direct, leak).
    // Cell 2: its user's direct strength and the leak from cell 1.
    let (weak, weak_leak) = (net.own(0, 0), net.a(0, 0, 1));
    let (strong, strong_leak) = (net.own(0, 1), net.a(0, 1, 1));
    let (other, other_leak) = (net.own(1, 0), net.a(1, 0, 0));

    let weak_margin = weak - weak_leak;
    let strong_margin = strong - strong_leak;
    let tin_sum = strong_margin + (other - other_leak);
    let ia_gain =
        (weak_margin - (strong - strong_leak - strong_leak)).min(strong_margin - weak_margin);

    let ctin = strong_margin.approx_ge(weak_margin)
        && weak.approx_ge(weak_leak + other_leak)
        && other.approx_ge(other_leak + weak_leak.max(strong_leak));
    let tin_fails =
        strong_margin.approx_lt(weak) && (strong_margin - strong_leak).approx_lt(weak_margin);
    let applicable = ctin
        && tin_fails
        && strong_margin.approx_gt(weak_margin)
        && weak_leak.approx_ge(strong_leak);

    Ok(IaReport {
        tin_sum,
        ia_gain,
        ia_sum: tin_sum + ia_gain,
        applicable,
    })
}
