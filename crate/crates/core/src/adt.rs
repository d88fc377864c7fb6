//! Linear deterministic model of a two-transmitter, two-receiver channel.
//!
//! Inputs are `q`-bit vectors with position 1 the most significant bit.
//! Receiver `a` sees `S^(q-m1) x1 xor S^(q-m2) x2` and receiver `b` sees
//! `S^(q-n1) x1 xor S^(q-n2) x2`, where `S` shifts bits one position down.
//! Vectors are stored as integers, so a downshift by `t` is `x >> t`.
//!
//! Entropies and mutual informations are computed by enumerating all
//! `2^(2q)` joint outcomes of two independent inputs.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest bit width accepted by the enumeration routines.
pub const MAX_LEVELS: u32 = 8;

/// Widest inputs for which random marginals may be arbitrary tables.
const TABLE_LEVELS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdtParams {
    pub m1: u32,
    pub m2: u32,
    pub n1: u32,
    pub n2: u32,
}

impl AdtParams {
    pub fn new(m1: u32, m2: u32, n1: u32, n2: u32) -> Result<Self> {
        let p = AdtParams { m1, m2, n1, n2 };
        if p.q() == 0 {
            return Err(Error::Parameter(
                "at least one link needs a positive level".into(),
            ));
        }
        if p.q() > MAX_LEVELS {
            return Err(Error::Parameter(format!(
                "bit width {} exceeds the enumeration cap {MAX_LEVELS}",
                p.q()
            )));
        }
        Ok(p)
    }

    /// Bit width of the inputs.
    pub fn q(&self) -> u32 {
        self.m1.max(self.m2).max(self.n1).max(self.n2)
    }

    /// Output at receiver `a`.
    pub fn output_a(&self, x1: u32, x2: u32) -> u32 {
        let q = self.q();
        (x1 >> (q - self.m1)) ^ (x2 >> (q - self.m2))
    }

    /// Output at receiver `b`.
    pub fn output_b(&self, x1: u32, x2: u32) -> u32 {
        let q = self.q();
        (x1 >> (q - self.n1)) ^ (x2 >> (q - self.n2))
    }

    /// Regime in which receiver `b` is less noisy than `a` for `x1`.
    pub fn less_noisy_regime(&self) -> bool {
        self.n1 >= self.n2 + self.m1
    }

    /// Regime in which `H(ya) - H(yb)` is bounded by `m2 - n2`.
    pub fn entropy_gap_regime(&self) -> bool {
        self.n1 + self.m2 >= 2 * self.n2 + self.m1 && self.n2 <= self.m2
    }
}

/// Two independent input distributions over `q`-bit vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductDistribution {
    pub q: u32,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl ProductDistribution {
    pub fn new(q: u32, first: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        if q > MAX_LEVELS {
            return Err(Error::Parameter(format!(
                "bit width {q} exceeds {MAX_LEVELS}"
            )));
        }
        let size = 1usize << q;
        for (name, p) in [("first", &first), ("second", &second)] {
            if p.len() != size {
                return Err(Error::Dimension(format!(
                    "{name} marginal has {} entries, expected {size}",
                    p.len()
                )));
            }
            let total: f64 = p.iter().sum();
            if p.iter().any(|&v| v.is_nan() || v < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::Parameter(format!(
                    "{name} marginal is not a distribution"
                )));
            }
        }
        Ok(ProductDistribution { q, first, second })
    }

    pub fn uniform(q: u32) -> Self {
        let size = 1usize << q;
        let p = vec![1.0 / size as f64; size];
        ProductDistribution {
            q,
            first: p.clone(),
            second: p,
        }
    }

    pub fn point(q: u32, x1: u32, x2: u32) -> Self {
        let size = 1usize << q;
        let mut first = vec![0.0; size];
        let mut second = vec![0.0; size];
        first[x1 as usize] = 1.0;
        second[x2 as usize] = 1.0;
        ProductDistribution { q, first, second }
    }

    /// Random product distribution. Each marginal is either a product of
    /// independent Bernoulli bits with random biases or, for `q <= 6`, an
    /// unstructured random table with possibly sparse support.
    pub fn random<R: Rng + ?Sized>(q: u32, rng: &mut R) -> Self {
        let first = random_marginal(q, rng);
        let second = random_marginal(q, rng);
        ProductDistribution { q, first, second }
    }
}

fn random_marginal<R: Rng + ?Sized>(q: u32, rng: &mut R) -> Vec<f64> {
    let size = 1usize << q;
    if q > TABLE_LEVELS || rng.gen_bool(0.5) {
        let bias: Vec<f64> = (0..q)
            .map(|_| match rng.gen_range(0..4) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen::<f64>(),
            })
            .collect();
        (0..size)
            .map(|x| {
                (0..q)
                    .map(|b| {
                        let bit = (x >> (q - 1 - b)) & 1;
                        if bit == 1 {
                            bias[b as usize]
                        } else {
                            1.0 - bias[b as usize]
                        }
                    })
                    .product()
            })
            .collect()
    } else {
        let keep = rng.gen_range(0.2..=1.0);
        let mut raw: Vec<f64> = (0..size)
            .map(|_| {
                if rng.gen_bool(keep) {
                    rng.gen::<f64>()
                } else {
                    0.0
                }
            })
            .collect();
        if raw.iter().all(|&v| v == 0.0) {
            raw[rng.gen_range(0..size)] = 1.0;
        }
        let total: f64 = raw.iter().sum();
        raw.iter().map(|v| v / total).collect()
    }
}

/// Shannon entropy in bits.
pub fn entropy(masses: &[f64]) -> f64 {
    masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Entropies of the two outputs and of each paired with `x1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutputEntropies {
    pub h_a: f64,
    pub h_b: f64,
    pub h_x1: f64,
    pub h_x1_a: f64,
    pub h_x1_b: f64,
}

impl OutputEntropies {
    pub fn info_a(&self) -> f64 {
        self.h_x1 + self.h_a - self.h_x1_a
    }

    pub fn info_b(&self) -> f64 {
        self.h_x1 + self.h_b - self.h_x1_b
    }
}

fn check_width(params: &AdtParams, dist: &ProductDistribution) -> Result<()> {
    if dist.q != params.q() {
        return Err(Error::Dimension(format!(
            "distribution has {} bits, parameters need {}",
            dist.q,
            params.q()
        )));
    }
    Ok(())
}

/// Exact output entropies by joint enumeration.
pub fn output_entropies(params: &AdtParams, dist: &ProductDistribution) -> Result<OutputEntropies> {
    check_width(params, dist)?;
    let size = 1usize << dist.q;
    let mut ya = vec![0.0; size];
    let mut yb = vec![0.0; size];
    let mut x1_ya = vec![0.0; size * size];
    let mut x1_yb = vec![0.0; size * size];
    for (x1, &p1) in dist.first.iter().enumerate() {
        if p1 == 0.0 {
            continue;
        }
        for (x2, &p2) in dist.second.iter().enumerate() {
            let p = p1 * p2;
            if p == 0.0 {
                continue;
            }
            let a = params.output_a(x1 as u32, x2 as u32) as usize;
            let b = params.output_b(x1 as u32, x2 as u32) as usize;
            ya[a] += p;
            yb[b] += p;
            x1_ya[x1 * size + a] += p;
            x1_yb[x1 * size + b] += p;
        }
    }
    Ok(OutputEntropies {
        h_a: entropy(&ya),
        h_b: entropy(&yb),
        h_x1: entropy(&dist.first),
        h_x1_a: entropy(&x1_ya),
        h_x1_b: entropy(&x1_yb),
    })
}

/// Entropy of `x2` as seen through receiver `a`'s shift.
pub fn shifted_second_entropy(params: &AdtParams, dist: &ProductDistribution) -> Result<f64> {
    check_width(params, dist)?;
    let size = 1usize << dist.q;
    let shift = params.q() - params.m2;
    let mut out = vec![0.0; size];
    for (x2, &p) in dist.second.iter().enumerate() {
        out[x2 >> shift] += p;
    }
    Ok(entropy(&out))
}

/// Outcome of checking one inequality over a batch of distributions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdtReport {
    pub params: AdtParams,
    pub checked: usize,
    /// Smallest `rhs - lhs` seen; negative means a violation.
    pub min_slack: f64,
    /// Index into the batch of the distribution reaching `min_slack`.
    pub worst_index: usize,
}

/// Slack tolerated before an inequality counts as violated.
pub const ADT_TOLERANCE: f64 = 1e-9;

impl AdtReport {
    pub fn holds(&self) -> bool {
        self.min_slack >= -ADT_TOLERANCE
    }
}

fn worst_case<F>(params: &AdtParams, dists: &[ProductDistribution], slack: F) -> Result<AdtReport>
where
    F: Fn(&OutputEntropies) -> f64,
{
    if dists.is_empty() {
        return Err(Error::Parameter("no distributions to check".into()));
    }
    let mut report = AdtReport {
        params: *params,
        checked: dists.len(),
        min_slack: f64::INFINITY,
        worst_index: 0,
    };
    for (i, d) in dists.iter().enumerate() {
        let s = slack(&output_entropies(params, d)?);
        if s < report.min_slack {
            report.min_slack = s;
            report.worst_index = i;
        }
    }
    Ok(report)
}

/// Checks `I(x1; yb) >= I(x1; ya)` over `dists`.
pub fn check_less_noisy(params: &AdtParams, dists: &[ProductDistribution]) -> Result<AdtReport> {
    if !params.less_noisy_regime() {
        return Err(Error::Precondition(format!(
            "need n1 - n2 >= m1, got {params:?}"
        )));
    }
    worst_case(params, dists, |e| e.info_b() - e.info_a())
}

/// Checks `H(ya) - H(yb) <= m2 - n2` over `dists`.
pub fn check_entropy_gap(params: &AdtParams, dists: &[ProductDistribution]) -> Result<AdtReport> {
    if !params.entropy_gap_regime() {
        return Err(Error::Precondition(format!(
            "need n1 - 2 n2 >= m1 - m2 and n2 <= m2, got {params:?}"
        )));
    }
    let cap = params.m2 as f64 - params.n2 as f64;
    worst_case(params, dists, move |e| cap - (e.h_a - e.h_b))
}
