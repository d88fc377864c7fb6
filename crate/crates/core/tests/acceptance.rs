//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use itertools::iproduct;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tingdof::adt::{check_entropy_gap, check_less_noisy, AdtParams, ProductDistribution};
use tingdof::oracle::{grid_achievable_points, oracle_max_sum, GridSpec, DEFAULT_BUDGET};
use tingdof::regions::{
    classify_regime, implied_conditions_hold, is_ctin, partition_users, residual_chain_holds,
};
use tingdof::sampling::{random_network, random_order, random_point_in_box, random_power};
use tingdof::{
    dualize_ibc_to_imac, dualize_imac_to_ibc, gdof_bounds_ibc, gdof_bounds_imac, ia_sum_gdof,
    normalize_uplink, outer_bound_region, polyhedral_region, sinr_rates_ibc, tina_region_contains,
    union_max_weighted_sum, ChannelStrengths, DecodingOrder, Power, Rational, Regime, Scalar, Side,
    SubnetworkOrder, UserMap,
};

type Q = Rational;
type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

const RESOLUTION: i64 = 20;
const TOL: f64 = 1e-9;

fn q(s: &str) -> Q {
    Q::from_decimal_str(s).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shape<R: Rng>(rng: &mut R, cells: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    let k = rng.gen_range(cells);
    (0..k).map(|_| rng.gen_range(1..=3)).collect()
}

/// Strengths in [0, 2] on a 0.05 grid, sorted per cell.
fn uniform_net<R: Rng>(rng: &mut R, shape: &[usize]) -> ChannelStrengths<Q> {
    random_network(rng, shape, 2 * RESOLUTION, RESOLUTION)
}

/// Like `uniform_net` but with cross links capped at a random fraction of
/// the range, which makes the CTIN and TIN regimes common enough to sample.
fn weak_cross_net<R: Rng>(rng: &mut R, shape: &[usize]) -> ChannelStrengths<Q> {
    let cap = rng.gen_range(RESOLUTION / 4..=RESOLUTION);
    let alpha = shape
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..shape.len())
                        .map(|j| {
                            if j == k {
                                rng.gen_range(0..=2 * RESOLUTION)
                            } else {
                                rng.gen_range(0..=cap)
                            }
                        })
                        .collect()
                })
                .collect();
            rows.sort_by_key(|r| r[k]);
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|u| Q::from_ratio(u, RESOLUTION))
                        .collect()
                })
                .collect()
        })
        .collect();
    ChannelStrengths::from_nested(alpha).unwrap()
}

fn sample_until<R: Rng>(
    rng: &mut R,
    cells: std::ops::RangeInclusive<usize>,
    accept: impl Fn(&ChannelStrengths<Q>) -> bool,
) -> ChannelStrengths<Q> {
    loop {
        let s = shape(rng, cells.clone());
        let net = if rng.gen_bool(0.5) {
            uniform_net(rng, &s)
        } else {
            weak_cross_net(rng, &s)
        };
        if accept(&net) {
            return net;
        }
    }
}

/// Strengths on a 0.001 grid so region vertices rarely sit on the oracle grid.
fn two_one_nets() -> Vec<ChannelStrengths<Q>> {
    let mut r = rng(3);
    (0..20)
        .map(|_| random_network(&mut r, &[2, 1], 2000, 1000))
        .collect()
}

fn lemma_1_1() -> Outcome {
    let mut r = rng(1);
    let mut checked = 0;
    for _ in 0..500 {
        let s = shape(&mut r, 2..=3);
        let net = uniform_net(&mut r, &s);
        for _ in 0..5 {
            let order = random_order(&mut r, &s);
            let power = random_power::<Q, _>(&mut r, &s, 3 * RESOLUTION, RESOLUTION, 0.15);
            let down = gdof_bounds_ibc(&net, &order, &power).unwrap();
            let dual = dualize_ibc_to_imac(&net, &order, &power).unwrap();
            let up = gdof_bounds_imac(&net, &order, &dual).unwrap();
            if !down.dominated_by(&up) {
                return Err(format!(
                    "downlink {down:?} exceeds dual uplink {up:?} on {net:?}"
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} strategies, 0 violations"))
}

fn lemma_1_2() -> Outcome {
    let mut r = rng(2);
    let (mut checked, mut repaired) = (0, 0);
    for _ in 0..500 {
        let s = shape(&mut r, 2..=3);
        let net = uniform_net(&mut r, &s);
        for _ in 0..5 {
            let order = random_order(&mut r, &s);
            let power = random_power::<Q, _>(&mut r, &s, 3 * RESOLUTION, RESOLUTION, 0.15);
            let norm = normalize_uplink(&net, &order, &power).unwrap();
            if !norm.steps.is_empty() {
                repaired += 1;
            }
            let up = gdof_bounds_imac(&net, &norm.order, &norm.power).unwrap();
            let dual = dualize_imac_to_ibc(&net, &norm.order, &norm.power).unwrap();
            let down = gdof_bounds_ibc(&net, &norm.order, &dual).unwrap();
            if !up.dominated_by(&down) {
                return Err(format!(
                    "uplink {up:?} exceeds dual downlink {down:?} on {net:?}"
                ));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} strategies ({repaired} normalized), 0 violations"
    ))
}

fn oracle_sum(net: &ChannelStrengths<f64>, side: Side, step: f64) -> f64 {
    let grid = GridSpec::new(step, net.max_strength() + 1.0).unwrap();
    let ones = UserMap::filled(net.shape(), 1.0);
    oracle_max_sum(net, side, &grid, &ones, DEFAULT_BUDGET)
        .unwrap()
        .value
}

fn corollary_duality(nets: &[ChannelStrengths<Q>]) -> Outcome {
    let mut worst: f64 = 0.0;
    for net in nets {
        let f = net.to_float();
        let gap = (oracle_sum(&f, Side::Ibc, 0.05) - oracle_sum(&f, Side::Imac, 0.05)).abs();
        worst = worst.max(gap);
    }
    if worst <= 0.2 + TOL {
        Ok(format!(
            "max |downlink - uplink| = {worst:.4} over {} nets",
            nets.len()
        ))
    } else {
        Err(format!("max |downlink - uplink| = {worst:.4} > 0.2"))
    }
}

fn soundness(nets: &[ChannelStrengths<Q>]) -> Outcome {
    let mut total = 0;
    for net in nets {
        let grid = GridSpec::new(q("0.05"), net.max_strength() + Q::one()).unwrap();
        for side in [Side::Ibc, Side::Imac] {
            let points = grid_achievable_points(net, side, &grid, DEFAULT_BUDGET).unwrap();
            for d in &points {
                if !tina_region_contains(net, d).unwrap().member {
                    return Err(format!(
                        "{side} grid point {d:?} outside the region of {net:?}"
                    ));
                }
            }
            total += points.len();
        }
    }
    Ok(format!("{total} distinct grid points, 0 outside"))
}

fn completeness(nets: &[ChannelStrengths<Q>]) -> Outcome {
    let (mut worst_coarse, mut worst_fine): (f64, f64) = (0.0, 0.0);
    for net in nets {
        let ones = UserMap::filled(net.shape(), Q::one());
        let lp = union_max_weighted_sum(net, &ones).unwrap().0.value.to_f64();
        let f = net.to_float();
        let coarse = lp - oracle_sum(&f, Side::Ibc, 0.05);
        let fine = lp - oracle_sum(&f, Side::Ibc, 0.025);
        if coarse < -TOL || fine < -TOL {
            return Err(format!("grid beats the region maximum {lp} on {net:?}"));
        }
        if coarse > 0.2 + TOL {
            return Err(format!("gap {coarse:.4} > 0.2 at step 0.05 on {net:?}"));
        }
        if fine > coarse + TOL {
            return Err(format!("gap grew from {coarse:.4} to {fine:.4} on {net:?}"));
        }
        worst_coarse = worst_coarse.max(coarse);
        worst_fine = worst_fine.max(fine);
    }
    Ok(format!(
        "max gap {worst_coarse:.4} at step 0.05, {worst_fine:.4} at 0.025"
    ))
}

fn ctin_collapse() -> Outcome {
    let mut r = rng(6);
    let mut members = 0;
    for _ in 0..200 {
        let net = sample_until(&mut r, 2..=3, is_ctin);
        let full = polyhedral_region(&net, &SubnetworkOrder::identity(net.shape())).unwrap();
        for _ in 0..100 {
            let d = random_point_in_box(&mut r, &net, RESOLUTION);
            let union = tina_region_contains(&net, &d).unwrap().member;
            if union != full.contains(&d) {
                return Err(format!("union says {union} for {d:?} on {net:?}"));
            }
            members += union as usize;
        }
    }
    Ok(format!("20000 tuples ({members} inside), 0 discrepancies"))
}

fn tin_outer_bound() -> Outcome {
    let mut r = rng(7);
    for _ in 0..200 {
        let net = sample_until(&mut r, 2..=3, |n| classify_regime(n) == Regime::Tin);
        let outer = outer_bound_region(&net).unwrap().canonical();
        let inner = polyhedral_region(&net, &SubnetworkOrder::identity(net.shape()))
            .unwrap()
            .canonical();
        if outer != inner {
            return Err(format!("constraint sets differ on {net:?}"));
        }
    }
    Ok("200 networks, identical constraint sets".into())
}

fn alignment_gain() -> Outcome {
    let fixture = ChannelStrengths::from_nested(vec![
        vec![vec![q("1.0"), q("0.5")], vec![q("1.2"), q("0.4")]],
        vec![vec![q("0.2"), q("1.0")]],
    ])
    .unwrap();
    let rep = ia_sum_gdof(&fixture).unwrap();
    if (rep.tin_sum, rep.ia_gain, rep.ia_sum) != (q("1.6"), q("0.1"), q("1.7")) || !rep.applicable {
        return Err(format!("fixture gave {rep:?}"));
    }
    let grid_best = oracle_sum(&fixture.to_float(), Side::Ibc, 0.05);
    if grid_best > 1.75 + TOL {
        return Err(format!("grid max-sum {grid_best} exceeds 1.75"));
    }
    let mut r = rng(8);
    let mut min_gain = f64::INFINITY;
    for _ in 0..100 {
        let net = loop {
            let s = [2, 1];
            let n = if r.gen_bool(0.5) {
                uniform_net(&mut r, &s)
            } else {
                weak_cross_net(&mut r, &s)
            };
            if ia_sum_gdof(&n).unwrap().applicable {
                break n;
            }
        };
        let gain = ia_sum_gdof(&net).unwrap().ia_gain;
        if gain <= Q::zero() {
            return Err(format!("non-positive gain {gain} on {net:?}"));
        }
        min_gain = min_gain.min(gain.to_f64());
    }
    Ok(format!(
        "fixture 1.6/0.1/1.7, grid max-sum {grid_best:.2}, min gain over 100 nets {min_gain}"
    ))
}

fn residual_chain() -> Outcome {
    let mut r = rng(9);
    let (mut triples, mut nonempty) = (0, 0);
    for _ in 0..200 {
        let net = sample_until(&mut r, 2..=3, |n| classify_regime(n) == Regime::Tin);
        for cell in 1..=net.cells() {
            for pred in (1..=net.cells()).filter(|&p| p != cell) {
                for count in 1..=net.shape()[cell - 1] {
                    let part = partition_users(&net, cell, pred, count).unwrap();
                    if !residual_chain_holds(&net, &part) {
                        return Err(format!("fails for {part:?} on {net:?}"));
                    }
                    triples += 1;
                    nonempty += !part.residual.is_empty() as usize;
                }
            }
        }
    }
    Ok(format!(
        "{triples} triples ({nonempty} with residual users), 0 failures"
    ))
}

fn distributions(q_bits: u32, seed: u64) -> Vec<ProductDistribution> {
    let mut r = rng(seed);
    let mut out: Vec<_> = (0..1000)
        .map(|_| ProductDistribution::random(q_bits, &mut r))
        .collect();
    out.push(ProductDistribution::uniform(q_bits));
    for x1 in 0..1u32 << q_bits {
        for x2 in 0..1u32 << q_bits {
            out.push(ProductDistribution::point(q_bits, x1, x2));
        }
    }
    out
}

fn all_params(max_bits: u32) -> impl Iterator<Item = AdtParams> {
    let r = 0..=max_bits;
    iproduct!(r.clone(), r.clone(), r.clone(), r)
        .filter_map(|(m1, m2, n1, n2)| AdtParams::new(m1, m2, n1, n2).ok())
}

fn adt_sweep(
    check: fn(&AdtParams, &[ProductDistribution]) -> tingdof::Result<tingdof::adt::AdtReport>,
    valid: fn(&AdtParams) -> bool,
    sets: &[Vec<ProductDistribution>],
) -> Result<usize, String> {
    let mut count = 0;
    for p in all_params(6).filter(valid) {
        let rep = check(&p, &sets[p.q() as usize]).unwrap();
        if !rep.holds() {
            return Err(format!("{p:?} slack {}", rep.min_slack));
        }
        count += 1;
    }
    Ok(count)
}

fn dist_sets() -> Vec<Vec<ProductDistribution>> {
    (0..=6).map(|b| distributions(b, 100 + b as u64)).collect()
}

fn less_noisy(sets: &[Vec<ProductDistribution>]) -> Outcome {
    let p = AdtParams::new(3, 1, 4, 1).unwrap();
    let rep = check_less_noisy(&p, &distributions(4, 10)).unwrap();
    if !rep.holds() {
        return Err(format!("(3,1,4,1) min slack {}", rep.min_slack));
    }
    let swept = adt_sweep(check_less_noisy, AdtParams::less_noisy_regime, sets)?;
    Ok(format!(
        "(3,1,4,1) min slack {:.3e}; {swept} parameter sets with q <= 6 pass",
        rep.min_slack
    ))
}

fn entropy_gap(sets: &[Vec<ProductDistribution>]) -> Outcome {
    let p = AdtParams::new(4, 2, 4, 1).unwrap();
    let rep = check_entropy_gap(&p, &distributions(4, 11)).unwrap();
    if !rep.holds() {
        return Err(format!("(4,2,4,1) max gap {}", 1.0 - rep.min_slack));
    }
    let swept = adt_sweep(check_entropy_gap, AdtParams::entropy_gap_regime, sets)?;
    Ok(format!(
        "(4,2,4,1) max H(ya) - H(yb) = {:.6}; {swept} parameter sets with q <= 6 pass",
        1.0 - rep.min_slack
    ))
}

fn finite_snr() -> Outcome {
    let net = ChannelStrengths::from_nested(vec![vec![vec![q("0.6")], vec![q("1.0")]]]).unwrap();
    let order = DecodingOrder::identity(&[2]);
    let power = UserMap::from_cells(vec![vec![Power::Level(q("0")), Power::Level(q("-0.6"))]]);
    let bound = gdof_bounds_ibc(&net, &order, &power)
        .unwrap()
        .to_float()
        .to_flat();
    let mut prev = vec![f64::INFINITY; 2];
    let mut last = Vec::new();
    for p in [1e6, 1e12, 1e20] {
        let rep = sinr_rates_ibc(&net, &order, &power, p).unwrap();
        let gaps: Vec<f64> = rep.normalized[0]
            .iter()
            .zip(&bound)
            .map(|(x, b)| (x - b).abs())
            .collect();
        if gaps.iter().zip(&prev).any(|(g, pg)| g > &(pg + TOL)) {
            return Err(format!("gap grew to {gaps:?} at P = {p:e}"));
        }
        prev = gaps.clone();
        last = gaps;
    }
    if last.iter().any(|&g| g > 0.05) {
        return Err(format!("gaps {last:?} at P = 1e20 exceed 0.05"));
    }
    Ok(format!(
        "gaps at P = 1e20: [{:.4}, {:.4}]",
        last[0], last[1]
    ))
}

fn classifier_consistency() -> Outcome {
    let mut r = rng(13);
    let mut counts = [0usize; 3];
    for _ in 0..10_000 {
        let s = shape(&mut r, 1..=3);
        let net = if r.gen_bool(0.5) {
            uniform_net(&mut r, &s)
        } else {
            weak_cross_net(&mut r, &s)
        };
        let label = classify_regime(&net);
        match label {
            Regime::Tin => {
                counts[0] += 1;
                if !is_ctin(&net) {
                    return Err(format!("TIN label without CTIN conditions on {net:?}"));
                }
            }
            Regime::CtinOnly => counts[1] += 1,
            Regime::General => counts[2] += 1,
        }
        if label != Regime::General && !implied_conditions_hold(&net, label).unwrap() {
            return Err(format!(
                "{label:?} label breaks implied conditions on {net:?}"
            ));
        }
    }
    Ok(format!(
        "TIN {}, CTIN-only {}, general {}; 0 counterexamples",
        counts[0], counts[1], counts[2]
    ))
}

fn main() -> ExitCode {
    let nets = two_one_nets();
    let sets = dist_sets();
    let criteria: Vec<(&str, Check)> = vec![
        ("downlink within dual uplink", Box::new(lemma_1_1)),
        (
            "normalized uplink within dual downlink",
            Box::new(lemma_1_2),
        ),
        (
            "downlink and uplink grid max-sums agree",
            Box::new(|| corollary_duality(&nets)),
        ),
        (
            "grid points lie in the region union",
            Box::new(|| soundness(&nets)),
        ),
        (
            "region maximum approached by the grid",
            Box::new(|| completeness(&nets)),
        ),
        (
            "CTIN union equals the full identity region",
            Box::new(ctin_collapse),
        ),
        (
            "TIN outer bound equals the identity region",
            Box::new(tin_outer_bound),
        ),
        ("alignment gain", Box::new(alignment_gain)),
        ("residual chain in the TIN regime", Box::new(residual_chain)),
        ("ADT less-noisy inequality", Box::new(|| less_noisy(&sets))),
        (
            "ADT entropy-gap inequality",
            Box::new(|| entropy_gap(&sets)),
        ),
        (
            "finite-SNR rates converge to the GDoF",
            Box::new(finite_snr),
        ),
        (
            "regime classifier consistency",
            Box::new(classifier_consistency),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
