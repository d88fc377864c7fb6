//! Values computed by the independent script in `tools/reference.py` and
//! frozen here.

use tingdof::adt::{output_entropies, AdtParams, ProductDistribution};
use tingdof::oracle::{oracle_max_sum, GridSpec, DEFAULT_BUDGET};
use tingdof::{
    dualize_ibc_to_imac, effective_interference_ibc, effective_interference_imac, gdof_bounds_ibc,
    gdof_bounds_imac, max_weighted_sum, polyhedral_region, ChannelStrengths, DecodingOrder, Power,
    PowerAllocation, Rational, Scalar, Side, SubnetworkOrder, UserMap,
};

type Q = Rational;

fn q(s: &str) -> Q {
    Q::from_decimal_str(s).unwrap()
}

fn frac(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn net(rows: &[&[&[&str]]]) -> ChannelStrengths<Q> {
    ChannelStrengths::from_nested(
        rows.iter()
            .map(|cell| {
                cell.iter()
                    .map(|u| u.iter().map(|s| q(s)).collect())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

fn three_cell() -> ChannelStrengths<Q> {
    net(&[
        &[&["0.5", "0.2", "0.1"], &["1.1", "0.3", "0.25"]],
        &[&["0.15", "0.9", "0.2"]],
        &[&["0.3", "0.1", "0.7"], &["0.05", "0.35", "1.3"]],
    ])
}

fn three_cell_order() -> DecodingOrder {
    DecodingOrder::from_one_based(vec![vec![2, 1], vec![1], vec![1, 2]], &[2, 1, 2]).unwrap()
}

fn levels(cells: &[&[Option<&str>]]) -> PowerAllocation<Q> {
    UserMap::from_cells(
        cells
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| p.map_or(Power::Silent, |s| Power::Level(q(s))))
                    .collect()
            })
            .collect(),
    )
}

fn map(cells: &[&[Q]]) -> UserMap<Q> {
    UserMap::from_cells(cells.iter().map(|c| c.to_vec()).collect())
}

#[test]
fn three_cell_downlink_and_its_dual() {
    let net = three_cell();
    let order = three_cell_order();
    let power = levels(&[
        &[Some("-0.1"), Some("0")],
        &[Some("-0.3")],
        &[Some("0"), Some("-0.45")],
    ]);
    let gamma = effective_interference_ibc(&net, &order, &power).unwrap();
    assert_eq!(
        gamma,
        map(&[
            &[frac(1, 10), frac(1, 1)],
            &[frac(1, 5)],
            &[frac(3, 10), frac(1, 20)]
        ])
    );
    let d = gdof_bounds_ibc(&net, &order, &power).unwrap();
    assert_eq!(
        d,
        map(&[
            &[frac(3, 10), frac(1, 10)],
            &[frac(2, 5)],
            &[frac(2, 5), frac(4, 5)]
        ])
    );
    let dual = dualize_ibc_to_imac(&net, &order, &power).unwrap();
    assert_eq!(
        dual,
        levels(&[
            &[Some("-0.1"), Some("-1")],
            &[Some("-0.2")],
            &[Some("-0.3"), Some("-0.05")]
        ])
    );
    let up = gdof_bounds_imac(&net, &order, &dual).unwrap();
    assert_eq!(
        up,
        map(&[
            &[frac(3, 10), frac(1, 10)],
            &[frac(2, 5)],
            &[frac(2, 5), frac(17, 20)]
        ])
    );
}

#[test]
fn three_cell_with_silent_users() {
    let net = three_cell();
    let order = three_cell_order();
    let power = levels(&[&[None, Some("-0.2")], &[Some("0")], &[Some("-0.6"), None]]);
    assert_eq!(
        gdof_bounds_ibc(&net, &order, &power).unwrap(),
        map(&[
            &[frac(0, 1), frac(1, 10)],
            &[frac(9, 10)],
            &[frac(0, 1), frac(0, 1)]
        ])
    );
    assert_eq!(
        effective_interference_imac(&net, &order, &power).unwrap(),
        map(&[
            &[frac(9, 10), frac(3, 20)],
            &[frac(1, 10)],
            &[frac(1, 5), frac(1, 5)]
        ])
    );
    assert_eq!(
        gdof_bounds_imac(&net, &order, &power).unwrap(),
        map(&[
            &[frac(0, 1), frac(3, 4)],
            &[frac(4, 5)],
            &[frac(0, 1), frac(0, 1)]
        ])
    );
}

#[test]
fn three_cell_regions_and_optima() {
    let net = three_cell();
    let full = polyhedral_region(&net, &SubnetworkOrder::identity(net.shape())).unwrap();
    assert_eq!(full.constraints.len(), 21);
    let w = |v: [i64; 5]| UserMap::from_flat(&[2, 1, 2], v.map(Q::from_i64).to_vec()).unwrap();
    for (weights, expected) in [
        ([1, 1, 1, 1, 1], frac(51, 20)),
        ([1, 2, 1, 3, 1], frac(83, 20)),
        ([0, 1, 0, 0, 1], frac(21, 10)),
    ] {
        assert_eq!(
            max_weighted_sum(&full, &w(weights)).unwrap().value,
            expected
        );
    }

    let sub =
        SubnetworkOrder::from_one_based(vec![vec![2], vec![1], vec![2, 1]], &[2, 1, 2]).unwrap();
    let region = polyhedral_region(&net, &sub).unwrap();
    assert_eq!(region.constraints.len(), 13);
    let ones = UserMap::filled(&[2, 1, 2], Q::one());
    assert_eq!(
        max_weighted_sum(&region, &ones).unwrap().value,
        frac(19, 10)
    );
}

#[test]
fn two_cell_full_power_and_grid_optima() {
    let a = net(&[&[&["0.6", "0.2"], &["1.0", "0.1"]], &[&["0.3", "1.0"]]]);
    let id = DecodingOrder::identity(&[2, 1]);
    let full = UserMap::filled(&[2, 1], Power::Level(Q::zero()));
    assert_eq!(
        effective_interference_ibc(&a, &id, &full).unwrap(),
        map(&[&[frac(3, 5), frac(1, 10)], &[frac(3, 10)]])
    );
    assert_eq!(
        gdof_bounds_ibc(&a, &id, &full).unwrap(),
        map(&[&[frac(0, 1), frac(9, 10)], &[frac(7, 10)]])
    );

    let ones = UserMap::filled(&[2, 1], Q::one());
    let grid = GridSpec::new(q("0.1"), q("2")).unwrap();
    for side in [Side::Ibc, Side::Imac] {
        let best = oracle_max_sum(&a, side, &grid, &ones, DEFAULT_BUDGET).unwrap();
        assert_eq!(best.value, frac(8, 5), "{side}");
    }

    let b = net(&[&[&["1.0", "0.5"], &["1.2", "0.4"]], &[&["0.2", "1.0"]]]);
    let grid = GridSpec::new(q("0.05"), q("2.2")).unwrap();
    let best = oracle_max_sum(&b, Side::Ibc, &grid, &ones, DEFAULT_BUDGET).unwrap();
    assert_eq!(best.value, frac(8, 5));
}

const FIRST: [f64; 16] = [
    0.059135928131423786,
    0.07317452642671955,
    0.12081459086974901,
    0.060870675666412445,
    0.06638599112841957,
    0.07678407822559172,
    0.02413915646319982,
    0.06691768505751915,
    0.08233948458759875,
    0.10365946687774723,
    0.012303999815790674,
    0.039661198483316853,
    0.01185262761580272,
    0.10583829579578534,
    0.09064761647374553,
    0.005474678381177794,
];

const SECOND: [f64; 16] = [
    0.13371533386801265,
    0.1313416543760346,
    0.08902469518089745,
    0.08380240675251203,
    0.02144116939490455,
    0.002042193021259901,
    0.0719335681948774,
    0.008107258449549251,
    0.025894860244324924,
    0.03293800402670909,
    0.004095429043431735,
    0.06315981156226579,
    0.05997369163304679,
    0.11468761891900756,
    0.07067330411169191,
    0.08716900122147439,
];

#[test]
fn deterministic_model_entropies() {
    let dist = ProductDistribution::new(4, FIRST.to_vec(), SECOND.to_vec()).unwrap();
    let close = |a: f64, b: f64| assert!((a - b).abs() < 1e-12, "{a} vs {b}");

    let e = output_entropies(&AdtParams::new(3, 1, 4, 1).unwrap(), &dist).unwrap();
    close(e.h_a, 2.9834656138220748);
    close(e.h_b, 3.90949777370782);
    close(e.info_a(), 1.988418706154901);
    close(e.info_b(), 2.914450866040646);

    let e = output_entropies(&AdtParams::new(4, 2, 4, 1).unwrap(), &dist).unwrap();
    close(e.h_a, 3.9456006903450627);
    close(e.h_b, 3.90949777370782);
    close(e.info_a(), 2.1802987288386193);
    close(e.info_b(), 2.914450866040646);
}
