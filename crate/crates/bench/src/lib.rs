//! Fixed inputs shared by the benchmarks.

use tingdof::{ChannelStrengths, Rational, Scalar};

/// Two cells, two users in the first and one in the second.
pub fn two_cell<T: Scalar>() -> ChannelStrengths<T> {
    let v = |s: &str| T::from_decimal_str(s).expect("literal");
    ChannelStrengths::from_nested(vec![
        vec![vec![v("0.6"), v("0.2")], vec![v("1.0"), v("0.1")]],
        vec![vec![v("0.3"), v("1.0")]],
    ])
    .expect("valid fixture")
}

/// Three cells with three users each, in the TIN regime.
pub fn three_cell() -> ChannelStrengths<Rational> {
    let v = |s: &str| Rational::from_decimal_str(s).expect("literal");
    let cell = |k: usize, direct: [&str; 3]| -> Vec<Vec<Rational>> {
        direct
            .iter()
            .enumerate()
            .map(|(l, d)| {
                (0..3)
                    .map(|i| {
                        if i == k {
                            v(d)
                        } else {
                            v(["0.1", "0.15", "0.2"][l])
                        }
                    })
                    .collect()
            })
            .collect()
    };
    ChannelStrengths::from_nested(vec![
        cell(0, ["0.8", "1.2", "1.6"]),
        cell(1, ["0.9", "1.3", "1.7"]),
        cell(2, ["1.0", "1.4", "1.8"]),
    ])
    .expect("valid fixture")
}
