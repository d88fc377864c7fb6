//! Cyclic sequences over a set of cells.
//!
//! A cyclic sequence `(i1, ..., im)` visits distinct cells and wraps from
//! `im` back to `i1`. Rotations describe the same cycle, so each one is
//! stored once, rotated to start at its smallest cell.

use itertools::Itertools;

/// All cyclic sequences over `cells` (lengths 1 to `cells.len()`), ordered by
/// length, then by cell subset, then lexicographically.
pub fn cyclic_sequences(cells: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    for m in 1..=sorted.len() {
        for subset in sorted.iter().copied().combinations(m) {
            let (head, tail) = subset.split_first().expect("m >= 1");
            for rest in tail.iter().copied().permutations(tail.len()) {
                let mut seq = Vec::with_capacity(m);
                seq.push(*head);
                seq.extend(rest);
                out.push(seq);
            }
        }
    }
    out
}

/// Number of cyclic sequences over `n` cells: the sum over `m` of
/// `C(n, m) * (m - 1)!`.
pub fn cyclic_sequence_count(n: usize) -> u128 {
    let mut total = 0u128;
    let mut choose = 1u128;
    let mut fact = 1u128;
    for m in 1..=n as u128 {
        choose = choose * (n as u128 - m + 1) / m;
        if m > 1 {
            fact *= m - 1;
        }
        total += choose * fact;
    }
    total
}

/// Rotation of `seq` that starts at its smallest element.
pub fn canonical_rotation(seq: &[usize]) -> Vec<usize> {
    let Some(pos) = seq
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
    else {
        return Vec::new();
    };
    seq[pos..].iter().chain(&seq[..pos]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn three_cells_in_documented_order() {
        let got = cyclic_sequences(&[1, 2, 3]);
        let want: Vec<Vec<usize>> = vec![
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
            vec![1, 3, 2],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn counts_match_formula() {
        assert_eq!(cyclic_sequence_count(3), 8);
        assert_eq!(cyclic_sequence_count(4), 24);
        for n in 0..=6 {
            let cells: Vec<usize> = (0..n).collect();
            assert_eq!(
                cyclic_sequences(&cells).len() as u128,
                cyclic_sequence_count(n)
            );
        }
    }

    /// Independent enumeration: every injective sequence, reduced modulo
    /// rotation.
    #[test]
    fn matches_brute_force_rotation_classes() {
        for n in 1..=5usize {
            let cells: Vec<usize> = (0..n).collect();
            let mut brute = BTreeSet::new();
            for m in 1..=n {
                for seq in cells.iter().copied().permutations(m) {
                    brute.insert(canonical_rotation(&seq));
                }
            }
            let ours: BTreeSet<Vec<usize>> = cyclic_sequences(&cells).into_iter().collect();
            assert_eq!(ours, brute);
        }
    }
}
