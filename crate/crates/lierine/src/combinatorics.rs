//! Subset enumeration, ranking, and sign bookkeeping for alternating forms.
//!
//! Degree-`p` forms are stored by their values on the strictly increasing
//! `p`-subsets of basis indices `{0, ..., m-1}`, enumerated lexicographically.

use num_bigint::BigInt;
use num_traits::One;

/// Binomial coefficient; the library's ranks stay small (m <= 12), so `u64`
/// never overflows here.
pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc as usize
}

/// n! as an exact integer.
pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// All strictly increasing `p`-subsets of `{0, ..., m-1}` in lexicographic
/// order. Empty when `p > m`; the single empty subset when `p = 0`.
pub(crate) fn subsets(m: usize, p: usize) -> Vec<Vec<usize>> {
    if p > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(m, p));
    let mut current: Vec<usize> = (0..p).collect();
    loop {
        out.push(current.clone());
        // Advance to the next subset in lex order.
        let mut j = p;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if current[j] < m - (p - j) {
                current[j] += 1;
                for l in j + 1..p {
                    current[l] = current[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Lexicographic rank of a sorted subset among `subsets(m, s.len())`.
pub(crate) fn subset_rank(m: usize, s: &[usize]) -> usize {
    let p = s.len();
    let mut rank = 0;
    let mut prev = 0;
    for (j, &sj) in s.iter().enumerate() {
        for v in prev..sj {
            rank += binomial(m - v - 1, p - j - 1);
        }
        prev = sj + 1;
    }
    rank
}

/// Sort an index list, returning the sorted list and the sign of the sorting
/// permutation, or `None` if any index repeats (an alternating form vanishes
/// there).
pub(crate) fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1i64;
    // Insertion sort with inversion counting; the lists are tiny.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Sign of the (p,q)-shuffle that lists the chosen positions first: given the
/// 0-based positions of the chosen elements inside the combined sorted list,
/// the sign is (-1) to the number of inversions, which is the total distance
/// each chosen element moves left.
pub(crate) fn shuffle_sign(chosen_positions: &[usize]) -> i64 {
    let moves: usize = chosen_positions
        .iter()
        .enumerate()
        .map(|(j, &pos)| pos - j)
        .sum();
    if moves % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        let all = subsets(6, 3);
        assert_eq!(all.len(), 20);
        for (rank, s) in all.iter().enumerate() {
            assert_eq!(subset_rank(6, s), rank);
        }
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[0, 0]), None);
        assert_eq!(sort_with_sign(&[]), Some((vec![], 1)));
    }

    #[test]
    fn shuffle_signs() {
        // In φ∧ψ(δ1,δ2) the term φ(δ2)ψ(δ1) picks position 1 for the 1-form φ.
        assert_eq!(shuffle_sign(&[0]), 1);
        assert_eq!(shuffle_sign(&[1]), -1);
        assert_eq!(shuffle_sign(&[0, 1]), 1);
        assert_eq!(shuffle_sign(&[1, 2]), 1);
        assert_eq!(shuffle_sign(&[0, 2]), -1);
    }
}
