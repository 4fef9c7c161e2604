//! Binomials and fixed-size subset iteration over bit masks.

/// Exact binomial coefficient; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binom_usize(n: usize, k: usize) -> u128 {
    binom(n as u64, k as u64)
}

/// Iterates all `k`-element subsets of `{0, .., n-1}` as bit masks in
/// increasing numeric order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    assert!(n <= 64, "k_subsets supports at most 64 elements");
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let first = if k == 0 {
        Some(0)
    } else if k > n {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    KSubsets { next: first, limit, k }
}

pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
    k: usize,
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        self.next = if self.k == 0 || current == self.limit {
            None
        } else {
            let c = current & current.wrapping_neg();
            let r = current.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let next = (((r ^ current) >> 2) / c) | r;
                if next & !self.limit != 0 {
                    None
                } else {
                    Some(next)
                }
            }
        };
        Some(current)
    }
}

/// Iterates the elements of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Total order on masks read as sorted index lists, compared lexicographically.
pub fn cmp_lex_masks(a: u64, b: u64) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == b {
        return Ordering::Equal;
    }
    let d = (a ^ b) & (a ^ b).wrapping_neg();
    let above = !(d | (d - 1));
    if a & d != 0 {
        // a holds the first differing element; b either continues with a
        // larger element (a < b) or stops there (b is a prefix of a)
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn subsets_count_and_order() {
        let all: Vec<u64> = k_subsets(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(k_subsets(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(3, 3).collect::<Vec<_>>(), vec![7]);
        assert_eq!(k_subsets(64, 63).count(), 64);
    }

    #[test]
    fn lex_order_matches_sorted_lists() {
        let to_list = |m: u64| bits(m).collect::<Vec<_>>();
        for a in 0u64..64 {
            for b in 0u64..64 {
                assert_eq!(cmp_lex_masks(a, b), to_list(a).cmp(&to_list(b)), "{a} {b}");
            }
        }
    }
}
