use super::NumericalSemigroup;

/// Every numerical semigroup with Frobenius number `f` and exactly `n`
/// positive sporadic elements, by direct subset search.
///
/// Elements are chosen in increasing order. Each new element `x` adds the
/// sums with earlier elements (and `2x`) that stay below `f` to a pending set;
/// a sum equal to `f` kills the branch, the next element may not skip past the
/// smallest pending sum, and the branch dies once more sums are pending than
/// slots remain.
pub fn enumerate_semigroups(n: usize, f: u64) -> Vec<NumericalSemigroup> {
    let mut out = Vec::new();
    search(n, f, &mut Vec::with_capacity(n), &[], &mut |s| {
        out.push(NumericalSemigroup { frobenius: f, sporadic: s.to_vec() })
    });
    out
}

/// Same search, counting only.
pub fn count_semigroups_oracle(n: usize, f: u64) -> u64 {
    let mut count = 0;
    search(n, f, &mut Vec::with_capacity(n), &[], &mut |_| count += 1);
    count
}

fn search(n: usize, f: u64, chosen: &mut Vec<u64>, pending: &[u64], emit: &mut impl FnMut(&[u64])) {
    if f < 2 {
        return;
    }
    if chosen.len() == n {
        if pending.is_empty() {
            emit(chosen);
        }
        return;
    }
    let start = chosen.last().map_or(1, |&x| x + 1);
    let stop = pending.first().copied().unwrap_or(f - 1).min(f - 1);
    for x in start..=stop {
        let mut next: Vec<u64> = pending.iter().copied().filter(|&p| p != x).collect();
        let mut ok = true;
        for s in chosen.iter().map(|&c| c + x).chain(std::iter::once(2 * x)) {
            if s == f {
                ok = false;
                break;
            }
            if s < f && !next.contains(&s) {
                next.push(s);
            }
        }
        if !ok || next.len() > n - chosen.len() - 1 {
            continue;
        }
        next.sort_unstable();
        chosen.push(x);
        search(n, f, chosen, &next, emit);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(n: usize, f: u64) -> Vec<Vec<u64>> {
        let mut v: Vec<Vec<u64>> = enumerate_semigroups(n, f).into_iter().map(|s| s.sporadic).collect();
        v.sort();
        v
    }

    /// Plain brute force over all n-subsets of {1, …, f-1}.
    fn naive(n: usize, f: u64) -> u64 {
        fn rec(n: usize, f: u64, from: u64, cur: &mut Vec<u64>, acc: &mut u64) {
            if cur.len() == n {
                let closed = cur.iter().all(|&a| cur.iter().all(|&b| a + b > f || cur.contains(&(a + b))));
                *acc += closed as u64;
                return;
            }
            for x in from..f {
                cur.push(x);
                rec(n, f, x + 1, cur, acc);
                cur.pop();
            }
        }
        let mut acc = 0;
        rec(n, f, 1, &mut Vec::new(), &mut acc);
        acc
    }

    #[test]
    fn small_cases() {
        assert_eq!(sets(1, 7), vec![vec![4], vec![5], vec![6]]);
        assert_eq!(sets(2, 7), vec![vec![3, 6], vec![4, 5], vec![4, 6], vec![5, 6]]);
        assert!(sets(1, 2).is_empty());
        assert_eq!(sets(3, 7), vec![vec![2, 4, 6], vec![3, 5, 6], vec![4, 5, 6]]);
    }

    #[test]
    fn agrees_with_naive_subsets() {
        for n in 1..=4 {
            for f in 2..=22 {
                assert_eq!(count_semigroups_oracle(n, f), naive(n, f), "n={n} f={f}");
            }
        }
    }
}
