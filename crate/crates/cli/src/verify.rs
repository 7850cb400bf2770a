//! Direct-scan checkers used to recompute every verdict. They work on plain
//! slices and avoid the search code paths they audit.

use num_rational::BigRational;

/// In-window edges `x -> f(x)` with both ends in `set`.
pub fn edges_inside(values: &[usize], set: &[usize]) -> Vec<(usize, usize)> {
    let n = values.len();
    let mut member = vec![false; n];
    for &x in set.iter().filter(|&&x| x < n) {
        member[x] = true;
    }
    (0..n).filter(|&x| member[x] && values[x] < n && member[values[x]]).map(|x| (x, values[x])).collect()
}

pub fn is_free(values: &[usize], set: &[usize]) -> bool {
    edges_inside(values, set).is_empty()
}

/// Edges whose endpoints share a colour.
pub fn monochromatic(values: &[usize], colors: &[u8]) -> Vec<(usize, usize)> {
    (0..values.len())
        .filter(|&x| values[x] < values.len() && colors[x] == colors[values[x]])
        .map(|x| (x, values[x]))
        .collect()
}

/// Largest set free for every map in `family`, by enumeration of all
/// subsets of `[0, n)`.
pub fn exhaustive_max_free(family: &[&[usize]], n: usize) -> usize {
    assert!(n <= 20, "enumeration limited to 20 points");
    let mut banned: Vec<u32> = vec![0; n];
    for values in family {
        for x in 0..n {
            let y = values.get(x).copied().unwrap_or(usize::MAX);
            if y < n {
                banned[x] |= 1 << y;
                banned[y] |= 1 << x;
            }
        }
    }
    (0u32..1 << n)
        .filter(|&mask| (0..n).all(|x| mask >> x & 1 == 0 || banned[x] & mask == 0))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Whether `x` returns to itself under an injective `f` without leaving the
/// window.
pub fn on_cycle(values: &[usize], x: usize) -> bool {
    let mut y = x;
    for _ in 0..values.len() {
        y = values[y];
        if y >= values.len() {
            return false;
        }
        if y == x {
            return true;
        }
    }
    false
}

/// Problems with a claimed fixed-point-free involution: asymmetric pairs and
/// unpaired points beyond the allowed number.
pub fn involution_problems(pairing: &[usize], allowed_unpaired: usize) -> Vec<String> {
    let mut problems = Vec::new();
    let mut unpaired = 0;
    for (x, &y) in pairing.iter().enumerate() {
        if y >= pairing.len() || pairing[y] != x {
            problems.push(format!("pairing not symmetric at {x}"));
        } else if y == x {
            unpaired += 1;
        }
    }
    if unpaired > allowed_unpaired {
        problems.push(format!("{unpaired} unpaired points, expected at most {allowed_unpaired}"));
    }
    problems
}

/// For each `k ∈ set`, the off-diagonal sum of row `k` over `set`.
pub fn row_sums(entries: &[Vec<BigRational>], set: &[usize]) -> Vec<(usize, BigRational)> {
    set.iter()
        .map(|&k| {
            let sum = set
                .iter()
                .filter(|&&n| n != k)
                .fold(BigRational::from_integer(0.into()), |acc, &n| acc + &entries[k][n]);
            (k, sum)
        })
        .collect()
}

/// Edges joining blocks at least two apart.
pub fn long_edges(values: &[usize], endpoints: &[usize]) -> Vec<(usize, usize)> {
    let block = |x: usize| endpoints.iter().rposition(|&e| e <= x).expect("starts at 0");
    (0..values.len())
        .filter(|&x| values[x] < values.len())
        .filter(|&x| block(x).abs_diff(block(values[x])) >= 2)
        .map(|x| (x, values[x]))
        .collect()
}

/// Blocks of `outer` ending by `n` that hold no complete block of `inner`
/// ending by `n`.
pub fn undominated_blocks(outer: &[usize], inner: &[usize], n: usize) -> Vec<usize> {
    (0..outer.len().saturating_sub(1))
        .filter(|&i| outer[i + 1] <= n)
        .filter(|&i| {
            !(0..inner.len().saturating_sub(1))
                .any(|j| inner[j + 1] <= n && outer[i] <= inner[j] && inner[j + 1] <= outer[i + 1])
        })
        .collect()
}

/// `(f[U] ∪ f⁻¹[U]) ∩ [lo, hi)` for `U = [0, lo)`, by scanning the whole
/// window.
pub fn shadow(values: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..values.len())
        .flat_map(|x| {
            let y = values[x];
            let forward = (x < lo && (lo..hi).contains(&y)).then_some(y);
            let backward = ((lo..hi).contains(&x) && y < lo).then_some(x);
            forward.into_iter().chain(backward)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_checks() {
        let succ: Vec<usize> = (1..=6).collect();
        assert!(is_free(&succ, &[0, 2, 4]));
        assert_eq!(edges_inside(&succ, &[1, 2, 5]), vec![(1, 2)]);
        assert_eq!(exhaustive_max_free(&[&succ], 6), 3);
        let cycle = [1, 2, 0];
        assert_eq!(exhaustive_max_free(&[&cycle], 3), 1);
    }

    #[test]
    fn cycles_and_paths() {
        let f = [1, 0, 3, 9];
        assert!(on_cycle(&f, 0));
        assert!(!on_cycle(&f, 2));
    }

    #[test]
    fn scans() {
        let succ: Vec<usize> = (1..=6).collect();
        assert!(long_edges(&succ, &[0, 2, 4, 6]).is_empty());
        assert_eq!(long_edges(&[3, 0, 1, 0], &[0, 1, 2, 4]), vec![(0, 3), (3, 0)]);
        assert_eq!(undominated_blocks(&[0, 2, 4], &[0, 4], 4), vec![0, 1]);
        assert_eq!(shadow(&succ, 2, 6), vec![2]);
        assert_eq!(involution_problems(&[1, 0, 2], 1), Vec::<String>::new());
        assert_eq!(involution_problems(&[1, 2, 0], 0).len(), 3);
    }
}
