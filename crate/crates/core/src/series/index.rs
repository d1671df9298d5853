//! Graded-lexicographic enumeration of multi-indices.
//!
//! Monomials in `r` variables of total degree at most `M` are laid out
//! densely: first by total degree, then lexicographically with larger
//! exponents of earlier variables first. For `r = 2` this is
//! `1, X1, X2, X1^2, X1 X2, X2^2, ...`.

/// Number of monomials in `vars` variables with total degree exactly `degree`.
pub fn count_exact(vars: usize, degree: usize) -> usize {
    if vars == 0 {
        return usize::from(degree == 0);
    }
    binomial(degree + vars - 1, vars - 1)
}

/// Number of monomials in `vars` variables with total degree at most `order`.
pub fn count_upto(vars: usize, order: usize) -> usize {
    binomial(order + vars, vars)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Position of `index` in the dense graded-lex layout.
pub fn rank(index: &[u32]) -> usize {
    let vars = index.len();
    let degree: usize = index.iter().map(|&e| e as usize).sum();
    let mut pos = if degree == 0 { 0 } else { count_upto(vars, degree - 1) };
    let mut remaining = degree;
    for (i, &e) in index.iter().enumerate().take(vars.saturating_sub(1)) {
        let e = e as usize;
        // monomials of this degree whose exponent at position i exceeds e
        for larger in (e + 1)..=remaining {
            pos += count_exact(vars - i - 1, remaining - larger);
        }
        remaining -= e;
    }
    pos
}

/// All multi-indices of total degree exactly `degree`, in graded-lex order.
pub fn of_degree(vars: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(count_exact(vars, degree));
    let mut current = vec![0u32; vars];
    fill(&mut out, &mut current, 0, degree);
    out
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut [u32], pos: usize, remaining: usize) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u32;
        out.push(current.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e as u32;
        fill(out, current, pos + 1, remaining - e);
    }
}

/// All multi-indices of total degree at most `order`, in layout order.
pub fn upto(vars: usize, order: usize) -> Vec<Vec<u32>> {
    (0..=order).flat_map(|d| of_degree(vars, d)).collect()
}

pub fn degree(index: &[u32]) -> usize {
    index.iter().map(|&e| e as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_dense_and_ranked() {
        for vars in 1..=4 {
            let all = upto(vars, 6);
            assert_eq!(all.len(), count_upto(vars, 6));
            for (i, idx) in all.iter().enumerate() {
                assert_eq!(rank(idx), i, "vars={vars} idx={idx:?}");
            }
        }
    }

    #[test]
    fn two_variable_order() {
        let all = upto(2, 2);
        let expect: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(all, expect);
    }
}
