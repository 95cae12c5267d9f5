//! Increasing index tuples and permutation signs.

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for t in (i + 1)..k {
                    cur[t] = cur[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sorts `t`, returning the permutation sign, or `None` on a repeated index.
pub fn sort_with_sign(t: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut v = t.to_vec();
    let mut sign = 1;
    // insertion sort counts transpositions
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
    Some((sign, v))
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of an increasing tuple in [`combinations`] order.
pub fn tuple_index(n: usize, tuple: &[usize]) -> usize {
    let k = tuple.len();
    let mut idx = 0;
    let mut prev = 0;
    for (pos, &t) in tuple.iter().enumerate() {
        for skipped in prev..t {
            idx += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = t + 1;
    }
    idx
}
