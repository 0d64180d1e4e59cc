//! Enumeration of the partition data `(mu1, mu2)` of a degree.
//!
//! A pair of vectors `mu1 = (a_1..a_k)`, `mu2 = (d_1..d_k)` with
//! `sum a_i d_i = d` is the same as a multiset of pairs `(a_i, d_i)`. The
//! enumerators below produce each multiset once, listing the pairs in
//! non-increasing lexicographic order.

/// A single part: coefficient `a` carried by a divisor of degree `delta`.
pub type Part = (u32, u32);

/// All multisets of parts with `sum a*delta = d` and `sum delta = n`.
pub fn partition_pairs(d: u32, n: u32) -> Vec<Vec<Part>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    if n > d {
        return out;
    }
    rec(d, n, (d.max(1), d.max(1)), &mut current, &mut out);
    out
}

/// All multisets of parts with `sum a*delta = d`, any `N`.
pub fn all_partition_pairs(d: u32) -> Vec<Vec<Part>> {
    (0..=d).flat_map(|n| partition_pairs(d, n)).collect()
}

fn rec(d_left: u32, n_left: u32, bound: Part, current: &mut Vec<Part>, out: &mut Vec<Vec<Part>>) {
    if d_left == 0 && n_left == 0 {
        out.push(current.clone());
        return;
    }
    if d_left == 0 || n_left == 0 {
        return;
    }
    // every remaining part has a >= 1, so the weight is at least the length
    if n_left > d_left {
        return;
    }
    let (ba, bdelta) = bound;
    for a in (1..=ba.min(d_left)).rev() {
        let max_delta = if a == ba { bdelta } else { u32::MAX };
        let max_delta = max_delta.min(n_left).min(d_left / a);
        for delta in (1..=max_delta).rev() {
            let w = a * delta;
            let (dl, nl) = (d_left - w, n_left - delta);
            // remaining parts need weight at least their length
            if nl > dl {
                continue;
            }
            current.push((a, delta));
            rec(dl, nl, (a, delta), current, out);
            current.pop();
        }
    }
}

/// Splits a list of parts into the coefficient and degree vectors.
pub fn unzip_parts(parts: &[Part]) -> (Vec<u32>, Vec<u32>) {
    parts.iter().copied().unzip()
}
