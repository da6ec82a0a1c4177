//! Second implementation of clique color coverage, working from pair values
//! rather than the colored graph.

use std::collections::BTreeSet;

use crate::constructions::Ambient;
use crate::graph::VertexSet;

/// `(canonical, ordered)` pattern counts of colored `K_t` on `U`, from direct
/// pair evaluation. The innermost vertex of a tuple varies slowest.
pub fn coverage_by_evaluation(amb: &Ambient, u: &VertexSet, t: usize) -> (usize, usize) {
    let palette: BTreeSet<u32> = amb.palette().into_iter().collect();
    let verts = u.to_vec();
    let colored = |a: usize, b: usize| -> Option<u32> {
        if a == b {
            return None;
        }
        let v = amb.value(a, b);
        palette.contains(&v).then_some(v)
    };
    let mut ordered: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut tuple = vec![0usize; t];
    let total = verts.len().pow(t as u32);
    for code in 0..total {
        let mut c = code;
        for slot in tuple.iter_mut() {
            *slot = verts[c % verts.len()];
            c /= verts.len();
        }
        let mut word = Vec::with_capacity(t * (t - 1) / 2);
        let mut ok = true;
        'outer: for i in 0..t {
            for j in i + 1..t {
                match colored(tuple[i], tuple[j]) {
                    Some(v) => word.push(v),
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            ordered.insert(word);
        }
    }
    let canonical: BTreeSet<Vec<u32>> = ordered.iter().map(|w| relabel_min(w, t)).collect();
    (canonical.len(), ordered.len())
}

/// Lexicographically least edge word over all vertex relabelings, with the
/// relabelings generated in index order.
fn relabel_min(word: &[u32], t: usize) -> Vec<u32> {
    let at = |i: usize, j: usize| -> u32 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // position of slot (a, b) in row-major upper triangle
        let pos = a * t - a * (a + 1) / 2 + (b - a - 1);
        word[pos]
    };
    let mut best: Option<Vec<u32>> = None;
    let mut perm: Vec<usize> = (0..t).collect();
    loop {
        let mut w = Vec::with_capacity(word.len());
        for i in 0..t {
            for j in i + 1..t {
                w.push(at(perm[i], perm[j]));
            }
        }
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("t >= 1")
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeling() {
        // triangle with colors (01, 02, 12) = (3, 1, 2): least is (1, 2, 3)
        assert_eq!(relabel_min(&[3, 1, 2], 3), vec![1, 2, 3]);
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
