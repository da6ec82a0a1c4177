//! Edge, path, star and bipartite counts between vertex subsets, colored
//! star indicators, and colored clique coverage.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::Ambient;
use crate::error::{Error, Result};
use crate::exact::{int, ratio, within, within_affine};
use crate::graph::{ColoredGraph, Graph, VertexSet, NO_COLOR};
use crate::{Caps, Cert};

fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

fn and_into(out: &mut [u64], a: &[u64], b: &[u64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x & y;
    }
}

fn check_universe(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.universe() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: s.universe() });
    }
    Ok(())
}

/// Ordered pairs `(u, w)` with `u` in `b`, `w` in `c`, adjacent. A loop at a
/// vertex of both sets counts once.
pub fn edge_count(g: &Graph, b: &VertexSet, c: &VertexSet) -> u64 {
    b.iter().map(|u| and_count(g.row(u), c.mask())).sum()
}

/// `d_U(v)`: neighbors of `v` inside `u`.
pub fn degree_into(g: &Graph, v: usize, u: &VertexSet) -> u64 {
    and_count(g.row(v), u.mask())
}

fn require_cert(g: &Graph, cert: &Cert) -> Result<()> {
    cert.check_graph(g)?;
    if !cert.satisfied {
        return Err(Error::InvalidParameter("certificate is not satisfied".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub observed: u64,
    /// `d |B| |C| / n`
    pub expected: f64,
    /// `lambda sqrt(|B| |C|)`
    pub bound: f64,
    pub satisfied: bool,
}

/// Edge count against `|e(B,C) - d|B||C|/n| <= lambda sqrt(|B||C|)`,
/// compared exactly.
pub fn mixing_check(g: &Graph, cert: &Cert, b: &VertexSet, c: &VertexSet) -> Result<MixingReport> {
    require_cert(g, cert)?;
    check_universe(g, b)?;
    check_universe(g, c)?;
    let (n, d) = (g.n() as u64, cert.d_claim);
    let (bs, cs) = (b.len() as u64, c.len() as u64);
    let observed = edge_count(g, b, c);
    let diff = ratio(BigInt::from(n) * observed - BigInt::from(d) * bs * cs, n);
    let satisfied = within(&diff, cert.lambda_bound, &int(bs * cs));
    Ok(MixingReport {
        observed,
        expected: d as f64 * bs as f64 * cs as f64 / n as f64,
        bound: cert.lambda_bound.value() * ((bs * cs) as f64).sqrt(),
        satisfied,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    /// `sum_v (d_U(v) - d|U|/n)^2`
    pub variance: f64,
    /// `lambda^2 |U|`
    pub bound: f64,
    pub satisfied: bool,
    /// Empty `U`: the strict inequality is vacuous and reported as satisfied.
    pub trivial: bool,
}

/// `sum_v (d_U(v) - d|U|/n)^2 < lambda^2 |U|`, exactly.
pub fn degree_variance(g: &Graph, cert: &Cert, u: &VertexSet) -> Result<VarianceReport> {
    require_cert(g, cert)?;
    check_universe(g, u)?;
    let (n, d, us) = (g.n() as i128, cert.d_claim as i128, u.len() as i128);
    // n^2 * variance as an integer
    let scaled: BigInt = (0..g.n())
        .map(|v| {
            let x = n * degree_into(g, v, u) as i128 - d * us;
            BigInt::from(x) * x
        })
        .sum();
    let variance = ratio(scaled, n * n);
    let bound = cert.lambda_bound.square() * int(us);
    let trivial = us == 0;
    Ok(VarianceReport {
        variance: to_f64(&variance),
        bound: to_f64(&bound),
        satisfied: trivial || variance < bound,
        trivial,
    })
}

fn to_f64(x: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Ordered triples `(c1, b, c2)` with `b` in `B`, `c1, c2` in `C`, both
/// adjacent to `b`: `sum_b d_C(b)^2`.
pub fn path2_count(g: &Graph, b: &VertexSet, c: &VertexSet) -> u64 {
    b.iter().map(|v| degree_into(g, v, c).pow(2)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path2Report {
    pub observed: u64,
    /// `(d/n)^2 |B| |C|^2`
    pub expected: f64,
    /// `2 (lambda d / n) |B|^(1/2) |C|^(3/2) + lambda^2 |C|`
    pub bound: f64,
    pub satisfied: bool,
}

pub fn path2_check(g: &Graph, cert: &Cert, b: &VertexSet, c: &VertexSet) -> Result<Path2Report> {
    require_cert(g, cert)?;
    check_universe(g, b)?;
    check_universe(g, c)?;
    let (n, d) = (g.n() as u64, cert.d_claim);
    let (bs, cs) = (b.len() as u64, c.len() as u64);
    let observed = path2_count(g, b, c);
    let expected = ratio(BigInt::from(d * d) * bs * cs * cs, BigInt::from(n) * n);
    let diff = int(observed) - &expected;
    let lam2 = cert.lambda_bound.square();
    let affine = &lam2 * int(cs);
    let coef = ratio(2 * d, n);
    // c * lambda * sqrt(|B||C|^3) = c * sqrt(lambda^2 |B| |C|^3)
    let radicand = &lam2 * int(BigInt::from(bs) * cs * cs * cs);
    let satisfied = within_affine(&diff, &affine, &coef, &radicand);
    let lam = cert.lambda_bound.value();
    Ok(Path2Report {
        observed,
        expected: to_f64(&expected),
        bound: 2.0 * lam * d as f64 / n as f64 * (bs as f64).sqrt() * (cs as f64).powf(1.5) + lam * lam * cs as f64,
        satisfied,
    })
}

/// `sum_{x in U1} d_{U2}(x)^t`, equal to the sum over `y in U2^t` of the
/// common-neighbor count in `U1`.
pub fn star_sum(g: &Graph, u1: &VertexSet, u2: &VertexSet, t: u32) -> u128 {
    u1.iter().map(|x| (degree_into(g, x, u2) as u128).pow(t)).sum()
}

/// `sum_{y in U2^t} S_y(U1)^s` by enumerating the `t`-tuples, together with
/// the injective variant `sum over distinct y of S (S-1) ... (S-s+1)`.
fn tuple_side(g: &Graph, u1: &VertexSet, u2: &VertexSet, s: u32, t: u32) -> (u128, u128) {
    let ys = u2.to_vec();
    let words = g.words();
    let per_first = |&y0: &usize| -> (u128, u128) {
        let mut stack = vec![vec![0u64; words]; t as usize];
        and_into(&mut stack[0], u1.mask(), g.row(y0));
        let mut chosen = vec![y0];
        let mut acc = (0u128, 0u128);
        recurse(g, &ys, &mut stack, &mut chosen, 1, s, t, &mut acc);
        acc
    };
    ys.par_iter().map(per_first).reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    g: &Graph,
    ys: &[usize],
    stack: &mut [Vec<u64>],
    chosen: &mut Vec<usize>,
    depth: usize,
    s: u32,
    t: u32,
    acc: &mut (u128, u128),
) {
    if depth == t as usize {
        let count = stack[depth - 1].iter().map(|w| w.count_ones() as u128).sum::<u128>();
        acc.0 += count.pow(s);
        let mut distinct = chosen.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == chosen.len() {
            acc.1 += (0..s as u128).map(|k| count.saturating_sub(k)).product::<u128>();
        }
        return;
    }
    if stack[depth - 1].iter().all(|&w| w == 0) {
        return;
    }
    for &y in ys {
        let (head, tail) = stack.split_at_mut(depth);
        and_into(&mut tail[0], &head[depth - 1], g.row(y));
        chosen.push(y);
        recurse(g, ys, stack, chosen, depth + 1, s, t, acc);
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KstReport {
    pub s: u32,
    pub t: u32,
    /// Ordered, possibly degenerate `K_{s,t}` copies.
    pub value: u128,
    /// Same count restricted to distinct vertices within each side.
    pub injective: u128,
    /// `(d/n)^{st} |U1|^s |U2|^t`
    pub expected: f64,
    /// Which side was enumerated: `"t-tuples"` or `"s-tuples"`.
    pub side: String,
}

fn tuple_visits(size: usize, len: u32) -> u128 {
    (size as u128).saturating_pow(len)
}

/// `sum_{y in U2^t} S_y(U1)^s`, evaluated from the cheaper side of the
/// double-counting identity.
pub fn kst_sum(g: &Graph, u1: &VertexSet, u2: &VertexSet, s: u32, t: u32, caps: &Caps) -> Result<KstReport> {
    caps.check_t(s as usize)?;
    caps.check_t(t as usize)?;
    check_universe(g, u1)?;
    check_universe(g, u2)?;
    let ty = tuple_visits(u2.len(), t);
    let sx = tuple_visits(u1.len(), s);
    let (value, injective, side) = if ty <= sx {
        caps.check_tuples(ty)?;
        let (v, i) = tuple_side(g, u1, u2, s, t);
        (v, i, "t-tuples")
    } else {
        caps.check_tuples(sx)?;
        let (v, i) = tuple_side(g, u2, u1, t, s);
        (v, i, "s-tuples")
    };
    let d = g.regular_degree().unwrap_or(0) as f64;
    let density = d / g.n() as f64;
    let expected = density.powi((s * t) as i32) * (u1.len() as f64).powi(s as i32) * (u2.len() as f64).powi(t as i32);
    Ok(KstReport { s, t, value, injective, expected, side: side.into() })
}

/// Both sides of the double-counting identity, each enumerated directly:
/// `(sum_{y in U2^t} S_y(U1)^s, sum_{x in U1^s} S_x(U2)^t)`.
pub fn kst_sides(g: &Graph, u1: &VertexSet, u2: &VertexSet, s: u32, t: u32, caps: &Caps) -> Result<(u128, u128)> {
    caps.check_t(s as usize)?;
    caps.check_t(t as usize)?;
    caps.check_tuples(tuple_visits(u2.len(), t) + tuple_visits(u1.len(), s))?;
    Ok((tuple_side(g, u1, u2, s, t).0, tuple_side(g, u2, u1, t, s).0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K2tReport {
    pub kst: KstReport,
    /// `lambda^4 (n/d)^2 |U2|^(t-2)`
    pub error_scale: f64,
}

pub fn k2t_sum(g: &Graph, cert: &Cert, u1: &VertexSet, u2: &VertexSet, t: u32, caps: &Caps) -> Result<K2tReport> {
    cert.check_graph(g)?;
    let kst = kst_sum(g, u1, u2, 2, t, caps)?;
    let lam2 = cert.lambda_bound.value().powi(2);
    let nd = g.n() as f64 / cert.d_claim.max(1) as f64;
    let error_scale = lam2 * lam2 * nd * nd * (u2.len() as f64).powi(t as i32 - 2);
    Ok(K2tReport { kst, error_scale })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarIndicator {
    pub tuples: u128,
    pub sum_s: u128,
    pub sum_i: u128,
    pub sum_s2: u128,
    /// `(sum S)^2 <= (sum I)(sum S^2)`
    pub cauchy_schwarz: bool,
}

/// For each `y in U2^t`, the number of `x in U1` with `(x, y_i)` colored
/// `r_i` for every `i`.
pub fn colored_star_indicator(
    cg: &ColoredGraph,
    u1: &VertexSet,
    u2: &VertexSet,
    colors: &[u32],
    caps: &Caps,
) -> Result<StarIndicator> {
    let t = colors.len();
    if t == 0 {
        return Err(Error::InvalidParameter("at least one color is required".into()));
    }
    if t > 3 {
        return Err(Error::cap("star colors", t as u128, 3));
    }
    caps.check_tuples(tuple_visits(u2.len(), t as u32))?;
    let classes: Vec<Graph> = colors.iter().map(|&c| cg.color_class(c)).collect::<Result<_>>()?;
    let ys = u2.to_vec();
    let mut totals = StarIndicator { tuples: 0, sum_s: 0, sum_i: 0, sum_s2: 0, cauchy_schwarz: true };
    let words = u1.mask().len();
    let mut stack = vec![vec![0u64; words]; t + 1];
    stack[0].copy_from_slice(u1.mask());
    star_walk(&classes, &ys, &mut stack, 0, &mut totals);
    let lhs = BigInt::from(totals.sum_s) * totals.sum_s;
    let rhs = BigInt::from(totals.sum_i) * totals.sum_s2;
    totals.cauchy_schwarz = lhs <= rhs;
    Ok(totals)
}

fn star_walk(classes: &[Graph], ys: &[usize], stack: &mut [Vec<u64>], depth: usize, acc: &mut StarIndicator) {
    if depth == classes.len() {
        let s = stack[depth].iter().map(|w| w.count_ones() as u128).sum::<u128>();
        acc.tuples += 1;
        acc.sum_s += s;
        acc.sum_s2 += s * s;
        acc.sum_i += (s > 0) as u128;
        return;
    }
    for &y in ys {
        let (head, tail) = stack.split_at_mut(depth + 1);
        and_into(&mut tail[0], &head[depth], classes[depth].row(y));
        star_walk(classes, ys, stack, depth + 1, acc);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub t: usize,
    /// Patterns up to relabeling the clique's vertices.
    pub canonical: usize,
    /// Patterns as functions on the ordered edge slots.
    pub ordered: usize,
    /// `|C|^{C(t,2)}`
    pub ceiling: u128,
}

fn slots(t: usize) -> Vec<(usize, usize)> {
    (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).collect()
}

fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..t).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(t, &mut p, &mut out);
    out.sort();
    out.dedup();
    out
}

fn pack(ids: impl Iterator<Item = u16>) -> u128 {
    ids.fold(0u128, |acc, c| acc << 16 | c as u128)
}

/// Smallest packed slot string over the `t!` relabelings of a pattern given
/// as a `t x t` symmetric color table.
pub(crate) fn canonical_pattern(table: &[u16], t: usize, perms: &[Vec<usize>]) -> u128 {
    let sl = slots(t);
    perms
        .iter()
        .map(|p| pack(sl.iter().map(|&(i, j)| table[p[i] * t + p[j]])))
        .min()
        .expect("at least one permutation")
}

fn unpack(key: u128, t: usize) -> Vec<u16> {
    let sl = slots(t);
    let mut table = vec![NO_COLOR; t * t];
    for (k, &(i, j)) in sl.iter().enumerate() {
        let shift = 16 * (sl.len() - 1 - k);
        let c = (key >> shift) as u16;
        table[i * t + j] = c;
        table[j * t + i] = c;
    }
    table
}

/// Distinct color patterns of `K_t` realized by injective `t`-tuples from `U`
/// whose pairs are all colored.
pub fn kt_color_coverage(cg: &ColoredGraph, u: &VertexSet, t: usize, caps: &Caps) -> Result<CoverageReport> {
    if !(2..=4).contains(&t) {
        return Err(Error::InvalidParameter(format!("clique size {t} outside 2..=4")));
    }
    caps.check_t(t)?;
    caps.check_tuples(tuple_visits(u.len(), t as u32))?;
    let verts = u.to_vec();
    let per_first = |&v0: &usize| -> HashSet<u128> {
        let mut found = HashSet::new();
        let mut chosen = vec![v0];
        clique_walk(cg, &verts, &mut chosen, t, &mut found);
        found
    };
    let ordered: HashSet<u128> = verts.par_iter().map(per_first).reduce(HashSet::new, |mut a, b| {
        a.extend(b);
        a
    });
    let perms = permutations(t);
    let canonical: HashSet<u128> = ordered.iter().map(|&k| canonical_pattern(&unpack(k, t), t, &perms)).collect();
    let pairs = (t * (t - 1) / 2) as u32;
    Ok(CoverageReport {
        t,
        canonical: canonical.len(),
        ordered: ordered.len(),
        ceiling: (cg.palette().len() as u128).saturating_pow(pairs),
    })
}

fn clique_walk(cg: &ColoredGraph, verts: &[usize], chosen: &mut Vec<usize>, t: usize, found: &mut HashSet<u128>) {
    if chosen.len() == t {
        let key = pack(slots(t).into_iter().map(|(i, j)| cg.raw(chosen[i], chosen[j])));
        found.insert(key);
        return;
    }
    'next: for &v in verts {
        for &w in chosen.iter() {
            if w == v || cg.raw(w, v) == NO_COLOR {
                continue 'next;
            }
        }
        chosen.push(v);
        clique_walk(cg, verts, chosen, t, found);
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinnedSet {
    /// Colors on the pairs `{y} x U`.
    pub colors: BTreeSet<u32>,
    /// Whether some `u` in `U` has pair value 0, found by direct evaluation;
    /// `None` when 0 is itself a color or the family has no zero value.
    pub zero_realized: Option<bool>,
}

pub fn pinned_set(cg: &ColoredGraph, y: usize, u: &VertexSet) -> BTreeSet<u32> {
    u.iter().filter_map(|v| cg.color_label(y, v)).collect()
}

/// [`pinned_set`] plus the zero value, which the colored graph cannot see.
pub fn pinned_with_zero(amb: &Ambient, cg: &ColoredGraph, y: usize, u: &VertexSet) -> PinnedSet {
    let colors = pinned_set(cg, y, u);
    let zero_realized = match amb.family() {
        crate::constructions::Family::Sumproduct | crate::constructions::Family::Noneuclidean => None,
        _ => Some(u.iter().any(|v| amb.value(y, v) == 0)),
    };
    PinnedSet { colors, zero_realized }
}
