use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, ReportRow};
use super::runs::trial_seed;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq};
use crate::Caps;

/// Sizes and exact comparison for one set `A` and dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumProductCheck {
    pub q: u32,
    pub d: u32,
    pub size: u64,
    /// `|A A|`
    pub product_set: u64,
    /// `|d A|`
    pub sum_set: u64,
    /// `|A + A|`
    pub double_sum: u64,
    /// `|A|^{2d-1}`
    pub lhs: BigUint,
    /// `|A|^d |AA|^{d-1} |dA|`
    pub volume: BigUint,
    /// `lhs <= volume / q + sqrt(q^d volume)`
    pub holds: bool,
    pub edges: Option<EdgeCheck>,
}

/// Edges of the sum-product graph on `F_q x F_q^{d-1}` with value 0 between
/// `dA x (AA)^{d-1}` and `(-A) x (1/A)^{d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub edges: u64,
    /// `edges >= |A|^{2d-1}`
    pub lower: bool,
    /// `edges <= |E||F|/q + sqrt(2 q^{d-1} |E||F|)`
    pub upper: bool,
}

fn set_of(q: u32, it: impl IntoIterator<Item = Fq>) -> Vec<bool> {
    let mut mark = vec![false; q as usize];
    for x in it {
        mark[x.index() as usize] = true;
    }
    mark
}

fn members(mark: &[bool]) -> Vec<Fq> {
    mark.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| Fq(i as u32)).collect()
}

/// `lhs * q <= x + q sqrt(c * x)`, exactly.
fn below_affine_root(lhs: &BigUint, q: &BigUint, x: &BigUint, c: &BigUint) -> bool {
    let scaled = lhs * q;
    if &scaled <= x {
        return true;
    }
    let gap = scaled - x;
    &gap * &gap <= q * q * c * x
}

pub fn sumproduct_check(ctx: &FieldCtx, a: &[Fq], d: u32) -> Result<SumProductCheck> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} must be at least 2")));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("set must be nonempty".into()));
    }
    if a.iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroInSet);
    }
    let q = ctx.q();
    let base = members(&set_of(q, a.iter().copied()));
    let products = set_of(q, base.iter().flat_map(|&x| base.iter().map(move |&y| ctx.mul(x, y))));
    let double = set_of(q, base.iter().flat_map(|&x| base.iter().map(move |&y| ctx.add(x, y))));
    let mut sums = set_of(q, base.iter().copied());
    for _ in 1..d {
        let cur = members(&sums);
        sums = set_of(q, cur.iter().flat_map(|&x| base.iter().map(move |&y| ctx.add(x, y))));
    }
    let size = base.len() as u64;
    let product_set = products.iter().filter(|&&m| m).count() as u64;
    let sum_set = sums.iter().filter(|&&m| m).count() as u64;
    let double_sum = double.iter().filter(|&&m| m).count() as u64;
    let big = |x: u64| BigUint::from(x);
    let lhs = big(size).pow(2 * d - 1);
    let volume = big(size).pow(d) * big(product_set).pow(d - 1) * big(sum_set);
    let qd = big(q as u64).pow(d);
    let holds = below_affine_root(&lhs, &big(q as u64), &volume, &qd);
    Ok(SumProductCheck { q, d, size, product_set, sum_set, double_sum, lhs, volume, holds, edges: None })
}

/// Counts the edges behind the inequality when `|F| |AA|^{d-1}` fits the
/// tuple budget.
pub fn sumproduct_edges(ctx: &FieldCtx, a: &[Fq], d: u32, caps: &Caps) -> Result<EdgeCheck> {
    let check = sumproduct_check(ctx, a, d)?;
    let q = ctx.q();
    let base = members(&set_of(q, a.iter().copied()));
    let products = members(&set_of(q, base.iter().flat_map(|&x| base.iter().map(move |&y| ctx.mul(x, y)))));
    let mut sums = set_of(q, base.iter().copied());
    for _ in 1..d {
        let cur = members(&sums);
        sums = set_of(q, cur.iter().flat_map(|&x| base.iter().map(move |&y| ctx.add(x, y))));
    }
    let inverses: Vec<Fq> = base.iter().map(|&x| ctx.inv(x)).collect::<Result<_>>()?;
    let m = (d - 1) as usize;
    let f_size = (base.len() as u128).pow(d);
    caps.check_tuples(f_size.saturating_mul((products.len() as u128).pow(m as u32)))?;

    // (s, p) ~ (c, r) iff s + c = <p, r>; tally <p, r> over p for each r
    let mut edges = 0u64;
    let mut r_idx = vec![0usize; m];
    loop {
        let r: Vec<Fq> = r_idx.iter().map(|&i| inverses[i]).collect();
        let mut tally = vec![0u64; q as usize];
        let mut p_idx = vec![0usize; m];
        loop {
            let dot = p_idx.iter().zip(&r).fold(ctx.zero(), |acc, (&i, &ri)| ctx.add(acc, ctx.mul(products[i], ri)));
            tally[dot.index() as usize] += 1;
            if !advance(&mut p_idx, products.len()) {
                break;
            }
        }
        for &av in &base {
            let c = ctx.neg(av);
            for (dot, &cnt) in tally.iter().enumerate().filter(|(_, &c)| c > 0) {
                let s = ctx.sub(Fq(dot as u32), c);
                if sums[s.index() as usize] {
                    edges += cnt;
                }
            }
        }
        if !advance(&mut r_idx, inverses.len()) {
            break;
        }
    }
    let e_size = BigUint::from(check.sum_set) * BigUint::from(products.len() as u64).pow(m as u32);
    let ef = e_size * BigUint::from(f_size);
    let qb = BigUint::from(q as u64);
    let lower = BigUint::from(edges) >= check.lhs;
    let c = BigUint::from(2u32) * qb.pow(d - 1);
    let upper = below_affine_root(&BigUint::from(edges), &qb, &ef, &c);
    Ok(EdgeCheck { edges, lower, upper })
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < base {
            return true;
        }
        *i = 0;
    }
    false
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

impl SumProductCheck {
    pub fn rows(&self, seed: u64) -> Vec<ReportRow> {
        let params = format!("q={};d={}", self.q, self.d);
        let (q, d, a) = (self.q as f64, self.d as i32, self.size as f64);
        let vol = to_f64(&self.volume);
        let rhs = vol / q + (q.powi(d) * vol).sqrt();
        let mut rows = vec![ReportRow::new("sumproduct", &params, "spe-inequality", seed)
            .size(self.size)
            .values(to_f64(&self.lhs), rhs)
            .bound(rhs)
            .assert(self.holds)
            .note(format!("|AA|={};|dA|={}", self.product_set, self.sum_set))];
        let spread = (self.product_set as f64).powi(d - 1) * self.sum_set as f64;
        let floor = (q * a.powi(d - 1)).min(a.powi(3 * d - 2) / q.powi(d - 1));
        rows.push(ReportRow::new("sumproduct", &params, "spe-min", seed).size(self.size).values(spread, floor));
        let garaev = (q * a).min(a.powi(4) / q);
        rows.push(
            ReportRow::new("sumproduct", &params, "garaev-min", seed)
                .size(self.size)
                .values(self.double_sum as f64 * self.product_set as f64, garaev)
                .note(format!("|A+A|={}", self.double_sum)),
        );
        if let Some(e) = &self.edges {
            rows.push(
                ReportRow::new("sumproduct", &params, "spe-edges-lower", seed)
                    .size(self.size)
                    .values(e.edges as f64, to_f64(&self.lhs))
                    .assert(e.lower),
            );
            let ef = vol;
            let up = ef / q + (2.0 * q.powi(d - 1) * ef).sqrt();
            rows.push(
                ReportRow::new("sumproduct", &params, "spe-edges-upper", seed)
                    .size(self.size)
                    .values(e.edges as f64, up)
                    .bound(up)
                    .assert(e.upper),
            );
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumProductConfig {
    pub q: u32,
    pub d: u32,
    pub sets: usize,
    pub seed: u64,
    /// Also count the graph edges when they fit this many visits.
    #[serde(default)]
    pub edge_budget: u64,
}

/// Random nonempty subsets of `F_q^*`, uniform in size then in content.
pub fn random_subset<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Vec<Fq> {
    let q = ctx.q() as usize;
    let size = rng.gen_range(1..q);
    sample(rng, q - 1, size).into_iter().map(|i| Fq(i as u32 + 1)).collect()
}

pub fn sumproduct_experiment(cfg: &SumProductConfig, caps: &Caps) -> Result<ExperimentReport> {
    let ctx = FieldCtx::with_order(cfg.q)?;
    let mut rep = ExperimentReport::new();
    let edge_caps = caps.shrink_budget(cfg.edge_budget);
    for k in 0..cfg.sets {
        let ts = trial_seed(cfg.seed, k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let a = random_subset(&ctx, &mut rng);
        let mut check = sumproduct_check(&ctx, &a, cfg.d)?;
        if cfg.edge_budget > 0 {
            match sumproduct_edges(&ctx, &a, cfg.d, &edge_caps) {
                Ok(e) => check.edges = Some(e),
                Err(e) if e.is_cap_violation() => {}
                Err(e) => return Err(e),
            }
        }
        for row in check.rows(ts) {
            rep.push(row);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_units() {
        let ctx = FieldCtx::with_order(7).unwrap();
        let a: Vec<Fq> = ctx.units().collect();
        let c = sumproduct_check(&ctx, &a, 2).unwrap();
        assert_eq!((c.size, c.product_set, c.sum_set), (6, 6, 7));
        assert!(c.holds);
        let c3 = sumproduct_check(&ctx, &a, 3).unwrap();
        assert_eq!(c3.sum_set, 7);
        assert!(c3.holds);
    }

    #[test]
    fn singleton_and_errors() {
        let ctx = FieldCtx::with_order(11).unwrap();
        let c = sumproduct_check(&ctx, &[Fq(3)], 2).unwrap();
        assert_eq!((c.product_set, c.sum_set), (1, 1));
        assert_eq!(c.lhs, BigUint::from(1u32));
        assert!(c.holds);
        assert!(matches!(sumproduct_check(&ctx, &[Fq(0), Fq(1)], 2), Err(Error::ZeroInSet)));
        assert!(sumproduct_check(&ctx, &[Fq(1)], 1).is_err());
    }

    #[test]
    fn edges_bracket() {
        let caps = Caps::default();
        let ctx = FieldCtx::with_order(7).unwrap();
        for a in [vec![Fq(1), Fq(2), Fq(4)], vec![Fq(3)], ctx.units().collect()] {
            for d in [2, 3] {
                let e = sumproduct_edges(&ctx, &a, d, &caps).unwrap();
                assert!(e.lower && e.upper, "{a:?} d={d} {e:?}");
            }
        }
    }

    #[test]
    fn edges_match_brute_force() {
        // d = 2: (s, p) ~ (c, r) iff s + c = p r
        let caps = Caps::default();
        let ctx = FieldCtx::with_order(5).unwrap();
        let a = vec![Fq(1), Fq(2)];
        let e = sumproduct_edges(&ctx, &a, 2, &caps).unwrap();
        let mut sums = std::collections::BTreeSet::new();
        let mut prods = std::collections::BTreeSet::new();
        for &x in &a {
            for &y in &a {
                sums.insert(ctx.add(x, y));
                prods.insert(ctx.mul(x, y));
            }
        }
        let mut count = 0;
        for &s in &sums {
            for &p in &prods {
                for &x in &a {
                    for &y in &a {
                        let c = ctx.neg(x);
                        let r = ctx.inv(y).unwrap();
                        count += (ctx.add(s, c) == ctx.mul(p, r)) as u64;
                    }
                }
            }
        }
        assert_eq!(e.edges, count);
    }

    #[test]
    fn experiment_is_reproducible() {
        let caps = Caps::default();
        let cfg = SumProductConfig { q: 11, d: 2, sets: 10, seed: 42, edge_budget: 100_000 };
        let a = sumproduct_experiment(&cfg, &caps).unwrap();
        assert_eq!(a, sumproduct_experiment(&cfg, &caps).unwrap());
        assert!(a.all_satisfied());
        assert!(a.rows_for("spe-edges-lower").count() > 0);
    }
}
