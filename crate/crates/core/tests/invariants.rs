use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectraff::constructions::{AllColors, Ambient, Family, FamilySpec, LambdaSel};
use spectraff::counting::{
    colored_star_indicator, degree_variance, edge_count, kst_sides, kt_color_coverage, mixing_check, path2_check,
    path2_count, pinned_set, star_sum,
};
use spectraff::experiments::{solve_count_sets, sumproduct_check, SystemKind, SystemSpec};
use spectraff::{Caps, Cert, ColoredGraph, FieldCtx, Fq, Graph, VertexSet};

struct Point {
    amb: Ambient,
    cg: ColoredGraph,
    single: Vec<(u32, Graph, Cert)>,
}

fn points() -> &'static [Point] {
    static CELL: OnceLock<Vec<Point>> = OnceLock::new();
    CELL.get_or_init(|| {
        let caps = Caps::default();
        [(Family::Norm, 5, 2), (Family::Product, 5, 2), (Family::Sumproduct, 3, 2), (Family::Euclidean, 7, 2), (Family::Euclidean, 3, 3)]
            .into_iter()
            .map(|(family, q, dim)| {
                let spec = FamilySpec::new(family, q, dim, LambdaSel::All(AllColors::All)).unwrap();
                let amb = Ambient::from_spec(&spec, &caps).unwrap();
                let cg = amb.colored();
                let single = amb
                    .palette()
                    .into_iter()
                    .map(|l| {
                        let (g, _, cert) = amb.certify(l, &caps).unwrap();
                        (l, g, cert)
                    })
                    .collect();
                Point { amb, cg, single }
            })
            .collect()
    })
}

fn subset(n: usize, size: usize, seed: u64) -> VertexSet {
    VertexSet::random(n, size.min(n), &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn certified_graphs_mix(which in 0usize..5, color in 0usize..8, sb in 0usize..40, sc in 0usize..40, seed: u64) {
        let p = &points()[which];
        let (_, g, cert) = &p.single[color % p.single.len()];
        prop_assert!(cert.satisfied);
        let b = subset(g.n(), sb, seed);
        let c = subset(g.n(), sc, seed ^ 0x9e37);
        prop_assert!(mixing_check(g, cert, &b, &c).unwrap().satisfied);
        prop_assert!(degree_variance(g, cert, &b).unwrap().satisfied);
        prop_assert!(path2_check(g, cert, &b, &c).unwrap().satisfied);
    }

    #[test]
    fn star_sums_reduce(which in 0usize..5, sb in 0usize..30, sc in 0usize..30, seed: u64) {
        let p = &points()[which];
        let (_, g, _) = &p.single[0];
        let b = subset(g.n(), sb, seed);
        let c = subset(g.n(), sc, seed.wrapping_add(1));
        prop_assert_eq!(star_sum(g, &b, &c, 1), edge_count(g, &b, &c) as u128);
        prop_assert_eq!(star_sum(g, &b, &c, 2), path2_count(g, &b, &c) as u128);
    }

    #[test]
    fn double_counting(which in 0usize..5, s in 1u32..=3, t in 1u32..=3, seed: u64) {
        let p = &points()[which];
        let (_, g, _) = &p.single[p.single.len() - 1];
        let u1 = subset(g.n(), 8, seed);
        let u2 = subset(g.n(), 9, !seed);
        let (lhs, rhs) = kst_sides(g, &u1, &u2, s, t, &Caps::default()).unwrap();
        prop_assert_eq!(lhs, rhs);
        if s == 1 {
            prop_assert_eq!(lhs, star_sum(g, &u1, &u2, t));
        }
    }

    #[test]
    fn star_indicator_cauchy_schwarz(which in 0usize..5, picks in proptest::collection::vec(0usize..8, 1..=3), seed: u64) {
        let p = &points()[which];
        let palette = p.cg.palette();
        let colors: Vec<u32> = picks.iter().map(|&i| palette[i % palette.len()]).collect();
        let u1 = subset(p.cg.n(), 12, seed);
        let u2 = subset(p.cg.n(), 7, seed.rotate_left(7));
        let r = colored_star_indicator(&p.cg, &u1, &u2, &colors, &Caps::default()).unwrap();
        prop_assert!(r.cauchy_schwarz);
        prop_assert!(r.sum_i <= r.tuples);
        prop_assert!(r.sum_s.pow(2) <= r.sum_i * r.sum_s2);
    }

    #[test]
    fn coverage_is_bounded_and_monotone(which in 0usize..5, small in 2usize..8, extra in 0usize..8, t in 2usize..=3, seed: u64) {
        let p = &points()[which];
        let caps = Caps::default();
        let big = subset(p.cg.n(), small + extra, seed);
        let members = big.to_vec();
        let inner = VertexSet::from_indices(p.cg.n(), members.iter().copied().take(small));
        let a = kt_color_coverage(&p.cg, &inner, t, &caps).unwrap();
        let b = kt_color_coverage(&p.cg, &big, t, &caps).unwrap();
        prop_assert!(a.ordered as u128 <= a.ceiling);
        prop_assert!(a.canonical <= a.ordered);
        prop_assert!(a.ordered <= b.ordered);
        prop_assert!(a.canonical <= b.canonical);
        for y in inner.iter() {
            prop_assert!(pinned_set(&p.cg, y, &inner).is_subset(&pinned_set(&p.cg, y, &big)));
        }
    }

    #[test]
    fn pair_systems_count_edges(which in 0usize..5, color in 0usize..8, sa in 0usize..20, sb in 0usize..20, seed: u64) {
        let p = &points()[which];
        let (l, g, _) = &p.single[color % p.single.len()];
        let kind = SystemKind::of_family(p.amb.family()).unwrap();
        let spec = FamilySpec::new(p.amb.family(), p.amb.ctx().q(), spec_dim(&p.amb), LambdaSel::Value(*l)).unwrap();
        let sys = SystemSpec::uniform(kind, 2, *l, spec).unwrap();
        let a = subset(g.n(), sa, seed);
        let b = subset(g.n(), sb, seed ^ 1);
        let count = solve_count_sets(&p.amb, &sys, &[&a, &b], &Caps::default()).unwrap();
        prop_assert_eq!(count, edge_count(g, &a, &b) as u128);
    }

    #[test]
    fn sumproduct_inequality_holds(q in prop::sample::select(vec![5u32, 7, 11, 13, 101]), d in 2u32..=4, bits: u128) {
        let ctx = FieldCtx::with_order(q).unwrap();
        let units: Vec<Fq> = ctx.units().collect();
        let mut a: Vec<Fq> = units.iter().enumerate().filter(|(i, _)| bits >> (i % 128) & 1 == 1).map(|(_, &x)| x).collect();
        if a.is_empty() {
            a.push(ctx.one());
        }
        prop_assert!(sumproduct_check(&ctx, &a, d).unwrap().holds);
    }
}

fn spec_dim(amb: &Ambient) -> u32 {
    match amb.family() {
        Family::Norm => amb.ext().unwrap().n(),
        _ => amb.form().unwrap().dim() as u32,
    }
}
