use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use spectraff::constructions::{AllColors, Ambient, Family, FamilySpec, FormChoice, LambdaSel};
use spectraff::graph::spectrum::{cayley_spectrum, second_eigenvalue, second_eigenvalue_by_power, spectrum};
use spectraff::{Caps, Graph};

fn spec(family: Family, q: u32, dim: u32) -> FamilySpec {
    FamilySpec::new(family, q, dim, LambdaSel::All(AllColors::All)).unwrap()
}

/// Every single-color graph of a handful of small constructions.
fn sample_graphs() -> Vec<(String, Graph)> {
    let caps = Caps::default();
    let mut out = Vec::new();
    let specs = [
        spec(Family::Norm, 3, 2),
        spec(Family::Norm, 5, 2),
        spec(Family::Norm, 3, 3),
        spec(Family::Product, 3, 2),
        spec(Family::Product, 5, 2),
        spec(Family::Product, 3, 3).with_form(FormChoice::Coupled),
        spec(Family::Sumproduct, 3, 1),
        spec(Family::Sumproduct, 3, 2),
        spec(Family::Euclidean, 5, 2).with_form(FormChoice::Coupled),
        spec(Family::Euclidean, 3, 3),
        spec(Family::Noneuclidean, 7, 3),
        spec(Family::Noneuclidean, 5, 4),
    ];
    for s in specs {
        let amb = Ambient::from_spec(&s, &caps).unwrap();
        for l in amb.palette() {
            out.push((format!("{} {} lambda={l}", s.family.name(), s.params()), amb.graph(l).unwrap()));
        }
    }
    out
}

fn oracle(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

fn connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn bipartite(g: &Graph) -> bool {
    let mut side = vec![u8::MAX; g.n()];
    for start in 0..g.n() {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn dense_solver_matches_nalgebra() {
    let caps = Caps::default();
    for (name, g) in sample_graphs() {
        let ours = spectrum::<f64>(&g, &caps).unwrap();
        let want = oracle(&g);
        for (a, b) in ours.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let caps = Caps::default();
    for (name, g) in sample_graphs().into_iter().take(12) {
        let lo = spectrum::<f32>(&g, &caps).unwrap();
        let hi = spectrum::<f64>(&g, &caps).unwrap();
        for (a, b) in lo.iter().zip(&hi) {
            assert!((*a as f64 - b).abs() < 1e-3, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn trace_is_loop_count() {
    let caps = Caps::default();
    for (name, g) in sample_graphs() {
        let s = spectrum::<f64>(&g, &caps).unwrap();
        let sum: f64 = s.iter().sum();
        assert!((sum - g.loop_count() as f64).abs() <= 1e-8 * g.n() as f64, "{name}: {sum} vs {}", g.loop_count());
    }
}

#[test]
fn top_eigenvalue_is_simple_on_connected_nonbipartite_graphs() {
    let caps = Caps::default();
    let mut checked = 0;
    for (name, g) in sample_graphs() {
        let Some(d) = g.regular_degree() else { panic!("{name} is not regular") };
        if !connected(&g) || bipartite(&g) {
            continue;
        }
        let s = spectrum::<f64>(&g, &caps).unwrap();
        assert!((s[0] - d as f64).abs() < 1e-6, "{name}");
        let mult = s.iter().filter(|&&x| (x - d as f64).abs() < 1e-6).count();
        assert_eq!(mult, 1, "{name}");
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} graphs were connected and non-bipartite");
}

#[test]
fn cayley_route_matches_dense() {
    let caps = Caps::default();
    for (q, d) in [(3, 2), (5, 2), (7, 2), (9, 2), (3, 3), (5, 3)] {
        for form in [FormChoice::Identity, FormChoice::Coupled] {
            let s = spec(Family::Euclidean, q, d).with_form(form);
            let amb = Ambient::from_spec(&s, &caps).unwrap();
            for l in amb.palette() {
                let g = amb.graph(l).unwrap();
                let dense = spectrum::<f64>(&g, &caps).unwrap();
                let char_sums = cayley_spectrum(amb.space().unwrap(), &amb.connection_set(l).unwrap());
                for (a, b) in dense.iter().zip(&char_sums) {
                    assert!((a - b).abs() < 1e-6, "{} lambda={l}: {a} vs {b}", s.params());
                }
            }
        }
    }
}

#[test]
fn power_route_agrees_with_dense() {
    let caps = Caps::default();
    for (name, g) in sample_graphs() {
        let dense = second_eigenvalue(&spectrum::<f64>(&g, &caps).unwrap());
        let power = second_eigenvalue_by_power(&g, 3000, 5);
        assert!((dense - power).abs() < 1e-6, "{name}: {dense} vs {power}");
    }
}

#[test]
fn euclidean_hand_instance() {
    let caps = Caps::default();
    let s = FamilySpec::new(Family::Euclidean, 3, 2, LambdaSel::Value(1)).unwrap();
    let amb = Ambient::from_spec(&s, &caps).unwrap();
    let ev = spectrum::<f64>(&amb.graph(1).unwrap(), &caps).unwrap();
    let want = [4.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
    for (a, b) in ev.iter().zip(want) {
        assert!((a - b).abs() < 1e-9);
    }
}
