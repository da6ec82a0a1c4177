use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{Ambient, Family, FamilySpec};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::Caps;

/// Which pair equation a system imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// `N(X_i + X_j) = l_ij`
    Norm,
    /// `B(a_i, a_j) = l_ij`
    Bilinear,
    /// `Q(x_i - x_j) = l_ij`
    Quadratic,
    /// `a_i + a_j + l_ij = B(b_i, b_j)`
    Sumproduct,
}

impl SystemKind {
    pub fn family(self) -> Family {
        match self {
            SystemKind::Norm => Family::Norm,
            SystemKind::Bilinear => Family::Product,
            SystemKind::Quadratic => Family::Euclidean,
            SystemKind::Sumproduct => Family::Sumproduct,
        }
    }

    pub fn of_family(family: Family) -> Option<Self> {
        match family {
            Family::Norm => Some(SystemKind::Norm),
            Family::Product => Some(SystemKind::Bilinear),
            Family::Euclidean => Some(SystemKind::Quadratic),
            Family::Sumproduct => Some(SystemKind::Sumproduct),
            Family::Noneuclidean => None,
        }
    }
}

/// A system of pair equations on `t` unknowns. `lambdas` lists the values for
/// the pairs `(0,1), (0,2), ..., (t-2,t-1)`; `None` leaves a pair free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub t: usize,
    pub lambdas: Vec<Option<u32>>,
    pub ambient: FamilySpec,
}

pub fn pair_slots(t: usize) -> Vec<(usize, usize)> {
    (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).collect()
}

impl SystemSpec {
    pub fn new(kind: SystemKind, t: usize, lambdas: Vec<Option<u32>>, ambient: FamilySpec) -> Result<Self> {
        let spec = SystemSpec { kind, t, lambdas, ambient };
        spec.validate(&Caps::default())?;
        Ok(spec)
    }

    /// All pairs set to the same value.
    pub fn uniform(kind: SystemKind, t: usize, lambda: u32, ambient: FamilySpec) -> Result<Self> {
        Self::new(kind, t, vec![Some(lambda); t * (t - 1) / 2], ambient)
    }

    pub fn validate(&self, caps: &Caps) -> Result<()> {
        if self.t < 2 {
            return Err(Error::InvalidParameter(format!("system needs at least 2 unknowns, got {}", self.t)));
        }
        caps.check_t(self.t)?;
        let pairs = self.t * (self.t - 1) / 2;
        if self.lambdas.len() != pairs {
            return Err(Error::DimensionMismatch { expected: pairs, got: self.lambdas.len() });
        }
        if self.ambient.family != self.kind.family() {
            return Err(Error::InvalidParameter(format!(
                "system kind needs the {} family, got {}",
                self.kind.family().name(),
                self.ambient.family.name()
            )));
        }
        let q = self.ambient.q();
        if let Some(bad) = self.lambdas.iter().flatten().find(|&&l| l >= q) {
            return Err(Error::InvalidParameter(format!("value {bad} outside F_{q}")));
        }
        Ok(())
    }
}

/// Ordered tuples `(x_0, ..., x_{t-1})` with `x_i` in `sets[i]` satisfying
/// every fixed pair equation. Repeated vertices are allowed.
pub fn solve_count_sets(amb: &Ambient, system: &SystemSpec, sets: &[&VertexSet], caps: &Caps) -> Result<u128> {
    system.validate(caps)?;
    if amb.family() != system.kind.family() {
        return Err(Error::InvalidParameter("ambient does not match the system kind".into()));
    }
    if sets.len() != system.t {
        return Err(Error::DimensionMismatch { expected: system.t, got: sets.len() });
    }
    for s in sets {
        if s.universe() != amb.n() {
            return Err(Error::DimensionMismatch { expected: amb.n(), got: s.universe() });
        }
    }
    let visits = sets.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    caps.check_tuples(visits)?;

    // constraint[j] = fixed (i, value) pairs against earlier unknowns
    let t = system.t;
    let mut constraints: Vec<Vec<(usize, u32)>> = vec![Vec::new(); t];
    for (&(i, j), l) in pair_slots(t).iter().zip(&system.lambdas) {
        if let Some(l) = *l {
            constraints[j].push((i, l));
        }
    }
    let members: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
    let first = &members[0];
    Ok(first
        .par_iter()
        .map(|&x0| {
            let mut chosen = vec![x0];
            extend(amb, &members, &constraints, &mut chosen)
        })
        .sum())
}

/// [`solve_count_sets`] with every unknown drawn from `e`.
pub fn solve_count(amb: &Ambient, system: &SystemSpec, e: &VertexSet, caps: &Caps) -> Result<u128> {
    let sets = vec![e; system.t];
    solve_count_sets(amb, system, &sets, caps)
}

fn extend(amb: &Ambient, members: &[Vec<usize>], constraints: &[Vec<(usize, u32)>], chosen: &mut Vec<usize>) -> u128 {
    let depth = chosen.len();
    if depth == members.len() {
        return 1;
    }
    let mut total = 0;
    for &x in &members[depth] {
        if constraints[depth].iter().all(|&(i, l)| amb.value(chosen[i], x) == l) {
            chosen.push(x);
            total += extend(amb, members, constraints, chosen);
            chosen.pop();
        }
    }
    total
}
