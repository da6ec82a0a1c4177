//! Builders for the five graph families and their colored versions.
//!
//! Every family is described by an [`Ambient`]: a vertex universe plus a
//! pair function `value(u, v)`. Single-color graphs join the pairs whose value
//! equals the chosen color; colored graphs keep every value in the palette.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::LambdaBound;
use crate::field::{ExtCtx, FieldCtx, Fq};
use crate::forms::{Form, FormKind, VectorSpace};
use crate::graph::spectrum::{cayley_spectrum, certify_ndl, certify_with_spectrum};
use crate::graph::{ColoredGraph, Graph, NO_COLOR};
use crate::{Caps, Cert};

/// Largest vertex count certified through a dense eigensolve when a
/// character-sum route is available.
pub const DENSE_LIMIT: usize = 729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Norm,
    Product,
    Sumproduct,
    Euclidean,
    Noneuclidean,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Norm => "norm",
            Family::Product => "product",
            Family::Sumproduct => "sumproduct",
            Family::Euclidean => "euclidean",
            Family::Noneuclidean => "noneuclidean",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm" => Ok(Family::Norm),
            "product" => Ok(Family::Product),
            "sumproduct" => Ok(Family::Sumproduct),
            "euclidean" => Ok(Family::Euclidean),
            "noneuclidean" => Ok(Family::Noneuclidean),
            other => Err(Error::InvalidParameter(format!("unknown family {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormChoice {
    /// Dot product / sum of squares.
    Identity,
    /// Identity with a `[[1,1],[1,2]]` leading block.
    Coupled,
    Matrix(Vec<Vec<u32>>),
}

impl FormChoice {
    pub fn build(&self, ctx: Arc<FieldCtx>, dim: usize, kind: FormKind) -> Result<Form> {
        match self {
            FormChoice::Identity => Form::identity(ctx, dim, kind),
            FormChoice::Coupled => Form::coupled(ctx, dim, kind),
            FormChoice::Matrix(rows) => {
                if rows.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: rows.len() });
                }
                Form::from_u32_rows(ctx, rows, kind)
            }
        }
    }

    pub fn tag(&self) -> String {
        match self {
            FormChoice::Identity => "identity".into(),
            FormChoice::Coupled => "coupled".into(),
            FormChoice::Matrix(rows) => {
                let r: Vec<String> = rows.iter().map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")).collect();
                format!("matrix[{}]", r.join("/"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllColors {
    All,
}

/// Either one color value (a field encoding, or a relation index for the
/// non-Euclidean family) or `"all"` for the colored graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSel {
    Value(u32),
    All(AllColors),
}

/// Parameters of one construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub p: u32,
    #[serde(default = "one")]
    pub r: u32,
    /// Extension degree, norm family only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Dimension for the form-based families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default = "identity_form")]
    pub form: FormChoice,
    pub lambda: LambdaSel,
    /// Strip loops after construction.
    #[serde(default)]
    pub simple: bool,
}

fn one() -> u32 {
    1
}
fn identity_form() -> FormChoice {
    FormChoice::Identity
}

impl FamilySpec {
    pub fn new(family: Family, q: u32, dim: u32, lambda: LambdaSel) -> Result<Self> {
        let (p, r) = crate::field::prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        let (n, d) = match family {
            Family::Norm => (Some(dim), None),
            _ => (None, Some(dim as usize)),
        };
        Ok(FamilySpec { family, p: p as u32, r, n, d, form: FormChoice::Identity, lambda, simple: false })
    }

    pub fn with_form(mut self, form: FormChoice) -> Self {
        self.form = form;
        self
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.r)
    }

    /// Extension degree or dimension, whichever the family uses.
    pub fn dim(&self) -> u32 {
        match self.family {
            Family::Norm => self.n.unwrap_or(0),
            _ => self.d.unwrap_or(0) as u32,
        }
    }

    /// Compact `key=value` summary for report rows and file headers.
    pub fn params(&self) -> String {
        let mut s = format!("q={}", self.q());
        match self.family {
            Family::Norm => s += &format!(";n={}", self.dim()),
            _ => s += &format!(";d={};form={}", self.dim(), self.form.tag()),
        }
        match self.lambda {
            LambdaSel::Value(v) => s += &format!(";lambda={v}"),
            LambdaSel::All(_) => s += ";lambda=all",
        }
        if self.simple {
            s += ";simple";
        }
        s
    }
}

/// The `(n, d, lambda)` triple a family is claimed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub n: usize,
    pub d: u64,
    pub lambda: LambdaBound,
}

#[derive(Debug, Clone)]
enum Kind {
    Norm { ext: ExtCtx, norms: Vec<Fq> },
    Product { space: VectorSpace, form: Form, images: Vec<Vec<Fq>> },
    Sumproduct { space: VectorSpace, form: Form, images: Vec<Vec<Fq>> },
    Euclidean { space: VectorSpace, form: Form, qtable: Vec<Fq> },
    Noneuclidean { space: VectorSpace, form: Form, scheme: Scheme },
}

/// Vertex universe plus pair function of one family.
#[derive(Debug, Clone)]
pub struct Ambient {
    ctx: Arc<FieldCtx>,
    kind: Kind,
    n: usize,
}

/// Relation bookkeeping for the non-Euclidean family.
#[derive(Debug, Clone)]
pub struct Scheme {
    /// Unit-sphere representative of each line, by vertex.
    pub units: Vec<u32>,
    /// Smallest-index multiple of each line, by vertex.
    pub lines: Vec<u32>,
    /// Relation index of each value of `Q(x + y)`, 0 if none.
    pub relation_of_value: Vec<u32>,
    pub relation_count: u32,
    pub odd_dimension: bool,
}

impl Ambient {
    pub fn from_spec(spec: &FamilySpec, caps: &Caps) -> Result<Self> {
        let ctx = Arc::new(FieldCtx::new(spec.p, spec.r)?);
        let dim = |s: &FamilySpec| s.d.ok_or_else(|| Error::InvalidParameter("dimension d is required".into()));
        match spec.family {
            Family::Norm => {
                let n = spec.n.ok_or_else(|| Error::InvalidParameter("extension degree n is required".into()))?;
                Self::norm(ctx, n, caps)
            }
            Family::Product => {
                let d = dim(spec)?;
                let form = spec.form.build(Arc::clone(&ctx), d, FormKind::Bilinear)?;
                Self::product(form, caps)
            }
            Family::Sumproduct => {
                let d = dim(spec)?;
                let form = spec.form.build(Arc::clone(&ctx), d, FormKind::Bilinear)?;
                Self::sumproduct(form, caps)
            }
            Family::Euclidean => {
                let d = dim(spec)?;
                let form = spec.form.build(Arc::clone(&ctx), d, FormKind::Quadratic)?;
                Self::euclidean(form, caps)
            }
            Family::Noneuclidean => {
                let d = dim(spec)?;
                let form = spec.form.build(Arc::clone(&ctx), d, FormKind::Quadratic)?;
                Self::noneuclidean(form, caps)
            }
        }
    }

    pub fn norm(ctx: Arc<FieldCtx>, n: u32, caps: &Caps) -> Result<Self> {
        let ext = ExtCtx::new(Arc::clone(&ctx), n)?;
        caps.check_vertices(ext.size() as usize)?;
        let norms = ext.norm_table();
        let n = ext.size() as usize;
        Ok(Ambient { ctx, kind: Kind::Norm { ext, norms }, n })
    }

    pub fn product(form: Form, caps: &Caps) -> Result<Self> {
        let ctx = form.ctx_arc();
        let space = VectorSpace::new(Arc::clone(&ctx), form.dim())?;
        let n = space.size() as usize - 1;
        caps.check_vertices(n)?;
        let images = (1..space.size()).map(|i| images_of(&form, &space.vector(i))).collect();
        Ok(Ambient { ctx, kind: Kind::Product { space, form, images }, n })
    }

    pub fn sumproduct(form: Form, caps: &Caps) -> Result<Self> {
        let ctx = form.ctx_arc();
        let space = VectorSpace::new(Arc::clone(&ctx), form.dim())?;
        let n = space.size() as u128 * ctx.q() as u128;
        if n > caps.max_vertices as u128 {
            return Err(Error::cap("vertex count", n, caps.max_vertices as u128));
        }
        let images = space.vectors().map(|x| images_of(&form, &x)).collect();
        Ok(Ambient { ctx, kind: Kind::Sumproduct { space, form, images }, n: n as usize })
    }

    pub fn euclidean(form: Form, caps: &Caps) -> Result<Self> {
        let ctx = form.ctx_arc();
        let space = VectorSpace::new(Arc::clone(&ctx), form.dim())?;
        caps.check_vertices(space.size() as usize)?;
        let qtable = form.quadratic_table(&space);
        let n = space.size() as usize;
        Ok(Ambient { ctx, kind: Kind::Euclidean { space, form, qtable }, n })
    }

    pub fn noneuclidean(form: Form, caps: &Caps) -> Result<Self> {
        let ctx = form.ctx_arc();
        let space = VectorSpace::new(Arc::clone(&ctx), form.dim())?;
        let scheme = build_scheme(&form, &space)?;
        caps.check_vertices(scheme.units.len())?;
        let n = scheme.units.len();
        Ok(Ambient { ctx, kind: Kind::Noneuclidean { space, form, scheme }, n })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn family(&self) -> Family {
        match self.kind {
            Kind::Norm { .. } => Family::Norm,
            Kind::Product { .. } => Family::Product,
            Kind::Sumproduct { .. } => Family::Sumproduct,
            Kind::Euclidean { .. } => Family::Euclidean,
            Kind::Noneuclidean { .. } => Family::Noneuclidean,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The form behind a form-based family.
    pub fn form(&self) -> Option<&Form> {
        match &self.kind {
            Kind::Norm { .. } => None,
            Kind::Product { form, .. }
            | Kind::Sumproduct { form, .. }
            | Kind::Euclidean { form, .. }
            | Kind::Noneuclidean { form, .. } => Some(form),
        }
    }

    pub fn ext(&self) -> Option<&ExtCtx> {
        match &self.kind {
            Kind::Norm { ext, .. } => Some(ext),
            _ => None,
        }
    }

    pub fn space(&self) -> Option<&VectorSpace> {
        match &self.kind {
            Kind::Norm { .. } => None,
            Kind::Product { space, .. }
            | Kind::Sumproduct { space, .. }
            | Kind::Euclidean { space, .. }
            | Kind::Noneuclidean { space, .. } => Some(space),
        }
    }

    pub fn scheme(&self) -> Option<&Scheme> {
        match &self.kind {
            Kind::Noneuclidean { scheme, .. } => Some(scheme),
            _ => None,
        }
    }

    /// Pair value: `N(X+Y)`, `B(a,b)`, `B(b,d) - a - c`, `Q(x-y)` as field
    /// encodings, or the relation index (0 on the diagonal) for lines.
    pub fn value(&self, u: usize, v: usize) -> u32 {
        let f = &*self.ctx;
        match &self.kind {
            Kind::Norm { ext, norms } => norms[ext.add(ext.element(u as u32).unwrap(), ext.element(v as u32).unwrap()).index() as usize].index(),
            Kind::Product { space, images, .. } => dot(f, &images[u], &space.vector(v as u32 + 1)).index(),
            Kind::Sumproduct { space, images, .. } => {
                let qd = space.size() as usize;
                let (a, b) = (Fq((u / qd) as u32), u % qd);
                let (c, dv) = (Fq((v / qd) as u32), v % qd);
                let bd = dot(f, &images[b], &space.vector(dv as u32));
                f.sub(f.sub(bd, a), c).index()
            }
            Kind::Euclidean { space, qtable, .. } => qtable[space.sub_index(u as u32, v as u32) as usize].index(),
            Kind::Noneuclidean { space, form, scheme } => {
                if u == v {
                    return 0;
                }
                relation(f, space, form, scheme, u, v).unwrap_or(0)
            }
        }
    }

    /// Colors of the colored graph: `F_q^*` (all of `F_q` for the sum-product
    /// family), or relation indices `2..=(q-1)/2` for lines.
    pub fn palette(&self) -> Vec<u32> {
        let q = self.ctx.q();
        match self.kind {
            Kind::Sumproduct { .. } => (0..q).collect(),
            Kind::Noneuclidean { .. } => (2..=(q - 1) / 2).collect(),
            _ => (1..q).collect(),
        }
    }

    fn check_lambda(&self, lambda: u32) -> Result<()> {
        let q = self.ctx.q();
        match self.kind {
            Kind::Noneuclidean { ref scheme, .. } => {
                if lambda == 0 || lambda > scheme.relation_count {
                    return Err(Error::UnknownColor(lambda));
                }
            }
            Kind::Sumproduct { .. } => {
                if lambda >= q {
                    return Err(Error::InvalidParameter(format!("lambda {lambda} outside F_{q}")));
                }
            }
            _ => {
                if lambda == 0 {
                    return Err(Error::ZeroLambda);
                }
                if lambda >= q {
                    return Err(Error::InvalidParameter(format!("lambda {lambda} outside F_{q}")));
                }
            }
        }
        Ok(())
    }

    /// Whether a pair with value `lambda` is an edge; excludes `x = y` in the
    /// Euclidean family.
    fn joins(&self, u: usize, v: usize, lambda: u32) -> bool {
        if u == v && matches!(self.kind, Kind::Euclidean { .. } | Kind::Noneuclidean { .. }) {
            return false;
        }
        self.value(u, v) == lambda
    }

    /// Single-color graph.
    pub fn graph(&self, lambda: u32) -> Result<Graph> {
        self.check_lambda(lambda)?;
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u..self.n {
                if self.joins(u, v, lambda) {
                    g.add_edge(u, v);
                }
            }
        }
        Ok(g.with_labels(self.labels()))
    }

    /// Colored graph over [`Ambient::palette`]; loops keep their color.
    pub fn colored(&self) -> ColoredGraph {
        let palette = self.palette();
        let mut id_of = vec![NO_COLOR; self.ctx.q() as usize + 1];
        for (i, &c) in palette.iter().enumerate() {
            id_of[c as usize] = i as u16;
        }
        let mut cg = ColoredGraph::new(self.n, palette);
        for u in 0..self.n {
            for v in u..self.n {
                if u == v && matches!(self.kind, Kind::Euclidean { .. } | Kind::Noneuclidean { .. }) {
                    continue;
                }
                let id = id_of[self.value(u, v) as usize];
                if id != NO_COLOR {
                    cg.set(u, v, id);
                }
            }
        }
        cg.with_labels(self.labels())
    }

    /// The complete relation coloring of a non-Euclidean universe.
    pub fn scheme_graph(&self) -> Result<ColoredGraph> {
        let Kind::Noneuclidean { space, form, scheme } = &self.kind else {
            return Err(Error::InvalidParameter("not a non-Euclidean universe".into()));
        };
        let mut cg = ColoredGraph::new(self.n, (1..=scheme.relation_count).collect());
        for u in 0..self.n {
            for v in u + 1..self.n {
                let r = relation(&self.ctx, space, form, scheme, u, v)?;
                cg.set(u, v, (r - 1) as u16);
            }
        }
        Ok(cg.with_labels(self.labels()))
    }

    pub fn label(&self, v: usize) -> String {
        let f = &*self.ctx;
        match &self.kind {
            Kind::Norm { ext, .. } => format!("[{}]", ext.format(ext.element(v as u32).unwrap())),
            Kind::Product { space, .. } => space.format(&space.vector(v as u32 + 1)),
            Kind::Sumproduct { space, .. } => {
                let qd = space.size() as usize;
                format!("{}|{}", f.format(Fq((v / qd) as u32)), space.format(&space.vector((v % qd) as u32)))
            }
            Kind::Euclidean { space, .. } => space.format(&space.vector(v as u32)),
            Kind::Noneuclidean { space, scheme, .. } => space.format(&space.vector(scheme.lines[v])),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.n).map(|v| self.label(v)).collect()
    }

    /// Claimed triple for the single-color graph. The non-Euclidean degree is
    /// the measured common degree of the class, since only its leading order
    /// is claimed.
    pub fn claim(&self, lambda: u32) -> Result<Claim> {
        self.check_lambda(lambda)?;
        let q = self.ctx.q() as u64;
        let n = self.n;
        Ok(match &self.kind {
            Kind::Norm { ext, .. } => {
                let qn = ext.size() as u64;
                Claim { n, d: (qn - 1) / (q - 1), lambda: LambdaBound::from_square(qn) }
            }
            Kind::Product { form, .. } => {
                let top = q.pow(form.dim() as u32 - 1);
                Claim { n, d: top, lambda: LambdaBound::from_square(2 * top) }
            }
            Kind::Sumproduct { form, .. } => {
                let qd = q.pow(form.dim() as u32);
                Claim { n, d: qd, lambda: LambdaBound::from_square(2 * qd) }
            }
            Kind::Euclidean { form, qtable, .. } => {
                let deg = qtable.iter().skip(1).filter(|c| c.index() == lambda).count() as u64;
                Claim { n, d: deg, lambda: LambdaBound::from_square(4 * q.pow(form.dim() as u32 - 1)) }
            }
            Kind::Noneuclidean { form, .. } => {
                let g = self.graph(lambda)?;
                let deg = g.degree(0) as u64;
                Claim { n, d: deg, lambda: LambdaBound::new(25 * q.pow(form.dim() as u32 - 2), 4) }
            }
        })
    }

    /// Connection set of a Euclidean class, as vector indices.
    pub fn connection_set(&self, lambda: u32) -> Option<Vec<u32>> {
        match &self.kind {
            Kind::Euclidean { qtable, .. } => {
                Some((1..qtable.len() as u32).filter(|&i| qtable[i as usize].index() == lambda).collect())
            }
            _ => None,
        }
    }

    /// Builds the single-color graph and certifies it against its claim.
    /// Euclidean graphs above [`DENSE_LIMIT`] vertices use the character-sum
    /// spectrum of their Cayley structure.
    pub fn certify(&self, lambda: u32, caps: &Caps) -> Result<(Graph, Claim, Cert)> {
        let g = self.graph(lambda)?;
        let claim = self.claim(lambda)?;
        let cert = self.certify_graph(&g, lambda, claim.lambda, caps)?;
        Ok((g, claim, cert))
    }

    pub fn certify_graph(&self, g: &Graph, lambda: u32, bound: LambdaBound, caps: &Caps) -> Result<Cert> {
        let claim = self.claim(lambda)?;
        match (&self.kind, self.connection_set(lambda)) {
            (Kind::Euclidean { space, .. }, Some(conn)) if g.n() > DENSE_LIMIT => {
                caps.check_vertices(g.n())?;
                let spec = cayley_spectrum(space, &conn);
                Ok(certify_with_spectrum(g, claim.d, bound, &spec))
            }
            _ => certify_ndl::<f64>(g, claim.d, bound, caps),
        }
    }
}

fn dot(f: &FieldCtx, x: &[Fq], y: &[Fq]) -> Fq {
    x.iter().zip(y).fold(Fq(0), |acc, (a, b)| f.add(acc, f.mul(*a, *b)))
}

/// Row vector `x^T M`, so that `B(x, y) = dot(x^T M, y)`.
fn images_of(form: &Form, x: &[Fq]) -> Vec<Fq> {
    let f = form.ctx();
    (0..form.dim())
        .map(|j| (0..form.dim()).fold(Fq(0), |acc, i| f.add(acc, f.mul(x[i], form.entry(i, j)))))
        .collect()
}

fn build_scheme(form: &Form, space: &VectorSpace) -> Result<Scheme> {
    let f = form.ctx();
    let q = f.q();
    let table = form.quadratic_table(space);
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for i in 0..space.size() {
        if table[i as usize] != f.one() {
            continue;
        }
        let neg = space.neg_index(i);
        if i < neg {
            let line = f.units().map(|c| space.scale_index(c, i)).min().unwrap();
            pairs.push((line, i));
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptySphere);
    }
    pairs.sort_unstable();
    let (lines, units) = pairs.into_iter().unzip();

    let odd_dimension = form.dim() % 2 == 1;
    let top = q.div_ceil(2);
    let two = f.from_int(2);
    let mut relation_of_value = vec![0u32; q as usize];
    let mut assign = |value: Fq, idx: u32| -> Result<()> {
        let slot = &mut relation_of_value[value.index() as usize];
        if *slot != 0 && *slot != idx {
            return Err(Error::AmbiguousRelation(*slot as usize, idx as usize));
        }
        *slot = idx;
        Ok(())
    };
    assign(two, top)?;
    if odd_dimension {
        assign(f.zero(), 1)?;
        for i in 2..=(q - 1) / 2 {
            let gamma = f.mul(two, f.nu_pow(-(i as i64 - 1)));
            assign(f.add(two, gamma), i)?;
        }
    } else {
        let half = f.inv(two)?;
        for i in 1..=(q - 1) / 2 {
            let gamma = f.mul(half, f.nu_pow(i as i64));
            assign(f.add(two, gamma), i)?;
        }
    }
    Ok(Scheme { units, lines, relation_of_value, relation_count: top, odd_dimension })
}

/// Relation of two distinct lines from the unordered pair `{Q(x+y), Q(x-y)}`.
fn relation(f: &FieldCtx, space: &VectorSpace, form: &Form, scheme: &Scheme, u: usize, v: usize) -> Result<u32> {
    let (x, y) = (space.vector(scheme.units[u]), space.vector(scheme.units[v]));
    let plus: Vec<Fq> = x.iter().zip(&y).map(|(a, b)| f.add(*a, *b)).collect();
    let minus: Vec<Fq> = x.iter().zip(&y).map(|(a, b)| f.sub(*a, *b)).collect();
    let rp = scheme.relation_of_value[form.bilinear_unchecked(&plus, &plus).index() as usize];
    let rm = scheme.relation_of_value[form.bilinear_unchecked(&minus, &minus).index() as usize];
    match (rp, rm) {
        (0, 0) => Err(Error::AmbiguousRelation(u, v)),
        (a, 0) | (0, a) => Ok(a),
        (a, b) if a == b => Ok(a),
        _ => Err(Error::AmbiguousRelation(u, v)),
    }
}

/// `a ~ b` iff `b = c a` for some scalar `c` other than 0 and 1, on the
/// nonzero vectors indexed as in the product family.
pub fn dependency_graph(space: &VectorSpace) -> Graph {
    let f = space.ctx();
    let n = space.size() as usize - 1;
    let mut g = Graph::new(n);
    for a in 1..space.size() {
        for c in f.units().filter(|&c| c != f.one()) {
            let b = space.scale_index(c, a);
            g.add_edge(a as usize - 1, b as usize - 1);
        }
    }
    g
}

/// `(a, b) ~ (c, d)` iff `b = d` and `a != c`, on the sum-product universe.
pub fn same_direction_graph(space: &VectorSpace) -> Graph {
    let q = space.ctx().q() as usize;
    let qd = space.size() as usize;
    let mut g = Graph::new(q * qd);
    for b in 0..qd {
        for a in 0..q {
            for c in a + 1..q {
                g.add_edge(a * qd + b, c * qd + b);
            }
        }
    }
    g
}

pub fn norm_graph(q: u32, n: u32, lambda: u32, caps: &Caps) -> Result<Graph> {
    let ctx = Arc::new(FieldCtx::with_order(q)?);
    Ambient::norm(ctx, n, caps)?.graph(lambda)
}

pub fn product_graph(form: Form, lambda: u32, caps: &Caps) -> Result<Graph> {
    Ambient::product(form, caps)?.graph(lambda)
}

pub fn sumproduct_graph(form: Form, lambda: u32, caps: &Caps) -> Result<Graph> {
    Ambient::sumproduct(form, caps)?.graph(lambda)
}

pub fn euclidean_graph(form: Form, lambda: u32, caps: &Caps) -> Result<Graph> {
    Ambient::euclidean(form, caps)?.graph(lambda)
}

/// All relations on the lines through the unit sphere.
pub fn noneuclidean_scheme(form: Form, caps: &Caps) -> Result<ColoredGraph> {
    Ambient::noneuclidean(form, caps)?.scheme_graph()
}

/// Colored graph of a family; the `lambda` field of the `FamilySpec` is ignored.
pub fn colored_family(spec: &FamilySpec, caps: &Caps) -> Result<ColoredGraph> {
    Ok(Ambient::from_spec(spec, caps)?.colored())
}

/// The graph a spec describes: one color class, loops stripped on request.
pub fn build(spec: &FamilySpec, caps: &Caps) -> Result<Graph> {
    let LambdaSel::Value(lambda) = spec.lambda else {
        return Err(Error::InvalidParameter("a single lambda value is required".into()));
    };
    let g = Ambient::from_spec(spec, caps)?.graph(lambda)?;
    Ok(if spec.simple { g.without_loops() } else { g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::with_order(q).unwrap())
    }

    #[test]
    fn norm_graph_small() {
        let caps = Caps::default();
        let amb = Ambient::norm(ctx(3), 2, &caps).unwrap();
        let g = amb.graph(1).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.regular_degree(), Some(4));
        let loops: Vec<String> = g.loops().into_iter().map(|v| amb.label(v)).collect();
        // 2X in {1, 2, t, 2t}: X in {2, 1, 2t, t}
        assert_eq!(loops, vec!["[1,0]", "[2,0]", "[0,1]", "[0,2]"]);
        assert!(g.is_symmetric());
        assert!(matches!(amb.graph(0), Err(Error::ZeroLambda)));
    }

    #[test]
    fn product_graph_small() {
        let caps = Caps::default();
        let form = Form::identity(ctx(3), 2, FormKind::Bilinear).unwrap();
        let amb = Ambient::product(form, &caps).unwrap();
        let g = amb.graph(1).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.regular_degree(), Some(3));
        // vertex (1,0) has index 3, vertex id 2
        let nb: Vec<String> = g.neighbors(2).map(|v| amb.label(v)).collect();
        assert_eq!(nb, vec!["(1;0)", "(1;1)", "(1;2)"]);
    }

    #[test]
    fn sumproduct_graph_small() {
        let caps = Caps::default();
        let form = Form::identity(ctx(3), 1, FormKind::Bilinear).unwrap();
        let amb = Ambient::sumproduct(form, &caps).unwrap();
        let g = amb.graph(0).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.regular_degree(), Some(3));
        let nb: Vec<String> = g.neighbors(0).map(|v| amb.label(v)).collect();
        // a = b = 0 forces c = 0 with d free
        assert_eq!(nb, vec!["0|(0)", "0|(1)", "0|(2)"]);
    }

    #[test]
    fn euclidean_graph_small() {
        let caps = Caps::default();
        let form = Form::identity(ctx(3), 2, FormKind::Quadratic).unwrap();
        let amb = Ambient::euclidean(form, &caps).unwrap();
        let g = amb.graph(1).unwrap();
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(g.loop_count(), 0);
        assert_eq!(g.edge_total(), 18);
        assert_eq!(amb.claim(1).unwrap().d, 4);
    }

    #[test]
    fn colored_classes_match_single_builds() {
        let caps = Caps::default();
        for spec in [
            FamilySpec::new(Family::Norm, 3, 2, LambdaSel::All(AllColors::All)).unwrap(),
            FamilySpec::new(Family::Product, 3, 2, LambdaSel::All(AllColors::All)).unwrap(),
            FamilySpec::new(Family::Sumproduct, 3, 1, LambdaSel::All(AllColors::All)).unwrap(),
            FamilySpec::new(Family::Euclidean, 5, 2, LambdaSel::All(AllColors::All)).unwrap(),
        ] {
            let amb = Ambient::from_spec(&spec, &caps).unwrap();
            let cg = amb.colored();
            let mut total = 0;
            for &c in cg.palette() {
                let class = cg.color_class(c).unwrap();
                assert_eq!(class, amb.graph(c).unwrap(), "{}", spec.params());
                total += class.edge_total();
            }
            assert_eq!(total, cg.colored_pairs());
        }
    }

    #[test]
    fn scheme_over_f5_cube() {
        let caps = Caps::default();
        let form = Form::identity(ctx(5), 3, FormKind::Quadratic).unwrap();
        let sphere = form.sphere(Fq(1)).unwrap().len();
        assert!(sphere == 20 || sphere == 30);
        let amb = Ambient::noneuclidean(form.clone(), &caps).unwrap();
        assert_eq!(amb.n() * 2, sphere);
        let scheme = noneuclidean_scheme(form, &caps).unwrap();
        assert_eq!(scheme.palette(), &[1, 2, 3]);
        let n = scheme.n();
        assert_eq!(scheme.colored_pairs(), n * (n - 1) / 2);
        assert_eq!(amb.colored().palette(), &[2]);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = FamilySpec::new(Family::Euclidean, 9, 2, LambdaSel::Value(3)).unwrap().with_form(FormChoice::Coupled);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FamilySpec>(&text).unwrap(), spec);
        let all: FamilySpec = serde_json::from_str(r#"{"family":"norm","p":3,"n":2,"lambda":"all"}"#).unwrap();
        assert_eq!(all.lambda, LambdaSel::All(AllColors::All));
        assert_eq!(all.r, 1);
    }
}
