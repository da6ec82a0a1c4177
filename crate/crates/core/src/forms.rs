//! Bilinear and quadratic forms on F_q^d, spheres, and line classes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldDescriptor, Fq, MAX_FIELD_ELEMENTS};

/// Indexed copy of F_q^d. Vector `(x_1, ..., x_d)` has index `sum x_i q^(d-i)`,
/// so `x_1` is the most significant digit.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    ctx: Arc<FieldCtx>,
    dim: usize,
    size: u32,
}

impl VectorSpace {
    pub fn new(ctx: Arc<FieldCtx>, dim: usize) -> Result<Self> {
        Self::with_cap(ctx, dim, MAX_FIELD_ELEMENTS)
    }

    pub fn with_cap(ctx: Arc<FieldCtx>, dim: usize, cap: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        let size = (ctx.q() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::cap("vector space size", size, cap as u128));
        }
        Ok(VectorSpace { ctx, dim, size: size as u32 })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.ctx)
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn vector(&self, mut index: u32) -> Vec<Fq> {
        let q = self.ctx.q();
        let mut v = vec![Fq(0); self.dim];
        for slot in v.iter_mut().rev() {
            *slot = Fq(index % q);
            index /= q;
        }
        v
    }

    pub fn index(&self, x: &[Fq]) -> u32 {
        let q = self.ctx.q();
        x.iter().fold(0, |acc, c| acc * q + c.0)
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec<Fq>> + '_ {
        (0..self.size).map(|i| self.vector(i))
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(Fq, Fq) -> Fq) -> u32 {
        let q = self.ctx.q();
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.dim {
            out += op(Fq(x % q), Fq(y % q)).0 * w;
            w *= q;
            x /= q;
            y /= q;
        }
        out
    }

    pub fn add_index(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| self.ctx.add(x, y))
    }

    pub fn sub_index(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| self.ctx.sub(x, y))
    }

    pub fn neg_index(&self, a: u32) -> u32 {
        self.digitwise(a, 0, |x, _| self.ctx.neg(x))
    }

    pub fn scale_index(&self, c: Fq, a: u32) -> u32 {
        self.digitwise(a, 0, |x, _| self.ctx.mul(c, x))
    }

    pub fn format(&self, x: &[Fq]) -> String {
        let parts: Vec<String> = x.iter().map(|c| self.ctx.format(*c)).collect();
        format!("({})", parts.join(";"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Bilinear,
    Quadratic,
}

/// A nondegenerate form `x^T M y` (bilinear) or `x^T M x` (quadratic).
#[derive(Debug, Clone)]
pub struct Form {
    ctx: Arc<FieldCtx>,
    dim: usize,
    matrix: Vec<Fq>,
    kind: FormKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub field: FieldDescriptor,
    pub dim: usize,
    pub kind: FormKind,
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineType {
    Isotropic,
    SquareType,
    NonsquareType,
}

impl Form {
    pub fn new(ctx: Arc<FieldCtx>, rows: Vec<Vec<Fq>>, kind: FormKind) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("form matrix is empty".into()));
        }
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            if row.iter().any(|c| c.0 >= ctx.q()) {
                return Err(Error::InvalidParameter("matrix entry outside the field".into()));
            }
        }
        let matrix: Vec<Fq> = rows.into_iter().flatten().collect();
        if kind == FormKind::Quadratic {
            for i in 0..dim {
                for j in 0..i {
                    if matrix[i * dim + j] != matrix[j * dim + i] {
                        return Err(Error::AsymmetricQuadratic);
                    }
                }
            }
        }
        if rank(&ctx, dim, matrix.clone()) < dim {
            return Err(Error::DegenerateForm);
        }
        Ok(Form { ctx, dim, matrix, kind })
    }

    /// Matrix entries given as field encodings.
    pub fn from_u32_rows(ctx: Arc<FieldCtx>, rows: &[Vec<u32>], kind: FormKind) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&c| Fq(c)).collect()).collect();
        Form::new(ctx, rows, kind)
    }

    /// Dot product, or sum of squares in quadratic mode.
    pub fn identity(ctx: Arc<FieldCtx>, dim: usize, kind: FormKind) -> Result<Self> {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Fq(1) } else { Fq(0) }).collect())
            .collect();
        Form::new(ctx, rows, kind)
    }

    /// Identity with the leading 2x2 block replaced by `[[1,1],[1,2]]`
    /// (determinant 1 in every odd characteristic).
    pub fn coupled(ctx: Arc<FieldCtx>, dim: usize, kind: FormKind) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("coupled form needs dimension at least 2".into()));
        }
        let two = ctx.from_int(2);
        let mut rows: Vec<Vec<Fq>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Fq(1) } else { Fq(0) }).collect())
            .collect();
        rows[0][1] = Fq(1);
        rows[1][0] = Fq(1);
        rows[1][1] = two;
        Form::new(ctx, rows, kind)
    }

    pub fn from_descriptor(desc: &FormDescriptor) -> Result<Self> {
        let ctx = Arc::new(FieldCtx::new(desc.field.p, desc.field.r)?);
        if desc.dim != desc.matrix.len() {
            return Err(Error::DimensionMismatch { expected: desc.dim, got: desc.matrix.len() });
        }
        Form::from_u32_rows(ctx, &desc.matrix, desc.kind)
    }

    pub fn descriptor(&self) -> FormDescriptor {
        FormDescriptor {
            field: self.ctx.descriptor(),
            dim: self.dim,
            kind: self.kind,
            matrix: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.entry(i, j).0).collect())
                .collect(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.ctx)
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn kind(&self) -> FormKind {
        self.kind
    }
    pub fn entry(&self, i: usize, j: usize) -> Fq {
        self.matrix[i * self.dim + j]
    }

    fn check_len(&self, x: &[Fq]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn bilinear(&self, x: &[Fq], y: &[Fq]) -> Result<Fq> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bilinear_unchecked(x, y))
    }

    pub fn quadratic(&self, x: &[Fq]) -> Result<Fq> {
        self.check_len(x)?;
        Ok(self.bilinear_unchecked(x, x))
    }

    /// `x^T M y` without length checks.
    pub fn bilinear_unchecked(&self, x: &[Fq], y: &[Fq]) -> Fq {
        let f = &*self.ctx;
        let mut acc = Fq(0);
        for (i, &xi) in x.iter().enumerate() {
            if xi.0 == 0 {
                continue;
            }
            let row = &self.matrix[i * self.dim..(i + 1) * self.dim];
            let mut inner = Fq(0);
            for (m, &yj) in row.iter().zip(y) {
                inner = f.add(inner, f.mul(*m, yj));
            }
            acc = f.add(acc, f.mul(xi, inner));
        }
        acc
    }

    /// Values of `Q` on every vector of the space, by index.
    pub fn quadratic_table(&self, space: &VectorSpace) -> Vec<Fq> {
        space.vectors().map(|x| self.bilinear_unchecked(&x, &x)).collect()
    }

    pub fn sphere(&self, radius: Fq) -> Result<Sphere> {
        let space = VectorSpace::new(self.ctx_arc(), self.dim)?;
        self.sphere_in(&space, radius)
    }

    pub fn sphere_in(&self, space: &VectorSpace, radius: Fq) -> Result<Sphere> {
        if space.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: space.dim() });
        }
        let points = (0..space.size())
            .filter(|&i| {
                let x = space.vector(i);
                self.bilinear_unchecked(&x, &x) == radius
            })
            .collect();
        Ok(Sphere { radius, points })
    }

    pub fn classify_line(&self, x: &[Fq]) -> Result<LineType> {
        self.check_len(x)?;
        if x.iter().all(|c| c.0 == 0) {
            return Err(Error::ZeroVector);
        }
        let v = self.bilinear_unchecked(x, x);
        Ok(if v.is_zero() {
            LineType::Isotropic
        } else if self.ctx.is_nonzero_square(v) {
            LineType::SquareType
        } else {
            LineType::NonsquareType
        })
    }

    /// The nonzero multiple of `x` with the smallest index.
    pub fn line_representative(&self, space: &VectorSpace, x: &[Fq]) -> Result<Vec<Fq>> {
        self.check_len(x)?;
        if x.iter().all(|c| c.0 == 0) {
            return Err(Error::ZeroVector);
        }
        let i = space.index(x);
        let best = self.ctx.units().map(|c| space.scale_index(c, i)).min().unwrap();
        Ok(space.vector(best))
    }
}

/// Points of `{x : Q(x) = radius}`, as ascending vector indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphere {
    pub radius: Fq,
    pub points: Vec<u32>,
}

impl Sphere {
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn vectors(&self, space: &VectorSpace) -> Vec<Vec<Fq>> {
        self.points.iter().map(|&i| space.vector(i)).collect()
    }
}

/// Rank by Gaussian elimination over F_q.
pub(crate) fn rank(f: &FieldCtx, n: usize, mut m: Vec<Fq>) -> usize {
    let cols = m.len().checked_div(n).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..n).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        for k in 0..cols {
            m.swap(r * cols + k, pivot * cols + k);
        }
        let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
        for i in 0..n {
            if i == r || m[i * cols + c].is_zero() {
                continue;
            }
            let factor = f.mul(m[i * cols + c], inv);
            for k in c..cols {
                let t = f.mul(factor, m[r * cols + k]);
                m[i * cols + k] = f.sub(m[i * cols + k], t);
            }
        }
        r += 1;
        if r == n {
            break;
        }
    }
    r
}
