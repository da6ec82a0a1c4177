pub mod constructions;
pub mod counting;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod field;
pub mod forms;
pub mod graph;
pub mod io;

pub use error::{Error, Result};
pub use exact::LambdaBound;
pub use field::{ExtCtx, ExtElem, FieldCtx, Fq};
pub use forms::{Form, FormKind, VectorSpace};
pub use graph::spectrum::{Scalar, SpectralCert};
pub use graph::{ColoredGraph, Graph, VertexSet};

pub type Real = f64;
pub type Cert = SpectralCert<f64>;
pub type CertF32 = SpectralCert<f32>;

/// Default cap on vertices for dense spectra and graph builders.
pub const MAX_VERTICES: usize = 4096;
/// Default cap on enumerated tuples.
pub const TUPLE_BUDGET: u64 = 100_000_000;
/// Largest tuple length for star, bipartite and coverage counts.
pub const MAX_T: usize = 4;

/// Resource limits. Overrides may only shrink the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_vertices: usize,
    pub tuple_budget: u64,
    pub max_t: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: MAX_VERTICES, tuple_budget: TUPLE_BUDGET, max_t: MAX_T }
    }
}

impl Caps {
    /// Defaults, shrunk by `SPECTRAFF_MAX_VERTICES` when set.
    pub fn from_env() -> Self {
        let caps = Caps::default();
        match std::env::var("SPECTRAFF_MAX_VERTICES").ok().and_then(|v| v.trim().parse().ok()) {
            Some(v) => caps.shrink_vertices(v),
            None => caps,
        }
    }

    pub fn shrink_vertices(mut self, v: usize) -> Self {
        self.max_vertices = self.max_vertices.min(v);
        self
    }

    pub fn shrink_budget(mut self, b: u64) -> Self {
        self.tuple_budget = self.tuple_budget.min(b);
        self
    }

    pub fn check_vertices(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::cap("vertex count", n as u128, self.max_vertices as u128));
        }
        Ok(())
    }

    pub fn check_tuples(&self, visits: u128) -> Result<()> {
        if visits > self.tuple_budget as u128 {
            return Err(Error::cap("tuple visits", visits, self.tuple_budget as u128));
        }
        Ok(())
    }

    pub fn check_t(&self, t: usize) -> Result<()> {
        if t == 0 {
            return Err(Error::InvalidParameter("tuple length must be at least 1".into()));
        }
        if t > self.max_t {
            return Err(Error::cap("tuple length", t as u128, self.max_t as u128));
        }
        Ok(())
    }
}
