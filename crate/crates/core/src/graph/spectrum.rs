//! Adjacency spectra and (n, d, lambda) certificates.
//!
//! Dense symmetric eigenvalues come from Householder tridiagonalization
//! followed by implicit QL, generic over the float type. Two further routes
//! serve large or structured inputs: power iteration on `A^2` with the
//! all-ones direction removed, and the character sum for Cayley graphs on
//! `(F_q^d, +)`.

use std::fmt::{Debug, Display};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::exact::LambdaBound;
use crate::forms::VectorSpace;
use crate::Caps;

pub trait Scalar: num_traits::Float + num_traits::FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Absolute slack for eigenvalue comparisons.
    fn default_tol() -> Self;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite")
    }
}

impl Scalar for f64 {
    fn default_tol() -> Self {
        1e-6
    }
}

impl Scalar for f32 {
    fn default_tol() -> Self {
        1e-3
    }
}

/// Eigenvalues of a symmetric row-major `n x n` matrix, descending.
pub fn symmetric_eigenvalues<T: Scalar>(mut a: Vec<T>, n: usize) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut a, n, &mut d, &mut e);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    d
}

fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize, d: &mut [T], e: &mut [T]) {
    let two = T::one() + T::one();
    for i in (1..n).rev() {
        let l = i - 1;
        if l > 0 {
            let mut h = T::zero();
            let scale = (0..=l).fold(T::zero(), |s, k| s + a[i * n + k].abs());
            if scale == T::zero() {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] = a[i * n + k] / scale;
                    h = h + a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[i * n + l] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g = g + a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g = g + a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[i * n + j];
                }
                let hh = f / (h * two);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] = a[j * n + k] - (f * e[k] + g * a[i * n + k]);
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    e[0] = T::zero();
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

fn tridiagonal_ql<T: Scalar>(d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let two = T::one() + T::one();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let norm = (0..n).fold(T::zero(), |acc, i| acc.max(d[i].abs() + e[i].abs()));
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = (d[m].abs() + d[m + 1].abs()).max(norm);
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 200, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

/// Full adjacency spectrum, descending.
pub fn spectrum<T: Scalar>(g: &Graph, caps: &Caps) -> Result<Vec<T>> {
    caps.check_vertices(g.n())?;
    Ok(symmetric_eigenvalues(g.dense::<T>(), g.n()))
}

/// `max(lambda_2, -lambda_n)` of a descending spectrum.
pub fn second_eigenvalue<T: Scalar>(spec: &[T]) -> T {
    match spec.len() {
        0 | 1 => T::zero(),
        n => spec[1].max(-spec[n - 1]),
    }
}

/// Largest magnitude on the complement of the all-ones vector, by power
/// iteration on `A^2`. Meaningful for regular graphs, where that complement
/// is invariant.
pub fn second_eigenvalue_by_power(g: &Graph, iterations: usize, seed: u64) -> f64 {
    let n = g.n();
    if n < 2 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let project = |v: &mut Vec<f64>| {
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|a| *a -= mean);
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
        }
    };
    let apply = |v: &[f64]| -> Vec<f64> { (0..n).map(|u| g.neighbors(u).map(|w| v[w]).sum()).collect() };
    project(&mut x);
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let mut y = apply(&apply(&x));
        estimate = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        project(&mut y);
        x = y;
    }
    estimate.max(0.0).sqrt()
}

/// Spectrum of the Cayley graph on `(F_q^d, +)` with a symmetric connection
/// set, descending. The eigenvalue at `a` is `sum_s cos(2 pi Tr(a.s) / p)`.
pub fn cayley_spectrum(space: &VectorSpace, connection: &[u32]) -> Vec<f64> {
    let f = space.ctx();
    let p = f.p();
    let trace: Vec<u32> = f.elements().map(|c| f.trace_to_prime(c)).collect();
    let cosines: Vec<f64> = (0..p).map(|k| (2.0 * std::f64::consts::PI * k as f64 / p as f64).cos()).collect();
    let conn: Vec<_> = connection.iter().map(|&s| space.vector(s)).collect();
    let mut out: Vec<f64> = space
        .vectors()
        .map(|a| {
            conn.iter()
                .map(|s| {
                    let dot = a.iter().zip(s).fold(f.zero(), |acc, (x, y)| f.add(acc, f.mul(*x, *y)));
                    cosines[trace[dot.index() as usize] as usize]
                })
                .sum()
        })
        .collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}

/// Certified `(n, d, lambda)` triple for one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCert<T> {
    pub n: usize,
    pub d_claim: u64,
    pub lambda_claim: T,
    pub lambda_bound: LambdaBound,
    pub lambda_measured: T,
    pub top_eigenvalue: T,
    pub regular: bool,
    pub satisfied: bool,
    pub fingerprint: u64,
}

impl<T: Scalar> SpectralCert<T> {
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() || self.fingerprint != g.fingerprint() {
            return Err(Error::StaleCert);
        }
        Ok(())
    }
}

/// Certificate from a dense eigensolve.
pub fn certify_ndl<T: Scalar>(g: &Graph, d_claim: u64, claim: LambdaBound, caps: &Caps) -> Result<SpectralCert<T>> {
    let spec = spectrum::<T>(g, caps)?;
    Ok(certify_with_spectrum(g, d_claim, claim, &spec))
}

/// Certificate from a precomputed descending spectrum.
pub fn certify_with_spectrum<T: Scalar>(g: &Graph, d_claim: u64, claim: LambdaBound, spec: &[T]) -> SpectralCert<T> {
    let tol = T::default_tol();
    let regular = g.regular_degree() == Some(d_claim as usize);
    let top = spec.first().copied().unwrap_or(T::zero());
    let measured = second_eigenvalue(spec);
    let lambda_claim = T::of(claim.value());
    let top_ok = (top - T::of(d_claim as f64)).abs() <= tol;
    SpectralCert {
        n: g.n(),
        d_claim,
        lambda_claim,
        lambda_bound: claim,
        lambda_measured: measured,
        top_eigenvalue: top,
        regular,
        satisfied: regular && top_ok && measured <= lambda_claim + tol,
        fingerprint: g.fingerprint(),
    }
}
