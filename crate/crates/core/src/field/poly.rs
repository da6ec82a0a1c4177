//! Dense univariate polynomials over a small finite coefficient field.
//!
//! Coefficients are stored low degree first. Only what table construction and
//! modulus search need lives here: multiplication modulo a monic polynomial,
//! remainder, and an irreducibility test by exhaustive trial division.

/// Coefficient arithmetic used by the polynomial routines.
pub(crate) trait Coeffs {
    type E: Copy + Eq + std::fmt::Debug;

    fn order(&self) -> u32;
    fn elem(&self, index: u32) -> Self::E;
    fn zero(&self) -> Self::E {
        self.elem(0)
    }
    fn one(&self) -> Self::E {
        self.elem(1)
    }
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
}

/// Plain residues mod p.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Residues {
    pub p: u32,
}

impl Coeffs for Residues {
    type E = u32;

    fn order(&self) -> u32 {
        self.p
    }
    fn elem(&self, index: u32) -> u32 {
        index
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

fn trim<C: Coeffs>(c: &C, f: &mut Vec<C::E>) {
    while f.len() > 1 && *f.last().unwrap() == c.zero() {
        f.pop();
    }
}

/// Remainder of `f` modulo the monic polynomial `m`.
pub(crate) fn rem_monic<C: Coeffs>(c: &C, f: &[C::E], m: &[C::E]) -> Vec<C::E> {
    let dm = m.len() - 1;
    let mut r = f.to_vec();
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != c.zero() {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = c.sub(r[shift + i], c.mul(lead, mi));
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(c.zero());
    }
    r
}

pub(crate) fn mul<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E]) -> Vec<C::E> {
    let mut out = vec![c.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == c.zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = c.add(out[i + j], c.mul(x, y));
        }
    }
    trim(c, &mut out);
    out
}

/// `a * b mod m`, result padded to exactly `deg m` coefficients.
pub(crate) fn mulmod<C: Coeffs>(c: &C, a: &[C::E], b: &[C::E], m: &[C::E]) -> Vec<C::E> {
    let mut r = rem_monic(c, &mul(c, a, b), m);
    r.resize(m.len() - 1, c.zero());
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the digits
/// of `index`, with the constant term as the most significant digit. Walking
/// `index` upward therefore enumerates monic polynomials in lexicographic
/// order of `(c_0, c_1, ..., c_{deg-1})`.
pub(crate) fn monic_from_lex_index<C: Coeffs>(c: &C, deg: usize, mut index: u64) -> Vec<C::E> {
    let q = c.order() as u64;
    let mut coeffs = vec![c.zero(); deg + 1];
    for k in (0..deg).rev() {
        coeffs[k] = c.elem((index % q) as u32);
        index /= q;
    }
    coeffs[deg] = c.one();
    coeffs
}

fn is_zero_poly<C: Coeffs>(c: &C, f: &[C::E]) -> bool {
    f.iter().all(|&x| x == c.zero())
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub(crate) fn is_irreducible<C: Coeffs>(c: &C, f: &[C::E]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    let q = c.order() as u64;
    for k in 1..=deg / 2 {
        let count = q.pow(k as u32);
        for idx in 0..count {
            let g = monic_from_lex_index(c, k, idx);
            if is_zero_poly(c, &rem_monic(c, f, &g)) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `deg`.
pub(crate) fn smallest_irreducible<C: Coeffs>(c: &C, deg: usize) -> Vec<C::E> {
    let q = c.order() as u64;
    let total = q.pow(deg as u32);
    (0..total)
        .map(|idx| monic_from_lex_index(c, deg, idx))
        .find(|f| is_irreducible(c, f))
        .expect("irreducible polynomials exist in every degree")
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            out.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}
