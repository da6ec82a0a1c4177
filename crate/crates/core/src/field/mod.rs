//! Exact arithmetic in F_q = F_{p^r} and in extensions F_{q^n}.
//!
//! Elements are stored by their integer encoding: the base-p digit expansion
//! of the polynomial-basis coefficients, lowest coefficient first. The same
//! encoding orders vertices in every graph built on top of these fields, so
//! adjacency matrices are reproducible bit for bit.

mod ext;
pub(crate) mod poly;

pub use ext::{ExtCtx, ExtElem};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use poly::{Coeffs, Residues};

/// Largest field (and extension) cardinality a context may be built with.
pub const MAX_FIELD_ELEMENTS: u32 = 1 << 14;

/// An element of F_q, identified by its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for F_q with q = p^r.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus over F_p, low degree first; empty for prime fields.
    modulus: Vec<u32>,
    nu: Fq,
    exp: Vec<u32>,
    log: Vec<u32>,
    pow_p: Vec<u32>,
}

impl FieldCtx {
    /// Builds F_{p^r} with the lexicographically smallest monic irreducible
    /// modulus and the smallest primitive element.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        Self::with_cap(p, r, MAX_FIELD_ELEMENTS)
    }

    pub fn with_cap(p: u32, r: u32, cap: u32) -> Result<Self> {
        if !poly::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if r == 0 {
            return Err(Error::InvalidParameter("field degree r must be at least 1".into()));
        }
        let q = (p as u128).pow(r);
        if q > cap as u128 {
            return Err(Error::cap("field size", q, cap as u128));
        }
        let q = q as u32;
        let res = Residues { p };
        let modulus = if r == 1 {
            Vec::new()
        } else {
            poly::smallest_irreducible(&res, r as usize)
        };
        let pow_p: Vec<u32> = (0..r).map(|i| p.pow(i)).collect();

        let decode = |x: u32| -> Vec<u32> { (0..r).map(|i| (x / pow_p[i as usize]) % p).collect() };
        let encode = |c: &[u32]| -> u32 { c.iter().enumerate().map(|(i, &d)| d * pow_p[i]).sum() };
        let slow_mul = |a: u32, b: u32| -> u32 {
            if r == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                encode(&poly::mulmod(&res, &decode(a), &decode(b), &modulus))
            }
        };

        let order = (q - 1) as u64;
        let factors = poly::prime_factors(order);
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let nu = (1..q)
            .find(|&a| factors.iter().all(|&l| slow_pow(a, order / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..q - 1 {
            exp.push(x);
            log[x as usize] = k;
            x = slow_mul(x, nu);
        }
        Ok(FieldCtx { p, r, q, modulus, nu: Fq(nu), exp, log, pow_p })
    }

    /// Builds F_q from its cardinality.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, r) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        Self::new(p as u32, r)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// The modulus over F_p, low degree first, monic; empty when r = 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The fixed primitive element.
    pub fn nu(&self) -> Fq {
        self.nu
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }
    pub fn one(&self) -> Fq {
        Fq(1)
    }

    pub fn element(&self, index: u32) -> Result<Fq> {
        if index < self.q {
            Ok(Fq(index))
        } else {
            Err(Error::InvalidParameter(format!("element index {index} outside F_{}", self.q)))
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q).map(Fq)
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Fq> + '_ {
        (1..self.q).map(Fq)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Fq {
        Fq(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        (0..self.r as usize).map(|i| (a.0 / self.pow_p[i]) % self.p).collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fq> {
        if coeffs.len() > self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::BadLiteral(format!("{coeffs:?}")));
        }
        Ok(Fq(coeffs.iter().enumerate().map(|(i, &c)| c * self.pow_p[i]).sum()))
    }

    /// Parses the comma-separated digit literal, low coefficient first.
    pub fn parse(&self, literal: &str) -> Result<Fq> {
        let digits = parse_digits(literal)?;
        self.from_coeffs(&digits)
    }

    pub fn format(&self, a: Fq) -> String {
        join_digits(&self.coeffs(a))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.r == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= self.p { s - self.p } else { s });
        }
        let mut out = 0;
        for &w in &self.pow_p {
            let d = ((a.0 / w) % self.p + (b.0 / w) % self.p) % self.p;
            out += d * w;
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.r == 1 {
            return Fq(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut out = 0;
        for &w in &self.pow_p {
            let d = (a.0 / w) % self.p;
            out += ((self.p - d) % self.p) * w;
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % (self.q - 1);
        Fq(self.exp[k as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let k = (self.q - 1 - self.log[a.0 as usize]) % (self.q - 1);
        Ok(Fq(self.exp[k as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `nu^k` for any integer k.
    pub fn nu_pow(&self, k: i64) -> Fq {
        let m = (self.q - 1) as i64;
        Fq(self.exp[k.rem_euclid(m) as usize])
    }

    /// Discrete logarithm to base nu.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Fq) -> Option<u64> {
        let l = self.log(a)? as u64;
        let m = (self.q - 1) as u64;
        Some(m / gcd(l, m))
    }

    /// Euler criterion for a nonzero element.
    pub fn is_nonzero_square(&self, a: Fq) -> bool {
        a.0 != 0 && self.pow(a, ((self.q - 1) / 2) as u64) == self.one()
    }

    /// Absolute trace F_q -> F_p, returned as a residue in `[0, p)`.
    pub fn trace_to_prime(&self, a: Fq) -> u32 {
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.r {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus_coeffs: self.modulus.clone(),
            n: None,
            ext_modulus_coeffs: None,
        }
    }
}

impl Coeffs for FieldCtx {
    type E = Fq;

    fn order(&self) -> u32 {
        self.q
    }
    fn elem(&self, index: u32) -> Fq {
        Fq(index)
    }
    fn add(&self, a: Fq, b: Fq) -> Fq {
        FieldCtx::add(self, a, b)
    }
    fn sub(&self, a: Fq, b: Fq) -> Fq {
        FieldCtx::sub(self, a, b)
    }
    fn mul(&self, a: Fq, b: Fq) -> Fq {
        FieldCtx::mul(self, a, b)
    }
}

/// Serializable description of a field or extension context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus_coeffs: Vec<u32>,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub ext_modulus_coeffs: Option<Vec<u32>>,
}

/// Splits `m = p^r` with p prime.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    let factors = poly::prime_factors(m);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut r = 0;
    let mut x = m;
    while x > 1 {
        x /= p;
        r += 1;
    }
    Some((p, r))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn parse_digits(literal: &str) -> Result<Vec<u32>> {
    literal
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::BadLiteral(literal.to_string())))
        .collect()
}

pub(crate) fn join_digits(d: &[u32]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f3_generator_is_two() {
        let f = FieldCtx::new(3, 1).unwrap();
        // exhaustive order check: 1 has order 1, 2 has order 2
        assert_eq!(f.order_of(Fq(1)), Some(1));
        assert_eq!(f.order_of(Fq(2)), Some(2));
        assert_eq!(f.nu(), Fq(2));
        assert_eq!(f.add(Fq(2), Fq(2)), Fq(1));
    }

    #[test]
    fn f9_modulus_and_products() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let one_plus_t = f.add(f.one(), t);
        let one_minus_t = f.sub(f.one(), t);
        assert_eq!(f.mul(one_plus_t, one_minus_t), f.from_int(2));
        assert_eq!(f.mul(t, t), f.from_int(-1));
        assert_eq!(f.order_of(f.nu()), Some(8));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(FieldCtx::new(2, 1), Err(Error::EvenCharacteristic)));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::NotPrime(9))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::InvalidParameter(_))));
        assert!(FieldCtx::new(3, 10).unwrap_err().is_cap_violation());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert!(matches!(f.inv(f.zero()), Err(Error::ZeroInverse)));
    }

    #[test]
    fn literals_round_trip() {
        let f = FieldCtx::new(5, 2).unwrap();
        let a = f.parse("3,4").unwrap();
        assert_eq!(a.index(), 3 + 4 * 5);
        assert_eq!(f.format(a), "3,4");
        assert!(f.parse("5,0").is_err());
        assert!(f.parse("x").is_err());
    }

    #[test]
    fn traces_land_in_prime_field() {
        let f = FieldCtx::new(3, 2).unwrap();
        // trace is additive and surjective onto F_3
        let mut hits = [0; 3];
        for a in f.elements() {
            hits[f.trace_to_prime(a) as usize] += 1;
        }
        assert_eq!(hits, [3, 3, 3]);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, r) in [(3, 1), (3, 2), (5, 1), (7, 1), (3, 3)] {
            let f = FieldCtx::new(p, r).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
        }
    }

    fn field_strategy() -> impl Strategy<Value = FieldCtx> {
        prop_oneof![
            Just((3u32, 1u32)),
            Just((3, 2)),
            Just((5, 2)),
            Just((7, 1)),
            Just((3, 4)),
            Just((11, 1)),
            Just((13, 2))
        ]
        .prop_map(|(p, r)| FieldCtx::new(p, r).unwrap())
    }

    proptest! {
        #[test]
        fn ring_laws(f in field_strategy(), a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
            let (a, b, c) = (Fq(a % f.q()), Fq(b % f.q()), Fq(c % f.q()));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.pow(a, f.q() as u64), a);
        }
    }
}
