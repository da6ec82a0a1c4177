use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::{self, Coeffs};
use super::{FieldCtx, FieldDescriptor, Fq, MAX_FIELD_ELEMENTS};
use crate::error::{Error, Result};

/// An element of F_{q^n}: encoding `sum_i c_i q^i` of its coefficients over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtElem(pub(crate) u32);

impl ExtElem {
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Degree-n extension of a base field, built as F_q[t]/(f) over the base
/// context (never as a flat F_{p^{rn}}), so the Frobenius x -> x^q and the
/// norm are those of F_{q^n}/F_q.
#[derive(Debug, Clone)]
pub struct ExtCtx {
    base: Arc<FieldCtx>,
    n: u32,
    size: u32,
    modulus: Vec<Fq>,
    generator: ExtElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl ExtCtx {
    pub fn new(base: Arc<FieldCtx>, n: u32) -> Result<Self> {
        Self::with_cap(base, n, MAX_FIELD_ELEMENTS)
    }

    pub fn with_cap(base: Arc<FieldCtx>, n: u32, cap: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("extension degree n must be at least 2".into()));
        }
        let size = (base.q() as u128).pow(n);
        if size > cap as u128 {
            return Err(Error::cap("extension field size", size, cap as u128));
        }
        let size = size as u32;
        let q = base.q();
        let f: &FieldCtx = &base;
        let modulus = poly::smallest_irreducible(f, n as usize);

        let decode = |x: u32| -> Vec<Fq> {
            let mut v = Vec::with_capacity(n as usize);
            let mut x = x;
            for _ in 0..n {
                v.push(Fq(x % q));
                x /= q;
            }
            v
        };
        let encode = |c: &[Fq]| -> u32 { c.iter().rev().fold(0, |acc, e| acc * q + e.0) };
        let slow_mul = |a: u32, b: u32| encode(&poly::mulmod(f, &decode(a), &decode(b), &modulus));
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
        let order = (size - 1) as u64;
        let factors = poly::prime_factors(order);
        let generator = (1..size)
            .find(|&a| factors.iter().all(|&l| slow_pow(a, order / l) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(size as usize - 1);
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for k in 0..size - 1 {
            exp.push(x);
            log[x as usize] = k;
            x = slow_mul(x, generator);
        }
        Ok(ExtCtx { base, n, size, modulus, generator: ExtElem(generator), exp, log })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }
    pub fn base_arc(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.base)
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// Cardinality q^n.
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Monic modulus over F_q, low degree first.
    pub fn modulus(&self) -> &[Fq] {
        &self.modulus
    }
    pub fn generator(&self) -> ExtElem {
        self.generator
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(0)
    }
    pub fn one(&self) -> ExtElem {
        ExtElem(1)
    }

    pub fn element(&self, index: u32) -> Result<ExtElem> {
        if index < self.size {
            Ok(ExtElem(index))
        } else {
            Err(Error::InvalidParameter(format!("element index {index} outside F_{}", self.size)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.size).map(ExtElem)
    }

    /// Image of a base-field element.
    pub fn embed(&self, c: Fq) -> ExtElem {
        ExtElem(c.0)
    }

    pub fn coeffs(&self, x: ExtElem) -> Vec<Fq> {
        let q = self.base.q();
        let mut v = Vec::with_capacity(self.n as usize);
        let mut r = x.0;
        for _ in 0..self.n {
            v.push(Fq(r % q));
            r /= q;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[Fq]) -> Result<ExtElem> {
        let q = self.base.q();
        if coeffs.len() > self.n as usize || coeffs.iter().any(|c| c.0 >= q) {
            return Err(Error::BadLiteral(format!("{coeffs:?}")));
        }
        Ok(ExtElem(coeffs.iter().rev().fold(0, |acc, e| acc * q + e.0)))
    }

    /// Parses comma-separated base-field encodings, low coefficient first.
    pub fn parse(&self, literal: &str) -> Result<ExtElem> {
        let digits = super::parse_digits(literal)?;
        self.from_coeffs(&digits.into_iter().map(Fq).collect::<Vec<_>>())
    }

    pub fn format(&self, x: ExtElem) -> String {
        super::join_digits(&self.coeffs(x).iter().map(|c| c.0).collect::<Vec<_>>())
    }

    /// If `x` lies in the base field, returns it.
    pub fn to_base(&self, x: ExtElem) -> Option<Fq> {
        (x.0 < self.base.q()).then_some(Fq(x.0))
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let q = self.base.q();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.n {
            let s = self.base.add(Fq(x % q), Fq(y % q));
            out += s.0 * w;
            w *= q;
            x /= q;
            y /= q;
        }
        ExtElem(out)
    }

    pub fn neg(&self, a: ExtElem) -> ExtElem {
        let q = self.base.q();
        let mut x = a.0;
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.n {
            out += self.base.neg(Fq(x % q)).0 * w;
            w *= q;
            x /= q;
        }
        ExtElem(out)
    }

    pub fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        if a.0 == 0 || b.0 == 0 {
            return ExtElem(0);
        }
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % (self.size - 1);
        ExtElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: ExtElem) -> Result<ExtElem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let k = (self.size - 1 - self.log[a.0 as usize]) % (self.size - 1);
        Ok(ExtElem(self.exp[k as usize]))
    }

    pub fn pow(&self, a: ExtElem, e: u64) -> ExtElem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let m = (self.size - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % m)) % m;
        ExtElem(self.exp[k as usize])
    }

    /// Frobenius automorphism x -> x^q.
    pub fn frobenius(&self, x: ExtElem) -> ExtElem {
        self.pow(x, self.base.q() as u64)
    }

    /// The i-th iterate of the Frobenius.
    pub fn frobenius_iter(&self, x: ExtElem, i: u32) -> ExtElem {
        (0..i % self.n).fold(x, |acc, _| self.frobenius(acc))
    }

    /// Product of the Galois conjugates of `x`; zero maps to zero.
    pub fn norm(&self, x: ExtElem) -> Fq {
        let mut acc = self.one();
        let mut conj = x;
        for _ in 0..self.n {
            acc = self.mul(acc, conj);
            conj = self.frobenius(conj);
        }
        self.to_base(acc).expect("norm lands in the base field")
    }

    /// Norm evaluated as a single power `x^((q^n - 1)/(q - 1))`.
    pub fn norm_by_power(&self, x: ExtElem) -> Fq {
        let e = ((self.size - 1) / (self.base.q() - 1)) as u64;
        self.to_base(self.pow(x, e)).expect("norm lands in the base field")
    }

    /// Norms of every element, indexed by encoding.
    pub fn norm_table(&self) -> Vec<Fq> {
        self.elements().map(|x| self.norm(x)).collect()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let mut d = self.base.descriptor();
        d.n = Some(self.n);
        d.ext_modulus_coeffs = Some(self.modulus.iter().map(|c| c.0).collect());
        d
    }
}

impl Coeffs for ExtCtx {
    type E = ExtElem;

    fn order(&self) -> u32 {
        self.size
    }
    fn elem(&self, index: u32) -> ExtElem {
        ExtElem(index)
    }
    fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        ExtCtx::add(self, a, b)
    }
    fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        ExtCtx::sub(self, a, b)
    }
    fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        ExtCtx::mul(self, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext(p: u32, r: u32, n: u32) -> ExtCtx {
        ExtCtx::new(Arc::new(FieldCtx::new(p, r).unwrap()), n).unwrap()
    }

    #[test]
    fn f9_over_f3() {
        let e = ext(3, 1, 2);
        assert_eq!(e.modulus(), &[Fq(1), Fq(0), Fq(1)]);
        let t = e.from_coeffs(&[Fq(0), Fq(1)]).unwrap();
        // sigma(t) = t^3 = -t
        assert_eq!(e.frobenius(t), e.neg(t));
        // N(a + bt) = a^2 + b^2
        let one_plus_t = e.parse("1,1").unwrap();
        assert_eq!(e.norm(one_plus_t), Fq(2));
        assert_eq!(e.norm(e.one()), Fq(1));
        assert_eq!(e.norm(e.zero()), Fq(0));
        let fiber: Vec<String> = e.elements().filter(|&x| e.norm(x) == Fq(1)).map(|x| e.format(x)).collect();
        // {1, 2, t, 2t}
        assert_eq!(fiber, vec!["1,0", "2,0", "0,1", "0,2"]);
    }

    #[test]
    fn frobenius_fixes_base_and_has_order_n() {
        for (p, r, n) in [(3, 1, 2), (3, 1, 3), (5, 1, 2), (3, 2, 2)] {
            let e = ext(p, r, n);
            for c in e.base().elements() {
                assert_eq!(e.frobenius(e.embed(c)), e.embed(c));
            }
            for x in e.elements() {
                assert_eq!(e.frobenius_iter(x, n), x);
                let y = e.frobenius(x);
                assert_eq!(e.frobenius(e.mul(x, x)), e.mul(y, y));
            }
        }
    }

    #[test]
    fn norm_laws_exhaustive() {
        for (p, r, n) in [(3, 1, 2), (3, 1, 3), (5, 1, 2), (3, 2, 2), (3, 1, 5)] {
            let e = ext(p, r, n);
            let q = e.base().q();
            let table = e.norm_table();
            let expected_fiber = (e.size() - 1) / (q - 1);
            let mut counts = vec![0u32; q as usize];
            for x in e.elements() {
                counts[table[x.0 as usize].0 as usize] += 1;
                assert_eq!(table[x.0 as usize], e.norm_by_power(x));
                assert_eq!(e.norm(e.frobenius(x)), table[x.0 as usize]);
            }
            assert_eq!(counts[0], 1);
            assert!(counts[1..].iter().all(|&c| c == expected_fiber));
            if e.size() <= 81 {
                for x in e.elements() {
                    for y in e.elements() {
                        let lhs = table[e.mul(x, y).0 as usize];
                        let rhs = e.base().mul(table[x.0 as usize], table[y.0 as usize]);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_degree_one_and_oversize() {
        let f = Arc::new(FieldCtx::new(3, 1).unwrap());
        assert!(ExtCtx::new(Arc::clone(&f), 1).is_err());
        assert!(ExtCtx::new(f, 9).unwrap_err().is_cap_violation());
    }

    proptest! {
        #[test]
        fn sigma_is_additive_on_random_pairs(a in 0u32..729, b in 0u32..729) {
            let e = ext(3, 2, 3);
            let (a, b) = (ExtElem(a), ExtElem(b));
            prop_assert_eq!(e.frobenius(e.add(a, b)), e.add(e.frobenius(a), e.frobenius(b)));
            prop_assert_eq!(e.frobenius_iter(a, 3), a);
        }
    }
}
