//! Arithmetic in GF(2^k) for 1 <= k <= 16.
//!
//! Elements are stored as the bit-encoding of a polynomial of degree < k over
//! GF(2): bit `i` is the coefficient of `x^i`. Addition is XOR. Multiplication
//! goes through log/antilog tables for k <= 8 and through carry-less
//! shift-and-reduce above that.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// A field element, as its polynomial bit code in `[0, q)`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Fq {
    type Output = Fq;
    #[inline]
    fn add(self, rhs: Fq) -> Fq {
        Fq(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Fq {
    #[inline]
    fn add_assign(&mut self, rhs: Fq) {
        self.0 ^= rhs.0;
    }
}

impl std::ops::Sub for Fq {
    type Output = Fq;
    #[inline]
    fn sub(self, rhs: Fq) -> Fq {
        Fq(self.0 ^ rhs.0)
    }
}

impl std::ops::Neg for Fq {
    type Output = Fq;
    #[inline]
    fn neg(self) -> Fq {
        self
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest degree that uses log/antilog tables.
const TABLE_MAX_DEGREE: u32 = 8;

struct Tables {
    log: Vec<u16>,
    // Twice the group order so that `exp[log a + log b]` never wraps.
    exp: Vec<u16>,
}

struct Inner {
    degree: u32,
    modulus: u32,
    q: u32,
    tables: Option<Tables>,
}

/// A concrete finite field GF(2^k) with an explicit irreducible modulus.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.degree == other.inner.degree && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[modulus {}]", self.inner.degree, self.inner.modulus)
    }
}

/// Carry-less product of two polynomials over GF(2).
#[inline]
fn clmul(mut a: u32, mut b: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly2_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` in GF(2)[x].
fn poly2_rem(mut a: u32, m: u32) -> u32 {
    let dm = poly2_degree(m);
    loop {
        let da = poly2_degree(a);
        if da < dm {
            return a;
        }
        a ^= m << (da - dm);
    }
}

/// Trial division by every polynomial of degree 1..=k/2.
pub fn is_irreducible_gf2(modulus: u32) -> bool {
    let k = poly2_degree(modulus);
    if k < 1 {
        return false;
    }
    for d in 1..=(k / 2) {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly2_rem(modulus, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least irreducible polynomial of degree `k` over GF(2).
pub fn least_irreducible(k: u32) -> u32 {
    ((1u32 << k)..(1u32 << (k + 1)))
        .find(|&m| is_irreducible_gf2(m))
        .expect("irreducible polynomials exist in every degree")
}

fn default_modulus(k: u32) -> u32 {
    match k {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        _ => least_irreducible(k),
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// GF(2^k) with the default modulus for `k`.
    pub fn new(degree: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        Self::with_modulus(degree, default_modulus(degree))
    }

    /// GF(2^k) with an explicit modulus, validated for irreducibility.
    pub fn with_modulus(degree: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        if poly2_degree(modulus) != degree as i32 || !is_irreducible_gf2(modulus) {
            return Err(Error::InvalidModulus { degree, modulus });
        }
        let q = 1u32 << degree;
        let mut inner = Inner { degree, modulus, q, tables: None };
        if degree <= TABLE_MAX_DEGREE {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    pub fn gf2() -> Self {
        Self::new(1).expect("GF(2)")
    }

    pub fn gf4() -> Self {
        Self::new(2).expect("GF(4)")
    }

    pub fn gf8() -> Self {
        Self::new(3).expect("GF(8)")
    }

    /// Parse `gf2`, `gf4`, `gf8`, `gf16` or `gf2^k`, with an optional explicit modulus.
    pub fn parse(name: &str, modulus: Option<u32>) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let degree = if let Some(rest) = lower.strip_prefix("gf2^") {
            rest.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad field name {name:?}")))?
        } else {
            match lower.as_str() {
                "gf2" => 1,
                "gf4" => 2,
                "gf8" => 3,
                "gf16" => 4,
                _ => return Err(Error::Parse(format!("unknown field {name:?}"))),
            }
        };
        match modulus {
            Some(m) => Self::with_modulus(degree, m),
            None => Self::new(degree),
        }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.inner.modulus
    }

    /// Cardinality 2^k.
    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Canonical config name, `gf2^k`.
    pub fn name(&self) -> String {
        format!("gf2^{}", self.inner.degree)
    }

    pub fn element(&self, code: u32) -> Result<Fq> {
        if code >= self.inner.q {
            return Err(Error::InvalidElement { code, q: self.inner.q });
        }
        Ok(Fq(code as u16))
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.q).map(|c| Fq(c as u16))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq(rng.random_range(0..self.inner.q) as u16)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq(rng.random_range(1..self.inner.q) as u16)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        match &self.inner.tables {
            Some(t) => Fq(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize]),
            None => Fq(self.reduce(clmul(a.0 as u32, b.0 as u32)) as u16),
        }
    }

    #[inline]
    fn reduce(&self, v: u32) -> u32 {
        poly2_rem(v, self.inner.modulus)
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.inner.tables {
            Some(t) => {
                let order = self.inner.q as usize - 1;
                let l = t.log[a.0 as usize] as usize;
                Fq(t.exp[(order - l) % order])
            }
            None => self.pow(a, self.inner.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The unique square root: inverse Frobenius, a^(q/2).
    pub fn sqrt(&self, a: Fq) -> Fq {
        let mut r = a;
        for _ in 1..self.inner.degree {
            r = self.mul(r, r);
        }
        r
    }
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let mul = |a: u32, b: u32| poly2_rem(clmul(a, b), inner.modulus);
    let pow = |a: u32, mut e: u32| {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let factors = prime_factors(order);
    let generator = (1..q)
        .find(|&g| factors.iter().all(|&p| pow(g, order / p) != 1) && pow(g, order) == 1)
        .expect("multiplicative group is cyclic");
    let mut log = vec![0u16; q as usize];
    let mut exp = vec![0u16; 2 * order as usize];
    let mut x = 1u32;
    for i in 0..order {
        exp[i as usize] = x as u16;
        exp[(i + order) as usize] = x as u16;
        log[x as usize] = i as u16;
        x = mul(x, generator);
    }
    Tables { log, exp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const W: Fq = Fq(2);

    #[test]
    fn gf4_small_facts() {
        let f = FieldSpec::gf4();
        assert_eq!(f.modulus(), 0b111);
        assert_eq!(f.add(Fq::ONE, Fq::ONE), Fq::ZERO);
        assert_eq!(f.mul(W, W), Fq(3));
        assert_eq!(f.inv(W).unwrap(), Fq(3));
        assert_eq!(f.inv(Fq::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn gf4_square_roots_by_exhaustive_squaring() {
        let f = FieldSpec::gf4();
        // oracle: invert the squaring map by enumeration
        for a in f.elements() {
            let b = f.elements().find(|&b| f.mul(b, b) == a).unwrap();
            assert_eq!(f.sqrt(a), b);
        }
        assert_eq!(f.sqrt(Fq::ZERO), Fq::ZERO);
        assert_eq!(f.sqrt(Fq::ONE), Fq::ONE);
        assert_eq!(f.sqrt(W), Fq(3));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldSpec::gf8().modulus(), 0b1011);
        assert_eq!(FieldSpec::new(4).unwrap().modulus(), 0b10011);
        for k in 1..=16 {
            let f = FieldSpec::new(k).unwrap();
            assert!(is_irreducible_gf2(f.modulus()));
        }
        assert_eq!(FieldSpec::new(0).unwrap_err(), Error::UnsupportedDegree(0));
        assert_eq!(FieldSpec::new(17).unwrap_err(), Error::UnsupportedDegree(17));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x + 1)^2
        assert!(FieldSpec::with_modulus(2, 0b101).is_err());
        // non-primitive but irreducible is fine
        assert!(FieldSpec::with_modulus(4, 0b11111).is_ok());
    }

    #[test]
    fn parse_names() {
        assert_eq!(FieldSpec::parse("gf4", None).unwrap().q(), 4);
        assert_eq!(FieldSpec::parse("GF16", None).unwrap().q(), 16);
        assert_eq!(FieldSpec::parse("gf2^5", None).unwrap().q(), 32);
        assert_eq!(FieldSpec::parse("gf2", None).unwrap().q(), 2);
        assert_eq!(FieldSpec::parse("gf2^4", Some(0b11001)).unwrap().modulus(), 0b11001);
        assert!(FieldSpec::parse("gf9", None).is_err());
        assert!(FieldSpec::parse("gf2^3", Some(0b1001)).is_err());
    }

    #[test]
    fn axioms_exhaustive_up_to_256() {
        for k in 1..=8 {
            let f = FieldSpec::new(k).unwrap();
            let q = f.q() as u64;
            for a in f.elements() {
                assert_eq!(a + a, Fq::ZERO);
                assert_eq!(f.mul(f.sqrt(a), f.sqrt(a)), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), Fq::ONE);
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_shift_and_reduce() {
        for k in 1..=8 {
            let f = FieldSpec::new(k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let direct = poly2_rem(clmul(a.code(), b.code()), f.modulus());
                    assert_eq!(f.mul(a, b).code(), direct);
                }
            }
        }
    }

    #[test]
    fn sampled_axioms_large_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in [3, 8, 9, 12, 16] {
            let f = FieldSpec::new(k).unwrap();
            for _ in 0..10_000 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(f.sqrt(a), f.sqrt(a)), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, f.q() as u64 - 1), Fq::ONE);
                }
            }
        }
    }
}
