//! Univariate polynomials over GF(2^k).
//!
//! Root multiplicities are never needed by the spectrum predicates, so the
//! central operations here are the radical (squarefree part) and the two
//! distinct-root counts: in the ground field and in its algebraic closure.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Fq};

/// A polynomial with coefficients indexed by degree and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Fq>,
    field: FieldSpec,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, coefficients as decimal codes: `t^3 + 2*t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let var = match deg {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{deg}"),
            };
            match (deg, c == Fq::ONE) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "{var}")?,
                (_, false) => write!(f, "{c}*{var}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, field: field.clone() }
    }

    /// Build from decimal codes, lowest degree first.
    pub fn from_codes(field: &FieldSpec, codes: &[u32]) -> Result<Self> {
        let coeffs = codes.iter().map(|&c| field.element(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, coeffs))
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Poly { coeffs: Vec::new(), field: field.clone() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &FieldSpec, c: Fq) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial t^d.
    pub fn monomial(field: &FieldSpec, d: usize) -> Self {
        let mut coeffs = vec![Fq::ZERO; d + 1];
        coeffs[d] = Fq::ONE;
        Poly { coeffs, field: field.clone() }
    }

    /// t + a (equivalently t - a).
    pub fn linear(field: &FieldSpec, a: Fq) -> Self {
        Self::new(field, vec![a, Fq::ONE])
    }

    /// Product of (t - r) over the given roots.
    pub fn from_roots(field: &FieldSpec, roots: &[Fq]) -> Self {
        roots
            .iter()
            .fold(Self::one(field), |acc, &r| acc.mul_unchecked(&Self::linear(field, r)))
    }

    /// Uniformly random monic polynomial of the given degree.
    pub fn random_monic<R: Rng + ?Sized>(field: &FieldSpec, degree: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<Fq> = (0..degree).map(|_| field.random(rng)).collect();
        coeffs.push(Fq::ONE);
        Poly { coeffs, field: field.clone() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Coefficient of t^d (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> Fq {
        self.coeffs.get(d).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    /// Trace of a monic polynomial: minus its t^(n-1) coefficient, which in
    /// characteristic 2 is the coefficient itself.
    pub fn trace(&self) -> Fq {
        match self.degree() {
            Some(d) if d >= 1 => self.coeff(d - 1),
            _ => Fq::ZERO,
        }
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn eval(&self, x: Fq) -> Fq {
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| self.field.mul(acc, x) + c)
    }

    pub fn add(&self, other: &Poly) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Poly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        Self::new(f, out)
    }

    /// Euclidean division; the divisor is normalized internally.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.divrem_unchecked(divisor))
    }

    fn divrem_unchecked(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = f.inv(divisor.leading()).expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[i - dd] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] += f.mul(factor, d);
            }
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem_unchecked(divisor);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor; gcd(f, 0) = monic(f).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(self.gcd_unchecked(other))
    }

    fn gcd_unchecked(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem_unchecked(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Formal derivative; even-degree terms vanish in characteristic 2.
    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { Fq::ZERO })
            .collect();
        Self::new(&self.field, coeffs)
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly> {
        self.check_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut base = self.divrem_unchecked(modulus).1;
        let mut acc = Self::one(&self.field).divrem_unchecked(modulus).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base).divrem_unchecked(modulus).1;
            }
            base = base.mul_unchecked(&base).divrem_unchecked(modulus).1;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.monic().radical_monic())
    }

    fn radical_monic(&self) -> Poly {
        let f = &self.field;
        if self.coeffs.len() <= 1 {
            return Self::one(f);
        }
        let d = self.derivative();
        if d.is_zero() {
            // self = s(t)^2 with s built from square roots of the even coefficients
            let s = self.coeffs.iter().step_by(2).map(|&c| f.sqrt(c)).collect();
            return Self::new(f, s).radical_monic();
        }
        let g = self.gcd_unchecked(&d);
        let w = self.div_exact(&g);
        let rg = g.radical_monic();
        let common = w.gcd_unchecked(&rg);
        w.mul_unchecked(&rg).div_exact(&common)
    }

    /// Number of distinct roots in GF(q): deg gcd(f, t^q - t).
    pub fn count_roots_in_field(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.coeffs.len() == 1 {
            return Ok(0);
        }
        let f = &self.field;
        let m = self.monic();
        // t^q mod f via k successive squarings of t
        let mut power = Self::monomial(f, 1).divrem_unchecked(&m).1;
        for _ in 0..f.degree() {
            power = power.mul_unchecked(&power).divrem_unchecked(&m).1;
        }
        let frob = power.add_unchecked(&Self::monomial(f, 1));
        Ok(m.gcd_unchecked(&frob).degree().unwrap_or(0))
    }

    /// Number of distinct roots in the algebraic closure: deg radical(f).
    pub fn count_roots_in_closure(&self) -> Result<usize> {
        Ok(self.radical()?.degree().unwrap_or(0))
    }

    fn has_zero_root(&self) -> bool {
        self.coeff(0).is_zero()
    }

    pub fn count_nonzero_roots_in_field(&self) -> Result<usize> {
        let c = self.count_roots_in_field()?;
        Ok(c - usize::from(self.has_zero_root()))
    }

    pub fn count_nonzero_roots_in_closure(&self) -> Result<usize> {
        let c = self.count_roots_in_closure()?;
        Ok(c - usize::from(self.has_zero_root()))
    }

    /// True iff every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const W: Fq = Fq(2);
    const W1: Fq = Fq(3);

    fn p(f: &FieldSpec, codes: &[u32]) -> Poly {
        Poly::from_codes(f, codes).unwrap()
    }

    /// Naive long division used only by the oracle below.
    fn oracle_divides(f: &FieldSpec, num: &[Fq], den: &[Fq]) -> Option<Vec<Fq>> {
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        if rem.len() < den.len() {
            return rem.iter().all(|c| c.is_zero()).then(Vec::new);
        }
        let inv = f.inv(den[dd]).unwrap();
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            quot[i - dd] = c;
            for j in 0..=dd {
                rem[i - dd + j] = rem[i - dd + j] + f.mul(c, den[j]);
            }
        }
        rem.iter().all(|c| c.is_zero()).then_some(quot)
    }

    fn all_monic(f: &FieldSpec, degree: usize) -> Vec<Vec<Fq>> {
        let q = f.q() as usize;
        (0..q.pow(degree as u32))
            .map(|mut idx| {
                let mut c: Vec<Fq> = (0..degree)
                    .map(|_| {
                        let d = idx % q;
                        idx /= q;
                        Fq(d as u16)
                    })
                    .collect();
                c.push(Fq::ONE);
                c
            })
            .collect()
    }

    /// Sum of degrees of distinct irreducible factors, by trial division in
    /// increasing degree (the first divisor found in each degree is irreducible
    /// once all smaller factors are divided out).
    fn oracle_radical_degree(f: &FieldSpec, poly: &[Fq]) -> usize {
        let mut rem = poly.to_vec();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        let mut total = 0;
        let mut d = 1;
        while rem.len() > 1 {
            if 2 * d > rem.len() - 1 {
                // no factor of degree <= deg/2 remains, so rem is irreducible
                total += rem.len() - 1;
                break;
            }
            for g in all_monic(f, d) {
                if let Some(qt) = oracle_divides(f, &rem, &g) {
                    total += d;
                    rem = qt;
                    while let Some(qt) = oracle_divides(f, &rem, &g) {
                        rem = qt;
                    }
                }
            }
            d += 1;
        }
        total
    }

    #[test]
    fn display_form() {
        let f = FieldSpec::gf4();
        assert_eq!(p(&f, &[1, 2, 0, 1]).to_string(), "t^3 + 2*t + 1");
        assert_eq!(Poly::zero(&f).to_string(), "0");
        assert_eq!(p(&f, &[0, 1]).to_string(), "t");
    }

    #[test]
    fn gcd_examples() {
        let f = FieldSpec::gf4();
        let t2t = p(&f, &[0, 1, 1]);
        let t = p(&f, &[0, 1]);
        assert_eq!(t2t.gcd(&t).unwrap(), t);
        let g = p(&f, &[2, 3, 2]);
        assert_eq!(g.gcd(&Poly::zero(&f)).unwrap(), g.monic());
        // t^2 + w and t + (w + 1): (w + 1)^2 = w, so the linear factor divides
        let a = Poly::new(&f, vec![W, Fq::ZERO, Fq::ONE]);
        let b = Poly::linear(&f, W1);
        assert_eq!(a.eval(W1), Fq::ZERO);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = Poly::one(&FieldSpec::gf4());
        let b = Poly::one(&FieldSpec::gf8());
        assert_eq!(a.gcd(&b).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn root_count_examples() {
        let f = FieldSpec::gf4();
        assert_eq!(p(&f, &[0, 1, 1]).count_roots_in_field().unwrap(), 2);
        let cube = Poly::from_roots(&f, &[Fq::ONE, Fq::ONE, Fq::ONE]);
        assert_eq!(cube.count_roots_in_field().unwrap(), 1);
        // t^2 + w t + 1: count by evaluating at all four elements
        let g = Poly::new(&f, vec![Fq::ONE, W, Fq::ONE]);
        let direct = f.elements().filter(|&a| g.eval(a).is_zero()).count();
        assert_eq!(g.count_roots_in_field().unwrap(), direct);
        assert_eq!(Poly::zero(&f).count_roots_in_field(), Err(Error::ZeroPolynomial));
        assert_eq!(Poly::zero(&f).radical(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn radical_examples() {
        let f = FieldSpec::gf4();
        let t1 = Poly::linear(&f, Fq::ONE);
        let t1_4 = Poly::from_roots(&f, &[Fq::ONE; 4]);
        assert_eq!(t1_4.radical().unwrap(), t1);
        let sq = Poly::new(&f, vec![W, Fq::ZERO, Fq::ONE]);
        assert_eq!(sq.radical().unwrap(), Poly::linear(&f, W1));
        // t (t+1)^2 (t^2 + t + w)
        let quad = Poly::new(&f, vec![W, Fq::ONE, Fq::ONE]);
        let g = Poly::from_roots(&f, &[Fq::ZERO, Fq::ONE, Fq::ONE]).mul(&quad).unwrap();
        let expected = Poly::from_roots(&f, &[Fq::ZERO, Fq::ONE]).mul(&quad).unwrap();
        assert_eq!(g.radical().unwrap(), expected);
        assert_eq!(oracle_radical_degree(&f, g.coeffs()), 4);
    }

    #[test]
    fn closure_counts() {
        let f = FieldSpec::gf4();
        let tn = Poly::monomial(&f, 5);
        assert_eq!(tn.count_roots_in_closure().unwrap(), 1);
        assert_eq!(tn.count_nonzero_roots_in_closure().unwrap(), 0);
        let g = Poly::from_roots(&f, &[Fq::ZERO, Fq::ONE, W]);
        assert_eq!(g.count_roots_in_closure().unwrap(), 3);
        assert_eq!(g.count_nonzero_roots_in_closure().unwrap(), 2);
        assert_eq!(g.count_nonzero_roots_in_field().unwrap(), 2);
        // even quartics t^4 + a t^2 + b are squares, hence at most 2 closure roots
        for a in f.elements() {
            for b in f.elements() {
                let e = Poly::new(&f, vec![b, Fq::ZERO, a, Fq::ZERO, Fq::ONE]);
                assert!(e.count_roots_in_closure().unwrap() <= 2);
            }
        }
        let e = Poly::new(&f, vec![W, Fq::ZERO, Fq::ONE, Fq::ZERO, Fq::ONE]);
        assert!(e.is_even());
        assert!(!Poly::monomial(&f, 3).is_even());
    }

    #[test]
    fn radical_degree_matches_trial_division_exhaustive_gf4() {
        let f = FieldSpec::gf4();
        for d in 1..=4 {
            for c in all_monic(&f, d) {
                let g = Poly::new(&f, c.clone());
                assert_eq!(
                    g.count_roots_in_closure().unwrap(),
                    oracle_radical_degree(&f, &c),
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn radical_degree_matches_trial_division_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in [FieldSpec::gf4(), FieldSpec::gf8()] {
            for i in 0..10_000 {
                let d = if f.q() == 4 { 5 + i % 2 } else { 1 + i % 6 };
                let g = Poly::random_monic(&f, d, &mut rng);
                assert_eq!(
                    g.count_roots_in_closure().unwrap(),
                    oracle_radical_degree(&f, g.coeffs()),
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn field_root_count_matches_evaluation_exhaustive() {
        for k in 1..=4 {
            let f = FieldSpec::new(k).unwrap();
            let max_deg = if k <= 2 { 4 } else { 2 };
            for d in 1..=max_deg {
                for c in all_monic(&f, d) {
                    let g = Poly::new(&f, c);
                    let direct = f.elements().filter(|&a| g.eval(a).is_zero()).count();
                    assert_eq!(g.count_roots_in_field().unwrap(), direct, "{g}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn radical_divides_and_is_squarefree(codes in prop::collection::vec(0u32..8, 1..8)) {
            let f = FieldSpec::gf8();
            let g = Poly::from_codes(&f, &codes).unwrap();
            prop_assume!(!g.is_zero());
            let r = g.radical().unwrap();
            prop_assert!(g.rem(&r).unwrap().is_zero());
            let dr = r.derivative();
            if dr.is_zero() {
                prop_assert_eq!(r.degree(), Some(0));
            } else {
                prop_assert_eq!(r.gcd(&dr).unwrap().degree(), Some(0));
            }
        }

        #[test]
        fn divrem_reconstructs(a in prop::collection::vec(0u32..4, 0..9), b in prop::collection::vec(0u32..4, 1..6)) {
            let f = FieldSpec::gf4();
            let a = Poly::from_codes(&f, &a).unwrap();
            let b = Poly::from_codes(&f, &b).unwrap();
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }
    }
}
