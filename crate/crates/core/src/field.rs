//! Exact arithmetic in the cyclotomic field `Q(ζ_L)`.
//!
//! Elements are stored as rational coefficient vectors of length `φ(L)` in the
//! power basis `1, ζ, ζ², …`, fully reduced modulo the `L`-th cyclotomic
//! polynomial `Φ_L`. Because `Φ_L` is irreducible the quotient is a field, so
//! every nonzero element has an inverse (computed by the extended Euclidean
//! algorithm in `Q[x]`).
//!
//! The textual form is `c0 + c1*z + c2*z^2 + …` with `z = ζ_L` and rational
//! coefficients written as `p/q`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FieldError;

/// The field `Q(ζ_L)` for a fixed conductor `L`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    /// Monic `Φ_L`, lowest degree first.
    modulus: Vec<BigInt>,
    /// `x^k mod Φ_L` for `0 <= k < max(L, 2φ(L))`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Result<Arc<Self>, FieldError> {
        if conductor == 0 {
            return Err(FieldError::InvalidConductor(conductor));
        }
        let modulus = cyclotomic_polynomial(conductor as u64);
        let deg = modulus.len() - 1;
        let table_len = (conductor as usize).max(2 * deg);
        let mut powers = Vec::with_capacity(table_len);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        for _ in 0..table_len {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic modulus
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(&modulus) {
                    *c -= &top * m;
                }
            }
        }
        Ok(Arc::new(Self {
            conductor,
            modulus,
            powers,
        }))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `φ(L)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// `Φ_m` as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Φ_d for every proper divisor d of m
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An element of `Q(ζ_L)` in canonical reduced form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: Arc::clone(field),
            coeffs: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, value: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, value: BigRational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = value;
        z
    }

    /// `ζ_L^e`; periodic in `e` modulo `L`.
    pub fn root(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let l = field.conductor as i64;
        let k = e.rem_euclid(l) as usize;
        Self {
            field: Arc::clone(field),
            coeffs: field.powers[k]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Builds an element from power-basis coefficients of any length,
    /// reducing modulo `Φ_L`.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Self {
        let deg = field.degree();
        let l = field.conductor as usize;
        let mut out = vec![BigRational::zero(); deg];
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                out[k] += c;
            } else {
                for (o, p) in out.iter_mut().zip(&field.powers[k % l]) {
                    if !p.is_zero() {
                        *o += &c * p;
                    }
                }
            }
        }
        Self {
            field: Arc::clone(field),
            coeffs: out,
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.conductor != other.field.conductor {
            return Err(FieldError::ConductorMismatch(
                self.field.conductor,
                other.field.conductor,
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(Self {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let deg = self.field.degree();
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_coeffs(&self.field, prod))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if k == 1 {
            return self.clone();
        }
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm with `Φ_L`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // invariant: s * self ≡ r (mod Φ)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since gcd(self, Φ) = 1
        let c = r1[0].recip();
        let out: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_coeffs(&self.field, out))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Re-reduces the stored coefficients; the identity on canonical elements.
    pub fn reduce(&self) -> Self {
        Self::from_coeffs(&self.field, self.coeffs.clone())
    }

    /// Parses `c0 + c1*z + c2*z^3 - 1/2*z^5`.
    pub fn parse(field: &Arc<CyclotomicField>, s: &str) -> Result<Self, FieldError> {
        parse_scalar(field, s)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b.last().unwrap().recip();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    if rem.is_empty() {
        rem.push(BigRational::zero());
    }
    (quot, trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect()
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                let f: fn(&Cyclotomic, &Cyclotomic) -> Result<Cyclotomic, FieldError> = $body;
                f(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.checked_add(b));
forward_binop!(Mul, mul, |a, b| a.checked_mul(b));
forward_binop!(Sub, sub, |a, b| a.checked_add(&-b));

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        assert_eq!(self.conductor(), rhs.conductor(), "conductor mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        assert_eq!(self.conductor(), rhs.conductor(), "conductor mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_rational(&c.abs());
            let mono = match k {
                0 => mag,
                1 => format!("{mag}*z"),
                _ => format!("{mag}*z^{k}"),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{mono}")?;
                first = false;
            } else {
                write!(f, " {} {mono}", if c.is_negative() { '-' } else { '+' })?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic<{}>({})", self.field.conductor, self)
    }
}

fn parse_scalar(field: &Arc<CyclotomicField>, s: &str) -> Result<Cyclotomic, FieldError> {
    let bad = |msg: &str| FieldError::Parse(format!("{msg} in {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty scalar"));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('^')) {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if i > 0 {
                return Err(bad("dangling sign"));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad("dangling sign"));
    }
    terms.push((neg, cur));

    let mut coeffs: Vec<BigRational> = Vec::new();
    for (neg, term) in terms {
        let (coef, power) = match term.split_once('*') {
            Some((c, z)) => (parse_rational(c).ok_or_else(|| bad("bad coefficient"))?, parse_power(z).ok_or_else(|| bad("bad power"))?),
            None if term.starts_with('z') => (BigRational::one(), parse_power(&term).ok_or_else(|| bad("bad power"))?),
            None => (parse_rational(&term).ok_or_else(|| bad("bad coefficient"))?, 0),
        };
        let l = field.conductor as i64;
        let k = power.rem_euclid(l) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] += if neg { -coef } else { coef };
    }
    Ok(Cyclotomic::from_coeffs(field, coeffs))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_power(s: &str) -> Option<i64> {
    let rest = s.strip_prefix('z')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(l: u32) -> Arc<CyclotomicField> {
        CyclotomicField::new(l).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let p = |m| {
            cyclotomic_polynomial(m)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(p(1), vec![-1, 1]);
        assert_eq!(p(2), vec![1, 1]);
        assert_eq!(p(4), vec![1, 0, 1]);
        assert_eq!(p(6), vec![1, -1, 1]);
        assert_eq!(p(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(p(8), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn root_identities() {
        let f = field(4);
        assert!(Cyclotomic::root(&f, 0).is_one());
        assert_eq!(Cyclotomic::root(&f, 2), Cyclotomic::from_integer(&f, -1));
        let f3 = field(3);
        let s = Cyclotomic::root(&f3, 1) + Cyclotomic::root(&f3, 2);
        assert_eq!(s, Cyclotomic::from_integer(&f3, -1));
        assert_eq!(Cyclotomic::root(&f3, 5), Cyclotomic::root(&f3, -1));
    }

    #[test]
    fn root_inverse() {
        for l in [1, 2, 3, 4, 5, 6, 8, 12] {
            let f = field(l);
            for e in -15..15 {
                let x = Cyclotomic::root(&f, e);
                assert_eq!(x.inv().unwrap(), Cyclotomic::root(&f, -e));
                assert!((&x * &Cyclotomic::root(&f, -e)).is_one());
            }
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        let f = field(6);
        assert_eq!(Cyclotomic::zero(&f).inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_conductors_rejected() {
        let a = Cyclotomic::one(&field(4));
        let b = Cyclotomic::one(&field(6));
        assert!(matches!(a.checked_add(&b), Err(FieldError::ConductorMismatch(4, 6))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn display_and_parse() {
        let f = field(12);
        let x = Cyclotomic::parse(&f, "1/2 - 3*z + z^3").unwrap();
        assert_eq!(x.to_string(), "1/2 - 3*z + 1*z^3");
        assert_eq!(Cyclotomic::parse(&f, &x.to_string()).unwrap(), x);
        // z^4 reduces: Φ_12 = x^4 - x^2 + 1
        let y = Cyclotomic::parse(&f, "z^4").unwrap();
        assert_eq!(y.to_string(), "-1 + 1*z^2");
        assert_eq!(Cyclotomic::parse(&f, "-z").unwrap(), -Cyclotomic::root(&f, 1));
        assert_eq!(Cyclotomic::zero(&f).to_string(), "0");
        assert!(Cyclotomic::parse(&f, "1 +").is_err());
        assert!(Cyclotomic::parse(&f, "1/0").is_err());
        assert!(Cyclotomic::parse(&f, "w").is_err());
    }

    #[test]
    fn pow_matches_roots() {
        let f = field(12);
        let z = Cyclotomic::root(&f, 1);
        for e in -13..13 {
            assert_eq!(z.pow(e).unwrap(), Cyclotomic::root(&f, e));
        }
    }
}
