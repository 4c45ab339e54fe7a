//! Coefficient fields: the rationals with unbounded integers and the finite
//! fields GF(p) and GF(p^2).

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Description of a field before it is validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// GF(p^degree). `modulus = [c0, c1]` stands for `t^2 + c1*t + c0` and is
    /// only consulted when `degree == 2`; `None` picks the default modulus.
    Finite {
        p: u32,
        degree: u32,
        modulus: Option<[u32; 2]>,
    },
}

/// A validated finite field GF(p) or GF(p^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    modulus: [u32; 2],
}

/// A validated coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Finite(FiniteField),
}

/// Element of GF(p) or GF(p^2), stored as `c[0] + c[1]*t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf {
    field: FiniteField,
    c: [u32; 2],
}

/// An exact field element. Both operands of an arithmetic operation must come
/// from the same field; mixing fields is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Finite(Gf),
}

const MAX_PRIME: u32 = 1 << 20;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn quadratic_has_root(p: u32, modulus: [u32; 2]) -> bool {
    let p64 = p as u64;
    (0..p64).any(|x| (x * x + modulus[1] as u64 * x + modulus[0] as u64).is_multiple_of(p64))
}

impl FiniteField {
    pub fn new(p: u32, degree: u32, modulus: Option<[u32; 2]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::Field(format!("prime {p} exceeds supported bound {MAX_PRIME}")));
        }
        match degree {
            1 => Ok(FiniteField { p, degree, modulus: [0, 0] }),
            2 => {
                let modulus = match modulus {
                    Some([c0, c1]) => [c0 % p, c1 % p],
                    None => Self::default_modulus(p),
                };
                if quadratic_has_root(p, modulus) {
                    return Err(Error::Field(format!(
                        "t^2 + {}*t + {} is reducible over GF({p})",
                        modulus[1], modulus[0]
                    )));
                }
                Ok(FiniteField { p, degree, modulus })
            }
            e => Err(Error::Field(format!("extension degree {e} is not supported (max 2)"))),
        }
    }

    /// First irreducible `t^2 + c1*t + c0` in the order (c1, c0) ascending.
    /// For p = 3 this is `t^2 + 1`.
    pub fn default_modulus(p: u32) -> [u32; 2] {
        for c1 in 0..p {
            for c0 in 1..p {
                if !quadratic_has_root(p, [c0, c1]) {
                    return [c0, c1];
                }
            }
        }
        unreachable!("every prime field has an irreducible quadratic")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> [u32; 2] {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.degree)
    }

    pub fn element(&self, c0: i64, c1: i64) -> Gf {
        let p = self.p as i64;
        let c1 = if self.degree == 1 { 0 } else { c1.rem_euclid(p) as u32 };
        Gf { field: *self, c: [c0.rem_euclid(p) as u32, c1] }
    }

    /// Element with canonical index `i = c0 + p*c1`.
    pub fn from_index(&self, i: u64) -> Gf {
        let p = self.p as u64;
        Gf { field: *self, c: [(i % p) as u32, (i / p) as u32] }
    }
}

impl Gf {
    pub fn field(&self) -> FiniteField {
        self.field
    }

    pub fn coefficients(&self) -> [u32; 2] {
        self.c
    }

    pub fn index(&self) -> u64 {
        self.c[0] as u64 + self.field.p as u64 * self.c[1] as u64
    }

    fn check(&self, other: &Gf) {
        assert_eq!(self.field, other.field, "arithmetic across different finite fields");
    }

    fn add(&self, o: &Gf) -> Gf {
        self.check(o);
        let p = self.field.p;
        Gf { field: self.field, c: [(self.c[0] + o.c[0]) % p, (self.c[1] + o.c[1]) % p] }
    }

    fn neg(&self) -> Gf {
        let p = self.field.p;
        Gf { field: self.field, c: [(p - self.c[0]) % p, (p - self.c[1]) % p] }
    }

    fn mul(&self, o: &Gf) -> Gf {
        self.check(o);
        let p = self.field.p as u64;
        let (a0, a1) = (self.c[0] as u64, self.c[1] as u64);
        let (b0, b1) = (o.c[0] as u64, o.c[1] as u64);
        let [m0, m1] = [self.field.modulus[0] as u64, self.field.modulus[1] as u64];
        let hi = a1 * b1 % p;
        // t^2 = -m1*t - m0
        let c0 = (a0 * b0 % p + (p - hi * m0 % p)) % p;
        let c1 = ((a0 * b1 + a1 * b0) % p + (p - hi * m1 % p)) % p;
        Gf { field: self.field, c: [c0 as u32, c1 as u32] }
    }

    fn pow(&self, mut e: u64) -> Gf {
        let mut base = *self;
        let mut acc = self.field.element(1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }

    fn inv(&self) -> Option<Gf> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.field.size() - 2))
        }
    }
}

impl Field {
    pub fn make(spec: FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Rationals => Ok(Field::Rationals),
            FieldSpec::Finite { p, degree, modulus } => {
                Ok(Field::Finite(FiniteField::new(p, degree, modulus)?))
            }
        }
    }

    pub fn gf(p: u32, degree: u32) -> Result<Field> {
        Field::make(FieldSpec::Finite { p, degree, modulus: None })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, Field::Rationals)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Finite(f) => f.p,
        }
    }

    /// `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Finite(f) => Some(f.size()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Finite(f) => Scalar::Finite(f.element(n, 0)),
        }
    }

    /// `num/den`; `den` must be nonzero in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or_else(|| Error::Parse(format!("denominator {den} vanishes in {self}")))?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// The generator `t` of GF(p^2) over GF(p).
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::Finite(f) if f.degree == 2 => Some(Scalar::Finite(f.element(0, 1))),
            _ => None,
        }
    }

    /// All elements in canonical index order; `None` for the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Finite(f) => Some((0..f.size()).map(|i| Scalar::Finite(f.from_index(i))).collect()),
        }
    }

    /// Parses integers, `p/q`, and (finite fields) `a+b*t` style elements.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        match self {
            Field::Rationals => {
                if s.contains('t') {
                    return Err(Error::Parse(format!("'{s}' is not a rational number")));
                }
                parse_rational(s).map(Scalar::Rational)
            }
            Field::Finite(_) => self.parse_finite(s),
        }
    }

    fn parse_finite(&self, s: &str) -> Result<Scalar> {
        let mut acc = self.zero();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut current = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !current.ends_with('/') {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let value = if let Some(coef) = body.strip_suffix("*t") {
                let t = self
                    .generator()
                    .ok_or_else(|| Error::Parse(format!("'{s}': no generator t in {self}")))?;
                &self.parse_plain(coef, s)? * &t
            } else if body == "t" {
                self.generator()
                    .ok_or_else(|| Error::Parse(format!("'{s}': no generator t in {self}")))?
            } else {
                self.parse_plain(body, s)?
            };
            acc = if neg { &acc - &value } else { &acc + &value };
        }
        Ok(acc)
    }

    fn parse_plain(&self, body: &str, whole: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("malformed scalar '{whole}'"));
        match body.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.parse().map_err(|_| bad())?;
                let d: i64 = d.parse().map_err(|_| bad())?;
                self.ratio(n, d)
            }
            None => Ok(self.from_i64(body.parse().map_err(|_| bad())?)),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Finite(ff) if ff.degree == 1 => write!(f, "GF({})", ff.p),
            Field::Finite(ff) => write!(
                f,
                "GF({}^2) = GF({})[t]/(t^2 + {}*t + {})",
                ff.p, ff.p, ff.modulus[1], ff.modulus[0]
            ),
        }
    }
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Finite(g) => Field::Finite(g.field),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Finite(g) => g.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Finite(g) => g.c == [1, 0],
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => None,
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
            Scalar::Finite(g) => g.inv().map(Scalar::Finite),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(num_traits::pow(r.clone(), e as usize)),
            Scalar::Finite(g) => Scalar::Finite(g.pow(e as u64)),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Finite(_) => None,
        }
    }

    /// Integer value if this is a rational with denominator 1 that fits an i64.
    pub fn to_i64(&self) -> Option<i64> {
        self.as_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())
    }

    /// Decimal rendering of a rational rounded half away from zero to
    /// `places` digits; `None` for finite-field elements.
    pub fn to_decimal(&self, places: u32) -> Option<String> {
        let r = self.as_rational()?;
        let scale = BigInt::from(10u32).pow(places);
        let scaled = (r * BigRational::from_integer(scale)).round().to_integer();
        let neg = scaled < BigInt::from(0);
        let digits = scaled.magnitude().to_string();
        let places = places as usize;
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        let sign = if neg { "-" } else { "" };
        Some(if places == 0 { format!("{sign}{int}") } else { format!("{sign}{int}.{frac}") })
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    fn pair<'a>(&'a self, o: &'a Scalar) -> Pair<'a> {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Pair::Q(a, b),
            (Scalar::Finite(a), Scalar::Finite(b)) => Pair::F(a, b),
            _ => panic!("arithmetic between rational and finite-field scalars"),
        }
    }
}

enum Pair<'a> {
    Q(&'a BigRational, &'a BigRational),
    F(&'a Gf, &'a Gf),
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Finite(a), Scalar::Finite(b)) => {
                (a.field, a.index()).cmp(&(b.field, b.index()))
            }
            (Scalar::Rational(_), Scalar::Finite(_)) => Ordering::Less,
            (Scalar::Finite(_), Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Finite(g) => {
                let [c0, c1] = g.c;
                match (c0, c1) {
                    (_, 0) => write!(f, "{c0}"),
                    (0, 1) => write!(f, "t"),
                    (0, _) => write!(f, "{c1}*t"),
                    (_, 1) => write!(f, "{c0}+t"),
                    _ => write!(f, "{c0}+{c1}*t"),
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &'a Scalar) -> Scalar {
        match self.pair(o) {
            Pair::Q(a, b) => Scalar::Rational(a + b),
            Pair::F(a, b) => Scalar::Finite(a.add(b)),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &'a Scalar) -> Scalar {
        match self.pair(o) {
            Pair::Q(a, b) => Scalar::Rational(a - b),
            Pair::F(a, b) => Scalar::Finite(a.add(&b.neg())),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &'a Scalar) -> Scalar {
        match self.pair(o) {
            Pair::Q(a, b) => Scalar::Rational(a * b),
            Pair::F(a, b) => Scalar::Finite(a.mul(b)),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &'a Scalar) -> Scalar {
        let inv = o.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Finite(g) => Scalar::Finite(g.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_round_half_away_from_zero() {
        assert_eq!(Scalar::rational(1, 3).to_decimal(3).unwrap(), "0.333");
        assert_eq!(Scalar::rational(-2, 3).to_decimal(3).unwrap(), "-0.667");
        assert_eq!(Scalar::rational(1, 2000).to_decimal(3).unwrap(), "0.001");
        assert_eq!(Scalar::rational(-1, 2000).to_decimal(3).unwrap(), "-0.001");
        assert_eq!(Scalar::rational(-1, 3000).to_decimal(3).unwrap(), "0.000");
        assert_eq!(Scalar::rational(12, 1).to_decimal(0).unwrap(), "12");
        assert!(Field::gf(3, 1).unwrap().one().to_decimal(2).is_none());
    }

    #[test]
    fn gf9_with_default_modulus() {
        let k = Field::gf(3, 2).unwrap();
        let Field::Finite(ff) = k else { panic!() };
        assert_eq!(ff.modulus(), [1, 0]);
        let elems = k.elements().unwrap();
        assert_eq!(elems.len(), 9);
        let w = k.generator().unwrap();
        for c in 0..3 {
            assert_ne!(w, k.from_i64(c));
        }
        // w^2 = -1 = 2
        assert_eq!(w.pow(2), k.from_i64(2));
    }

    #[test]
    fn rational_sum() {
        let q = Field::Rationals;
        let a = q.ratio(1, 3).unwrap() + q.ratio(1, 6).unwrap();
        assert_eq!(a, q.ratio(1, 2).unwrap());
        assert_eq!(Scalar::rational(2, -4), q.ratio(-1, 2).unwrap());
    }

    #[test]
    fn gf3_two_times_two() {
        let k = Field::gf(3, 1).unwrap();
        assert_eq!(&k.from_i64(2) * &k.from_i64(2), k.one());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Field::gf(9, 1).is_err());
        assert!(Field::gf(1, 1).is_err());
        assert!(Field::gf(5, 3).is_err());
        // t^2 + 2 = (t+1)(t+2) over GF(3)
        let spec = FieldSpec::Finite { p: 3, degree: 2, modulus: Some([2, 0]) };
        assert!(Field::make(spec).is_err());
    }

    #[test]
    fn lagrange_in_every_small_field() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (5, 2), (7, 2), (13, 1)] {
            let k = Field::gf(p, e).unwrap();
            let q = k.size().unwrap() as u32;
            for a in k.elements().unwrap().iter().filter(|a| !a.is_zero()) {
                assert!(a.pow(q - 1).is_one(), "{a} in {k}");
                assert!((a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn parses_finite_elements() {
        let k = Field::gf(3, 2).unwrap();
        let t = k.generator().unwrap();
        assert_eq!(k.parse("1+2*t").unwrap(), &k.one() + &(&k.from_i64(2) * &t));
        assert_eq!(k.parse("-t").unwrap(), -&t);
        assert_eq!(k.parse("t").unwrap(), t);
        assert_eq!(k.parse("4").unwrap(), k.one());
        assert_eq!(k.parse("1/2").unwrap(), k.from_i64(2));
        assert!(k.parse("x").is_err());
        let q = Field::Rationals;
        assert_eq!(q.parse("-3/6").unwrap(), Scalar::rational(-1, 2));
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("t").is_err());
    }

    #[test]
    fn display_round_trips() {
        let k = Field::gf(5, 2).unwrap();
        for a in k.elements().unwrap() {
            assert_eq!(k.parse(&a.to_string()).unwrap(), a);
        }
    }
}
