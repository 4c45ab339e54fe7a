//! Multivariate polynomials over a [`Field`], stored densely by exponent
//! vector.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// A polynomial with no stored zero coefficients. Terms are keyed by exponent
/// vector and ordered lexicographically, which is also the monomial order used
/// by [`Polynomial::exact_div`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

const DEFAULT_NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= DEFAULT_NAMES.len() {
        DEFAULT_NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn monomial(field: Field, exps: Monomial, c: Scalar) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    /// `sum_i coeffs[i] * x_i`.
    pub fn linear_form(field: Field, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c * x^exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Monomial, c: Scalar) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// True for the zero polynomial and for polynomials whose terms all share
    /// one total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^exps`.
    pub fn shift(&self, exps: &[u32]) -> Self {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(exps).map(|(u, v)| u + v).collect(), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Replaces variable `var` by `value` (a polynomial in the same ring).
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Self {
        assert_eq!(value.nvars, self.nvars);
        let mut powers: Vec<Polynomial> = vec![Self::one(self.field, self.nvars)];
        let mut out = Self::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] = 0;
            out = &out + &powers[k].shift(&rest).scale(c);
        }
        out
    }

    /// Antiderivative in `var` with zero constant of integration.
    pub fn antiderivative(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            let k = e[var] as i64 + 1;
            let inv = self.field.from_i64(k).inv().ok_or_else(|| {
                Error::Unsupported(format!("cannot integrate x^{} in characteristic {}", k - 1, self.field.characteristic()))
            })?;
            let mut e2 = e.clone();
            e2[var] += 1;
            out.add_term(e2, c * &inv);
        }
        Ok(out)
    }

    /// Drops variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.field, self.nvars - 1);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                return Err(Error::Consistency(format!("variable {var} still occurs")));
            }
            let mut e2 = e.clone();
            e2.remove(var);
            out.terms.insert(e2, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / d` if `d` divides `self`, else `None`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dl_e, dl_c) = d.leading_term()?;
        let dl_inv = dl_c.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field, self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(dl_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Monomial = re.iter().zip(dl_e).map(|(a, b)| a - b).collect();
            let qc = rc * &dl_inv;
            rem = &rem - &d.shift(&qe).scale(&qc);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// `Some(c)` with `self = c * other`, `c` a nonzero scalar.
    pub fn scalar_ratio(&self, other: &Polynomial) -> Option<Scalar> {
        let (e, a) = self.leading_term()?;
        let (f, b) = other.leading_term()?;
        if e != f {
            return None;
        }
        let c = a / b;
        if *self == other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { self.names[j].clone() } else { format!("{}^{k}", self.names[j]) })
                .collect();
            let coef = mag.to_string();
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{coef}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-self.field.one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn xy() -> (Polynomial, Polynomial) {
        (Polynomial::var(q(), 2, 0), Polynomial::var(q(), 2, 1))
    }

    #[test]
    fn no_zero_coefficients_after_cancellation() {
        let (x, y) = xy();
        let p = &(&x + &y) - &x;
        assert_eq!(p, y);
        let z = &p - &y;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        let a = &x - &y;
        let b = &(&x + &y) * &(&x * &y);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!((&prod + &x).exact_div(&a).is_none());
        assert!(x.exact_div(&y).is_none());
    }

    #[test]
    fn substitute_and_integrate() {
        let k = q();
        let t = Polynomial::var(k, 2, 0);
        let x = Polynomial::var(k, 2, 1);
        // integral_0^x t dt = x^2/2
        let f = t.antiderivative(0).unwrap().substitute(0, &x).remove_var(0).unwrap();
        assert_eq!(f, Polynomial::monomial(k, vec![2], Scalar::rational(1, 2)));
    }

    #[test]
    fn display_forms() {
        let (x, y) = xy();
        let p = &(&x * &x) - (&y.scale(&Scalar::rational(1, 2)));
        assert_eq!(p.to_string(), "x^2 - 1/2*y");
        assert_eq!(Polynomial::zero(q(), 2).to_string(), "0");
    }

    #[test]
    fn scalar_ratio_detects_multiples() {
        let (x, y) = xy();
        let p = &x * &y;
        assert_eq!(p.scale(&Scalar::rational(-3, 1)).scalar_ratio(&p), Some(Scalar::rational(-3, 1)));
        assert_eq!((&p + &x).scalar_ratio(&p), None);
    }
}
