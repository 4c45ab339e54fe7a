//! Hyperplanes, multiarrangements, and the B2 permutation symmetry.

mod format;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::poly::default_var_names;
use crate::exactalg::{Field, Matrix, Polynomial, Scalar};

pub use format::{
    field_words, load, load_in, parse_field, parse_json, parse_json_in, parse_text, parse_text_in, to_json, to_text,
};

/// A linear hyperplane `ker(alpha)`, stored with the first nonzero coefficient
/// of `alpha` scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    coeffs: Vec<Scalar>,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Arrangement("zero linear form does not define a hyperplane".into()))?;
        let inv = lead.inv().expect("nonzero");
        let coeffs = coeffs.iter().map(|c| c * &inv).collect();
        Ok(Hyperplane { coeffs })
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn linear_form(&self) -> Polynomial {
        Polynomial::linear_form(self.field(), &self.coeffs)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        HyperplaneDisplay { h: self, names }
    }
}

struct HyperplaneDisplay<'a> {
    h: &'a Hyperplane,
    names: &'a [String],
}

impl fmt::Display for HyperplaneDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ker({})", self.h.linear_form().display_with(self.names))
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.dim());
        write!(f, "ker({})", self.linear_form().display_with(&names))
    }
}

/// A central arrangement with positive multiplicities. Hyperplanes are kept
/// in lexicographic order of their normalized coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiarrangement {
    field: Field,
    dim: usize,
    mult: BTreeMap<Hyperplane, u32>,
}

impl Multiarrangement {
    pub fn new(field: Field, dim: usize) -> Self {
        Multiarrangement { field, dim, mult: BTreeMap::new() }
    }

    /// Builds an arrangement from raw linear forms. Forms defining the same
    /// hyperplane have their multiplicities added; multiplicity 0 is dropped.
    pub fn from_forms(field: Field, dim: usize, forms: Vec<(Vec<Scalar>, u32)>) -> Result<Self> {
        let mut a = Self::new(field, dim);
        for (coeffs, m) in forms {
            if coeffs.len() != dim {
                return Err(Error::Arrangement(format!("linear form has {} coefficients, expected {dim}", coeffs.len())));
            }
            if coeffs.iter().any(|c| c.field() != field) {
                return Err(Error::Arrangement(format!("coefficient outside {field}")));
            }
            let h = Hyperplane::new(coeffs)?;
            a.insert(h, m);
        }
        Ok(a)
    }

    pub fn from_i64(field: Field, dim: usize, forms: &[(&[i64], u32)]) -> Result<Self> {
        Self::from_forms(
            field,
            dim,
            forms.iter().map(|(c, m)| (c.iter().map(|&v| field.from_i64(v)).collect(), *m)).collect(),
        )
    }

    /// Adds `m` to the multiplicity of `h`.
    pub fn insert(&mut self, h: Hyperplane, m: u32) {
        assert_eq!(h.dim(), self.dim, "hyperplane dimension mismatch");
        if m > 0 {
            *self.mult.entry(h).or_insert(0) += m;
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mult.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Hyperplane, u32)> {
        self.mult.iter().map(|(h, &m)| (h, m))
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = &Hyperplane> {
        self.mult.keys()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.mult.values().copied().collect()
    }

    pub fn multiplicity(&self, h: &Hyperplane) -> u32 {
        self.mult.get(h).copied().unwrap_or(0)
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.mult.contains_key(h)
    }

    /// `|m|`.
    pub fn total(&self) -> u32 {
        self.mult.values().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.mult.values().all(|&m| m == 1)
    }

    pub fn underlying(&self) -> Multiarrangement {
        Multiarrangement { field: self.field, dim: self.dim, mult: self.mult.keys().map(|h| (h.clone(), 1)).collect() }
    }

    pub fn with_multiplicity(&self, h: &Hyperplane, m: u32) -> Multiarrangement {
        let mut out = self.clone();
        if m == 0 {
            out.mult.remove(h);
        } else {
            out.mult.insert(h.clone(), m);
        }
        out
    }

    /// Rank of the span of the defining forms.
    pub fn rank(&self) -> usize {
        self.coefficient_matrix().rank()
    }

    pub fn coefficient_matrix(&self) -> Matrix {
        let rows = self.mult.keys().map(|h| h.coeffs.clone()).collect();
        Matrix::from_rows(self.field, self.dim, rows).expect("hyperplane dimensions agree")
    }

    /// `Q(A,m) = prod alpha_H^m(H)`.
    pub fn defining_polynomial(&self) -> Polynomial {
        self.mult
            .iter()
            .fold(Polynomial::one(self.field, self.dim), |acc, (h, &m)| &acc * &h.linear_form().pow(m))
    }

    /// Lowers `m(h)` by one, removing `h` when it reaches 0.
    pub fn deletion(&self, h: &Hyperplane) -> Result<Multiarrangement> {
        let m = self.multiplicity(h);
        if m == 0 {
            return Err(Error::Arrangement(format!("{h} is not in the arrangement")));
        }
        Ok(self.with_multiplicity(h, m - 1))
    }

    /// Raises `m(h)` by one, adding `h` if needed.
    pub fn addition(&self, h: &Hyperplane) -> Multiarrangement {
        let mut out = self.clone();
        out.insert(h.clone(), 1);
        out
    }

    /// Every `m(H) < |m|/2`.
    pub fn is_balanced(&self) -> bool {
        let total = self.total();
        self.mult.values().all(|&m| 2 * m < total)
    }

    /// The multiplicities on `x, y, x-y, x+y` if every hyperplane is one of
    /// these four (absent ones count as 0).
    pub fn b2_tuple(&self) -> Option<[u32; 4]> {
        if self.dim != 2 || self.field.characteristic() == 2 {
            return None;
        }
        let lines = b2_lines(self.field);
        if self.mult.keys().any(|h| !lines.contains(h)) {
            return None;
        }
        Some(std::array::from_fn(|i| self.multiplicity(&lines[i])))
    }

    /// The multiplicities on `x, y, x-y` if every hyperplane is one of these.
    pub fn a2_tuple(&self) -> Option<[u32; 3]> {
        if self.dim != 2 {
            return None;
        }
        let lines = &b2_lines(self.field)[..3];
        if self.mult.keys().any(|h| !lines.contains(h)) {
            return None;
        }
        Some(std::array::from_fn(|i| self.multiplicity(&lines[i])))
    }

    pub fn var_names(&self) -> Vec<String> {
        default_var_names(self.dim)
    }
}

impl fmt::Display for Multiarrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "1");
        }
        let names = self.var_names();
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(h, &m)| {
                let form = h.linear_form().display_with(&names).to_string();
                let form = if form.contains(' ') || form.contains('*') { format!("({form})") } else { form };
                if m == 1 {
                    form
                } else {
                    format!("{form}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `x, y, x-y, x+y` in that order. In characteristic 2 the last two coincide.
pub fn b2_lines(field: Field) -> [Hyperplane; 4] {
    let h = |c: &[i64]| Hyperplane::from_i64(field, c).expect("nonzero");
    [h(&[1, 0]), h(&[0, 1]), h(&[1, -1]), h(&[1, 1])]
}

/// The B2 multiarrangement `x^m1 y^m2 (x-y)^m3 (x+y)^m4`.
pub fn b2(field: Field, m: [u32; 4]) -> Result<Multiarrangement> {
    if field.characteristic() == 2 {
        return Err(Error::Unsupported("B2 needs characteristic other than 2".into()));
    }
    let mut a = Multiarrangement::new(field, 2);
    for (h, k) in b2_lines(field).into_iter().zip(m) {
        a.insert(h, k);
    }
    Ok(a)
}

/// The A2 multiarrangement `x^p y^q (x-y)^r`.
pub fn a2(field: Field, m: [u32; 3]) -> Multiarrangement {
    let mut a = Multiarrangement::new(field, 2);
    for (h, k) in b2_lines(field).into_iter().zip(m) {
        a.insert(h, k);
    }
    a
}

/// `x, y, x-y, x+y, z, x-z, x+z, y-z, y+z` in that order.
pub fn b3_lines(field: Field) -> [Hyperplane; 9] {
    let h = |c: &[i64]| Hyperplane::from_i64(field, c).expect("nonzero");
    [
        h(&[1, 0, 0]),
        h(&[0, 1, 0]),
        h(&[1, -1, 0]),
        h(&[1, 1, 0]),
        h(&[0, 0, 1]),
        h(&[1, 0, -1]),
        h(&[1, 0, 1]),
        h(&[0, 1, -1]),
        h(&[0, 1, 1]),
    ]
}

/// The B3 multiarrangement with multiplicities in [`b3_lines`] order.
pub fn b3(field: Field, m: [u32; 9]) -> Result<Multiarrangement> {
    if field.characteristic() == 2 {
        return Err(Error::Unsupported("B3 needs characteristic other than 2".into()));
    }
    let mut a = Multiarrangement::new(field, 3);
    for (h, k) in b3_lines(field).into_iter().zip(m) {
        a.insert(h, k);
    }
    Ok(a)
}

/// The three generators of the symmetry group of B2 multiplicities, acting on
/// `(m1, m2, m3, m4)` ordered as `x, y, x-y, x+y`.
pub const B2_GENERATORS: [[usize; 4]; 3] = [[0, 1, 3, 2], [1, 0, 2, 3], [2, 3, 0, 1]];

/// The orbit of `m` under the group generated by [`B2_GENERATORS`], sorted and
/// without duplicates.
pub fn b2_orbit(m: [u32; 4]) -> Vec<[u32; 4]> {
    let mut seen = vec![m];
    let mut i = 0;
    while i < seen.len() {
        let cur = seen[i];
        for g in B2_GENERATORS {
            let next = [cur[g[0]], cur[g[1]], cur[g[2]], cur[g[3]]];
            if !seen.contains(&next) {
                seen.push(next);
            }
        }
        i += 1;
    }
    seen.sort();
    seen
}

/// Orbit representative with `m2 - m1 >= m4 - m3 >= 0`, lexicographically
/// smallest among those.
pub fn b2_canonical_permutation(m: [u32; 4]) -> [u32; 4] {
    let ok = |t: &[u32; 4]| {
        let (a, b) = (t[1] as i64 - t[0] as i64, t[3] as i64 - t[2] as i64);
        a >= b && b >= 0
    };
    b2_orbit(m).into_iter().find(ok).expect("every orbit has a representative")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn normalization_is_idempotent() {
        let h = Hyperplane::from_i64(Q, &[0, -2, 4]).unwrap();
        assert_eq!(h.coefficients(), &[Q.zero(), Q.one(), Q.from_i64(-2)]);
        assert_eq!(Hyperplane::new(h.coefficients().to_vec()).unwrap(), h);
        assert!(Hyperplane::from_i64(Q, &[0, 0]).is_err());
    }

    #[test]
    fn defining_polynomials() {
        let simple = b2(Q, [1, 1, 1, 1]).unwrap();
        let x = Polynomial::var(Q, 2, 0);
        let y = Polynomial::var(Q, 2, 1);
        let expect = &(&(&x * &y) * &(&x - &y)) * &(&x + &y);
        assert_eq!(simple.defining_polynomial(), expect);
        let mk = b2(Q, [2, 4, 1, 4]).unwrap().defining_polynomial();
        let expect = &(&(&x.pow(2) * &y.pow(4)) * &(&x - &y)) * &(&x + &y).pow(4);
        assert_eq!(mk, expect);
        assert_eq!(mk.total_degree(), Some(11));
        assert_eq!(Multiarrangement::new(Q, 3).defining_polynomial(), Polynomial::one(Q, 3));
    }

    #[test]
    fn deletion_and_addition() {
        let a = b2(Q, [2, 4, 1, 4]).unwrap();
        let [hx, hy, hxmy, _] = b2_lines(Q);
        let d = a.deletion(&hy).unwrap();
        assert_eq!(d.b2_tuple(), Some([2, 3, 1, 4]));
        assert_eq!(d.addition(&hy), a);
        let d = a.deletion(&hxmy).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.b2_tuple(), Some([2, 4, 0, 4]));
        assert!(d.deletion(&hxmy).is_err());
        assert_eq!(a.deletion(&hx).unwrap().total(), 10);
    }

    #[test]
    fn balance() {
        assert!(b2(Q, [2, 4, 1, 4]).unwrap().is_balanced());
        assert!(b2(Q, [3, 5, 2, 2]).unwrap().is_balanced());
        assert!(!b2(Q, [1, 1, 5, 1]).unwrap().is_balanced());
    }

    #[test]
    fn canonical_permutation() {
        assert_eq!(b2_canonical_permutation([2, 2, 1, 3]), [1, 3, 2, 2]);
        assert_eq!(b2_canonical_permutation([1, 1, 1, 1]), [1, 1, 1, 1]);
        for k in 1..8 {
            assert_eq!(b2_canonical_permutation([k, 2, k, 1]), b2_canonical_permutation([2, k, 1, k]));
        }
        assert_eq!(b2_orbit([1, 2, 3, 4]).len(), 8);
        let m = [3, 5, 2, 2];
        let orbit = b2_orbit(m);
        assert_eq!(orbit.len(), 4);
        let rep = b2_canonical_permutation(m);
        assert!(orbit.iter().all(|&o| b2_canonical_permutation(o) == rep));
    }

    #[test]
    fn b2_in_characteristic_two_is_rejected() {
        assert!(b2(Field::gf(2, 1).unwrap(), [1, 1, 1, 1]).is_err());
    }

    #[test]
    fn duplicate_forms_merge() {
        let a = Multiarrangement::from_i64(Q, 2, &[(&[1, 0], 1), (&[2, 0], 2), (&[0, 1], 0)]).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.total(), 3);
    }
}
