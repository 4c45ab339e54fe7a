//! Logarithmic derivation modules `D(A,m)`: degree-wise dimensions, the
//! rank-2 exponent solver, Saito's criterion, and the derivations
//! `theta_{a,b,c}` with the integral `I(a,b,c)`.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::arrangement::{a2, Hyperplane, Multiarrangement};
use crate::error::{Error, Result};
use crate::exactalg::poly::{default_var_names, Monomial};
use crate::exactalg::{Field, Matrix, PolyMatrix, Polynomial, Scalar};

/// `theta = sum_i f_i d/dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub components: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(components: Vec<Polynomial>) -> Self {
        Derivation { components }
    }

    pub fn euler(field: Field, n: usize) -> Self {
        Derivation { components: (0..n).map(|i| Polynomial::var(field, n, i)).collect() }
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Common degree of the nonzero components; `None` for zero or
    /// inhomogeneous derivations.
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for c in &self.components {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return None;
            }
            let d = c.total_degree();
            if deg.is_some() && deg != d {
                return None;
            }
            deg = d;
        }
        deg
    }

    /// `theta(alpha_H)`.
    pub fn apply(&self, h: &Hyperplane) -> Polynomial {
        let mut out = Polynomial::zero(self.field(), self.nvars());
        for (a, f) in h.coefficients().iter().zip(&self.components) {
            if !a.is_zero() {
                out = &out + &f.scale(a);
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Derivation {
        Derivation { components: self.components.iter().map(|c| c * p).collect() }
    }

    /// Membership in `D(A,m)`: `alpha_H^m(H)` divides `theta(alpha_H)` for
    /// every `H`, checked by exact polynomial division.
    pub fn in_module(&self, a: &Multiarrangement) -> bool {
        a.iter().all(|(h, m)| {
            let v = self.apply(h);
            v.is_zero() || v.exact_div(&h.linear_form().pow(m)).is_some()
        })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars());
        let parts: Vec<String> = self
            .components
            .iter()
            .zip(&names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({})*d{n}", c.display_with(&names)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// All exponent vectors of total degree `d` in `n` variables, in
/// lexicographically decreasing order.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The linear system whose kernel is the degree-`d` part of `D(A,m)`.
/// Unknowns are the coefficients of each component on [`monomials`]`(l, d)`,
/// component-major.
fn condition_matrix(a: &Multiarrangement, d: u32) -> (Matrix, Vec<Monomial>) {
    let field = a.field();
    let n = a.dim();
    let basis = monomials(n, d);
    let cols = n * basis.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (h, m) in a.iter() {
        // alpha_H becomes the coordinate at its pivot after the substitution
        // x_p -> x_p - sum_{j != p} a_j x_j; divisibility by alpha_H^m is the
        // vanishing of every coefficient of x_p-degree below m.
        let coeffs = h.coefficients();
        let p = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
        let mut shift = Polynomial::var(field, n, p);
        for (j, c) in coeffs.iter().enumerate() {
            if j != p && !c.is_zero() {
                shift = &shift - &Polynomial::var(field, n, j).scale(c);
            }
        }
        let mut row_of: HashMap<Monomial, usize> = HashMap::new();
        for (k, mono) in basis.iter().enumerate() {
            let sub = Polynomial::monomial(field, mono.clone(), field.one()).substitute(p, &shift);
            for (e, c) in sub.terms() {
                if e[p] >= m {
                    continue;
                }
                let r = *row_of.entry(e.clone()).or_insert_with(|| {
                    rows.push(vec![field.zero(); cols]);
                    rows.len() - 1
                });
                for (i, ai) in coeffs.iter().enumerate() {
                    if !ai.is_zero() {
                        let col = i * basis.len() + k;
                        rows[r][col] = &rows[r][col] + &(ai * c);
                    }
                }
            }
        }
    }
    (Matrix::from_rows(field, cols, rows).expect("consistent row length"), basis)
}

fn vector_to_derivation(field: Field, n: usize, basis: &[Monomial], v: &[Scalar]) -> Derivation {
    let components = (0..n)
        .map(|i| {
            let mut p = Polynomial::zero(field, n);
            for (k, mono) in basis.iter().enumerate() {
                p.add_term(mono.clone(), v[i * basis.len() + k].clone());
            }
            p
        })
        .collect();
    Derivation { components }
}

fn derivation_to_vector(theta: &Derivation, basis: &[Monomial]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(theta.nvars() * basis.len());
    for c in &theta.components {
        for mono in basis {
            out.push(c.coefficient(mono));
        }
    }
    out
}

/// A basis of the homogeneous degree-`d` derivations in `D(A,m)`.
pub fn derivation_space(a: &Multiarrangement, d: u32) -> Vec<Derivation> {
    let (m, basis) = condition_matrix(a, d);
    m.kernel_basis()
        .iter()
        .map(|v| vector_to_derivation(a.field(), a.dim(), &basis, v))
        .collect()
}

pub fn derivation_space_dim(a: &Multiarrangement, d: u32) -> usize {
    let (m, _) = condition_matrix(a, d);
    m.cols() - m.rank()
}

/// Dimension of degree `d` in a free rank-2 module with basis degrees
/// `d1, d2`.
pub fn free_rank2_dim(d: u32, d1: u32, d2: u32) -> usize {
    let part = |e: u32| if d >= e { (d - e + 1) as usize } else { 0 };
    part(d1) + part(d2)
}

/// Result of the rank-2 exponent solver.
#[derive(Clone, Debug)]
pub struct Rank2Solution {
    pub exponents: (u32, u32),
    pub basis: [Derivation; 2],
    /// `table[d]` = dimension of the degree-`d` part, for `d = 0..=|m|`.
    pub table: Vec<usize>,
}

/// Exponents of a multiarrangement in two variables, read off from the
/// degree-wise dimensions of `D(A,m)` and certified by Saito's criterion.
pub fn rank2_exponents_solver(a: &Multiarrangement) -> Result<Rank2Solution> {
    if a.dim() != 2 {
        return Err(Error::Hypothesis(format!("the solver needs 2 variables, got {}", a.dim())));
    }
    let total = a.total();
    if total == 0 {
        return Err(Error::Hypothesis("empty multiplicity".into()));
    }
    let field = a.field();
    let mut table = Vec::new();
    let mut d1 = None;
    let mut d2 = None;
    let mut theta1: Option<Derivation> = None;
    let mut theta2: Option<Derivation> = None;
    for d in 0..=total {
        let (m, basis) = condition_matrix(a, d);
        let kernel = m.kernel_basis();
        table.push(kernel.len());
        match (d1, d2) {
            (None, _) if !kernel.is_empty() => {
                d1 = Some(d);
                theta1 = Some(vector_to_derivation(field, 2, &basis, &kernel[0]));
                if kernel.len() >= 2 {
                    d2 = Some(d);
                    theta2 = Some(vector_to_derivation(field, 2, &basis, &kernel[1]));
                }
            }
            (Some(e1), None) if kernel.len() > free_rank2_dim(d, e1, u32::MAX) => {
                d2 = Some(d);
                let t1 = theta1.as_ref().expect("set with d1");
                let multiples: Vec<Vec<Scalar>> = monomials(2, d - e1)
                    .into_iter()
                    .map(|mono| derivation_to_vector(&t1.mul_poly(&Polynomial::monomial(field, mono, field.one())), &basis))
                    .collect();
                let span = Matrix::from_rows(field, m.cols(), multiples.clone())?;
                let r0 = span.rank();
                let pick = kernel.iter().find(|v| {
                    let mut ext = span.clone();
                    ext.push_row(v.to_vec());
                    ext.rank() > r0
                });
                let v = pick.ok_or_else(|| Error::Consistency("no new generator despite a dimension jump".into()))?;
                theta2 = Some(vector_to_derivation(field, 2, &basis, v));
            }
            _ => {}
        }
    }
    let (Some(d1), Some(d2)) = (d1, d2) else {
        return Err(Error::Consistency(format!("fewer than two generators found up to degree {total}")));
    };
    if d1 + d2 != total {
        return Err(Error::Consistency(format!("exponents ({d1}, {d2}) do not sum to |m| = {total}")));
    }
    for (d, &dim) in table.iter().enumerate() {
        if dim != free_rank2_dim(d as u32, d1, d2) {
            return Err(Error::Consistency(format!("dimension {dim} in degree {d} contradicts exponents ({d1}, {d2})")));
        }
    }
    let basis = [theta1.expect("set"), theta2.expect("set")];
    if !saito_check(&basis, a)? {
        return Err(Error::Consistency(format!("basis of degrees ({d1}, {d2}) fails Saito's criterion")));
    }
    Ok(Rank2Solution { exponents: (d1, d2), basis, table })
}

/// Saito's criterion: `l` derivations in `D(A,m)` form a basis iff the
/// determinant of their coefficient matrix is a nonzero multiple of `Q(A,m)`.
pub fn saito_check(thetas: &[Derivation], a: &Multiarrangement) -> Result<bool> {
    if thetas.len() != a.dim() || thetas.iter().any(|t| t.nvars() != a.dim()) {
        return Err(Error::Hypothesis(format!("need {} derivations in {} variables", a.dim(), a.dim())));
    }
    if let Some(i) = thetas.iter().position(|t| !t.in_module(a)) {
        return Err(Error::Hypothesis(format!("derivation {i} is not in D(A,m)")));
    }
    let rows = (0..a.dim()).map(|i| thetas.iter().map(|t| t.components[i].clone()).collect()).collect();
    let det = PolyMatrix::from_rows(rows).determinant()?;
    Ok(!det.is_zero() && det.scalar_ratio(&a.defining_polynomial()).is_some())
}

/// `theta_{a,b,c} = (int_0^x P dt) d/dx + (int_0^y P dt) d/dy` with
/// `P = t^c (t-x)^b (t-y)^a`, over the rationals.
pub fn theta_abc(a: u32, b: u32, c: u32) -> Derivation {
    let k = Field::Rationals;
    let (x, y, t) = (Polynomial::var(k, 3, 0), Polynomial::var(k, 3, 1), Polynomial::var(k, 3, 2));
    let integrand = &(&t.pow(c) * &(&t - &x).pow(b)) * &(&t - &y).pow(a);
    let anti = integrand.antiderivative(2).expect("characteristic 0");
    let at = |v: &Polynomial| anti.substitute(2, v).remove_var(2).expect("t eliminated");
    Derivation::new(vec![at(&x), at(&y)])
}

/// `I(a,b,c) = int_0^1 P + int_0^{-1} P` with `P = t^c (t-1)^b (t+1)^a`.
pub fn integral_i(a: u32, b: u32, c: u32) -> BigRational {
    let k = Field::Rationals;
    let t = Polynomial::var(k, 1, 0);
    let one = Polynomial::one(k, 1);
    let p = &(&t.pow(c) * &(&t - &one).pow(b)) * &(&t + &one).pow(a);
    let anti = p.antiderivative(0).expect("characteristic 0");
    let v = &anti.evaluate(&[k.one()]) + &anti.evaluate(&[k.from_i64(-1)]);
    v.as_rational().expect("rational").clone()
}

/// Parameters `(a, b, c)` and the two generators of `D(A2, (p,q,r))` for
/// `x^p y^q (x-y)^r` with balanced multiplicity.
pub fn fwy_generators(p: u32, q: u32, r: u32) -> Result<((i64, i64, i64), [Derivation; 2])> {
    let total = p + q + r;
    if [p, q, r].iter().any(|&v| v == 0 || 2 * v >= total) {
        return Err(Error::Hypothesis(format!("({p},{q},{r}) is not a balanced positive A2 multiplicity")));
    }
    let (p, q, r) = (p as i64, q as i64, r as i64);
    let k = Field::Rationals;
    if total % 2 == 1 {
        let abc = ((-p + q + r - 1) / 2, (p - q + r - 1) / 2, (p + q - r - 1) / 2);
        let (a, b, c) = (abc.0 as u32, abc.1 as u32, abc.2 as u32);
        Ok((abc, [theta_abc(a, b, c), theta_abc(a, b, c + 1)]))
    } else {
        let abc = ((-p + q + r) / 2, (p - q + r - 2) / 2, (p + q - r - 2) / 2);
        let (a, b, c) = (abc.0 as u32, abc.1 as u32, abc.2 as u32);
        let x = Polynomial::var(k, 2, 0);
        let y = Polynomial::var(k, 2, 1);
        Ok((abc, [theta_abc(a, b, c).mul_poly(&x), theta_abc(a - 1, b + 1, c).mul_poly(&y)]))
    }
}

/// Checks that the generators lie in `D(A2,(p,q,r))`, have degrees summing to
/// `p+q+r`, and pass Saito's criterion.
pub fn verify_fwy(p: u32, q: u32, r: u32) -> Result<(u32, u32)> {
    let (_, gens) = fwy_generators(p, q, r)?;
    let a = a2(Field::Rationals, [p, q, r]);
    let degs: Vec<u32> = gens.iter().map(|g| g.degree().unwrap_or(0)).collect();
    if degs[0] + degs[1] != p + q + r {
        return Err(Error::Consistency(format!("generator degrees {degs:?} do not sum to {}", p + q + r)));
    }
    if !saito_check(&gens, &a)? {
        return Err(Error::Consistency(format!("generators for ({p},{q},{r}) fail Saito's criterion")));
    }
    Ok((degs[0].min(degs[1]), degs[0].max(degs[1])))
}

/// The orbit element of a balanced B2 multiplicity with `m4 = 1`
/// (lexicographically smallest), if the minimum entry is 1.
pub fn min1_representative(m: [u32; 4]) -> Option<[u32; 4]> {
    crate::arrangement::b2_orbit(m).into_iter().find(|t| t[3] == 1)
}

/// Peak-point rule for balanced B2 multiplicities whose minimum entry is 1:
/// with the 1 moved to the last position, `m` is a peak point iff
/// `m1 = m2`, `m3` is odd and `|m|` is divisible by 4. For even `|m|` the
/// answer is cross-checked against the vanishing of `I(a,b,c)`.
pub fn peak_point_b2_min1(m: [u32; 4]) -> Result<bool> {
    let total: u32 = m.iter().sum();
    if m.iter().any(|&v| 2 * v >= total) {
        return Err(Error::Hypothesis(format!("{m:?} is not balanced")));
    }
    if m.iter().min() != Some(&1) {
        return Err(Error::Hypothesis(format!("minimum entry of {m:?} is not 1")));
    }
    let t = min1_representative(m).expect("a 1 can be moved to the last slot");
    let rule = t[0] == t[1] && t[2] % 2 == 1 && total.is_multiple_of(4);
    if let Some(via_integral) = peak_point_by_integral(t) {
        if via_integral != rule {
            return Err(Error::Consistency(format!(
                "peak rule says {rule} but the integral test says {via_integral} for {t:?}"
            )));
        }
    }
    Ok(rule)
}

/// `I(a,b,c) = 0` for the parameters of `x^m1 y^m2 (x-y)^m3`, when `|m|` is
/// even (so that they are integers); `m` must have `m4 = 1`.
pub fn peak_point_by_integral(m: [u32; 4]) -> Option<bool> {
    let (m1, m2, m3) = (m[0] as i64, m[1] as i64, m[2] as i64);
    if (m1 + m2 + m3) % 2 == 0 {
        return None;
    }
    let (a, b, c) = ((-m1 + m2 + m3 - 1) / 2, (m1 - m2 + m3 - 1) / 2, (m1 + m2 - m3 - 1) / 2);
    if a < 0 || b < 0 || c < 0 {
        return None;
    }
    Some(num_traits::Zero::is_zero(&integral_i(a as u32, b as u32, c as u32)))
}
