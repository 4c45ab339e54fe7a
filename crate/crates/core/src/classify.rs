//! Exponents of rank-2 multiarrangements: closed-form rules with the exact
//! solver as fallback and cross-check.

use std::fmt;

use serde::Serialize;

use crate::arrangement::{b2, b2_canonical_permutation, Multiarrangement};
use crate::derivations::{min1_representative, peak_point_b2_min1, rank2_exponents_solver};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar};
use crate::lattice::flat_from_forms;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `(|m| - m_max, m_max)` when some `m(H) >= |m|/2`.
    UnbalancedRule,
    /// `(floor(|m|/2), ceil(|m|/2))` for balanced multiplicities on three lines.
    A2Rule,
    /// Odd balanced `|m|` on B2 forces a gap of 1.
    B2ParityRule,
    /// Even balanced `|m|` on B2 with a multiplicity-1 line.
    B2PeakRule,
    Solver,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::UnbalancedRule => "unbalanced-rule",
            Provenance::A2Rule => "a2-rule",
            Provenance::B2ParityRule => "b2-parity-rule",
            Provenance::B2PeakRule => "b2-peak-rule",
            Provenance::Solver => "solver",
        };
        write!(f, "{s}")
    }
}

/// `exp(A,m) = (d1, d2)` with `d1 <= d2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentPair {
    pub d1: u32,
    pub d2: u32,
    pub provenance: Provenance,
}

impl ExponentPair {
    fn new(a: u32, b: u32, provenance: Provenance) -> Self {
        ExponentPair { d1: a.min(b), d2: a.max(b), provenance }
    }

    pub fn delta(&self) -> u32 {
        self.d2 - self.d1
    }

    pub fn pair(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

fn is_balanced(m: &[u32]) -> bool {
    let total: u32 = m.iter().sum();
    m.iter().all(|&v| 2 * v < total)
}

pub fn unbalanced_exponents(m: &[u32]) -> Result<ExponentPair> {
    let total: u32 = m.iter().sum();
    let max = m.iter().copied().max().unwrap_or(0);
    if total == 0 || 2 * max < total {
        return Err(Error::Hypothesis(format!("{m:?} is balanced")));
    }
    Ok(ExponentPair::new(total - max, max, Provenance::UnbalancedRule))
}

pub fn a2_exponents(m: [u32; 3]) -> ExponentPair {
    unbalanced_exponents(&m).unwrap_or_else(|_| {
        let total: u32 = m.iter().sum();
        ExponentPair::new(total / 2, total.div_ceil(2), Provenance::A2Rule)
    })
}

/// Possible gaps `d2 - d1` for a balanced B2 multiplicity.
pub fn b2_delta_candidates(m: [u32; 4]) -> Result<Vec<u32>> {
    if !is_balanced(&m) {
        return Err(Error::Hypothesis(format!("{m:?} is not balanced")));
    }
    let total: u32 = m.iter().sum();
    Ok(if total % 2 == 1 { vec![1] } else { vec![0, 2] })
}

/// Exponents of `x^m1 y^m2 (x-y)^m3 (x+y)^m4` over the rationals by the
/// closed-form rules, falling back to the solver when none applies.
pub fn b2_exponents(m: [u32; 4]) -> Result<ExponentPair> {
    b2_exponents_with(m, &|m| solver_b2(m))
}

/// As [`b2_exponents`], with the fallback solver supplied by the caller.
pub fn b2_exponents_with(m: [u32; 4], solver: &dyn Fn([u32; 4]) -> Result<(u32, u32)>) -> Result<ExponentPair> {
    let total: u32 = m.iter().sum();
    if total == 0 {
        return Err(Error::Hypothesis("empty multiplicity".into()));
    }
    if !is_balanced(&m) {
        return unbalanced_exponents(&m);
    }
    let nonzero: Vec<u32> = m.iter().copied().filter(|&v| v > 0).collect();
    if nonzero.len() == 3 {
        return Ok(a2_exponents([nonzero[0], nonzero[1], nonzero[2]]));
    }
    if total % 2 == 1 {
        return Ok(ExponentPair::new((total - 1) / 2, total.div_ceil(2), Provenance::B2ParityRule));
    }
    let canonical = b2_canonical_permutation(m);
    if canonical.contains(&1) && min1_representative(canonical).is_some() {
        let half = total / 2;
        return Ok(if peak_point_b2_min1(canonical)? {
            ExponentPair::new(half - 1, half + 1, Provenance::B2PeakRule)
        } else {
            ExponentPair::new(half, half, Provenance::B2PeakRule)
        });
    }
    let (d1, d2) = solver(m)?;
    Ok(ExponentPair::new(d1, d2, Provenance::Solver))
}

/// The linear-algebra solver on B2 over the rationals.
pub fn solver_b2(m: [u32; 4]) -> Result<(u32, u32)> {
    Ok(rank2_exponents_solver(&b2(Field::Rationals, m)?)?.exponents)
}

/// Runs both the dispatch and the solver; disagreement is a consistency
/// failure.
pub fn b2_exponents_checked(m: [u32; 4]) -> Result<ExponentPair> {
    b2_exponents_checked_with(m, &|m| solver_b2(m))
}

pub fn b2_exponents_checked_with(
    m: [u32; 4],
    solver: &dyn Fn([u32; 4]) -> Result<(u32, u32)>,
) -> Result<ExponentPair> {
    let rule = b2_exponents_with(m, solver)?;
    let solved = solver(m)?;
    if rule.pair() != solved {
        return Err(Error::Consistency(format!(
            "exponents of {m:?}: {} gives {rule}, solver gives ({}, {})",
            rule.provenance, solved.0, solved.1
        )));
    }
    Ok(rule)
}

/// Rewrites a rank-2 multiarrangement in two coordinates (the entries of each
/// form at the pivot columns of the span of all forms).
pub fn to_plane(a: &Multiarrangement) -> Result<Multiarrangement> {
    let forms: Vec<Vec<Scalar>> = a.hyperplanes().map(|h| h.coefficients().to_vec()).collect();
    let flat = flat_from_forms(a.field(), a.dim(), forms);
    if flat.rank() != 2 {
        return Err(Error::Hypothesis(format!("arrangement has rank {}, expected 2", flat.rank())));
    }
    if a.dim() == 2 {
        return Ok(a.clone());
    }
    Multiarrangement::from_forms(
        a.field(),
        2,
        a.iter().map(|(h, m)| (flat.coordinates(h.coefficients()), m)).collect(),
    )
}

/// If the four lines of a plane arrangement are the images of
/// `x, y, x-y, x+y` under a linear change of coordinates, their
/// multiplicities in that order.
pub fn b2_labeling(a: &Multiarrangement) -> Option<[u32; 4]> {
    if a.dim() != 2 || a.len() != 4 || a.field().characteristic() == 2 {
        return None;
    }
    let hs: Vec<_> = a.iter().collect();
    let field = a.field();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
            for (k, l) in [(rest[0], rest[1]), (rest[1], rest[0])] {
                let (p, q) = (hs[i].0.coefficients(), hs[j].0.coefficients());
                let basis = Matrix::from_rows(field, 2, vec![p.to_vec(), q.to_vec()]).ok()?;
                let det = basis.determinant().ok()?;
                let solve = |v: &[Scalar]| {
                    // v = s p + t q by Cramer's rule
                    let s = &(&(&v[0] * &q[1]) - &(&v[1] * &q[0])) / &det;
                    let t = &(&(&p[0] * &v[1]) - &(&p[1] * &v[0])) / &det;
                    (s, t)
                };
                let (al, be) = solve(hs[k].0.coefficients());
                let (ga, de) = solve(hs[l].0.coefficients());
                if [&al, &be, &ga, &de].iter().any(|v| v.is_zero()) {
                    continue;
                }
                if (&(&ga * &be) + &(&de * &al)).is_zero() {
                    return Some([hs[i].1, hs[j].1, hs[k].1, hs[l].1]);
                }
            }
        }
    }
    None
}

/// Exponents of any rank-2 multiarrangement. Over the rationals the
/// closed-form rules are used where they apply; finite fields always use the
/// solver.
pub fn exponents(a: &Multiarrangement) -> Result<ExponentPair> {
    let plane = to_plane(a)?;
    let m = plane.multiplicities();
    if !plane.field().is_rationals() {
        let (d1, d2) = rank2_exponents_solver(&plane)?.exponents;
        return Ok(ExponentPair::new(d1, d2, Provenance::Solver));
    }
    if !is_balanced(&m) {
        return unbalanced_exponents(&m);
    }
    if m.len() == 3 {
        return Ok(a2_exponents([m[0], m[1], m[2]]));
    }
    if let Some(t) = b2_labeling(&plane) {
        return b2_exponents(t);
    }
    let (d1, d2) = rank2_exponents_solver(&plane)?.exponents;
    Ok(ExponentPair::new(d1, d2, Provenance::Solver))
}

/// Exponents by the solver alone, for any rank-2 multiarrangement.
pub fn solver_exponents(a: &Multiarrangement) -> Result<ExponentPair> {
    let (d1, d2) = rank2_exponents_solver(&to_plane(a)?)?.exponents;
    Ok(ExponentPair::new(d1, d2, Provenance::Solver))
}

/// Canonical representatives of all balanced B2 multiplicities with positive
/// entries and `|m| <= max_total`.
pub fn balanced_b2_representatives(max_total: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for total in 4..=max_total {
        for m1 in 1..total {
            for m2 in 1..total - m1 {
                for m3 in 1..total - m1 - m2 {
                    let m = [m1, m2, m3, total - m1 - m2 - m3];
                    if is_balanced(&m) && b2_canonical_permutation(m) == m {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{a2, Multiarrangement};

    #[test]
    fn unbalanced_examples() {
        assert_eq!(unbalanced_exponents(&[1, 1, 5, 1]).unwrap().pair(), (3, 5));
        assert_eq!(unbalanced_exponents(&[0, 0, 7, 0]).unwrap().pair(), (0, 7));
        assert_eq!(unbalanced_exponents(&[2, 2, 6, 2]).unwrap().pair(), (6, 6));
        assert!(unbalanced_exponents(&[2, 2, 2, 2]).is_err());
    }

    #[test]
    fn a2_examples() {
        for k in 1..6 {
            assert_eq!(a2_exponents([2, k, k]).pair(), (k + 1, k + 1));
        }
        assert_eq!(a2_exponents([1, 1, 1]).pair(), (1, 2));
        let e = a2_exponents([1, 1, 3]);
        assert_eq!((e.pair(), e.provenance), ((2, 3), Provenance::UnbalancedRule));
    }

    #[test]
    fn delta_candidates() {
        assert_eq!(b2_delta_candidates([2, 4, 1, 4]).unwrap(), vec![1]);
        assert_eq!(b2_delta_candidates([3, 5, 2, 2]).unwrap(), vec![0, 2]);
        assert_eq!(b2_delta_candidates([1, 1, 1, 1]).unwrap(), vec![0, 2]);
        assert!(b2_delta_candidates([1, 1, 5, 1]).is_err());
    }

    #[test]
    fn b2_dispatch() {
        for k in 4..7 {
            assert_eq!(b2_exponents_checked([2, k, 1, k]).unwrap().pair(), (k + 1, k + 2));
        }
        let e = b2_exponents_checked([2, 2, 1, 3]).unwrap();
        assert_eq!((e.pair(), e.provenance), ((3, 5), Provenance::B2PeakRule));
        let e = b2_exponents_checked([3, 3, 2, 2]).unwrap();
        assert_eq!((e.pair(), e.provenance), ((5, 5), Provenance::Solver));
        assert_eq!(b2_exponents_checked([3, 5, 2, 2]).unwrap().pair(), (5, 7));
        // the simple B2 arrangement is a peak point: exponents (1, 3)
        assert_eq!(b2_exponents_checked([1, 1, 1, 1]).unwrap().pair(), (1, 3));
    }

    #[test]
    fn sabotaged_solver_is_caught() {
        let bad = |_: [u32; 4]| Ok((4, 4));
        assert!(matches!(b2_exponents_checked_with([2, 2, 1, 3], &bad), Err(Error::Consistency(_))));
    }

    #[test]
    fn labeling_detects_transformed_b2() {
        // x, y, x-y, x+y under (x, y) -> (x + 2y, y)
        let q = Field::Rationals;
        let a = Multiarrangement::from_i64(q, 2, &[(&[1, 2], 2), (&[0, 1], 4), (&[1, 1], 1), (&[1, 3], 4)]).unwrap();
        let t = b2_labeling(&a).unwrap();
        assert_eq!(b2_canonical_permutation(t), b2_canonical_permutation([2, 4, 1, 4]));
        assert_eq!(exponents(&a).unwrap().pair(), (5, 6));
        let generic = Multiarrangement::from_i64(q, 2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1), (&[1, 3], 1)]).unwrap();
        assert!(b2_labeling(&generic).is_none());
        assert_eq!(exponents(&generic).unwrap().pair(), (1, 3));
        assert_eq!(exponents(&a2(q, [3, 3, 3])).unwrap().pair(), (4, 5));
    }
}
