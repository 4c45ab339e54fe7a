use serde::Serialize;

use crate::arrangement::{b2_canonical_permutation, b3, b3_lines, Hyperplane, Multiarrangement};
use crate::classify::{b2_labeling, exponents};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::lattice::{essential_localization, intersection_lattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCondition {
    pub step: usize,
    pub new: String,
    pub old: String,
    /// `A_X = {H', H''}`, in which case nothing is required.
    pub trivial: bool,
    pub old_multiplicity: u32,
    /// `sum of m(H)` over the new hyperplanes through `X`, minus one.
    pub required: u32,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeVertexReport {
    pub conditions: Vec<VertexCondition>,
    pub satisfied: bool,
    /// `(d1, d2, |m_3| - |m_2|, ...)` sorted, when every condition holds.
    pub exponents: Option<Vec<u32>>,
}

fn rank_of(field: Field, dim: usize, forms: &[&Hyperplane]) -> usize {
    Matrix::from_rows(field, dim, forms.iter().map(|h| h.coefficients().to_vec()).collect())
        .expect("consistent dimensions")
        .rank()
}

/// Checks the free vertex condition along a filtration
/// `A_1 ⊂ A_2 ⊂ ... ⊂ A_r = A` with `rank A_i = i`: for `H'` new at step
/// `d >= 3` and `H''` in `A_{d-1}`, with `X = H' ∩ H''`, either `X` lies on
/// no other hyperplane of `A_d` or `m(H'')` is at least the total
/// multiplicity of the new hyperplanes through `X` minus one.
pub fn free_vertex_check(a: &Multiarrangement, filtration: &[Vec<Hyperplane>]) -> Result<FreeVertexReport> {
    let field = a.field();
    let dim = a.dim();
    let malformed = |msg: String| Err(Error::Hypothesis(format!("malformed filtration: {msg}")));
    if filtration.len() < 2 {
        return malformed("needs at least two steps".into());
    }
    for (i, step) in filtration.iter().enumerate() {
        for h in step {
            if !a.contains(h) {
                return malformed(format!("{h} is not in the arrangement"));
            }
        }
        let refs: Vec<&Hyperplane> = step.iter().collect();
        if step.is_empty() || rank_of(field, dim, &refs) != i + 1 {
            return malformed(format!("step {} does not have rank {}", i + 1, i + 1));
        }
        if i > 0 && !filtration[i - 1].iter().all(|h| step.contains(h)) {
            return malformed(format!("step {i} is not contained in step {}", i + 1));
        }
    }
    let last = filtration.last().expect("nonempty");
    if last.len() != a.len() {
        return malformed("the last step is not the whole arrangement".into());
    }

    let names = a.var_names();
    let show = |h: &Hyperplane| h.linear_form().display_with(&names).to_string();
    let mut conditions = Vec::new();
    for d in 2..filtration.len() {
        let (prev, cur) = (&filtration[d - 1], &filtration[d]);
        let new: Vec<&Hyperplane> = cur.iter().filter(|h| !prev.contains(h)).collect();
        for &hn in &new {
            for ho in prev {
                let through: Vec<&Hyperplane> =
                    cur.iter().filter(|h| rank_of(field, dim, &[hn, ho, h]) == 2).collect();
                let trivial = through.len() == 2;
                let required = new
                    .iter()
                    .filter(|h| through.contains(h))
                    .map(|h| a.multiplicity(h))
                    .sum::<u32>()
                    .saturating_sub(1);
                let old_multiplicity = a.multiplicity(ho);
                conditions.push(VertexCondition {
                    step: d + 1,
                    new: show(hn),
                    old: show(ho),
                    trivial,
                    old_multiplicity,
                    required,
                    satisfied: trivial || old_multiplicity >= required,
                });
            }
        }
    }
    let satisfied = conditions.iter().all(|c| c.satisfied);
    let exponents = if satisfied {
        let mut part = Multiarrangement::new(field, dim);
        for h in &filtration[1] {
            part.insert(h.clone(), a.multiplicity(h));
        }
        let e = exponents(&part)?;
        let mut out = vec![e.d1, e.d2];
        let mass = |s: &[Hyperplane]| s.iter().map(|h| a.multiplicity(h)).sum::<u32>();
        for d in 2..filtration.len() {
            out.push(mass(&filtration[d]) - mass(&filtration[d - 1]));
        }
        out.sort();
        Some(out)
    } else {
        None
    };
    Ok(FreeVertexReport { conditions, satisfied, exponents })
}

/// The filtration `{x} ⊂ {x, y, x-y, x+y} ⊂ B3`.
pub fn b3_filtration(field: Field) -> Vec<Vec<Hyperplane>> {
    let lines = b3_lines(field);
    vec![vec![lines[0].clone()], lines[..4].to_vec(), lines.to_vec()]
}

/// `x^2 y^k (x-y) (x+y)^k` times the given powers of `z, x-z, x+z, y-z, y+z`.
pub fn b3_family(field: Field, k: u32, tail: [u32; 5]) -> Result<Multiarrangement> {
    let [e, f, g, h, i] = tail;
    b3(field, [2, k, 1, k, e, f, g, h, i])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationWitness {
    pub members: Vec<String>,
    /// Multiplicities of the localization in B2 order.
    pub b2_multiplicity: [u32; 4],
    pub k: u32,
}

/// Looks for a rank-2 localization that is, up to coordinates and the
/// symmetries of B2, the multiarrangement `(2, k, 1, k)` with `k >= 4`,
/// which has no free extension.
pub fn non_extendable_by_localization(a: &Multiarrangement) -> Result<Option<LocalizationWitness>> {
    if !a.field().is_rationals() {
        return Err(Error::Unsupported("the localization criterion is stated over Q".into()));
    }
    let lattice = intersection_lattice(a)?;
    let names = a.var_names();
    for x in lattice.flats(2) {
        let local = essential_localization(a, x)?;
        let Some(m) = b2_labeling(&local) else { continue };
        let total: u32 = m.iter().sum();
        if total.is_multiple_of(2) || total < 11 {
            continue;
        }
        let k = (total - 3) / 2;
        if b2_canonical_permutation(m) == b2_canonical_permutation([2, k, 1, k]) {
            let members = x
                .members
                .iter()
                .map(|&i| lattice.hyperplanes()[i].linear_form().display_with(&names).to_string())
                .collect();
            return Ok(Some(LocalizationWitness { members, b2_multiplicity: m, k }));
        }
    }
    Ok(None)
}
