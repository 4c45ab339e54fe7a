//! Extensions of rank-2 multiarrangements to simple rank-3 arrangements:
//! Ziegler restriction, Yoshinaga extension, the LMP/VGMP freeness test,
//! restriction-size bounds, the free-extension search, and the free vertex
//! condition for supersolvable filtrations.

mod bounds;
mod search;
mod vertex;

use std::fmt;

use serde::Serialize;

use crate::arrangement::{Hyperplane, Multiarrangement};
use crate::classify::{exponents, ExponentPair};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};
use crate::lattice::{essential_localization, hyperplane_flat, intersection_lattice, restrict_form, CharPoly};

pub use bounds::{restriction_bounds, RestrictionBounds};
pub use search::{search_free_extensions, FoundExtension, SearchDomain, SearchReport};
pub use vertex::{b3_family, b3_filtration, free_vertex_check, non_extendable_by_localization, FreeVertexReport, LocalizationWitness, VertexCondition};

/// A simple rank-3 arrangement `{ker z} ∪ {ker(alpha_H - t z)}` built from a
/// plane multiarrangement: each base hyperplane `H` carries `m(H)` distinct
/// offsets `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCandidate {
    pub base: Multiarrangement,
    /// One entry per base hyperplane, in base order.
    pub offsets: Vec<(Hyperplane, Vec<Scalar>)>,
}

impl ExtensionCandidate {
    pub fn new(base: Multiarrangement, offsets: Vec<(Hyperplane, Vec<Scalar>)>) -> Result<Self> {
        if base.dim() != 2 {
            return Err(Error::Hypothesis("extensions are built over plane multiarrangements".into()));
        }
        for (h, ts) in &offsets {
            let mut sorted = ts.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != ts.len() {
                return Err(Error::Arrangement(format!("repeated offset on {h}")));
            }
            if base.multiplicity(h) as usize != ts.len() {
                return Err(Error::Arrangement(format!("{h} has {} offsets but multiplicity {}", ts.len(), base.multiplicity(h))));
            }
        }
        Ok(ExtensionCandidate { base, offsets })
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn h0() -> Vec<i64> {
        vec![0, 0, 1]
    }

    /// The distinguished hyperplane `ker z`.
    pub fn distinguished(&self) -> Hyperplane {
        Hyperplane::from_i64(self.field(), &Self::h0()).expect("nonzero")
    }

    pub fn arrangement(&self) -> Multiarrangement {
        let field = self.field();
        let mut e = Multiarrangement::new(field, 3);
        e.insert(self.distinguished(), 1);
        for (h, ts) in &self.offsets {
            let c = h.coefficients();
            for t in ts {
                let form = vec![c[0].clone(), c[1].clone(), -t];
                e.insert(Hyperplane::new(form).expect("nonzero"), 1);
            }
        }
        e
    }
}

impl fmt::Display for ExtensionCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.base.var_names();
        let parts: Vec<String> = self
            .offsets
            .iter()
            .map(|(h, ts)| {
                let ts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                format!("{}: {{{}}}", h.linear_form().display_with(&names), ts.join(", "))
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `(E^{H0}, m^{H0})`: each `X = H ∩ H0` gets multiplicity `|E_X| - 1`, the
/// number of other hyperplanes cutting `H0` in `X`. Coordinates on `H0` come
/// from the kernel of its defining form.
pub fn ziegler_restriction(e: &Multiarrangement, h0: &Hyperplane) -> Result<Multiarrangement> {
    if !e.contains(h0) {
        return Err(Error::Arrangement(format!("{h0} is not in the arrangement")));
    }
    if !e.is_simple() {
        return Err(Error::Hypothesis("Ziegler restriction needs a simple arrangement".into()));
    }
    let flat = hyperplane_flat(h0);
    let mut out = Multiarrangement::new(e.field(), e.dim() - 1);
    for h in e.hyperplanes().filter(|h| *h != h0) {
        let r = restrict_form(&flat, h).expect("distinct hyperplanes");
        out.insert(r, 1);
    }
    Ok(out)
}

/// Offsets `k` with `-(m-1)/2 <= k <= m/2`.
pub fn yoshinaga_offsets(m: u32) -> std::ops::RangeInclusive<i64> {
    let m = m as i64;
    let lo = -((m - 1).div_euclid(2));
    lo..=m.div_euclid(2)
}

pub fn yoshinaga_extension(a: &Multiarrangement) -> Result<ExtensionCandidate> {
    let field = a.field();
    let offsets = a
        .iter()
        .map(|(h, m)| (h.clone(), yoshinaga_offsets(m).map(|k| field.from_i64(k)).collect::<Vec<_>>()))
        .collect();
    let c = ExtensionCandidate::new(a.clone(), offsets)?;
    // integer offsets can collide in small characteristic
    if c.arrangement().len() as u32 != a.total() + 1 {
        return Err(Error::Unsupported(format!("integer offsets collide in characteristic {}", field.characteristic())));
    }
    Ok(c)
}

/// `LMP(A,m) = sum over rank-2 flats X of d1^X d2^X`.
pub fn lmp(a: &Multiarrangement) -> Result<i64> {
    let l = intersection_lattice(a)?;
    if a.is_simple() {
        return Ok(l.simple_lmp());
    }
    let mut total = 0i64;
    for x in l.flats(2) {
        let e = exponents(&essential_localization(a, x)?)?;
        total += e.d1 as i64 * e.d2 as i64;
    }
    Ok(total)
}

/// Sum of products over unordered pairs.
pub fn gmp(exps: &[u32]) -> i64 {
    let mut s = 0i64;
    for i in 0..exps.len() {
        for j in i + 1..exps.len() {
            s += exps[i] as i64 * exps[j] as i64;
        }
    }
    s
}

pub fn vgmp_of(e: &ExponentPair) -> i64 {
    let (d1, d2) = (e.d1 as i64, e.d2 as i64);
    d1 + d2 + d1 * d2
}

/// `VGMP(E,H0) = d1 + d2 + d1 d2` with `(d1,d2)` the exponents of the Ziegler
/// restriction.
pub fn vgmp(e: &Multiarrangement, h0: &Hyperplane) -> Result<(i64, ExponentPair)> {
    let z = ziegler_restriction(e, h0)?;
    let exps = exponents(&z)?;
    Ok((vgmp_of(&exps), exps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub b1: i64,
    pub b2: i64,
    pub lmp: i64,
    pub vgmp: i64,
    pub restriction_exponents: (u32, u32),
    pub free: bool,
    pub slack: i64,
    /// `(1, d1, d2)` when free.
    pub exponents: Option<[u32; 3]>,
    pub characteristic_polynomial: Vec<i64>,
}

impl fmt::Display for FreenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponents {
            Some([a, b, c]) => write!(f, "free, exp ({a},{b},{c}), b2 = {}", self.b2)?,
            None => write!(f, "not free, LMP = {}, VGMP = {}, slack = {}", self.lmp, self.vgmp, self.slack)?,
        }
        Ok(())
    }
}

/// Freeness of a simple rank-3 arrangement from its characteristic polynomial
/// and the exponents of the Ziegler restriction to `h0`: free iff
/// `LMP = VGMP`, equivalently `b2 = d1 d2`.
pub fn yoshinaga_freeness(e: &Multiarrangement, h0: &Hyperplane) -> Result<FreenessReport> {
    if e.dim() != 3 || !e.is_simple() {
        return Err(Error::Hypothesis("expected a simple arrangement in 3 variables".into()));
    }
    let l = intersection_lattice(e)?;
    if l.rank() != 3 {
        return Err(Error::Hypothesis(format!("arrangement has rank {}, expected 3", l.rank())));
    }
    let chi = l.characteristic_polynomial();
    let (b1, b2) = chi.b1_b2().expect("degree 3");
    let lmp = l.simple_lmp();
    if chi.coeffs[1] != lmp {
        return Err(Error::Consistency(format!("coefficient of t is {} but LMP is {lmp}", chi.coeffs[1])));
    }
    let (vg, exps) = vgmp(e, h0)?;
    let slack = lmp - vg;
    if slack < 0 {
        return Err(Error::Consistency(format!("LMP {lmp} below VGMP {vg}")));
    }
    let free = slack == 0;
    if free && chi != CharPoly::from_roots(&[1, exps.d1 as i64, exps.d2 as i64]) {
        return Err(Error::Consistency(format!("free arrangement with chi = {chi} and exponents {exps}")));
    }
    Ok(FreenessReport {
        b1,
        b2,
        lmp,
        vgmp: vg,
        restriction_exponents: exps.pair(),
        free,
        slack,
        exponents: free.then_some([1, exps.d1, exps.d2]),
        characteristic_polynomial: chi.coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{a2, b2};

    const Q: Field = Field::Rationals;

    #[test]
    fn offsets_ranges() {
        assert_eq!(yoshinaga_offsets(3).collect::<Vec<_>>(), vec![-1, 0, 1]);
        assert_eq!(yoshinaga_offsets(2).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(yoshinaga_offsets(5).collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(yoshinaga_offsets(1).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn yoshinaga_extension_of_3522() {
        let a = b2(Q, [3, 5, 2, 2]).unwrap();
        let e = yoshinaga_extension(&a).unwrap();
        let arr = e.arrangement();
        assert_eq!(arr.len(), 13);
        assert_eq!(ziegler_restriction(&arr, &e.distinguished()).unwrap(), a);
        assert_eq!(lmp(&arr).unwrap(), 49);
        let r = yoshinaga_freeness(&arr, &e.distinguished()).unwrap();
        assert_eq!((r.lmp, r.vgmp, r.slack, r.free), (49, 47, 2, false));
    }

    #[test]
    fn boolean() {
        let e = Multiarrangement::from_i64(Q, 3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]).unwrap();
        let z = Hyperplane::from_i64(Q, &[0, 0, 1]).unwrap();
        let zr = ziegler_restriction(&e, &z).unwrap();
        assert_eq!(zr.multiplicities(), vec![1, 1]);
        assert_eq!(lmp(&e).unwrap(), 3);
        let r = yoshinaga_freeness(&e, &z).unwrap();
        assert_eq!(r.exponents, Some([1, 1, 1]));
        assert_eq!(r.vgmp, 3);
    }

    #[test]
    fn gmp_values() {
        assert_eq!(gmp(&[1, 5, 7]), 47);
        assert_eq!(gmp(&[1, 1]), 1);
        assert_eq!(gmp(&[1, 4, 5]), 29);
    }

    #[test]
    fn vgmp_of_2414() {
        let a = b2(Q, [2, 4, 1, 4]).unwrap();
        let e = yoshinaga_extension(&a).unwrap();
        assert_eq!(vgmp(&e.arrangement(), &e.distinguished()).unwrap().0, 41);
    }

    #[test]
    fn multi_lmp_uses_localization_exponents() {
        // B3 with multiplicity 2 on x: the localization at ker x ∩ ker y is
        // x^2 y (x-y)(x+y) with exponents (2, 3)
        let a = crate::arrangement::b3(Q, [2, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        assert!(lmp(&a).unwrap() > lmp(&a.underlying()).unwrap());
        let _ = a2(Q, [1, 1, 1]);
    }
}
