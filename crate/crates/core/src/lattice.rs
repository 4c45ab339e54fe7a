//! Intersection lattices of arrangements of rank at most 3.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::arrangement::{Hyperplane, Multiarrangement};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar};

/// A flat `X`, described by a reduced row echelon basis of the linear forms
/// vanishing on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    basis: Matrix,
    pivots: Vec<usize>,
    /// Indices (in arrangement order) of the hyperplanes containing `X`.
    pub members: Vec<usize>,
    pub mobius: i64,
}

impl Flat {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of a form in the span of the basis, read off at the pivot
    /// columns.
    pub fn coordinates(&self, form: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|&p| form[p].clone()).collect()
    }

    /// A basis of the subspace `X` itself, used as coordinates on `X`.
    pub fn parametrization(&self) -> Vec<Vec<Scalar>> {
        self.basis.kernel_basis()
    }

    fn key(&self) -> Vec<Scalar> {
        (0..self.basis.rows()).flat_map(|r| self.basis.row(r).to_vec()).collect()
    }
}

fn reduced(field: Field, dim: usize, rows: Vec<Vec<Scalar>>) -> (Matrix, Vec<usize>) {
    let m = Matrix::from_rows(field, dim, rows).expect("consistent dimensions");
    let (r, pivots) = m.rref();
    let kept = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    (Matrix::from_rows(field, dim, kept).expect("consistent dimensions"), pivots)
}

fn in_span(basis: &Matrix, pivots: &[usize], form: &[Scalar]) -> bool {
    // Reduce against the echelon basis; the remainder vanishes iff the form
    // lies in the span.
    let mut v = form.to_vec();
    for (i, &p) in pivots.iter().enumerate() {
        let f = v[p].clone();
        if f.is_zero() {
            continue;
        }
        for (j, b) in basis.row(i).iter().enumerate() {
            if !b.is_zero() {
                v[j] = &v[j] - &(&f * b);
            }
        }
    }
    v.iter().all(|c| c.is_zero())
}

/// The lattice `L(A)` with flats grouped by rank.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    field: Field,
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    ranks: Vec<Vec<Flat>>,
}

pub const MAX_LATTICE_RANK: usize = 3;

/// Builds `L(A)` by intersecting flats with hyperplanes one rank at a time.
pub fn intersection_lattice(a: &Multiarrangement) -> Result<IntersectionLattice> {
    let rank = a.rank();
    if rank > MAX_LATTICE_RANK {
        return Err(Error::Unsupported(format!("intersection lattices of rank {rank} > {MAX_LATTICE_RANK}")));
    }
    let field = a.field();
    let dim = a.dim();
    let hyperplanes: Vec<Hyperplane> = a.hyperplanes().cloned().collect();
    let n = hyperplanes.len();
    let (b0, p0) = reduced(field, dim, vec![]);
    let mut ranks = vec![vec![Flat { basis: b0, pivots: p0, members: vec![], mobius: 1 }]];
    if n > 0 {
        ranks.push(
            hyperplanes
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let (b, p) = reduced(field, dim, vec![h.coefficients().to_vec()]);
                    Flat { basis: b, pivots: p, members: vec![i], mobius: -1 }
                })
                .collect(),
        );
    }
    for r in 2..=rank {
        let mut found: Vec<Flat> = Vec::new();
        let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
        for lower in &ranks[r - 1] {
            for (i, h) in hyperplanes.iter().enumerate() {
                if lower.members.binary_search(&i).is_ok() {
                    continue;
                }
                let mut rows: Vec<Vec<Scalar>> = (0..lower.basis.rows()).map(|k| lower.basis.row(k).to_vec()).collect();
                rows.push(h.coefficients().to_vec());
                let (b, p) = reduced(field, dim, rows);
                let mut flat = Flat { basis: b, pivots: p, members: vec![], mobius: 0 };
                let key = flat.key();
                if index.contains_key(&key) {
                    continue;
                }
                flat.members = (0..n).filter(|&j| in_span(&flat.basis, &flat.pivots, hyperplanes[j].coefficients())).collect();
                index.insert(key, found.len());
                found.push(flat);
            }
        }
        found.sort_by(|x, y| x.members.cmp(&y.members));
        ranks.push(found);
    }
    let mut lattice = IntersectionLattice { field, dim, hyperplanes, ranks };
    lattice.fill_mobius();
    Ok(lattice)
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

impl IntersectionLattice {
    fn fill_mobius(&mut self) {
        for r in 2..self.ranks.len() {
            let (lower, upper) = self.ranks.split_at_mut(r);
            for x in upper[0].iter_mut() {
                let mut s = 0i64;
                for level in lower.iter() {
                    for y in level {
                        if is_subset(&y.members, &x.members) {
                            s += y.mobius;
                        }
                    }
                }
                x.mobius = -s;
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn flats(&self, rank: usize) -> &[Flat] {
        self.ranks.get(rank).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_flats(&self) -> impl Iterator<Item = &Flat> {
        self.ranks.iter().flatten()
    }

    /// The rank-2 flat containing hyperplanes `i` and `j`.
    pub fn join(&self, i: usize, j: usize) -> Option<&Flat> {
        self.flats(2)
            .iter()
            .find(|f| f.members.binary_search(&i).is_ok() && f.members.binary_search(&j).is_ok())
    }

    /// The flat of `L(A)` with this members set, if any.
    pub fn flat_with_members(&self, members: &[usize]) -> Option<&Flat> {
        self.all_flats().find(|f| f.members == members)
    }

    pub fn characteristic_polynomial(&self) -> CharPoly {
        let mut coeffs = vec![0i64; self.dim + 1];
        for f in self.all_flats() {
            coeffs[self.dim - f.rank()] += f.mobius;
        }
        CharPoly { coeffs }
    }

    /// `i -> P_i`, the number of rank-2 flats with exactly `i` hyperplanes.
    pub fn rank2_profile(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in self.flats(2) {
            *out.entry(f.members.len()).or_insert(0) += 1;
        }
        out
    }

    /// `sum over rank-2 flats of (|A_X| - 1)`.
    pub fn simple_lmp(&self) -> i64 {
        self.flats(2).iter().map(|f| f.members.len() as i64 - 1).sum()
    }

    /// Number of rank-2 flats on hyperplane `i`, i.e. `|A^H|` for rank 3.
    pub fn restriction_size(&self, i: usize) -> usize {
        self.flats(2).iter().filter(|f| f.members.binary_search(&i).is_ok()).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct JFlat {
            rank: usize,
            members: Vec<usize>,
            mobius: i64,
        }
        let flats: Vec<JFlat> = self
            .all_flats()
            .map(|f| JFlat { rank: f.rank(), members: f.members.clone(), mobius: f.mobius })
            .collect();
        serde_json::json!({
            "hyperplanes": self.hyperplanes.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
            "flats": flats,
            "characteristic_polynomial": self.characteristic_polynomial().coeffs,
        })
    }
}

impl fmt::Display for IntersectionLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyperplanes.iter().enumerate() {
            writeln!(f, "H{i}: {h}")?;
        }
        for r in 0..=self.rank() {
            writeln!(f, "rank {r}: {} flats", self.flats(r).len())?;
            for x in self.flats(r) {
                let members: Vec<String> = x.members.iter().map(|i| format!("H{i}")).collect();
                writeln!(f, "  {{{}}} mu = {}", members.join(", "), x.mobius)?;
            }
        }
        Ok(())
    }
}

/// `chi(A; t)`, coefficients indexed by power of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    pub coeffs: Vec<i64>,
}

impl CharPoly {
    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(b1, b2)` with `chi = (t - 1)(t^2 - b1 t + b2)`; only for degree 3.
    pub fn b1_b2(&self) -> Option<(i64, i64)> {
        if self.coeffs.len() != 4 {
            return None;
        }
        let b2 = -self.coeffs[0];
        Some((self.coeffs[1] + self.coeffs[0], b2))
    }

    /// `prod (t - r)` for the given roots.
    pub fn from_roots(roots: &[i64]) -> CharPoly {
        let mut coeffs = vec![1i64];
        for &r in roots {
            let mut next = vec![0i64; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        CharPoly { coeffs }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (1, m) => write!(f, "{m}*t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, m) => write!(f, "{m}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn characteristic_polynomial(a: &Multiarrangement) -> Result<CharPoly> {
    Ok(intersection_lattice(a)?.characteristic_polynomial())
}

/// Members and reduced basis of the flat spanned by `forms`, checked to be a
/// flat of `A`.
fn flat_in(a: &Multiarrangement, forms: &[Vec<Scalar>]) -> Result<(Matrix, Vec<usize>, Vec<Hyperplane>)> {
    let (basis, pivots) = reduced(a.field(), a.dim(), forms.to_vec());
    let members: Vec<Hyperplane> =
        a.hyperplanes().filter(|h| in_span(&basis, &pivots, h.coefficients())).cloned().collect();
    let span_rank = if members.is_empty() {
        0
    } else {
        Matrix::from_rows(a.field(), a.dim(), members.iter().map(|h| h.coefficients().to_vec()).collect())?.rank()
    };
    if span_rank != pivots.len() {
        return Err(Error::Arrangement("subspace is not a flat of the arrangement".into()));
    }
    Ok((basis, pivots, members))
}

/// `(A_X, m_X)` in the ambient coordinates of `A`.
pub fn localization(a: &Multiarrangement, x: &Flat) -> Result<Multiarrangement> {
    let rows: Vec<Vec<Scalar>> = (0..x.basis.rows()).map(|r| x.basis.row(r).to_vec()).collect();
    let (_, _, members) = flat_in(a, &rows)?;
    let mut out = Multiarrangement::new(a.field(), a.dim());
    for h in members {
        let m = a.multiplicity(&h);
        out.insert(h, m);
    }
    Ok(out)
}

/// `(A_X, m_X)` written in `rank(X)` coordinates, the coordinates of a form
/// being its entries at the pivot columns of the flat's echelon basis.
pub fn essential_localization(a: &Multiarrangement, x: &Flat) -> Result<Multiarrangement> {
    let local = localization(a, x)?;
    let forms = local.iter().map(|(h, m)| (x.coordinates(h.coefficients()), m)).collect();
    Multiarrangement::from_forms(a.field(), x.rank(), forms)
}

/// The form `alpha_H` restricted to `X`, in the coordinates given by
/// [`Flat::parametrization`]; `None` when `X` lies in `H`.
pub fn restrict_form(x: &Flat, h: &Hyperplane) -> Option<Hyperplane> {
    let coords: Vec<Scalar> = x.parametrization().iter().map(|v| h.eval(v)).collect();
    Hyperplane::new(coords).ok()
}

/// The simple arrangement `A^X = {X ∩ H : H not containing X}` on `X`.
pub fn restriction(a: &Multiarrangement, x: &Flat) -> Result<Multiarrangement> {
    let rows: Vec<Vec<Scalar>> = (0..x.basis.rows()).map(|r| x.basis.row(r).to_vec()).collect();
    flat_in(a, &rows)?;
    let dim = a.dim() - x.rank();
    let mut out = Multiarrangement::new(a.field(), dim);
    for h in a.hyperplanes() {
        if let Some(r) = restrict_form(x, h) {
            if !out.contains(&r) {
                out.insert(r, 1);
            }
        }
    }
    Ok(out)
}

/// The rank-1 flat `H` of `A` as a [`Flat`].
pub fn hyperplane_flat(h: &Hyperplane) -> Flat {
    let (b, p) = reduced(h.field(), h.dim(), vec![h.coefficients().to_vec()]);
    Flat { basis: b, pivots: p, members: vec![], mobius: -1 }
}

/// The flat cut out by the given forms (members left empty).
pub fn flat_from_forms(field: Field, dim: usize, forms: Vec<Vec<Scalar>>) -> Flat {
    let (b, p) = reduced(field, dim, forms);
    Flat { basis: b, pivots: p, members: vec![], mobius: 0 }
}

/// Whether a bijection of hyperplanes carries the rank-2 flats of one
/// lattice onto those of the other.
pub fn lattice_isomorphic(l1: &IntersectionLattice, l2: &IntersectionLattice) -> bool {
    let n = l1.hyperplanes.len();
    if n != l2.hyperplanes.len() || l1.rank() != l2.rank() {
        return false;
    }
    for r in 0..=l1.rank() {
        let mut s1: Vec<usize> = l1.flats(r).iter().map(|f| f.members.len()).collect();
        let mut s2: Vec<usize> = l2.flats(r).iter().map(|f| f.members.len()).collect();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return false;
        }
    }
    let t1 = PairTable::new(l1);
    let t2 = PairTable::new(l2);
    let sig1: Vec<Vec<usize>> = (0..n).map(|i| t1.signature(i)).collect();
    let sig2: Vec<Vec<usize>> = (0..n).map(|i| t2.signature(i)).collect();
    let mut a = sig1.clone();
    let mut b = sig2.clone();
    a.sort();
    b.sort();
    if a != b {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_map(0, &t1, &t2, &sig1, &sig2, &mut map, &mut used)
}

struct PairTable {
    /// `flat[i][j]` = index of the rank-2 flat through `i` and `j`.
    flat: Vec<Vec<usize>>,
    sizes: Vec<usize>,
}

impl PairTable {
    fn new(l: &IntersectionLattice) -> Self {
        let n = l.hyperplanes.len();
        let mut flat = vec![vec![usize::MAX; n]; n];
        let mut sizes = Vec::new();
        for (k, f) in l.flats(2).iter().enumerate() {
            sizes.push(f.members.len());
            for &i in &f.members {
                for &j in &f.members {
                    flat[i][j] = k;
                }
            }
        }
        PairTable { flat, sizes }
    }

    fn signature(&self, i: usize) -> Vec<usize> {
        let mut seen: Vec<usize> = self.flat[i].iter().filter(|&&k| k != usize::MAX).copied().collect();
        seen.sort_unstable();
        seen.dedup();
        let mut s: Vec<usize> = seen.iter().map(|&k| self.sizes[k]).collect();
        s.sort_unstable();
        s
    }
}

fn extend_map(
    i: usize,
    t1: &PairTable,
    t2: &PairTable,
    sig1: &[Vec<usize>],
    sig2: &[Vec<usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = map.len();
    if i == n {
        return true;
    }
    for c in 0..n {
        if used[c] || sig1[i] != sig2[c] {
            continue;
        }
        let consistent = (0..i).all(|j| {
            let (f1, f2) = (t1.flat[i][j], t2.flat[c][map[j]]);
            (f1 == usize::MAX) == (f2 == usize::MAX)
                && (f1 == usize::MAX
                    || (t1.sizes[f1] == t2.sizes[f2]
                        && (0..i).all(|k| (t1.flat[i][k] == f1) == (t2.flat[c][map[k]] == f2))))
        });
        if !consistent {
            continue;
        }
        map[i] = c;
        used[c] = true;
        if extend_map(i + 1, t1, t2, sig1, sig2, map, used) {
            return true;
        }
        used[c] = false;
    }
    map[i] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{b2, b3};

    const Q: Field = Field::Rationals;

    fn arr(forms: &[&[i64]]) -> Multiarrangement {
        let f: Vec<(&[i64], u32)> = forms.iter().map(|c| (*c, 1)).collect();
        Multiarrangement::from_i64(Q, 3, &f).unwrap()
    }

    #[test]
    fn simple_b2_lattice() {
        let l = intersection_lattice(&b2(Q, [1, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(l.flats(0).len(), 1);
        assert_eq!(l.flats(1).len(), 4);
        assert_eq!(l.flats(2).len(), 1);
        assert_eq!(l.flats(2)[0].members.len(), 4);
        assert_eq!(l.characteristic_polynomial(), CharPoly::from_roots(&[1, 3]));
    }

    #[test]
    fn boolean_lattice() {
        let l = intersection_lattice(&arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(l.flats(2).len(), 3);
        assert_eq!(l.flats(3).len(), 1);
        assert!(l.all_flats().all(|f| f.mobius == if f.rank() % 2 == 0 { 1 } else { -1 }));
        assert_eq!(l.characteristic_polynomial(), CharPoly::from_roots(&[1, 1, 1]));
        assert_eq!(l.rank2_profile().get(&2), Some(&3));
    }

    #[test]
    fn b3_characteristic_polynomial() {
        let chi = characteristic_polynomial(&b3(Q, [1; 9]).unwrap()).unwrap();
        assert_eq!(chi.coeffs, vec![-15, 23, -9, 1]);
        assert_eq!(chi.to_string(), "t^3 - 9*t^2 + 23*t - 15");
        assert_eq!(chi.b1_b2(), Some((8, 15)));
    }

    #[test]
    fn empty_arrangement() {
        let chi = characteristic_polynomial(&Multiarrangement::new(Q, 3)).unwrap();
        assert_eq!(chi.to_string(), "t^3");
    }

    #[test]
    fn b3_localization_is_b2() {
        let a = b3(Q, [2, 4, 1, 4, 1, 1, 1, 1, 1]).unwrap();
        let x = flat_from_forms(Q, 3, vec![vec![Q.one(), Q.zero(), Q.zero()], vec![Q.zero(), Q.one(), Q.zero()]]);
        let local = essential_localization(&a, &x).unwrap();
        assert_eq!(local.b2_tuple(), Some([2, 4, 1, 4]));
    }

    #[test]
    fn localization_rejects_non_flats() {
        let a = arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let x = flat_from_forms(Q, 3, vec![vec![Q.one(), Q.one(), Q.zero()]]);
        assert!(localization(&a, &x).is_err());
    }

    #[test]
    fn restriction_of_boolean() {
        let a = arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let z = Hyperplane::from_i64(Q, &[0, 0, 1]).unwrap();
        let r = restriction(&a, &hyperplane_flat(&z)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.dim(), 2);
    }

    #[test]
    fn restriction_of_b3_dedups() {
        let a = b3(Q, [1; 9]).unwrap();
        let z = Hyperplane::from_i64(Q, &[0, 0, 1]).unwrap();
        let r = restriction(&a, &hyperplane_flat(&z)).unwrap();
        assert_eq!(r.b2_tuple(), Some([1, 1, 1, 1]));
    }

    #[test]
    fn isomorphism() {
        let boolean = intersection_lattice(&arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let other = intersection_lattice(&arr(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]])).unwrap();
        assert!(lattice_isomorphic(&boolean, &boolean));
        assert!(lattice_isomorphic(&boolean, &other));
        let generic4 = intersection_lattice(&arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])).unwrap();
        let pencil = intersection_lattice(&arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]])).unwrap();
        assert!(!lattice_isomorphic(&generic4, &pencil));
        assert_eq!(generic4.rank2_profile().get(&2), Some(&6));
    }
}
