use serde::Serialize;

use crate::arrangement::{Hyperplane, Multiarrangement};
use crate::classify::{b2_labeling, exponents};
use crate::error::{Error, Result};

/// Bounds on `|E^{H1}|` for a free extension `E` of a balanced B2
/// multiarrangement, where `H1 ∩ ker z` is the line `class` of the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionBounds {
    pub lower: u32,
    pub upper: u32,
}

impl RestrictionBounds {
    pub fn contains(&self, size: u32) -> bool {
        self.lower <= size && size <= self.upper
    }

    /// In a free extension, deleting `H1` keeps freeness iff its restriction
    /// attains the upper bound.
    pub fn deletion_free(&self, size: u32) -> bool {
        size == self.upper
    }
}

pub fn restriction_bounds(a: &Multiarrangement, class: &Hyperplane) -> Result<RestrictionBounds> {
    if !a.field().is_rationals() {
        return Err(Error::Unsupported("restriction bounds are available over Q only".into()));
    }
    if b2_labeling(a).is_none() {
        return Err(Error::Hypothesis(format!("{a} is not a B2 multiarrangement")));
    }
    if !a.is_balanced() {
        return Err(Error::Hypothesis(format!("{a} is not balanced")));
    }
    let own = a.multiplicity(class);
    if own == 0 {
        return Err(Error::Arrangement(format!("{class} is not in {a}")));
    }
    // lines parallel to H1 all meet it in the single point at infinity, so
    // only the other classes contribute
    let m1 = a.iter().filter(|(h, _)| *h != class).map(|(_, m)| m).max().unwrap_or(0);
    let r = a.total();
    let upper = if r % 2 == 1 {
        let deleted = a.with_multiplicity(class, own - 1);
        if exponents(&deleted)?.delta() == 2 {
            (r + 3) / 2
        } else {
            r.div_ceil(2)
        }
    } else if exponents(a)?.delta() == 2 {
        r / 2
    } else {
        (r + 2) / 2
    };
    Ok(RestrictionBounds { lower: 1 + m1, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{b2, b2_lines};
    use crate::exactalg::Field;

    fn bounds(m: [u32; 4]) -> Vec<(u32, u32)> {
        let a = b2(Field::Rationals, m).unwrap();
        b2_lines(Field::Rationals)
            .iter()
            .map(|h| {
                let b = restriction_bounds(&a, h).unwrap();
                (b.lower, b.upper)
            })
            .collect()
    }

    #[test]
    fn k4_family() {
        assert_eq!(bounds([2, 4, 1, 4]), vec![(5, 6); 4]);
        assert_eq!(bounds([2, 5, 1, 5]), vec![(6, 7); 4]);
    }

    #[test]
    fn k3_has_a_peak_deletion() {
        assert_eq!(bounds([2, 3, 1, 3]), vec![(4, 5), (4, 6), (4, 5), (4, 5)]);
    }

    #[test]
    fn even_total() {
        assert_eq!(bounds([3, 5, 2, 2]), vec![(6, 6), (4, 6), (6, 6), (6, 6)]);
    }

    #[test]
    fn rejects_non_b2() {
        let a = crate::arrangement::a2(Field::Rationals, [2, 2, 2]);
        assert!(restriction_bounds(&a, &b2_lines(Field::Rationals)[0]).is_err());
    }
}
