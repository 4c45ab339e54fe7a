use freext_core::arrangement::{b2, b2_orbit, Hyperplane};
use freext_core::classify::{b2_exponents, solver_b2};
use freext_core::extend::{lmp, yoshinaga_freeness, ExtensionCandidate};
use freext_core::lattice::{hyperplane_flat, intersection_lattice, restriction};
use freext_core::{Field, Multiarrangement, Scalar};
use proptest::prelude::*;

const Q: Field = Field::Rationals;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, ..ProptestConfig::default() }
}

/// Distinct integer coefficient vectors spanning 3-space.
fn rank3_arrangement() -> impl Strategy<Value = Multiarrangement> {
    prop::collection::vec(prop::array::uniform3(-2i64..=2), 3..9).prop_filter_map("rank 3", |forms| {
        let forms: Vec<(Vec<Scalar>, u32)> = forms
            .into_iter()
            .filter(|f| f.iter().any(|&c| c != 0))
            .map(|f| (f.iter().map(|&c| Scalar::rational(c, 1)).collect(), 1))
            .collect();
        let a = Multiarrangement::from_forms(Q, 3, forms).ok()?;
        let a = a.underlying();
        (a.rank() == 3).then_some(a)
    })
}

/// An extension of a B2 multiplicity with entries in 1..=3 and distinct
/// integer offsets in -3..=3.
fn b2_candidate() -> impl Strategy<Value = ExtensionCandidate> {
    prop::array::uniform4(1u32..=3).prop_flat_map(|m| {
        let offsets: Vec<_> = m
            .iter()
            .map(|&k| prop::sample::subsequence((-3i64..=3).collect::<Vec<_>>(), k as usize))
            .collect();
        (Just(m), offsets)
    })
    .prop_map(|(m, offsets)| {
        let base = b2(Q, m).unwrap();
        let lines = freext_core::arrangement::b2_lines(Q);
        let classes = lines
            .iter()
            .zip(offsets)
            .map(|(h, ts)| (h.clone(), ts.into_iter().map(|t| Scalar::rational(t, 1)).collect()))
            .collect();
        ExtensionCandidate::new(base, classes).unwrap()
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lmp_at_least_vgmp(c in b2_candidate()) {
        let r = yoshinaga_freeness(&c.arrangement(), &c.distinguished()).unwrap();
        prop_assert!(r.lmp >= r.vgmp);
        prop_assert_eq!(r.free, r.b2 == r.restriction_exponents.0 as i64 * r.restriction_exponents.1 as i64);
    }

    #[test]
    fn deletion_drops_lmp_by_restriction_size(a in rank3_arrangement(), pick in any::<prop::sample::Index>()) {
        let hs: Vec<Hyperplane> = a.hyperplanes().cloned().collect();
        let h = &hs[pick.index(hs.len())];
        let deleted = a.deletion(h).unwrap();
        let restricted = restriction(&a, &hyperplane_flat(h)).unwrap();
        prop_assert_eq!(lmp(&a).unwrap() - lmp(&deleted).unwrap(), restricted.len() as i64);
    }

    #[test]
    fn chi_vanishes_at_one(a in rank3_arrangement()) {
        let chi = intersection_lattice(&a).unwrap().characteristic_polynomial();
        prop_assert_eq!(chi.eval(1), 0);
        prop_assert_eq!(chi.coeffs[2], -(a.len() as i64));
    }

    #[test]
    fn rank2_profile_identity(a in rank3_arrangement()) {
        let profile = intersection_lattice(&a).unwrap().rank2_profile();
        let pairs = |n: usize| (n * n.saturating_sub(1) / 2) as i64;
        let heavy: i64 = profile.iter().filter(|(&i, _)| i > 2).map(|(&i, &c)| pairs(i) * c as i64).sum();
        let p2 = profile.get(&2).copied().unwrap_or(0) as i64;
        prop_assert_eq!(p2, pairs(a.len()) - heavy);
    }

    #[test]
    fn b2_exponents_invariant_under_symmetries(m in prop::array::uniform4(0u32..=6)) {
        prop_assume!(m.iter().filter(|&&v| v > 0).count() >= 2);
        let want = b2_exponents(m).unwrap().pair();
        for t in b2_orbit(m) {
            prop_assert_eq!(b2_exponents(t).unwrap().pair(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn b2_rules_match_solver(m in prop::array::uniform4(1u32..=4)) {
        prop_assert_eq!(b2_exponents(m).unwrap().pair(), solver_b2(m).unwrap());
    }
}
