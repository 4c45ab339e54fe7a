use freext_core::arrangement::{a2, b2, b2_orbit};
use freext_core::classify::{
    b2_exponents, b2_exponents_checked, balanced_b2_representatives, exponents, solver_b2, Provenance,
};
use freext_core::derivations::{
    derivation_space_dim, free_rank2_dim, integral_i, peak_point_b2_min1, rank2_exponents_solver, verify_fwy,
};
use freext_core::Field;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const Q: Field = Field::Rationals;

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Term-by-term expansion of `t^c (t-1)^b (t+1)^a`: the two integrals cancel
/// on even powers and double on odd ones.
fn integral_by_expansion(a: u32, b: u32, c: u32) -> BigRational {
    let mut total = BigRational::zero();
    for i in 0..=b {
        for j in 0..=a {
            let n = c + i + j;
            if n.is_multiple_of(2) {
                continue;
            }
            let sign = if (b - i).is_multiple_of(2) { 1 } else { -1 };
            let coeff = binom(b, i) * binom(a, j) * BigInt::from(sign);
            total += BigRational::new(coeff * BigInt::from(2), BigInt::from(n + 1));
        }
    }
    total
}

#[test]
fn exponent_table() {
    let cases: &[([u32; 4], (u32, u32))] = &[
        ([2, 2, 1, 3], (3, 5)),
        ([1, 3, 1, 3], (4, 4)),
        ([2, 3, 1, 2], (4, 4)),
        ([3, 5, 2, 2], (5, 7)),
        ([2, 4, 1, 4], (5, 6)),
        ([2, 5, 1, 5], (6, 7)),
        ([2, 6, 1, 6], (7, 8)),
        ([1, 1, 1, 1], (1, 3)),
    ];
    for &(m, want) in cases {
        assert_eq!(b2_exponents_checked(m).unwrap().pair(), want, "{m:?}");
    }
    for k in 1..=5 {
        assert_eq!(exponents(&a2(Q, [2, k, k])).unwrap().pair(), (k + 1, k + 1));
        assert_eq!(exponents(&a2(Q, [k, k, 2])).unwrap().pair(), (k + 1, k + 1));
    }
}

#[test]
fn rules_agree_with_solver_on_balanced_b2() {
    for m in balanced_b2_representatives(10) {
        let rule = b2_exponents(m).unwrap();
        assert_eq!(rule.pair(), solver_b2(m).unwrap(), "{m:?} via {}", rule.provenance);
    }
}

#[test]
fn rules_agree_with_solver_on_unbalanced_and_a2() {
    for m in [[5, 1, 1, 1], [1, 6, 2, 1], [4, 1, 1, 2]] {
        let r = b2_exponents(m).unwrap();
        assert_eq!(r.provenance, Provenance::UnbalancedRule);
        assert_eq!(r.pair(), solver_b2(m).unwrap());
    }
    for p in 1..=4 {
        for q in 1..=4 {
            for r in 1..=4 {
                let a = a2(Q, [p, q, r]);
                let got = exponents(&a).unwrap().pair();
                assert_eq!(got, rank2_exponents_solver(&a).unwrap().exponents, "({p},{q},{r})");
            }
        }
    }
}

#[test]
fn dimensions_follow_exponents() {
    let a = b2(Q, [2, 2, 1, 3]).unwrap();
    for d in 0..=10 {
        assert_eq!(derivation_space_dim(&a, d), free_rank2_dim(d, 3, 5), "degree {d}");
    }
}

#[test]
fn exponents_are_invariant_on_orbits() {
    for m in [[2, 4, 1, 4], [3, 5, 2, 2], [1, 2, 3, 4]] {
        let want = b2_exponents(m).unwrap().pair();
        for t in b2_orbit(m) {
            assert_eq!(solver_b2(t).unwrap(), want, "{t:?}");
        }
    }
}

#[test]
fn integral_matches_expansion_and_vanishing_pattern() {
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 0..=6 {
                let i = integral_i(a, b, c);
                assert_eq!(i, integral_by_expansion(a, b, c), "({a},{b},{c})");
                assert_eq!(i.is_zero(), a == b && (a + b + c) % 2 == 0, "({a},{b},{c})");
            }
        }
    }
    assert_eq!(integral_i(1, 1, 1), BigRational::new((-1).into(), 2.into()));
}

#[test]
fn fwy_generators_small() {
    for total in 3..=9u32 {
        for p in 1..total {
            for q in 1..total - p {
                let r = total - p - q;
                if [p, q, r].iter().any(|&v| 2 * v >= total) {
                    continue;
                }
                let degs = verify_fwy(p, q, r).unwrap();
                assert_eq!(degs, exponents(&a2(Q, [p, q, r])).unwrap().pair());
            }
        }
    }
}

#[test]
fn peak_rule_matches_solver() {
    for m in balanced_b2_representatives(12) {
        if m.iter().min() != Some(&1) {
            continue;
        }
        let (d1, d2) = solver_b2(m).unwrap();
        assert_eq!(peak_point_b2_min1(m).unwrap(), d2 - d1 == 2, "{m:?}");
    }
}
