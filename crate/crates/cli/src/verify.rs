//! The acceptance suite: each item reproduces one published result or
//! invariant and reports PASS or FAIL with a one-line diagnostic.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use freext_core::arrangement::{a2, b2, b2_lines, b2_orbit, b3, Hyperplane};
use freext_core::classify::{
    b2_exponents, b2_exponents_checked_with, balanced_b2_representatives, exponents, solver_exponents, Provenance,
};
use freext_core::derivations::{integral_i, min1_representative, peak_point_b2_min1, peak_point_by_integral, verify_fwy};
use freext_core::extend::{
    b3_family, b3_filtration, free_vertex_check, lmp, non_extendable_by_localization, restriction_bounds,
    search_free_extensions, yoshinaga_extension, yoshinaga_freeness, ziegler_restriction, ExtensionCandidate,
    SearchDomain, SearchReport,
};
use freext_core::lattice::{hyperplane_flat, intersection_lattice, lattice_isomorphic, restriction};
use freext_core::{Error, Field, Multiarrangement, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde::Serialize;

pub type Solver = Arc<dyn Fn([u32; 4]) -> freext_core::Result<(u32, u32)> + Send + Sync>;

/// Replaceable pieces of the suite, for fault injection.
#[derive(Clone)]
pub struct Hooks {
    /// Exponents of `x^m1 y^m2 (x-y)^m3 (x+y)^m4` by linear algebra.
    pub solver: Solver,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { solver: Arc::new(freext_core::classify::solver_b2) }
    }
}

struct Failure {
    msg: String,
    internal: bool,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { internal: e.is_internal(), msg: e.to_string() }
    }
}

fn fail(msg: impl Into<String>) -> Failure {
    Failure { msg: msg.into(), internal: false }
}

type Outcome = std::result::Result<String, Failure>;

pub struct Item {
    pub id: usize,
    pub name: &'static str,
    pub title: &'static str,
    run: fn(&Hooks) -> Outcome,
}

pub fn items() -> Vec<Item> {
    vec![
        Item { id: 1, name: "exponents", title: "exponent table", run: exponent_table },
        Item { id: 2, name: "solver-oracle", title: "rules agree with the solver, |m| <= 14", run: solver_oracle },
        Item { id: 3, name: "yoshinaga", title: "Yoshinaga extension of (3,5,2,2) is not free", run: yoshinaga },
        Item { id: 4, name: "gf9", title: "GF(9) extension is free", run: gf9 },
        Item { id: 5, name: "peak", title: "peak-point rule, min entry 1, |m| <= 14", run: peak },
        Item { id: 6, name: "integrals", title: "I(a,b,c) and explicit A2 bases", run: integrals },
        Item { id: 7, name: "k3-search", title: "free extension of (2,3,1,3)", run: k3_search },
        Item { id: 8, name: "k4-search", title: "no free extension of (2,4,1,4) on the grid", run: k4_search },
        Item { id: 9, name: "non-isomorphic", title: "non-isomorphic free extensions of (3,5,2,2)", run: non_isomorphic },
        Item { id: 10, name: "b3-family", title: "B3 family: vertex condition and localization", run: b3_items },
        Item { id: 11, name: "properties", title: "randomized invariants, 500 cases each", run: properties },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemResult {
    pub id: usize,
    pub name: String,
    pub title: String,
    pub passed: bool,
    pub internal: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub results: Vec<ItemResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// 0 when everything passes, 2 if a failure was an internal consistency
    /// error, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else if self.results.iter().any(|r| !r.passed && r.internal) {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for ItemResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:>2}. {}: {} ({:.1}s)", self.id, self.title, self.detail, self.seconds)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        write!(f, "{passed}/{} passed", self.results.len())
    }
}

pub fn run_item(item: &Item, hooks: &Hooks) -> ItemResult {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| (item.run)(hooks))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure { msg: format!("panicked: {msg}"), internal: true })
    });
    let (passed, internal, detail) = match outcome {
        Ok(d) => (true, false, d),
        Err(f) => (false, f.internal, f.msg),
    };
    ItemResult {
        id: item.id,
        name: item.name.into(),
        title: item.title.into(),
        passed,
        internal,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the named items (all when `only` is empty), calling `each` after
/// every item.
pub fn run_with(only: &[String], hooks: &Hooks, mut each: impl FnMut(&ItemResult)) -> freext_core::Result<VerifyReport> {
    let all = items();
    for name in only {
        if !all.iter().any(|i| i.name == name || i.id.to_string() == *name) {
            let names: Vec<&str> = all.iter().map(|i| i.name).collect();
            return Err(Error::Parse(format!("unknown item '{name}' (known: {})", names.join(", "))));
        }
    }
    let mut results = Vec::new();
    for item in &all {
        if !only.is_empty() && !only.iter().any(|n| n == item.name || *n == item.id.to_string()) {
            continue;
        }
        let r = run_item(item, hooks);
        each(&r);
        results.push(r);
    }
    Ok(VerifyReport { results })
}

pub fn run(only: &[String], hooks: &Hooks) -> freext_core::Result<VerifyReport> {
    run_with(only, hooks, |_| {})
}

const Q: Field = Field::Rationals;

fn exponent_table(hooks: &Hooks) -> Outcome {
    let mut cases: Vec<([u32; 4], (u32, u32))> =
        vec![([2, 2, 1, 3], (3, 5)), ([1, 3, 1, 3], (4, 4)), ([2, 3, 1, 2], (4, 4)), ([3, 5, 2, 2], (5, 7))];
    for k in 4..=6 {
        cases.push(([2, k, 1, k], (k + 1, k + 2)));
    }
    for (m, want) in &cases {
        let got = b2_exponents_checked_with(*m, &*hooks.solver)?.pair();
        if got != *want {
            return Err(fail(format!("{m:?} has exponents {got:?}, expected {want:?}")));
        }
    }
    let mut a2_cases = 0;
    for k in 1..=5 {
        for m in [[2, k, k], [k, k, 2]] {
            let a = a2(Q, m);
            let (rule, solved) = (exponents(&a)?.pair(), solver_exponents(&a)?.pair());
            if rule != solved {
                return Err(Failure { msg: format!("{m:?}: rule {rule:?}, solver {solved:?}"), internal: true });
            }
            if rule != (k + 1, k + 1) {
                return Err(fail(format!("A2 {m:?} has exponents {rule:?}, expected {:?}", (k + 1, k + 1))));
            }
            a2_cases += 1;
        }
    }
    Ok(format!("{} B2 and {a2_cases} A2 multiplicities match", cases.len()))
}

fn solver_oracle(hooks: &Hooks) -> Outcome {
    let reps = balanced_b2_representatives(14);
    let mut by_rule: Vec<(Provenance, usize)> = Vec::new();
    for m in &reps {
        let e = b2_exponents_checked_with(*m, &*hooks.solver)?;
        match by_rule.iter_mut().find(|(p, _)| *p == e.provenance) {
            Some((_, n)) => *n += 1,
            None => by_rule.push((e.provenance, 1)),
        }
    }
    let parts: Vec<String> = by_rule.iter().map(|(p, n)| format!("{p} {n}")).collect();
    Ok(format!("{} canonical multiplicities agree ({})", reps.len(), parts.join(", ")))
}

fn yoshinaga(_: &Hooks) -> Outcome {
    let a = b2(Q, [3, 5, 2, 2])?;
    let c = yoshinaga_extension(&a)?;
    let e = c.arrangement();
    let r = yoshinaga_freeness(&e, &c.distinguished())?;
    let l = lmp(&e)?;
    if (l, r.lmp, r.vgmp, r.free) != (49, 49, 47, false) {
        return Err(fail(format!("LMP {l}/{}, VGMP {}, free {}", r.lmp, r.vgmp, r.free)));
    }
    Ok(format!("{} hyperplanes, LMP = 49, VGMP = 47, not free", e.len()))
}

/// `z (x-y)(x-y+z) x (x+z)(x+2z)(x+wz) y (y+z)(y+2z)(y+wz)` over GF(9).
pub fn gf9_example(w: &Scalar) -> freext_core::Result<Multiarrangement> {
    let k = w.field();
    let s = |v: i64| k.from_i64(v);
    let form = |a: i64, b: i64, c: Scalar| (vec![s(a), s(b), c], 1);
    let forms = vec![
        form(0, 0, s(1)),
        form(1, -1, s(0)),
        form(1, -1, s(1)),
        form(1, 0, s(0)),
        form(1, 0, s(1)),
        form(1, 0, s(2)),
        form(1, 0, w.clone()),
        form(0, 1, s(0)),
        form(0, 1, s(1)),
        form(0, 1, s(2)),
        form(0, 1, w.clone()),
    ];
    Multiarrangement::from_forms(k, 3, forms)
}

fn gf9(_: &Hooks) -> Outcome {
    let k = Field::gf(3, 2)?;
    let z = Hyperplane::from_i64(k, &[0, 0, 1])?;
    let mut count = 0;
    for w in k.elements().expect("finite") {
        if (0..3).any(|i| w == k.from_i64(i)) {
            continue;
        }
        let e = gf9_example(&w)?;
        let zr = ziegler_restriction(&e, &z)?;
        let mut want = Multiarrangement::new(k, 2);
        want.insert(Hyperplane::from_i64(k, &[1, 0])?, 4);
        want.insert(Hyperplane::from_i64(k, &[0, 1])?, 4);
        want.insert(Hyperplane::from_i64(k, &[1, -1])?, 2);
        if zr != want {
            return Err(fail(format!("w = {w}: restriction is {zr}")));
        }
        let r = yoshinaga_freeness(&e, &z)?;
        let (d1, d2) = r.restriction_exponents;
        if r.b2 != 25 || (d1 * d2) as i64 != 25 || r.exponents != Some([1, 5, 5]) {
            return Err(fail(format!("w = {w}: {r}")));
        }
        count += 1;
    }
    Ok(format!("11 hyperplanes, b2 = 25 = 5*5, exp (1,5,5) for all {count} admissible w"))
}

fn peak(hooks: &Hooks) -> Outcome {
    let (mut checked, mut peaks, mut by_integral) = (0, 0, 0);
    for rep in balanced_b2_representatives(14) {
        if rep.iter().min() != Some(&1) {
            continue;
        }
        let (d1, d2) = (hooks.solver)(rep)?;
        let measured = d2 - d1 == 2;
        for t in b2_orbit(rep) {
            let rule = peak_point_b2_min1(t)?;
            if rule != measured {
                return Err(Failure {
                    msg: format!("{t:?}: rule says {rule}, solver gives ({d1}, {d2})"),
                    internal: true,
                });
            }
            checked += 1;
        }
        if let Some(via) = min1_representative(rep).and_then(peak_point_by_integral) {
            if via != measured {
                return Err(Failure { msg: format!("{rep:?}: integral test says {via}"), internal: true });
            }
            by_integral += 1;
        }
        peaks += measured as usize;
    }
    Ok(format!("{checked} multiplicities, {peaks} peak orbits, {by_integral} orbits also by the integral test"))
}

fn integrals(_: &Hooks) -> Outcome {
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 0..=6 {
                let zero = integral_i(a, b, c).to_string() == "0";
                if zero != (a == b && (a + b + c) % 2 == 0) {
                    return Err(fail(format!("I({a},{b},{c}) = {}", integral_i(a, b, c))));
                }
            }
        }
    }
    let i111 = integral_i(1, 1, 1).to_string();
    if i111 != "-1/2" {
        return Err(fail(format!("I(1,1,1) = {i111}")));
    }
    let mut n = 0;
    for total in 3..=13u32 {
        for p in 1..total {
            for q in 1..total - p {
                let r = total - p - q;
                if [p, q, r].iter().any(|&v| 2 * v >= total) {
                    continue;
                }
                let degs = verify_fwy(p, q, r)?;
                let want = exponents(&a2(Q, [p, q, r]))?.pair();
                if degs != want {
                    return Err(fail(format!("({p},{q},{r}): generator degrees {degs:?}, exponents {want:?}")));
                }
                n += 1;
            }
        }
    }
    Ok(format!("343 integrals, I(1,1,1) = -1/2, {n} explicit bases pass membership and Saito"))
}

fn grid_search(m: [u32; 4]) -> freext_core::Result<SearchReport> {
    search_free_extensions(&b2(Q, m)?, &SearchDomain::rational_grid(4), None)
}

fn k3_search(_: &Hooks) -> Outcome {
    let r = grid_search([2, 3, 1, 3])?;
    let good = r
        .extensions
        .iter()
        .filter(|e| e.report.exponents == Some([1, 4, 5]) && e.report.lmp == 29 && e.report.vgmp == 29)
        .count();
    if good == 0 {
        return Err(fail(format!("no free extension with exp (1,4,5) among {}", r.free_found)));
    }
    Ok(format!("{good} free extensions with exp (1,4,5), LMP = VGMP = 29, e.g. {}", r.extensions[0].candidate))
}

fn k4_search(_: &Hooks) -> Outcome {
    let base = b2(Q, [2, 4, 1, 4])?;
    for h in b2_lines(Q) {
        let b = restriction_bounds(&base, &h)?;
        if (b.lower, b.upper) != (5, 6) {
            return Err(fail(format!("bounds for {h} are {b:?}, expected 5..=6")));
        }
    }
    let r = grid_search([2, 4, 1, 4])?;
    if r.free_found != 0 {
        return Err(fail(format!("found {} free extensions: {}", r.free_found, r.extensions[0].candidate)));
    }
    if !r.restriction_bounds_used || !r.lmp_budget_used {
        return Err(fail("pruning rules were not active"));
    }
    Ok(format!(
        "0 free extensions over {}; pruned {} branches by 5 <= |E^H| <= 6 and {} by the LMP budget, {} complete candidates tested",
        r.grid_bound, r.pruned_by_restriction, r.pruned_by_lmp, r.candidates_tested
    ))
}

fn non_isomorphic(_: &Hooks) -> Outcome {
    let r = grid_search([3, 5, 2, 2])?;
    if r.extensions.len() < 2 {
        return Err(fail(format!("only {} free extensions found", r.extensions.len())));
    }
    let lats = r
        .extensions
        .iter()
        .map(|e| intersection_lattice(&e.candidate.arrangement()))
        .collect::<freext_core::Result<Vec<_>>>()?;
    for i in 0..lats.len() {
        for j in i + 1..lats.len() {
            if lattice_isomorphic(&lats[i], &lats[j]) {
                return Err(fail(format!(
                    "{} and {} have isomorphic lattices",
                    r.extensions[i].candidate, r.extensions[j].candidate
                )));
            }
        }
    }
    let profiles: Vec<String> = lats.iter().map(|l| format!("{:?}", l.rank2_profile())).collect();
    Ok(format!("{} free extensions, pairwise non-isomorphic (rank-2 profiles {})", lats.len(), profiles.join(" vs ")))
}

fn b3_items(_: &Hooks) -> Outcome {
    let filtration = b3_filtration(Q);
    for k in [4, 5] {
        for bits in 0..32u32 {
            let tail: [u32; 5] = std::array::from_fn(|i| 1 + (bits >> i & 1));
            let r = free_vertex_check(&b3_family(Q, k, tail)?, &filtration)?;
            if r.satisfied != (bits == 0) {
                return Err(fail(format!("k = {k}, (e,f,g,h,i) = {tail:?}: satisfied = {}", r.satisfied)));
            }
            if bits == 0 && r.exponents != Some(vec![5, k + 1, k + 2]) {
                return Err(fail(format!("k = {k}: exponents {:?}", r.exponents)));
            }
        }
    }
    for k in 4..=6 {
        match non_extendable_by_localization(&b3_family(Q, k, [1; 5])?)? {
            Some(w) if w.k == k => {}
            other => return Err(fail(format!("k = {k}: witness {other:?}"))),
        }
    }
    if let Some(w) = non_extendable_by_localization(&b3_family(Q, 3, [1; 5])?)? {
        return Err(fail(format!("k = 3 has a witness {w:?}")));
    }
    if non_extendable_by_localization(&b3(Q, [1; 9])?)?.is_some() {
        return Err(fail("simple B3 has a witness"));
    }
    let w = non_extendable_by_localization(&b3_family(Q, 4, [1; 5])?)?.expect("checked");
    Ok(format!(
        "vertex condition holds exactly for e=f=g=h=i=1 with exp (5,k+1,k+2), k = 4, 5; witness at {{{}}} for k = 4..6, none for k = 3",
        w.members.join(", ")
    ))
}

fn rank3_arrangement() -> impl Strategy<Value = Multiarrangement> {
    prop::collection::vec(prop::array::uniform3(-2i64..=2), 3..9).prop_filter_map("rank 3", |forms| {
        let forms: Vec<(Vec<Scalar>, u32)> = forms
            .into_iter()
            .filter(|f| f.iter().any(|&c| c != 0))
            .map(|f| (f.iter().map(|&c| Scalar::rational(c, 1)).collect(), 1))
            .collect();
        let a = Multiarrangement::from_forms(Q, 3, forms).ok()?.underlying();
        (a.rank() == 3).then_some(a)
    })
}

fn b2_candidate() -> impl Strategy<Value = ExtensionCandidate> {
    prop::array::uniform4(1u32..=3)
        .prop_flat_map(|m| {
            let offsets: Vec<_> = m
                .iter()
                .map(|&k| prop::sample::subsequence((-3i64..=3).collect::<Vec<_>>(), k as usize))
                .collect();
            (Just(m), offsets)
        })
        .prop_map(|(m, offsets)| {
            let classes = b2_lines(Q)
                .iter()
                .zip(offsets)
                .map(|(h, ts)| (h.clone(), ts.into_iter().map(|t| Scalar::rational(t, 1)).collect()))
                .collect();
            ExtensionCandidate::new(b2(Q, m).expect("char 0"), classes).expect("distinct offsets")
        })
}

fn runner() -> TestRunner {
    let config = Config { cases: 500, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>) -> Outcome
where
    S::Value: fmt::Debug,
{
    runner().run(&strategy, test).map_err(|e| fail(format!("{name}: {e}")))?;
    Ok(name.to_string())
}

fn properties(_: &Hooks) -> Outcome {
    let mut passed = Vec::new();
    passed.push(check("LMP >= VGMP", b2_candidate(), |c| {
        let r = yoshinaga_freeness(&c.arrangement(), &c.distinguished()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(r.lmp >= r.vgmp);
        Ok(())
    })?);
    passed.push(check("deletion", (rank3_arrangement(), any::<prop::sample::Index>()), |(a, pick)| {
        let hs: Vec<Hyperplane> = a.hyperplanes().cloned().collect();
        let h = &hs[pick.index(hs.len())];
        let drop = lmp(&a).unwrap() - lmp(&a.deletion(h).unwrap()).unwrap();
        prop_assert_eq!(drop, restriction(&a, &hyperplane_flat(h)).unwrap().len() as i64);
        Ok(())
    })?);
    passed.push(check("chi(1) = 0", rank3_arrangement(), |a| {
        prop_assert_eq!(intersection_lattice(&a).unwrap().characteristic_polynomial().eval(1), 0);
        Ok(())
    })?);
    passed.push(check("P2 identity", rank3_arrangement(), |a| {
        let profile = intersection_lattice(&a).unwrap().rank2_profile();
        let pairs = |n: usize| (n * n.saturating_sub(1) / 2) as i64;
        let heavy: i64 = profile.iter().filter(|(&i, _)| i > 2).map(|(&i, &c)| pairs(i) * c as i64).sum();
        prop_assert_eq!(profile.get(&2).copied().unwrap_or(0) as i64, pairs(a.len()) - heavy);
        Ok(())
    })?);
    passed.push(check("B2 symmetry", prop::array::uniform4(0u32..=6), |m| {
        if m.iter().filter(|&&v| v > 0).count() < 2 {
            return Ok(());
        }
        let want = b2_exponents(m).unwrap().pair();
        for t in b2_orbit(m) {
            prop_assert_eq!(b2_exponents(t).unwrap().pair(), want);
        }
        Ok(())
    })?);
    Ok(format!("{} hold on 500 cases each", passed.join(", ")))
}
