use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{restriction_bounds, vgmp_of, yoshinaga_freeness, ExtensionCandidate, FreenessReport};
use crate::arrangement::{Hyperplane, Multiarrangement};
use crate::classify::{b2_labeling, exponents};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};

/// The offsets a search may use, with its pruning switches.
#[derive(Clone, Debug)]
pub struct SearchDomain {
    pub field: Field,
    /// Candidate offsets, sorted.
    pub universe: Vec<Scalar>,
    /// Height bound of the rational grid, if that is what `universe` is.
    pub height: Option<u32>,
    pub use_restriction_bounds: bool,
    pub use_lmp_budget: bool,
}

impl SearchDomain {
    /// All rationals `p/q` with `|p| <= h` and `1 <= q <= h`.
    pub fn rational_grid(h: u32) -> SearchDomain {
        let h = h.max(1) as i64;
        let mut universe: Vec<Scalar> = (-h..=h)
            .flat_map(|p| (1..=h).map(move |q| Scalar::rational(p, q)))
            .collect();
        universe.sort();
        universe.dedup();
        SearchDomain {
            field: Field::Rationals,
            universe,
            height: Some(h as u32),
            use_restriction_bounds: true,
            use_lmp_budget: true,
        }
    }

    /// Every element of a finite field.
    pub fn finite(field: Field) -> Result<SearchDomain> {
        if field.is_rationals() {
            return Err(Error::Field("expected a finite field".into()));
        }
        let mut universe = field.elements().expect("finite field");
        universe.sort();
        Ok(SearchDomain { field, universe, height: None, use_restriction_bounds: false, use_lmp_budget: true })
    }

    pub fn without_pruning(mut self) -> SearchDomain {
        self.use_restriction_bounds = false;
        self.use_lmp_budget = false;
        self
    }

    pub fn describe(&self) -> String {
        match self.height {
            Some(h) => format!(
                "offsets p/q with |p| <= {h}, 1 <= q <= {h} ({} values), normalized by translation and positive scaling",
                self.universe.len()
            ),
            None => format!("all {} elements of {}, normalized by translation and scaling", self.universe.len(), self.field),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundExtension {
    #[serde(serialize_with = "display_string")]
    pub candidate: ExtensionCandidate,
    pub report: FreenessReport,
}

fn display_string<S: serde::Serializer>(c: &ExtensionCandidate, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub grid_bound: String,
    pub vgmp_target: i64,
    pub restriction_exponents: (u32, u32),
    pub restriction_bounds_used: bool,
    pub lmp_budget_used: bool,
    /// Complete offset assignments whose LMP was evaluated.
    pub candidates_tested: u64,
    /// Single-offset placements made by the enumeration.
    pub nodes: u64,
    pub pruned_by_restriction: u64,
    pub pruned_by_lmp: u64,
    pub free_found: usize,
    pub truncated: bool,
    pub extensions: Vec<FoundExtension>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid: {}", self.grid_bound)?;
        writeln!(
            f,
            "VGMP target {} (restriction exponents {:?})",
            self.vgmp_target, self.restriction_exponents
        )?;
        writeln!(
            f,
            "tested {} candidates, {} nodes, pruned {} by restriction bounds and {} by the LMP budget",
            self.candidates_tested, self.nodes, self.pruned_by_restriction, self.pruned_by_lmp
        )?;
        write!(f, "free extensions found: {}", self.free_found)?;
        if self.truncated {
            write!(f, " (showing {})", self.extensions.len())?;
        }
        for e in &self.extensions {
            write!(f, "\n  {}  [{}]", e.candidate, e.report)?;
        }
        Ok(())
    }
}

/// Search plan shared by all workers.
struct Plan {
    /// Class of each slot, in enumeration order.
    slot_class: Vec<usize>,
    /// Index of the slot within its class.
    slot_rank: Vec<usize>,
    /// Number of slots per class.
    class_size: Vec<usize>,
    /// Forced universe index for pinned slots.
    pinned: Vec<Option<usize>>,
    universe_len: usize,
    nclasses: usize,
    /// Point id of the affine intersection of two lines, indexed by
    /// `((c1 * n + c2) * u + u1) * u + u2`.
    points: Vec<u32>,
    upper: Option<Vec<u32>>,
    /// Least LMP increase still to come from slots `j..`.
    future_min: Vec<i64>,
    vgmp: i64,
    use_budget: bool,
    lemma_is_theorem: bool,
}

impl Plan {
    fn point(&self, c1: usize, u1: usize, c2: usize, u2: usize) -> u32 {
        let (n, u) = (self.nclasses, self.universe_len);
        self.points[((c1 * n + c2) * u + u1) * u + u2]
    }
}

#[derive(Default)]
struct Tally {
    nodes: u64,
    leaves: u64,
    pruned_restriction: u64,
    pruned_lmp: u64,
    free: Vec<Vec<usize>>,
    below: Vec<Vec<usize>>,
}

impl Tally {
    fn absorb(&mut self, other: Tally) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        self.pruned_restriction += other.pruned_restriction;
        self.pruned_lmp += other.pruned_lmp;
        self.free.extend(other.free);
        self.below.extend(other.below);
    }
}

struct Walker<'a> {
    plan: &'a Plan,
    /// Universe index of each placed slot.
    assign: Vec<usize>,
    /// Affine points on each placed line.
    count: Vec<u32>,
    lmp: i64,
    split: usize,
    split_value: usize,
    count_prefix: bool,
    scratch: Vec<(u32, usize, u32)>,
    tally: Tally,
}

impl Walker<'_> {
    fn range(&self, s: usize) -> std::ops::Range<usize> {
        let plan = self.plan;
        if let Some(p) = plan.pinned[s] {
            return p..p + 1;
        }
        let lo = if plan.slot_rank[s] == 0 { 0 } else { self.assign[s - 1] + 1 };
        let left = plan.class_size[plan.slot_class[s]] - plan.slot_rank[s] - 1;
        let hi = plan.universe_len.saturating_sub(left);
        if s == self.split {
            if self.split_value >= lo && self.split_value < hi {
                return self.split_value..self.split_value + 1;
            }
            return 0..0;
        }
        lo..hi.max(lo)
    }

    fn walk(&mut self, s: usize) {
        let plan = self.plan;
        if s == plan.slot_class.len() {
            self.tally.leaves += 1;
            if self.lmp == plan.vgmp {
                self.tally.free.push(self.assign.clone());
            } else if self.lmp < plan.vgmp {
                self.tally.below.push(self.assign.clone());
            }
            return;
        }
        let counted = s >= self.split || self.count_prefix;
        let c = plan.slot_class[s];
        for v in self.range(s) {
            if counted {
                self.tally.nodes += 1;
            }
            // group the placed lines of other classes by their meeting point
            self.scratch.clear();
            for (t, &u) in self.assign.iter().enumerate() {
                let ct = plan.slot_class[t];
                if ct == c {
                    continue;
                }
                let p = plan.point(c, v, ct, u);
                match self.scratch.iter_mut().find(|e| e.0 == p) {
                    Some(e) => e.2 += 1,
                    None => self.scratch.push((p, t, 1)),
                }
            }
            let new_points = self.scratch.len() as u32;
            let touched: Vec<usize> = self.scratch.iter().filter(|e| e.2 == 1).map(|e| e.1).collect();
            let gain = new_points as i64 + 1;
            for &t in &touched {
                self.count[t] += 1;
            }
            self.assign.push(v);
            self.count.push(new_points);
            self.lmp += gain;

            let mut prune_r = false;
            if let Some(upper) = &plan.upper {
                // the point at infinity adds one to every restriction
                prune_r = new_points + 1 > upper[c]
                    || touched.iter().any(|&t| self.count[t] + 1 > upper[plan.slot_class[t]]);
            }
            let prune_l = !prune_r && plan.use_budget && self.lmp + plan.future_min[s + 1] > plan.vgmp;
            if prune_r {
                if counted {
                    self.tally.pruned_restriction += 1;
                }
            } else if prune_l {
                if counted {
                    self.tally.pruned_lmp += 1;
                }
            } else {
                self.walk(s + 1);
            }

            self.lmp -= gain;
            self.count.pop();
            self.assign.pop();
            for &t in &touched {
                self.count[t] -= 1;
            }
        }
    }
}

fn worker_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("FREEXT_WORKERS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

/// Enumerates extensions of a plane multiarrangement whose offsets lie in the
/// domain, up to translation and scaling, and returns those with
/// `LMP = VGMP`, each confirmed free by the full lattice computation.
pub fn search_free_extensions(base: &Multiarrangement, domain: &SearchDomain, limit: Option<usize>) -> Result<SearchReport> {
    if base.dim() != 2 || base.rank() != 2 {
        return Err(Error::Hypothesis("search needs a rank-2 multiarrangement in the plane".into()));
    }
    if base.field() != domain.field {
        return Err(Error::Field(format!("base is over {} but the domain is over {}", base.field(), domain.field)));
    }
    let field = base.field();
    let classes: Vec<(Hyperplane, u32)> = base.iter().map(|(h, m)| (h.clone(), m)).collect();
    let find = |c: &[i64]| {
        let h = Hyperplane::from_i64(field, c).expect("nonzero");
        classes.iter().position(|(g, _)| *g == h)
    };
    let px = find(&[1, 0]).unwrap_or(0);
    let py = find(&[0, 1]).filter(|&i| i != px).unwrap_or(if px == 0 { 1 } else { 0 });
    let mut order = vec![px, py];
    let mut rest: Vec<usize> = (0..classes.len()).filter(|i| *i != px && *i != py).collect();
    rest.sort_by_key(|&i| std::cmp::Reverse(classes[i].1));
    order.extend(rest);

    let universe = &domain.universe;
    let u = universe.len();
    let zero = universe.iter().position(|v| v.is_zero());
    let one = universe.iter().position(|v| v.is_one());
    let (Some(zero), Some(one)) = (zero, one) else {
        return Err(Error::Hypothesis("the offset domain must contain 0 and 1".into()));
    };
    if one < zero {
        return Err(Error::Hypothesis("the offset domain must order 0 before 1".into()));
    }

    let mut slot_class = Vec::new();
    let mut slot_rank = Vec::new();
    let mut pinned = Vec::new();
    let scale = [px, py].into_iter().find(|&c| classes[c].1 >= 2);
    for &c in &order {
        for r in 0..classes[c].1 as usize {
            slot_class.push(c);
            slot_rank.push(r);
            pinned.push(match r {
                0 if c == px || c == py => Some(zero),
                1 if Some(c) == scale => Some(one),
                _ => None,
            });
        }
    }
    let class_size: Vec<usize> = classes.iter().map(|(_, m)| *m as usize).collect();
    if class_size.iter().any(|&m| m > u) {
        return Err(Error::Hypothesis("the offset domain has fewer values than a multiplicity".into()));
    }

    // point ids of all pairwise intersections
    let n = classes.len();
    let mut ids: BTreeMap<(Scalar, Scalar), u32> = BTreeMap::new();
    let mut points = vec![u32::MAX; n * n * u * u];
    for c1 in 0..n {
        for c2 in 0..n {
            if c1 == c2 {
                continue;
            }
            let (a1, b1) = (&classes[c1].0.coefficients()[0], &classes[c1].0.coefficients()[1]);
            let (a2, b2) = (&classes[c2].0.coefficients()[0], &classes[c2].0.coefficients()[1]);
            let det = &(a1 * b2) - &(a2 * b1);
            for (i, t1) in universe.iter().enumerate() {
                for (j, t2) in universe.iter().enumerate() {
                    let x = &(&(t1 * b2) - &(t2 * b1)) / &det;
                    let y = &(&(a1 * t2) - &(a2 * t1)) / &det;
                    let next = ids.len() as u32;
                    let id = *ids.entry((x, y)).or_insert(next);
                    points[((c1 * n + c2) * u + i) * u + j] = id;
                }
            }
        }
    }

    let restriction = exponents(base)?;
    let vgmp = vgmp_of(&restriction);
    let upper = if domain.use_restriction_bounds && field.is_rationals() && b2_labeling(base).is_some() && base.is_balanced() {
        Some(
            classes
                .iter()
                .map(|(h, _)| restriction_bounds(base, h).map(|b| b.upper))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    // every earlier line of another class meets slot j's line in a point of
    // its own within that class, plus the point at infinity
    let slots = slot_class.len();
    let mut future_min = vec![0i64; slots + 1];
    let mut seen = vec![0i64; n];
    let mut least = vec![0i64; slots];
    for j in 0..slots {
        let c = slot_class[j];
        least[j] = 1 + (0..n).filter(|&d| d != c).map(|d| seen[d]).max().unwrap_or(0);
        seen[c] += 1;
    }
    for j in (0..slots).rev() {
        future_min[j] = future_min[j + 1] + least[j];
    }

    let plan = Plan {
        slot_class,
        slot_rank,
        class_size,
        pinned,
        universe_len: u,
        nclasses: n,
        points,
        upper,
        future_min,
        vgmp,
        use_budget: domain.use_lmp_budget,
        lemma_is_theorem: field.is_rationals(),
    };

    let split = plan.pinned.iter().position(|p| p.is_none());
    let tasks = if split.is_some() { u } else { 1 };
    let split = split.unwrap_or(slots);
    let run = |value: usize, count_prefix: bool| {
        let mut w = Walker {
            plan: &plan,
            assign: Vec::with_capacity(slots),
            count: Vec::with_capacity(slots),
            lmp: 0,
            split,
            split_value: value,
            count_prefix,
            scratch: Vec::new(),
            tally: Tally::default(),
        };
        w.walk(0);
        w.tally
    };
    let tallies: Vec<Tally> = match worker_pool() {
        Some(pool) => pool.install(|| (0..tasks).into_par_iter().map(|v| run(v, v == 0)).collect()),
        None => (0..tasks).into_par_iter().map(|v| run(v, v == 0)).collect(),
    };
    let mut total = Tally::default();
    for t in tallies {
        total.absorb(t);
    }

    if plan.lemma_is_theorem {
        if let Some(a) = total.below.first() {
            let c = candidate(base, &classes, &plan, universe, a)?;
            return Err(Error::Consistency(format!("extension {c} has LMP below VGMP {vgmp}")));
        }
    }

    let free_found = total.free.len();
    let keep = limit.unwrap_or(usize::MAX).min(free_found);
    let mut extensions = Vec::with_capacity(keep);
    let h0 = Hyperplane::from_i64(field, &ExtensionCandidate::h0()).expect("nonzero");
    for a in total.free.iter().take(keep) {
        let c = candidate(base, &classes, &plan, universe, a)?;
        let report = yoshinaga_freeness(&c.arrangement(), &h0)?;
        if !report.free || report.restriction_exponents != restriction.pair() {
            return Err(Error::Consistency(format!("search marked {c} free but the lattice gives {report}")));
        }
        extensions.push(FoundExtension { candidate: c, report });
    }

    Ok(SearchReport {
        grid_bound: domain.describe(),
        vgmp_target: vgmp,
        restriction_exponents: restriction.pair(),
        restriction_bounds_used: plan.upper.is_some(),
        lmp_budget_used: plan.use_budget,
        candidates_tested: total.leaves,
        nodes: total.nodes,
        pruned_by_restriction: total.pruned_restriction,
        pruned_by_lmp: total.pruned_lmp,
        free_found,
        truncated: keep < free_found,
        extensions,
    })
}

fn candidate(
    base: &Multiarrangement,
    classes: &[(Hyperplane, u32)],
    plan: &Plan,
    universe: &[Scalar],
    assign: &[usize],
) -> Result<ExtensionCandidate> {
    let mut offsets: Vec<(Hyperplane, Vec<Scalar>)> = classes.iter().map(|(h, _)| (h.clone(), Vec::new())).collect();
    for (s, &v) in assign.iter().enumerate() {
        offsets[plan.slot_class[s]].1.push(universe[v].clone());
    }
    ExtensionCandidate::new(base.clone(), offsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{a2, b2};

    const Q: Field = Field::Rationals;

    #[test]
    fn grid_size() {
        assert_eq!(SearchDomain::rational_grid(4).universe.len(), 23);
        assert_eq!(SearchDomain::rational_grid(1).universe.len(), 3);
    }

    #[test]
    fn k3_has_a_free_extension() {
        let base = b2(Q, [2, 3, 1, 3]).unwrap();
        let r = search_free_extensions(&base, &SearchDomain::rational_grid(2), Some(1)).unwrap();
        assert_eq!(r.vgmp_target, 29);
        assert!(r.free_found >= 1);
        assert_eq!(r.extensions[0].report.exponents, Some([1, 4, 5]));
        assert_eq!(r.extensions[0].report.lmp, 29);
    }

    #[test]
    fn a2_staircase_is_found() {
        let base = a2(Q, [2, 4, 4]);
        let r = search_free_extensions(&base, &SearchDomain::rational_grid(3), None).unwrap();
        let want = |h: &[i64], ts: &[i64]| (Hyperplane::from_i64(Q, h).unwrap(), ts.iter().map(|&t| Scalar::rational(t, 1)).collect::<Vec<_>>());
        let target = ExtensionCandidate::new(
            base.clone(),
            vec![want(&[1, 0], &[0, 1]), want(&[0, 1], &[0, 1, 2, 3]), want(&[1, -1], &[-3, -2, -1, 0])],
        )
        .unwrap();
        let mut target_sorted = target.offsets.clone();
        target_sorted.sort();
        let hit = r.extensions.iter().any(|e| {
            let mut o = e.candidate.offsets.clone();
            o.sort();
            o == target_sorted
        });
        assert!(hit, "{r}");
        assert_eq!(target.arrangement().len(), 11);
    }

    #[test]
    fn pruning_does_not_lose_solutions() {
        let base = b2(Q, [1, 2, 1, 2]).unwrap();
        let d = SearchDomain::rational_grid(2);
        let pruned = search_free_extensions(&base, &d, None).unwrap();
        let full = search_free_extensions(&base, &d.clone().without_pruning(), None).unwrap();
        assert_eq!(pruned.free_found, full.free_found);
        assert!(full.pruned_by_lmp == 0 && full.pruned_by_restriction == 0);
        let a: Vec<String> = pruned.extensions.iter().map(|e| e.candidate.to_string()).collect();
        let b: Vec<String> = full.extensions.iter().map(|e| e.candidate.to_string()).collect();
        assert_eq!(a, b);
    }
}
