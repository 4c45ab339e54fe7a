use std::io::Write;

use freext_core::arrangement::{a2, b2, b2_lines, b3, load_in, parse_field, to_json, to_text};
use freext_core::classify::{exponents, solver_exponents, to_plane};
use freext_core::derivations::{fwy_generators, peak_point_b2_min1, rank2_exponents_solver, verify_fwy};
use freext_core::extend::{
    b3_filtration, free_vertex_check, non_extendable_by_localization, restriction_bounds, search_free_extensions,
    yoshinaga_extension, yoshinaga_freeness, ziegler_restriction, SearchDomain,
};
use freext_core::lattice::{characteristic_polynomial, intersection_lattice};
use freext_core::{Error, Field, Hyperplane, Multiarrangement, Result};
use serde_json::json;

use crate::args::{Cli, Command, Input};
use crate::svg::{decone_svg, parse_viewport};
use crate::verify::{self, Hooks};

fn field_of(cli: &Cli) -> Result<Option<Field>> {
    cli.field.as_deref().map(parse_field).transpose()
}

fn to_array<const N: usize>(v: &[u32]) -> Result<[u32; N]> {
    v.try_into().map_err(|_| Error::Parse(format!("expected {N} multiplicities, got {}", v.len())))
}

fn load(input: &Input, field: Option<Field>) -> Result<Multiarrangement> {
    let k = field.unwrap_or(Field::Rationals);
    if let Some(path) = &input.file {
        load_in(path, field)
    } else if let Some(m) = &input.b2 {
        b2(k, to_array(m)?)
    } else if let Some(m) = &input.a2 {
        Ok(a2(k, to_array(m)?))
    } else if let Some(m) = &input.b3 {
        b3(k, to_array(m)?)
    } else {
        Err(Error::Parse("no input given".into()))
    }
}

/// A hyperplane given by a variable name (`z`) or a coefficient list.
fn parse_hyperplane(a: &Multiarrangement, s: &str) -> Result<Hyperplane> {
    if let Some(i) = a.var_names().iter().position(|n| n == s.trim()) {
        let mut coeffs = vec![a.field().zero(); a.dim()];
        coeffs[i] = a.field().one();
        return Hyperplane::new(coeffs);
    }
    let words: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).collect();
    if words.len() != a.dim() {
        return Err(Error::Parse(format!("'{s}' is neither a variable nor {} coefficients", a.dim())));
    }
    let coeffs = words.iter().map(|w| a.field().parse(w)).collect::<Result<Vec<_>>>()?;
    Hyperplane::new(coeffs)
}

fn emit(out: &mut dyn Write, json: bool, value: serde_json::Value, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        let t = text();
        write!(out, "{t}")?;
        if !t.ends_with('\n') {
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Runs one command, writing its output to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let field = field_of(cli)?;
    match &cli.command {
        Command::Exponents { input, basis, json } => {
            let a = load(input, field)?;
            let rule = exponents(&a)?;
            let solved = solver_exponents(&a)?;
            if rule.pair() != solved.pair() {
                return Err(Error::Consistency(format!(
                    "{} gives {rule}, solver gives {solved} for {a}",
                    rule.provenance
                )));
            }
            let gens = if *basis { Some(rank2_exponents_solver(&to_plane(&a)?)?.basis) } else { None };
            let value = json!({
                "exponents": [rule.d1, rule.d2],
                "provenance": rule.provenance,
                "basis": gens.as_ref().map(|g| g.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
            });
            emit(out, *json, value, || {
                let mut t = format!("{rule}\n");
                if let Some(g) = &gens {
                    for d in g {
                        t.push_str(&format!("{d}\n"));
                    }
                }
                t
            })?;
        }
        Command::Lattice { input, json } => {
            let l = intersection_lattice(&load(input, field)?)?;
            emit(out, *json, l.to_json(), || l.to_string())?;
        }
        Command::Chi { input, json } => {
            let chi = characteristic_polynomial(&load(input, field)?)?;
            emit(out, *json, json!({ "coefficients": chi.coeffs, "text": chi.to_string() }), || chi.to_string())?;
        }
        Command::Ziegler { input, pivot, json } => {
            let a = load(input, field)?;
            let h = parse_hyperplane(&a, pivot)?;
            let z = ziegler_restriction(&a, &h)?;
            emit(out, *json, to_json(&z), || to_text(&z))?;
        }
        Command::Yext { input, report, json } => {
            let base = load(input, field)?;
            let c = yoshinaga_extension(&base)?;
            let e = c.arrangement();
            let verdict = if *report { Some(yoshinaga_freeness(&e, &c.distinguished())?) } else { None };
            let value = json!({ "arrangement": to_json(&e), "report": verdict });
            emit(out, *json, value, || {
                let mut t = to_text(&e);
                t.push_str(&format!("# offsets {c}\n"));
                if let Some(r) = &verdict {
                    t.push_str(&format!("# {r}\n"));
                }
                t
            })?;
        }
        Command::Freecheck { input, pivot, json } => {
            let a = load(input, field)?;
            let h = parse_hyperplane(&a, pivot)?;
            let r = yoshinaga_freeness(&a, &h)?;
            emit(out, *json, serde_json::to_value(&r)?, || r.to_string())?;
        }
        Command::Bounds { input, json } => {
            let a = load(input, field)?;
            let rows = b2_lines(a.field())
                .into_iter()
                .map(|h| restriction_bounds(&a, &h).map(|b| (h, b)))
                .collect::<Result<Vec<_>>>()?;
            let value = json!(rows
                .iter()
                .map(|(h, b)| json!({ "class": h.to_string(), "lower": b.lower, "upper": b.upper }))
                .collect::<Vec<_>>());
            emit(out, *json, value, || {
                rows.iter().map(|(h, b)| format!("{h}: {} <= |E^H| <= {}\n", b.lower, b.upper)).collect()
            })?;
        }
        Command::Search { input, height, limit, no_prune, json } => {
            let a = load(input, field)?;
            let mut domain =
                if a.field().is_rationals() { SearchDomain::rational_grid(*height) } else { SearchDomain::finite(a.field())? };
            if *no_prune {
                domain = domain.without_pruning();
            }
            let r = search_free_extensions(&a, &domain, *limit)?;
            emit(out, *json, serde_json::to_value(&r)?, || r.to_string())?;
        }
        Command::Peak { m, json } => {
            let m: [u32; 4] = to_array(m)?;
            let peak = peak_point_b2_min1(m)?;
            let e = exponents(&b2(Field::Rationals, m)?)?;
            let solved = solver_exponents(&b2(Field::Rationals, m)?)?;
            if peak != (solved.delta() == 2) {
                return Err(Error::Consistency(format!(
                    "peak rule says {peak} for {m:?}, solver gives {solved}"
                )));
            }
            emit(out, *json, json!({ "peak_point": peak, "exponents": [e.d1, e.d2] }), || {
                format!("{}, exp {e}", if peak { "peak point" } else { "not a peak point" })
            })?;
        }
        Command::Fwy { pqr, json } => {
            let [p, q, r]: [u32; 3] = to_array(pqr)?;
            let (abc, gens) = fwy_generators(p, q, r)?;
            let degs = verify_fwy(p, q, r)?;
            let value = json!({
                "parameters": [abc.0, abc.1, abc.2],
                "degrees": [degs.0, degs.1],
                "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            emit(out, *json, value, || {
                format!(
                    "(a, b, c) = ({}, {}, {}), degrees ({}, {})\n{}\n{}\n",
                    abc.0, abc.1, abc.2, degs.0, degs.1, gens[0], gens[1]
                )
            })?;
        }
        Command::Vertex { input, step, json } => {
            let a = load(input, field)?;
            let filtration = if step.is_empty() {
                b3_filtration(a.field())
            } else {
                let mut acc: Vec<Hyperplane> = Vec::new();
                let mut steps = Vec::new();
                for s in step {
                    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
                        acc.push(parse_hyperplane(&a, part)?);
                    }
                    steps.push(acc.clone());
                }
                if acc.len() < a.len() {
                    steps.push(a.hyperplanes().cloned().collect());
                }
                steps
            };
            let r = free_vertex_check(&a, &filtration)?;
            let witness = if a.field().is_rationals() { non_extendable_by_localization(&a)? } else { None };
            let value = json!({ "vertex": r, "witness": witness });
            emit(out, *json, value, || {
                let mut t = String::new();
                for c in r.conditions.iter().filter(|c| !c.trivial) {
                    t.push_str(&format!(
                        "step {}: {} against {}: m = {} >= {} {}\n",
                        c.step,
                        c.new,
                        c.old,
                        c.old_multiplicity,
                        c.required,
                        if c.satisfied { "ok" } else { "FAILS" }
                    ));
                }
                match &r.exponents {
                    Some(e) => t.push_str(&format!("free vertex condition holds, exp {e:?}\n")),
                    None => t.push_str("free vertex condition fails\n"),
                }
                if let Some(w) = &witness {
                    t.push_str(&format!(
                        "no free extension: the localization at {{{}}} is B2 with multiplicity {:?}\n",
                        w.members.join(", "),
                        w.b2_multiplicity
                    ));
                }
                t
            })?;
        }
        Command::DeconeSvg { input, pivot, viewport, output } => {
            let a = load(input, field)?;
            let h = parse_hyperplane(&a, pivot)?;
            let vp = viewport.as_deref().map(parse_viewport).transpose()?;
            let svg = decone_svg(&a, &h, vp)?;
            match output {
                Some(path) => std::fs::write(path, svg)?,
                None => write!(out, "{svg}")?,
            }
        }
        Command::Verify { only, list, json } => {
            if *list {
                for item in verify::items() {
                    writeln!(out, "{:>2} {:<15} {}", item.id, item.name, item.title)?;
                }
                return Ok(0);
            }
            let report = verify::run_with(only, &Hooks::default(), |r| {
                if !*json {
                    let _ = writeln!(out, "{r}");
                    let _ = out.flush();
                }
            })?;
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                let passed = report.results.iter().filter(|r| r.passed).count();
                writeln!(out, "{passed}/{} passed", report.results.len())?;
            }
            return Ok(report.exit_code());
        }
    }
    Ok(0)
}
