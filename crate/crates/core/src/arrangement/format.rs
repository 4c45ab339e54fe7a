//! Reading and writing arrangement files.
//!
//! Text format, one arrangement per file:
//!
//! ```text
//! field Q              # or: field gf 3 2, optionally followed by `mod c0 c1`
//! dim 3
//! H 0 0 1 m 1          # coefficients, then multiplicity (default 1)
//! H 1 -1/2 0 m 2
//! ```
//!
//! A JSON mirror is used for files ending in `.json`:
//! `{"field": "Q", "dim": 3, "hyperplanes": [{"coefficients": ["1", "0", "0"], "multiplicity": 2}]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Multiarrangement;
use crate::error::{Error, Result};
use crate::exactalg::{Field, FieldSpec, Scalar};

fn parse_field_words(words: &[&str]) -> std::result::Result<Field, String> {
    match words {
        ["Q"] | ["q"] | ["QQ"] | ["rationals"] => Ok(Field::Rationals),
        ["gf", rest @ ..] => {
            let num = |s: &str| s.parse::<u32>().map_err(|_| format!("expected an integer, found '{s}'"));
            let (p, degree, modulus) = match rest {
                [p] => (num(p)?, 1, None),
                [p, e] => (num(p)?, num(e)?, None),
                [p, e, "mod", c0, c1] => (num(p)?, num(e)?, Some([num(c0)?, num(c1)?])),
                _ => return Err("expected 'gf p [e] [mod c0 c1]'".into()),
            };
            Field::make(FieldSpec::Finite { p, degree, modulus }).map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown field '{}'", words.join(" "))),
    }
}

/// Parses a field name: `Q`, or `gf p [e] [mod c0 c1]` with the words
/// separated by spaces or colons (`gf:3:2`).
pub fn parse_field(spec: &str) -> Result<Field> {
    let words: Vec<&str> = spec.split(|c: char| c == ':' || c.is_whitespace()).filter(|w| !w.is_empty()).collect();
    parse_field_words(&words).map_err(Error::Parse)
}

/// Parses the text format.
pub fn parse_text(text: &str) -> Result<Multiarrangement> {
    parse_text_in(text, None)
}

/// Parses the text format, reading coefficients in `field` instead of the
/// field named in the file when one is given.
pub fn parse_text_in(text: &str, field_override: Option<Field>) -> Result<Multiarrangement> {
    let mut field = field_override;
    let mut dim = None;
    let mut forms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::ParseLine { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "field" => {
                if !forms.is_empty() {
                    return Err(err("field must precede the hyperplanes".into()));
                }
                let named = parse_field_words(&words[1..]).map_err(err)?;
                field = Some(field_override.unwrap_or(named));
            }
            "dim" => {
                let [_, d] = words[..] else {
                    return Err(err("expected 'dim <n>'".into()));
                };
                let d: usize = d.parse().map_err(|_| err(format!("bad dimension '{d}'")))?;
                if d == 0 {
                    return Err(err("dimension must be positive".into()));
                }
                dim = Some(d);
            }
            "H" | "h" => {
                let f = *field.get_or_insert(Field::Rationals);
                let d = dim.ok_or_else(|| err("'dim' must precede the hyperplanes".into()))?;
                let rest = &words[1..];
                let (coeff_words, m) = match rest.iter().position(|w| *w == "m") {
                    Some(pos) => {
                        let [mw] = rest[pos + 1..] else {
                            return Err(err("expected one multiplicity after 'm'".into()));
                        };
                        let m: u32 = mw.parse().map_err(|_| err(format!("bad multiplicity '{mw}'")))?;
                        (&rest[..pos], m)
                    }
                    None => (rest, 1),
                };
                if coeff_words.len() != d {
                    return Err(err(format!("expected {d} coefficients, found {}", coeff_words.len())));
                }
                let coeffs = coeff_words
                    .iter()
                    .map(|w| f.parse(w))
                    .collect::<Result<Vec<Scalar>>>()
                    .map_err(|e| err(e.to_string()))?;
                if coeffs.iter().all(|c| c.is_zero()) {
                    return Err(err("zero linear form".into()));
                }
                forms.push((coeffs, m));
            }
            other => return Err(err(format!("unknown directive '{other}'"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("missing 'dim' line".into()))?;
    Multiarrangement::from_forms(field.unwrap_or(Field::Rationals), dim, forms)
}

#[derive(Serialize, Deserialize)]
struct JsonArrangement {
    field: String,
    dim: usize,
    hyperplanes: Vec<JsonHyperplane>,
}

#[derive(Serialize, Deserialize)]
struct JsonHyperplane {
    coefficients: Vec<Value>,
    #[serde(default = "one")]
    multiplicity: u32,
}

fn one() -> u32 {
    1
}

pub fn parse_json(text: &str) -> Result<Multiarrangement> {
    parse_json_in(text, None)
}

pub fn parse_json_in(text: &str, field_override: Option<Field>) -> Result<Multiarrangement> {
    let j: JsonArrangement = serde_json::from_str(text)?;
    let field = match field_override {
        Some(f) => f,
        None => parse_field(&j.field)?,
    };
    let mut forms = Vec::new();
    for h in j.hyperplanes {
        let coeffs = h
            .coefficients
            .iter()
            .map(|v| match v {
                Value::String(s) => field.parse(s),
                Value::Number(n) => field.parse(&n.to_string()),
                other => Err(Error::Parse(format!("coefficient {other} is neither a string nor a number"))),
            })
            .collect::<Result<Vec<_>>>()?;
        forms.push((coeffs, h.multiplicity));
    }
    Multiarrangement::from_forms(field, j.dim, forms)
}

/// Reads a file, choosing the JSON reader for `.json` files.
pub fn load(path: &Path) -> Result<Multiarrangement> {
    load_in(path, None)
}

pub fn load_in(path: &Path, field_override: Option<Field>) -> Result<Multiarrangement> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_json_in(&text, field_override)
    } else {
        parse_text_in(&text, field_override)
    }
}

/// The words naming `field` in both file formats.
pub fn field_words(field: Field) -> String {
    match field {
        Field::Rationals => "Q".into(),
        Field::Finite(f) if f.degree() == 1 => format!("gf {}", f.characteristic()),
        Field::Finite(f) => {
            let [c0, c1] = f.modulus();
            format!("gf {} 2 mod {c0} {c1}", f.characteristic())
        }
    }
}

pub fn to_text(a: &Multiarrangement) -> String {
    let mut out = format!("field {}\ndim {}\n", field_words(a.field()), a.dim());
    for (h, m) in a.iter() {
        let coeffs: Vec<String> = h.coefficients().iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("H {} m {m}\n", coeffs.join(" ")));
    }
    out
}

pub fn to_json(a: &Multiarrangement) -> Value {
    let j = JsonArrangement {
        field: field_words(a.field()),
        dim: a.dim(),
        hyperplanes: a
            .iter()
            .map(|(h, m)| JsonHyperplane {
                coefficients: h.coefficients().iter().map(|c| Value::String(c.to_string())).collect(),
                multiplicity: m,
            })
            .collect(),
    };
    serde_json::to_value(j).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let src = "# B2 with (2,4,1,4)\nfield Q\ndim 2\nH 1 0 m 2\nH 0 1 m 4\nH 1 -1\nH 2 2 m 4  # normalized to x+y\n";
        let a = parse_text(src).unwrap();
        assert_eq!(a.b2_tuple(), Some([2, 4, 1, 4]));
        assert_eq!(parse_text(&to_text(&a)).unwrap(), a);
        let j = to_json(&a).to_string();
        assert_eq!(parse_json(&j).unwrap(), a);
    }

    #[test]
    fn finite_field_file() {
        let src = "field gf 3 2\ndim 2\nH 1 t\nH 1 1+2*t m 3\n";
        let a = parse_text(src).unwrap();
        assert_eq!(a.total(), 4);
        assert_eq!(parse_text(&to_text(&a)).unwrap(), a);
    }

    #[test]
    fn field_override() {
        let src = "field Q\ndim 2\nH 1 1 m 2\nH 1 2\n";
        let k = parse_field("gf:3").unwrap();
        let a = parse_text_in(src, Some(k)).unwrap();
        assert_eq!(a.field(), k);
        assert_eq!(a.hyperplanes().nth(1).unwrap().coefficients()[1], k.from_i64(2));
        assert_eq!(parse_field("gf 3 2").unwrap(), Field::gf(3, 2).unwrap());
        assert!(parse_field("gf:4").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_text("field Q\ndim 2\nH 1 2 3\n") {
            Err(Error::ParseLine { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_text("dim 2\nH 0 0\n"), Err(Error::ParseLine { line: 2, .. })));
        assert!(matches!(parse_text("field gf 4\n"), Err(Error::ParseLine { line: 1, .. })));
        assert!(parse_text("field Q\n").is_err());
    }
}
