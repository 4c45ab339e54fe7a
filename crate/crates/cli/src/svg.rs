//! Deconing pictures: the hyperplanes of a rank-3 arrangement drawn as affine
//! lines in the chart where the pivot form equals 1.

use std::collections::BTreeMap;
use std::fmt::Write;

use freext_core::exactalg::Matrix;
use freext_core::{Error, Hyperplane, Multiarrangement, Result, Scalar};

const WIDTH: i64 = 600;
const PLACES: u32 = 3;

/// `[xmin, ymin, xmax, ymax]`.
pub type Viewport = [Scalar; 4];

pub fn parse_viewport(s: &str) -> Result<Viewport> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("viewport '{s}' needs four comma-separated numbers")));
    }
    let q = freext_core::Field::Rationals;
    let v: Vec<Scalar> = parts.iter().map(|p| q.parse(p)).collect::<Result<_>>()?;
    if v[0] >= v[2] || v[1] >= v[3] {
        return Err(Error::Parse(format!("viewport '{s}' is empty")));
    }
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

/// An affine line `a u + b v + c = 0`.
#[derive(Clone, Debug)]
struct Line {
    a: Scalar,
    b: Scalar,
    c: Scalar,
}

fn lines_in_chart(e: &Multiarrangement, pivot: &Hyperplane) -> Result<Vec<Line>> {
    let field = e.field();
    let form = pivot.coefficients();
    let p = form.iter().position(|c| !c.is_zero()).expect("nonzero form");
    // a point with pivot = 1 and a basis of the pivot's kernel
    let mut origin = vec![field.zero(); 3];
    origin[p] = form[p].inv().expect("nonzero pivot entry");
    let dirs = Matrix::from_rows(field, 3, vec![form.to_vec()])?.kernel_basis();
    let mut out = Vec::new();
    for h in e.hyperplanes().filter(|h| *h != pivot) {
        out.push(Line {
            a: h.eval(&dirs[0]),
            b: h.eval(&dirs[1]),
            c: h.eval(&origin),
        });
    }
    Ok(out)
}

fn meet(l: &Line, m: &Line) -> Option<(Scalar, Scalar)> {
    let det = &(&l.a * &m.b) - &(&m.a * &l.b);
    if det.is_zero() {
        return None;
    }
    let u = &(&(&l.b * &m.c) - &(&m.b * &l.c)) / &det;
    let v = &(&(&m.a * &l.c) - &(&l.a * &m.c)) / &det;
    Some((u, v))
}

/// Points where at least two lines meet, with the number of lines through each.
fn multiple_points(lines: &[Line]) -> BTreeMap<(Scalar, Scalar), usize> {
    let mut points: BTreeMap<(Scalar, Scalar), Vec<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(pt) = meet(&lines[i], &lines[j]) {
                let on = points.entry(pt).or_default();
                for k in [i, j] {
                    if !on.contains(&k) {
                        on.push(k);
                    }
                }
            }
        }
    }
    points.into_iter().map(|(k, v)| (k, v.len())).collect()
}

fn default_viewport(points: &[(Scalar, Scalar)]) -> Viewport {
    let q = freext_core::Field::Rationals;
    if points.is_empty() {
        return [q.from_i64(-1), q.from_i64(-1), q.from_i64(1), q.from_i64(1)];
    }
    let xs: Vec<&Scalar> = points.iter().map(|p| &p.0).collect();
    let ys: Vec<&Scalar> = points.iter().map(|p| &p.1).collect();
    let (mut x0, mut x1) = ((*xs.iter().min().unwrap()).clone(), (*xs.iter().max().unwrap()).clone());
    let (mut y0, mut y1) = ((*ys.iter().min().unwrap()).clone(), (*ys.iter().max().unwrap()).clone());
    let pad = |lo: &mut Scalar, hi: &mut Scalar| {
        let span = &*hi - &*lo;
        let d = if span.is_zero() { q.one() } else { &span * &Scalar::rational(1, 5) };
        *lo = &*lo - &d;
        *hi = &*hi + &d;
    };
    pad(&mut x0, &mut x1);
    pad(&mut y0, &mut y1);
    [x0, y0, x1, y1]
}

/// Endpoints of the part of a line inside the viewport.
fn clip(l: &Line, vp: &Viewport) -> Option<((Scalar, Scalar), (Scalar, Scalar))> {
    let [x0, y0, x1, y1] = vp;
    let mut hits: Vec<(Scalar, Scalar)> = Vec::new();
    let inside = |v: &Scalar, lo: &Scalar, hi: &Scalar| lo <= v && v <= hi;
    if !l.b.is_zero() {
        for x in [x0, x1] {
            let y = -(&(&(&l.a * x) + &l.c) / &l.b);
            if inside(&y, y0, y1) {
                hits.push((x.clone(), y));
            }
        }
    }
    if !l.a.is_zero() {
        for y in [y0, y1] {
            let x = -(&(&(&l.b * y) + &l.c) / &l.a);
            if inside(&x, x0, x1) {
                hits.push((x, y.clone()));
            }
        }
    }
    hits.sort();
    hits.dedup();
    match hits.len() {
        0 => None,
        1 => Some((hits[0].clone(), hits[0].clone())),
        _ => Some((hits[0].clone(), hits[hits.len() - 1].clone())),
    }
}

struct Canvas {
    vp: Viewport,
    scale: Scalar,
    height: Scalar,
}

impl Canvas {
    fn new(vp: Viewport) -> Canvas {
        let w = &vp[2] - &vp[0];
        let h = &vp[3] - &vp[1];
        let scale = &Scalar::rational(WIDTH, 1) / &w;
        let height = &h * &scale;
        Canvas { vp, scale, height }
    }

    fn x(&self, u: &Scalar) -> String {
        (&(u - &self.vp[0]) * &self.scale).to_decimal(PLACES).expect("rational")
    }

    fn y(&self, v: &Scalar) -> String {
        (&(&self.vp[3] - v) * &self.scale).to_decimal(PLACES).expect("rational")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG picture of `e` in the chart `pivot = 1`. Lines carry their
/// hyperplane as a `data-hyperplane` attribute; points on three or more
/// lines are marked with circles.
pub fn decone_svg(e: &Multiarrangement, pivot: &Hyperplane, viewport: Option<Viewport>) -> Result<String> {
    if !e.field().is_rationals() {
        return Err(Error::Unsupported("pictures need rational coefficients".into()));
    }
    if e.dim() != 3 {
        return Err(Error::Hypothesis(format!("deconing needs 3 variables, got {}", e.dim())));
    }
    if !e.contains(pivot) {
        return Err(Error::Arrangement(format!("{pivot} is not in the arrangement")));
    }
    let lines = lines_in_chart(e, pivot)?;
    let points = multiple_points(&lines);
    let coords: Vec<(Scalar, Scalar)> = points.keys().cloned().collect();
    let vp = viewport.unwrap_or_else(|| default_viewport(&coords));
    let canvas = Canvas::new(vp.clone());
    let height = canvas.height.to_decimal(PLACES).expect("rational");

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <desc>{} is the line at infinity; {} affine lines</desc>"#,
        escape(&pivot.to_string()),
        lines.len()
    )
    .unwrap();
    writeln!(out, r#"  <rect width="{WIDTH}" height="{height}" fill="white"/>"#).unwrap();
    for (l, h) in lines.iter().zip(e.hyperplanes().filter(|h| *h != pivot)) {
        let name = escape(&h.to_string());
        match clip(l, &vp) {
            Some((p, q)) => writeln!(
                out,
                r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5" data-hyperplane="{name}"/>"#,
                canvas.x(&p.0),
                canvas.y(&p.1),
                canvas.x(&q.0),
                canvas.y(&q.1)
            )
            .unwrap(),
            None => writeln!(out, r#"  <!-- {name} misses the viewport -->"#).unwrap(),
        }
    }
    for ((u, v), n) in &points {
        let inside = &vp[0] <= u && u <= &vp[2] && &vp[1] <= v && v <= &vp[3];
        if *n >= 3 && inside {
            writeln!(
                out,
                r#"  <circle cx="{}" cy="{}" r="4" fill="black" data-lines="{n}"/>"#,
                canvas.x(u),
                canvas.y(v)
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Number of points on three or more lines in the chart `pivot = 1`.
pub fn triple_points(e: &Multiarrangement, pivot: &Hyperplane) -> Result<usize> {
    Ok(multiple_points(&lines_in_chart(e, pivot)?).values().filter(|&&n| n >= 3).count())
}
