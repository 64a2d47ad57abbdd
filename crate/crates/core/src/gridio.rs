//! Grid files: CSV with header `sign,n,re,im`, or JSON carrying the same
//! points plus `q`, `alpha`, `n_min`, `n_max`.
//!
//! Writers emit the canonical layout (the `+` branch by ascending `n`, then
//! the `-` branch, shortest round-trip floats), so reading and rewriting a
//! canonical file reproduces it byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::numeric::C64;
use crate::qcalculus::{GridFunction, GridWindow, Sign};
use crate::qcore::QParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Json,
}

impl GridFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> GridFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => GridFormat::Json,
            _ => GridFormat::Csv,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Point {
    sign: String,
    n: i32,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGrid {
    q: f64,
    alpha: f64,
    n_min: i32,
    n_max: i32,
    points: Vec<Point>,
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn parse_sign(s: &str) -> Result<Sign> {
    match s.trim() {
        "+" => Ok(Sign::Plus),
        "-" | "\u{2212}" => Ok(Sign::Minus),
        other => Err(QError::Parse(format!("sign must be + or -, got {other:?}"))),
    }
}

fn points(f: &GridFunction) -> Vec<Point> {
    f.samples()
        .map(|(s, n, z)| Point {
            sign: sign_str(s).to_string(),
            n,
            re: z.re,
            im: z.im,
        })
        .collect()
}

/// Assembles points into a grid function. With `window` given, every point
/// must fall inside it; otherwise the window is the exponent hull. Each
/// `(sign, n)` must appear exactly once.
fn assemble(params: QParams, window: Option<GridWindow>, pts: Vec<Point>) -> Result<GridFunction> {
    if pts.is_empty() {
        return Err(QError::Parse("grid file has no points".into()));
    }
    let window = match window {
        Some(w) => w,
        None => {
            let lo = pts.iter().map(|p| p.n).min().unwrap_or(0);
            let hi = pts.iter().map(|p| p.n).max().unwrap_or(0);
            GridWindow::new(lo, hi)?
        }
    };
    let mut pos = vec![None; window.len()];
    let mut neg = vec![None; window.len()];
    for p in pts {
        if !window.contains(p.n) {
            return Err(QError::GridMismatch(format!("point n = {} outside window {window}", p.n)));
        }
        let i = (p.n - window.n_min()) as usize;
        let slot = match parse_sign(&p.sign)? {
            Sign::Plus => &mut pos[i],
            Sign::Minus => &mut neg[i],
        };
        if slot.replace(C64::new(p.re, p.im)).is_some() {
            return Err(QError::Parse(format!("duplicate point ({}, {})", p.sign, p.n)));
        }
    }
    let fill = |v: Vec<Option<C64>>, s: Sign| -> Result<Vec<C64>> {
        v.into_iter()
            .zip(window.exponents())
            .map(|(z, n)| z.ok_or_else(|| QError::Parse(format!("missing point ({}, {n})", sign_str(s)))))
            .collect()
    };
    let pos = fill(pos, Sign::Plus)?;
    let neg = fill(neg, Sign::Minus)?;
    GridFunction::new(params, window, pos, neg)
}

pub fn to_csv(f: &GridFunction) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points(f) {
        w.serialize(p).map_err(|e| QError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| QError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| QError::Io(e.to_string()))
}

/// CSV files carry no parameters, so `params` must be supplied.
pub fn parse_csv(text: &str, params: QParams) -> Result<GridFunction> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| QError::Parse(e.to_string()))?;
    if headers != vec!["sign", "n", "re", "im"] {
        return Err(QError::Parse(format!("expected header sign,n,re,im, got {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let pts = r
        .deserialize()
        .collect::<std::result::Result<Vec<Point>, _>>()
        .map_err(|e| QError::Parse(e.to_string()))?;
    assemble(params, None, pts)
}

pub fn to_json(f: &GridFunction) -> Result<String> {
    let doc = JsonGrid {
        q: f.params().q(),
        alpha: f.params().alpha(),
        n_min: f.window().n_min(),
        n_max: f.window().n_max(),
        points: points(f),
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| QError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<GridFunction> {
    let doc: JsonGrid = serde_json::from_str(text).map_err(|e| QError::Parse(e.to_string()))?;
    let params = QParams::new(doc.q, doc.alpha)?;
    let window = GridWindow::new(doc.n_min, doc.n_max)?;
    assemble(params, Some(window), doc.points)
}

/// Reads a grid file. JSON files use their embedded parameters and reject a
/// conflicting `params`; CSV files require it.
pub fn read_grid(path: &Path, params: Option<QParams>) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| QError::Io(format!("{}: {e}", path.display())))?;
    match GridFormat::from_path(path) {
        GridFormat::Json => {
            let f = parse_json(&text)?;
            match params {
                Some(p) if p != *f.params() => Err(QError::GridMismatch(format!(
                    "{} has q = {}, alpha = {} but q = {}, alpha = {} was requested",
                    path.display(),
                    f.params().q(),
                    f.params().alpha(),
                    p.q(),
                    p.alpha()
                ))),
                _ => Ok(f),
            }
        }
        GridFormat::Csv => {
            let p = params.ok_or_else(|| QError::InvalidSpec("CSV grid input needs q and alpha".into()))?;
            parse_csv(&text, p)
        }
    }
}

pub fn format_grid(f: &GridFunction, format: GridFormat) -> Result<String> {
    match format {
        GridFormat::Csv => to_csv(f),
        GridFormat::Json => to_json(f),
    }
}

pub fn write_grid(path: &Path, f: &GridFunction) -> Result<()> {
    let text = format_grid(f, GridFormat::from_path(path))?;
    std::fs::write(path, text).map_err(|e| QError::Io(format!("{}: {e}", path.display())))
}
