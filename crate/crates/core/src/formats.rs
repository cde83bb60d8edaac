//! Line-oriented text formats. `#` starts a comment anywhere on a line; blank lines
//! are ignored.
//!
//! * ideal: `k=<int>`, then `zero` or one generator per line (`k` integers).
//! * region: `k=<int>`, then `halfspace a1 … ak >= c` lines, or `epigraph` followed
//!   by `breakpoint x y slope_right` lines, or one of `kinked N` / `appendix N`.
//! * cone: `rank ρ`, then `halfspace a1 … aρ` (meaning `⟨a, x⟩ ≥ 0`), `ray v1 … vρ`
//!   or `form a1 … a(ρ−1)` lines (epigraph of the max of the forms and 0).
//! * system: an indented tree of node headers: `powers <ideal files>`,
//!   `region <file>`, `ceiling <cone file> [base <ideal file>]`,
//!   `pullback <row>; <row>; …`, `product`, `intersect`, `truncate <cone file>` or
//!   `truncate halfspace a…; halfspace b…`, `colon <ideal file>`. Children sit on the
//!   following lines with deeper indentation. Paths are relative to the system file.

use std::fs;
use std::path::{Path, PathBuf};

use crate::cones::ConeRep;
use crate::error::{Error, Result};
use crate::graded_system::SystemExpr;
use crate::monomial_ideal::{ExponentVector, MonomialIdeal};
use crate::newton_geometry::Halfspace;
use crate::rational::{fmt_exact, parse_rational, Rational};
use crate::regions::{build_kinked_f, epigraph_region, PiecewiseLinearFn, Region, SymmetricBody};

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                return None;
            }
            let indent = body.len() - body.trim_start().len();
            Some(Line { number: i + 1, indent, text: trimmed })
        })
        .collect()
}

fn rationals(line: usize, tokens: &[&str]) -> Result<Vec<Rational>> {
    tokens
        .iter()
        .map(|t| parse_rational(t).ok_or_else(|| Error::parse(line, format!("not a rational: `{t}`"))))
        .collect()
}

fn integer<T: std::str::FromStr>(line: usize, token: &str) -> Result<T> {
    token.parse().map_err(|_| Error::parse(line, format!("not an integer: `{token}`")))
}

fn header_value(lines: &[Line<'_>], key: &str) -> Result<usize> {
    let Some(first) = lines.first() else {
        return Err(Error::parse(1, format!("missing `{key}` header")));
    };
    let rest = first
        .text
        .strip_prefix(key)
        .ok_or_else(|| Error::parse(first.number, format!("expected `{key}` header")))?;
    let value: usize = integer(first.number, rest.trim())?;
    if value == 0 {
        return Err(Error::parse(first.number, format!("`{key}` must be positive")));
    }
    Ok(value)
}

pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let lines = content_lines(text);
    let k = header_value(&lines, "k=")?;
    let body = &lines[1..];
    if body.len() == 1 && body[0].text == "zero" {
        return Ok(MonomialIdeal::zero(k));
    }
    if body.is_empty() {
        return Err(Error::parse(lines[0].number, "no generators (write `zero` for the zero ideal)"));
    }
    let mut gens = Vec::with_capacity(body.len());
    for l in body {
        let entries: Vec<u64> = l
            .text
            .split_whitespace()
            .map(|t| integer(l.number, t))
            .collect::<Result<_>>()?;
        if entries.len() != k {
            return Err(Error::parse(l.number, format!("expected {k} exponents, found {}", entries.len())));
        }
        gens.push(ExponentVector::new(entries)?);
    }
    MonomialIdeal::new(gens, k)
}

pub fn write_ideal(ideal: &MonomialIdeal) -> String {
    let mut out = format!("k={}\n", ideal.dim());
    if ideal.is_zero() {
        out.push_str("zero\n");
    }
    for g in ideal.generators() {
        let row: Vec<String> = g.entries().iter().map(|e| e.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parsed region file.
#[derive(Clone, Debug)]
pub enum RegionSpec {
    Absorbing(Region),
    Symmetric(SymmetricBody),
}

impl RegionSpec {
    pub fn into_region(self) -> Result<Region> {
        match self {
            RegionSpec::Absorbing(r) => Ok(r),
            RegionSpec::Symmetric(_) => Err(Error::InvalidParameter(
                "symmetric body is not an orthant-absorbing region".into(),
            )),
        }
    }
}

pub fn parse_region(text: &str) -> Result<RegionSpec> {
    let lines = content_lines(text);
    let k = header_value(&lines, "k=")?;
    let body = &lines[1..];
    let Some(first) = body.first() else {
        return Err(Error::parse(lines[0].number, "region has no description"));
    };
    let words: Vec<&str> = first.text.split_whitespace().collect();
    let need_k2 = |what: &str| -> Result<()> {
        if k != 2 {
            return Err(Error::parse(first.number, format!("`{what}` regions live in k=2")));
        }
        Ok(())
    };
    let only_line = |what: &str| -> Result<()> {
        match body.get(1) {
            Some(extra) => Err(Error::parse(extra.number, format!("unexpected line after `{what}`"))),
            None => Ok(()),
        }
    };
    match words[0] {
        "kinked" | "appendix" if words.len() == 2 => {
            need_k2(words[0])?;
            only_line(words[0])?;
            let n: usize = integer(first.number, words[1])?;
            if words[0] == "kinked" {
                Ok(RegionSpec::Absorbing(epigraph_region(&build_kinked_f(n))?))
            } else {
                Ok(RegionSpec::Symmetric(SymmetricBody::dense_kinks(n)?))
            }
        }
        "epigraph" if words.len() == 1 => {
            need_k2("epigraph")?;
            let mut rows = Vec::new();
            for l in &body[1..] {
                let w: Vec<&str> = l.text.split_whitespace().collect();
                if w.len() != 4 || w[0] != "breakpoint" {
                    return Err(Error::parse(l.number, "expected `breakpoint x y slope_right`"));
                }
                let v = rationals(l.number, &w[1..])?;
                rows.push((v[0].clone(), v[1].clone(), v[2].clone()));
            }
            let f = PiecewiseLinearFn::from_breakpoints(&rows)
                .map_err(|e| Error::parse(first.number, e.to_string()))?;
            Ok(RegionSpec::Absorbing(epigraph_region(&f)?))
        }
        "halfspace" => {
            let mut hs = Vec::new();
            for l in body {
                let w: Vec<&str> = l.text.split_whitespace().collect();
                if w.len() != k + 3 || w[0] != "halfspace" || w[k + 1] != ">=" {
                    return Err(Error::parse(l.number, format!("expected `halfspace a1 … a{k} >= c`")));
                }
                let normal = rationals(l.number, &w[1..=k])?;
                let c = rationals(l.number, &w[k + 2..])?.remove(0);
                hs.push(Halfspace::new(normal, c));
            }
            Ok(RegionSpec::Absorbing(Region::from_halfspaces(k, &hs)?))
        }
        _ => Err(Error::parse(first.number, format!("unknown region description `{}`", first.text))),
    }
}

pub fn parse_cone(text: &str) -> Result<ConeRep> {
    let lines = content_lines(text);
    let Some(first) = lines.first() else {
        return Err(Error::parse(1, "missing `rank` header"));
    };
    let rank = match first.text.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["rank", r] => integer::<usize>(first.number, r)?,
        _ => return Err(Error::parse(first.number, "expected `rank ρ`")),
    };
    if rank == 0 {
        return Err(Error::parse(first.number, "rank must be positive"));
    }
    let mut kind: Option<&str> = None;
    let mut rows = Vec::new();
    for l in &lines[1..] {
        let w: Vec<&str> = l.text.split_whitespace().collect();
        let want = match w[0] {
            "halfspace" | "ray" => rank,
            "form" => rank.saturating_sub(1),
            other => return Err(Error::parse(l.number, format!("unknown cone line `{other}`"))),
        };
        if kind.is_some_and(|k| k != w[0]) {
            return Err(Error::parse(l.number, "cone lines must all be of one kind"));
        }
        kind = Some(w[0]);
        if w.len() - 1 != want {
            return Err(Error::parse(l.number, format!("expected {want} entries, found {}", w.len() - 1)));
        }
        rows.push(rationals(l.number, &w[1..])?);
    }
    match kind {
        None | Some("halfspace") => ConeRep::halfspaces(rank, &rows),
        Some("ray") => ConeRep::rays(rank, &rows),
        _ => ConeRep::epigraph(rank, &rows),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn with_file<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| e.in_file(&path.display().to_string()))
}

pub fn load_ideal(path: &Path) -> Result<MonomialIdeal> {
    with_file(path, parse_ideal)
}

pub fn load_region(path: &Path) -> Result<RegionSpec> {
    with_file(path, parse_region)
}

pub fn load_cone(path: &Path) -> Result<ConeRep> {
    with_file(path, parse_cone)
}

pub fn load_system(path: &Path) -> Result<SystemExpr> {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    with_file(path, |text| parse_system(text, &base))
}

struct TreeParser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    base: PathBuf,
}

impl TreeParser<'_> {
    fn resolve(&self, name: &str) -> PathBuf {
        self.base.join(name)
    }

    fn children(&mut self, parent: &Line<'_>, count: usize) -> Result<Vec<SystemExpr>> {
        let mut out = Vec::new();
        let mut child_indent = None;
        while self.pos < self.lines.len() && self.lines[self.pos].indent > parent.indent {
            let indent = self.lines[self.pos].indent;
            if child_indent.is_some_and(|c| c != indent) {
                return Err(Error::parse(self.lines[self.pos].number, "inconsistent indentation"));
            }
            child_indent = Some(indent);
            out.push(self.node()?);
        }
        if out.len() != count {
            let head = parent.text.split_whitespace().next().unwrap_or("");
            return Err(Error::parse(
                parent.number,
                format!("`{head}` takes {count} child node(s), found {}", out.len()),
            ));
        }
        Ok(out)
    }

    fn node(&mut self) -> Result<SystemExpr> {
        let line = &self.lines[self.pos];
        let (number, indent, text) = (line.number, line.indent, line.text);
        let here = Line { number, indent, text };
        self.pos += 1;
        let words: Vec<&str> = text.split_whitespace().collect();
        let at = |e: Error| match e {
            Error::Parse { .. } | Error::Io { .. } => e,
            other => Error::parse(number, other.to_string()),
        };
        let args = &words[1..];
        match words[0] {
            "powers" => {
                self.children(&here, 0)?;
                if args.is_empty() {
                    return Err(Error::parse(number, "`powers` needs at least one ideal file"));
                }
                let ideals = args
                    .iter()
                    .map(|f| load_ideal(&self.resolve(f)))
                    .collect::<Result<Vec<_>>>()?;
                SystemExpr::ideal_powers(ideals).map_err(at)
            }
            "region" => {
                self.children(&here, 0)?;
                let [file] = args else {
                    return Err(Error::parse(number, "usage: `region <file>`"));
                };
                let region = load_region(&self.resolve(file))?.into_region().map_err(at)?;
                Ok(SystemExpr::region(region))
            }
            "ceiling" => {
                self.children(&here, 0)?;
                let (cone_file, base_file) = match args {
                    [c] => (c, None),
                    [c, "base", b] => (c, Some(b)),
                    _ => return Err(Error::parse(number, "usage: `ceiling <cone file> [base <ideal file>]`")),
                };
                let cone = load_cone(&self.resolve(cone_file))?;
                let base = base_file.map(|b| load_ideal(&self.resolve(b))).transpose()?;
                SystemExpr::ceiling(cone, base).map_err(at)
            }
            "pullback" => {
                let rest = text["pullback".len()..].trim();
                let matrix: Vec<Vec<i64>> = rest
                    .split(';')
                    .map(|row| row.split_whitespace().map(|t| integer(number, t)).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                if matrix.iter().any(|r| r.is_empty()) {
                    return Err(Error::parse(number, "pullback rows must be nonempty"));
                }
                let inner = self.children(&here, 1)?.remove(0);
                SystemExpr::pullback(matrix, inner).map_err(at)
            }
            "product" | "intersect" => {
                if !args.is_empty() {
                    return Err(Error::parse(number, format!("`{}` takes no arguments", words[0])));
                }
                let mut kids = self.children(&here, 2)?;
                let (b, a) = (kids.pop().unwrap(), kids.pop().unwrap());
                if words[0] == "product" {
                    SystemExpr::product(a, b).map_err(at)
                } else {
                    SystemExpr::intersect(a, b).map_err(at)
                }
            }
            "truncate" => {
                let rest = text["truncate".len()..].trim();
                let cone = if rest.starts_with("halfspace") {
                    let rows: Vec<Vec<Rational>> = rest
                        .split(';')
                        .map(|part| {
                            let w: Vec<&str> = part.split_whitespace().collect();
                            if w.first() != Some(&"halfspace") || w.len() < 2 {
                                return Err(Error::parse(number, "expected `halfspace a1 … aρ`"));
                            }
                            rationals(number, &w[1..])
                        })
                        .collect::<Result<_>>()?;
                    ConeRep::halfspaces(rows[0].len(), &rows).map_err(at)?
                } else {
                    let [file] = args else {
                        return Err(Error::parse(number, "usage: `truncate <cone file>`"));
                    };
                    load_cone(&self.resolve(file))?
                };
                let inner = self.children(&here, 1)?.remove(0);
                SystemExpr::truncate(inner, cone).map_err(at)
            }
            "colon" => {
                let [file] = args else {
                    return Err(Error::parse(number, "usage: `colon <ideal file>`"));
                };
                let ideal = load_ideal(&self.resolve(file))?;
                let inner = self.children(&here, 1)?.remove(0);
                SystemExpr::colon(inner, ideal).map_err(at)
            }
            other => Err(Error::parse(number, format!("unknown node `{other}`"))),
        }
    }
}

/// Parses a system tree; file arguments are resolved against `base`.
pub fn parse_system(text: &str, base: &Path) -> Result<SystemExpr> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return Err(Error::parse(1, "empty system file"));
    }
    let mut p = TreeParser { lines, pos: 0, base: base.to_path_buf() };
    let root = p.node()?;
    if p.pos < p.lines.len() {
        return Err(Error::parse(p.lines[p.pos].number, "more than one root node"));
    }
    Ok(root)
}

/// Cone in the text format (halfspace, ray or form lines as stored).
pub fn write_cone(cone: &ConeRep) -> String {
    cone.to_string()
}

pub fn write_rationals(values: &[Rational]) -> String {
    values.iter().map(fmt_exact).collect::<Vec<_>>().join(" ")
}
