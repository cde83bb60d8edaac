use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use multigraded::rational::{fmt_decimal, fmt_exact, fmt_point, Rational};

/// `p/q [decimal]`.
pub fn show(r: &Rational) -> String {
    format!("{} [{}]", fmt_exact(r), fmt_decimal(r))
}

pub fn show_point(p: &[Rational]) -> String {
    fmt_point(p)
}

pub fn show_index(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// CSV table; every rational column gets a `_decimal` companion via [`Table::rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Exact and decimal cells for a rational.
pub fn rational_cells(r: &Rational) -> [String; 2] {
    [fmt_exact(r), fmt_decimal(r)]
}

pub fn optional_cells(r: Option<&Rational>) -> [String; 2] {
    match r {
        Some(r) => rational_cells(r),
        None => [String::new(), String::new()],
    }
}

/// Text report plus CSV tables; `ok = false` means a verification failed.
#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    pub tables: Vec<Table>,
    pub ok: bool,
}

impl Report {
    pub fn new() -> Self {
        Report { text: String::new(), tables: Vec::new(), ok: true }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}: {value}");
    }

    /// Records a named check and folds it into `ok`.
    pub fn check(&mut self, name: &str, passed: bool) {
        self.ok &= passed;
        self.kv(&format!("check {name}"), if passed { "pass" } else { "FAIL" });
    }
}

fn table_path(out: &Path, index: usize, table: &Table) -> PathBuf {
    if index == 0 {
        return out.to_path_buf();
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{}.csv", table.name))
}

/// Writes every table to a temporary sibling and renames only once all writes succeed.
pub fn write_tables(out: &Path, tables: &[Table]) -> io::Result<Vec<PathBuf>> {
    let mut staged = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let target = table_path(out, i, t);
        let mut tmp = target.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        if let Err(e) = fs::write(&tmp, t.to_csv()) {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e);
        }
        staged.push((tmp, target));
    }
    let mut written = Vec::new();
    for (tmp, target) in staged {
        fs::rename(&tmp, &target)?;
        written.push(target);
    }
    Ok(written)
}
