//! ℤ^ρ-graded systems of monomial ideals as expression trees: evaluation at any
//! index, restriction to a direction, limit bodies and gradedness checks.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::cones::{ConeKind, ConeRep};
use crate::error::{Error, Result};
use crate::monomial_ideal::MonomialIdeal;
use crate::newton_geometry::NewtonPolyhedron;
use crate::rational::{ceil_int, dot, int, Rational};
use crate::regions::{build_g, build_kinked_f, epigraph_region, Region};

/// Entries kept per node before the memo is flushed.
pub const MEMO_CAPACITY: usize = 4096;

#[derive(Debug)]
pub enum Node {
    /// `v ↦ Π I_i^{v_i}` with nonpositive exponents giving the unit ideal.
    IdealPowers(Vec<MonomialIdeal>),
    /// `n ↦` ideal of lattice points of `n·P`; unit for `n ≤ 0`.
    Region(Region),
    /// `(x, y) ↦ base^{⌈f(x) − y⌉}` for an epigraph cone `{y ≥ f(x)}`.
    Ceiling { cone: ConeRep, base: MonomialIdeal },
    /// `w ↦ inner(φ w)` for an integer matrix `φ` with `σ` rows and `ρ` columns.
    Pullback { matrix: Vec<Vec<i64>>, inner: SystemExpr },
    Product(SystemExpr, SystemExpr),
    Intersect(SystemExpr, SystemExpr),
    /// Zero outside the semigroup cone `S`.
    Truncate { inner: SystemExpr, cone: ConeRep },
    /// `(m, n) ↦ (inner(m) : I^n)`.
    Colon { inner: SystemExpr, ideal: MonomialIdeal },
}

#[derive(Debug)]
struct Inner {
    rank: usize,
    dim: usize,
    node: Node,
    memo: Mutex<HashMap<Vec<i64>, MonomialIdeal>>,
}

/// Shared handle to a graded system; cloning is cheap.
#[derive(Clone, Debug)]
pub struct SystemExpr(Arc<Inner>);

fn rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

impl SystemExpr {
    fn build(rank: usize, dim: usize, node: Node) -> Self {
        SystemExpr(Arc::new(Inner { rank, dim, node, memo: Mutex::new(HashMap::new()) }))
    }

    pub fn ideal_powers(ideals: Vec<MonomialIdeal>) -> Result<Self> {
        let Some(first) = ideals.first() else {
            return Err(Error::InvalidParameter("ideal powers need at least one ideal".into()));
        };
        let dim = first.dim();
        if let Some(i) = ideals.iter().find(|i| i.dim() != dim) {
            return Err(Error::dims(dim, i.dim()));
        }
        Ok(Self::build(ideals.len(), dim, Node::IdealPowers(ideals)))
    }

    pub fn region(region: Region) -> Self {
        let dim = region.dim();
        Self::build(1, dim, Node::Region(region))
    }

    /// Ceiling system of an epigraph cone with `base` defaulting to the maximal
    /// ideal in two variables.
    pub fn ceiling(cone: ConeRep, base: Option<MonomialIdeal>) -> Result<Self> {
        if !matches!(cone.kind(), ConeKind::Epigraph(_)) {
            return Err(Error::InvalidParameter(
                "ceiling systems need a cone given as an epigraph of linear forms".into(),
            ));
        }
        let base = base.unwrap_or_else(|| MonomialIdeal::maximal(2));
        if base.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::build(cone.rank(), base.dim(), Node::Ceiling { cone, base }))
    }

    pub fn pullback(matrix: Vec<Vec<i64>>, inner: SystemExpr) -> Result<Self> {
        if matrix.len() != inner.rank() {
            return Err(Error::RankMismatch { expected: inner.rank(), found: matrix.len() });
        }
        let cols = matrix[0].len();
        if cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("pullback matrix rows must share a positive length".into()));
        }
        let dim = inner.dim();
        Ok(Self::build(cols, dim, Node::Pullback { matrix, inner }))
    }

    fn check_pair(a: &SystemExpr, b: &SystemExpr) -> Result<()> {
        if a.rank() != b.rank() {
            return Err(Error::RankMismatch { expected: a.rank(), found: b.rank() });
        }
        if a.dim() != b.dim() {
            return Err(Error::dims(a.dim(), b.dim()));
        }
        Ok(())
    }

    pub fn product(a: SystemExpr, b: SystemExpr) -> Result<Self> {
        Self::check_pair(&a, &b)?;
        Ok(Self::build(a.rank(), a.dim(), Node::Product(a, b)))
    }

    pub fn intersect(a: SystemExpr, b: SystemExpr) -> Result<Self> {
        Self::check_pair(&a, &b)?;
        Ok(Self::build(a.rank(), a.dim(), Node::Intersect(a, b)))
    }

    pub fn truncate(inner: SystemExpr, cone: ConeRep) -> Result<Self> {
        if cone.rank() != inner.rank() {
            return Err(Error::RankMismatch { expected: inner.rank(), found: cone.rank() });
        }
        Ok(Self::build(inner.rank(), inner.dim(), Node::Truncate { inner, cone }))
    }

    pub fn colon(inner: SystemExpr, ideal: MonomialIdeal) -> Result<Self> {
        if ideal.dim() != inner.dim() {
            return Err(Error::dims(inner.dim(), ideal.dim()));
        }
        if ideal.is_zero() {
            return Err(Error::ZeroDivisorIdeal);
        }
        Ok(Self::build(inner.rank() + 1, inner.dim(), Node::Colon { inner, ideal }))
    }

    /// `(m, n) ↦ 𝐚_m ∩ 𝐛_n` where `𝐚` comes from the epigraph of the kinked
    /// function with `terms` kinks and `𝐛` from the epigraph of `1 − x/2`.
    pub fn kinked_intersection(terms: usize) -> Result<Self> {
        let p = Self::region(epigraph_region(&build_kinked_f(terms))?);
        let q = Self::region(epigraph_region(&build_g())?);
        Self::intersect(
            Self::pullback(vec![vec![1, 0]], p)?,
            Self::pullback(vec![vec![0, 1]], q)?,
        )
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Number of variables of the ideals.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn eval(&self, v: &[i64]) -> Result<MonomialIdeal> {
        if v.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: v.len() });
        }
        if let Some(hit) = self.0.memo.lock().get(v) {
            return Ok(hit.clone());
        }
        let value = self.compute(v)?;
        let mut memo = self.0.memo.lock();
        if memo.len() >= MEMO_CAPACITY {
            memo.clear();
        }
        memo.insert(v.to_vec(), value.clone());
        Ok(value)
    }

    fn compute(&self, v: &[i64]) -> Result<MonomialIdeal> {
        let k = self.dim();
        match self.node() {
            Node::IdealPowers(ideals) => {
                let mut acc = MonomialIdeal::unit(k);
                for (ideal, &e) in ideals.iter().zip(v) {
                    acc = acc.product(&ideal.power(e))?;
                }
                Ok(acc)
            }
            Node::Region(region) => {
                if v[0] <= 0 {
                    Ok(MonomialIdeal::unit(k))
                } else {
                    region.lattice_generators(v[0] as u64)
                }
            }
            Node::Ceiling { cone, base } => {
                let (x, y) = v.split_at(v.len() - 1);
                let t = cone.epigraph_value(&rational_vec(x))? - int(y[0]);
                let e = ceil_int(&t)
                    .to_i64()
                    .ok_or_else(|| Error::InvalidParameter("ceiling exponent out of range".into()))?;
                Ok(base.power(e))
            }
            Node::Pullback { matrix, inner } => inner.eval(&apply(matrix, v)),
            Node::Product(a, b) => a.eval(v)?.product(&b.eval(v)?),
            Node::Intersect(a, b) => a.eval(v)?.intersect(&b.eval(v)?),
            Node::Truncate { inner, cone } => {
                if cone.contains_lattice(v)? {
                    inner.eval(v)
                } else {
                    Ok(MonomialIdeal::zero(k))
                }
            }
            Node::Colon { inner, ideal } => {
                let (m, n) = v.split_at(v.len() - 1);
                inner.eval(m)?.colon(&ideal.power(n[0]))
            }
        }
    }

    /// Rank-1 system `n ↦ eval(n·v)`.
    pub fn restrict_direction(&self, v: &[i64]) -> Result<SystemExpr> {
        if v.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: v.len() });
        }
        if v.iter().all(|&x| x == 0) {
            return Err(Error::ZeroDirection);
        }
        Self::pullback(v.iter().map(|&x| vec![x]).collect(), self.clone())
    }

    /// Closure of the limit body `∪_n (1/n)·P(eval(n·v))` for a rational direction.
    pub fn limit_body(&self, v: &[Rational]) -> Result<Region> {
        if v.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: v.len() });
        }
        let k = self.dim();
        match self.node() {
            Node::IdealPowers(ideals) => {
                let mut acc = NewtonPolyhedron::orthant(k)?;
                for (ideal, e) in ideals.iter().zip(v) {
                    if !e.is_positive() {
                        continue;
                    }
                    if ideal.is_zero() {
                        return Err(Error::EmptyRegion);
                    }
                    acc = acc.minkowski_sum(&ideal.newton_polyhedron()?.scale(e)?)?;
                }
                Ok(Region::from_polyhedron(acc))
            }
            Node::Region(region) => {
                if v[0].is_positive() {
                    region.scale(&v[0])
                } else {
                    Region::orthant(k)
                }
            }
            Node::Ceiling { cone, base } => {
                let (x, y) = v.split_at(v.len() - 1);
                let t = cone.epigraph_value(x)? - &y[0];
                if t.is_positive() {
                    Ok(Region::from_polyhedron(base.newton_polyhedron()?.scale(&t)?))
                } else {
                    Region::orthant(k)
                }
            }
            Node::Pullback { matrix, inner } => {
                let w: Vec<Rational> = matrix
                    .iter()
                    .map(|row| dot(&rational_vec(row), v))
                    .collect();
                inner.limit_body(&w)
            }
            Node::Product(a, b) => a.limit_body(v)?.minkowski(&b.limit_body(v)?),
            Node::Intersect(a, b) => a.limit_body(v)?.intersect(&b.limit_body(v)?),
            Node::Truncate { inner, cone } => {
                if cone.contains(v)? {
                    inner.limit_body(v)
                } else {
                    Err(Error::EmptyRegion)
                }
            }
            Node::Colon { .. } => Err(Error::NotRegionExpressible("colon node".into())),
        }
    }

    /// Checks `eval(v)·eval(w) ⊆ eval(v + w)` for all `v, w, v + w` in the box.
    pub fn verify_gradedness(&self, window: &[(i64, i64)]) -> Result<GradednessReport> {
        if window.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: window.len() });
        }
        let points = box_points(window);
        let inside = |p: &[i64]| p.iter().zip(window).all(|(x, (lo, hi))| lo <= x && x <= hi);
        let per_point: Vec<(usize, Vec<(Vec<i64>, Vec<i64>)>)> = points
            .par_iter()
            .enumerate()
            .map(|(i, v)| -> Result<_> {
                let mut checked = 0;
                let mut bad = Vec::new();
                let a = self.eval(v)?;
                for w in &points[i..] {
                    let sum: Vec<i64> = v.iter().zip(w).map(|(x, y)| x + y).collect();
                    if !inside(&sum) {
                        continue;
                    }
                    checked += 1;
                    let prod = a.product(&self.eval(w)?)?;
                    if !prod.is_subset_of(&self.eval(&sum)?)? {
                        bad.push((v.clone(), w.clone()));
                    }
                }
                Ok((checked, bad))
            })
            .collect::<Result<_>>()?;
        let mut report = GradednessReport { checked: 0, violations: Vec::new() };
        for (c, bad) in per_point {
            report.checked += c;
            report.violations.extend(bad);
        }
        Ok(report)
    }
}

fn apply(matrix: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn box_points(window: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in window {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Symmetric box `[−R, R]^ρ` as a window.
pub fn symmetric_window(rank: usize, radius: i64) -> Vec<(i64, i64)> {
    vec![(-radius, radius); rank]
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradednessReport {
    /// Number of unordered pairs tested.
    pub checked: usize,
    pub violations: Vec<(Vec<i64>, Vec<i64>)>,
}

impl GradednessReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SystemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(s: &SystemExpr, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let pad = "  ".repeat(depth);
            match s.node() {
                Node::IdealPowers(ideals) => {
                    let list: Vec<String> = ideals.iter().map(|i| i.to_string()).collect();
                    writeln!(f, "{pad}powers {}", list.join(" "))
                }
                Node::Region(_) => writeln!(f, "{pad}region"),
                Node::Ceiling { base, .. } => writeln!(f, "{pad}ceiling base {base}"),
                Node::Pullback { matrix, inner } => {
                    let rows: Vec<String> = matrix
                        .iter()
                        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                        .collect();
                    writeln!(f, "{pad}pullback {}", rows.join("; "))?;
                    go(inner, depth + 1, f)
                }
                Node::Product(a, b) | Node::Intersect(a, b) => {
                    let name = if matches!(s.node(), Node::Product(..)) { "product" } else { "intersect" };
                    writeln!(f, "{pad}{name}")?;
                    go(a, depth + 1, f)?;
                    go(b, depth + 1, f)
                }
                Node::Truncate { inner, .. } => {
                    writeln!(f, "{pad}truncate")?;
                    go(inner, depth + 1, f)
                }
                Node::Colon { inner, ideal } => {
                    writeln!(f, "{pad}colon {ideal}")?;
                    go(inner, depth + 1, f)
                }
            }
        }
        go(self, 0, f)
    }
}
