//! Cones in index space: halfspace, ray and epigraph descriptions, exact ray hulls
//! in rank ≤ 3, lattice nef/effective estimation for graded systems, and comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded_system::SystemExpr;
use crate::linalg;
use crate::rational::{dot, int, primitive_direction, rat, Rational};

pub const MAX_HULL_RANK: usize = 3;

type IntVec = Vec<BigInt>;

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: &[Rational]) -> IntVec {
    primitive_direction(v).0
}

fn primitive_int(v: &[BigInt]) -> IntVec {
    primitive(&to_rational(v))
}

fn neg(v: &[BigInt]) -> IntVec {
    v.iter().map(|x| -x).collect()
}

fn int_rank(rows: &[IntVec]) -> usize {
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| to_rational(r)).collect();
    linalg::rank(&rows)
}

fn int_nullspace(rows: &[IntVec], cols: usize) -> Vec<IntVec> {
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| to_rational(r)).collect();
    linalg::nullspace(&rows, cols).iter().map(|v| primitive(v)).collect()
}

/// Closed convex cone spanned by finitely many integer vectors (rank ≤ 3), with
/// an irredundant description: `facets` are normals `a` with `⟨a, x⟩ ≥ 0`,
/// equations appear as opposite pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayHull {
    rank: usize,
    rays: Vec<IntVec>,
    facets: Vec<IntVec>,
    lineality: Vec<IntVec>,
    full_space: bool,
}

impl RayHull {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Minimal generators: extreme rays plus both signs of a lineality basis.
    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: v.len() });
        }
        Ok(self.facets.iter().all(|a| !dot(&to_rational(a), v).is_negative()))
    }
}

/// Exact hull of the cone spanned by `points` for rank ≤ 3.
pub fn ray_hull(points: &[Vec<Rational>], rank: usize) -> Result<RayHull> {
    if rank == 0 || rank > MAX_HULL_RANK {
        return Err(Error::UnsupportedDimension(rank));
    }
    if let Some(p) = points.iter().find(|p| p.len() != rank) {
        return Err(Error::RankMismatch { expected: rank, found: p.len() });
    }
    let gens: Vec<IntVec> = points
        .iter()
        .filter(|p| p.iter().any(|x| !x.is_zero()))
        .map(|p| primitive(p))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let complement = int_nullspace(&gens, rank);
    let span_dim = rank - complement.len();

    let mut pool: Vec<IntVec> = gens.clone();
    pool.extend(complement.iter().cloned());
    let mut candidates: BTreeSet<IntVec> = BTreeSet::new();
    let mut push = |a: IntVec| {
        if a.iter().any(|x| !x.is_zero()) {
            let a = primitive_int(&a);
            candidates.insert(neg(&a));
            candidates.insert(a);
        }
    };
    match rank {
        1 => push(vec![BigInt::from(1)]),
        2 => pool.iter().for_each(|u| push(vec![-u[1].clone(), u[0].clone()])),
        _ => {
            for (i, u) in pool.iter().enumerate() {
                for w in &pool[i + 1..] {
                    let c = linalg::cross(&to_rational(u), &to_rational(w));
                    push(primitive(&c));
                }
            }
        }
    }
    let valid: Vec<IntVec> = candidates
        .into_iter()
        .filter(|a| gens.iter().all(|p| !int_dot(a, p).is_negative()))
        .collect();

    if valid.is_empty() {
        let rays = (0..rank)
            .flat_map(|i| {
                let e: IntVec = (0..rank).map(|j| BigInt::from((i == j) as i64)).collect();
                [e.clone(), neg(&e)]
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let lineality = int_nullspace(&[], rank);
        return Ok(RayHull { rank, rays, facets: Vec::new(), lineality, full_space: true });
    }

    let tight = |a: &IntVec| -> Vec<usize> {
        (0..gens.len()).filter(|&i| int_dot(a, &gens[i]).is_zero()).collect()
    };
    let mut by_face: BTreeMap<Vec<usize>, IntVec> = BTreeMap::new();
    for a in &valid {
        let t = tight(a);
        if t.len() == gens.len() {
            continue; // equation, covered by the complement basis
        }
        let rows: Vec<IntVec> = t.iter().map(|&i| gens[i].clone()).collect();
        if int_rank(&rows) + 1 == span_dim {
            by_face.entry(t).or_insert_with(|| a.clone());
        }
    }
    let mut facets: BTreeSet<IntVec> = by_face.into_values().collect();
    for c in &complement {
        facets.insert(c.clone());
        facets.insert(neg(c));
    }
    let facets: Vec<IntVec> = facets.into_iter().collect();
    let lineality = int_nullspace(&facets, rank);

    let mut rays: BTreeSet<IntVec> = BTreeSet::new();
    for l in &lineality {
        rays.insert(l.clone());
        rays.insert(neg(l));
    }
    let target = rank - lineality.len() - 1;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for p in &gens {
        let t: Vec<usize> = (0..facets.len()).filter(|&j| int_dot(&facets[j], p).is_zero()).collect();
        let rows: Vec<IntVec> = t.iter().map(|&j| facets[j].clone()).collect();
        if lineality.len() < span_dim && int_rank(&rows) == target && seen.insert(t) {
            rays.insert(p.clone());
        }
    }
    Ok(RayHull { rank, rays: rays.into_iter().collect(), facets, lineality, full_space: false })
}

pub fn ray_hull_of_lattice_points(points: &[Vec<i64>], rank: usize) -> Result<RayHull> {
    let pts: Vec<Vec<Rational>> =
        points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
    ray_hull(&pts, rank)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeKind {
    /// `⟨a, x⟩ ≥ 0` for every listed `a`; the empty list is the whole space.
    Halfspaces(Vec<IntVec>),
    Rays(RayHull),
    /// `{(x, y) : y ≥ max(0, ℓ_1(x), …)}` for the listed linear forms `ℓ_i`.
    Epigraph(Vec<Vec<Rational>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRep {
    rank: usize,
    kind: ConeKind,
}

impl ConeRep {
    pub fn halfspaces(rank: usize, normals: &[Vec<Rational>]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("cone rank must be positive".into()));
        }
        let mut out = BTreeSet::new();
        for a in normals {
            if a.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: a.len() });
            }
            if a.iter().any(|x| !x.is_zero()) {
                out.insert(primitive(a));
            }
        }
        Ok(ConeRep { rank, kind: ConeKind::Halfspaces(out.into_iter().collect()) })
    }

    pub fn full(rank: usize) -> Result<Self> {
        Self::halfspaces(rank, &[])
    }

    pub fn rays(rank: usize, rays: &[Vec<Rational>]) -> Result<Self> {
        Ok(ConeRep { rank, kind: ConeKind::Rays(ray_hull(rays, rank)?) })
    }

    /// Epigraph of `max(0, forms…)` on ℝ^{rank−1}.
    pub fn epigraph(rank: usize, forms: &[Vec<Rational>]) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidParameter("epigraph cones need rank ≥ 2".into()));
        }
        if let Some(f) = forms.iter().find(|f| f.len() != rank - 1) {
            return Err(Error::RankMismatch { expected: rank - 1, found: f.len() });
        }
        let forms: BTreeSet<Vec<Rational>> = forms.iter().cloned().collect();
        Ok(ConeRep { rank, kind: ConeKind::Epigraph(forms.into_iter().collect()) })
    }

    /// `{y ≥ |x_1| + … + |x_n|}`.
    pub fn l1_epigraph(n: usize) -> Self {
        let forms: Vec<Vec<Rational>> = (0..1usize << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { int(-1) } else { int(1) }).collect())
            .collect();
        Self::epigraph(n + 1, &forms).expect("forms have the right length")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    fn check(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: v.len() });
        }
        Ok(())
    }

    /// `f(x) = max(0, ℓ_i(x))` for epigraph cones.
    pub fn epigraph_value(&self, x: &[Rational]) -> Result<Rational> {
        let ConeKind::Epigraph(forms) = &self.kind else {
            return Err(Error::InvalidParameter("cone is not given as an epigraph".into()));
        };
        if x.len() + 1 != self.rank {
            return Err(Error::RankMismatch { expected: self.rank - 1, found: x.len() });
        }
        Ok(forms
            .iter()
            .map(|f| dot(f, x))
            .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc }))
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        self.check(v)?;
        match &self.kind {
            ConeKind::Halfspaces(normals) => {
                Ok(normals.iter().all(|a| !dot(&to_rational(a), v).is_negative()))
            }
            ConeKind::Rays(hull) => hull.contains(v),
            ConeKind::Epigraph(_) => {
                let (x, y) = v.split_at(self.rank - 1);
                Ok(y[0] >= self.epigraph_value(x)?)
            }
        }
    }

    pub fn contains_lattice(&self, v: &[i64]) -> Result<bool> {
        let v: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        self.contains(&v)
    }

    /// Normals `a` with the cone equal to `{⟨a, x⟩ ≥ 0 for all a}`.
    pub fn halfspace_normals(&self) -> Vec<IntVec> {
        match &self.kind {
            ConeKind::Halfspaces(normals) => normals.clone(),
            ConeKind::Rays(hull) => hull.facets().to_vec(),
            ConeKind::Epigraph(forms) => {
                let mut out: BTreeSet<IntVec> = BTreeSet::new();
                let zero = vec![Rational::zero(); self.rank - 1];
                for f in forms.iter().chain(std::iter::once(&zero)) {
                    let mut a: Vec<Rational> = f.iter().map(|c| -c).collect();
                    a.push(int(1));
                    out.insert(primitive(&a));
                }
                out.into_iter().collect()
            }
        }
    }
}

impl fmt::Display for ConeRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "rank {}", self.rank)?;
        match &self.kind {
            ConeKind::Halfspaces(normals) => {
                for a in normals {
                    writeln!(f, "halfspace {}", join(a))?;
                }
            }
            ConeKind::Rays(hull) => {
                for r in hull.rays() {
                    writeln!(f, "ray {}", join(r))?;
                }
            }
            ConeKind::Epigraph(forms) => {
                for form in forms {
                    let s: Vec<String> = form.iter().map(crate::rational::fmt_exact).collect();
                    writeln!(f, "form {}", s.join(" "))?;
                }
            }
        }
        Ok(())
    }
}

/// Integer vectors of `[−R, R]^ρ` in lexicographic order.
pub fn lattice_box(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(rank)];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn scan(sys: &SystemExpr, radius: i64, keep: fn(&crate::MonomialIdeal) -> bool) -> Result<Vec<Vec<i64>>> {
    if radius < 1 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let points = lattice_box(sys.rank(), radius);
    let flags: Vec<bool> = points
        .par_iter()
        .map(|v| sys.eval(v).map(|ideal| keep(&ideal)))
        .collect::<Result<_>>()?;
    Ok(points.into_iter().zip(flags).filter(|(_, k)| *k).map(|(p, _)| p).collect())
}

/// Indices in the box where the system is the unit ideal.
pub fn nef_points(sys: &SystemExpr, radius: i64) -> Result<Vec<Vec<i64>>> {
    scan(sys, radius, |i| i.is_unit())
}

/// Indices in the box where the system is nonzero.
pub fn eff_points(sys: &SystemExpr, radius: i64) -> Result<Vec<Vec<i64>>> {
    scan(sys, radius, |i| !i.is_zero())
}

fn radical_inverse(mut i: u64, base: u64) -> Rational {
    let mut value = Rational::zero();
    let mut scale = rat(1, base as i64);
    while i > 0 {
        value += &scale * int((i % base) as i64);
        i /= base;
        scale /= int(base as i64);
    }
    value
}

const HALTON_BASES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// `count` deterministic rational directions in `[−1, 1]^ρ` (Halton sequence).
pub fn halton_directions(rank: usize, count: usize) -> Vec<Vec<Rational>> {
    assert!(rank <= HALTON_BASES.len(), "Halton bases available up to rank 8");
    (1..=count as u64)
        .map(|i| {
            HALTON_BASES[..rank]
                .iter()
                .map(|&b| int(2) * radical_inverse(i, b) - int(1))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeComparison {
    pub checked: usize,
    pub disagreements: Vec<Vec<Rational>>,
}

impl ConeComparison {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Membership agreement of two cones over `samples` Halton directions.
pub fn cone_compare(estimated: &ConeRep, expected: &ConeRep, samples: usize) -> Result<ConeComparison> {
    if estimated.rank() != expected.rank() {
        return Err(Error::RankMismatch { expected: expected.rank(), found: estimated.rank() });
    }
    let mut disagreements = Vec::new();
    let dirs = halton_directions(expected.rank(), samples);
    for d in &dirs {
        if estimated.contains(d)? != expected.contains(d)? {
            disagreements.push(d.clone());
        }
    }
    Ok(ConeComparison { checked: dirs.len(), disagreements })
}

/// Compares a set of lattice points against the lattice points of a cone in `[−R, R]^ρ`.
pub fn lattice_compare(points: &[Vec<i64>], cone: &ConeRep, radius: i64) -> Result<ConeComparison> {
    let set: BTreeSet<&Vec<i64>> = points.iter().collect();
    let mut disagreements = Vec::new();
    let all = lattice_box(cone.rank(), radius);
    for v in &all {
        if set.contains(v) != cone.contains_lattice(v)? {
            disagreements.push(v.iter().map(|&x| int(x)).collect());
        }
    }
    Ok(ConeComparison { checked: all.len(), disagreements })
}
