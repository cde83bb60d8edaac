//! Exact polyhedral geometry in the nonnegative orthant.
//!
//! A [`NewtonPolyhedron`] is `conv(vertices) + ℝ^k_{≥0}` stored with both its
//! vertex list and its facet inequalities `⟨a, x⟩ ≥ c` (`a ≥ 0`). The same type
//! backs Newton polyhedra of monomial ideals and the more general absorbing
//! regions of [`crate::regions`]. Everything is exact; dimensions `k ≤ 3`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, cross, det2, det3, rank, solve, sub};
use crate::monomial_ideal::MonomialIdeal;
use crate::rational::{dot, fmt_exact, fmt_point, int, primitive_direction, Rational};

pub type Point = Vec<Rational>;

pub const MAX_EXACT_DIM: usize = 3;

/// The closed halfspace `⟨normal, x⟩ ≥ constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub constant: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, constant: Rational) -> Self {
        Halfspace { normal, constant }
    }

    pub fn value(&self, p: &[Rational]) -> Rational {
        dot(&self.normal, p)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.value(p) >= self.constant
    }

    pub fn is_tight(&self, p: &[Rational]) -> bool {
        self.value(p) == self.constant
    }

    /// Same halfspace with the normal scaled to a primitive integer vector.
    pub fn normalized(&self) -> Halfspace {
        let (prim, scale) = primitive_direction(&self.normal);
        if prim.iter().all(|v| v.is_zero()) {
            return self.clone();
        }
        Halfspace {
            normal: prim.into_iter().map(Rational::from_integer).collect(),
            constant: &self.constant * scale,
        }
    }

    pub fn scaled(&self, t: &Rational) -> Halfspace {
        Halfspace { normal: self.normal.clone(), constant: &self.constant * t }
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .normal
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{} x{}", fmt_exact(a), i + 1))
            .collect();
        write!(f, "{} >= {}", terms.join(" + "), fmt_exact(&self.constant))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
}

pub fn newton_polyhedron(ideal: &MonomialIdeal) -> Result<NewtonPolyhedron> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let points: Vec<Point> = ideal.generators().iter().map(|g| g.to_rational()).collect();
    NewtonPolyhedron::from_points(ideal.dim(), &points)
}

fn check_exact_dim(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if k > MAX_EXACT_DIM {
        return Err(Error::UnsupportedDimension(k));
    }
    Ok(())
}

fn unit_vector(k: usize, i: usize) -> Point {
    let mut e = vec![Rational::zero(); k];
    e[i] = Rational::one();
    e
}

fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Points not dominated by another point, sorted and deduplicated.
fn undominated(points: &[Point]) -> Vec<Point> {
    let mut sorted: Vec<Point> = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut kept: Vec<Point> = Vec::new();
    for p in sorted {
        if !kept.iter().any(|q| dominates(&p, q)) {
            kept.push(p);
        }
    }
    kept
}

impl NewtonPolyhedron {
    /// `conv(points) + ℝ^k_{≥0}`.
    pub fn from_points(k: usize, points: &[Point]) -> Result<Self> {
        check_exact_dim(k)?;
        if points.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if let Some(p) = points.iter().find(|p| p.len() != k) {
            return Err(Error::dims(k, p.len()));
        }
        if points.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::InvalidParameter("points must lie in the nonnegative orthant".into()));
        }
        let candidates = undominated(points);
        match k {
            1 => {
                let v = candidates[0].clone();
                let facets = vec![Halfspace::new(vec![Rational::one()], v[0].clone())];
                Ok(NewtonPolyhedron { dim: 1, vertices: vec![v], facets })
            }
            2 => Ok(Self::from_points_2d(candidates)),
            _ => Ok(Self::from_points_3d(candidates)),
        }
    }

    /// Staircase points (x ascending, y descending) through a lower convex chain.
    fn from_points_2d(stairs: Vec<Point>) -> Self {
        let mut hull: Vec<Point> = Vec::with_capacity(stairs.len());
        for p in stairs {
            while hull.len() >= 2 {
                let o = &hull[hull.len() - 2];
                let a = &hull[hull.len() - 1];
                let turn = det2(&sub(a, o), &sub(&p, o));
                if turn <= Rational::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let first = &hull[0];
        let last = &hull[hull.len() - 1];
        let mut facets = vec![
            Halfspace::new(vec![int(1), int(0)], first[0].clone()),
            Halfspace::new(vec![int(0), int(1)], last[1].clone()),
        ];
        for w in hull.windows(2) {
            let normal = vec![&w[0][1] - &w[1][1], &w[1][0] - &w[0][0]];
            let constant = dot(&normal, &w[0]);
            facets.push(Halfspace::new(normal, constant).normalized());
        }
        facets.sort();
        NewtonPolyhedron { dim: 2, vertices: hull, facets }
    }

    fn from_points_3d(points: Vec<Point>) -> Self {
        let k = 3;
        let dirs: Vec<Point> = (0..k).map(|i| unit_vector(k, i)).collect();
        let mut facets: BTreeSet<Halfspace> = BTreeSet::new();
        let mut try_normal = |normal: Vec<Rational>, anchor: &Point| {
            if normal.iter().all(|x| x.is_zero()) {
                return;
            }
            let normal = if normal.iter().all(|x| !x.is_positive()) {
                normal.into_iter().map(|x| -x).collect()
            } else {
                normal
            };
            if normal.iter().any(|x| x.is_negative()) {
                return;
            }
            let h = Halfspace::new(normal, Rational::zero());
            let constant = h.value(anchor);
            let h = Halfspace::new(h.normal, constant);
            if points.iter().all(|q| h.contains(q)) {
                facets.insert(h.normalized());
            }
        };
        let n = points.len();
        for i in 0..n {
            let p = &points[i];
            for a in 0..k {
                for b in a + 1..k {
                    try_normal(cross(&dirs[a], &dirs[b]), p);
                }
            }
            for j in i + 1..n {
                let pq = sub(&points[j], p);
                for d in &dirs {
                    try_normal(cross(&pq, d), p);
                }
                for l in j + 1..n {
                    try_normal(cross(&pq, &sub(&points[l], p)), p);
                }
            }
        }
        let facets: Vec<Halfspace> = facets.into_iter().collect();
        let vertices: Vec<Point> = points
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> =
                    facets.iter().filter(|h| h.is_tight(p)).map(|h| h.normal.clone()).collect();
                rank(&tight) == k
            })
            .collect();
        NewtonPolyhedron { dim: k, vertices, facets }
    }

    /// Intersection of `⟨a_j, x⟩ ≥ c_j` (all `a_j ≥ 0`) with the orthant.
    pub fn from_halfspaces(k: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        check_exact_dim(k)?;
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != k) {
            return Err(Error::dims(k, h.normal.len()));
        }
        if halfspaces.iter().any(|h| h.normal.iter().any(|a| a.is_negative())) {
            return Err(Error::InvalidParameter(
                "absorbing regions need nonnegative facet normals".into(),
            ));
        }
        let mut all: Vec<Halfspace> = halfspaces.to_vec();
        for i in 0..k {
            all.push(Halfspace::new(unit_vector(k, i), Rational::zero()));
        }
        let vertices = polytope_vertices(k, &all);
        if vertices.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Self::from_points(k, &vertices)
    }

    /// The whole orthant, i.e. the Newton polyhedron of the unit ideal.
    pub fn orthant(k: usize) -> Result<Self> {
        Self::from_points(k, &[vec![Rational::zero(); k]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn contains_point(&self, q: &[Rational]) -> Result<bool> {
        if q.len() != self.dim {
            return Err(Error::dims(self.dim, q.len()));
        }
        Ok(self.facets.iter().all(|h| h.contains(q)))
    }

    /// `λ(P) = inf{λ ≥ 0 : λ·𝟏 ∈ P}`.
    pub fn diagonal_lambda(&self) -> Rational {
        self.facets
            .iter()
            .map(|h| {
                let s: Rational = h.normal.iter().sum();
                &h.constant / s
            })
            .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// `min ⟨w, v⟩` over `P` for `w ≥ 0`, attained at a vertex.
    pub fn min_weighted(&self, w: &[Rational]) -> Result<Rational> {
        if w.len() != self.dim {
            return Err(Error::dims(self.dim, w.len()));
        }
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::NegativeWeight);
        }
        Ok(self.vertices.iter().map(|v| dot(w, v)).min().expect("polyhedron has vertices"))
    }

    /// True when every coordinate axis eventually enters `P`.
    pub fn has_bounded_complement(&self) -> bool {
        (0..self.dim).all(|i| {
            self.vertices
                .iter()
                .any(|v| v.iter().enumerate().all(|(j, x)| j == i || x.is_zero()))
        })
    }

    fn box_side(&self) -> Rational {
        self.vertices
            .iter()
            .flatten()
            .cloned()
            .fold(Rational::one(), |acc, v| if v > acc { v } else { acc })
    }

    /// Exact `Vol(ℝ^k_{≥0} \ P)`.
    pub fn covolume(&self) -> Result<Rational> {
        if !self.has_bounded_complement() {
            return Err(Error::UnboundedComplement);
        }
        match self.dim {
            1 => Ok(self.vertices[0][0].clone()),
            2 => {
                // complement polygon (0,0), v_last, …, v_first
                let mut poly: Vec<Point> = vec![vec![Rational::zero(), Rational::zero()]];
                poly.extend(self.vertices.iter().rev().cloned());
                Ok(shoelace(&poly).abs())
            }
            _ => self.covolume_by_triangulation(),
        }
    }

    /// `Vol(box) − Vol(P ∩ box)` with `P ∩ box` triangulated from its vertex centroid.
    pub fn covolume_by_triangulation(&self) -> Result<Rational> {
        if !self.has_bounded_complement() {
            return Err(Error::UnboundedComplement);
        }
        let k = self.dim;
        let side = self.box_side();
        let mut halfspaces = self.facets.clone();
        for i in 0..k {
            let mut normal = vec![Rational::zero(); k];
            normal[i] = -Rational::one();
            halfspaces.push(Halfspace::new(normal, -side.clone()));
            halfspaces.push(Halfspace::new(unit_vector(k, i), Rational::zero()));
        }
        let inside = polytope_volume(k, &halfspaces)?;
        let mut box_volume = Rational::one();
        for _ in 0..k {
            box_volume *= &side;
        }
        Ok(box_volume - inside)
    }

    pub fn scale(&self, t: &Rational) -> Result<NewtonPolyhedron> {
        if !t.is_positive() {
            return Err(Error::NonpositiveScale);
        }
        let vertices = self.vertices.iter().map(|v| v.iter().map(|x| x * t).collect()).collect();
        let facets = self.facets.iter().map(|h| h.scaled(t)).collect();
        Ok(NewtonPolyhedron { dim: self.dim, vertices, facets })
    }

    pub fn intersect(&self, other: &NewtonPolyhedron) -> Result<NewtonPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        let mut all = self.facets.clone();
        all.extend(other.facets.iter().cloned());
        Self::from_halfspaces(self.dim, &all)
    }

    pub fn minkowski_sum(&self, other: &NewtonPolyhedron) -> Result<NewtonPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(linalg::add(a, b));
            }
        }
        Self::from_points(self.dim, &sums)
    }
}

impl fmt::Display for NewtonPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "V: {}", fmt_point(v))?;
        }
        for (i, h) in self.facets.iter().enumerate() {
            if i + 1 < self.facets.len() {
                writeln!(f, "F: {h}")?;
            } else {
                write!(f, "F: {h}")?;
            }
        }
        Ok(())
    }
}

fn shoelace(poly: &[Point]) -> Rational {
    let n = poly.len();
    let twice: Rational = (0..n).map(|i| det2(&poly[i], &poly[(i + 1) % n])).sum();
    twice / int(2)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertices of a bounded-or-pointed H-polyhedron by enumerating `k`-subsets of
/// constraints (normals of any sign). Sorted and deduplicated.
pub(crate) fn polytope_vertices(k: usize, halfspaces: &[Halfspace]) -> Vec<Point> {
    let mut out: BTreeSet<Point> = BTreeSet::new();
    for subset in k_subsets(halfspaces.len(), k) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| halfspaces[i].constant.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if halfspaces.iter().all(|h| h.contains(&x)) {
                out.insert(x);
            }
        }
    }
    out.into_iter().collect()
}

fn centroid(points: &[Point]) -> Point {
    let k = points[0].len();
    let n = int(points.len() as i64);
    (0..k).map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &n).collect()
}

/// Counterclockwise angular order of planar points around `center`.
fn angular_cmp(center: &[Rational], a: &[Rational], b: &[Rational]) -> Ordering {
    let da = sub(a, center);
    let db = sub(b, center);
    let half = |d: &[Rational]| -> u8 {
        if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(&da).cmp(&half(&db)).then_with(|| Rational::zero().cmp(&det2(&da, &db)))
}

/// Exact volume of a bounded H-polytope in dimension `k ≤ 3`, triangulated
/// from the centroid of its vertices. Lower-dimensional polytopes have volume 0.
pub fn polytope_volume(k: usize, halfspaces: &[Halfspace]) -> Result<Rational> {
    check_exact_dim(k)?;
    let vertices = polytope_vertices(k, halfspaces);
    if vertices.len() <= k {
        return Ok(Rational::zero());
    }
    let diffs: Vec<Point> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
    if rank(&diffs) < k {
        return Ok(Rational::zero());
    }
    let c = centroid(&vertices);
    match k {
        1 => Ok(&vertices[vertices.len() - 1][0] - &vertices[0][0]),
        2 => {
            let mut ring = vertices.clone();
            ring.sort_by(|a, b| angular_cmp(&c, a, b));
            let n = ring.len();
            let twice: Rational = (0..n)
                .map(|i| det2(&sub(&ring[i], &c), &sub(&ring[(i + 1) % n], &c)).abs())
                .sum();
            Ok(twice / int(2))
        }
        _ => {
            let mut six_vol = Rational::zero();
            let mut seen: BTreeSet<Halfspace> = BTreeSet::new();
            for h in halfspaces {
                let h = h.normalized();
                if !seen.insert(h.clone()) {
                    continue;
                }
                let face: Vec<Point> = vertices.iter().filter(|v| h.is_tight(v)).cloned().collect();
                if face.len() < 3 {
                    continue;
                }
                // drop the coordinate where the normal is largest in magnitude
                let drop = (0..3)
                    .max_by(|&i, &j| h.normal[i].abs().cmp(&h.normal[j].abs()))
                    .expect("three coordinates");
                let project = |p: &Point| -> Point {
                    (0..3).filter(|&i| i != drop).map(|i| p[i].clone()).collect()
                };
                let projected: Vec<Point> = face.iter().map(project).collect();
                let fc = centroid(&projected);
                let mut order: Vec<usize> = (0..face.len()).collect();
                order.sort_by(|&i, &j| angular_cmp(&fc, &projected[i], &projected[j]));
                let v0 = sub(&face[order[0]], &c);
                for w in order[1..].windows(2) {
                    let v1 = sub(&face[w[0]], &c);
                    let v2 = sub(&face[w[1]], &c);
                    six_vol += det3(&v0, &v1, &v2).abs();
                }
            }
            Ok(six_vol / int(6))
        }
    }
}

/// Bounded convex hull of a finite point set in dimension `k ≤ 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexHull {
    pub vertices: Vec<Point>,
    /// Inward facet inequalities; empty when the hull is degenerate.
    pub facets: Vec<Halfspace>,
    pub affine_dim: usize,
    pub degenerate: bool,
}

pub fn convex_hull(points: &[Point]) -> Result<ConvexHull> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidParameter("convex hull of an empty set".into()));
    };
    let k = first.len();
    check_exact_dim(k)?;
    if let Some(p) = points.iter().find(|p| p.len() != k) {
        return Err(Error::dims(k, p.len()));
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    let diffs: Vec<Point> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    let affine_dim = rank(&diffs);
    let degenerate = affine_dim < k;

    let vertices = match affine_dim {
        0 => vec![pts[0].clone()],
        1 => {
            let dir = diffs.iter().find(|d| d.iter().any(|x| !x.is_zero())).expect("rank 1").clone();
            let lo = pts.iter().min_by(|a, b| dot(&dir, a).cmp(&dot(&dir, b))).expect("nonempty");
            let hi = pts.iter().max_by(|a, b| dot(&dir, a).cmp(&dot(&dir, b))).expect("nonempty");
            let mut v = vec![lo.clone(), hi.clone()];
            v.sort();
            v
        }
        2 if k == 2 => monotone_chain(&pts),
        2 => {
            // coplanar points in space: hull in a coordinate projection that stays injective
            let normal = (0..diffs.len())
                .flat_map(|i| (i + 1..diffs.len()).map(move |j| (i, j)))
                .map(|(i, j)| cross(&diffs[i], &diffs[j]))
                .find(|n| n.iter().any(|x| !x.is_zero()))
                .expect("rank 2");
            let drop = (0..3).find(|&i| !normal[i].is_zero()).expect("nonzero normal");
            let proj: Vec<Point> = pts
                .iter()
                .map(|p| (0..3).filter(|&i| i != drop).map(|i| p[i].clone()).collect())
                .collect();
            let hull2 = monotone_chain(&proj);
            let mut v: Vec<Point> = pts
                .iter()
                .zip(&proj)
                .filter(|(_, q)| hull2.contains(q))
                .map(|(p, _)| p.clone())
                .collect();
            v.sort();
            v
        }
        _ => Vec::new(),
    };

    if degenerate {
        return Ok(ConvexHull { vertices, facets: Vec::new(), affine_dim, degenerate });
    }

    let (vertices, facets) = match k {
        1 => {
            let lo = pts[0].clone();
            let hi = pts[pts.len() - 1].clone();
            let facets = vec![
                Halfspace::new(vec![int(1)], lo[0].clone()),
                Halfspace::new(vec![int(-1)], -hi[0].clone()),
            ];
            (vec![lo, hi], facets)
        }
        2 => {
            let ring = monotone_chain_ccw(&pts);
            let n = ring.len();
            let mut facets: Vec<Halfspace> = (0..n)
                .map(|i| {
                    let p = &ring[i];
                    let q = &ring[(i + 1) % n];
                    let normal = vec![-(&q[1] - &p[1]), &q[0] - &p[0]];
                    let constant = dot(&normal, p);
                    Halfspace::new(normal, constant).normalized()
                })
                .collect();
            facets.sort();
            let mut v = ring;
            v.sort();
            (v, facets)
        }
        _ => {
            let mut facets: BTreeSet<Halfspace> = BTreeSet::new();
            let n = pts.len();
            for i in 0..n {
                for j in i + 1..n {
                    for l in j + 1..n {
                        let normal = cross(&sub(&pts[j], &pts[i]), &sub(&pts[l], &pts[i]));
                        if normal.iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        for sign in [1, -1] {
                            let normal: Vec<Rational> =
                                normal.iter().map(|x| x * int(sign)).collect();
                            let h = Halfspace::new(normal.clone(), dot(&normal, &pts[i]));
                            if pts.iter().all(|p| h.contains(p)) {
                                facets.insert(h.normalized());
                            }
                        }
                    }
                }
            }
            let facets: Vec<Halfspace> = facets.into_iter().collect();
            let v: Vec<Point> = pts
                .iter()
                .filter(|p| {
                    let tight: Vec<Vec<Rational>> =
                        facets.iter().filter(|h| h.is_tight(p)).map(|h| h.normal.clone()).collect();
                    rank(&tight) == 3
                })
                .cloned()
                .collect();
            (v, facets)
        }
    };
    Ok(ConvexHull { vertices, facets, affine_dim, degenerate })
}

/// Counterclockwise hull ring starting at the lexicographically smallest point;
/// collinear boundary points are dropped.
fn monotone_chain_ccw(sorted: &[Point]) -> Vec<Point> {
    if sorted.len() <= 2 {
        return sorted.to_vec();
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in sorted {
        while lower.len() >= 2
            && det2(&sub(&lower[lower.len() - 1], &lower[lower.len() - 2]), &sub(p, &lower[lower.len() - 2]))
                <= Rational::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2
            && det2(&sub(&upper[upper.len() - 1], &upper[upper.len() - 2]), &sub(p, &upper[upper.len() - 2]))
                <= Rational::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn monotone_chain(sorted: &[Point]) -> Vec<Point> {
    let mut v = monotone_chain_ccw(sorted);
    v.sort();
    v
}

/// Common denominator helper used when reporting facets with integer data.
pub fn integer_facet(h: &Halfspace) -> (Vec<BigInt>, Rational) {
    let n = h.normalized();
    let ints = n.normal.iter().map(|x| x.to_integer()).collect();
    (ints, n.constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    fn ideal(rows: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(rows[0].len(), rows).unwrap()
    }

    fn hs(normal: &[i64], c: Rational) -> Halfspace {
        Halfspace::new(normal.iter().map(|&x| int(x)).collect(), c)
    }

    #[test]
    fn newton_polyhedron_of_maximal_ideal() {
        let p = newton_polyhedron(&MonomialIdeal::maximal(2)).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 1]), pt(&[1, 0])]);
        assert!(p.facets().contains(&hs(&[1, 1], int(1))));
        assert!(p.facets().iter().all(|h| h.normal.iter().all(|a| !a.is_negative())));
    }

    #[test]
    fn newton_polyhedron_two_point_hull() {
        let p = newton_polyhedron(&ideal(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 3]), pt(&[2, 0])]);
        assert_eq!(
            p.facets(),
            &[hs(&[0, 1], int(0)), hs(&[1, 0], int(0)), hs(&[3, 2], int(6))]
        );
    }

    #[test]
    fn newton_polyhedron_keeps_interior_corner() {
        let p = newton_polyhedron(&ideal(&[&[2, 0], &[1, 1], &[0, 3]])).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 3]), pt(&[1, 1]), pt(&[2, 0])]);
        // (1,1) violates the hull line 3x + 2y ≥ 6 of the other two generators
        assert!(!hs(&[3, 2], int(6)).contains(&pt(&[1, 1])));
    }

    #[test]
    fn newton_polyhedron_drops_collinear_generator() {
        let p = newton_polyhedron(&ideal(&[&[2, 0], &[1, 1], &[0, 2]])).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 2]), pt(&[2, 0])]);
    }

    #[test]
    fn newton_polyhedron_errors() {
        assert_eq!(newton_polyhedron(&MonomialIdeal::zero(2)).unwrap_err(), Error::ZeroIdeal);
        let a = MonomialIdeal::maximal(4);
        assert_eq!(newton_polyhedron(&a).unwrap_err(), Error::UnsupportedDimension(4));
        let unit = newton_polyhedron(&MonomialIdeal::unit(2)).unwrap();
        assert_eq!(unit.vertices(), &[pt(&[0, 0])]);
    }

    #[test]
    fn contains_point_examples() {
        let p = newton_polyhedron(&MonomialIdeal::maximal(2)).unwrap();
        assert!(p.contains_point(&[rat(1, 2), rat(1, 2)]).unwrap());
        assert!(!p.contains_point(&[rat(1, 4), rat(1, 4)]).unwrap());
        let q = newton_polyhedron(&ideal(&[&[2, 0], &[0, 3]])).unwrap();
        assert!(q.contains_point(&pt(&[2, 5])).unwrap());
        assert!(q.contains_point(&pt(&[1, 1, 1])).is_err());
    }

    #[test]
    fn diagonal_lambda_examples() {
        let m = newton_polyhedron(&MonomialIdeal::maximal(2)).unwrap();
        assert_eq!(m.diagonal_lambda(), rat(1, 2));
        let a = newton_polyhedron(&ideal(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(a.diagonal_lambda(), rat(6, 5));
        let unit = NewtonPolyhedron::orthant(2).unwrap();
        assert_eq!(unit.diagonal_lambda(), int(0));
        let m3 = newton_polyhedron(&MonomialIdeal::maximal(3)).unwrap();
        assert_eq!(m3.diagonal_lambda(), rat(1, 3));
    }

    #[test]
    fn min_weighted_examples() {
        let one = [int(1), int(1)];
        let a = newton_polyhedron(&ideal(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(a.min_weighted(&one).unwrap(), int(2));
        let b = newton_polyhedron(&ideal(&[&[2, 0], &[1, 1], &[0, 3]])).unwrap();
        assert_eq!(b.min_weighted(&one).unwrap(), int(2));
        assert_eq!(b.min_weighted(&[int(0), int(0)]).unwrap(), int(0));
        assert_eq!(b.min_weighted(&[int(-1), int(0)]).unwrap_err(), Error::NegativeWeight);
    }

    #[test]
    fn covolume_examples_both_routes() {
        let cases: Vec<(MonomialIdeal, Rational)> = vec![
            (MonomialIdeal::maximal(2), rat(1, 2)),
            (ideal(&[&[2, 0], &[0, 3]]), int(3)),
            (ideal(&[&[2, 0], &[1, 1], &[0, 3]]), rat(5, 2)),
            (MonomialIdeal::unit(2), int(0)),
        ];
        for (a, expected) in cases {
            let p = newton_polyhedron(&a).unwrap();
            assert_eq!(p.covolume().unwrap(), expected, "{a}");
            assert_eq!(p.covolume_by_triangulation().unwrap(), expected, "{a}");
        }
        let x = newton_polyhedron(&ideal(&[&[1, 0]])).unwrap();
        assert_eq!(x.covolume().unwrap_err(), Error::UnboundedComplement);
    }

    #[test]
    fn covolume_in_three_dimensions() {
        // simplex with legs 2, 3, 5: volume 30/6
        let p = newton_polyhedron(&ideal(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])).unwrap();
        assert_eq!(p.covolume().unwrap(), int(5));
        let m2 = newton_polyhedron(&MonomialIdeal::maximal(3).power(2)).unwrap();
        assert_eq!(m2.covolume().unwrap(), rat(8, 6));
        // (x, y, z²): product of a unit triangle and an interval of length 2 under a slanted roof
        let q = newton_polyhedron(&ideal(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])).unwrap();
        assert_eq!(q.covolume().unwrap(), rat(1, 3));
    }

    #[test]
    fn newton_3d_facets_and_vertices() {
        let p = newton_polyhedron(&ideal(&[&[1, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0]])).unwrap();
        // (1,1,0) is the midpoint of (2,0,0) and (0,2,0), so not a vertex
        assert_eq!(p.vertices(), &[pt(&[0, 0, 1]), pt(&[0, 2, 0]), pt(&[2, 0, 0])]);
        for g in [pt(&[1, 1, 0]), pt(&[0, 0, 1]), pt(&[2, 0, 0]), pt(&[0, 2, 0])] {
            assert!(p.contains_point(&g).unwrap());
        }
        // the non-generator (1,0,0) is outside
        assert!(!p.contains_point(&pt(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn region_algebra_on_polyhedra() {
        let a = NewtonPolyhedron::from_halfspaces(2, &[hs(&[2, 1], int(2))]).unwrap();
        let b = NewtonPolyhedron::from_halfspaces(2, &[hs(&[1, 2], int(2))]).unwrap();
        let meet = a.intersect(&b).unwrap();
        assert_eq!(meet.vertices(), &[pt(&[0, 2]), vec![rat(2, 3), rat(2, 3)], pt(&[2, 0])]);
        let doubled = b.minkowski_sum(&b).unwrap();
        assert_eq!(doubled, b.scale(&int(2)).unwrap());
        assert_eq!(b.scale(&int(0)).unwrap_err(), Error::NonpositiveScale);
        let bad = NewtonPolyhedron::from_halfspaces(2, &[hs(&[-1, 1], int(1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn convex_hull_examples() {
        let sq = convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap();
        assert_eq!(sq.vertices.len(), 4);
        assert!(!sq.degenerate);
        assert_eq!(sq.facets.len(), 4);

        let line = convex_hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[1, 0])]).unwrap();
        assert_eq!(line.vertices, vec![pt(&[0, 0]), pt(&[2, 0])]);
        assert!(line.degenerate);

        let tri = convex_hull(&[pt(&[2, 0]), pt(&[0, 3]), pt(&[1, 1])]).unwrap();
        assert_eq!(tri.vertices, vec![pt(&[0, 3]), pt(&[1, 1]), pt(&[2, 0])]);
        for v in &tri.vertices {
            assert!(tri.facets.iter().all(|h| h.contains(v)));
        }
    }

    #[test]
    fn convex_hull_three_dimensional() {
        let mut pts = Vec::new();
        for x in 0..=1 {
            for y in 0..=1 {
                for z in 0..=1 {
                    pts.push(pt(&[x, y, z]));
                }
            }
        }
        pts.push(vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        let cube = convex_hull(&pts).unwrap();
        assert_eq!(cube.vertices.len(), 8);
        assert_eq!(cube.facets.len(), 6);
        let planar = convex_hull(&[pt(&[0, 0, 1]), pt(&[1, 0, 1]), pt(&[0, 1, 1]), pt(&[1, 1, 1]), vec![rat(1, 2), rat(1, 2), int(1)]]).unwrap();
        assert!(planar.degenerate);
        assert_eq!(planar.vertices.len(), 4);
        assert!(convex_hull(&[pt(&[0, 0, 0, 0])]).is_err());
    }

    #[test]
    fn polytope_volume_unit_cube_and_simplex() {
        let mut cube = Vec::new();
        for i in 0..3 {
            let mut n = vec![int(0); 3];
            n[i] = int(1);
            cube.push(Halfspace::new(n.clone(), int(0)));
            n[i] = int(-1);
            cube.push(Halfspace::new(n, int(-1)));
        }
        assert_eq!(polytope_volume(3, &cube).unwrap(), int(1));
        let mut simplex: Vec<Halfspace> = (0..3)
            .map(|i| {
                let mut n = vec![int(0); 3];
                n[i] = int(1);
                Halfspace::new(n, int(0))
            })
            .collect();
        simplex.push(hs(&[-1, -1, -1], int(-1)));
        assert_eq!(polytope_volume(3, &simplex).unwrap(), rat(1, 6));
    }
}
