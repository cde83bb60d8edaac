//! Closed convex regions of the orthant that absorb the orthant under addition,
//! the kinked boundary functions used to build them, lattice-generator
//! extraction, and the symmetric body whose gauge has kinks along prescribed rays.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial_ideal::{minimalize, ExponentVector, MonomialIdeal};
use crate::newton_geometry::{Halfspace, NewtonPolyhedron, Point};
use crate::rational::{ceil_int, dot, int, rat, Rational};

/// i-th dyadic rational of (0,1), 1-indexed: 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, 1/16, …
pub fn dyadic(i: usize) -> Rational {
    assert!(i >= 1, "dyadic enumeration is 1-indexed");
    let level = usize::BITS - i.leading_zeros(); // 2^(level-1) <= i < 2^level
    let offset = i - (1 << (level - 1));
    rat(2 * offset as i64 + 1, 1i64 << level)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Strictly increasing negative slopes, constant after the last point.
    ConvexDecreasing,
    /// Strictly decreasing nonpositive slopes on `[0, last x]`.
    ConcaveNonincreasing,
}

/// Continuous piecewise-linear function of one variable given by its graph
/// vertices, starting at `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    points: Vec<(Rational, Rational)>,
    shape: Shape,
}

impl PiecewiseLinearFn {
    pub fn new(points: Vec<(Rational, Rational)>, shape: Shape) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidFunction("no breakpoints".into()));
        };
        if !first.0.is_zero() {
            return Err(Error::InvalidFunction("first breakpoint must be at x = 0".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing".into()));
        }
        if points.iter().any(|(_, y)| y.is_negative()) {
            return Err(Error::InvalidFunction("values must be nonnegative".into()));
        }
        let f = PiecewiseLinearFn { points, shape };
        let slopes = f.slopes();
        match shape {
            Shape::ConvexDecreasing => {
                if slopes.iter().any(|s| !s.is_negative()) {
                    return Err(Error::InvalidFunction("slopes must be negative".into()));
                }
                if slopes.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidFunction("slopes must strictly increase".into()));
                }
            }
            Shape::ConcaveNonincreasing => {
                if slopes.is_empty() {
                    return Err(Error::InvalidFunction("concave variant needs a segment".into()));
                }
                if slopes.iter().any(|s| s.is_positive()) {
                    return Err(Error::InvalidFunction("slopes must be nonpositive".into()));
                }
                if slopes.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(Error::InvalidFunction("slopes must strictly decrease".into()));
                }
            }
        }
        Ok(f)
    }

    /// From `breakpoint x y slope_right` rows; the final slope must be 0.
    pub fn from_breakpoints(rows: &[(Rational, Rational, Rational)]) -> Result<Self> {
        let Some(last) = rows.last() else {
            return Err(Error::InvalidFunction("no breakpoints".into()));
        };
        if !last.2.is_zero() {
            return Err(Error::InvalidFunction("last slope_right must be 0".into()));
        }
        for w in rows.windows(2) {
            let (x0, y0, s0) = &w[0];
            let (x1, y1, _) = &w[1];
            if &(y0 + s0 * (x1 - x0)) != y1 {
                return Err(Error::InvalidFunction("breakpoints are not continuous".into()));
            }
        }
        let points = rows.iter().map(|(x, y, _)| (x.clone(), y.clone())).collect();
        Self::new(points, Shape::ConvexDecreasing)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Slope of each segment between consecutive breakpoints.
    pub fn slopes(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Interior breakpoints (where the slope changes).
    pub fn kinks(&self) -> Vec<Rational> {
        let n = self.points.len();
        let mut out: Vec<Rational> =
            self.points[1..n.saturating_sub(1).max(1)].iter().map(|p| p.0.clone()).collect();
        if self.shape == Shape::ConvexDecreasing && n >= 2 && self.points[n - 1].1.is_zero() {
            // slope jumps to 0 at the intercept
            out.push(self.points[n - 1].0.clone());
        }
        out
    }

    pub fn value_at_zero(&self) -> Rational {
        self.points[0].1.clone()
    }

    /// x where the function reaches 0, if it does.
    pub fn intercept(&self) -> Option<Rational> {
        self.points.iter().find(|(_, y)| y.is_zero()).map(|(x, _)| x.clone())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if x.is_negative() {
            return Err(Error::EvaluationOutOfDomain(format!("x = {x} < 0")));
        }
        let last = &self.points[self.points.len() - 1];
        if x >= &last.0 {
            return match self.shape {
                Shape::ConvexDecreasing => Ok(last.1.clone()),
                Shape::ConcaveNonincreasing if x == &last.0 => Ok(last.1.clone()),
                Shape::ConcaveNonincreasing => {
                    Err(Error::EvaluationOutOfDomain(format!("x = {x} beyond {}", last.0)))
                }
            };
        }
        let i = self.points.partition_point(|(px, _)| px <= x) - 1;
        let (x0, y0) = &self.points[i];
        let (x1, y1) = &self.points[i + 1];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

/// `f(x) = (−2x + 2) + Σ_{i≤N} max{0, (ε_i − x)/n_i}` with `ε_i` the dyadic
/// enumeration and `n_i = 2^{i+2}`; identically 0 from `x = 1` on.
pub fn build_kinked_f(terms: usize) -> PiecewiseLinearFn {
    let eps: Vec<Rational> = (1..=terms).map(dyadic).collect();
    let weights: Vec<Rational> = (1..=terms).map(|i| rat(1, 1i64 << (i + 2))).collect();
    let eval = |x: &Rational| -> Rational {
        let mut y = int(2) - int(2) * x;
        for (e, w) in eps.iter().zip(&weights) {
            if x < e {
                y += (e - x) * w;
            }
        }
        y
    };
    let mut xs: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    xs.extend(eps.iter().cloned());
    xs.sort();
    xs.dedup();
    let points = xs.into_iter().map(|x| {
        let y = eval(&x);
        (x, y)
    });
    PiecewiseLinearFn::new(points.collect(), Shape::ConvexDecreasing)
        .expect("kinked function is convex and decreasing by construction")
}

/// `g(x) = 1 − x/2` on `[0, 2]`.
pub fn build_g() -> PiecewiseLinearFn {
    PiecewiseLinearFn::new(vec![(int(0), int(1)), (int(2), int(0))], Shape::ConvexDecreasing)
        .expect("line is a valid convex piece")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Halfspaces,
    Epigraph,
    Newton,
    Orthant,
    Scaled,
    Intersection,
    Minkowski,
}

/// Closed convex subset of the orthant absorbing the orthant under addition.
#[derive(Clone, Debug)]
pub struct Region {
    body: NewtonPolyhedron,
    provenance: Provenance,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for Region {}

impl Region {
    pub fn from_halfspaces(k: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        Ok(Region {
            body: NewtonPolyhedron::from_halfspaces(k, halfspaces)?,
            provenance: Provenance::Halfspaces,
        })
    }

    pub fn from_polyhedron(body: NewtonPolyhedron) -> Self {
        Region { body, provenance: Provenance::Newton }
    }

    pub fn orthant(k: usize) -> Result<Self> {
        Ok(Region { body: NewtonPolyhedron::orthant(k)?, provenance: Provenance::Orthant })
    }

    pub fn body(&self) -> &NewtonPolyhedron {
        &self.body
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn vertices(&self) -> &[Point] {
        self.body.vertices()
    }

    pub fn facets(&self) -> &[Halfspace] {
        self.body.facets()
    }

    pub fn contains_point(&self, q: &[Rational]) -> Result<bool> {
        self.body.contains_point(q)
    }

    pub fn is_orthant(&self) -> bool {
        self.vertices().len() == 1 && self.vertices()[0].iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, t: &Rational) -> Result<Region> {
        Ok(Region { body: self.body.scale(t)?, provenance: Provenance::Scaled })
    }

    pub fn intersect(&self, other: &Region) -> Result<Region> {
        Ok(Region { body: self.body.intersect(&other.body)?, provenance: Provenance::Intersection })
    }

    pub fn minkowski(&self, other: &Region) -> Result<Region> {
        Ok(Region { body: self.body.minkowski_sum(&other.body)?, provenance: Provenance::Minkowski })
    }

    /// Lowest `y` with `(x, y)` in the region (k = 2), or `None` left of the region.
    pub fn boundary_height(&self, x: &Rational) -> Result<Option<Rational>> {
        if self.dim() != 2 {
            return Err(Error::dims(2, self.dim()));
        }
        Ok(lowest_last_coordinate(self.facets(), std::slice::from_ref(x)))
    }

    /// Minimal generators of the ideal spanned by the lattice points of `m·P`.
    pub fn lattice_generators(&self, m: u64) -> Result<MonomialIdeal> {
        if m == 0 {
            return Err(Error::InvalidParameter("lattice generators need m ≥ 1".into()));
        }
        let k = self.dim();
        let scale = int(m as i64);
        let facets: Vec<Halfspace> = self.facets().iter().map(|h| h.scaled(&scale)).collect();
        // minimal lattice points lie in [0, M]^k, M = ceil(m · max vertex coordinate)
        let top = self
            .vertices()
            .iter()
            .flatten()
            .cloned()
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        let bound = ceil_int(&(top * &scale)).to_u64().expect("scan bound fits in u64");

        let mut gens: Vec<ExponentVector> = Vec::new();
        let mut prefix = vec![0u64; k - 1];
        'scan: loop {
            let fixed: Vec<Rational> = prefix.iter().map(|&v| int(v as i64)).collect();
            if let Some(low) = lowest_last_coordinate(&facets, &fixed) {
                let last = ceil_int(&low).to_u64().expect("nonnegative height");
                let mut e = prefix.clone();
                e.push(last);
                gens.push(ExponentVector::new(e)?);
            }
            for i in 0..k - 1 {
                prefix[i] += 1;
                if prefix[i] <= bound {
                    continue 'scan;
                }
                prefix[i] = 0;
            }
            break;
        }
        if gens.is_empty() {
            return Err(Error::EmptyRegion);
        }
        minimalize(gens, k)
    }
}

/// Smallest nonnegative last coordinate `t` such that `(fixed, t)` satisfies every
/// halfspace (normals ≥ 0), or `None` if no `t` works.
fn lowest_last_coordinate(facets: &[Halfspace], fixed: &[Rational]) -> Option<Rational> {
    let k = fixed.len() + 1;
    let mut low = Rational::zero();
    for h in facets {
        let partial: Rational = dot(&h.normal[..k - 1], fixed);
        let a = &h.normal[k - 1];
        if a.is_zero() {
            if partial < h.constant {
                return None;
            }
        } else {
            let need = (&h.constant - partial) / a;
            if need > low {
                low = need;
            }
        }
    }
    Some(low)
}

/// Region above the graph of a convex decreasing function (k = 2).
pub fn epigraph_region(f: &PiecewiseLinearFn) -> Result<Region> {
    if f.shape() != Shape::ConvexDecreasing {
        return Err(Error::InvalidFunction("epigraphs need the convex decreasing variant".into()));
    }
    let points: Vec<Point> = f.points().iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
    Ok(Region {
        body: NewtonPolyhedron::from_points(2, &points)?,
        provenance: Provenance::Epigraph,
    })
}

/// Concave boundary `f(x) = Σ_{i≤N} min{ε_i, ε_i(1 − x)/(1 − x_i)}` on `[0, 1]` with
/// `ε_i = 2^{−i}` and `x_i` the dyadic enumeration.
pub fn dense_kink_boundary(terms: usize) -> Result<PiecewiseLinearFn> {
    if terms == 0 {
        return Err(Error::InvalidParameter("dense-kink body needs at least one term".into()));
    }
    let kinks: Vec<Rational> = (1..=terms).map(dyadic).collect();
    let caps: Vec<Rational> = (1..=terms).map(|i| rat(1, 1i64 << i)).collect();
    let eval = |x: &Rational| -> Rational {
        kinks
            .iter()
            .zip(&caps)
            .map(|(xi, e)| {
                let ramp = e * (int(1) - x) / (int(1) - xi);
                if &ramp < e {
                    ramp
                } else {
                    e.clone()
                }
            })
            .sum()
    };
    let mut xs = kinks.clone();
    xs.push(Rational::zero());
    xs.push(Rational::one());
    xs.sort();
    xs.dedup();
    let points = xs.into_iter().map(|x| {
        let y = eval(&x);
        (x, y)
    });
    PiecewiseLinearFn::new(points.collect(), Shape::ConcaveNonincreasing)
}

/// Convex body `{(x, y) : |x| ≤ 1, |y| ≤ f(|x|)}` for a concave nonincreasing `f`
/// on `[0, 1]` with `f(1) = 0` and `f(0) > 0`, stored as constraints
/// `⟨a, (|x|, |y|)⟩ ≤ c` with `a ≥ 0`, `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricBody {
    boundary: PiecewiseLinearFn,
    constraints: Vec<(Vec<Rational>, Rational)>,
}

impl SymmetricBody {
    pub fn new(boundary: PiecewiseLinearFn) -> Result<Self> {
        if boundary.shape() != Shape::ConcaveNonincreasing {
            return Err(Error::InvalidFunction("symmetric body needs a concave boundary".into()));
        }
        let pts = boundary.points();
        let (x_end, y_end) = &pts[pts.len() - 1];
        if !x_end.is_one() || !y_end.is_zero() {
            return Err(Error::InvalidFunction("boundary must end at (1, 0)".into()));
        }
        if !boundary.value_at_zero().is_positive() {
            return Err(Error::InvalidFunction("origin must be interior".into()));
        }
        let mut constraints = vec![(vec![int(1), int(0)], int(1))];
        for (w, s) in pts.windows(2).zip(boundary.slopes()) {
            // y − s·x ≤ y_j − s·x_j
            let c = &w[0].1 - &s * &w[0].0;
            constraints.push((vec![-s, int(1)], c));
        }
        Ok(SymmetricBody { boundary, constraints })
    }

    pub fn dense_kinks(terms: usize) -> Result<Self> {
        Self::new(dense_kink_boundary(terms)?)
    }

    pub fn boundary(&self) -> &PiecewiseLinearFn {
        &self.boundary
    }

    /// Boundary points where the boundary is not differentiable (first quadrant).
    pub fn kink_points(&self) -> Vec<Point> {
        let pts = self.boundary.points();
        pts[1..pts.len() - 1].iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect()
    }

    /// Minkowski functional `inf{y > 0 : p/y ∈ R}`.
    pub fn gauge(&self, p: &[Rational]) -> Result<Rational> {
        if p.len() != 2 {
            return Err(Error::dims(2, p.len()));
        }
        let abs: Vec<Rational> = p.iter().map(|x| x.abs()).collect();
        Ok(self
            .constraints
            .iter()
            .map(|(a, c)| dot(a, &abs) / c)
            .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc }))
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        Ok(self.gauge(p)? <= Rational::one())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}
