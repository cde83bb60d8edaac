//! Asymptotic invariants of graded systems along a direction, computed from
//! factorial or doubling sample schedules and from the limit body, plus exact
//! kink detection for convex piecewise-linear functions of one variable.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cones::{halton_directions, ConeRep};
use crate::error::{Error, Result};
use crate::graded_system::SystemExpr;
use crate::monomial_ideal::{factorial, MonomialIdeal};
use crate::rational::{int, rat, to_f64, Rational};
use crate::regions::{build_kinked_f, PiecewiseLinearFn, Region, SymmetricBody};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Ord0,
    Arn,
    Mult,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Ord0 => "ord0",
            Quantity::Arn => "arn",
            Quantity::Mult => "mult",
        })
    }
}

pub const MAX_FACTORIAL: u32 = 10;
pub const MAX_DOUBLING: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// `n = 1!, 2!, …, L!`
    Factorial(u32),
    /// `n = 1, 2, 4, …, 2^J`
    Doubling(u32),
}

impl Schedule {
    pub fn indices(&self) -> Result<Vec<i64>> {
        match *self {
            Schedule::Factorial(l) if (1..=MAX_FACTORIAL).contains(&l) => {
                Ok((1..=l as i64).scan(1i64, |acc, i| {
                    *acc *= i;
                    Some(*acc)
                })
                .collect())
            }
            Schedule::Doubling(j) if j <= MAX_DOUBLING => Ok((0..=j).map(|i| 1i64 << i).collect()),
            _ => Err(Error::InvalidParameter(format!("schedule {self:?} out of range"))),
        }
    }
}

/// Per-ideal value of a quantity.
pub fn ideal_quantity(ideal: &MonomialIdeal, q: Quantity) -> Result<Rational> {
    match q {
        Quantity::Ord0 => ideal.order(),
        Quantity::Arn => ideal.arn(),
        Quantity::Mult => ideal.multiplicity(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub n: i64,
    pub value: Rational,
}

/// Schedule samples of one invariant along a direction together with the
/// limit-body value when the system allows one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBracket {
    pub quantity: Quantity,
    pub direction: Vec<i64>,
    pub samples: Vec<Sample>,
    pub geometric: Option<Rational>,
    pub monotone: bool,
    pub certified: bool,
}

impl InvariantBracket {
    /// Last sample, an upper bound for the limit.
    pub fn upper(&self) -> &Rational {
        &self.samples.last().expect("schedules are nonempty").value
    }
}

pub fn sequence_invariant(
    sys: &SystemExpr,
    v: &[i64],
    quantity: Quantity,
    schedule: Schedule,
) -> Result<InvariantBracket> {
    let view = sys.restrict_direction(v)?;
    let k = sys.dim();
    let indices = schedule.indices()?;
    let samples: Vec<Sample> = indices
        .par_iter()
        .map(|&n| {
            let ideal = view.eval(&[n])?;
            if ideal.is_zero() {
                return Err(Error::ZeroIdealInDirection(v.to_vec()));
            }
            let raw = ideal_quantity(&ideal, quantity)?;
            let scale = match quantity {
                Quantity::Mult => int(n).pow(k as i32),
                _ => int(n),
            };
            Ok(Sample { n, value: raw / scale })
        })
        .collect::<Result<_>>()?;
    let monotone = samples.windows(2).all(|w| w[1].value <= w[0].value);

    let direction: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
    let geometric = match sys.limit_body(&direction) {
        Ok(body) => {
            let g = geometric_invariants(&body)?;
            match quantity {
                Quantity::Ord0 => Some(g.ord0),
                Quantity::Arn => Some(g.arn),
                Quantity::Mult => g.mult,
            }
        }
        Err(Error::NotRegionExpressible(_)) => None,
        Err(e) => return Err(e),
    };
    let certified = monotone
        && geometric
            .as_ref()
            .is_some_and(|g| samples.iter().all(|s| g <= &s.value));
    Ok(InvariantBracket { quantity, direction: v.to_vec(), samples, geometric, monotone, certified })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricInvariants {
    pub ord0: Rational,
    pub arn: Rational,
    /// `None` when the complement of the body is unbounded.
    pub mult: Option<Rational>,
}

impl GeometricInvariants {
    pub fn get(&self, q: Quantity) -> Option<&Rational> {
        match q {
            Quantity::Ord0 => Some(&self.ord0),
            Quantity::Arn => Some(&self.arn),
            Quantity::Mult => self.mult.as_ref(),
        }
    }
}

/// `(min ⟨𝟏, x⟩, λ(P), k!·covolume)` of a limit body.
pub fn geometric_invariants(body: &Region) -> Result<GeometricInvariants> {
    let p = body.body();
    let k = p.dim();
    let ones = vec![Rational::one(); k];
    let mult = if p.has_bounded_complement() {
        Some(factorial(k) * p.covolume()?)
    } else {
        None
    };
    Ok(GeometricInvariants { ord0: p.min_weighted(&ones)?, arn: p.diagonal_lambda(), mult })
}

/// Closed forms for a ceiling system at `v = (x, y)`:
/// `(t·ord0(base), t·Arn(base), t^k·e(base))` with `t = max(f(x) − y, 0)`.
pub fn ceiling_closed_forms(
    cone: &ConeRep,
    v: &[Rational],
    base: &MonomialIdeal,
) -> Result<GeometricInvariants> {
    if v.len() != cone.rank() {
        return Err(Error::RankMismatch { expected: cone.rank(), found: v.len() });
    }
    let (x, y) = v.split_at(v.len() - 1);
    let mut t = cone.epigraph_value(x)? - &y[0];
    if t.is_negative() {
        t = Rational::zero();
    }
    let k = base.dim();
    let mult = if base.is_cofinite() {
        Some(t.pow(k as i32) * base.multiplicity()?)
    } else {
        None
    };
    Ok(GeometricInvariants { ord0: &t * base.order()?, arn: &t * base.arn()?, mult })
}

/// `k!·colength(eval(n·v))/n^k`, the lattice-count estimate of the multiplicity.
pub fn colength_oracle(sys: &SystemExpr, v: &[i64], n: i64) -> Result<Rational> {
    let view = sys.restrict_direction(v)?;
    let ideal = view.eval(&[n])?;
    let k = sys.dim();
    Ok(factorial(k) * int(ideal.colength()? as i64) / int(n).pow(k as i32))
}

/// True when `p ∈ (1/n)·P(eval(n·v))`.
pub fn limit_membership(sys: &SystemExpr, v: &[i64], p: &[Rational], n: i64) -> Result<bool> {
    let ideal = sys.restrict_direction(v)?.eval(&[n])?;
    if ideal.is_zero() {
        return Ok(false);
    }
    let scaled: Vec<Rational> = p.iter().map(|x| x * int(n)).collect();
    ideal.newton_polyhedron()?.contains_point(&scaled)
}

/// Outcome of the three subadditivity inequalities for `a`, `b` and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditivityCheck {
    pub ord0: bool,
    pub arn: bool,
    /// `None` unless all three ideals are cofinite.
    pub mult: Option<bool>,
}

impl SubadditivityCheck {
    pub fn holds(&self) -> bool {
        self.ord0 && self.arn && self.mult.unwrap_or(true)
    }
}

/// `e(s)^{1/k} ≤ e(a)^{1/k} + e(b)^{1/k}`, exact for `k ≤ 2`.
fn root_subadditive(k: usize, es: &Rational, ea: &Rational, eb: &Rational) -> bool {
    match k {
        1 => es <= &(ea + eb),
        2 => {
            let d = es - ea - eb;
            !d.is_positive() || &d * &d <= int(4) * ea * eb
        }
        _ => {
            let r = 1.0 / k as f64;
            to_f64(es).powf(r) <= to_f64(ea).powf(r) + to_f64(eb).powf(r) + 1e-12
        }
    }
}

/// Compares `sum` (an ideal containing `a·b`) against `a` and `b`.
pub fn subadditivity(sum: &MonomialIdeal, a: &MonomialIdeal, b: &MonomialIdeal) -> Result<SubadditivityCheck> {
    let ord0 = sum.order()? <= a.order()? + b.order()?;
    let arn = sum.arn()? <= a.arn()? + b.arn()?;
    let mult = if sum.is_cofinite() && a.is_cofinite() && b.is_cofinite() {
        Some(root_subadditive(
            sum.dim(),
            &sum.multiplicity()?,
            &a.multiplicity()?,
            &b.multiplicity()?,
        ))
    } else {
        None
    };
    Ok(SubadditivityCheck { ord0, arn, mult })
}

/// Both routes for `ord0` of the kinked intersection system at `(r, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinkedOrder {
    pub r: Rational,
    pub s: Rational,
    /// `min (x + y)` over the vertices of `r·P ∩ s·Q`.
    pub vertex_route: Rational,
    /// Abscissa where `r·f(x/r)` meets `s − x/2`, if they meet.
    pub crossing: Option<Rational>,
    /// `s + crossing/2`.
    pub formula_route: Option<Rational>,
}

impl KinkedOrder {
    pub fn agrees(&self) -> bool {
        self.formula_route.as_ref().is_some_and(|f| f == &self.vertex_route)
    }
}

/// First `x ≥ 0` with `r·f(x/r) = s − x/2`, for convex decreasing `f` steeper than −1/2.
pub fn kinked_crossing(f: &PiecewiseLinearFn, r: &Rational, s: &Rational) -> Option<Rational> {
    let half = rat(1, 2);
    let pts: Vec<(Rational, Rational)> = f
        .points()
        .iter()
        .map(|(x, y)| (x * r, y * r))
        .collect();
    let h: Vec<Rational> = pts.iter().map(|(x, y)| y - s + x * &half).collect();
    if !h[0].is_positive() {
        return if h[0].is_zero() { Some(Rational::zero()) } else { None };
    }
    let j = h.iter().position(|v| !v.is_positive())?;
    let (x0, x1) = (&pts[j - 1].0, &pts[j].0);
    Some(x0 + &h[j - 1] * (x1 - x0) / (&h[j - 1] - &h[j]))
}

pub fn kinked_order(sys: &SystemExpr, f: &PiecewiseLinearFn, r: &Rational, s: &Rational) -> Result<KinkedOrder> {
    if !r.is_positive() || !s.is_positive() {
        return Err(Error::InvalidParameter("r and s must be positive".into()));
    }
    let body = sys.limit_body(&[r.clone(), s.clone()])?;
    let vertex_route = geometric_invariants(&body)?.ord0;
    let crossing = kinked_crossing(f, r, s);
    let formula_route = crossing.as_ref().map(|x| s + x * rat(1, 2));
    Ok(KinkedOrder { r: r.clone(), s: s.clone(), vertex_route, crossing, formula_route })
}

/// `ord0` of the kinked intersection system with `terms` kinks at `(r, s)`.
pub fn kinked_ord0(r: &Rational, s: &Rational, terms: usize) -> Result<KinkedOrder> {
    let sys = SystemExpr::kinked_intersection(terms)?;
    kinked_order(&sys, &build_kinked_f(terms), r, s)
}

/// Evenly spaced values `lo, lo + (hi − lo)/steps, …, hi`.
pub fn grid_axis(lo: &Rational, hi: &Rational, steps: usize) -> Result<Vec<Rational>> {
    if steps == 0 || lo > hi {
        return Err(Error::InvalidParameter("grid needs lo ≤ hi and at least one step".into()));
    }
    let width = (hi - lo) / int(steps as i64);
    Ok((0..=steps).map(|i| lo + &width * int(i as i64)).collect())
}

/// `ord0` over a grid of `(r, s)` cells, row-major in `r`.
pub fn kinked_order_grid(
    sys: &SystemExpr,
    f: &PiecewiseLinearFn,
    rs: &[Rational],
    ss: &[Rational],
) -> Result<Vec<KinkedOrder>> {
    let cells: Vec<(&Rational, &Rational)> = rs.iter().flat_map(|r| ss.iter().map(move |s| (r, s))).collect();
    cells.par_iter().map(|(r, s)| kinked_order(sys, f, r, s)).collect()
}

/// One-sided difference quotients at successively smaller steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffQuotient {
    pub s0: Rational,
    /// `(h, left, right)` for `h = 1/8, 1/16, …, 1/4096`.
    pub steps: Vec<(Rational, Rational, Rational)>,
    pub left: Rational,
    pub right: Rational,
    pub gap: Rational,
}

pub const FINEST_STEP_EXPONENT: u32 = 12;

pub fn diff_quotient_scan<F>(f: F, s0: &Rational) -> Result<DiffQuotient>
where
    F: Fn(&Rational) -> Result<Rational>,
{
    let at = f(s0)?;
    let mut steps = Vec::new();
    for e in 3..=FINEST_STEP_EXPONENT {
        let h = rat(1, 1i64 << e);
        let left = (&at - f(&(s0 - &h))?) / &h;
        let right = (f(&(s0 + &h))? - &at) / &h;
        steps.push((h, left, right));
    }
    let (_, left, right) = steps.last().cloned().expect("at least one step");
    let gap = &right - &left;
    Ok(DiffQuotient { s0: s0.clone(), steps, left, right, gap })
}

/// Depth limit of the bisection in [`convex_kinks`].
pub const KINK_SEARCH_DEPTH: u32 = 40;

fn linear_pieces<F>(f: &F, a: Rational, fa: Rational, b: Rational, fb: Rational, depth: u32, out: &mut Vec<[Rational; 4]>) -> Result<()>
where
    F: Fn(&Rational) -> Result<Rational> + Sync,
{
    let m = (&a + &b) / int(2);
    let fm = f(&m)?;
    if fm == (&fa + &fb) / int(2) {
        out.push([a, fa, b, fb]);
        return Ok(());
    }
    if depth == 0 {
        return Ok(());
    }
    linear_pieces(f, a, fa, m.clone(), fm.clone(), depth - 1, out)?;
    linear_pieces(f, m, fm, b, fb, depth - 1, out)
}

/// Exact kinks of a convex piecewise-linear function on `[a, b]`.
///
/// Convexity makes the midpoint test exact: `f` is affine on an interval iff it
/// meets its chord at the midpoint. Adjacent maximal affine pieces with different
/// slopes meet at a kink, located by intersecting their lines and then verified.
pub fn convex_kinks<F>(f: F, a: &Rational, b: &Rational) -> Result<Vec<Rational>>
where
    F: Fn(&Rational) -> Result<Rational> + Sync,
{
    if a >= b {
        return Err(Error::InvalidParameter("kink window must have a < b".into()));
    }
    let mut pieces = Vec::new();
    linear_pieces(&f, a.clone(), f(a)?, b.clone(), f(b)?, KINK_SEARCH_DEPTH, &mut pieces)?;
    // (start, end, slope, intercept) merged over contiguous pieces on one line
    let mut lines: Vec<(Rational, Rational, Rational, Rational)> = Vec::new();
    for [x0, y0, x1, y1] in pieces {
        let slope = (&y1 - &y0) / (&x1 - &x0);
        let icept = &y0 - &slope * &x0;
        if let Some(last) = lines.last_mut() {
            if last.1 == x0 && last.2 == slope && last.3 == icept {
                last.1 = x1;
                continue;
            }
        }
        lines.push((x0, x1, slope, icept));
    }
    let mut kinks = Vec::new();
    for w in lines.windows(2) {
        let (_, end, s1, c1) = &w[0];
        let (start, _, s2, c2) = &w[1];
        if s2 <= s1 {
            return Err(Error::InvalidParameter("function is not convex on the window".into()));
        }
        let x = (c2 - c1) / (s1 - s2);
        let on_line = f(&x)? == s1 * &x + c1;
        if &x < end || &x > start || !on_line {
            return Err(Error::InvalidParameter(format!(
                "unresolved kinks between {end} and {start}"
            )));
        }
        kinks.push(x);
    }
    Ok(kinks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinkRow {
    pub s0: Rational,
    pub left: Rational,
    pub right: Rational,
    pub gap: Rational,
}

impl From<DiffQuotient> for KinkRow {
    fn from(d: DiffQuotient) -> Self {
        KinkRow { s0: d.s0, left: d.left, right: d.right, gap: d.gap }
    }
}

/// Kinks of a convex piecewise-linear function in `[a, b]` with their one-sided slopes.
pub fn kink_table<F>(f: F, a: &Rational, b: &Rational) -> Result<Vec<KinkRow>>
where
    F: Fn(&Rational) -> Result<Rational> + Sync,
{
    convex_kinks(&f, a, b)?
        .iter()
        .map(|s0| diff_quotient_scan(&f, s0).map(KinkRow::from))
        .collect()
}

/// Kinks of `s ↦ ord0(sys, (r, s))` for `s ∈ [s_min, s_max]`, computed from limit bodies.
pub fn order_kink_table(sys: &SystemExpr, r: &Rational, s_min: &Rational, s_max: &Rational) -> Result<Vec<KinkRow>> {
    let f = |s: &Rational| -> Result<Rational> {
        Ok(geometric_invariants(&sys.limit_body(&[r.clone(), s.clone()])?)?.ord0)
    };
    kink_table(f, s_min, s_max)
}

/// Slope jump of `t ↦ gauge((1, t))` through a boundary kink of a symmetric body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeKink {
    pub point: Vec<Rational>,
    pub row: KinkRow,
}

pub fn gauge_kink_table(body: &SymmetricBody) -> Result<Vec<GaugeKink>> {
    body.kink_points()
        .into_iter()
        .map(|p| {
            let t0 = &p[1] / &p[0];
            let d = diff_quotient_scan(|t: &Rational| body.gauge(&[Rational::one(), t.clone()]), &t0)?;
            Ok(GaugeKink { point: p, row: d.into() })
        })
        .collect()
}

/// Counts of passing homogeneity and midpoint-convexity checks on `samples`
/// deterministic inputs each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeChecks {
    pub samples: usize,
    pub homogeneous: usize,
    pub midpoint_convex: usize,
}

pub fn gauge_spot_checks(body: &SymmetricBody, samples: usize) -> Result<GaugeChecks> {
    let dirs = halton_directions(4, 2 * samples);
    let mut homogeneous = 0;
    let mut midpoint_convex = 0;
    for i in 0..samples {
        let u = &dirs[2 * i];
        let w = &dirs[2 * i + 1];
        let p = [int(3) * &u[0], int(3) * &u[1]];
        let lambda = (&u[2] + int(1)) * int(4) + rat(1, 7);
        let lp = [&p[0] * &lambda, &p[1] * &lambda];
        if body.gauge(&lp)? == &lambda * body.gauge(&p)? {
            homogeneous += 1;
        }
        let q = [int(3) * &w[0], int(3) * &w[1]];
        let mid = [(&p[0] + &q[0]) / int(2), (&p[1] + &q[1]) / int(2)];
        if body.gauge(&mid)? * int(2) <= body.gauge(&p)? + body.gauge(&q)? {
            midpoint_convex += 1;
        }
    }
    Ok(GaugeChecks { samples, homogeneous, midpoint_convex })
}

/// Integer `n ≥ 1` clearing every denominator of `p`.
pub fn clearing_denominator(p: &[Rational]) -> i64 {
    crate::rational::denominator_lcm(p).to_i64().expect("denominator fits in i64")
}
