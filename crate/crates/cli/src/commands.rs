use std::path::Path;

use anyhow::{bail, Context, Result};
use multigraded::cones::{
    cone_compare, eff_points, lattice_compare, nef_points, ray_hull_of_lattice_points, ConeKind, ConeRep,
    MAX_HULL_RANK,
};
use multigraded::formats::{load_cone, load_ideal, load_system};
use multigraded::graded_system::{symmetric_window, SystemExpr};
use multigraded::invariants::{
    ceiling_closed_forms, gauge_kink_table, gauge_spot_checks, geometric_invariants, grid_axis,
    kinked_order_grid, order_kink_table, sequence_invariant, GeometricInvariants, KinkRow, Quantity, Schedule,
};
use multigraded::rational::{fmt_exact, int, rat, Rational};
use multigraded::regions::{build_kinked_f, SymmetricBody};
use multigraded::{Error, MonomialIdeal};

use crate::args::{parse_rational_arg, Method, ReproCommand, ScheduleKind, SystemCommand};
use crate::output::{optional_cells, rational_cells, show, show_index, show_point, yes_no, Report, Table};

const QUANTITIES: [Quantity; 3] = [Quantity::Ord0, Quantity::Arn, Quantity::Mult];

fn describe_polyhedron(report: &mut Report, body: &multigraded::NewtonPolyhedron) {
    for line in body.to_string().lines() {
        report.line(format!("  {line}"));
    }
}

pub fn ideal_info(path: &Path) -> Result<Report> {
    let ideal = load_ideal(path)?;
    let mut r = Report::new();
    r.kv("ideal", &ideal);
    r.kv("variables", ideal.dim());
    r.kv("generators", ideal.generators().len());
    if ideal.is_zero() {
        r.line("zero ideal: ord0, arn, lct, multiplicity and colength are undefined");
        return Ok(r);
    }
    r.kv("ord0", show(&ideal.order()?));
    r.kv("arn", show(&ideal.arn()?));
    match ideal.lct()? {
        Some(c) => r.kv("lct", show(&c)),
        None => r.kv("lct", "inf"),
    }
    match ideal.multiplicity() {
        Ok(e) => r.kv("multiplicity", show(&e)),
        Err(Error::NotCofinite) => r.kv("multiplicity", "not-cofinite"),
        Err(e) => return Err(e.into()),
    }
    match ideal.colength() {
        Ok(c) => r.kv("colength", c),
        Err(Error::NotCofinite) => r.kv("colength", "not-cofinite"),
        Err(e) => return Err(e.into()),
    }
    r.line("newton polyhedron:");
    describe_polyhedron(&mut r, &ideal.newton_polyhedron()?);
    let mut t = Table::new("generators", &(1..=ideal.dim()).map(|i| format!("e{i}")).collect::<Vec<_>>().iter().map(String::as_str).collect::<Vec<_>>());
    for g in ideal.generators() {
        t.push(g.entries().iter().map(|e| e.to_string()).collect());
    }
    r.tables.push(t);
    Ok(r)
}

fn check_direction(sys: &SystemExpr, v: &[i64]) -> Result<()> {
    if v.len() != sys.rank() {
        bail!("direction has {} entries but the system has rank {}", v.len(), sys.rank());
    }
    Ok(())
}

fn system_header(r: &mut Report, sys: &SystemExpr) {
    r.kv("rank", sys.rank());
    r.kv("variables", sys.dim());
}

pub fn system(cmd: &SystemCommand) -> Result<Report> {
    match cmd {
        SystemCommand::Eval { path, direction } => {
            let sys = load_system(path)?;
            check_direction(&sys, direction)?;
            let ideal = sys.eval(direction)?;
            let mut r = Report::new();
            system_header(&mut r, &sys);
            r.kv("index", show_index(direction));
            r.kv("ideal", &ideal);
            r.kv("generators", ideal.generators().len());
            let status = if ideal.is_zero() {
                "zero"
            } else if ideal.is_unit() {
                "unit"
            } else {
                "proper"
            };
            r.kv("status", status);
            let names: Vec<String> = (1..=sys.dim()).map(|i| format!("e{i}")).collect();
            let mut t = Table::new("generators", &names.iter().map(String::as_str).collect::<Vec<_>>());
            for g in ideal.generators() {
                t.push(g.entries().iter().map(|e| e.to_string()).collect());
            }
            r.tables.push(t);
            Ok(r)
        }
        SystemCommand::Invariants { path, direction, method, schedule, max } => {
            let sys = load_system(path)?;
            check_direction(&sys, direction)?;
            invariants_report(&sys, direction, *method, *schedule, *max)
        }
        SystemCommand::Cones { path, radius, expected } => {
            let sys = load_system(path)?;
            let expected = expected.as_deref().map(load_cone).transpose()?;
            cones_report(&sys, *radius, expected.as_ref())
        }
        SystemCommand::Verify { path, radius, window } => {
            let sys = load_system(path)?;
            let window = match (radius, window) {
                (_, Some(w)) => w.clone(),
                (Some(rad), None) => symmetric_window(sys.rank(), *rad),
                (None, None) => symmetric_window(sys.rank(), 2),
            };
            if window.len() != sys.rank() {
                bail!("window has {} ranges but the system has rank {}", window.len(), sys.rank());
            }
            let rep = sys.verify_gradedness(&window)?;
            let mut r = Report::new();
            system_header(&mut r, &sys);
            let ranges: Vec<String> = window.iter().map(|(a, b)| format!("{a}:{b}")).collect();
            r.kv("window", ranges.join(","));
            r.kv("pairs checked", rep.checked);
            r.kv("violations", rep.violations.len());
            let mut t = Table::new("violations", &["v", "w"]);
            for (v, w) in &rep.violations {
                r.line(format!("  violation {} + {}", show_index(v), show_index(w)));
                t.push(vec![show_index(v).replace(", ", " "), show_index(w).replace(", ", " ")]);
            }
            r.tables.push(t);
            r.check("gradedness", rep.holds());
            Ok(r)
        }
    }
}

fn schedule_of(kind: ScheduleKind, max: Option<u32>) -> Schedule {
    match kind {
        ScheduleKind::Factorial => Schedule::Factorial(max.unwrap_or(5)),
        ScheduleKind::Doubling => Schedule::Doubling(max.unwrap_or(8)),
    }
}

fn invariants_report(
    sys: &SystemExpr,
    v: &[i64],
    method: Method,
    kind: ScheduleKind,
    max: Option<u32>,
) -> Result<Report> {
    let mut r = Report::new();
    system_header(&mut r, sys);
    r.kv("direction", show_index(v));
    let schedule = schedule_of(kind, max);
    r.kv("schedule", format!("{schedule:?}").to_lowercase());
    let mut table = Table::new("samples", &["quantity", "n", "value", "value_decimal"]);

    let dir: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
    let geometric: Option<GeometricInvariants> = match sys.limit_body(&dir) {
        Ok(body) => {
            if method != Method::Sequence {
                r.line("limit body:");
                describe_polyhedron(&mut r, body.body());
            }
            Some(geometric_invariants(&body)?)
        }
        Err(Error::NotRegionExpressible(why)) => {
            r.kv("limit body", format!("unavailable ({why})"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    for q in QUANTITIES {
        r.line(format!("[{q}]"));
        let geo = geometric.as_ref().and_then(|g| g.get(q));
        if method != Method::Geometric {
            match sequence_invariant(sys, v, q, schedule) {
                Ok(b) => {
                    for s in &b.samples {
                        r.line(format!("  n={}: {}", s.n, show(&s.value)));
                        let [e, d] = rational_cells(&s.value);
                        table.push(vec![q.to_string(), s.n.to_string(), e, d]);
                    }
                    r.kv("  upper bound", show(b.upper()));
                    r.kv("  monotone", yes_no(b.monotone));
                    r.check(&format!("{q} monotone"), b.monotone);
                    if geo.is_some() {
                        r.kv("  certified", yes_no(b.certified));
                        r.check(&format!("{q} bracket"), b.certified);
                    }
                }
                Err(e @ (Error::NotCofinite | Error::ZeroIdealInDirection(_))) => {
                    r.kv("  samples", format!("unavailable ({e})"));
                }
                Err(e) => return Err(e.into()),
            }
        }
        if method != Method::Sequence {
            match geo {
                Some(g) => r.kv("  geometric", show(g)),
                None => r.kv("  geometric", "unavailable"),
            }
        }
    }
    r.tables.push(table);
    Ok(r)
}

fn describe_hull(r: &mut Report, label: &str, points: &[Vec<i64>], rank: usize) -> Result<()> {
    if rank > MAX_HULL_RANK {
        r.kv(&format!("{label} hull"), format!("not computed for rank {rank}"));
        return Ok(());
    }
    let hull = ray_hull_of_lattice_points(points, rank)?;
    if hull.is_full_space() {
        r.kv(&format!("{label} hull"), "full-space");
        return Ok(());
    }
    let rays: Vec<String> = hull.rays().iter().map(|v| show_vec(v)).collect();
    let facets: Vec<String> = hull.facets().iter().map(|v| show_vec(v)).collect();
    r.kv(&format!("{label} rays"), if rays.is_empty() { "none (origin only)".into() } else { rays.join(" ") });
    r.kv(&format!("{label} facet normals"), if facets.is_empty() { "none".into() } else { facets.join(" ") });
    Ok(())
}

fn show_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn cones_report(sys: &SystemExpr, radius: i64, expected: Option<&ConeRep>) -> Result<Report> {
    let nef = nef_points(sys, radius)?;
    let eff = eff_points(sys, radius)?;
    let mut r = Report::new();
    system_header(&mut r, sys);
    r.kv("radius", radius);
    r.kv("nef points", nef.len());
    r.kv("eff points", eff.len());
    describe_hull(&mut r, "nef", &nef, sys.rank())?;
    describe_hull(&mut r, "eff", &eff, sys.rank())?;
    if let Some(c) = expected {
        let cmp = lattice_compare(&nef, c, radius)?;
        r.kv("expected cone lattice points checked", cmp.checked);
        r.kv("expected cone disagreements", cmp.disagreements.len());
        r.check("nef lattice points match expected cone", cmp.agrees());
    }
    let mut names: Vec<String> = (1..=sys.rank()).map(|i| format!("v{i}")).collect();
    names.push("nef".into());
    names.push("eff".into());
    let mut t = Table::new("points", &names.iter().map(String::as_str).collect::<Vec<_>>());
    for v in &eff {
        let mut row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        row.push(u8::from(nef.binary_search(v).is_ok()).to_string());
        row.push("1".into());
        t.push(row);
    }
    r.tables.push(t);
    Ok(r)
}

pub fn repro(cmd: &ReproCommand) -> Result<Report> {
    match cmd {
        ReproCommand::Thm1 { cone, base, radius, max, directions } => {
            let cone = match cone {
                Some(p) => load_cone(p)?,
                None => ConeRep::l1_epigraph(2),
            };
            let base = base.as_deref().map(load_ideal).transpose()?;
            ceiling_report(cone, base, *radius, *max, *directions)
        }
        ReproCommand::Thm2 { kinks, grid, scan_r, scan, radius, truncate } => {
            let grid = match &grid.grid {
                Some(g) => {
                    let v: Vec<Rational> = g[..4].iter().map(|s| parse_rational_arg(s)).collect::<Result<_, _>>().map_err(anyhow::Error::msg)?;
                    let steps: usize = g[4].parse().with_context(|| format!("bad step count `{}`", g[4]))?;
                    (v, steps)
                }
                None => (vec![rat(3, 4), rat(3, 2), rat(3, 4), rat(3, 2)], 12),
            };
            let scan = match scan {
                Some(s) => (parse_rational_arg(&s[0]).map_err(anyhow::Error::msg)?, parse_rational_arg(&s[1]).map_err(anyhow::Error::msg)?),
                None => (rat(3, 4), int(2)),
            };
            kinked_report(*kinks, &grid.0, grid.1, scan_r, &scan, *radius, truncate.as_ref())
        }
        ReproCommand::Appendix { kinks, samples } => gauge_report(*kinks, *samples),
    }
}

/// Integral directions spread evenly through `[-2, 2]^ρ`, origin excluded.
fn spread_directions(rank: usize, count: usize) -> Vec<Vec<i64>> {
    let all: Vec<Vec<i64>> = multigraded::cones::lattice_box(rank, 2)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    if count >= all.len() {
        return all;
    }
    (0..count).map(|i| all[i * (all.len() - 1) / (count.max(2) - 1)].clone()).collect()
}

fn ceiling_report(cone: ConeRep, base: Option<MonomialIdeal>, radius: i64, max: u32, count: usize) -> Result<Report> {
    if !matches!(cone.kind(), ConeKind::Epigraph(_)) {
        bail!("the cone must be given by `form` lines (epigraph of a max of linear forms)");
    }
    let sys = SystemExpr::ceiling(cone.clone(), base)?;
    let base = match sys.node() {
        multigraded::graded_system::Node::Ceiling { base, .. } => base.clone(),
        _ => unreachable!("ceiling constructor builds a ceiling node"),
    };
    let mut r = Report::new();
    r.kv("cone rank", cone.rank());
    r.kv("base ideal", &base);
    r.kv("radius", radius);

    let nef = nef_points(&sys, radius)?;
    let cmp = lattice_compare(&nef, &cone, radius)?;
    r.kv("lattice points checked", cmp.checked);
    r.kv("nef points", nef.len());
    r.kv("lattice disagreements", cmp.disagreements.len());
    r.check("nef lattice points equal cone lattice points", cmp.agrees());
    describe_hull(&mut r, "nef", &nef, cone.rank())?;
    if cone.rank() <= MAX_HULL_RANK && !nef.is_empty() {
        let points: Vec<Vec<Rational>> = nef.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
        let est = ConeRep::rays(cone.rank(), &points)?;
        let sampled = cone_compare(&est, &cone, 200)?;
        r.kv("hull vs cone sampled directions", sampled.checked);
        r.kv("hull vs cone sampled disagreements", sampled.disagreements.len());
    }

    let schedule = Schedule::Factorial(max);
    let mut t = Table::new(
        "closed_forms",
        &["direction", "t", "quantity", "closed_form", "closed_form_decimal", "last_sample", "last_sample_decimal", "exact"],
    );
    let mut all_exact = true;
    let dirs = spread_directions(cone.rank(), count);
    r.kv("directions", dirs.len());
    for v in &dirs {
        let rv: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        let closed = ceiling_closed_forms(&cone, &rv, &base)?;
        let (x, y) = rv.split_at(rv.len() - 1);
        let t_val = (cone.epigraph_value(x)? - &y[0]).max(int(0));
        for q in QUANTITIES {
            let Some(target) = closed.get(q) else { continue };
            let b = sequence_invariant(&sys, v, q, schedule)?;
            let exact = b.samples.iter().all(|s| &s.value == target);
            all_exact &= exact;
            let [ce, cd] = rational_cells(target);
            let [se, sd] = rational_cells(b.upper());
            t.push(vec![show_index(v).replace(", ", " "), fmt_exact(&t_val), q.to_string(), ce, cd, se, sd, yes_no(exact).into()]);
            r.line(format!("  {} t={} {q}: closed {} samples {}", show_index(v), fmt_exact(&t_val), fmt_exact(target), if exact { "equal" } else { "DIFFER" }));
        }
    }
    r.check("closed forms equal every schedule sample", all_exact);
    r.tables.push(t);
    Ok(r)
}

fn kink_rows(r: &mut Report, rows: &[KinkRow], table: &mut Table) {
    for k in rows {
        r.line(format!("  s0={} left={} right={} gap={}", fmt_exact(&k.s0), fmt_exact(&k.left), fmt_exact(&k.right), fmt_exact(&k.gap)));
        let mut row = Vec::new();
        for v in [&k.s0, &k.left, &k.right, &k.gap] {
            row.extend(rational_cells(v));
        }
        table.push(row);
    }
}

fn kink_table_header(name: &str) -> Table {
    Table::new(name, &["s0", "s0_decimal", "left", "left_decimal", "right", "right_decimal", "gap", "gap_decimal"])
}

fn kinked_report(
    terms: usize,
    bounds: &[Rational],
    steps: usize,
    scan_r: &Rational,
    scan: &(Rational, Rational),
    radius: i64,
    truncate: Option<&Rational>,
) -> Result<Report> {
    let sys = SystemExpr::kinked_intersection(terms)?;
    let f = build_kinked_f(terms);
    let mut r = Report::new();
    r.kv("kinks", terms);
    let fx: Vec<String> = f.points().iter().map(|(x, y)| show_point(&[x.clone(), y.clone()])).collect();
    r.kv("f breakpoints", fx.join(" "));

    let rs = grid_axis(&bounds[0], &bounds[1], steps)?;
    let ss = grid_axis(&bounds[2], &bounds[3], steps)?;
    let cells = kinked_order_grid(&sys, &f, &rs, &ss)?;
    let mut grid = Table::new(
        "grid",
        &["r", "s", "ord0", "ord0_decimal", "crossing", "crossing_decimal", "formula", "formula_decimal", "agree"],
    );
    let mut agree = 0;
    for c in &cells {
        agree += usize::from(c.agrees());
        let mut row = vec![fmt_exact(&c.r), fmt_exact(&c.s)];
        row.extend(rational_cells(&c.vertex_route));
        row.extend(optional_cells(c.crossing.as_ref()));
        row.extend(optional_cells(c.formula_route.as_ref()));
        row.push(yes_no(c.agrees()).into());
        grid.push(row);
    }
    r.kv("grid", format!("r in [{}, {}], s in [{}, {}], {} steps", fmt_exact(&bounds[0]), fmt_exact(&bounds[1]), fmt_exact(&bounds[2]), fmt_exact(&bounds[3]), steps));
    r.kv("grid cells", cells.len());
    r.kv("cells where vertex and crossing routes agree", agree);
    r.check("ord0 routes agree on the grid", agree == cells.len());

    r.kv("kink scan", format!("r = {}, s in [{}, {}]", fmt_exact(scan_r), fmt_exact(&scan.0), fmt_exact(&scan.1)));
    let rows = order_kink_table(&sys, scan_r, &scan.0, &scan.1)?;
    r.kv("kinks found", rows.len());
    let mut kinks = kink_table_header("kinks");
    kink_rows(&mut r, &rows, &mut kinks);
    r.check("every kink has a nonzero slope gap", rows.iter().all(|k| k.gap != int(0)));

    let nef = nef_points(&sys, radius)?;
    let quadrant = ConeRep::halfspaces(2, &[vec![int(-1), int(0)], vec![int(0), int(-1)]])?;
    let cmp = lattice_compare(&nef, &quadrant, radius)?;
    r.kv("nef radius", radius);
    r.kv("nef points", nef.len());
    r.kv("nef disagreements with the third quadrant", cmp.disagreements.len());
    r.check("nef lattice points form the third quadrant", cmp.agrees());

    let mut tables = vec![grid, kinks];
    if let Some(eps) = truncate {
        let normal = vec![-eps.clone(), int(1)];
        let s_cone = ConeRep::halfspaces(2, &[normal])?;
        let tsys = SystemExpr::truncate(sys.clone(), s_cone.clone())?;
        r.kv("truncation", format!("s >= {} r", fmt_exact(eps)));
        let trows = order_kink_table(&tsys, scan_r, &scan.0, &scan.1)?;
        let mut tk = kink_table_header("truncated_kinks");
        kink_rows(&mut r, &trows, &mut tk);
        r.check("truncated kink table equals the original", trows == rows);
        let eff = eff_points(&tsys, radius)?;
        let outside = eff.iter().filter(|v| !s_cone.contains_lattice(v).unwrap_or(false)).count();
        r.kv("truncated eff points", eff.len());
        r.kv("truncated eff points outside S", outside);
        r.check("truncated eff points lie in S", outside == 0);
        tables.push(tk);
    }
    r.tables = tables;
    Ok(r)
}

fn gauge_report(terms: usize, samples: usize) -> Result<Report> {
    let body = SymmetricBody::dense_kinks(terms)?;
    let mut r = Report::new();
    r.kv("kinks", terms);
    let pts: Vec<String> = body.boundary().points().iter().map(|(x, y)| show_point(&[x.clone(), y.clone()])).collect();
    r.kv("boundary", pts.join(" "));
    let e1 = body.gauge(&[int(1), int(0)])?;
    let e2 = body.gauge(&[int(0), int(1)])?;
    r.kv("gauge (1, 0)", show(&e1));
    r.kv("gauge (0, 1)", show(&e2));
    let total: Rational = (1..=terms).map(|i| rat(1, 1i64 << i)).sum();
    r.check("gauge on the axes", e1 == int(1) && e2 == total.recip());
    let checks = gauge_spot_checks(&body, samples)?;
    r.kv("homogeneity checks passed", format!("{} of {}", checks.homogeneous, checks.samples));
    r.kv("midpoint convexity checks passed", format!("{} of {}", checks.midpoint_convex, checks.samples));
    r.check("gauge homogeneous and convex on samples", checks.homogeneous == samples && checks.midpoint_convex == samples);
    let rows = gauge_kink_table(&body)?;
    r.kv("kink rays", rows.len());
    let mut t = Table::new(
        "kink_rays",
        &["x", "y", "t0", "left", "left_decimal", "right", "right_decimal", "gap", "gap_decimal"],
    );
    for k in &rows {
        r.line(format!(
            "  ray {} t0={} left={} right={} gap={}",
            show_point(&k.point),
            fmt_exact(&k.row.s0),
            fmt_exact(&k.row.left),
            fmt_exact(&k.row.right),
            fmt_exact(&k.row.gap)
        ));
        let mut row = vec![fmt_exact(&k.point[0]), fmt_exact(&k.point[1]), fmt_exact(&k.row.s0)];
        for v in [&k.row.left, &k.row.right, &k.row.gap] {
            row.extend(rational_cells(v));
        }
        t.push(row);
    }
    r.check("one kink ray per term", rows.len() == terms);
    r.check("every kink ray has a nonzero slope gap", rows.iter().all(|k| k.row.gap != int(0)));
    r.tables.push(t);
    Ok(r)
}
