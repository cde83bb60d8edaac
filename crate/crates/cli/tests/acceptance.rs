//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or overruns its time budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use multigraded::cones::{eff_points, lattice_compare, nef_points, ConeRep};
use multigraded::graded_system::SystemExpr;
use multigraded::invariants::{
    clearing_denominator, colength_oracle, gauge_kink_table, gauge_spot_checks, geometric_invariants, grid_axis,
    kinked_order_grid, limit_membership, order_kink_table, sequence_invariant, subadditivity, KinkRow, Quantity,
    Schedule,
};
use multigraded::newton_geometry::Halfspace;
use multigraded::rational::{fmt_exact, int, rat, Rational};
use multigraded::regions::{build_kinked_f, epigraph_region, Region, SymmetricBody};
use multigraded::{ExponentVector, MonomialIdeal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Vec<String>, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect()
}

fn ideal(rows: &[&[u64]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(2, rows).unwrap()
}

/// Signed area of a polygon.
fn shoelace(poly: &[(Rational, Rational)]) -> Rational {
    let n = poly.len();
    let twice: Rational = (0..n)
        .map(|i| {
            let (x0, y0) = &poly[i];
            let (x1, y1) = &poly[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    twice / int(2)
}

fn single_ideal() -> Outcome {
    let a = ideal(&[&[2, 0], &[0, 3]]);
    let (ord0, arn, mult) = (a.order().map_err(e)?, a.arn().map_err(e)?, a.multiplicity().map_err(e)?);
    ensure(ord0 == int(2), format!("ord0 {}", fmt_exact(&ord0)))?;
    ensure(arn == rat(6, 5), format!("arn {}", fmt_exact(&arn)))?;
    ensure(mult == int(6), format!("mult {}", fmt_exact(&mult)))?;
    let sys = SystemExpr::ideal_powers(vec![a]).map_err(e)?;
    let oracle = colength_oracle(&sys, &[1], 16).map_err(e)?;
    let lo = &mult * rat(85, 100);
    let hi = &mult * rat(115, 100);
    ensure(lo <= oracle && oracle <= hi, format!("oracle {} outside 15%", fmt_exact(&oracle)))?;
    Ok(vec![
        "ord0 2, arn 6/5, mult 6".into(),
        format!("2!·colength(a^16)/16^2 = {}", fmt_exact(&oracle)),
    ])
}

fn two_facet_region() -> Region {
    Region::from_halfspaces(
        2,
        &[Halfspace::new(vec![int(1), int(2)], int(2)), Halfspace::new(vec![int(2), int(1)], int(2))],
    )
    .unwrap()
}

fn sequence_vs_geometry() -> Outcome {
    // Hand derivation: x + 2y = 2 and 2x + y = 2 meet at (2/3, 2/3); the complement
    // is the quadrilateral (0,0), (2,0), (2/3,2/3), (0,2).
    let vertex = (rat(2, 3), rat(2, 3));
    let complement = [(int(0), int(0)), (int(2), int(0)), vertex.clone(), (int(0), int(2))];
    let area = shoelace(&complement);
    let expected_ord0 = &vertex.0 + &vertex.1;
    let expected_arn = vertex.0.clone();
    let expected_mult = int(2) * &area;
    ensure(
        expected_ord0 == rat(4, 3) && expected_arn == rat(2, 3) && expected_mult == rat(8, 3),
        "hand derivation",
    )?;

    let region = two_facet_region();
    let geo = geometric_invariants(&region).map_err(e)?;
    let sys = SystemExpr::region(region);
    let mut lines = Vec::new();
    for (q, want) in [(Quantity::Ord0, &expected_ord0), (Quantity::Arn, &expected_arn), (Quantity::Mult, &expected_mult)] {
        let g = geo.get(q).ok_or(format!("{q} unavailable"))?;
        ensure(g == want, format!("geometric {q} = {}", fmt_exact(g)))?;
        let b = sequence_invariant(&sys, &[1], q, Schedule::Factorial(6)).map_err(e)?;
        ensure(b.monotone, format!("{q} samples not monotone"))?;
        for s in &b.samples {
            if s.n % 3 == 0 {
                ensure(&s.value == want, format!("{q} at n={} is {}", s.n, fmt_exact(&s.value)))?;
            }
        }
        let shown: Vec<String> = b.samples.iter().map(|s| format!("{}:{}", s.n, fmt_exact(&s.value))).collect();
        lines.push(format!("{q} geometric {} samples {}", fmt_exact(g), shown.join(" ")));
    }
    Ok(lines)
}

fn random_ideal(rng: &mut ChaCha8Rng) -> MonomialIdeal {
    let mut gens = vec![
        ExponentVector::new(vec![rng.gen_range(1..=6), 0]).unwrap(),
        ExponentVector::new(vec![0, rng.gen_range(1..=6)]).unwrap(),
    ];
    for _ in 0..rng.gen_range(0..=3) {
        gens.push(ExponentVector::new(vec![rng.gen_range(0..=6), rng.gen_range(0..=6)]).unwrap());
    }
    MonomialIdeal::new(gens, 2).unwrap()
}

fn ideal_sum(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    let gens: Vec<ExponentVector> = a.generators().iter().chain(b.generators()).cloned().collect();
    MonomialIdeal::new(gens, 2).unwrap()
}

fn subadditive_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut mult_checks = 0;
    for i in 0..200 {
        let a = random_ideal(&mut rng);
        let b = random_ideal(&mut rng);
        let ab = a.product(&b).map_err(e)?;
        for (label, sum) in [("a·b", ab), ("a+b", ideal_sum(&a, &b))] {
            let c = subadditivity(&sum, &a, &b).map_err(e)?;
            ensure(c.holds(), format!("pair {i} ({label}) a={a} b={b}: {c:?}"))?;
            mult_checks += usize::from(c.mult.is_some());
        }
    }
    Ok(vec![format!("200 pairs, 400 ideal comparisons, {mult_checks} exact squared multiplicity checks")])
}

fn region_round_trip() -> Outcome {
    let f = build_kinked_f(2);
    let region = epigraph_region(&f).map_err(e)?;
    let sys = SystemExpr::region(region.clone());
    let report = sys.verify_gradedness(&[(0, 10)]).map_err(e)?;
    ensure(report.holds(), format!("{} gradedness violations", report.violations.len()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let denoms = [2i64, 3, 4, 5, 6, 8];
    let mut interior = 0;
    let mut max_n = 0;
    while interior < 25 {
        let d = denoms[rng.gen_range(0..denoms.len())];
        let x = rat(rng.gen_range(0..=(3 * d / 2)), d);
        let fx = f.eval(&x).map_err(e)?;
        let y = (fx * int(d)).ceil() / int(d) + rat(rng.gen_range(1..=d), d);
        let p = vec![x, y];
        ensure(region.contains_point(&p).map_err(e)?, "sample not interior")?;
        let n = clearing_denominator(&p);
        max_n = max_n.max(n);
        ensure(
            limit_membership(&sys, &[1], &p, n).map_err(e)?,
            format!("interior point ({}, {}) missing at n={n}", fmt_exact(&p[0]), fmt_exact(&p[1])),
        )?;
        interior += 1;
    }
    let mut exterior = 0;
    while exterior < 25 {
        let d = denoms[rng.gen_range(0..denoms.len())];
        let x = rat(rng.gen_range(0..d), d);
        let fx = f.eval(&x).map_err(e)?;
        let y = fx - rat(rng.gen_range(1..=d), 2 * d);
        if y < int(0) {
            continue;
        }
        let p = vec![x, y];
        ensure(!region.contains_point(&p).map_err(e)?, "sample not exterior")?;
        for n in 1..=60 {
            ensure(
                !limit_membership(&sys, &[1], &p, n).map_err(e)?,
                format!("exterior point ({}, {}) reached at n={n}", fmt_exact(&p[0]), fmt_exact(&p[1])),
            )?;
        }
        exterior += 1;
    }
    Ok(vec![
        format!("gradedness [0,10]: {} pairs, 0 violations", report.checked),
        format!("25 interior points reached at the clearing denominator (largest n = {max_n})"),
        "25 exterior points never reached for n <= 60".into(),
    ])
}

fn ceiling_cone() -> Outcome {
    let cone = ConeRep::l1_epigraph(2);
    let sys = SystemExpr::ceiling(cone.clone(), None).map_err(e)?;
    let nef = nef_points(&sys, 5).map_err(e)?;
    let cmp = lattice_compare(&nef, &cone, 5).map_err(e)?;
    ensure(cmp.checked == 1331, format!("checked {} points", cmp.checked))?;
    ensure(cmp.agrees(), format!("{} lattice disagreements", cmp.disagreements.len()))?;

    let mut dirs = Vec::new();
    'outer: for c in [-1i64, 0, 1, 2] {
        for a in -2i64..=2 {
            for b in [-1i64, 1] {
                dirs.push(vec![a, b, c]);
                if dirs.len() == 20 {
                    break 'outer;
                }
            }
        }
    }
    for v in &dirs {
        let t = (v[0].abs() + v[1].abs() - v[2]).max(0);
        let closed = [(Quantity::Ord0, int(t)), (Quantity::Arn, rat(t, 2)), (Quantity::Mult, int(t * t))];
        for (q, want) in closed {
            let b = sequence_invariant(&sys, v, q, Schedule::Factorial(4)).map_err(e)?;
            for s in &b.samples {
                ensure(s.value == want, format!("{q} at {v:?}, n={}: {} vs {}", s.n, fmt_exact(&s.value), fmt_exact(&want)))?;
            }
        }
    }
    Ok(vec![
        format!("nef lattice points {} of 1331, 0 disagreements", nef.len()),
        "closed forms (t, t/2, t^2) exact at 20 directions, n = 1, 2, 6, 24".into(),
    ])
}

fn kink_rows_text(rows: &[KinkRow]) -> Vec<String> {
    rows.iter()
        .map(|k| {
            format!(
                "kink s0={} left={} right={} gap={}",
                fmt_exact(&k.s0),
                fmt_exact(&k.left),
                fmt_exact(&k.right),
                fmt_exact(&k.gap)
            )
        })
        .collect()
}

fn third_quadrant() -> ConeRep {
    ConeRep::halfspaces(2, &[vec![int(-1), int(0)], vec![int(0), int(-1)]]).unwrap()
}

fn kinked_intersection() -> Outcome {
    let sys = SystemExpr::kinked_intersection(1).map_err(e)?;
    let f = build_kinked_f(1);
    let axis = grid_axis(&rat(3, 4), &rat(3, 2), 12).map_err(e)?;
    ensure(&axis[1] - &axis[0] == rat(1, 16), "grid step")?;
    let cells = kinked_order_grid(&sys, &f, &axis, &axis).map_err(e)?;
    ensure(cells.len() == 169, "grid size")?;
    for c in &cells {
        ensure(c.agrees(), format!("routes differ at r={}, s={}", fmt_exact(&c.r), fmt_exact(&c.s)))?;
    }

    // Hand derivation at r = 1, f = 33/16 − 17x/8 on [0, 1/2] and 2 − 2x on [1/2, 1].
    // Crossing with s − x/2: on the second piece x = 2(2 − s)/3, ord0 = s + (2 − s)/3,
    // slope 2/3; on the first x = 8(33/16 − s)/13, ord0 = s + 4(33/16 − s)/13, slope 9/13.
    // The pieces switch at x = 1/2, s = f(1/2) + 1/4 = 5/4. ord0 is convex in s.
    let (left, right) = (int(1) - rat(1, 3), int(1) - rat(4, 13));
    let gap = &right - &left;
    ensure(gap == rat(1, 39), "hand derivation")?;
    let rows = order_kink_table(&sys, &int(1), &rat(9, 8), &rat(11, 8)).map_err(e)?;
    ensure(rows.len() == 1, format!("{} kinks in [9/8, 11/8]", rows.len()))?;
    let k = &rows[0];
    ensure(
        k.s0 == rat(5, 4) && k.left == left && k.right == right && k.gap == gap,
        kink_rows_text(&rows).join("; "),
    )?;

    let nef = nef_points(&sys, 6).map_err(e)?;
    let cmp = lattice_compare(&nef, &third_quadrant(), 6).map_err(e)?;
    ensure(cmp.agrees(), format!("{} nef disagreements", cmp.disagreements.len()))?;

    let sys4 = SystemExpr::kinked_intersection(4).map_err(e)?;
    let rows4 = order_kink_table(&sys4, &int(1), &rat(3, 4), &int(2)).map_err(e)?;
    let mut s0s: Vec<&Rational> = rows4.iter().map(|k| &k.s0).collect();
    s0s.dedup();
    ensure(s0s.len() >= 4, format!("N=4 found {} kinks", s0s.len()))?;
    ensure(rows4.iter().all(|k| k.gap != int(0)), "zero gap for N=4")?;

    let mut lines = vec![
        "169 grid cells: vertex route = s + x/2 formula".into(),
        format!("r=1: {} (right minus left)", kink_rows_text(&rows)[0]),
        format!("nef within radius 6 = third quadrant ({} points)", nef.len()),
        format!("N=4: {} kinks", rows4.len()),
    ];
    lines.extend(kink_rows_text(&rows4).into_iter().map(|s| format!("  {s}")));
    Ok(lines)
}

fn truncation() -> Outcome {
    let sys = SystemExpr::kinked_intersection(1).map_err(e)?;
    let s_cone = ConeRep::halfspaces(2, &[vec![rat(-1, 8), int(1)]]).map_err(e)?;
    let truncated = SystemExpr::truncate(sys.clone(), s_cone.clone()).map_err(e)?;
    let before = order_kink_table(&sys, &int(1), &rat(3, 4), &int(2)).map_err(e)?;
    let after = order_kink_table(&truncated, &int(1), &rat(3, 4), &int(2)).map_err(e)?;
    ensure(before == after, "kink table changed under truncation")?;
    let eff = eff_points(&truncated, 8).map_err(e)?;
    for v in &eff {
        ensure(s_cone.contains_lattice(v).map_err(e)?, format!("eff point {v:?} outside S"))?;
    }
    Ok(vec![
        format!("r=1 kink table unchanged ({} rows)", after.len()),
        format!("{} eff points within radius 8, all with s >= r/8", eff.len()),
    ])
}

fn dense_kink_gauge() -> Outcome {
    let body = SymmetricBody::dense_kinks(1).map_err(e)?;
    ensure(body.gauge(&[int(1), int(0)]).map_err(e)? == int(1), "gauge (1,0)")?;
    ensure(body.gauge(&[int(0), int(1)]).map_err(e)? == int(2), "gauge (0,1)")?;
    let checks = gauge_spot_checks(&body, 50).map_err(e)?;
    ensure(checks.homogeneous == 50 && checks.midpoint_convex == 50, format!("{checks:?}"))?;
    // Hand derivation: the body is {|y| ≤ 1/2, |x| + |y| ≤ 1}, so for t ≥ 0
    // gauge((1, t)) = max(1 + t, 2t), kinked at t = 1 with slopes 1 and 2.
    let rows = gauge_kink_table(&body).map_err(e)?;
    ensure(rows.len() == 1, "one kink ray")?;
    let k = &rows[0];
    ensure(
        k.point == vec![rat(1, 2), rat(1, 2)] && k.row.left == int(1) && k.row.right == int(2) && k.row.gap == int(1),
        format!("{k:?}"),
    )?;
    let body5 = SymmetricBody::dense_kinks(5).map_err(e)?;
    let rows5 = gauge_kink_table(&body5).map_err(e)?;
    ensure(rows5.len() == 5, format!("N=5 has {} kink rays", rows5.len()))?;
    ensure(rows5.iter().all(|k| k.row.gap != int(0)), "zero gap for N=5")?;
    Ok(vec![
        "gauge(1,0) = 1, gauge(0,1) = 2; 50/50 homogeneity, 50/50 midpoint convexity".into(),
        "kink ray (1/2, 1/2): slopes 1 -> 2, gap 1".into(),
        format!("N=5: 5 kink rays, gaps {}", rows5.iter().map(|k| fmt_exact(&k.row.gap)).collect::<Vec<_>>().join(", ")),
    ])
}

fn run_capture(args: &[String], out: &Path) -> Result<Vec<u8>, String> {
    let mut full = args.to_vec();
    full.push("--out".into());
    full.push(out.join("table.csv").display().to_string());
    let o = Command::new(env!("CARGO_BIN_EXE_multigraded")).args(&full).output().map_err(e)?;
    let mut bytes = o.stdout;
    bytes.extend(o.status.code().unwrap_or(-1).to_string().bytes());
    let mut files: Vec<PathBuf> = fs::read_dir(out).map_err(e)?.map(|d| d.unwrap().path()).collect();
    files.sort();
    for f in files {
        bytes.extend(f.file_name().unwrap().to_string_lossy().bytes());
        bytes.extend(fs::read(&f).map_err(e)?);
        fs::remove_file(&f).map_err(e)?;
    }
    Ok(bytes)
}

fn determinism() -> Outcome {
    let d = |n: &str| data(n).display().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["ideal".into(), "info".into(), d("x2y3.ideal")],
        vec!["system".into(), "invariants".into(), d("two_facets.system"), "--direction".into(), "1".into(), "--max".into(), "6".into()],
        vec!["system".into(), "eval".into(), d("kinked.system"), "--direction".into(), "2,2".into()],
        vec!["system".into(), "verify".into(), d("kinked2.system"), "--window".into(), "0:10".into()],
        vec!["system".into(), "cones".into(), d("kinked.system"), "--radius".into(), "6".into(), "--expected".into(), d("third_quadrant.cone")],
        vec!["repro".into(), "thm1".into()],
        vec!["repro".into(), "thm2".into()],
        vec!["repro".into(), "thm2".into(), "--kinks".into(), "4".into(), "--grid".into(), "1".into(), "1".into(), "1".into(), "1".into(), "1".into()],
        vec!["repro".into(), "thm2".into(), "--truncate".into(), "1/8".into(), "--radius".into(), "8".into()],
        vec!["repro".into(), "appendix".into()],
        vec!["repro".into(), "appendix".into(), "--kinks".into(), "5".into()],
    ];
    let dir = tempfile::tempdir().map_err(e)?;
    for args in &commands {
        let first = run_capture(args, dir.path())?;
        let mut single = vec!["--single-thread".to_string()];
        single.extend(args.iter().cloned());
        let second = run_capture(&single, dir.path())?;
        ensure(first == second, format!("output differs for `{}`", args.join(" ")))?;
    }
    Ok(vec![format!("{} commands byte-identical across two runs (default and single-thread), stdout and CSV", commands.len())])
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("single-ideal invariants and colength oracle", 1, single_ideal),
        ("sequence and geometric routes agree", 10, sequence_vs_geometry),
        ("subadditivity on 200 seeded pairs", 5, subadditive_pairs),
        ("region system round trip", 5, region_round_trip),
        ("ceiling system nef cone and closed forms", 10, ceiling_cone),
        ("kinked intersection grid, kink gap and nef cone", 30, kinked_intersection),
        ("truncation to one side of a line", 5, truncation),
        ("gauge with dense kinks", 5, dense_kink_gauge),
        ("determinism", 120, determinism),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, details) = match (&outcome, over) {
            (Ok(lines), false) => ("PASS", lines.clone()),
            (Ok(lines), true) => ("FAIL", [lines.clone(), vec![format!("over the {budget} s budget")]].concat()),
            (Err(msg), _) => ("FAIL", vec![msg.clone()]),
        };
        failures += usize::from(status == "FAIL");
        println!("criterion {}: {status} {name} ({:.2} s, budget {budget} s)", i + 1, elapsed.as_secs_f64());
        for d in details {
            println!("    {d}");
        }
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
