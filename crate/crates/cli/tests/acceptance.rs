//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hms_core::curvetop::{affine_curve, monodromy, Orientation};
use hms_core::fukaya::{weighted_p1_series, wheel_hom_series, wheel_vertex_twist};
use hms_core::hmscheck::check_affine;
use hms_core::ribbon::make_wheel;
use hms_core::series::{GradedSeries, Parity};
use hms_core::toricdata::group::sequence_data;
use hms_core::toricdata::{structure_group, NormalFormParams};
use serde_json::Value;

type Outcome = Result<String, String>;

fn fan_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fans").join(name)
}

fn hms(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hms"))
        .args(args)
        .env_remove("HMS_TRUNCATE")
        .output()
        .expect("run hms");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf8"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Brute-force kernel of `t -> (t1^r, t1^-s t2^m, t1 t2 t3)` on
/// `(1/rm)`-phases: exponent triples as reduced fractions.
fn kernel_oracle(r: u64, m: u64, s: u64) -> Vec<[(i64, i64); 3]> {
    let n = (r * m) as i64;
    let (r, m, s) = (r as i64, m as i64, s as i64);
    let reduce = |a: i64| {
        let a = a.rem_euclid(n);
        let g = num_gcd(a, n);
        (a / g, n / g)
    };
    let mut out = Vec::new();
    for a1 in 0..n {
        for a2 in 0..n {
            if (r * a1) % n == 0 && (m * a2 - s * a1).rem_euclid(n) == 0 {
                out.push([reduce(a1), reduce(a2), reduce(-a1 - a2)]);
            }
        }
    }
    out
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        num_gcd(b, a % b)
    }
}

fn params_up_to(bound: u64) -> Vec<NormalFormParams> {
    NormalFormParams::enumerate(bound).collect()
}

fn criterion_group_law() -> Outcome {
    let all = params_up_to(8);
    for &p in &all {
        let g = structure_group(p);
        let oracle = kernel_oracle(p.r, p.m, p.s);
        ensure(g.order() == p.r * p.m && oracle.len() as u64 == g.order(), || format!("{p}: order"))?;
        let ours: BTreeSet<[(i64, i64); 3]> = g
            .elements
            .iter()
            .map(|e| e.exponents.map(|x| (x.numer(), x.denom())))
            .collect();
        ensure(ours == oracle.iter().copied().collect(), || format!("{p}: element sets differ"))?;
        let product = g.mul(&g.mul(&g.rho[0], &g.rho[1]), &g.rho[2]);
        ensure(g.is_trivial(&product), || format!("{p}: rho1 rho2 rho3 != 1"))?;
        for (i, &(mi, ri)) in sequence_data(p).iter().enumerate() {
            let fixed = oracle.iter().filter(|x| x[i].0 == 0).count() as u64;
            let values: BTreeSet<_> = oracle.iter().map(|x| x[i]).collect();
            ensure((mi, ri) == (fixed, values.len() as u64) && mi * ri == p.r * p.m, || {
                format!("{p}: (m{0}, r{0}) = {1:?}, oracle ({fixed}, {2})", i + 1, (mi, ri), values.len())
            })?;
        }
    }
    Ok(format!("{} parameter triples", all.len()))
}

/// Interior and boundary lattice points of a triangle by scanning its box.
fn lattice_counts(v: [(i64, i64); 3]) -> (u64, u64) {
    let cross = |a: (i64, i64), b: (i64, i64), p: (i64, i64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let (xs, ys): (Vec<i64>, Vec<i64>) = v.iter().copied().unzip();
    let (mut interior, mut boundary) = (0, 0);
    for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
        for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
            let c: Vec<i64> = (0..3).map(|k| cross(v[k], v[(k + 1) % 3], (x, y))).collect();
            let inside = c.iter().all(|&z| z >= 0) || c.iter().all(|&z| z <= 0);
            if inside && c.contains(&0) {
                boundary += 1;
            } else if inside {
                interior += 1;
            }
        }
    }
    (interior, boundary)
}

fn criterion_hurwitz_pick() -> Outcome {
    let all = params_up_to(8);
    for &p in &all {
        let curve = affine_curve(p);
        let (r, m, s) = (p.r as i64, p.m as i64, p.s as i64);
        let (i, b) = lattice_counts([(r, -s), (0, m), (0, 0)]);
        ensure((curve.genus, curve.total_punctures()) == (i, b), || {
            format!("{p}: hurwitz {:?}, lattice ({i}, {b})", (curve.genus, curve.total_punctures()))
        })?;
    }
    Ok(format!("{} parameter triples", all.len()))
}

fn residue_series(n: usize, from: usize, to: usize, truncation: u32) -> GradedSeries {
    let mut s = GradedSeries::zero(truncation);
    for e in 0..=truncation as i64 {
        if (e as usize + from) % n == to % n {
            s.add(Parity::Even, e, 1);
        }
    }
    s
}

fn brute_weighted(p: i64, q: i64, a: (i64, i64), b: (i64, i64), truncation: u32) -> GradedSeries {
    let (da, db) = (b.0 - a.0, b.1 - a.1);
    let mut s = GradedSeries::zero(truncation);
    let n = truncation as i64;
    for i in 0..=n {
        for j in 0..=n - i {
            let (x, y) = (i - da, j - db);
            if x % p == 0 && y == -(x / p) * q {
                s.add(Parity::Even, i + j, 1);
            }
        }
    }
    s
}

fn criterion_wheels() -> Outcome {
    let mut compared = 0;
    for n in 1..=8 {
        let w = make_wheel(n, 0, None);
        for from in 0..n {
            for to in 0..n {
                let ours = wheel_hom_series(&w, to, from, 40).map_err(|e| e.to_string())?;
                ensure(ours.agrees_with(&residue_series(n, from, to, 40)), || {
                    format!("Γ({n},0) {from}->{to}")
                })?;
                compared += 1;
            }
        }
    }
    for p in 1..=5 {
        for q in 1..=5 {
            let w = make_wheel(p, q, None);
            for from in 0..p + q {
                for to in 0..p + q {
                    let ours = wheel_hom_series(&w, to, from, 30).map_err(|e| e.to_string())?;
                    let expected = weighted_p1_series(
                        p as u64,
                        q as u64,
                        wheel_vertex_twist(p, q, from),
                        wheel_vertex_twist(p, q, to),
                        30,
                    );
                    ensure(ours.agrees_with(&expected), || format!("Γ({p},{q}) {from}->{to}"))?;
                    compared += 1;
                }
            }
            for a0 in -10..=10 {
                for b0 in -10..=10 {
                    let (a, b) = ((0, 0), (a0, b0));
                    let ours = weighted_p1_series(p as u64, q as u64, a, b, 30);
                    ensure(ours.agrees_with(&brute_weighted(p as i64, q as i64, a, b, 30)), || {
                        format!("L({p},{q}) twist {b:?}")
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} series"))
}

fn criterion_affine() -> Outcome {
    let all: Vec<NormalFormParams> = NormalFormParams::enumerate_by_order(12).collect();
    let mut pairs = 0;
    for &p in &all {
        let checks = check_affine(p, 30);
        if let Some(bad) = checks.iter().find(|c| !c.passed()) {
            return Err(format!("{}: {:?}", bad.name, bad.counterexample));
        }
        pairs += 4 * p.r * p.m * p.r * p.m;
    }
    Ok(format!("{} cones, {pairs} generator pairs, N=30", all.len()))
}

fn criterion_monodromy() -> Outcome {
    let all = params_up_to(8);
    let mut conventions = BTreeSet::new();
    for &p in &all {
        let g = structure_group(p);
        let md = monodromy(&g);
        ensure(md.generates() && md.transport_is_isomorphism(&g), || format!("{p}: deck group"))?;
        let o = md.orientation(&g).ok_or_else(|| format!("{p}: sigma not a coordinate character"))?;
        conventions.insert(o);
        let oracle = kernel_oracle(p.r, p.m, p.s);
        for (orbits, i) in [(&md.x_orbits, 0), (&md.y_orbits, 1)] {
            let fixed = oracle.iter().filter(|x| x[i].0 == 0).count();
            let size = oracle.len() / fixed;
            ensure(orbits.len() == fixed && orbits.iter().all(|o| o.len() == size), || {
                format!("{p}: orbits of side {} are not {fixed} of size {size}", i + 1)
            })?;
        }
    }
    ensure(conventions == BTreeSet::from([(Orientation::Direct, Orientation::Direct)]), || {
        format!("conventions {conventions:?}")
    })?;
    Ok(format!("{} parameter triples, sigma_X = rho1, sigma_Y = rho2", all.len()))
}

/// `(interior, boundary)` points of a fan's polygon, from its triangles.
fn fan_lattice_counts(doc: &Value) -> (u64, u64) {
    let pts: Vec<(i64, i64)> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_i64().unwrap(), p[1].as_i64().unwrap()))
        .collect();
    let tris: Vec<[usize; 3]> = doc["triangles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| [0, 1, 2].map(|k| t[k].as_u64().unwrap() as usize))
        .collect();
    // Boundary edges bound one triangle; their lattice points are on the boundary.
    let mut edge_count = std::collections::BTreeMap::new();
    for t in &tris {
        for k in 0..3 {
            let (a, b) = (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]));
            *edge_count.entry((a, b)).or_insert(0) += 1;
        }
    }
    let mut boundary = BTreeSet::new();
    for (&(a, b), &c) in &edge_count {
        if c == 1 {
            let (p, q) = (pts[a], pts[b]);
            let g = num_gcd(q.0 - p.0, q.1 - p.1);
            for k in 0..=g {
                boundary.insert((p.0 + k * (q.0 - p.0) / g, p.1 + k * (q.1 - p.1) / g));
            }
        }
    }
    let mut covered = BTreeSet::new();
    for t in &tris {
        let v = t.map(|i| pts[i]);
        let (xs, ys): (Vec<i64>, Vec<i64>) = v.iter().copied().unzip();
        for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
            for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
                let c: Vec<i64> = (0..3)
                    .map(|k| {
                        let (a, b) = (v[k], v[(k + 1) % 3]);
                        (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0)
                    })
                    .collect();
                if c.iter().all(|&z| z >= 0) || c.iter().all(|&z| z <= 0) {
                    covered.insert((x, y));
                }
            }
        }
    }
    ((covered.len() - boundary.len()) as u64, boundary.len() as u64)
}

fn run_check(name: &str) -> Result<Value, String> {
    let path = fan_path(name);
    let (code, out) = hms(&["check", path.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
    ensure(code == 0, || format!("{name}: exit {code}: {out}"))?;
    Ok(v)
}

fn criterion_global() -> Outcome {
    let mut lines = Vec::new();
    for (name, chi) in [
        ("smooth.json", -1),
        ("square_a.json", -2),
        ("square_b.json", -2),
        ("kp2_coarse.json", -3),
        ("kp2_fine.json", -3),
    ] {
        let report = run_check(name)?;
        let checks = report["checks"].as_array().unwrap();
        let failed: Vec<&Value> = checks.iter().filter(|c| c["status"] != "pass").collect();
        ensure(failed.is_empty(), || format!("{name}: {failed:?}"))?;
        for prefix in ["cone ", "descent", "glued skeleton", "triple overlaps"] {
            ensure(checks.iter().any(|c| c["name"].as_str().unwrap().starts_with(prefix)), || {
                format!("{name}: no {prefix} check")
            })?;
        }
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(fan_path(name)).unwrap()).unwrap();
        let (g, b) = fan_lattice_counts(&doc);
        let top = &report["topology"];
        let oracle = 2 - 2 * g as i64 - b as i64;
        ensure(top["chi"] == chi && oracle == chi && top["genus"] == g && top["punctures"] == b, || {
            format!("{name}: topology {top}, lattice (g={g}, b={b})")
        })?;
        lines.push(format!("{}:{chi}", name.trim_end_matches(".json")));
    }
    Ok(lines.join(" "))
}

fn criterion_crepant() -> Outcome {
    let mut lines = Vec::new();
    for (a, b, expected) in [
        ("square_a.json", "square_b.json", (0, 4, -2)),
        ("kp2_coarse.json", "kp2_fine.json", (1, 3, -3)),
        ("square_a.json", "square_a.json", (0, 4, -2)),
    ] {
        let (pa, pb) = (fan_path(a), fan_path(b));
        let (code, out) = hms(&["crepant", pa.to_str().unwrap(), pb.to_str().unwrap(), "--format", "json"]);
        ensure(code == 0, || format!("{a} vs {b}: exit {code}"))?;
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let top = &v["topology"];
        ensure(
            (top["genus"].as_u64(), top["punctures"].as_u64(), top["chi"].as_i64())
                == (Some(expected.0), Some(expected.1), Some(expected.2)),
            || format!("{a} vs {b}: {top}"),
        )?;
        lines.push(format!("(g,b,chi)={expected:?}"));
    }
    let (code, _) = hms(&[
        "crepant",
        fan_path("smooth.json").to_str().unwrap(),
        fan_path("square_a.json").to_str().unwrap(),
    ]);
    ensure(code == 2, || format!("different polygons gave exit {code}"))?;
    Ok(lines.join(" "))
}

fn criterion_determinism() -> Outcome {
    for name in ["kp2_fine.json", "square_a.json"] {
        let path = fan_path(name);
        let args = ["check", path.to_str().unwrap(), "--format", "json"];
        let (first, second) = (hms(&args), hms(&args));
        ensure(first == second && first.0 == 0, || format!("{name}: runs differ"))?;
    }
    Ok("byte-identical JSON".to_string())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("group law", criterion_group_law),
        ("hurwitz = pick", criterion_hurwitz_pick),
        ("wheel oracles", criterion_wheels),
        ("affine hom tables", criterion_affine),
        ("monodromy", criterion_monodromy),
        ("global suite", criterion_global),
        ("crepant pairs", criterion_crepant),
        ("determinism", criterion_determinism),
    ];
    // Written past the test harness capture so the lines always show.
    let mut stdout = std::io::stdout().lock();
    let mut failures = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("criterion {} {name}: PASS ({detail}; {secs:.2}s)", k + 1),
            Err(why) => format!("criterion {} {name}: FAIL ({why})", k + 1),
        };
        writeln!(stdout, "{line}").unwrap();
        if outcome.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
