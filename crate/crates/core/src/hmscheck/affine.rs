use rayon::prelude::*;
use serde_json::{json, Value};

use super::report::{CheckResult, HmsReport, Topology};
use crate::curvetop::{affine_curve, monodromy, pick_counts, Orientation};
use crate::fukaya::affine_hom_table;
use crate::mfside::{ext_affine, ext_mf, ExtQuery};
use crate::ribbon::affine_skeleton;
use crate::series::{Generator, GradedSeries, HomTable};
use crate::toricdata::group::sequence_data;
use crate::toricdata::{structure_group, NormalFormParams, StructureGroup};

/// The B-side generator matching an A-side one: `(1, θ) -> O_1(θ^-1)` and
/// `(2, θ) -> O_2(θ^-1 rho1)`.
pub fn b_side_generator(group: &StructureGroup, a: &Generator) -> Generator {
    let inv = group.inv(&a.label);
    let label = match a.side {
        1 => inv,
        2 => group.mul(&inv, &group.rho[0]),
        _ => panic!("generator side must be 1 or 2"),
    };
    Generator { side: a.side, label }
}

fn mismatch(a: &Generator, b: &Generator, left: &str, right: &str, l: &GradedSeries, r: &GradedSeries) -> Option<Value> {
    l.first_mismatch(r).map(|m| {
        json!({
            "source": a.to_string(),
            "target": b.to_string(),
            "compare": [left, right],
            "parity": m.parity,
            "weight": m.weight,
            "values": [m.left, m.right],
        })
    })
}

/// Entrywise comparison of the A-side table with both B-side computations.
/// Returns the number of generator pairs and the first disagreement.
pub fn compare_tables(group: &StructureGroup, a_table: &HomTable, truncation: u32) -> (usize, Option<Value>) {
    let pairs: Vec<(&(Generator, Generator), &GradedSeries)> = a_table.iter().collect();
    let witnesses: Vec<Option<Value>> = pairs
        .par_iter()
        .map(|((a, b), a_series)| {
            let q = ExtQuery {
                source: b_side_generator(group, a),
                target: b_side_generator(group, b),
                truncation,
            };
            let affine = ext_affine(group, &q);
            let mf = ext_mf(group, &q);
            mismatch(a, b, "a_side", "ext_affine", a_series, &affine)
                .or_else(|| mismatch(a, b, "ext_affine", "ext_mf", &affine, &mf))
        })
        .collect();
    (pairs.len(), witnesses.into_iter().flatten().next())
}

pub fn check_affine(params: NormalFormParams, truncation: u32) -> Vec<CheckResult> {
    let tag = format!("affine {params}");
    let group = structure_group(params);
    let curve = affine_curve(params);
    let data = sequence_data(params);
    let mut checks = Vec::new();

    let rho_product = group.mul(&group.mul(&group.rho[0], &group.rho[1]), &group.rho[2]);
    let orders_ok = data
        .iter()
        .enumerate()
        .all(|(i, &(m, r))| m * r == group.order() && group.dual().element_order(&group.rho[i]) == r);
    checks.push(CheckResult::from_witness(
        format!("{tag}: group law"),
        (!(group.order() == params.order() && group.is_trivial(&rho_product) && orders_ok)).then(|| {
            json!({"order": group.order(), "rho_product": rho_product.to_string(), "sequence_data": data})
        }),
    ));

    let md = monodromy(&group);
    let orientation = md.orientation(&group);
    let mono_ok = md.generates()
        && md.transport_is_isomorphism(&group)
        && orientation == Some((Orientation::Direct, Orientation::Direct));
    checks.push(CheckResult::from_witness(
        format!("{tag}: monodromy matches coordinate characters"),
        (!mono_ok).then(|| {
            json!({
                "sigma_x": md.sigma_x_character.to_string(),
                "sigma_y": md.sigma_y_character.to_string(),
                "rho1": group.rho[0].to_string(),
                "rho2": group.rho[1].to_string(),
            })
        }),
    ));

    let orbit_sizes = |orbits: &[Vec<crate::toricdata::Character>]| orbits.iter().map(Vec::len).collect::<Vec<_>>();
    let orbits_ok = [(&md.x_orbits, data[0]), (&md.y_orbits, data[1])]
        .iter()
        .all(|(o, (m, r))| o.len() as u64 == *m && o.iter().all(|x| x.len() as u64 == *r));
    checks.push(CheckResult::from_witness(
        format!("{tag}: orbits"),
        (!orbits_ok).then(|| json!({"x_orbits": orbit_sizes(&md.x_orbits), "y_orbits": orbit_sizes(&md.y_orbits), "expected": [data[0], data[1]]})),
    ));

    let (interior, boundary) = pick_counts(&curve.polygon()).expect("triangle");
    checks.push(CheckResult::from_witness(
        format!("{tag}: hurwitz genus equals interior points"),
        ((curve.genus, curve.total_punctures()) != (interior, boundary))
            .then(|| json!({"hurwitz": [curve.genus, curve.total_punctures()], "pick": [interior, boundary]})),
    ));

    let skeleton = match affine_skeleton(&group, &md) {
        Ok(s) => s,
        Err(e) => {
            checks.push(CheckResult::fail(format!("{tag}: skeleton"), json!({"error": e.to_string()})));
            return checks;
        }
    };
    let chi = skeleton.graph.euler_characteristic();
    let expected = 2 - 2 * curve.genus as i64 - curve.total_punctures() as i64;
    checks.push(CheckResult::from_witness(
        format!("{tag}: skeleton euler characteristic"),
        (chi != expected).then(|| json!({"skeleton": chi, "expected": expected})),
    ));

    let a_table = affine_hom_table(&skeleton, &group, truncation as i64).expect("nonnegative truncation");
    let (pairs, witness) = compare_tables(&group, &a_table, truncation);
    checks.push(CheckResult::from_witness(
        format!("{tag}: hom tables agree ({pairs} pairs, N={truncation})"),
        witness,
    ));
    checks
}

pub fn affine_topology(params: NormalFormParams) -> Topology {
    let curve = affine_curve(params);
    Topology {
        genus: curve.genus,
        punctures: curve.total_punctures(),
        chi: curve.chi(),
    }
}

pub fn affine_report(params: NormalFormParams, truncation: u32) -> HmsReport {
    let input = json!({
        "command": "affine",
        "r": params.r,
        "m": params.m,
        "s": params.s,
        "truncation": truncation,
    });
    HmsReport::new(input, check_affine(params, truncation), affine_topology(params))
}
