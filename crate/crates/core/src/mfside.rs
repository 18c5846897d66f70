//! B-side counts: isotypic Ext series of the generators `O_{A^1_j}(θ)` on
//! `[C^3/G]` with `W = z1 z2 z3`, and of `k[z^±](θ)` on the torus charts.

use serde::Serialize;

use crate::series::{Generator, GradedSeries, Parity};
use crate::toricdata::{AbelianGroup, Character, Phase, StructureGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingGenerator {
    pub name: &'static str,
    pub weight: u64,
    pub parity: Parity,
    pub character: Character,
    /// Index of the coordinate `z_i` (0-based) this generator is built from,
    /// with `inverse` marking `z_i^-1`-type characters.
    pub coordinate: usize,
    pub inverse: bool,
}

/// Free module over a monomial ring: a leading generator (possibly absent)
/// times monomials avoiding the forbidden products.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedCharacterRing {
    pub generators: Vec<RingGenerator>,
    /// Pairs of generators whose product vanishes.
    pub relations: Vec<(usize, usize)>,
    pub leading: Option<RingGenerator>,
}

/// A monomial: exponents of the ring generators (leading generator implicit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u64>,
    pub weight: u64,
    pub parity: Parity,
}

impl WeightedCharacterRing {
    pub fn new(generators: Vec<RingGenerator>, relations: Vec<(usize, usize)>, leading: Option<RingGenerator>) -> Self {
        assert!(
            relations.iter().all(|&(a, b)| a < generators.len() && b < generators.len()),
            "relation references a missing generator"
        );
        WeightedCharacterRing {
            generators,
            relations,
            leading,
        }
    }

    /// Monomials of total weight at most `max_weight`.
    pub fn monomials(&self, max_weight: u64) -> Vec<Monomial> {
        let lead_w = self.leading.as_ref().map_or(0, |g| g.weight);
        let lead_odd = self.leading.as_ref().is_some_and(|g| g.parity == Parity::Odd);
        if lead_w > max_weight {
            return vec![];
        }
        let mut out = Vec::new();
        let mut exps = vec![0u64; self.generators.len()];
        self.extend(0, lead_w, max_weight, &mut exps, &mut out);
        for m in out.iter_mut() {
            let odd = lead_odd
                ^ self
                    .generators
                    .iter()
                    .zip(&m.exponents)
                    .filter(|(g, _)| g.parity == Parity::Odd)
                    .fold(false, |acc, (_, &e)| acc ^ (e % 2 == 1));
            m.parity = if odd { Parity::Odd } else { Parity::Even };
        }
        out
    }

    fn extend(&self, k: usize, weight: u64, max: u64, exps: &mut Vec<u64>, out: &mut Vec<Monomial>) {
        if k == self.generators.len() {
            let killed = self.relations.iter().any(|&(a, b)| exps[a] > 0 && exps[b] > 0);
            if !killed {
                out.push(Monomial {
                    exponents: exps.clone(),
                    weight,
                    parity: Parity::Even,
                });
            }
            return;
        }
        let w = self.generators[k].weight;
        let mut e = 0;
        while weight + e * w <= max {
            exps[k] = e;
            self.extend(k + 1, weight + e * w, max, exps, out);
            e += 1;
        }
        exps[k] = 0;
    }

    /// Character of a monomial, computed in the character group.
    pub fn character(&self, group: &StructureGroup, m: &Monomial) -> Character {
        let init = self
            .leading
            .as_ref()
            .map_or(group.dual().identity(), |g| g.character.clone());
        self.generators
            .iter()
            .zip(&m.exponents)
            .fold(init, |acc, (g, &e)| group.mul(&acc, &group.pow(&g.character, e as i64)))
    }

    /// Exponent of the monomial's value at a group element, from the
    /// coordinate exponent triple of the element.
    pub fn phase_at(&self, exponents: &[Phase; 3], m: &Monomial) -> Phase {
        let of = |g: &RingGenerator| {
            let p = exponents[g.coordinate];
            if g.inverse {
                -p
            } else {
                p
            }
        };
        let init = self.leading.as_ref().map_or(Phase::zero(), of);
        self.generators
            .iter()
            .zip(&m.exponents)
            .fold(init, |acc, (g, &e)| acc + of(g).scale(e as i64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtQuery {
    pub source: Generator,
    pub target: Generator,
    pub truncation: u32,
}

/// The answer ring of `Ext(O_j, O_j')`: `k[z_{3-j}, w]/(z_{3-j} w)` when
/// `j = j'`, and `u_j k[w]` otherwise, where `w` is `v` or `z3`.
pub fn answer_ring(group: &StructureGroup, j: u8, j2: u8, w_name: &'static str) -> WeightedCharacterRing {
    assert!(matches!(j, 1 | 2) && matches!(j2, 1 | 2));
    let w = RingGenerator {
        name: w_name,
        weight: 2,
        parity: Parity::Even,
        character: group.rho[2].clone(),
        coordinate: 2,
        inverse: false,
    };
    if j == j2 {
        let other = (2 - j) as usize;
        let z = RingGenerator {
            name: if other == 0 { "z1" } else { "z2" },
            weight: 1,
            parity: Parity::Even,
            character: group.rho[other].clone(),
            coordinate: other,
            inverse: false,
        };
        WeightedCharacterRing::new(vec![z, w], vec![(0, 1)], None)
    } else {
        let idx = (j - 1) as usize;
        let u = RingGenerator {
            name: if j == 1 { "u1" } else { "u2" },
            weight: 1,
            parity: Parity::Odd,
            character: group.inv(&group.rho[idx]),
            coordinate: idx,
            inverse: true,
        };
        WeightedCharacterRing::new(vec![w], vec![], Some(u))
    }
}

/// Ext series through the ring with `v`, filtered by residue arithmetic on
/// characters: keep monomials with `χ·θ^-1·θ' = 1`.
pub fn ext_affine(group: &StructureGroup, q: &ExtQuery) -> GradedSeries {
    let ring = answer_ring(group, q.source.side, q.target.side, "v");
    let want = group.mul(&q.source.label, &group.inv(&q.target.label));
    let mut out = GradedSeries::zero(q.truncation);
    for m in ring.monomials(q.truncation as u64) {
        if ring.character(group, &m) == want {
            out.add(m.parity, m.weight as i64, 1);
        }
    }
    out
}

/// Ext series through the ring with `z3`, filtered by evaluating the
/// monomial on every element of `G`.
pub fn ext_mf(group: &StructureGroup, q: &ExtQuery) -> GradedSeries {
    let ring = answer_ring(group, q.source.side, q.target.side, "z3");
    let mut out = GradedSeries::zero(q.truncation);
    let monomials = ring.monomials(q.truncation as u64);
    for m in monomials {
        let invariant = group.elements.iter().all(|g| {
            let twist = group.evaluate(&q.target.label, &g.residues) - group.evaluate(&q.source.label, &g.residues);
            (ring.phase_at(&g.exponents, &m) + twist).is_zero()
        });
        if invariant {
            out.add(m.parity, m.weight as i64, 1);
        }
    }
    out
}

/// Monomial counts of the answer ring without the isotypic filter.
pub fn unfiltered_series(group: &StructureGroup, j: u8, j2: u8, truncation: u32) -> GradedSeries {
    let ring = answer_ring(group, j, j2, "v");
    let mut out = GradedSeries::zero(truncation);
    for m in ring.monomials(truncation as u64) {
        out.add(m.parity, m.weight as i64, 1);
    }
    out
}

/// Laurent monomials `z^a`, `|a| <= N`, with `acting^a·θ^-1·θ' = 1`.
pub fn ext_chart(
    labels: &AbelianGroup,
    acting: &Character,
    theta: &Character,
    theta2: &Character,
    truncation: u32,
) -> GradedSeries {
    let twist = labels.add(theta2, &labels.neg(theta));
    let mut out = GradedSeries::zero(truncation);
    for a in out.weights() {
        if labels.is_identity(&labels.add(&labels.scale(acting, a), &twist)) {
            out.add(Parity::Even, a, 1);
        }
    }
    out
}

/// `O_{A^1_j}(θ)` for `j = 1, 2` and every character.
pub fn generator_set(group: &StructureGroup) -> Vec<Generator> {
    [1u8, 2]
        .into_iter()
        .flat_map(|side| {
            group
                .characters()
                .into_iter()
                .map(move |label| Generator { side, label })
        })
        .collect()
}
