//! Finite abelian groups, their characters, and the orbifold group
//! `G = ker(phi)` of a normal-form cone.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::snf::{smith_normal_form, IntMatrix, SmithForm};
use crate::toricdata::normal_form::NormalFormParams;

/// A rational number modulo one: an exponent of `exp(2πi·_)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn new(num: i64, den: i64) -> Self {
        let den = den.abs();
        let num = if den == 0 { 0 } else { num.rem_euclid(den) };
        Phase(Ratio::new(num, den.max(1)))
    }

    pub fn zero() -> Self {
        Phase(Ratio::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn scale(&self, k: i64) -> Phase {
        Phase::new(self.numer() * k, self.denom())
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let sum = self.0 + rhs.0;
        Phase::new(*sum.numer(), *sum.denom())
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.numer(), self.denom())
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// `Z/d1 ⊕ Z/d2 ⊕ …` with `d1 | d2 | …` and every `di > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

/// Residue tuple against the invariant factors of some [`AbelianGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Elem(pub Vec<u64>);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&d| d > 1), "trivial invariant factor");
        assert!(
            factors.windows(2).all(|w| w[1] % w[0] == 0),
            "factors must form a divisibility chain"
        );
        AbelianGroup { factors }
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn identity(&self) -> Elem {
        Elem(vec![0; self.factors.len()])
    }

    pub fn reduce(&self, raw: &[i64]) -> Elem {
        Elem(
            raw.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn scale(&self, a: &Elem, k: i64) -> Elem {
        Elem(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
                .collect(),
        )
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &Elem) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| d / x.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Mixed-radix index, last coordinate fastest.
    pub fn index_of(&self, a: &Elem) -> usize {
        a.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Elem {
        let mut res = vec![0u64; self.factors.len()];
        for (slot, &d) in res.iter_mut().zip(&self.factors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        Elem(res)
    }

    /// All elements in index order.
    pub fn elements(&self) -> Vec<Elem> {
        (0..self.order() as usize).map(|i| self.element_at(i)).collect()
    }

    /// Orbits of translation by `shift`, each listed as `x, x+shift, …`
    /// starting from its smallest-index element; orbits sorted by that element.
    pub fn orbits(&self, shift: &Elem) -> Vec<Vec<Elem>> {
        let n = self.order() as usize;
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = self.element_at(start);
            loop {
                let idx = self.index_of(&cur);
                if seen[idx] {
                    break;
                }
                seen[idx] = true;
                orbit.push(cur.clone());
                cur = self.add(&cur, shift);
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// The pairing between a character (residues in the dual basis) and an
    /// element: `Σ c_k e_k / d_k mod 1`.
    pub fn pairing(&self, character: &Elem, element: &Elem) -> Phase {
        let lcm = self.factors.last().copied().unwrap_or(1) as i64;
        let num: i64 = character
            .0
            .iter()
            .zip(&element.0)
            .zip(&self.factors)
            .map(|((&c, &e), &d)| (c as i64 * e as i64 % d as i64) * (lcm / d as i64))
            .sum();
        Phase::new(num, lcm)
    }
}

/// A character of `G`, stored as residues against the invariant factors of
/// `G` in the dual basis.
pub type Character = Elem;

/// One element of `G`, in both representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub residues: Elem,
    /// Exponents `(a1, a2, a3)` with the element equal to `exp(2πi·a)` in (C*)^3.
    #[serde(serialize_with = "serialize_phases")]
    pub exponents: [Phase; 3],
}

fn serialize_phases<S: serde::Serializer>(p: &[Phase; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in p {
        seq.serialize_element(&format!("{}/{}", x.numer(), x.denom()))?;
    }
    seq.end()
}

/// `G = ker(phi)` for `phi(t) = (t1^r, t1^-s t2^m, t1 t2 t3)`, with the
/// coordinate characters and the distinguished elements `eta1`, `eta2`.
#[derive(Clone, Debug)]
pub struct StructureGroup {
    pub params: NormalFormParams,
    pub group: AbelianGroup,
    /// Elements in index order.
    pub elements: Vec<GroupElement>,
    /// Coordinate characters `rho1, rho2, rho3`.
    pub rho: [Character; 3],
    pub eta: [Elem; 2],
    /// Exponent triples of the invariant generators.
    generator_exponents: Vec<[Phase; 3]>,
    /// Maps eta-coefficients `(i, j)` to invariant-factor residues.
    coefficient_map: IntMatrix,
    /// Rows of the coefficient map that survive (invariant factor > 1).
    kept_rows: Vec<usize>,
}

impl StructureGroup {
    /// Residues of `i·eta1 + j·eta2`.
    pub fn from_eta_coefficients(&self, i: i64, j: i64) -> Elem {
        let image = self
            .coefficient_map
            .mul_vec(&[BigInt::from(i), BigInt::from(j)]);
        let raw: Vec<i64> = self
            .kept_rows
            .iter()
            .map(|&k| image[k].to_i64().expect("small"))
            .collect();
        self.group.reduce(&raw)
    }

    pub fn element(&self, e: &Elem) -> &GroupElement {
        &self.elements[self.group.index_of(e)]
    }

    /// Exponent triple of a residue tuple, computed from generator exponents.
    pub fn exponents_of(&self, e: &Elem) -> [Phase; 3] {
        let mut acc = [Phase::zero(); 3];
        for (k, &x) in e.0.iter().enumerate() {
            for c in 0..3 {
                acc[c] = acc[c] + self.generator_exponents[k][c].scale(x as i64);
            }
        }
        acc
    }

    /// Evaluates a character on an element.
    pub fn evaluate(&self, character: &Character, element: &Elem) -> Phase {
        self.group.pairing(character, element)
    }

    /// The character group, which shares the invariant factors of `G`.
    pub fn dual(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn characters(&self) -> Vec<Character> {
        self.group.elements()
    }

    /// Character from its values on `eta1`, `eta2`. Returns `None` if the
    /// values do not satisfy the relations of `G`.
    pub fn character_from_eta_values(&self, on_eta1: Phase, on_eta2: Phase) -> Option<Character> {
        // Relations: r·eta1 = s·eta2, m·eta2 = 0.
        let NormalFormParams { r, m, s } = self.params;
        if !(on_eta1.scale(r as i64) - on_eta2.scale(s as i64)).is_zero()
            || !on_eta2.scale(m as i64).is_zero()
        {
            return None;
        }
        let mut residues = Vec::with_capacity(self.group.factors().len());
        for (k, &d) in self.group.factors().iter().enumerate() {
            let (i, j) = self.generator_coefficients(k);
            let value = on_eta1.scale(i) + on_eta2.scale(j);
            let c = Ratio::new(value.numer() * d as i64, value.denom());
            if !c.is_integer() {
                return None;
            }
            residues.push(c.to_integer().rem_euclid(d as i64) as u64);
        }
        Some(Elem(residues))
    }

    fn generator_coefficients(&self, k: usize) -> (i64, i64) {
        // Columns of the inverse coefficient map give generators in eta-coordinates.
        let col = self.kept_rows[k];
        let inv = &self.coefficient_inverse();
        (
            inv[(0, col)].to_i64().expect("small"),
            inv[(1, col)].to_i64().expect("small"),
        )
    }

    fn coefficient_inverse(&self) -> IntMatrix {
        // 2×2 unimodular inverse.
        let a = &self.coefficient_map;
        let det = a.det();
        let mut inv = IntMatrix::zeros(2, 2);
        inv[(0, 0)] = &a[(1, 1)] * &det;
        inv[(1, 1)] = &a[(0, 0)] * &det;
        inv[(0, 1)] = -&a[(0, 1)] * &det;
        inv[(1, 0)] = -&a[(1, 0)] * &det;
        inv
    }

    /// Character product written additively.
    pub fn mul(&self, a: &Character, b: &Character) -> Character {
        self.group.add(a, b)
    }

    pub fn inv(&self, a: &Character) -> Character {
        self.group.neg(a)
    }

    pub fn pow(&self, a: &Character, k: i64) -> Character {
        self.group.scale(a, k)
    }

    pub fn is_trivial(&self, a: &Character) -> bool {
        self.group.is_identity(a)
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }
}

/// Builds `G` for a normal form, reconciling both element representations.
pub fn structure_group(params: NormalFormParams) -> StructureGroup {
    let NormalFormParams { r, m, s } = params;
    let (r_i, m_i, s_i) = (r as i64, m as i64, s as i64);
    // G ≅ Z^2 / span{(r, -s), (0, m)} in eta-coefficients.
    let relations = IntMatrix::from_rows(&[vec![r_i, 0], vec![-s_i, m_i]]);
    let form: SmithForm = smith_normal_form(&relations);
    let diag: Vec<u64> = (0..2)
        .map(|k| form.d[(k, k)].to_u64().expect("positive diagonal"))
        .collect();
    let kept_rows: Vec<usize> = (0..2).filter(|&k| diag[k] > 1).collect();
    let group = AbelianGroup::new(kept_rows.iter().map(|&k| diag[k]).collect());

    let eta_exponents = |i: i64, j: i64| -> [Phase; 3] {
        let rm = r_i * m_i;
        let a1 = Phase::new(i, r_i);
        let a2 = Phase::new(s_i * i + r_i * j, rm);
        [a1, a2, -(a1 + a2)]
    };

    let mut sg = StructureGroup {
        params,
        group: group.clone(),
        elements: Vec::new(),
        rho: [group.identity(), group.identity(), group.identity()],
        eta: [group.identity(), group.identity()],
        generator_exponents: Vec::new(),
        coefficient_map: form.u.clone(),
        kept_rows,
    };
    sg.generator_exponents = (0..group.factors().len())
        .map(|k| {
            let (i, j) = sg.generator_coefficients(k);
            eta_exponents(i, j)
        })
        .collect();

    // Enumerate Z/r × Z/m through the eta bijection and reconcile.
    let mut slots: Vec<Option<GroupElement>> = vec![None; group.order() as usize];
    for i in 0..r_i {
        for j in 0..m_i {
            let residues = sg.from_eta_coefficients(i, j);
            let exponents = eta_exponents(i, j);
            assert_eq!(
                sg.exponents_of(&residues),
                exponents,
                "representations disagree at eta-coefficients ({i}, {j})"
            );
            let idx = group.index_of(&residues);
            assert!(slots[idx].is_none(), "eta map is not injective");
            slots[idx] = Some(GroupElement {
                residues,
                exponents,
            });
        }
    }
    sg.elements = slots
        .into_iter()
        .map(|e| e.expect("eta map is surjective"))
        .collect();

    sg.rho = [0, 1, 2].map(|c| {
        Elem(
            group
                .factors()
                .iter()
                .enumerate()
                .map(|(k, &d)| {
                    let p = sg.generator_exponents[k][c];
                    let v = Ratio::new(p.numer() * d as i64, p.denom());
                    assert!(v.is_integer());
                    v.to_integer().rem_euclid(d as i64) as u64
                })
                .collect(),
        )
    });
    sg.eta = [sg.from_eta_coefficients(1, 0), sg.from_eta_coefficients(0, 1)];
    sg
}

/// `(m_i, r_i)` for the three coordinate characters, by the closed formulas.
pub fn sequence_data(params: NormalFormParams) -> [(u64, u64); 3] {
    let NormalFormParams { r, m, s } = params;
    let rm = r * m;
    let g2 = r.gcd(&s);
    let g3 = (m + s).gcd(&r);
    [(m, r), (g2, rm / g2), (g3, rm / g3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: enumerate triples of rm-th roots of unity (as exponents k/rm)
    /// and keep those in ker(phi).
    fn kernel_enumeration(params: NormalFormParams) -> Vec<[i64; 3]> {
        let NormalFormParams { r, m, s } = params;
        let (r, m, s) = (r as i64, m as i64, s as i64);
        let n = r * m;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let first = (r * a).rem_euclid(n) == 0;
                    let second = (-s * a + m * b).rem_euclid(n) == 0;
                    let third = (a + b + c).rem_euclid(n) == 0;
                    if first && second && third {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    fn oracle_kernel_image(params: NormalFormParams, coord: usize) -> (u64, u64) {
        let n = params.order() as i64;
        let kernel = kernel_enumeration(params);
        let ker = kernel.iter().filter(|t| t[coord] == 0).count() as u64;
        let mut image: Vec<i64> = kernel.iter().map(|t| t[coord]).collect();
        image.sort();
        image.dedup();
        let _ = n;
        (ker, image.len() as u64)
    }

    #[test]
    fn trivial_group() {
        let g = structure_group(NormalFormParams::new(1, 1, 0).unwrap());
        assert_eq!(g.order(), 1);
        assert!(g.rho.iter().all(|c| g.is_trivial(c)));
    }

    #[test]
    fn diagonal_mu3() {
        let g = structure_group(NormalFormParams::new(3, 1, 1).unwrap());
        assert_eq!(g.order(), 3);
        let kernel = kernel_enumeration(g.params);
        assert_eq!(kernel, vec![[0, 0, 0], [1, 1, 1], [2, 2, 2]]);
        for e in &g.elements {
            let [a, b, c] = e.exponents;
            assert_eq!(a, b);
            assert_eq!(b, c);
        }
        assert_eq!(g.rho[0], g.rho[1]);
        assert_eq!(g.rho[1], g.rho[2]);
    }

    #[test]
    fn klein_four() {
        let g = structure_group(NormalFormParams::new(2, 2, 0).unwrap());
        assert_eq!(g.group.factors(), &[2, 2]);
        let kernel = kernel_enumeration(g.params);
        assert_eq!(kernel.len(), 4);
        for e in &g.elements {
            let [a, b, c] = e.exponents;
            assert!(a.denom() <= 2 && b.denom() <= 2);
            assert_eq!(c, -(a + b));
        }
    }

    #[test]
    fn eta_values() {
        let params = NormalFormParams::new(4, 3, 2).unwrap();
        let g = structure_group(params);
        let e1 = g.element(&g.eta[0]).exponents;
        assert_eq!(e1, [Phase::new(1, 4), Phase::new(2, 12), -(Phase::new(1, 4) + Phase::new(2, 12))]);
        let e2 = g.element(&g.eta[1]).exponents;
        assert_eq!(e2, [Phase::zero(), Phase::new(1, 3), Phase::new(-1, 3)]);
    }

    #[test]
    fn group_laws_against_kernel_oracle() {
        for params in NormalFormParams::enumerate(5) {
            let g = structure_group(params);
            assert_eq!(g.order(), params.order());
            let sum = g.mul(&g.mul(&g.rho[0], &g.rho[1]), &g.rho[2]);
            assert!(g.is_trivial(&sum), "{params}");
            let seq = sequence_data(params);
            for c in 0..3 {
                let (ker, im) = oracle_kernel_image(params, c);
                assert_eq!(seq[c], (ker, im), "{params} coordinate {c}");
                assert_eq!(g.group.element_order(&g.rho[c]), im);
                assert_eq!(seq[c].0 * seq[c].1, params.order());
            }
        }
    }

    #[test]
    fn character_evaluation_matches_exponents() {
        let g = structure_group(NormalFormParams::new(6, 2, 4).unwrap());
        for e in &g.elements {
            for c in 0..3 {
                assert_eq!(g.evaluate(&g.rho[c], &e.residues), e.exponents[c]);
            }
        }
    }

    #[test]
    fn character_from_eta_values_roundtrip() {
        let g = structure_group(NormalFormParams::new(4, 2, 1).unwrap());
        for ch in g.characters() {
            let v1 = g.evaluate(&ch, &g.eta[0]);
            let v2 = g.evaluate(&ch, &g.eta[1]);
            assert_eq!(g.character_from_eta_values(v1, v2), Some(ch));
        }
        assert_eq!(g.character_from_eta_values(Phase::new(1, 5), Phase::zero()), None);
    }

    #[test]
    fn sequence_examples() {
        let p = |r, m, s| NormalFormParams::new(r, m, s).unwrap();
        assert_eq!(sequence_data(p(1, 1, 0)), [(1, 1); 3]);
        assert_eq!(sequence_data(p(3, 1, 1)), [(1, 3); 3]);
        assert_eq!(sequence_data(p(2, 2, 0)), [(2, 2); 3]);
    }
}
