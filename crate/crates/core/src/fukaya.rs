//! A-side counts: wheel quivers, the dumbbell word basis, and
//! monodromy-filtered Hom series on lifted skeleta.

use serde::Serialize;

use crate::error::StructureError;
use crate::ribbon::{LabeledSkeleton, Spoke, Wheel};
use crate::series::{Generator, GradedSeries, HomTable, Parity};
use crate::toricdata::{AbelianGroup, Character, StructureGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: usize,
    /// `(source, target)` per arrow.
    pub arrows: Vec<(usize, usize)>,
    /// Forbidden subwords, as arrow index sequences.
    pub relations: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>, relations: Vec<Vec<usize>>) -> Self {
        assert!(arrows.iter().all(|&(s, t)| s < vertices && t < vertices), "arrow endpoint out of range");
        assert!(
            relations.iter().flatten().all(|&a| a < arrows.len()),
            "relation references a missing arrow"
        );
        Quiver {
            vertices,
            arrows,
            relations,
        }
    }

    /// Path counts from `from` by length `0..=max_len`, ignoring relations.
    pub fn path_counts(&self, from: usize, max_len: usize) -> Vec<Vec<u64>> {
        let mut layers = vec![vec![0u64; self.vertices]];
        layers[0][from] = 1;
        for len in 1..=max_len {
            let mut next = vec![0u64; self.vertices];
            for &(s, t) in &self.arrows {
                next[t] += layers[len - 1][s];
            }
            layers.push(next);
        }
        layers
    }
}

/// Quiver of a wheel, or the circle flag for `Γ(0,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WheelModel {
    Quiver(Quiver),
    Circle,
}

/// Vertices are the intervals `I_0..I_{n-1}`, with `I_k` just before spoke
/// `k`. An upward spoke `k` gives `I_k -> I_{k+1}`, a downward one the reverse.
pub fn wheel_quiver(w: &Wheel) -> WheelModel {
    let n = w.arrangement.len();
    if n == 0 {
        return WheelModel::Circle;
    }
    let arrows = w
        .arrangement
        .iter()
        .enumerate()
        .map(|(k, s)| match s {
            Spoke::Up => (k, (k + 1) % n),
            Spoke::Down => ((k + 1) % n, k),
        })
        .collect();
    WheelModel::Quiver(Quiver::new(n, arrows, vec![]))
}

/// Paths from `j` to `i` by length, in the even part.
pub fn wheel_hom_series(w: &Wheel, i: usize, j: usize, truncation: u32) -> Result<GradedSeries, StructureError> {
    let mut out = GradedSeries::zero(truncation);
    match wheel_quiver(w) {
        WheelModel::Circle => {
            if i != 0 || j != 0 {
                return Err(StructureError::UnknownVertex(i.max(j)));
            }
            for wt in out.weights() {
                out.add(Parity::Even, wt, 1);
            }
        }
        WheelModel::Quiver(q) => {
            for v in [i, j] {
                if v >= q.vertices {
                    return Err(StructureError::UnknownVertex(v));
                }
            }
            for (len, layer) in q.path_counts(j, truncation as usize).iter().enumerate() {
                out.add(Parity::Even, len as i64, layer[i]);
            }
        }
    }
    Ok(out)
}

/// An element `α·x1 + β·x2` of the rank-one group `L(p, q)`, where `p·x1 = q·x2`.
pub type Twist = (i64, i64);

/// Monomials `x^i y^j` of degree `b - a` in the `L(p, q)`-graded ring
/// `k[x, y]`, `deg x = x1`, `deg y = x2`, reported at weight `i + j`.
pub fn weighted_p1_series(p: u64, q: u64, a: Twist, b: Twist, truncation: u32) -> GradedSeries {
    assert!(p >= 1 && q >= 1);
    let (p, q) = (p as i64, q as i64);
    let (da, db) = (b.0 - a.0, b.1 - a.1);
    let mut out = GradedSeries::zero(truncation);
    // Solutions are (da + k p, db - k q) with both coordinates nonnegative.
    let k_min = num_integer::Integer::div_ceil(&(-da), &p);
    let k_max = num_integer::Integer::div_floor(&db, &q);
    for k in k_min..=k_max {
        let (i, j) = (da + k * p, db - k * q);
        out.add(Parity::Even, i + j, 1);
    }
    out
}

/// Twist attached to each interval of `Γ(p, q)` in the canonical arrangement.
pub fn wheel_vertex_twist(p: usize, q: usize, k: usize) -> Twist {
    let n = p + q;
    assert!(k < n);
    if k <= p {
        (k as i64, 0)
    } else {
        (0, (n - k) as i64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    /// Loop around circle 1.
    L1,
    /// Loop around circle 2.
    L2,
    U1,
    U2,
}

impl Letter {
    fn is_loop(self) -> bool {
        matches!(self, Letter::L1 | Letter::L2)
    }
}

/// A word in the dumbbell alphabet, read left to right, starting at
/// generator `P_source`. `P_j` sits on circle `3 - j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    pub source: u8,
    pub letters: Vec<Letter>,
}

impl PathWord {
    pub fn identity(source: u8) -> Self {
        PathWord {
            source,
            letters: vec![],
        }
    }

    /// Endpoint after reading the word, or `None` if some letter does not
    /// start where the previous one ended.
    pub fn target(&self) -> Option<u8> {
        let mut at = self.source;
        for &l in &self.letters {
            at = match (l, at) {
                (Letter::L1, 2) | (Letter::L2, 1) => at,
                (Letter::U1, 1) => 2,
                (Letter::U2, 2) => 1,
                _ => return None,
            };
        }
        Some(at)
    }

    pub fn weight(&self) -> u64 {
        self.letters.len() as u64
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.letters.iter().filter(|l| !l.is_loop()).count() as u64)
    }

    /// Well-formed, and no loop letter is adjacent to a `u`.
    pub fn is_admissible(&self) -> bool {
        self.target().is_some() && self.letters.windows(2).all(|w| w[0].is_loop() == w[1].is_loop())
    }

    /// Product of letter characters: loops shift by their circle's
    /// character, `u1` is trivial, `u2` is `(rho1 rho2)^-1`.
    pub fn monodromy(&self, group: &StructureGroup, shifts: &[Character; 2]) -> Character {
        let u2 = group.inv(&group.mul(&group.rho[0], &group.rho[1]));
        self.letters.iter().fold(group.dual().identity(), |acc, l| {
            let c = match l {
                Letter::L1 => shifts[0].clone(),
                Letter::L2 => shifts[1].clone(),
                Letter::U1 => group.dual().identity(),
                Letter::U2 => u2.clone(),
            };
            group.mul(&acc, &c)
        })
    }

    /// `self` followed by `other`; `None` if endpoints do not match or the
    /// result is forbidden.
    pub fn compose(&self, other: &PathWord) -> Option<PathWord> {
        if self.target()? != other.source {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend(&other.letters);
        let w = PathWord {
            source: self.source,
            letters,
        };
        w.is_admissible().then_some(w)
    }
}

/// Every admissible word from `P_source` of length at most `max_len`:
/// powers of the local loop and alternating `u`-strings.
pub fn admissible_words(source: u8, max_len: usize) -> Vec<PathWord> {
    let (loop_letter, first, second) = match source {
        1 => (Letter::L2, Letter::U1, Letter::U2),
        2 => (Letter::L1, Letter::U2, Letter::U1),
        _ => panic!("generator side must be 1 or 2"),
    };
    let mut words = Vec::new();
    for a in 0..=max_len {
        words.push(PathWord {
            source,
            letters: vec![loop_letter; a],
        });
    }
    for len in 1..=max_len {
        words.push(PathWord {
            source,
            letters: (0..len).map(|k| if k % 2 == 0 { first } else { second }).collect(),
        });
    }
    words
}

/// Hom series between all generator pairs on a dumbbell skeleton with
/// circles at the first two puncture types.
pub fn affine_hom_table(
    skel: &LabeledSkeleton,
    group: &StructureGroup,
    truncation: i64,
) -> Result<HomTable, StructureError> {
    if truncation < 0 {
        return Err(StructureError::NegativeTruncation(truncation));
    }
    assert_eq!(skel.sides, [0, 1], "affine Hom tables use the standard dumbbell");
    let n = truncation as u32;
    let chars = group.characters();
    let dual = group.dual();
    let mut table = HomTable::new();
    for source in [1u8, 2] {
        let words: Vec<(PathWord, u8, Character)> = admissible_words(source, n as usize)
            .into_iter()
            .map(|w| {
                let t = w.target().expect("admissible");
                let mon = w.monodromy(group, &skel.shifts);
                (w, t, mon)
            })
            .collect();
        for theta in &chars {
            let mut rows: Vec<GradedSeries> = vec![GradedSeries::zero(n); 2 * chars.len()];
            for (w, t, mon) in &words {
                let end = group.mul(theta, mon);
                let slot = (*t as usize - 1) * chars.len() + dual.index_of(&end);
                rows[slot].add(w.parity(), w.weight() as i64, 1);
            }
            for target in [1u8, 2] {
                for theta2 in &chars {
                    let slot = (target as usize - 1) * chars.len() + dual.index_of(theta2);
                    table.insert(
                        (
                            Generator {
                                side: source,
                                label: theta.clone(),
                            },
                            Generator {
                                side: target,
                                label: theta2.clone(),
                            },
                        ),
                        rows[slot].clone(),
                    );
                }
            }
        }
    }
    Ok(table)
}

/// Laurent loops on a labeled circle: 1 at each weight `w` with
/// `shift^w = θ'θ^-1`.
pub fn circle_hom_series(
    labels: &AbelianGroup,
    shift: &Character,
    theta: &Character,
    theta2: &Character,
    truncation: u32,
) -> GradedSeries {
    let want = labels.add(theta2, &labels.neg(theta));
    let mut out = GradedSeries::zero(truncation);
    for w in out.weights() {
        if labels.scale(shift, w) == want {
            out.add(Parity::Even, w, 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvetop::monodromy;
    use crate::ribbon::{affine_skeleton, make_wheel};
    use crate::toricdata::{structure_group, NormalFormParams};

    fn table(r: u64, m: u64, s: u64, n: i64) -> (StructureGroup, HomTable) {
        let g = structure_group(NormalFormParams::new(r, m, s).unwrap());
        let skel = affine_skeleton(&g, &monodromy(&g)).unwrap();
        let t = affine_hom_table(&skel, &g, n).unwrap();
        (g, t)
    }

    fn gen(side: u8, label: &Character) -> Generator {
        Generator {
            side,
            label: label.clone(),
        }
    }

    #[test]
    fn wheel_quiver_shapes() {
        let WheelModel::Quiver(q) = wheel_quiver(&make_wheel(1, 0, None)) else { panic!() };
        assert_eq!((q.vertices, q.arrows.clone()), (1, vec![(0, 0)]));
        let WheelModel::Quiver(q) = wheel_quiver(&make_wheel(1, 1, None)) else { panic!() };
        assert_eq!((q.vertices, q.arrows.clone()), (2, vec![(0, 1), (0, 1)]));
        let WheelModel::Quiver(q) = wheel_quiver(&make_wheel(3, 0, None)) else { panic!() };
        assert_eq!(q.arrows, vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(wheel_quiver(&make_wheel(0, 0, None)), WheelModel::Circle);
    }

    #[test]
    fn wheel_series_examples() {
        let s = wheel_hom_series(&make_wheel(1, 0, None), 0, 0, 10).unwrap();
        assert!((0..=10).all(|w| s.get(Parity::Even, w) == 1));
        let s = wheel_hom_series(&make_wheel(2, 0, None), 0, 0, 10).unwrap();
        assert!((0..=10).all(|w| s.get(Parity::Even, w) == u64::from(w % 2 == 0)));
        let s = wheel_hom_series(&make_wheel(1, 1, None), 1, 0, 10).unwrap();
        assert_eq!(s.get(Parity::Even, 1), 2);
        assert_eq!(s.total(), 2);
        assert_eq!(
            wheel_hom_series(&make_wheel(2, 0, None), 5, 0, 3),
            Err(StructureError::UnknownVertex(5))
        );
    }

    #[test]
    fn weighted_line_examples() {
        assert_eq!(weighted_p1_series(1, 1, (0, 0), (1, 0), 10).get(Parity::Even, 1), 2);
        // With p = 1, q = 2 the degree x1 = 2 x2 contains x and y^2.
        let s = weighted_p1_series(1, 2, (0, 0), (1, 0), 10);
        assert_eq!(s.total(), 2);
        assert_eq!(weighted_p1_series(1, 2, (0, 0), (-1, 0), 10).total(), 0);
    }

    #[test]
    fn composition_closure() {
        let g = structure_group(NormalFormParams::new(3, 2, 1).unwrap());
        let shifts = [g.rho[0].clone(), g.rho[1].clone()];
        let words: Vec<PathWord> = [1, 2].into_iter().flat_map(|s| admissible_words(s, 5)).collect();
        for a in &words {
            for b in &words {
                if let Some(c) = a.compose(b) {
                    assert_eq!(c.weight(), a.weight() + b.weight());
                    let pa = a.parity() == Parity::Odd;
                    let pb = b.parity() == Parity::Odd;
                    assert_eq!(c.parity() == Parity::Odd, pa ^ pb);
                    assert_eq!(
                        c.monodromy(&g, &shifts),
                        g.mul(&a.monodromy(&g, &shifts), &b.monodromy(&g, &shifts))
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_word_is_forbidden() {
        let w = PathWord {
            source: 1,
            letters: vec![Letter::L2, Letter::U1],
        };
        assert!(w.target().is_some() && !w.is_admissible());
    }

    #[test]
    fn smooth_table_examples() {
        let (g, t) = table(1, 1, 0, 8);
        let e = g.dual().identity();
        let end1 = &t[&(gen(1, &e), gen(1, &e))];
        let dims: Vec<u64> = (0..=4).map(|w| end1.get(Parity::Even, w)).collect();
        assert_eq!(dims, vec![1, 1, 2, 1, 2]);
        assert!(end1.parity_is_zero(Parity::Odd));
        let cross = &t[&(gen(1, &e), gen(2, &e))];
        assert!(cross.parity_is_zero(Parity::Even));
        assert!((0..=8).all(|w| cross.get(Parity::Odd, w) == u64::from(w % 2 == 1)));
    }

    #[test]
    fn orbifold_endomorphisms() {
        let (g, t) = table(3, 1, 1, 12);
        let e = g.dual().identity();
        let s = &t[&(gen(1, &e), gen(1, &e))];
        let dims: Vec<u64> = (0..=12).map(|w| s.get(Parity::Even, w)).collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 0, 0, 2, 0, 0, 1, 0, 0, 2]);
    }

    #[test]
    fn table_is_equivariant() {
        let (g, t) = table(2, 3, 1, 10);
        for ((a, b), s) in &t {
            for chi in g.characters() {
                let shifted = (
                    gen(a.side, &g.mul(&a.label, &chi)),
                    gen(b.side, &g.mul(&b.label, &chi)),
                );
                assert_eq!(&t[&shifted], s);
            }
        }
    }

    #[test]
    fn cross_totals_independent_of_source() {
        let (g, t) = table(4, 2, 3, 10);
        let total = |theta: &Character| {
            let mut acc = GradedSeries::zero(10);
            for theta2 in g.characters() {
                acc.accumulate(&t[&(gen(1, theta), gen(2, &theta2))]);
            }
            acc
        };
        let first = total(&g.dual().identity());
        assert!(g.characters().iter().all(|th| total(th) == first));
    }

    #[test]
    fn circle_examples() {
        let trivial = AbelianGroup::trivial();
        let e = trivial.identity();
        let s = circle_hom_series(&trivial, &e, &e, &e, 5);
        assert!(s.weights().all(|w| s.get(Parity::Even, w) == 1));
        let z3 = AbelianGroup::new(vec![3]);
        let shift = z3.element_at(1);
        let theta = z3.element_at(2);
        let s = circle_hom_series(&z3, &shift, &theta, &theta, 6);
        assert!(s.weights().all(|w| s.get(Parity::Even, w) == u64::from(w.rem_euclid(3) == 0)));
        let s = circle_hom_series(&z3, &shift, &theta, &z3.add(&theta, &shift), 6);
        assert!(s.weights().all(|w| s.get(Parity::Even, w) == u64::from(w.rem_euclid(3) == 1)));
    }
}
