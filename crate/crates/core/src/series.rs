//! Truncated Z/2 × Z graded dimension tables.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn slot(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// A generator `(j, θ)`: side `j` in `{1, 2}` and a character label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub side: u8,
    pub label: crate::toricdata::Character,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.side, self.label)
    }
}

/// Series for every ordered pair of generators.
pub type HomTable = std::collections::BTreeMap<(Generator, Generator), GradedSeries>;

/// Dimensions indexed by parity and weight in `[-N, N]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedSeries {
    truncation: u32,
    table: [Vec<u64>; 2],
}

/// Where two series first disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesMismatch {
    pub parity: Parity,
    pub weight: i64,
    pub left: u64,
    pub right: u64,
}

impl GradedSeries {
    pub fn zero(truncation: u32) -> Self {
        let len = 2 * truncation as usize + 1;
        GradedSeries {
            truncation,
            table: [vec![0; len], vec![0; len]],
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn in_window(&self, weight: i64) -> bool {
        weight.unsigned_abs() <= self.truncation as u64
    }

    fn index(&self, weight: i64) -> usize {
        (weight + self.truncation as i64) as usize
    }

    /// Adds `count` at `(parity, weight)`; weights outside the window are dropped.
    pub fn add(&mut self, parity: Parity, weight: i64, count: u64) {
        if self.in_window(weight) {
            let i = self.index(weight);
            self.table[parity.slot()][i] += count;
        }
    }

    pub fn get(&self, parity: Parity, weight: i64) -> u64 {
        if self.in_window(weight) {
            self.table[parity.slot()][self.index(weight)]
        } else {
            0
        }
    }

    pub fn weights(&self) -> std::ops::RangeInclusive<i64> {
        -(self.truncation as i64)..=self.truncation as i64
    }

    pub fn part(&self, parity: Parity) -> &[u64] {
        &self.table[parity.slot()]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(|&x| x == 0))
    }

    pub fn parity_is_zero(&self, parity: Parity) -> bool {
        self.part(parity).iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u64 {
        self.table.iter().flatten().sum()
    }

    /// Entrywise sum; both series must share a truncation.
    pub fn accumulate(&mut self, other: &GradedSeries) {
        assert_eq!(self.truncation, other.truncation, "truncation mismatch");
        for p in 0..2 {
            for (a, b) in self.table[p].iter_mut().zip(&other.table[p]) {
                *a += b;
            }
        }
    }

    /// Entrywise division, or `None` if some entry is not divisible.
    pub fn divide_exact(&self, d: u64) -> Option<GradedSeries> {
        let mut out = self.clone();
        for row in out.table.iter_mut() {
            for x in row.iter_mut() {
                if *x % d != 0 {
                    return None;
                }
                *x /= d;
            }
        }
        Some(out)
    }

    /// Comparison over the shared window, scanning even before odd and
    /// weights upward.
    pub fn first_mismatch(&self, other: &GradedSeries) -> Option<SeriesMismatch> {
        let n = self.truncation.min(other.truncation) as i64;
        for parity in [Parity::Even, Parity::Odd] {
            for w in -n..=n {
                let (l, r) = (self.get(parity, w), other.get(parity, w));
                if l != r {
                    return Some(SeriesMismatch {
                        parity,
                        weight: w,
                        left: l,
                        right: r,
                    });
                }
            }
        }
        None
    }

    /// Equality over the shared window.
    pub fn agrees_with(&self, other: &GradedSeries) -> bool {
        self.first_mismatch(other).is_none()
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSeries(N={}", self.truncation)?;
        for parity in [Parity::Even, Parity::Odd] {
            let terms: Vec<String> = self
                .weights()
                .filter(|&w| self.get(parity, w) != 0)
                .map(|w| format!("{}@{}", self.get(parity, w), w))
                .collect();
            write!(f, " {:?}[{}]", parity, terms.join(" "))?;
        }
        write!(f, ")")
    }
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GradedSeries", 3)?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("weights", &[-(self.truncation as i64), self.truncation as i64])?;
        st.serialize_field("table", &self.table)?;
        st.end()
    }
}
