//! Normal form `(r, m, s)` of a Calabi-Yau 3-cone.
//!
//! After a unimodular, height-preserving change of coordinates the three
//! rays become `(r, -s, 1)`, `(0, m, 1)`, `(0, 0, 1)` with `0 <= s < r`.
//! Every assignment of the input rays to these three slots is tried and the
//! lexicographically smallest `(r, m, s)` wins, so the result does not depend
//! on input order or coordinates.

use num_integer::Integer;
use serde::Serialize;

use crate::error::InputError;
use crate::snf::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NormalFormParams {
    pub r: u64,
    pub m: u64,
    pub s: u64,
}

impl NormalFormParams {
    pub fn new(r: u64, m: u64, s: u64) -> Result<Self, InputError> {
        if r == 0 || m == 0 || s >= r {
            return Err(InputError::InvalidNormalForm {
                r: r as i64,
                m: m as i64,
                s: s as i64,
            });
        }
        Ok(NormalFormParams { r, m, s })
    }

    pub fn order(&self) -> u64 {
        self.r * self.m
    }

    /// Rays `b1, b2, b3` of the normal form as planar points.
    pub fn rays(&self) -> [[i64; 2]; 3] {
        [
            [self.r as i64, -(self.s as i64)],
            [0, self.m as i64],
            [0, 0],
        ]
    }

    /// Every valid parameter triple with `r, m <= bound`.
    pub fn enumerate(bound: u64) -> impl Iterator<Item = NormalFormParams> {
        (1..=bound).flat_map(move |r| {
            (1..=bound).flat_map(move |m| (0..r).map(move |s| NormalFormParams { r, m, s }))
        })
    }

    /// Every valid parameter triple with `r * m <= bound`.
    pub fn enumerate_by_order(bound: u64) -> impl Iterator<Item = NormalFormParams> {
        (1..=bound).flat_map(move |r| {
            (1..=bound / r).flat_map(move |m| (0..r).map(move |s| NormalFormParams { r, m, s }))
        })
    }
}

impl std::fmt::Display for NormalFormParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(r={}, m={}, s={})", self.r, self.m, self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeNormalForm {
    pub params: NormalFormParams,
    /// Maps each input ray `(x, y, 1)` to its normal-form ray.
    pub basis_change: IntMatrix,
    /// `ray_order[k]` is the input position that becomes `b_{k+1}`.
    pub ray_order: [usize; 3],
}

const ORDERINGS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [0, 2, 1],
    [2, 1, 0],
    [1, 0, 2],
];

/// Normalizes the cone spanned by three height-one rays.
pub fn normalize_cone(rays: [[i64; 3]; 3]) -> Result<ConeNormalForm, InputError> {
    for ray in &rays {
        if ray[2] != 1 {
            return Err(InputError::Malformed(format!(
                "ray {ray:?} is not at height one"
            )));
        }
    }
    let planar = rays.map(|r| [r[0] as i128, r[1] as i128]);
    let doubled_area = {
        let [a, b, c] = planar;
        ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs()
    };
    if doubled_area == 0 {
        return Err(InputError::DegenerateTriangle {
            triangle: 0,
            vertices: [0, 1, 2],
        });
    }

    let mut best: Option<(NormalFormParams, [[i128; 3]; 3], [usize; 3])> = None;
    for order in ORDERINGS {
        let (params, affine) = normalize_ordered(
            planar[order[0]],
            planar[order[1]],
            planar[order[2]],
        )?;
        if best.as_ref().is_none_or(|(p, _, _)| params < *p) {
            best = Some((params, affine, order));
        }
    }
    let (params, affine, ray_order) = best.expect("six orderings tried");
    debug_assert_eq!(params.order() as i128, doubled_area);
    let rows: Vec<Vec<i64>> = affine
        .iter()
        .map(|row| row.iter().map(|&x| i64::try_from(x).expect("bounded")).collect())
        .collect();
    Ok(ConeNormalForm {
        params,
        basis_change: IntMatrix::from_rows(&rows),
        ray_order,
    })
}

/// Normal form for a fixed assignment `b1 = a`, `b2 = b`, `b3 = c`,
/// together with the 3×3 height-preserving matrix realizing it.
fn normalize_ordered(
    a: [i128; 2],
    b: [i128; 2],
    c: [i128; 2],
) -> Result<(NormalFormParams, [[i128; 3]; 3]), InputError> {
    let v2 = [b[0] - c[0], b[1] - c[1]];
    let v1 = [a[0] - c[0], a[1] - c[1]];
    let m = v2[0].gcd(&v2[1]);
    let w = [v2[0] / m, v2[1] / m];
    // Row (p, q) with p*w0 + q*w1 = 1 completes (w1, -w0) to a unimodular
    // matrix sending w to (0, 1).
    let eg = w[0].extended_gcd(&w[1]);
    debug_assert_eq!(eg.gcd, 1);
    let mut lin = [[w[1], -w[0]], [eg.x, eg.y]];
    let mut x = lin[0][0] * v1[0] + lin[0][1] * v1[1];
    let y = lin[1][0] * v1[0] + lin[1][1] * v1[1];
    if x < 0 {
        lin[0] = [-lin[0][0], -lin[0][1]];
        x = -x;
    }
    let r = x;
    let s = (-y).rem_euclid(r);
    // Shear (x, y) -> (x, y + k x) to land on y = -s.
    let k = (-s - y) / r;
    lin[1] = [lin[1][0] + k * lin[0][0], lin[1][1] + k * lin[0][1]];

    let shift = [
        -(lin[0][0] * c[0] + lin[0][1] * c[1]),
        -(lin[1][0] * c[0] + lin[1][1] * c[1]),
    ];
    let affine = [
        [lin[0][0], lin[0][1], shift[0]],
        [lin[1][0], lin[1][1], shift[1]],
        [0, 0, 1],
    ];
    let to_u64 = |v: i128| u64::try_from(v).map_err(|_| InputError::Overflow(v.to_string()));
    let params = NormalFormParams::new(to_u64(r)?, to_u64(m)?, to_u64(s)?)?;
    Ok((params, affine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn nf(rays: [[i64; 2]; 3]) -> ConeNormalForm {
        normalize_cone(rays.map(|[x, y]| [x, y, 1])).unwrap()
    }

    fn check_basis_change(input: [[i64; 2]; 3], form: &ConeNormalForm) {
        let target = form.params.rays();
        for (k, &pos) in form.ray_order.iter().enumerate() {
            let [x, y] = input[pos];
            let image = form
                .basis_change
                .mul_vec(&[BigInt::from(x), BigInt::from(y), BigInt::from(1)]);
            let expect = [target[k][0], target[k][1], 1].map(BigInt::from);
            assert_eq!(image, expect.to_vec(), "ray {k}");
        }
        let det = form.basis_change.det();
        assert!(det == BigInt::from(1) || det == BigInt::from(-1));
    }

    /// Oracle: search height-preserving unimodular maps with entries in
    /// [-bound, bound] and every ordering for the smallest reachable normal form.
    fn search_oracle(input: [[i64; 2]; 3], bound: i64) -> (u64, u64, u64) {
        let mut best: Option<(u64, u64, u64)> = None;
        let range: Vec<i64> = (-bound..=bound).collect();
        for &a in &range {
            for &b in &range {
                for &c in &range {
                    for &d in &range {
                        if (a * d - b * c).abs() != 1 {
                            continue;
                        }
                        for perm in ORDERINGS {
                            let p = perm.map(|i| input[i]);
                            let map = |q: [i64; 2]| {
                                let v = [q[0] - p[2][0], q[1] - p[2][1]];
                                [a * v[0] + b * v[1], c * v[0] + d * v[1]]
                            };
                            let (b1, b2) = (map(p[0]), map(p[1]));
                            if b2[0] == 0 && b2[1] > 0 && b1[0] > 0 && -b1[1] >= 0 && -b1[1] < b1[0] {
                                let cand = (b1[0] as u64, b2[1] as u64, (-b1[1]) as u64);
                                if best.is_none_or(|x| cand < x) {
                                    best = Some(cand);
                                }
                            }
                        }
                    }
                }
            }
        }
        best.expect("oracle found no normal form")
    }

    #[test]
    fn smooth_cone() {
        let input = [[1, 0], [0, 1], [0, 0]];
        let form = nf(input);
        assert_eq!((form.params.r, form.params.m, form.params.s), (1, 1, 0));
        check_basis_change(input, &form);
    }

    #[test]
    fn local_p2_orbifold() {
        let input = [[-1, -1], [1, 0], [0, 1]];
        let form = nf(input);
        assert_eq!(search_oracle(input, 3), (3, 1, 1));
        assert_eq!((form.params.r, form.params.m, form.params.s), (3, 1, 1));
        check_basis_change(input, &form);
    }

    #[test]
    fn doubled_unit_triangle() {
        let input = [[2, 0], [0, 2], [0, 0]];
        let form = nf(input);
        assert_eq!(search_oracle(input, 2), (2, 2, 0));
        assert_eq!((form.params.r, form.params.m, form.params.s), (2, 2, 0));
        check_basis_change(input, &form);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(normalize_cone([[0, 0, 1], [1, 1, 1], [2, 2, 1]]).is_err());
        assert!(normalize_cone([[0, 0, 2], [1, 0, 1], [0, 1, 1]]).is_err());
    }

    #[test]
    fn area_matches_order() {
        for params in NormalFormParams::enumerate(6) {
            let form = nf(params.rays());
            assert_eq!(form.params.order(), params.order());
            check_basis_change(params.rays(), &form);
        }
    }

    proptest! {
        #[test]
        fn invariant_under_recoordinatization(
            r in 1i64..7, m in 1i64..7, s_seed in 0i64..7,
            a in -3i64..4, b in -3i64..4, k in -3i64..4,
            tx in -5i64..6, ty in -5i64..6, flip in any::<bool>(),
        ) {
            let s = s_seed % r;
            // Build an arbitrary unimodular matrix as a product of elementary ones.
            let e1 = [[1, a], [0, 1]];
            let e2 = [[1, 0], [b, 1]];
            let e3 = [[1, k], [0, 1]];
            let mul = |x: [[i64; 2]; 2], y: [[i64; 2]; 2]| {
                let mut o = [[0; 2]; 2];
                for i in 0..2 { for j in 0..2 { o[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j]; } }
                o
            };
            let mut g = mul(mul(e1, e2), e3);
            if flip { g[0] = [-g[0][0], -g[0][1]]; }
            let base = [[r, -s], [0, m], [0, 0]];
            let moved = base.map(|[x, y]| [g[0][0] * x + g[0][1] * y + tx, g[1][0] * x + g[1][1] * y + ty]);
            let direct = nf(base).params;
            let moved_nf = nf(moved);
            prop_assert_eq!(direct, moved_nf.params);
            check_basis_change(moved, &moved_nf);
        }
    }
}
