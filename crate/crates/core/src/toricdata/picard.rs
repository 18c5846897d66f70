//! Cokernel models of stacky Picard groups.
//!
//! For a set `S` of rays the model is `coker(Z^3 -> Z^S, u -> (<u, b_i>))`.
//! Forgetting rays induces the projection maps between models.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::StructureError;
use crate::snf::{smith_normal_form, IntMatrix, SmithForm};
use crate::toricdata::fan::StackyFan;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaySubset {
    Whole,
    Cone(usize),
    Edge(usize),
}

/// A class in a cokernel model: torsion residues and free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CokerClass {
    pub torsion: Vec<u64>,
    pub free: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct CokernelModel {
    /// Point indices of the rays, ascending.
    rays: Vec<usize>,
    presentation: IntMatrix,
    smith: SmithForm,
    /// Slots of `u * x` that carry torsion, with their moduli.
    torsion_slots: Vec<(usize, u64)>,
    /// Slots of `u * x` that carry free coordinates.
    free_slots: Vec<usize>,
}

impl CokernelModel {
    /// Model for an explicit list of ray points (as height-one vectors).
    pub fn from_rays(ray_ids: Vec<usize>, rays: &[[i64; 3]]) -> Result<Self, StructureError> {
        if rays.is_empty() {
            return Err(StructureError::EmptySubset);
        }
        let rows: Vec<Vec<i64>> = rays.iter().map(|r| r.to_vec()).collect();
        let presentation = IntMatrix::from_rows(&rows);
        let smith = smith_normal_form(&presentation);
        let n = presentation.rows();
        let diag_len = n.min(3);
        let mut torsion_slots = Vec::new();
        let mut free_slots = Vec::new();
        for k in 0..n {
            let d = if k < diag_len {
                smith.d[(k, k)].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                free_slots.push(k);
            } else {
                let d = d.to_u64().expect("small invariant factor");
                if d > 1 {
                    torsion_slots.push((k, d));
                }
            }
        }
        Ok(CokernelModel {
            rays: ray_ids,
            presentation,
            smith,
            torsion_slots,
            free_slots,
        })
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.presentation
    }

    pub fn torsion_factors(&self) -> Vec<u64> {
        self.torsion_slots.iter().map(|&(_, d)| d).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.free_slots.len()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> u64 {
        self.torsion_slots.iter().map(|&(_, d)| d).product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_slots.is_empty()
    }

    /// Class of a vector in `Z^S` (coordinates ordered like `rays()`).
    pub fn class_of(&self, x: &[i64]) -> CokerClass {
        assert_eq!(x.len(), self.rays.len());
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let y = self.smith.u.mul_vec(&xb);
        CokerClass {
            torsion: self
                .torsion_slots
                .iter()
                .map(|&(k, d)| {
                    let m = BigInt::from(d);
                    (((&y[k] % &m) + &m) % &m).to_u64().expect("residue")
                })
                .collect(),
            free: self
                .free_slots
                .iter()
                .map(|&k| y[k].to_i64().expect("small free coordinate"))
                .collect(),
        }
    }

    /// A representative vector in `Z^S` of a class.
    pub fn lift(&self, class: &CokerClass) -> Vec<i64> {
        let n = self.rays.len();
        let mut y = vec![BigInt::zero(); n];
        for (&(k, _), &t) in self.torsion_slots.iter().zip(&class.torsion) {
            y[k] = BigInt::from(t);
        }
        for (&k, &f) in self.free_slots.iter().zip(&class.free) {
            y[k] = BigInt::from(f);
        }
        self.smith
            .u_inv
            .mul_vec(&y)
            .iter()
            .map(|v| v.to_i64().expect("small lift"))
            .collect()
    }

    /// Class of the basis vector for the ray with point index `ray`.
    pub fn basis_class(&self, ray: usize) -> Option<CokerClass> {
        let pos = self.rays.iter().position(|&r| r == ray)?;
        let mut x = vec![0i64; self.rays.len()];
        x[pos] = 1;
        Some(self.class_of(&x))
    }

    /// Projection to the model of a sub-collection of rays.
    pub fn project(&self, class: &CokerClass, target: &CokernelModel) -> Result<CokerClass, StructureError> {
        let lift = self.lift(class);
        let mut restricted = Vec::with_capacity(target.rays.len());
        for &ray in &target.rays {
            match self.rays.iter().position(|&r| r == ray) {
                Some(p) => restricted.push(lift[p]),
                None => {
                    return Err(StructureError::NotASubset {
                        sub: target.rays.clone(),
                        sup: self.rays.clone(),
                    })
                }
            }
        }
        Ok(target.class_of(&restricted))
    }

    /// All classes of a finite model, sorted.
    pub fn elements(&self) -> Option<Vec<CokerClass>> {
        if !self.is_finite() {
            return None;
        }
        let factors = self.torsion_factors();
        let mut out = vec![Vec::new()];
        for &d in &factors {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    (0..d).map(move |t| {
                        let mut v = prefix.clone();
                        v.push(t);
                        v
                    })
                })
                .collect();
        }
        Some(
            out.into_iter()
                .map(|torsion| CokerClass {
                    torsion,
                    free: vec![],
                })
                .collect(),
        )
    }

    pub fn add(&self, a: &CokerClass, b: &CokerClass) -> CokerClass {
        CokerClass {
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion_slots)
                .map(|((x, y), &(_, d))| (x + y) % d)
                .collect(),
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn zero(&self) -> CokerClass {
        CokerClass {
            torsion: vec![0; self.torsion_slots.len()],
            free: vec![0; self.free_slots.len()],
        }
    }
}

/// Cokernel model for the whole fan, one cone, or one edge.
pub fn stacky_picard(fan: &StackyFan, subset: RaySubset) -> Result<CokernelModel, StructureError> {
    let ids: Vec<usize> = match subset {
        RaySubset::Whole => fan.rays(),
        RaySubset::Cone(t) => {
            let mut v = fan.triangles()[t].to_vec();
            v.sort();
            v
        }
        RaySubset::Edge(e) => {
            let (a, b) = fan.edges()[e].ends;
            vec![a, b]
        }
    };
    let rays: Vec<[i64; 3]> = ids.iter().map(|&i| fan.point(i).ray()).collect();
    CokernelModel::from_rays(ids, &rays)
}
