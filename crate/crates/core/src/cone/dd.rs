//! Incremental double description: converts an H-representation into its
//! extreme rays.
//!
//! The cone must be pointed (no lineality); a nonzero kernel of the
//! constraint matrix is reported as a structured error carrying a basis of
//! the lineality space. Processing starts from a simplicial subcone cut out
//! by `dim` independent constraints and inserts the remaining constraints
//! one at a time, combining adjacent positive/negative ray pairs on the cut
//! hyperplane. Adjacency is decided combinatorially by saturation-set
//! inclusion. The remaining constraints are inserted sorted by how many of
//! the initial rays they violate (ascending), ties by canonical order, so
//! runs are reproducible.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::cone::linalg::{dot, greedy_independent_rows, invert_columns};
use crate::cone::{ConeHRep, ConeVRep};
use crate::error::Error;
use crate::rational::{primitive_integer_vector, primitive_of_integers};
use crate::Result;

/// Reported after each constraint insertion.
#[derive(Debug, Clone, Copy)]
pub struct DdProgress {
    pub inserted: usize,
    pub total: usize,
    pub rays: usize,
}

/// Set of constraint indices a ray saturates, as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SatSet(Vec<u64>);

impl SatSet {
    fn empty(bits: usize) -> Self {
        SatSet(vec![0; bits.div_ceil(64)])
    }

    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1u64 << (bit % 64);
    }

    fn intersect(&self, other: &SatSet) -> SatSet {
        SatSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    /// `self` is a subset of `other`.
    fn is_subset_of(&self, other: &SatSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

struct Ray {
    coords: Vec<BigInt>,
    sat: SatSet,
}

pub fn enumerate_rays(h: &ConeHRep, mut progress: impl FnMut(DdProgress)) -> Result<ConeVRep> {
    let dim = h.dim();
    let cons = h.constraints();
    let m = cons.len();
    if m == 0 {
        return Err(Error::Invalid("ray enumeration needs at least one constraint".into()));
    }

    let lineality = h.lineality_basis();
    if !lineality.is_empty() {
        return Err(Error::NotPointed { lineality_basis: lineality });
    }

    // Initial simplicial cone from dim independent constraints; ray j is the
    // j-th column of the inverse, so g_i . r_j = delta_ij.
    let basis_idx = greedy_independent_rows(cons, dim)
        .expect("zero lineality implies the constraints have full rank");
    let basis_rows: Vec<Vec<BigInt>> = basis_idx.iter().map(|&i| cons[i].clone()).collect();
    let columns = invert_columns(&basis_rows).expect("selected rows are independent");

    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for (j, col) in columns.iter().enumerate() {
        let coords = primitive_integer_vector(col).expect("inverse columns are nonzero");
        let mut sat = SatSet::empty(m);
        for (i, &ci) in basis_idx.iter().enumerate() {
            if i != j {
                sat.set(ci);
            }
        }
        rays.push(Ray { coords, sat });
    }

    // Remaining constraints, sorted by the number of initial rays they
    // violate, ascending.
    let in_basis: Vec<bool> = {
        let mut v = vec![false; m];
        for &i in &basis_idx {
            v[i] = true;
        }
        v
    };
    let mut order: Vec<(usize, usize)> = (0..m)
        .filter(|&i| !in_basis[i])
        .map(|i| {
            let violated =
                rays.iter().filter(|r| dot(&cons[i], &r.coords).is_negative()).count();
            (violated, i)
        })
        .collect();
    order.sort();

    let total = order.len();
    for (step, &(_, ci)) in order.iter().enumerate() {
        insert_constraint(&mut rays, cons, ci, dim, m);
        progress(DdProgress { inserted: step + 1, total, rays: rays.len() });
    }

    ConeVRep::from_integer_rows(dim, rays.into_iter().map(|r| r.coords).collect())
}

fn insert_constraint(rays: &mut Vec<Ray>, cons: &[Vec<BigInt>], ci: usize, dim: usize, m: usize) {
    let g = &cons[ci];
    let values: Vec<BigInt> =
        rays.par_iter().map(|r| dot(g, &r.coords)).collect();

    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if v.is_positive() {
            pos.push(i);
        } else if v.is_negative() {
            neg.push(i);
        } else {
            rays[i].sat.set(ci);
        }
    }
    if neg.is_empty() {
        return;
    }
    if pos.is_empty() {
        // every surviving ray saturates g; the violated ones just go
        let old = std::mem::take(rays);
        *rays = old
            .into_iter()
            .zip(&values)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r)
            .collect();
        return;
    }

    // Ray lists per saturated constraint, to narrow the adjacency scan.
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (i, r) in rays.iter().enumerate() {
        for b in r.sat.bits() {
            buckets[b].push(i as u32);
        }
    }

    // Adjacent (positive, negative) pairs spawn the rays on the hyperplane.
    let new_rays: Vec<Ray> = neg
        .par_iter()
        .flat_map_iter(|&qi| {
            let q = &rays[qi];
            let vq = &values[qi];
            let mut local = Vec::new();
            for &pi in &pos {
                let p = &rays[pi];
                let t = p.sat.intersect(&q.sat);
                // an edge needs d-2 independent tight constraints
                if t.count() + 2 < dim {
                    continue;
                }
                if !is_adjacent(&t, rays, &buckets, pi, qi) {
                    continue;
                }
                let vp = &values[pi];
                let coords: Vec<BigInt> = p
                    .coords
                    .iter()
                    .zip(&q.coords)
                    .map(|(pc, qc)| vp * qc - vq * pc)
                    .collect();
                let coords = primitive_of_integers(&coords)
                    .expect("combination of adjacent rays is nonzero");
                let mut sat = t;
                sat.set(ci);
                local.push(Ray { coords, sat });
            }
            local
        })
        .collect();

    // Keep nonnegative rays, add the new ones.
    let mut kept = Vec::with_capacity(pos.len() + new_rays.len() + rays.len());
    for (i, r) in std::mem::take(rays).into_iter().enumerate() {
        if !values[i].is_negative() {
            kept.push(r);
        }
    }
    kept.extend(new_rays);
    *rays = kept;
}

/// `p` and `q` are adjacent iff no other current ray saturates everything
/// they both saturate. Only rays saturating some element of `t` can do so.
fn is_adjacent(t: &SatSet, rays: &[Ray], buckets: &[Vec<u32>], pi: usize, qi: usize) -> bool {
    let Some(scan) = t
        .bits()
        .map(|b| &buckets[b])
        .min_by_key(|list| list.len())
    else {
        // empty tight set: every ray trivially contains it
        return rays.len() <= 2;
    };
    for &ri in scan {
        let ri = ri as usize;
        if ri != pi && ri != qi && t.is_subset_of(&rays[ri].sat) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use crate::rational::Rational;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn orthant_rays_are_the_standard_basis() {
        let h = ConeHRep::new(3, vec![rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 1])]).unwrap();
        let v = h.enumerate_rays().unwrap();
        assert_eq!(v.generators(), &[bi(&[0, 0, 1]), bi(&[0, 1, 0]), bi(&[1, 0, 0])]);
    }

    #[test]
    fn square_cone_rays() {
        // -x0 <= x(-1) <= x0, -x0 <= x(+1) <= x0 in coordinates (x-1, x0, x+1)
        let h = ConeHRep::new(
            3,
            vec![rv(&[-1, 1, 0]), rv(&[1, 1, 0]), rv(&[0, 1, -1]), rv(&[0, 1, 1])],
        )
        .unwrap();
        let v = h.enumerate_rays().unwrap();
        assert_eq!(
            v.generators(),
            &[bi(&[-1, 1, -1]), bi(&[-1, 1, 1]), bi(&[1, 1, -1]), bi(&[1, 1, 1])]
        );
    }

    #[test]
    fn origin_only_cone_has_no_rays() {
        let h = ConeHRep::new(
            2,
            vec![rv(&[1, 0]), rv(&[-1, 0]), rv(&[0, 1]), rv(&[0, -1])],
        )
        .unwrap();
        let v = h.enumerate_rays().unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn redundant_constraints_do_not_change_rays() {
        let plain = ConeHRep::new(2, vec![rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        let padded =
            ConeHRep::new(2, vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1]), rv(&[2, 3])]).unwrap();
        assert_eq!(
            plain.enumerate_rays().unwrap().generators(),
            padded.enumerate_rays().unwrap().generators()
        );
    }

    #[test]
    fn empty_hrep_is_rejected() {
        let h = ConeHRep::new(2, vec![]).unwrap();
        assert!(matches!(h.enumerate_rays(), Err(Error::Invalid(_))));
    }

    #[test]
    fn progress_is_reported_per_insertion() {
        let h = ConeHRep::new(
            3,
            vec![
                rv(&[1, 0, 0]),
                rv(&[0, 1, 0]),
                rv(&[0, 0, 1]),
                rv(&[1, 1, 1]),
                rv(&[1, 2, 1]),
            ],
        )
        .unwrap();
        let mut events = Vec::new();
        let _ = h.enumerate_rays_with(|p| events.push((p.inserted, p.total))).unwrap();
        assert_eq!(events, vec![(1, 2), (2, 2)]);
    }
}
