//! Polyhedral cone algebra in exact arithmetic.
//!
//! A cone is held either by generators (V-representation) or by bounding
//! functionals (H-representation). Rows are kept as primitive integer
//! vectors: denominators cleared, divided by the gcd, sign preserved —
//! rays are directed, so only positive scaling is allowed. Row sets are
//! sorted and deduplicated, making equal cones compare equal and every
//! derived output reproducible bit for bit.

pub mod dd;
pub mod linalg;
pub mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{
    format_rational, integers_to_rationals, parse_rational, primitive_integer_vector,
    primitive_of_integers, Rational,
};
use crate::Result;

use linalg::{bareiss_rank, dot_rational_int, integer_kernel_basis};

/// Cone spanned by nonnegative combinations of finitely many generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeVRep {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
}

/// Cone `{ x : g.x >= 0 for all stored functionals g }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeHRep {
    dim: usize,
    constraints: Vec<Vec<BigInt>>,
}

fn canonical_rows(dim: usize, rows: Vec<Vec<Rational>>) -> Result<Vec<Vec<BigInt>>> {
    if dim == 0 {
        return Err(Error::Invalid("ambient dimension must be positive".into()));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in &rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
        }
        // zero rows carry no information in either representation
        if let Some(p) = primitive_integer_vector(row) {
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn canonical_integer_rows(dim: usize, rows: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigInt>>> {
    if dim == 0 {
        return Err(Error::Invalid("ambient dimension must be positive".into()));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
        }
        if let Some(p) = primitive_of_integers(&row) {
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Result of an H-representation membership test.
#[derive(Debug, Clone)]
pub enum HMembership {
    Member,
    /// Certificate: a stored functional that is negative on the vector.
    NotMember { violated: Vec<Rational> },
}

impl HMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, HMembership::Member)
    }
}

/// Result of a V-representation membership test.
#[derive(Debug, Clone)]
pub enum VMembership {
    /// Certificate: nonnegative coefficients over the generators.
    Member { coefficients: Vec<Rational> },
    /// Certificate: functional nonnegative on every generator, negative on
    /// the vector.
    NotMember { separator: Vec<Rational> },
}

impl VMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, VMembership::Member { .. })
    }
}

impl ConeVRep {
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(ConeVRep { dim, generators: canonical_rows(dim, generators)? })
    }

    pub fn from_integer_rows(dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(ConeVRep { dim, generators: canonical_integer_rows(dim, generators)? })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators_rational(&self) -> Vec<Vec<Rational>> {
        self.generators.iter().map(|g| integers_to_rationals(g)).collect()
    }

    /// Exact conic-combination membership with certificates; scale
    /// invariant, so the target may have arbitrary denominators.
    pub fn contains(&self, x: &[Rational]) -> Result<VMembership> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().all(|v| v.is_zero()) {
            return Ok(VMembership::Member {
                coefficients: vec![Rational::zero(); self.generators.len()],
            });
        }
        // clear denominators; membership in a cone is scale invariant
        let mut scale = BigInt::from(1);
        for v in x {
            scale = num_integer::lcm(scale, v.denom().clone());
        }
        let target: Vec<BigInt> = x.iter().map(|v| v.numer() * (&scale / v.denom())).collect();
        match lp::conic_membership(&self.generators, &target) {
            lp::Conic::Member { coefficients } => {
                let s = Rational::from_integer(scale);
                Ok(VMembership::Member {
                    coefficients: coefficients.into_iter().map(|c| c / &s).collect(),
                })
            }
            lp::Conic::NotMember { separator } => Ok(VMembership::NotMember { separator }),
        }
    }
}

impl ConeHRep {
    pub fn new(dim: usize, constraints: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(ConeHRep { dim, constraints: canonical_rows(dim, constraints)? })
    }

    pub fn from_integer_rows(dim: usize, constraints: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(ConeHRep { dim, constraints: canonical_integer_rows(dim, constraints)? })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Vec<BigInt>] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn constraints_rational(&self) -> Vec<Vec<Rational>> {
        self.constraints.iter().map(|g| integers_to_rationals(g)).collect()
    }

    /// Checks every stored functional; on failure returns a violated one.
    pub fn contains(&self, x: &[Rational]) -> Result<HMembership> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        for g in &self.constraints {
            if dot_rational_int(x, g).is_negative() {
                return Ok(HMembership::NotMember { violated: integers_to_rationals(g) });
            }
        }
        Ok(HMembership::Member)
    }

    /// Rank of the functionals tight at `x`. Requires `x` in the cone.
    pub fn tight_rank(&self, x: &[Rational]) -> Result<usize> {
        if !self.contains(x)?.is_member() {
            return Err(Error::NotInCone);
        }
        let tight: Vec<Vec<BigInt>> = self
            .constraints
            .iter()
            .filter(|g| dot_rational_int(x, g).is_zero())
            .cloned()
            .collect();
        Ok(bareiss_rank(&tight))
    }

    /// A nonzero member spans an extreme ray exactly when its tight
    /// functionals have rank `dim - 1` (the minimal face containing it is a
    /// line; implicit equalities are always part of the tight set, so the
    /// same test covers cones that are not full-dimensional).
    pub fn is_extreme_ray(&self, x: &[Rational]) -> Result<bool> {
        if x.iter().all(|v| v.is_zero()) {
            return Ok(false);
        }
        Ok(self.tight_rank(x)? == self.dim - 1)
    }

    /// Basis of the lineality space `{ x : g.x = 0 for all g }`.
    pub fn lineality_basis(&self) -> Vec<Vec<Rational>> {
        integer_kernel_basis(&self.constraints, self.dim)
    }

    /// Extreme rays by incremental double description; see [`dd`].
    pub fn enumerate_rays(&self) -> Result<ConeVRep> {
        dd::enumerate_rays(self, |_| {})
    }

    /// Same, reporting progress after each constraint insertion.
    pub fn enumerate_rays_with(
        &self,
        progress: impl FnMut(dd::DdProgress),
    ) -> Result<ConeVRep> {
        dd::enumerate_rays(self, progress)
    }

    /// Drops every functional that is a nonnegative combination of the
    /// others (exact LP per constraint).
    pub fn remove_redundant(&self) -> ConeHRep {
        let mut kept: Vec<Vec<BigInt>> = self.constraints.clone();
        let mut i = 0;
        while i < kept.len() {
            let candidate = kept[i].clone();
            let others: Vec<Vec<BigInt>> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            match lp::conic_membership(&others, &candidate) {
                lp::Conic::Member { .. } => {
                    kept.remove(i);
                }
                lp::Conic::NotMember { .. } => i += 1,
            }
        }
        ConeHRep { dim: self.dim, constraints: kept }
    }
}

/// The dual of a V-representation: the same vectors, reread as the
/// constraints bounding the dual cone `C* = { g : g.x >= 0 for all x in C }`.
pub fn dual_vrep_to_hrep(c: &ConeVRep) -> Result<ConeHRep> {
    if c.generators.is_empty() {
        return Err(Error::Invalid("dual of an empty generator set".into()));
    }
    Ok(ConeHRep { dim: c.dim, constraints: c.generators.clone() })
}

/// The dual of an H-representation: the stored functionals generate the
/// dual cone.
pub fn dual_hrep_to_vrep(c: &ConeHRep) -> ConeVRep {
    ConeVRep { dim: c.dim, generators: c.constraints.clone() }
}

/// Irredundant H-representation of a V-cone: the facets are the extreme
/// rays of the dual.
pub fn facets_of_vrep(c: &ConeVRep) -> Result<ConeHRep> {
    let rays = dual_vrep_to_hrep(c)?.enumerate_rays()?;
    Ok(ConeHRep { dim: c.dim, constraints: rays.generators })
}

fn kron(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn product_rows(factors: &[&[Vec<BigInt>]]) -> Vec<Vec<BigInt>> {
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for rows in factors {
        let mut next = Vec::with_capacity(acc.len() * rows.len());
        for a in &acc {
            for b in rows.iter() {
                next.push(kron(a, b));
            }
        }
        acc = next;
    }
    acc
}

/// Smallest cone containing all elementwise tensor products of the factors'
/// generators. Coordinates follow the row-major Kronecker layout, matching
/// the canonical word order of tensors.
pub fn min_tensor_product(factors: &[&ConeVRep]) -> Result<ConeVRep> {
    if factors.is_empty() {
        return Err(Error::Invalid("tensor product of zero cones".into()));
    }
    let dim = factors.iter().map(|c| c.dim).product();
    let rows = product_rows(&factors.iter().map(|c| c.generators()).collect::<Vec<_>>());
    ConeVRep::from_integer_rows(dim, rows)
}

/// Largest cone on which all tensor products of the factors' bounding
/// functionals are nonnegative.
pub fn max_tensor_product(factors: &[&ConeHRep]) -> Result<ConeHRep> {
    if factors.is_empty() {
        return Err(Error::Invalid("tensor product of zero cones".into()));
    }
    let dim = factors.iter().map(|c| c.dim).product();
    let rows = product_rows(&factors.iter().map(|c| c.constraints()).collect::<Vec<_>>());
    ConeHRep::from_integer_rows(dim, rows)
}

/// Contracts the first tensor factor of `z` (dim `d1 * d2`) with the
/// functional `g` (dim `d1`), leaving a vector of dim `d2`.
pub fn contract_first_factor(z: &[Rational], g: &[BigInt], d2: usize) -> Vec<Rational> {
    let d1 = g.len();
    debug_assert_eq!(z.len(), d1 * d2);
    let mut out = vec![Rational::zero(); d2];
    for i in 0..d1 {
        if g[i].is_zero() {
            continue;
        }
        let gi = Rational::from_integer(g[i].clone());
        for (j, o) in out.iter_mut().enumerate() {
            let v = &z[i * d2 + j];
            if !v.is_zero() {
                *o += &gi * v;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    V,
    H,
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep::V => write!(f, "V"),
            Rep::H => write!(f, "H"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCone {
    V(ConeVRep),
    H(ConeHRep),
}

impl AnyCone {
    pub fn dim(&self) -> usize {
        match self {
            AnyCone::V(c) => c.dim,
            AnyCone::H(c) => c.dim,
        }
    }

    pub fn rep(&self) -> Rep {
        match self {
            AnyCone::V(_) => Rep::V,
            AnyCone::H(_) => Rep::H,
        }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        match self {
            AnyCone::V(c) => &c.generators,
            AnyCone::H(c) => &c.constraints,
        }
    }
}

/// Serializes in the `bellcone-cone v1` format: one vector per line,
/// space-separated rationals in canonical coordinate order.
pub fn write_cone(rep: Rep, dim: usize, rows: &[Vec<BigInt>]) -> String {
    let mut out = format!("bellcone-cone v1; dim={dim}; rep={rep}; count={}\n", rows.len());
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .map(|x| format_rational(&Rational::from_integer(x.clone())))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn cone_to_string(c: &AnyCone) -> String {
    write_cone(c.rep(), c.dim(), c.rows())
}

pub fn parse_cone(text: &str) -> Result<AnyCone> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty cone document".into()))?;
    let mut parts = header.split(';').map(str::trim);
    if parts.next() != Some("bellcone-cone v1") {
        return Err(Error::Parse("expected header `bellcone-cone v1; ...`".into()));
    }
    let mut dim = None;
    let mut rep = None;
    let mut count = None;
    for part in parts {
        match part.split_once('=') {
            Some(("dim", v)) => {
                dim = Some(
                    v.trim().parse::<usize>().map_err(|_| Error::Parse(format!("invalid dim `{v}`")))?,
                )
            }
            Some(("rep", v)) => {
                rep = Some(match v.trim() {
                    "V" => Rep::V,
                    "H" => Rep::H,
                    other => return Err(Error::Parse(format!("invalid rep `{other}`"))),
                })
            }
            Some(("count", v)) => {
                count = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid count `{v}`")))?,
                )
            }
            _ => return Err(Error::Parse(format!("unrecognized header field `{part}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("missing dim in header".into()))?;
    let rep = rep.ok_or_else(|| Error::Parse("missing rep in header".into()))?;
    let count = count.ok_or_else(|| Error::Parse("missing count in header".into()))?;

    let mut rows = Vec::with_capacity(count);
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<Rational>>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))?;
        if row.len() != dim {
            return Err(Error::Parse(format!(
                "line {}: {} coordinates, expected {dim}",
                lineno + 2,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != count {
        return Err(Error::Parse(format!(
            "header declares count={count} but document has {} rows",
            rows.len()
        )));
    }
    Ok(match rep {
        Rep::V => AnyCone::V(ConeVRep::new(dim, rows)?),
        Rep::H => AnyCone::H(ConeHRep::new(dim, rows)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn construction_canonicalizes() {
        let c = ConeVRep::new(
            2,
            vec![rv(&[2, 4]), vec![rat(1, 2), rat_int(1)], rv(&[0, 0]), rv(&[-1, 0])],
        )
        .unwrap();
        // (2,4) and (1/2,1) collapse to (1,2); zero row dropped; sorted
        assert_eq!(c.generators(), &[bi(&[-1, 0]), bi(&[1, 2])]);
    }

    #[test]
    fn hrep_membership_with_certificate() {
        // nonnegative quadrant
        let h = ConeHRep::new(2, vec![rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        assert!(h.contains(&rv(&[3, 1])).unwrap().is_member());
        match h.contains(&rv(&[1, -2])).unwrap() {
            HMembership::NotMember { violated } => assert_eq!(violated, rv(&[0, 1])),
            HMembership::Member => panic!("expected violation"),
        }
    }

    #[test]
    fn vrep_membership_with_certificates() {
        let v = ConeVRep::new(2, vec![rv(&[1, 0]), rv(&[1, 1])]).unwrap();
        match v.contains(&[rat(3, 2), rat(1, 2)]).unwrap() {
            VMembership::Member { coefficients } => {
                // 3/2 = a + b, 1/2 = b
                assert_eq!(coefficients, vec![rat_int(1), rat(1, 2)]);
            }
            _ => panic!("expected member"),
        }
        match v.contains(&rv(&[0, 1])).unwrap() {
            VMembership::NotMember { separator } => {
                for g in v.generators() {
                    assert!(!dot_rational_int(&separator, g).is_negative());
                }
            }
            _ => panic!("expected non-member"),
        }
    }

    #[test]
    fn extreme_ray_rank_test() {
        let h = ConeHRep::new(3, vec![rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 1])]).unwrap();
        assert!(h.is_extreme_ray(&rv(&[1, 0, 0])).unwrap());
        assert!(!h.is_extreme_ray(&rv(&[1, 1, 0])).unwrap());
        assert!(!h.is_extreme_ray(&rv(&[0, 0, 0])).unwrap());
        assert!(h.is_extreme_ray(&rv(&[-1, 0, 0])).is_err());
    }

    #[test]
    fn redundant_constraint_is_removed() {
        let h = ConeHRep::new(2, vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])]).unwrap();
        let r = h.remove_redundant();
        assert_eq!(r.constraints(), &[bi(&[0, 1]), bi(&[1, 0])]);
    }

    #[test]
    fn lineality_detected() {
        let h = ConeHRep::new(2, vec![rv(&[1, 0])]).unwrap();
        assert_eq!(h.lineality_basis().len(), 1);
        match h.enumerate_rays() {
            Err(Error::NotPointed { lineality_basis }) => {
                assert_eq!(lineality_basis.len(), 1)
            }
            other => panic!("expected lineality report, got {other:?}"),
        }
    }

    #[test]
    fn cone_format_round_trip() {
        let v = ConeVRep::new(3, vec![rv(&[1, 2, 3]), rv(&[-1, 1, 0])]).unwrap();
        let text = cone_to_string(&AnyCone::V(v.clone()));
        assert_eq!(
            text,
            "bellcone-cone v1; dim=3; rep=V; count=2\n-1 1 0\n1 2 3\n"
        );
        match parse_cone(&text).unwrap() {
            AnyCone::V(back) => assert_eq!(back, v),
            _ => panic!("wrong rep"),
        }
        assert!(parse_cone("bellcone-cone v1; dim=2; rep=V; count=3\n1 0\n").is_err());
    }

    #[test]
    fn kron_layout_is_row_major() {
        let a = ConeVRep::new(2, vec![rv(&[1, 2])]).unwrap();
        let b = ConeVRep::new(2, vec![rv(&[3, 5])]).unwrap();
        let p = min_tensor_product(&[&a, &b]).unwrap();
        assert_eq!(p.generators(), &[bi(&[3, 5, 6, 10])]);
        // single factor is the identity
        let single = min_tensor_product(&[&a]).unwrap();
        assert_eq!(single, a);
    }
}
