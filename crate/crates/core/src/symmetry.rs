//! The scenario symmetry group and its action on tensors.
//!
//! Elements combine a party relabeling, per-party setting swaps
//! (A_j^{-1} <-> A_j^{+1}) and per-observable outcome flips (A_j^s -> -A_j^s).
//! The letter 0 is the do-not-measure identity: it is never moved and never
//! acquires a sign. Every element acts on a tensor as a signed permutation
//! of the 3^n entries; covariant tensors transform by the same signed
//! permutation, which keeps the pairing invariant. In an element's normal
//! form the outcome flips refer to post-swap letters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cone::ConeVRep;
use crate::error::Error;
use crate::rational::{integers_to_rationals, primitive_integer_vector, Rational};
use crate::tensor::{check_party_count, check_same_n, entry_count, index_word, word_index, TensorLike};
use crate::Result;

/// Signed permutation acting on dense entry arrays:
/// `out[j] = sgn[j] * in[src[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    src: Vec<u32>,
    sgn: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(len: usize) -> Self {
        SignedPerm { src: (0..len as u32).collect(), sgn: vec![1; len] }
    }

    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.sgn.iter().all(|&s| s == 1)
            && self.src.iter().enumerate().all(|(j, &s)| s as usize == j)
    }

    /// `self` after `other`: applying the result equals applying `other`
    /// first, then `self`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        debug_assert_eq!(self.len(), other.len());
        let src = self.src.iter().map(|&j| other.src[j as usize]).collect();
        let sgn = self
            .src
            .iter()
            .zip(&self.sgn)
            .map(|(&j, &s)| s * other.sgn[j as usize])
            .collect();
        SignedPerm { src, sgn }
    }

    pub fn apply_rationals(&self, v: &[Rational]) -> Vec<Rational> {
        self.src
            .iter()
            .zip(&self.sgn)
            .map(|(&i, &s)| {
                let x = v[i as usize].clone();
                if s < 0 { -x } else { x }
            })
            .collect()
    }
}

/// One symmetry of the (n,2,2) scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryElement {
    n: usize,
    /// Party `j` is relabeled to `party_perm[j]` (0-based).
    party_perm: Vec<usize>,
    /// Exchange the two observables of party `j`.
    setting_swap: Vec<bool>,
    /// Negate `A_j^{-1}` / `A_j^{+1}`, applied after the swap.
    outcome_flip: Vec<(bool, bool)>,
}

impl SymmetryElement {
    pub fn new(
        party_perm: Vec<usize>,
        setting_swap: Vec<bool>,
        outcome_flip: Vec<(bool, bool)>,
    ) -> Result<Self> {
        let n = party_perm.len();
        check_party_count(n)?;
        if setting_swap.len() != n || outcome_flip.len() != n {
            return Err(Error::Invalid("per-party flag lengths must match the party count".into()));
        }
        let mut seen = vec![false; n];
        for &p in &party_perm {
            if p >= n || seen[p] {
                return Err(Error::Invalid("party_perm is not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(SymmetryElement { n, party_perm, setting_swap, outcome_flip })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect(), vec![false; n], vec![(false, false); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The action on dense entry arrays in canonical word order.
    pub fn signed_perm(&self) -> SignedPerm {
        let n = self.n;
        let len = entry_count(n);
        let mut target = vec![0u32; len];
        let mut tsign = vec![1i8; len];
        let mut relabeled = vec![0i8; n];
        for idx in 0..len {
            let word = index_word(n, idx);
            for (j, &l) in word.iter().enumerate() {
                relabeled[self.party_perm[j]] = l;
            }
            let mut sign = 1i8;
            let mut out = vec![0i8; n];
            for p in 0..n {
                let mut l = relabeled[p];
                if self.setting_swap[p] && l != 0 {
                    l = -l;
                }
                if l == -1 && self.outcome_flip[p].0 {
                    sign = -sign;
                }
                if l == 1 && self.outcome_flip[p].1 {
                    sign = -sign;
                }
                out[p] = l;
            }
            target[idx] = word_index(&out) as u32;
            tsign[idx] = sign;
        }
        // invert to source form
        let mut src = vec![0u32; len];
        let mut sgn = vec![1i8; len];
        for i in 0..len {
            src[target[i] as usize] = i as u32;
            sgn[target[i] as usize] = tsign[i];
        }
        SignedPerm { src, sgn }
    }

    /// Applies the symmetry to a tensor of either variance.
    pub fn act<T: TensorLike>(&self, t: &T) -> Result<T> {
        check_same_n(self.n, t.n())?;
        T::from_entries(self.n, self.signed_perm().apply_rationals(t.entries()))
    }

    pub fn is_involution(&self) -> bool {
        let sp = self.signed_perm();
        sp.compose(&sp).is_identity()
    }

    /// Every element, enumerated as party permutation x setting swaps x
    /// outcome flips; the order is n! * 2^n * 4^n.
    pub fn group(n: usize) -> Result<Vec<SymmetryElement>> {
        check_party_count(n)?;
        let perms = permutations(n);
        let mut out = Vec::with_capacity(perms.len() << (3 * n));
        for perm in &perms {
            for swap_mask in 0..(1u32 << n) {
                let swaps: Vec<bool> = (0..n).map(|j| swap_mask >> j & 1 == 1).collect();
                for flip_mask in 0..(1u32 << (2 * n)) {
                    let flips: Vec<(bool, bool)> = (0..n)
                        .map(|j| (flip_mask >> (2 * j) & 1 == 1, flip_mask >> (2 * j + 1) & 1 == 1))
                        .collect();
                    out.push(SymmetryElement {
                        n,
                        party_perm: perm.clone(),
                        setting_swap: swaps.clone(),
                        outcome_flip: flips,
                    });
                }
            }
        }
        Ok(out)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute_rec(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute_rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_rec(items, k + 1, out);
        items.swap(k, i);
    }
}

/// A symmetry that squares to the identity; checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution(SymmetryElement);

impl Involution {
    pub fn new(element: SymmetryElement) -> Result<Self> {
        if !element.is_involution() {
            return Err(Error::NotAnInvolution);
        }
        Ok(Involution(element))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Involution(SymmetryElement::identity(n)?))
    }

    pub fn element(&self) -> &SymmetryElement {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn act<T: TensorLike>(&self, t: &T) -> Result<T> {
        self.0.act(t)
    }

    pub fn signed_perm(&self) -> SignedPerm {
        self.0.signed_perm()
    }

    pub fn commutes_with(&self, other: &Involution) -> bool {
        let a = self.signed_perm();
        let b = other.signed_perm();
        a.compose(&b) == b.compose(&a)
    }
}

/// Parses the involution mini-language: comma-separated atoms
/// `swap(j)`, `flip(j,-1)`, `flip(j,+1)`, `pswap(i,j)` with 1-based party
/// indices, or `id` for the identity. The combined element must square to
/// the identity.
pub fn parse_involution(n: usize, spec: &str) -> Result<Involution> {
    check_party_count(n)?;
    let mut party_perm: Vec<usize> = (0..n).collect();
    let mut setting_swap = vec![false; n];
    let mut outcome_flip = vec![(false, false); n];

    let spec = spec.trim();
    if spec != "id" && !spec.is_empty() {
        for atom in split_atoms(spec)? {
            let atom = atom.trim();
            let (name, args) = atom
                .strip_suffix(')')
                .and_then(|a| a.split_once('('))
                .ok_or_else(|| Error::Parse(format!("malformed involution atom `{atom}`")))?;
            let args: Vec<&str> = args.split(',').map(str::trim).collect();
            match (name.trim(), args.as_slice()) {
                ("swap", [j]) => {
                    let j = parse_party(j, n)?;
                    setting_swap[j] = !setting_swap[j];
                }
                ("flip", [j, s]) => {
                    let j = parse_party(j, n)?;
                    match *s {
                        "-1" => outcome_flip[j].0 = !outcome_flip[j].0,
                        "+1" | "1" => outcome_flip[j].1 = !outcome_flip[j].1,
                        other => {
                            return Err(Error::Parse(format!("invalid flip setting `{other}`")))
                        }
                    }
                }
                ("pswap", [i, j]) => {
                    let i = parse_party(i, n)?;
                    let j = parse_party(j, n)?;
                    party_perm.swap(i, j);
                }
                _ => return Err(Error::Parse(format!("unknown involution atom `{atom}`"))),
            }
        }
    }
    Involution::new(SymmetryElement::new(party_perm, setting_swap, outcome_flip)?)
}

/// Splits on commas that are not inside parentheses.
fn split_atoms(spec: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in spec.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?
            }
            ',' if depth == 0 => {
                out.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced parentheses".into()));
    }
    out.push(&spec[start..]);
    Ok(out)
}

fn parse_party(s: &str, n: usize) -> Result<usize> {
    let j: usize = s
        .parse()
        .map_err(|_| Error::Parse(format!("invalid party index `{s}`")))?;
    if j == 0 || j > n {
        return Err(Error::Parse(format!("party index {j} out of range 1..={n}")));
    }
    Ok(j - 1)
}

// ---------------------------------------------------------------------------
// Orbit canonicalization
// ---------------------------------------------------------------------------

/// Canonical orbit representative: the minimum, in canonical entry order,
/// of the normalized tensors `act(g, t)` over the whole group. Two tensors
/// lie in the same orbit iff their canonical forms are equal. Also returns
/// the order of the stabilizer of the canonical form.
pub fn orbit_canonical_form<T: TensorLike>(t: &T) -> Result<(T, usize)> {
    let n = t.n();
    let ints = primitive_integer_vector(t.entries()).ok_or(Error::ZeroTensor)?;
    let perms: Vec<SignedPerm> =
        SymmetryElement::group(n)?.iter().map(|e| e.signed_perm()).collect();
    let (canon, stab) = canonical_under(&ints, &perms);
    Ok((T::from_entries(n, integers_to_rationals(&canon))?, stab))
}

fn canonical_under(v: &[BigInt], perms: &[SignedPerm]) -> (Vec<BigInt>, usize) {
    if let Some(small) = to_i64_vec(v) {
        let (canon, stab) = canonical_generic(&small, perms, |x: &i64| -x);
        (canon.into_iter().map(BigInt::from).collect(), stab)
    } else {
        canonical_generic(v, perms, |x: &BigInt| -x)
    }
}

fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

fn canonical_generic<T, F>(v: &[T], perms: &[SignedPerm], flip: F) -> (Vec<T>, usize)
where
    T: Ord + Clone,
    F: Fn(&T) -> T,
{
    let mut best: Vec<T> = v.to_vec();
    for p in perms {
        // lazy entrywise comparison against the current minimum
        for j in 0..v.len() {
            let x = &v[p.src[j] as usize];
            let out = if p.sgn[j] < 0 { flip(x) } else { x.clone() };
            match out.cmp(&best[j]) {
                std::cmp::Ordering::Less => {
                    let mut nb = best[..j].to_vec();
                    nb.push(out);
                    for k in j + 1..v.len() {
                        let x = &v[p.src[k] as usize];
                        nb.push(if p.sgn[k] < 0 { flip(x) } else { x.clone() });
                    }
                    best = nb;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let stabilizer = perms
        .iter()
        .filter(|p| {
            (0..best.len()).all(|j| {
                let x = &best[p.src[j] as usize];
                let out = if p.sgn[j] < 0 { flip(x) } else { x.clone() };
                out == best[j]
            })
        })
        .count();
    (best, stabilizer)
}

/// One symmetry class within a set of rays.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// The canonical form, as a primitive integer vector.
    pub representative: Vec<BigInt>,
    /// How many of the input rays fall in this class.
    pub size: usize,
    /// Order of the stabilizer of the representative.
    pub stabilizer_order: usize,
}

/// Partitions a ray set by canonical form. The ambient dimension must be
/// 3^n. Output is sorted by representative, so runs are reproducible.
pub fn classify_orbits(rays: &ConeVRep, n: usize) -> Result<Vec<Orbit>> {
    check_party_count(n)?;
    if rays.dim() != entry_count(n) {
        return Err(Error::DimensionMismatch { expected: entry_count(n), got: rays.dim() });
    }
    let perms: Vec<SignedPerm> =
        SymmetryElement::group(n)?.iter().map(|e| e.signed_perm()).collect();

    let canonical: Vec<Vec<BigInt>> = rays
        .generators()
        .par_iter()
        .map(|g| canonical_under(g, &perms).0)
        .collect();

    let mut classes: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    for c in canonical {
        *classes.entry(c).or_insert(0) += 1;
    }
    Ok(classes
        .into_iter()
        .map(|(representative, size)| {
            let (_, stabilizer_order) = canonical_under(&representative, &perms);
            Orbit { representative, size, stabilizer_order }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat_int;
    use crate::tensor::CorrelationTensor;

    #[test]
    fn group_orders_are_exact() {
        // n! * 2^n * 4^n, and the signed-permutation action is faithful
        for (n, expected) in [(1usize, 8usize), (2, 128), (3, 3072)] {
            let group = SymmetryElement::group(n).unwrap();
            assert_eq!(group.len(), expected);
            let mut perms: Vec<SignedPerm> = group.iter().map(|e| e.signed_perm()).collect();
            perms.sort_by(|a, b| (&a.src, &a.sgn).cmp(&(&b.src, &b.sgn)));
            perms.dedup();
            assert_eq!(perms.len(), expected, "action not faithful at n={n}");
        }
    }

    #[test]
    fn group_is_closed_under_composition() {
        let perms: Vec<SignedPerm> = SymmetryElement::group(2)
            .unwrap()
            .iter()
            .map(|e| e.signed_perm())
            .collect();
        let mut set: std::collections::HashSet<(Vec<u32>, Vec<i8>)> =
            perms.iter().map(|p| (p.src.clone(), p.sgn.clone())).collect();
        assert_eq!(set.len(), 128);
        for a in perms.iter().take(16) {
            for b in perms.iter().take(16) {
                let c = a.compose(b);
                assert!(set.contains(&(c.src.clone(), c.sgn.clone())));
            }
        }
        set.clear();
    }

    #[test]
    fn full_outcome_flip_negates_all_correlators() {
        let sigma = SymmetryElement::new(
            vec![0, 1],
            vec![false, false],
            vec![(true, true), (true, true)],
        )
        .unwrap();
        let out = sigma.act(&fixtures::pr_box()).unwrap();
        for idx in 0..9 {
            let word = index_word(2, idx);
            let nonzero_letters = word.iter().filter(|&&l| l != 0).count();
            let expected = if nonzero_letters % 2 == 1 {
                -fixtures::pr_box().entries()[idx].clone()
            } else {
                fixtures::pr_box().entries()[idx].clone()
            };
            assert_eq!(out.entries()[idx], expected);
        }
    }

    #[test]
    fn party_swap_fixes_the_pr_box() {
        let sigma =
            SymmetryElement::new(vec![1, 0], vec![false, false], vec![(false, false); 2]).unwrap();
        assert_eq!(sigma.act(&fixtures::pr_box()).unwrap(), fixtures::pr_box());
    }

    #[test]
    fn setting_swap_exchanges_entries() {
        let x = CorrelationTensor::from_sparse(
            2,
            &[(&[-1, 0], rat_int(5)), (&[1, 0], rat_int(7))],
        )
        .unwrap();
        let sigma =
            SymmetryElement::new(vec![0, 1], vec![true, false], vec![(false, false); 2]).unwrap();
        let out = sigma.act(&x).unwrap();
        assert_eq!(out.entry(&[-1, 0]), &rat_int(7));
        assert_eq!(out.entry(&[1, 0]), &rat_int(5));
    }

    #[test]
    fn action_composes() {
        let group = SymmetryElement::group(2).unwrap();
        let a = &group[17];
        let b = &group[101];
        let x = fixtures::pr_box();
        let via_elements = a.act(&b.act(&x).unwrap()).unwrap();
        let composed = a.signed_perm().compose(&b.signed_perm());
        let via_perm =
            CorrelationTensor::new(2, composed.apply_rationals(x.entries())).unwrap();
        assert_eq!(via_elements, via_perm);
    }

    #[test]
    fn pairing_is_invariant_under_simultaneous_action() {
        let group = SymmetryElement::group(2).unwrap();
        let f = fixtures::chsh_functional();
        let boxes = [fixtures::pr_box(), fixtures::all_ones_box(2).unwrap()];
        for y in &boxes {
            for sigma in group.iter().step_by(7) {
                assert_eq!(
                    sigma.act(&f).unwrap().pair(&sigma.act(y).unwrap()).unwrap(),
                    f.pair(y).unwrap()
                );
            }
        }
    }

    #[test]
    fn involutions_validate() {
        assert!(parse_involution(2, "swap(1)").is_ok());
        assert!(parse_involution(2, "flip(1,-1),flip(1,+1)").is_ok());
        assert!(parse_involution(2, "id").is_ok());
        assert!(parse_involution(3, "pswap(2,3)").is_ok());
        // party 3-cycle is not an involution
        let cycle =
            SymmetryElement::new(vec![1, 2, 0], vec![false; 3], vec![(false, false); 3]).unwrap();
        assert!(Involution::new(cycle).is_err());
        assert!(parse_involution(2, "swap(5)").is_err());
        assert!(parse_involution(2, "nope(1)").is_err());
    }

    #[test]
    fn pr_and_anti_pr_share_a_canonical_form() {
        let (a, _) = orbit_canonical_form(&fixtures::pr_box()).unwrap();
        let (b, _) = orbit_canonical_form(&fixtures::anti_pr_box()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_boxes_form_one_orbit_with_stabilizer_eight() {
        let (canon_all_ones, stab) =
            orbit_canonical_form(&fixtures::all_ones_box(2).unwrap()).unwrap();
        assert_eq!(stab, 8); // |G| / orbit = 128 / 16
        for b in fixtures::deterministic_boxes(2).unwrap() {
            let (c, s) = orbit_canonical_form(&b).unwrap();
            assert_eq!(c, canon_all_ones);
            assert_eq!(s, 8);
        }
    }

    #[test]
    fn canonical_form_is_orbit_invariant_and_idempotent() {
        let x = fixtures::pr_box();
        let (canon, _) = orbit_canonical_form(&x).unwrap();
        let (canon2, _) = orbit_canonical_form(&canon).unwrap();
        assert_eq!(canon, canon2);
        for sigma in SymmetryElement::group(2).unwrap().iter().step_by(13) {
            let moved = sigma.act(&x).unwrap();
            let (c, _) = orbit_canonical_form(&moved).unwrap();
            assert_eq!(c, canon);
        }
    }

    #[test]
    fn zero_tensor_has_no_canonical_form() {
        let z = CorrelationTensor::zero(2).unwrap();
        assert!(matches!(orbit_canonical_form(&z), Err(Error::ZeroTensor)));
    }
}
