//! Extending boxes and Bell inequalities from n to n+1 parties via
//! commuting involutions, plus the families that fall out of the
//! construction: Mermin-Klyshko inequalities, full-correlation boxes with
//! the Werner-Wolf / Zukowski-Brukner locality test, the isotropic family
//! with its Tsirelson-bound arithmetic, and the GYNI box.
//!
//! Boxes z of n+1 parties are handled through their three slices along the
//! last party: z^{s,-1}, z^{s,0}, z^{s,+1}, each an n-party tensor. A box
//! is no-signaling iff slice0 +- slice_t is no-signaling for t = -1, +1.

use num_traits::{Signed, Zero};

use crate::cone::HMembership;
use crate::error::{Error, LiftFailure};
use crate::fixtures::{deterministic_boxes, is_full_correlation_supported};
use crate::rational::{rat, rat_int, Rational};
use crate::scenario::ns_cone;
use crate::symmetry::{Involution, SymmetryElement};
use crate::tensor::{
    check_party_count, entry_count, index_word, sign_words, word_index, CorrelationTensor,
    FunctionalTensor, SettingWord, TensorLike, MAX_PARTIES,
};
use crate::Result;

/// A pair of involutions driving a lift; when both are present they must
/// commute.
#[derive(Debug, Clone)]
pub struct LiftSpec {
    pub iota: Involution,
    pub kappa: Option<Involution>,
}

impl LiftSpec {
    pub fn new(iota: Involution, kappa: Option<Involution>) -> Result<Self> {
        if let Some(kappa) = &kappa {
            if kappa.n() != iota.n() {
                return Err(Error::DimensionMismatch { expected: iota.n(), got: kappa.n() });
            }
            if !iota.commutes_with(kappa) {
                return Err(Error::NonCommutingInvolutions);
            }
        }
        Ok(LiftSpec { iota, kappa })
    }
}

/// Extracts the n-party slice of `z` at last-party letter `t`.
pub fn last_party_slice(z: &CorrelationTensor, t: i8) -> Result<CorrelationTensor> {
    let n = z.n();
    if n < 2 {
        return Err(Error::PartyCount(n));
    }
    let digit = (t + 1) as usize;
    let entries: Vec<Rational> = (0..entry_count(n - 1))
        .map(|w| z.entries()[w * 3 + digit].clone())
        .collect();
    CorrelationTensor::new(n - 1, entries)
}

fn assemble_from_slices(
    minus: &CorrelationTensor,
    zero: &CorrelationTensor,
    plus: &CorrelationTensor,
) -> Result<CorrelationTensor> {
    let n = zero.n();
    if n + 1 > MAX_PARTIES {
        return Err(Error::PartyCount(n + 1));
    }
    let mut entries = Vec::with_capacity(entry_count(n + 1));
    for w in 0..entry_count(n) {
        entries.push(minus.entries()[w].clone());
        entries.push(zero.entries()[w].clone());
        entries.push(plus.entries()[w].clone());
    }
    CorrelationTensor::new(n + 1, entries)
}

/// Slice criterion for no-signaling membership of an (n+1)-party box:
/// `slice0 +- slice_t` must be no-signaling for `t = -1, +1` and both
/// signs. Equivalent to membership of `z` itself.
pub fn check_extension(z: &CorrelationTensor) -> Result<bool> {
    let zero = last_party_slice(z, 0)?;
    let cone = ns_cone(zero.n())?;
    for t in [-1i8, 1] {
        let side = last_party_slice(z, t)?;
        for sum in [zero.add(&side)?, zero.sub(&side)?] {
            if !cone.contains(sum.entries())?.is_member() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Extends `x` (even under `iota`) by a new last party using `y`:
/// the slices are `y`, `x`, `iota(y)`. Requires `x +- y` no-signaling;
/// failures identify the violated hypothesis and carry a certificate.
pub fn extend_box(
    x: &CorrelationTensor,
    y: &CorrelationTensor,
    iota: &Involution,
) -> Result<CorrelationTensor> {
    if iota.act(x)? != *x {
        return Err(LiftFailure::NotEven.into());
    }
    let cone = ns_cone(x.n())?;
    for (plus_sign, combo) in [(true, x.add(y)?), (false, x.sub(y)?)] {
        if let HMembership::NotMember { violated } = cone.contains(combo.entries())? {
            return Err(LiftFailure::SumNotMember { plus_sign, certificate: violated }.into());
        }
    }
    let z = assemble_from_slices(y, x, &iota.act(y)?)?;
    debug_assert!(check_extension(&z)?);
    Ok(z)
}

/// Single-input variant: from `w` no-signaling with
/// `iota kappa (w) = kappa(w) - iota(w) + w`, the slices
/// `w - kappa(w)`, `w + kappa(w)`, `iota(w) - iota kappa (w)` form an
/// (n+1)-party no-signaling box.
pub fn extend_box2(
    w: &CorrelationTensor,
    iota: &Involution,
    kappa: &Involution,
) -> Result<CorrelationTensor> {
    let spec = LiftSpec::new(iota.clone(), Some(kappa.clone()))?;
    let iota = &spec.iota;
    let kappa = spec.kappa.as_ref().expect("present");

    let cone = ns_cone(w.n())?;
    if let HMembership::NotMember { violated } = cone.contains(w.entries())? {
        return Err(LiftFailure::NotNoSignaling { certificate: violated }.into());
    }
    let iw = iota.act(w)?;
    let kw = kappa.act(w)?;
    let ikw = iota.act(&kw)?;
    // eigen condition: the (iota-odd, kappa-even) component vanishes
    let residual = ikw.sub(&kw)?.add(&iw)?.sub(w)?;
    if !residual.is_zero() {
        return Err(LiftFailure::EigenCondition { residual: residual.entries().to_vec() }.into());
    }
    let z = assemble_from_slices(&w.sub(&kw)?, &w.add(&kw)?, &iw.sub(&ikw)?)?;
    debug_assert!(check_extension(&z)?);
    Ok(z)
}

/// The decomposition a successful recognition returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    /// Slices of `z` directly: `x = z^{.,0}`, `y = z^{.,-1}`.
    Single { x: CorrelationTensor, y: CorrelationTensor },
    /// The single generating box `w = (z^{.,0} + z^{.,-1}) / 2`.
    Double { w: CorrelationTensor },
}

/// Which recognition condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecognizeFailure {
    /// `iota` does not fix the zero slice.
    ZeroSliceNotEven,
    /// `iota` does not map the -1 slice to the +1 slice.
    SlicesNotExchanged,
    /// `kappa` does not fix the zero slice.
    ZeroSliceNotKappaEven,
    /// `kappa` does not negate the side slices.
    SideSlicesNotKappaOdd,
}

impl std::fmt::Display for RecognizeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RecognizeFailure::ZeroSliceNotEven => "zero slice is not even under iota",
            RecognizeFailure::SlicesNotExchanged => "iota does not exchange the side slices",
            RecognizeFailure::ZeroSliceNotKappaEven => "zero slice is not even under kappa",
            RecognizeFailure::SideSlicesNotKappaOdd => "side slices are not odd under kappa",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecognizeOutcome {
    Recognized(Recognition),
    NotRecognized(RecognizeFailure),
}

impl RecognizeOutcome {
    pub fn is_recognized(&self) -> bool {
        matches!(self, RecognizeOutcome::Recognized(_))
    }
}

/// Decides whether `z` arises from the single- or two-involution
/// construction along its last party, and reconstructs the inputs.
pub fn recognize_extension(
    z: &CorrelationTensor,
    iota: &Involution,
    kappa: Option<&Involution>,
) -> Result<RecognizeOutcome> {
    let zero = last_party_slice(z, 0)?;
    let minus = last_party_slice(z, -1)?;
    let plus = last_party_slice(z, 1)?;
    if iota.act(&zero)? != zero {
        return Ok(RecognizeOutcome::NotRecognized(RecognizeFailure::ZeroSliceNotEven));
    }
    if iota.act(&minus)? != plus {
        return Ok(RecognizeOutcome::NotRecognized(RecognizeFailure::SlicesNotExchanged));
    }
    let Some(kappa) = kappa else {
        return Ok(RecognizeOutcome::Recognized(Recognition::Single { x: zero, y: minus }));
    };
    if kappa.act(&zero)? != zero {
        return Ok(RecognizeOutcome::NotRecognized(RecognizeFailure::ZeroSliceNotKappaEven));
    }
    let neg_minus = minus.scale(&rat_int(-1));
    let neg_plus = plus.scale(&rat_int(-1));
    if kappa.act(&minus)? != neg_minus || kappa.act(&plus)? != neg_plus {
        return Ok(RecognizeOutcome::NotRecognized(RecognizeFailure::SideSlicesNotKappaOdd));
    }
    let w = zero.add(&minus)?.scale(&rat(1, 2));
    // with the slice conditions satisfied the eigen condition holds
    let iw = iota.act(&w)?;
    let kw = kappa.act(&w)?;
    let ikw = iota.act(&kw)?;
    debug_assert!(ikw.sub(&kw)?.add(&iw)?.sub(&w)?.is_zero());
    Ok(RecognizeOutcome::Recognized(Recognition::Double { w }))
}

fn quarter_component(
    f: &FunctionalTensor,
    iota: &Involution,
    kappa: &Involution,
    iota_sign: i64,
    kappa_sign: i64,
) -> Result<FunctionalTensor> {
    // (1 + a*iota)(1 + b*kappa) f / 4
    let i_f = iota.act(f)?;
    let k_f = kappa.act(f)?;
    let ik_f = iota.act(&k_f)?;
    let mut acc = f.clone();
    acc = acc.add(&i_f.scale(&rat_int(iota_sign)))?;
    acc = acc.add(&k_f.scale(&rat_int(kappa_sign)))?;
    acc = acc.add(&ik_f.scale(&rat_int(iota_sign * kappa_sign)))?;
    Ok(acc.scale(&rat(1, 4)))
}

/// Nonnegativity of a functional on every deterministic strategy; the
/// defining property of a Bell inequality.
pub fn is_bell_inequality(f: &FunctionalTensor) -> Result<bool> {
    for d in deterministic_boxes(f.n())? {
        if f.pair(&d)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extends a Bell inequality by one party: decompose `f` into joint
/// eigencomponents of the commuting involutions; the (iota-even,
/// kappa-odd) part gets last-party letter -1, the (iota-odd, kappa-odd)
/// part letter +1, and the kappa-even part letter 0. Requires the
/// (iota-odd, kappa-even) component to vanish. The output is verified to
/// be a Bell inequality on all deterministic strategies.
pub fn extend_inequality(
    f: &FunctionalTensor,
    iota: &Involution,
    kappa: &Involution,
) -> Result<FunctionalTensor> {
    let spec = LiftSpec::new(iota.clone(), Some(kappa.clone()))?;
    let iota = &spec.iota;
    let kappa = spec.kappa.as_ref().expect("present");

    for d in deterministic_boxes(f.n())? {
        if f.pair(&d)?.is_negative() {
            return Err(LiftFailure::NotBellInequality { strategy: d.entries().to_vec() }.into());
        }
    }
    let odd_even = quarter_component(f, iota, kappa, -1, 1)?;
    if !odd_even.is_zero() {
        return Err(LiftFailure::EigenCondition { residual: odd_even.entries().to_vec() }.into());
    }
    let even_odd = quarter_component(f, iota, kappa, 1, -1)?;
    let odd_odd = quarter_component(f, iota, kappa, -1, -1)?;
    let even_even = quarter_component(f, iota, kappa, 1, 1)?;

    let n = f.n();
    if n + 1 > MAX_PARTIES {
        return Err(Error::PartyCount(n + 1));
    }
    let mut entries = Vec::with_capacity(entry_count(n + 1));
    for w in 0..entry_count(n) {
        entries.push(even_odd.entries()[w].clone());
        entries.push(even_even.entries()[w].clone());
        entries.push(odd_odd.entries()[w].clone());
    }
    let out = FunctionalTensor::new(n + 1, entries)?;
    for d in deterministic_boxes(n + 1)? {
        if out.pair(&d)?.is_negative() {
            return Err(LiftFailure::NotBellInequality { strategy: d.entries().to_vec() }.into());
        }
    }
    Ok(out)
}

/// The Mermin-Klyshko polynomial pair (M_n, M'_n) as coefficient arrays
/// over full-correlator words.
fn mk_polynomials(n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut m = vec![rat_int(1)];
    let mut mp = vec![rat_int(1)];
    for _ in 0..n {
        let len = m.len();
        let mut nm = vec![Rational::zero(); len * 3];
        let mut nmp = vec![Rational::zero(); len * 3];
        let half = rat(1, 2);
        for w in 0..len {
            // M_{k+1} = M_k (A- + A+)/2 + M'_k (A- - A+)/2
            nm[w * 3] = (&m[w] + &mp[w]) * &half;
            nm[w * 3 + 2] = (&m[w] - &mp[w]) * &half;
            // M'_{k+1} = M'_k (A- + A+)/2 - M_k (A- - A+)/2
            nmp[w * 3] = (&mp[w] - &m[w]) * &half;
            nmp[w * 3 + 2] = (&mp[w] + &m[w]) * &half;
        }
        m = nm;
        mp = nmp;
    }
    (m, mp)
}

/// The n-party Mermin-Klyshko inequality in homogeneous form:
/// `<M_n> + <A_1^0 .. A_n^0> >= 0`. MK_2 is the CHSH functional.
pub fn mermin_klyshko(n: usize) -> Result<FunctionalTensor> {
    check_party_count(n)?;
    let (m, _) = mk_polynomials(n);
    let mut entries = m;
    entries[word_index(&vec![0i8; n])] = rat_int(1);
    FunctionalTensor::new(n, entries)
}

/// A box with prescribed full correlators, unit normalization and zero
/// marginals. `epsilon` lists the 2^n correlator values in canonical order
/// of the sign words; each must lie in [-1, 1]. The result is always
/// no-signaling.
pub fn full_correlation_box(n: usize, epsilon: &[Rational]) -> Result<CorrelationTensor> {
    check_party_count(n)?;
    if epsilon.len() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: epsilon.len() });
    }
    let one = rat_int(1);
    if epsilon.iter().any(|e| e.abs() > one) {
        return Err(Error::Invalid("full correlators must lie in [-1, 1]".into()));
    }
    let mut entries = vec![Rational::zero(); entry_count(n)];
    for (word, value) in sign_words(n).iter().zip(epsilon) {
        entries[word_index(word)] = value.clone();
    }
    entries[word_index(&vec![0i8; n])] = rat_int(1);
    let x = CorrelationTensor::new(n, entries)?;
    debug_assert!(ns_cone(n)?.contains(x.entries())?.is_member());
    Ok(x)
}

fn check_full_correlation_support(x: &CorrelationTensor) -> Result<()> {
    if !is_full_correlation_supported(x) {
        let n = x.n();
        let offender = (0..entry_count(n))
            .map(|idx| index_word(n, idx))
            .find(|w| {
                !x.entries()[word_index(w)].is_zero()
                    && w.contains(&0)
                    && !w.iter().all(|&l| l == 0)
            })
            .expect("support check failed on some word");
        return Err(Error::Invalid(format!(
            "entry at {} is outside the full-correlation support",
            SettingWord::new(offender)?
        )));
    }
    Ok(())
}

/// Werner-Wolf / Zukowski-Brukner locality test for a box supported on
/// full correlators: the box lies in the local region iff
/// `sum_s |lower(x)_s| <= x^{0..0}` over sign words `s`. Deterministic
/// full-correlation boxes meet the bound with equality.
pub fn ww_zb_local_test(x: &CorrelationTensor) -> Result<bool> {
    check_full_correlation_support(x)?;
    let f = x.lower();
    let mut total = Rational::zero();
    for s in sign_words(x.n()) {
        total += f.entry(&s).abs();
    }
    Ok(total <= *x.normalization())
}

/// The facet inequalities binding on `x`: among the inequalities dual to
/// extremal (+-1) full-correlation boxes, those evaluating to zero on `x`.
pub fn ww_zb_binding_facets(x: &CorrelationTensor) -> Result<Vec<FunctionalTensor>> {
    check_full_correlation_support(x)?;
    let n = x.n();
    let mut out = Vec::new();
    for mask in 0..(1u64 << (1 << n)) {
        let eps: Vec<Rational> =
            (0..(1 << n)).map(|i| rat_int(if mask >> i & 1 == 0 { 1 } else { -1 })).collect();
        let facet = full_correlation_box(n, &eps)?.lower();
        if facet.pair(x)?.is_zero() {
            out.push(facet);
        }
    }
    Ok(out)
}

/// The two-party isotropic family: full correlators `c/4` in the PR sign
/// pattern, zero marginals, unit normalization. `c = 4` is the PR box,
/// `c = 0` pure noise.
pub fn isotropic_box(c: &Rational) -> CorrelationTensor {
    let q = c / rat_int(4);
    CorrelationTensor::from_sparse(
        2,
        &[
            (&[-1, -1], q.clone()),
            (&[-1, 1], q.clone()),
            (&[1, -1], q.clone()),
            (&[1, 1], -q),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static shape")
}

/// Evaluates the sign-flipped dual of the isotropic box on the box itself:
/// exactly `1 - c^2/8`. Nonnegativity certifies `c^2 <= 8`, the squared
/// form of the Tsirelson bound `|c| <= 2*sqrt(2)`.
pub fn tsirelson_selfdual_value(c: &Rational) -> Rational {
    let x = isotropic_box(c);
    let f = x.lower();
    // flipping both outcomes of party 1 negates exactly the four
    // full-correlator coefficients here (the marginals vanish)
    let flip =
        SymmetryElement::new(vec![0, 1], vec![false, false], vec![(true, true), (false, false)])
            .expect("static element");
    let g = flip.act(&f).expect("same shape");
    g.pair(&x).expect("same shape")
}

/// The three-party box dual to the guess-your-neighbor's-input facet:
/// five nonvanishing correlators and unit normalization. Extremal in the
/// no-signaling cone; its lowering is a valid Bell inequality.
pub fn gyni_box() -> CorrelationTensor {
    CorrelationTensor::from_sparse(
        3,
        &[
            (&[-1, 1, 0], rat_int(1)),
            (&[0, -1, 1], rat_int(1)),
            (&[1, 0, -1], rat_int(1)),
            (&[-1, -1, -1], rat_int(1)),
            (&[1, 1, 1], rat_int(-1)),
            (&[0, 0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scenario::bell_cone;
    use crate::symmetry::parse_involution;

    fn global_setting_swap(n: usize) -> Involution {
        let spec: Vec<String> = (1..=n).map(|j| format!("swap({j})")).collect();
        parse_involution(n, &spec.join(",")).unwrap()
    }

    fn flip_party(n: usize, j: usize) -> Involution {
        parse_involution(n, &format!("flip({j},-1),flip({j},+1)")).unwrap()
    }

    #[test]
    fn slices_reassemble() {
        let z = fixtures::sliwa17_box();
        let m = last_party_slice(&z, -1).unwrap();
        let o = last_party_slice(&z, 0).unwrap();
        let p = last_party_slice(&z, 1).unwrap();
        assert_eq!(assemble_from_slices(&m, &o, &p).unwrap(), z);
    }

    #[test]
    fn check_extension_examples() {
        assert!(check_extension(&fixtures::all_ones_box(3).unwrap()).unwrap());
        assert!(check_extension(&fixtures::sliwa17_box()).unwrap());
        // zero slice with a nonzero +1 slice violates positivity
        let zero2 = CorrelationTensor::zero(2).unwrap();
        let bad =
            assemble_from_slices(&zero2, &zero2, &fixtures::all_ones_box(2).unwrap()).unwrap();
        assert!(!check_extension(&bad).unwrap());
    }

    #[test]
    fn check_extension_matches_full_membership() {
        let ns3 = ns_cone(3).unwrap();
        let samples = [
            fixtures::all_ones_box(3).unwrap(),
            fixtures::sliwa17_box(),
            gyni_box(),
            CorrelationTensor::zero(3).unwrap(),
        ];
        for z in &samples {
            assert_eq!(
                check_extension(z).unwrap(),
                ns3.contains(z.entries()).unwrap().is_member()
            );
        }
    }

    #[test]
    fn extend_box_trivial_case() {
        let x = fixtures::all_ones_box(2).unwrap();
        let y = CorrelationTensor::zero(2).unwrap();
        let z = extend_box(&x, &y, &Involution::identity(2).unwrap()).unwrap();
        assert!(check_extension(&z).unwrap());
        assert_eq!(last_party_slice(&z, 0).unwrap(), x);
        assert!(last_party_slice(&z, -1).unwrap().is_zero());
    }

    #[test]
    fn extend_box_pr_plus_noise() {
        // x = 2 * noise absorbs the PR box on both sides
        let x = fixtures::noise_box(2).unwrap().scale(&rat_int(2));
        let y = fixtures::pr_box();
        let z = extend_box(&x, &y, &Involution::identity(2).unwrap()).unwrap();
        assert!(check_extension(&z).unwrap());
        assert!(ns_cone(3).unwrap().contains(z.entries()).unwrap().is_member());
    }

    #[test]
    fn extend_box_rejects_bad_inputs() {
        // x not iota-even
        let iota = flip_party(2, 1);
        let x = fixtures::all_ones_box(2).unwrap();
        let y = CorrelationTensor::zero(2).unwrap();
        match extend_box(&x, &y, &iota) {
            Err(Error::Lift(LiftFailure::NotEven)) => {}
            other => panic!("expected NotEven, got {other:?}"),
        }
        // x - y leaves the cone
        let x = fixtures::noise_box(2).unwrap(); // too little noise for PR
        let y = fixtures::pr_box();
        match extend_box(&x, &y, &Involution::identity(2).unwrap()) {
            Err(Error::Lift(LiftFailure::SumNotMember { .. })) => {}
            other => panic!("expected SumNotMember, got {other:?}"),
        }
    }

    #[test]
    fn extend_box2_identity_involutions_degenerate() {
        let w = fixtures::all_ones_box(2).unwrap();
        let id = Involution::identity(2).unwrap();
        let z = extend_box2(&w, &id, &id).unwrap();
        assert!(last_party_slice(&z, -1).unwrap().is_zero());
        assert_eq!(last_party_slice(&z, 0).unwrap(), w.scale(&rat_int(2)));
        assert!(last_party_slice(&z, 1).unwrap().is_zero());
        assert!(check_extension(&z).unwrap());
    }

    fn global_outcome_flip(n: usize) -> Involution {
        let spec: Vec<String> =
            (1..=n).map(|j| format!("flip({j},-1),flip({j},+1)")).collect();
        parse_involution(n, &spec.join(",")).unwrap()
    }

    /// Deterministic box whose full correlators are symmetric under the
    /// global setting swap while its marginals are not.
    fn swap_symmetric_deterministic() -> CorrelationTensor {
        fixtures::deterministic_box(&[1, 1], &[-1, -1]).unwrap()
    }

    #[test]
    fn extend_box2_two_involution_case() {
        let w = swap_symmetric_deterministic();
        let iota = global_setting_swap(2);
        let kappa = global_outcome_flip(2);
        assert_ne!(iota.act(&w).unwrap(), w, "iota acts nontrivially");
        assert_ne!(kappa.act(&w).unwrap(), w, "kappa acts nontrivially");
        let z = extend_box2(&w, &iota, &kappa).unwrap();
        assert!(check_extension(&z).unwrap());
        assert!(ns_cone(3).unwrap().contains(z.entries()).unwrap().is_member());
    }

    #[test]
    fn extend_box2_detects_eigen_violation() {
        // the even mixture of the all-ones box and the PR box has a
        // nonvanishing (iota-odd, kappa-even) component for this pair
        let w = fixtures::all_ones_box(2)
            .unwrap()
            .add(&fixtures::pr_box())
            .unwrap()
            .scale(&rat(1, 2));
        let iota = global_setting_swap(2);
        let kappa = global_outcome_flip(2);
        match extend_box2(&w, &iota, &kappa) {
            Err(Error::Lift(LiftFailure::EigenCondition { .. })) => {}
            other => panic!("expected EigenCondition, got {other:?}"),
        }
    }

    #[test]
    fn extend_box2_rejects_non_member() {
        // nonzero kappa-odd tensors cannot be no-signaling
        let kappa = global_outcome_flip(2);
        let d = swap_symmetric_deterministic();
        let w = d.sub(&kappa.act(&d).unwrap()).unwrap();
        assert!(!w.is_zero());
        match extend_box2(&w, &Involution::identity(2).unwrap(), &kappa) {
            Err(Error::Lift(LiftFailure::NotNoSignaling { .. })) => {}
            other => panic!("expected NotNoSignaling, got {other:?}"),
        }
    }

    #[test]
    fn recognize_round_trips_extend_box2() {
        let w = swap_symmetric_deterministic();
        let iota = global_setting_swap(2);
        let kappa = global_outcome_flip(2);
        let z = extend_box2(&w, &iota, &kappa).unwrap();
        match recognize_extension(&z, &iota, Some(&kappa)).unwrap() {
            RecognizeOutcome::Recognized(Recognition::Double { w: back }) => {
                assert_eq!(back, w)
            }
            other => panic!("expected recognition, got {other:?}"),
        }
    }

    #[test]
    fn recognize_rejects_gyni_for_mismatched_involutions() {
        let z = gyni_box();
        let iota = parse_involution(2, "swap(1)").unwrap();
        let out = recognize_extension(&z, &iota, None).unwrap();
        assert!(!out.is_recognized());
    }

    #[test]
    fn mk_small_cases() {
        // M_1 = A^{-1}; inequality <A^{-1}> + <A^0> >= 0
        let mk1 = mermin_klyshko(1).unwrap();
        assert_eq!(mk1.entry(&[-1]), &rat_int(1));
        assert_eq!(mk1.entry(&[0]), &rat_int(1));
        assert_eq!(mk1.entry(&[1]), &rat_int(0));
        // MK_2 is the CHSH functional
        assert_eq!(mermin_klyshko(2).unwrap(), fixtures::chsh_functional());
    }

    #[test]
    fn mk_three_party_coefficients() {
        // from the recursion by hand: 1/2 on the three sign words holding
        // exactly one +1, -(1/2) on (+1,+1,+1), zero elsewhere
        let mk3 = mermin_klyshko(3).unwrap();
        let h = rat(1, 2);
        assert_eq!(mk3.entry(&[-1, -1, 1]), &h);
        assert_eq!(mk3.entry(&[-1, 1, -1]), &h);
        assert_eq!(mk3.entry(&[1, -1, -1]), &h);
        assert_eq!(mk3.entry(&[1, 1, 1]), &(-h));
        assert_eq!(mk3.entry(&[-1, -1, -1]), &rat_int(0));
        assert_eq!(mk3.entry(&[1, 1, -1]), &rat_int(0));
        assert_eq!(mk3.entry(&[0, 0, 0]), &rat_int(1));
        assert_eq!(mk3.entry(&[-1, 0, 0]), &rat_int(0));
    }

    #[test]
    fn mk_valid_up_to_four_parties() {
        for n in 1..=4 {
            assert!(is_bell_inequality(&mermin_klyshko(n).unwrap()).unwrap(), "n={n}");
        }
    }

    #[test]
    fn extend_inequality_produces_chsh_from_one_party() {
        let f = mermin_klyshko(1).unwrap();
        let iota = global_setting_swap(1);
        let kappa = flip_party(1, 1);
        let out = extend_inequality(&f, &iota, &kappa).unwrap();
        assert_eq!(out, fixtures::chsh_functional());
    }

    #[test]
    fn extend_inequality_reproduces_mk_chain() {
        for n in 1..=3 {
            let iota = global_setting_swap(n);
            let kappa = flip_party(n, n);
            let out = extend_inequality(&mermin_klyshko(n).unwrap(), &iota, &kappa).unwrap();
            assert_eq!(out, mermin_klyshko(n + 1).unwrap(), "n={n}");
        }
    }

    #[test]
    fn extend_inequality_identity_involutions_append_zero_letter() {
        let f = fixtures::positivity_functional_2();
        let id = Involution::identity(2).unwrap();
        let out = extend_inequality(&f, &id, &id).unwrap();
        // kappa-even part is everything: letter 0 carries f, side letters vanish
        for w in 0..entry_count(2) {
            let word = index_word(2, w);
            let mut with_zero = word.clone();
            with_zero.push(0);
            assert_eq!(out.entry(&with_zero), f.entry(&word));
            let mut with_minus = word.clone();
            with_minus.push(-1);
            assert_eq!(out.entry(&with_minus), &rat_int(0));
        }
    }

    #[test]
    fn extend_inequality_rejects_invalid_functional() {
        let bad = fixtures::chsh_functional().scale(&rat_int(-1));
        let id = Involution::identity(2).unwrap();
        match extend_inequality(&bad, &id, &id) {
            Err(Error::Lift(LiftFailure::NotBellInequality { .. })) => {}
            other => panic!("expected NotBellInequality, got {other:?}"),
        }
    }

    #[test]
    fn full_correlation_box_examples() {
        // epsilon all +1 except the last word: the PR box
        let eps = vec![rat_int(1), rat_int(1), rat_int(1), rat_int(-1)];
        assert_eq!(full_correlation_box(2, &eps).unwrap(), fixtures::pr_box());
        let eps0 = vec![Rational::zero(); 4];
        assert_eq!(full_correlation_box(2, &eps0).unwrap(), fixtures::noise_box(2).unwrap());
        let too_big = vec![rat_int(2), rat_int(0), rat_int(0), rat_int(0)];
        assert!(full_correlation_box(2, &too_big).is_err());
    }

    #[test]
    fn ww_test_discriminates() {
        assert!(!ww_zb_local_test(&fixtures::pr_box()).unwrap());
        // deterministic full-correlation part: local, saturates the bound
        let det_fc = full_correlation_box(2, &[rat_int(1), rat_int(1), rat_int(1), rat_int(1)])
            .unwrap();
        assert!(ww_zb_local_test(&det_fc).unwrap());
        // half-weighted PR pattern sits on the classical boundary,
        // quarter-weighted strictly inside; 3/4 is already nonlocal
        let pr_scaled = |num: i64, den: i64| {
            let eps: Vec<Rational> =
                [1, 1, 1, -1].iter().map(|&s| rat(num * s, den)).collect();
            full_correlation_box(2, &eps).unwrap()
        };
        assert!(ww_zb_local_test(&pr_scaled(1, 2)).unwrap());
        assert!(ww_zb_local_test(&pr_scaled(1, 4)).unwrap());
        assert!(!ww_zb_local_test(&pr_scaled(3, 4)).unwrap());
        // marginals are outside the allowed support
        assert!(ww_zb_local_test(&fixtures::sliwa17_box()).is_err());
    }

    #[test]
    fn ww_test_agrees_with_exact_membership_on_the_isotropic_line() {
        let b2 = bell_cone(2).unwrap();
        for c in [-4i64, -3, -2, -1, 0, 1, 2, 3, 4] {
            let x = isotropic_box(&rat_int(c));
            assert_eq!(
                ww_zb_local_test(&x).unwrap(),
                b2.contains(x.entries()).unwrap().is_member(),
                "c={c}"
            );
        }
    }

    #[test]
    fn binding_facets_certify_boundary() {
        // c=2 sits on the classical boundary: some facet is tight
        let x = isotropic_box(&rat_int(2));
        let binding = ww_zb_binding_facets(&x).unwrap();
        assert!(!binding.is_empty());
        for f in &binding {
            assert_eq!(f.pair(&x).unwrap(), rat_int(0));
            assert!(is_bell_inequality(f).unwrap());
        }
        // strictly inside: nothing binds
        let inside = ww_zb_binding_facets(&fixtures::noise_box(2).unwrap()).unwrap();
        assert!(inside.is_empty());
    }

    #[test]
    fn isotropic_fixtures() {
        assert_eq!(isotropic_box(&rat_int(4)), fixtures::pr_box());
        assert_eq!(isotropic_box(&Rational::zero()), fixtures::noise_box(2).unwrap());
    }

    #[test]
    fn tsirelson_values() {
        assert_eq!(tsirelson_selfdual_value(&rat_int(2)), rat(1, 2));
        assert_eq!(tsirelson_selfdual_value(&Rational::zero()), rat_int(1));
        assert_eq!(tsirelson_selfdual_value(&rat_int(3)), rat(-1, 8));
    }

    #[test]
    fn gyni_fixture_properties() {
        let g = gyni_box();
        let ns3 = ns_cone(3).unwrap();
        assert!(ns3.contains(g.entries()).unwrap().is_member());
        assert!(ns3.is_extreme_ray(g.entries()).unwrap());
        assert!(is_bell_inequality(&g.lower()).unwrap());
    }
}
