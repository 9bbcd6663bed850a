//! Scenario-specific cones and the duality between them: the square cone,
//! the Bell cone (conic hull of deterministic strategies), the no-signaling
//! cone (nonnegativity of all outcome probabilities), probability tables,
//! and the membership transfers the variance transform provides.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cone::{dual_hrep_to_vrep, ConeHRep, ConeVRep};
use crate::error::Error;
use crate::fixtures::deterministic_boxes;
use crate::rational::{rat, Rational};
use crate::tensor::{check_party_count, entry_count, index_word, sign_words, CorrelationTensor};
use crate::Result;

/// An (n,2,2) scenario; two settings and two outcomes per party are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    n: usize,
}

impl Scenario {
    pub fn new(n: usize) -> Result<Self> {
        check_party_count(n)?;
        Ok(Scenario { n })
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    /// Conic hull of the 4^n local deterministic strategies.
    pub fn bell_cone(&self) -> ConeVRep {
        bell_cone(self.n).expect("validated n")
    }

    /// The 4^n outcome-positivity constraints, one per settings/outcomes
    /// pair.
    pub fn ns_cone(&self) -> ConeHRep {
        ns_cone(self.n).expect("validated n")
    }
}

/// The n=1 cone, where the Bell and no-signaling cones coincide. Returns
/// the generator and constraint forms; coordinates are (x^{-1}, x^0, x^{+1}).
pub fn square_cone() -> (ConeVRep, ConeHRep) {
    (bell_cone(1).expect("n=1"), ns_cone(1).expect("n=1"))
}

/// Generators are the deterministic strategies `x^{s} = prod_j a_j^{s_j}`.
pub fn bell_cone(n: usize) -> Result<ConeVRep> {
    check_party_count(n)?;
    let rows: Vec<Vec<Rational>> =
        deterministic_boxes(n)?.into_iter().map(|b| b.entries().to_vec()).collect();
    ConeVRep::new(entry_count(n), rows)
}

/// One positivity constraint per `(settings, outcomes)` pair in
/// `{-1,+1}^n x {-1,+1}^n`.
pub fn ns_cone(n: usize) -> Result<ConeHRep> {
    check_party_count(n)?;
    let mut rows = Vec::with_capacity(1 << (2 * n));
    for s in sign_words(n) {
        for t in sign_words(n) {
            rows.push(ns_constraint_raw(&s, &t));
        }
    }
    ConeHRep::new(entry_count(n), rows)
}

/// The probability functional for outcomes `t` under settings `s`:
/// coefficient of `x^{v}` is `g_v(t, s)`.
pub fn ns_constraint_raw(s: &[i8], t: &[i8]) -> Vec<Rational> {
    let n = s.len();
    (0..entry_count(n)).map(|idx| g_coefficient(&index_word(n, idx), t, s)).collect()
}

/// `g_v(t,s) = 2^{-n} prod_j h` with `h = t_j` when `v_j = s_j`, `1` when
/// `v_j = 0`, and `0` when `v_j = -s_j`.
pub fn g_coefficient(v: &[i8], t: &[i8], s: &[i8]) -> Rational {
    let n = v.len();
    debug_assert!(t.len() == n && s.len() == n);
    let mut numerator = 1i64;
    for j in 0..n {
        let h = if v[j] == s[j] {
            t[j] as i64
        } else if v[j] == 0 {
            1
        } else {
            0
        };
        if h == 0 {
            return Rational::zero();
        }
        numerator *= h;
    }
    rat(numerator, 1 << n)
}

/// Conditional outcome probabilities `P(t|s)` for all settings and
/// outcomes in `{-1,+1}^n`, in canonical order (settings outer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityTable {
    n: usize,
    rows: Vec<(Vec<i8>, Vec<i8>, Rational)>,
}

impl ProbabilityTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[(Vec<i8>, Vec<i8>, Rational)] {
        &self.rows
    }

    pub fn get(&self, s: &[i8], t: &[i8]) -> Option<&Rational> {
        self.rows.iter().find(|(rs, rt, _)| rs == s && rt == t).map(|(_, _, p)| p)
    }

    /// Sum of `P(t|s)` over all outcomes for fixed settings.
    pub fn marginal_total(&self, s: &[i8]) -> Rational {
        self.rows
            .iter()
            .filter(|(rs, _, _)| rs == s)
            .map(|(_, _, p)| p.clone())
            .sum()
    }
}

/// Expands a box into its outcome probabilities: `P(t|s) = sum_v g_v(t,s) x^v`.
/// For every `s` the outcome total equals the normalization `x^{0..0}`.
pub fn probabilities(x: &CorrelationTensor) -> ProbabilityTable {
    let n = x.n();
    let mut rows = Vec::with_capacity(1 << (2 * n));
    for s in sign_words(n) {
        for t in sign_words(n) {
            let mut p = Rational::zero();
            for (idx, value) in x.entries().iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                let g = g_coefficient(&index_word(n, idx), &t, &s);
                if !g.is_zero() {
                    p += g * value;
                }
            }
            rows.push((s.clone(), t.clone(), p));
        }
    }
    ProbabilityTable { n, rows }
}

/// The bilinear form the duality induces on boxes:
/// `F_{s1 t1} .. F_{sn tn} x^{s} y^{t} = pair(lower(x), y)`; symmetric in
/// its arguments.
pub fn bilinear_check(x: &CorrelationTensor, y: &CorrelationTensor) -> Result<Rational> {
    x.lower().pair(y)
}

/// Whether `x` is classical, decided through the dual route: `x` lies in
/// the Bell cone iff `lower(x)` is nonnegative on the whole no-signaling
/// cone, i.e. iff `lower(x)` is a conic combination of the positivity
/// functionals.
pub fn triviality_check(x: &CorrelationTensor) -> Result<bool> {
    let ns_dual = dual_hrep_to_vrep(&ns_cone(x.n())?);
    Ok(ns_dual.contains(x.lower().entries())?.is_member())
}

/// Vertex/facet counts whose mismatch rules out a polyhedral duality for
/// scenarios other than two binary observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountObstruction {
    /// Local deterministic strategies: `l^(k n)`.
    pub vertices: BigUint,
    /// No-signaling cone facets: `(l k)^n`.
    pub facets: BigUint,
    pub duality_possible: bool,
}

/// Counts for a general `(n,k,l)` scenario. The two counts agree for every
/// `n` exactly when `k = l = 2`.
pub fn duality_count_obstruction(n: u32, k: u32, l: u32) -> Result<CountObstruction> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Error::Invalid("scenario parameters must be at least 1".into()));
    }
    let vertices = BigUint::from(l).pow(k * n);
    let facets = (BigUint::from(l) * BigUint::from(k)).pow(n);
    let duality_possible = vertices == facets;
    Ok(CountObstruction { vertices, facets, duality_possible })
}
