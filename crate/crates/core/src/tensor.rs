//! Correlation and functional tensors over the setting alphabet {-1,0,+1}.
//!
//! A box in an (n,2,2) scenario is described by the correlators
//! `x^{s1..sn}` with each setting letter in {-1,0,+1}; the letter 0 means
//! "do not measure" and the all-zero entry carries the normalization of
//! probability. Bell and Tsirelson inequalities are covariant tensors
//! `f_{s1..sn}` of the same shape. Entries are stored densely, indexed by
//! words in lexicographic order with letter order -1 < 0 < +1; that single
//! layout choice is what every file format and canonical form relies on.

use std::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::rational::{format_rational, parse_rational, rat, rat_int, Rational};
use crate::Result;

/// Maximum supported party count for dense 3^n storage.
pub const MAX_PARTIES: usize = 6;

/// Number of entries of an n-party tensor.
pub fn entry_count(n: usize) -> usize {
    3usize.pow(n as u32)
}

pub(crate) fn check_party_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::PartyCount(n));
    }
    Ok(())
}

/// A word of setting letters, one per party.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SettingWord(Vec<i8>);

impl SettingWord {
    pub fn new(letters: Vec<i8>) -> Result<Self> {
        check_party_count(letters.len())?;
        if letters.iter().any(|&l| !(-1..=1).contains(&l)) {
            return Err(Error::Invalid("setting letters must be -1, 0 or +1".into()));
        }
        Ok(SettingWord(letters))
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    /// Position in the canonical dense layout.
    pub fn index(&self) -> usize {
        word_index(&self.0)
    }

    /// Word at `index` in canonical order.
    pub fn from_index(n: usize, index: usize) -> Self {
        SettingWord(index_word(n, index))
    }
}

impl fmt::Display for SettingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match l {
                -1 => write!(f, "-1")?,
                0 => write!(f, "0")?,
                _ => write!(f, "+1")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for SettingWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(|t| match t.trim() {
                "-1" => Ok(-1),
                "0" => Ok(0),
                "+1" | "1" => Ok(1),
                other => Err(Error::Parse(format!("invalid setting letter `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SettingWord::new(letters)
    }
}

/// Canonical index of a letter word: first party most significant,
/// letters ordered -1 < 0 < +1.
pub fn word_index(letters: &[i8]) -> usize {
    letters.iter().fold(0, |acc, &l| acc * 3 + (l + 1) as usize)
}

/// Inverse of [`word_index`].
pub fn index_word(n: usize, mut index: usize) -> Vec<i8> {
    let mut letters = vec![0i8; n];
    for j in (0..n).rev() {
        letters[j] = (index % 3) as i8 - 1;
        index /= 3;
    }
    letters
}

/// Iterates all words of `n` letters over {-1,+1} in canonical order.
pub fn sign_words(n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        // bit 0 of mask = first party; -1 sorts before +1
        let word: Vec<i8> = (0..n)
            .map(|j| if mask >> (n - 1 - j) & 1 == 0 { -1 } else { 1 })
            .collect();
        out.push(word);
    }
    out
}

/// Tensor variance: `Upper` for boxes (contravariant), `Lower` for
/// inequalities (covariant).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Upper,
    Lower,
}

impl fmt::Display for Variance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variance::Upper => write!(f, "upper"),
            Variance::Lower => write!(f, "lower"),
        }
    }
}

/// Shared behavior of the two tensor kinds. Implementations store a dense
/// entry array of length 3^n in canonical word order.
pub trait TensorLike: Sized + Clone {
    const VARIANCE: Variance;

    fn n(&self) -> usize;
    fn entries(&self) -> &[Rational];
    fn from_entries(n: usize, entries: Vec<Rational>) -> Result<Self>;

    fn entry(&self, word: &[i8]) -> &Rational {
        &self.entries()[word_index(word)]
    }

    fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    fn scale(&self, c: &Rational) -> Self {
        let entries = self.entries().iter().map(|e| e * c).collect();
        Self::from_entries(self.n(), entries).expect("same shape")
    }

    fn add(&self, other: &Self) -> Result<Self> {
        check_same_n(self.n(), other.n())?;
        let entries = self
            .entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(self.n(), entries)
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        check_same_n(self.n(), other.n())?;
        let entries = self
            .entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a - b)
            .collect();
        Self::from_entries(self.n(), entries)
    }
}

pub(crate) fn check_same_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// A (possibly unnormalized) box: contravariant tensor `x^{s1..sn}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationTensor {
    n: usize,
    entries: Vec<Rational>,
}

/// A Bell/Tsirelson inequality: covariant tensor `f_{s1..sn}`. The
/// inequality it denotes is `f_{s} x^{s} >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalTensor {
    n: usize,
    entries: Vec<Rational>,
}

macro_rules! tensor_impl {
    ($ty:ident, $variance:expr) => {
        impl TensorLike for $ty {
            const VARIANCE: Variance = $variance;

            fn n(&self) -> usize {
                self.n
            }

            fn entries(&self) -> &[Rational] {
                &self.entries
            }

            fn from_entries(n: usize, entries: Vec<Rational>) -> Result<Self> {
                check_party_count(n)?;
                if entries.len() != entry_count(n) {
                    return Err(Error::DimensionMismatch {
                        expected: entry_count(n),
                        got: entries.len(),
                    });
                }
                Ok($ty { n, entries })
            }
        }

        impl $ty {
            pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
                <$ty as TensorLike>::from_entries(n, entries)
            }

            pub fn zero(n: usize) -> Result<Self> {
                <$ty as TensorLike>::from_entries(n, vec![Rational::zero(); entry_count(n)])
            }

            /// Builds a tensor from `(word, value)` pairs; unlisted words are zero.
            pub fn from_sparse(n: usize, entries: &[(&[i8], Rational)]) -> Result<Self> {
                let mut dense = vec![Rational::zero(); entry_count(n)];
                for (word, value) in entries {
                    if word.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: word.len() });
                    }
                    dense[word_index(word)] = value.clone();
                }
                <$ty as TensorLike>::from_entries(n, dense)
            }

            pub fn n(&self) -> usize {
                self.n
            }

            pub fn entries(&self) -> &[Rational] {
                &self.entries
            }

            pub fn entry(&self, word: &[i8]) -> &Rational {
                &self.entries[word_index(word)]
            }
        }
    };
}

tensor_impl!(CorrelationTensor, Variance::Upper);
tensor_impl!(FunctionalTensor, Variance::Lower);

impl CorrelationTensor {
    /// The normalization component `x^{0..0}`.
    pub fn normalization(&self) -> &Rational {
        &self.entries[word_index(&vec![0i8; self.n])]
    }

    /// Lowers every index with `F_{st}`, turning the box into the
    /// coefficients of an inequality.
    pub fn lower(&self) -> FunctionalTensor {
        let entries = apply_matrix_all_axes(&self.entries, self.n, &FTensor::standard().lowered);
        FunctionalTensor { n: self.n, entries }
    }
}

impl FunctionalTensor {
    /// Raises every index with `F^{st}`, turning the inequality into a box.
    pub fn raise(&self) -> CorrelationTensor {
        let entries = apply_matrix_all_axes(&self.entries, self.n, &FTensor::standard().raised);
        CorrelationTensor { n: self.n, entries }
    }

    /// Evaluates the inequality on a box: the full contraction
    /// `sum_s f_s x^s`.
    pub fn pair(&self, x: &CorrelationTensor) -> Result<Rational> {
        check_same_n(self.n, x.n)?;
        let mut acc = Rational::zero();
        for (f, v) in self.entries.iter().zip(&x.entries) {
            if !f.is_zero() && !v.is_zero() {
                acc += f * v;
            }
        }
        Ok(acc)
    }
}

/// The two directions of the variance transform are inverse to each other;
/// `dualize` is the direction-dispatched name.
pub trait Dualize {
    type Dual;

    fn dualize(&self) -> Self::Dual;
}

impl Dualize for CorrelationTensor {
    type Dual = FunctionalTensor;

    fn dualize(&self) -> FunctionalTensor {
        self.lower()
    }
}

impl Dualize for FunctionalTensor {
    type Dual = CorrelationTensor;

    fn dualize(&self) -> CorrelationTensor {
        self.raise()
    }
}

/// The symmetric 3x3 matrix pair implementing index raising and lowering.
/// Rows and columns are indexed by letters in order -1, 0, +1.
#[derive(Debug, Clone)]
pub struct FTensor {
    pub raised: [[Rational; 3]; 3],
    pub lowered: [[Rational; 3]; 3],
}

impl FTensor {
    pub fn standard() -> Self {
        let raised = [
            [rat_int(1), rat_int(0), rat_int(1)],
            [rat_int(0), rat_int(1), rat_int(0)],
            [rat_int(1), rat_int(0), rat_int(-1)],
        ];
        let lowered = [
            [rat(1, 2), rat_int(0), rat(1, 2)],
            [rat_int(0), rat_int(1), rat_int(0)],
            [rat(1, 2), rat_int(0), rat(-1, 2)],
        ];
        FTensor { raised, lowered }
    }
}

/// Applies a 3x3 matrix to every tensor axis:
/// `out[s1..sn] = sum_t m[s1][t1] .. m[sn][tn] in[t1..tn]`.
#[allow(clippy::needless_range_loop)] // strided axis indexing
fn apply_matrix_all_axes(entries: &[Rational], n: usize, m: &[[Rational; 3]; 3]) -> Vec<Rational> {
    let len = entries.len();
    let mut cur = entries.to_vec();
    // One axis at a time; stride tricks keep this O(n * 3^n) contractions.
    for axis in 0..n {
        let stride = 3usize.pow((n - 1 - axis) as u32);
        let mut next = vec![Rational::zero(); len];
        for idx in 0..len {
            let letter = (idx / stride) % 3;
            let base = idx - letter * stride;
            let mut acc = Rational::zero();
            for t in 0..3 {
                let coeff = &m[letter][t];
                if coeff.is_zero() {
                    continue;
                }
                let v = &cur[base + t * stride];
                if !v.is_zero() {
                    acc += coeff * v;
                }
            }
            next[idx] = acc;
        }
        cur = next;
    }
    cur
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// A parsed tensor of either variance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyTensor {
    Correlation(CorrelationTensor),
    Functional(FunctionalTensor),
}

impl AnyTensor {
    pub fn n(&self) -> usize {
        match self {
            AnyTensor::Correlation(t) => t.n(),
            AnyTensor::Functional(t) => t.n(),
        }
    }

    pub fn variance(&self) -> Variance {
        match self {
            AnyTensor::Correlation(_) => Variance::Upper,
            AnyTensor::Functional(_) => Variance::Lower,
        }
    }

    pub fn entries(&self) -> &[Rational] {
        match self {
            AnyTensor::Correlation(t) => t.entries(),
            AnyTensor::Functional(t) => t.entries(),
        }
    }

    pub fn into_correlation(self) -> Result<CorrelationTensor> {
        match self {
            AnyTensor::Correlation(t) => Ok(t),
            AnyTensor::Functional(_) => Err(Error::Invalid(
                "expected a box (variance=upper), found variance=lower".into(),
            )),
        }
    }

    pub fn into_functional(self) -> Result<FunctionalTensor> {
        match self {
            AnyTensor::Functional(t) => Ok(t),
            AnyTensor::Correlation(_) => Err(Error::Invalid(
                "expected a functional (variance=lower), found variance=upper".into(),
            )),
        }
    }
}

/// Serializes in the `bellcone-tensor v1` format. Zero entries are omitted;
/// the remaining words appear in canonical order, values in lowest terms.
pub fn write_tensor(n: usize, variance: Variance, entries: &[Rational]) -> String {
    let mut out = format!("bellcone-tensor v1; n={n}; variance={variance}\n");
    for (idx, value) in entries.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let word = SettingWord::from_index(n, idx);
        out.push_str(&format!("{word} {}\n", format_rational(value)));
    }
    out
}

pub fn tensor_to_string(t: &AnyTensor) -> String {
    write_tensor(t.n(), t.variance(), t.entries())
}

/// Parses the `bellcone-tensor v1` format. Missing words are zero; a word
/// may not be listed twice.
pub fn parse_tensor(text: &str) -> Result<AnyTensor> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty tensor document".into()))?;
    let (n, variance) = parse_tensor_header(header)?;
    let mut entries = vec![Rational::zero(); entry_count(n)];
    let mut seen = vec![false; entries.len()];
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (word, value) = line.split_once(char::is_whitespace).ok_or_else(|| {
            Error::Parse(format!("line {}: expected `<word> <rational>`", lineno + 1))
        })?;
        let word: SettingWord = word.parse()?;
        if word.parties() != n {
            return Err(Error::Parse(format!(
                "line {}: word has {} letters, expected {n}",
                lineno + 1,
                word.parties()
            )));
        }
        let idx = word.index();
        if seen[idx] {
            return Err(Error::Parse(format!("line {}: duplicate word {word}", lineno + 1)));
        }
        seen[idx] = true;
        entries[idx] = parse_rational(value)?;
    }
    Ok(match variance {
        Variance::Upper => AnyTensor::Correlation(CorrelationTensor::new(n, entries)?),
        Variance::Lower => AnyTensor::Functional(FunctionalTensor::new(n, entries)?),
    })
}

fn parse_tensor_header(header: &str) -> Result<(usize, Variance)> {
    let mut parts = header.split(';').map(str::trim);
    if parts.next() != Some("bellcone-tensor v1") {
        return Err(Error::Parse("expected header `bellcone-tensor v1; ...`".into()));
    }
    let mut n = None;
    let mut variance = None;
    for part in parts {
        match part.split_once('=') {
            Some(("n", v)) => {
                n = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid n `{v}`")))?,
                )
            }
            Some(("variance", v)) => {
                variance = Some(match v.trim() {
                    "upper" => Variance::Upper,
                    "lower" => Variance::Lower,
                    other => return Err(Error::Parse(format!("invalid variance `{other}`"))),
                })
            }
            _ => return Err(Error::Parse(format!("unrecognized header field `{part}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing n in header".into()))?;
    check_party_count(n)?;
    let variance = variance.ok_or_else(|| Error::Parse("missing variance in header".into()))?;
    Ok((n, variance))
}
