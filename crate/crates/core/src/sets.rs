//! Integer-set representation and the exact sumset kernels.
//!
//! Sets are stored as an ascending element list. Sumsets are computed by
//! shift-OR convolution over a word-packed bitset indexed by value.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest element accepted from callers unless a different limit is given.
pub const DEFAULT_MAX_ELEMENT: u32 = 4096;

/// A finite set of nonnegative integers, strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntegerSet {
    elements: Vec<u32>,
}

impl IntegerSet {
    /// Builds a set from a strictly ascending list, rejecting elements above
    /// [`DEFAULT_MAX_ELEMENT`].
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        Self::with_limit(elements, DEFAULT_MAX_ELEMENT)
    }

    pub fn with_limit(elements: Vec<u32>, limit: u32) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::NotAscending(format!("{} then {}", w[0], w[1])));
        }
        if let Some(&max) = elements.last() {
            if max > limit {
                return Err(Error::ElementTooLarge { value: max as u64, limit });
            }
        }
        Ok(Self { elements })
    }

    /// Sorts and deduplicates arbitrary values.
    pub fn from_values<I: IntoIterator<Item = u32>>(values: I) -> Result<Self> {
        let mut elements: Vec<u32> = values.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements)
    }

    /// Internal constructor for kernel outputs, which may legitimately exceed
    /// the input limit (sums reach twice the largest element).
    pub(crate) fn from_sorted_unchecked(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    pub(crate) fn from_bits(bits: &Bits) -> Self {
        Self::from_sorted_unchecked(bits.ones().collect())
    }

    /// The integer interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: u32, hi: u32) -> Self {
        Self::from_sorted_unchecked((lo..=hi).collect())
    }

    pub fn empty() -> Self {
        Self { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min_element(&self) -> Option<u32> {
        self.elements.first().copied()
    }

    pub fn max_element(&self) -> Option<u32> {
        self.elements.last().copied()
    }

    pub fn contains(&self, value: u32) -> bool {
        self.elements.binary_search(&value).is_ok()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.elements
    }

    /// Elements of `self` that are not in `other`.
    pub fn difference(&self, other: &IntegerSet) -> IntegerSet {
        Self::from_sorted_unchecked(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn intersection(&self, other: &IntegerSet) -> IntegerSet {
        Self::from_sorted_unchecked(self.iter().filter(|&x| other.contains(x)).collect())
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Number of elements in `[lo, hi]`.
    pub fn count_in(&self, lo: u32, hi: u32) -> usize {
        if lo > hi {
            return 0;
        }
        let start = self.elements.partition_point(|&x| x < lo);
        let end = self.elements.partition_point(|&x| x <= hi);
        end - start
    }

    /// Greatest common divisor of the nonzero elements (0 for `{}` or `{0}`).
    pub fn gcd(&self) -> u32 {
        self.iter().fold(0, |g, x| g.gcd(&x))
    }

    pub(crate) fn to_bits(&self) -> Bits {
        let mut bits = Bits::with_capacity(self.max_element().map_or(0, |m| m as usize + 1));
        for x in self.iter() {
            bits.insert(x as usize);
        }
        bits
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for IntegerSet {
    type Err = Error;

    /// Parses the `{a,b,c}` literal form. Elements must be ascending.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(s.to_string()))?;
        if body.trim().is_empty() {
            return Ok(Self::empty());
        }
        let mut elements = Vec::new();
        for token in body.split(',') {
            let value: u64 = token
                .trim()
                .parse()
                .map_err(|_| Error::Parse(s.to_string()))?;
            if value > DEFAULT_MAX_ELEMENT as u64 {
                return Err(Error::ElementTooLarge { value, limit: DEFAULT_MAX_ELEMENT });
            }
            elements.push(value as u32);
        }
        Self::new(elements)
    }
}

/// Word-packed bitset indexed by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub(crate) fn with_capacity(nbits: usize) -> Self {
        Self { words: vec![0; nbits.div_ceil(64).max(1)] }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// `self |= src << shift`, truncated to `self`'s capacity.
    pub(crate) fn or_shifted(&mut self, src: &Bits, shift: usize) {
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        let n = self.words.len();
        for (i, &w) in src.words.iter().enumerate() {
            let lo = i + word_shift;
            if lo >= n {
                break;
            }
            self.words[lo] |= w << bit_shift;
            if bit_shift != 0 && lo + 1 < n {
                self.words[lo + 1] |= w >> (64 - bit_shift);
            }
        }
    }

    /// `self |= (a & b)` word by word.
    pub(crate) fn or_and(&mut self, a: &Bits, b: &Bits) {
        for ((d, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *d |= x & y;
        }
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some(i as u32 * 64 + t)
            })
        })
    }
}

/// `A + B = {a + b : a ∈ A, b ∈ B}`.
pub fn sumset(a: &IntegerSet, b: &IntegerSet) -> Result<IntegerSet> {
    let (Some(amax), Some(bmax)) = (a.max_element(), b.max_element()) else {
        return Err(Error::EmptySet);
    };
    let src = b.to_bits();
    let mut out = Bits::with_capacity((amax + bmax) as usize + 1);
    for x in a.iter() {
        out.or_shifted(&src, x as usize);
    }
    Ok(IntegerSet::from_bits(&out))
}

/// Sums of two distinct elements.
///
/// Runs the shift-OR convolution with a second bit-plane that records sums
/// reached by at least two ordered pairs. A sum `s` that is not a double `2a`
/// always has an even number of ordered representations, and a double `2a`
/// reaches two only when some `b + c = 2a` with `b != c` exists. So the
/// second plane is exactly the restricted sumset.
pub fn restricted_sumset(a: &IntegerSet) -> Result<IntegerSet> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { needed: 2, got: a.len() });
    }
    let src = a.to_bits();
    let cap = 2 * a.max_element().unwrap_or(0) as usize + 1;
    let mut once = Bits::with_capacity(cap);
    let mut twice = Bits::with_capacity(cap);
    let mut shifted = Bits::with_capacity(cap);
    for x in a.iter() {
        shifted.words.fill(0);
        shifted.or_shifted(&src, x as usize);
        twice.or_and(&once, &shifted);
        for (o, s) in once.words.iter_mut().zip(&shifted.words) {
            *o |= s;
        }
    }
    Ok(IntegerSet::from_bits(&twice))
}

/// Largest element for which the single-word fast path applies.
pub(crate) const SMALL_LIMIT: u32 = 63;

/// Restricted sumset of an ascending slice with every element at most
/// [`SMALL_LIMIT`], as a 128-bit mask. Uses `2^(S ∪ {x}) = 2^S ∪ (x + S)`.
#[inline]
pub(crate) fn restricted_mask_small(elements: &[u32]) -> u128 {
    let mut seen: u128 = 0;
    let mut sums: u128 = 0;
    for &x in elements {
        sums |= seen << x;
        seen |= 1u128 << x;
    }
    sums
}

/// `|2^A|` for an ascending element slice, using the single-word path
/// whenever it applies.
pub fn restricted_sumset_size(elements: &[u32]) -> usize {
    match elements.last() {
        Some(&max) if max <= SMALL_LIMIT => restricted_mask_small(elements).count_ones() as usize,
        _ => restricted_sumset(&IntegerSet::from_sorted_unchecked(elements.to_vec()))
            .map_or(0, |s| s.len()),
    }
}

/// An integer set with minimum 0, gcd 1 and at least two elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IntegerSet", into = "IntegerSet")]
pub struct NormalizedSet {
    inner: IntegerSet,
}

impl NormalizedSet {
    pub fn new(set: IntegerSet) -> Result<Self> {
        if set.len() < 2 {
            return Err(Error::TooFewElements { needed: 2, got: set.len() });
        }
        if set.min_element() != Some(0) {
            return Err(Error::NotNormalized(format!("{set} does not start at 0")));
        }
        if set.gcd() != 1 {
            return Err(Error::NotNormalized(format!("{set} has gcd {}", set.gcd())));
        }
        Ok(Self { inner: set })
    }

    /// Parses a set literal and requires it to already be normalized.
    pub fn parse(literal: &str) -> Result<Self> {
        Self::new(literal.parse()?)
    }

    pub(crate) fn from_slice_unchecked(elements: &[u32]) -> Self {
        Self { inner: IntegerSet::from_sorted_unchecked(elements.to_vec()) }
    }

    /// Cardinality `k`.
    pub fn k(&self) -> usize {
        self.inner.len()
    }

    /// Largest element `l`.
    pub fn l(&self) -> u32 {
        self.inner.max_element().expect("normalized sets are nonempty")
    }

    /// Element `a_i` in ascending order.
    pub fn a(&self, i: usize) -> u32 {
        self.inner.as_slice()[i]
    }

    pub fn as_set(&self) -> &IntegerSet {
        &self.inner
    }

    pub fn as_slice(&self) -> &[u32] {
        self.inner.as_slice()
    }

    pub fn contains(&self, value: u32) -> bool {
        self.inner.contains(value)
    }

    /// The set without its largest element.
    pub fn without_max(&self) -> IntegerSet {
        let s = self.as_slice();
        IntegerSet::from_sorted_unchecked(s[..s.len() - 1].to_vec())
    }

    pub fn restricted_sumset(&self) -> IntegerSet {
        restricted_sumset(&self.inner).expect("k >= 2")
    }

    pub fn restricted_size(&self) -> usize {
        restricted_sumset_size(self.as_slice())
    }

    pub fn double(&self) -> IntegerSet {
        sumset(&self.inner, &self.inner).expect("nonempty")
    }
}

impl TryFrom<IntegerSet> for NormalizedSet {
    type Error = Error;
    fn try_from(set: IntegerSet) -> Result<Self> {
        Self::new(set)
    }
}

impl From<NormalizedSet> for IntegerSet {
    fn from(set: NormalizedSet) -> Self {
        set.inner
    }
}

impl fmt::Display for NormalizedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Result of [`normalize`]: `original = offset + scale * set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub set: NormalizedSet,
    pub offset: u32,
    pub scale: u32,
}

/// Translates the minimum to 0 and divides by the gcd of the nonzero elements.
pub fn normalize(a: &IntegerSet) -> Result<Normalization> {
    if a.len() < 2 {
        return Err(Error::TooFewElements { needed: 2, got: a.len() });
    }
    let offset = a.min_element().unwrap();
    let shifted: Vec<u32> = a.iter().map(|x| x - offset).collect();
    let scale = shifted.iter().fold(0u32, |g, &x| g.gcd(&x));
    let elements = shifted.into_iter().map(|x| x / scale).collect();
    Ok(Normalization {
        set: NormalizedSet { inner: IntegerSet::from_sorted_unchecked(elements) },
        offset,
        scale,
    })
}

/// The mirror image `l - A`, which preserves `|2A|` and `|2^A|`.
pub fn reflect(a: &NormalizedSet) -> NormalizedSet {
    let l = a.l();
    let elements = a.as_slice().iter().rev().map(|&x| l - x).collect();
    // l - A keeps min 0 and the gcd, so it is already normalized.
    NormalizedSet { inner: IntegerSet::from_sorted_unchecked(elements) }
}

/// Cached sumset data for one normalized set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumsetProfile {
    pub source: NormalizedSet,
    pub double: IntegerSet,
    pub restricted: IntegerSet,
    /// `[1, 2k-4] \ 2^(A \ {max})`; only defined for `k >= 3`.
    pub exceptional: Option<IntegerSet>,
}

pub fn profile(a: &NormalizedSet) -> SumsetProfile {
    SumsetProfile {
        source: a.clone(),
        double: a.double(),
        restricted: a.restricted_sumset(),
        exceptional: (a.k() >= 3).then(|| exceptional_set(a)),
    }
}

/// `B = [1, 2k-4] \ 2^A'` with `A' = A \ {a_{k-1}}`. Requires `k >= 3`.
pub(crate) fn exceptional_set(a: &NormalizedSet) -> IntegerSet {
    let k = a.k() as u32;
    let prime = a.without_max();
    let sums = restricted_sumset(&prime).expect("k >= 3");
    IntegerSet::interval(1, 2 * k - 4).difference(&sums)
}
