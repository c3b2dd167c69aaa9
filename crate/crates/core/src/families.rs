//! Extremal families: sets attaining `|2^A| = 3k - 7` in the growth regime
//! (maximum `2k - 2`) and with maximum `2k - 3`.
//!
//! Every generator validates cardinality and maximum of what it builds and
//! fails loudly instead of emitting a malformed set.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{reflect, IntegerSet, NormalizedSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyKind {
    /// Growth regime, `k ≡ 0 (mod 3)`.
    #[serde(rename = "T2_mod0")]
    T2Mod0,
    /// Growth regime, `k ≡ 1 (mod 3)`.
    #[serde(rename = "T2_mod1")]
    T2Mod1,
    #[serde(rename = "T3_interval")]
    T3Interval,
    #[serde(rename = "T3_parity")]
    T3Parity,
    #[serde(rename = "T3_mod3_pair")]
    T3Mod3Pair,
    #[serde(rename = "T3_four")]
    T3Four,
    #[serde(rename = "T3_mod3_shift")]
    T3Mod3Shift,
    #[serde(rename = "T3_sporadic")]
    T3Sporadic,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::T2Mod0,
        FamilyKind::T2Mod1,
        FamilyKind::T3Interval,
        FamilyKind::T3Parity,
        FamilyKind::T3Mod3Pair,
        FamilyKind::T3Four,
        FamilyKind::T3Mod3Shift,
        FamilyKind::T3Sporadic,
    ];

    /// The five parametric kinds with maximum `2k - 3`.
    pub const PARAMETRIC_SHORT: [FamilyKind; 5] = [
        FamilyKind::T3Interval,
        FamilyKind::T3Parity,
        FamilyKind::T3Mod3Pair,
        FamilyKind::T3Four,
        FamilyKind::T3Mod3Shift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::T2Mod0 => "T2_mod0",
            FamilyKind::T2Mod1 => "T2_mod1",
            FamilyKind::T3Interval => "T3_interval",
            FamilyKind::T3Parity => "T3_parity",
            FamilyKind::T3Mod3Pair => "T3_mod3_pair",
            FamilyKind::T3Four => "T3_four",
            FamilyKind::T3Mod3Shift => "T3_mod3_shift",
            FamilyKind::T3Sporadic => "T3_sporadic",
        }
    }

    pub fn takes_theta(self) -> bool {
        matches!(
            self,
            FamilyKind::T3Interval | FamilyKind::T3Parity | FamilyKind::T3Mod3Pair | FamilyKind::T3Mod3Shift
        )
    }

    /// Candidate θ values for `k`; generators still reject invalid ones.
    fn theta_candidates(self, k: u32) -> Vec<u32> {
        match self {
            FamilyKind::T3Interval => (k..=(2 * k).saturating_sub(4)).collect(),
            FamilyKind::T3Parity => (1..=k.saturating_sub(3)).collect(),
            FamilyKind::T3Mod3Pair => (0..k).collect(),
            FamilyKind::T3Mod3Shift => (1..k).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::OutOfRange(format!("unknown family kind `{s}`")))
    }
}

/// Parameters naming one family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub k: u32,
    pub theta: Option<u32>,
    pub sporadic_index: Option<usize>,
}

impl FamilySpec {
    pub fn generate(&self) -> Result<NormalizedSet> {
        let theta = || {
            self.theta
                .ok_or_else(|| Error::OutOfRange(format!("{} needs a theta parameter", self.kind)))
        };
        match self.kind {
            FamilyKind::T2Mod0 | FamilyKind::T2Mod1 => {
                let expected = if self.kind == FamilyKind::T2Mod0 { 0 } else { 1 };
                if self.k % 3 != expected {
                    return Err(Error::OutOfRange(format!("{} needs k ≡ {expected} (mod 3)", self.kind)));
                }
                gen_theorem2(self.k)
            }
            FamilyKind::T3Interval => gen_t3_interval(self.k, theta()?),
            FamilyKind::T3Parity => gen_t3_parity(self.k, theta()?),
            FamilyKind::T3Mod3Pair => gen_t3_mod3_pair(self.k, theta()?),
            FamilyKind::T3Four => gen_t3_four(self.k),
            FamilyKind::T3Mod3Shift => gen_t3_mod3_shift(self.k, theta()?),
            FamilyKind::T3Sporadic => {
                let idx = self
                    .sporadic_index
                    .ok_or_else(|| Error::OutOfRange("sporadic entries need an index".into()))?;
                sporadic_catalog()
                    .into_iter()
                    .find(|e| e.index == idx)
                    .map(|e| e.set)
                    .ok_or_else(|| Error::OutOfRange(format!("no sporadic entry {idx}")))
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={}", self.kind, self.k)?;
        if let Some(t) = self.theta {
            write!(f, " theta={t}")?;
        }
        if let Some(i) = self.sporadic_index {
            write!(f, " index={i}")?;
        }
        Ok(())
    }
}

fn build(values: impl IntoIterator<Item = u32>, k: u32, max: u32, what: &str) -> Result<NormalizedSet> {
    let set = NormalizedSet::new(IntegerSet::from_values(values)?)?;
    if set.k() != k as usize || set.l() != max {
        return Err(Error::OutOfRange(format!(
            "{what} produced {set} (cardinality {}, max {}), expected cardinality {k}, max {max}",
            set.k(),
            set.l()
        )));
    }
    Ok(set)
}

/// The unique growth-regime extremal set for `k >= 6`, `k ≢ 2 (mod 3)`.
pub fn gen_theorem2(k: u32) -> Result<NormalizedSet> {
    if k < 6 || k % 3 == 2 {
        return Err(Error::OutOfRange(format!("no Theorem 2 family for k = {k}")));
    }
    let (threes_hi, ones_hi) = if k.is_multiple_of(3) { (k - 3, 2 * k - 2) } else { (2 * k - 2, k - 3) };
    let values = (0..=threes_hi)
        .filter(|x| x % 3 == 0)
        .chain((1..=ones_hi).filter(|x| x % 3 == 1));
    build(values, k, 2 * k - 2, "theorem 2 family")
}

fn require_short_k(k: u32) -> Result<()> {
    if k < 4 {
        return Err(Error::OutOfRange(format!("k = {k} < 4")));
    }
    Ok(())
}

/// `[0, θ-k+1] ∪ [θ, 2k-3]` for `k <= θ <= 2k-4`.
pub fn gen_t3_interval(k: u32, theta: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    if !(k..=2 * k - 4).contains(&theta) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside [{k}, {}]", 2 * k - 4)));
    }
    build((0..=theta - k + 1).chain(theta..=2 * k - 3), k, 2 * k - 3, "interval family")
}

/// Evens up to `2θ` and odds from `2θ+1` to `2k-3`, for `1 <= θ <= k-3`.
pub fn gen_t3_parity(k: u32, theta: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    if !(1..=k - 3).contains(&theta) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside [1, {}]", k - 3)));
    }
    let values = (0..=theta).map(|i| 2 * i).chain((theta + 1..k).map(|j| 2 * j - 1));
    build(values, k, 2 * k - 3, "parity family")
}

/// `{3i : i <= θ} ∪ {3j - k : θ < j < k}` for `3 ∤ k`, `k-3 < 3θ < 2k-3`.
pub fn gen_t3_mod3_pair(k: u32, theta: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    if k.is_multiple_of(3) {
        return Err(Error::OutOfRange(format!("mod-3 pair family needs 3 ∤ k, got k = {k}")));
    }
    if !(3 * theta > k - 3 && 3 * theta < 2 * k - 3) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside ((k-3)/3, (2k-3)/3)")));
    }
    let values = (0..=theta).map(|i| 3 * i).chain((theta + 1..k).map(|j| 3 * j - k));
    build(values, k, 2 * k - 3, "mod-3 pair family")
}

/// `{0, 2k-3} ∪ {4i, 4i-3 : 1 <= i <= (k-2)/2}` for even `k`.
pub fn gen_t3_four(k: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    if k % 2 == 1 {
        return Err(Error::OutOfRange(format!("four family needs even k, got {k}")));
    }
    let values = [0, 2 * k - 3]
        .into_iter()
        .chain((1..=(k - 2) / 2).flat_map(|i| [4 * i, 4 * i - 3]));
    build(values, k, 2 * k - 3, "four family")
}

/// `{3i : 3i <= 2k-3} ∪ {θ + 3i : 3i <= k-3}` for `3 | k`, `1 <= θ <= k-1`, `3 ∤ θ`.
pub fn gen_t3_mod3_shift(k: u32, theta: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    if !k.is_multiple_of(3) {
        return Err(Error::OutOfRange(format!("mod-3 shift family needs 3 | k, got k = {k}")));
    }
    if !(1..k).contains(&theta) || theta.is_multiple_of(3) {
        return Err(Error::OutOfRange(format!("theta = {theta} must lie in [1, k-1] with 3 ∤ theta")));
    }
    let values = (0..=(2 * k - 3) / 3)
        .map(|i| 3 * i)
        .chain((0..=(k - 3) / 3).map(|i| theta + 3 * i));
    build(values, k, 2 * k - 3, "mod-3 shift family")
}

/// Every valid member of one parametric kind at `k`, in θ order.
pub fn members(kind: FamilyKind, k: u32) -> Vec<(FamilySpec, NormalizedSet)> {
    let spec = |theta| FamilySpec { kind, k, theta, sporadic_index: None };
    match kind {
        FamilyKind::T2Mod0 | FamilyKind::T2Mod1 | FamilyKind::T3Four => {
            spec(None).generate().ok().map(|s| (spec(None), s)).into_iter().collect()
        }
        FamilyKind::T3Sporadic => sporadic_catalog()
            .into_iter()
            .filter(|e| e.set.k() == k as usize)
            .map(|e| {
                (FamilySpec { kind, k, theta: None, sporadic_index: Some(e.index) }, e.set)
            })
            .collect(),
        _ => kind
            .theta_candidates(k)
            .into_iter()
            .filter_map(|t| spec(Some(t)).generate().ok().map(|s| (spec(Some(t)), s)))
            .collect(),
    }
}

/// Every member of every kind at `k`.
pub fn all_members(k: u32) -> Vec<(FamilySpec, NormalizedSet)> {
    FamilyKind::ALL.into_iter().flat_map(|kind| members(kind, k)).collect()
}

/// Pairs of distinct parameters within one kind whose sets are mirror images.
pub fn reflect_pairs(kind: FamilyKind, k: u32) -> Vec<(FamilySpec, FamilySpec)> {
    let list = members(kind, k);
    let mut out = Vec::new();
    for (i, (si, ai)) in list.iter().enumerate() {
        for (sj, aj) in &list[i + 1..] {
            if &reflect(ai) == aj {
                out.push((*si, *sj));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SporadicEntry {
    pub index: usize,
    pub set: NormalizedSet,
    /// Which listed row the entry comes from.
    pub source: String,
    /// `max = 2k - 3`; the one entry that fails this is kept and flagged.
    pub consistent: bool,
}

const LISTED_SPORADICS: &[&[u32]] = &[
    &[0, 1, 4, 5, 6, 9],
    &[0, 3, 4, 5, 8, 9],
    &[0, 1, 2, 5, 6, 7, 11],
    &[0, 1, 3, 4, 7, 8, 11],
    &[0, 1, 4, 5, 6, 10, 11],
    &[0, 1, 4, 5, 7, 8, 11],
    &[0, 1, 5, 6, 7, 10, 11],
    &[0, 3, 4, 6, 7, 10, 11],
    &[0, 3, 4, 7, 8, 10, 11],
    &[0, 4, 5, 6, 9, 10, 11],
    &[0, 1, 2, 6, 7, 8, 12, 13],
    &[0, 1, 4, 5, 6, 9, 10, 13],
    &[0, 1, 5, 6, 7, 8, 12, 13],
    &[0, 1, 5, 6, 7, 11, 12, 13],
    &[0, 2, 3, 5, 7, 8, 10, 13],
    &[0, 2, 3, 5, 8, 10, 11, 13],
    &[0, 3, 4, 7, 8, 9, 12, 13],
    &[0, 3, 5, 6, 8, 10, 11, 13],
];

const LISTED_SPORADICS_TAIL: &[&[u32]] = &[
    &[0, 1, 2, 6, 7, 8, 9, 14, 15],
    &[0, 1, 4, 5, 7, 8, 11, 12, 15],
    &[0, 1, 6, 7, 8, 9, 13, 14, 15],
    &[0, 3, 4, 7, 8, 10, 11, 14, 15],
    &[0, 1, 2, 7, 8, 9, 10, 15, 16, 17],
    &[0, 1, 5, 6, 7, 10, 11, 12, 16, 17],
    &[0, 2, 3, 5, 7, 8, 10, 12, 15, 17],
    &[0, 2, 5, 7, 9, 10, 12, 14, 15, 17],
    &[0, 3, 4, 6, 10, 11, 13, 14, 17],
];

/// Period-5 rows `{5i, 5i+θ, 15 : i = 0,1,2} ∪ extra(θ)` for θ in 1..=4.
fn period5_row(theta: u32, extra: [u32; 2]) -> Vec<u32> {
    (0..3)
        .flat_map(|i| [5 * i, 5 * i + theta])
        .chain([15])
        .chain(extra)
        .collect()
}

/// The individually listed extremal sets with maximum `2k - 3`, in listed
/// order, with both period-5 rows expanded over θ = 1..=4.
pub fn sporadic_catalog() -> Vec<SporadicEntry> {
    let mut raw: Vec<(Vec<u32>, String)> = LISTED_SPORADICS
        .iter()
        .map(|s| (s.to_vec(), "listed".to_string()))
        .collect();
    for theta in 1..=4 {
        raw.push((period5_row(theta, [5 - theta, 10 - theta]), format!("period5_low theta={theta}")));
    }
    for theta in 1..=4 {
        raw.push((period5_row(theta, [10 - theta, 15 - theta]), format!("period5_high theta={theta}")));
    }
    raw.extend(LISTED_SPORADICS_TAIL.iter().map(|s| (s.to_vec(), "listed".to_string())));

    let mut out: Vec<SporadicEntry> = Vec::new();
    for (values, source) in raw {
        let set = NormalizedSet::new(IntegerSet::from_values(values).expect("small values"))
            .expect("listed sets are normalized");
        if out.iter().any(|e| e.set == set) {
            continue;
        }
        let consistent = set.l() as usize + 3 == 2 * set.k();
        out.push(SporadicEntry { index: out.len(), set, source, consistent });
    }
    out
}

/// Consistent catalog entries with cardinality `k`.
pub fn sporadics_for(k: u32) -> Vec<NormalizedSet> {
    sporadic_catalog()
        .into_iter()
        .filter(|e| e.consistent && e.set.k() == k as usize)
        .map(|e| e.set)
        .collect()
}

/// `[0, k-3] ∪ {2k-4, 2k-3}` for `k >= 4`.
pub fn penultimate_gap_family(k: u32) -> Result<NormalizedSet> {
    require_short_k(k)?;
    build((0..=k - 3).chain([2 * k - 4, 2 * k - 3]), k, 2 * k - 3, "penultimate gap family")
}

const PENULTIMATE_GAP_SPORADICS: &[&[u32]] = &[
    &[0, 3, 4, 5, 8, 9],
    &[0, 1, 4, 5, 6, 10, 11],
    &[0, 1, 5, 6, 7, 10, 11],
    &[0, 3, 4, 6, 7, 10, 11],
    &[0, 1, 2, 6, 7, 8, 12, 13],
    &[0, 1, 5, 6, 7, 8, 12, 13],
    &[0, 3, 4, 7, 8, 9, 12, 13],
    &[0, 1, 2, 6, 7, 8, 9, 14, 15],
    &[0, 1, 4, 5, 6, 9, 10, 14, 15],
    &[0, 1, 5, 6, 9, 10, 11, 14, 15],
    &[0, 4, 5, 6, 9, 10, 11, 14, 15],
    &[0, 3, 4, 7, 8, 10, 11, 14, 15],
    &[0, 1, 5, 6, 7, 10, 11, 12, 16, 17],
];

/// Extremal short sets with `a_{k-3} < 2k-6`, `a_{k-2} = 2k-4`: the family
/// at `k` followed by the 13 listed sets.
pub fn penultimate_gap_catalog(k: u32) -> Result<Vec<NormalizedSet>> {
    let mut out = vec![penultimate_gap_family(k)?];
    out.extend(PENULTIMATE_GAP_SPORADICS.iter().map(|s| NormalizedSet::from_slice_unchecked(s)));
    Ok(out)
}

/// Whether `a_{k-4} = 2k-8`, given `a_{k-3} = 2k-6`, `a_{k-2} = 2k-5` and
/// `a_{k-1} = 2k-3`.
pub fn dense_top_holds(a: &NormalizedSet) -> Result<bool> {
    let k = a.k();
    let tail_ok = k >= 4
        && a.a(k - 3) as usize + 6 == 2 * k
        && a.a(k - 2) as usize + 5 == 2 * k
        && a.a(k - 1) as usize + 3 == 2 * k;
    if !tail_ok {
        return Err(Error::Hypothesis(format!("{a} does not end in 2k-6, 2k-5, 2k-3")));
    }
    Ok(a.a(k - 4) as usize + 8 == 2 * k)
}

/// Whether `2^A = ([1, 2k-4] \ {2, 2k-6}) ∪ (a_{k-1} + A')` for an extremal
/// growth-regime set.
pub fn equality_sumset_shape(a: &NormalizedSet) -> Result<bool> {
    crate::structure::check_growth_hypotheses(a)?;
    let k = a.k() as u32;
    if a.restricted_size() as u32 + 7 != 3 * k {
        return Err(Error::Hypothesis(format!("|2^A| = {} is not 3k-7", a.restricted_size())));
    }
    let l = a.l();
    let expected = IntegerSet::from_values(
        (1..=2 * k - 4)
            .filter(|&x| x != 2 && x + 6 != 2 * k)
            .chain(a.without_max().iter().map(|x| x + l)),
    )?;
    Ok(a.restricted_sumset() == expected)
}
