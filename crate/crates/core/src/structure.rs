//! Structural analyzers for sets near the `3k - 7` threshold.
//!
//! Two regimes are covered. In the growth regime (`a_i < 2i` for
//! `1 <= i <= k-2`, `a_{k-1} >= 2k-2`) the interesting object is the
//! exceptional set `B = [1, 2k-4] \ 2^A'` where `A'` drops the maximum. In the
//! short regime (`a_{k-1} <= 2k-3`) it is the witness set `W` and the residue
//! decomposition it induces.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{exceptional_set, restricted_sumset, IntegerSet, NormalizedSet};

/// Checks the growth-regime hypotheses: `k >= 3`, `a_i < 2i` for
/// `i = 1..=k-2` and `a_{k-1} >= 2k-2`.
pub fn check_growth_hypotheses(a: &NormalizedSet) -> Result<()> {
    let k = a.k();
    if k < 3 {
        return Err(Error::TooFewElements { needed: 3, got: k });
    }
    if let Some(i) = (1..=k - 2).find(|&i| a.a(i) as usize >= 2 * i) {
        return Err(Error::Hypothesis(format!(
            "growth condition fails at a_{i} = {} >= {}",
            a.a(i),
            2 * i
        )));
    }
    if (a.l() as usize) < 2 * k - 2 {
        return Err(Error::Hypothesis(format!("maximum {} < 2k-2 = {}", a.l(), 2 * k - 2)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalProfile {
    /// `B = {b_1 < ... < b_m}`.
    pub b_list: IntegerSet,
    pub m: usize,
    /// Sentinel `b_0`.
    pub b0: u32,
    /// `{d ∈ [1, b_{m-1}] : 2k-4+d ∈ 2^A'}`; empty when `m < 2`.
    pub d_set: IntegerSet,
    /// Complement of `d_set` in `[1, b_{m-1}]`.
    pub c_set: IntegerSet,
}

impl ExceptionalProfile {
    /// `b_i` with `b_0 = 0`.
    pub fn b(&self, i: usize) -> u32 {
        if i == 0 {
            self.b0
        } else {
            self.b_list.as_slice()[i - 1]
        }
    }
}

/// Computes `B`, and `D`/`C` when `m >= 2`. Defined for every `k >= 3`.
pub fn exceptional_profile(a: &NormalizedSet) -> Result<ExceptionalProfile> {
    if a.k() < 3 {
        return Err(Error::TooFewElements { needed: 3, got: a.k() });
    }
    let b_list = exceptional_set(a);
    let m = b_list.len();
    let (d_set, c_set) = if m >= 2 {
        let base = 2 * a.k() as u32 - 4;
        let bm1 = b_list.as_slice()[m - 2];
        let sums = prime_sums(a);
        let (d, c): (Vec<u32>, Vec<u32>) = (1..=bm1).partition(|&d| sums.contains(base + d));
        (IntegerSet::from_sorted_unchecked(d), IntegerSet::from_sorted_unchecked(c))
    } else {
        (IntegerSet::empty(), IntegerSet::empty())
    };
    Ok(ExceptionalProfile { b_list, m, b0: 0, d_set, c_set })
}

fn prime_sums(a: &NormalizedSet) -> IntegerSet {
    restricted_sumset(&a.without_max()).expect("k >= 3")
}

/// One failed clause of the exceptional-element properties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub b: u32,
    pub clause: &'static str,
    pub detail: String,
}

/// Checks, for every `b ∈ B`:
/// - `half`: `b ∉ A'`, `b` even, `b/2 ∈ A'`;
/// - `pairing`: `|[0, b] ∩ A'| = b/2 + 1` and `|{i, b-i} ∩ A'| = 1` for `i <= b/2`;
/// - `tail_pairing`: for `b < k-2`, `1 <= u <= b` and `2k-4+u ∉ 2^A'`, the
///   count and pairing identities on `[b+1, 2k-5+u-b]`;
/// - `successor`: if `b < 2k-4` then `a_{b/2+1} = b + 1`.
///
/// Returns an empty list iff every clause holds.
pub fn check_exceptional_elements(a: &NormalizedSet) -> Result<Vec<Violation>> {
    check_growth_hypotheses(a)?;
    let prime = a.without_max();
    let sums = prime_sums(a);
    let k = a.k() as u32;
    let mut out = Vec::new();
    for b in exceptional_set(a).iter() {
        if prime.contains(b) || b % 2 == 1 || !prime.contains(b / 2) {
            out.push(Violation { b, clause: "half", detail: "b in A', b odd, or b/2 not in A'".into() });
        }
        let count = prime.count_in(0, b);
        if count != (b / 2 + 1) as usize {
            out.push(Violation { b, clause: "pairing", detail: format!("|[0,b] ∩ A'| = {count}") });
        }
        if let Some(i) = (0..=b / 2).find(|&i| pair_hits(&prime, i, b - i) != 1) {
            out.push(Violation { b, clause: "pairing", detail: format!("pair ({i}, {})", b - i) });
        }
        if b + 2 < k {
            for u in 1..=b {
                if let Some(detail) = tail_pairing_failure(&prime, &sums, k, b, u) {
                    out.push(Violation { b, clause: "tail_pairing", detail });
                }
            }
        }
        if b < 2 * k - 4 {
            let idx = (b / 2 + 1) as usize;
            if idx >= prime.len() || prime.as_slice()[idx] != b + 1 {
                out.push(Violation { b, clause: "successor", detail: format!("a_{idx} != {}", b + 1) });
            }
        }
    }
    Ok(out)
}

/// Applications of the `tail_pairing` clause with `b >= k-2`, outside its
/// stated range. These are recorded, never counted as violations.
pub fn tail_pairing_out_of_range(a: &NormalizedSet) -> Result<Vec<Violation>> {
    check_growth_hypotheses(a)?;
    let prime = a.without_max();
    let sums = prime_sums(a);
    let k = a.k() as u32;
    let mut out = Vec::new();
    for b in exceptional_set(a).iter().filter(|&b| b + 2 >= k) {
        for u in 1..=b {
            if let Some(detail) = tail_pairing_failure(&prime, &sums, k, b, u) {
                out.push(Violation { b, clause: "tail_pairing", detail });
            }
        }
    }
    Ok(out)
}

fn pair_hits(set: &IntegerSet, i: u32, j: u32) -> usize {
    if i == j {
        set.contains(i) as usize
    } else {
        set.contains(i) as usize + set.contains(j) as usize
    }
}

fn tail_pairing_failure(prime: &IntegerSet, sums: &IntegerSet, k: u32, b: u32, u: u32) -> Option<String> {
    let target = 2 * k - 4 + u;
    if sums.contains(target) {
        return None;
    }
    let (lo, hi) = (b + 1, (2 * k + u).checked_sub(5 + b)?);
    let count = prime.count_in(lo, hi) as i64;
    let expected = (k - 2 + u / 2) as i64 - b as i64;
    if count != expected {
        return Some(format!("u = {u}: |[{lo},{hi}] ∩ A'| = {count}, expected {expected}"));
    }
    let last = k - 2 + u / 2;
    (lo..=last)
        .find(|&i| i <= target && pair_hits(prime, i, target - i) != 1)
        .map(|i| format!("u = {u}: pair ({i}, {})", target - i))
}

/// `b_{i+1} >= 2 b_i + 2` for every `i` in `[0, m-1]`, with `b_0 = 0`.
pub fn check_exceptional_growth(a: &NormalizedSet) -> Result<bool> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    Ok((0..p.m).all(|i| p.b(i + 1) >= 2 * p.b(i) + 2))
}

/// Differences present among the values missing from `2^A'` in the window
/// `[2k-3, 2k-4+b_{m-1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapPatterns {
    pub window: (u32, u32),
    pub missing: IntegerSet,
    pub has_consecutive: bool,
    pub has_diff2: bool,
    pub has_diff3: bool,
}

pub fn gap_patterns(a: &NormalizedSet) -> Result<GapPatterns> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    if p.m < 2 {
        return Err(Error::Inapplicable("window undefined".into()));
    }
    let k = a.k() as u32;
    let window = (2 * k - 3, 2 * k - 4 + p.b(p.m - 1));
    let missing = IntegerSet::from_sorted_unchecked(
        p.c_set.iter().map(|c| 2 * k - 4 + c).filter(|&x| x >= window.0).collect(),
    );
    let has = |d: u32| missing.iter().any(|x| missing.contains(x + d));
    Ok(GapPatterns { window, has_consecutive: has(1), has_diff2: has(2), has_diff3: has(3), missing })
}

/// The one structure under which consecutive missing values are allowed:
/// `m = 2` and `[0, b_2] ∩ A' = [0, b_1/2] ∪ [b_1 + 1, 3b_1/2 + 1]`.
pub fn matches_consecutive_exception(a: &NormalizedSet) -> Result<bool> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    if p.m != 2 {
        return Ok(false);
    }
    let (b1, b2) = (p.b(1), p.b(2));
    let prime = a.without_max();
    let head: Vec<u32> = prime.iter().filter(|&x| x <= b2).collect();
    let expected: Vec<u32> = (0..=b1 / 2).chain(b1 + 1..=3 * b1 / 2 + 1).collect();
    Ok(head == expected)
}

/// `{start + 3i : lo <= i <= hi}` for rational endpoints `lo`, `hi` given as
/// (numerator, denominator).
fn step3(start: u32, lo: (i64, i64), hi: (i64, i64)) -> impl Iterator<Item = u32> {
    let lo = num_integer::Integer::div_ceil(&lo.0, &lo.1).max(0);
    let hi = num_integer::Integer::div_floor(&hi.0, &hi.1);
    (lo..=hi).map(move |i| start + 3 * i as u32)
}

/// The six structures under which values at distance 3 may both be missing:
/// `m = 3`, `b_1 = 2`, and `[0, b_3] ∩ A'` equal to one of six explicit
/// unions of residue-class progressions determined by `b_2`. Returns the
/// matching case label.
pub fn matches_diff3_exception(a: &NormalizedSet) -> Result<Option<&'static str>> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    if p.m != 3 || p.b(1) != 2 {
        return Ok(None);
    }
    let (b2, b3) = (p.b(2), p.b(3));
    let c = b2 as i64;
    let head: Vec<u32> = a.without_max().iter().filter(|&x| x <= b3).collect();
    let cases: Vec<(&'static str, i64, Vec<u32>)> = vec![
        (
            "i",
            2,
            step3(0, (0, 1), (2 * c + 2, 3))
                .chain(step3(1, (0, 1), (c - 2, 6)))
                .chain(step3(1, (c + 1, 3), (c, 2)))
                .collect(),
        ),
        (
            "ii",
            0,
            step3(0, (0, 1), (c, 6))
                .chain(step3(1, (0, 1), (c, 2)))
                .chain(step3(b2 + 2, (0, 1), (c, 3)))
                .collect(),
        ),
        (
            "iii",
            2,
            step3(0, (0, 1), (c + 2, 2))
                .chain(step3(1, (0, 1), (c - 2, 6)))
                .chain(step3(b2 + 3, (0, 1), (c + 1, 3)))
                .collect(),
        ),
        (
            "iv",
            1,
            step3(0, (0, 1), (c + 2, 6))
                .chain(step3(b2 + 3, (0, 1), (c + 2, 3)))
                .chain(step3(2, (0, 1), (c, 2)))
                .collect(),
        ),
        (
            "v",
            0,
            step3(0, (0, 1), (c, 6))
                .chain(step3(0, (c + 3, 3), (c + 2, 2)))
                .chain(step3(1, (0, 1), (2 * c + 3, 3)))
                .collect(),
        ),
        (
            "vi",
            2,
            step3(0, (0, 1), (2 * c + 5, 3))
                .chain(step3(2, (0, 1), (c - 2, 6)))
                .chain(step3(2, (c + 1, 3), (c, 2)))
                .collect(),
        ),
    ];
    for (label, residue, mut candidate) in cases {
        if c % 3 != residue {
            continue;
        }
        candidate.sort_unstable();
        candidate.dedup();
        if candidate == head {
            return Ok(Some(label));
        }
    }
    Ok(None)
}

/// `|D| >= b_{m-1}/2 + floor(b_{m-1}/4)`. Requires `m >= 2`.
pub fn d_count_bound_holds(a: &NormalizedSet) -> Result<bool> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    if p.m < 2 {
        return Err(Error::Inapplicable("window undefined".into()));
    }
    let bm1 = p.b(p.m - 1) as usize;
    Ok(p.d_set.len() >= bm1 / 2 + bm1 / 4)
}

/// The three explicit structures with both `2k-3+b_{m-1}` and
/// `2k-2+b_{m-1}` missing from `2^A'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailCase {
    /// `k` odd: `A' = [0, (k-3)/2] ∪ [k-2, 3(k-3)/2 + 1]`, `B = {k-3, 2k-4}`.
    OddHalves,
    /// `3 | k`: three blocks, `B = {(2k-6)/3, 2k-4}`.
    ThirdsZero,
    /// `k ≡ 1 (mod 3)`: three blocks, `B = {(2k-8)/3, (4k-10)/3}`.
    ThirdsOne,
}

impl TailCase {
    pub fn label(self) -> &'static str {
        match self {
            TailCase::OddHalves => "i",
            TailCase::ThirdsZero => "ii",
            TailCase::ThirdsOne => "iii",
        }
    }

    /// The `(A', B)` pair this case prescribes for cardinality `k`, when the
    /// congruence condition holds.
    pub fn template(self, k: u32) -> Option<(Vec<u32>, Vec<u32>)> {
        let blocks = |ranges: &[(u32, u32)]| ranges.iter().flat_map(|&(lo, hi)| lo..=hi).collect::<Vec<_>>();
        match self {
            TailCase::OddHalves if k % 2 == 1 && k >= 5 => Some((
                blocks(&[(0, (k - 3) / 2), (k - 2, 3 * (k - 3) / 2 + 1)]),
                vec![k - 3, 2 * k - 4],
            )),
            TailCase::ThirdsZero if k.is_multiple_of(3) && k >= 6 => Some((
                blocks(&[(0, (k - 3) / 3), ((2 * k - 3) / 3, k - 2), ((4 * k - 6) / 3, (5 * k - 12) / 3)]),
                vec![(2 * k - 6) / 3, 2 * k - 4],
            )),
            TailCase::ThirdsOne if k % 3 == 1 && k >= 7 => Some((
                blocks(&[(0, (k - 4) / 3), ((2 * k - 5) / 3, k - 3), ((4 * k - 7) / 3, (5 * k - 11) / 3)]),
                vec![(2 * k - 8) / 3, (4 * k - 10) / 3],
            )),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailPair {
    /// Both `2k-3+b_{m-1}` and `2k-2+b_{m-1}` are missing from `2^A'`.
    pub both_missing: bool,
    /// The structure `A'` matches, regardless of `both_missing`.
    pub case: Option<TailCase>,
}

impl TailPair {
    /// The characterization: both values are missing exactly when `A'`
    /// is one of the three structures.
    pub fn consistent(&self) -> bool {
        self.both_missing == self.case.is_some()
    }
}

/// Tests the two values just past the window and identifies the structure of
/// `A'`. Requires `m >= 2`.
pub fn check_tail_pair(a: &NormalizedSet) -> Result<TailPair> {
    check_growth_hypotheses(a)?;
    let p = exceptional_profile(a)?;
    if p.m < 2 {
        return Err(Error::Inapplicable("window undefined".into()));
    }
    let k = a.k() as u32;
    let bm1 = p.b(p.m - 1);
    let sums = prime_sums(a);
    let both_missing = !sums.contains(2 * k - 3 + bm1) && !sums.contains(2 * k - 2 + bm1);
    let prime = a.without_max();
    let case = [TailCase::OddHalves, TailCase::ThirdsZero, TailCase::ThirdsOne]
        .into_iter()
        .find(|case| {
            case.template(k).is_some_and(|(ap, b)| {
                p.m == 2 && prime.as_slice() == ap.as_slice() && p.b_list.as_slice() == b.as_slice()
            })
        });
    Ok(TailPair { both_missing, case })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessProfile {
    /// `{w ∈ [0, a_{k-1}] \ A : w, w + a_{k-1} ∉ 2^A}`.
    pub w: IntegerSet,
    pub w1: Option<u32>,
    pub w2: Option<u32>,
    /// `gcd(w_2 - w_1, a_{k-1})` when `|W| = 2`.
    pub m: Option<u32>,
}

pub fn witness_profile(a: &NormalizedSet) -> WitnessProfile {
    let l = a.l();
    let sums = a.restricted_sumset();
    let w = IntegerSet::from_sorted_unchecked(
        (0..=l)
            .filter(|&w| !a.contains(w) && !sums.contains(w) && !sums.contains(w + l))
            .collect(),
    );
    let (w1, w2, m) = match w.as_slice() {
        &[w1, w2] => (Some(w1), Some(w2), Some((w2 - w1).gcd(&l))),
        _ => (None, None, None),
    };
    WitnessProfile { w, w1, w2, m }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueStep {
    pub v: u32,
    pub x: u32,
    /// `r_v(x) = v + x(w_2 - w_1) - q(x) a_{k-1}`, in `[0, a_{k-1})`.
    pub r: u32,
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub w1: u32,
    pub w2: u32,
    pub m: u32,
    /// `{w_2/2, (w_2 + a_{k-1})/2} ∩ Z`.
    pub v_set: Vec<u32>,
    /// `mZ ∩ [0, a_{k-1})`.
    pub h: IntegerSet,
    /// `{u ∈ [0, m-1] ∩ A : 2u ≢ w_2 (mod m)}`.
    pub u: IntegerSet,
    /// Union over `v` of `{r_v(x) : 0 <= x <= (a_{k-1} - m) / (2m)}`.
    pub d_minus: IntegerSet,
    pub rv_table: Vec<ResidueStep>,
    /// `A = {a_{k-1}} ∪ (U + H) ∪ D⁻`.
    pub reconstructs: bool,
}

impl Decomposition {
    /// `|U| = (m - 1)/2`.
    pub fn u_count_matches(&self) -> bool {
        2 * self.u.len() + 1 == self.m as usize
    }

    /// For distinct `u1, u2 ∈ [0, m-1]` with `u1 + u2 ≡ w_2 (mod m)`, exactly
    /// one of them lies in `U`. Returns the first failing pair.
    pub fn paired_residue_failure(&self) -> Option<(u32, u32)> {
        let m = self.m;
        for u1 in 0..m {
            let u2 = (self.w2 % m + m - u1) % m;
            if u1 < u2 && (self.u.contains(u1) as u8 + self.u.contains(u2) as u8) != 1 {
                return Some((u1, u2));
            }
        }
        None
    }
}

/// Residue decomposition of `A` from two witnesses `w1 < w2`.
pub fn decompose(a: &NormalizedSet, w1: u32, w2: u32) -> Result<Decomposition> {
    let l = a.l();
    if w1 >= w2 {
        return Err(Error::Inapplicable(format!("witnesses must satisfy w1 < w2, got {w1}, {w2}")));
    }
    let witnesses = witness_profile(a).w;
    if let Some(w) = [w1, w2].into_iter().find(|&w| !witnesses.contains(w)) {
        return Err(Error::Inapplicable(format!("{w} is not a witness of {a}")));
    }
    let m = (w2 - w1).gcd(&l);
    let v_set: Vec<u32> = [w2, w2 + l].into_iter().filter(|x| x % 2 == 0).map(|x| x / 2).collect();
    if v_set.is_empty() {
        return Err(Error::Inapplicable("no valid v".into()));
    }
    let step = (w2 - w1) as u64;
    let x_max = (l - m) / (2 * m);
    let mut rv_table = Vec::new();
    for &v in &v_set {
        for x in 0..=x_max {
            let raw = v as u64 + x as u64 * step;
            rv_table.push(ResidueStep { v, x, r: (raw % l as u64) as u32, q: (raw / l as u64) as u32 });
        }
    }
    let d_minus = IntegerSet::from_values(rv_table.iter().map(|s| s.r)).expect("values below l");
    let h = IntegerSet::from_sorted_unchecked((0..l).step_by(m as usize).collect());
    let u = IntegerSet::from_sorted_unchecked(
        (0..m).filter(|&u| a.contains(u) && (2 * u) % m != w2 % m).collect(),
    );
    let rebuilt = IntegerSet::from_values(
        std::iter::once(l)
            .chain(u.iter().flat_map(|u| h.iter().map(move |h| u + h)))
            .chain(d_minus.iter()),
    )
    .expect("values at most l");
    let reconstructs = &rebuilt == a.as_set();
    Ok(Decomposition { w1, w2, m, v_set, h, u, d_minus, rv_table, reconstructs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitTriple {
    pub s: usize,
    /// `{a_0, ..., a_{s+1}}`.
    pub a1: NormalizedSet,
    /// `{a_{s-1}, ..., a_{k-1}}`.
    pub a2: IntegerSet,
    /// `A_2 - a_{s-1}`.
    pub a2_star: NormalizedSet,
    pub k1: usize,
    pub k2: usize,
    pub overlap: IntegerSet,
    /// `2^A_1 ∩ 2^A_2 = {a_{s-1}+a_s, a_{s-1}+a_{s+1}, a_s+a_{s+1}}`.
    pub overlap_matches: bool,
    /// `|2^A| >= |2^A_1| + |2^A_2| - 3`.
    pub count_inequality_holds: bool,
}

/// Splits `A` at an index `s` with `a_{s-1} = 2s-2` and `a_s = 2s-1`.
pub fn split_at(a: &NormalizedSet, s: usize) -> Result<SplitTriple> {
    let k = a.k();
    let premise = k >= 4
        && (2..=k - 2).contains(&s)
        && a.a(s - 1) as usize == 2 * s - 2
        && a.a(s) as usize == 2 * s - 1;
    if !premise {
        return Err(Error::Inapplicable(format!("no admissible split at s = {s}")));
    }
    let elems = a.as_slice();
    let a1 = NormalizedSet::from_slice_unchecked(&elems[..=s + 1]);
    let a2 = IntegerSet::from_sorted_unchecked(elems[s - 1..].to_vec());
    let shift = elems[s - 1];
    let a2_star =
        NormalizedSet::new(IntegerSet::from_sorted_unchecked(a2.iter().map(|x| x - shift).collect()))?;
    let r1 = a1.restricted_sumset();
    let r2 = restricted_sumset(&a2)?;
    let overlap = r1.intersection(&r2);
    let expected = IntegerSet::from_values([
        elems[s - 1] + elems[s],
        elems[s - 1] + elems[s + 1],
        elems[s] + elems[s + 1],
    ])?;
    let count_inequality_holds = a.restricted_size() + 3 >= r1.len() + r2.len();
    Ok(SplitTriple {
        s,
        k1: a1.k(),
        k2: a2.len(),
        a1,
        a2,
        a2_star,
        overlap_matches: overlap == expected,
        overlap,
        count_inequality_holds,
    })
}

/// The largest `s ∈ [2, k-2]` with `a_j < 2j` for `j = s..=k-2` and
/// `a_{s-1} >= 2(s-1)`, when `a_{k-2} < 2k-4`, `a_{k-1} >= 2k-2` and the
/// growth condition fails somewhere in `[1, k-3]`.
pub fn find_admissible_split(a: &NormalizedSet) -> Option<usize> {
    let k = a.k();
    if k < 4 {
        return None;
    }
    let below = |j: usize| (a.a(j) as usize) < 2 * j;
    let applies = below(k - 2) && a.l() as usize >= 2 * k - 2 && (1..=k - 3).any(|i| !below(i));
    if !applies {
        return None;
    }
    (2..=k - 2).rev().find(|&s| (s..=k - 2).all(below) && !below(s - 1))
}
