//! Exhaustive verifiers, one per claim, each producing a [`Certificate`].

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::bounds::bound_freiman_lev;
use crate::error::{Error, Result};
use crate::families::{members, equality_sumset_shape, gen_theorem2, sporadic_catalog, sporadics_for, FamilyKind};
use crate::sets::{restricted_sumset_size, sumset, NormalizedSet};
use crate::structure::{
    check_exceptional_elements, check_exceptional_growth, check_tail_pair, d_count_bound_holds,
    decompose, exceptional_profile, find_admissible_split, gap_patterns, matches_consecutive_exception,
    matches_diff3_exception, split_at, tail_pairing_out_of_range, witness_profile,
};

use super::certificate::{Cap, Certificate, Finding, Tally};
use super::enumerate::{sweep, with_jobs, Constraint, EnumerationQuery, DEFAULT_BUDGET};

/// Largest `k` accepted for full classification runs.
pub const DESK_LIMIT: u32 = 14;

/// Run-wide knobs shared by every verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Node budget for the whole run, summed over all queries.
    pub budget: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, jobs: None }
    }
}

/// Per-shard accumulator.
#[derive(Default)]
struct Acc {
    checks: BTreeMap<&'static str, Tally>,
    findings: Vec<Finding>,
    tallies: BTreeMap<&'static str, u64>,
    sets: Vec<NormalizedSet>,
}

impl Acc {
    fn check(&mut self, name: &'static str, ok: bool) -> bool {
        self.checks.entry(name).or_default().record(ok);
        ok
    }

    fn count(&mut self, key: &'static str) {
        *self.tallies.entry(key).or_default() += 1;
    }

    fn find(&mut self, a: &NormalizedSet, kind: &str, counterexample: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            set: a.to_string(),
            kind: kind.to_string(),
            counterexample,
            detail: detail.into(),
        });
    }

    /// Records `name`; on failure also records a counterexample.
    fn require(&mut self, a: &NormalizedSet, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        if !self.check(name, ok) {
            self.find(a, name, true, detail());
        }
    }

    fn absorb(&mut self, other: Acc) {
        for (k, t) in other.checks {
            self.checks.entry(k).or_default().merge(t);
        }
        for (k, n) in other.tallies {
            *self.tallies.entry(k).or_default() += n;
        }
        self.findings.extend(other.findings);
        self.sets.extend(other.sets);
    }
}

/// Threads the run-wide budget through successive queries and folds results
/// into the certificate.
struct Runner {
    cert: Certificate,
    remaining: u64,
    exhausted: bool,
    started: Instant,
}

impl Runner {
    fn new(claim: &str, opts: &VerifyOptions) -> Self {
        Self { cert: Certificate::new(claim), remaining: opts.budget, exhausted: false, started: Instant::now() }
    }

    /// Runs one query. Returns the merged accumulator and whether this query
    /// ran to completion; `None` when no budget was left to start it.
    fn run<V>(&mut self, query: EnumerationQuery, visit: V) -> Result<Option<(Acc, bool)>>
    where
        V: Fn(&mut Acc, &[u32]) + Sync,
    {
        if self.exhausted || self.remaining == 0 {
            self.exhausted = true;
            return Ok(None);
        }
        let query = query.with_budget(self.remaining);
        let sw = sweep(&query, Acc::default, visit)?;
        let k = query.k;
        self.cert.query.push(query);
        self.cert.counts.enumerated += sw.yielded;
        self.cert.counts.nodes += sw.nodes;
        self.cert.counts.bump(k, "enumerated", sw.yielded);
        self.remaining = self.remaining.saturating_sub(sw.nodes);
        if sw.exhausted {
            self.exhausted = true;
        }
        let mut acc = Acc::default();
        for shard in sw.shards {
            acc.absorb(shard);
        }
        Ok(Some((acc, !sw.exhausted)))
    }

    /// Moves checks, tallies and findings of one `k` into the certificate.
    fn fold(&mut self, k: u32, acc: &mut Acc) {
        for (name, t) in std::mem::take(&mut acc.checks) {
            self.cert.checks.entry(name.to_string()).or_default().merge(t);
        }
        for (key, n) in std::mem::take(&mut acc.tallies) {
            self.cert.counts.bump(k, key, n);
        }
        for f in std::mem::take(&mut acc.findings) {
            self.cert.push(f);
        }
    }

    fn finish(mut self) -> Certificate {
        self.cert.settle(self.exhausted);
        self.cert.wall_time_ms = self.started.elapsed().as_millis() as u64;
        self.cert
    }
}

fn at(a: &[u32]) -> NormalizedSet {
    NormalizedSet::from_slice_unchecked(a)
}

/// Checks `|2^A| >= l+k-2` (for `l <= 2k-5`) or `3k-7` (otherwise) on every
/// normalized `A` with `3 <= k <= k_max` and `k-1 <= l <= l_max`. The bound
/// is only claimed for `k > 7`; smaller violations are recorded as
/// out-of-hypothesis observations.
pub fn verify_conjecture(k_max: u32, l_max: u32, opts: &VerifyOptions) -> Result<Certificate> {
    if k_max < 3 || l_max + 4 < 2 * k_max {
        return Err(Error::OutOfRange(format!(
            "need k_max >= 3 and l_max >= 2k_max-4, got k_max = {k_max}, l_max = {l_max}"
        )));
    }
    with_jobs(opts.jobs, || {
        let mut run = Runner::new("freiman_lev_bound", opts);
        run.cert.cap = Some(Cap::Absolute(l_max));
        for k in 3..=k_max {
            let in_hypothesis = k > 7;
            let Some((mut acc, _)) = run.run(EnumerationQuery::new(k, k - 1, l_max), |acc, s| {
                let (k, l) = (s.len() as i64, *s.last().unwrap() as i64);
                let n = restricted_sumset_size(s) as i64;
                let bound = bound_freiman_lev(k, l).expect("enumerated sets satisfy l >= k-1");
                if n == bound {
                    acc.count("at_bound");
                }
                if n < bound {
                    acc.count("below_bound");
                    let detail = format!("|2^A| = {n} < {bound}");
                    if in_hypothesis {
                        acc.find(&at(s), "bound_violation", true, detail);
                    } else {
                        acc.find(&at(s), "out_of_hypothesis", false, detail);
                    }
                }
                if in_hypothesis {
                    acc.check("freiman_lev_bound", n >= bound);
                }
            })?
            else {
                break;
            };
            run.cert.counts.extremal += acc.tallies.get("at_bound").copied().unwrap_or(0);
            run.cert.counts.bump(k, "in_hypothesis", in_hypothesis as u64);
            run.fold(k, &mut acc);
        }
        Ok(run.finish())
    })
}

/// Checks `|2^A| >= 3k-7` whenever `a_{k-2} < 2k-4` and
/// `2k-2 <= a_{k-1} <= cap` (default `2k+6`), for `k` in the range. Every
/// admissible split found on the way is checked as well.
pub fn verify_theorem1(k_min: u32, k_max: u32, cap: Option<u32>, opts: &VerifyOptions) -> Result<Certificate> {
    if k_min < 3 || k_min > k_max {
        return Err(Error::OutOfRange(format!("need 3 <= k_min <= k_max, got [{k_min}, {k_max}]")));
    }
    check_cap(k_max, cap)?;
    with_jobs(opts.jobs, || {
        let mut run = Runner::new("theorem_1_bound", opts);
        run.cert.cap = Some(cap.map_or(Cap::PerK("2k+6".into()), Cap::Absolute));
        for k in k_min..=k_max {
            let q = EnumerationQuery::new(k, 2 * k - 2, cap.unwrap_or(2 * k + 6))
                .with(Constraint::PenultimateBelow2kMinus4)
                .with(Constraint::LastAtLeast2kMinus2);
            let target = 3 * k as usize - 7;
            let Some((mut acc, _)) = run.run(q, |acc, s| {
                let n = restricted_sumset_size(s);
                let a = at(s);
                if n == target {
                    acc.count("extremal");
                }
                acc.require(&a, "theorem_1_bound", n >= target, || format!("|2^A| = {n} < {target}"));
                if let Some(s) = find_admissible_split(&a) {
                    acc.count("admissible_split");
                    match split_at(&a, s) {
                        Ok(t) => {
                            acc.require(&a, "split_overlap", t.overlap_matches, || {
                                format!("s = {s}: overlap {}", t.overlap)
                            });
                            acc.require(&a, "split_count", t.count_inequality_holds, || {
                                format!("s = {s}: |2^A| < |2^A1| + |2^A2| - 3")
                            });
                        }
                        Err(e) => acc.require(&a, "split_premise", false, || e.to_string()),
                    }
                }
            })?
            else {
                break;
            };
            run.cert.counts.extremal += acc.tallies.get("extremal").copied().unwrap_or(0);
            run.fold(k, &mut acc);
        }
        Ok(run.finish())
    })
}

fn check_cap(k_max: u32, cap: Option<u32>) -> Result<()> {
    match cap {
        Some(c) if c + 2 < 2 * k_max => {
            Err(Error::OutOfRange(format!("cap {c} is below 2k-2 = {} at k = {k_max}", 2 * k_max - 2)))
        }
        _ => Ok(()),
    }
}

/// In the growth regime (`a_i < 2i` for `i <= k-2`, `2k-2 <= a_{k-1} <= cap`)
/// checks `|2^A| >= 3k-7` and that equality holds exactly on the generated
/// family when `k >= 6`, `k ≢ 2 (mod 3)`, and nowhere otherwise. Equality is
/// compared under two readings: over every maximum in range, and over
/// maximum `2k-2` only. Each equality set is also checked against the
/// predicted shape of its restricted sumset.
pub fn verify_theorem2(k_min: u32, k_max: u32, cap: Option<u32>, opts: &VerifyOptions) -> Result<Certificate> {
    if k_min < 3 || k_min > k_max {
        return Err(Error::OutOfRange(format!("need 3 <= k_min <= k_max, got [{k_min}, {k_max}]")));
    }
    check_cap(k_max, cap)?;
    with_jobs(opts.jobs, || {
        let mut run = Runner::new("theorem_2_equality", opts);
        run.cert.cap = Some(cap.map_or(Cap::PerK("2k+6".into()), Cap::Absolute));
        for k in k_min..=k_max {
            let q = EnumerationQuery::new(k, 2 * k - 2, cap.unwrap_or(2 * k + 6))
                .with(Constraint::GrowthBelowDouble)
                .with(Constraint::LastAtLeast2kMinus2);
            let target = 3 * k as usize - 7;
            let Some((mut acc, complete)) = run.run(q, |acc, s| {
                let n = restricted_sumset_size(s);
                acc.require(&at(s), "theorem_2_bound", n >= target, || format!("|2^A| = {n} < {target}"));
                if n == target {
                    acc.sets.push(at(s));
                }
            })?
            else {
                break;
            };
            let equality = std::mem::take(&mut acc.sets);
            run.cert.counts.extremal += equality.len() as u64;
            run.cert.counts.bump(k, "equality", equality.len() as u64);
            for a in &equality {
                let shape = equality_sumset_shape(a);
                acc.require(a, "equality_sumset_shape", matches!(shape, Ok(true)), || match shape {
                    Ok(_) => format!("2^A = {}", a.restricted_sumset()),
                    Err(e) => e.to_string(),
                });
            }
            if complete {
                let expected: Vec<NormalizedSet> = gen_theorem2(k).ok().into_iter().collect();
                let low: Vec<NormalizedSet> =
                    equality.iter().filter(|a| a.l() + 2 == 2 * k).cloned().collect();
                for (reading, found) in [("reading_all_maxima", &equality), ("reading_max_2k_minus_2", &low)] {
                    if !acc.check(reading, *found == expected) {
                        for a in found.iter().filter(|a| !expected.contains(a)) {
                            acc.find(a, reading, true, "equality outside the generated family");
                        }
                        for a in expected.iter().filter(|a| !found.contains(a)) {
                            acc.find(a, reading, true, "generated family member not attaining equality");
                        }
                    }
                }
            }
            run.fold(k, &mut acc);
        }
        Ok(run.finish())
    })
}

/// All normalized `A` with cardinality `k`, maximum `l` and
/// `|2^A| = 3k - 7`, in lexicographic order.
pub fn classify_extremal(k: u32, l: u32) -> Result<Vec<NormalizedSet>> {
    let (sets, exhausted) = classify_extremal_with(k, l, DEFAULT_BUDGET)?;
    if exhausted {
        return Err(Error::OutOfRange(format!("budget exhausted classifying k = {k}, l = {l}")));
    }
    Ok(sets)
}

/// As [`classify_extremal`], with an explicit node budget; the flag reports
/// truncation.
pub fn classify_extremal_with(k: u32, l: u32, budget: u64) -> Result<(Vec<NormalizedSet>, bool)> {
    if k < 4 {
        return Err(Error::OutOfRange(format!("k = {k} < 4")));
    }
    let target = 3 * k as usize - 7;
    let q = EnumerationQuery::exact(k, l).with_budget(budget);
    let sw = sweep(&q, Vec::new, |acc: &mut Vec<NormalizedSet>, s| {
        if restricted_sumset_size(s) == target {
            acc.push(at(s));
        }
    })?;
    Ok((sw.shards.into_iter().flatten().collect(), sw.exhausted))
}

/// The five parametric short families plus the consistent catalog entries
/// at `k`, deduplicated and sorted.
pub fn family_union(k: u32) -> Vec<NormalizedSet> {
    let mut out: BTreeSet<Vec<u32>> = FamilyKind::PARAMETRIC_SHORT
        .into_iter()
        .flat_map(|kind| members(kind, k))
        .map(|(_, s)| s.as_slice().to_vec())
        .collect();
    out.extend(sporadics_for(k).iter().map(|s| s.as_slice().to_vec()));
    out.iter().map(|v| at(v)).collect()
}

/// Compares the extremal sets with maximum `2k-3` against [`family_union`]
/// for every `k` in range. A set missing from the families that extends the
/// one inconsistent catalog entry by a single element is reported as its
/// resolution rather than as a counterexample.
pub fn verify_theorem3(k_min: u32, k_max: u32, opts: &VerifyOptions) -> Result<Certificate> {
    if k_min < 4 || k_min > k_max || k_max > DESK_LIMIT {
        return Err(Error::OutOfRange(format!(
            "need 4 <= k_min <= k_max <= {DESK_LIMIT}, got [{k_min}, {k_max}]"
        )));
    }
    let flagged: Vec<NormalizedSet> =
        sporadic_catalog().into_iter().filter(|e| !e.consistent).map(|e| e.set).collect();
    with_jobs(opts.jobs, || {
        let mut run = Runner::new("classification_matches_families", opts);
        for k in k_min..=k_max {
            let target = 3 * k as usize - 7;
            let q = EnumerationQuery::exact(k, 2 * k - 3).with(Constraint::LastEq2kMinus3);
            let Some((mut acc, complete)) = run.run(q, |acc, s| {
                if restricted_sumset_size(s) == target {
                    acc.sets.push(at(s));
                }
            })?
            else {
                break;
            };
            let found = std::mem::take(&mut acc.sets);
            let union = family_union(k);
            run.cert.counts.extremal += found.len() as u64;
            run.cert.counts.bump(k, "extremal", found.len() as u64);
            run.cert.counts.bump(k, "family_union", union.len() as u64);
            for e in flagged.iter().filter(|e| e.k() as u32 == k) {
                acc.find(e, "flagged_catalog_entry", false, format!(
                    "cardinality {} with maximum {} != 2k-3; excluded from the union",
                    e.k(),
                    e.l()
                ));
            }
            if complete {
                for a in &union {
                    acc.require(a, "family_member_extremal", found.binary_search(a).is_ok(), || {
                        format!("|2^A| = {} != {target}", a.restricted_size())
                    });
                }
                for a in &found {
                    if union.binary_search(a).is_ok() {
                        acc.check("extremal_set_in_families", true);
                        continue;
                    }
                    let resolves = flagged.iter().find(|f| {
                        f.k() + 1 == a.k() && f.l() == a.l() && f.as_set().is_subset(a.as_set())
                    });
                    match resolves {
                        Some(f) => {
                            acc.count("flagged_resolution");
                            let extra = a.as_set().difference(f.as_set());
                            acc.find(a, "flagged_catalog_resolution", false, format!("{f} plus {extra}"));
                        }
                        None => acc.require(a, "extremal_set_in_families", false, || {
                            "extremal but generated by no family".into()
                        }),
                    }
                }
            }
            run.fold(k, &mut acc);
        }
        Ok(run.finish())
    })
}

/// Runs the structural suites.
///
/// Growth regime, `k` in range, maximum fixed at `2k-2` (every check below
/// depends only on `A'`): the coverage `[0, 2k-4] ⊆ 2A'`, the
/// exceptional-element clauses, `b_{i+1} >= 2b_i + 2`, the gap-pattern
/// statements with their exceptional structures, the `|D|` bound outside
/// those structures, and the tail-pair characterization.
///
/// Short regime, `k` in range, `k-1 <= l <= 2k-3`: `|W| <= 2` (claimed for
/// `k > 7`), and on extremal sets with `l = 2k-3`, `|W| = 2`, `k > 7`: exact
/// reconstruction, `|U| = (m-1)/2` and the paired-residue property.
pub fn sweep_lemmas(k_min: u32, k_max: u32, opts: &VerifyOptions) -> Result<Certificate> {
    if k_min < 3 || k_min > k_max || k_max > DESK_LIMIT {
        return Err(Error::OutOfRange(format!(
            "need 3 <= k_min <= k_max <= {DESK_LIMIT}, got [{k_min}, {k_max}]"
        )));
    }
    with_jobs(opts.jobs, || {
        let mut run = Runner::new("structural_lemmas", opts);
        run.cert.cap = Some(Cap::PerK("2k-2 (growth regime); 2k-3 (short regime)".into()));
        for k in k_min..=k_max {
            let q = EnumerationQuery::exact(k, 2 * k - 2).with(Constraint::GrowthBelowDouble);
            let Some((mut acc, _)) = run.run(q, growth_checks)? else { break };
            run.fold(k, &mut acc);
        }
        for k in k_min..=k_max {
            let q = EnumerationQuery::new(k, k - 1, 2 * k - 3);
            let Some((mut acc, _)) = run.run(q, witness_checks)? else { break };
            run.cert.counts.extremal += acc.tallies.get("extremal_max_2k_minus_3").copied().unwrap_or(0);
            run.fold(k, &mut acc);
        }
        Ok(run.finish())
    })
}

fn growth_checks(acc: &mut Acc, s: &[u32]) {
    let a = at(s);
    let k = s.len() as u32;
    let prime = a.without_max();
    let doubled = sumset(&prime, &prime).expect("nonempty");
    acc.require(&a, "cover_0_to_2k_minus_4", (0..=2 * k - 4).all(|x| doubled.contains(x)), || {
        format!("2A' = {doubled}")
    });

    let violations = check_exceptional_elements(&a).expect("growth hypotheses hold by construction");
    for clause in ["half", "pairing", "tail_pairing", "successor"] {
        let name = match clause {
            "half" => "exceptional_half",
            "pairing" => "exceptional_pairing",
            "tail_pairing" => "exceptional_tail_pairing",
            _ => "exceptional_successor",
        };
        let failed: Vec<_> = violations.iter().filter(|v| v.clause == clause).collect();
        acc.require(&a, name, failed.is_empty(), || {
            failed.iter().map(|v| format!("b = {}: {}", v.b, v.detail)).collect::<Vec<_>>().join("; ")
        });
    }
    let outside = tail_pairing_out_of_range(&a).expect("growth hypotheses hold");
    if !outside.is_empty() {
        acc.count("tail_pairing_outside_range");
    }

    acc.require(&a, "exceptional_doubling", check_exceptional_growth(&a).unwrap_or(false), || {
        format!("B = {}", exceptional_profile(&a).map(|p| p.b_list.to_string()).unwrap_or_default())
    });

    let Ok(gaps) = gap_patterns(&a) else {
        acc.count("m_below_2");
        return;
    };
    acc.count("m_at_least_2");
    acc.require(&a, "gap_no_diff2", !gaps.has_diff2, || format!("missing {}", gaps.missing));
    let consecutive_exception = matches_consecutive_exception(&a).unwrap_or(false);
    let diff3_exception = matches_diff3_exception(&a).ok().flatten();
    acc.require(&a, "gap_consecutive_only_in_exception", !gaps.has_consecutive || consecutive_exception, || {
        format!("missing {}", gaps.missing)
    });
    acc.require(&a, "gap_diff3_only_in_exception", !gaps.has_diff3 || diff3_exception.is_some(), || {
        format!("missing {}", gaps.missing)
    });
    if consecutive_exception || diff3_exception.is_some() {
        acc.count("d_bound_exempt");
    } else {
        acc.require(&a, "d_count_bound", d_count_bound_holds(&a).unwrap_or(false), || {
            let p = exceptional_profile(&a).expect("k >= 3");
            format!("|D| = {}, b_(m-1) = {}", p.d_set.len(), p.b(p.m - 1))
        });
    }
    match check_tail_pair(&a) {
        Ok(t) => {
            if t.both_missing {
                acc.count("tail_pair_both_missing");
            }
            acc.require(&a, "tail_pair_structure", t.consistent(), || {
                format!("both missing: {}, structure: {:?}", t.both_missing, t.case.map(|c| c.label()))
            });
        }
        Err(e) => acc.require(&a, "tail_pair_structure", false, || e.to_string()),
    }
}

fn witness_checks(acc: &mut Acc, s: &[u32]) {
    let a = at(s);
    let k = s.len() as u32;
    let in_hypothesis = k > 7;
    let wp = witness_profile(&a);
    if in_hypothesis {
        acc.require(&a, "witness_bound", wp.w.len() <= 2, || format!("W = {}", wp.w));
    } else if wp.w.len() > 2 {
        acc.count("witness_bound_out_of_hypothesis");
    }
    if a.l() + 3 != 2 * k || a.restricted_size() + 7 != 3 * k as usize {
        return;
    }
    acc.count("extremal_max_2k_minus_3");
    let (Some(w1), Some(w2)) = (wp.w1, wp.w2) else {
        acc.count("extremal_without_two_witnesses");
        return;
    };
    if !in_hypothesis {
        return;
    }
    match decompose(&a, w1, w2) {
        Ok(d) => {
            acc.require(&a, "reconstruction", d.reconstructs, || {
                format!("W = {}, m = {}, U = {}, D- = {}", wp.w, d.m, d.u, d.d_minus)
            });
            acc.require(&a, "u_count", d.u_count_matches(), || format!("m = {}, |U| = {}", d.m, d.u.len()));
            let failure = d.paired_residue_failure();
            acc.require(&a, "paired_residues", failure.is_none(), || format!("pair {failure:?}"));
        }
        Err(e) => acc.require(&a, "reconstruction", false, || e.to_string()),
    }
}
