//! Text and JSON rendering for the subcommands.

use std::fmt::Write as _;

use anyhow::Result;
use serde_json::{json, Map, Value};

use sumset_core::bounds::{BoundEntry, BoundReport, Observed};
use sumset_core::families::{all_members, FamilyKind, FamilySpec};
use sumset_core::sets::NormalizedSet;
use sumset_core::structure::{
    check_exceptional_elements, check_exceptional_growth, check_growth_hypotheses, check_tail_pair,
    d_count_bound_holds, decompose, exceptional_profile, find_admissible_split, gap_patterns,
    matches_consecutive_exception, matches_diff3_exception, split_at, witness_profile, Decomposition,
    ExceptionalProfile, GapPatterns, SplitTriple, TailPair, Violation, WitnessProfile,
};
use sumset_core::verify::Certificate;

pub fn literal(s: &[u32]) -> String {
    let body: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", body.join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn bound_value(b: &BoundEntry) -> String {
    if !b.exact {
        format!("{:.6}", b.approx)
    } else if b.bound_x2 % 2 == 0 {
        (b.bound_x2 / 2).to_string()
    } else {
        format!("{}/2", b.bound_x2)
    }
}

pub fn report_text(r: &BoundReport, note: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(n) = note {
        let _ = writeln!(out, "# {n}");
    }
    let _ = writeln!(out, "A = {}   k = {}   l = {}", r.set, r.k, r.l);
    let _ = writeln!(out, "|2A| = {}   |2^A| = {}", r.card_2a, r.card_2hat_a);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<12} {:<4} {:>12} {:>9} {:>5} {:>5} {:>6}", "bound", "on", "value", "observed", "hyp", "ok", "tight");
    for b in &r.bounds {
        let (on, observed) = match b.observed {
            Observed::Sumset => ("2A", r.card_2a),
            Observed::RestrictedSumset => ("2^A", r.card_2hat_a),
        };
        let _ = writeln!(
            out,
            "{:<12} {:<4} {:>12} {:>9} {:>5} {:>5} {:>6}",
            b.name,
            on,
            bound_value(b),
            observed,
            yes(b.in_hypothesis),
            yes(b.satisfied),
            yes(b.tight)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<20} {:<11} {:<6} detail", "structure", "applicable", "holds");
    for s in &r.structure {
        let _ = writeln!(out, "{:<20} {:<11} {:<6} {}", s.name, yes(s.applicable), yes(s.holds), s.detail);
    }
    out
}

/// One top-level object per statement, keyed by its name.
pub fn report_json(r: &BoundReport, note: Option<&str>) -> Value {
    let mut m = Map::new();
    m.insert("set".into(), json!(r.set.to_string()));
    if let Some(n) = note {
        m.insert("note".into(), json!(n));
    }
    m.insert("k".into(), json!(r.k));
    m.insert("l".into(), json!(r.l));
    m.insert("card_2A".into(), json!(r.card_2a));
    m.insert("card_2hatA".into(), json!(r.card_2hat_a));
    for b in &r.bounds {
        m.insert(
            b.name.into(),
            json!({
                "observed": b.observed,
                "bound_x2": b.bound_x2,
                "exact": b.exact,
                "approx": b.approx,
                "in_hypothesis": b.in_hypothesis,
                "satisfied": b.satisfied,
                "tight": b.tight,
            }),
        );
    }
    for s in &r.structure {
        m.insert(
            s.name.into(),
            json!({"applicable": s.applicable, "holds": s.holds, "detail": s.detail}),
        );
    }
    Value::Object(m)
}

/// Growth-regime findings; present only when the hypotheses hold.
pub struct GrowthAnalysis {
    pub violations: Vec<Violation>,
    pub doubling: bool,
    pub gaps: Option<GapPatterns>,
    pub consecutive_exception: bool,
    pub diff3_exception: Option<&'static str>,
    pub d_bound: Option<bool>,
    pub tail_pair: Option<TailPair>,
}

pub struct Analysis {
    pub set: NormalizedSet,
    pub restricted: String,
    pub restricted_size: usize,
    pub double_size: usize,
    pub profile: Option<ExceptionalProfile>,
    pub growth: std::result::Result<GrowthAnalysis, String>,
    pub witnesses: WitnessProfile,
    pub decomposition: Option<std::result::Result<Decomposition, String>>,
    pub split: Option<SplitTriple>,
}

impl Analysis {
    pub fn of(a: &NormalizedSet) -> Result<Self> {
        let profile = exceptional_profile(a).ok();
        let growth = match check_growth_hypotheses(a) {
            Ok(()) => Ok(GrowthAnalysis {
                violations: check_exceptional_elements(a)?,
                doubling: check_exceptional_growth(a)?,
                gaps: gap_patterns(a).ok(),
                consecutive_exception: matches_consecutive_exception(a)?,
                diff3_exception: matches_diff3_exception(a)?,
                d_bound: d_count_bound_holds(a).ok(),
                tail_pair: check_tail_pair(a).ok(),
            }),
            Err(e) => Err(e.to_string()),
        };
        let witnesses = witness_profile(a);
        let decomposition = match (witnesses.w1, witnesses.w2) {
            (Some(w1), Some(w2)) => Some(decompose(a, w1, w2).map_err(|e| e.to_string())),
            _ => None,
        };
        let split = find_admissible_split(a).and_then(|s| split_at(a, s).ok());
        let restricted = a.restricted_sumset();
        Ok(Self {
            set: a.clone(),
            restricted_size: restricted.len(),
            restricted: restricted.to_string(),
            double_size: a.double().len(),
            profile,
            growth,
            witnesses,
            decomposition,
            split,
        })
    }

    pub fn to_text(&self, note: Option<&str>) -> String {
        let mut out = String::new();
        let a = &self.set;
        if let Some(n) = note {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "A = {a}   k = {}   l = {}", a.k(), a.l());
        let _ = writeln!(out, "2^A = {}", self.restricted);
        let _ = writeln!(out, "|2A| = {}   |2^A| = {}   3k-7 = {}", self.double_size, self.restricted_size, 3 * a.k() as i64 - 7);
        if let Some(p) = &self.profile {
            let _ = writeln!(out, "B = {}   m = {}", p.b_list, p.m);
            if p.m >= 2 {
                let _ = writeln!(out, "D = {}   C = {}", p.d_set, p.c_set);
            }
        }
        match &self.growth {
            Err(why) => {
                let _ = writeln!(out, "growth regime: no ({why})");
            }
            Ok(g) => {
                let _ = writeln!(out, "growth regime: yes");
                if g.violations.is_empty() {
                    let _ = writeln!(out, "  exceptional elements: all clauses hold");
                }
                for v in &g.violations {
                    let _ = writeln!(out, "  exceptional element b = {}: {} fails ({})", v.b, v.clause, v.detail);
                }
                let _ = writeln!(out, "  b_(i+1) >= 2b_i + 2: {}", yes(g.doubling));
                if let Some(gp) = &g.gaps {
                    let _ = writeln!(
                        out,
                        "  window [{}, {}] missing {}: consecutive {}, diff 2 {}, diff 3 {}",
                        gp.window.0,
                        gp.window.1,
                        gp.missing,
                        yes(gp.has_consecutive),
                        yes(gp.has_diff2),
                        yes(gp.has_diff3)
                    );
                }
                if g.consecutive_exception {
                    let _ = writeln!(out, "  matches the consecutive-gap structure");
                }
                if let Some(case) = g.diff3_exception {
                    let _ = writeln!(out, "  matches difference-3 structure ({case})");
                }
                if let Some(ok) = g.d_bound {
                    let _ = writeln!(out, "  |D| bound: {}", yes(ok));
                }
                if let Some(t) = &g.tail_pair {
                    let case = t.case.map_or("none", |c| c.label());
                    let _ = writeln!(out, "  tail pair missing: {}   structure: {case}", yes(t.both_missing));
                }
            }
        }
        let _ = writeln!(out, "W = {}", self.witnesses.w);
        match &self.decomposition {
            None => {}
            Some(Err(e)) => {
                let _ = writeln!(out, "decomposition: {e}");
            }
            Some(Ok(d)) => {
                let v: Vec<String> = d.v_set.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "decomposition (w1 = {}, w2 = {}):", d.w1, d.w2);
                let _ = writeln!(out, "  m = {}   V = {{{}}}   H = {}", d.m, v.join(","), d.h);
                let _ = writeln!(out, "  U = {}   D- = {}", d.u, d.d_minus);
                for s in &d.rv_table {
                    let _ = writeln!(out, "  v = {:<3} x = {:<3} r = {:<4} q = {}", s.v, s.x, s.r, s.q);
                }
                let _ = writeln!(
                    out,
                    "  reconstructs: {}   |U| = (m-1)/2: {}   paired residues: {}",
                    yes(d.reconstructs),
                    yes(d.u_count_matches()),
                    yes(d.paired_residue_failure().is_none())
                );
            }
        }
        match &self.split {
            None => {
                let _ = writeln!(out, "split: none");
            }
            Some(t) => {
                let _ = writeln!(out, "split at s = {}: A1 = {}   A2 = {}   A2* = {}", t.s, t.a1, t.a2, t.a2_star);
                let _ = writeln!(
                    out,
                    "  overlap {} (expected form: {})   count inequality: {}",
                    t.overlap,
                    yes(t.overlap_matches),
                    yes(t.count_inequality_holds)
                );
            }
        }
        out
    }

    pub fn to_json(&self, note: Option<&str>) -> Value {
        let growth = match &self.growth {
            Err(why) => json!({"applies": false, "reason": why}),
            Ok(g) => json!({
                "applies": true,
                "violations": g.violations,
                "doubling": g.doubling,
                "gaps": g.gaps,
                "consecutive_exception": g.consecutive_exception,
                "diff3_exception": g.diff3_exception,
                "d_bound": g.d_bound,
                "tail_pair": g.tail_pair,
            }),
        };
        let decomposition = match &self.decomposition {
            None => Value::Null,
            Some(Err(e)) => json!({"error": e}),
            Some(Ok(d)) => {
                let mut v = serde_json::to_value(d).unwrap_or(Value::Null);
                if let Value::Object(m) = &mut v {
                    m.insert("u_count_matches".into(), json!(d.u_count_matches()));
                    m.insert("paired_residue_failure".into(), json!(d.paired_residue_failure()));
                }
                v
            }
        };
        json!({
            "set": self.set.to_string(),
            "note": note,
            "k": self.set.k(),
            "l": self.set.l(),
            "card_2A": self.double_size,
            "card_2hatA": self.restricted_size,
            "restricted_sumset": self.restricted,
            "B": self.profile.as_ref().map(|p| p.b_list.to_string()),
            "exceptional": self.profile,
            "growth_regime": growth,
            "W": self.witnesses.w.to_string(),
            "witnesses": self.witnesses,
            "decomposition": decomposition,
            "split": self.split,
        })
    }
}

fn spec_label(spec: &FamilySpec) -> String {
    match (spec.theta, spec.sporadic_index) {
        (Some(t), _) => format!("{}(theta={t})", spec.kind),
        (_, Some(i)) => format!("{}(#{i})", spec.kind),
        _ => spec.kind.to_string(),
    }
}

fn flagged(spec: &FamilySpec, set: &NormalizedSet) -> bool {
    spec.kind == FamilyKind::T3Sporadic && set.l() as usize + 3 != 2 * set.k()
}

pub fn families_text(list: &[(FamilySpec, NormalizedSet)]) -> String {
    let mut out = String::new();
    for (spec, set) in list {
        let _ = write!(out, "{:<28} {:<40} |2^A| = {}", spec_label(spec), set.to_string(), set.restricted_size());
        if flagged(spec, set) {
            let _ = write!(out, "   (flagged: maximum is not 2k-3)");
        }
        let _ = writeln!(out);
    }
    out
}

pub fn families_json(list: &[(FamilySpec, NormalizedSet)]) -> Value {
    Value::Array(
        list.iter()
            .map(|(spec, set)| {
                json!({
                    "kind": spec.kind,
                    "k": spec.k,
                    "theta": spec.theta,
                    "sporadic_index": spec.sporadic_index,
                    "set": set.to_string(),
                    "card_2hatA": set.restricted_size(),
                    "flagged": flagged(spec, set),
                })
            })
            .collect(),
    )
}

/// Pairs each set with the labels of every family member equal to it.
pub fn label_members(k: u32, sets: &[NormalizedSet]) -> Vec<(NormalizedSet, Vec<String>)> {
    let known = all_members(k);
    sets.iter()
        .map(|s| {
            let labels = known.iter().filter(|(_, m)| m == s).map(|(spec, _)| spec_label(spec)).collect();
            (s.clone(), labels)
        })
        .collect()
}

pub fn certificate_summary(c: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "claim: {}   outcome: {}", c.claim, c.outcome);
    let _ = writeln!(
        out,
        "enumerated {} sets ({} extremal, {} nodes) in {} ms",
        c.counts.enumerated, c.counts.extremal, c.counts.nodes, c.wall_time_ms
    );
    for (name, t) in &c.checks {
        let _ = writeln!(out, "  {name:<36} checked {:>9}   failed {}", t.checked, t.failed);
    }
    let observations = c.findings.iter().filter(|f| !f.counterexample).count();
    if observations > 0 {
        let _ = writeln!(out, "observations: {observations}");
    }
    for f in c.findings.iter().filter(|f| f.counterexample) {
        let _ = writeln!(out, "counterexample {} [{}]: {}", f.set, f.kind, f.detail);
    }
    out
}
