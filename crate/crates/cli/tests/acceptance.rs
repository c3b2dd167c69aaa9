//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every expected value is recomputed here from first principles (pairwise
//! sums, an independent combination walker, Möbius counts) rather than taken
//! from the library under test.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sumset_core::bounds::is_arithmetic_progression;
use sumset_core::families::gen_theorem2;
use sumset_core::sets::{restricted_sumset, restricted_sumset_size, sumset, IntegerSet};
use sumset_core::verify::{
    enumerate, family_union, sweep_lemmas, verify_theorem1, verify_theorem2, Certificate, Constraint,
    EnumerationQuery, Outcome, VerifyOptions,
};

// ---------------------------------------------------------------- oracles

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn naive_restricted(a: &[u32]) -> Vec<u32> {
    let max = a.iter().copied().max().unwrap_or(0) as usize;
    let mut hit = vec![false; 2 * max + 1];
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            hit[(a[i] + a[j]) as usize] = true;
        }
    }
    (0..hit.len() as u32).filter(|&x| hit[x as usize]).collect()
}

fn naive_sumset(a: &[u32]) -> Vec<u32> {
    let max = a.iter().copied().max().unwrap_or(0) as usize;
    let mut hit = vec![false; 2 * max + 1];
    for &x in a {
        for &y in a {
            hit[(x + y) as usize] = true;
        }
    }
    (0..hit.len() as u32).filter(|&x| hit[x as usize]).collect()
}

fn freiman_lev(k: u32, l: u32) -> u32 {
    if l + 5 <= 2 * k {
        l + k - 2
    } else {
        3 * k - 7
    }
}

fn binom(n: i64, r: i64) -> u64 {
    if r < 0 || n < r {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn mobius(mut n: u32) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of normalized k-sets with maximum exactly l.
fn normalized_count(k: u32, l: u32) -> u64 {
    let total: i64 = (1..=l)
        .filter(|d| l.is_multiple_of(*d))
        .map(|d| mobius(d) * binom((l / d) as i64 - 1, k as i64 - 2) as i64)
        .sum();
    total as u64
}

/// Every normalized k-set with maximum l, via index-vector combinations of
/// the interior `[1, l-1]`.
fn for_each_normalized(k: u32, l: u32, mut f: impl FnMut(&[u32])) {
    let r = (k - 2) as usize;
    let n = l.saturating_sub(1) as usize;
    if k < 2 || r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf = vec![0u32; k as usize];
    loop {
        for (p, &i) in idx.iter().enumerate() {
            buf[p + 1] = i as u32 + 1;
        }
        buf[k as usize - 1] = l;
        if buf.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            f(&buf);
        }
        // advance to the next combination in lexicographic order
        let mut p = r;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            if idx[p] != p + n - r {
                break;
            }
            if p == 0 {
                return;
            }
        }
        idx[p] += 1;
        for q in p + 1..r {
            idx[q] = idx[q - 1] + 1;
        }
        if r == 0 {
            return;
        }
    }
}

fn literal(a: &[u32]) -> String {
    format!("{{{}}}", a.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

fn witnesses(a: &[u32]) -> Vec<u32> {
    let l = *a.last().unwrap();
    let r: BTreeSet<u32> = naive_restricted(a).into_iter().collect();
    (0..=l).filter(|w| !a.contains(w) && !r.contains(w) && !r.contains(&(w + l))).collect()
}

/// Rebuilds A from two witnesses by the residue recipe.
fn rebuild_from_witnesses(a: &[u32], w1: u32, w2: u32) -> (BTreeSet<u32>, u32, usize, bool) {
    let l = *a.last().unwrap();
    let m = gcd(w2 - w1, l);
    let mut out = BTreeSet::from([l]);
    let u: Vec<u32> = (0..m).filter(|u| a.contains(u) && (2 * u) % m != w2 % m).collect();
    for &u0 in &u {
        let mut h = 0;
        while h < l {
            out.insert(u0 + h);
            h += m;
        }
    }
    for v2 in [w2, w2 + l] {
        if v2 % 2 == 1 {
            continue;
        }
        let v = v2 / 2;
        let mut x = 0u64;
        while 2 * m as u64 * x + m as u64 <= l as u64 {
            out.insert(((v as u64 + x * (w2 - w1) as u64) % l as u64) as u32);
            x += 1;
        }
    }
    let paired = (0..m).all(|u1| {
        let u2 = (w2 % m + m - u1) % m;
        u1 >= u2 || (u.contains(&u1) as u8 + u.contains(&u2) as u8) == 1
    });
    (out, m, u.len(), paired)
}

// ---------------------------------------------------------------- harness

struct Ctx {
    dir: PathBuf,
    bin: PathBuf,
    conjecture_json: Option<Value>,
    theorem3_json: Option<Value>,
    theorem3_path: Option<PathBuf>,
    library_certs: Vec<Certificate>,
}

impl Ctx {
    fn cli(&self, args: &[&str]) -> (i32, Duration) {
        let start = Instant::now();
        let status = Command::new(&self.bin).args(args).output().expect("binary runs");
        (status.status.code().unwrap_or(-1), start.elapsed())
    }
}

type Check = fn(&mut Ctx) -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn by_k(cert: &Value, k: u32, key: &str) -> u64 {
    cert["counts"]["by_k"][k.to_string()][key].as_u64().unwrap_or(0)
}

fn check_failed(cert: &Value, name: &str) -> Option<(u64, u64)> {
    let c = &cert["checks"][name];
    Some((c["checked"].as_u64()?, c["failed"].as_u64()?))
}

fn query_from_json(v: &Value) -> EnumerationQuery {
    let mut q = EnumerationQuery::new(
        v["k"].as_u64().unwrap() as u32,
        v["l_min"].as_u64().unwrap() as u32,
        v["l_max"].as_u64().unwrap() as u32,
    );
    for c in v["constraints"].as_array().unwrap() {
        q = q.with(c.as_str().unwrap().parse::<Constraint>().unwrap());
    }
    q.with_budget(v["budget"].as_u64().unwrap())
}

// ---------------------------------------------------------------- criteria

fn conjecture_sweep(ctx: &mut Ctx) -> Result<String, String> {
    let out = ctx.dir.join("conjecture.json");
    let (code, elapsed) =
        ctx.cli(&["certify", "--theorem", "conjecture", "--k-max", "9", "--cap", "22", "--out", out.to_str().unwrap()]);
    ensure!(code == 0, "exit code {code}");
    ensure!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    let cert = read_json(&out)?;
    ensure!(cert["outcome"] == "verified", "outcome {}", cert["outcome"]);
    ensure!(cert["counterexamples"].as_array().unwrap().is_empty(), "counterexamples listed");
    ensure!(cert["cap"] == 22, "cap {}", cert["cap"]);

    let mut expected_checked = 0;
    for k in 3..=9u32 {
        let want: u64 = (k - 1..=22).map(|l| normalized_count(k, l)).sum();
        ensure!(by_k(&cert, k, "enumerated") == want, "k = {k}: enumerated {} != {want}", by_k(&cert, k, "enumerated"));
        ensure!(by_k(&cert, k, "in_hypothesis") == (k > 7) as u64, "k = {k}: hypothesis flag");
        if k > 7 {
            expected_checked += want;
        }
    }
    ensure!(
        check_failed(&cert, "freiman_lev_bound") == Some((expected_checked, 0)),
        "in-hypothesis tally {:?}",
        check_failed(&cert, "freiman_lev_bound")
    );

    let mut oracle_low = BTreeSet::new();
    for k in 3..=9u32 {
        for l in k - 1..=22 {
            for_each_normalized(k, l, |a| {
                if (naive_restricted(a).len() as u32) < freiman_lev(k, l) {
                    assert!(k <= 7, "in-hypothesis violation {}", literal(a));
                    oracle_low.insert(literal(a));
                }
            });
        }
    }
    let reported: BTreeSet<String> = cert["findings"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["kind"] == "out_of_hypothesis" && f["counterexample"] == false)
        .map(|f| f["set"].as_str().unwrap().to_string())
        .collect();
    ensure!(reported == oracle_low, "observations differ from oracle: {reported:?} vs {oracle_low:?}");
    let n = oracle_low.len();
    ctx.conjecture_json = Some(cert);
    Ok(format!("k in [8,9] verified, {n} out-of-hypothesis observations at k <= 7, {elapsed:.1?}"))
}

const FLAGGED: &[u32] = &[0, 3, 4, 6, 10, 11, 13, 14, 17];

fn classification(ctx: &mut Ctx) -> Result<String, String> {
    let out = ctx.dir.join("theorem3.json");
    let (code, elapsed) = ctx.cli(&["certify", "--theorem", "3", "--k-max", "10", "--out", out.to_str().unwrap()]);
    ensure!(code == 0, "exit code {code}");
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    let cert = read_json(&out)?;
    ensure!(cert["outcome"] == "verified", "outcome {}", cert["outcome"]);

    let mut resolved = Vec::new();
    for k in 4..=10u32 {
        let mut oracle = BTreeSet::new();
        for_each_normalized(k, 2 * k - 3, |a| {
            if naive_restricted(a).len() as u32 == 3 * k - 7 {
                oracle.insert(a.to_vec());
            }
        });
        let union: BTreeSet<Vec<u32>> = family_union(k).iter().map(|s| s.as_slice().to_vec()).collect();
        let spurious: Vec<_> = union.difference(&oracle).collect();
        ensure!(spurious.is_empty(), "k = {k}: family members not extremal: {spurious:?}");
        for a in oracle.difference(&union) {
            let extends_flagged = a.len() == FLAGGED.len() + 1 && FLAGGED.iter().all(|x| a.contains(x));
            ensure!(extends_flagged, "k = {k}: extremal set {} missing from families", literal(a));
            resolved.push(literal(a));
        }
        ensure!(by_k(&cert, k, "extremal") == oracle.len() as u64, "k = {k}: extremal count");
    }
    ensure!(resolved.len() <= 1, "more than one set attributed to the flagged entry: {resolved:?}");
    let noted: Vec<&str> = cert["findings"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["kind"] == "flagged_catalog_resolution")
        .map(|f| f["set"].as_str().unwrap())
        .collect();
    ensure!(noted == resolved, "certificate resolution {noted:?} vs oracle {resolved:?}");
    ctx.theorem3_json = Some(cert);
    ctx.theorem3_path = Some(out);
    Ok(format!("exact match for k = 4..10 modulo flagged entry (resolved by {}), {elapsed:.1?}", resolved.join(" ")))
}

/// Growth-regime sets with `2k-2 <= a_{k-1} <= cap`, by direct recursion.
fn for_each_growth(k: u32, last_lo: u32, last_hi: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, k: u32, lo: u32, hi: u32, f: &mut impl FnMut(&[u32])) {
        let i = buf.len() as u32;
        if i == k - 1 {
            for last in lo.max(buf[buf.len() - 1] + 1)..=hi {
                buf.push(last);
                f(buf);
                buf.pop();
            }
            return;
        }
        for v in buf[buf.len() - 1] + 1..2 * i {
            buf.push(v);
            rec(buf, k, lo, hi, f);
            buf.pop();
        }
    }
    rec(&mut vec![0], k, last_lo, last_hi, f);
}

fn theorem2(ctx: &mut Ctx) -> Result<String, String> {
    let cert = verify_theorem2(3, 12, None, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure!(cert.outcome == Outcome::Verified, "outcome {}", cert.outcome);
    let mut readings_agree = true;
    for k in 5..=12u32 {
        let mut equal = Vec::new();
        let mut below = 0;
        for_each_growth(k, 2 * k - 2, 2 * k + 6, &mut |a| {
            let n = naive_restricted(a).len() as u32;
            below += (n < 3 * k - 7) as u32;
            if n == 3 * k - 7 {
                equal.push(a.to_vec());
            }
        });
        ensure!(below == 0, "k = {k}: {below} sets below 3k-7");
        let low: Vec<_> = equal.iter().filter(|a| *a.last().unwrap() == 2 * k - 2).cloned().collect();
        readings_agree &= low == equal;
        if k >= 6 && k % 3 != 2 {
            let expected: Vec<u32> = if k % 3 == 0 {
                (0..=2 * k - 2).filter(|x| (x % 3 == 0 && *x <= k - 3) || x % 3 == 1).collect()
            } else {
                (0..=2 * k - 2).filter(|x| x % 3 == 0 || (x % 3 == 1 && *x <= k - 3)).collect()
            };
            ensure!(equal == vec![expected.clone()], "k = {k}: equality at {equal:?}");
            ensure!(gen_theorem2(k).unwrap().as_slice() == expected.as_slice(), "k = {k}: generator differs");
            let a = &equal[0];
            let prime = &a[..a.len() - 1];
            let mut shape: BTreeSet<u32> = (1..=2 * k - 4).filter(|&x| x != 2 && x != 2 * k - 6).collect();
            shape.extend(prime.iter().map(|x| x + a[a.len() - 1]));
            let actual: BTreeSet<u32> = naive_restricted(a).into_iter().collect();
            ensure!(actual == shape, "k = {k}: restricted sumset shape differs");
        } else {
            ensure!(equal.is_empty(), "k = {k}: unexpected equality {equal:?}");
        }
        ensure!(cert.counts.by_k[&k]["equality"] == equal.len() as u64, "k = {k}: certificate count");
    }
    for name in ["reading_all_maxima", "reading_max_2k_minus_2", "equality_sumset_shape", "theorem_2_bound"] {
        ensure!(cert.checks.get(name).is_some_and(|t| t.failed == 0 && t.checked > 0), "{name} tally");
    }
    ctx.library_certs.push(cert);
    Ok(format!(
        "equality exactly at the generated set for k = 6,7,9,10,12; none for 5,8,11; shape holds; readings agree: {readings_agree}"
    ))
}

fn theorem1(ctx: &mut Ctx) -> Result<String, String> {
    let cert = verify_theorem1(3, 9, None, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure!(cert.outcome == Outcome::Verified, "outcome {}", cert.outcome);
    ensure!(cert.counterexamples.is_empty(), "counterexamples {:?}", cert.counterexamples);
    ensure!(matches!(&cert.cap, Some(sumset_core::verify::Cap::PerK(r)) if r == "2k+6"), "cap {:?}", cert.cap);
    let mut total = 0u64;
    for k in 3..=9u32 {
        for l in 2 * k - 2..=2 * k + 6 {
            for_each_normalized(k, l, |a| {
                if a[a.len() - 2] < 2 * k - 4 {
                    total += 1;
                    assert!(naive_restricted(a).len() as u32 >= 3 * k - 7, "{}", literal(a));
                }
            });
        }
    }
    ensure!(cert.counts.enumerated == total, "enumerated {} != oracle {total}", cert.counts.enumerated);
    ctx.library_certs.push(cert);
    Ok(format!("{total} sets, zero counterexamples"))
}

fn lemma_suite(ctx: &mut Ctx) -> Result<String, String> {
    let cert = sweep_lemmas(3, 10, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure!(cert.outcome == Outcome::Verified, "outcome {}", cert.outcome);
    for name in [
        "cover_0_to_2k_minus_4",
        "exceptional_half",
        "exceptional_pairing",
        "exceptional_successor",
        "exceptional_doubling",
        "gap_no_diff2",
        "gap_consecutive_only_in_exception",
        "gap_diff3_only_in_exception",
        "d_count_bound",
        "tail_pair_structure",
    ] {
        ensure!(cert.checks.get(name).is_some_and(|t| t.failed == 0 && t.checked > 0), "{name}: {:?}", cert.checks.get(name));
    }
    let mut sets = 0;
    for k in 3..=10u32 {
        for_each_growth(k, 2 * k - 2, 2 * k - 2, &mut |a| {
            sets += 1;
            let prime = &a[..a.len() - 1];
            let doubled: BTreeSet<u32> = naive_sumset(prime).into_iter().collect();
            assert!((0..=2 * k - 4).all(|x| doubled.contains(&x)), "cover {}", literal(a));
            let r: BTreeSet<u32> = naive_restricted(prime).into_iter().collect();
            let b: Vec<u32> = (1..=2 * k - 4).filter(|x| !r.contains(x)).collect();
            let mut prev = 0;
            for &bi in &b {
                assert!(bi >= 2 * prev + 2, "doubling {}", literal(a));
                assert!(bi % 2 == 0 && prime.contains(&(bi / 2)) && !prime.contains(&bi), "half {}", literal(a));
                let below = prime.iter().filter(|&&x| x <= bi).count() as u32;
                assert_eq!(below, bi / 2 + 1, "pairing count {}", literal(a));
                prev = bi;
            }
            if b.len() >= 2 {
                let hi = 2 * k - 4 + b[b.len() - 2];
                let missing: Vec<u32> = (2 * k - 3..=hi).filter(|x| !r.contains(x)).collect();
                assert!(!missing.iter().any(|x| missing.contains(&(x + 2))), "diff 2 {}", literal(a));
            }
        });
    }
    ensure!(
        cert.checks["exceptional_half"].checked == sets,
        "growth sets {} != oracle {sets}",
        cert.checks["exceptional_half"].checked
    );
    ctx.library_certs.push(cert);
    Ok(format!("{sets} growth-regime sets for k = 3..10, zero violations"))
}

fn witness_suite(ctx: &mut Ctx) -> Result<String, String> {
    let cert = ctx
        .library_certs
        .iter()
        .find(|c| c.claim == "structural_lemmas")
        .ok_or("lemma certificate missing")?
        .clone();
    let (mut all, mut decomposed) = (0u64, 0u64);
    for k in 8..=10u32 {
        for l in k - 1..=2 * k - 3 {
            for_each_normalized(k, l, |a| {
                all += 1;
                let w = witnesses(a);
                assert!(w.len() <= 2, "|W| = {} on {}", w.len(), literal(a));
                if l == 2 * k - 3 && naive_restricted(a).len() as u32 == 3 * k - 7 && w.len() == 2 {
                    decomposed += 1;
                    let (rebuilt, m, u, paired) = rebuild_from_witnesses(a, w[0], w[1]);
                    assert_eq!(rebuilt, a.iter().copied().collect(), "reconstruction {}", literal(a));
                    assert_eq!(2 * u as u32 + 1, m, "|U| on {}", literal(a));
                    assert!(paired, "paired residues {}", literal(a));
                }
            });
        }
    }
    ensure!(cert.checks["witness_bound"] == sumset_core::verify::Tally { checked: all, failed: 0 }, "witness tally {:?}", cert.checks["witness_bound"]);
    for name in ["reconstruction", "u_count", "paired_residues"] {
        ensure!(
            cert.checks[name] == sumset_core::verify::Tally { checked: decomposed, failed: 0 },
            "{name}: {:?} vs oracle {decomposed}",
            cert.checks[name]
        );
    }
    Ok(format!("|W| <= 2 on {all} sets; {decomposed} extremal decompositions reconstruct"))
}

fn kernel_oracle(ctx: &mut Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed2a);
    for round in 0..10_000 {
        let k = rng.gen_range(1..=64);
        let mut vals = BTreeSet::new();
        while vals.len() < k {
            vals.insert(rng.gen_range(0..=512u32));
        }
        let a: Vec<u32> = vals.into_iter().collect();
        let set = IntegerSet::new(a.clone()).unwrap();
        ensure!(sumset(&set, &set).unwrap().as_slice() == naive_sumset(&a).as_slice(), "sumset, round {round}");
        let want = naive_restricted(&a);
        if k >= 2 {
            ensure!(restricted_sumset(&set).unwrap().as_slice() == want.as_slice(), "restricted, round {round}");
        }
        ensure!(restricted_sumset_size(&a) == want.len(), "size, round {round}");
    }

    let mut queries: Vec<EnumerationQuery> = Vec::new();
    for cert in [&ctx.conjecture_json, &ctx.theorem3_json].into_iter().flatten() {
        queries.extend(cert["query"].as_array().unwrap().iter().map(query_from_json));
    }
    for cert in &ctx.library_certs {
        queries.extend(cert.query.iter().cloned());
    }
    ensure!(queries.len() > 30, "only {} queries collected", queries.len());
    let mut checked = 0u64;
    for q in &queries {
        let (sets, exhausted) = enumerate(q).map_err(|e| e.to_string())?;
        ensure!(!exhausted, "query exhausted");
        for s in &sets {
            let want = naive_restricted(s.as_slice());
            ensure!(restricted_sumset_size(s.as_slice()) == want.len(), "size on {s}");
            ensure!(s.restricted_sumset().as_slice() == want.as_slice(), "restricted on {s}");
            checked += 1;
        }
    }
    Ok(format!("10000 random sets and {checked} enumerated sets from {} queries", queries.len()))
}

fn theorem_a(_: &mut Ctx) -> Result<String, String> {
    let mut n = 0;
    for k in 2..=8u32 {
        for l in k - 1..=20 {
            for_each_normalized(k, l, |a| {
                n += 1;
                let tight = naive_sumset(a).len() as u32 == 2 * k - 1;
                let ap = is_arithmetic_progression(&IntegerSet::new(a.to_vec()).unwrap()).unwrap().0;
                assert_eq!(tight, ap, "{}", literal(a));
            });
        }
    }
    Ok(format!("{n} sets"))
}

fn strip_wall_time(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_ms\"")).collect::<Vec<_>>().join("\n")
}

fn determinism(ctx: &mut Ctx) -> Result<String, String> {
    let first = ctx.theorem3_path.clone().ok_or("criterion 2 did not produce a certificate")?;
    let again = ctx.dir.join("theorem3-rerun.json");
    let (code, _) = ctx.cli(&["certify", "--theorem", "3", "--k-max", "10", "--out", again.to_str().unwrap()]);
    ensure!(code == 0, "exit code {code}");
    let single = ctx.dir.join("theorem3-one-thread.json");
    let (code, _) =
        ctx.cli(&["certify", "--theorem", "3", "--k-max", "10", "--jobs", "1", "--out", single.to_str().unwrap()]);
    ensure!(code == 0, "exit code {code}");
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| e.to_string());
    let a = strip_wall_time(&read(&first)?);
    ensure!(a == strip_wall_time(&read(&again)?), "rerun differs");
    ensure!(a == strip_wall_time(&read(&single)?), "single-thread run differs");
    Ok("byte-identical apart from wall_time_ms (also with --jobs 1)".into())
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut ctx = Ctx {
        dir: dir.path().to_path_buf(),
        bin: PathBuf::from(env!("CARGO_BIN_EXE_sumset-lab")),
        conjecture_json: None,
        theorem3_json: None,
        theorem3_path: None,
        library_certs: Vec::new(),
    };
    let criteria: [(u32, &str, Check); 9] = [
        (1, "conjecture sweep k <= 9, cap 22", conjecture_sweep),
        (2, "classification completeness k = 4..10", classification),
        (3, "growth-regime equality k = 5..12", theorem2),
        (4, "bound with small penultimate, k = 3..9, cap 2k+6", theorem1),
        (5, "exceptional-set lemma suite k = 3..10", lemma_suite),
        (6, "witness and decomposition suite k = 8..10", witness_suite),
        (7, "kernel equals naive oracle", kernel_oracle),
        (8, "|2A| = 2k-1 iff progression, k <= 8, l <= 20", theorem_a),
        (9, "certificate determinism", determinism),
    ];
    let mut failures = 0;
    let mut rows = BTreeMap::new();
    for (id, title, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&mut ctx)))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        let line = match &result {
            Ok(detail) => format!("criterion {id}: PASS  {title}  [{detail}] ({secs:.1}s)"),
            Err(why) => {
                failures += 1;
                format!("criterion {id}: FAIL  {title}  [{why}] ({secs:.1}s)")
            }
        };
        println!("{line}");
        rows.insert(id, result.is_ok());
    }
    println!("acceptance: {} of {} criteria passed", rows.values().filter(|&&ok| ok).count(), rows.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
