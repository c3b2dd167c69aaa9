//! Lexicographic enumeration of normalized sets with necessary-condition
//! pruning, prefix sharding and a deterministic node budget.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sets::{IntegerSet, NormalizedSet, DEFAULT_MAX_ELEMENT};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Named predicates an enumeration can be restricted by. Each one is applied
/// while choosing elements, never after the fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `gcd = 1`. Always enforced; listing it is accepted for clarity.
    GcdOne,
    /// `a_i < 2i` for `1 <= i <= k-2`.
    GrowthBelowDouble,
    /// `a_{k-1} >= 2k-2`.
    LastAtLeast2kMinus2,
    /// `a_{k-1} = 2k-3`.
    LastEq2kMinus3,
    /// `a_{k-2} < 2k-4`.
    PenultimateBelow2kMinus4,
    /// Every element lies in the given set.
    Mask(IntegerSet),
}

impl Constraint {
    pub const NAMES: [&'static str; 6] = [
        "gcd_one",
        "growth_a_i_lt_2i",
        "last_ge_2k_minus_2",
        "last_eq_2k_minus_3",
        "penultimate_lt_2k_minus_4",
        "mask:{...}",
    ];
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::GcdOne => f.write_str("gcd_one"),
            Constraint::GrowthBelowDouble => f.write_str("growth_a_i_lt_2i"),
            Constraint::LastAtLeast2kMinus2 => f.write_str("last_ge_2k_minus_2"),
            Constraint::LastEq2kMinus3 => f.write_str("last_eq_2k_minus_3"),
            Constraint::PenultimateBelow2kMinus4 => f.write_str("penultimate_lt_2k_minus_4"),
            Constraint::Mask(set) => write!(f, "mask:{set}"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("mask:") {
            return Ok(Constraint::Mask(rest.parse()?));
        }
        match s {
            "gcd_one" => Ok(Constraint::GcdOne),
            "growth_a_i_lt_2i" => Ok(Constraint::GrowthBelowDouble),
            "last_ge_2k_minus_2" => Ok(Constraint::LastAtLeast2kMinus2),
            "last_eq_2k_minus_3" => Ok(Constraint::LastEq2kMinus3),
            "penultimate_lt_2k_minus_4" => Ok(Constraint::PenultimateBelow2kMinus4),
            _ => Err(Error::Parse(format!(
                "unknown constraint `{s}`; expected one of {}",
                Constraint::NAMES.join(", ")
            ))),
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Cardinality, a range for the maximum, constraints and a node budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationQuery {
    pub k: u32,
    pub l_min: u32,
    pub l_max: u32,
    pub constraints: Vec<Constraint>,
    pub budget: u64,
}

impl EnumerationQuery {
    pub fn new(k: u32, l_min: u32, l_max: u32) -> Self {
        Self { k, l_min, l_max, constraints: vec![Constraint::GcdOne], budget: DEFAULT_BUDGET }
    }

    pub fn exact(k: u32, l: u32) -> Self {
        Self::new(k, l, l)
    }

    pub fn with(mut self, c: Constraint) -> Self {
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::OutOfRange(format!("k = {} < 2", self.k)));
        }
        if self.l_min + 1 < self.k {
            return Err(Error::OutOfRange(format!("l = {} < k-1 = {}", self.l_min, self.k - 1)));
        }
        if self.l_min > self.l_max {
            return Err(Error::OutOfRange(format!("empty l range [{}, {}]", self.l_min, self.l_max)));
        }
        if self.l_max > DEFAULT_MAX_ELEMENT {
            return Err(Error::ElementTooLarge { value: self.l_max as u64, limit: DEFAULT_MAX_ELEMENT });
        }
        if self.budget == 0 {
            return Err(Error::OutOfRange("budget must be positive".into()));
        }
        Ok(())
    }

    fn plan(&self) -> Plan {
        let k = self.k as usize;
        let mut plan = Plan {
            k,
            last_lo: self.l_min,
            last_hi: self.l_max,
            interior_hi: vec![u32::MAX; k],
            mask: None,
        };
        for c in &self.constraints {
            match c {
                Constraint::GcdOne => {}
                Constraint::GrowthBelowDouble => {
                    for i in 1..k.saturating_sub(1) {
                        plan.interior_hi[i] = plan.interior_hi[i].min(2 * i as u32 - 1);
                    }
                }
                Constraint::LastAtLeast2kMinus2 => {
                    plan.last_lo = plan.last_lo.max((2 * k as u32).saturating_sub(2));
                }
                Constraint::LastEq2kMinus3 => {
                    let v = (2 * k as u32).saturating_sub(3);
                    plan.last_lo = plan.last_lo.max(v);
                    plan.last_hi = plan.last_hi.min(v);
                }
                Constraint::PenultimateBelow2kMinus4 => {
                    if k >= 3 {
                        let i = k - 2;
                        plan.interior_hi[i] = plan.interior_hi[i].min((2 * k as u32).saturating_sub(5));
                    }
                }
                Constraint::Mask(set) => {
                    let mut mask = vec![false; self.l_max as usize + 1];
                    for v in set.iter().filter(|&v| v <= self.l_max) {
                        mask[v as usize] = true;
                    }
                    plan.mask = Some(match plan.mask.take() {
                        Some(old) => old.iter().zip(&mask).map(|(a, b)| *a && *b).collect(),
                        None => mask,
                    });
                }
            }
        }
        for i in 1..k.saturating_sub(1) {
            // room for the k-1-i larger elements that follow
            let room = plan.last_hi.saturating_sub((k - 1 - i) as u32);
            plan.interior_hi[i] = plan.interior_hi[i].min(room);
        }
        plan
    }
}

struct Plan {
    k: usize,
    last_lo: u32,
    last_hi: u32,
    interior_hi: Vec<u32>,
    mask: Option<Vec<bool>>,
}

impl Plan {
    fn allowed(&self, v: u32) -> bool {
        self.mask.as_ref().is_none_or(|m| m.get(v as usize).copied().unwrap_or(false))
    }

    fn range(&self, i: usize, prev: u32) -> std::ops::RangeInclusive<u32> {
        if i == self.k - 1 {
            self.last_lo.max(prev + 1)..=self.last_hi
        } else {
            prev + 1..=self.interior_hi[i]
        }
    }
}

struct Walker<'a, F> {
    plan: &'a Plan,
    buf: Vec<u32>,
    nodes: u64,
    limit: u64,
    stopped: bool,
    visit: F,
}

impl<F: FnMut(&[u32])> Walker<'_, F> {
    /// Fills positions `i..depth`, calling `visit` on each completed buffer.
    fn walk(&mut self, i: usize, depth: usize, g: u32) {
        if i == depth {
            (self.visit)(&self.buf[..depth]);
            return;
        }
        let prev = self.buf[i - 1];
        for v in self.plan.range(i, prev) {
            if self.stopped {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                self.stopped = true;
                return;
            }
            if !self.plan.allowed(v) {
                continue;
            }
            let g2 = g.gcd(&v);
            if i == self.plan.k - 1 && g2 != 1 {
                continue;
            }
            self.buf[i] = v;
            self.walk(i + 1, depth, g2);
        }
    }
}

/// Outcome of a sweep: one accumulator per shard, in enumeration order.
#[derive(Debug, Clone)]
pub struct Sweep<T> {
    pub shards: Vec<T>,
    pub nodes: u64,
    pub yielded: u64,
    /// Set when the budget ran out; `shards` then covers a prefix of the
    /// full stream.
    pub exhausted: bool,
}

/// Number of interior elements fixed per shard.
fn shard_depth(k: usize) -> usize {
    k.saturating_sub(2).min(2)
}

/// Runs `visit` on every set matching `query`, sharded over the current
/// rayon pool. Each shard owns an accumulator made by `init`; the result is
/// identical for every thread count.
pub fn sweep<T, I, V>(query: &EnumerationQuery, init: I, visit: V) -> Result<Sweep<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &[u32]) + Sync,
{
    query.validate()?;
    let plan = query.plan();
    let k = plan.k;
    let t = shard_depth(k);
    if !plan.allowed(0) {
        return Ok(Sweep { shards: Vec::new(), nodes: 0, yielded: 0, exhausted: false });
    }

    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    let prefix_nodes = {
        let mut w = Walker {
            plan: &plan,
            buf: vec![0; k],
            nodes: 0,
            limit: query.budget,
            stopped: false,
            visit: |p: &[u32]| prefixes.push(p.to_vec()),
        };
        w.walk(1, 1 + t, 0);
        if w.stopped {
            return Ok(Sweep { shards: Vec::new(), nodes: w.nodes, yielded: 0, exhausted: true });
        }
        w.nodes
    };

    let results: Vec<(T, u64, u64, bool)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = init();
            let mut yielded = 0u64;
            let g = prefix.iter().fold(0u32, |g, &x| g.gcd(&x));
            let mut w = Walker {
                plan: &plan,
                buf: vec![0; k],
                nodes: 0,
                limit: query.budget,
                stopped: false,
                visit: |s: &[u32]| {
                    yielded += 1;
                    visit(&mut acc, s);
                },
            };
            w.buf[..prefix.len()].copy_from_slice(prefix);
            w.walk(prefix.len(), k, g);
            let (nodes, stopped) = (w.nodes, w.stopped);
            (acc, nodes, yielded, stopped)
        })
        .collect();

    let mut out = Sweep { shards: Vec::new(), nodes: prefix_nodes, yielded: 0, exhausted: false };
    for (acc, nodes, yielded, stopped) in results {
        out.nodes += nodes;
        if stopped || out.nodes > query.budget {
            out.nodes = out.nodes.min(query.budget.saturating_add(1));
            out.exhausted = true;
            break;
        }
        out.yielded += yielded;
        out.shards.push(acc);
    }
    Ok(out)
}

/// Every set matching `query` in lexicographic order, plus whether the
/// budget truncated the list.
pub fn enumerate(query: &EnumerationQuery) -> Result<(Vec<NormalizedSet>, bool)> {
    let sw = sweep(query, Vec::new, |acc: &mut Vec<NormalizedSet>, s| {
        acc.push(NormalizedSet::from_slice_unchecked(s))
    })?;
    Ok((sw.shards.into_iter().flatten().collect(), sw.exhausted))
}

/// Runs `f` on a pool with `jobs` threads, or on the current pool.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}
