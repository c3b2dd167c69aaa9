use std::collections::BTreeSet;

use proptest::prelude::*;

use sumset_core::sets::{normalize, reflect, restricted_sumset, restricted_sumset_size, sumset, IntegerSet};
use sumset_core::verify::{enumerate, sweep, with_jobs, Constraint, EnumerationQuery};

fn naive_restricted(a: &[u32]) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            out.insert(x + y);
        }
    }
    out
}

fn naive_sumset(a: &[u32]) -> BTreeSet<u32> {
    a.iter().flat_map(|x| a.iter().map(move |y| x + y)).collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Brute force over bitmasks of the interior `[1, l-1]`.
fn brute_sets(k: u32, l: u32, keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << (l - 1) {
        if mask.count_ones() + 2 != k {
            continue;
        }
        let mut a = vec![0];
        a.extend((1..l).filter(|x| mask >> (x - 1) & 1 == 1));
        a.push(l);
        if a.iter().fold(0, |g, &x| gcd(g, x)) == 1 && keep(&a) {
            out.push(a);
        }
    }
    out.sort();
    out
}

type Filter = Box<dyn Fn(&[u32]) -> bool>;

fn arb_set(max_len: usize, max_val: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::btree_set(0..=max_val, 1..=max_len).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #[test]
    fn kernels_match_pairwise_sums(a in arb_set(40, 600)) {
        let set = IntegerSet::new(a.clone()).unwrap();
        let r = naive_restricted(&a);
        prop_assert_eq!(restricted_sumset_size(&a), r.len());
        if a.len() >= 2 {
            prop_assert_eq!(restricted_sumset(&set).unwrap().into_vec(), r.into_iter().collect::<Vec<_>>());
        }
        let s: Vec<u32> = naive_sumset(&a).into_iter().collect();
        prop_assert_eq!(sumset(&set, &set).unwrap().into_vec(), s);
    }

    #[test]
    fn small_elements_take_the_same_answer(a in arb_set(20, 63)) {
        prop_assert_eq!(restricted_sumset_size(&a), naive_restricted(&a).len());
    }

    #[test]
    fn normalization_preserves_sizes(a in arb_set(20, 200).prop_filter("two elements", |a| a.len() >= 2),
                                     shift in 0u32..50, scale in 1u32..6) {
        let moved: Vec<u32> = a.iter().map(|x| shift + scale * x).collect();
        let n = normalize(&IntegerSet::new(moved.clone()).unwrap()).unwrap();
        prop_assert_eq!(n.set.restricted_size(), naive_restricted(&a).len());
        prop_assert_eq!(n.set.as_slice().iter().map(|x| n.offset + n.scale * x).collect::<Vec<_>>(), moved);
        prop_assert_eq!(n.set.as_slice().iter().fold(0, |g, &x| gcd(g, x)), 1);
    }

    #[test]
    fn reflection_preserves_sizes(a in arb_set(20, 200).prop_filter("two elements", |a| a.len() >= 2)) {
        let n = normalize(&IntegerSet::new(a).unwrap()).unwrap().set;
        let r = reflect(&n);
        prop_assert_eq!(r.restricted_size(), n.restricted_size());
        prop_assert_eq!(r.double().len(), n.double().len());
        prop_assert_eq!(reflect(&r), n);
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for k in 3..=7u32 {
        for l in k - 1..=14 {
            let want = brute_sets(k, l, |_| true);
            let (got, exhausted) = enumerate(&EnumerationQuery::exact(k, l)).unwrap();
            assert!(!exhausted);
            let got: Vec<Vec<u32>> = got.iter().map(|s| s.as_slice().to_vec()).collect();
            assert_eq!(got, want, "k = {k}, l = {l}");
        }
    }
}

#[test]
fn constraint_pruning_is_sound() {
    for k in 4..=7u32 {
        let growth = |a: &[u32]| (1..a.len() - 1).all(|i| a[i] < 2 * i as u32);
        let penultimate = move |a: &[u32]| a[a.len() - 2] < 2 * k - 4;
        for l in 2 * k - 3..=2 * k + 4 {
            let cases: [(Constraint, Filter); 3] = [
                (Constraint::GrowthBelowDouble, Box::new(growth)),
                (Constraint::PenultimateBelow2kMinus4, Box::new(penultimate)),
                (Constraint::LastAtLeast2kMinus2, Box::new(move |_: &[u32]| l + 2 >= 2 * k)),
            ];
            for (c, keep) in cases {
                let want = brute_sets(k, l, &*keep);
                let (got, _) = enumerate(&EnumerationQuery::exact(k, l).with(c.clone())).unwrap();
                let got: Vec<Vec<u32>> = got.iter().map(|s| s.as_slice().to_vec()).collect();
                assert_eq!(got, want, "k = {k}, l = {l}, {c}");
            }
        }
        let mask: Constraint = "mask:{0,1,2,4,5,7,8,10,11}".parse().unwrap();
        let (got, _) = enumerate(&EnumerationQuery::new(k, k - 1, 11).with(mask)).unwrap();
        assert!(got.iter().all(|s| s.as_slice().iter().all(|x| x % 3 != 0 || *x == 0)));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let q = EnumerationQuery::new(8, 7, 16);
    let run = |jobs| {
        with_jobs(Some(jobs), || {
            sweep(&q, Vec::new, |acc: &mut Vec<Vec<u32>>, s| acc.push(s.to_vec())).unwrap()
        })
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.shards, four.shards);
    assert_eq!(one.nodes, four.nodes);

    let tight = q.clone().with_budget(one.nodes / 3);
    let cut = |jobs| with_jobs(Some(jobs), || sweep(&tight, || 0u64, |n, _| *n += 1).unwrap());
    let (a, b) = (cut(1), cut(4));
    assert!(a.exhausted);
    assert_eq!((a.shards, a.nodes), (b.shards, b.nodes));
}
