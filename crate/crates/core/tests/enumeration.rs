use std::collections::{BTreeMap, BTreeSet};

use eigenratio::canon::{graph_code, tree_automorphisms, tree_code, unicyclic_code};
use eigenratio::enumerate::{enumerate_all_graphs, enumerate_connected_graphs, enumerate_trees, enumerate_unicyclic};
use eigenratio::generators::prufer_decode;
use eigenratio::Graph;

const TREES: [usize; 12] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];

/// Every Prüfer sequence of length `n−2`, decoded and bucketed by isomorphism class.
fn prufer_classes(n: usize) -> BTreeMap<String, u64> {
    let mut classes = BTreeMap::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        let t = Graph::from_edges(n, prufer_decode(&seq, n)).unwrap();
        *classes.entry(tree_code(&t).unwrap()).or_insert(0u64) += 1;
        let mut i = 0;
        while i < seq.len() && seq[i] == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == seq.len() {
            break;
        }
        seq[i] += 1;
    }
    classes
}

#[test]
fn tree_counts_match_prufer_buckets() {
    for n in 3..=8 {
        let classes = prufer_classes(n);
        let listed: BTreeSet<String> = enumerate_trees(n).unwrap().map(|t| tree_code(&t).unwrap()).collect();
        assert_eq!(listed.len(), TREES[n - 1], "n = {n}");
        assert_eq!(listed, classes.keys().cloned().collect(), "n = {n}");
        let fact: u64 = (1..=n as u64).product();
        for t in enumerate_trees(n).unwrap() {
            let labelled = classes[&tree_code(&t).unwrap()];
            assert_eq!(labelled * tree_automorphisms(&t).unwrap() as u64, fact);
        }
    }
}

#[test]
fn cayley_identity_up_to_12() {
    for n in 3..=12usize {
        let fact: u128 = (1..=n as u128).product();
        let mut total = 0u128;
        let mut count = 0;
        let mut codes = BTreeSet::new();
        for t in enumerate_trees(n).unwrap() {
            total += fact / tree_automorphisms(&t).unwrap();
            count += 1;
            codes.insert(tree_code(&t).unwrap());
        }
        assert_eq!(count, TREES[n - 1], "n = {n}");
        assert_eq!(codes.len(), count, "duplicate tree at n = {n}");
        assert_eq!(total, (n as u128).pow(n as u32 - 2), "n = {n}");
    }
}

#[test]
fn unicyclic_counts() {
    let expected = [1, 2, 5, 13, 33, 89, 240, 657, 1806];
    for (n, &want) in (3..=11).zip(&expected) {
        let graphs: Vec<Graph> = enumerate_unicyclic(n).unwrap().collect();
        assert_eq!(graphs.len(), want, "n = {n}");
        let codes: BTreeSet<String> = graphs.iter().map(|g| unicyclic_code(g).unwrap()).collect();
        assert_eq!(codes.len(), want);
        assert!(graphs.iter().all(|g| g.m() == n && g.is_connected()));
    }
}

#[test]
fn graph_counts() {
    let all = [1, 2, 4, 11, 34, 156, 1044];
    for (n, &want) in (1..=7).zip(&all) {
        let codes: BTreeSet<_> = enumerate_all_graphs(n).unwrap().map(|g| graph_code(&g)).collect();
        assert_eq!(codes.len(), want, "n = {n}");
    }
    let connected = [1, 1, 2, 6, 21, 112, 853, 11117];
    for (n, &want) in (1..=8).zip(&connected) {
        let graphs: Vec<Graph> = enumerate_connected_graphs(n).unwrap().collect();
        assert_eq!(graphs.len(), want, "n = {n}");
        assert!(graphs.iter().all(Graph::is_connected));
    }
}

#[test]
fn caps_are_enforced() {
    assert!(enumerate_trees(15).is_err());
    assert!(enumerate_unicyclic(12).is_err());
    assert!(enumerate_all_graphs(10).is_err());
}
