use std::collections::{BTreeMap, HashSet};

use kgscope::graph::{compute_stats, parse_reader, write_generic, EdgeFormat, KnowledgeGraph, SplitSpec};
use proptest::prelude::*;

fn triples() -> impl Strategy<Value = Vec<(String, String, String)>> {
    let name = prop::sample::select(vec!["a", "b", "c", "d", "e/n", "f g", "h-1"]);
    let rel = prop::sample::select(vec!["IsA", "PartOf", "UsedFor"]);
    prop::collection::vec((name.clone(), rel, name), 0..60)
        .prop_map(|v| v.into_iter().map(|(h, r, t)| (h.to_owned(), r.to_owned(), t.to_owned())).collect())
}

fn text(triples: &[(String, String, String)]) -> String {
    triples.iter().map(|(h, r, t)| format!("{h}\t{r}\t{t}\n")).collect()
}

fn multiset(g: &KnowledgeGraph) -> BTreeMap<(String, String, String), u32> {
    let mut m = BTreeMap::new();
    for (i, &t) in g.triples().iter().enumerate() {
        let (h, r, t) = g.names(t);
        *m.entry((h.to_owned(), r.to_owned(), t.to_owned())).or_default() += g.multiplicity(i);
    }
    m
}

fn graph(triples: &[(String, String, String)]) -> KnowledgeGraph {
    parse_reader(text(triples).as_bytes(), EdgeFormat::Generic3Col).unwrap()
}

proptest! {
    #[test]
    fn parse_write_parse_keeps_the_multiset(ts in triples()) {
        let first = graph(&ts);
        let mut out = Vec::new();
        write_generic(&first, &mut out).unwrap();
        let second = parse_reader(out.as_slice(), EdgeFormat::Generic3Col).unwrap();
        let mut expected = BTreeMap::new();
        for t in &ts {
            *expected.entry(t.clone()).or_insert(0u32) += 1;
        }
        prop_assert_eq!(multiset(&first), expected.clone());
        prop_assert_eq!(multiset(&second), expected);
    }

    #[test]
    fn inclusion_exclusion_always_holds(ts in triples()) {
        let g = graph(&ts);
        let s = compute_stats(&g);
        prop_assert!(s.inclusion_exclusion_holds());
        let used: HashSet<_> = ts.iter().flat_map(|(h, _, t)| [h.clone(), t.clone()]).collect();
        prop_assert_eq!(s.entities, used.len());
    }

    #[test]
    fn sample_is_a_subset_of_the_requested_size(ts in triples(), n in 0usize..80, seed in any::<u64>()) {
        let g = graph(&ts);
        let s = g.sample_triples(n, seed);
        prop_assert_eq!(s.len(), n.min(g.len()));
        let all = multiset(&g);
        for (k, m) in multiset(&s) {
            prop_assert_eq!(all.get(&k), Some(&m));
        }
    }

    #[test]
    fn split_partitions_the_graph(ts in triples(), seed in any::<u64>()) {
        let g = graph(&ts);
        let spec = SplitSpec { seed, ..SplitSpec::default() };
        let split = g.split(&spec).unwrap();
        let (tr, va, te) = spec.sizes(g.len());
        prop_assert_eq!((split.train.len(), split.validation.len(), split.test.len()), (tr, va, te));
        prop_assert!((va as f64 - 0.125 * g.len() as f64).abs() < 1.0);
        prop_assert!((te as f64 - 0.125 * g.len() as f64).abs() < 1.0);
        let mut union = multiset(&split.train);
        for part in [&split.validation, &split.test] {
            for (k, m) in multiset(part) {
                prop_assert!(union.insert(k, m).is_none(), "parts overlap");
            }
        }
        prop_assert_eq!(union, multiset(&g));
    }

    #[test]
    fn filter_relations_is_idempotent(ts in triples()) {
        let g = graph(&ts);
        let drop: HashSet<String> = ["PartOf".to_owned()].into();
        let once = g.filter_relations(&drop);
        let twice = once.filter_relations(&drop);
        prop_assert_eq!(multiset(&once), multiset(&twice));
        prop_assert!(once.relation_id("PartOf").is_none());
    }
}
