//! Property tests for the invariants of each module.

use inflectkit::align::{align, split_zones, Column};
use inflectkit::eval::{
    levenshtein, oracle_ensemble, oracle_feature_combination, score_paradigms, score_predictions,
};
use inflectkit::paradigm::complete;
use inflectkit::rules::extract_rules;
use inflectkit::sampler::{make_task1_splits, CountTable, SplitSizes, SplitSpec};
use inflectkit::tsv::{parse_paradigms, parse_triples, serialize_paradigms, serialize_triples};
use inflectkit::{train, Cell, ColumnOrder, FeatureBundle, Orientation, Paradigm, Triple};
use proptest::prelude::*;

fn word(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    prop::string::string_regex(&format!("[{alphabet}]{{1,{max}}}")).unwrap()
}

fn bundle() -> impl Strategy<Value = FeatureBundle> {
    prop::collection::vec("[A-Z]{1,3}(\\.[A-Z]{1,2})?", 1..4)
        .prop_map(|tags| FeatureBundle::new(tags).unwrap())
}

fn triple() -> impl Strategy<Value = Triple> {
    (word("a-zäö $", 8), bundle(), word("a-zäö $", 10))
        .prop_map(|(l, b, f)| Triple::new(l, b, f).unwrap())
}

fn reversed(s: &str) -> String {
    s.chars().rev().collect()
}

/// Exhaustive recursion over all edit paths, costs in tenths.
fn brute_cost(x: &[char], y: &[char]) -> u32 {
    match (x.split_first(), y.split_first()) {
        (None, _) => 10 * y.len() as u32,
        (_, None) => 10 * x.len() as u32,
        (Some((a, xr)), Some((b, yr))) => {
            let sub = brute_cost(xr, yr) + if a == b { 0 } else { 11 };
            sub.min(brute_cost(xr, y) + 10).min(brute_cost(x, yr) + 10)
        }
    }
}

fn brute_lev(x: &[char], y: &[char]) -> usize {
    match (x.split_first(), y.split_first()) {
        (None, _) => y.len(),
        (_, None) => x.len(),
        (Some((a, xr)), Some((b, yr))) => (brute_lev(xr, yr) + usize::from(a != b))
            .min(brute_lev(xr, y) + 1)
            .min(brute_lev(x, yr) + 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triples_round_trip(ts in prop::collection::vec(triple(), 0..8)) {
        for order in [ColumnOrder::LemmaFormTags, ColumnOrder::LemmaTagsForm] {
            let text = serialize_triples(&ts, order);
            prop_assert_eq!(text.lines().count(), ts.len());
            prop_assert_eq!(parse_triples(&text, order).unwrap(), ts.clone());
        }
    }

    #[test]
    fn paradigms_round_trip(
        raw in prop::collection::vec(
            (word("a-z", 6), prop::collection::btree_map("[A-Z]{1,3}", prop::option::of(word("a-z ", 7)), 1..5)),
            0..5,
        )
    ) {
        let ps: Vec<Paradigm> = raw
            .into_iter()
            .map(|(lemma, cells)| {
                let cells = cells
                    .into_iter()
                    .map(|(tag, form)| Cell { bundle: FeatureBundle::parse(&tag).unwrap(), form })
                    .collect();
                Paradigm::new(lemma, cells).unwrap()
            })
            .collect();
        for order in [ColumnOrder::LemmaFormTags, ColumnOrder::LemmaTagsForm] {
            let text = serialize_paradigms(&ps, order);
            prop_assert_eq!(parse_paradigms(&text, order).unwrap(), ps.clone());
        }
    }

    #[test]
    fn alignment_is_optimal_and_reconstructs(x in word("abc", 6), y in word("abc", 6)) {
        let a = align(&x, &y).unwrap();
        let xc: Vec<char> = x.chars().collect();
        let yc: Vec<char> = y.chars().collect();
        prop_assert_eq!(a.cost().tenths(), brute_cost(&xc, &yc));
        prop_assert_eq!(a.input(), x.clone());
        prop_assert_eq!(a.output(), y.clone());
        prop_assert!(a.columns().iter().all(|c| c.input.is_some() || c.output.is_some()));
        let summed: u32 = a.columns().iter().map(|c| c.cost().tenths()).sum();
        prop_assert_eq!(summed, a.cost().tenths());
        prop_assert_eq!(align(&y, &x).unwrap().cost(), a.cost());
        prop_assert_eq!(align(&x, &y).unwrap(), a);
    }

    #[test]
    fn zones_partition_the_alignment(x in word("abc", 6), y in word("abc", 6)) {
        let a = align(&x, &y).unwrap();
        let z = split_zones(&a);
        let lead = a.columns().len() - z.core.len();
        prop_assert!(a.columns()[..lead].iter().all(Column::is_one_sided));
        prop_assert!(z.core.first().is_none_or(|c| !c.is_one_sided()));
        prop_assert_eq!(format!("{}{}", z.prefix_input, z.core_input()), x);
        prop_assert_eq!(format!("{}{}", z.prefix_output, z.core_output()), y);
    }

    #[test]
    fn one_suffix_rule_per_core_column(x in word("abc", 6), y in word("abc", 6)) {
        let z = split_zones(&align(&x, &y).unwrap());
        let rules = extract_rules(&z);
        prop_assert_eq!(rules.suffixes.len(), z.core.len());
        // every rule applies to the word it was read from
        prop_assert!(x.starts_with(&rules.prefix.pattern));
        for r in &rules.suffixes {
            prop_assert!(x.ends_with(&r.pattern), "{} on {}", r, x);
        }
    }

    #[test]
    fn best_suffix_rule_is_longest(
        data in prop::collection::vec((word("abc", 5), word("abc", 5)), 1..6),
        query in word("abc", 6),
    ) {
        let b = FeatureBundle::parse("X").unwrap();
        let ts: Vec<Triple> = data.iter().map(|(l, f)| Triple::new(l.clone(), b.clone(), f.clone()).unwrap()).collect();
        let model = train(&ts).unwrap();
        let w = if model.orientation() == Orientation::Prefixing { reversed(&query) } else { query.clone() };
        let best = model.store().best_suffix_rule(&b, &w);
        for (rule, _) in model.store().suffix_rules(&b) {
            if rule.matches(&w) {
                let best = best.as_ref().expect("a rule matches");
                prop_assert!(best.pattern.chars().count() >= rule.pattern.chars().count());
            }
        }
    }

    #[test]
    fn single_example_round_trip(t in triple()) {
        let model = train(std::slice::from_ref(&t)).unwrap();
        prop_assert_eq!(model.inflect(t.lemma(), t.bundle()).unwrap(), t.form());
    }

    #[test]
    fn unseen_bundle_copies(ts in prop::collection::vec(triple(), 1..6), w in word("a-z", 8)) {
        let model = train(&ts).unwrap();
        let unseen = FeatureBundle::parse("UNSEEN;BUNDLE").unwrap();
        prop_assert_eq!(model.inflect(&w, &unseen).unwrap(), w);
    }

    #[test]
    fn mirror_symmetry(
        data in prop::collection::vec((word("a-e", 6), word("xyz", 2)), 1..6),
        query in word("a-e", 6),
    ) {
        // a suffixing fixture: forms append a marker
        let b = FeatureBundle::parse("N;PL").unwrap();
        let forward: Vec<Triple> = data
            .iter()
            .map(|(l, m)| Triple::new(l.clone(), b.clone(), format!("{l}{m}")).unwrap())
            .collect();
        let mirror: Vec<Triple> = forward
            .iter()
            .map(|t| Triple::new(reversed(t.lemma()), b.clone(), reversed(t.form())).unwrap())
            .collect();
        let f = train(&forward).unwrap();
        let m = train(&mirror).unwrap();
        prop_assert_eq!(f.orientation(), Orientation::Suffixing);
        prop_assert_eq!(m.orientation(), Orientation::Prefixing);
        prop_assert_eq!(m.store(), f.store());
        prop_assert_eq!(
            m.inflect(&reversed(&query), &b).unwrap(),
            reversed(&f.inflect(&query, &b).unwrap())
        );
    }

    #[test]
    fn completion_is_cellwise(
        ts in prop::collection::vec(triple(), 1..6),
        mask in prop::collection::vec(any::<bool>(), 1..6),
    ) {
        let model = train(&ts).unwrap();
        let cells: Vec<Cell> = mask
            .iter()
            .enumerate()
            .map(|(i, &keep)| {
                let b = ts.get(i).map(|t| t.bundle().clone())
                    .unwrap_or_else(|| FeatureBundle::parse(&format!("EXTRA{i}")).unwrap());
                if keep { Cell::filled(b, "given") } else { Cell::empty(b) }
            })
            .collect();
        // bundles may repeat across generated triples; skip those cases
        prop_assume!(Paradigm::new("lemma", cells.clone()).is_ok());
        let p = Paradigm::new("lemma", cells).unwrap();
        let done = complete(&model, &p).unwrap();
        prop_assert!(done.is_complete());
        for (before, after) in p.cells().iter().zip(done.cells()) {
            if before.is_filled() {
                prop_assert_eq!(before, after);
            } else {
                let one = model.inflect("lemma", &before.bundle).unwrap();
                prop_assert_eq!(after.form.as_deref(), Some(one.as_str()));
            }
        }
    }

    #[test]
    fn levenshtein_is_a_metric(a in "[ab]{0,5}", b in "[ab]{0,5}", c in "[ab]{0,5}") {
        let ac: Vec<char> = a.chars().collect();
        let bc: Vec<char> = b.chars().collect();
        prop_assert_eq!(levenshtein(&a, &b), brute_lev(&ac, &bc));
        prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
        prop_assert_eq!(levenshtein(&a, &b) == 0, a == b);
        prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
    }

    #[test]
    fn oracles_are_monotone(
        golds in prop::collection::vec(("[ab]{1,2}", "[XY]"), 1..8),
        guesses in prop::collection::vec(prop::collection::vec("[ab]{1,2}", 8), 1..4),
        extra_train in prop::collection::vec("[XYZ]", 0..3),
    ) {
        let gold: Vec<Triple> = golds
            .iter()
            .enumerate()
            .map(|(i, (f, tag))| Triple::new(format!("l{i}"), FeatureBundle::parse(tag).unwrap(), f.clone()).unwrap())
            .collect();
        let systems: Vec<Vec<Triple>> = guesses
            .iter()
            .map(|g| gold.iter().zip(g).map(|(t, f)| Triple::new(t.lemma(), t.bundle().clone(), f.clone()).unwrap()).collect())
            .collect();
        let mut prev = 0.0;
        for k in 1..=systems.len() {
            let o = oracle_ensemble(&systems[..k], &gold).unwrap();
            prop_assert!(o >= prev);
            let acc = score_predictions(&gold, &systems[k - 1]).unwrap().per_form_accuracy;
            prop_assert!(o >= acc);
            prev = o;
        }
        let single = oracle_ensemble(&systems[..1], &gold).unwrap();
        prop_assert_eq!(single, score_predictions(&gold, &systems[0]).unwrap().per_form_accuracy);

        let mut train_set: Vec<Triple> = Vec::new();
        let mut prev = oracle_feature_combination(&train_set, &gold);
        for tag in extra_train {
            train_set.push(Triple::new("t", FeatureBundle::parse(&tag).unwrap(), "t").unwrap());
            let o = oracle_feature_combination(&train_set, &gold);
            prop_assert!(o >= prev);
            prev = o;
        }
    }

    #[test]
    fn full_paradigm_bounded_by_per_form_when_sizes_match(
        correct in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 1..6)
    ) {
        let mk = |lemma: String, forms: Vec<&str>| {
            let cells = forms
                .into_iter()
                .enumerate()
                .map(|(i, f)| Cell::filled(FeatureBundle::parse(&format!("C{i}")).unwrap(), f))
                .collect();
            Paradigm::new(lemma, cells).unwrap()
        };
        let gold: Vec<Paradigm> = (0..correct.len()).map(|i| mk(format!("l{i}"), vec!["x"; 3])).collect();
        let pred: Vec<Paradigm> = correct
            .iter()
            .enumerate()
            .map(|(i, row)| mk(format!("l{i}"), row.iter().map(|&c| if c { "x" } else { "y" }).collect()))
            .collect();
        let r = score_paradigms(&gold, None, &pred).unwrap();
        let full = r.full_paradigm_accuracy.unwrap();
        prop_assert!((0.0..=1.0).contains(&full));
        prop_assert!(full <= r.per_form_accuracy);
        prop_assert_eq!(r.per_form_accuracy == 1.0, r.mean_levenshtein == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn task1_splits_nest_and_partition(seed in any::<u64>(), n in 30usize..80) {
        let b = FeatureBundle::parse("X").unwrap();
        let triples: Vec<Triple> = (0..n)
            .map(|i| Triple::new(format!("l{i}"), b.clone(), format!("f{i}")).unwrap())
            .collect();
        let mut counts = CountTable::new();
        for i in 0..n {
            counts.insert(format!("f{i}"), (i % 7) as u64);
        }
        let spec = SplitSpec {
            seed,
            sizes: SplitSizes { low: 2, medium: 5, high: 20, dev: 4, test: 4 },
            keep_probability: 0.2,
        };
        let s = make_task1_splits(&triples, &counts, &spec).unwrap();
        let low = s.low.as_triples().unwrap();
        let medium = s.medium.as_ref().unwrap().as_triples().unwrap();
        let high = s.high.as_ref().unwrap().as_triples().unwrap();
        prop_assert_eq!(low, &medium[..2]);
        prop_assert_eq!(medium, &high[..5]);
        let mut seen = std::collections::HashSet::new();
        for t in high.iter().chain(s.dev.as_triples().unwrap()).chain(s.test.as_triples().unwrap()) {
            prop_assert!(seen.insert(t.lemma().to_owned()));
        }
        prop_assert_eq!(make_task1_splits(&triples, &counts, &spec).unwrap(), s);
    }
}
