//! Frequency-weighted train/dev/test splits.
//!
//! Every item (a triple, or a whole paradigm) gets a corpus count; add-one
//! smoothing turns the counts into a distribution, and items are drawn from
//! it without replacement. The draw order is the split: the earliest draws
//! form the nested training sets, so frequent items tend to land in the
//! small training sets and rare ones in dev and test.
//!
//! # Randomness
//!
//! All randomness comes from one `ChaCha8Rng` created with
//! `SeedableRng::seed_from_u64(seed)` (`rand_chacha` 0.3 / `rand` 0.8), used
//! in this order:
//!
//! 1. one `gen::<f64>()` per draw, scaled by the remaining probability mass
//!    and located in a cumulative-sum tree over items in input order;
//! 2. `SliceRandom::shuffle` over the items left after the training pool;
//! 3. for completion splits, one `gen_bool(keep_probability)` per cell, dev
//!    paradigms first and then test, cells in order.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};
use crate::types::{Cell, Condition, Dataset, Paradigm, Triple};

fn is_punctuation(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    )
}

/// Splits on Unicode whitespace and strips leading and trailing punctuation
/// (general categories `P*`). Tokens that were all punctuation are dropped.
pub fn tokenize(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .map(|t| t.trim_matches(is_punctuation))
        .filter(|t| !t.is_empty())
}

/// Corpus token counts for a set of target strings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    counts: HashMap<String, u64>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Count for `form`; zero when it was not a target.
    pub fn get(&self, form: &str) -> u64 {
        self.counts.get(form).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, form: impl Into<String>, count: u64) {
        self.counts.insert(form.into(), count);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Adds the counts of another table (e.g. from another corpus shard).
    pub fn merge(&mut self, other: &CountTable) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += v;
        }
    }
}

/// Counts how often each target occurs in `corpus`.
///
/// A single-word target counts the tokens equal to it. A multiword target
/// (a form containing spaces) counts occurrences of its token sequence.
/// Matching is case-sensitive and ambiguous strings are not split between
/// analyses. The corpus is a single token stream, so one document per line
/// and running text are both fine.
pub fn count_tokens<R, I, S>(corpus: R, targets: I) -> Result<CountTable>
where
    R: BufRead,
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut table = CountTable::new();
    // last token -> (target, its token sequence)
    let mut by_last: HashMap<String, Vec<(String, Vec<String>)>> = HashMap::new();
    let mut window_len = 1;
    for target in targets {
        let target = target.as_ref();
        table.counts.entry(target.to_owned()).or_insert(0);
        let tokens: Vec<String> = tokenize(target).map(str::to_owned).collect();
        let Some(last) = tokens.last().cloned() else {
            continue;
        };
        window_len = window_len.max(tokens.len());
        let bucket = by_last.entry(last).or_default();
        if !bucket.iter().any(|(t, _)| t == target) {
            bucket.push((target.to_owned(), tokens));
        }
    }

    let mut window: VecDeque<String> = VecDeque::with_capacity(window_len);
    for line in corpus.lines() {
        let line = line?;
        for token in tokenize(&line) {
            if window.len() == window_len {
                window.pop_front();
            }
            window.push_back(token.to_owned());
            let Some(candidates) = by_last.get(token) else {
                continue;
            };
            for (target, seq) in candidates {
                if seq.len() <= window.len()
                    && window.iter().skip(window.len() - seq.len()).eq(seq.iter())
                {
                    *table.counts.get_mut(target).expect("registered target") += 1;
                }
            }
        }
    }
    Ok(table)
}

/// Add-one smoothed unigram probabilities: `(c_i + 1) / (sum(c) + N)`.
pub fn unigram_distribution(counts: &[u64]) -> Result<Vec<f64>> {
    if counts.is_empty() {
        return Err(Error::Sampling(
            "no items to build a distribution over".into(),
        ));
    }
    let total: u128 = counts.iter().map(|&c| u128::from(c) + 1).sum();
    let total = total as f64;
    Ok(counts.iter().map(|&c| (c as f64 + 1.0) / total).collect())
}

/// Corpus count of each triple's form.
pub fn triple_counts(triples: &[Triple], table: &CountTable) -> Vec<u64> {
    triples.iter().map(|t| table.get(t.form())).collect()
}

/// Tokens matching any form of the paradigm; a string shared by several
/// cells is counted once.
pub fn paradigm_counts(paradigms: &[Paradigm], table: &CountTable) -> Vec<u64> {
    paradigms
        .iter()
        .map(|p| {
            let forms: HashSet<&str> = p.cells().iter().filter_map(|c| c.form.as_deref()).collect();
            forms.into_iter().map(|f| table.get(f)).sum()
        })
        .collect()
}

/// Every string a count table should be built for.
pub fn paradigm_forms(paradigms: &[Paradigm]) -> impl Iterator<Item = &str> {
    paradigms
        .iter()
        .flat_map(|p| p.cells().iter().filter_map(|c| c.form.as_deref()))
}

/// Cumulative-sum (Fenwick) tree over item weights supporting removal.
struct WeightTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightTree {
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                let v = tree[i + 1];
                tree[parent] += v;
            }
        }
        WeightTree {
            tree,
            weights: weights.to_vec(),
        }
    }

    fn total(&self) -> f64 {
        let mut i = self.weights.len();
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    fn remove(&mut self, index: usize) {
        let w = std::mem::take(&mut self.weights[index]);
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= w;
            i += i & i.wrapping_neg();
        }
    }

    /// First item whose cumulative weight exceeds `target`.
    fn find(&self, target: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut rem = target;
        let mut step = n.checked_next_power_of_two().unwrap_or(n);
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        if pos < n && self.weights[pos] > 0.0 {
            return pos;
        }
        // rounding pushed us onto a removed or zero item; take the nearest live one
        (0..pos.min(n))
            .rev()
            .chain(pos.min(n)..n)
            .find(|&i| self.weights[i] > 0.0)
            .expect("tree has positive mass")
    }
}

fn check_probabilities(probabilities: &[f64]) -> Result<()> {
    if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::Sampling(format!("invalid probability {p}")));
    }
    Ok(())
}

/// Draws `n` distinct indices, each proportional to the remaining mass.
fn draw_order<R: Rng>(probabilities: &[f64], n: usize, rng: &mut R) -> Result<Vec<usize>> {
    check_probabilities(probabilities)?;
    if n > probabilities.len() {
        return Err(Error::Sampling(format!(
            "cannot draw {n} items from {}",
            probabilities.len()
        )));
    }
    let support = probabilities.iter().filter(|&&p| p > 0.0).count();
    if n > support {
        return Err(Error::Sampling(format!(
            "cannot draw {n} items: only {support} have positive probability"
        )));
    }
    let mut tree = WeightTree::new(probabilities);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let index = tree.find(u * tree.total());
        tree.remove(index);
        order.push(index);
    }
    Ok(order)
}

/// Weighted sampling without replacement; items come back in draw order.
pub fn sample_without_replacement<T: Clone>(
    items: &[T],
    probabilities: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<T>> {
    if items.len() != probabilities.len() {
        return Err(Error::Sampling(format!(
            "{} items but {} probabilities",
            items.len(),
            probabilities.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw_order(probabilities, n, &mut rng)?
        .into_iter()
        .map(|i| items[i].clone())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSizes {
    pub low: usize,
    pub medium: usize,
    pub high: usize,
    pub dev: usize,
    pub test: usize,
}

impl SplitSizes {
    pub const TASK1: SplitSizes = SplitSizes {
        low: 100,
        medium: 1000,
        high: 10000,
        dev: 1000,
        test: 1000,
    };

    pub const TASK2: SplitSizes = SplitSizes {
        low: 10,
        medium: 50,
        high: 200,
        dev: 50,
        test: 50,
    };

    fn validate(&self) -> Result<()> {
        if self.low <= self.medium && self.medium <= self.high {
            Ok(())
        } else {
            Err(Error::Sampling(format!(
                "training sizes must be nested (low {} <= medium {} <= high {})",
                self.low, self.medium, self.high
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    pub seed: u64,
    pub sizes: SplitSizes,
    pub keep_probability: f64,
}

impl SplitSpec {
    pub const DEFAULT_KEEP_PROBABILITY: f64 = 0.2;

    pub fn task1(seed: u64) -> Self {
        SplitSpec {
            seed,
            sizes: SplitSizes::TASK1,
            keep_probability: Self::DEFAULT_KEEP_PROBABILITY,
        }
    }

    pub fn task2(seed: u64) -> Self {
        SplitSpec {
            seed,
            sizes: SplitSizes::TASK2,
            keep_probability: Self::DEFAULT_KEEP_PROBABILITY,
        }
    }
}

/// How many items each split gets for a collection of a given size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Plan {
    drawn: usize,
    pool: usize,
    low: usize,
    medium: Option<usize>,
    high: Option<usize>,
}

fn plan(available: usize, sizes: &SplitSizes) -> Result<Plan> {
    sizes.validate()?;
    let eval = sizes.dev + sizes.test;
    if available < sizes.low + eval {
        return Err(Error::Sampling(format!(
            "{available} items available, at least {} (low + dev + test) needed",
            sizes.low + eval
        )));
    }
    if available >= sizes.high + eval {
        return Ok(Plan {
            drawn: sizes.high + eval,
            pool: sizes.high,
            low: sizes.low,
            medium: Some(sizes.medium),
            high: Some(sizes.high),
        });
    }
    // Too small for the full high split: everything not needed for dev and
    // test becomes training data, and the high split (when it would still
    // be larger than medium) is the whole remainder.
    let pool = available - eval;
    Ok(Plan {
        drawn: available,
        pool,
        low: sizes.low,
        medium: (sizes.medium <= pool).then_some(sizes.medium),
        high: (pool > sizes.medium).then_some(pool),
    })
}

struct Drawn<T> {
    plan: Plan,
    pool: Vec<T>,
    dev: Vec<T>,
    test: Vec<T>,
}

fn draw_splits<T: Clone>(
    items: &[T],
    counts: &[u64],
    sizes: &SplitSizes,
    rng: &mut ChaCha8Rng,
) -> Result<Drawn<T>> {
    let plan = plan(items.len(), sizes)?;
    let probabilities = unigram_distribution(counts)?;
    let order = draw_order(&probabilities, plan.drawn, rng)?;
    let pool: Vec<T> = order[..plan.pool]
        .iter()
        .map(|&i| items[i].clone())
        .collect();
    let mut rest: Vec<T> = order[plan.pool..]
        .iter()
        .map(|&i| items[i].clone())
        .collect();
    rest.shuffle(rng);
    let test = rest.split_off(sizes.dev);
    Ok(Drawn {
        plan,
        pool,
        dev: rest,
        test,
    })
}

/// Nested training sets plus dev and test. `medium` and `high` are absent
/// when the collection is too small for them.
#[derive(Clone, Debug, PartialEq)]
pub struct Task1Splits {
    pub low: Dataset,
    pub medium: Option<Dataset>,
    pub high: Option<Dataset>,
    pub dev: Dataset,
    pub test: Dataset,
}

impl Task1Splits {
    pub fn datasets(&self) -> Vec<&Dataset> {
        let mut out = vec![&self.low];
        out.extend(self.medium.as_ref());
        out.extend(self.high.as_ref());
        out.push(&self.dev);
        out.push(&self.test);
        out
    }
}

pub fn make_task1_splits(
    triples: &[Triple],
    counts: &CountTable,
    spec: &SplitSpec,
) -> Result<Task1Splits> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = draw_splits(
        triples,
        &triple_counts(triples, counts),
        &spec.sizes,
        &mut rng,
    )?;
    let take = |n: usize, c: Condition| Dataset::triples(c, d.pool[..n].to_vec());
    Ok(Task1Splits {
        low: take(d.plan.low, Condition::Low),
        medium: d.plan.medium.map(|n| take(n, Condition::Medium)),
        high: d.plan.high.map(|n| take(n, Condition::High)),
        dev: Dataset::triples(Condition::Dev, d.dev),
        test: Dataset::triples(Condition::Test, d.test),
    })
}

/// Completion splits. `dev` and `test` hold the masked system input;
/// `dev_gold` and `test_gold` the same paradigms fully filled.
#[derive(Clone, Debug, PartialEq)]
pub struct Task2Splits {
    pub low: Dataset,
    pub medium: Option<Dataset>,
    pub high: Option<Dataset>,
    pub dev: Dataset,
    pub dev_gold: Dataset,
    pub test: Dataset,
    pub test_gold: Dataset,
}

fn mask<R: Rng>(paradigms: &[Paradigm], keep: f64, rng: &mut R) -> Vec<Paradigm> {
    paradigms
        .iter()
        .map(|p| {
            let cells = p
                .cells()
                .iter()
                .map(|c| {
                    if rng.gen_bool(keep) {
                        c.clone()
                    } else {
                        Cell::empty(c.bundle.clone())
                    }
                })
                .collect();
            p.with_cells(cells)
        })
        .collect()
}

pub fn make_task2_splits(
    paradigms: &[Paradigm],
    counts: &CountTable,
    spec: &SplitSpec,
) -> Result<Task2Splits> {
    if !(0.0..=1.0).contains(&spec.keep_probability) {
        return Err(Error::Sampling(format!(
            "keep probability {} outside [0, 1]",
            spec.keep_probability
        )));
    }
    if let Some(p) = paradigms.iter().find(|p| !p.is_complete()) {
        return Err(Error::Sampling(format!(
            "paradigm of {:?} has unfilled cells; sampling needs complete paradigms",
            p.lemma()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = draw_splits(
        paradigms,
        &paradigm_counts(paradigms, counts),
        &spec.sizes,
        &mut rng,
    )?;
    let dev_input = mask(&d.dev, spec.keep_probability, &mut rng);
    let test_input = mask(&d.test, spec.keep_probability, &mut rng);
    let take = |n: usize, c: Condition| Dataset::paradigms(c, d.pool[..n].to_vec());
    Ok(Task2Splits {
        low: take(d.plan.low, Condition::Low),
        medium: d.plan.medium.map(|n| take(n, Condition::Medium)),
        high: d.plan.high.map(|n| take(n, Condition::High)),
        dev: Dataset::paradigms(Condition::Dev, dev_input),
        dev_gold: Dataset::paradigms(Condition::Dev, d.dev),
        test: Dataset::paradigms(Condition::Test, test_input),
        test_gold: Dataset::paradigms(Condition::Test, d.test),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FeatureBundle;

    fn count(corpus: &str, targets: &[&str]) -> CountTable {
        count_tokens(corpus.as_bytes(), targets.iter().copied()).unwrap()
    }

    #[test]
    fn counts_single_tokens() {
        let t = count("the dog walked . the dog", &["dog", "walked", "cat"]);
        assert_eq!(t.get("dog"), 2);
        assert_eq!(t.get("walked"), 1);
        assert_eq!(t.get("cat"), 0);
        assert_eq!(t.get("never-registered"), 0);
    }

    #[test]
    fn punctuation_is_stripped_at_edges_only() {
        let t = count(
            "«dog», (walked) don't dog-like\n",
            &["dog", "walked", "don't", "dog-like"],
        );
        assert_eq!(t.get("dog"), 1);
        assert_eq!(t.get("walked"), 1);
        assert_eq!(t.get("don't"), 1);
        assert_eq!(t.get("dog-like"), 1);
        assert_eq!(tokenize(" ... ").count(), 0);
    }

    #[test]
    fn counting_is_case_sensitive() {
        let t = count("Dog dog DOG", &["dog"]);
        assert_eq!(t.get("dog"), 1);
    }

    #[test]
    fn multiword_targets() {
        let corpus = "no a b no a";
        let t = count(corpus, &["no a", "a"]);
        // brute force over all windows of two tokens
        let tokens: Vec<&str> = corpus.split(' ').collect();
        let brute = tokens.windows(2).filter(|w| w == &["no", "a"]).count() as u64;
        assert_eq!(brute, 2);
        assert_eq!(t.get("no a"), brute);
        assert_eq!(t.get("a"), 2);
        // sequences may continue across line breaks
        assert_eq!(count("x no\na y", &["no a"]).get("no a"), 1);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = count("dog", &["dog"]);
        a.merge(&count("dog dog", &["dog"]));
        assert_eq!(a.get("dog"), 3);
    }

    #[test]
    fn smoothing() {
        let p = unigram_distribution(&[0, 0, 0, 0]).unwrap();
        assert!(p.iter().all(|&x| x == 0.25));
        let p = unigram_distribution(&[4, 0]).unwrap();
        assert!((p[0] - 5.0 / 6.0).abs() < 1e-15);
        assert!((p[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!(unigram_distribution(&[]).is_err());
    }

    #[test]
    fn paradigm_counts_do_not_double_count_syncretism() {
        let b = |s: &str| FeatureBundle::parse(s).unwrap();
        let p = Paradigm::new(
            "walk",
            vec![
                Cell::filled(b("V;PST"), "walked"),
                Cell::filled(b("V;V.PTCP;PST"), "walked"),
                Cell::filled(b("V;NFIN"), "walk"),
            ],
        )
        .unwrap();
        let t = count("walked walk walked", &["walked", "walk"]);
        assert_eq!(paradigm_counts(&[p], &t), vec![3]);
    }

    #[test]
    fn sampling_edge_cases() {
        let items = ["a", "b", "c", "d"];
        let p = [0.1, 0.2, 0.3, 0.4];
        let mut all = sample_without_replacement(&items, &p, 4, 3).unwrap();
        all.sort();
        assert_eq!(all, items);
        assert!(sample_without_replacement(&items, &p, 5, 3).is_err());
        assert_eq!(
            sample_without_replacement(&items, &[0.0, 1.0, 0.0, 0.0], 1, 9).unwrap(),
            vec!["b"]
        );
        assert!(sample_without_replacement(&items, &[0.0, 1.0, 0.0, 0.0], 2, 9).is_err());
        assert!(sample_without_replacement(&items, &[0.5, f64::NAN, 0.0, 0.0], 1, 9).is_err());
        assert_eq!(
            sample_without_replacement(&items, &p, 4, 11).unwrap(),
            sample_without_replacement(&items, &p, 4, 11).unwrap()
        );
    }

    #[test]
    fn weight_tree_matches_linear_scan() {
        let weights = [0.5, 0.0, 1.5, 2.0, 0.25, 0.75, 0.0, 3.0];
        let mut tree = WeightTree::new(&weights);
        assert!((tree.total() - 8.0).abs() < 1e-12);
        for target in [0.0, 0.49, 0.5, 1.99, 2.0, 4.1, 7.99] {
            let mut acc = 0.0;
            let expect = weights
                .iter()
                .position(|&w| {
                    acc += w;
                    acc > target
                })
                .unwrap();
            assert_eq!(tree.find(target), expect, "target {target}");
        }
        tree.remove(2);
        assert!((tree.total() - 6.5).abs() < 1e-12);
        assert_eq!(tree.find(0.6), 3);
    }

    #[test]
    fn plan_sizes() {
        let s = SplitSizes::TASK1;
        let full = plan(12_000, &s).unwrap();
        assert_eq!(
            (full.drawn, full.medium, full.high),
            (12_000, Some(1000), Some(10_000))
        );
        let small = plan(2_100, &s).unwrap();
        assert_eq!((small.low, small.medium, small.high), (100, None, None));
        let bengali = plan(4_443, &s).unwrap();
        assert_eq!(bengali.medium, Some(1000));
        assert_eq!(bengali.high, Some(2_443));
        let exact_medium = plan(3_000, &s).unwrap();
        assert_eq!((exact_medium.medium, exact_medium.high), (Some(1000), None));
        assert!(plan(2_099, &s).is_err());
        let bad = SplitSizes {
            low: 5,
            medium: 2,
            ..s
        };
        assert!(plan(100_000, &bad).is_err());
    }
}
