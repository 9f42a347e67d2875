//! Prefix- and suffix-changing rewrite rules and the per-bundle rule store.
//!
//! Anchors are positional: a [`SuffixRule`] always applies at the end of a
//! word and a [`PrefixRule`] at the start, so a literal `$` in the data is an
//! ordinary character. The `$` only appears in the `Display` rendering.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::align::ZoneSplit;
use crate::error::{Error, Result};
use crate::types::FeatureBundle;

/// Rewrite `pattern$` to `replacement$`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuffixRule {
    pub pattern: String,
    pub replacement: String,
}

impl SuffixRule {
    pub fn new(pattern: impl Into<String>, replacement: impl Into<String>) -> Self {
        SuffixRule {
            pattern: pattern.into(),
            replacement: replacement.into(),
        }
    }

    pub fn matches(&self, word: &str) -> bool {
        word.ends_with(&self.pattern)
    }

    pub fn apply(&self, word: &str) -> Option<String> {
        let stem = word.strip_suffix(&self.pattern)?;
        Some(format!("{stem}{}", self.replacement))
    }
}

impl fmt::Display for SuffixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}$ → {}$", self.pattern, self.replacement)
    }
}

/// Rewrite `$pattern` to `$replacement`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixRule {
    pub pattern: String,
    pub replacement: String,
}

impl PrefixRule {
    pub fn new(pattern: impl Into<String>, replacement: impl Into<String>) -> Self {
        PrefixRule {
            pattern: pattern.into(),
            replacement: replacement.into(),
        }
    }

    pub fn matches(&self, word: &str) -> bool {
        word.starts_with(&self.pattern)
    }

    pub fn apply(&self, word: &str) -> Option<String> {
        let rest = word.strip_prefix(&self.pattern)?;
        Some(format!("{}{rest}", self.replacement))
    }
}

impl fmt::Display for PrefixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${} → ${}", self.pattern, self.replacement)
    }
}

/// Rules read off one training example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedRules {
    pub prefix: PrefixRule,
    pub suffixes: Vec<SuffixRule>,
}

/// One prefix rule from the prefix zone, and one suffix rule per core column
/// `i` covering the columns `i..`.
///
/// The last rule may have an empty pattern when the core ends in insertions;
/// it appends those symbols to any word.
pub fn extract_rules(zones: &ZoneSplit) -> ExtractedRules {
    let prefix = PrefixRule::new(zones.prefix_input.clone(), zones.prefix_output.clone());
    let mut suffixes = Vec::with_capacity(zones.core.len().max(1));
    for start in 0..zones.core.len() {
        let tail = &zones.core[start..];
        suffixes.push(SuffixRule::new(
            tail.iter().filter_map(|c| c.input).collect::<String>(),
            tail.iter().filter_map(|c| c.output).collect::<String>(),
        ));
    }
    if suffixes.is_empty() {
        // whole-word rule for an empty core
        suffixes.push(SuffixRule::new(zones.core_input(), zones.core_output()));
    }
    ExtractedRules { prefix, suffixes }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BundleRules {
    // pattern -> replacement -> count
    suffix: BTreeMap<String, BTreeMap<String, u64>>,
    prefix: BTreeMap<PrefixRule, u64>,
}

/// Frequency-counted rules keyed by exact feature bundle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleStore {
    by_bundle: BTreeMap<String, BundleRules>,
}

impl RuleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_example(&mut self, bundle: &FeatureBundle, rules: &ExtractedRules) {
        let entry = self.by_bundle.entry(bundle.key().to_owned()).or_default();
        for rule in &rules.suffixes {
            *entry
                .suffix
                .entry(rule.pattern.clone())
                .or_default()
                .entry(rule.replacement.clone())
                .or_default() += 1;
        }
        *entry.prefix.entry(rules.prefix.clone()).or_default() += 1;
    }

    pub fn contains_bundle(&self, bundle: &FeatureBundle) -> bool {
        self.by_bundle.contains_key(bundle.key())
    }

    pub fn bundle_count(&self) -> usize {
        self.by_bundle.len()
    }

    pub fn suffix_count(&self, bundle: &FeatureBundle, rule: &SuffixRule) -> u64 {
        self.by_bundle
            .get(bundle.key())
            .and_then(|b| b.suffix.get(&rule.pattern))
            .and_then(|r| r.get(&rule.replacement))
            .copied()
            .unwrap_or(0)
    }

    pub fn prefix_count(&self, bundle: &FeatureBundle, rule: &PrefixRule) -> u64 {
        self.by_bundle
            .get(bundle.key())
            .and_then(|b| b.prefix.get(rule))
            .copied()
            .unwrap_or(0)
    }

    /// All suffix rules stored for `bundle` with their counts.
    pub fn suffix_rules(&self, bundle: &FeatureBundle) -> Vec<(SuffixRule, u64)> {
        let Some(rules) = self.by_bundle.get(bundle.key()) else {
            return Vec::new();
        };
        rules
            .suffix
            .iter()
            .flat_map(|(pat, reps)| {
                reps.iter()
                    .map(move |(rep, &n)| (SuffixRule::new(pat.clone(), rep.clone()), n))
            })
            .collect()
    }

    pub fn prefix_rules(&self, bundle: &FeatureBundle) -> Vec<(PrefixRule, u64)> {
        self.by_bundle
            .get(bundle.key())
            .map(|b| b.prefix.iter().map(|(r, &n)| (r.clone(), n)).collect())
            .unwrap_or_default()
    }

    /// Longest stored pattern that is a suffix of `word`; ties go to the
    /// most frequent rule, then to the lexicographically smallest.
    pub fn best_suffix_rule(&self, bundle: &FeatureBundle, word: &str) -> Option<SuffixRule> {
        let rules = self.by_bundle.get(bundle.key())?;
        // suffix start offsets from longest (whole word) to empty
        let starts = word
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(word.len()));
        for start in starts {
            let pattern = &word[start..];
            if let Some(reps) = rules.suffix.get(pattern) {
                let (rep, _) = most_frequent(reps.iter())?;
                return Some(SuffixRule::new(pattern, rep.clone()));
            }
        }
        None
    }

    /// Most frequent prefix rule for `bundle`, whatever the word.
    pub fn best_prefix_rule(&self, bundle: &FeatureBundle) -> Option<PrefixRule> {
        let rules = self.by_bundle.get(bundle.key())?;
        most_frequent(rules.prefix.iter()).map(|(r, _)| r.clone())
    }

    /// Writes one line per rule, `bundle<TAB>S|P<TAB>pattern<TAB>replacement<TAB>count`,
    /// sorted by bundle, kind, pattern and replacement.
    pub fn write_dump(&self, out: &mut String) {
        for (key, rules) in &self.by_bundle {
            for (rule, n) in &rules.prefix {
                let _ = writeln!(out, "{key}\tP\t{}\t{}\t{n}", rule.pattern, rule.replacement);
            }
            for (pat, reps) in &rules.suffix {
                for (rep, n) in reps {
                    let _ = writeln!(out, "{key}\tS\t{pat}\t{rep}\t{n}");
                }
            }
        }
    }

    /// Reads one dump line back into the store.
    pub(crate) fn load_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        let bad = |reason: &str| Error::Parse {
            line: line_no,
            reason: reason.to_owned(),
            content: line.to_owned(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [key, kind, pattern, replacement, count] = fields.as_slice() else {
            return Err(bad("expected 5 tab-separated fields"));
        };
        let bundle = FeatureBundle::parse(key).map_err(|e| bad(&e.to_string()))?;
        let count: u64 = count.parse().map_err(|_| bad("count is not an integer"))?;
        if count == 0 {
            return Err(bad("count must be positive"));
        }
        let entry = self.by_bundle.entry(bundle.key().to_owned()).or_default();
        match *kind {
            "S" => {
                *entry
                    .suffix
                    .entry((*pattern).to_owned())
                    .or_default()
                    .entry((*replacement).to_owned())
                    .or_default() += count
            }
            "P" => {
                *entry
                    .prefix
                    .entry(PrefixRule::new(*pattern, *replacement))
                    .or_default() += count
            }
            _ => return Err(bad("rule kind must be S or P")),
        }
        Ok(())
    }
}

/// Highest count wins; the iterator is in ascending key order so the first
/// maximum is also the lexicographically smallest.
fn most_frequent<'a, K: 'a>(items: impl Iterator<Item = (&'a K, &'a u64)>) -> Option<(&'a K, u64)> {
    let mut best: Option<(&K, u64)> = None;
    for (k, &n) in items {
        if best.is_none_or(|(_, b)| n > b) {
            best = Some((k, n));
        }
    }
    best
}
