//! The baseline inflection model: orientation detection, training and
//! generation.

use std::fmt;
use std::str::FromStr;

use crate::align::{align, split_zones, ZoneSplit};
use crate::error::{Error, Result};
use crate::rules::{extract_rules, RuleStore};
use crate::types::{FeatureBundle, Triple};

/// Whether a language mostly changes the start or the end of words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    #[default]
    Suffixing,
    /// Strings are reversed before training and generation.
    Prefixing,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Suffixing => "suffixing",
            Orientation::Prefixing => "prefixing",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "suffixing" => Ok(Orientation::Suffixing),
            "prefixing" => Ok(Orientation::Prefixing),
            other => Err(Error::invalid("orientation", other.to_owned())),
        }
    }
}

fn reversed(s: &str) -> String {
    s.chars().rev().collect()
}

fn zones(lemma: &str, form: &str) -> Result<ZoneSplit> {
    Ok(split_zones(&align(lemma, form)?))
}

/// Counts prefix and suffix changes over the unreversed training pairs.
/// Prefixing wins only with strictly more prefix changes.
pub fn detect_orientation(triples: &[Triple]) -> Result<Orientation> {
    if triples.is_empty() {
        return Err(Error::NoTriples("detect orientation"));
    }
    let (mut prefix, mut suffix) = (0usize, 0usize);
    for t in triples {
        let changes = zones(t.lemma(), t.form())?.changes();
        prefix += usize::from(changes.prefix);
        suffix += usize::from(changes.suffix);
    }
    Ok(if prefix > suffix {
        Orientation::Prefixing
    } else {
        Orientation::Suffixing
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    store: RuleStore,
    orientation: Orientation,
}

const ORIENTATION_FIELD: &str = "orientation";

impl Model {
    pub fn store(&self) -> &RuleStore {
        &self.store
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Inflects `lemma` for `bundle`. Unknown bundles return the lemma.
    pub fn inflect(&self, lemma: &str, bundle: &FeatureBundle) -> Result<String> {
        if lemma.is_empty() {
            return Err(Error::invalid("lemma", "empty string"));
        }
        if !self.store.contains_bundle(bundle) {
            return Ok(lemma.to_owned());
        }
        let prefixing = self.orientation == Orientation::Prefixing;
        let mut word = if prefixing {
            reversed(lemma)
        } else {
            lemma.to_owned()
        };
        if let Some(rule) = self.store.best_suffix_rule(bundle, &word) {
            word = rule.apply(&word).unwrap_or(word);
        }
        if let Some(rule) = self.store.best_prefix_rule(bundle) {
            if let Some(next) = rule.apply(&word) {
                word = next;
            }
        }
        Ok(if prefixing { reversed(&word) } else { word })
    }

    /// Text form: an `orientation<TAB>...` line followed by the sorted rule
    /// dump. Rules of a prefixing model are stored over reversed strings.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{ORIENTATION_FIELD}\t{}\n", self.orientation);
        self.store.write_dump(&mut out);
        out
    }

    pub fn from_dump(text: &str) -> Result<Model> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.is_empty());
        let orientation = match lines.next() {
            Some((_, line)) => match line.split_once('\t') {
                Some((ORIENTATION_FIELD, value)) => value.parse()?,
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        reason: "model must start with an orientation line".into(),
                        content: line.to_owned(),
                    })
                }
            },
            None => return Err(Error::invalid("model", "empty model file")),
        };
        let mut store = RuleStore::new();
        for (i, line) in lines {
            store.load_line(i + 1, line)?;
        }
        Ok(Model { store, orientation })
    }
}

/// Trains with the orientation found by [`detect_orientation`].
pub fn train(triples: &[Triple]) -> Result<Model> {
    let orientation = detect_orientation(triples)?;
    train_with_orientation(triples, orientation)
}

pub fn train_with_orientation(triples: &[Triple], orientation: Orientation) -> Result<Model> {
    if triples.is_empty() {
        return Err(Error::NoTriples("train"));
    }
    let mut store = RuleStore::new();
    for t in triples {
        let z = match orientation {
            Orientation::Suffixing => zones(t.lemma(), t.form())?,
            Orientation::Prefixing => zones(&reversed(t.lemma()), &reversed(t.form()))?,
        };
        store.add_example(t.bundle(), &extract_rules(&z));
    }
    Ok(Model { store, orientation })
}
