//! Domain records: feature bundles, triples, paradigms and datasets.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const TAG_SEPARATOR: char = ';';

fn has_control_separator(s: &str) -> bool {
    s.contains(['\t', '\n', '\r'])
}

/// An ordered sequence of morphosyntactic tags, e.g. `V;IND;PST;1;PL`.
///
/// Tags are opaque strings. Order is significant: `V;PST` and `PST;V` are
/// different bundles. The bundle is stored as its canonical `;`-joined key,
/// which is what the rule store and the oracles match on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureBundle {
    key: String,
}

impl FeatureBundle {
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut key = String::new();
        for (i, tag) in tags.into_iter().enumerate() {
            let tag = tag.as_ref();
            if tag.is_empty() {
                return Err(Error::invalid("feature bundle", "empty tag"));
            }
            if tag.contains(TAG_SEPARATOR) || has_control_separator(tag) {
                return Err(Error::invalid(
                    "feature bundle",
                    format!("tag {tag:?} contains a separator character"),
                ));
            }
            if i > 0 {
                key.push(TAG_SEPARATOR);
            }
            key.push_str(tag);
        }
        if key.is_empty() {
            return Err(Error::invalid("feature bundle", "no tags"));
        }
        Ok(FeatureBundle { key })
    }

    /// Parses a canonical key such as `V;V.PTCP;PST`.
    pub fn parse(key: &str) -> Result<Self> {
        Self::new(key.split(TAG_SEPARATOR))
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.key.split(TAG_SEPARATOR)
    }
}

impl FromStr for FeatureBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

fn check_word(what: &'static str, s: &str) -> Result<()> {
    if s.is_empty() {
        return Err(Error::invalid(what, "empty string"));
    }
    if has_control_separator(s) {
        return Err(Error::invalid(
            what,
            format!("{s:?} contains a tab or newline"),
        ));
    }
    Ok(())
}

/// One (lemma, feature bundle, inflected form) record.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    lemma: String,
    bundle: FeatureBundle,
    form: String,
}

impl Triple {
    pub fn new(
        lemma: impl Into<String>,
        bundle: FeatureBundle,
        form: impl Into<String>,
    ) -> Result<Self> {
        let lemma = lemma.into();
        let form = form.into();
        check_word("lemma", &lemma)?;
        check_word("form", &form)?;
        Ok(Triple {
            lemma,
            bundle,
            form,
        })
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn bundle(&self) -> &FeatureBundle {
        &self.bundle
    }

    pub fn form(&self) -> &str {
        &self.form
    }
}

/// A single slot of a paradigm. `form` is `None` for an unfilled cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub bundle: FeatureBundle,
    pub form: Option<String>,
}

impl Cell {
    pub fn filled(bundle: FeatureBundle, form: impl Into<String>) -> Self {
        Cell {
            bundle,
            form: Some(form.into()),
        }
    }

    pub fn empty(bundle: FeatureBundle) -> Self {
        Cell { bundle, form: None }
    }

    pub fn is_filled(&self) -> bool {
        self.form.is_some()
    }
}

/// A lemma together with its (possibly partially observed) table of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Paradigm {
    lemma: String,
    cells: Vec<Cell>,
}

impl Paradigm {
    pub fn new(lemma: impl Into<String>, cells: Vec<Cell>) -> Result<Self> {
        let lemma = lemma.into();
        check_word("lemma", &lemma)?;
        if cells.is_empty() {
            return Err(Error::invalid(
                "paradigm",
                format!("{lemma:?} has no cells"),
            ));
        }
        let mut seen = HashSet::with_capacity(cells.len());
        for cell in &cells {
            if !seen.insert(cell.bundle.key()) {
                return Err(Error::invalid(
                    "paradigm",
                    format!("{lemma:?} has duplicate cell {}", cell.bundle),
                ));
            }
            if let Some(form) = &cell.form {
                check_word("form", form)?;
            }
        }
        Ok(Paradigm { lemma, cells })
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Cell::is_filled)
    }

    pub fn cell(&self, bundle: &FeatureBundle) -> Option<&Cell> {
        self.cells.iter().find(|c| &c.bundle == bundle)
    }

    /// Filled cells as triples, in cell order.
    pub fn filled_triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.cells.iter().filter_map(move |c| {
            c.form.as_ref().map(|form| Triple {
                lemma: self.lemma.clone(),
                bundle: c.bundle.clone(),
                form: form.clone(),
            })
        })
    }

    /// Same lemma, replacement cells. Caller keeps bundles unchanged.
    pub(crate) fn with_cells(&self, cells: Vec<Cell>) -> Paradigm {
        debug_assert_eq!(cells.len(), self.cells.len());
        Paradigm {
            lemma: self.lemma.clone(),
            cells,
        }
    }
}

/// Which data condition a dataset was built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Low,
    Medium,
    High,
    Dev,
    Test,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Low => "low",
            Condition::Medium => "medium",
            Condition::High => "high",
            Condition::Dev => "dev",
            Condition::Test => "test",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Records {
    Triples(Vec<Triple>),
    Paradigms(Vec<Paradigm>),
}

/// A homogeneous collection of triples (inflection) or paradigms (completion).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub condition: Condition,
    pub records: Records,
}

impl Dataset {
    pub fn triples(condition: Condition, triples: Vec<Triple>) -> Self {
        Dataset {
            condition,
            records: Records::Triples(triples),
        }
    }

    pub fn paradigms(condition: Condition, paradigms: Vec<Paradigm>) -> Self {
        Dataset {
            condition,
            records: Records::Paradigms(paradigms),
        }
    }

    pub fn len(&self) -> usize {
        match &self.records {
            Records::Triples(t) => t.len(),
            Records::Paradigms(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_triples(&self) -> Option<&[Triple]> {
        match &self.records {
            Records::Triples(t) => Some(t),
            Records::Paradigms(_) => None,
        }
    }

    pub fn as_paradigms(&self) -> Option<&[Paradigm]> {
        match &self.records {
            Records::Paradigms(p) => Some(p),
            Records::Triples(_) => None,
        }
    }
}
