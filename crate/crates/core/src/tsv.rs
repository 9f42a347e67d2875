//! Tab-separated triple and paradigm files.
//!
//! One record per line, three tab-separated fields. The released shared-task
//! files use `lemma<TAB>form<TAB>tags`; [`ColumnOrder::LemmaTagsForm`] reads
//! the `lemma<TAB>tags<TAB>form` presentation order instead. There is no
//! quoting or escaping and no comment syntax: tabs and newlines cannot occur
//! inside a field. Empty lines are skipped (and separate paradigms).

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{Cell, FeatureBundle, Paradigm, Triple};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ColumnOrder {
    /// `lemma, form, tags`
    #[default]
    LemmaFormTags,
    /// `lemma, tags, form`
    LemmaTagsForm,
}

impl ColumnOrder {
    fn split(self, fields: [&str; 3]) -> (&str, &str, &str) {
        let [lemma, a, b] = fields;
        match self {
            ColumnOrder::LemmaFormTags => (lemma, a, b),
            ColumnOrder::LemmaTagsForm => (lemma, b, a),
        }
    }

    fn write_line(self, out: &mut String, lemma: &str, form: &str, tags: &str) {
        let _ = match self {
            ColumnOrder::LemmaFormTags => writeln!(out, "{lemma}\t{form}\t{tags}"),
            ColumnOrder::LemmaTagsForm => writeln!(out, "{lemma}\t{tags}\t{form}"),
        };
    }
}

impl FromStr for ColumnOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma-form-tags" | "lft" => Ok(ColumnOrder::LemmaFormTags),
            "lemma-tags-form" | "ltf" => Ok(ColumnOrder::LemmaTagsForm),
            other => Err(Error::invalid(
                "column order",
                format!("{other:?} (expected lemma-form-tags or lemma-tags-form)"),
            )),
        }
    }
}

/// Non-empty lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Option<&str>)> {
    text.split('\n').enumerate().map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        (i + 1, if line.is_empty() { None } else { Some(line) })
    })
}

fn parse_error(line: usize, reason: impl Into<String>, content: &str) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
        content: content.to_owned(),
    }
}

fn three_fields(line_no: usize, line: &str) -> Result<[&str; 3]> {
    let fields: Vec<&str> = line.split('\t').collect();
    match fields.as_slice() {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(parse_error(
            line_no,
            format!("expected 3 tab-separated fields, found {}", fields.len()),
            line,
        )),
    }
}

fn bundle_at(line_no: usize, tags: &str, line: &str) -> Result<FeatureBundle> {
    FeatureBundle::parse(tags).map_err(|e| parse_error(line_no, e.to_string(), line))
}

pub fn parse_triples(text: &str, order: ColumnOrder) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for (line_no, line) in records(text) {
        let Some(line) = line else { continue };
        let (lemma, form, tags) = order.split(three_fields(line_no, line)?);
        if lemma.is_empty() || form.is_empty() || tags.is_empty() {
            return Err(parse_error(line_no, "empty field", line));
        }
        let bundle = bundle_at(line_no, tags, line)?;
        let triple = Triple::new(lemma, bundle, form)
            .map_err(|e| parse_error(line_no, e.to_string(), line))?;
        out.push(triple);
    }
    Ok(out)
}

pub fn serialize_triples(triples: &[Triple], order: ColumnOrder) -> String {
    let mut out = String::new();
    for t in triples {
        order.write_line(&mut out, t.lemma(), t.form(), t.bundle().key());
    }
    out
}

/// Groups lines into paradigms. A new paradigm starts on a change of lemma
/// or after an empty line; an empty form field marks an unfilled cell.
pub fn parse_paradigms(text: &str, order: ColumnOrder) -> Result<Vec<Paradigm>> {
    struct Pending {
        lemma: String,
        cells: Vec<Cell>,
        keys: HashSet<String>,
    }

    fn finish(pending: Option<Pending>, out: &mut Vec<Paradigm>) -> Result<()> {
        if let Some(p) = pending {
            out.push(Paradigm::new(p.lemma, p.cells)?);
        }
        Ok(())
    }

    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;
    for (line_no, line) in records(text) {
        let Some(line) = line else {
            finish(pending.take(), &mut out)?;
            continue;
        };
        let (lemma, form, tags) = order.split(three_fields(line_no, line)?);
        if lemma.is_empty() || tags.is_empty() {
            return Err(parse_error(line_no, "empty lemma or tag field", line));
        }
        let bundle = bundle_at(line_no, tags, line)?;
        if pending.as_ref().is_some_and(|p| p.lemma != lemma) {
            finish(pending.take(), &mut out)?;
        }
        let p = pending.get_or_insert_with(|| Pending {
            lemma: lemma.to_owned(),
            cells: Vec::new(),
            keys: HashSet::new(),
        });
        if !p.keys.insert(bundle.key().to_owned()) {
            return Err(parse_error(
                line_no,
                format!("duplicate cell {bundle} in paradigm of {lemma:?}"),
                line,
            ));
        }
        p.cells.push(if form.is_empty() {
            Cell::empty(bundle)
        } else {
            Cell::filled(bundle, form)
        });
    }
    finish(pending, &mut out)?;
    Ok(out)
}

/// Writes paradigms with an empty line between consecutive paradigms.
pub fn serialize_paradigms(paradigms: &[Paradigm], order: ColumnOrder) -> String {
    let mut out = String::new();
    for (i, p) in paradigms.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for cell in p.cells() {
            let form = cell.form.as_deref().unwrap_or("");
            order.write_line(&mut out, p.lemma(), form, cell.bundle.key());
        }
    }
    out
}

/// An inflection request: a lemma and the bundle to realise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub lemma: String,
    pub bundle: FeatureBundle,
}

/// Reads `lemma<TAB>tags` lines. Full three-column triple lines are accepted
/// too (the form is ignored), so a dev or test file can be used directly.
pub fn parse_queries(text: &str, order: ColumnOrder) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    for (line_no, line) in records(text) {
        let Some(line) = line else { continue };
        let fields: Vec<&str> = line.split('\t').collect();
        let (lemma, tags) = match fields.as_slice() {
            [lemma, tags] => (*lemma, *tags),
            [a, b, c] => {
                let (lemma, _, tags) = order.split([a, b, c]);
                (lemma, tags)
            }
            _ => {
                return Err(parse_error(
                    line_no,
                    format!(
                        "expected 2 or 3 tab-separated fields, found {}",
                        fields.len()
                    ),
                    line,
                ))
            }
        };
        if lemma.is_empty() {
            return Err(parse_error(line_no, "empty lemma", line));
        }
        let bundle = bundle_at(line_no, tags, line)?;
        out.push(Query {
            lemma: lemma.to_owned(),
            bundle,
        });
    }
    Ok(out)
}
