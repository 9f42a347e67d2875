//! Weighted edit alignment of a lemma with an inflected form, and its
//! decomposition into a prefix zone and a stem+suffix core.
//!
//! Insertions and deletions cost 1.0 and substitutions 1.1, so that an
//! insertion/deletion pair at a word edge is never replaced by two
//! substitutions. Costs are kept as integer tenths to make ties exact.

use std::fmt;

use crate::error::{Error, Result};

/// An alignment cost in tenths of a unit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(u32);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const INDEL: Cost = Cost(10);
    pub const SUBSTITUTION: Cost = Cost(11);

    pub fn from_tenths(tenths: u32) -> Self {
        Cost(tenths)
    }

    pub fn tenths(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// One aligned position. `None` is a gap on that side; never both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub input: Option<char>,
    pub output: Option<char>,
}

impl Column {
    pub fn pair(input: char, output: char) -> Self {
        Column {
            input: Some(input),
            output: Some(output),
        }
    }

    pub fn deletion(input: char) -> Self {
        Column {
            input: Some(input),
            output: None,
        }
    }

    pub fn insertion(output: char) -> Self {
        Column {
            input: None,
            output: Some(output),
        }
    }

    pub fn is_match(&self) -> bool {
        matches!((self.input, self.output), (Some(a), Some(b)) if a == b)
    }

    pub fn is_substitution(&self) -> bool {
        matches!((self.input, self.output), (Some(a), Some(b)) if a != b)
    }

    /// Insertion or deletion.
    pub fn is_one_sided(&self) -> bool {
        self.input.is_none() != self.output.is_none()
    }

    pub fn cost(&self) -> Cost {
        if self.is_match() {
            Cost::ZERO
        } else if self.is_substitution() {
            Cost::SUBSTITUTION
        } else {
            Cost::INDEL
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    columns: Vec<Column>,
    cost: Cost,
}

impl Alignment {
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn input(&self) -> String {
        self.columns.iter().filter_map(|c| c.input).collect()
    }

    pub fn output(&self) -> String {
        self.columns.iter().filter_map(|c| c.output).collect()
    }

    /// Both rows with `gap` in place of missing symbols, e.g.
    /// `("--schielen", "geschielt-")`.
    pub fn render(&self, gap: char) -> (String, String) {
        let top = self
            .columns
            .iter()
            .map(|c| c.input.unwrap_or(gap))
            .collect();
        let bottom = self
            .columns
            .iter()
            .map(|c| c.output.unwrap_or(gap))
            .collect();
        (top, bottom)
    }
}

/// Minimum-cost alignment of `lemma` and `form`.
///
/// Among equal-cost alignments the one chosen is found by walking from the
/// start of both strings and, at each step, taking the first optimal move in
/// the order match/substitute, insert, delete.
pub fn align(lemma: &str, form: &str) -> Result<Alignment> {
    if lemma.is_empty() || form.is_empty() {
        return Err(Error::EmptyAlignmentInput {
            lemma: lemma.to_owned(),
            form: form.to_owned(),
        });
    }
    let input: Vec<char> = lemma.chars().collect();
    let output: Vec<char> = form.chars().collect();
    Ok(align_chars(&input, &output))
}

pub(crate) fn align_chars(input: &[char], output: &[char]) -> Alignment {
    let (n, m) = (input.len(), output.len());
    let width = m + 1;
    // rest[i * width + j]: cheapest alignment of input[i..] with output[j..]
    let mut rest = vec![Cost::ZERO; (n + 1) * width];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let here = i * width + j;
            rest[here] = match (i < n, j < m) {
                (false, false) => Cost::ZERO,
                (true, false) => Cost::INDEL + rest[here + width],
                (false, true) => Cost::INDEL + rest[here + 1],
                (true, true) => {
                    let diag = Column::pair(input[i], output[j]).cost() + rest[here + width + 1];
                    let ins = Cost::INDEL + rest[here + 1];
                    let del = Cost::INDEL + rest[here + width];
                    diag.min(ins).min(del)
                }
            };
        }
    }

    let mut columns = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = i * width + j;
        let target = rest[here];
        if i < n && j < m {
            let col = Column::pair(input[i], output[j]);
            if col.cost() + rest[here + width + 1] == target {
                columns.push(col);
                i += 1;
                j += 1;
                continue;
            }
        }
        if j < m && Cost::INDEL + rest[here + 1] == target {
            columns.push(Column::insertion(output[j]));
            j += 1;
            continue;
        }
        debug_assert!(i < n && Cost::INDEL + rest[here + width] == target);
        columns.push(Column::deletion(input[i]));
        i += 1;
    }

    Alignment {
        columns,
        cost: rest[0],
    }
}

/// An alignment split into its leading prefix zone and the remaining core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZoneSplit {
    pub prefix_input: String,
    pub prefix_output: String,
    pub core: Vec<Column>,
}

impl ZoneSplit {
    pub fn core_input(&self) -> String {
        self.core.iter().filter_map(|c| c.input).collect()
    }

    pub fn core_output(&self) -> String {
        self.core.iter().filter_map(|c| c.output).collect()
    }

    /// Number of core columns in the maximal trailing run of insertions
    /// and deletions.
    pub fn trailing_run(&self) -> usize {
        self.core
            .iter()
            .rev()
            .take_while(|c| c.is_one_sided())
            .count()
    }

    pub fn changes(&self) -> ChangeProfile {
        let trailing = self.trailing_run();
        let body = &self.core[..self.core.len() - trailing];
        let last_is_sub = body.last().is_some_and(Column::is_substitution);
        let stem_end = if last_is_sub {
            body.len() - 1
        } else {
            body.len()
        };
        ChangeProfile {
            prefix: self.prefix_input != self.prefix_output,
            suffix: trailing > 0 || last_is_sub,
            stem_internal: body[..stem_end].iter().any(Column::is_substitution),
        }
    }
}

/// The prefix zone is the maximal leading run of one-sided columns.
pub fn split_zones(alignment: &Alignment) -> ZoneSplit {
    let columns = alignment.columns();
    let lead = columns.iter().take_while(|c| c.is_one_sided()).count();
    let (prefix, core) = columns.split_at(lead);
    ZoneSplit {
        prefix_input: prefix.iter().filter_map(|c| c.input).collect(),
        prefix_output: prefix.iter().filter_map(|c| c.output).collect(),
        core: core.to_vec(),
    }
}

/// Which edges of a word changed between lemma and form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChangeProfile {
    /// The prefix zone differs between the two sides.
    pub prefix: bool,
    /// The core ends in insertions/deletions, or its last column before
    /// them is a substitution.
    pub suffix: bool,
    /// A substitution inside the core that is not the suffix change.
    pub stem_internal: bool,
}
