//! Paradigm completion with the inflection model. Every missing cell is
//! generated independently from the lemma; observed cells are not used.

use crate::error::{Error, Result};
use crate::inflector::{train, Model};
use crate::types::{Cell, Paradigm, Triple};

/// Fills every unfilled cell of `paradigm`, keeping cell order and leaving
/// filled cells untouched.
pub fn complete(model: &Model, paradigm: &Paradigm) -> Result<Paradigm> {
    let cells = paradigm
        .cells()
        .iter()
        .map(|cell| match &cell.form {
            Some(_) => Ok(cell.clone()),
            None => Ok(Cell::filled(
                cell.bundle.clone(),
                model.inflect(paradigm.lemma(), &cell.bundle)?,
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(paradigm.with_cells(cells))
}

/// All cells as triples; every cell must be filled.
pub fn flatten(paradigms: &[Paradigm]) -> Result<Vec<Triple>> {
    let mut triples = Vec::new();
    for p in paradigms {
        if let Some(cell) = p.cells().iter().find(|c| !c.is_filled()) {
            return Err(Error::UnfilledTrainingCell {
                lemma: p.lemma().to_owned(),
                bundle: cell.bundle.to_string(),
            });
        }
        triples.extend(p.filled_triples());
    }
    Ok(triples)
}

pub fn train_from_paradigms(paradigms: &[Paradigm]) -> Result<Model> {
    train(&flatten(paradigms)?)
}
