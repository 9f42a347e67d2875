//! Rule-based morphological inflection and paradigm completion, with the
//! tooling around it: weighted edit alignment, affix-rule learning,
//! frequency-weighted split sampling, and evaluation metrics and oracles.
//!
//! ```
//! use inflectkit::{train, FeatureBundle, Triple};
//!
//! let bundle = FeatureBundle::parse("V;V.PTCP;PST").unwrap();
//! let model = train(&[Triple::new("schielen", bundle.clone(), "geschielt").unwrap()]).unwrap();
//! assert_eq!(model.inflect("kaufen", &bundle).unwrap(), "gekauft");
//! ```

pub mod align;
pub mod error;
pub mod eval;
pub mod inflector;
pub mod paradigm;
pub mod rules;
pub mod sampler;
pub mod tsv;
pub mod types;

pub use error::{Error, Result};
pub use inflector::{detect_orientation, train, train_with_orientation, Model, Orientation};
pub use tsv::ColumnOrder;
pub use types::{Cell, Condition, Dataset, FeatureBundle, Paradigm, Records, Triple};
