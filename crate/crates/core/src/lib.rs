//! Cross-lingual annotation projection: align parallel sentences, carry
//! token tags, BIO spans, dependency trees and event structures across the
//! alignment, score the results, and assemble gold + silver training data.

pub mod align;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod project;
pub mod silver;

pub use error::{Error, Result};
