//! Building new well-founded structures from old ones.
//!
//! Each constructor carries its own search, assembled from the searches of
//! its parts:
//!
//! * [`Pullback`] and [`Restriction`] run the target's search on images;
//! * [`Product`] is the pullback along the first projection;
//! * [`Coproduct`] searches the right summand with a widened target that
//!   also stops when the oracle jumps to the left summand, then continues on
//!   the left;
//! * [`Lex`] runs an inner search on the second coordinate inside an outer
//!   search on the first;
//! * [`Sigma`] does the same over an index structure, moving witnesses
//!   between equal indices with the family's transport maps.
//!
//! The strong and dichotomous flags are claims derived from the parts; the
//! checks in [`laws`] test them against samples.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

mod coproduct;
mod laws;
mod product;
mod pullback;
mod sigma;

pub use coproduct::{Coproduct, Sum};
pub use laws::{
    check_dichotomous, check_strong, check_structure_laws, strongly_empty_check, EmptinessReport,
    SampleReport, Violation,
};
pub use product::{Lex, Product};
pub use pullback::{booleans, map_contract_reports, restrict, Pullback, RelPreservingMap, Restriction};
pub use sigma::{IndexedFamily, Sigma};

pub type Pred<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;
pub type MapFn<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CombinatorError {
    #[error("map breaks {law} at {detail}")]
    ContractViolated { law: String, detail: String },
    #[error("family breaks {law} at {detail}")]
    CoherenceViolated { law: String, detail: String },
}

pub(crate) fn render_pair(a: &str, b: &str) -> String {
    format!("({a},{b})")
}
