//! Points, statements, constructive problems and their text/JSON forms.

mod problem;
mod statement;

pub use problem::{parse_problem, Construction, ConstructionKind, ParseError, Problem};
pub(crate) use problem::parse_statement_tokens;
pub use statement::{canonicalize, symmetry_group, Kind, Statement};

use serde::{Deserialize, Serialize};

/// Dense index of a point within its problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u16);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for PointId {
    fn from(i: usize) -> Self {
        PointId(i as u16)
    }
}
