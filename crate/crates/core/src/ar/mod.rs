//! Algebraic reasoning over exact rational linear tables.

mod encode;
mod equation;
mod table;

pub use encode::{
    law_of_sines_equations, proof_obligations, statement_to_equations, ArOptions, EncodeError, SineDomain,
};
pub use equation::{parse_rational, Equation, Rational, RationalJson, Table, VarId, VarKey};
pub use table::{
    ArTable, Certificate, Combination, EqId, InsertReport, PendingQuery, QueryResult, TableError, TableStats,
};
