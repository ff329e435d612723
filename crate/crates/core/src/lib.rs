//! The stack calculus: a three-sorted calculus of terms, stacks and
//! processes with a single binder, together with its reduction theory,
//! classical implicational types, a translation from the λμ-calculus, a
//! proof-or-countermodel procedure, a Krivine machine and a bounded
//! relational model.

pub mod denote;
pub mod frontend;
pub mod generate;
pub mod lambdamu;
pub mod machine;
pub mod prover;
pub mod reduction;
mod search;
pub mod syntax;
pub mod typesys;

pub use search::JoinError;
