//! Solvers, checkers, and brute-force oracles for equitable allocation of
//! indivisible mixed manna (items that may be goods for some agents and
//! chores for others).
//!
//! The crate provides:
//!
//! - a core model of instances and allocations with exact integer utilities
//!   ([`model`]);
//! - checkers for equitability and envy-freeness notions plus welfare
//!   functions ([`fairness`]);
//! - constructive solvers for objective, symmetric bi-/tri-valued normalized,
//!   two-agent type-normalized, and identical valuations ([`solver`]);
//! - a pseudo-polynomial dynamic program for welfare-maximal EQX allocations
//!   ([`dp`]);
//! - exhaustive ground-truth oracles at desk scale ([`oracle`]);
//! - instance generators, hardness gadgets, worked-example fixtures, and file
//!   serialization ([`instances`]);
//! - the `eqmanna` command-line front end ([`cli`]).
//!
//! ```
//! use eqmanna::fairness::check_eq1;
//! use eqmanna::model::Instance;
//! use eqmanna::solver::{eq1po::solve_trivalued_eq1po, Outcome};
//!
//! let inst = Instance::new(vec![
//!     vec![1, 1, 1, -1, -1, -1],
//!     vec![-1, -1, -1, 1, 1, 1],
//!     vec![-1, -1, -1, 1, 1, 1],
//! ])
//! .unwrap();
//! match solve_trivalued_eq1po(&inst).unwrap() {
//!     Outcome::Found(alloc) => assert!(check_eq1(&inst, &alloc).holds),
//!     Outcome::NonExistent => println!("no EQ1+PO allocation exists"),
//! }
//! ```

pub mod cli;
pub mod dp;
pub mod fairness;
pub mod instances;
pub mod model;
pub mod oracle;
pub mod solver;

pub use fairness::{FairnessReport, NashKey, Verdict, Witness, ZeroPolicy};
pub use model::{Allocation, Instance, ItemClass, ItemKind, ModelError, ValuationClass};
pub use solver::{Outcome, SolveError, TieBreak};
