//! Abduction with penalization over normal logic programs.
//!
//! A problem instance consists of hypotheses with penalties, a logic
//! program, observations and a cost function. A set of hypotheses is an
//! admissible solution when the program extended with it has a stable
//! model satisfying every observation; optimal solutions are admissible
//! solutions of least cost.
//!
//! ```
//! use pap_core::{parse_pap, solve};
//!
//! let p = parse_pap(
//!     "go_fishing :- is_saturday, not rains.
//!      is_saturday.
//!      #hypothesis rains.
//!      #observe not go_fishing.",
//! )
//! .unwrap();
//! let r = solve(&p, false).unwrap();
//! assert_eq!(r.optimal_cost, Some(1.0));
//! assert_eq!(r.solutions[0].iter().next().unwrap().to_string(), "rains");
//! ```

pub mod corpus;
pub mod cost;
pub mod error;
pub mod grounder;
pub mod kernel;
pub mod oracle;
pub mod parser;
pub mod solver;
pub mod stable;
pub mod tsp;

pub use cost::{eval_cost, max_cost, CostFunction, EPSILON};
pub use error::*;
pub use grounder::{ground, herbrand_universe, optimize_ground, GroundProgram, GroundRule};
pub use kernel::*;
pub use parser::{
    parse_ground_atom, parse_ground_atom_list, parse_pap, parse_pap_with_warnings, print_pap,
    ParseError, Severity, SourceDiagnostic,
};
pub use solver::{
    admissible_solutions, is_admissible, is_consistent, is_necessary, is_optimal, is_relevant,
    solve, Solver, SolverOptions,
};
pub use stable::{
    brave_entails, cautious_entails, is_stable, least_model, positive_envelope, reduct,
    stable_models, Engine, EngineOptions, ReductProgram,
};
pub use tsp::{gen_tsp, WeightMatrix};
