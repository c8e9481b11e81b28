//! Exact reachability for Markov chains and extremal reachability for MDPs.

mod linsolve;
mod mc;
mod mdp;

pub use linsolve::solve_dense;
pub use mc::{check_at, instantiate, reach_prob_at, Mc};
pub use mdp::{Action, Direction, ExtremalResult, Mdp};
