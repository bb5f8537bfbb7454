//! Near-optimal prefix codes for alphabets whose letters have unequal costs.
//!
//! For a fixed `epsilon`, [`driver::solve`] returns a prefix code whose expected
//! cost is within a `1 + O(epsilon)` factor of optimal, in time polynomial in the
//! number of words. The pipeline:
//!
//! 1. [`instance::normalize`] puts letter costs on an integer grid;
//! 2. [`cost_graph`] counts the strings available at each cost;
//! 3. [`kprefix`] builds the cheapest leveled k-prefix code for one guess of
//!    how many codewords sit on each cost level;
//! 4. [`driver`] searches the guesses and [`convert`] turns the winner into a
//!    true prefix code.
//!
//! [`oracles`] holds exact solvers for small instances.

pub mod codeword;
pub mod convert;
pub mod cost_graph;
pub mod driver;
pub mod error;
pub mod instance;
pub mod kprefix;
pub mod oracles;
pub mod rational;
pub mod trie;

pub use codeword::{code_cost, codeword_cost, reorder, CodeAssignment, Codeword, Letter};
pub use convert::{convert_to_prefix, enc};
pub use cost_graph::{build_cost_graph, count_free_strings, extend_beyond_k, CostGraph};
pub use driver::{choose_k, group_words, solve, solve_tiny_ell1, CodeReport, Grouping, SolveOptions};
pub use error::{Error, Result};
pub use instance::{normalize, Instance, LetterCosts, NormalizedInstance};
pub use kprefix::{construct_leveled, Guess, Inconsistent, LeveledCode};
pub use oracles::{exact_optimal, huffman_equal_costs, lower_bound, OracleResult};
pub use rational::Rational;
pub use trie::{is_k_prefix_free, is_prefix_free, CodewordTrie};
