//! Executable companion to the NP-hardness of DFA consistency over a binary
//! alphabet.
//!
//! * [`automata`]: words, samples, complete DFAs, Mealy machines, DOT.
//! * [`cnf`]: pure-polarity 3CNF formulas and DIMACS input.
//! * [`reduction`]: the `k = n + m` reduction, its witness automaton and
//!   assignment extraction, plus the textbook-style variant.
//! * [`solver`]: exact `k`-state consistency by prefix-tree coloring, with a
//!   brute-force oracle.
//! * [`counterexamples`]: machine-checked refutations of earlier
//!   constructions.
//! * [`formats`] and [`cli`]: sample/DFA file formats and the command layer.

pub mod automata;
pub mod cli;
pub mod cnf;
pub mod counterexamples;
pub mod formats;
pub mod reduction;
pub mod solver;
