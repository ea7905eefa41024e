//! Greedy and legal decompositions over zero linear recurrences.
//!
//! The crate builds exact sequence tables for recurrences
//! `Z_{n+1} = c_1 Z_n + … + c_L Z_{n+1-L}` with `c_1 = 0`, computes greedy
//! decompositions and their summand/gap statistics, counts legal
//! decompositions under a forbidden-pattern rule, and compares the
//! microcanonical and canonical ensembles of greedy digit patterns.

pub mod cli;
pub mod config;
pub mod ensemble;
pub mod greedy;
pub mod legal;
pub mod matrix;
pub mod output;
pub mod poly;
pub mod recurrence;
pub mod report;
pub mod stats;
