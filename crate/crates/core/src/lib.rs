pub mod action_models;
pub mod arith;
pub mod cli;
pub mod invariants;
pub mod rigidity;
pub mod sl2z;
