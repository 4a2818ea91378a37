pub mod error;
pub mod scalar;
pub mod characters;
pub mod group;
pub mod linalg;
pub mod algebra;
pub mod config;
pub mod magic;
pub mod spec;
pub mod correspondence;
pub mod modular;
pub mod report;
