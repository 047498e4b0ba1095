pub mod error;
pub mod format;
pub mod germ;
pub mod parse;
pub mod scalar;
pub mod series;
pub mod classify;
pub mod reversal;
pub mod sample;
pub mod selftest;
pub mod cli;
