#![no_std]
extern crate alloc;

pub mod chart;
pub mod checks;
pub mod coeff;
pub mod decompose;
pub mod field;
pub mod flow;
pub mod identities;
pub mod poly;
pub mod specball;
