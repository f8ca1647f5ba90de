#![allow(clippy::needless_range_loop)]

pub mod canonical;
pub mod cohomology;
pub mod error;
pub mod exact;
pub mod lie;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod strata;
pub mod verify;
pub mod words;
