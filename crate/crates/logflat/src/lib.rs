//! Exact algorithms for flatness questions over fine monoids and monoid algebras.

pub mod abgrp;
pub mod chart;
pub mod descent;
pub mod error;
pub mod graded;
pub mod lp;
pub mod monmod;
pub mod monoid;
pub mod morphism;
pub mod polyalg;

pub use error::{Error, Result};
