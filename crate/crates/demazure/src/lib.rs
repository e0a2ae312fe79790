//! Exact-arithmetic formal group algebras and Demazure operator calculus
//! for semisimple root data, with the twisted-algebra machinery that
//! produces coproduct and dual-algebra structure constants.

pub mod demazure_algebra;
pub mod error;
pub mod fga;
pub mod fgl;
pub mod intlinalg;
pub mod ring;
pub mod rootdata;
pub mod series;
pub mod stats;
pub mod twisted;

pub use error::{Error, Result};
