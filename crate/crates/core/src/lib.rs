//! Algebraic content of finite-group topological quantum field theory in
//! two and three dimensions.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] and [`character`] supply finite groups, conjugacy data and
//!   character tables.
//! * [`frobenius`], [`cobordism`] and [`open_closed`] evaluate 2d theories
//!   from Frobenius algebras.
//! * [`dw`] and [`lattice`] count flat connections directly and through
//!   triangulation state sums.
//! * [`modular`] builds modular data for Drinfeld doubles and SU(2) level k.
//! * [`yang_mills`] sums heat-kernel weighted character expansions.
//! * [`selftest`] ties the cross-module oracles together.

pub mod character;
pub mod cobordism;
pub mod dw;
pub mod error;
pub mod frobenius;
pub mod open_closed;
pub mod group;
pub mod input;
pub mod lattice;
pub mod modular;
pub mod parallel;
pub mod rational;
pub mod selftest;
pub mod yang_mills;

pub use character::{character_table, centralizer_tables, CharacterTable};
pub use error::{Result, TqftError};
pub use frobenius::FrobeniusAlgebra;
pub use group::{ConjugacyClass, FiniteGroup, Preset, Subgroup};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use modular::ModularData;

/// Dense complex matrix used for linear maps between state spaces.
pub type ComplexMatrix = nalgebra::DMatrix<Complex64>;
