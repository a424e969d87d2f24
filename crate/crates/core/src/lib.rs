//! Tableau combinatorics, crystal operators, characters and q-Fock space
//! checks for quantum orthosymplectic superalgebras.

pub mod alphabet;
pub mod character;
pub mod crystal;
pub mod error;
pub mod fock;
pub mod kn;
pub mod laurent;
pub mod osp;
pub mod signatures;
pub mod tableau;
pub mod weyl;

pub use alphabet::{Alphabet, AlphabetKind, Letter};
pub use error::{Error, Result};
pub use tableau::{Column, Shape, Tableau, Word};
