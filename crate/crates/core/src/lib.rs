//! Exact Selberg-type integrals, Jack polynomial expansions and Weingarten
//! calculus for moments of uniformly distributed matrices in operator-norm
//! balls, together with numeric oracles that check them.

pub mod combinat;
pub mod error;
pub mod exact;
pub mod jack;
pub mod moments;
pub mod oracle;
pub mod selberg;
pub mod verify;
pub mod weingarten;

pub use combinat::{PairPartition, Partition, Permutation};
pub use error::{Error, Result};
pub use exact::{Approx, GammaProduct, GammaValue, Rational};
pub use jack::SymPoly;
pub use moments::{Convention, EnsembleSpec, Family, MomentReport, RationalFunction};
pub use selberg::SelbergParams;
