//! Exact polyhedral algebra for Bell and no-signaling cones in (n,2,2)
//! scenarios: correlation/functional tensors over the setting alphabet
//! {-1,0,+1}, the index-raising/lowering transform realizing the duality
//! between the Bell cone and the no-signaling cone, a double-description
//! cone engine, the scenario symmetry group with orbit classification, and
//! the involution-based constructions extending boxes and Bell inequalities
//! from n to n+1 parties.
//!
//! All arithmetic is exact rational; there is no floating point anywhere.

pub mod cone;
pub mod error;
pub mod fixtures;
pub mod lifting;
pub mod rational;
pub mod scenario;
pub mod symmetry;
pub mod tensor;

pub use cone::{ConeHRep, ConeVRep, HMembership, VMembership};
pub use error::Error;
pub use rational::Rational;
pub use scenario::Scenario;
pub use symmetry::{Involution, SymmetryElement};
pub use tensor::{CorrelationTensor, Dualize, FTensor, FunctionalTensor, SettingWord, Variance};

pub type Result<T> = std::result::Result<T, Error>;
