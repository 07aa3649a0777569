//! Exact computer algebra for symplectic determinant laws.
//!
//! Everything is computed over ℚ and polynomial rings over ℚ with exact
//! equality; there is no floating point anywhere in the crate.
//!
//! - [`symplectic`]: the form `J`, the involution `M ↦ J Mᵀ J⁻¹`, Pfaffians and sampling.
//! - [`det_laws`]: coefficient recursions and the laws `(det ∘ ρ, Pf ∘ (ρ·J))`.
//! - [`invariants`]: trace-word invariants and a Lie-algebra invariant count.
//! - [`gma`]: symplectic generalized matrix algebras and the Cayley–Hamilton criterion.
//! - [`pseudochar`]: pseudocharacters of representations and their axioms.

pub mod det_laws;
pub mod error;
pub mod gma;
pub mod group;
pub mod invariants;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod pseudochar;
pub mod random;
pub mod ring;
pub mod symplectic;

pub use det_laws::{InvolutiveRepresentation, RepKind};
pub use error::{Error, Result};
pub use gma::{GmaSpec, GmaType, QuotientPoly};
pub use group::{GroupAlgebraElement, Word};
pub use invariants::{InvariantFunction, TraceWord};
pub use matrix::Matrix;
pub use poly::MultiPoly;
pub use pseudochar::Pseudocharacter;
pub use random::Sampler;
pub use ring::{PolyRing, Rational, Ring};
pub use symplectic::SymplecticContext;
