//! Closed abelian subgroups of the projective unitary, orthogonal and symplectic
//! groups and of `PU(n) ⋊ ⟨τ₀⟩`, presented by monomial matrices with exact
//! root-of-unity phases and symbolic torus circles.

pub mod abelian;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod f2msms;
pub mod monomial;
pub mod pairing;
pub mod presentation;
pub mod roots;
pub mod star;
pub mod twisted;

pub use classify::{
    canonical_rep, classify, enumerate_invariants, is_maximal, quotient_predicate, weyl_description, BlockInvariant,
    ClassInvariant, WeylDescription, WeylFactor,
};
pub use error::{Error, Result};
pub use f2msms::{enumerate_classes, standard_model, F2Space, Model, Msms, MsmsJson};
pub use monomial::{clock, named_matrix, shift, Center, Flavor, MonomialElement, NamedMatrix, ProjectiveElement};
pub use pairing::{build_pairing, compute_bf, symplectic_reduction, PairingTable};
pub use presentation::{AbelianPresentation, Circle, Family};
pub use roots::RootOfUnity;
pub use star::{fixed_dim, verify_star, FixedAlgebraReport, Method};
pub use twisted::{lift_twisted, LiftedPresentation};
