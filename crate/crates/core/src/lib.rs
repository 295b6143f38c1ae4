//! Exact lattice, number-field and period computations for poor K3 surfaces
//! and poor complex tori.
//!
//! The crate is organized bottom-up:
//!
//! * [`matrix`], [`lll`], [`lattice`], [`enumerate`]: integer lattices, Gram
//!   pairings, exact signatures, integer kernels and Fincke–Pohst short-vector
//!   enumeration.
//! * [`poly`], [`number_field`]: exact arithmetic in `Q[x]/(f)` with certified
//!   signs at a real embedding.
//! * [`period`]: period planes over number fields, Picard lattices, the
//!   poorness decision and the wall constructions.
//! * [`ball`], [`torus`]: certified complex root enclosures and the
//!   height-bounded Néron–Severi exclusion for CM tori.
//! * [`wreath`]: the cycle-composition fixed-point criterion for wreath
//!   product elements acting on finite sets.

pub mod ball;
pub mod enumerate;
pub mod json;
pub mod lattice;
pub mod lll;
pub mod matrix;
pub mod number_field;
pub mod period;
pub mod poly;
pub mod rng;
pub mod torus;
pub mod wreath;

pub use lattice::{Lattice, LatticeError, LatticeVector, StandardLattice, Sublattice};
pub use number_field::{FieldElement, FieldError, Irreducibility, NumberField, RealEmbedding};
pub use period::{PeriodError, PeriodPlane, PeriodReport, PoorVerdict, Verdict};
pub use torus::{CmTorusSpec, NsCertificate, NsStatus, PeriodMatrix, TorusError};
pub use wreath::{WreathElement, WreathError};
