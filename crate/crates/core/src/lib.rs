//! Exact computation with the stream zeros of integer Laurent polynomials.
//!
//! A two-sided stream is a bi-infinite sequence `(a_n; n in Z)` viewed as a
//! formal series `sum a_n z^n`. A nontrivial integer Laurent polynomial `P`
//! acts on torus-valued streams by convolution; this crate computes with the
//! kernel of that action (the stream zeros), the convolution inverse of
//! hyperbolic `P`, the induced symbolic coding and its entropy, resultant
//! based structure results, and the strong automorphism group.

pub mod error;
pub mod rat;

mod linalg;
pub mod automorphism;
pub mod dynamics;
pub mod inverse;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod stream;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use poly::LaurentPoly;
pub use stream::Stream;
