//! Normal matrices over the two-element tropical semiring `{0, -1}` and
//! their mutual orthogonality.
//!
//! A normal matrix is stored as the pattern of its zero entries, one `u16`
//! mask per row and per column, so products reduce to unions of row masks.
//! Library indices are 0-based; the text format and serialized output use
//! 1-based indices.

pub mod border;
pub mod error;
pub mod families;
pub mod graphs;
pub mod matrix;
pub mod ortho;
pub mod scalar;
pub mod search;

pub use border::{BorderVector, BorderedBlocks};
pub use error::{Error, Result};
pub use families::{Atom, FamilySpec, MmVariant};
pub use graphs::{GraphKind, OrthoGraph};
pub use matrix::{sigma, sigma_row, Elementary, NormalMatrix, MAX_ORDER};
pub use ortho::{
    indicator, is_orthogonal, is_self_orthogonal, IndicatorReport, VertexSet, ZeroClass,
};
pub use scalar::Scalar;
pub use search::{Completeness, SearchLimits, ThetaCertificate, ThetaKind};
