//! Exact arithmetic over refined labels.
//!
//! A refined label `L_a` at resolution `m` stands for the rational `a/(m+1)`.
//! Every operation here is exact on rational indices; roots and non-integer
//! powers leave the rationals and come back as [`ApproxLabel`].

pub mod error;
pub mod image;
pub mod label;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod ordinal;
pub mod spectral;
pub mod structure;

pub use error::{FlarlError, Result};
pub use image::RatMatrix;
pub use label::{AnyLabel, ApproxLabel, ExactLabel, RealImage, Resolution, DEFAULT_TOL};
pub use linalg::{LabelMatrix, LabelVector, LinearMap, Subspace};
pub use poly::{Degree, LabelPoly};
pub use rational::Rational;
pub use spectral::{Eigenvalue, SpectralReport};
pub use ordinal::{LatticeOp, OrdLabel, OrdMatrix, OrdPoly};
pub use structure::{Element, Family, ScalarDomain};
