//! Dirichlet characters and L-functions, critical-line zero scanning, the
//! oscillatory `sum cos(4t ln n)` series, formal complex bilinear geometry,
//! Pappus-type centroid identities, and a numerical claim audit built on top
//! of them.

pub mod analytic;
pub mod audit;
pub mod cache;
pub mod characters;
pub mod error;
pub mod format;
pub mod geometry;
pub mod math;
pub mod revolution;
pub mod series;
pub mod zeros;

pub use analytic::{LEvalSettings, SPoint};
pub use characters::{enumerate_characters, DirichletCharacter, RootOfUnity};
pub use error::{Error, Result};
