//! Exact linear combinations of decorated strata.

mod class;
mod decoration;
mod rpoly;
mod subst;

pub use class::{Coeff, Mode, Space, TautClass};
pub use decoration::{DecoratedStratum, Decoration, Eta, VertexMonomial};
pub use rpoly::RPoly;
pub use subst::{substitute, Symbol};
