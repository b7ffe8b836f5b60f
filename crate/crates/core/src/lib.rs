//! Finite groups, G-sets, spans, Burnside rings, Mackey functors and the
//! K-theory of categories with squares.

pub mod error;
pub mod group;
pub mod groups;
pub mod gset;
pub mod matrix;
pub mod snf;
pub mod abelian;
pub mod span;
pub mod burnside;
pub mod report;
pub mod mackey;
pub mod squares;
pub mod sk;
pub mod euler;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup, SubgroupClass, SubgroupEmbedding};
pub use gset::{GMap, GSet};
pub use matrix::Matrix;
pub use abelian::{Cokernel, FgAbelianGroup};
pub use burnside::{BurnsideElement, BurnsideRing};
pub use span::{Span, Span2Cell};
pub use report::{Check, Report, Status};
pub use mackey::{MackeyFunctor, MackeyMorphism};
pub use squares::{K0Result, SquaresPresentation};
