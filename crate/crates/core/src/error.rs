use thiserror::Error;

use crate::fincat::{MorId, ObjId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("morphisms {g:?} and {f:?} are not composable")]
    NonComposable { g: MorId, f: MorId },

    #[error("unknown object {0:?}")]
    UnknownObject(ObjId),

    #[error("unknown morphism {0:?}")]
    UnknownMorphism(MorId),

    #[error("no pullback of {f:?} and {g:?} in the category")]
    NoPullback { f: MorId, g: MorId },

    #[error("no equalizer of {f:?} and {g:?} in the category")]
    NoEqualizer { f: MorId, g: MorId },

    /// A limit the construction needs is not an object of the (finite) category.
    #[error("missing closure: {0}")]
    MissingClosure(String),

    #[error("cone does not factor uniquely through the limit")]
    NoMediator,

    #[error("cone does not commute over the limit diagram")]
    NonCommutingCone,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("malformed category: {0}")]
    MalformedCategory(String),

    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}
