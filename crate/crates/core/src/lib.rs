//! Finite categories, their internal structures, and decision procedures for
//! the equivalent characterizations of Mal'tsev-type categories relative to a
//! class of spans.

pub mod algebra;
pub mod budget;
pub mod error;
pub mod fincat;
pub mod kernelpair;
pub mod limits;
pub mod spanclass;
pub mod structures;
pub mod theorem;

pub use budget::EvalBudget;
pub use error::{Error, Result};
pub use fincat::{
    CategoryBuilder, FinCategory, MorId, Morphism, MorphismClassification, ObjId, Object,
};
pub use kernelpair::{element_oracle, k1, kernel_pair_construction, KernelPairData};
pub use limits::{
    equalizer, mediate, pullback, split_pullback, EqualizerData, PullbackData, SplitPullbackData,
};
pub use spanclass::{SpanClass, SpanClassSpec};
pub use structures::{
    DirectedKite, Kite, KiteMultiplication, MultiplicativeGraph, PregroupoidStructure,
    ReflexiveGraph, Span, SplitSquare, Validate,
};
pub use theorem::{theorem_report, theorem_report_budgeted, TheoremReport, Value, Verdict};
