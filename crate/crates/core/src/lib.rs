pub mod algebra;
pub mod clifford;
pub mod error;
pub mod krein;
pub mod models;
pub mod numerics;
pub mod triple;
pub mod twist;

pub use algebra::{AlgebraElement, AlgebraSpec, Block, Representation, SummandKind};
pub use error::{Error, Result};
pub use models::{builtin, load_model, load_model_str, save_model, ModelDescriptor, BUILTIN_NAMES};
pub use numerics::{ComplexMatrix, Tolerance, C64};
pub use triple::{CheckItem, FiniteTriple, RealStructure, ValidationReport};
pub use twist::{DoubledElement, MinimalTwist};
