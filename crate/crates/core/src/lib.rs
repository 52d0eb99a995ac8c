pub mod algebra;
pub mod classification;
pub mod cyclo;
pub mod error;
pub mod fusion;
pub mod linalg;
pub mod module;
pub mod pipeline;
pub mod presets;
pub mod quasi;
pub mod sampling;
pub mod tensor;

pub use algebra::{AlgebraRef, BasedAlgebra};
pub use cyclo::{BetaChoice, CycNum};
pub use error::{Condition, Error, Result};
pub use quasi::{AxiomReport, GaugeTwist, QuasiBialgebra};
pub use tensor::{AlgElem, Tensor, Tensor2, Tensor3, Tensor4};
