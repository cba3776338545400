//! Exact strength and partition rank computations for small forms and
//! tensors over finite fields and the rationals.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod derivspace;
pub mod descent;
pub mod eqmine;
pub mod error;
pub mod field;
pub mod harness;
pub mod linalg;

pub use error::{Error, Result};
pub use field::{ArithOp, Elem, Extension, FieldCtx};
pub mod poly;
pub mod search;
pub mod symmetrize;
pub mod tensor;

pub use poly::{Form, FormTuple};
pub use tensor::{Tensor, TensorTuple};
