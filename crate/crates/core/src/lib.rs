//! c-differential uniformity over finite fields.
//!
//! The crate is `no_std` and needs only `alloc`. It provides
//!
//! * [`field`]: prime-power fields with log/Zech tables, traces, norms and
//!   subfield embeddings;
//! * [`funcs`]: functions `F_q -> F_q` with cached value tables and the
//!   structural predicates (permutation, 2-to-1, planar, DO/quadratic shape);
//! * [`cdiff`]: c-derivatives, c-difference distribution tables, PcN/APcN
//!   classification and the quadratic-characterization checks;
//! * [`construct`]: AGW-type permutation, PcN and APcN families;
//! * [`monomial`]: exceptionality analysis of power maps `x^d`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cdiff;
pub mod construct;
pub mod field;
pub mod funcs;
pub mod monomial;
pub mod parse;
mod zp_poly;

pub use field::{embed, make_field, Elem, Embedding, FieldContext, FieldError, FieldOptions, FieldSpec};
pub use funcs::{PolyFunc, ShapeFlags};
