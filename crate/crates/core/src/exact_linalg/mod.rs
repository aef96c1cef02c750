//! Exact linear algebra over the coefficient rings: normal forms, kernels,
//! images, span calculus, and classification of finitely generated modules.

mod fg;
mod matrix;
mod ring;
mod snf;
mod span;
mod subquotient;

pub use fg::{FgModule, Presentation};
pub use matrix::ExactMatrix;
pub use ring::{parse_scalar, scalar_to_string, Ring, Scalar};
pub use snf::{smith_normal_form, SmithNormalForm};
pub use span::{
    intersect_spans, is_saturated, kernel_basis, preimage_span, saturate_span, solve,
    solve_matrix, span_basis, span_contains, span_contains_span, spans_equal, sum_spans, Solver,
};
pub use subquotient::{subquotient, Subquotient};
