//! Exact univariate polynomial arithmetic over Q and F_p, the normalized
//! automorphisms of F[h], and irreducibility testing.

mod irreducible;
mod poly;
mod scalar;
mod sigma;

pub use irreducible::{is_irreducible, is_irreducible_with_limit, Irreducibility, DEFAULT_WORK_LIMIT};
pub use poly::Poly;
pub use scalar::{is_prime_u64, FieldTag, Scalar};
pub use sigma::{multiplicative_order, Sigma};
