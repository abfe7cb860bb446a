//! Exact symbolic analysis of modules over generalized Weyl algebras
//! `A = F[h](sigma, a)` that restrict to free modules over the polynomial ring.
//!
//! The crate constructs the rank-1 modules attached to divisors of `a`,
//! decides their simplicity, enumerates maximal submodules, computes
//! composition series, socles and hom spaces, stratifies finite-rank modules
//! by Smith normal form, and certifies the explicit simple modules of
//! arbitrary finite rank. Everything is exact: coefficients are
//! arbitrary-precision rationals or prime-field residues, and every
//! combinatorial criterion is backed by an independent rewriting oracle.
//!
//! ```
//! use gwa_core::factored::FactoredElement;
//! use gwa_core::gwa::{FactorSpec, GwaSpec};
//! use gwa_core::polyring::{FieldTag, Poly, Scalar, Sigma};
//! use gwa_core::rank1::{Rank1Module, SocleMethod};
//!
//! // sigma(h) = h - 2 and a = -1/4 (h + 3)(h - 1): an integral central
//! // character of the smallest primitive quotient family
//! let field = FieldTag::Q;
//! let spec = GwaSpec::new(
//!     field,
//!     Sigma::Classical { shift: Scalar::from_i64(field, 2) },
//!     Scalar::from_ratio(-1, 4),
//!     vec![
//!         FactorSpec::checked(Poly::from_int_coeffs(field, &[3, 1]), 1),
//!         FactorSpec::checked(Poly::from_int_coeffs(field, &[-1, 1]), 1),
//!     ],
//! )?;
//! let p = FactoredElement::from_monic_factors(
//!     field,
//!     &[Poly::from_int_coeffs(field, &[-1, 1])],
//! )?;
//! let module = Rank1Module::make_vp(&spec, &p)?;
//! assert!(!module.is_simple().simple);
//! assert_eq!(module.composition_series()?.length(), 2);
//! let socle = module.socle(SocleMethod::ColorSwitch)?;
//! assert_eq!(socle.to_string(), "(h + 3)");
//! # Ok::<(), gwa_core::MathError>(())
//! ```

pub mod error;
pub mod factored;
pub mod gwa;
pub mod json;
pub mod oracle;
pub mod polyring;
pub mod rank1;
pub mod rankn;
pub mod sampling;
pub mod weight;

pub use error::{MathError, MathResult};
