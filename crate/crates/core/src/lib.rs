//! Exact graded Hom dimensions on the weighted projective cones `P(1^n, m)`,
//! with tilting and semiorthogonal-decomposition checks built on them.

pub mod cone;
pub mod config;
pub mod error;
pub mod hom;
pub mod linalg;
pub mod objects;
pub mod report;
pub mod tilting;

pub use cone::{ConeSpace, Monomial, ZPoly};
pub use error::{Error, LinalgError, Result};
pub use hom::{hom_atoms, Atom, GradedHomSpace, Rule, ZSection};
pub use linalg::{Matrix, PresentedMap, PresentedSpace};
pub use objects::{euler_form, hom_objects, kernel_bundle, HomComputation, SheafObject};
pub use tilting::{check_sod, is_tilting, stack_exceptional_check, NamedObject, SodReport};
