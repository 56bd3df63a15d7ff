//! Projection classes over the quantum odd spheres `C(S_q^{2n+1})`, `K_0` of
//! the quantum projective spaces `C(CP_q^n)`, decompositions of quantum line
//! bundles, and finite checks of the groupoid and operator models behind them.

mod bigjson;
pub mod error;
pub mod expr;
pub mod groupoid;
pub mod ktheory;
mod lattice;
pub mod line_bundles;
pub mod oracle;
pub mod proj_monoid;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use expr::{parse_sum, GRAMMAR};
pub use groupoid::{GroupoidElement, MapCheck, Window};
pub use ktheory::{check_exactness, K0Vector};
pub use line_bundles::{
    closed_form, k0_class, recursion_expand, LineBundle, LineBundleDecomposition,
};
pub use oracle::{Cutoffs, DiagonalPattern, Factor, PatternStack};
pub use proj_monoid::{boxplus, normalize, rho, ExtendedNat, ProjClass, RhoVector};
pub use report::Report;
