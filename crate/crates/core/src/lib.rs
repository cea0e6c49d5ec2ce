//! Exact-arithmetic criteria for algebraic hyperbolicity of the very general
//! zero locus of a globally generated vector bundle on a homogeneous
//! subvariety of a product of projective spaces.
//!
//! The crate is organized as:
//!
//! * [`chow`] — sparse exact arithmetic in the truncated multigraded ring of
//!   a product of projective spaces, including the join/cone exponent shift
//!   and zero-cycle degrees;
//! * [`model`] — ambient and bundle input types, Chern data for split
//!   bundles, and instance assembly;
//! * [`criteria`] — the decision procedures, producing verdicts with exact
//!   rational epsilon certificates and shift witnesses;
//! * [`curves`] — curve types, genus lower bounds, scroll classes and the
//!   join-intersection bound.

pub mod chow;
pub mod criteria;
pub mod curves;
pub mod model;

pub use chow::{ChowClass, ChowError, MultiIndex};
pub use criteria::{
    CertificatePath, CriteriaError, EpsilonCertificate, KnownStatus, Verdict, VerdictKind,
};
pub use curves::{CurveProfile, CurveType, CurvesError, GenusBound, MinGenusBound, ScrollSpec};
pub use model::{
    AmbientSpace, BundleInput, ChernData, DominationFlag, ModelError, SectionDomination,
    SplitBundleSpec, VarietyInstance,
};
