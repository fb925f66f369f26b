//! The Apollonian weak metric on the unit disc and the Randers-type Finsler
//! norm it induces, with curvature, geodesics, navigation data and the
//! hyperboloid model.
//!
//! Closed forms are paired with independent numeric routes (finite
//! differences, brute-force search, quadrature) so each can be checked
//! against the other; [`validation`] runs those checks over a grid.

// `!(v > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// elimination loops read better with explicit indices
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod calculus;
pub mod error;
pub mod finsler;
pub mod geodesic;
pub mod navigation;
pub mod numdiff;
pub mod optimize;
pub mod point;
pub mod validation;
pub mod weakmetric;

pub use calculus::{CurvatureReport, RandersEngine, RiemannRoute, SRoute, SprayCoefficients};
pub use error::{GeometryError, Result};
pub use finsler::{finsler_norm, FundamentalTensor, IndicatrixEllipse, TensorMode};
pub use geodesic::{GeodesicPath, IntegrationError, IntegratorConfig, SampledCurve};
pub use navigation::{HyperboloidPoint, ZermeloData};
pub use point::{BoundaryPoint, DiscPoint, Mat2, TangentVector};
pub use validation::{GridSpec, ValidationReport, Validator};
pub use weakmetric::{apollonian_distance, GeodesicArc, SupremumResult};
