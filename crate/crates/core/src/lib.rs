//! Max-sum Euclidean matchings in the plane and the common-intersection
//! behaviour of their diametral disks.
//!
//! The crate is generic over the scalar type (see [`scalar::Scalar`]); the
//! aliases at the crate root fix it to `f64`, which is what the campaigns,
//! lemma samplers and the CLI use.

pub mod campaign;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod geom;
pub mod lemmas;
pub mod matching;
pub mod piercing;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Scalar, Tolerance};

pub type Point = geom::Point<f64>;
pub type Segment = geom::Segment<f64>;
pub type Disk = geom::Disk<f64>;
pub type EllipseRegion = geom::EllipseRegion<f64>;
pub type HyperbolaSide = geom::HyperbolaSide<f64>;
pub type PointSet = matching::PointSet<f64>;
pub type Matching = matching::Matching<f64>;
pub type PiercingResult = piercing::PiercingResult<f64>;
pub type StretchReport = piercing::StretchReport<f64>;
pub type CounterexampleInstance = constructions::CounterexampleInstance<f64>;
