//! Farey–Ford polygons and the statistics of consecutive Ford circles.

pub mod bcz;
pub mod distributions;
pub mod error;
pub mod farey;
pub mod geom;
pub mod moments;
pub mod polygon;
pub mod quad;
pub mod rational;
pub mod report;
pub mod summation;
pub mod sums;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};
pub use rational::{Fraction, PositiveRational, RationalInterval};
