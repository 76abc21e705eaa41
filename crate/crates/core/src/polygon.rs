//! Farey–Ford polygons: the Ford-circle centres over a Farey window joined
//! by straight segments or hyperbolic geodesics, closed by a top edge at
//! height 1/2.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{check_order, enumerate};
use crate::geom::{hyperbolic_geodesic_center, FordCircle, Point};
use crate::rational::{Fraction, RationalInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Euclidean => "euclidean",
            EdgeKind::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(EdgeKind::Euclidean),
            "hyperbolic" => Ok(EdgeKind::Hyperbolic),
            _ => Err(Error::Parse(format!(
                "unknown edge kind `{s}` (expected euclidean or hyperbolic)"
            ))),
        }
    }
}

/// Circle through two points with its centre on the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc {
    pub center: f64,
    pub radius: f64,
}

impl GeodesicArc {
    pub fn through(a: Point, b: Point) -> Result<Self> {
        let center = hyperbolic_geodesic_center(a, b)?;
        Ok(GeodesicArc {
            center,
            radius: (a.x - center).hypot(a.y),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonGeometry {
    pub order: u64,
    pub interval: RationalInterval,
    pub edges: EdgeKind,
    /// The Farey fractions of the window, one per bottom vertex.
    pub fractions: Vec<Fraction>,
    /// `O_j = (p_j/q_j, 1/(2q_j²))`.
    pub vertices: Vec<Point>,
    /// Geodesic from `O_j` to `O_{j+1}`; empty for Euclidean edges.
    pub arcs: Vec<GeodesicArc>,
    /// `(α, 1/2)`.
    pub top_left: Point,
    /// `(β, 1/2)`.
    pub top_right: Point,
    /// Geodesic from `(α, 1/2)` to `(β, 1/2)`.
    pub top_edge: GeodesicArc,
    /// Circles drawn with the polygon: those of order `Q + 1` in the window,
    /// so the circles sitting in each gap of the bottom edge are shown too.
    pub circles: Vec<FordCircle>,
}

pub fn build_polygon(order: u64, interval: RationalInterval, edges: EdgeKind) -> Result<PolygonGeometry> {
    check_order(order)?;
    let fractions: Vec<Fraction> = enumerate(order, interval)?.collect();
    if fractions.len() < 2 {
        return Err(Error::usage(format!(
            "window {interval} holds {} Farey fraction(s) of order {order}; a polygon needs two",
            fractions.len()
        )));
    }
    let vertices: Vec<Point> = fractions
        .iter()
        .map(|&f| FordCircle::new(f).center_f64())
        .collect();
    let arcs = match edges {
        EdgeKind::Euclidean => Vec::new(),
        EdgeKind::Hyperbolic => vertices
            .windows(2)
            .map(|w| GeodesicArc::through(w[0], w[1]))
            .collect::<Result<_>>()?,
    };
    let top_left = Point::new(interval.alpha().to_f64(), 0.5);
    let top_right = Point::new(interval.beta().to_f64(), 0.5);
    let circles = enumerate(order + 1, interval)?.map(FordCircle::new).collect();
    Ok(PolygonGeometry {
        order,
        interval,
        edges,
        fractions,
        vertices,
        arcs,
        top_left,
        top_right,
        top_edge: GeodesicArc::through(top_left, top_right)?,
        circles,
    })
}
