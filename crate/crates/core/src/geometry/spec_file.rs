//! JSON domain descriptions.
//!
//! ```json
//! { "type": "polygon", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]] }
//! { "type": "ellipse", "semi_axes": [2, 1], "center": [0, 0] }
//! { "type": "radial", "center": [0, 0], "rho": { "grid_size": 4, "values": [1, 1, 1, 1] } }
//! { "type": "cantor", "cantor": { "p": 3, "depth": 12 } }
//! ```
//!
//! Every variant accepts an optional `basepoint` and `tol_geo`.

use std::f64::consts::TAU;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ConvexDomain, Interpolation, Point2, Radial};
use crate::cantor::{build_cantor_domain, CantorFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoSpec {
    pub grid_size: usize,
    pub values: Vec<f64>,
    #[serde(default)]
    pub interpolation: Interpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub p: f64,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ShapeSpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Ellipse { semi_axes: [f64; 2], #[serde(default)] center: [f64; 2] },
    Radial { #[serde(default)] center: [f64; 2], rho: RhoSpec },
    Cantor { cantor: CantorSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_geo: Option<f64>,
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Validates every invariant and builds the domain.
    pub fn build(&self) -> Result<ConvexDomain> {
        let mut d = match &self.shape {
            ShapeSpec::Polygon { vertices } => ConvexDomain::polygon(vertices.iter().map(|&v| v.into()).collect())?,
            ShapeSpec::Ellipse { semi_axes, center } => ConvexDomain::ellipse(semi_axes[0], semi_axes[1], (*center).into())?,
            ShapeSpec::Radial { center, rho } => {
                if rho.grid_size != rho.values.len() {
                    return Err(Error::InvalidSpec(format!(
                        "rho.grid_size = {} but {} values given",
                        rho.grid_size,
                        rho.values.len()
                    )));
                }
                ConvexDomain::radial(Radial::new((*center).into(), rho.values.clone(), rho.interpolation)?)?
            }
            ShapeSpec::Cantor { cantor } => {
                let cf = CantorFunction::new(cantor.p, cantor.depth)?;
                ConvexDomain::cantor(Arc::new(build_cantor_domain(&cf)?))?
            }
        };
        if let Some(t) = self.tol_geo {
            if !(t > 0.0 && t < 1e-2) {
                return Err(Error::InvalidSpec(format!("tol_geo = {t} outside (0, 1e-2)")));
            }
            d = d.with_tol_geo(t);
        }
        if let Some(b) = self.basepoint {
            d = d.with_basepoint(b.into())?;
        }
        Ok(d)
    }

    /// Radial profile of `domain` around its basepoint, linear interpolation.
    pub fn radial_sampling(domain: &ConvexDomain, grid_size: usize) -> Self {
        let b = domain.basepoint();
        let values = (0..grid_size)
            .map(|i| domain.exit_distance(b, Point2::polar(1.0, TAU * i as f64 / grid_size as f64)))
            .collect();
        DomainSpec {
            shape: ShapeSpec::Radial {
                center: [b.x, b.y],
                rho: RhoSpec { grid_size, values, interpolation: Interpolation::Linear },
            },
            basepoint: None,
            tol_geo: None,
        }
    }
}

pub fn load_domain(path: impl AsRef<Path>) -> Result<ConvexDomain> {
    DomainSpec::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ShapeKind;

    #[test]
    fn parses_each_variant() {
        let sq = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}"#).unwrap();
        assert_eq!(sq.build().unwrap().kind(), ShapeKind::Polygon);
        let e = DomainSpec::from_json(r#"{"type":"ellipse","semi_axes":[2,1],"center":[0,0]}"#).unwrap();
        assert_eq!(e.build().unwrap().area(), 2.0 * std::f64::consts::PI);
        let r = DomainSpec::from_json(r#"{"type":"radial","rho":{"grid_size":8,"values":[1,1,1,1,1,1,1,1]}}"#).unwrap();
        assert_eq!(r.build().unwrap().kind(), ShapeKind::Radial);
        let c = DomainSpec::from_json(r#"{"type":"cantor","cantor":{"p":3,"depth":4}}"#).unwrap();
        let d = c.build().unwrap();
        assert_eq!(d.kind(), ShapeKind::Cantor);
        assert!(d.is_centrally_symmetric());
    }

    #[test]
    fn nonconvex_polygon_reports_triple() {
        let s = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[0,0],[2,0],[1,0.2],[2,2],[0,2]]}"#).unwrap();
        let err = s.build().unwrap_err();
        assert!(matches!(err, Error::NonConvex(1, 2, 3)));
        assert!(err.to_string().contains("1, 2, 3"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(DomainSpec::from_json(r#"{"type":"hexagon"}"#).is_err());
        let s = DomainSpec::from_json(r#"{"type":"radial","rho":{"grid_size":9,"values":[1,1,1,1,1,1,1,1]}}"#).unwrap();
        assert!(s.build().is_err());
        let s = DomainSpec::from_json(r#"{"type":"ellipse","semi_axes":[1,1],"basepoint":[1,0]}"#).unwrap();
        assert!(matches!(s.build(), Err(Error::NotInterior(_))));
    }

    #[test]
    fn radial_sampling_roundtrip() {
        let disk = ConvexDomain::unit_disk();
        let spec = DomainSpec::radial_sampling(&disk, 64);
        let json = spec.to_json().unwrap();
        let back = DomainSpec::from_json(&json).unwrap();
        assert_eq!(back, spec);
        let d = back.build().unwrap();
        assert!((d.area() - 64.0 / 2.0 * (TAU / 64.0).sin()).abs() < 1e-12);
    }
}
