//! Hilbert sphere lengths, ball volumes, the Cantor gap series and
//! volume-growth entropy fits.

mod ball;
mod series;
mod sphere;

pub use ball::ball_volume;
pub use series::{
    cantor_series_length, general_gap_series, series_bounds, GapCountRule, SeriesBounds, SeriesParams, SeriesValue,
};
pub use sphere::{
    check_radius, circle_length, one_minus_tanh, polygon_circle_length, scaled_boundary_polyline, tangent_exit,
    Orientation,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::quadrature::{linear_fit, local_slopes};

pub const MIN_GRID_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl RadiusGrid {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, spacing: Spacing::Linear }
    }

    pub fn geometric(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count, spacing: Spacing::Geometric }
    }

    pub fn radii(&self) -> Result<Vec<f64>> {
        let Self { min, max, count, spacing } = *self;
        if count < MIN_GRID_POINTS {
            return Err(Error::InsufficientData { needed: MIN_GRID_POINTS, got: count });
        }
        if !(min >= 0.0 && max > min && max.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius grid [{min}, {max}] is not increasing")));
        }
        if spacing == Spacing::Geometric && min <= 0.0 {
            return Err(Error::InvalidParameter("geometric grid needs a positive minimum".into()));
        }
        let last = (count - 1) as f64;
        Ok((0..count)
            .map(|i| {
                let t = i as f64 / last;
                match spacing {
                    Spacing::Linear => min + (max - min) * t,
                    Spacing::Geometric => min * (max / min).powf(t),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sphere,
    Ball,
    Series,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub mode: Mode,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub log_values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub local_slopes: Vec<f64>,
}

impl EntropyEstimate {
    pub fn from_values(mode: Mode, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() < MIN_GRID_POINTS {
            return Err(Error::InsufficientData { needed: MIN_GRID_POINTS, got: radii.len() });
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("radii must be strictly increasing".into()));
        }
        let log_values: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        if let Some(bad) = log_values.iter().position(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "value {} at R = {} has no finite logarithm",
                values[bad], radii[bad]
            )));
        }
        let (slope, intercept) = linear_fit(&radii, &log_values)
            .ok_or_else(|| Error::InvalidParameter("degenerate radius grid".into()))?;
        let local_slopes = local_slopes(&radii, &log_values);
        Ok(Self { mode, radii, values, log_values, slope, intercept, local_slopes })
    }
}

/// Sphere lengths or ball volumes over the grid, with a least-squares slope of
/// their logarithms.
pub fn entropy_estimate(domain: &ConvexDomain, grid: &RadiusGrid, mode: Mode, quad_tol: f64) -> Result<EntropyEstimate> {
    let radii = grid.radii()?;
    for &r in &radii {
        check_radius(domain, r)?;
    }
    let values: Result<Vec<f64>> = radii
        .par_iter()
        .map(|&r| match mode {
            Mode::Sphere => circle_length(domain, r, quad_tol),
            Mode::Ball => ball_volume(domain, r, quad_tol),
            Mode::Series => Err(Error::InvalidParameter("series mode needs series parameters".into())),
        })
        .collect();
    EntropyEstimate::from_values(mode, radii, values?)
}

/// The same fit applied to the closed-form Cantor series.
pub fn series_estimate(params: &SeriesParams, grid: &RadiusGrid) -> Result<EntropyEstimate> {
    let radii = grid.radii()?;
    let values = radii.iter().map(|&r| cantor_series_length(params, r).value).collect();
    EntropyEstimate::from_values(Mode::Series, radii, values)
}
