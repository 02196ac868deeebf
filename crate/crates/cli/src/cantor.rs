use std::sync::Arc;

use clap::{Args, Subcommand};
use hilbert_lab::cantor::{build_cantor_domain, derivative_measure, CantorFunction};
use hilbert_lab::geometry::spec_file::DomainSpec;
use hilbert_lab::{ConvexDomain, Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::output::{write_json, Report};

#[derive(Args, Serialize, Clone, Copy)]
pub struct CantorArgs {
    /// Ratio p > 2.
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    /// Truncation depth.
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
pub enum CantorCommand {
    /// (t, f(t)) on a uniform grid of [0, 1].
    Fn {
        #[command(flatten)]
        cantor: CantorArgs,
        /// Grid points; 0 gives an empty table.
        #[arg(long, default_value_t = 1025)]
        count: usize,
    },
    /// Support intervals of the derivative measure at one level.
    Measure {
        #[command(flatten)]
        cantor: CantorArgs,
        /// Level of the intervals; defaults to min(depth, 8).
        #[arg(long)]
        level: Option<u32>,
    },
    /// Boundary of the Cantor domain as a closed polyline.
    Domain {
        #[command(flatten)]
        cantor: CantorArgs,
        /// Write a radial domain spec with this many samples instead of the polyline.
        #[arg(long)]
        radial_grid: Option<usize>,
    },
}

pub fn run(cmd: &CantorCommand, config: Value) -> Result<Report> {
    match cmd {
        CantorCommand::Fn { cantor, count } => {
            let cf = CantorFunction::new(cantor.p, cantor.depth)?;
            let mut r = Report::new("cantor fn", config, &["t", "f"]);
            for i in 0..*count {
                let t = if *count == 1 { 0.0 } else { i as f64 / (*count - 1) as f64 };
                r.row(vec![t.into(), cf.value(t).into()]);
            }
            r.set("alpha", cf.alpha());
            Ok(r)
        }
        CantorCommand::Measure { cantor, level } => {
            let cf = CantorFunction::new(cantor.p, cantor.depth)?;
            let n = level.unwrap_or(cantor.depth.min(8));
            if n > cantor.depth || n > 26 {
                return Err(Error::InvalidParameter(format!(
                    "level {n} must be at most min(depth, 26) = {}",
                    cantor.depth.min(26)
                )));
            }
            let mu = derivative_measure(&cf);
            let mut r = Report::new("cantor measure", config, &["index", "lo", "hi", "mass"]);
            for (i, (lo, hi)) in mu.support_intervals(n).into_iter().enumerate() {
                r.row(vec![i.into(), lo.into(), hi.into(), mu.mass(lo, hi).into()]);
            }
            r.set("level", n);
            r.set("alpha", cf.alpha());
            Ok(r)
        }
        CantorCommand::Domain { cantor, radial_grid } => {
            let cf = CantorFunction::new(cantor.p, cantor.depth)?;
            let boundary = Arc::new(build_cantor_domain(&cf)?);
            let mut r = Report::new("cantor domain", config, &["x", "y"]);
            let c = boundary.center();
            r.set("center", [c.x, c.y]);
            r.set("half_edges", boundary.half_edge_count());
            r.set("flat_length", boundary.flat_length());
            r.set("chord_length", boundary.chord_length());
            if let Some(n) = radial_grid {
                if *n < 3 {
                    return Err(Error::InvalidParameter("radial grid needs at least 3 samples".into()));
                }
                let domain = ConvexDomain::cantor(boundary)?;
                let spec = serde_json::to_value(DomainSpec::radial_sampling(&domain, *n))?;
                let mut text = String::new();
                write_json(&mut text, &spec, 0);
                r.raw = Some(text + "\n");
                return Ok(r);
            }
            let vertices = boundary.polygon().vertices();
            for v in vertices.iter().chain(vertices.first()) {
                r.row(vec![v.x.into(), v.y.into()]);
            }
            Ok(r)
        }
    }
}
