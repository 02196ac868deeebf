use clap::{Args, Subcommand, ValueEnum};
use hilbert_lab::cantor::CantorFunction;
use hilbert_lab::entropy::{
    cantor_series_length, entropy_estimate, general_gap_series, series_bounds, EntropyEstimate, GapCountRule, Mode,
    RadiusGrid, SeriesParams, Spacing,
};
use hilbert_lab::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{Cell, Report};
use crate::{Common, DomainArgs};

#[derive(ValueEnum, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    Linear,
    Geometric,
}

#[derive(ValueEnum, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleArg {
    /// 2^(N-1) gaps at generation N.
    Actual,
    /// 2^N gaps at generation N.
    Paper,
}

impl From<RuleArg> for GapCountRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Actual => GapCountRule::Actual,
            RuleArg::Paper => GapCountRule::Paper,
        }
    }
}

#[derive(Args, Serialize, Clone, Copy)]
pub struct GridArgs {
    #[arg(long)]
    pub rmin: f64,
    #[arg(long)]
    pub rmax: f64,
    /// Radii in the sweep; 0 gives an empty table, otherwise at least 6.
    #[arg(long, default_value_t = 13)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
    pub spacing: SpacingArg,
}

impl GridArgs {
    fn grid(&self) -> RadiusGrid {
        let spacing = match self.spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Geometric => Spacing::Geometric,
        };
        RadiusGrid { min: self.rmin, max: self.rmax, count: self.count, spacing }
    }
}

#[derive(Args, Serialize, Clone, Copy)]
pub struct SeriesArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Paper)]
    pub rule: RuleArg,
    /// Constant C ≥ 1 multiplying each gap.
    #[arg(long, default_value_t = 1.0)]
    pub prefactor: f64,
    /// Count forward and backward gap terms.
    #[arg(long)]
    pub two_sided: bool,
}

impl SeriesArgs {
    fn params(&self) -> Result<SeriesParams> {
        Ok(SeriesParams::new(self.p, self.rule.into())?.with_prefactor(self.prefactor)?.two_sided(self.two_sided))
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
pub enum EntropyCommand {
    /// Lengths of Hilbert spheres about the basepoint.
    Spheres {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Busemann volumes of Hilbert balls about the basepoint.
    Balls {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed-form gap series of a standard Cantor domain.
    Series {
        #[command(flatten)]
        series: SeriesArgs,
        /// Sum over the explicit gap list of this depth instead.
        #[arg(long)]
        depth: Option<u32>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Explicit lower and upper bounds around the series.
    Bounds {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 0.0)]
        rmin: f64,
        #[arg(long, default_value_t = 60.0)]
        rmax: f64,
        /// Grid step; ignored when `count` is given.
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        count: Option<usize>,
    },
}

const SWEEP_COLUMNS: [&str; 4] = ["R", "value", "log_value", "local_slope"];

fn sweep_report(name: &str, config: Value, est: &EntropyEstimate, grid: &RadiusGrid, tolerances: Value) -> Report {
    let mut r = Report::new(name, config, &SWEEP_COLUMNS);
    for i in 0..est.radii.len() {
        let local = if i == 0 { Cell::Empty } else { Cell::F(est.local_slopes[i - 1]) };
        r.row(vec![est.radii[i].into(), est.values[i].into(), est.log_values[i].into(), local]);
    }
    r.set("mode", est.mode);
    r.set("slope", est.slope);
    r.set("intercept", est.intercept);
    r.set("grid", grid);
    r.set("tolerances", tolerances);
    r
}

pub fn run(cmd: &EntropyCommand, common: &Common, config: Value) -> Result<Report> {
    match cmd {
        EntropyCommand::Spheres { domain, grid } | EntropyCommand::Balls { domain, grid } => {
            let (name, mode) = match cmd {
                EntropyCommand::Spheres { .. } => ("entropy spheres", Mode::Sphere),
                _ => ("entropy balls", Mode::Ball),
            };
            let d = domain.load()?;
            if grid.count == 0 {
                return Ok(Report::new(name, config, &SWEEP_COLUMNS));
            }
            let g = grid.grid();
            let est = entropy_estimate(&d, &g, mode, common.quad_tol)?;
            let tol = json!({ "quad_tol": common.quad_tol, "tol_geo": d.tol_geo() });
            Ok(sweep_report(name, config, &est, &g, tol))
        }
        EntropyCommand::Series { series, depth, grid } => {
            let params = series.params()?;
            if grid.count == 0 {
                return Ok(Report::new("entropy series", config, &SWEEP_COLUMNS));
            }
            let g = grid.grid();
            let radii = g.radii()?;
            let values: Vec<f64> = match depth {
                None => radii.iter().map(|&r| cantor_series_length(&params, r).value).collect(),
                Some(n) => {
                    let cf = CantorFunction::new(series.p, *n)?;
                    let mut gaps: Vec<f64> = cf.gap_list().iter().map(|g| g.len()).collect();
                    gaps.sort_by(|a, b| b.total_cmp(a));
                    radii
                        .iter()
                        .map(|&r| general_gap_series(&gaps, cf.alpha(), r, series.prefactor))
                        .collect::<Result<_>>()?
                }
            };
            let est = EntropyEstimate::from_values(Mode::Series, radii, values)?;
            let mut r = sweep_report("entropy series", config, &est, &g, json!({ "relative_cutoff": 1e-16 }));
            r.set("rate", params.rate());
            Ok(r)
        }
        EntropyCommand::Bounds { series, rmin, rmax, step, count } => {
            let params = series.params()?;
            if !(*rmin >= 0.0 && rmax >= rmin && rmax.is_finite()) {
                return Err(Error::InvalidParameter(format!("radius range [{rmin}, {rmax}] is invalid")));
            }
            let radii: Vec<f64> = match count {
                Some(0) => Vec::new(),
                Some(1) => vec![*rmin],
                Some(n) => (0..*n).map(|i| rmin + (rmax - rmin) * i as f64 / (*n - 1) as f64).collect(),
                None => {
                    if !(*step > 0.0) {
                        return Err(Error::InvalidParameter(format!("step {step} must be positive")));
                    }
                    let n = ((rmax - rmin) / step + 1e-9).floor() as usize + 1;
                    (0..n).map(|i| rmin + step * i as f64).collect()
                }
            };
            let mut r =
                Report::new("entropy bounds", config, &["R", "lower", "series", "upper", "upper_corrected", "holds"]);
            let mut violations = 0usize;
            for &radius in &radii {
                let v = cantor_series_length(&params, radius).value;
                let b = series_bounds(&params, radius);
                let holds = b.lower <= v && v <= b.upper;
                violations += !holds as usize;
                r.row(vec![
                    radius.into(),
                    b.lower.into(),
                    v.into(),
                    b.upper.into(),
                    b.upper_corrected.into(),
                    holds.into(),
                ]);
            }
            r.set("violations", violations);
            r.set("rate", params.rate());
            Ok(r)
        }
    }
}
