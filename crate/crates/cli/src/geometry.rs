use clap::Args;
use hilbert_lab::hilbert::{
    blowup_limit, blowup_ratio, busemann_density, centro_projective_area, finsler_sample, hilbert_distance,
    unit_ball_area, CurvatureProfile,
};
use hilbert_lab::{Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::output::{Cell, Report};
use crate::{parse_point, pt, Common, DomainArgs};

#[derive(Args, Serialize)]
pub struct DistArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub p: [f64; 2],
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub q: [f64; 2],
}

#[derive(Args, Serialize)]
pub struct NormArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Base point; defaults to the domain basepoint.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub v: [f64; 2],
}

#[derive(Args, Serialize)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Base point; defaults to the domain basepoint.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Option<[f64; 2]>,
}

#[derive(Args, Serialize)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Direction of the boundary point, seen from the basepoint.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Values of 1 - λ.
    #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
    pub eps: Vec<f64>,
}

#[derive(Args, Serialize)]
pub struct AreaArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Origin; defaults to the domain basepoint.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub origin: Option<[f64; 2]>,
}

pub fn dist(a: &DistArgs, config: Value) -> Result<Report> {
    let d = a.domain.load()?;
    let value = hilbert_distance(&d, pt(a.p), pt(a.q))?;
    let mut r = Report::new("dist", config, &["p_x", "p_y", "q_x", "q_y", "distance"]);
    r.row(vec![a.p[0].into(), a.p[1].into(), a.q[0].into(), a.q[1].into(), value.into()]);
    Ok(r)
}

pub fn norm(a: &NormArgs, config: Value) -> Result<Report> {
    let d = a.domain.load()?;
    let x = a.x.map_or(d.basepoint(), pt);
    let v = pt(a.v);
    let len = v.norm();
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::InvalidParameter("vector must be nonzero".into()));
    }
    let s = finsler_sample(&d, x, v / len)?;
    let mut r = Report::new("norm", config, &["x", "y", "v_x", "v_y", "t_plus", "t_minus", "norm", "unit_ball_radius"]);
    r.row(vec![
        x.x.into(),
        x.y.into(),
        v.x.into(),
        v.y.into(),
        s.t_plus.into(),
        s.t_minus.into(),
        (len * s.norm_value).into(),
        s.unit_ball_radius().into(),
    ]);
    Ok(r)
}

pub fn sigma(a: &SigmaArgs, common: &Common, config: Value) -> Result<Report> {
    let d = a.domain.load()?;
    let x = a.x.map_or(d.basepoint(), pt);
    let area = unit_ball_area(&d, x, common.quad_tol)?;
    let sigma = busemann_density(&d, x, common.quad_tol)?;
    let mut r = Report::new("sigma", config, &["x", "y", "unit_ball_area", "sigma"]);
    r.row(vec![x.x.into(), x.y.into(), area.into(), sigma.into()]);
    Ok(r)
}

pub fn blowup(a: &BlowupArgs, common: &Common, config: Value) -> Result<Report> {
    let d = a.domain.load()?;
    let mut r = Report::new("blowup", config, &["one_minus_lambda", "ratio"]);
    for &eps in &a.eps {
        let ratio = blowup_ratio(&d, a.theta, 1.0 - eps, common.quad_tol)?;
        r.row(vec![eps.into(), ratio.into()]);
    }
    let curv = CurvatureProfile::for_domain(&d);
    if curv.is_available() {
        let p = d.boundary_point(a.theta);
        let (n, k) = curv.at(p);
        let limit = blowup_limit(k, n.dot(p - d.basepoint()));
        r.set("limit", limit);
        r.set("curvature", k);
    }
    Ok(r)
}

pub fn area(a: &AreaArgs, common: &Common, config: Value) -> Result<Report> {
    let d = a.domain.load()?;
    let o = a.origin.map_or(d.basepoint(), pt);
    let value = centro_projective_area(&d, &CurvatureProfile::for_domain(&d), o, common.quad_tol)?;
    let mut r = Report::new("area", config, &["origin_x", "origin_y", "area"]);
    r.row(vec![Cell::F(o.x), Cell::F(o.y), value.into()]);
    Ok(r)
}
