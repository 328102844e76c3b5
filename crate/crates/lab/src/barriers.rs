//! Plot data for the comparison functions: `(t, ξ, η, z)` on a uniform
//! grid over `[-π/2, π/2]`, endpoints included.

use std::f64::consts::{FRAC_PI_2, PI};

use be_spectral::testfn::{eta, xi, BarrierFamily};
use serde::Serialize;

use crate::report::{fmt_f64, write_csv, REPORT_SCHEMA_VERSION};
use crate::LabError;

pub const DEFAULT_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierPoint {
    pub t: f64,
    pub xi: f64,
    pub eta: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierTable {
    pub schema_version: u32,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    /// `μ` for the standard barrier, absent for the σ-barrier.
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub xi_coefficient: f64,
    pub points: Vec<BarrierPoint>,
}

pub fn sample(family: &BarrierFamily, mu: Option<f64>, sigma: Option<f64>, points: usize) -> Result<BarrierTable, LabError> {
    if points < 2 {
        return Err(LabError::Config("need at least two points".into()));
    }
    let points = (0..points)
        .map(|k| {
            // Pin the last node to π/2 exactly.
            let t = if k == points - 1 { FRAC_PI_2 } else { -FRAC_PI_2 + PI * k as f64 / (points - 1) as f64 };
            Ok(BarrierPoint { t, xi: xi(t)?, eta: eta(t)?, z: family.value(t)? })
        })
        .collect::<Result<Vec<_>, be_spectral::Error>>()?;
    Ok(BarrierTable {
        schema_version: REPORT_SCHEMA_VERSION,
        a: family.a,
        b: family.b,
        delta: family.delta,
        mu,
        sigma,
        xi_coefficient: family.xi_coefficient(),
        points,
    })
}

impl BarrierTable {
    pub fn to_csv(&self) -> Result<String, LabError> {
        let rows = self.points.iter().map(|p| vec![fmt_f64(Some(p.t)), fmt_f64(Some(p.xi)), fmt_f64(Some(p.eta)), fmt_f64(Some(p.z))]);
        write_csv(&["t", "xi", "eta", "z"], rows)
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_count() {
        let fam = BarrierFamily::standard(0.0, 1.01, 0.25, 1.0).unwrap();
        let tab = sample(&fam, Some(1.0), None, DEFAULT_POINTS).unwrap();
        assert_eq!(tab.points.len(), 1001);
        assert_eq!(tab.points[0].t, -FRAC_PI_2);
        assert_eq!(tab.points[1000].t, FRAC_PI_2);
        assert!((tab.points[1000].eta - 1.0).abs() < 1e-8);
        assert!(tab.points[500].t.abs() < 1e-15);
        let csv = tab.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1002);
        assert!(csv.starts_with("t,xi,eta,z\n"));
    }
}
