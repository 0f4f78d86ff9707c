//! Comma-separated renderings of experiment results.
//!
//! Every table starts with a header row. Numbers are written in scientific
//! notation with 15 significant digits; failed cells are written as `NA`.

use std::fmt::Write;

use crate::profiles::ProfileSample;
use crate::propagation::Trajectory;

use super::{EfficiencyCurve, SweepResult};

/// Marker for a cell whose integration failed.
pub const MISSING: &str = "NA";

pub fn number(x: f64) -> String {
    format!("{x:.14e}")
}

fn cell(x: Option<f64>) -> String {
    x.map(number).unwrap_or_else(|| MISSING.to_string())
}

fn row(out: &mut String, fields: impl IntoIterator<Item = String>) {
    let fields: Vec<String> = fields.into_iter().collect();
    writeln!(out, "{}", fields.join(",")).unwrap();
}

pub fn profile_csv(samples: &[ProfileSample]) -> String {
    let mut out = String::from(
        "z_mm,delta_per_mm,kappa_per_mm,kappa_a_per_mm,theta_rad,theta_dot_rad_per_mm,\
         kappa_eff_per_mm,phi_rad,phi_dot_rad_per_mm,delta_eff_per_mm\n",
    );
    for s in samples {
        row(
            &mut out,
            [s.z, s.delta, s.kappa, s.kappa_a, s.theta, s.theta_dot, s.kappa_eff, s.phi, s.phi_dot, s.delta_eff]
                .map(number),
        );
    }
    out
}

pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("z_mm,P1,P2,re_rho12,im_rho12\n");
    for s in &trajectory.samples {
        row(&mut out, [s.z, s.p1, s.p2, s.rho12.re, s.rho12.im].map(number));
    }
    out
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut header = vec!["kappa0_per_mm".to_string(), "two_L_mm".to_string()];
    header.extend(result.modes.iter().map(|m| format!("transfer_{}", m.column())));
    let mut out = String::new();
    row(&mut out, header);
    for (i, &kappa0) in result.grid.kappa0.iter().enumerate() {
        for (j, &l) in result.grid.half_length.iter().enumerate() {
            let mut fields = vec![number(kappa0), number(2.0 * l)];
            fields.extend((0..result.modes.len()).map(|m| cell(result.cell(m, i, j))));
            row(&mut out, fields);
        }
    }
    out
}

/// One row per length, one efficiency column per mode. Curves must share
/// their length axis, as produced by [`super::efficiency_curve`].
pub fn efficiency_csv(curves: &[EfficiencyCurve]) -> String {
    let mut header = vec!["two_L_mm".to_string()];
    header.extend(curves.iter().map(|c| format!("efficiency_{}", c.mode.column())));
    let mut out = String::new();
    row(&mut out, header);
    let Some(first) = curves.first() else { return out };
    for (k, &(two_l, _)) in first.points.iter().enumerate() {
        let mut fields = vec![number(two_l)];
        fields.extend(curves.iter().map(|c| cell(c.points[k].1)));
        row(&mut out, fields);
    }
    out
}

/// `(mode, threshold, shortest 2L or None when not reached)`.
pub fn switch_length_csv(rows: &[(String, f64, Option<f64>)]) -> String {
    let mut out = String::from("mode,threshold,min_two_L_mm\n");
    for (mode, threshold, length) in rows {
        row(&mut out, [mode.clone(), number(*threshold), cell(*length)]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{CouplerMode, SweepGrid};

    #[test]
    fn numbers_keep_fifteen_digits() {
        assert_eq!(number(1.0), "1.00000000000000e0");
        assert_eq!(number(-0.0037349), "-3.73490000000000e-3");
        let third = number(1.0 / 3.0);
        assert_eq!(third, "3.33333333333333e-1");
    }

    #[test]
    fn sweep_table_marks_missing_cells() {
        let result = SweepResult {
            grid: SweepGrid::new(1.0, vec![1.0], vec![0.5, 2.0]).unwrap(),
            modes: vec![CouplerMode::Adiabatic, CouplerMode::sta_gauss()],
            transfer: vec![vec![vec![Some(0.25), Some(0.5)]], vec![vec![None, Some(1.0)]]],
            failures: Vec::new(),
        };
        let csv = sweep_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "kappa0_per_mm,two_L_mm,transfer_adiabatic,transfer_sta_gauss");
        assert_eq!(lines[1], "1.00000000000000e0,1.00000000000000e0,2.50000000000000e-1,NA");
        assert_eq!(lines.len(), 3);
    }
}
