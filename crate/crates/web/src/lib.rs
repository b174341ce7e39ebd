//! Browser bindings for the interactive demo in `www/`.
//!
//! Every export returns flat numeric arrays so the page can draw them on a
//! canvas without any serialization layer.

use nalgebra::DVector;
use saddlewalk::analysis::{self, GridSpec};
use saddlewalk::flows::integrate;
use saddlewalk::reduced::{self, Branch, ReducedState};
use saddlewalk::singularity::locate_2d;
use saddlewalk::{Dynamics, IntegratorConfig, ModelSpec, Result};
use wasm_bindgen::prelude::*;

fn js(e: saddlewalk::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Terminal labels of a basin scan on the 2D double well, row-major with
/// `ny` rows of `nx` cells. Codes index into `label_names()`.
pub fn basin_labels(alpha: f64, gad: bool, eps: f64, bounds: [f64; 4], nx: usize, ny: usize) -> Result<Vec<u8>> {
    let m = ModelSpec::double_well_2d(alpha).build()?;
    let grid = GridSpec::new([bounds[0], bounds[2]], [bounds[1], bounds[3]], nx, ny);
    let dynamics = if gad { Dynamics::Gad } else { Dynamics::Isd };
    let cfg = IntegratorConfig {
        eps,
        t_max: 20.0,
        ..Default::default()
    };
    let map = analysis::basin_scan(&m, dynamics, &grid, &cfg)?;
    Ok(map.cells.iter().map(|c| c.label).collect())
}

/// GAD path around the isotropic singularity, started at `scale` times the
/// predicted orbit radius. Layout: `[predicted, x0, y0, x1, y1, ...]`.
pub fn gad_orbit(alpha: f64, eps: f64, scale: f64, periods: f64) -> Result<Vec<f64>> {
    let m = ModelSpec::isotropic(alpha, 1.0).build()?;
    let center = locate_2d(&m, &DVector::zeros(2))?;
    let (radius, _, _, omega) = analysis::cycle_prediction(&center, eps)?;
    let phi = 0.5 * omega;
    let x0 = DVector::from_vec(vec![scale * radius, 0.0]);
    let v0 = DVector::from_vec(vec![phi.cos(), phi.sin()]);
    let cfg = IntegratorConfig {
        eps,
        dt: eps / 100.0,
        dt_max: eps / 20.0,
        t_max: periods * eps,
        tol_g: f64::MIN_POSITIVE,
        r_max: f64::MAX,
        ..Default::default()
    };
    let traj = integrate(&m, Dynamics::Gad, &x0, Some(&v0), &cfg)?;
    let mut out = Vec::with_capacity(1 + 2 * traj.samples.len());
    out.push(radius);
    for s in &traj.samples {
        out.extend_from_slice(&s.x);
    }
    Ok(out)
}

/// Reduced `(r, omega)` path plus fixed points. Layout:
/// `[r0, omega_plus, omega_minus, stable, t0, r0, w0, t1, r1, w1, ...]`
/// with `stable` = 1 (plus), -1 (minus) or 0.
pub fn reduced_orbit(alpha: f64, r: f64, omega: f64, t_end: f64) -> Result<Vec<f64>> {
    let fp = reduced::fixed_points(alpha)?;
    let stable = match fp.stable_branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
        Branch::Undecided => 0.0,
    };
    let path = reduced::reduced_path(ReducedState { r, omega }, alpha, t_end, 0.01)?;
    let mut out = vec![fp.r0, fp.omega0_plus, fp.omega0_minus, stable];
    for p in path {
        out.extend_from_slice(&p);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = labelNames)]
pub fn label_names() -> Vec<String> {
    analysis::LABELS.iter().map(|s| s.to_string()).collect()
}

#[wasm_bindgen(js_name = basinMap)]
#[allow(clippy::too_many_arguments)]
pub fn basin_map_js(
    alpha: f64,
    gad: bool,
    eps: f64,
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
    nx: usize,
    ny: usize,
) -> std::result::Result<Vec<u8>, JsError> {
    basin_labels(alpha, gad, eps, [xlo, xhi, ylo, yhi], nx, ny).map_err(js)
}

#[wasm_bindgen(js_name = gadOrbit)]
pub fn gad_orbit_js(alpha: f64, eps: f64, scale: f64, periods: f64) -> std::result::Result<Vec<f64>, JsError> {
    gad_orbit(alpha, eps, scale, periods).map_err(js)
}

#[wasm_bindgen(js_name = reducedOrbit)]
pub fn reduced_orbit_js(alpha: f64, r: f64, omega: f64, t_end: f64) -> std::result::Result<Vec<f64>, JsError> {
    reduced_orbit(alpha, r, omega, t_end).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn basin_labels_shape_and_saddle_at_origin() {
        let l = basin_labels(6.0, false, 0.1, [-1.5, 1.5, -1.0, 1.0], 7, 5).unwrap();
        assert_eq!(l.len(), 35);
        assert_eq!(l[2 * 7 + 3], analysis::label_code("ConvergedToSaddle"));
    }

    #[test]
    fn gad_orbit_stays_near_prediction() {
        let out = gad_orbit(FRAC_PI_4, 0.01, 1.0, 50.0).unwrap();
        let predicted = out[0];
        let (x, y) = (out[out.len() - 2], out[out.len() - 1]);
        let r = x.hypot(y);
        assert!((r - predicted).abs() / predicted < 0.1, "{r} vs {predicted}");
    }

    #[test]
    fn reduced_orbit_header() {
        let out = reduced_orbit(FRAC_PI_4, 1.0, 2.0, 1.0).unwrap();
        assert!((out[0] - 0.8408964152537145).abs() < 1e-12);
        assert_eq!(out[3], 1.0);
        assert_eq!((out.len() - 4) % 3, 0);
        assert_eq!(&out[4..7], &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn rejects_unstable_angle() {
        assert!(reduced_orbit(2.0, 1.0, 0.0, 1.0).is_err());
    }
}
