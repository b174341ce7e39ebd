//! Plain-text serialization of trajectories and tables.
//!
//! Numbers are written with 17 significant digits in scientific notation so
//! that a CSV round trip reproduces every `f64` exactly.

use crate::flows::Trajectory;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with columns `t, x_1.., v_1.., grad_norm, lambda1, lambda2, gap, v_err`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.samples.first().map_or(0, |s| s.x.len());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=n).map(|i| format!("v_{i}")));
    header.extend(["grad_norm", "lambda1", "lambda2", "gap", "v_err"].map(String::from));
    let rows: Vec<Vec<f64>> = traj
        .samples
        .iter()
        .map(|s| {
            let mut r = vec![s.t];
            r.extend(&s.x);
            r.extend(&s.v);
            r.extend([s.grad_norm, s.lambda1, s.lambda2, s.gap, s.v_err]);
            r
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    table_csv(&header, &rows)
}

pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    serde_json::to_string_pretty(traj).expect("trajectory serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::{integrate, Dynamics, IntegratorConfig};
    use crate::landscape::ModelSpec;
    use nalgebra::DVector;

    #[test]
    fn csv_round_trips_exactly() {
        let m = ModelSpec::double_well_2d(2.0).build().unwrap();
        let t = integrate(&m, Dynamics::Isd, &DVector::from_vec(vec![0.3, 0.4]), None, &IntegratorConfig::default())
            .unwrap();
        let csv = trajectory_csv(&t);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,x_1,x_2,v_1,v_2,grad_norm,lambda1,lambda2,gap,v_err"
        );
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(first[1], 0.3);
        let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(last[5], t.last().grad_norm);
        assert_eq!(csv.lines().count(), t.samples.len() + 1);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn json_has_stop_tag() {
        let m = ModelSpec::double_well_1d().build().unwrap();
        let t = integrate(&m, Dynamics::Isd, &DVector::from_vec(vec![0.5]), None, &IntegratorConfig::default())
            .unwrap();
        let j = trajectory_json(&t);
        assert!(j.contains("\"tag\": \"ConvergedToSaddle\""));
    }
}
