//! CSV emission: one row per grid node, values at 17 significant digits so
//! every f64 round-trips exactly, LF line endings.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use pfode_core::Trajectory;

use crate::error::CliError;

/// Format with exactly 17 significant digits in positional notation
/// (scientific for extreme magnitudes). "0.33333333333333331" for 1/3.
pub fn fmt_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // Exact decimal exponent via the shortest-roundtrip scientific form.
    let sci = format!("{:e}", v.abs());
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let prec = 16 - exp;
    if (0..=40).contains(&prec) {
        format!("{:.*}", prec as usize, v)
    } else {
        format!("{:.16e}", v)
    }
}

/// Write a trajectory as CSV: header "t,<names...>,segment", one row per
/// node, segment as its 1-based regime index.
pub fn emit_csv(
    traj: &Trajectory,
    component_names: &[&str],
    path: &Path,
) -> Result<(), CliError> {
    if component_names.len() != traj.dimension() {
        return Err(CliError::Validation(format!(
            "{} component names for dimension {}",
            component_names.len(),
            traj.dimension()
        )));
    }
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    let mut line = String::from("t");
    for name in component_names {
        line.push(',');
        line.push_str(name);
    }
    line.push_str(",segment\n");
    w.write_all(line.as_bytes())?;
    for j in 0..traj.len() {
        let mut row = fmt_sig17(traj.times[j]);
        for value in &traj.states[j] {
            row.push(',');
            row.push_str(&fmt_sig17(*value));
        }
        row.push(',');
        row.push_str(&traj.segment_of[j].index().to_string());
        row.push('\n');
        w.write_all(row.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pfode_core::Segment;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_sig17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_sig17(0.0), "0");
        assert_eq!(fmt_sig17(1.0), "1.0000000000000000");
        assert_eq!(fmt_sig17(-0.5), "-0.50000000000000000");
        assert_eq!(fmt_sig17(0.1), "0.10000000000000001");
    }

    #[test]
    fn formatting_round_trips() {
        for v in [
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-8,
            123456.789,
            -9.87e12,
            6.02e23,
            0.01,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_sig17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    fn toy() -> Trajectory {
        Trajectory {
            dt: 0.5,
            times: vec![0.0, 0.5, 1.0, 1.5],
            states: vec![vec![1.0], vec![2.0], vec![1.0 / 3.0], vec![4.0]],
            segment_of: vec![
                Segment::Classical,
                Segment::Fractional,
                Segment::Fractional,
                Segment::Stochastic,
            ],
            k1: 1,
            k2: 3,
            seed_used: 0,
        }
    }

    #[test]
    fn csv_layout() {
        let dir = std::env::temp_dir().join("pfode_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("toy.csv");
        emit_csv(&toy(), &["u"], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], "t,u,segment");
        assert_eq!(lines.len(), 6, "header + 4 rows + trailing newline");
        assert!(lines[3].starts_with("1.0000000000000000,0.33333333333333331,2"));
        // Segment column transitions 1 -> 2 at exactly index k1 = 1.
        assert!(lines[1].ends_with(",1"));
        assert!(lines[2].ends_with(",2"));
        assert!(lines[4].ends_with(",3"));
        assert!(!text.contains('\r'));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn name_count_must_match() {
        let dir = std::env::temp_dir();
        assert!(emit_csv(&toy(), &["a", "b"], &dir.join("x.csv")).is_err());
    }
}
