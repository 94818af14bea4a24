//! On-disk formats: CSV emission and the checkpoint codec.
//!
//! Every float is printed with `{:.16e}` (17 significant digits), which
//! round-trips any f64 exactly, and all documents use LF line endings and end
//! with a newline.  Given one config on one platform, every byte of output is
//! reproducible.
//!
//! Checkpoint layout: five fixed header lines
//!
//! ```text
//! dim = 1
//! lengths = 1.0000000000000000e0
//! cutoff = 16
//! time = 2.5000000000000000e-1
//! eps = 1.0000000000000001e-1
//! ```
//!
//! followed by one line per mode, `j1 j2 theta phi sigma`, in the basis's
//! sorted mode order.  Loading validates dimension, lengths, cutoff, and the
//! mode indices against the active basis.

use thiserror::Error;

use crate::basis::{BasisDescriptor, SpectralField};
use crate::model::SimState;
use crate::monitor::{MonitorRecord, RECORD_COLUMNS};
use crate::potential::PropertyCheck;
use crate::study::{StudyReport, DIFF_NORM_COLUMNS};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("checkpoint line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("checkpoint does not match the active basis: {what} is {got}, expected {expected}")]
    HeaderMismatch { what: &'static str, expected: String, got: String },
}

/// Exact-precision float formatting shared by every writer.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render monitor records as CSV with the fixed column header.
pub fn timeseries_csv(records: &[MonitorRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 32 * 16);
    out.push_str(&RECORD_COLUMNS.join(","));
    out.push('\n');
    for rec in records {
        let row: Vec<String> = rec.values().iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Render a study report as CSV: the two parameters, every difference norm,
/// the ratio where one applies (empty cell otherwise), and the row status.
pub fn study_csv(report: &StudyReport) -> String {
    let mut out = String::new();
    out.push_str("param_a,param_b,");
    out.push_str(&DIFF_NORM_COLUMNS.join(","));
    out.push_str(",ratio,status\n");
    for row in &report.rows {
        out.push_str(&format_float(row.param_a));
        out.push(',');
        out.push_str(&format_float(row.param_b));
        for v in row.norms.values() {
            out.push(',');
            out.push_str(&format_float(v));
        }
        out.push(',');
        if let Some(r) = row.ratio {
            out.push_str(&format_float(r));
        }
        out.push(',');
        out.push_str(row.status);
        out.push('\n');
    }
    out
}

/// Render potential property checks as CSV.
pub fn potential_csv(checks: &[PropertyCheck]) -> String {
    let mut out = String::from("property,worst_violation,arg_at_worst\n");
    for c in checks {
        out.push_str(c.property);
        out.push(',');
        out.push_str(&format_float(c.worst_violation));
        out.push(',');
        out.push_str(&format_float(c.arg_at_worst));
        out.push('\n');
    }
    out
}

/// Serialize a state against its basis.
pub fn save_checkpoint(basis: &BasisDescriptor, state: &SimState, eps: f64) -> String {
    let lengths: Vec<String> =
        basis.domain().lengths().iter().map(|&l| format_float(l)).collect();
    let mut out = String::new();
    out.push_str(&format!("dim = {}\n", basis.domain().dim()));
    out.push_str(&format!("lengths = {}\n", lengths.join(" ")));
    out.push_str(&format!("cutoff = {}\n", basis.cutoff()));
    out.push_str(&format!("time = {}\n", format_float(state.t)));
    out.push_str(&format!("eps = {}\n", format_float(eps)));
    for (i, m) in basis.modes().iter().enumerate() {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            m[0],
            m[1],
            format_float(state.theta.coeffs[i]),
            format_float(state.phi.coeffs[i]),
            format_float(state.sigma.coeffs[i]),
        ));
    }
    out
}

/// A deserialized checkpoint: the state plus the regularization level it was
/// produced with (informational; the loader does not force it on the run).
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub state: SimState,
    pub eps: f64,
}

fn header_value<'t>(
    lines: &mut std::iter::Enumerate<std::str::Lines<'t>>,
    key: &'static str,
) -> Result<(usize, &'t str), IoError> {
    let (idx, line) = lines
        .next()
        .ok_or(IoError::Malformed { line: 0, message: format!("missing `{key}` header") })?;
    let line_no = idx + 1;
    let prefix = format!("{key} = ");
    match line.strip_prefix(&prefix) {
        Some(rest) => Ok((line_no, rest.trim())),
        None => Err(IoError::Malformed {
            line: line_no,
            message: format!("expected `{key} = ...`, got `{line}`"),
        }),
    }
}

/// Parse a checkpoint document and validate it against `basis`.
pub fn load_checkpoint(text: &str, basis: &BasisDescriptor) -> Result<Checkpoint, IoError> {
    let mut lines = text.lines().enumerate();

    let (line_no, dim_str) = header_value(&mut lines, "dim")?;
    let dim: usize = dim_str.parse().map_err(|_| IoError::Malformed {
        line: line_no,
        message: format!("`{dim_str}` is not a dimension"),
    })?;
    if dim != basis.domain().dim() {
        return Err(IoError::HeaderMismatch {
            what: "dim",
            expected: basis.domain().dim().to_string(),
            got: dim.to_string(),
        });
    }

    let (line_no, lengths_str) = header_value(&mut lines, "lengths")?;
    let lengths: Vec<f64> = lengths_str
        .split_whitespace()
        .map(|s| {
            s.parse::<f64>().map_err(|_| IoError::Malformed {
                line: line_no,
                message: format!("`{s}` is not a length"),
            })
        })
        .collect::<Result<_, _>>()?;
    if lengths != basis.domain().lengths() {
        return Err(IoError::HeaderMismatch {
            what: "lengths",
            expected: format!("{:?}", basis.domain().lengths()),
            got: format!("{lengths:?}"),
        });
    }

    let (line_no, cutoff_str) = header_value(&mut lines, "cutoff")?;
    let cutoff: usize = cutoff_str.parse().map_err(|_| IoError::Malformed {
        line: line_no,
        message: format!("`{cutoff_str}` is not a cutoff"),
    })?;
    if cutoff != basis.cutoff() {
        return Err(IoError::HeaderMismatch {
            what: "cutoff",
            expected: basis.cutoff().to_string(),
            got: cutoff.to_string(),
        });
    }

    let (line_no, time_str) = header_value(&mut lines, "time")?;
    let t: f64 = time_str.parse().map_err(|_| IoError::Malformed {
        line: line_no,
        message: format!("`{time_str}` is not a time"),
    })?;

    let (line_no, eps_str) = header_value(&mut lines, "eps")?;
    let eps: f64 = eps_str.parse().map_err(|_| IoError::Malformed {
        line: line_no,
        message: format!("`{eps_str}` is not a regularization level"),
    })?;

    let n = basis.num_modes();
    let mut theta = vec![0.0; n];
    let mut phi = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    for i in 0..n {
        let (idx, line) = lines.next().ok_or(IoError::Malformed {
            line: 5 + i,
            message: format!("missing mode line {} of {n}", i + 1),
        })?;
        let line_no = idx + 1;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(IoError::Malformed {
                line: line_no,
                message: format!("expected `j1 j2 theta phi sigma`, got `{line}`"),
            });
        }
        let j1: usize = parts[0].parse().map_err(|_| IoError::Malformed {
            line: line_no,
            message: format!("`{}` is not a mode index", parts[0]),
        })?;
        let j2: usize = parts[1].parse().map_err(|_| IoError::Malformed {
            line: line_no,
            message: format!("`{}` is not a mode index", parts[1]),
        })?;
        if [j1, j2] != basis.modes()[i] {
            return Err(IoError::HeaderMismatch {
                what: "mode order",
                expected: format!("{:?}", basis.modes()[i]),
                got: format!("[{j1}, {j2}]"),
            });
        }
        let parse = |s: &str| -> Result<f64, IoError> {
            s.parse::<f64>().map_err(|_| IoError::Malformed {
                line: line_no,
                message: format!("`{s}` is not a coefficient"),
            })
        };
        theta[i] = parse(parts[2])?;
        phi[i] = parse(parts[3])?;
        sigma[i] = parse(parts[4])?;
    }
    if let Some((idx, extra)) = lines.next() {
        if !extra.trim().is_empty() {
            return Err(IoError::Malformed {
                line: idx + 1,
                message: format!("unexpected content after the last mode: `{extra}`"),
            });
        }
    }

    Ok(Checkpoint {
        state: SimState {
            t,
            theta: SpectralField::from_coeffs(theta),
            phi: SpectralField::from_coeffs(phi),
            sigma: SpectralField::from_coeffs(sigma),
        },
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, BoxDomain};
    use crate::model::InitialData;
    use crate::monitor::EnergyAccumulator;
    use crate::study::{DiffNorms, StudyRow, STATUS_OK};

    fn basis_1d(n: usize) -> BasisDescriptor {
        build_basis(&BoxDomain::interval(1.0).unwrap(), n, None).unwrap()
    }

    #[test]
    fn float_formatting_round_trips_exactly() {
        for x in [
            0.0,
            -0.0,
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-300,
            -2.5e17,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn single_record_yields_a_two_line_document() {
        let b = basis_1d(4);
        let params = crate::model::ModelParams::default();
        let state = SimState::zeros(&b);
        let mut acc = EnergyAccumulator::default();
        let rec = crate::monitor::make_record(&params, &b, &state, &mut acc).unwrap();
        let csv = timeseries_csv(&[rec]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("t,free_energy,"));
        assert_eq!(lines[1].split(',').count(), 15);
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn timeseries_round_trips_through_parse() {
        let b = basis_1d(6);
        let params = crate::model::ModelParams::default();
        let mut state = SimState::zeros(&b);
        state.phi = InitialData::TanhBump { center: 0.5, width: 0.2, amplitude: 0.9 }
            .build(&b)
            .unwrap();
        let mut acc = EnergyAccumulator::default();
        let rec = crate::monitor::make_record(&params, &b, &state, &mut acc).unwrap();
        let csv = timeseries_csv(&[rec]);
        let data_line = csv.lines().nth(1).unwrap();
        let parsed: Vec<f64> = data_line.split(',').map(|s| s.parse().unwrap()).collect();
        for (p, v) in parsed.iter().zip(rec.values()) {
            assert_eq!(p.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn checkpoint_round_trip_is_bitwise() {
        let b = basis_1d(8);
        let state = SimState {
            t: 0.375,
            theta: InitialData::RandomBand { max_mode: 8, amplitude: 1.0, seed: 7 }
                .build(&b)
                .unwrap(),
            phi: InitialData::RandomBand { max_mode: 8, amplitude: 0.3, seed: 8 }
                .build(&b)
                .unwrap(),
            sigma: InitialData::RandomBand { max_mode: 8, amplitude: 2.0, seed: 9 }
                .build(&b)
                .unwrap(),
        };
        let doc = save_checkpoint(&b, &state, 0.05);
        let ck = load_checkpoint(&doc, &b).unwrap();
        assert_eq!(ck.eps, 0.05);
        assert_eq!(ck.state.t, state.t);
        for (a, bb) in [
            (&ck.state.theta, &state.theta),
            (&ck.state.phi, &state.phi),
            (&ck.state.sigma, &state.sigma),
        ] {
            for (x, y) in a.coeffs.iter().zip(&bb.coeffs) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn truncated_checkpoint_reports_the_line() {
        let b = basis_1d(8);
        let doc = save_checkpoint(&b, &SimState::zeros(&b), 0.1);
        let cut: String = doc.lines().take(8).map(|l| format!("{l}\n")).collect();
        match load_checkpoint(&cut, &b).unwrap_err() {
            IoError::Malformed { line, .. } => assert!(line >= 8, "line {line}"),
            other => panic!("expected Malformed, got {other}"),
        }
    }

    #[test]
    fn checkpoint_refuses_a_different_cutoff() {
        let big = basis_1d(16);
        let small = basis_1d(8);
        let doc = save_checkpoint(&big, &SimState::zeros(&big), 0.1);
        match load_checkpoint(&doc, &small).unwrap_err() {
            IoError::HeaderMismatch { what, .. } => assert_eq!(what, "cutoff"),
            other => panic!("expected HeaderMismatch, got {other}"),
        }
    }

    #[test]
    fn study_csv_has_the_fixed_schema() {
        let report = StudyReport {
            rows: vec![StudyRow {
                param_a: 8.0,
                param_b: 16.0,
                norms: DiffNorms { sup_h_phi: 0.25, ..Default::default() },
                ratio: None,
                status: STATUS_OK,
            }],
        };
        let csv = study_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), 16); // 2 params + 12 norms + ratio + status
        assert!(lines[0].ends_with(",ratio,status"));
        assert!(lines[1].ends_with(",ok"));
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells[14], "", "no ratio for refinement rows");
    }

    #[test]
    fn potential_csv_lists_every_check() {
        let checks = crate::potential::check_potential(
            &crate::potential::PotentialSpec::Quartic,
            &crate::potential::YosidaConfig::with_eps(0.1),
            (-3.0, 3.0),
            501,
        )
        .unwrap();
        let csv = potential_csv(&checks);
        assert_eq!(csv.lines().count(), checks.len() + 1);
        assert!(csv.starts_with("property,worst_violation,arg_at_worst\n"));
        assert!(csv.contains("envelope_identity"));
    }
}
