use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::Trajectory;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Column label with its unit, e.g. `q_avg [ug/g]`.
pub fn observable_label(name: &str) -> String {
    let unit = match name {
        "c_avg" => "1",
        _ => "ug/g",
    };
    format!("{name} [{unit}]")
}

pub fn trajectory_header(traj: &Trajectory) -> Vec<String> {
    std::iter::once("t [year]".to_string())
        .chain(traj.names.iter().map(|n| observable_label(n)))
        .collect()
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let header = trajectory_header(traj);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = traj.times.iter().zip(&traj.observables).map(|(t, o)| {
        std::iter::once(fmt_f64(*t))
            .chain(o.iter().map(|&v| fmt_f64(v)))
            .collect()
    });
    write_csv(path, &header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 4.4557e-300, -2.5e17, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
