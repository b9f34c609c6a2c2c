//! The canonical branch CSV.

use std::path::Path;

use fkdv::solvers::BranchPoint;
use fkdv::VerdictKind;

use crate::{io_err, CliError, CliResult};

pub const HEADER: [&str; 12] = [
    "c",
    "b",
    "omega",
    "mu",
    "gamma",
    "b_prime",
    "c_plus_2bprime",
    "n_neg",
    "z_zero",
    "verdict",
    "n_modes",
    "residual",
];

/// One row of the branch CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchRow {
    pub c: f64,
    pub b: f64,
    pub omega: f64,
    pub mu: f64,
    pub gamma: f64,
    pub b_prime: f64,
    pub c_plus_2bprime: f64,
    pub n_neg: usize,
    pub z_zero: usize,
    pub verdict: VerdictKind,
    pub n_modes: usize,
    pub residual: f64,
}

impl From<&BranchPoint> for BranchRow {
    fn from(p: &BranchPoint) -> Self {
        BranchRow {
            c: p.c,
            b: p.b,
            omega: p.omega,
            mu: p.mu,
            gamma: p.gamma,
            b_prime: p.b_prime,
            c_plus_2bprime: p.c_plus_2bprime,
            n_neg: p.n_neg,
            z_zero: p.z_zero,
            verdict: p.verdict,
            n_modes: p.n_modes,
            residual: p.residual,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_rows<W: std::io::Write>(out: W, rows: &[BranchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.c),
            fmt_f64(r.b),
            fmt_f64(r.omega),
            fmt_f64(r.mu),
            fmt_f64(r.gamma),
            fmt_f64(r.b_prime),
            fmt_f64(r.c_plus_2bprime),
            r.n_neg.to_string(),
            r.z_zero.to_string(),
            r.verdict.as_str().to_string(),
            r.n_modes.to_string(),
            fmt_f64(r.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[BranchRow]) -> CliResult<()> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    write_rows(file, rows).map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
}

/// Reads rows with the canonical header; errors name the offending row (1-based, header first).
pub fn read_rows<R: std::io::Read>(input: R, name: &str) -> CliResult<Vec<BranchRow>> {
    let perr = |message: String| CliError::Parse { path: name.to_string(), message };
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| perr(format!("row 1: {e}")))?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(perr(format!("row 1: header {:?} is not the branch header", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| perr(format!("row {row}: {e}")))?;
        if rec.len() != HEADER.len() {
            return Err(perr(format!("row {row}: expected {} fields, found {}", HEADER.len(), rec.len())));
        }
        let f = |j: usize| {
            rec[j]
                .parse::<f64>()
                .map_err(|_| perr(format!("row {row}: column {} = '{}' is not a number", HEADER[j], &rec[j])))
        };
        let u = |j: usize| {
            rec[j]
                .parse::<usize>()
                .map_err(|_| perr(format!("row {row}: column {} = '{}' is not a count", HEADER[j], &rec[j])))
        };
        let verdict =
            VerdictKind::parse(&rec[9]).ok_or_else(|| perr(format!("row {row}: unknown verdict '{}'", &rec[9])))?;
        rows.push(BranchRow {
            c: f(0)?,
            b: f(1)?,
            omega: f(2)?,
            mu: f(3)?,
            gamma: f(4)?,
            b_prime: f(5)?,
            c_plus_2bprime: f(6)?,
            n_neg: u(7)?,
            z_zero: u(8)?,
            verdict,
            n_modes: u(10)?,
            residual: f(11)?,
        });
    }
    if rows.is_empty() {
        return Err(perr("no data rows".into()));
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> CliResult<Vec<BranchRow>> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    read_rows(file, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: f64) -> BranchRow {
        BranchRow {
            c,
            b: c + 1.0,
            omega: c + 2.0,
            mu: c + 2.0,
            gamma: 0.1 + c / 3.0,
            b_prime: 1.0,
            c_plus_2bprime: c + 2.0,
            n_neg: 1,
            z_zero: 1,
            verdict: VerdictKind::Stable,
            n_modes: 64,
            residual: 1e-13,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let rows: Vec<BranchRow> = [-0.9, 0.1, 1.0 / 3.0, 7.25].into_iter().map(row).collect();
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("c,b,omega,mu,gamma,b_prime,c_plus_2bprime,n_neg,z_zero,verdict,n_modes,residual\n"));
        assert_eq!(read_rows(&buf[..], "mem").unwrap(), rows);
    }

    #[test]
    fn malformed_input_names_the_row() {
        let good = "c,b,omega,mu,gamma,b_prime,c_plus_2bprime,n_neg,z_zero,verdict,n_modes,residual\n";
        let bad = format!("{good}0,1,2,2,0.1,1,2,1,1,stable,64,1e-13\n0,x,2,2,0.1,1,2,1,1,stable,64,1e-13\n");
        let e = read_rows(bad.as_bytes(), "mem").unwrap_err().to_string();
        assert!(e.contains("row 3"), "{e}");
        assert!(read_rows(good.as_bytes(), "mem").is_err());
        assert!(read_rows("a,b\n1,2\n".as_bytes(), "mem").is_err());
    }
}
