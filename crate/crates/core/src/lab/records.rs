use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RECORDS_HEADER: [&str; 8] = [
    "n",
    "h_n",
    "eta_n",
    "sup_err",
    "bound_k",
    "bound_holder",
    "cond_est",
    "jitter",
];

/// One row of a convergence run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    /// Fill distance of `X_n`.
    pub h_n: f64,
    /// `‖s_n - f‖_K`.
    pub eta_n: f64,
    /// Grid maximum of `|s_n - f|`.
    pub sup_err: f64,
    /// `η_n · max √K(x, x)`.
    pub bound_k: f64,
    /// `√(2 C h_n^α) · ‖f‖_K`.
    pub bound_holder: f64,
    /// Estimated condition number of the Gram matrix.
    pub cond_est: f64,
    pub jitter: f64,
}

/// Writes records with the fixed header; floats use Rust's shortest round-trip
/// scientific form, so equal runs give equal bytes.
pub fn write_records_csv<W: Write>(records: &[ConvergenceRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RECORDS_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            format!("{:e}", r.h_n),
            format!("{:e}", r.eta_n),
            format!("{:e}", r.sup_err),
            format!("{:e}", r.bound_k),
            format!("{:e}", r.bound_holder),
            format!("{:e}", r.cond_est),
            format!("{:e}", r.jitter),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records, rejecting any header other than [`RECORDS_HEADER`].
pub fn read_records_csv<R: Read>(reader: R) -> Result<Vec<ConvergenceRecord>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = r.headers()?.clone();
    if header.iter().ne(RECORDS_HEADER.iter().copied()) {
        return Err(Error::config(format!(
            "records header must be `{}`, got `{}`",
            RECORDS_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, row) in r.records().enumerate() {
        let row = row?;
        let field = |i: usize| -> Result<f64> {
            row[i].parse::<f64>().map_err(|_| {
                Error::config(format!("row {}: `{}` is not a number", line + 1, &row[i]))
            })
        };
        let n = row[0]
            .parse::<usize>()
            .map_err(|_| Error::config(format!("row {}: bad n `{}`", line + 1, &row[0])))?;
        out.push(ConvergenceRecord {
            n,
            h_n: field(1)?,
            eta_n: field(2)?,
            sup_err: field(3)?,
            bound_k: field(4)?,
            bound_holder: field(5)?,
            cond_est: field(6)?,
            jitter: field(7)?,
        });
    }
    Ok(out)
}
