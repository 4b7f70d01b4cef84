use serde::{Deserialize, Serialize};

use super::ConvergenceRecord;
use crate::error::{Error, Result};
use crate::linalg::fit_line;

/// Values at or below this are treated as the double-precision floor and left out of fits.
pub const RATE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SupErr,
    EtaN,
}

impl Quantity {
    pub fn of(&self, r: &ConvergenceRecord) -> f64 {
        match self {
            Quantity::SupErr => r.sup_err,
            Quantity::EtaN => r.eta_n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::SupErr => "sup_err",
            Quantity::EtaN => "eta_n",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup_err" => Ok(Quantity::SupErr),
            "eta_n" => Ok(Quantity::EtaN),
            other => Err(Error::invalid(format!(
                "quantity must be `sup_err` or `eta_n`, got `{other}`"
            ))),
        }
    }
}

/// Least-squares fit of `log(quantity) = slope · log(h_n) + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub quantity: Quantity,
    /// Smallest and largest `n` among the records used.
    pub n_range: [usize; 2],
    pub used: usize,
    /// `n` of the records dropped for sitting at the floor.
    pub excluded: Vec<usize>,
}

pub fn fit_rate(records: &[ConvergenceRecord], quantity: Quantity) -> Result<RateFit> {
    let (usable, floor): (Vec<&ConvergenceRecord>, Vec<&ConvergenceRecord>) = records
        .iter()
        .partition(|r| quantity.of(r) > RATE_FLOOR && r.h_n > 0.0);
    let mut distinct: Vec<f64> = usable.iter().map(|r| r.h_n).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if usable.len() < 3 || distinct.len() < 2 {
        return Err(Error::TooFewRecords {
            required: 3,
            found: usable.len().min(distinct.len()),
        });
    }
    let xs: Vec<f64> = usable.iter().map(|r| r.h_n.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|r| quantity.of(r).ln()).collect();
    let line = fit_line(&xs, &ys)?;
    let ns = usable.iter().map(|r| r.n);
    Ok(RateFit {
        slope: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        quantity,
        n_range: [ns.clone().min().unwrap_or(0), ns.max().unwrap_or(0)],
        used: usable.len(),
        excluded: floor.iter().map(|r| r.n).collect(),
    })
}

/// Per record: `sup_err <= √(2 C h_n^α) · ‖f‖_K · (1 + 1e-10)`.
pub fn check_holder_bound(
    records: &[ConvergenceRecord],
    constant: f64,
    alpha: f64,
    f_norm: f64,
) -> Result<Vec<bool>> {
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::invalid("Hölder constant must be positive"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("Hölder exponent must lie in (0, 1]"));
    }
    Ok(records
        .iter()
        .map(|r| {
            let bound = (2.0 * constant * r.h_n.powf(alpha)).sqrt() * f_norm;
            r.sup_err <= bound * (1.0 + 1e-10)
        })
        .collect())
}
