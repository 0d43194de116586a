use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phases::phase_decomposition_cnoidal;
use crate::reconstruct::drift_velocity;
use crate::waves::{classify_orbit, CnoidalParams, OrbitClass, Tolerances};

pub const SWEEP_COLUMNS: [&str; 10] = ["m", "V", "regime", "k", "v", "v_drift", "v_dyn", "v_berry", "v_anom", "error"];

/// `(lo, hi, count)`.
pub type Range = (f64, f64, usize);

pub fn parse_range(text: &str) -> Result<Range> {
    let bad = || Error::InvalidParams(format!("range `{text}` is not lo,hi,count"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse().map_err(|_| bad())?;
    let hi = parts[1].parse().map_err(|_| bad())?;
    let count = parts[2].parse().map_err(|_| bad())?;
    Ok((lo, hi, count))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub m_range: Range,
    pub v_range: Range,
    pub c: f64,
    pub columns: Vec<&'static str>,
}

impl SweepSpec {
    pub fn new(m_range: Range, v_range: Range, c: f64, columns: Option<&str>) -> Result<Self> {
        for (name, (lo, hi, count)) in [("m", m_range), ("V", v_range)] {
            if count < 2 || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidParams(format!("{name} range needs finite ends and count >= 2")));
            }
        }
        if m_range.0 < 0.0 || m_range.1 >= 1.0 {
            return Err(Error::InvalidParams("m range must lie in [0, 1)".into()));
        }
        if !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidParams(format!("c = {c} must be finite and nonzero")));
        }
        let columns = match columns {
            None => SWEEP_COLUMNS.to_vec(),
            Some(list) => list
                .split(',')
                .map(|name| {
                    SWEEP_COLUMNS
                        .iter()
                        .find(|c| **c == name.trim())
                        .copied()
                        .ok_or_else(|| Error::InvalidParams(format!("unknown column {name}")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Self { m_range, v_range, c, columns })
    }

    pub fn m_values(&self) -> Vec<f64> {
        linspace(self.m_range)
    }

    pub fn v_values(&self) -> Vec<f64> {
        linspace(self.v_range)
    }
}

fn linspace((lo, hi, count): Range) -> Vec<f64> {
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub m: f64,
    pub rescaled_v: f64,
    pub regime: &'static str,
    pub k: Option<f64>,
    pub v: Option<f64>,
    pub v_drift: Option<f64>,
    pub v_dyn: Option<f64>,
    pub v_berry: Option<f64>,
    pub v_anom: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(m: f64, rescaled_v: f64) -> Self {
        Self {
            m,
            rescaled_v,
            regime: "invalid",
            k: None,
            v: None,
            v_drift: None,
            v_dyn: None,
            v_berry: None,
            v_anom: None,
            error: None,
        }
    }
}

pub fn sweep_point(m: f64, rescaled_v: f64, c: f64, tol: &Tolerances) -> SweepRow {
    let mut row = SweepRow::empty(m, rescaled_v);
    let p = match CnoidalParams::new(m, rescaled_v, c) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let class = classify_orbit(&p, tol);
    row.regime = class.label();
    row.k = class.k();
    match drift_velocity(&p) {
        Ok(d) => {
            row.v = Some(d.velocity);
            row.v_drift = Some(d.v_drift);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if matches!(class, OrbitClass::ResonanceWedge) {
        return row;
    }
    match phase_decomposition_cnoidal(&p, tol) {
        Ok(d) => {
            row.v_dyn = Some(d.v_dynamical);
            row.v_berry = Some(d.v_berry);
            row.v_anom = Some(d.v_anomalous);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Rows ordered by (m index, V index).
pub fn sweep_rows(spec: &SweepSpec, tol: &Tolerances) -> Vec<SweepRow> {
    let ms = spec.m_values();
    let vs = spec.v_values();
    (0..ms.len() * vs.len())
        .into_par_iter()
        .map(|idx| sweep_point(ms[idx / vs.len()], vs[idx % vs.len()], spec.c, tol))
        .collect()
}

fn real(v: Option<f64>) -> String {
    // Adding 0.0 turns -0.0 into 0.0.
    v.map(|x| format!("{:.16e}", x + 0.0)).unwrap_or_default()
}

fn cell(row: &SweepRow, column: &str) -> String {
    match column {
        "m" => real(Some(row.m)),
        "V" => real(Some(row.rescaled_v)),
        "regime" => row.regime.to_owned(),
        "k" => real(row.k),
        "v" => real(row.v),
        "v_drift" => real(row.v_drift),
        "v_dyn" => real(row.v_dyn),
        "v_berry" => real(row.v_berry),
        "v_anom" => real(row.v_anom),
        "error" => row.error.clone().unwrap_or_default(),
        _ => String::new(),
    }
}

pub fn write_sweep_csv(spec: &SweepSpec, rows: &[SweepRow], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&spec.columns).map_err(csv_error)?;
    for row in rows {
        w.write_record(spec.columns.iter().map(|c| cell(row, c))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
