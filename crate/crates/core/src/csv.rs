//! Plain numeric CSV tables.
//!
//! Every value is written with 17 significant digits, so parsing a table and
//! emitting it again reproduces the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::PointHistory;
use crate::error::{Error, Result};
use crate::field::FieldSnapshot;
use crate::lattice::ConvergenceRow;
use crate::reflection::RejectionReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", format_value(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Csv("empty input".into()))?;
        let header: Vec<String> = header_line
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Csv(format!("line {}: {e}", i + 2)))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::Csv(format!(
                    "line {}: expected {} fields, found {}",
                    i + 2,
                    header.len(),
                    row.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
    }
}

/// `t,q,qdot,Q`.
pub fn point_history_table(hist: &PointHistory) -> Table {
    let mut table = Table::new(["t", "q", "qdot", "Q"]);
    for i in 0..hist.len() {
        table.push(vec![hist.t[i], hist.q[i], hist.qdot[i], hist.readout[i]]);
    }
    table
}

/// `x,u`.
pub fn snapshot_table(snap: &FieldSnapshot) -> Table {
    let mut table = Table::new(["x", "u"]);
    for (&x, &u) in snap.x.iter().zip(&snap.u) {
        table.push(vec![x, u]);
    }
    table
}

/// `dx,dt,max_err,observed_order`.
pub fn convergence_table(rows: &[ConvergenceRow]) -> Table {
    let mut table = Table::new(["dx", "dt", "max_err", "observed_order"]);
    for r in rows {
        table.push(vec![r.dx, r.dt, r.max_err, r.observed_order]);
    }
    table
}

/// `t,Q,shadow_max`.
pub fn rejection_table(report: &RejectionReport) -> Table {
    let mut table = Table::new(["t", "Q", "shadow_max"]);
    for i in 0..report.t.len() {
        table.push(vec![report.t[i], report.readout[i], report.shadow_max[i]]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_and_digits() {
        let mut t = Table::new(["x", "u"]);
        t.push(vec![0.1, -2.0]);
        assert_eq!(
            t.to_csv(),
            "x,u\n1.0000000000000001e-1,-2.0000000000000000e0\n"
        );
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(Table::parse("a,b\n1,2\n3\n").is_err());
        assert!(Table::parse("a\nfoo\n").is_err());
        assert!(Table::parse("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(proptest::num::f64::ANY, 0..40)) {
            let mut t = Table::new(["a", "b"]);
            for pair in values.chunks_exact(2) {
                t.push(pair.to_vec());
            }
            let text = t.to_csv();
            let back = Table::parse(&text).unwrap();
            prop_assert_eq!(back.to_csv(), text);
        }
    }
}
