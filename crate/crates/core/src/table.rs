//! Deterministic CSV and aligned-text tables.

use num_bigint::BigUint;

use crate::count::{convolve_counts, sum_identity, CountProfile};
use crate::error::{Error, Result};
use crate::fan::FVector;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header row, LF line endings.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        let fail = |e: csv::Error| Error::Construction(format!("csv: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Construction(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Construction(e.to_string()))
    }

    /// First column left-aligned, the rest right-aligned.
    pub fn to_text(&self) -> String {
        let cols = self.header.len();
        let width: Vec<usize> = (0..cols)
            .map(|c| {
                std::iter::once(&self.header)
                    .chain(&self.rows)
                    .map(|r| r[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |r: &[String]| -> String {
            let cells: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = width[c]) } else { format!("{s:>w$}", w = width[c]) })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(&width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// One row per variety and level `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRow {
    pub label: String,
    pub k: usize,
    pub r: BigUint,
    pub v: BigUint,
    pub t: BigUint,
    pub sum: BigUint,
    pub rhs: BigUint,
    pub within_bound: bool,
    /// The identity is only claimed for `k ≤ d`.
    pub identity_applies: bool,
}

impl ResultRow {
    pub fn pass(&self) -> bool {
        !self.identity_applies || self.sum == self.rhs
    }

    fn identity_status(&self) -> &'static str {
        match (self.identity_applies, self.sum == self.rhs) {
            (false, _) => "n/a",
            (true, true) => "pass",
            (true, false) => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Rows for `k` in `ks`, in decreasing order of `k` as in the reference layout.
    pub fn add_variety(&mut self, label: &str, p: &CountProfile, fvector: &FVector, n: usize, ks: impl Iterator<Item = usize>) {
        let counts = convolve_counts(p, n);
        let mut ks: Vec<usize> = ks.collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        for k in ks {
            let id = sum_identity(p, fvector, n, k);
            self.rows.push(ResultRow {
                label: label.to_string(),
                k,
                r: counts.r_at(k),
                v: counts.v_at(k),
                t: counts.t_at(k),
                sum: id.lhs,
                rhs: id.rhs,
                within_bound: counts.within_bound(k),
                identity_applies: k <= p.d,
            });
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(ResultRow::pass)
    }

    /// `(r, v, t)` of each row of `label`, concatenated in row order.
    pub fn flat(&self, label: &str) -> Vec<BigUint> {
        self.rows
            .iter()
            .filter(|r| r.label == label)
            .flat_map(|r| [r.r.clone(), r.v.clone(), r.t.clone()])
            .collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["variety", "k", "r_k", "v_k", "t_k", "sum", "identity_rhs", "identity", "k_le_Nd"]);
        for r in &self.rows {
            t.push(vec![
                r.label.clone(),
                r.k.to_string(),
                r.r.to_string(),
                r.v.to_string(),
                r.t.to_string(),
                r.sum.to_string(),
                r.rhs.to_string(),
                r.identity_status().into(),
                if r.within_bound { "yes" } else { "no" }.into(),
            ]);
        }
        t
    }
}
