//! Verification reports: one row per checked condition.

use std::fmt::Write as _;

use crate::TIE_TOLERANCE;

/// Outcome of checking one inequality over a set of pairs (or points).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub n: u64,
    pub condition: String,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Smallest slack `bound − value` (negative on violation); +∞ when nothing was checked.
    pub worst_margin: f64,
    /// No pair satisfied the hypothesis of the condition.
    pub vacuous: bool,
    /// Pairs skipped because a needed value lay outside the constructed domain.
    pub out_of_domain: usize,
}

impl ConditionRow {
    pub fn new(n: u64, condition: impl Into<String>) -> Self {
        ConditionRow {
            n,
            condition: condition.into(),
            pairs_checked: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            vacuous: true,
            out_of_domain: 0,
        }
    }

    /// Records one checked instance with slack `margin` (≥ 0 means satisfied).
    pub fn record(&mut self, margin: f64) {
        self.pairs_checked += 1;
        self.vacuous = false;
        if margin < -TIE_TOLERANCE {
            self.violations += 1;
        }
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
    }

    pub fn record_out_of_domain(&mut self) {
        self.out_of_domain += 1;
    }

    pub fn merge(&mut self, other: &ConditionRow) {
        self.pairs_checked += other.pairs_checked;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        self.vacuous &= other.vacuous;
        self.out_of_domain += other.out_of_domain;
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.out_of_domain == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<ConditionRow>,
}

impl VerificationReport {
    pub fn push(&mut self, row: ConditionRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.rows.extend(other.rows);
    }

    pub fn row(&self, condition: &str) -> Option<&ConditionRow> {
        self.rows.iter().find(|r| r.condition == condition)
    }

    pub fn total_violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }

    pub const CSV_HEADER: &'static str = "n,condition,pairs_checked,violations,worst_margin,vacuous,out_of_domain";

    /// Header plus one row per condition, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.n,
                r.condition,
                r.pairs_checked,
                r.violations,
                format_float(r.worst_margin),
                r.vacuous,
                r.out_of_domain
            );
        }
        s
    }
}

/// Shortest round-trip decimal form; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_count_as_satisfied() {
        let mut row = ConditionRow::new(4, "near");
        assert!(row.vacuous);
        row.record(0.5);
        row.record(-1e-13);
        assert_eq!(row.violations, 0);
        row.record(-1e-6);
        assert_eq!(row.violations, 1);
        assert_eq!(row.pairs_checked, 3);
        assert_eq!(row.worst_margin, -1e-6);
    }

    #[test]
    fn csv_shape() {
        let mut rep = VerificationReport::default();
        rep.push(ConditionRow::new(2, "far"));
        let csv = rep.to_csv();
        assert_eq!(csv, format!("{}\n2,far,0,0,inf,true,0\n", VerificationReport::CSV_HEADER));
    }
}
