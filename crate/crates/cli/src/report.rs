//! Row-by-row comparison of theory against empirical or reference values.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub u: f64,
    /// Size k, or None for the sum row.
    pub k: Option<usize>,
    /// What is compared, e.g. "w", "w-peak", "mass".
    pub quantity: String,
    /// Source of the right-hand value: "empirical" or "reference".
    pub against: String,
    pub theory: f64,
    pub theory_stderr: f64,
    pub other: f64,
    pub other_stderr: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Reported but excluded from the verdict.
    pub note: Option<String>,
}

impl ComparisonRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        u: f64,
        k: Option<usize>,
        quantity: &str,
        against: &str,
        theory: (f64, f64),
        other: (f64, f64),
        tolerance: f64,
    ) -> Self {
        let gap = (theory.0 - other.0).abs();
        ComparisonRow {
            u,
            k,
            quantity: quantity.to_string(),
            against: against.to_string(),
            theory: theory.0,
            theory_stderr: theory.1,
            other: other.0,
            other_stderr: other.1,
            gap,
            tolerance,
            pass: gap <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn gated(&self) -> bool {
        self.note.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub title: String,
    pub config: serde_json::Value,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn new(title: impl Into<String>, config: serde_json::Value) -> Self {
        ComparisonReport {
            title: title.into(),
            config,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: ComparisonRow) {
        self.rows.push(row);
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().filter(|r| r.gated()).all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| r.gated() && !r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\n# config: {}\n", self.title, self.config);
        s.push_str("u,k,quantity,against,theory,theory_stderr,other,other_stderr,gap,tolerance,status,note\n");
        for r in &self.rows {
            let status = match (r.gated(), r.pass) {
                (false, _) => "info",
                (true, true) => "pass",
                (true, false) => "fail",
            };
            s.push_str(&format!(
                "{},{},{},{},{:.6e},{:.2e},{:.6e},{:.2e},{:.3e},{:.3e},{},{}\n",
                r.u,
                r.k.map_or_else(|| "sum".to_string(), |k| k.to_string()),
                r.quantity,
                r.against,
                r.theory,
                r.theory_stderr,
                r.other,
                r.other_stderr,
                r.gap,
                r.tolerance,
                status,
                r.note.as_deref().unwrap_or("").replace(',', ";"),
            ));
        }
        s.push_str(&format!(
            "# verdict: {}\n",
            if self.pass() { "pass" } else { "fail" }
        ));
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a ComparisonReport,
            pass: bool,
        }
        serde_json::to_string_pretty(&Out {
            report: self,
            pass: self.pass(),
        })
        .expect("report serializes")
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let gated = self.rows.iter().filter(|r| r.gated()).count();
        let failed = self.failures().count();
        format!(
            "{}: {} of {} gated rows pass",
            self.title,
            gated - failed,
            gated
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_gap_within_tolerance() {
        let mut rep = ComparisonReport::new("t", serde_json::json!({}));
        rep.push(ComparisonRow::new(
            0.5,
            Some(1),
            "w",
            "empirical",
            (0.1, 0.0),
            (0.1005, 1e-4),
            1e-3,
        ));
        assert!(rep.pass());
        rep.push(
            ComparisonRow::new(
                0.5,
                Some(2),
                "w",
                "empirical",
                (0.1, 0.0),
                (0.2, 1e-4),
                1e-3,
            )
            .with_note("x"),
        );
        assert!(rep.pass());
        rep.push(ComparisonRow::new(
            0.5,
            None,
            "w",
            "empirical",
            (0.1, 0.0),
            (0.2, 1e-4),
            1e-3,
        ));
        assert!(!rep.pass());
        assert!(rep.to_csv().contains("# verdict: fail"));
    }

    #[test]
    fn zero_tolerance_fails_inexact_rows() {
        let r = ComparisonRow::new(
            1.5,
            Some(1),
            "w",
            "empirical",
            (0.05, 0.0),
            (0.0501, 1e-4),
            0.0,
        );
        assert!(!r.pass);
    }
}
