//! Structured results of bound audits.
//!
//! Reports are plain data: a list of named checks with the bound, the
//! achieved value, and a normalized margin (nonnegative means the check
//! holds with room; `pass` means the margin is within the stated
//! tolerance of nonnegative).  Serialized field order is fixed by the
//! struct declaration so JSON output is diff-stable.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Window center, when the check ranges over centers.
    pub a: Option<f64>,
    /// Window length / radius / index, as documented per check.
    pub t: Option<f64>,
    pub bound: f64,
    pub achieved: f64,
    /// For upper-bound checks `bound - achieved`; for lower-bound checks
    /// `achieved - bound`.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub title: String,
    pub assumptions: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub worst_margin: f64,
    pub worst_check: Option<String>,
    pub all_pass: bool,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn new(title: impl Into<String>) -> Self {
        AuditReport {
            title: title.into(),
            assumptions: Vec::new(),
            checks: Vec::new(),
            worst_margin: f64::INFINITY,
            worst_check: None,
            all_pass: true,
            notes: Vec::new(),
        }
    }

    pub fn assume(&mut self, note: impl Into<String>) {
        self.assumptions.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Record `achieved <= bound + tol`.
    pub fn push_upper(
        &mut self,
        name: impl Into<String>,
        a: Option<f64>,
        t: Option<f64>,
        bound: f64,
        achieved: f64,
        tol: f64,
    ) {
        self.push(name, a, t, bound, achieved, bound - achieved, tol);
    }

    /// Record `achieved >= bound - tol`.
    pub fn push_lower(
        &mut self,
        name: impl Into<String>,
        a: Option<f64>,
        t: Option<f64>,
        bound: f64,
        achieved: f64,
        tol: f64,
    ) {
        self.push(name, a, t, bound, achieved, achieved - bound, tol);
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        a: Option<f64>,
        t: Option<f64>,
        bound: f64,
        achieved: f64,
        margin: f64,
        tol: f64,
    ) {
        let name = name.into();
        let pass = margin >= -tol;
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst_check = Some(name.clone());
        }
        self.all_pass &= pass;
        self.checks.push(CheckRecord {
            name,
            a,
            t,
            bound,
            achieved,
            margin,
            pass,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Fixed-width text table for terminal display.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("audit: {}\n", self.title));
        for s in &self.assumptions {
            out.push_str(&format!("  assume: {s}\n"));
        }
        out.push_str(&format!(
            "  {:<38} {:>10} {:>10} {:>13} {:>13} {:>10} {:>5}\n",
            "check", "a", "t", "bound", "achieved", "margin", "pass"
        ));
        for c in &self.checks {
            let fmt_opt = |v: Option<f64>| match v {
                Some(x) => format!("{x:.4}"),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "  {:<38} {:>10} {:>10} {:>13.6e} {:>13.6e} {:>10.2e} {:>5}\n",
                c.name,
                fmt_opt(c.a),
                fmt_opt(c.t),
                c.bound,
                c.achieved,
                c.margin,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
        for s in &self.notes {
            out.push_str(&format!("  note: {s}\n"));
        }
        out.push_str(&format!(
            "  result: {} (worst margin {:.3e}{})\n",
            if self.all_pass { "PASS" } else { "VIOLATION" },
            self.worst_margin,
            match &self.worst_check {
                Some(n) => format!(" at {n}"),
                None => String::new(),
            }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_pass_flags() {
        let mut r = AuditReport::new("demo");
        r.push_upper("ok", None, Some(1.0), 1.0, 0.9, 1e-9);
        r.push_upper("tight", None, Some(2.0), 1.0, 1.0 + 1e-12, 1e-9);
        assert!(r.all_pass);
        r.push_lower("violated", Some(0.0), Some(3.0), 0.5, 0.4, 1e-9);
        assert!(!r.all_pass);
        assert_eq!(r.worst_check.as_deref(), Some("violated"));
        assert!((r.worst_margin + 0.1).abs() < 1e-12);
        let json = r.to_json();
        assert!(json.contains("\"title\""));
        assert!(r.render_table().contains("VIOLATION"));
    }
}
