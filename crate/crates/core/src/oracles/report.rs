//! Common report row for every exact check.

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub check: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub holds: bool,
    pub notes: String,
}

impl OracleReport {
    pub fn verdict(&self) -> &'static str {
        if self.holds {
            "ok"
        } else {
            "VIOLATED"
        }
    }

    pub fn csv_header() -> &'static str {
        "check,instance,lhs,rhs,gap,verdict,notes"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.check,
            self.instance,
            self.lhs,
            self.rhs,
            self.gap,
            self.verdict(),
            self.notes.replace(',', ";")
        )
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<12} {:<28} lhs={:<12.6e} rhs={:<12.6e} gap={:<10.3e} {}",
            self.check,
            self.instance,
            self.lhs,
            self.rhs,
            self.gap,
            self.verdict()
        )
    }
}
