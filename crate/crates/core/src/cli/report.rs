use serde_json::{json, Value};

/// Output of one command.
///
/// The JSON form holds only values fixed by the configuration, so equal
/// configurations give byte-identical reports. Wall-clock time goes to
/// `diagnostics`, which the binary writes to stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub certificates: Value,
    /// Deterministic work counters.
    pub timing: Value,
    pub exit_code: i32,
    /// Human-readable lines for text output.
    pub text: Vec<String>,
    /// Table for csv output, when the command has one.
    pub csv: Option<Vec<Vec<String>>>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn json_value(&self) -> Value {
        json!({
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "certificates": self.certificates,
            "timing": self.timing,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json_value()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.text.join("\n");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Option<String> {
        let rows = self.csv.as_ref()?;
        let mut s = String::new();
        for row in rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        Some(s)
    }
}
