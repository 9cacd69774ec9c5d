//! Verification reports: one line per check, deterministic text and JSON
//! renderings for CI diffing.

use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct ReportLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub subject: String,
    pub lines: Vec<ReportLine>,
    pub meta: BTreeMap<String, String>,
}

impl Report {
    pub fn new(command: &str, subject: &str) -> Report {
        Report {
            command: command.to_string(),
            subject: subject.to_string(),
            lines: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.lines.push(ReportLine { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.insert(key.to_string(), value.into());
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.command, self.subject);
        for (k, v) in &self.meta {
            s.push_str(&format!("  {}: {}\n", k, v));
        }
        for line in &self.lines {
            let mark = if line.passed { "PASS" } else { "FAIL" };
            if line.detail.is_empty() {
                s.push_str(&format!("  [{}] {}\n", mark, line.name));
            } else {
                s.push_str(&format!("  [{}] {} — {}\n", mark, line.name, line.detail));
            }
        }
        let overall = if self.all_passed() { "ok" } else { "FAILED" };
        s.push_str(&format!("result: {}\n", overall));
        s
    }

    /// Machine-readable rendering: a single JSON document with stable
    /// key ordering, so identical runs are byte-identical.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{");
        s.push_str(&format!("\"command\":{},", json_str(&self.command)));
        s.push_str(&format!("\"subject\":{},", json_str(&self.subject)));
        s.push_str("\"meta\":{");
        let mut first = true;
        for (k, v) in &self.meta {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&format!("{}:{}", json_str(k), json_str(v)));
        }
        s.push_str("},\"checks\":[");
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "{{\"name\":{},\"passed\":{},\"detail\":{}}}",
                json_str(&line.name),
                line.passed,
                json_str(&line.detail)
            ));
        }
        s.push_str(&format!("],\"ok\":{}}}", self.all_passed()));
        s
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
