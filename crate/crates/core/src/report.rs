//! Line-oriented reports: `KEY<TAB>VALUE` rows followed by one verdict line
//! `VERDICT <op> <status> radius=<R> witness=<w>`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// A computation with no yes/no answer.
    Computed,
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Computed => "Computed",
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Inconclusive => "Inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Computed | Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }

    fn parse(s: &str) -> Option<Status> {
        [Status::Computed, Status::Pass, Status::Fail, Status::Inconclusive]
            .into_iter()
            .find(|x| x.name() == s)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub op: String,
    pub rows: Vec<(String, String)>,
    pub status: Status,
    pub radius: Option<usize>,
    pub witness: Option<String>,
}

/// Escapes backslash, tab, newline, carriage return and space.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            ' ' => out.push_str("\\s"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('s') => out.push(' '),
            other => {
                return Err(Error::InvalidSpec(format!(
                    "bad escape `\\{}`",
                    other.map(String::from).unwrap_or_default()
                )))
            }
        }
    }
    Ok(out)
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

impl Report {
    pub fn new(op: &str) -> Self {
        Report {
            op: op.to_string(),
            rows: Vec::new(),
            status: Status::Computed,
            radius: None,
            witness: None,
        }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.rows.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn verdict(&mut self, status: Status, radius: Option<usize>, witness: Option<String>) -> &mut Self {
        self.status = status;
        self.radius = radius;
        self.witness = witness;
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "VERDICT {} {} radius={} witness={}",
            self.op,
            self.status,
            self.radius.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
            self.witness.as_deref().map(escape).unwrap_or_else(|| "-".into()),
        )
    }

    /// Machine format. Keys and values are escaped, so every row is one
    /// line with exactly one tab.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.rows {
            s.push_str(&escape(k));
            s.push('\t');
            s.push_str(&escape(v));
            s.push('\n');
        }
        s.push_str(&self.verdict_line());
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Report> {
        let lines: Vec<&str> = text.lines().collect();
        let Some((last, body)) = lines.split_last() else {
            return Err(parse_error(1, "empty report"));
        };
        let mut rows = Vec::new();
        for (i, line) in body.iter().enumerate() {
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| parse_error(i + 1, "row without a tab"))?;
            rows.push((unescape(k)?, unescape(v)?));
        }
        let n = lines.len();
        let parts: Vec<&str> = last.split(' ').collect();
        if parts.len() != 5 || parts[0] != "VERDICT" {
            return Err(parse_error(n, "malformed verdict line"));
        }
        let status = Status::parse(parts[2]).ok_or_else(|| parse_error(n, "unknown status"))?;
        let radius = match parts[3].strip_prefix("radius=") {
            Some("-") => None,
            Some(r) => Some(r.parse().map_err(|_| parse_error(n, "bad radius"))?),
            None => return Err(parse_error(n, "missing radius")),
        };
        let witness = match parts[4].strip_prefix("witness=") {
            Some("-") => None,
            Some(w) => Some(unescape(w)?),
            None => return Err(parse_error(n, "missing witness")),
        };
        Ok(Report {
            op: parts[1].to_string(),
            rows,
            status,
            radius,
            witness,
        })
    }

    /// Human-readable rendering: a heading, then `key: value` rows with the
    /// same escaping as the machine format, then the verdict.
    pub fn explain(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut s = format!("== {} ==\n", self.op);
        for (k, v) in &self.rows {
            let pad = width - k.chars().count();
            s.push_str(&format!("{}{}  : {}\n", escape(k), " ".repeat(pad), escape(v)));
        }
        s.push_str(&format!(
            "-> {} (radius {}, witness {})\n",
            self.status,
            self.radius.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
            self.witness.as_deref().map(escape).unwrap_or_else(|| "-".into()),
        ));
        s
    }

    /// Inverse of [`Report::explain`].
    pub fn parse_explained(text: &str) -> Result<Report> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() < 2 {
            return Err(parse_error(1, "too short"));
        }
        let op = lines[0]
            .strip_prefix("== ")
            .and_then(|x| x.strip_suffix(" =="))
            .ok_or_else(|| parse_error(1, "missing heading"))?;
        let mut rows = Vec::new();
        for (i, line) in lines[1..lines.len() - 1].iter().enumerate() {
            let (k, v) = line
                .split_once("  : ")
                .ok_or_else(|| parse_error(i + 2, "row without separator"))?;
            rows.push((unescape(k.trim_end())?, unescape(v)?));
        }
        let n = lines.len();
        let last = lines[n - 1]
            .strip_prefix("-> ")
            .ok_or_else(|| parse_error(n, "missing verdict"))?;
        let (status, rest) = last.split_once(" (radius ").ok_or_else(|| parse_error(n, "bad verdict"))?;
        let (radius, rest) = rest.split_once(", witness ").ok_or_else(|| parse_error(n, "bad verdict"))?;
        let witness = rest.strip_suffix(')').ok_or_else(|| parse_error(n, "bad verdict"))?;
        Ok(Report {
            op: op.to_string(),
            rows,
            status: Status::parse(status).ok_or_else(|| parse_error(n, "unknown status"))?,
            radius: match radius {
                "-" => None,
                r => Some(r.parse().map_err(|_| parse_error(n, "bad radius"))?),
            },
            witness: match witness {
                "-" => None,
                w => Some(unescape(w)?),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("qc-check");
        r.push("radius", 6)
            .push("y", "1,A:a")
            .push("note", "tab\there and\nnewline \\ done");
        r.verdict(Status::Fail, Some(6), Some("A:a on 1 A:a".into()));
        r
    }

    #[test]
    fn machine_round_trip() {
        let r = sample();
        let text = r.render();
        assert!(text.lines().last().unwrap().starts_with("VERDICT qc-check Fail radius=6 witness="));
        assert_eq!(text.lines().count(), 4);
        assert_eq!(Report::parse(&text).unwrap(), r);
    }

    #[test]
    fn explain_round_trip() {
        let r = sample();
        assert_eq!(Report::parse_explained(&r.explain()).unwrap(), r);
        let mut c = Report::new("info");
        c.push("k", "");
        assert_eq!(Report::parse_explained(&c.explain()).unwrap(), c);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Computed.exit_code(), 0);
        assert_eq!(Status::Fail.exit_code(), 2);
        assert_eq!(Status::Inconclusive.exit_code(), 3);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = Report::parse("a\tb\nno tab\nVERDICT x Pass radius=- witness=-\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
