//! Check records and their two output modes.

use std::fmt::Write as _;
use std::time::Instant;

/// One verdict. Field order is fixed; `millis` is the only nondeterministic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub anchor: &'static str,
    pub level: Option<u64>,
    pub holds: bool,
    pub witness: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Text,
    Record,
}

impl std::str::FromStr for Emit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Emit::Text),
            "record" => Ok(Emit::Record),
            _ => Err(format!("unknown output mode `{s}` (expected text or record)")),
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: &'static str, level: Option<u64>, holds: bool, witness: Option<String>) -> Record {
        Record { name: name.into(), anchor, level, holds, witness, millis: 0 }
    }

    pub fn text(&self) -> String {
        let mut s = format!("{} {} [{}]", if self.holds { "PASS" } else { "FAIL" }, self.name, self.anchor);
        if let Some(l) = self.level {
            let _ = write!(s, " level {l}");
        }
        if let Some(w) = &self.witness {
            let _ = write!(s, ": {w}");
        }
        s
    }

    /// `key=value` fields separated by tabs; strings are quoted.
    pub fn record(&self) -> String {
        let level = self.level.map_or("-".to_string(), |l| l.to_string());
        let witness = self.witness.as_deref().map_or("-".to_string(), escape);
        format!(
            "name={}\tanchor={}\tlevel={}\tverdict={}\twitness={}\ttime_ms={}",
            escape(&self.name),
            self.anchor,
            level,
            if self.holds { "pass" } else { "fail" },
            witness,
            self.millis
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), records: Vec::new() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// Runs `f`, stamping the elapsed time; an error becomes a failing record.
    pub fn timed<E: std::fmt::Display>(
        &mut self,
        name: impl Into<String>,
        anchor: &'static str,
        level: Option<u64>,
        f: impl FnOnce() -> Result<(bool, Option<String>), E>,
    ) {
        let start = Instant::now();
        let (holds, witness) = match f() {
            Ok(x) => x,
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        let mut r = Record::new(name, anchor, level, holds, witness);
        r.millis = start.elapsed().as_millis();
        self.push(r);
    }

    pub fn extend(&mut self, o: Report) {
        self.records.extend(o.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.holds).count()
    }

    pub fn render(&self, emit: Emit) -> String {
        let mut out = String::new();
        if emit == Emit::Text && !self.title.is_empty() {
            let _ = writeln!(out, "# {}", self.title);
        }
        for r in &self.records {
            out.push_str(&match emit {
                Emit::Text => r.text(),
                Emit::Record => r.record(),
            });
            out.push('\n');
        }
        if emit == Emit::Text {
            let _ = writeln!(out, "{} checks, {} failed", self.records.len(), self.failures());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_modes() {
        let mut rep = Report::new("t");
        rep.push(Record::new("taut", "taut", Some(3), true, None));
        rep.push(Record::new("x", "genflag", None, false, Some("a \"b\"".into())));
        assert_eq!(rep.records[0].text(), "PASS taut [taut] level 3");
        assert_eq!(
            rep.records[1].record(),
            "name=\"x\"\tanchor=genflag\tlevel=-\tverdict=fail\twitness=\"a \\\"b\\\"\"\ttime_ms=0"
        );
        assert!(!rep.passed());
        assert!(rep.render(Emit::Text).ends_with("2 checks, 1 failed\n"));
    }
}
