//! Minimal s-expression reader with line/column positions.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, line: usize, col: usize },
    List { items: Vec<Sexp>, line: usize, col: usize },
}

impl Sexp {
    pub fn atom(text: impl Into<String>) -> Sexp {
        Sexp::Atom { text: text.into(), line: 0, col: 0 }
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List { items, line: 0, col: 0 }
    }

    pub fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom { line, col, .. } | Sexp::List { line, col, .. } => (*line, *col),
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.pos();
        Error::ParseAt { line, col, msg: msg.into() }
    }

    pub fn as_atom(&self) -> Result<&str> {
        match self {
            Sexp::Atom { text, .. } => Ok(text),
            Sexp::List { .. } => Err(self.error("expected atom, found list")),
        }
    }

    pub fn as_list(&self) -> Result<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Ok(items),
            Sexp::Atom { text, .. } => Err(self.error(format!("expected list, found `{text}`"))),
        }
    }

    /// Head symbol and tail of a list form `(head ...)`.
    pub fn head(&self) -> Result<(&str, &[Sexp])> {
        let items = self.as_list()?;
        let (h, rest) = items
            .split_first()
            .ok_or_else(|| self.error("empty list"))?;
        Ok((h.as_atom()?, rest))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom { text, .. } if needs_quotes(text) => {
                f.write_str("\"")?;
                for c in text.chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")
            }
            Sexp::Atom { text, .. } => f.write_str(text),
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (k, it) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn needs_quotes(t: &str) -> bool {
    t.is_empty() || t.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ';' | '"' | '\\'))
}

/// Parses every top-level form in `src`. `;` starts a line comment.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>> {
    let mut p = Reader { chars: src.chars().collect(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= p.chars.len() {
            return Ok(out);
        }
        out.push(p.read()?);
    }
}

/// Parses exactly one form.
pub fn parse_one(src: &str) -> Result<Sexp> {
    let mut all = parse_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Error::ParseAt { line: 1, col: 1, msg: "empty input".into() }),
        _ => Err(all[1].error("trailing input")),
    }
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c == ';' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        if self.pos >= self.chars.len() {
            return Err(Error::ParseAt { line, col, msg: "unexpected end of input".into() });
        }
        match self.chars[self.pos] {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    if self.pos >= self.chars.len() {
                        return Err(Error::ParseAt { line, col, msg: "unclosed `(`".into() });
                    }
                    if self.chars[self.pos] == ')' {
                        self.bump();
                        return Ok(Sexp::List { items, line, col });
                    }
                    items.push(self.read()?);
                }
            }
            ')' => Err(Error::ParseAt { line, col, msg: "unexpected `)`".into() }),
            // A quoted atom; `\` escapes the next character.
            '"' => {
                self.bump();
                let mut text = String::new();
                loop {
                    if self.pos >= self.chars.len() {
                        return Err(Error::ParseAt { line, col, msg: "unclosed `\"`".into() });
                    }
                    match self.bump() {
                        '"' => return Ok(Sexp::Atom { text, line, col }),
                        '\\' if self.pos < self.chars.len() => text.push(self.bump()),
                        c => text.push(c),
                    }
                }
            }
            _ => {
                let mut text = String::new();
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos];
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '"') {
                        break;
                    }
                    text.push(self.bump());
                }
                Ok(Sexp::Atom { text, line, col })
            }
        }
    }
}
