//! Reports: an ordered list of dotted keys with values.
//!
//! The structured format is a subset of TOML, one `key = value` per line:
//! integers, booleans, basic strings and (nested) arrays. The table format
//! is aligned fixed-width text for reading.

use std::fmt::Write as _;

const MAX_NESTING: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
}

impl From<i64> for Value {
    fn from(v: i64) -> Value {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Value {
        Value::Int(v as i64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Value {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Value {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Value {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Value {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Value {
        Value::List(v.into_iter().map(Into::into).collect())
    }
}

impl Value {
    fn structured(&self, out: &mut String) {
        match self {
            Value::Int(v) => write!(out, "{v}").unwrap(),
            Value::Bool(v) => write!(out, "{v}").unwrap(),
            Value::Str(s) => quote(s, out),
            Value::List(vs) => {
                out.push('[');
                for (k, v) in vs.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    v.structured(out);
                }
                out.push(']');
            }
        }
    }

    fn plain(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::List(vs) => format!("[{}]", vs.iter().map(Value::plain).collect::<Vec<_>>().join(", ")),
            other => {
                let mut s = String::new();
                other.structured(&mut s);
                s
            }
        }
    }

    /// Rows of strings, if this is a nonempty list of equal-length string lists.
    fn as_matrix(&self) -> Option<Vec<Vec<&str>>> {
        let Value::List(rows) = self else { return None };
        let mut out = Vec::new();
        for r in rows {
            let Value::List(cells) = r else { return None };
            let cells: Option<Vec<&str>> =
                cells.iter().map(|c| if let Value::Str(s) = c { Some(s.as_str()) } else { None }).collect();
            out.push(cells?);
        }
        let w = out.first()?.len();
        (w > 0 && out.iter().all(|r| r.len() == w)).then_some(out)
    }
}

fn quote(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => write!(out, "\\u{:04X}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub entries: Vec<(String, Value)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ReportError {
    pub line: usize,
    pub message: String,
}

/// Keys are nonempty dot-separated segments of `[A-Za-z0-9_-]`.
pub fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-'))
}

/// Make an arbitrary name usable as a key segment.
pub fn key_segment(name: &str) -> String {
    let s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' }).collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Panics on an invalid or clashing key: keys are chosen by this crate.
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        let key = key.into();
        assert!(valid_key(&key), "invalid report key {key:?}");
        assert!(self.clash(&key).is_none(), "report key {key:?} clashes");
        self.entries.push((key, value.into()));
    }

    /// An existing key equal to `key`, or a prefix of it, or extending it.
    fn clash(&self, key: &str) -> Option<&str> {
        self.entries.iter().map(|(k, _)| k.as_str()).find(|k| {
            *k == key || key.strip_prefix(k).is_some_and(|r| r.starts_with('.')) || k.strip_prefix(key).is_some_and(|r| r.starts_with('.'))
        })
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Structured => self.structured(),
            Format::Table => self.table(),
        }
    }

    fn structured(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            v.structured(&mut out);
            out.push('\n');
        }
        out
    }

    fn table(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v.as_matrix() {
                Some(rows) => {
                    writeln!(out, "{k}").unwrap();
                    let cols = rows[0].len();
                    let widths: Vec<usize> =
                        (0..cols).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
                    for r in &rows {
                        let cells: Vec<String> =
                            r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
                        writeln!(out, "    [ {} ]", cells.join("  ")).unwrap();
                    }
                }
                None => writeln!(out, "{k:<width$}  {}", v.plain()).unwrap(),
            }
        }
        out
    }

    /// Entries of `expected` that are missing here or differ.
    pub fn mismatches(&self, expected: &Report) -> Vec<String> {
        let mut out = Vec::new();
        for (k, want) in &expected.entries {
            match self.get(k) {
                Some(got) if got == want => {}
                Some(got) => out.push(format!("{k}: expected {}, got {}", want.plain(), got.plain())),
                None => out.push(format!("{k}: expected {}, missing", want.plain())),
            }
        }
        out
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    report.emit(format)
}

/// Parse the structured format.
pub fn parse_report(text: &str) -> Result<Report, ReportError> {
    let mut report = Report::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| ReportError { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = trimmed.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(err(format!("invalid key {key:?}")));
        }
        if let Some(other) = report.clash(key) {
            return Err(err(format!("key {key:?} clashes with {other:?}")));
        }
        let mut p = ValueParser { s: rest.as_bytes(), pos: 0 };
        let value = p.value(0).map_err(err)?;
        p.ws();
        if p.pos < p.s.len() && p.s[p.pos] != b'#' {
            return Err(err("trailing characters after value".into()));
        }
        report.entries.push((key.to_string(), value));
    }
    Ok(report)
}

struct ValueParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ValueParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && matches!(self.s[self.pos], b' ' | b'\t') {
            self.pos += 1;
        }
    }

    fn value(&mut self, depth: usize) -> Result<Value, String> {
        if depth > MAX_NESTING {
            return Err("arrays nested too deeply".into());
        }
        self.ws();
        match self.s.get(self.pos) {
            None => Err("expected a value".into()),
            Some(b'"') => self.string().map(Value::Str),
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.ws();
                    if self.s.get(self.pos) == Some(&b']') {
                        self.pos += 1;
                        return Ok(Value::List(items));
                    }
                    items.push(self.value(depth + 1)?);
                    self.ws();
                    match self.s.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {}
                        _ => return Err("expected `,` or `]`".into()),
                    }
                }
            }
            Some(b't') if self.s[self.pos..].starts_with(b"true") => {
                self.pos += 4;
                Ok(Value::Bool(true))
            }
            Some(b'f') if self.s[self.pos..].starts_with(b"false") => {
                self.pos += 5;
                Ok(Value::Bool(false))
            }
            Some(c) if c.is_ascii_digit() || *c == b'-' || *c == b'+' => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                text.parse().map(Value::Int).map_err(|_| format!("invalid integer {text:?}"))
            }
            Some(_) => Err("expected a value".into()),
        }
    }

    fn string(&mut self) -> Result<String, String> {
        self.pos += 1;
        let mut out: Vec<u8> = Vec::new();
        loop {
            let Some(&c) = self.s.get(self.pos) else { return Err("unterminated string".into()) };
            self.pos += 1;
            match c {
                b'"' => return String::from_utf8(out).map_err(|_| "invalid UTF-8 in string".into()),
                b'\\' => {
                    let Some(&e) = self.s.get(self.pos) else { return Err("unterminated escape".into()) };
                    self.pos += 1;
                    match e {
                        b'"' => out.push(b'"'),
                        b'\\' => out.push(b'\\'),
                        b'n' => out.push(b'\n'),
                        b't' => out.push(b'\t'),
                        b'u' => {
                            let hex = self.s.get(self.pos..self.pos + 4).ok_or("short \\u escape")?;
                            let hex = std::str::from_utf8(hex).map_err(|_| "bad \\u escape")?;
                            let cp = u32::from_str_radix(hex, 16).map_err(|_| "bad \\u escape")?;
                            let ch = char::from_u32(cp).ok_or("bad \\u escape")?;
                            self.pos += 4;
                            let mut buf = [0u8; 4];
                            out.extend_from_slice(ch.encode_utf8(&mut buf).as_bytes());
                        }
                        _ => return Err("unknown escape".into()),
                    }
                }
                c if c < 0x20 || c == 0x7f => return Err("control character in string".into()),
                c => out.push(c),
            }
        }
    }
}
