//! Session files: one ring, then named ideals, modules and primes.
//!
//! ```text
//! ring R = poly(char=32003, vars=[x,y,z,w]) / ideal(x*y - z*w);
//! ideal I = (x);
//! module M = coker([[w]]);
//! prime p = (x,y,z,w);
//! window = 1..4;
//! smax = 4;
//! ```
//!
//! Statements end at `;` or at a newline outside brackets; `#` starts a
//! comment. Modules are `coker([[..],[..]])` (row-major, optional
//! `degrees=[..]`), `free(n)`, or `cyclic(I)` / `cyclic((f, g))`.

use std::fmt;

use bassline_core::localinv::PrimeIdeal;
use bassline_core::matrix::Matrix;
use bassline_core::modpres::PresentedModule;
use bassline_core::{Error as CoreError, Field, Ideal, MonomialOrder, Polynomial, Ring};

const MAX_SESSION_BYTES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SessionError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Values that replace the ones written in the file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub characteristic: Option<u64>,
    pub order: Option<MonomialOrder>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDescriptor {
    pub name: String,
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub quotient: Vec<Polynomial>,
}

#[derive(Debug, Clone)]
pub enum Item {
    Ideal(Ideal),
    Module(PresentedModule),
    Prime(PrimeIdeal),
}

#[derive(Debug, Clone)]
pub struct Session {
    pub descriptor: RingDescriptor,
    pub ring: Ring,
    /// Declaration order.
    pub items: Vec<(String, Item)>,
    pub window: Option<(u32, u32)>,
    pub s_max: Option<usize>,
}

impl Session {
    fn lookup(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        match self.lookup(name)? {
            Item::Ideal(i) => Some(i),
            _ => None,
        }
    }

    pub fn module(&self, name: &str) -> Option<&PresentedModule> {
        match self.lookup(name)? {
            Item::Module(m) => Some(m),
            _ => None,
        }
    }

    pub fn prime(&self, name: &str) -> Option<&PrimeIdeal> {
        match self.lookup(name)? {
            Item::Prime(p) => Some(p),
            _ => None,
        }
    }

    fn names_of(&self, pick: fn(&Item) -> bool) -> Vec<&str> {
        self.items.iter().filter(|(_, i)| pick(i)).map(|(n, _)| n.as_str()).collect()
    }

    pub fn ideal_names(&self) -> Vec<&str> {
        self.names_of(|i| matches!(i, Item::Ideal(_)))
    }

    pub fn module_names(&self) -> Vec<&str> {
        self.names_of(|i| matches!(i, Item::Module(_)))
    }

    pub fn prime_names(&self) -> Vec<&str> {
        self.names_of(|i| matches!(i, Item::Prime(_)))
    }

    /// Canonical source text; parsing it gives back the same session.
    pub fn to_source(&self) -> String {
        let d = &self.descriptor;
        let ring = &self.ring;
        let list = |ps: &[Polynomial]| ps.iter().map(|p| ring.format(p)).collect::<Vec<_>>().join(", ");
        let mut out = format!(
            "ring {} = poly(char={}, vars=[{}], order={})",
            d.name,
            d.characteristic,
            d.vars.join(","),
            d.order.name()
        );
        if !d.quotient.is_empty() {
            out.push_str(&format!(" / ideal({})", list(&d.quotient)));
        }
        out.push_str(";\n");
        for (name, item) in &self.items {
            match item {
                Item::Ideal(i) => out.push_str(&format!("ideal {name} = ({});\n", list(i.gens()))),
                Item::Prime(p) => out.push_str(&format!("prime {name} = ({});\n", list(p.ideal().gens()))),
                Item::Module(m) => {
                    let rel = m.relations();
                    if rel.ncols() == 0 {
                        out.push_str(&format!("module {name} = free({})", m.gens()));
                    } else {
                        let rows: Vec<String> =
                            rel.rows().iter().map(|r| format!("[{}]", list(r))).collect();
                        out.push_str(&format!("module {name} = coker([{}]", rows.join(", ")));
                        if let Some(deg) = m.degrees().filter(|d| d.iter().any(|x| *x != 0)) {
                            let ds: Vec<String> = deg.iter().map(|x| x.to_string()).collect();
                            out.push_str(&format!(", degrees=[{}]", ds.join(",")));
                        }
                        out.push(')');
                    }
                    out.push_str(";\n");
                }
            }
        }
        if let Some((a, b)) = self.window {
            out.push_str(&format!("window = {a}..{b};\n"));
        }
        if let Some(s) = self.s_max {
            out.push_str(&format!("smax = {s};\n"));
        }
        out
    }
}

pub fn parse_session(text: &str) -> Result<Session, SessionError> {
    parse_session_with(text, Overrides::default())
}

pub fn parse_session_with(text: &str, overrides: Overrides) -> Result<Session, SessionError> {
    let clean = blank_comments(text);
    let src = Source::new(&clean);
    if text.len() > MAX_SESSION_BYTES {
        return Err(src.error(0, "session file too large"));
    }
    let statements = src.statements()?;
    let mut builder: Option<Session> = None;
    for (start, stmt) in statements {
        let mut c = Cursor { src: &src, text: stmt, base: start, pos: 0 };
        let keyword = c.ident()?;
        match keyword.as_str() {
            "ring" => {
                if builder.is_some() {
                    return Err(c.error_at(0, "only one ring may be declared"));
                }
                builder = Some(c.ring(overrides)?);
            }
            "ideal" | "module" | "prime" => {
                let session = builder.as_mut().ok_or_else(|| c.error_at(0, "declare the ring first"))?;
                let name_at = c.skip_ws();
                let name = c.ident()?;
                if name == session.descriptor.name || session.lookup(&name).is_some() {
                    return Err(c.error_at(name_at, format!("duplicate name `{name}`")));
                }
                c.expect('=')?;
                let item = match keyword.as_str() {
                    "ideal" => Item::Ideal(c.ideal(session)?),
                    "prime" => {
                        let at = c.skip_ws();
                        let ideal = c.ideal(session)?;
                        Item::Prime(PrimeIdeal::new(ideal).map_err(|e| c.core_error_at(at, e))?)
                    }
                    _ => Item::Module(c.module(session)?),
                };
                c.end()?;
                session.items.push((name, item));
            }
            "window" => {
                let session = builder.as_mut().ok_or_else(|| c.error_at(0, "declare the ring first"))?;
                c.expect('=')?;
                session.window = Some(c.range()?);
                c.end()?;
            }
            "smax" => {
                let session = builder.as_mut().ok_or_else(|| c.error_at(0, "declare the ring first"))?;
                c.expect('=')?;
                session.s_max = Some(c.number()? as usize);
                c.end()?;
            }
            other => return Err(c.error_at(0, format!("unknown statement `{other}`"))),
        }
    }
    builder.ok_or_else(|| src.error(text.len(), "no ring declared"))
}

struct Source<'a> {
    text: &'a str,
}

impl<'a> Source<'a> {
    fn new(text: &'a str) -> Source<'a> {
        Source { text }
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> SessionError {
        let offset = offset.min(self.text.len());
        let before = &self.text[..floor_boundary(self.text, offset)];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SessionError { line, column, message: message.into() }
    }

    /// Statements with their byte offsets; comments blanked out.
    fn statements(&self) -> Result<Vec<(usize, &'a str)>, SessionError> {
        let bytes = self.text.as_bytes();
        let mut out = Vec::new();
        let mut depth: Vec<(u8, usize)> = Vec::new();
        let mut start = 0;
        let mut i = 0;
        let push = |from: usize, to: usize, out: &mut Vec<(usize, &'a str)>| {
            let s = &self.text[from..to];
            if !s.trim().is_empty() {
                out.push((from, s));
            }
        };
        while i < bytes.len() {
            match bytes[i] {
                b'(' | b'[' => depth.push((bytes[i], i)),
                b')' | b']' => {
                    let open = if bytes[i] == b')' { b'(' } else { b'[' };
                    match depth.pop() {
                        Some((o, _)) if o == open => {}
                        _ => return Err(self.error(i, format!("unbalanced `{}`", bytes[i] as char))),
                    }
                }
                b';' | b'\n' if depth.is_empty() => {
                    push(start, i, &mut out);
                    start = i + 1;
                }
                _ => {}
            }
            i += 1;
        }
        if let Some((b, at)) = depth.pop() {
            return Err(self.error(at, format!("unclosed `{}`", b as char)));
        }
        push(start, bytes.len(), &mut out);
        Ok(out)
    }
}

fn floor_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}

/// Replace every comment by spaces so offsets stay put.
fn blank_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        match c {
            '\n' => {
                in_comment = false;
                out.push(c);
            }
            '#' => {
                in_comment = true;
                out.push(' ');
            }
            _ if in_comment => out.extend(std::iter::repeat(' ').take(c.len_utf8())),
            _ => out.push(c),
        }
    }
    out
}

struct Cursor<'s, 'a> {
    src: &'s Source<'a>,
    text: &'a str,
    base: usize,
    pos: usize,
}

impl<'s, 'a> Cursor<'s, 'a> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> SessionError {
        self.src.error(self.base + pos, message)
    }

    fn error(&self, message: impl Into<String>) -> SessionError {
        self.error_at(self.pos, message)
    }

    fn core_error_at(&self, pos: usize, e: CoreError) -> SessionError {
        match e {
            CoreError::Parse { offset, message } => self.error_at(pos + offset, message),
            CoreError::ImproperIdeal => self.error_at(pos, "improper ideal: contains 1"),
            other => self.error_at(pos, other.to_string()),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) -> usize {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
        self.pos
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), SessionError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{ch}`")))
        }
    }

    fn end(&mut self) -> Result<(), SessionError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn ident(&mut self) -> Result<String, SessionError> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|(k, c)| !(c.is_ascii_alphabetic() || *c == '_' || (*k > 0 && c.is_ascii_digit())))
            .map_or(r.len(), |(k, _)| k);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(r[..len].to_string())
    }

    fn keyword(&mut self, word: &str) -> Result<(), SessionError> {
        let at = self.skip_ws();
        let got = self.ident()?;
        if got != word {
            return Err(self.error_at(at, format!("expected `{word}`")));
        }
        Ok(())
    }

    fn number(&mut self) -> Result<u64, SessionError> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let v = r[..len].parse().map_err(|_| self.error("number too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn range(&mut self) -> Result<(u32, u32), SessionError> {
        let at = self.skip_ws();
        let a = self.number()?;
        if !self.rest().starts_with("..") {
            return Err(self.error("expected `..`"));
        }
        self.pos += 2;
        let b = self.number()?;
        if a < 1 || b < a || b > u32::MAX as u64 {
            return Err(self.error_at(at, "window must be A..B with 1 <= A <= B"));
        }
        Ok((a as u32, b as u32))
    }

    /// Split a bracketed, comma separated list at top level. Returns the
    /// pieces with their positions; the cursor moves past the closing bracket.
    fn list(&mut self, open: char, close: char) -> Result<Vec<(usize, &'a str)>, SessionError> {
        self.expect(open)?;
        let start = self.pos;
        let mut depth = 0i32;
        let mut pieces = Vec::new();
        let mut piece_start = start;
        for (k, c) in self.rest().char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                c2 if c2 == close && depth == 0 => {
                    let end = start + k;
                    let last = &self.text[piece_start..end];
                    if !(pieces.is_empty() && last.trim().is_empty()) {
                        pieces.push(self.piece(piece_start, end));
                    }
                    self.pos = end + c.len_utf8();
                    return Ok(pieces);
                }
                ',' if depth == 0 => {
                    pieces.push(self.piece(piece_start, start + k));
                    piece_start = start + k + 1;
                }
                _ => {}
            }
        }
        Err(self.error(format!("expected `{close}`")))
    }

    /// `text[from..to]` without leading whitespace, with its offset.
    fn piece(&self, from: usize, to: usize) -> (usize, &'a str) {
        let t = &self.text[from..to];
        let trimmed = t.trim_start();
        (from + t.len() - trimmed.len(), trimmed)
    }

    fn polynomial(&self, ring: &Ring, at: usize, text: &str) -> Result<Polynomial, SessionError> {
        let lead = text.len() - text.trim_start().len();
        if text.trim().is_empty() {
            return Err(self.error_at(at, "expected a polynomial"));
        }
        ring.parse(text.trim()).map_err(|e| self.core_error_at(at + lead, e))
    }

    fn ring(&mut self, overrides: Overrides) -> Result<Session, SessionError> {
        let name = self.ident()?;
        self.expect('=')?;
        self.keyword("poly")?;
        let mut characteristic = bassline_core::coeff::DEFAULT_CHARACTERISTIC;
        let mut char_at = self.pos;
        let mut vars: Option<Vec<String>> = None;
        let mut order = MonomialOrder::Grevlex;
        for (at, arg) in self.list('(', ')')? {
            let mut c = Cursor { src: self.src, text: arg, base: self.base + at, pos: 0 };
            let key = c.ident()?;
            c.expect('=')?;
            match key.as_str() {
                "char" => {
                    char_at = at + c.skip_ws();
                    characteristic = if c.eat('Q') { 0 } else { c.number()? };
                }
                "vars" => {
                    let mut names = Vec::new();
                    for (vat, v) in c.list('[', ']')? {
                        let mut vc = Cursor { src: self.src, text: v, base: c.base + vat, pos: 0 };
                        let n = vc.ident()?;
                        vc.end()?;
                        if names.contains(&n) {
                            return Err(vc.error_at(0, format!("duplicate variable `{n}`")));
                        }
                        names.push(n);
                    }
                    vars = Some(names);
                }
                "order" => {
                    let oat = c.skip_ws();
                    order = parse_order(&c.ident()?).ok_or_else(|| c.error_at(oat, "order must be grevlex or lex"))?;
                }
                other => return Err(c.error_at(0, format!("unknown ring option `{other}`"))),
            }
            c.end()?;
        }
        let vars = vars.ok_or_else(|| self.error("ring needs vars=[..]"))?;
        if let Some(q) = overrides.characteristic {
            characteristic = q;
        }
        if let Some(o) = overrides.order {
            order = o;
        }
        let field = Field::with_characteristic(characteristic).map_err(|e| self.core_error_at(char_at, e))?;
        let ambient = Ring::new(vars.clone(), field, order, Vec::new()).map_err(|e| self.core_error_at(0, e))?;
        let mut quotient = Vec::new();
        if self.eat('/') {
            self.keyword("ideal")?;
            for (at, p) in self.list('(', ')')? {
                quotient.push(self.polynomial(&ambient, at, p)?);
            }
        }
        self.end()?;
        let ring = ambient.quotient_by(&quotient).map_err(|e| self.core_error_at(0, e))?;
        let descriptor = RingDescriptor { name, characteristic, vars, order, quotient };
        Ok(Session { descriptor, ring, items: Vec::new(), window: None, s_max: None })
    }

    /// `(f, g, ...)` or the name of a declared ideal or prime.
    fn ideal(&mut self, session: &Session) -> Result<Ideal, SessionError> {
        let at = self.skip_ws();
        if self.peek() == Some('(') {
            let mut gens = Vec::new();
            for (pat, p) in self.list('(', ')')? {
                gens.push(self.polynomial(&session.ring, pat, p)?);
            }
            return Ok(Ideal::new(&session.ring, gens));
        }
        let name = self.ident()?;
        match session.lookup(&name) {
            Some(Item::Ideal(i)) => Ok(i.clone()),
            Some(Item::Prime(p)) => Ok(p.ideal().clone()),
            Some(Item::Module(_)) => Err(self.error_at(at, format!("`{name}` is a module, not an ideal"))),
            None => Err(self.error_at(at, format!("unresolved name `{name}`"))),
        }
    }

    fn module(&mut self, session: &Session) -> Result<PresentedModule, SessionError> {
        let at = self.skip_ws();
        let kind = self.ident()?;
        let ring = &session.ring;
        match kind.as_str() {
            "free" => {
                self.expect('(')?;
                let n = self.number()?;
                self.expect(')')?;
                if n > 1000 {
                    return Err(self.error_at(at, "free module rank too large"));
                }
                Ok(PresentedModule::free(ring, n as usize))
            }
            "cyclic" => {
                self.expect('(')?;
                let ideal = self.ideal(session)?;
                self.expect(')')?;
                Ok(PresentedModule::cyclic(&ideal))
            }
            "coker" => {
                let args = self.list('(', ')')?;
                let Some(&(mat_at, mat_text)) = args.first() else {
                    return Err(self.error_at(at, "coker needs a matrix"));
                };
                let mut mc = Cursor { src: self.src, text: mat_text, base: self.base + mat_at, pos: 0 };
                let mut rows: Vec<Vec<Polynomial>> = Vec::new();
                for (row_at, row_text) in mc.list('[', ']')? {
                    let mut rc = Cursor { src: self.src, text: row_text, base: mc.base + row_at, pos: 0 };
                    let entries = rc.list('[', ']')?;
                    rc.end()?;
                    let row = entries
                        .iter()
                        .map(|(eat, e)| rc.polynomial(ring, *eat, e))
                        .collect::<Result<Vec<_>, _>>()?;
                    if let Some(first) = rows.first() {
                        if first.len() != row.len() {
                            return Err(rc.error_at(
                                0,
                                format!("ragged matrix: row {} has {} entries, expected {}", rows.len() + 1, row.len(), first.len()),
                            ));
                        }
                    }
                    rows.push(row);
                }
                mc.end()?;
                if rows.is_empty() {
                    return Err(mc.error_at(0, "matrix needs at least one row"));
                }
                let gens = rows.len();
                let matrix = if rows[0].is_empty() {
                    Matrix::zero(gens, 0)
                } else {
                    Matrix::from_rows(rows).map_err(|e| mc.core_error_at(0, e))?
                };
                let m = PresentedModule::new(ring, gens, matrix).map_err(|e| mc.core_error_at(0, e))?;
                let mut degrees = None;
                for &(dat, dtext) in &args[1..] {
                    let mut dc = Cursor { src: self.src, text: dtext, base: self.base + dat, pos: 0 };
                    dc.keyword("degrees")?;
                    dc.expect('=')?;
                    let mut ds = Vec::new();
                    for (xat, x) in dc.list('[', ']')? {
                        let t = x.trim();
                        let v: i64 = t.parse().map_err(|_| dc.error_at(xat, "expected an integer degree"))?;
                        ds.push(v);
                    }
                    dc.end()?;
                    if ds.len() != gens {
                        return Err(dc.error_at(0, format!("expected {gens} degrees, found {}", ds.len())));
                    }
                    degrees = Some((dat, ds));
                }
                match degrees {
                    Some((dat, ds)) => m.with_grading(ds).map_err(|e| self.core_error_at(dat, e)),
                    None => Ok(m.try_grade()),
                }
            }
            other => Err(self.error_at(at, format!("unknown module constructor `{other}`"))),
        }
    }
}

pub fn parse_order(s: &str) -> Option<MonomialOrder> {
    match s {
        "grevlex" => Some(MonomialOrder::Grevlex),
        "lex" => Some(MonomialOrder::Lex),
        _ => None,
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.characteristic == 0 { "Q".to_string() } else { self.characteristic.to_string() };
        write!(f, "{}[{}] ({})", k, self.vars.join(","), self.order.name())
    }
}
