//! Plain-text inequality format.
//!
//! ```text
//! # comment
//! vars: R, T0, T1
//! atoms: I(U;S), I(U,V1;Y1)
//! 1*T0 + 1*T1 < I(U,V1;Y1)
//! T0 - R > 1/2*I(U;S)
//! ```
//!
//! Names followed by a parenthesized group are atoms, other identifiers are
//! variables. The `vars:` and `atoms:` headers are optional; when present,
//! undeclared names are rejected. Coefficients are integers, decimals or
//! fractions `p/q`, read exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{FmError, Inequality, LinForm, LinIneqSystem, Rational, RelOp};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

#[derive(Debug)]
enum Name {
    Var(String),
    Atom(String),
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, msg: impl Into<String>) -> FmError {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> FmError {
        FmError::Parse {
            line: self.line,
            col: pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<Rational, FmError> {
        self.skip_ws();
        let start = self.pos;
        let int = self.digits();
        let mut num: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().expect("digits")
        };
        let mut den = BigInt::one();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                return Err(self.err_at(start, "expected a number"));
            }
            for d in frac.chars() {
                num = num * 10 + BigInt::from(d.to_digit(10).expect("digit"));
                den *= 10;
            }
        } else if int.is_empty() {
            return Err(self.err_at(start, "expected a number"));
        }
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let d = self.digits();
            if d.is_empty() {
                return Err(self.err("expected a denominator after `/`"));
            }
            let d: BigInt = d.parse().expect("digits");
            if d.is_zero() {
                return Err(self.err_at(self.pos - 1, "zero denominator"));
            }
            den *= d;
        }
        Ok(Rational::new(num, den))
    }

    fn name(&mut self) -> Result<Name, FmError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if self.pos == start || self.chars[start].is_ascii_digit() {
            return Err(self.err_at(start, "expected a name"));
        }
        if self.chars.get(self.pos) != Some(&'(') {
            return Ok(Name::Var(self.chars[start..self.pos].iter().collect()));
        }
        let open = self.pos;
        let mut depth = 0usize;
        while self.pos < self.chars.len() {
            match self.chars[self.pos] {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        let s: String = self.chars[start..self.pos]
                            .iter()
                            .filter(|c| !c.is_whitespace())
                            .collect();
                        return Ok(Name::Atom(s));
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.err_at(open, "unbalanced parenthesis"))
    }

    fn term(&mut self, form: &mut LinForm, sign: Rational) -> Result<(), FmError> {
        let c = match self.peek() {
            Some(ch) if ch.is_ascii_digit() || ch == '.' => {
                let c = self.number()?;
                self.eat('*');
                match self.peek() {
                    Some(ch) if ch.is_alphabetic() || ch == '_' => c,
                    _ => {
                        form.add_constant(&(c * sign));
                        return Ok(());
                    }
                }
            }
            Some(ch) if ch.is_alphabetic() || ch == '_' => Rational::one(),
            Some(ch) => return Err(self.err(format!("unexpected `{ch}`"))),
            None => return Err(self.err("expected a term")),
        };
        match self.name()? {
            Name::Var(n) => form.add_var(&n, &(c * sign)),
            Name::Atom(n) => form.add_atom(&n, &(c * sign)),
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<LinForm, FmError> {
        let mut form = LinForm::zero();
        let mut sign = Rational::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        self.term(&mut form, sign)?;
        loop {
            let sign = if self.eat('+') {
                Rational::one()
            } else if self.eat('-') {
                -Rational::one()
            } else {
                return Ok(form);
            };
            self.term(&mut form, sign)?;
        }
    }

    fn relop(&mut self) -> Result<RelOp, FmError> {
        self.skip_ws();
        let rest: String = self.chars[self.pos..].iter().take(2).collect();
        let (op, len) = if rest.starts_with("<=") {
            (RelOp::Le, 2)
        } else if rest.starts_with(">=") {
            (RelOp::Ge, 2)
        } else if rest.starts_with("==") {
            (RelOp::Eq, 2)
        } else if rest.starts_with('<') {
            (RelOp::Lt, 1)
        } else if rest.starts_with('>') {
            (RelOp::Gt, 1)
        } else if rest.starts_with('=') {
            (RelOp::Eq, 1)
        } else if rest.starts_with('≤') {
            (RelOp::Le, 1)
        } else if rest.starts_with('≥') {
            (RelOp::Ge, 1)
        } else {
            return Err(self.err("expected one of <, <=, =, >=, >"));
        };
        self.pos += len;
        Ok(op)
    }

    fn inequality(&mut self) -> Result<Inequality, FmError> {
        let lhs = self.expr()?;
        let op = self.relop()?;
        let rhs = self.expr()?;
        if !self.at_end() {
            return Err(self.err("trailing input"));
        }
        Ok(Inequality::new(&lhs, op, &rhs))
    }

    /// Comma-separated names; commas inside parentheses belong to the name.
    fn name_list(&mut self) -> Result<Vec<(usize, Name)>, FmError> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            out.push((at, self.name()?));
            if self.at_end() {
                return Ok(out);
            }
            if !self.eat(',') {
                return Err(self.err("expected `,`"));
            }
        }
    }
}

/// Parse a single inequality such as `T0 + T1 < I(U,V1;Y1)`.
pub fn parse_inequality(src: &str) -> Result<Inequality, FmError> {
    Cursor::new(src, 1).inequality()
}

/// Text after `key:` and its column offset.
fn header<'a>(line: &'a str, key: &str) -> Option<(usize, &'a str)> {
    line.trim_start()
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .map(|r| (line[..line.len() - r.len()].chars().count(), r))
}

pub(crate) fn parse_system(text: &str) -> Result<LinIneqSystem, FmError> {
    let mut vars: Option<Vec<String>> = None;
    let mut atoms: Option<Vec<String>> = None;
    let mut parsed: Vec<(usize, Inequality, Vec<(String, bool, usize)>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        for (key, is_var) in [("vars", true), ("atoms", false)] {
            if let Some((offset, rest)) = header(line, key) {
                let mut cur = Cursor::new(rest, line_no);
                let mut names = Vec::new();
                for (at, n) in cur.name_list().map_err(|e| shift(e, offset))? {
                    match (n, is_var) {
                        (Name::Var(n), true) | (Name::Atom(n), false) => {
                            if names.contains(&n) {
                                return Err(FmError::Duplicate(n));
                            }
                            names.push(n);
                        }
                        (Name::Atom(n), true) => {
                            return Err(shift(
                                cur.err_at(at, format!("`{n}` looks like an atom")),
                                offset,
                            ))
                        }
                        (Name::Var(n), false) => {
                            return Err(shift(
                                cur.err_at(
                                    at,
                                    format!("atom `{n}` needs a parenthesized argument"),
                                ),
                                offset,
                            ))
                        }
                    }
                }
                let slot = if is_var { &mut vars } else { &mut atoms };
                if slot.is_some() {
                    return Err(FmError::Parse {
                        line: line_no,
                        col: 1,
                        msg: format!("second `{key}:` header"),
                    });
                }
                *slot = Some(names);
            }
        }
        if header(line, "vars").is_some() || header(line, "atoms").is_some() {
            continue;
        }
        let row = Cursor::new(line, line_no).inequality()?;
        // record where every name starts so undeclared ones can be located
        let mut spots = Vec::new();
        let mut probe = Cursor::new(line, line_no);
        while probe.pos < probe.chars.len() {
            let c = probe.chars[probe.pos];
            if c.is_alphabetic() || c == '_' {
                let at = probe.pos;
                match probe.name()? {
                    Name::Var(n) => spots.push((n, true, at)),
                    Name::Atom(n) => spots.push((n, false, at)),
                }
            } else if c.is_ascii_digit() {
                probe.digits();
            } else {
                probe.pos += 1;
            }
        }
        parsed.push((line_no, row, spots));
    }

    let declared_vars = vars.is_some();
    let declared_atoms = atoms.is_some();
    let mut vars = vars.unwrap_or_default();
    let mut atoms = atoms.unwrap_or_default();
    for (line, _, spots) in &parsed {
        for (n, is_var, at) in spots {
            let (list, declared) = if *is_var {
                (&mut vars, declared_vars)
            } else {
                (&mut atoms, declared_atoms)
            };
            if !list.contains(n) {
                if declared {
                    return Err(FmError::Parse {
                        line: *line,
                        col: at + 1,
                        msg: format!(
                            "undeclared {} `{n}`",
                            if *is_var { "variable" } else { "atom" }
                        ),
                    });
                }
                list.push(n.clone());
            }
        }
    }
    let mut sys = LinIneqSystem::new(&vars, &atoms)?;
    for (_, row, _) in parsed {
        sys.push(row)?;
    }
    Ok(sys)
}

fn shift(e: FmError, offset: usize) -> FmError {
    match e {
        FmError::Parse { line, col, msg } => FmError::Parse {
            line,
            col: col + offset,
            msg,
        },
        other => other,
    }
}
