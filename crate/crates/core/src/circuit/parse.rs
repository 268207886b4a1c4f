//! Line-oriented circuit format.
//!
//! ```text
//! program    := header NEWLINE (stmt NEWLINE)*
//! header     := "qubits" WS INT                 # 1 ≤ INT ≤ MAX_QUBITS
//! stmt       := gate_stmt | sgate_stmt | "measure" | comment | blank
//! gate_stmt  := "gate" WS NAME params? (WS INT)+   # qubit targets, 0-based
//! sgate_stmt := "sgate" WS NAME params? (WS INT)+  # mode targets, 0..2^n - 1
//! params     := "(" REAL ("," REAL)* ")"        # whitespace tolerated inside
//! comment    := "#" any-chars
//! NAME       := [A-Z][A-Z0-9_]*
//! REAL       := [+-]? (DIGITS ("." DIGITS?)? | "." DIGITS) ([eE] [+-]? DIGITS)?
//! ```
//!
//! Leading and trailing whitespace on a line is ignored, as are comment and
//! blank lines before the header. `measure` may appear at most once and
//! must be the last statement.

use std::fmt;

use thiserror::Error;

use super::{Circuit, TargetSpace};
use crate::error::Error;
use crate::gates::{GateCatalog, GateKind};

/// Largest accepted qubit count; execution uses dense 2^n × 2^n matrices.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    MissingHeader,
    QubitLimit(usize),
    UnknownGate(String),
    ParamCount { gate: String, expected: usize, found: usize },
    ArityMismatch { gate: String, expected: usize, found: usize },
    TargetOutOfRange { index: usize, limit: usize },
    DuplicateTarget(usize),
    KindMismatch { gate: String, statement: &'static str },
    DuplicateMeasure,
    MeasureNotLast,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::MissingHeader => f.write_str("missing header: expected `qubits N`"),
            ParseErrorKind::QubitLimit(n) => {
                write!(f, "qubit count {n} outside supported range 1..={MAX_QUBITS}")
            }
            ParseErrorKind::UnknownGate(name) => write!(f, "unknown gate {name}"),
            ParseErrorKind::ParamCount { gate, expected, found } => {
                write!(f, "gate {gate} takes {expected} parameter(s), got {found}")
            }
            ParseErrorKind::ArityMismatch { gate, expected, found } => {
                write!(f, "gate {gate} takes {expected} target(s), got {found}")
            }
            ParseErrorKind::TargetOutOfRange { index, limit } => {
                write!(f, "target {index} out of range (valid 0..{limit})")
            }
            ParseErrorKind::DuplicateTarget(t) => write!(f, "target {t} repeated"),
            ParseErrorKind::KindMismatch { gate, statement } => match *statement {
                "gate" => write!(f, "{gate} is symplectic-only; use `sgate`"),
                _ => write!(f, "{gate} is unitary; use `gate`"),
            },
            ParseErrorKind::DuplicateMeasure => f.write_str("duplicate `measure`"),
            ParseErrorKind::MeasureNotLast => f.write_str("statement after `measure`"),
        }
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    text: &'a str,
    pos: usize,
    line: usize,
}

type LineResult<T> = std::result::Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self { chars: text.char_indices().collect(), text, pos: 0, line }
    }

    /// 1-based column of the current position.
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, ch)| ch)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn err_at(&self, col: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.col(), ParseErrorKind::Syntax(msg.into()))
    }

    fn skip_ws(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn slice(&self, start: usize, end: usize) -> &'a str {
        let from = self.chars.get(start).map_or(self.text.len(), |&(b, _)| b);
        let to = self.chars.get(end).map_or(self.text.len(), |&(b, _)| b);
        &self.text[from..to]
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        self.slice(start, self.pos)
    }

    /// Requires at least one whitespace character before the next token.
    fn require_ws(&mut self, what: &str) -> LineResult<()> {
        if self.skip_ws() == 0 {
            return Err(if self.at_end() {
                self.syntax(format!("expected {what}, found end of line"))
            } else {
                self.syntax(format!("expected whitespace before {what}"))
            });
        }
        if self.at_end() {
            return Err(self.syntax(format!("expected {what}, found end of line")));
        }
        Ok(())
    }

    fn int(&mut self, what: &str) -> LineResult<(usize, usize)> {
        let col = self.col();
        let digits = self.take_while(|ch| ch.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.syntax(format!("expected {what}")));
        }
        if self.peek().is_some_and(|ch| !matches!(ch, ' ' | '\t')) {
            return Err(self.syntax(format!("unexpected character in {what}")));
        }
        let value = digits
            .parse::<usize>()
            .map_err(|_| self.err_at(col, ParseErrorKind::Syntax(format!("{what} too large"))))?;
        Ok((value, col))
    }

    fn name(&mut self) -> LineResult<(&'a str, usize)> {
        let col = self.col();
        if !self.peek().is_some_and(|ch| ch.is_ascii_uppercase()) {
            return Err(self.syntax("expected gate name [A-Z][A-Z0-9_]*"));
        }
        let name = self.take_while(|ch| ch.is_ascii_uppercase() || ch.is_ascii_digit() || ch == '_');
        Ok((name, col))
    }

    fn real(&mut self) -> LineResult<f64> {
        let start = self.pos;
        let col = self.col();
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        let int_digits = self.take_while(|ch| ch.is_ascii_digit()).len();
        let mut frac_digits = 0;
        if self.peek() == Some('.') {
            self.pos += 1;
            frac_digits = self.take_while(|ch| ch.is_ascii_digit()).len();
        }
        if int_digits == 0 && frac_digits == 0 {
            self.pos = start;
            return Err(self.syntax("expected a real number"));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if self.take_while(|ch| ch.is_ascii_digit()).is_empty() {
                return Err(self.syntax("expected exponent digits"));
            }
        }
        let literal = self.slice(start, self.pos);
        let value: f64 =
            literal.parse().map_err(|_| self.err_at(col, ParseErrorKind::Syntax(format!("bad number {literal:?}"))))?;
        if !value.is_finite() {
            return Err(self.err_at(col, ParseErrorKind::Syntax(format!("number {literal} overflows"))));
        }
        Ok(value)
    }

    fn params(&mut self) -> LineResult<Vec<f64>> {
        if self.peek() != Some('(') {
            return Ok(Vec::new());
        }
        self.pos += 1;
        let mut params = Vec::new();
        loop {
            self.skip_ws();
            params.push(self.real()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(params);
                }
                Some(_) => return Err(self.syntax("expected `,` or `)`")),
                None => return Err(self.syntax("unclosed parameter list")),
            }
        }
    }

    fn keyword(&mut self) -> &'a str {
        self.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '_')
    }

    fn expect_end(&mut self) -> LineResult<()> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }
}

fn significant(line: &str) -> bool {
    let trimmed = line.trim_start_matches([' ', '\t']);
    !trimmed.is_empty() && !trimmed.starts_with('#')
}

fn strip_line_end(line: &str) -> &str {
    line.strip_suffix('\r').unwrap_or(line)
}

/// Parses and validates a circuit program.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = text.split('\n').map(strip_line_end).enumerate().map(|(i, l)| (i + 1, l));

    let mut circuit = None;
    for (line_no, line) in lines.by_ref() {
        if significant(line) {
            circuit = Some(parse_header(line, line_no)?);
            break;
        }
    }
    let mut circuit = circuit.ok_or(ParseError { line: 1, col: 1, kind: ParseErrorKind::MissingHeader })?;

    for (line_no, line) in lines {
        if !significant(line) {
            continue;
        }
        let mut cur = Cursor::new(line, line_no);
        cur.skip_ws();
        let col = cur.col();
        if circuit.measure_at_end {
            let kind = if cur.keyword() == "measure" {
                ParseErrorKind::DuplicateMeasure
            } else {
                ParseErrorKind::MeasureNotLast
            };
            return Err(cur.err_at(col, kind));
        }
        match cur.keyword() {
            "measure" => {
                cur.expect_end()?;
                circuit.measure_at_end = true;
            }
            "gate" => parse_gate(&mut cur, &mut circuit, TargetSpace::Qubit)?,
            "sgate" => parse_gate(&mut cur, &mut circuit, TargetSpace::Mode)?,
            "qubits" => return Err(cur.err_at(col, ParseErrorKind::Syntax("header repeated".into()))),
            "" => return Err(cur.syntax("expected a statement")),
            other => return Err(cur.err_at(col, ParseErrorKind::Syntax(format!("unknown statement {other:?}")))),
        }
    }
    Ok(circuit)
}

fn parse_header(line: &str, line_no: usize) -> Result<Circuit, ParseError> {
    let mut cur = Cursor::new(line, line_no);
    cur.skip_ws();
    let col = cur.col();
    if cur.keyword() != "qubits" {
        return Err(cur.err_at(col, ParseErrorKind::MissingHeader));
    }
    cur.require_ws("qubit count")?;
    let (n, n_col) = cur.int("qubit count")?;
    cur.expect_end()?;
    if n == 0 || n > MAX_QUBITS {
        return Err(cur.err_at(n_col, ParseErrorKind::QubitLimit(n)));
    }
    Ok(Circuit::new(n))
}

fn parse_gate(cur: &mut Cursor<'_>, circuit: &mut Circuit, space: TargetSpace) -> Result<(), ParseError> {
    let statement = match space {
        TargetSpace::Qubit => "gate",
        TargetSpace::Mode => "sgate",
    };
    cur.require_ws("gate name")?;
    let (name, name_col) = cur.name()?;
    let params = cur.params()?;
    if cur.peek().is_some_and(|ch| !matches!(ch, ' ' | '\t')) {
        return Err(cur.syntax("expected whitespace after gate"));
    }

    let mut targets = Vec::new();
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        targets.push(cur.int("target index")?);
    }
    if targets.is_empty() {
        return Err(cur.syntax("expected at least one target"));
    }

    let catalog = GateCatalog::global();
    let spec = catalog.spec(name).ok_or_else(|| cur.err_at(name_col, ParseErrorKind::UnknownGate(name.to_string())))?;
    let expected_kind = match space {
        TargetSpace::Qubit => GateKind::Unitary,
        TargetSpace::Mode => GateKind::SymplecticOnly,
    };
    if spec.kind != expected_kind {
        return Err(cur.err_at(name_col, ParseErrorKind::KindMismatch { gate: name.to_string(), statement }));
    }
    if params.len() != spec.n_params {
        return Err(cur.err_at(
            name_col,
            ParseErrorKind::ParamCount { gate: name.to_string(), expected: spec.n_params, found: params.len() },
        ));
    }
    if targets.len() != spec.arity {
        return Err(cur.err_at(
            targets[0].1,
            ParseErrorKind::ArityMismatch { gate: name.to_string(), expected: spec.arity, found: targets.len() },
        ));
    }
    let limit = match space {
        TargetSpace::Qubit => circuit.n_qubits,
        TargetSpace::Mode => circuit.dim(),
    };
    for (i, &(t, col)) in targets.iter().enumerate() {
        if t >= limit {
            return Err(cur.err_at(col, ParseErrorKind::TargetOutOfRange { index: t, limit }));
        }
        if targets[..i].iter().any(|&(prev, _)| prev == t) {
            return Err(cur.err_at(col, ParseErrorKind::DuplicateTarget(t)));
        }
    }

    let indices: Vec<usize> = targets.iter().map(|&(t, _)| t).collect();
    let pushed = match space {
        TargetSpace::Qubit => circuit.push_gate(name, &params, &indices),
        TargetSpace::Mode => circuit.push_sgate(name, &params, &indices),
    };
    pushed.map_err(|e| match e {
        Error::NonFinite(what) => cur.err_at(name_col, ParseErrorKind::Syntax(format!("non-finite {what}"))),
        other => cur.err_at(name_col, ParseErrorKind::Syntax(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind_of(text: &str) -> (usize, usize, ParseErrorKind) {
        let err = parse_circuit(text).unwrap_err();
        (err.line, err.col, err.kind)
    }

    #[test]
    fn smallest_program() {
        let c = parse_circuit("qubits 1\ngate NOTP 0\nmeasure").unwrap();
        assert_eq!(c.n_qubits, 1);
        assert_eq!(c.ops.len(), 1);
        assert_eq!(c.ops[0].gate.name, "NOTP");
        assert_eq!(c.ops[0].targets, vec![0]);
        assert!(c.measure_at_end);
    }

    #[test]
    fn bell_program() {
        let c = parse_circuit("qubits 2\ngate H 0\ngate CNOT 0 1\nmeasure\n").unwrap();
        assert_eq!(c.ops.len(), 2);
        assert_eq!(c.ops[1].targets, vec![0, 1]);
    }

    #[test]
    fn mode_targets_range_over_complex_dimension() {
        let c = parse_circuit("qubits 1\nsgate SQUEEZE(0.5) 1").unwrap();
        assert_eq!(c.ops[0].target_space, TargetSpace::Mode);
        assert_eq!(c.ops[0].gate.params, vec![0.5]);
        let (line, col, kind) = kind_of("qubits 1\nsgate SQUEEZE(0.5) 2");
        assert_eq!((line, col), (2, 20));
        assert_eq!(kind, ParseErrorKind::TargetOutOfRange { index: 2, limit: 2 });
    }

    #[test]
    fn params_tolerate_inner_whitespace_and_exponents() {
        let c = parse_circuit("qubits 1\ngate RZ( -1.5e-3 ) 0\ngate RX(.5) 0\ngate RY(+2.) 0").unwrap();
        let params: Vec<f64> = c.ops.iter().map(|op| op.gate.params[0]).collect();
        assert_eq!(params, vec![-1.5e-3, 0.5, 2.0]);
    }

    #[test]
    fn positioned_diagnostics() {
        assert_eq!(kind_of("").2, ParseErrorKind::MissingHeader);
        assert_eq!(kind_of("gate H 0").0, 1);
        assert_eq!(kind_of("qubits 2\ngate FOO 0"), (2, 6, ParseErrorKind::UnknownGate("FOO".into())));
        assert_eq!(
            kind_of("qubits 2\n\ngate CNOT 0"),
            (3, 11, ParseErrorKind::ArityMismatch { gate: "CNOT".into(), expected: 2, found: 1 })
        );
        assert_eq!(kind_of("qubits 2\ngate CNOT 1 1"), (2, 13, ParseErrorKind::DuplicateTarget(1)));
        assert_eq!(kind_of("qubits 1\nmeasure\nmeasure"), (3, 1, ParseErrorKind::DuplicateMeasure));
        assert_eq!(kind_of("qubits 1\nmeasure\ngate H 0"), (3, 1, ParseErrorKind::MeasureNotLast));
        assert_eq!(
            kind_of("qubits 1\nsgate H 0").2,
            ParseErrorKind::KindMismatch { gate: "H".into(), statement: "sgate" }
        );
        assert_eq!(kind_of("qubits 0").2, ParseErrorKind::QubitLimit(0));
        assert_eq!(kind_of("qubits 11").2, ParseErrorKind::QubitLimit(11));
        assert!(matches!(kind_of("qubits 1\ngate RX(1e999) 0").2, ParseErrorKind::Syntax(_)));
        assert!(matches!(kind_of("qubits 1\ngate RX(1,) 0").2, ParseErrorKind::Syntax(_)));
        assert!(matches!(kind_of("qubits 1\ngate h 0").2, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let c = parse_circuit("# bell\r\n\r\nqubits 2\r\n  # comment\r\n\tgate H 0  \r\ngate CNOT 0 1\r\n").unwrap();
        assert_eq!(c.ops.len(), 2);
        assert!(!c.measure_at_end);
    }

    #[test]
    fn multibyte_text_reports_char_columns() {
        let (line, col, _) = kind_of("qubits 1\ngate H é");
        assert_eq!((line, col), (2, 8));
    }

    #[test]
    fn display_round_trips() {
        let text = "qubits 3\ngate H 0\ngate RZ(0.1) 2\ngate CNOT 2 0\nsgate SHEAR(-3.5e-7) 7\nmeasure\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.to_string(), text);
        assert_eq!(parse_circuit(&c.to_string()).unwrap(), c);
    }
}
