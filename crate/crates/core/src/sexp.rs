//! S-expression reader and printer.
//!
//! The reader produces [`Value`]s; [`translate`] turns a datum into a
//! [`Term`], expanding the handful of surface macros (`+`, `<=`, `and`,
//! n-ary `logand`, ...) into the fixed-arity primitives.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::term::{Sym, Term, Value};

/// One-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

/// A top-level datum together with where it started.
#[derive(Clone, Debug)]
pub struct Form {
    pub pos: Pos,
    pub value: Value,
}

struct Reader {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '\'' | '"' | ';')
}

impl Reader {
    fn new(text: &str) -> Self {
        Reader { chars: text.chars().collect(), idx: 0, line: 1, column: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err<T>(&self, pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, message: message.into() })
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.peek().is_none()
    }

    fn read(&mut self) -> Result<Value, ParseError> {
        self.skip_trivia();
        let start = self.pos();
        match self.peek() {
            None => self.err(start, "unexpected end of input"),
            Some('(') => {
                self.bump();
                self.read_list(start)
            }
            Some(')') => self.err(start, "unbalanced ')'"),
            Some('\'') => {
                self.bump();
                let quoted = self.read()?;
                Ok(Value::list([Value::sym("QUOTE"), quoted]))
            }
            Some('"') => {
                self.bump();
                self.read_string(start)
            }
            Some('#') => self.read_char(start),
            Some('|') => {
                self.bump();
                let mut name = String::new();
                loop {
                    match self.bump() {
                        None => return self.err(start, "unterminated |symbol|"),
                        Some('|') => break,
                        Some(c) => name.push(c),
                    }
                }
                Ok(Value::Symbol(Sym::new(&name)))
            }
            Some(_) => {
                let tok = self.read_token();
                if tok == "." {
                    return self.err(start, "dot outside of a list");
                }
                Ok(atom(&tok))
            }
        }
    }

    fn read_token(&mut self) -> String {
        let mut tok = String::new();
        while let Some(c) = self.peek() {
            if is_delimiter(c) {
                break;
            }
            tok.push(c);
            self.bump();
        }
        tok
    }

    fn read_list(&mut self, start: Pos) -> Result<Value, ParseError> {
        let mut items = Vec::new();
        let mut tail = Value::nil();
        loop {
            self.skip_trivia();
            match self.peek() {
                None => return self.err(start, "unterminated list"),
                Some(')') => {
                    self.bump();
                    break;
                }
                Some('.') if self.chars.get(self.idx + 1).is_none_or(|&c| is_delimiter(c)) => {
                    let dot = self.pos();
                    self.bump();
                    if items.is_empty() {
                        return self.err(dot, "dotted pair without a head");
                    }
                    tail = self.read()?;
                    self.skip_trivia();
                    if self.bump() != Some(')') {
                        return self.err(dot, "expected ')' after dotted tail");
                    }
                    break;
                }
                Some(_) => items.push(self.read()?),
            }
        }
        Ok(items.into_iter().rev().fold(tail, |acc, v| Value::cons(v, acc)))
    }

    fn read_string(&mut self, start: Pos) -> Result<Value, ParseError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return self.err(start, "unterminated string"),
                Some('"') => return Ok(Value::string(&s)),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => s.push(c),
                    Some(c) => return self.err(self.pos(), format!("unsupported escape \\{c}")),
                    None => return self.err(start, "unterminated string"),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn read_char(&mut self, start: Pos) -> Result<Value, ParseError> {
        self.bump();
        if self.bump() != Some('\\') {
            return self.err(start, "expected #\\ character syntax");
        }
        let Some(first) = self.bump() else {
            return self.err(start, "unterminated character");
        };
        let mut name = String::from(first);
        while let Some(c) = self.peek() {
            if is_delimiter(c) {
                break;
            }
            name.push(c);
            self.bump();
        }
        if name.chars().count() == 1 {
            return Ok(Value::Character(first));
        }
        match name.to_ascii_uppercase().as_str() {
            "SPACE" => Ok(Value::Character(' ')),
            "NEWLINE" => Ok(Value::Character('\n')),
            "TAB" => Ok(Value::Character('\t')),
            _ => self.err(start, format!("unknown character name {name}")),
        }
    }
}

fn parse_number(tok: &str) -> Option<Value> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (tok, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.strip_prefix('+').unwrap_or(num).parse().ok()?;
    match den {
        None => Some(Value::Integer(n)),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Value::rational(BigRational::new(n, d)))
        }
    }
}

fn atom(tok: &str) -> Value {
    parse_number(tok).unwrap_or_else(|| Value::Symbol(Sym::new(&tok.to_uppercase())))
}

/// Reads every top-level datum in `text`.
pub fn read_forms(text: &str) -> Result<Vec<Form>, ParseError> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while !r.at_end() {
        let pos = r.pos();
        let value = r.read()?;
        out.push(Form { pos, value });
    }
    Ok(out)
}

/// Reads exactly one datum.
pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    let mut r = Reader::new(text);
    let v = r.read()?;
    if !r.at_end() {
        return r.err(r.pos(), "trailing input after datum");
    }
    Ok(v)
}

/// Reads one datum and translates it to a term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut r = Reader::new(text);
    r.skip_trivia();
    let pos = r.pos();
    let v = r.read()?;
    if !r.at_end() {
        return r.err(r.pos(), "trailing input after term");
    }
    translate(&v).map_err(|message| ParseError { pos, message })
}

fn right_nest(f: &str, mut args: Vec<Term>) -> Term {
    let last = args.pop().expect("at least two arguments");
    args.into_iter().rev().fold(last, |acc, a| Term::app(f, vec![a, acc]))
}

fn arity_error(name: &str, n: usize) -> String {
    format!("{name} does not accept {n} argument(s)")
}

/// Datum to term, expanding surface macros into primitives.
pub fn translate(v: &Value) -> Result<Term, String> {
    match v {
        Value::Symbol(s) => {
            if s.is("T") || s.is("NIL") || s.is_keyword() {
                Ok(Term::Quote(v.clone()))
            } else {
                Ok(Term::Var(s.clone()))
            }
        }
        Value::Cons(c) => {
            let head = match &c.0 {
                Value::Symbol(s) => s.clone(),
                Value::Cons(h) if h.0.as_symbol().is_some_and(|s| s.is("LAMBDA")) => {
                    return Err("lambda terms are not supported".into())
                }
                other => return Err(format!("{other} is not a function symbol")),
            };
            let raw = c.1.list_items().ok_or_else(|| format!("dotted argument list in call of {head}"))?;
            if head.is("QUOTE") {
                return match raw.as_slice() {
                    [x] => Ok(Term::Quote(x.clone())),
                    _ => Err("QUOTE takes exactly one argument".into()),
                };
            }
            let mut args = raw.iter().map(translate).collect::<Result<Vec<_>, _>>()?;
            let n = args.len();
            let name = head.name();
            let term = match name {
                "+" | "*" => {
                    let (prim, unit) = if name == "+" { ("BINARY-+", 0) } else { ("BINARY-*", 1) };
                    match n {
                        0 => Term::int(unit),
                        1 => Term::app(prim, vec![Term::int(unit), args.remove(0)]),
                        _ => right_nest(prim, args),
                    }
                }
                "-" => match n {
                    1 => Term::app("UNARY--", args),
                    2 => {
                        let b = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        Term::app("BINARY-+", vec![a, Term::app("UNARY--", vec![b])])
                    }
                    _ => return Err(arity_error("-", n)),
                },
                "/" => match n {
                    1 => Term::app("UNARY-/", args),
                    2 => {
                        let b = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        Term::app("BINARY-*", vec![a, Term::app("UNARY-/", vec![b])])
                    }
                    _ => return Err(arity_error("/", n)),
                },
                "<=" | ">" | ">=" => {
                    if n != 2 {
                        return Err(arity_error(name, n));
                    }
                    let b = args.pop().unwrap();
                    let a = args.pop().unwrap();
                    match name {
                        "<=" => Term::not(Term::app("<", vec![b, a])),
                        ">" => Term::app("<", vec![b, a]),
                        _ => Term::not(Term::app("<", vec![a, b])),
                    }
                }
                "AND" => match n {
                    0 => Term::t(),
                    _ => {
                        let last = args.pop().unwrap();
                        args.into_iter()
                            .rev()
                            .fold(last, |acc, a| Term::app("IF", vec![a, acc, Term::nil()]))
                    }
                },
                "OR" => match n {
                    0 => Term::nil(),
                    _ => {
                        let last = args.pop().unwrap();
                        args.into_iter()
                            .rev()
                            .fold(last, |acc, a| Term::app("IF", vec![a.clone(), a, acc]))
                    }
                },
                "LIST" => args
                    .into_iter()
                    .rev()
                    .fold(Term::nil(), |acc, a| Term::app("CONS", vec![a, acc])),
                "LOGAND" | "LOGIOR" if n != 2 => {
                    let unit = if name == "LOGAND" { -1 } else { 0 };
                    match n {
                        0 => Term::int(unit),
                        1 => Term::app(name, vec![Term::int(unit), args.remove(0)]),
                        _ => right_nest(name, args),
                    }
                }
                "CADR" | "CDDR" | "CAAR" | "CDAR" | "CADDR" if n == 1 => {
                    let ops: Vec<&str> = name[1..name.len() - 1]
                        .chars()
                        .map(|c| if c == 'A' { "CAR" } else { "CDR" })
                        .collect();
                    let x = args.remove(0);
                    ops.into_iter().rev().fold(x, |acc, op| Term::app(op, vec![acc]))
                }
                _ => Term::App(head, args),
            };
            Ok(term)
        }
        _ => Ok(Term::Quote(v.clone())),
    }
}

fn symbol_needs_bars(name: &str) -> bool {
    name.is_empty()
        || name == "."
        || parse_number(name).is_some()
        || name.starts_with('#')
        || name
            .chars()
            .any(|c| is_delimiter(c) || c == '|' || c == '\\' || c.is_lowercase())
}

fn write_symbol(out: &mut dyn fmt::Write, s: &Sym) -> fmt::Result {
    if symbol_needs_bars(s.name()) {
        write!(out, "|{}|", s.name())
    } else {
        out.write_str(s.name())
    }
}

fn write_value(out: &mut dyn fmt::Write, v: &Value) -> fmt::Result {
    match v {
        Value::Symbol(s) => write_symbol(out, s),
        Value::Integer(i) => write!(out, "{i}"),
        Value::Ratio(r) => write!(out, "{}/{}", r.numer(), r.denom()),
        Value::Character(c) => match c {
            ' ' => out.write_str("#\\Space"),
            '\n' => out.write_str("#\\Newline"),
            '\t' => out.write_str("#\\Tab"),
            c => write!(out, "#\\{c}"),
        },
        Value::String(s) => {
            out.write_char('"')?;
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.write_char('\\')?;
                }
                out.write_char(c)?;
            }
            out.write_char('"')
        }
        Value::Cons(c) if c.0.as_symbol().is_some_and(|s| s.is("QUOTE")) && c.1.len() == 1 && c.1.cdr().is_nil() => {
            out.write_char('\'')?;
            write_value(out, &c.1.car())
        }
        Value::Cons(_) => {
            out.write_char('(')?;
            let mut cur = v;
            let mut first = true;
            while let Value::Cons(c) = cur {
                if !first {
                    out.write_char(' ')?;
                }
                first = false;
                write_value(out, &c.0)?;
                cur = &c.1;
            }
            if !cur.is_nil() {
                out.write_str(" . ")?;
                write_value(out, cur)?;
            }
            out.write_char(')')
        }
    }
}

fn write_term(out: &mut dyn fmt::Write, t: &Term) -> fmt::Result {
    match t {
        Term::Var(v) => write_symbol(out, v),
        Term::Quote(v) => {
            out.write_char('\'')?;
            write_value(out, v)
        }
        Term::App(f, args) => {
            out.write_char('(')?;
            write_symbol(out, f)?;
            for a in args {
                out.write_char(' ')?;
                write_term(out, a)?;
            }
            out.write_char(')')
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_value(f, self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn reads_calls_and_quotes() {
        assert_eq!(t("(nth n x)"), Term::app("NTH", vec![Term::var("N"), Term::var("X")]));
        assert_eq!(t("'3"), Term::int(3));
        assert_eq!(
            t("(equal (atom x) (not (consp x)))").to_string(),
            "(EQUAL (ATOM X) (NOT (CONSP X)))"
        );
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(Term::app("CAR", vec![Term::var("X")]).to_string(), "(CAR X)");
        assert_eq!(Term::quote(Value::sym("FOO")).to_string(), "'FOO");
        assert_eq!(t("'(a b . c)").to_string(), "'(A B . C)");
        assert_eq!(t("'-7/14").to_string(), "'-1/2");
        assert_eq!(t("'\"a\\\"b\"").to_string(), "'\"a\\\"b\"");
        assert_eq!(t("'#\\Space").to_string(), "'#\\Space");
        assert_eq!(t("'|foo bar|").to_string(), "'|foo bar|");
    }

    #[test]
    fn constants_in_term_position_are_quoted() {
        assert_eq!(t("(f 10 t nil :k \"s\")").to_string(), "(F '10 'T 'NIL ':K '\"s\")");
    }

    #[test]
    fn macros_expand_to_primitives() {
        assert_eq!(t("(+ a b c)").to_string(), "(BINARY-+ A (BINARY-+ B C))");
        assert_eq!(t("(<= a 10)").to_string(), "(NOT (< '10 A))");
        assert_eq!(t("(- a b)").to_string(), "(BINARY-+ A (UNARY-- B))");
        assert_eq!(
            t("(logior a b c (logapp 6 d e))").to_string(),
            "(LOGIOR A (LOGIOR B (LOGIOR C (LOGAPP '6 D E))))"
        );
        assert_eq!(t("(logand x y)").to_string(), "(LOGAND X Y)");
        assert_eq!(t("(and p q)").to_string(), "(IF P Q 'NIL)");
        assert_eq!(t("(cadr x)").to_string(), "(CAR (CDR X))");
    }

    #[test]
    fn reports_positions() {
        let e = parse_term("(f x\n  (g y").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, column: 3 });
        let e = read_forms("(a) )").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, column: 5 });
        assert!(parse_term("((lambda (x) x) y)").is_err());
        assert!(parse_term("(quote a b)").is_err());
    }

    #[test]
    fn numbers_and_symbols() {
        assert_eq!(parse_value("+5").unwrap(), Value::int(5));
        assert_eq!(parse_value("1/0").unwrap(), Value::sym("1/0"));
        assert_eq!(parse_value("-").unwrap(), Value::sym("-"));
        assert_eq!(parse_value(&Value::sym("1/0").to_string()).unwrap(), Value::sym("1/0"));
        assert_eq!(Value::sym("12").to_string(), "|12|");
        assert_eq!(parse_value("|1/0|").unwrap(), Value::sym("1/0"));
        assert_eq!(parse_value("; c\n foo ; d").unwrap(), Value::sym("FOO"));
    }
}
