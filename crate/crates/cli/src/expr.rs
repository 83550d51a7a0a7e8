//! A small expression language for generalized-function experiments.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' int] ["'"]*
//! atom   := 'H' | 'D' | 'x' | number | '(' expr ')'
//!         | 'int' '(' expr ')' | 'pair' '(' expr ',' int ')'
//! ```
//!
//! `H` and `D` are the embedded Heaviside step and delta, `x` the identity,
//! `int(e)` integrates over the real line and `pair(e, k)` pairs against test
//! function `k` of the suite.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

const MAX_DEPTH: usize = 200;

/// Byte range `[start, end)` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Heaviside,
    Delta,
    Var,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Prime(Box<Expr>),
    Pair(Box<Expr>, usize),
    Int(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error at bytes {span}: {message}")]
pub struct TypeError {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// What a node denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// ε-indexed family of functions.
    Function,
    /// ε-indexed family of numbers.
    Number,
    /// A literal; usable as either.
    Scalar,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    H,
    D,
    X,
    Int,
    Pair,
    Number(f64),
    Plus,
    Minus,
    Star,
    Caret,
    Prime,
    LParen,
    RParen,
    Comma,
    Ident,
    Unknown,
    Eof,
}

struct Lexeme<'a> {
    token: Token,
    span: Span,
    text: &'a str,
}

fn lex(src: &str) -> Vec<Lexeme<'_>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // exponent only when digits follow
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            match src[start..i].parse::<f64>() {
                Ok(v) if v.is_finite() => Token::Number(v),
                _ => Token::Unknown,
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &src[start..i] {
                "H" => Token::H,
                "D" => Token::D,
                "x" => Token::X,
                "int" => Token::Int,
                "pair" => Token::Pair,
                _ => Token::Ident,
            }
        } else {
            i += 1;
            match c {
                b'+' => Token::Plus,
                b'-' => Token::Minus,
                b'*' => Token::Star,
                b'^' => Token::Caret,
                b'\'' => Token::Prime,
                b'(' => Token::LParen,
                b')' => Token::RParen,
                b',' => Token::Comma,
                _ => {
                    // swallow the rest of a multi-byte character
                    while i < bytes.len() && !src.is_char_boundary(i) {
                        i += 1;
                    }
                    Token::Unknown
                }
            }
        };
        out.push(Lexeme { token, span: Span { start, end: i }, text: &src[start..i] });
    }
    out.push(Lexeme { token: Token::Eof, span: Span { start: src.len(), end: src.len() }, text: "" });
    out
}

struct Parser<'a> {
    tokens: Vec<Lexeme<'a>>,
    pos: usize,
    depth: usize,
    // furthest position probed and what would have been accepted there
    furthest: usize,
    expected: BTreeSet<&'static str>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Lexeme<'a> {
        &self.tokens[self.pos]
    }

    fn note(&mut self, what: &'static str) {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(what);
        }
    }

    fn eat(&mut self, token: Token, what: &'static str) -> Option<Span> {
        self.note(what);
        if self.peek().token == token {
            let span = self.peek().span;
            self.pos += 1;
            Some(span)
        } else {
            None
        }
    }

    fn expect(&mut self, token: Token, what: &'static str) -> Result<Span, SyntaxError> {
        self.eat(token, what).ok_or_else(|| self.error())
    }

    fn error(&self) -> SyntaxError {
        let at = &self.tokens[self.furthest.max(self.pos)];
        let found = match at.token {
            Token::Eof => "end of input".to_string(),
            _ => format!("'{}'", at.text),
        };
        SyntaxError {
            offset: at.span.start,
            expected: self.expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn integer(&mut self, what: &'static str, min: usize) -> Result<(usize, Span), SyntaxError> {
        self.note(what);
        let lx = self.peek();
        if let Token::Number(_) = lx.token {
            if lx.text.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(v) = lx.text.parse::<usize>() {
                    if v >= min {
                        let span = lx.span;
                        self.pos += 1;
                        return Ok((v, span));
                    }
                }
            }
        }
        Err(self.error())
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError {
                offset: self.peek().span.start,
                expected: vec!["shallower nesting".into()],
                found: format!("depth {}", self.depth),
            });
        }
        let mut left = self.term()?;
        loop {
            let sub = if self.eat(Token::Plus, "'+'").is_some() {
                false
            } else if self.eat(Token::Minus, "'-'").is_some() {
                true
            } else {
                break;
            };
            let right = self.term()?;
            let span = left.span.to(right.span);
            let (l, r) = (Box::new(left), Box::new(right));
            left = Expr { kind: if sub { ExprKind::Sub(l, r) } else { ExprKind::Add(l, r) }, span };
        }
        self.depth -= 1;
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut left = self.factor()?;
        while self.eat(Token::Star, "'*'").is_some() {
            let right = self.factor()?;
            let span = left.span.to(right.span);
            left = Expr { kind: ExprKind::Mul(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.atom()?;
        if self.eat(Token::Caret, "'^'").is_some() {
            let (n, span) = self.integer("positive integer", 1)?;
            let n = u32::try_from(n).map_err(|_| self.error())?;
            let span = e.span.to(span);
            e = Expr { kind: ExprKind::Pow(Box::new(e), n), span };
        }
        while let Some(p) = self.eat(Token::Prime, "'''") {
            let span = e.span.to(p);
            e = Expr { kind: ExprKind::Prime(Box::new(e)), span };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        for what in ["'H'", "'D'", "'x'", "number", "'('", "'int'", "'pair'"] {
            self.note(what);
        }
        let lx = self.peek();
        let span = lx.span;
        let simple = match lx.token {
            Token::H => Some(ExprKind::Heaviside),
            Token::D => Some(ExprKind::Delta),
            Token::X => Some(ExprKind::Var),
            Token::Number(v) => Some(ExprKind::Const(v)),
            _ => None,
        };
        if let Some(kind) = simple {
            self.pos += 1;
            return Ok(Expr { kind, span });
        }
        match lx.token {
            Token::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                let end = self.expect(Token::RParen, "')'")?;
                Ok(Expr { span: span.to(end), ..inner })
            }
            Token::Int => {
                self.pos += 1;
                self.expect(Token::LParen, "'('")?;
                let inner = self.expr()?;
                let end = self.expect(Token::RParen, "')'")?;
                Ok(Expr { kind: ExprKind::Int(Box::new(inner)), span: span.to(end) })
            }
            Token::Pair => {
                self.pos += 1;
                self.expect(Token::LParen, "'('")?;
                let inner = self.expr()?;
                self.expect(Token::Comma, "','")?;
                let (k, _) = self.integer("test function index", 0)?;
                let end = self.expect(Token::RParen, "')'")?;
                Ok(Expr { kind: ExprKind::Pair(Box::new(inner), k), span: span.to(end) })
            }
            _ => Err(self.error()),
        }
    }
}

/// Parses without type checking.
pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { tokens: lex(src), pos: 0, depth: 0, furthest: 0, expected: BTreeSet::new() };
    let e = p.expr()?;
    p.expect(Token::Eof, "end of input")?;
    Ok(e)
}

/// Parses and type checks.
pub fn parse_genexpr(src: &str) -> Result<(Expr, Kind), ExprError> {
    let e = parse(src)?;
    let kind = check(&e)?;
    Ok((e, kind))
}

fn type_error(span: Span, message: impl Into<String>) -> TypeError {
    TypeError { span, message: message.into() }
}

pub fn check(e: &Expr) -> Result<Kind, TypeError> {
    use ExprKind::*;
    match &e.kind {
        Heaviside | Delta | Var => Ok(Kind::Function),
        Const(_) => Ok(Kind::Scalar),
        Add(a, b) | Sub(a, b) | Mul(a, b) => match (check(a)?, check(b)?) {
            (Kind::Scalar, Kind::Scalar) => Ok(Kind::Scalar),
            (Kind::Function, Kind::Number) | (Kind::Number, Kind::Function) => Err(type_error(
                e.span,
                "cannot combine a number-valued expression with a function-valued one",
            )),
            (Kind::Number, _) | (_, Kind::Number) => Ok(Kind::Number),
            _ => Ok(Kind::Function),
        },
        Pow(a, _) => check(a),
        Prime(a) => match check(a)? {
            Kind::Number => Err(type_error(e.span, "cannot differentiate a number-valued expression")),
            _ => Ok(Kind::Function),
        },
        Int(a) | Pair(a, _) => match check(a)? {
            Kind::Number => Err(type_error(a.span, "cannot integrate a number-valued expression")),
            _ => Ok(Kind::Number),
        },
    }
}

impl Expr {
    /// Structural form, e.g. `Int(Mul(Sub(Pow(H,2),H),Prime(H)))`.
    pub fn tree(&self) -> String {
        use ExprKind::*;
        match &self.kind {
            Heaviside => "H".into(),
            Delta => "D".into(),
            Var => "x".into(),
            Const(c) => format!("Const({c:?})"),
            Add(a, b) => format!("Add({},{})", a.tree(), b.tree()),
            Sub(a, b) => format!("Sub({},{})", a.tree(), b.tree()),
            Mul(a, b) => format!("Mul({},{})", a.tree(), b.tree()),
            Pow(a, n) => format!("Pow({},{n})", a.tree()),
            Prime(a) => format!("Prime({})", a.tree()),
            Pair(a, k) => format!("Pair({},{k})", a.tree()),
            Int(a) => format!("Int({})", a.tree()),
        }
    }

    // 1: sum, 2: product, 3: factor, 4: atom
    fn level(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) => 2,
            ExprKind::Pow(..) | ExprKind::Prime(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        use ExprKind::*;
        match &self.kind {
            Heaviside => write!(f, "H"),
            Delta => write!(f, "D"),
            Var => write!(f, "x"),
            Const(c) => write!(f, "{c}"),
            Add(a, b) | Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " {} ", if matches!(self.kind, Add(..)) { "+" } else { "-" })?;
                b.write_at(f, 2)
            }
            Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " * ")?;
                b.write_at(f, 3)
            }
            Pow(a, n) => {
                a.write_at(f, 4)?;
                write!(f, "^{n}")
            }
            Prime(a) => {
                a.write_at(f, 3)?;
                write!(f, "'")
            }
            Pair(a, k) => {
                write!(f, "pair(")?;
                a.write_at(f, 0)?;
                write!(f, ", {k})")
            }
            Int(a) => {
                write!(f, "int(")?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Canonical source text with minimal parentheses.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(s: &str) -> String {
        parse(s).unwrap().tree()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(tree("int((H^2 - H) * H')"), "Int(Mul(Sub(Pow(H,2),H),Prime(H)))");
        assert_eq!(tree("H^2 - H"), "Sub(Pow(H,2),H)");
        assert_eq!(tree("int(H')"), "Int(Prime(H))");
        assert_eq!(tree("pair(H^2 - H, 0)"), "Pair(Sub(Pow(H,2),H),0)");
        assert_eq!(tree("int(D*D)"), "Int(Mul(D,D))");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(tree("H - D - x"), "Sub(Sub(H,D),x)");
        assert_eq!(tree("H + D * x"), "Add(H,Mul(D,x))");
        assert_eq!(tree("H^2'"), "Prime(Pow(H,2))");
        assert_eq!(tree("H''"), "Prime(Prime(H))");
        assert_eq!(tree("(H')^3"), "Pow(Prime(H),3)");
        assert_eq!(tree("2.5e-1*H"), "Mul(Const(0.25),H)");
        assert_eq!(tree("  H\t*\n( D )  "), "Mul(H,D)");
    }

    #[test]
    fn spans_cover_source() {
        let e = parse("int((H^2 - H) * H')").unwrap();
        assert_eq!(e.span, Span { start: 0, end: 19 });
        let ExprKind::Int(inner) = &e.kind else { panic!() };
        assert_eq!(inner.span, Span { start: 4, end: 18 });
    }

    #[test]
    fn syntax_errors_carry_offset_and_expectations() {
        let err = parse("H + ").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"'H'".to_string()));
        assert_eq!(err.found, "end of input");

        let err = parse("H^0").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.expected, vec!["positive integer".to_string()]);

        let err = parse("pair(H, 1.5)").unwrap_err();
        assert_eq!(err.offset, 8);

        let err = parse("(H * D").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains(&"')'".to_string()));
        assert!(err.expected.contains(&"'*'".to_string()));

        let err = parse("H $ D").unwrap_err();
        assert_eq!((err.offset, err.found.as_str()), (2, "'$'"));
        assert!(err.expected.contains(&"end of input".to_string()));

        assert!(parse("Hx").is_err());
        assert!(parse("").is_err());
        assert!(parse("H €").unwrap_err().offset == 2);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("{}H{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&src).is_err());
    }

    #[test]
    fn type_rules() {
        let k = |s: &str| parse_genexpr(s).map(|(_, k)| k);
        assert_eq!(k("H^2 - H").unwrap(), Kind::Function);
        assert_eq!(k("int(H')").unwrap(), Kind::Number);
        assert_eq!(k("2 * int(H') - 1").unwrap(), Kind::Number);
        assert_eq!(k("3").unwrap(), Kind::Scalar);
        assert_eq!(k("2'").unwrap(), Kind::Function);

        let err = k("int(int(H))").unwrap_err();
        match err {
            ExprError::Type(t) => assert_eq!(t.span, Span { start: 4, end: 10 }),
            e => panic!("{e:?}"),
        }
        assert!(matches!(k("H * int(D)"), Err(ExprError::Type(_))));
        assert!(matches!(k("int(D)'"), Err(ExprError::Type(_))));
    }

    #[test]
    fn pretty_printing_is_minimal_and_reparses() {
        for (src, pretty) in [
            ("int((H^2 - H) * H')", "int((H^2 - H) * H')"),
            ("((H))", "H"),
            ("H - (D - x)", "H - (D - x)"),
            ("(H - D) - x", "H - D - x"),
            ("H * (D * x)", "H * (D * x)"),
            ("(H*D)'", "(H * D)'"),
            ("(H^2)^3", "(H^2)^3"),
            ("(H')^2'", "(H')^2'"),
            ("pair(H,3)", "pair(H, 3)"),
        ] {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), pretty);
            assert_eq!(parse(pretty).unwrap().tree(), e.tree());
        }
    }
}
