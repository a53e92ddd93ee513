//! Expression syntax for radial functions of a single variable.
//!
//! The grammar is deliberately small: decimal literals, one free variable
//! (any identifier that is not a constant or function name; the first one
//! seen names the variable), the constants `pi` and `e`, the binary
//! operators `+ - * / ^` (with `^` binding tightest and associating to the
//! right), unary minus, function application for
//! `sin cos tan sinh cosh tanh exp log sqrt atan abs`, and parentheses.
//!
//! `log` is the natural logarithm.
//!
//! Parse errors carry the byte offset of the offending token together with
//! a short description of what was expected there.

use std::fmt;

/// Unary functions understood by the evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Atan,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "tan" => Some(Func::Tan),
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            "tanh" => Some(Func::Tanh),
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sqrt" => Some(Func::Sqrt),
            "atan" => Some(Func::Atan),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Abs => "abs",
        }
    }
}

/// Expression tree node. Every node remembers the byte offset where it
/// started so that evaluation errors can point back into the source text.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    /// The single free variable.
    Var,
    Pi,
    E,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Apply(Func, Box<Node>),
}

/// Error produced while parsing an expression.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Byte offset into the source where the error was detected.
    pub offset: usize,
    /// Human-readable description of the tokens that would have been legal.
    pub expected: String,
    /// What was actually found.
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number `{v}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token together with its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.lex_number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = self.pos;
            while end < self.src.len()
                && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
            {
                end += 1;
            }
            let name = std::str::from_utf8(&self.src[self.pos..end])
                .expect("identifier bytes are ASCII")
                .to_string();
            self.pos = end;
            return Ok((Tok::Ident(name), start));
        }
        Err(ParseError {
            offset: start,
            expected: "a number, identifier, operator or parenthesis".into(),
            found: format!("`{}`", char::from(c)),
        })
    }

    fn lex_number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let mut end = self.pos;
        let mut saw_digit = false;
        while end < self.src.len() && self.src[end].is_ascii_digit() {
            end += 1;
            saw_digit = true;
        }
        if end < self.src.len() && self.src[end] == b'.' {
            end += 1;
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            return Err(ParseError {
                offset: start,
                expected: "digits".into(),
                found: "`.`".into(),
            });
        }
        // Optional exponent part. `e`/`E` is consumed only when digits
        // follow (otherwise it is left for the identifier lexer, so `2e`
        // lexes as the number 2 followed by the constant `e`).
        if end < self.src.len() && (self.src[end] == b'e' || self.src[end] == b'E') {
            let mut cursor = end + 1;
            if cursor < self.src.len() && (self.src[cursor] == b'+' || self.src[cursor] == b'-') {
                cursor += 1;
            }
            if cursor < self.src.len() && self.src[cursor].is_ascii_digit() {
                while cursor < self.src.len() && self.src[cursor].is_ascii_digit() {
                    cursor += 1;
                }
                end = cursor;
            }
            // If no digits follow, leave `e`/`E` for the identifier lexer.
        }
        let text = std::str::from_utf8(&self.src[self.pos..end]).expect("number bytes are ASCII");
        let value: f64 = text.parse().map_err(|_| ParseError {
            offset: start,
            expected: "a decimal literal".into(),
            found: format!("`{text}`"),
        })?;
        self.pos = end;
        Ok((Tok::Num(value), start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    /// One token of lookahead plus its byte offset.
    current: (Tok, usize),
    /// Name of the free variable once one has been seen.
    var_name: Option<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next()?;
        Ok(Parser {
            lexer,
            current,
            var_name: None,
        })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        self.current = self.lexer.next()?;
        Ok(())
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.current.1,
            expected: expected.into(),
            found: self.current.0.to_string(),
        }
    }

    /// expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.current.0 {
                Tok::Plus => {
                    self.advance()?;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.advance()?;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.current.0 {
                Tok::Star => {
                    self.advance()?;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.advance()?;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// unary := '-' unary | power
    ///
    /// Unary minus binds looser than `^`, so `-r^2` is `-(r^2)`.
    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.current.0 == Tok::Minus {
            self.advance()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    /// power := atom ('^' unary)?   (right associative)
    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.current.0 == Tok::Caret {
            self.advance()?;
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    /// atom := number | constant | function '(' expr ')' | variable | '(' expr ')'
    fn atom(&mut self) -> Result<Node, ParseError> {
        match self.current.0.clone() {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                if self.current.0 != Tok::RParen {
                    return Err(self.err("`)`"));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let offset = self.current.1;
                self.advance()?;
                if let Some(func) = Func::from_name(&name) {
                    if self.current.0 != Tok::LParen {
                        return Err(self.err(&format!("`(` after function `{name}`")));
                    }
                    self.advance()?;
                    let arg = self.expr()?;
                    if self.current.0 != Tok::RParen {
                        return Err(self.err("`)`"));
                    }
                    self.advance()?;
                    return Ok(Node::Apply(func, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Pi),
                    "e" => Ok(Node::E),
                    _ => {
                        match &self.var_name {
                            None => {
                                self.var_name = Some(name);
                                Ok(Node::Var)
                            }
                            Some(existing) if *existing == name => Ok(Node::Var),
                            Some(existing) => Err(ParseError {
                                offset,
                                expected: format!(
                                    "the variable `{existing}` (an expression has exactly one free variable)"
                                ),
                                found: format!("identifier `{name}`"),
                            }),
                        }
                    }
                }
            }
            other => Err(ParseError {
                offset: self.current.1,
                expected: "a number, variable, constant, function or `(`".into(),
                found: other.to_string(),
            }),
        }
    }
}

/// Parse `src` into an expression tree.
///
/// Returns the tree together with the name of the free variable, if any
/// occurred (constant expressions like `"1"` are legal).
pub fn parse(src: &str) -> Result<(Node, Option<String>), ParseError> {
    let mut parser = Parser::new(src)?;
    let node = parser.expr()?;
    if parser.current.0 != Tok::End {
        return Err(parser.err("end of input or an operator"));
    }
    Ok((node, parser.var_name))
}
