//! Tokenizer shared by the taxonomy, document, and expression grammars.

use crate::parse::diagnostics::{Diagnostics, ParseDiagnostic};

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    /// Identifier or keyword; the parsers match on the text.
    Ident(String),
    /// Numeric literal. `integral` means no decimal point or exponent.
    Number { text: String, integral: bool },
    /// Duration literal, normalized to seconds.
    Duration(f64),
    /// Data-size literal, normalized to bytes.
    Size(i64),
    /// Double-quoted string, unescaped.
    Str(String),
    /// `req:<path>` requirement reference; the raw path text.
    ReqRef(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Slash,
    /// `=`
    Assign,
    /// `..`
    DotDot,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Token {
    /// Short description for "expected X, found Y" messages.
    pub fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Number { text, .. } => format!("number `{text}`"),
            Token::Duration(_) => "duration literal".to_string(),
            Token::Size(_) => "data-size literal".to_string(),
            Token::Str(_) => "string literal".to_string(),
            Token::ReqRef(p) => format!("`req:{p}`"),
            Token::LBrace => "`{`".to_string(),
            Token::RBrace => "`}`".to_string(),
            Token::LBracket => "`[`".to_string(),
            Token::RBracket => "`]`".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Slash => "`/`".to_string(),
            Token::Assign => "`=`".to_string(),
            Token::DotDot => "`..`".to_string(),
            Token::EqEq => "`==`".to_string(),
            Token::Ne => "`!=`".to_string(),
            Token::Lt => "`<`".to_string(),
            Token::Le => "`<=`".to_string(),
            Token::Gt => "`>`".to_string(),
            Token::Ge => "`>=`".to_string(),
            Token::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannedToken {
    pub token: Token,
    pub line: u32,
    pub column: u32,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

pub fn tokenize(source: &str) -> Result<Vec<SpannedToken>, Diagnostics> {
    let mut lexer = Lexer {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let end = token.token == Token::Eof;
        tokens.push(token);
        if end {
            return Ok(tokens);
        }
    }
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn error(&self, line: u32, column: u32, message: impl Into<String>) -> Diagnostics {
        Diagnostics::one(ParseDiagnostic::error(line, column, message))
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<SpannedToken, Diagnostics> {
        self.skip_trivia();
        let line = self.line;
        let column = self.column;
        let spanned = |token| SpannedToken {
            token,
            line,
            column,
        };
        let c = match self.peek() {
            Some(c) => c,
            None => return Ok(spanned(Token::Eof)),
        };
        let token = match c {
            '{' => {
                self.bump();
                Token::LBrace
            }
            '}' => {
                self.bump();
                Token::RBrace
            }
            '[' => {
                self.bump();
                Token::LBracket
            }
            ']' => {
                self.bump();
                Token::RBracket
            }
            '(' => {
                self.bump();
                Token::LParen
            }
            ')' => {
                self.bump();
                Token::RParen
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            ':' => {
                self.bump();
                Token::Colon
            }
            '/' => {
                self.bump();
                Token::Slash
            }
            '=' => {
                self.bump();
                if self.peek() == Some('=') {
                    self.bump();
                    Token::EqEq
                } else {
                    Token::Assign
                }
            }
            '!' => {
                self.bump();
                if self.peek() == Some('=') {
                    self.bump();
                    Token::Ne
                } else {
                    return Err(self.error(line, column, "expected `!=`"));
                }
            }
            '<' => {
                self.bump();
                if self.peek() == Some('=') {
                    self.bump();
                    Token::Le
                } else {
                    Token::Lt
                }
            }
            '>' => {
                self.bump();
                if self.peek() == Some('=') {
                    self.bump();
                    Token::Ge
                } else {
                    Token::Gt
                }
            }
            '.' => {
                self.bump();
                if self.peek() == Some('.') {
                    self.bump();
                    Token::DotDot
                } else {
                    return Err(self.error(line, column, "unexpected `.`"));
                }
            }
            '"' => self.lex_string(line, column)?,
            '-' => self.lex_number(line, column)?,
            c if c.is_ascii_digit() => self.lex_number(line, column)?,
            c if c.is_ascii_lowercase() => self.lex_ident_or_req_ref(),
            other => {
                return Err(self.error(
                    line,
                    column,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        Ok(spanned(token))
    }

    fn lex_string(&mut self, line: u32, column: u32) -> Result<Token, Diagnostics> {
        self.bump(); // opening quote
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error(line, column, "unterminated string literal")),
                Some('"') => return Ok(Token::Str(value)),
                Some('\\') => match self.bump() {
                    Some('\\') => value.push('\\'),
                    Some('"') => value.push('"'),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    Some(other) => {
                        return Err(self.error(
                            line,
                            column,
                            format!("unknown escape sequence `\\{other}`"),
                        ))
                    }
                    None => return Err(self.error(line, column, "unterminated string literal")),
                },
                Some('\n') => return Err(self.error(line, column, "unterminated string literal")),
                Some(other) if other.is_control() => {
                    return Err(self.error(
                        line,
                        column,
                        "control characters must be written as escapes",
                    ))
                }
                Some(other) => value.push(other),
            }
        }
    }

    fn lex_number(&mut self, line: u32, column: u32) -> Result<Token, Diagnostics> {
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.bump();
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(self.error(line, column, "expected digits after `-`"));
            }
        }
        let mut integral = true;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() == Some('.') {
            // lookahead so `1..3` lexes as number, dot-dot, number
            let mut ahead = self.chars.clone();
            ahead.next();
            if matches!(ahead.peek(), Some(c) if c.is_ascii_digit()) {
                integral = false;
                text.push('.');
                self.bump();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let mut ahead = self.chars.clone();
            ahead.next();
            let next = ahead.peek().copied();
            let exponent_follows = match next {
                Some(c) if c.is_ascii_digit() => true,
                Some('+') | Some('-') => {
                    ahead.next();
                    matches!(ahead.peek(), Some(c) if c.is_ascii_digit())
                }
                _ => false,
            };
            if exponent_follows {
                integral = false;
                text.push(self.bump().unwrap());
                if matches!(self.peek(), Some('+' | '-')) {
                    text.push(self.bump().unwrap());
                }
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }

        // a unit suffix must touch the number: 90.0s, 1024b, 1.5min
        if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            let mut suffix = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphabetic() {
                    suffix.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return self.lex_suffixed(line, column, &text, &suffix);
        }

        Ok(Token::Number { text, integral })
    }

    fn lex_suffixed(
        &self,
        line: u32,
        column: u32,
        text: &str,
        suffix: &str,
    ) -> Result<Token, Diagnostics> {
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(line, column, format!("invalid number `{text}`")))?;
        if !value.is_finite() {
            return Err(self.error(line, column, format!("number `{text}` overflows")));
        }
        let duration_factor = match suffix {
            "ms" => Some(0.001),
            "s" => Some(1.0),
            "min" => Some(60.0),
            "h" => Some(3600.0),
            _ => None,
        };
        if let Some(factor) = duration_factor {
            let seconds = value * factor;
            if !seconds.is_finite() {
                return Err(self.error(line, column, "duration overflows"));
            }
            return Ok(Token::Duration(crate::model::value::canon_real(seconds)));
        }
        let size_factor: Option<i64> = match suffix {
            "b" => Some(1),
            "kb" => Some(1_000),
            "mb" => Some(1_000_000),
            "gb" => Some(1_000_000_000),
            "kib" => Some(1 << 10),
            "mib" => Some(1 << 20),
            "gib" => Some(1 << 30),
            _ => None,
        };
        if let Some(factor) = size_factor {
            let bytes = value * factor as f64;
            if bytes.fract() != 0.0 {
                return Err(self.error(
                    line,
                    column,
                    format!("`{text}{suffix}` is not a whole number of bytes"),
                ));
            }
            if bytes.abs() >= 9_007_199_254_740_992.0 {
                return Err(self.error(line, column, "data size too large"));
            }
            return Ok(Token::Size(bytes as i64));
        }
        Err(self.error(
            line,
            column,
            format!("unknown unit suffix `{suffix}` (durations: ms s min h; sizes: b kb mb gb kib mib gib)"),
        ))
    }

    fn lex_ident_or_req_ref(&mut self) -> Token {
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // `req:` immediately followed by a path character starts a
        // requirement reference; `req :` or `req: ` does not.
        if text == "req" && self.peek() == Some(':') {
            let mut ahead = self.chars.clone();
            ahead.next();
            if matches!(ahead.peek(), Some(c) if c.is_ascii_lowercase()) {
                self.bump(); // colon
                let mut path = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '/' {
                        path.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                return Token::ReqRef(path);
            }
        }
        Token::Ident(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(source: &str) -> Vec<Token> {
        tokenize(source)
            .unwrap()
            .into_iter()
            .map(|t| t.token)
            .collect()
    }

    #[test]
    fn lexes_numbers_and_ranges() {
        assert_eq!(
            kinds("1..3"),
            vec![
                Token::Number {
                    text: "1".into(),
                    integral: true
                },
                Token::DotDot,
                Token::Number {
                    text: "3".into(),
                    integral: true
                },
                Token::Eof,
            ]
        );
        assert_eq!(
            kinds("-90.5 1e3 1.5e-2"),
            vec![
                Token::Number {
                    text: "-90.5".into(),
                    integral: false
                },
                Token::Number {
                    text: "1e3".into(),
                    integral: false
                },
                Token::Number {
                    text: "1.5e-2".into(),
                    integral: false
                },
                Token::Eof,
            ]
        );
    }

    #[test]
    fn lexes_duration_and_size_suffixes() {
        assert_eq!(kinds("90.0s"), vec![Token::Duration(90.0), Token::Eof]);
        assert_eq!(kinds("1.5min"), vec![Token::Duration(90.0), Token::Eof]);
        assert_eq!(kinds("2h"), vec![Token::Duration(7200.0), Token::Eof]);
        assert_eq!(kinds("250ms"), vec![Token::Duration(0.25), Token::Eof]);
        assert_eq!(kinds("1024b"), vec![Token::Size(1024), Token::Eof]);
        assert_eq!(kinds("1.5kb"), vec![Token::Size(1500), Token::Eof]);
        assert_eq!(kinds("2kib"), vec![Token::Size(2048), Token::Eof]);
        assert!(tokenize("1.5b").is_err());
        assert!(tokenize("3x").is_err());
    }

    #[test]
    fn lexes_req_refs_only_when_colon_touches_a_path() {
        assert_eq!(
            kinds("req:env/angle >= 116.0"),
            vec![
                Token::ReqRef("env/angle".into()),
                Token::Ge,
                Token::Number {
                    text: "116.0".into(),
                    integral: false
                },
                Token::Eof,
            ]
        );
        assert_eq!(
            kinds("req: integer"),
            vec![
                Token::Ident("req".into()),
                Token::Colon,
                Token::Ident("integer".into()),
                Token::Eof,
            ]
        );
    }

    #[test]
    fn lexes_strings_with_escapes() {
        assert_eq!(
            kinds(r#""swe\"den\n""#),
            vec![Token::Str("swe\"den\n".into()), Token::Eof]
        );
        assert!(tokenize("\"unterminated").is_err());
        assert!(tokenize("\"bad\\q\"").is_err());
    }

    #[test]
    fn reports_location_of_errors() {
        let err = tokenize("leaf x: text\n  @").unwrap_err();
        let d = &err.0[0];
        assert_eq!((d.line, d.column), (2, 3));
    }

    #[test]
    fn operators_and_punctuation() {
        assert_eq!(
            kinds("= == != < <= > >= { } [ ] ( ) , : /"),
            vec![
                Token::Assign,
                Token::EqEq,
                Token::Ne,
                Token::Lt,
                Token::Le,
                Token::Gt,
                Token::Ge,
                Token::LBrace,
                Token::RBrace,
                Token::LBracket,
                Token::RBracket,
                Token::LParen,
                Token::RParen,
                Token::Comma,
                Token::Colon,
                Token::Slash,
                Token::Eof,
            ]
        );
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(
            kinds("# heading\nassign # trailing\n"),
            vec![Token::Ident("assign".into()), Token::Eof]
        );
    }
}
