//! Token cursor shared by the grammar parsers.

use crate::parse::diagnostics::{Diagnostics, ParseDiagnostic};
use crate::parse::lexer::{SpannedToken, Token};

pub struct Cursor {
    tokens: Vec<SpannedToken>,
    pos: usize,
}

impl Cursor {
    pub fn new(tokens: Vec<SpannedToken>) -> Cursor {
        Cursor { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &SpannedToken {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn advance(&mut self) -> SpannedToken {
        let token = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        token
    }

    pub fn at_eof(&self) -> bool {
        self.peek().token == Token::Eof
    }

    /// True and consumes when the next token is the given keyword.
    pub fn eat_keyword(&mut self, keyword: &str) -> bool {
        if matches!(&self.peek().token, Token::Ident(s) if s == keyword) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn at_keyword(&self, keyword: &str) -> bool {
        matches!(&self.peek().token, Token::Ident(s) if s == keyword)
    }

    pub fn eat(&mut self, token: &Token) -> bool {
        if &self.peek().token == token {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: Token, what: &str) -> Result<SpannedToken, Diagnostics> {
        if self.peek().token == token {
            Ok(self.advance())
        } else {
            Err(self.error_here(format!(
                "expected {what}, found {}",
                self.peek().token.describe()
            )))
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(String, u32, u32), Diagnostics> {
        let SpannedToken {
            token,
            line,
            column,
        } = self.peek().clone();
        match token {
            Token::Ident(s) => {
                self.advance();
                Ok((s, line, column))
            }
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    pub fn error_here(&self, message: impl Into<String>) -> Diagnostics {
        let t = self.peek();
        Diagnostics::one(ParseDiagnostic::error(t.line, t.column, message))
    }

    pub fn expect_eof(&self) -> Result<(), Diagnostics> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected end of input, found {}",
                self.peek().token.describe()
            )))
        }
    }
}
