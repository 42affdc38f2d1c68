//! Text notation for compositions: `[k1,k2,...]`, with run-length groups
//! such as `[(3,1,1)^3]` or `[(1)^{21}]`. Groups may nest.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid composition text at byte {offset}: {message}")]
pub struct NotationError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, NotationError> {
        Err(NotationError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), NotationError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn integer(&mut self) -> Result<usize, NotationError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match text.parse::<usize>() {
            Ok(0) => {
                self.pos = start;
                self.err("parts and exponents must be positive")
            }
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("integer out of range")
            }
        }
    }

    fn exponent(&mut self) -> Result<usize, NotationError> {
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let e = self.integer()?;
            self.expect(b'}')?;
            Ok(e)
        } else {
            self.integer()
        }
    }

    /// Comma-separated items up to (not including) `close`.
    fn items(&mut self, close: u8, out: &mut Vec<usize>) -> Result<(), NotationError> {
        if self.peek() == Some(close) {
            return Ok(());
        }
        loop {
            self.item(out)?;
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => return Ok(()),
                _ => return self.err(format!("expected ',' or '{}'", close as char)),
            }
        }
    }

    fn item(&mut self, out: &mut Vec<usize>) -> Result<(), NotationError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut group = Vec::new();
            self.items(b')', &mut group)?;
            self.expect(b')')?;
            if group.is_empty() {
                return self.err("empty group");
            }
            let reps = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.exponent()?
            } else {
                1
            };
            if group.len().saturating_mul(reps) > 1 << 20 {
                return self.err("expansion too large");
            }
            for _ in 0..reps {
                out.extend_from_slice(&group);
            }
            Ok(())
        } else {
            out.push(self.integer()?);
            Ok(())
        }
    }
}

/// Expand composition text into its list of parts. Does not check the
/// odd-part-count rule; see [`crate::Composition::from_str`] for that.
pub fn expand(text: &str) -> Result<Vec<usize>, NotationError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.expect(b'[')?;
    let mut out = Vec::new();
    p.items(b']', &mut out)?;
    p.expect(b']')?;
    if p.peek().is_some() {
        return p.err("trailing characters");
    }
    Ok(out)
}
