//! Text and JSON formats for curves, reals and approximation functions.

mod curve;
mod spec;

pub use curve::{curve_to_json, curve_to_text, parse_curve, parse_curve_json, parse_curve_text, MAX_POWER};
pub use spec::{parse_psi, parse_real};

use crate::error::Error;

/// Character cursor over one line that reports 1-based columns.
struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            src,
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), message)
    }

    fn err_at(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.line, column, message)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(match self.peek() {
                Some(found) => format!("expected '{c}', found '{found}'"),
                None => format!("expected '{c}', found end of input"),
            }))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        let ok = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().map(|&(_, c)| c).eq(s.chars());
        if ok {
            self.pos += n;
        }
        ok
    }

    /// Longest run of ASCII digits, or `None` if there is none.
    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.slice(start, self.pos))
    }

    fn slice(&self, from: usize, to: usize) -> &'a str {
        let a = self.chars.get(from).map_or(self.src.len(), |&(i, _)| i);
        let b = self.chars.get(to).map_or(self.src.len(), |&(i, _)| i);
        &self.src[a..b]
    }

    fn rest(&self) -> &'a str {
        self.slice(self.pos, self.chars.len())
    }
}
