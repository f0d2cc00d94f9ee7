//! Minimal s-expression reader shared by the term syntax and the signature DSL.
//!
//! Atoms are maximal runs of characters other than whitespace, parentheses and
//! `;`. A `;` starts a comment running to the end of the line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// The leading atom of a list form, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

pub fn error_at(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
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

    fn read(&mut self) -> Result<Sexp> {
        self.skip_trivia();
        let start = self.pos();
        match self.chars.peek().copied() {
            None => Err(error_at(start, "unexpected end of input")),
            Some(')') => Err(error_at(start, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(error_at(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(atom, start))
            }
        }
    }
}

/// Reads exactly one form; trailing non-comment input is an error.
pub fn parse_one(src: &str) -> Result<Sexp> {
    let mut r = Reader {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    };
    let form = r.read()?;
    r.skip_trivia();
    if r.chars.peek().is_some() {
        return Err(error_at(r.pos(), "trailing input after form"));
    }
    Ok(form)
}

pub fn parse_nat(s: &Sexp) -> Result<usize> {
    match s {
        Sexp::Atom(a, p) => a
            .parse::<usize>()
            .map_err(|_| error_at(*p, format!("expected a natural number, found `{a}`"))),
        Sexp::List(_, p) => Err(error_at(*p, "expected a natural number, found a list")),
    }
}

pub fn parse_ident(s: &Sexp) -> Result<&str> {
    match s {
        Sexp::Atom(a, p) => {
            if a.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                Err(error_at(*p, format!("expected an identifier, found `{a}`")))
            } else {
                Ok(a)
            }
        }
        Sexp::List(_, p) => Err(error_at(*p, "expected an identifier, found a list")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = parse_one("(a\n  (b 1) ; note\n  c)").unwrap();
        let items = s.as_list().unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items[1].pos(), Pos { line: 2, col: 3 });
        assert_eq!(items[2].as_atom(), Some("c"));
    }

    #[test]
    fn reports_unclosed_paren() {
        let err = parse_one("\n (a (b)").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                col: 2,
                msg: "unclosed `(`".into()
            }
        );
    }

    #[test]
    fn rejects_trailing_input() {
        assert!(matches!(parse_one("(a) b"), Err(Error::Parse { col: 5, .. })));
    }
}
