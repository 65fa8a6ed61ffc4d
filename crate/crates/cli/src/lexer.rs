//! Tokenizer for spec files. `#` starts a comment that runs to the end of
//! the line.

use crate::diag::{Code, Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(usize),
    /// One of `{ } [ ] = / : | < > ,` or `->`.
    Sym(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: [&str; 11] = ["{", "}", "[", "]", "=", "/", ":", "|", "<", ">", ","];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'' | '*' | '^')
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            if chars.peek().is_some_and(|&c| is_ident_start(c)) {
                return Err(Diagnostic::new(Code::Syntax, pos, format!("names must start with a letter, found `{s}…`")));
            }
            let v = s.parse().map_err(|_| Diagnostic::new(Code::Syntax, pos, format!("integer `{s}` is too large")))?;
            out.push(Token { tok: Tok::Int(v), pos });
            continue;
        }
        if is_ident_start(c) {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|&&d| is_ident_char(d)) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        if c == '-' {
            chars.next();
            col += 1;
            if chars.peek() == Some(&'>') {
                chars.next();
                col += 1;
                out.push(Token { tok: Tok::Sym("->"), pos });
                continue;
            }
            return Err(Diagnostic::new(Code::Syntax, pos, "expected `->` after `-`"));
        }
        if let Some(sym) = SYMBOLS.iter().find(|s| s.starts_with(c)) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(sym), pos });
            continue;
        }
        return Err(Diagnostic::new(Code::Syntax, pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("algebra Z2 {\n  size 2 # two\n}").unwrap();
        assert_eq!(toks[0].pos, Pos { line: 1, col: 1 });
        assert_eq!(toks[3], Token { tok: Tok::Ident("size".into()), pos: Pos { line: 2, col: 3 } });
        assert_eq!(toks[4].tok, Tok::Int(2));
        assert_eq!(toks[5].tok, Tok::Sym("}"));
    }

    #[test]
    fn arrows_and_bad_characters() {
        let toks = tokenize("0 1 2 -> 3").unwrap();
        assert_eq!(toks[3].tok, Tok::Sym("->"));
        let e = tokenize("size $").unwrap_err();
        assert_eq!((e.code, e.pos), (Code::Syntax, Pos { line: 1, col: 6 }));
    }
}
