//! Load-time diagnostics with source positions.

use std::fmt;

use thiserror::Error;

/// Diagnostic codes, one per failure class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Code {
    /// Unexpected token or malformed declaration.
    Syntax,
    /// A table whose length disagrees with the declared size or arity.
    TableLen,
    /// A table entry or element outside its carrier.
    Range,
    /// A structure that fails one of its laws.
    Invariant,
    /// A reference to an entity not declared earlier.
    Dangling,
    /// A name or index declared twice.
    Duplicate,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E_SYNTAX",
            Code::TableLen => "E_TABLE_LEN",
            Code::Range => "E_RANGE",
            Code::Invariant => "E_INVARIANT",
            Code::Dangling => "E_DANGLING",
            Code::Duplicate => "E_DUPLICATE",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{file}:{}:{}: {code}: {message}", pos.line, pos.col)]
pub struct Diagnostic {
    pub code: Code,
    pub file: String,
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { code, file: String::from("<input>"), pos, message: message.into() }
    }

    pub fn in_file(mut self, file: &str) -> Self {
        self.file = file.to_string();
        self
    }
}
