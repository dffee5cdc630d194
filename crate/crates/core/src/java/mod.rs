//! Java front end: a lossless lexer and a parser for the supported subset.

pub mod ast;
pub mod lexer;
pub mod parser;

pub use lexer::{tokenize, LexError, Token, TokenKind, TokenStream};
pub use parser::{parse, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Tokenizes and parses one source file.
pub fn parse_source(source: &str) -> Result<(TokenStream, ast::CompilationUnit), SourceError> {
    let stream = tokenize(source)?;
    let unit = parse(&stream)?;
    Ok((stream, unit))
}
