//! Java lexical analysis.
//!
//! The lexer is lossless: every byte of the input belongs either to a token or
//! to the whitespace gap in front of one, so [`TokenStream::reconstruct`]
//! reproduces the original text.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lex error at {line}:{column}: {reason}")]
pub struct LexError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Operator,
    Separator,
    Literal,
    Comment,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Identifier => "identifier",
            TokenKind::Keyword => "keyword",
            TokenKind::Operator => "operator",
            TokenKind::Separator => "separator",
            TokenKind::Literal => "literal",
            TokenKind::Comment => "comment",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the first character.
    pub line: usize,
    /// 1-based column (in chars) of the first character.
    pub column: usize,
    /// Byte offset into the source.
    pub offset: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.kind != TokenKind::Comment && self.text == text
    }

    /// Line of the last character, for multi-line comments and text blocks.
    pub fn end_line(&self) -> usize {
        self.line + self.text.matches('\n').count()
    }
}

/// Tokens of one source file together with the text they were cut from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    source: String,
    tokens: Vec<Token>,
}

impl TokenStream {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens that take part in metric counting.
    pub fn code_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.kind != TokenKind::Comment)
    }

    /// Rebuilds the source by interleaving whitespace gaps with token texts.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        let mut pos = 0;
        for t in &self.tokens {
            out.push_str(&self.source[pos..t.offset]);
            out.push_str(&t.text);
            pos = t.offset + t.text.len();
        }
        out.push_str(&self.source[pos..]);
        out
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while",
];

// Longest first so that maximal munch is a linear scan.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "->", "==", ">=", "<=", "!=", "&&", "||", "++", "--", "<<", ">>",
    "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=", "=", ">", "<", "!", "~", "?", ":", "+", "-",
    "*", "/", "&", "|", "^", "%",
];

const SEPARATORS: &[&str] = &["...", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@"];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.binary_search(&word).is_ok()
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn error(&self, line: usize, column: usize, reason: impl Into<String>) -> LexError {
        LexError { line, column, reason: reason.into() }
    }
}

pub fn tokenize(source: &str) -> Result<TokenStream, LexError> {
    let mut cur = Cursor { src: source, pos: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() || c == '\u{feff}' {
            cur.bump();
            continue;
        }
        let (start, line, column) = (cur.pos, cur.line, cur.column);
        let kind = if cur.rest().starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            TokenKind::Comment
        } else if cur.rest().starts_with("/*") {
            cur.bump_n(2);
            loop {
                if cur.rest().starts_with("*/") {
                    cur.bump_n(2);
                    break;
                }
                if cur.bump().is_none() {
                    return Err(cur.error(line, column, "unterminated block comment"));
                }
            }
            TokenKind::Comment
        } else if cur.rest().starts_with("\"\"\"") {
            lex_text_block(&mut cur, line, column)?;
            TokenKind::Literal
        } else if c == '"' || c == '\'' {
            lex_quoted(&mut cur, c, line, column)?;
            TokenKind::Literal
        } else if c.is_ascii_digit() || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            lex_number(&mut cur);
            TokenKind::Literal
        } else if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_part) {
                cur.bump();
            }
            let word = &source[start..cur.pos];
            if matches!(word, "true" | "false" | "null") {
                TokenKind::Literal
            } else if is_keyword(word) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if let Some(sep) = SEPARATORS.iter().find(|s| cur.rest().starts_with(**s)) {
            cur.bump_n(sep.len());
            TokenKind::Separator
        } else if let Some(op) = OPERATORS.iter().find(|s| cur.rest().starts_with(**s)) {
            cur.bump_n(op.len());
            TokenKind::Operator
        } else {
            return Err(cur.error(line, column, format!("unexpected character {c:?}")));
        };
        tokens.push(Token { kind, text: source[start..cur.pos].to_string(), line, column, offset: start });
    }

    Ok(TokenStream { source: source.to_string(), tokens })
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn lex_quoted(cur: &mut Cursor<'_>, quote: char, line: usize, column: usize) -> Result<(), LexError> {
    let what = if quote == '"' { "string literal" } else { "character literal" };
    cur.bump();
    loop {
        match cur.bump() {
            None | Some('\n') => return Err(cur.error(line, column, format!("unterminated {what}"))),
            Some('\\') => {
                if cur.bump().is_none() {
                    return Err(cur.error(line, column, format!("unterminated {what}")));
                }
            }
            Some(c) if c == quote => return Ok(()),
            Some(_) => {}
        }
    }
}

fn lex_text_block(cur: &mut Cursor<'_>, line: usize, column: usize) -> Result<(), LexError> {
    cur.bump_n(3);
    loop {
        if cur.rest().starts_with("\"\"\"") {
            cur.bump_n(3);
            return Ok(());
        }
        match cur.bump() {
            None => return Err(cur.error(line, column, "unterminated text block")),
            Some('\\') => {
                cur.bump();
            }
            Some(_) => {}
        }
    }
}

fn lex_number(cur: &mut Cursor<'_>) {
    let rest = cur.rest();
    if rest.starts_with("0x") || rest.starts_with("0X") || rest.starts_with("0b") || rest.starts_with("0B") {
        let hex = matches!(rest.as_bytes()[1], b'x' | b'X');
        cur.bump_n(2);
        while cur.peek().is_some_and(|c| c.is_ascii_hexdigit() || c == '_' || (hex && c == '.')) {
            cur.bump();
        }
        if hex && cur.peek().is_some_and(|c| c == 'p' || c == 'P') {
            cur.bump();
            if cur.peek().is_some_and(|c| c == '+' || c == '-') {
                cur.bump();
            }
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                cur.bump();
            }
        }
    } else {
        while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
        if cur.peek() == Some('.') && cur.peek_at(1).is_none_or(|c| !is_ident_start(c) && c != '.') {
            cur.bump();
            while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                cur.bump();
            }
        }
        if cur.peek().is_some_and(|c| c == 'e' || c == 'E') {
            let sign = cur.peek_at(1).is_some_and(|c| c == '+' || c == '-');
            let digit_at = if sign { 2 } else { 1 };
            if cur.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                cur.bump_n(digit_at);
                while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                    cur.bump();
                }
            }
        }
    }
    if cur.peek().is_some_and(|c| matches!(c, 'l' | 'L' | 'f' | 'F' | 'd' | 'D')) {
        cur.bump();
    }
}
