//! Token-level counters over one source file.
//!
//! Counting rules:
//! - comments are ignored everywhere;
//! - tokens are counted as lexed with maximal munch, so the `>>` closing `List<List<T>>` is one operator;
//! - `true`, `false` and `null` are literals, not keywords;
//! - NOASS counts assignment operators (`=`, `+=`, ..., `>>>=`); `++`/`--` are ordinary operators;
//! - NOOP/NOOPU cover every other operator token, including `?`, `:` and `->`; `.` and `::` are separators;
//! - NOREPR counts `return` plus `print`/`println`/`printf` identifiers immediately followed by `(`;
//! - NOCJST counts `if`, `switch`, `for`, `while` and the ternary `?`;
//! - NOCUJST counts `break`, `continue`, `return`, `goto`;
//! - NOEXST counts `try`, `catch`, `finally`, `throw`, `throws`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::java::{Token, TokenKind, TokenStream};

pub const LEXICAL_NAMES: [&str; 17] = [
    "NOTK", "NOTKU", "NOID", "NOIDU", "NOKW", "NOKWU", "NOASS", "NOOP", "NOOPU", "NOSC", "NODOT", "NOREPR", "NOCJST",
    "NOCUJST", "NOEXST", "NONEW", "NOSUPER",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalMetrics {
    pub notk: u64,
    pub notku: u64,
    pub noid: u64,
    pub noidu: u64,
    pub nokw: u64,
    pub nokwu: u64,
    pub noass: u64,
    pub noop: u64,
    pub noopu: u64,
    pub nosc: u64,
    pub nodot: u64,
    pub norepr: u64,
    pub nocjst: u64,
    pub nocujst: u64,
    pub noexst: u64,
    pub nonew: u64,
    pub nosuper: u64,
}

impl LexicalMetrics {
    /// Values in [`LEXICAL_NAMES`] order.
    pub fn values(&self) -> [u64; 17] {
        [
            self.notk, self.notku, self.noid, self.noidu, self.nokw, self.nokwu, self.noass, self.noop, self.noopu,
            self.nosc, self.nodot, self.norepr, self.nocjst, self.nocujst, self.noexst, self.nonew, self.nosuper,
        ]
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        LEXICAL_NAMES.iter().position(|n| *n == name).map(|i| self.values()[i])
    }
}

fn is_assignment(op: &str) -> bool {
    matches!(op, "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" | ">>=" | ">>>=")
}

pub fn compute_lexical_metrics(stream: &TokenStream) -> LexicalMetrics {
    let code: Vec<&Token> = stream.code_tokens().collect();
    let mut m = LexicalMetrics::default();
    let mut all = HashSet::new();
    let mut ids = HashSet::new();
    let mut kws = HashSet::new();
    let mut ops = HashSet::new();
    for (i, t) in code.iter().enumerate() {
        let text = t.text.as_str();
        m.notk += 1;
        all.insert(text);
        match t.kind {
            TokenKind::Identifier => {
                m.noid += 1;
                ids.insert(text);
                if matches!(text, "print" | "println" | "printf") && code.get(i + 1).is_some_and(|n| n.is("(")) {
                    m.norepr += 1;
                }
            }
            TokenKind::Keyword => {
                m.nokw += 1;
                kws.insert(text);
                match text {
                    "if" | "switch" | "for" | "while" => m.nocjst += 1,
                    "break" | "continue" | "goto" => m.nocujst += 1,
                    "return" => {
                        m.nocujst += 1;
                        m.norepr += 1;
                    }
                    "try" | "catch" | "finally" | "throw" | "throws" => m.noexst += 1,
                    "new" => m.nonew += 1,
                    "super" => m.nosuper += 1,
                    _ => {}
                }
            }
            TokenKind::Operator => {
                if is_assignment(text) {
                    m.noass += 1;
                } else {
                    m.noop += 1;
                    ops.insert(text);
                    if text == "?" {
                        m.nocjst += 1;
                    }
                }
            }
            TokenKind::Separator => match text {
                ";" => m.nosc += 1,
                "." => m.nodot += 1,
                _ => {}
            },
            TokenKind::Literal | TokenKind::Comment => {}
        }
    }
    m.notku = all.len() as u64;
    m.noidu = ids.len() as u64;
    m.nokwu = kws.len() as u64;
    m.noopu = ops.len() as u64;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::java::tokenize;

    fn lex(src: &str) -> LexicalMetrics {
        compute_lexical_metrics(&tokenize(src).unwrap())
    }

    #[test]
    fn empty_file_is_all_zero() {
        assert_eq!(lex("").values(), [0; 17]);
        assert_eq!(lex("// only a comment\n/* and another */").values(), [0; 17]);
    }

    #[test]
    fn assignments_and_identifiers() {
        let m = lex("a = b; c = d;");
        assert_eq!((m.noass, m.nosc, m.noid, m.noidu), (2, 2, 4, 4));
        assert_eq!(m.noop, 0);
    }

    #[test]
    fn returns_and_prints() {
        let m = lex("return x; System.out.print(y);");
        assert_eq!(m.norepr, 2);
        assert_eq!(m.nodot, 2);
        assert_eq!(m.nocujst, 1);
    }

    #[test]
    fn print_without_call_is_not_counted() {
        assert_eq!(lex("int print = 1; x = print;").norepr, 0);
    }

    #[test]
    fn jumps_and_exceptions() {
        let m = lex("if (a) { x = b ? 1 : 2; } try { throw e; } catch (E e) {} finally {} while (c) break;");
        assert_eq!(m.nocjst, 3);
        assert_eq!(m.noexst, 4);
        assert_eq!(m.nocujst, 1);
        assert_eq!(m.noop, 2);
        assert_eq!(m.noopu, 2);
    }

    #[test]
    fn literal_keywords_are_literals() {
        let m = lex("x = true; y = null;");
        assert_eq!(m.nokw, 0);
        assert_eq!(m.notk, 8);
        assert_eq!(m.notku, 6);
    }

    #[test]
    fn unique_counts_bounded() {
        let m = lex("class A { int a; int b; void f() { a++; b++; a += b; new A(); super.f(); } }");
        assert!(m.notku <= m.notk && m.noidu <= m.noid && m.nokwu <= m.nokw && m.noopu <= m.noop);
        assert_eq!(m.nonew, 1);
        assert_eq!(m.nosuper, 1);
        assert_eq!(m.noop, 2);
        assert_eq!(m.noopu, 1);
    }
}
