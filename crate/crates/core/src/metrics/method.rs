//! Per-method structural metrics.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::java::ast::*;
use crate::java::TokenStream;

pub const PATH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcVariants {
    pub cyclomatic: u64,
    pub modified: u64,
    pub strict: u64,
    pub essential: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRecord {
    pub name: String,
    pub loc: u64,
    pub nost: u64,
    pub params: u64,
    pub cc: CcVariants,
    pub nesting: u64,
    pub paths: u64,
    pub knots: u64,
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_constructor: bool,
    pub is_accessor_or_mutator: bool,
}

/// Lines that carry at least one non-comment token.
#[derive(Debug, Clone, Default)]
pub struct CodeLines(BTreeSet<usize>);

impl CodeLines {
    pub fn new(stream: &TokenStream) -> Self {
        let mut lines = BTreeSet::new();
        for t in stream.code_tokens() {
            lines.extend(t.line..=t.end_line());
        }
        CodeLines(lines)
    }

    pub fn count(&self, start: usize, end: usize) -> u64 {
        if start > end {
            return 0;
        }
        self.0.range(start..=end).count() as u64
    }
}

/// One record per method and constructor declared directly in `decl`.
pub fn compute_method_records(decl: &TypeDecl, lines: &CodeLines) -> Vec<MethodRecord> {
    let fields: HashSet<&str> = decl.fields().flat_map(|f| f.declarators.iter().map(|d| d.name.as_str())).collect();
    decl.methods().map(|m| method_record(m, &fields, lines)).collect()
}

pub fn method_record(m: &MethodDecl, fields: &HashSet<&str>, lines: &CodeLines) -> MethodRecord {
    let mut rec = MethodRecord {
        name: m.name.clone(),
        loc: lines.count(m.start_line, m.end_line),
        nost: 0,
        params: m.params.len() as u64,
        cc: CcVariants::default(),
        nesting: 0,
        paths: 0,
        knots: 0,
        visibility: m.modifiers.visibility,
        is_static: m.modifiers.is_static,
        is_constructor: m.is_constructor,
        is_accessor_or_mutator: false,
    };
    let Some(body) = &m.body else {
        return rec;
    };
    rec.nost = statement_count(body);
    rec.cc = cc_variants(body);
    rec.nesting = 1 + body.stmts.iter().map(nesting_depth).max().unwrap_or(0);
    rec.paths = npath_block(body);
    rec.knots = knots(body, m.end_line);
    rec.is_accessor_or_mutator = !m.is_constructor && is_accessor_or_mutator(m, fields);
    rec
}

pub fn statement_count(body: &Block) -> u64 {
    let mut n = 0;
    for s in &body.stmts {
        s.walk(&mut |st| {
            if !matches!(st.kind, StmtKind::Block(_) | StmtKind::Empty) {
                n += 1;
            }
        });
    }
    n
}

// ---- cyclomatic variants ---------------------------------------------------

fn count_short_circuit(e: &Expr) -> u64 {
    let mut n = 0;
    e.walk(&mut |x| match x {
        Expr::Binary { op, .. } if op == "&&" || op == "||" => n += 1,
        Expr::Ternary { .. } => n += 1,
        _ => {}
    });
    n
}

fn case_count(cases: &[SwitchCase]) -> u64 {
    cases.iter().filter(|c| !c.is_default).count() as u64
}

pub fn cc_variants(body: &Block) -> CcVariants {
    let mut structural = 0u64;
    let mut structural_modified = 0u64;
    let mut in_conditions = 0u64;
    for s in &body.stmts {
        s.walk(&mut |st| match &st.kind {
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => {
                structural += 1;
                structural_modified += 1;
                in_conditions += count_short_circuit(cond);
            }
            StmtKind::For { cond, .. } => {
                structural += 1;
                structural_modified += 1;
                if let Some(c) = cond {
                    in_conditions += count_short_circuit(c);
                }
            }
            StmtKind::ForEach { .. } => {
                structural += 1;
                structural_modified += 1;
            }
            StmtKind::Switch { cases, .. } => {
                structural += case_count(cases);
                structural_modified += u64::from(case_count(cases) > 0);
            }
            StmtKind::Try { catches, .. } => {
                structural += catches.len() as u64;
                structural_modified += catches.len() as u64;
            }
            _ => {}
        });
    }
    let mut everywhere = 0u64;
    for e in block_expressions(body) {
        match e {
            Expr::Binary { op, .. } if op == "&&" || op == "||" => everywhere += 1,
            Expr::Ternary { .. } => everywhere += 1,
            Expr::Switch { cases, .. } => {
                structural += case_count(cases);
                structural_modified += u64::from(case_count(cases) > 0);
            }
            _ => {}
        }
    }
    CcVariants {
        cyclomatic: 1 + structural + in_conditions,
        modified: 1 + structural_modified + in_conditions,
        strict: 1 + structural + everywhere,
        essential: 1 + essential_decisions(body),
    }
}

// ---- jump analysis (essential complexity, knots) ---------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum FrameKind {
    If,
    Loop,
    Switch,
    Labeled,
}

struct Frame {
    kind: FrameKind,
    label: Option<String>,
    header_line: usize,
    end_line: usize,
    decisions: u64,
    irreducible: bool,
}

enum JumpTarget {
    /// Index into the frame stack; `inclusive` marks the target frame itself
    /// as escaped (a loop left by `break`).
    Frame { index: usize, inclusive: bool, line: usize },
    Method,
}

struct JumpWalker {
    frames: Vec<Frame>,
    method_end: usize,
    intervals: Vec<(usize, usize)>,
    essential: u64,
}

impl JumpWalker {
    fn new(method_end: usize) -> Self {
        JumpWalker { frames: Vec::new(), method_end, intervals: Vec::new(), essential: 0 }
    }

    fn find(&self, label: &Option<String>, want_loop: bool) -> Option<usize> {
        (0..self.frames.len()).rev().find(|&i| {
            let f = &self.frames[i];
            match label {
                Some(l) => f.label.as_deref() == Some(l.as_str()),
                None => f.kind == FrameKind::Loop || (!want_loop && f.kind == FrameKind::Switch),
            }
        })
    }

    fn jump(&mut self, source_line: usize, target: JumpTarget) {
        let (first_escaped, target_line) = match target {
            JumpTarget::Method => (0, self.method_end),
            JumpTarget::Frame { index, inclusive, line } => (if inclusive { index } else { index + 1 }, line),
        };
        let from = first_escaped.min(self.frames.len());
        for f in &mut self.frames[from..] {
            f.irreducible = true;
        }
        self.intervals.push((source_line.min(target_line), source_line.max(target_line)));
    }

    fn push(&mut self, kind: FrameKind, label: Option<String>, st: &Stmt, decisions: u64) {
        self.frames.push(Frame {
            kind,
            label,
            header_line: st.line,
            end_line: st.end_line,
            decisions,
            irreducible: false,
        });
    }

    fn pop(&mut self) {
        let f = self.frames.pop().expect("frame stack underflow");
        if f.irreducible && f.kind != FrameKind::Labeled {
            self.essential += f.decisions;
        }
    }

    fn block(&mut self, b: &Block) {
        for s in &b.stmts {
            self.stmt(s, None);
        }
    }

    fn stmt(&mut self, st: &Stmt, label: Option<String>) {
        match &st.kind {
            StmtKind::Block(b) => {
                if label.is_some() {
                    self.push(FrameKind::Labeled, label, st, 0);
                    self.block(b);
                    self.pop();
                } else {
                    self.block(b);
                }
            }
            StmtKind::Labeled { label: l, body } => self.stmt(body, Some(l.clone())),
            StmtKind::If { then, otherwise, .. } => {
                self.push(FrameKind::If, label, st, 1);
                self.stmt(then, None);
                if let Some(o) = otherwise {
                    self.stmt(o, None);
                }
                self.pop();
            }
            StmtKind::While { body, .. }
            | StmtKind::DoWhile { body, .. }
            | StmtKind::For { body, .. }
            | StmtKind::ForEach { body, .. } => {
                self.push(FrameKind::Loop, label, st, 1);
                self.stmt(body, None);
                self.pop();
            }
            StmtKind::Switch { cases, .. } => {
                self.push(FrameKind::Switch, label, st, case_count(cases));
                for c in cases {
                    for s in &c.body {
                        self.stmt(s, None);
                    }
                }
                self.pop();
            }
            StmtKind::Try { body, catches, finally, .. } => {
                self.block(body);
                for c in catches {
                    self.block(&c.body);
                }
                if let Some(f) = finally {
                    self.block(f);
                }
            }
            StmtKind::Synchronized { body, .. } => self.block(body),
            StmtKind::Break(l) => {
                if let Some(index) = self.find(l, false) {
                    let f = &self.frames[index];
                    let inclusive = f.kind == FrameKind::Loop;
                    let line = f.end_line;
                    self.jump(st.line, JumpTarget::Frame { index, inclusive, line });
                }
            }
            StmtKind::Continue(l) => {
                if let Some(index) = self.find(l, true) {
                    let line = self.frames[index].header_line;
                    self.jump(st.line, JumpTarget::Frame { index, inclusive: false, line });
                }
            }
            StmtKind::Return(_) => self.jump(st.line, JumpTarget::Method),
            _ => {}
        }
    }
}

fn essential_decisions(body: &Block) -> u64 {
    let mut w = JumpWalker::new(body.end_line);
    w.block(body);
    w.essential
}

/// Pairs of jumps whose line intervals strictly interleave.
pub fn knots(body: &Block, method_end: usize) -> u64 {
    let mut w = JumpWalker::new(method_end);
    w.block(body);
    let iv = &w.intervals;
    let mut n = 0;
    for i in 0..iv.len() {
        for j in i + 1..iv.len() {
            let (a, b) = iv[i];
            let (c, d) = iv[j];
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                n += 1;
            }
        }
    }
    n
}

// ---- nesting ----------------------------------------------------------------

fn nesting_depth(st: &Stmt) -> u64 {
    let max_of = |stmts: &mut dyn Iterator<Item = &Stmt>| stmts.map(nesting_depth).max().unwrap_or(0);
    match &st.kind {
        StmtKind::Block(b) => max_of(&mut b.stmts.iter()),
        StmtKind::Labeled { body, .. } => nesting_depth(body),
        StmtKind::If { then, otherwise, .. } => {
            let t = nesting_depth(then);
            let o = match otherwise.as_deref() {
                // `else if` stays on the same level
                Some(s @ Stmt { kind: StmtKind::If { .. }, .. }) => nesting_depth(s).saturating_sub(1),
                Some(s) => nesting_depth(s),
                None => 0,
            };
            1 + t.max(o)
        }
        StmtKind::While { body, .. }
        | StmtKind::DoWhile { body, .. }
        | StmtKind::For { body, .. }
        | StmtKind::ForEach { body, .. } => 1 + nesting_depth(body),
        StmtKind::Switch { cases, .. } => 1 + max_of(&mut cases.iter().flat_map(|c| c.body.iter())),
        StmtKind::Try { body, catches, finally, .. } => {
            let inner = body
                .stmts
                .iter()
                .chain(catches.iter().flat_map(|c| c.body.stmts.iter()))
                .chain(finally.iter().flat_map(|f| f.stmts.iter()));
            1 + max_of(&mut inner.into_iter())
        }
        StmtKind::Synchronized { body, .. } => 1 + max_of(&mut body.stmts.iter()),
        _ => 0,
    }
}

// ---- NPATH -----------------------------------------------------------------

fn sat(x: u64) -> u64 {
    x.min(PATH_CAP)
}

fn expr_paths(e: &Expr) -> u64 {
    let mut n = 0;
    e.walk(&mut |x| {
        if let Expr::Binary { op, .. } = x {
            if op == "&&" || op == "||" {
                n += 1;
            }
        }
    });
    n
}

fn npath_seq<'a>(stmts: impl Iterator<Item = &'a Stmt>) -> u64 {
    stmts.fold(1u64, |acc, s| sat(acc.saturating_mul(npath(s))))
}

pub fn npath_block(b: &Block) -> u64 {
    npath_seq(b.stmts.iter())
}

fn npath(st: &Stmt) -> u64 {
    match &st.kind {
        StmtKind::Block(b) => npath_block(b),
        StmtKind::Labeled { body, .. } => npath(body),
        StmtKind::If { cond, then, otherwise } => {
            let e = otherwise.as_deref().map(npath).unwrap_or(1);
            sat(expr_paths(cond) + npath(then) + e)
        }
        StmtKind::While { cond, body } | StmtKind::DoWhile { body, cond } => sat(expr_paths(cond) + npath(body) + 1),
        StmtKind::For { cond, body, .. } => sat(cond.as_ref().map(expr_paths).unwrap_or(0) + npath(body) + 1),
        StmtKind::ForEach { body, .. } => sat(npath(body) + 1),
        StmtKind::Switch { selector, cases } => {
            let mut total = expr_paths(selector);
            for c in cases {
                total = sat(total + npath_seq(c.body.iter()));
            }
            if !cases.iter().any(|c| c.is_default) {
                total = sat(total + 1);
            }
            total.max(1)
        }
        StmtKind::Try { body, catches, finally, .. } => {
            let mut t = npath_block(body);
            for c in catches {
                t = sat(t + npath_block(&c.body));
            }
            let f = finally.as_ref().map(npath_block).unwrap_or(1);
            sat(t.saturating_mul(f))
        }
        StmtKind::Synchronized { body, .. } => npath_block(body),
        _ => 1,
    }
}

// ---- accessor / mutator ----------------------------------------------------

fn field_target<'a>(e: &'a Expr, fields: &HashSet<&str>, params: &[Param]) -> Option<&'a str> {
    match e {
        Expr::FieldAccess { target, name } if matches!(**target, Expr::This) && fields.contains(name.as_str()) => {
            Some(name)
        }
        Expr::Name(n) if fields.contains(n.as_str()) && !params.iter().any(|p| &p.name == n) => Some(n),
        _ => None,
    }
}

pub fn is_accessor_or_mutator(m: &MethodDecl, fields: &HashSet<&str>) -> bool {
    if m.modifiers.is_static {
        return false;
    }
    let Some(body) = &m.body else { return false };
    let [only] = body.stmts.as_slice() else { return false };
    match &only.kind {
        StmtKind::Return(Some(e)) => m.params.is_empty() && field_target(e, fields, &m.params).is_some(),
        StmtKind::Expr(Expr::Assign { op, target, value }) if op == "=" => {
            field_target(target, fields, &m.params).is_some()
                && matches!(&**value, Expr::Name(v) if m.params.iter().any(|p| &p.name == v))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::java::parse_source;

    fn records(src: &str) -> Vec<MethodRecord> {
        let (stream, unit) = parse_source(src).unwrap();
        compute_method_records(&unit.types[0], &CodeLines::new(&stream))
    }

    fn one(body: &str) -> MethodRecord {
        records(&format!("class T {{\nint f;\nvoid m(int a, int b) {{\n{body}\n}}\n}}")).remove(0)
    }

    #[test]
    fn straight_line() {
        let r = one("int x = 1;\nx++;\nfoo(x);");
        assert_eq!((r.cc.cyclomatic, r.nesting, r.paths, r.knots), (1, 1, 1, 0));
        assert_eq!(r.cc, CcVariants { cyclomatic: 1, modified: 1, strict: 1, essential: 1 });
        assert_eq!(r.nost, 3);
        assert_eq!(r.params, 2);
        assert_eq!(r.loc, 5);
    }

    #[test]
    fn if_else() {
        let r = one("if (a > b) { foo(); } else { bar(); }");
        assert_eq!((r.cc.cyclomatic, r.paths, r.nesting), (2, 2, 2));
        assert_eq!(r.cc.essential, 1);
    }

    #[test]
    fn short_circuit_in_condition_vs_elsewhere() {
        let r = one("boolean c = a > 0 && b > 0;\nif (a > 0 || b > 0) { foo(); }\nint z = a > b ? a : b;");
        assert_eq!(r.cc.cyclomatic, 3);
        assert_eq!(r.cc.strict, 5);
        // if: 1 (||) + 1 + 1
        assert_eq!(r.paths, 3);
    }

    #[test]
    fn switch_modified_counts_once() {
        let r = one("switch (a) { case 1: foo(); break; case 2: bar(); break; case 3: baz(); break; default: qux(); }");
        assert_eq!(r.cc.cyclomatic, 4);
        assert_eq!(r.cc.modified, 2);
        assert_eq!(r.cc.strict, 4);
        assert_eq!(r.paths, 4);
        // breaks target their own switch
        assert_eq!(r.cc.essential, 1);
    }

    #[test]
    fn loops_and_catch() {
        let r = one("for (int i = 0; i < a; i++) { while (b > 0) { b--; } }\ntry { foo(); } catch (RuntimeException e) { bar(); } catch (Error e) {}");
        assert_eq!(r.cc.cyclomatic, 5);
        assert_eq!(r.nesting, 3);
        // for: 0 + (while: 0 + 1 + 1) + 1 = 3; try: 1 + 1 + 1 = 3
        assert_eq!(r.paths, 9);
    }

    #[test]
    fn early_return_is_unstructured() {
        let r = one("if (a > 0) {\nreturn;\n}\nfoo();");
        assert_eq!(r.cc.cyclomatic, 2);
        assert_eq!(r.cc.essential, 2);
    }

    #[test]
    fn loop_break_is_unstructured() {
        let r = one("while (a > 0) {\nif (b > 0) break;\na--;\n}");
        assert_eq!(r.cc.cyclomatic, 3);
        assert_eq!(r.cc.essential, 3);
    }

    #[test]
    fn knots_from_interleaving_jumps() {
        // line numbers: method body starts on line 4
        let r = one("while (a > 0) {\nif (b > 0) continue;\nif (b < 0) break;\na--;\n}\nreturn;");
        // continue: 5 -> 4, break: 6 -> 8
        assert_eq!(r.knots, 0);
        let r = one("for (;;) {\nif (a > 0) break;\nif (b > 0) return;\n}\nfoo();");
        // break: (5, 7), return: (6, 9) interleave
        assert_eq!(r.knots, 1);
    }

    #[test]
    fn else_if_chain_stays_flat() {
        let r = one("if (a == 1) { foo(); } else if (a == 2) { bar(); } else if (a == 3) { baz(); } else { qux(); }");
        assert_eq!(r.nesting, 2);
        assert_eq!(r.cc.cyclomatic, 4);
        assert_eq!(r.paths, 4);
    }

    #[test]
    fn accessors_and_mutators() {
        let rs = records(
            "class P {\n int x; private String name;\n\
             int getX() { return x; }\n\
             String getName() { return this.name; }\n\
             void setX(int v) { this.x = v; }\n\
             void setName(String n) { name = n; }\n\
             void setTwice(int v) { x = v; x = v; }\n\
             static int sx() { return 0; }\n\
             int calc() { return x + 1; }\n\
             P(int x) { this.x = x; }\n\
             void shadow(int x) { x = x; }\n}",
        );
        let flags: Vec<bool> = rs.iter().map(|r| r.is_accessor_or_mutator).collect();
        assert_eq!(flags, vec![true, true, true, true, false, false, false, false, false]);
        assert!(rs.iter().filter(|r| r.is_accessor_or_mutator).all(|r| r.nost <= 2));
    }

    #[test]
    fn bodyless_methods_are_zero() {
        let rs = records("abstract class A { abstract int f(int a); }");
        assert_eq!(rs[0].cc, CcVariants::default());
        assert_eq!((rs[0].nesting, rs[0].paths, rs[0].nost), (0, 0, 0));
        assert_eq!(rs[0].params, 1);
    }

    #[test]
    fn npath_saturates() {
        let body: String = (0..30).map(|_| "if (a > 0) { foo(); }\n").collect();
        assert_eq!(one(&body).paths, PATH_CAP);
    }

    #[test]
    fn lambda_decisions_count_toward_cyclomatic() {
        let r = one("Runnable r = () -> { if (a > 0) foo(); };");
        assert_eq!(r.cc.cyclomatic, 2);
    }
}
