//! Recursive-descent parser for the supported Java subset.

use thiserror::Error;

use super::ast::*;
use super::lexer::{Token, TokenKind, TokenStream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse(stream: &TokenStream) -> PResult<CompilationUnit> {
    let tokens: Vec<Token> = stream.code_tokens().cloned().collect();
    let mut p = Parser { tokens, pos: 0, gt_taken: 0 };
    p.compilation_unit()
}

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// How many leading `>` of the current token were consumed by a closing
    /// type-argument list (`List<List<X>>`).
    gt_taken: usize,
}

#[derive(Clone, Copy)]
struct Mark(usize, usize);

impl Parser {
    // ---- token helpers -------------------------------------------------

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_text(&self) -> &str {
        match self.tokens.get(self.pos) {
            Some(t) => &t.text[self.gt_taken..],
            None => "",
        }
    }

    fn peek_nth_text(&self, n: usize) -> &str {
        if n == 0 {
            return self.peek_text();
        }
        self.tokens.get(self.pos + n).map(|t| t.text.as_str()).unwrap_or("")
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn peek_nth_kind(&self, n: usize) -> Option<TokenKind> {
        self.tokens.get(self.pos + n).map(|t| t.kind)
    }

    fn at(&self, text: &str) -> bool {
        self.peek_text() == text && self.peek_kind() != Some(TokenKind::Literal)
    }

    fn at_ident(&self) -> bool {
        self.peek_kind() == Some(TokenKind::Identifier)
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn line(&self) -> usize {
        self.peek().or_else(|| self.tokens.last()).map(|t| t.line).unwrap_or(1)
    }

    fn prev_end_line(&self) -> usize {
        if self.pos == 0 {
            return 1;
        }
        self.tokens[self.pos - 1].end_line()
    }

    fn mark(&self) -> Mark {
        Mark(self.pos, self.gt_taken)
    }

    fn reset(&mut self, m: Mark) {
        self.pos = m.0;
        self.gt_taken = m.1;
    }

    fn advance(&mut self) -> String {
        let text = self.peek_text().to_string();
        self.pos += 1;
        self.gt_taken = 0;
        text
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error(&self, reason: impl Into<String>) -> ParseError {
        let (line, column) = match self.peek().or_else(|| self.tokens.last()) {
            Some(t) => (t.line, t.column + self.gt_taken),
            None => (1, 1),
        };
        let found = if self.at_eof() { "end of input".to_string() } else { format!("`{}`", self.peek_text()) };
        ParseError { line, column, reason: format!("{}, found {found}", reason.into()) }
    }

    fn expect(&mut self, text: &str) -> PResult<()> {
        if self.eat(text) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{text}`")))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        if self.at_ident() {
            Ok(self.advance())
        } else {
            Err(self.error("expected identifier"))
        }
    }

    /// Consumes one `>` that closes a type-argument list, splitting `>>`,
    /// `>>>`, `>=`, `>>=` tokens as needed.
    fn close_angle(&mut self) -> PResult<()> {
        let text = self.peek_text().to_string();
        if !text.starts_with('>') {
            return Err(self.error("expected `>`"));
        }
        if text.len() == 1 {
            self.advance();
        } else {
            self.gt_taken += 1;
        }
        Ok(())
    }

    // ---- declarations --------------------------------------------------

    fn compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let mut unit = CompilationUnit::default();
        let m = self.mark();
        self.skip_annotations()?;
        if self.eat("package") {
            unit.package = Some(self.qualified_name()?);
            self.expect(";")?;
        } else {
            self.reset(m);
        }
        while self.at("import") {
            self.advance();
            let is_static = self.eat("static");
            let mut path = self.ident()?;
            let mut wildcard = false;
            while self.eat(".") {
                if self.eat("*") {
                    wildcard = true;
                    break;
                }
                path.push('.');
                path.push_str(&self.ident()?);
            }
            self.expect(";")?;
            unit.imports.push(Import { path, is_static, wildcard });
        }
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let start = self.line();
            let modifiers = self.modifiers()?;
            unit.types.push(self.type_decl(modifiers, start)?);
        }
        Ok(unit)
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && self.peek_nth_kind(1) == Some(TokenKind::Identifier) {
            self.advance();
            name.push('.');
            name.push_str(&self.advance());
        }
        Ok(name)
    }

    fn skip_annotations(&mut self) -> PResult<Vec<String>> {
        let mut names = Vec::new();
        while self.at("@") && self.peek_nth_text(1) != "interface" {
            self.advance();
            names.push(self.qualified_name()?);
            if self.at("(") {
                self.skip_balanced("(", ")")?;
            }
        }
        Ok(names)
    }

    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        self.expect(open)?;
        let mut depth = 1;
        while depth > 0 {
            if self.at_eof() {
                return Err(self.error(format!("unbalanced `{open}`")));
            }
            if self.at(open) {
                depth += 1;
            } else if self.at(close) {
                depth -= 1;
            }
            self.advance();
        }
        Ok(())
    }

    fn modifiers(&mut self) -> PResult<Modifiers> {
        let mut m = Modifiers::default();
        loop {
            if self.at("@") && self.peek_nth_text(1) != "interface" {
                m.annotations.extend(self.skip_annotations()?);
                continue;
            }
            match self.peek_text() {
                "public" => m.visibility = Visibility::Public,
                "protected" => m.visibility = Visibility::Protected,
                "private" => m.visibility = Visibility::Private,
                "static" => m.is_static = true,
                "abstract" => m.is_abstract = true,
                "final" => m.is_final = true,
                "default" if self.peek_nth_text(1) != ":" && self.peek_nth_text(1) != "->" => m.is_default = true,
                "native" | "synchronized" | "transient" | "volatile" | "strictfp" => {}
                "sealed" | "non" if self.at_ident() => {
                    return Err(self.error("unsupported construct: sealed types"));
                }
                _ => break,
            }
            if self.peek_text() == "synchronized" && self.peek_nth_text(1) == "(" {
                break;
            }
            self.advance();
        }
        Ok(m)
    }

    fn type_decl(&mut self, modifiers: Modifiers, start_line: usize) -> PResult<TypeDecl> {
        let kind = if self.eat("class") {
            TypeKind::Class
        } else if self.eat("interface") {
            TypeKind::Interface
        } else if self.eat("enum") {
            TypeKind::Enum
        } else if self.at("@") && self.peek_nth_text(1) == "interface" {
            self.advance();
            self.advance();
            TypeKind::Annotation
        } else if self.peek_text() == "record" && self.peek_nth_kind(1) == Some(TokenKind::Identifier) {
            return Err(self.error("unsupported construct: record declarations"));
        } else {
            return Err(self.error("expected type declaration"));
        };
        let name = self.ident()?;
        if self.at("<") {
            self.skip_type_params()?;
        }
        let mut decl = TypeDecl {
            kind,
            name,
            modifiers,
            extends: Vec::new(),
            implements: Vec::new(),
            enum_constants: Vec::new(),
            members: Vec::new(),
            start_line,
            end_line: start_line,
        };
        if self.eat("extends") {
            decl.extends = self.type_list()?;
        }
        if self.eat("implements") {
            decl.implements = self.type_list()?;
        }
        if self.peek_text() == "permits" {
            return Err(self.error("unsupported construct: sealed types"));
        }
        if kind == TypeKind::Annotation {
            self.skip_balanced("{", "}")?;
        } else {
            self.expect("{")?;
            if kind == TypeKind::Enum {
                decl.enum_constants = self.enum_constants()?;
            }
            decl.members = self.class_body_members(&decl.name, kind)?;
            self.expect("}")?;
        }
        decl.end_line = self.prev_end_line();
        Ok(decl)
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut v = vec![self.type_ref()?];
        while self.eat(",") {
            v.push(self.type_ref()?);
        }
        Ok(v)
    }

    fn skip_type_params(&mut self) -> PResult<()> {
        // `<T extends Comparable<T>>`: balanced over angle characters.
        self.expect("<")?;
        let mut depth = 1usize;
        while depth > 0 {
            if self.at_eof() {
                return Err(self.error("unbalanced type parameters"));
            }
            let t = self.peek_text().to_string();
            if t == "<" {
                depth += 1;
                self.advance();
            } else if t.starts_with('>') && t.chars().all(|c| c == '>') {
                self.close_angle()?;
                depth -= 1;
            } else {
                self.advance();
            }
        }
        Ok(())
    }

    fn enum_constants(&mut self) -> PResult<Vec<EnumConstant>> {
        let mut out = Vec::new();
        loop {
            self.skip_annotations()?;
            if !self.at_ident() {
                break;
            }
            let line = self.line();
            let name = self.advance();
            let args = if self.at("(") { self.arguments()? } else { Vec::new() };
            let body = if self.at("{") {
                self.expect("{")?;
                let members = self.class_body_members(&name, TypeKind::Class)?;
                self.expect("}")?;
                Some(members)
            } else {
                None
            };
            out.push(EnumConstant { name, args, body, line });
            if !self.eat(",") {
                break;
            }
        }
        self.eat(";");
        Ok(out)
    }

    fn class_body_members(&mut self, type_name: &str, kind: TypeKind) -> PResult<Vec<Member>> {
        let mut members = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`"));
            }
            if self.eat(";") {
                continue;
            }
            members.push(self.member(type_name, kind)?);
        }
        Ok(members)
    }

    fn member(&mut self, type_name: &str, owner: TypeKind) -> PResult<Member> {
        let start = self.line();
        if self.at("{") || (self.at("static") && self.peek_nth_text(1) == "{") {
            let is_static = self.eat("static");
            let body = self.block()?;
            return Ok(Member::Initializer { is_static, body });
        }
        let mut modifiers = self.modifiers()?;
        if owner == TypeKind::Interface
            && modifiers.visibility == Visibility::Package {
                modifiers.visibility = Visibility::Public;
            }
        if matches!(self.peek_text(), "class" | "interface" | "enum")
            || (self.at("@") && self.peek_nth_text(1) == "interface")
            || (self.peek_text() == "record" && self.peek_nth_kind(1) == Some(TokenKind::Identifier) && self.peek_nth_text(2) == "(")
        {
            return Ok(Member::Type(self.type_decl(modifiers, start)?));
        }
        if self.at("<") {
            self.skip_type_params()?;
        }
        // Constructor: Name '('
        if self.at_ident() && self.peek_text() == type_name && self.peek_nth_text(1) == "(" {
            let name = self.advance();
            let params = self.params()?;
            let throws = self.throws_clause()?;
            let body = Some(self.block()?);
            return Ok(Member::Method(MethodDecl {
                modifiers,
                name,
                is_constructor: true,
                return_type: None,
                params,
                throws,
                body,
                start_line: start,
                end_line: self.prev_end_line(),
            }));
        }
        let ty = self.type_ref()?;
        let name = self.ident()?;
        if self.at("(") {
            let params = self.params()?;
            let mut ty = ty;
            while self.at("[") && self.peek_nth_text(1) == "]" {
                self.advance();
                self.advance();
                ty.dims += 1;
            }
            let throws = self.throws_clause()?;
            let body = if self.eat(";") {
                None
            } else if self.eat("default") {
                // annotation element default value
                self.expression()?;
                self.expect(";")?;
                None
            } else {
                Some(self.block()?)
            };
            if owner == TypeKind::Interface && body.is_none() && !modifiers.is_static {
                modifiers.is_abstract = true;
            }
            return Ok(Member::Method(MethodDecl {
                modifiers,
                name,
                is_constructor: false,
                return_type: Some(ty),
                params,
                throws,
                body,
                start_line: start,
                end_line: self.prev_end_line(),
            }));
        }
        if owner == TypeKind::Interface {
            modifiers.is_static = true;
            modifiers.is_final = true;
        }
        let declarators = self.declarators_after_name(name)?;
        self.expect(";")?;
        Ok(Member::Field(FieldDecl { modifiers, ty, declarators, start_line: start, end_line: self.prev_end_line() }))
    }

    fn throws_clause(&mut self) -> PResult<Vec<TypeRef>> {
        if self.eat("throws") {
            self.type_list()
        } else {
            Ok(Vec::new())
        }
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            self.modifiers()?;
            let mut ty = self.type_ref()?;
            let varargs = self.eat("...");
            let name = if self.at("this") {
                // receiver parameter
                self.advance()
            } else {
                self.ident()?
            };
            while self.at("[") {
                self.advance();
                self.expect("]")?;
                ty.dims += 1;
            }
            if varargs {
                ty.dims += 1;
            }
            out.push(Param { name, ty, varargs });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(out)
    }

    fn declarators_after_name(&mut self, first: String) -> PResult<Vec<VarDeclarator>> {
        let mut out = Vec::new();
        let mut name = first;
        loop {
            let mut dims = 0;
            while self.at("[") {
                self.advance();
                self.expect("]")?;
                dims += 1;
            }
            let init = if self.eat("=") { Some(self.var_init()?) } else { None };
            out.push(VarDeclarator { name, dims, init });
            if !self.eat(",") {
                break;
            }
            name = self.ident()?;
        }
        Ok(out)
    }

    fn var_init(&mut self) -> PResult<Expr> {
        if self.at("{") {
            self.array_init()
        } else {
            self.expression()
        }
    }

    fn array_init(&mut self) -> PResult<Expr> {
        self.expect("{")?;
        let mut items = Vec::new();
        while !self.at("}") {
            items.push(self.var_init()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(Expr::ArrayInit(items))
    }

    // ---- types ---------------------------------------------------------

    fn type_ref(&mut self) -> PResult<TypeRef> {
        self.skip_annotations()?;
        let name = if PRIMITIVES.contains(&self.peek_text()) && self.peek_kind() == Some(TokenKind::Keyword) {
            self.advance()
        } else {
            let mut name = self.ident()?;
            loop {
                if self.at("<") {
                    self.type_args()?;
                }
                if self.at(".") && self.peek_nth_kind(1) == Some(TokenKind::Identifier) {
                    self.advance();
                    name.push('.');
                    name.push_str(&self.advance());
                } else if self.at(".") && self.peek_nth_text(1) == "@" {
                    self.advance();
                    self.skip_annotations()?;
                    name.push('.');
                    name.push_str(&self.ident()?);
                } else {
                    break;
                }
            }
            name
        };
        let mut dims = 0;
        while self.at("[") && self.peek_nth_text(1) == "]" {
            self.advance();
            self.advance();
            dims += 1;
        }
        Ok(TypeRef { name, dims })
    }

    fn type_args(&mut self) -> PResult<()> {
        self.expect("<")?;
        if self.at(">") {
            // diamond
            return self.close_angle();
        }
        loop {
            self.skip_annotations()?;
            if self.eat("?") {
                if self.eat("extends") || self.eat("super") {
                    self.type_ref()?;
                }
            } else {
                self.type_ref()?;
                while self.eat("&") {
                    self.type_ref()?;
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        self.close_angle()
    }

    /// Speculatively parses a type; restores position on failure.
    fn try_type(&mut self) -> Option<TypeRef> {
        let m = self.mark();
        match self.type_ref() {
            Ok(t) => Some(t),
            Err(_) => {
                self.reset(m);
                None
            }
        }
    }

    // ---- statements ----------------------------------------------------

    fn block(&mut self) -> PResult<Block> {
        let start_line = self.line();
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("expected `}`"));
            }
            stmts.push(self.statement()?);
        }
        self.expect("}")?;
        Ok(Block { stmts, start_line, end_line: self.prev_end_line() })
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let line = self.line();
        let kind = self.statement_kind()?;
        Ok(Stmt { kind, line, end_line: self.prev_end_line() })
    }

    fn sub_statement(&mut self) -> PResult<Box<Stmt>> {
        Ok(Box::new(self.statement()?))
    }

    fn statement_kind(&mut self) -> PResult<StmtKind> {
        let text = self.peek_text().to_string();
        let is_kw = self.peek_kind() == Some(TokenKind::Keyword);
        if text == "{" {
            return Ok(StmtKind::Block(self.block()?));
        }
        if text == ";" {
            self.advance();
            return Ok(StmtKind::Empty);
        }
        if is_kw {
            match text.as_str() {
                "if" => {
                    self.advance();
                    let cond = self.paren_expr()?;
                    let then = self.sub_statement()?;
                    let otherwise = if self.eat("else") { Some(self.sub_statement()?) } else { None };
                    return Ok(StmtKind::If { cond, then, otherwise });
                }
                "while" => {
                    self.advance();
                    let cond = self.paren_expr()?;
                    let body = self.sub_statement()?;
                    return Ok(StmtKind::While { cond, body });
                }
                "do" => {
                    self.advance();
                    let body = self.sub_statement()?;
                    self.expect("while")?;
                    let cond = self.paren_expr()?;
                    self.expect(";")?;
                    return Ok(StmtKind::DoWhile { body, cond });
                }
                "for" => return self.for_statement(),
                "switch" => {
                    self.advance();
                    let selector = self.paren_expr()?;
                    let cases = self.switch_body()?;
                    return Ok(StmtKind::Switch { selector, cases });
                }
                "try" => return self.try_statement(),
                "return" => {
                    self.advance();
                    let value = if self.at(";") { None } else { Some(self.expression()?) };
                    self.expect(";")?;
                    return Ok(StmtKind::Return(value));
                }
                "break" | "continue" => {
                    self.advance();
                    let label = if self.at_ident() { Some(self.advance()) } else { None };
                    self.expect(";")?;
                    return Ok(if text == "break" { StmtKind::Break(label) } else { StmtKind::Continue(label) });
                }
                "throw" => {
                    self.advance();
                    let e = self.expression()?;
                    self.expect(";")?;
                    return Ok(StmtKind::Throw(e));
                }
                "synchronized" => {
                    self.advance();
                    let lock = self.paren_expr()?;
                    let body = self.block()?;
                    return Ok(StmtKind::Synchronized { lock, body });
                }
                "assert" => {
                    self.advance();
                    let cond = self.expression()?;
                    let message = if self.eat(":") { Some(self.expression()?) } else { None };
                    self.expect(";")?;
                    return Ok(StmtKind::Assert { cond, message });
                }
                "class" | "interface" | "enum" | "abstract" | "static" => {
                    let start = self.line();
                    let modifiers = self.modifiers()?;
                    return Ok(StmtKind::LocalClass(Box::new(self.type_decl(modifiers, start)?)));
                }
                "final" => {
                    let start = self.line();
                    let modifiers = self.modifiers()?;
                    if matches!(self.peek_text(), "class" | "interface" | "enum") {
                        return Ok(StmtKind::LocalClass(Box::new(self.type_decl(modifiers, start)?)));
                    }
                    let kind = self.local_var_decl()?;
                    self.expect(";")?;
                    return Ok(kind);
                }
                _ => {}
            }
        }
        if text == "@" {
            self.skip_annotations()?;
            return self.statement_kind();
        }
        if self.at_ident() {
            if self.peek_nth_text(1) == ":" && self.peek_nth_text(2) != ":" {
                let label = self.advance();
                self.advance();
                let body = self.sub_statement()?;
                return Ok(StmtKind::Labeled { label, body });
            }
            if text == "yield" && !is_expression_continuation(self.peek_nth_text(1)) {
                self.advance();
                let e = self.expression()?;
                self.expect(";")?;
                return Ok(StmtKind::Yield(e));
            }
            if text == "record" && self.peek_nth_kind(1) == Some(TokenKind::Identifier) && self.peek_nth_text(2) == "(" {
                return Err(self.error("unsupported construct: record declarations"));
            }
        }
        if let Some(kind) = self.try_local_var_decl()? {
            self.expect(";")?;
            return Ok(kind);
        }
        let e = self.expression()?;
        self.expect(";")?;
        Ok(StmtKind::Expr(e))
    }

    /// `Type name [= ...]` if the upcoming tokens look like a declaration.
    fn try_local_var_decl(&mut self) -> PResult<Option<StmtKind>> {
        let starts_type = self.at_ident()
            || (self.peek_kind() == Some(TokenKind::Keyword) && PRIMITIVES.contains(&self.peek_text()));
        if !starts_type {
            return Ok(None);
        }
        let m = self.mark();
        if let Some(_ty) = self.try_type() {
            if self.at_ident() && matches!(self.peek_nth_text(1), "=" | ";" | "," | "[" | ":") {
                self.reset(m);
                return self.local_var_decl().map(Some);
            }
        }
        self.reset(m);
        Ok(None)
    }

    fn local_var_decl(&mut self) -> PResult<StmtKind> {
        let ty = self.type_ref()?;
        let name = self.ident()?;
        let declarators = self.declarators_after_name(name)?;
        Ok(StmtKind::LocalVar { ty, declarators })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expression()?;
        self.expect(")")?;
        Ok(e)
    }

    fn for_statement(&mut self) -> PResult<StmtKind> {
        self.expect("for")?;
        self.expect("(")?;
        // enhanced for: [final] Type name :
        let m = self.mark();
        self.modifiers()?;
        if let Some(ty) = self.try_type() {
            if self.at_ident() && self.peek_nth_text(1) == ":" {
                let name = self.advance();
                self.advance();
                let iterable = self.expression()?;
                self.expect(")")?;
                let body = self.sub_statement()?;
                return Ok(StmtKind::ForEach { ty, name, iterable, body });
            }
        }
        self.reset(m);
        let mut init = Vec::new();
        if !self.at(";") {
            let line = self.line();
            let m = self.mark();
            let had_mods = {
                let mods = self.modifiers()?;
                mods.is_final || !mods.annotations.is_empty()
            };
            if had_mods {
                let kind = self.local_var_decl()?;
                init.push(Stmt { kind, line, end_line: self.prev_end_line() });
            } else {
                self.reset(m);
                if let Some(kind) = self.try_local_var_decl()? {
                    init.push(Stmt { kind, line, end_line: self.prev_end_line() });
                } else {
                    loop {
                        let line = self.line();
                        let e = self.expression()?;
                        init.push(Stmt { kind: StmtKind::Expr(e), line, end_line: self.prev_end_line() });
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") { None } else { Some(self.expression()?) };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            loop {
                update.push(self.expression()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.sub_statement()?;
        Ok(StmtKind::For { init, cond, update, body })
    }

    fn switch_body(&mut self) -> PResult<Vec<SwitchCase>> {
        self.expect("{")?;
        let mut cases: Vec<SwitchCase> = Vec::new();
        while !self.at("}") {
            let line = self.line();
            let (labels, is_default) = if self.eat("default") {
                (Vec::new(), true)
            } else if self.eat("case") {
                let mut labels = vec![self.ternary()?];
                while self.eat(",") {
                    labels.push(self.ternary()?);
                }
                (labels, false)
            } else {
                return Err(self.error("expected `case` or `default`"));
            };
            if self.eat("->") {
                let body_line = self.line();
                let body = if self.at("{") {
                    let b = self.block()?;
                    vec![Stmt { kind: StmtKind::Block(b), line: body_line, end_line: self.prev_end_line() }]
                } else if self.at("throw") {
                    vec![self.statement()?]
                } else {
                    let e = self.expression()?;
                    self.expect(";")?;
                    vec![Stmt { kind: StmtKind::Expr(e), line: body_line, end_line: self.prev_end_line() }]
                };
                cases.push(SwitchCase { labels, is_default, arrow: true, body, line });
            } else {
                self.expect(":")?;
                let mut body = Vec::new();
                while !matches!(self.peek_text(), "case" | "default" | "}")
                    || (self.peek_text() == "default" && self.peek_nth_text(1) != ":" && self.peek_nth_text(1) != "->")
                {
                    if self.at_eof() {
                        return Err(self.error("expected `}`"));
                    }
                    body.push(self.statement()?);
                }
                cases.push(SwitchCase { labels, is_default, arrow: false, body, line });
            }
        }
        self.expect("}")?;
        Ok(cases)
    }

    fn try_statement(&mut self) -> PResult<StmtKind> {
        self.expect("try")?;
        let mut resources = Vec::new();
        if self.eat("(") {
            while !self.at(")") {
                let line = self.line();
                let m = self.mark();
                let mods = self.modifiers()?;
                let kind = if mods.is_final {
                    self.local_var_decl()?
                } else {
                    self.reset(m);
                    match self.try_local_var_decl()? {
                        Some(k) => k,
                        None => StmtKind::Expr(self.expression()?),
                    }
                };
                resources.push(Stmt { kind, line, end_line: self.prev_end_line() });
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.at("catch") {
            let line = self.line();
            self.advance();
            self.expect("(")?;
            self.modifiers()?;
            let mut types = vec![self.type_ref()?];
            while self.eat("|") {
                types.push(self.type_ref()?);
            }
            let name = self.ident()?;
            self.expect(")")?;
            let body = self.block()?;
            catches.push(CatchClause { types, name, body, line });
        }
        let finally = if self.eat("finally") { Some(self.block()?) } else { None };
        if catches.is_empty() && finally.is_none() && resources.is_empty() {
            return Err(self.error("expected `catch` or `finally`"));
        }
        Ok(StmtKind::Try { resources, body, catches, finally })
    }

    // ---- expressions ---------------------------------------------------

    fn expression(&mut self) -> PResult<Expr> {
        if let Some(lambda) = self.try_lambda()? {
            return Ok(lambda);
        }
        let lhs = self.ternary()?;
        if ASSIGN_OPS.contains(&self.peek_text()) && self.peek_kind() == Some(TokenKind::Operator) {
            let op = self.advance();
            let value = self.expression()?;
            return Ok(Expr::Assign { op, target: Box::new(lhs), value: Box::new(value) });
        }
        Ok(lhs)
    }

    fn try_lambda(&mut self) -> PResult<Option<Expr>> {
        let params = if self.at_ident() && self.peek_nth_text(1) == "->" {
            vec![self.advance()]
        } else if self.at("(") {
            let Some(close) = self.matching_paren(self.pos) else {
                return Ok(None);
            };
            if self.tokens.get(close + 1).map(|t| t.text.as_str()) != Some("->") {
                return Ok(None);
            }
            let params = self.tokens[self.pos + 1..close]
                .iter()
                .enumerate()
                .filter(|(i, t)| {
                    t.kind == TokenKind::Identifier && {
                        let next = self.tokens.get(self.pos + 2 + i).map(|n| n.text.as_str());
                        matches!(next, Some(",") | Some(")"))
                    }
                })
                .map(|(_, t)| t.text.clone())
                .collect();
            self.pos = close + 1;
            self.gt_taken = 0;
            params
        } else {
            return Ok(None);
        };
        self.expect("->")?;
        let body = if self.at("{") {
            LambdaBody::Block(self.block()?)
        } else {
            LambdaBody::Expr(Box::new(self.expression()?))
        };
        Ok(Some(Expr::Lambda { params, body }))
    }

    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.tokens.iter().enumerate().skip(open) {
            if t.kind == TokenKind::Literal || t.kind == TokenKind::Comment {
                continue;
            }
            match t.text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                ";" | "{" | "}" => return None,
                _ => {}
            }
        }
        None
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(0)?;
        if self.at("?") {
            self.advance();
            let then = if let Some(l) = self.try_lambda()? { l } else { self.ternary()? };
            self.expect(":")?;
            let otherwise = if let Some(l) = self.try_lambda()? { l } else { self.ternary()? };
            return Ok(Expr::Ternary { cond: Box::new(cond), then: Box::new(then), otherwise: Box::new(otherwise) });
        }
        Ok(cond)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.peek_kind() == Some(TokenKind::Keyword) && self.peek_text() == "instanceof" {
                if min_prec > 9 {
                    break;
                }
                self.advance();
                self.eat("final");
                let ty = self.type_ref()?;
                let binding = if self.at_ident() { Some(self.advance()) } else { None };
                lhs = Expr::InstanceOf { expr: Box::new(lhs), ty, binding };
                continue;
            }
            if self.peek_kind() != Some(TokenKind::Operator) {
                break;
            }
            let op = self.peek_text().to_string();
            let Some(prec) = binary_precedence(&op) else { break };
            if prec < min_prec {
                break;
            }
            self.advance();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let text = self.peek_text().to_string();
        if self.peek_kind() == Some(TokenKind::Operator) && matches!(text.as_str(), "+" | "-" | "!" | "~" | "++" | "--") {
            self.advance();
            let operand = self.unary()?;
            return Ok(Expr::Unary { op: text, operand: Box::new(operand), postfix: false });
        }
        if text == "(" {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        let mut e = self.primary()?;
        e = self.selectors(e)?;
        while self.peek_kind() == Some(TokenKind::Operator) && matches!(self.peek_text(), "++" | "--") {
            let op = self.advance();
            e = Expr::Unary { op, operand: Box::new(e), postfix: true };
        }
        Ok(e)
    }

    fn try_cast(&mut self) -> PResult<Option<Expr>> {
        let m = self.mark();
        self.expect("(")?;
        let primitive = self.peek_kind() == Some(TokenKind::Keyword) && PRIMITIVES.contains(&self.peek_text());
        if !primitive && !self.at_ident() && !self.at("@") {
            self.reset(m);
            return Ok(None);
        }
        let Some(ty) = self.try_type() else {
            self.reset(m);
            return Ok(None);
        };
        while self.eat("&") {
            if self.try_type().is_none() {
                self.reset(m);
                return Ok(None);
            }
        }
        if !self.eat(")") {
            self.reset(m);
            return Ok(None);
        }
        let next_ok = if primitive && ty.dims == 0 {
            // `(int) -x` is a cast; `(a) - x` is not.
            !self.at_eof() && !matches!(self.peek_text(), ")" | ";" | "," | "." | "]" | "}")
        } else {
            match self.peek_kind() {
                Some(TokenKind::Identifier) | Some(TokenKind::Literal) => true,
                Some(TokenKind::Keyword) => {
                    matches!(self.peek_text(), "this" | "super" | "new" | "switch") || PRIMITIVES.contains(&self.peek_text())
                }
                Some(TokenKind::Operator) => matches!(self.peek_text(), "!" | "~"),
                Some(TokenKind::Separator) => self.peek_text() == "(",
                _ => false,
            }
        };
        if !next_ok {
            self.reset(m);
            return Ok(None);
        }
        let expr = match self.try_lambda()? {
            Some(l) => l,
            None => self.unary()?,
        };
        Ok(Some(Expr::Cast { ty, expr: Box::new(expr) }))
    }

    fn primary(&mut self) -> PResult<Expr> {
        let kind = self.peek_kind();
        let text = self.peek_text().to_string();
        match kind {
            None => Err(self.error("expected expression")),
            Some(TokenKind::Literal) => {
                self.advance();
                Ok(Expr::Literal(text))
            }
            Some(TokenKind::Identifier) => {
                self.advance();
                if self.at("(") {
                    let args = self.arguments()?;
                    return Ok(Expr::MethodCall { target: None, name: text, args });
                }
                Ok(Expr::Name(text))
            }
            Some(TokenKind::Separator) if text == "(" => {
                self.advance();
                let e = self.expression()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(TokenKind::Keyword) => match text.as_str() {
                "this" | "super" => {
                    self.advance();
                    if self.at("(") {
                        let args = self.arguments()?;
                        return Ok(Expr::MethodCall { target: None, name: text, args });
                    }
                    Ok(if text == "this" { Expr::This } else { Expr::Super })
                }
                "new" => self.creator(),
                "switch" => {
                    self.advance();
                    let selector = self.paren_expr()?;
                    let cases = self.switch_body()?;
                    Ok(Expr::Switch { selector: Box::new(selector), cases })
                }
                t if PRIMITIVES.contains(&t) => {
                    // int.class, int[].class, int[]::new
                    let ty = self.type_ref()?;
                    if self.eat("::") {
                        let name = self.advance();
                        return Ok(Expr::MethodRef { target: Box::new(Expr::ClassLit(ty)), name });
                    }
                    self.expect(".")?;
                    self.expect("class")?;
                    Ok(Expr::ClassLit(ty))
                }
                _ => Err(self.error("expected expression")),
            },
            _ => Err(self.error("expected expression")),
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expression()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn creator(&mut self) -> PResult<Expr> {
        self.expect("new")?;
        if self.at("<") {
            self.type_args()?;
        }
        self.skip_annotations()?;
        // element type without dims
        let name = if self.peek_kind() == Some(TokenKind::Keyword) && PRIMITIVES.contains(&self.peek_text()) {
            self.advance()
        } else {
            let mut name = self.ident()?;
            loop {
                if self.at("<") {
                    self.type_args()?;
                }
                if self.at(".") && self.peek_nth_kind(1) == Some(TokenKind::Identifier) {
                    self.advance();
                    name.push('.');
                    name.push_str(&self.advance());
                } else {
                    break;
                }
            }
            name
        };
        if self.at("[") {
            let mut dims = Vec::new();
            let mut rank = 0;
            while self.at("[") {
                self.advance();
                rank += 1;
                if self.eat("]") {
                    continue;
                }
                dims.push(self.expression()?);
                self.expect("]")?;
            }
            let init = if self.at("{") {
                match self.array_init()? {
                    Expr::ArrayInit(items) => Some(items),
                    _ => None,
                }
            } else {
                None
            };
            return Ok(Expr::NewArray { ty: TypeRef { name, dims: rank }, dims, init });
        }
        let args = self.arguments()?;
        let body = if self.at("{") {
            self.expect("{")?;
            let members = self.class_body_members("", TypeKind::Class)?;
            self.expect("}")?;
            Some(members)
        } else {
            None
        };
        Ok(Expr::New { ty: TypeRef::named(name), args, body })
    }

    fn selectors(&mut self, mut e: Expr) -> PResult<Expr> {
        loop {
            if self.at(".") {
                self.advance();
                if self.at("<") {
                    self.type_args()?;
                }
                if self.at("new") {
                    // inner class creation: outer.new Inner()
                    let created = self.creator()?;
                    e = created;
                    continue;
                }
                if self.at("class") {
                    self.advance();
                    let name = e.as_qualified_name().ok_or_else(|| self.error("bad class literal"))?;
                    e = Expr::ClassLit(TypeRef::named(name));
                    continue;
                }
                if self.at("this") || self.at("super") {
                    // Outer.this / Outer.super
                    let kw = self.advance();
                    if self.at("(") {
                        let args = self.arguments()?;
                        e = Expr::MethodCall { target: Some(Box::new(e)), name: kw, args };
                    } else {
                        e = if kw == "this" { Expr::This } else { Expr::Super };
                    }
                    continue;
                }
                let name = self.ident()?;
                if self.at("(") {
                    let args = self.arguments()?;
                    e = Expr::MethodCall { target: Some(Box::new(e)), name, args };
                } else {
                    e = Expr::FieldAccess { target: Box::new(e), name };
                }
            } else if self.at("[") {
                if self.peek_nth_text(1) == "]" {
                    // array type in a class literal or method ref: String[].class
                    let base = e.as_qualified_name().ok_or_else(|| self.error("unexpected `[`"))?;
                    let mut dims = 0;
                    while self.at("[") && self.peek_nth_text(1) == "]" {
                        self.advance();
                        self.advance();
                        dims += 1;
                    }
                    let ty = TypeRef { name: base, dims };
                    if self.eat("::") {
                        let name = self.advance();
                        e = Expr::MethodRef { target: Box::new(Expr::ClassLit(ty)), name };
                    } else {
                        self.expect(".")?;
                        self.expect("class")?;
                        e = Expr::ClassLit(ty);
                    }
                    continue;
                }
                self.advance();
                let index = self.expression()?;
                self.expect("]")?;
                e = Expr::ArrayAccess { array: Box::new(e), index: Box::new(index) };
            } else if self.at("::") {
                self.advance();
                if self.at("<") {
                    self.type_args()?;
                }
                let name = if self.at("new") { self.advance() } else { self.ident()? };
                e = Expr::MethodRef { target: Box::new(e), name };
            } else if self.at("<") && self.generic_type_before_method_ref() {
                // List<String>::new
                self.type_args()?;
            } else {
                break;
            }
        }
        Ok(e)
    }

    /// Looks ahead for `< ... > ::` to tell a parameterized method-reference
    /// target from a less-than comparison.
    fn generic_type_before_method_ref(&self) -> bool {
        let mut depth = 0i32;
        for t in &self.tokens[self.pos..] {
            match t.text.as_str() {
                "<" => depth += 1,
                ">" | ">>" | ">>>" => {
                    depth -= t.text.len() as i32;
                    if depth <= 0 {
                        return false;
                    }
                }
                "::" if depth == 0 => return true,
                "," | "?" | "." | "[" | "]" | "&" => {}
                _ if t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword => {}
                _ => return false,
            }
            if depth == 0 {
                break;
            }
        }
        false
    }
}

fn is_expression_continuation(next: &str) -> bool {
    matches!(
        next,
        "=" | "(" | "." | "[" | "++" | "--" | "+=" | "-=" | "*=" | "/=" | ";" | "," | ")" | "->" | "::"
    )
}

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" => 9,
        "<<" | ">>" | ">>>" => 10,
        "+" | "-" => 11,
        "*" | "/" | "%" => 12,
        _ => return None,
    })
}
