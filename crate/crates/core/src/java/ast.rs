//! Syntax tree for the supported Java subset.
//!
//! Type arguments are parsed but dropped; annotations survive only as names
//! on [`Modifiers`].

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompilationUnit {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub types: Vec<TypeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    /// Dotted path without the trailing `.*`.
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
    Annotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    #[default]
    Package,
    Private,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Modifiers {
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_abstract: bool,
    pub is_final: bool,
    pub is_default: bool,
    pub annotations: Vec<String>,
}

impl Modifiers {
    pub fn has_annotation(&self, name: &str) -> bool {
        self.annotations.iter().any(|a| a == name || a.ends_with(&format!(".{name}")))
    }
}

/// A type use with its arguments erased: `java.util.Map<K, V>[]` becomes
/// `name = "java.util.Map", dims = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeRef {
    pub name: String,
    pub dims: usize,
}

impl TypeRef {
    pub fn named(name: impl Into<String>) -> Self {
        TypeRef { name: name.into(), dims: 0 }
    }

    pub fn is_primitive(&self) -> bool {
        matches!(
            self.name.as_str(),
            "boolean" | "byte" | "char" | "short" | "int" | "long" | "float" | "double" | "void"
        )
    }

    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub kind: TypeKind,
    pub name: String,
    pub modifiers: Modifiers,
    /// Superclass for classes; super-interfaces for interfaces.
    pub extends: Vec<TypeRef>,
    pub implements: Vec<TypeRef>,
    pub enum_constants: Vec<EnumConstant>,
    pub members: Vec<Member>,
    pub start_line: usize,
    pub end_line: usize,
}

impl TypeDecl {
    pub fn methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Method(m) => Some(m),
            _ => None,
        })
    }

    pub fn fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Field(f) => Some(f),
            _ => None,
        })
    }

    pub fn nested_types(&self) -> impl Iterator<Item = &TypeDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Type(t) => Some(t),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumConstant {
    pub name: String,
    pub args: Vec<Expr>,
    pub body: Option<Vec<Member>>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Field(FieldDecl),
    Method(MethodDecl),
    Initializer { is_static: bool, body: Block },
    Type(TypeDecl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub modifiers: Modifiers,
    pub ty: TypeRef,
    pub declarators: Vec<VarDeclarator>,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDeclarator {
    pub name: String,
    pub dims: usize,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: TypeRef,
    pub varargs: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub modifiers: Modifiers,
    pub name: String,
    pub is_constructor: bool,
    /// `None` for constructors.
    pub return_type: Option<TypeRef>,
    pub params: Vec<Param>,
    pub throws: Vec<TypeRef>,
    pub body: Option<Block>,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Block(Block),
    LocalVar { ty: TypeRef, declarators: Vec<VarDeclarator> },
    LocalClass(Box<TypeDecl>),
    Expr(Expr),
    If { cond: Expr, then: Box<Stmt>, otherwise: Option<Box<Stmt>> },
    While { cond: Expr, body: Box<Stmt> },
    DoWhile { body: Box<Stmt>, cond: Expr },
    For { init: Vec<Stmt>, cond: Option<Expr>, update: Vec<Expr>, body: Box<Stmt> },
    ForEach { ty: TypeRef, name: String, iterable: Expr, body: Box<Stmt> },
    Switch { selector: Expr, cases: Vec<SwitchCase> },
    Try { resources: Vec<Stmt>, body: Block, catches: Vec<CatchClause>, finally: Option<Block> },
    Return(Option<Expr>),
    Break(Option<String>),
    Continue(Option<String>),
    Throw(Expr),
    Yield(Expr),
    Synchronized { lock: Expr, body: Block },
    Labeled { label: String, body: Box<Stmt> },
    Assert { cond: Expr, message: Option<Expr> },
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchCase {
    /// Empty for `default`.
    pub labels: Vec<Expr>,
    pub is_default: bool,
    pub arrow: bool,
    pub body: Vec<Stmt>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub types: Vec<TypeRef>,
    pub name: String,
    pub body: Block,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaBody {
    Expr(Box<Expr>),
    Block(Block),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(String),
    Name(String),
    This,
    Super,
    FieldAccess { target: Box<Expr>, name: String },
    /// `this(..)` / `super(..)` constructor calls use the names `this` / `super`.
    MethodCall { target: Option<Box<Expr>>, name: String, args: Vec<Expr> },
    New { ty: TypeRef, args: Vec<Expr>, body: Option<Vec<Member>> },
    NewArray { ty: TypeRef, dims: Vec<Expr>, init: Option<Vec<Expr>> },
    ArrayInit(Vec<Expr>),
    Assign { op: String, target: Box<Expr>, value: Box<Expr> },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr> },
    Unary { op: String, operand: Box<Expr>, postfix: bool },
    Ternary { cond: Box<Expr>, then: Box<Expr>, otherwise: Box<Expr> },
    Cast { ty: TypeRef, expr: Box<Expr> },
    InstanceOf { expr: Box<Expr>, ty: TypeRef, binding: Option<String> },
    ArrayAccess { array: Box<Expr>, index: Box<Expr> },
    Lambda { params: Vec<String>, body: LambdaBody },
    MethodRef { target: Box<Expr>, name: String },
    ClassLit(TypeRef),
    Switch { selector: Box<Expr>, cases: Vec<SwitchCase> },
}

impl Expr {
    /// `a.b.c` style chains of plain names, as a dotted string.
    pub fn as_qualified_name(&self) -> Option<String> {
        match self {
            Expr::Name(n) => Some(n.clone()),
            Expr::FieldAccess { target, name } => target.as_qualified_name().map(|t| format!("{t}.{name}")),
            _ => None,
        }
    }

    /// Calls `f` on this expression and every sub-expression, pre-order.
    /// Does not descend into lambda block bodies or anonymous class bodies.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Literal(_) | Expr::Name(_) | Expr::This | Expr::Super | Expr::ClassLit(_) => {}
            Expr::FieldAccess { target, .. } => target.walk(f),
            Expr::MethodCall { target, args, .. } => {
                if let Some(t) = target {
                    t.walk(f);
                }
                args.iter().for_each(|a| a.walk(f));
            }
            Expr::New { args, .. } => args.iter().for_each(|a| a.walk(f)),
            Expr::NewArray { dims, init, .. } => {
                dims.iter().for_each(|a| a.walk(f));
                init.iter().flatten().for_each(|a| a.walk(f));
            }
            Expr::ArrayInit(items) => items.iter().for_each(|a| a.walk(f)),
            Expr::Assign { target, value, .. } => {
                target.walk(f);
                value.walk(f);
            }
            Expr::Binary { lhs, rhs, .. } => {
                lhs.walk(f);
                rhs.walk(f);
            }
            Expr::Unary { operand, .. } => operand.walk(f),
            Expr::Ternary { cond, then, otherwise } => {
                cond.walk(f);
                then.walk(f);
                otherwise.walk(f);
            }
            Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => expr.walk(f),
            Expr::ArrayAccess { array, index } => {
                array.walk(f);
                index.walk(f);
            }
            Expr::Lambda { body, .. } => {
                if let LambdaBody::Expr(e) = body {
                    e.walk(f);
                }
            }
            Expr::MethodRef { target, .. } => target.walk(f),
            Expr::Switch { selector, .. } => selector.walk(f),
        }
    }
}

impl Stmt {
    /// Direct child statements, in source order.
    pub fn children(&self) -> Vec<&Stmt> {
        match &self.kind {
            StmtKind::Block(b) => b.stmts.iter().collect(),
            StmtKind::If { then, otherwise, .. } => {
                let mut v = vec![then.as_ref()];
                if let Some(o) = otherwise {
                    v.push(o);
                }
                v
            }
            StmtKind::While { body, .. }
            | StmtKind::DoWhile { body, .. }
            | StmtKind::ForEach { body, .. }
            | StmtKind::Labeled { body, .. } => vec![body],
            StmtKind::For { init, body, .. } => init.iter().chain(std::iter::once(body.as_ref())).collect(),
            StmtKind::Switch { cases, .. } => cases.iter().flat_map(|c| c.body.iter()).collect(),
            StmtKind::Try { resources, body, catches, finally } => resources
                .iter()
                .chain(body.stmts.iter())
                .chain(catches.iter().flat_map(|c| c.body.stmts.iter()))
                .chain(finally.iter().flat_map(|f| f.stmts.iter()))
                .collect(),
            StmtKind::Synchronized { body, .. } => body.stmts.iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Expressions held directly by this statement (not by children).
    pub fn expressions(&self) -> Vec<&Expr> {
        match &self.kind {
            StmtKind::LocalVar { declarators, .. } => declarators.iter().filter_map(|d| d.init.as_ref()).collect(),
            StmtKind::Expr(e) | StmtKind::Throw(e) | StmtKind::Yield(e) => vec![e],
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => vec![cond],
            StmtKind::For { cond, update, .. } => cond.iter().chain(update.iter()).collect(),
            StmtKind::ForEach { iterable, .. } => vec![iterable],
            StmtKind::Switch { selector, cases } => {
                std::iter::once(selector).chain(cases.iter().flat_map(|c| c.labels.iter())).collect()
            }
            StmtKind::Return(e) => e.iter().collect(),
            StmtKind::Synchronized { lock, .. } => vec![lock],
            StmtKind::Assert { cond, message } => std::iter::once(cond).chain(message.iter()).collect(),
            _ => Vec::new(),
        }
    }

    /// Visits this statement and all nested statements, pre-order, including
    /// statements inside lambda block bodies and switch expressions.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Stmt)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
        for e in self.expressions() {
            walk_nested_stmts(e, f);
        }
    }
}

/// Statements that hide inside expressions: lambda blocks and switch
/// expression arms.
pub fn walk_nested_stmts<'a>(expr: &'a Expr, f: &mut dyn FnMut(&'a Stmt)) {
    expr.walk(&mut |e| match e {
        Expr::Lambda { body: LambdaBody::Block(b), .. } => b.stmts.iter().for_each(|s| s.walk(f)),
        Expr::Switch { cases, .. } => cases.iter().flat_map(|c| c.body.iter()).for_each(|s| s.walk(f)),
        _ => {}
    });
}

/// Every expression appearing in `block`, including those nested in lambda
/// blocks and switch-expression arms.
pub fn block_expressions(block: &Block) -> Vec<&Expr> {
    let mut out = Vec::new();
    for s in &block.stmts {
        s.walk(&mut |st| {
            for e in st.expressions() {
                e.walk(&mut |x| out.push(x));
            }
        });
    }
    out
}
