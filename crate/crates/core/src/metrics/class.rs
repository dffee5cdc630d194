//! Class-level size, coupling, visibility and inheritance metrics.
//!
//! Coupling rules:
//! - CBO counts distinct project types referenced through fields, parameters,
//!   return types, locals, instantiations, casts, static calls and call receivers;
//! - RFC is NOM plus the number of distinct invoked methods;
//! - FANOUT counts distinct project classes whose methods or constructors are called, FANIN inverts it;
//! - DEPENDS counts every referenced type including supertypes and unresolved names, DEPENDSBY inverts the project part;
//! - ATFD counts distinct foreign fields read directly or through accessor/mutator calls;
//! - LOCM is LCOM1, the number of method pairs sharing no field of the class.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use super::index::ProjectIndex;
use super::submetrics::all_sub_metrics;
use crate::java::ast::*;

pub const CLASS_SCALARS: [&str; 31] = [
    "CSLOC", "CSNOST", "CSNOSM", "CSNOSA", "CSNOIM", "CSNOIA", "CSNOM", "CSNOMNAMM", "CSNOCON", "CSNOMCALL", "CSDAC",
    "CSATFD", "CSLOCM", "CSCBO", "CSRFC", "CSFANIN", "CSFANOUT", "CSDEPENDS", "CSDEPENDSBY", "CSCFNAMM", "CSNODM",
    "CSNOPM", "CSNOPRM", "CSNOPLM", "CSNOAMM", "CSDIT", "CSNOC", "CSNOP", "CSNIM", "CSNMO", "CSNOII",
];

/// Reference and call information gathered from one class body.
#[derive(Debug, Clone, Default)]
pub struct ClassFacts {
    /// Project classes referenced (CBO), excluding the class itself.
    pub coupled: BTreeSet<usize>,
    /// Every referenced type: resolved project ids or raw external names.
    pub depends: BTreeSet<String>,
    pub depends_on_project: BTreeSet<usize>,
    pub calls_out: BTreeSet<usize>,
    pub method_calls: u64,
    pub invoked: BTreeSet<String>,
    pub foreign_data: BTreeSet<String>,
    pub foreign_non_accessors: BTreeSet<String>,
    /// Fields of the class used by each non-constructor method.
    pub field_use: Vec<BTreeSet<String>>,
    pub dac: u64,
}

struct Env<'a> {
    index: &'a ProjectIndex,
    class: usize,
    vars: HashMap<String, String>,
    own_fields: HashSet<String>,
}

impl<'a> Env<'a> {
    fn new(index: &'a ProjectIndex, class: usize) -> Self {
        let own_fields = index
            .class(class)
            .decl
            .fields()
            .flat_map(|f| f.declarators.iter().map(|d| d.name.clone()))
            .collect();
        Env { index, class, vars: HashMap::new(), own_fields }
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        self.index.resolve(name, self.class)
    }

    /// Project class of an expression's static type, when it can be told.
    fn type_of(&self, e: &Expr) -> Option<usize> {
        match e {
            Expr::This => Some(self.class),
            Expr::Super => self.index.superclass(self.class),
            Expr::Name(n) => {
                if let Some(t) = self.vars.get(n) {
                    return if t.is_empty() { None } else { self.resolve(t) };
                }
                if let Some((owner, t)) = self.index.find_field(self.class, n) {
                    return self.index.resolve(&t.name, owner);
                }
                self.resolve(n)
            }
            Expr::FieldAccess { target, name } => {
                if let Some(owner) = self.type_of(target) {
                    if let Some((k, t)) = self.index.find_field(owner, name) {
                        return self.index.resolve(&t.name, k);
                    }
                    if let Some(&n) = self.index.class(owner).nested.iter().find(|&&n| self.index.class(n).decl.name == *name) {
                        return Some(n);
                    }
                }
                e.as_qualified_name().and_then(|q| self.index.get(&q).or_else(|| self.resolve(&q)))
            }
            Expr::MethodCall { target, name, args } => {
                let owner = match target {
                    Some(t) => self.type_of(t)?,
                    None => self.class,
                };
                let (k, m, _) = self.index.find_method(owner, name, args.len())?;
                let rt = m.return_type.as_ref()?;
                if rt.dims > 0 {
                    return None;
                }
                self.index.resolve(&rt.name, k)
            }
            Expr::New { ty, .. } | Expr::Cast { ty, .. } => self.resolve(&ty.name),
            _ => None,
        }
    }
}

fn collect_vars(body: &Block, params: &[Param], vars: &mut HashMap<String, String>) {
    for p in params {
        vars.insert(p.name.clone(), type_key(&p.ty));
    }
    let add_lambda_params = |e: &Expr, vars: &mut HashMap<String, String>| {
        e.walk(&mut |x| match x {
            Expr::Lambda { params, .. } => {
                for p in params {
                    vars.insert(p.clone(), String::new());
                }
            }
            Expr::InstanceOf { ty, binding: Some(b), .. } => {
                vars.insert(b.clone(), type_key(ty));
            }
            _ => {}
        });
    };
    for s in &body.stmts {
        s.walk(&mut |st| {
            match &st.kind {
                StmtKind::LocalVar { ty, declarators } => {
                    for d in declarators {
                        let key = if d.dims > 0 { String::new() } else { type_key(ty) };
                        vars.insert(d.name.clone(), key);
                    }
                }
                StmtKind::ForEach { ty, name, .. } => {
                    vars.insert(name.clone(), type_key(ty));
                }
                StmtKind::Try { catches, .. } => {
                    for c in catches {
                        let key = if c.types.len() == 1 { type_key(&c.types[0]) } else { String::new() };
                        vars.insert(c.name.clone(), key);
                    }
                }
                _ => {}
            }
            for e in st.expressions() {
                add_lambda_params(e, vars);
            }
        });
    }
}

/// Arrays and primitives have no project class.
fn type_key(t: &TypeRef) -> String {
    if t.dims > 0 || t.is_primitive() {
        String::new()
    } else {
        t.name.clone()
    }
}

/// Types named in statements of a body (locals, loop variables, catch types).
fn statement_types(body: &Block, out: &mut Vec<TypeRef>) {
    for s in &body.stmts {
        s.walk(&mut |st| match &st.kind {
            StmtKind::LocalVar { ty, .. } | StmtKind::ForEach { ty, .. } => out.push(ty.clone()),
            StmtKind::Try { catches, .. } => out.extend(catches.iter().flat_map(|c| c.types.iter().cloned())),
            _ => {}
        });
    }
}

fn expression_types(e: &Expr, out: &mut Vec<TypeRef>) {
    e.walk(&mut |x| match x {
        Expr::New { ty, .. } | Expr::NewArray { ty, .. } | Expr::Cast { ty, .. } | Expr::ClassLit(ty) => {
            out.push(ty.clone())
        }
        Expr::InstanceOf { ty, .. } => out.push(ty.clone()),
        _ => {}
    });
}

pub fn gather_facts(index: &ProjectIndex, c: usize) -> ClassFacts {
    let info = index.class(c);
    let decl = &info.decl;
    let mut facts = ClassFacts::default();
    let mut env = Env::new(index, c);
    let mut referenced: Vec<TypeRef> = Vec::new();

    for f in decl.fields() {
        referenced.push(f.ty.clone());
        if f.ty.dims == 0 && index.resolve(&f.ty.name, c).is_some_and(|d| d != c) {
            facts.dac += f.declarators.len() as u64;
        }
    }

    // (body, params, is_method) for every executable region
    let mut regions: Vec<(Option<&Block>, &[Param], Option<&MethodDecl>)> = Vec::new();
    for m in decl.methods() {
        referenced.extend(m.params.iter().map(|p| p.ty.clone()));
        referenced.extend(m.return_type.iter().cloned());
        referenced.extend(m.throws.iter().cloned());
        regions.push((m.body.as_ref(), &m.params, Some(m)));
    }
    for member in &decl.members {
        if let Member::Initializer { body, .. } = member {
            regions.push((Some(body), &[], None));
        }
    }
    let field_inits: Vec<&Expr> =
        decl.fields().flat_map(|f| f.declarators.iter().filter_map(|d| d.init.as_ref())).collect();

    let mut field_use: Vec<BTreeSet<String>> = Vec::new();
    let analyse = |env: &mut Env, exprs: &[&Expr], facts: &mut ClassFacts, referenced: &mut Vec<TypeRef>| {
        let mut used = BTreeSet::new();
        for e in exprs {
            expression_types(e, referenced);
            e.walk(&mut |x| analyse_expr(env, x, facts, &mut used));
        }
        used
    };

    for (body, params, method) in regions {
        env.vars.clear();
        let Some(body) = body else {
            if method.is_some_and(|m| !m.is_constructor) {
                field_use.push(BTreeSet::new());
            }
            continue;
        };
        collect_vars(body, params, &mut env.vars);
        statement_types(body, &mut referenced);
        let exprs = block_expressions(body);
        let used = analyse(&mut env, &exprs, &mut facts, &mut referenced);
        if method.is_some_and(|m| !m.is_constructor) {
            field_use.push(used);
        }
    }
    env.vars.clear();
    analyse(&mut env, &field_inits, &mut facts, &mut referenced);
    facts.field_use = field_use;

    for t in &referenced {
        if t.is_primitive() {
            continue;
        }
        match index.resolve(&t.name, c) {
            Some(d) if d == c => {}
            Some(d) => {
                facts.coupled.insert(d);
                facts.depends.insert(index.class(d).id.clone());
                facts.depends_on_project.insert(d);
            }
            None => {
                facts.depends.insert(t.name.clone());
            }
        }
    }
    for t in decl.extends.iter().chain(decl.implements.iter()) {
        match index.resolve(&t.name, c) {
            Some(d) if d == c => {}
            Some(d) => {
                facts.depends.insert(index.class(d).id.clone());
                facts.depends_on_project.insert(d);
            }
            None => {
                facts.depends.insert(t.name.clone());
            }
        }
    }
    for &d in &facts.calls_out.clone() {
        facts.coupled.insert(d);
        facts.depends.insert(index.class(d).id.clone());
        facts.depends_on_project.insert(d);
    }
    facts
}

fn analyse_expr(env: &Env, x: &Expr, facts: &mut ClassFacts, used: &mut BTreeSet<String>) {
    let c = env.class;
    let index = env.index;
    match x {
        Expr::Name(n) if env.own_fields.contains(n) && !env.vars.contains_key(n) => {
            used.insert(n.clone());
        }
        Expr::FieldAccess { target, name } => {
            if matches!(**target, Expr::This) && env.own_fields.contains(name) {
                used.insert(name.clone());
            } else if let Some(owner) = env.type_of(target) {
                if owner != c {
                    if let Some((k, _)) = index.find_field(owner, name) {
                        if k != c {
                            facts.foreign_data.insert(format!("{}#{name}", index.class(k).id));
                        }
                    }
                }
            }
        }
        Expr::MethodCall { target, name, args } => {
            facts.method_calls += 1;
            if target.is_none() && (name == "this" || name == "super") {
                return;
            }
            let receiver = match target {
                Some(t) => env.type_of(t),
                None => Some(c),
            };
            let key = match receiver.and_then(|r| index.find_method(r, name, args.len())) {
                Some((k, _, _)) => format!("{}#{name}/{}", index.class(k).id, args.len()),
                None => format!("?#{name}/{}", args.len()),
            };
            facts.invoked.insert(key);
            if let Some(r) = receiver {
                if r != c {
                    facts.calls_out.insert(r);
                    match index.find_method(r, name, args.len()) {
                        Some((k, m, rec)) if rec.is_accessor_or_mutator => {
                            let field = accessed_field(m).unwrap_or(name.as_str()).to_string();
                            facts.foreign_data.insert(format!("{}#{field}", index.class(k).id));
                        }
                        Some((k, _, _)) if k != c => {
                            facts.foreign_non_accessors.insert(format!("{}#{name}/{}", index.class(k).id, args.len()));
                        }
                        Some(_) => {}
                        None => {
                            facts.foreign_non_accessors.insert(format!("{}#{name}/{}", index.class(r).id, args.len()));
                        }
                    }
                }
            }
        }
        Expr::New { ty, .. } => {
            if let Some(d) = env.resolve(&ty.name) {
                if d != c {
                    facts.calls_out.insert(d);
                }
            }
        }
        _ => {}
    }
}

/// Field touched by an accessor (`return f;`) or mutator (`f = p;`).
fn accessed_field(m: &MethodDecl) -> Option<&str> {
    let stmt = m.body.as_ref()?.stmts.first()?;
    let e = match &stmt.kind {
        StmtKind::Return(Some(e)) => e,
        StmtKind::Expr(Expr::Assign { target, .. }) => target,
        _ => return None,
    };
    match e {
        Expr::Name(n) => Some(n),
        Expr::FieldAccess { name, .. } => Some(name),
        _ => None,
    }
}

/// Per-class metric maps (scalars then sub-metrics) for every class in the index.
pub fn compute_all_class_metrics(index: &ProjectIndex) -> Vec<Vec<(String, f64)>> {
    let facts: Vec<ClassFacts> = (0..index.classes.len()).into_par_iter().map(|c| gather_facts(index, c)).collect();
    let n = index.classes.len();
    let mut fan_in = vec![BTreeSet::new(); n];
    let mut depends_by = vec![BTreeSet::new(); n];
    for (c, f) in facts.iter().enumerate() {
        for &d in &f.calls_out {
            fan_in[d].insert(c);
        }
        for &d in &f.depends_on_project {
            depends_by[d].insert(c);
        }
    }
    let mut children = vec![0u64; n];
    for c in 0..n {
        for p in index.parents(c).into_iter().collect::<BTreeSet<_>>() {
            children[p] += 1;
        }
    }
    (0..n)
        .into_par_iter()
        .map(|c| {
            let inverse = Inverse { fan_in: fan_in[c].len() as u64, depends_by: depends_by[c].len() as u64, children: children[c] };
            class_metrics(index, c, &facts[c], inverse)
        })
        .collect()
}

/// Metrics of one class; builds facts for the whole project to obtain the
/// inverse relations.
pub fn compute_class_metrics(index: &ProjectIndex, class_id: &str) -> Option<Vec<(String, f64)>> {
    let c = index.get(class_id)?;
    Some(compute_all_class_metrics(index).swap_remove(c))
}

#[derive(Debug, Clone, Copy, Default)]
struct Inverse {
    fan_in: u64,
    depends_by: u64,
    children: u64,
}

fn class_metrics(index: &ProjectIndex, c: usize, facts: &ClassFacts, inv: Inverse) -> Vec<(String, f64)> {
    let info = index.class(c);
    let decl = &info.decl;
    let lines = &index.file_of(c).lines;
    let methods: Vec<_> = info.methods().filter(|(m, _)| !m.is_constructor).collect();
    let count = |pred: &dyn Fn(&MethodDecl) -> bool| methods.iter().filter(|(m, _)| pred(m)).count() as f64;
    let fields: Vec<(&FieldDecl, usize)> = decl.fields().map(|f| (f, f.declarators.len())).collect();

    let nost: u64 = info.records.iter().map(|r| r.nost).sum::<u64>()
        + decl
            .members
            .iter()
            .map(|m| match m {
                Member::Initializer { body, .. } => super::method::statement_count(body),
                _ => 0,
            })
            .sum::<u64>();
    let nom = methods.len() as f64;
    let namm = methods.iter().filter(|(_, r)| !r.is_accessor_or_mutator).count() as f64;

    let uses = &facts.field_use;
    let mut lcom = 0u64;
    for i in 0..uses.len() {
        for j in i + 1..uses.len() {
            if uses[i].is_disjoint(&uses[j]) {
                lcom += 1;
            }
        }
    }

    // inheritance
    let ancestors = index.ancestors(c);
    let inherited: BTreeSet<(String, usize)> = ancestors
        .iter()
        .flat_map(|&a| index.class(a).decl.methods())
        .filter(|m| !m.is_constructor && m.modifiers.visibility != Visibility::Private)
        .map(|m| (m.name.clone(), m.params.len()))
        .collect();
    let own: BTreeSet<(String, usize)> = methods.iter().map(|(m, _)| (m.name.clone(), m.params.len())).collect();
    let nim = inherited.difference(&own).count() as f64;
    let nmo = methods
        .iter()
        .filter(|(m, _)| m.modifiers.has_annotation("Override") || inherited.contains(&(m.name.clone(), m.params.len())))
        .count() as f64;
    let noii = if decl.kind == TypeKind::Interface { decl.extends.len() } else { decl.implements.len() } as f64;

    let scalars = [
        lines.count(decl.start_line, decl.end_line) as f64,
        nost as f64,
        count(&|m| m.modifiers.is_static),
        fields.iter().filter(|(f, _)| f.modifiers.is_static).map(|(_, n)| *n).sum::<usize>() as f64,
        count(&|m| !m.modifiers.is_static),
        fields.iter().filter(|(f, _)| !f.modifiers.is_static).map(|(_, n)| *n).sum::<usize>() as f64,
        nom,
        namm,
        info.methods().filter(|(m, _)| m.is_constructor).count() as f64,
        facts.method_calls as f64,
        facts.dac as f64,
        facts.foreign_data.len() as f64,
        lcom as f64,
        facts.coupled.len() as f64,
        nom + facts.invoked.len() as f64,
        inv.fan_in as f64,
        facts.calls_out.len() as f64,
        facts.depends.len() as f64,
        inv.depends_by as f64,
        facts.foreign_non_accessors.len() as f64,
        count(&|m| m.modifiers.visibility == Visibility::Package),
        count(&|m| m.modifiers.visibility == Visibility::Private),
        count(&|m| m.modifiers.visibility == Visibility::Protected),
        count(&|m| m.modifiers.visibility == Visibility::Public),
        nom - namm,
        index.depth_of_inheritance(c) as f64,
        inv.children as f64,
        (decl.extends.len() + decl.implements.len()) as f64,
        nim,
        nmo,
        noii,
    ];
    let mut out: Vec<(String, f64)> = CLASS_SCALARS.iter().map(|s| s.to_string()).zip(scalars).collect();
    out.extend(all_sub_metrics(&info.records));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(files: &[(&str, &str)]) -> ProjectIndex {
        let v: Vec<(String, String)> = files.iter().map(|(p, s)| (p.to_string(), s.to_string())).collect();
        ProjectIndex::build(&v).unwrap()
    }

    fn metric(index: &ProjectIndex, id: &str, name: &str) -> f64 {
        let all = compute_class_metrics(index, id).unwrap();
        all.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("missing {name}")).1
    }

    #[test]
    fn visibility_counts() {
        let p = project(&[("A.java", "class A { public void a() {} public void b() {} private void c() {} }")]);
        assert_eq!(metric(&p, "A", "CSNOPLM"), 2.0);
        assert_eq!(metric(&p, "A", "CSNOPM"), 1.0);
        assert_eq!(metric(&p, "A", "CSNOPRM"), 0.0);
        assert_eq!(metric(&p, "A", "CSNOM"), 3.0);
        assert_eq!(metric(&p, "A", "CSDIT"), 0.0);
        assert_eq!(metric(&p, "A", "CSNOP"), 0.0);
    }

    #[test]
    fn coupling_to_called_classes() {
        let p = project(&[
            ("p/A.java", "package p; class A { B b = new B(); void run(C c) { b.go(); c.go(); D.make(); } }"),
            ("p/B.java", "package p; class B { void go() {} }"),
            ("p/C.java", "package p; class C { void go() {} }"),
            ("p/D.java", "package p; class D { static D make() { return new D(); } }"),
        ]);
        assert_eq!(metric(&p, "p.A", "CSCBO"), 3.0);
        assert_eq!(metric(&p, "p.A", "CSFANOUT"), 3.0);
        assert_eq!(metric(&p, "p.B", "CSFANIN"), 1.0);
        assert_eq!(metric(&p, "p.A", "CSNOMCALL"), 3.0);
        assert_eq!(metric(&p, "p.A", "CSRFC"), 4.0);
        assert_eq!(metric(&p, "p.A", "CSDAC"), 1.0);
        assert_eq!(metric(&p, "p.A", "CSCFNAMM"), 3.0);
        assert_eq!(metric(&p, "p.B", "CSDEPENDSBY"), 1.0);
    }

    #[test]
    fn unresolved_names_only_count_as_dependencies() {
        let p = project(&[("A.java", "import java.util.List; class A { List<String> xs; String f(Object o) { return null; } }")]);
        assert_eq!(metric(&p, "A", "CSCBO"), 0.0);
        assert_eq!(metric(&p, "A", "CSDEPENDS"), 3.0);
    }

    #[test]
    fn foreign_data_and_cohesion() {
        let p = project(&[
            ("P.java", "class P { int x; int y; int getX() { return x; } void setY(int v) { this.y = v; } }"),
            (
                "Q.java",
                "class Q { P p; int a; int b;\n\
                 int f() { return p.getX() + a; }\n\
                 void g(P other) { other.setY(b); }\n\
                 int h() { return a; } }",
            ),
        ]);
        assert_eq!(metric(&p, "Q", "CSATFD"), 2.0);
        // f uses {p, a}, g uses {b}, h uses {a}: pairs f-g, g-h share nothing
        assert_eq!(metric(&p, "Q", "CSLOCM"), 2.0);
        assert_eq!(metric(&p, "Q", "CSCFNAMM"), 0.0);
        assert_eq!(metric(&p, "P", "CSNOAMM"), 2.0);
        assert_eq!(metric(&p, "P", "CSNOMNAMM"), 0.0);
    }

    #[test]
    fn inheritance_metrics() {
        let p = project(&[(
            "h/H.java",
            "package h; abstract class Base { void a() {} void b() {} private void c() {} abstract void d(); }\n\
             class Kid extends Base implements Runnable { @Override void a() {} void d() {} public void run() {} }\n\
             class GrandKid extends Kid {}",
        )]);
        assert_eq!(metric(&p, "h.Kid", "CSDIT"), 1.0);
        assert_eq!(metric(&p, "h.GrandKid", "CSDIT"), 2.0);
        assert_eq!(metric(&p, "h.Base", "CSNOC"), 1.0);
        assert_eq!(metric(&p, "h.Kid", "CSNOP"), 2.0);
        assert_eq!(metric(&p, "h.Kid", "CSNOII"), 1.0);
        assert_eq!(metric(&p, "h.Kid", "CSNMO"), 2.0);
        assert_eq!(metric(&p, "h.Kid", "CSNIM"), 1.0);
        assert_eq!(metric(&p, "h.GrandKid", "CSNIM"), 4.0);
    }

    #[test]
    fn size_counts() {
        let p = project(&[(
            "S.java",
            "class S {\n  static int n;\n  int a, b;\n  S() {}\n  static void f() { n++; }\n  void g() { a = 1; b = 2; }\n}\n",
        )]);
        assert_eq!(metric(&p, "S", "CSLOC"), 7.0);
        assert_eq!(metric(&p, "S", "CSNOSA"), 1.0);
        assert_eq!(metric(&p, "S", "CSNOIA"), 2.0);
        assert_eq!(metric(&p, "S", "CSNOSM"), 1.0);
        assert_eq!(metric(&p, "S", "CSNOIM"), 1.0);
        assert_eq!(metric(&p, "S", "CSNOCON"), 1.0);
        assert_eq!(metric(&p, "S", "CSNOST"), 3.0);
        assert_eq!(metric(&p, "S", "CC_Sum_All"), 3.0);
    }

    #[test]
    fn scalar_block_shape() {
        let p = project(&[("A.java", "class A {}")]);
        let m = compute_class_metrics(&p, "A").unwrap();
        assert_eq!(m.len(), 131);
        assert!(m.iter().all(|(_, v)| v.is_finite()));
    }
}
