//! Whole-project view: parsed files, every named type, and name resolution.
//!
//! A simple type name is resolved from the viewpoint of a class in this
//! order: nested and enclosing types, single-type imports, the class's own
//! package, on-demand imports, and finally the name taken as fully
//! qualified. Names that resolve to nothing are external.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use super::lexical::{compute_lexical_metrics, LexicalMetrics};
use super::method::{compute_method_records, CodeLines, MethodRecord};
use super::MetricsError;
use crate::java::ast::{CompilationUnit, MethodDecl, TypeDecl, TypeKind, TypeRef};
use crate::java::parse_source;

#[derive(Debug, Clone)]
pub struct ProjectFile {
    /// Path relative to the project root, `/`-separated.
    pub path: String,
    pub package: String,
    pub unit: CompilationUnit,
    pub lines: CodeLines,
    pub lexical: LexicalMetrics,
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    /// Dotted name; member types are `pkg.Outer.Inner`.
    pub id: String,
    pub package: String,
    pub file: usize,
    pub outer: Option<usize>,
    pub nested: Vec<usize>,
    pub decl: TypeDecl,
    pub records: Vec<MethodRecord>,
}

impl ClassInfo {
    pub fn simple_name(&self) -> &str {
        &self.decl.name
    }

    pub fn field_type(&self, name: &str) -> Option<&TypeRef> {
        self.decl.fields().find(|f| f.declarators.iter().any(|d| d.name == name)).map(|f| &f.ty)
    }

    pub fn methods(&self) -> impl Iterator<Item = (&MethodDecl, &MethodRecord)> {
        self.decl.methods().zip(self.records.iter())
    }

    pub fn is_interface(&self) -> bool {
        self.decl.kind == TypeKind::Interface
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProjectIndex {
    pub files: Vec<ProjectFile>,
    pub classes: Vec<ClassInfo>,
    by_id: HashMap<String, usize>,
}

/// Java sources under `root`, sorted by relative path.
pub fn read_sources(root: &Path) -> Result<Vec<(String, String)>, MetricsError> {
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| MetricsError::Io {
            path: root.display().to_string(),
            reason: e.to_string(),
        })?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "java") {
            paths.push(entry.into_path());
        }
    }
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let text = std::fs::read_to_string(&p)
            .map_err(|e| MetricsError::Io { path: p.display().to_string(), reason: e.to_string() })?;
        let rel = p.strip_prefix(root).unwrap_or(&p);
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        out.push((rel, text));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

impl ProjectIndex {
    pub fn from_dir(root: &Path) -> Result<Self, MetricsError> {
        Self::build(&read_sources(root)?)
    }

    /// Builds the index from `(path, source)` pairs. Any file that fails to
    /// lex or parse aborts the build.
    pub fn build(sources: &[(String, String)]) -> Result<Self, MetricsError> {
        let parsed: Vec<Result<ProjectFile, MetricsError>> = sources
            .par_iter()
            .map(|(path, text)| {
                let (stream, unit) =
                    parse_source(text).map_err(|error| MetricsError::Source { path: path.clone(), error })?;
                Ok(ProjectFile {
                    path: path.clone(),
                    package: unit.package.clone().unwrap_or_default(),
                    lines: CodeLines::new(&stream),
                    lexical: compute_lexical_metrics(&stream),
                    unit,
                })
            })
            .collect();
        let files = parsed.into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_files(files))
    }

    pub fn from_files(files: Vec<ProjectFile>) -> Self {
        let mut index = ProjectIndex { files, classes: Vec::new(), by_id: HashMap::new() };
        for fi in 0..index.files.len() {
            let types = index.files[fi].unit.types.clone();
            let pkg = index.files[fi].package.clone();
            for t in types {
                let id = if pkg.is_empty() { t.name.clone() } else { format!("{pkg}.{}", t.name) };
                index.add_class(id, fi, None, t);
            }
        }
        let records: Vec<Vec<MethodRecord>> = index
            .classes
            .par_iter()
            .map(|c| compute_method_records(&c.decl, &index.files[c.file].lines))
            .collect();
        for (c, r) in index.classes.iter_mut().zip(records) {
            c.records = r;
        }
        index
    }

    fn add_class(&mut self, id: String, file: usize, outer: Option<usize>, decl: TypeDecl) -> usize {
        let at = self.classes.len();
        let nested_decls: Vec<TypeDecl> = decl.nested_types().cloned().collect();
        if self.by_id.contains_key(&id) {
            log::warn!("duplicate type {id}; keeping the first definition");
        } else {
            self.by_id.insert(id.clone(), at);
        }
        self.classes.push(ClassInfo {
            id: id.clone(),
            package: self.files[file].package.clone(),
            file,
            outer,
            nested: Vec::new(),
            decl,
            records: Vec::new(),
        });
        for n in nested_decls {
            let child = self.add_class(format!("{id}.{}", n.name), file, Some(at), n);
            self.classes[at].nested.push(child);
        }
        at
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn class(&self, i: usize) -> &ClassInfo {
        &self.classes[i]
    }

    pub fn file_of(&self, i: usize) -> &ProjectFile {
        &self.files[self.classes[i].file]
    }

    /// Resolves a (possibly dotted) type name as seen from class `from`.
    pub fn resolve(&self, name: &str, from: usize) -> Option<usize> {
        let (head, rest) = match name.split_once('.') {
            Some((h, r)) => (h, Some(r)),
            None => (name, None),
        };
        if let Some(h) = self.resolve_simple(head, from) {
            let found = match rest {
                None => Some(h),
                Some(r) => self.get(&format!("{}.{r}", self.classes[h].id)),
            };
            if found.is_some() {
                return found;
            }
        }
        if rest.is_some() {
            return self.get(name);
        }
        None
    }

    fn resolve_simple(&self, name: &str, from: usize) -> Option<usize> {
        // nested and enclosing scopes
        let mut scope = Some(from);
        while let Some(s) = scope {
            let c = &self.classes[s];
            if c.decl.name == name {
                return Some(s);
            }
            if let Some(&n) = c.nested.iter().find(|&&n| self.classes[n].decl.name == name) {
                return Some(n);
            }
            scope = c.outer;
        }
        let file = self.file_of(from);
        for imp in file.unit.imports.iter().filter(|i| !i.wildcard && !i.is_static) {
            if imp.path.rsplit('.').next() == Some(name) {
                if let Some(i) = self.get(&imp.path) {
                    return Some(i);
                }
            }
        }
        let same_pkg = if file.package.is_empty() { name.to_string() } else { format!("{}.{name}", file.package) };
        if let Some(i) = self.get(&same_pkg) {
            return Some(i);
        }
        for imp in file.unit.imports.iter().filter(|i| i.wildcard && !i.is_static) {
            if let Some(i) = self.get(&format!("{}.{name}", imp.path)) {
                return Some(i);
            }
        }
        self.get(name)
    }

    /// Project classes named in the `extends`/`implements` clauses of `c`.
    pub fn parents(&self, c: usize) -> Vec<usize> {
        let d = &self.classes[c].decl;
        d.extends.iter().chain(d.implements.iter()).filter_map(|t| self.resolve(&t.name, c)).filter(|&p| p != c).collect()
    }

    /// Project superclass (first `extends` entry of a class).
    pub fn superclass(&self, c: usize) -> Option<usize> {
        let d = &self.classes[c].decl;
        if d.kind == TypeKind::Interface {
            return None;
        }
        d.extends.first().and_then(|t| self.resolve(&t.name, c)).filter(|&p| p != c)
    }

    /// All project ancestors of `c`, breadth-first, each listed once.
    pub fn ancestors(&self, c: usize) -> Vec<usize> {
        let mut seen = vec![false; self.classes.len()];
        seen[c] = true;
        let mut queue: VecDeque<usize> = self.parents(c).into();
        let mut out = Vec::new();
        while let Some(p) = queue.pop_front() {
            if std::mem::replace(&mut seen[p], true) {
                continue;
            }
            out.push(p);
            queue.extend(self.parents(p));
        }
        out
    }

    /// Length of the project-internal `extends` chain above `c`.
    pub fn depth_of_inheritance(&self, c: usize) -> usize {
        let mut memo = vec![None; self.classes.len()];
        self.dit(c, &mut memo, &mut vec![false; self.classes.len()])
    }

    fn dit(&self, c: usize, memo: &mut Vec<Option<usize>>, visiting: &mut Vec<bool>) -> usize {
        if let Some(d) = memo[c] {
            return d;
        }
        if visiting[c] {
            return 0;
        }
        visiting[c] = true;
        let d = &self.classes[c].decl;
        let parents: Vec<usize> = if d.kind == TypeKind::Interface {
            self.parents(c)
        } else {
            self.superclass(c).into_iter().collect()
        };
        let depth = parents.iter().map(|&p| 1 + self.dit(p, memo, visiting)).max().unwrap_or(0);
        visiting[c] = false;
        memo[c] = Some(depth);
        depth
    }

    /// Class indices grouped by package name.
    pub fn packages(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut out: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            out.entry(c.package.as_str()).or_default().push(i);
        }
        out
    }

    /// Finds a method by name and arity on `c` or its project ancestors.
    pub fn find_method(&self, c: usize, name: &str, arity: usize) -> Option<(usize, &MethodDecl, &MethodRecord)> {
        std::iter::once(c).chain(self.ancestors(c)).find_map(|k| {
            self.classes[k]
                .methods()
                .find(|(m, _)| m.name == name && !m.is_constructor && arity_matches(m, arity))
                .map(|(m, r)| (k, m, r))
        })
    }

    /// Finds a field by name on `c` or its project ancestors.
    pub fn find_field(&self, c: usize, name: &str) -> Option<(usize, &TypeRef)> {
        std::iter::once(c).chain(self.ancestors(c)).find_map(|k| self.classes[k].field_type(name).map(|t| (k, t)))
    }
}

fn arity_matches(m: &MethodDecl, arity: usize) -> bool {
    let n = m.params.len();
    n == arity || (m.params.last().is_some_and(|p| p.varargs) && arity + 1 >= n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(files: &[(&str, &str)]) -> ProjectIndex {
        let v: Vec<(String, String)> = files.iter().map(|(p, s)| (p.to_string(), s.to_string())).collect();
        ProjectIndex::build(&v).unwrap()
    }

    #[test]
    fn ids_and_nesting() {
        let p = project(&[("a/A.java", "package a; public class A { class In { enum E {X} } } interface I {}")]);
        let ids: Vec<&str> = p.classes.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, vec!["a.A", "a.A.In", "a.A.In.E", "a.I"]);
        assert_eq!(p.class(2).outer, Some(1));
    }

    #[test]
    fn resolution_order() {
        let p = project(&[
            ("a/A.java", "package a; import b.B; import c.*; class A { class Inner {} }"),
            ("a/Local.java", "package a; class Local {} class B {}"),
            ("b/B.java", "package b; public class B {}"),
            ("c/C.java", "package c; public class C {} class Local {}"),
        ]);
        let a = p.get("a.A").unwrap();
        let name = |n: &str| p.resolve(n, a).map(|i| p.class(i).id.clone());
        assert_eq!(name("Inner").as_deref(), Some("a.A.Inner"));
        // single-type import beats same package
        assert_eq!(name("B").as_deref(), Some("b.B"));
        // same package beats on-demand import
        assert_eq!(name("Local").as_deref(), Some("a.Local"));
        assert_eq!(name("C").as_deref(), Some("c.C"));
        assert_eq!(name("b.B").as_deref(), Some("b.B"));
        assert_eq!(name("A.Inner").as_deref(), Some("a.A.Inner"));
        assert_eq!(name("String"), None);
    }

    #[test]
    fn inheritance_helpers() {
        let p = project(&[(
            "x/All.java",
            "package x; class Base {} class Mid extends Base implements I {} class Leaf extends Mid {} interface I {} interface J extends I {}",
        )]);
        let leaf = p.get("x.Leaf").unwrap();
        assert_eq!(p.depth_of_inheritance(leaf), 2);
        assert_eq!(p.depth_of_inheritance(p.get("x.Base").unwrap()), 0);
        assert_eq!(p.depth_of_inheritance(p.get("x.J").unwrap()), 1);
        let anc: Vec<&str> = p.ancestors(leaf).iter().map(|&i| p.class(i).id.as_str()).collect();
        assert_eq!(anc, vec!["x.Mid", "x.Base", "x.I"]);
    }

    #[test]
    fn parse_errors_name_the_file() {
        let err = ProjectIndex::build(&[("Bad.java".to_string(), "class {".to_string())]).unwrap_err();
        assert!(err.to_string().contains("Bad.java"), "{err}");
    }
}
