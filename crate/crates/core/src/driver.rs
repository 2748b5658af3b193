//! Loading modules from disk, resolving imports, and normalizing results.

use crate::check::{check_module_reporting, module_scope, scope_with, CheckedModule, Ctx, DeclReport, TypeError};
use crate::eval::papp;
use crate::interval::{Dir, Dnf, Name};
use crate::parser::{parse_module, parse_term, ParseError};
use crate::readback::{readback, Names};
use crate::syntax::{Span, Term};
use crate::value::{Val, Value};
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::rc::Rc;

pub const EXTENSION: &str = "gctt";

#[derive(Debug)]
pub enum LoadError {
    Io { path: PathBuf, message: String },
    Parse { path: PathBuf, error: ParseError },
    Type { path: PathBuf, error: TypeError },
    Module { path: PathBuf, span: Option<Span>, message: String },
}

impl LoadError {
    /// Type errors exit with 1; everything that stops before checking
    /// exits with 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Type { .. } => 1,
            _ => 2,
        }
    }
}

fn location(path: &Path, span: Option<Span>) -> String {
    match span {
        Some(s) => format!("{}:{}:{}", path.display(), s.line, s.col),
        None => format!("{}", path.display()),
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, message } => write!(f, "{}: [io] {}", path.display(), message),
            LoadError::Parse { path, error } => write!(f, "{}: {}", location(path, Some(error.span)), error),
            LoadError::Type { path, error } => write!(f, "{}: {}", location(path, error.span), error),
            LoadError::Module { path, span, message } => {
                write!(f, "{}: [module] {}", location(path, *span), message)
            }
        }
    }
}

impl std::error::Error for LoadError {}

/// Reads, parses and checks modules, resolving imports against a list of
/// directories. Checked modules are cached by name unless caching is off.
pub struct Loader {
    search: Vec<PathBuf>,
    cache: HashMap<Name, Rc<CheckedModule>>,
    use_cache: bool,
    loading: Vec<Name>,
    report: Option<Box<dyn FnMut(&Name, &DeclReport)>>,
}

impl Loader {
    pub fn new(search: Vec<PathBuf>) -> Loader {
        Loader { search, cache: HashMap::new(), use_cache: true, loading: Vec::new(), report: None }
    }

    pub fn without_cache(mut self) -> Loader {
        self.use_cache = false;
        self
    }

    /// Receive one record per checked declaration, tagged with its module.
    pub fn on_decl(&mut self, f: impl FnMut(&Name, &DeclReport) + 'static) {
        self.report = Some(Box::new(f));
    }

    pub fn load_file(&mut self, path: &Path) -> Result<Rc<CheckedModule>, LoadError> {
        if !self.use_cache {
            self.cache.clear();
        }
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if !self.search.contains(&dir) {
            self.search.insert(0, dir);
        }
        self.load_path(path)
    }

    fn load_path(&mut self, path: &Path) -> Result<Rc<CheckedModule>, LoadError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| LoadError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        let parsed = parse_module(&src).map_err(|error| LoadError::Parse { path: path.to_path_buf(), error })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        if parsed.name.as_str() != stem {
            return Err(LoadError::Module {
                path: path.to_path_buf(),
                span: None,
                message: format!("module `{}` must live in `{}.{}`", parsed.name, parsed.name, EXTENSION),
            });
        }
        if let Some(m) = self.cache.get(&parsed.name) {
            return Ok(m.clone());
        }
        self.loading.push(parsed.name.clone());
        let mut imports = Vec::new();
        for imp in &parsed.imports {
            if self.loading.contains(imp) {
                self.loading.pop();
                return Err(LoadError::Module {
                    path: path.to_path_buf(),
                    span: None,
                    message: format!("import cycle through `{}`", imp),
                });
            }
            let found = match self.cache.get(imp) {
                Some(m) => m.clone(),
                None => {
                    let file = self.resolve(imp).ok_or_else(|| LoadError::Module {
                        path: path.to_path_buf(),
                        span: None,
                        message: format!("cannot find module `{}` on the search path", imp),
                    });
                    let file = match file {
                        Ok(f) => f,
                        Err(e) => {
                            self.loading.pop();
                            return Err(e);
                        }
                    };
                    match self.load_path(&file) {
                        Ok(m) => m,
                        Err(e) => {
                            self.loading.pop();
                            return Err(e);
                        }
                    }
                }
            };
            imports.push(found);
        }
        self.loading.pop();
        let refs: Vec<&CheckedModule> = imports.iter().map(|m| &**m).collect();
        let scope = scope_with(&refs);
        let module_name = parsed.name.clone();
        let mut sink = self.report.take();
        let result = check_module_reporting(&parsed, &scope, &mut |r| {
            if let Some(f) = sink.as_mut() {
                f(&module_name, &r);
            }
        });
        self.report = sink;
        let mut checked = result.map_err(|error| LoadError::Type { path: path.to_path_buf(), error })?;
        checked.imports = imports;
        let checked = Rc::new(checked);
        self.cache.insert(checked.name.clone(), checked.clone());
        Ok(checked)
    }

    fn resolve(&self, name: &Name) -> Option<PathBuf> {
        self.search
            .iter()
            .map(|d| d.join(format!("{}.{}", name, EXTENSION)))
            .find(|p| p.is_file())
    }
}

/// Print a value as a closed term without elaboration annotations.
pub fn show(v: &Val) -> Term {
    readback(v, &mut Names::new()).erase_annotations()
}

/// Apply leading path abstractions of `v` to endpoints, matching each
/// requested name against the binder it is printed with.
pub fn at_endpoints(v: &Val, at: &[(Name, Dir)]) -> Result<Val, String> {
    let mut v = v.clone();
    for (name, d) in at {
        let printed = match show(&v) {
            Term::PLam(i, _) => i,
            other => return Err(format!("`{}` is not a path abstraction", other)),
        };
        if &printed != name {
            return Err(format!("expected a path binder `{}`, the value binds `{}`", name, printed));
        }
        let end = match d {
            Dir::Zero => Dnf::zero(),
            Dir::One => Dnf::one(),
        };
        v = papp(&v, &end);
    }
    Ok(v)
}

/// The value of a declaration of a checked module.
pub fn decl_value(m: &CheckedModule, name: &str) -> Option<Val> {
    module_scope(m).values.get(&Name::new(name)).cloned()
}

/// Check and evaluate an expression in the scope of a module.
pub fn eval_expr(m: &CheckedModule, src: &str) -> Result<(Val, Val), String> {
    let t = parse_term(src).map_err(|e| e.to_string())?;
    let scope = Rc::new(module_scope(m));
    let ctx = Ctx::new(scope);
    let (core, ty) = crate::check::infer(&ctx, &t).map_err(|e| e.to_string())?;
    Ok((ctx.eval(&core), ty))
}

/// The normal form of a closed value as a string.
pub fn normal_form(v: &Val) -> String {
    show(v).to_string()
}

pub fn is_numeral(v: &Val) -> bool {
    match &**v {
        Value::Zero => true,
        Value::Suc(n) => is_numeral(n),
        _ => false,
    }
}
