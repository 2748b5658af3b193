//! Bidirectional type checking with elaboration into core terms.
//!
//! Core terms have every annotation evaluation needs: lambda domains,
//! types of delayed-substitution bindings, `dfix` types and `unglue` data.
//! `fix` is expanded into an application of its body to a `dfix`.

use crate::conv::{conv, fuel_exhausted, used_pending};
use crate::eval::{self, eval, eval_dim, eval_face, restrict_dnf, restrict_env};
use crate::interval::{face_equal, meet_clause, Clause, Dir, Dnf, Face, IntervalExpr, Name};
use crate::readback::{readback, Names};
use crate::syntax::{rc, Branch, DelayedSubst, DsBind, ModuleFile, Span, System, Term};
use crate::value::*;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Mismatch,
    NotAFunction,
    FaceNotCovering,
    SystemIncompatible,
    DsIllFormed,
    Unbound,
    UniverseExpected,
    BoundaryViolation,
    Duplicate,
    FuelExhausted,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::NotAFunction => "not-a-function",
            ErrorKind::FaceNotCovering => "face-not-covering",
            ErrorKind::SystemIncompatible => "system-incompatible",
            ErrorKind::DsIllFormed => "ds-ill-formed",
            ErrorKind::Unbound => "unbound",
            ErrorKind::UniverseExpected => "universe-expected",
            ErrorKind::BoundaryViolation => "boundary-violation",
            ErrorKind::Duplicate => "duplicate",
            ErrorKind::FuelExhausted => "fuel-exhausted",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub span: Option<Span>,
    pub kind: ErrorKind,
    pub expected: String,
    pub found: String,
}

impl TypeError {
    fn new(kind: ErrorKind, expected: impl Into<String>, found: impl Into<String>) -> TypeError {
        TypeError { span: None, kind, expected: expected.into(), found: found.into() }
    }

    fn at(mut self, span: Span) -> TypeError {
        if self.span.is_none() {
            self.span = Some(span);
        }
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] expected {} found {}", self.kind, self.expected, self.found)
    }
}

impl std::error::Error for TypeError {}

type TResult<T> = Result<T, TypeError>;

/// Checked top-level definitions visible to a module.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub types: HashMap<Name, Val>,
    pub values: Rc<Globals>,
}

impl Scope {
    pub fn insert(&mut self, name: Name, ty: Val, val: Val) {
        self.types.insert(name.clone(), ty);
        let mut values = (*self.values).clone();
        values.insert(name, val);
        self.values = Rc::new(values);
    }

    pub fn extend(&mut self, m: &CheckedModule) {
        let mut values = (*self.values).clone();
        for d in &m.decls {
            self.types.insert(d.name.clone(), d.ty.clone());
            values.insert(d.name.clone(), d.val.clone());
        }
        self.values = Rc::new(values);
    }
}

#[derive(Clone, Debug)]
pub struct CheckedDecl {
    pub name: Name,
    pub ty: Val,
    pub val: Val,
    pub core_ty: Term,
    pub core_body: Term,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct CheckedModule {
    pub name: Name,
    pub decls: Vec<CheckedDecl>,
    /// Modules this one was checked against, filled in by the loader.
    pub imports: Vec<Rc<CheckedModule>>,
}

impl CheckedModule {
    pub fn get(&self, name: &Name) -> Option<&CheckedDecl> {
        self.decls.iter().find(|d| &d.name == name)
    }
}

#[derive(Clone, Debug)]
enum EntryKind {
    Term { ty: Val },
    Dim,
}

#[derive(Clone, Debug)]
struct Entry {
    surface: Name,
    core: Name,
    kind: EntryKind,
}

/// A binding introduced by a delayed substitution.
#[derive(Clone)]
struct DsBinder {
    term: Val,
    var: Val,
}

#[derive(Clone)]
pub struct Ctx {
    entries: Vec<Entry>,
    pub env: Env,
    names: Names,
    scope: Rc<Scope>,
}

impl Ctx {
    pub fn new(scope: Rc<Scope>) -> Ctx {
        Ctx { entries: Vec::new(), env: Env::new(scope.values.clone()), names: Names::new(), scope }
    }

    pub fn quote(&self, v: &Val) -> Term {
        readback(v, &mut self.names.clone())
    }

    /// A print of a value in which bound names depend only on position.
    pub fn show_canonical(&self, v: &Val) -> String {
        readback(v, &mut self.names.clone().uniform()).erase_annotations().to_string()
    }

    /// A readable print of a value in this context.
    pub fn show(&self, v: &Val) -> String {
        self.quote(v).erase_annotations().to_string()
    }

    fn core_name(&self, surface: &Name) -> Name {
        let taken = |n: &Name| self.names.in_use(n);
        if !taken(surface) {
            return surface.clone();
        }
        self.names.choose(surface.as_str())
    }

    pub fn bind_var(&self, surface: &Name, ty: Val) -> (Ctx, Name, Val) {
        let core = self.core_name(surface);
        let p = Name::fresh(surface.hint());
        let v = vvar(p.clone(), ty.clone());
        let mut c = self.clone();
        c.names.push(p, core.clone());
        c.env = c.env.bind(core.clone(), v.clone());
        c.entries.push(Entry { surface: surface.clone(), core: core.clone(), kind: EntryKind::Term { ty } });
        (c, core, v)
    }

    fn bind_def(&self, surface: &Name, ty: Val, val: Val) -> (Ctx, Name) {
        let core = self.core_name(surface);
        let mut c = self.clone();
        c.names.push(Name::fresh("def"), core.clone());
        c.env = c.env.bind(core.clone(), val);
        c.entries.push(Entry { surface: surface.clone(), core: core.clone(), kind: EntryKind::Term { ty } });
        (c, core)
    }

    pub fn bind_dim(&self, surface: &Name) -> (Ctx, Name, Name) {
        let core = self.core_name(surface);
        let k = Name::fresh(surface.hint());
        let mut c = self.clone();
        c.names.push(k.clone(), core.clone());
        c.env = c.env.bind_dim(core.clone(), Dnf::var(k.clone()));
        c.entries.push(Entry { surface: surface.clone(), core: core.clone(), kind: EntryKind::Dim });
        (c, core, k)
    }

    /// The context under a clause of value-level endpoint assignments.
    fn restrict(&self, c: &Clause) -> Ctx {
        let mut out = self.clone();
        out.env = restrict_env(&self.env, c);
        for e in &mut out.entries {
            if let EntryKind::Term { ty } = &e.kind {
                e.kind = EntryKind::Term { ty: restrict(ty, c) };
            }
        }
        out
    }

    fn lookup(&self, x: &Name) -> Option<&Entry> {
        self.entries.iter().rev().find(|e| &e.surface == x)
    }

    pub fn eval(&self, t: &Term) -> Val {
        eval(t, &self.env)
    }
}

fn univ() -> Val {
    Rc::new(Value::Univ)
}

fn mismatch(ctx: &Ctx, expected: &Val, found: &Val) -> TypeError {
    let kind = if fuel_exhausted() { ErrorKind::FuelExhausted } else { ErrorKind::Mismatch };
    TypeError::new(kind, ctx.show(expected), ctx.show(found))
}

fn conv_or(ctx: &Ctx, kind: ErrorKind, expected: &Val, found: &Val) -> TResult<()> {
    if conv(expected, found) {
        Ok(())
    } else if fuel_exhausted() {
        Err(TypeError::new(ErrorKind::FuelExhausted, ctx.show(expected), ctx.show(found)))
    } else {
        Err(TypeError::new(kind, ctx.show(expected), ctx.show(found)))
    }
}

pub fn check_interval(ctx: &Ctx, r: &IntervalExpr) -> TResult<IntervalExpr> {
    Ok(match r {
        IntervalExpr::Zero | IntervalExpr::One => r.clone(),
        IntervalExpr::Var(n) => match ctx.lookup(n) {
            Some(Entry { core, kind: EntryKind::Dim, .. }) => IntervalExpr::Var(core.clone()),
            Some(_) => return Err(TypeError::new(ErrorKind::Mismatch, "an interval", format!("term variable `{}`", n))),
            None => return Err(TypeError::new(ErrorKind::Unbound, "a bound interval name", format!("`{}`", n))),
        },
        IntervalExpr::Neg(a) => IntervalExpr::neg(check_interval(ctx, a)?),
        IntervalExpr::Meet(a, b) => IntervalExpr::meet(check_interval(ctx, a)?, check_interval(ctx, b)?),
        IntervalExpr::Join(a, b) => IntervalExpr::join(check_interval(ctx, a)?, check_interval(ctx, b)?),
    })
}

/// A surface face over core names.
fn check_face(ctx: &Ctx, phi: &Face) -> TResult<Face> {
    let mut out = Face::bot();
    for c in phi.clauses() {
        let mut clause = Clause::new();
        for (n, d) in c {
            match check_interval(ctx, &IntervalExpr::Var(n.clone()))? {
                IntervalExpr::Var(core) => {
                    clause.insert(core, *d);
                }
                _ => unreachable!(),
            }
        }
        out = out.join(&Face::from_clause(clause));
    }
    Ok(out)
}

/// Split a surface system into one branch per clause, each paired with its
/// value-level clause; branches false in the context are dropped.
fn split_system(ctx: &Ctx, sys: &System) -> TResult<Vec<(Face, Clause, Rc<Term>)>> {
    let mut out = Vec::new();
    for b in sys {
        let core = check_face(ctx, &b.face)?;
        for c in core.clauses() {
            let f = Face::from_clause(c.clone());
            let ev = eval_face(&f, &ctx.env);
            let evs: Vec<Clause> = ev.clauses().cloned().collect();
            for vc in evs {
                out.push((f.clone(), vc, b.term.clone()));
            }
        }
    }
    Ok(out)
}

fn show_face(ctx: &Ctx, phi: &Face) -> String {
    let clauses: Vec<Clause> = phi
        .clauses()
        .map(|c| c.iter().map(|(n, d)| (ctx.names.display(n), *d)).collect())
        .collect();
    Face::from_clauses(clauses).to_string()
}

/// Pairwise agreement of branch values on overlaps.
fn check_compatible(ctx: &Ctx, branches: &[(Clause, Val)]) -> TResult<()> {
    for (a, (c1, v1)) in branches.iter().enumerate() {
        for (c2, v2) in &branches[a + 1..] {
            if let Some(m) = meet_clause(c1, c2) {
                let (x, y) = (restrict(v1, &m), restrict(v2, &m));
                if !conv(&x, &y) {
                    let cm = ctx.restrict(&m);
                    let kind = if fuel_exhausted() {
                        ErrorKind::FuelExhausted
                    } else {
                        ErrorKind::SystemIncompatible
                    };
                    return Err(TypeError::new(kind, cm.show(&x), cm.show(&y)));
                }
            }
        }
    }
    Ok(())
}

pub fn check_type(ctx: &Ctx, t: &Term) -> TResult<Term> {
    check(ctx, t, &univ())
}

pub fn infer(ctx: &Ctx, t: &Term) -> TResult<(Term, Val)> {
    match t {
        Term::Loc(span, t) => infer(ctx, t).map_err(|e| e.at(*span)),
        Term::Var(x) => {
            if let Some(e) = ctx.lookup(x) {
                return match &e.kind {
                    EntryKind::Term { ty } => Ok((Term::Var(e.core.clone()), ty.clone())),
                    EntryKind::Dim => Err(TypeError::new(
                        ErrorKind::Mismatch,
                        "a term",
                        format!("interval `{}`", x),
                    )),
                };
            }
            match ctx.scope.types.get(x) {
                Some(ty) => Ok((Term::Var(x.clone()), ty.clone())),
                None => Err(TypeError::new(ErrorKind::Unbound, "a bound variable", format!("`{}`", x))),
            }
        }
        Term::Univ | Term::Nat => Ok((t.clone(), univ())),
        Term::Zero => Ok((Term::Zero, Rc::new(Value::Nat))),
        Term::Suc(n) => {
            let n = check(ctx, n, &Rc::new(Value::Nat))?;
            Ok((Term::Suc(rc(n)), Rc::new(Value::Nat)))
        }
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let a = check_type(ctx, a)?;
            let (cx, core, _) = ctx.bind_var(x, ctx.eval(&a));
            let b = check_type(&cx, b)?;
            let t = match t {
                Term::Pi(..) => Term::Pi(core, rc(a), rc(b)),
                _ => Term::Sigma(core, rc(a), rc(b)),
            };
            Ok((t, univ()))
        }
        Term::Path(a, x, y) => {
            let a = check_type(ctx, a)?;
            let av = ctx.eval(&a);
            let x = check(ctx, x, &av)?;
            let y = check(ctx, y, &av)?;
            Ok((Term::Path(rc(a), rc(x), rc(y)), univ()))
        }
        Term::App(f, a) => {
            let (f, fty) = infer(ctx, f)?;
            match &*fty {
                Value::Pi(dom, cod) => {
                    let a = check(ctx, a, dom)?;
                    let ty = cod.apply(ctx.eval(&a));
                    Ok((Term::App(rc(f), rc(a)), ty))
                }
                _ => Err(TypeError::new(ErrorKind::NotAFunction, "a function type", ctx.show(&fty))),
            }
        }
        Term::Fst(p) | Term::Snd(p) => {
            let (p, pty) = infer(ctx, p)?;
            match &*pty {
                Value::Sigma(a, b) => {
                    if let Term::Fst(_) = t {
                        Ok((Term::Fst(rc(p)), a.clone()))
                    } else {
                        let first = eval::fst(&ctx.eval(&p));
                        Ok((Term::Snd(rc(p)), b.apply(first)))
                    }
                }
                _ => Err(TypeError::new(ErrorKind::Mismatch, "a pair type", ctx.show(&pty))),
            }
        }
        Term::PApp(p, r) => {
            let (p, pty) = infer(ctx, p)?;
            let r = check_interval(ctx, r)?;
            match &*pty {
                Value::Path(a, _, _) => Ok((Term::PApp(rc(p), r), a.clone())),
                _ => Err(TypeError::new(ErrorKind::Mismatch, "a path type", ctx.show(&pty))),
            }
        }
        Term::NatRec(m, z, s, n) => {
            let nat = Rc::new(Value::Nat);
            let motive_ty = Rc::new(Value::Pi(
                nat.clone(),
                Closure { name: Name::new("_"), body: rc(Term::Univ), env: Env::empty() },
            ));
            let m = check(ctx, m, &motive_ty)?;
            let mv = ctx.eval(&m);
            let z = check(ctx, z, &eval::app(&mv, &Rc::new(Value::Zero)))?;
            let step_ty = {
                let body = Term::Pi(
                    Name::new("n"),
                    rc(Term::Nat),
                    rc(Term::Pi(
                        Name::new("_"),
                        rc(Term::App(rc(Term::var("P")), rc(Term::var("n")))),
                        rc(Term::App(rc(Term::var("P")), rc(Term::Suc(rc(Term::var("n")))))),
                    )),
                );
                eval(&body, &Env::empty().bind(Name::new("P"), mv.clone()))
            };
            let s = check(ctx, s, &step_ty)?;
            let n = check(ctx, n, &nat)?;
            let ty = eval::app(&mv, &ctx.eval(&n));
            Ok((Term::NatRec(rc(m), rc(z), rc(s), rc(n)), ty))
        }
        Term::Comp(i, a, sys, b) => check_comp(ctx, i, a, sys, b),
        Term::Glue(a, sys) => {
            let a = check_type(ctx, a)?;
            let av = ctx.eval(&a);
            let mut branches = Vec::new();
            let mut vals = Vec::new();
            for (f, c, term) in split_system(ctx, sys)? {
                let cc = ctx.restrict(&c);
                let want = glue_branch_type(&restrict(&av, &c));
                let term = check(&cc, &term, &want)?;
                vals.push((c, cc.eval(&term)));
                branches.push(Branch { face: f, term: rc(term) });
            }
            check_compatible(ctx, &vals)?;
            Ok((Term::Glue(rc(a), branches), univ()))
        }
        Term::Unglue(b, _) => {
            let (b, bty) = infer(ctx, b)?;
            match &*bty {
                Value::GlueT(a, equivs) => {
                    let ann = (rc(ctx.quote(a)), quote_sys(ctx, equivs));
                    Ok((Term::Unglue(rc(b), Some(ann)), a.clone()))
                }
                _ => Err(TypeError::new(ErrorKind::Mismatch, "a Glue type", ctx.show(&bty))),
            }
        }
        Term::Later(ds, a) => {
            let (ds, inner, _) = check_ds(ctx, ds)?;
            let a = check_type(&inner, a)?;
            Ok((Term::Later(ds, rc(a)), univ()))
        }
        Term::Next(ds, body) => {
            let (ds2, inner, _) = check_ds(ctx, ds)?;
            let (body, bty) = infer(&inner, body)?;
            let ty_term = Term::Later(ds2.clone(), rc(inner.quote(&bty)));
            Ok((Term::Next(ds2, rc(body)), ctx.eval(&ty_term)))
        }
        Term::DFix(r, x, Some(a), body) => {
            let a = check_type(ctx, a)?;
            let av = ctx.eval(&a);
            let core = check_dfix(ctx, r, x, &av, body)?;
            Ok((core, eval::later_of(av)))
        }
        Term::Lam(x, Some(a), body) => {
            let a = check_type(ctx, a)?;
            let av = ctx.eval(&a);
            let (cx, core, _) = ctx.bind_var(x, av);
            let (body, bty) = infer(&cx, body)?;
            let ty = Term::Pi(core.clone(), rc(a.clone()), rc(cx.quote(&bty)));
            Ok((Term::Lam(core, Some(rc(a)), rc(body)), ctx.eval(&ty)))
        }
        Term::Pair(a, b) => {
            let (a, aty) = infer(ctx, a)?;
            let (b, bty) = infer(ctx, b)?;
            let ty = Term::Sigma(Name::new("_"), rc(ctx.quote(&aty)), rc(ctx.quote(&bty)));
            Ok((Term::Pair(rc(a), rc(b)), ctx.eval(&ty)))
        }
        Term::PLam(i, body) => {
            let (ci, core, k) = ctx.bind_dim(i);
            let (body, bty) = infer(&ci, body)?;
            let ty_t = ci.quote(&bty);
            if crate::syntax::free_names(&ty_t).intervals.contains(&core) {
                return Err(TypeError::new(
                    ErrorKind::Mismatch,
                    "a type not depending on the path variable",
                    ci.show(&bty),
                ));
            }
            let bv = ci.eval(&body);
            let x = act(&bv, &Sub::dir(&k, Dir::Zero));
            let y = act(&bv, &Sub::dir(&k, Dir::One));
            let ty = Rc::new(Value::Path(act(&bty, &Sub::dir(&k, Dir::Zero)), x, y));
            Ok((Term::PLam(core, rc(body)), ty))
        }
        _ => Err(TypeError::new(
            ErrorKind::Mismatch,
            "a term whose type can be inferred",
            format!("`{}`; add a type annotation", t.strip_locs().erase_annotations()),
        )),
    }
}

/// `(T : U) * Equiv T A` for a base type `A`.
fn glue_branch_type(base: &Val) -> Val {
    let body = Term::Sigma(
        Name::new("T"),
        rc(Term::Univ),
        rc(Term::App(
            rc(Term::App(rc(Term::var("Equiv")), rc(Term::var("T")))),
            rc(Term::var("A")),
        )),
    );
    let env = Env::empty().bind(Name::new("A"), base.clone());
    let env = env.bind(Name::new("Equiv"), crate::prelude::values().equiv.clone());
    eval(&body, &env)
}

fn quote_sys(ctx: &Ctx, sys: &VSys) -> System {
    match ctx.quote(&Rc::new(Value::Sys(sys.clone()))) {
        Term::Sys(s) => s,
        _ => unreachable!(),
    }
}

fn check_comp(ctx: &Ctx, i: &Name, a: &Term, sys: &System, b: &Term) -> TResult<(Term, Val)> {
    let (ci, core_i, k) = ctx.bind_dim(i);
    let a = check_type(&ci, a)?;
    let line = ci.eval(&a);
    let mut branches = Vec::new();
    let mut vals = Vec::new();
    for (f, c, term) in split_system(&ci, sys)? {
        if c.contains_key(&k) {
            return Err(TypeError::new(
                ErrorKind::Mismatch,
                format!("a tube face independent of `{}`", i),
                show_face(&ci, &Face::from_clause(c)),
            ));
        }
        let cc = ci.restrict(&c);
        let term = check(&cc, &term, &restrict(&line, &c))?;
        vals.push((c, cc.eval(&term)));
        branches.push(Branch { face: f, term: rc(term) });
    }
    check_compatible(&ci, &vals)?;
    let line0 = act(&line, &Sub::dir(&k, Dir::Zero));
    let b = check(ctx, b, &line0)?;
    let bv = ctx.eval(&b);
    for (c, u) in &vals {
        let u0 = act(u, &Sub::dir(&k, Dir::Zero));
        let b0 = restrict(&bv, c);
        if !conv(&u0, &b0) {
            let cc = ctx.restrict(c);
            let kind = if fuel_exhausted() { ErrorKind::FuelExhausted } else { ErrorKind::BoundaryViolation };
            return Err(TypeError::new(kind, cc.show(&u0), cc.show(&b0)));
        }
    }
    let ty = act(&line, &Sub::dir(&k, Dir::One));
    Ok((Term::Comp(core_i, rc(a), branches, rc(b)), ty))
}

fn check_dfix(ctx: &Ctx, r: &IntervalExpr, x: &Name, ty: &Val, body: &Term) -> TResult<Term> {
    let r = check_interval(ctx, r)?;
    let (cx, core, _) = ctx.bind_var(x, eval::later_of(ty.clone()));
    let body = check(&cx, body, ty)?;
    Ok(Term::DFix(r, core, Some(rc(ctx.quote(ty))), rc(body)))
}

/// Check a delayed substitution, returning its core form, the context
/// extended with its bindings, and the bindings themselves.
fn check_ds(ctx: &Ctx, ds: &DelayedSubst) -> TResult<(DelayedSubst, Ctx, Vec<DsBinder>)> {
    let mut inner = ctx.clone();
    let mut binders: Vec<DsBinder> = Vec::new();
    let mut core: DelayedSubst = Vec::new();
    for b in ds {
        let (t, tty) = infer(ctx, &b.term)?;
        let dsv = match &*tty {
            Value::Later(d) => d.clone(),
            _ => {
                return Err(TypeError::new(ErrorKind::DsIllFormed, "a term of later type", ctx.show(&tty))
                    .at(span_of(&b.term)));
            }
        };
        let subs = align(ctx, &mut inner, &mut binders, &mut core, &dsv.pending);
        let ty = subs.iter().fold(dsv.body.clone(), |acc, s| act(&acc, s));
        if let Some(ann) = &b.ty {
            let want = check_type(&inner, ann)?;
            let wv = inner.eval(&want);
            conv_or(&inner, ErrorKind::DsIllFormed, &wv, &ty)?;
        }
        let ty_term = inner.quote(&ty);
        let tval = ctx.eval(&t);
        let var = match &*tval {
            Value::Next(nd) => {
                let subs2 = align(ctx, &mut inner, &mut binders, &mut core, &nd.pending);
                let val = subs2.iter().fold(nd.body.clone(), |acc, s| act(&acc, s));
                let (next, core_name) = inner.bind_def(&b.name, ty.clone(), val.clone());
                inner = next;
                core.push(DsBind { name: core_name, ty: Some(rc(ty_term)), term: rc(t) });
                val
            }
            _ => {
                let (next, core_name, v) = inner.bind_var(&b.name, ty.clone());
                inner = next;
                core.push(DsBind { name: core_name, ty: Some(rc(ty_term)), term: rc(t) });
                v
            }
        };
        binders.push(DsBinder { term: tval, var });
    }
    Ok((core, inner, binders))
}

fn span_of(t: &Term) -> Span {
    match t {
        Term::Loc(s, _) => *s,
        _ => Span::default(),
    }
}

/// Identify the pending bindings of a later type with bindings already in
/// scope, adding implicit bindings for those that are missing. Returns the
/// substitutions renaming the pending names.
fn align(
    ctx: &Ctx,
    inner: &mut Ctx,
    binders: &mut Vec<DsBinder>,
    core: &mut DelayedSubst,
    pending: &[Pend],
) -> Vec<Sub> {
    let mut subs: Vec<Sub> = Vec::new();
    for q in pending {
        let q_ty = subs.iter().fold(q.ty.clone(), |acc, s| act(&acc, s));
        if let Some(b) = binders.iter().find(|b| conv(&b.term, &q.term)) {
            subs.push(Sub::Tm(q.name.clone(), b.var.clone()));
            continue;
        }
        let hint = Name::new(q.name.hint());
        let ty_term = inner.quote(&q_ty);
        let term = ctx.quote(&q.term);
        let (next, core_name, v) = inner.bind_var(&hint, q_ty);
        *inner = next;
        core.push(DsBind { name: core_name, ty: Some(rc(ty_term)), term: rc(term) });
        binders.push(DsBinder { term: q.term.clone(), var: v.clone() });
        subs.push(Sub::Tm(q.name.clone(), v));
    }
    subs
}

pub fn check(ctx: &Ctx, t: &Term, ty: &Val) -> TResult<Term> {
    match (t, &**ty) {
        (Term::Loc(span, t), _) => check(ctx, t, ty).map_err(|e| e.at(*span)),
        (Term::Lam(x, ann, body), Value::Pi(dom, cod)) => {
            if let Some(a) = ann {
                let a = check_type(ctx, a)?;
                let av = ctx.eval(&a);
                conv_or(ctx, ErrorKind::Mismatch, dom, &av)?;
            }
            let (cx, core, v) = ctx.bind_var(x, dom.clone());
            let body = check(&cx, body, &cod.apply(v))?;
            Ok(Term::Lam(core, Some(rc(ctx.quote(dom))), rc(body)))
        }
        (Term::Lam(..), _) => Err(TypeError::new(ErrorKind::Mismatch, ctx.show(ty), "a function")),
        (Term::Pair(a, b), Value::Sigma(fst_ty, snd_ty)) => {
            let a = check(ctx, a, fst_ty)?;
            let b = check(ctx, b, &snd_ty.apply(ctx.eval(&a)))?;
            Ok(Term::Pair(rc(a), rc(b)))
        }
        (Term::PLam(i, body), Value::Path(a, x, y)) => {
            let (ci, core, k) = ctx.bind_dim(i);
            let body = check(&ci, body, a)?;
            let bv = ci.eval(&body);
            for (d, end) in [(Dir::Zero, x), (Dir::One, y)] {
                let got = act(&bv, &Sub::dir(&k, d));
                if !conv(end, &got) {
                    let kind = if fuel_exhausted() { ErrorKind::FuelExhausted } else { ErrorKind::BoundaryViolation };
                    return Err(TypeError::new(kind, ctx.show(end), ctx.show(&got)));
                }
            }
            Ok(Term::PLam(core, rc(body)))
        }
        (Term::Sys(sys), _) => check_system(ctx, sys, ty),
        (Term::GlueIntro(sys, a), Value::GlueT(base, equivs)) => {
            check_glue_intro(ctx, sys, a, base, equivs)
        }
        (Term::GlueIntro(sys, a), _) if sys.is_empty() => {
            let a = check(ctx, a, ty)?;
            Ok(Term::GlueIntro(Vec::new(), rc(a)))
        }
        (Term::Next(ds, body), Value::Later(expected)) => {
            let (ds, mut inner, mut binders) = check_ds(ctx, ds)?;
            let mut core = ds;
            let pend = used_pending(expected);
            let subs = align(ctx, &mut inner, &mut binders, &mut core, &pend);
            let want = subs.iter().fold(expected.body.clone(), |acc, s| act(&acc, s));
            let body = check(&inner, body, &want)?;
            Ok(Term::Next(core, rc(body)))
        }
        (Term::DFix(r, x, ann, body), Value::Later(expected)) => {
            let a = later_body(ctx, expected, ty)?;
            if let Some(ann) = ann {
                let want = check_type(ctx, ann)?;
                conv_or(ctx, ErrorKind::Mismatch, &a, &ctx.eval(&want))?;
            }
            check_dfix(ctx, r, x, &a, body)
        }
        (Term::Fix(r, x, body), _) => {
            let r = check_interval(ctx, r)?;
            let later = eval::later_of(ty.clone());
            let (cx, core, _) = ctx.bind_var(x, later.clone());
            let body = rc(check(&cx, body, ty)?);
            let dfix = Term::DFix(r, core.clone(), Some(rc(ctx.quote(ty))), body.clone());
            Ok(Term::App(rc(Term::Lam(core, Some(rc(ctx.quote(&later))), body)), rc(dfix)))
        }
        _ => {
            let (core, got) = infer(ctx, t)?;
            if conv(ty, &got) {
                return Ok(core);
            }
            if matches!(&**ty, Value::Univ) && !fuel_exhausted() {
                return Err(TypeError::new(ErrorKind::UniverseExpected, "a type", ctx.show(&got)));
            }
            Err(mismatch(ctx, ty, &got))
        }
    }
}

/// The type `A` of an expected `|> A` with no live bindings.
fn later_body(ctx: &Ctx, expected: &DsVal, ty: &Val) -> TResult<Val> {
    if used_pending(expected).is_empty() {
        Ok(expected.body.clone())
    } else {
        Err(TypeError::new(ErrorKind::Mismatch, ctx.show(ty), "a later type without bindings"))
    }
}

fn check_system(ctx: &Ctx, sys: &System, ty: &Val) -> TResult<Term> {
    let parts = split_system(ctx, sys)?;
    let covered = Face::from_clauses(parts.iter().map(|(_, c, _)| c.clone()));
    if !face_equal(&covered, &Face::top()) {
        return Err(TypeError::new(ErrorKind::FaceNotCovering, "(1=1)", show_face(ctx, &covered)));
    }
    let mut branches = Vec::new();
    let mut vals = Vec::new();
    for (f, c, term) in parts {
        let cc = ctx.restrict(&c);
        let term = check(&cc, &term, &restrict(ty, &c))?;
        vals.push((c, cc.eval(&term)));
        branches.push(Branch { face: f, term: rc(term) });
    }
    check_compatible(ctx, &vals)?;
    Ok(Term::Sys(branches))
}

fn check_glue_intro(ctx: &Ctx, sys: &System, a: &Term, base: &Val, equivs: &VSys) -> TResult<Term> {
    let a = check(ctx, a, base)?;
    let av = ctx.eval(&a);
    let parts = split_system(ctx, sys)?;
    let covered = Face::from_clauses(parts.iter().map(|(_, c, _)| c.clone()));
    if !face_equal(&covered, &sys_face(equivs)) {
        return Err(TypeError::new(
            ErrorKind::FaceNotCovering,
            show_face(ctx, &sys_face(equivs)),
            show_face(ctx, &covered),
        ));
    }
    let mut branches = Vec::new();
    let mut vals = Vec::new();
    for (f, c, term) in parts {
        let cc = ctx.restrict(&c);
        let eq = eval::mk_sys(restrict_sys(equivs, &c));
        let want = eval::fst(&eq);
        let term = check(&cc, &term, &want)?;
        let tv = cc.eval(&term);
        let image = eval::app(&eval::equiv_fun(&eq), &tv);
        let a_c = restrict(&av, &c);
        if !conv(&a_c, &image) {
            let kind = if fuel_exhausted() { ErrorKind::FuelExhausted } else { ErrorKind::BoundaryViolation };
            return Err(TypeError::new(kind, cc.show(&image), cc.show(&a_c)));
        }
        vals.push((c, tv));
        branches.push(Branch { face: f, term: rc(term) });
    }
    check_compatible(ctx, &vals)?;
    Ok(Term::GlueIntro(branches, rc(a)))
}

/// Evaluate an interval in a context, for callers outside this module.
pub fn eval_interval(ctx: &Ctx, r: &IntervalExpr) -> TResult<Dnf> {
    let r = check_interval(ctx, r)?;
    Ok(eval_dim(&r, &ctx.env))
}

pub fn restrict_interval(r: &Dnf, c: &Clause) -> Dnf {
    restrict_dnf(r, c)
}

pub fn check_decl_in(scope: &Rc<Scope>, ty: &Term, body: &Term) -> TResult<(Term, Val, Term, Val)> {
    let ctx = Ctx::new(scope.clone());
    let core_ty = check_type(&ctx, ty)?;
    let tyv = ctx.eval(&core_ty);
    let core_body = check(&ctx, body, &tyv)?;
    let val = ctx.eval(&core_body);
    Ok((core_ty, tyv, core_body, val))
}

/// Outcome of checking one declaration.
#[derive(Clone, Debug)]
pub struct DeclReport {
    pub name: Name,
    pub ok: bool,
    pub elapsed: std::time::Duration,
}

/// Check a module against a scope of already-checked definitions.
pub fn check_module(m: &ModuleFile, scope: &Scope) -> TResult<CheckedModule> {
    check_module_reporting(m, scope, &mut |_| {})
}

pub fn check_module_reporting(
    m: &ModuleFile,
    scope: &Scope,
    report: &mut dyn FnMut(DeclReport),
) -> TResult<CheckedModule> {
    let mut scope = scope.clone();
    let mut decls: Vec<CheckedDecl> = Vec::new();
    for d in &m.decls {
        let start = std::time::Instant::now();
        let result = if decls.iter().any(|x| x.name == d.name) {
            Err(TypeError::new(
                ErrorKind::Duplicate,
                "a fresh declaration name",
                format!("`{}` already defined", d.name),
            ))
        } else {
            check_decl_in(&Rc::new(scope.clone()), &d.ty, &d.body)
        };
        report(DeclReport { name: d.name.clone(), ok: result.is_ok(), elapsed: start.elapsed() });
        let (core_ty, ty, core_body, val) = result.map_err(|e| e.at(d.span))?;
        scope.insert(d.name.clone(), ty.clone(), val.clone());
        decls.push(CheckedDecl { name: d.name.clone(), ty, val, core_ty, core_body, span: d.span });
    }
    Ok(CheckedModule { name: m.name.clone(), decls, imports: Vec::new() })
}

/// A scope containing the prelude, a module, and everything it imports.
pub fn module_scope(m: &CheckedModule) -> Scope {
    fn walk(m: &CheckedModule, scope: &mut Scope, seen: &mut Vec<Name>) {
        if seen.contains(&m.name) {
            return;
        }
        seen.push(m.name.clone());
        for i in &m.imports {
            walk(i, scope, seen);
        }
        scope.extend(m);
    }
    let mut scope = scope_with(&[]);
    walk(m, &mut scope, &mut Vec::new());
    scope
}

/// A scope containing the prelude and the given modules.
pub fn scope_with(modules: &[&CheckedModule]) -> Scope {
    let mut scope = Scope::default();
    scope.extend(&crate::prelude::module());
    for m in modules {
        scope.extend(m);
    }
    scope
}


#[cfg(test)]
mod dfix_tests {
    use super::*;
    use crate::parser::parse_term;

    #[test]
    fn dfix_unfolds_at_one_after_substitution() {
        let mut ctx = Ctx::new(Rc::new(scope_with(&[])));
        ctx = ctx.bind_var(&Name::new("A"), univ()).0;
        let fty = ctx.eval(&check_type(&ctx, &parse_term("|> A -> A").unwrap()).unwrap());
        ctx = ctx.bind_var(&Name::new("f"), fty).0;
        let (ci, _, k) = ctx.bind_dim(&Name::new("i"));
        let later = ci.eval(&check_type(&ci, &parse_term("|> A").unwrap()).unwrap());
        let d = ci.eval(&check(&ci, &parse_term("dfix i x. f x").unwrap(), &later).unwrap());
        let want = ci.eval(&check(&ci, &parse_term("next (f (dfix 0 x. f x))").unwrap(), &later).unwrap());
        let d1 = act(&d, &Sub::dir(&k, Dir::One));
        assert!(conv(&d1, &want), "{} vs {}", ci.show(&d1), ci.show(&want));
    }
}
