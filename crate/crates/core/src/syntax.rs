//! Abstract syntax, substitution and printing.

use crate::interval::{dm_subst, face_subst, Face, IntervalExpr, Name};
use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

/// A source location: 1-based line and column plus byte offsets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub start: usize,
    pub end: usize,
}

/// One binding `x : A <- t` of a delayed substitution. The type is filled
/// in by elaboration.
#[derive(Clone, Debug, PartialEq)]
pub struct DsBind {
    pub name: Name,
    pub ty: Option<Rc<Term>>,
    pub term: Rc<Term>,
}

pub type DelayedSubst = Vec<DsBind>;

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub face: Face,
    pub term: Rc<Term>,
}

pub type System = Vec<Branch>;

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(Name),
    /// Lambda with an optional domain annotation.
    Lam(Name, Option<Rc<Term>>, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    /// Binder `_` marks a non-dependent function type.
    Pi(Name, Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    Zero,
    Suc(Rc<Term>),
    /// `natrec P z s n`
    NatRec(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    Nat,
    Univ,
    PLam(Name, Rc<Term>),
    PApp(Rc<Term>, IntervalExpr),
    Path(Rc<Term>, Rc<Term>, Rc<Term>),
    Sys(System),
    /// `comp i A [tube] a0`; transport is the empty tube.
    Comp(Name, Rc<Term>, System, Rc<Term>),
    /// `Glue A [phi -> (T, e)]`: base type and branches of type/equivalence pairs.
    Glue(Rc<Term>, System),
    /// `glue [phi -> t] a`
    GlueIntro(System, Rc<Term>),
    /// `unglue b`, annotated by elaboration with the glue type's base and branches.
    Unglue(Rc<Term>, Option<(Rc<Term>, System)>),
    Later(DelayedSubst, Rc<Term>),
    Next(DelayedSubst, Rc<Term>),
    /// `dfix r x. t`, annotated by elaboration with the type of `t`.
    DFix(IntervalExpr, Name, Option<Rc<Term>>, Rc<Term>),
    /// `fix r x. t`, surface sugar for `t[dfix r x. t / x]`; removed by elaboration.
    Fix(IntervalExpr, Name, Rc<Term>),
    Loc(Span, Rc<Term>),
}

/// A top-level declaration. Parameters are already folded into the type
/// and body.
#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub ty: Rc<Term>,
    pub body: Rc<Term>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleFile {
    pub name: Name,
    pub imports: Vec<Name>,
    pub decls: Vec<Decl>,
}

pub fn rc(t: Term) -> Rc<Term> {
    Rc::new(t)
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(Name::new(s))
    }

    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::Suc(rc(t));
        }
        t
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Term::Zero => Some(0),
            Term::Suc(t) => t.as_numeral().map(|n| n + 1),
            Term::Loc(_, t) => t.as_numeral(),
            _ => None,
        }
    }

    /// The term with every location wrapper removed.
    pub fn strip_locs(&self) -> Term {
        map_children(self, &|t| t.strip_locs())
    }

    /// The term without the annotations elaboration adds: lambda domains,
    /// delayed-substitution types, `dfix` types, and `unglue` data.
    pub fn erase_annotations(&self) -> Term {
        let f = |t: &Term| t.erase_annotations();
        match self {
            Term::Lam(x, _, b) => Term::Lam(x.clone(), None, rc(f(b))),
            Term::DFix(r, x, _, b) => Term::DFix(r.clone(), x.clone(), None, rc(f(b))),
            Term::Unglue(a, _) => Term::Unglue(rc(f(a)), None),
            Term::Later(ds, a) => Term::Later(erase_ds(ds), rc(f(a))),
            Term::Next(ds, a) => Term::Next(erase_ds(ds), rc(f(a))),
            t => map_children(t, &f),
        }
    }

    pub fn unloc(&self) -> &Term {
        match self {
            Term::Loc(_, t) => t.unloc(),
            t => t,
        }
    }
}

fn map_sys(sys: &System, f: &dyn Fn(&Term) -> Term) -> System {
    sys.iter()
        .map(|b| Branch { face: b.face.clone(), term: rc(f(&b.term)) })
        .collect()
}

fn erase_ds(ds: &DelayedSubst) -> DelayedSubst {
    ds.iter()
        .map(|b| DsBind { name: b.name.clone(), ty: None, term: rc(b.term.erase_annotations()) })
        .collect()
}

fn map_ds(ds: &DelayedSubst, f: &dyn Fn(&Term) -> Term) -> DelayedSubst {
    ds.iter()
        .map(|b| DsBind {
            name: b.name.clone(),
            ty: b.ty.as_ref().map(|t| rc(f(t))),
            term: rc(f(&b.term)),
        })
        .collect()
}

/// Rebuild a term by applying `f` to each immediate subterm, dropping
/// location wrappers at this node.
fn map_children(t: &Term, f: &dyn Fn(&Term) -> Term) -> Term {
    let g = |x: &Rc<Term>| rc(f(x));
    match t {
        Term::Var(_) | Term::Zero | Term::Nat | Term::Univ => t.clone(),
        Term::Lam(x, a, b) => Term::Lam(x.clone(), a.as_ref().map(g), g(b)),
        Term::App(a, b) => Term::App(g(a), g(b)),
        Term::Pi(x, a, b) => Term::Pi(x.clone(), g(a), g(b)),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), g(a), g(b)),
        Term::Pair(a, b) => Term::Pair(g(a), g(b)),
        Term::Fst(a) => Term::Fst(g(a)),
        Term::Snd(a) => Term::Snd(g(a)),
        Term::Suc(a) => Term::Suc(g(a)),
        Term::NatRec(p, z, s, n) => Term::NatRec(g(p), g(z), g(s), g(n)),
        Term::PLam(i, a) => Term::PLam(i.clone(), g(a)),
        Term::PApp(a, r) => Term::PApp(g(a), r.clone()),
        Term::Path(a, x, y) => Term::Path(g(a), g(x), g(y)),
        Term::Sys(s) => Term::Sys(map_sys(s, f)),
        Term::Comp(i, a, s, b) => Term::Comp(i.clone(), g(a), map_sys(s, f), g(b)),
        Term::Glue(a, s) => Term::Glue(g(a), map_sys(s, f)),
        Term::GlueIntro(s, a) => Term::GlueIntro(map_sys(s, f), g(a)),
        Term::Unglue(a, ann) => Term::Unglue(
            g(a),
            ann.as_ref().map(|(b, s)| (g(b), map_sys(s, f))),
        ),
        Term::Later(ds, a) => Term::Later(map_ds(ds, f), g(a)),
        Term::Next(ds, a) => Term::Next(map_ds(ds, f), g(a)),
        Term::DFix(r, x, a, b) => Term::DFix(r.clone(), x.clone(), a.as_ref().map(g), g(b)),
        Term::Fix(r, x, b) => Term::Fix(r.clone(), x.clone(), g(b)),
        Term::Loc(_, a) => f(a),
    }
}

/// Free term variables and free interval names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeNames {
    pub vars: BTreeSet<Name>,
    pub intervals: BTreeSet<Name>,
}

pub fn free_names(t: &Term) -> FreeNames {
    let mut out = FreeNames::default();
    collect_free(t, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn collect_face(f: &Face, ibound: &[Name], out: &mut FreeNames) {
    for n in f.names() {
        if !ibound.contains(&n) {
            out.intervals.insert(n);
        }
    }
}

fn collect_interval(r: &IntervalExpr, ibound: &[Name], out: &mut FreeNames) {
    for n in r.free_names() {
        if !ibound.contains(&n) {
            out.intervals.insert(n);
        }
    }
}

fn collect_sys(s: &System, bound: &mut Vec<Name>, ibound: &mut Vec<Name>, out: &mut FreeNames) {
    for b in s {
        collect_face(&b.face, ibound, out);
        collect_free(&b.term, bound, ibound, out);
    }
}

fn collect_ds(
    ds: &DelayedSubst,
    body: &Term,
    bound: &mut Vec<Name>,
    ibound: &mut Vec<Name>,
    out: &mut FreeNames,
) {
    let depth = bound.len();
    for b in ds {
        collect_free(&b.term, &mut bound[..depth].to_vec(), ibound, out);
        if let Some(ty) = &b.ty {
            collect_free(ty, bound, ibound, out);
        }
        bound.push(b.name.clone());
    }
    collect_free(body, bound, ibound, out);
    bound.truncate(depth);
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, ibound: &mut Vec<Name>, out: &mut FreeNames) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.vars.insert(x.clone());
            }
        }
        Term::Zero | Term::Nat | Term::Univ => {}
        Term::Lam(x, a, b) => {
            if let Some(a) = a {
                collect_free(a, bound, ibound, out);
            }
            bound.push(x.clone());
            collect_free(b, bound, ibound, out);
            bound.pop();
        }
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            collect_free(a, bound, ibound, out);
            bound.push(x.clone());
            collect_free(b, bound, ibound, out);
            bound.pop();
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            collect_free(a, bound, ibound, out);
            collect_free(b, bound, ibound, out);
        }
        Term::Fst(a) | Term::Snd(a) | Term::Suc(a) | Term::Loc(_, a) => {
            collect_free(a, bound, ibound, out)
        }
        Term::NatRec(p, z, s, n) => {
            for x in [p, z, s, n] {
                collect_free(x, bound, ibound, out);
            }
        }
        Term::PLam(i, a) => {
            ibound.push(i.clone());
            collect_free(a, bound, ibound, out);
            ibound.pop();
        }
        Term::PApp(a, r) => {
            collect_free(a, bound, ibound, out);
            collect_interval(r, ibound, out);
        }
        Term::Path(a, x, y) => {
            for s in [a, x, y] {
                collect_free(s, bound, ibound, out);
            }
        }
        Term::Sys(s) => collect_sys(s, bound, ibound, out),
        Term::Comp(i, a, s, b) => {
            collect_free(b, bound, ibound, out);
            ibound.push(i.clone());
            collect_free(a, bound, ibound, out);
            collect_sys(s, bound, ibound, out);
            ibound.pop();
        }
        Term::Glue(a, s) | Term::GlueIntro(s, a) => {
            collect_free(a, bound, ibound, out);
            collect_sys(s, bound, ibound, out);
        }
        Term::Unglue(a, ann) => {
            collect_free(a, bound, ibound, out);
            if let Some((b, s)) = ann {
                collect_free(b, bound, ibound, out);
                collect_sys(s, bound, ibound, out);
            }
        }
        Term::Later(ds, a) | Term::Next(ds, a) => collect_ds(ds, a, bound, ibound, out),
        Term::DFix(r, x, a, b) => {
            collect_interval(r, ibound, out);
            if let Some(a) = a {
                collect_free(a, bound, ibound, out);
            }
            bound.push(x.clone());
            collect_free(b, bound, ibound, out);
            bound.pop();
        }
        Term::Fix(r, x, b) => {
            collect_interval(r, ibound, out);
            bound.push(x.clone());
            collect_free(b, bound, ibound, out);
            bound.pop();
        }
    }
}

/// A variant of `x` (by appending primes) avoiding every name in `avoid`.
pub fn freshen(x: &Name, avoid: &BTreeSet<Name>) -> Name {
    let mut s = x.as_str().to_string();
    while avoid.contains(&Name::new(&s)) {
        s.push('\'');
    }
    Name::new(&s)
}

/// A substitution of either a term for a variable or an interval
/// expression for an interval name.
#[derive(Clone, Debug)]
enum Sub<'a> {
    Term(&'a Name, &'a Term, &'a FreeNames),
    Interval(&'a Name, &'a IntervalExpr, &'a BTreeSet<Name>),
}

impl Sub<'_> {
    fn captures_var(&self, x: &Name) -> bool {
        match self {
            Sub::Term(_, _, fv) => fv.vars.contains(x),
            Sub::Interval(..) => false,
        }
    }

    fn captures_interval(&self, i: &Name) -> bool {
        match self {
            Sub::Term(_, _, fv) => fv.intervals.contains(i),
            Sub::Interval(_, _, names) => names.contains(i),
        }
    }

    fn shadows_var(&self, x: &Name) -> bool {
        matches!(self, Sub::Term(y, _, _) if *y == x)
    }

    fn shadows_interval(&self, i: &Name) -> bool {
        matches!(self, Sub::Interval(j, _, _) if *j == i)
    }

    fn interval(&self, r: &IntervalExpr) -> IntervalExpr {
        match self {
            Sub::Interval(i, s, _) => dm_subst(r, i, s),
            Sub::Term(..) => r.clone(),
        }
    }

    fn face(&self, f: &Face) -> Face {
        match self {
            Sub::Interval(i, s, _) => face_subst(f, i, s),
            Sub::Term(..) => f.clone(),
        }
    }
}

/// Capture-avoiding substitution of `u` for the variable `x`.
pub fn subst_term(t: &Term, x: &Name, u: &Term) -> Term {
    let fv = free_names(u);
    apply(t, &Sub::Term(x, u, &fv))
}

/// Substitution of `r` for the interval name `i` in every interval and face
/// position.
pub fn subst_interval(t: &Term, i: &Name, r: &IntervalExpr) -> Term {
    let names = r.free_names();
    apply(t, &Sub::Interval(i, r, &names))
}

fn rename_var(t: &Term, from: &Name, to: &Name) -> Term {
    subst_term(t, from, &Term::Var(to.clone()))
}

fn rename_interval(t: &Term, from: &Name, to: &Name) -> Term {
    subst_interval(t, from, &IntervalExpr::Var(to.clone()))
}

/// Open a term binder for substitution, renaming it if it would capture.
fn under_var(x: &Name, body: &Term, sub: &Sub) -> (Name, Option<Term>) {
    if sub.shadows_var(x) {
        return (x.clone(), None);
    }
    if sub.captures_var(x) {
        let mut avoid = free_names(body).vars;
        if let Sub::Term(y, _, fv) = sub {
            avoid.extend(fv.vars.iter().cloned());
            avoid.insert((*y).clone());
        }
        let y = freshen(x, &avoid);
        let renamed = rename_var(body, x, &y);
        return (y.clone(), Some(apply(&renamed, sub)));
    }
    (x.clone(), Some(apply(body, sub)))
}

fn under_interval(i: &Name, parts: &[&Term], sub: &Sub) -> (Name, Vec<Option<Term>>) {
    if sub.shadows_interval(i) {
        return (i.clone(), parts.iter().map(|_| None).collect());
    }
    if sub.captures_interval(i) {
        let mut avoid = BTreeSet::new();
        for p in parts {
            avoid.extend(free_names(p).intervals);
        }
        match sub {
            Sub::Interval(j, _, names) => {
                avoid.extend(names.iter().cloned());
                avoid.insert((*j).clone());
            }
            Sub::Term(_, _, fv) => avoid.extend(fv.intervals.iter().cloned()),
        }
        let j = freshen(i, &avoid);
        let out = parts
            .iter()
            .map(|p| Some(apply(&rename_interval(p, i, &j), sub)))
            .collect();
        return (j, out);
    }
    (i.clone(), parts.iter().map(|p| Some(apply(p, sub))).collect())
}

fn apply_sys(s: &System, sub: &Sub) -> System {
    s.iter()
        .map(|b| Branch { face: sub.face(&b.face), term: rc(apply(&b.term, sub)) })
        .collect()
}

fn apply_ds(ds: &DelayedSubst, body: &Term, sub: &Sub) -> (DelayedSubst, Term) {
    // Bound terms live outside the binders; types and body inside.
    let mut out = Vec::new();
    let mut rest: Vec<DsBind> = ds.to_vec();
    let mut body = body.clone();
    let mut active = true;
    let mut k = 0;
    while k < rest.len() {
        let b = rest[k].clone();
        let term = apply(&b.term, sub);
        let ty = b.ty.as_ref().map(|t| if active { apply(t, sub) } else { (**t).clone() });
        let mut name = b.name.clone();
        if active && sub.shadows_var(&b.name) {
            active = false;
        } else if active && sub.captures_var(&b.name) {
            let mut avoid = free_names(&body).vars;
            for r in &rest {
                avoid.extend(free_names(&r.term).vars);
                if let Some(t) = &r.ty {
                    avoid.extend(free_names(t).vars);
                }
            }
            if let Sub::Term(y, _, fv) = sub {
                avoid.extend(fv.vars.iter().cloned());
                avoid.insert((*y).clone());
            }
            name = freshen(&b.name, &avoid);
            for r in rest.iter_mut().skip(k + 1) {
                r.ty = r.ty.as_ref().map(|t| rc(rename_var(t, &b.name, &name)));
            }
            body = rename_var(&body, &b.name, &name);
        }
        out.push(DsBind { name, ty: ty.map(rc), term: rc(term) });
        k += 1;
    }
    let body = if active { apply(&body, sub) } else { body };
    (out, body)
}

fn apply(t: &Term, sub: &Sub) -> Term {
    let ap = |x: &Rc<Term>| rc(apply(x, sub));
    match t {
        Term::Var(y) => match sub {
            Sub::Term(x, u, _) if *x == y => (*u).clone(),
            _ => t.clone(),
        },
        Term::Zero | Term::Nat | Term::Univ => t.clone(),
        Term::Lam(x, a, b) => {
            let a2 = a.as_ref().map(ap);
            let (x2, b2) = under_var(x, b, sub);
            Term::Lam(x2, a2, b2.map(rc).unwrap_or_else(|| b.clone()))
        }
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let a2 = ap(a);
            let (x2, b2) = under_var(x, b, sub);
            let b2 = b2.map(rc).unwrap_or_else(|| b.clone());
            if matches!(t, Term::Pi(..)) {
                Term::Pi(x2, a2, b2)
            } else {
                Term::Sigma(x2, a2, b2)
            }
        }
        Term::App(a, b) => Term::App(ap(a), ap(b)),
        Term::Pair(a, b) => Term::Pair(ap(a), ap(b)),
        Term::Fst(a) => Term::Fst(ap(a)),
        Term::Snd(a) => Term::Snd(ap(a)),
        Term::Suc(a) => Term::Suc(ap(a)),
        Term::NatRec(p, z, s, n) => Term::NatRec(ap(p), ap(z), ap(s), ap(n)),
        Term::PLam(i, a) => {
            let (j, parts) = under_interval(i, &[a.as_ref()], sub);
            let a2 = parts[0].clone().map(rc).unwrap_or_else(|| a.clone());
            Term::PLam(j, a2)
        }
        Term::PApp(a, r) => Term::PApp(ap(a), sub.interval(r)),
        Term::Path(a, x, y) => Term::Path(ap(a), ap(x), ap(y)),
        Term::Sys(s) => Term::Sys(apply_sys(s, sub)),
        Term::Comp(i, a, s, b) => {
            let b2 = ap(b);
            let sys_term = Term::Sys(s.clone());
            let (j, parts) = under_interval(i, &[a.as_ref(), &sys_term], sub);
            let a2 = parts[0].clone().map(rc).unwrap_or_else(|| a.clone());
            let s2 = match &parts[1] {
                Some(Term::Sys(s2)) => s2.clone(),
                _ => s.clone(),
            };
            Term::Comp(j, a2, s2, b2)
        }
        Term::Glue(a, s) => Term::Glue(ap(a), apply_sys(s, sub)),
        Term::GlueIntro(s, a) => Term::GlueIntro(apply_sys(s, sub), ap(a)),
        Term::Unglue(a, ann) => Term::Unglue(
            ap(a),
            ann.as_ref().map(|(b, s)| (ap(b), apply_sys(s, sub))),
        ),
        Term::Later(ds, a) => {
            let (ds2, a2) = apply_ds(ds, a, sub);
            Term::Later(ds2, rc(a2))
        }
        Term::Next(ds, a) => {
            let (ds2, a2) = apply_ds(ds, a, sub);
            Term::Next(ds2, rc(a2))
        }
        Term::DFix(r, x, a, b) => {
            let a2 = a.as_ref().map(ap);
            let (x2, b2) = under_var(x, b, sub);
            Term::DFix(sub.interval(r), x2, a2, b2.map(rc).unwrap_or_else(|| b.clone()))
        }
        Term::Fix(r, x, b) => {
            let (x2, b2) = under_var(x, b, sub);
            Term::Fix(sub.interval(r), x2, b2.map(rc).unwrap_or_else(|| b.clone()))
        }
        Term::Loc(sp, a) => Term::Loc(*sp, ap(a)),
    }
}

// Printing. Levels: 0 binders and arrows, 1 products, 2 application and
// keyword forms, 3 atoms.

fn is_compound_interval(r: &IntervalExpr) -> bool {
    matches!(r, IntervalExpr::Meet(..) | IntervalExpr::Join(..))
}

fn fmt_interval_atom(r: &IntervalExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_compound_interval(r) {
        write!(f, "({})", r)
    } else {
        write!(f, "{}", r)
    }
}

fn fmt_sys(s: &System, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[")?;
    for (k, b) in s.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, " {} -> ", b.face)?;
        fmt_term(&b.term, 0, f)?;
    }
    if s.is_empty() {
        write!(f, "]")
    } else {
        write!(f, " ]")
    }
}

fn fmt_ds(ds: &DelayedSubst, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if ds.is_empty() {
        return Ok(());
    }
    write!(f, "[")?;
    for (k, b) in ds.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", b.name)?;
        if let Some(ty) = &b.ty {
            write!(f, " : ")?;
            fmt_term(ty, 0, f)?;
        }
        write!(f, " <- ")?;
        fmt_term(&b.term, 0, f)?;
    }
    write!(f, "] ")
}

// Without a delayed substitution, a system body would be read as one.
fn fmt_later_body(ds: &DelayedSubst, a: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if ds.is_empty() && matches!(a.unloc(), Term::Sys(_)) {
        write!(f, "(")?;
        fmt_term(a, 0, f)?;
        write!(f, ")")
    } else {
        fmt_term(a, 2, f)
    }
}

fn is_binder_form(t: &Term) -> bool {
    matches!(
        t.unloc(),
        Term::Lam(..) | Term::Pi(..) | Term::PLam(..) | Term::DFix(..) | Term::Fix(..)
    )
}

fn level_of(t: &Term) -> u8 {
    match t {
        Term::Lam(..) | Term::Pi(..) | Term::PLam(..) | Term::DFix(..) | Term::Fix(..) => 0,
        Term::Sigma(..) => 1,
        Term::App(..)
        | Term::PApp(..)
        | Term::Suc(..)
        | Term::NatRec(..)
        | Term::Path(..)
        | Term::Comp(..)
        | Term::Glue(..)
        | Term::GlueIntro(..)
        | Term::Unglue(..)
        | Term::Later(..)
        | Term::Next(..) => 2,
        Term::Loc(_, t) => level_of(t),
        _ => 3,
    }
}

fn fmt_term(t: &Term, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Term::Loc(_, a) = t {
        return fmt_term(a, prec, f);
    }
    let lvl = if t.as_numeral().is_some() { 3 } else { level_of(t) };
    if lvl < prec {
        write!(f, "(")?;
        fmt_term(t, 0, f)?;
        return write!(f, ")");
    }
    if let Some(n) = t.as_numeral() {
        return write!(f, "{}", n);
    }
    match t {
        Term::Var(x) => write!(f, "{}", x),
        Term::Zero => write!(f, "0"),
        Term::Nat => write!(f, "N"),
        Term::Univ => write!(f, "U"),
        Term::Lam(x, a, b) => {
            match a {
                Some(a) => {
                    write!(f, "\\({} : ", x)?;
                    fmt_term(a, 0, f)?;
                    write!(f, ") -> ")?;
                }
                None => write!(f, "\\{} -> ", x)?,
            }
            fmt_term(b, 0, f)
        }
        Term::Pi(x, a, b) => {
            if x.as_str() == "_" {
                fmt_term(a, 1, f)?;
            } else {
                write!(f, "({} : ", x)?;
                fmt_term(a, 0, f)?;
                write!(f, ")")?;
            }
            write!(f, " -> ")?;
            fmt_term(b, 0, f)
        }
        Term::Sigma(x, a, b) => {
            if x.as_str() == "_" {
                fmt_term(a, 2, f)?;
            } else {
                write!(f, "({} : ", x)?;
                fmt_term(a, 0, f)?;
                write!(f, ")")?;
            }
            write!(f, " * ")?;
            fmt_term(b, 1, f)
        }
        Term::App(a, b) => {
            let head_ok = matches!(a.unloc(), Term::App(..)) || level_of(a.unloc()) == 3;
            if head_ok {
                fmt_term(a, 2, f)?;
            } else {
                write!(f, "(")?;
                fmt_term(a, 0, f)?;
                write!(f, ")")?;
            }
            write!(f, " ")?;
            fmt_term(b, 3, f)
        }
        Term::Pair(a, b) => {
            write!(f, "(")?;
            fmt_term(a, 0, f)?;
            write!(f, ", ")?;
            fmt_term(b, 0, f)?;
            write!(f, ")")
        }
        Term::Fst(a) => {
            fmt_term(a, 3, f)?;
            write!(f, ".1")
        }
        Term::Snd(a) => {
            fmt_term(a, 3, f)?;
            write!(f, ".2")
        }
        Term::Suc(a) => {
            write!(f, "suc ")?;
            fmt_term(a, 3, f)
        }
        Term::NatRec(p, z, s, n) => {
            write!(f, "natrec")?;
            for x in [p, z, s, n] {
                write!(f, " ")?;
                fmt_term(x, 3, f)?;
            }
            Ok(())
        }
        Term::PLam(i, a) => {
            write!(f, "<{}> ", i)?;
            fmt_term(a, 0, f)
        }
        Term::PApp(a, r) => {
            let head_ok = matches!(a.unloc(), Term::App(..) | Term::PApp(..))
                || level_of(a.unloc()) == 3;
            if head_ok {
                fmt_term(a, 2, f)?;
            } else {
                write!(f, "(")?;
                fmt_term(a, 0, f)?;
                write!(f, ")")?;
            }
            write!(f, " @ ")?;
            fmt_interval_atom(r, f)
        }
        Term::Path(a, x, y) => {
            write!(f, "Path")?;
            for s in [a, x, y] {
                write!(f, " ")?;
                fmt_term(s, 3, f)?;
            }
            Ok(())
        }
        Term::Sys(s) => fmt_sys(s, f),
        Term::Comp(i, a, s, b) => {
            write!(f, "comp {} ", i)?;
            fmt_term(a, 3, f)?;
            write!(f, " ")?;
            fmt_sys(s, f)?;
            write!(f, " ")?;
            fmt_term(b, 3, f)
        }
        Term::Glue(a, s) => {
            write!(f, "Glue ")?;
            fmt_term(a, 3, f)?;
            write!(f, " ")?;
            fmt_sys(s, f)
        }
        Term::GlueIntro(s, a) => {
            write!(f, "glue ")?;
            fmt_sys(s, f)?;
            write!(f, " ")?;
            fmt_term(a, 3, f)
        }
        Term::Unglue(a, ann) => {
            write!(f, "unglue ")?;
            if let Some((b, s)) = ann {
                write!(f, "{{")?;
                fmt_term(b, 3, f)?;
                write!(f, " ")?;
                fmt_sys(s, f)?;
                write!(f, "}} ")?;
            }
            fmt_term(a, 3, f)
        }
        Term::Later(ds, a) => {
            write!(f, "|> ")?;
            fmt_ds(ds, f)?;
            fmt_later_body(ds, a, f)
        }
        Term::Next(ds, a) => {
            write!(f, "next ")?;
            fmt_ds(ds, f)?;
            fmt_later_body(ds, a, f)
        }
        Term::DFix(r, x, a, b) => {
            write!(f, "dfix ")?;
            fmt_interval_atom(r, f)?;
            match a {
                Some(a) => {
                    write!(f, " ({} : ", x)?;
                    fmt_term(a, 0, f)?;
                    write!(f, "). ")?;
                }
                None => write!(f, " {}. ", x)?,
            }
            fmt_term(b, 0, f)
        }
        Term::Fix(r, x, b) => {
            write!(f, "fix ")?;
            fmt_interval_atom(r, f)?;
            write!(f, " {}. ", x)?;
            fmt_term(b, 0, f)
        }
        Term::Loc(_, a) => fmt_term(a, prec, f),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} =\n  {}", self.name, self.ty, self.body)
    }
}

impl fmt::Display for ModuleFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "module {} where", self.name)?;
        for i in &self.imports {
            writeln!(f, "import {}", i)?;
        }
        for d in &self.decls {
            writeln!(f)?;
            writeln!(f, "{}", d)?;
        }
        Ok(())
    }
}

/// Whether a term would need parentheses as an argument.
pub fn needs_parens(t: &Term) -> bool {
    is_binder_form(t) || level_of(t.unloc()) < 3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Rc<Term> {
        rc(Term::var(s))
    }

    #[test]
    fn subst_var_and_capture() {
        let u = Term::var("u");
        assert_eq!(subst_term(&Term::var("x"), &"x".into(), &u), u);
        let lam = Term::Lam("y".into(), None, v("x"));
        let out = subst_term(&lam, &"x".into(), &Term::var("y"));
        assert_eq!(out, Term::Lam("y'".into(), None, v("y")));
    }

    #[test]
    fn subst_into_delayed_substitution() {
        let t = Term::Next(
            vec![DsBind { name: "z".into(), ty: None, term: v("x") }],
            v("z"),
        );
        let out = subst_term(&t, &"x".into(), &Term::var("t"));
        assert_eq!(
            out,
            Term::Next(vec![DsBind { name: "z".into(), ty: None, term: v("t") }], v("z"))
        );
    }

    #[test]
    fn subst_interval_positions() {
        let p = Term::PApp(v("p"), IntervalExpr::var("i"));
        assert_eq!(
            subst_interval(&p, &"i".into(), &IntervalExpr::Zero),
            Term::PApp(v("p"), IntervalExpr::Zero)
        );
        let d = Term::DFix(IntervalExpr::var("i"), "x".into(), None, v("t"));
        assert_eq!(
            subst_interval(&d, &"i".into(), &IntervalExpr::One),
            Term::DFix(IntervalExpr::One, "x".into(), None, v("t"))
        );
        let bound = Term::PLam("i".into(), rc(Term::PApp(v("p"), IntervalExpr::var("i"))));
        assert_eq!(subst_interval(&bound, &"i".into(), &IntervalExpr::Zero), bound);
        let id = subst_interval(&p, &"i".into(), &IntervalExpr::var("i"));
        assert_eq!(id, p);
    }

    #[test]
    fn interval_capture_is_avoided() {
        let t = Term::PLam("j".into(), rc(Term::PApp(v("p"), IntervalExpr::var("i"))));
        let out = subst_interval(&t, &"i".into(), &IntervalExpr::var("j"));
        assert_eq!(
            out,
            Term::PLam("j'".into(), rc(Term::PApp(v("p"), IntervalExpr::var("j"))))
        );
    }

    #[test]
    fn free_names_examples() {
        let id = Term::Lam("x".into(), None, v("x"));
        assert_eq!(free_names(&id), FreeNames::default());
        let r = IntervalExpr::meet(IntervalExpr::var("i"), IntervalExpr::var("j"));
        let t = Term::PLam("i".into(), rc(Term::PApp(v("p"), r)));
        let fv = free_names(&t);
        assert_eq!(fv.vars.into_iter().collect::<Vec<_>>(), vec![Name::new("p")]);
        assert_eq!(fv.intervals.into_iter().collect::<Vec<_>>(), vec![Name::new("j")]);
        let l = Term::Later(vec![DsBind { name: "x".into(), ty: None, term: v("t") }], v("A"));
        let fv = free_names(&l);
        assert!(fv.vars.contains(&Name::new("t")));
        assert!(!fv.vars.contains(&Name::new("x")));
    }

    #[test]
    fn printing() {
        let t = Term::Pi("_".into(), rc(Term::Nat), rc(Term::Nat));
        assert_eq!(t.to_string(), "N -> N");
        let p = Term::PApp(rc(Term::App(v("f"), v("x"))), IntervalExpr::neg(IntervalExpr::var("i")));
        assert_eq!(p.to_string(), "f x @ -i");
        assert_eq!(Term::numeral(3).to_string(), "3");
        let n = Term::Next(vec![DsBind { name: "x".into(), ty: None, term: v("s") }], v("x"));
        assert_eq!(n.to_string(), "next [x <- s] x");
    }
}
