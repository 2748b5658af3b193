//! Semantic values for normalization by evaluation.
//!
//! Interval and term substitutions on values are both expressed through
//! [`act`]. Neutral values re-enter evaluation when acted on, so a stuck
//! term unsticks as soon as its blocking variable is instantiated.

use crate::eval;
use crate::interval::{Clause, Dir, Dnf, Name};
use crate::syntax::Term;
use std::collections::HashMap;
use std::rc::Rc;

pub type Val = Rc<Value>;

#[derive(Clone, Debug)]
pub enum EnvEntry {
    Val(Val),
    Dim(Dnf),
}

#[derive(Debug)]
struct EnvNode {
    name: Name,
    entry: EnvEntry,
    next: Option<Rc<EnvNode>>,
}

/// Global definitions are closed values.
pub type Globals = HashMap<Name, Val>;

#[derive(Clone, Debug)]
pub struct Env {
    head: Option<Rc<EnvNode>>,
    pub globals: Rc<Globals>,
}

impl Env {
    pub fn new(globals: Rc<Globals>) -> Env {
        Env { head: None, globals }
    }

    pub fn empty() -> Env {
        Env::new(Rc::new(Globals::new()))
    }

    pub fn bind(&self, name: Name, v: Val) -> Env {
        self.push(name, EnvEntry::Val(v))
    }

    pub fn bind_dim(&self, name: Name, r: Dnf) -> Env {
        self.push(name, EnvEntry::Dim(r))
    }

    fn push(&self, name: Name, entry: EnvEntry) -> Env {
        Env {
            head: Some(Rc::new(EnvNode { name, entry, next: self.head.clone() })),
            globals: self.globals.clone(),
        }
    }

    pub fn lookup(&self, name: &Name) -> Option<EnvEntry> {
        let mut cur = &self.head;
        while let Some(node) = cur {
            if &node.name == name {
                return Some(node.entry.clone());
            }
            cur = &node.next;
        }
        self.globals.get(name).map(|v| EnvEntry::Val(v.clone()))
    }

    fn entries(&self) -> Vec<(Name, EnvEntry)> {
        let mut out = Vec::new();
        let mut cur = &self.head;
        while let Some(node) = cur {
            out.push((node.name.clone(), node.entry.clone()));
            cur = &node.next;
        }
        out
    }

    pub fn act(&self, s: &Sub) -> Env {
        let mut env = Env::new(self.globals.clone());
        for (n, e) in self.entries().into_iter().rev() {
            let e = match e {
                EnvEntry::Val(v) => EnvEntry::Val(act(&v, s)),
                EnvEntry::Dim(r) => EnvEntry::Dim(act_dnf(&r, s)),
            };
            env = env.push(n, e);
        }
        env
    }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub name: Name,
    pub body: Rc<Term>,
    pub env: Env,
}

impl Closure {
    pub fn apply(&self, v: Val) -> Val {
        eval::eval(&self.body, &self.env.bind(self.name.clone(), v))
    }

    pub fn act(&self, s: &Sub) -> Closure {
        Closure { name: self.name.clone(), body: self.body.clone(), env: self.env.act(s) }
    }
}

/// A pending binding of a delayed substitution: `name` stands for the
/// contents of `term`, which has type `|> ty` relative to earlier bindings.
#[derive(Clone, Debug)]
pub struct Pend {
    pub name: Name,
    pub ty: Val,
    pub term: Val,
}

#[derive(Clone, Debug)]
pub struct DsVal {
    pub pending: Vec<Pend>,
    pub body: Val,
}

/// A system of values, one per clause. Each value has already been
/// restricted by its clause. An empty clause is the true face.
pub type VSys = Vec<(Clause, Val)>;

#[derive(Debug)]
pub enum Value {
    Pi(Val, Closure),
    Sigma(Val, Closure),
    Path(Val, Val, Val),
    Nat,
    Univ,
    Later(DsVal),
    /// Base type and branches holding `(T, e)` pairs.
    GlueT(Val, VSys),
    Lam(Val, Closure),
    Pair(Val, Val),
    Zero,
    Suc(Val),
    PLam(Name, Val),
    Next(DsVal),
    GlueIntro(VSys, Val),
    Sys(VSys),
    /// Composition at a function type, applied lazily.
    CompFun { i: Name, line: Val, tube: VSys, base: Val },
    Neutral(Neutral),
}

#[derive(Debug)]
pub enum Neutral {
    Var(Name, Val),
    App(Val, Val),
    Fst(Val),
    Snd(Val),
    PApp(Val, Dnf),
    NatRec(Val, Val, Val, Val),
    Unglue { arg: Val, base: Val, equivs: VSys },
    Comp { i: Name, line: Val, tube: VSys, base: Val },
    DFix { r: Dnf, ty: Val, clo: Closure },
}

pub fn vneu(n: Neutral) -> Val {
    Rc::new(Value::Neutral(n))
}

pub fn vvar(name: Name, ty: Val) -> Val {
    vneu(Neutral::Var(name, ty))
}

#[derive(Clone, Debug)]
pub enum Sub {
    Dim(Name, Dnf),
    Tm(Name, Val),
}

impl Sub {
    pub fn dir(name: &Name, d: Dir) -> Sub {
        Sub::Dim(name.clone(), Dnf::dir(d))
    }

    fn name(&self) -> &Name {
        match self {
            Sub::Dim(n, _) | Sub::Tm(n, _) => n,
        }
    }

    fn captures(&self, binder: &Name) -> bool {
        match self {
            Sub::Dim(_, r) => r.mentions(binder),
            Sub::Tm(..) => false,
        }
    }
}

pub fn act_dnf(r: &Dnf, s: &Sub) -> Dnf {
    match s {
        Sub::Dim(i, q) => r.subst(i, q),
        Sub::Tm(..) => r.clone(),
    }
}

/// Rename an interval binder away from a substitution that would capture it.
fn rebind(i: &Name, body: &Val, s: &Sub) -> (Name, Val) {
    if s.captures(i) {
        let j = Name::fresh(i.hint());
        let b = act(body, &Sub::Dim(i.clone(), Dnf::var(j.clone())));
        (j.clone(), act(&b, s))
    } else {
        (i.clone(), act(body, s))
    }
}

fn rebind_comp(i: &Name, line: &Val, tube: &VSys, s: &Sub) -> (Name, Val, VSys) {
    if s.captures(i) {
        let j = Name::fresh(i.hint());
        let ren = Sub::Dim(i.clone(), Dnf::var(j.clone()));
        let line = act(&act(line, &ren), s);
        let tube = act_sys(&act_sys(tube, &ren), s);
        (j, line, tube)
    } else {
        (i.clone(), act(line, s), act_sys(tube, s))
    }
}

pub fn act(v: &Val, s: &Sub) -> Val {
    use Value::*;
    match &**v {
        Nat | Univ | Zero => v.clone(),
        Pi(a, c) => Rc::new(Pi(act(a, s), c.act(s))),
        Sigma(a, c) => Rc::new(Sigma(act(a, s), c.act(s))),
        Path(a, x, y) => Rc::new(Path(act(a, s), act(x, s), act(y, s))),
        Later(ds) => eval::mk_later(act_pending(&ds.pending, s), act(&ds.body, s)),
        Next(ds) => eval::mk_next(act_pending(&ds.pending, s), act(&ds.body, s)),
        GlueT(a, sys) => eval::glue_type(act(a, s), act_sys(sys, s)),
        Lam(a, c) => Rc::new(Lam(act(a, s), c.act(s))),
        Pair(a, b) => Rc::new(Pair(act(a, s), act(b, s))),
        Suc(a) => Rc::new(Suc(act(a, s))),
        PLam(i, b) => {
            if i == s.name() {
                return v.clone();
            }
            let (j, b) = rebind(i, b, s);
            Rc::new(PLam(j, b))
        }
        GlueIntro(sys, a) => eval::glue_intro(act_sys(sys, s), act(a, s)),
        Sys(sys) => eval::mk_sys(act_sys(sys, s)),
        CompFun { i, line, tube, base } => {
            let (j, line, tube) = rebind_comp(i, line, tube, s);
            crate::comp::comp(&j, &line, &tube, &act(base, s))
        }
        Neutral(n) => act_neutral(v, n, s),
    }
}

fn act_neutral(v: &Val, n: &Neutral, s: &Sub) -> Val {
    use Neutral::*;
    match n {
        Var(x, ty) => match s {
            Sub::Tm(y, w) if x == y => w.clone(),
            Sub::Dim(..) if is_closed_type(ty) => v.clone(),
            _ => vvar(x.clone(), act(ty, s)),
        },
        App(f, a) => eval::app(&act(f, s), &act(a, s)),
        Fst(p) => eval::fst(&act(p, s)),
        Snd(p) => eval::snd(&act(p, s)),
        PApp(p, r) => eval::papp(&act(p, s), &act_dnf(r, s)),
        NatRec(m, z, f, k) => eval::natrec(&act(m, s), &act(z, s), &act(f, s), &act(k, s)),
        Unglue { arg, base, equivs } => {
            eval::unglue(&act(arg, s), &act(base, s), &act_sys(equivs, s))
        }
        Comp { i, line, tube, base } => {
            let (j, line, tube) = rebind_comp(i, line, tube, s);
            crate::comp::comp(&j, &line, &tube, &act(base, s))
        }
        DFix { r, ty, clo } => eval::dfix(act_dnf(r, s), act(ty, s), clo.act(s)),
    }
}

fn is_closed_type(ty: &Val) -> bool {
    matches!(&**ty, Value::Nat | Value::Univ)
}

fn act_pending(ps: &[Pend], s: &Sub) -> Vec<Pend> {
    ps.iter()
        .map(|p| Pend { name: p.name.clone(), ty: act(&p.ty, s), term: act(&p.term, s) })
        .collect()
}

/// Restrict a value by a clause of endpoint assignments.
pub fn restrict(v: &Val, c: &Clause) -> Val {
    let mut out = v.clone();
    for (n, d) in c {
        out = act(&out, &Sub::dir(n, *d));
    }
    out
}

pub fn act_sys(sys: &VSys, s: &Sub) -> VSys {
    let mut out = Vec::new();
    for (c, v) in sys {
        match s {
            Sub::Dim(i, r) if c.contains_key(i) => {
                let face = crate::interval::Face::from_clause(c.clone()).subst(i, r);
                for c2 in face.clauses() {
                    out.push((c2.clone(), restrict(v, c2)));
                }
            }
            _ => {
                let w = act(v, s);
                out.push((c.clone(), restrict(&w, c)));
            }
        }
    }
    out
}

/// Restrict a whole system by a clause; branches contradicting it vanish.
pub fn restrict_sys(sys: &VSys, c: &Clause) -> VSys {
    let mut out = sys.clone();
    for (n, d) in c {
        out = act_sys(&out, &Sub::dir(n, *d));
    }
    out
}

pub fn sys_top(sys: &VSys) -> Option<&Val> {
    sys.iter().find(|(c, _)| c.is_empty()).map(|(_, v)| v)
}

pub fn map_sys(sys: &VSys, f: impl Fn(&Val, &Clause) -> Val) -> VSys {
    sys.iter().map(|(c, v)| (c.clone(), f(v, c))).collect()
}

pub fn sys_face(sys: &VSys) -> crate::interval::Face {
    crate::interval::Face::from_clauses(sys.iter().map(|(c, _)| c.clone()))
}
