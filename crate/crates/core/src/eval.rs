//! Evaluation of core terms into values, and the eliminators on values.

use crate::comp;
use crate::interval::{Dir, Dnf, Face, IntervalExpr, Name};
use crate::syntax::{DelayedSubst, System, Term};
use crate::value::*;
use std::rc::Rc;

pub fn eval_dim(r: &IntervalExpr, env: &Env) -> Dnf {
    match r {
        IntervalExpr::Zero => Dnf::zero(),
        IntervalExpr::One => Dnf::one(),
        IntervalExpr::Var(n) => match env.lookup(n) {
            Some(EnvEntry::Dim(d)) => d,
            _ => Dnf::var(n.clone()),
        },
        IntervalExpr::Neg(a) => eval_dim(a, env).neg(),
        IntervalExpr::Meet(a, b) => eval_dim(a, env).meet(&eval_dim(b, env)),
        IntervalExpr::Join(a, b) => eval_dim(a, env).join(&eval_dim(b, env)),
    }
}

pub fn eval_face(phi: &Face, env: &Env) -> Face {
    let mut out = Face::bot();
    for c in phi.clauses() {
        let mut conj = Face::top();
        for (n, d) in c {
            let r = eval_dim(&IntervalExpr::Var(n.clone()), env);
            conj = conj.meet(&Face::eq(n.clone(), *d).subst(n, &r));
        }
        out = out.join(&conj);
    }
    out
}

pub fn restrict_env(env: &Env, c: &crate::interval::Clause) -> Env {
    let mut out = env.clone();
    for (n, d) in c {
        out = out.act(&Sub::dir(n, *d));
    }
    out
}

pub fn eval_sys(sys: &System, env: &Env) -> VSys {
    let mut out = Vec::new();
    for b in sys {
        let face = eval_face(&b.face, env);
        for c in face.clauses() {
            out.push((c.clone(), eval(&b.term, &restrict_env(env, c))));
        }
    }
    out
}

fn eval_ds(ds: &DelayedSubst, env: &Env) -> (Vec<Pend>, Env) {
    let mut inner = env.clone();
    let mut pending = Vec::new();
    for b in ds {
        let term = eval(&b.term, env);
        let ty = match &b.ty {
            Some(t) => eval(t, &inner),
            None => panic!("internal: delayed substitution binding `{}` lacks a type", b.name),
        };
        let p = Name::fresh(b.name.hint());
        inner = inner.bind(b.name.clone(), vvar(p.clone(), ty.clone()));
        pending.push(Pend { name: p, ty, term });
    }
    (pending, inner)
}

pub fn eval(t: &Term, env: &Env) -> Val {
    match t {
        Term::Loc(_, t) => eval(t, env),
        Term::Var(x) => match env.lookup(x) {
            Some(EnvEntry::Val(v)) => v,
            Some(EnvEntry::Dim(_)) => panic!("internal: interval `{}` used as a term", x),
            None => panic!("internal: unbound variable `{}`", x),
        },
        Term::Lam(x, a, b) => {
            let a = match a {
                Some(a) => eval(a, env),
                None => panic!("internal: unannotated lambda `{}`", x),
            };
            Rc::new(Value::Lam(a, Closure { name: x.clone(), body: b.clone(), env: env.clone() }))
        }
        Term::App(f, a) => app(&eval(f, env), &eval(a, env)),
        Term::Pi(x, a, b) => Rc::new(Value::Pi(
            eval(a, env),
            Closure { name: x.clone(), body: b.clone(), env: env.clone() },
        )),
        Term::Sigma(x, a, b) => Rc::new(Value::Sigma(
            eval(a, env),
            Closure { name: x.clone(), body: b.clone(), env: env.clone() },
        )),
        Term::Pair(a, b) => Rc::new(Value::Pair(eval(a, env), eval(b, env))),
        Term::Fst(p) => fst(&eval(p, env)),
        Term::Snd(p) => snd(&eval(p, env)),
        Term::Zero => Rc::new(Value::Zero),
        Term::Suc(n) => Rc::new(Value::Suc(eval(n, env))),
        Term::NatRec(m, z, s, n) => {
            natrec(&eval(m, env), &eval(z, env), &eval(s, env), &eval(n, env))
        }
        Term::Nat => Rc::new(Value::Nat),
        Term::Univ => Rc::new(Value::Univ),
        Term::PLam(i, t) => {
            let j = Name::fresh(i.hint());
            let body = eval(t, &env.bind_dim(i.clone(), Dnf::var(j.clone())));
            Rc::new(Value::PLam(j, body))
        }
        Term::PApp(p, r) => papp(&eval(p, env), &eval_dim(r, env)),
        Term::Path(a, x, y) => Rc::new(Value::Path(eval(a, env), eval(x, env), eval(y, env))),
        Term::Sys(sys) => mk_sys(eval_sys(sys, env)),
        Term::Comp(i, a, sys, b) => {
            let j = Name::fresh(i.hint());
            let inner = env.bind_dim(i.clone(), Dnf::var(j.clone()));
            comp::comp(&j, &eval(a, &inner), &eval_sys(sys, &inner), &eval(b, env))
        }
        Term::Glue(a, sys) => glue_type(eval(a, env), eval_sys(sys, env)),
        Term::GlueIntro(sys, a) => glue_intro(eval_sys(sys, env), eval(a, env)),
        Term::Unglue(b, ann) => match ann {
            Some((a, sys)) => unglue(&eval(b, env), &eval(a, env), &eval_sys(sys, env)),
            None => panic!("internal: unannotated unglue"),
        },
        Term::Later(ds, a) => {
            let (pending, inner) = eval_ds(ds, env);
            mk_later(pending, eval(a, &inner))
        }
        Term::Next(ds, t) => {
            let (pending, inner) = eval_ds(ds, env);
            mk_next(pending, eval(t, &inner))
        }
        Term::DFix(r, x, a, t) => {
            let a = match a {
                Some(a) => eval(a, env),
                None => panic!("internal: unannotated dfix"),
            };
            dfix(
                eval_dim(r, env),
                a,
                Closure { name: x.clone(), body: t.clone(), env: env.clone() },
            )
        }
        Term::Fix(..) => panic!("internal: fix must be elaborated before evaluation"),
    }
}

fn distribute(sys: &VSys, f: impl Fn(&Val, &crate::interval::Clause) -> Val) -> Val {
    mk_sys(map_sys(sys, f))
}

pub fn app(f: &Val, a: &Val) -> Val {
    match &**f {
        Value::Lam(_, c) => c.apply(a.clone()),
        Value::CompFun { i, line, tube, base } => comp::comp_pi(i, line, tube, base, a),
        Value::Sys(sys) => distribute(sys, |g, c| app(g, &restrict(a, c))),
        Value::Neutral(_) => vneu(Neutral::App(f.clone(), a.clone())),
        v => panic!("internal: application of non-function {:?}", v),
    }
}

pub fn fst(p: &Val) -> Val {
    match &**p {
        Value::Pair(a, _) => a.clone(),
        Value::Sys(sys) => distribute(sys, |q, _| fst(q)),
        Value::Neutral(_) => vneu(Neutral::Fst(p.clone())),
        v => panic!("internal: first projection of {:?}", v),
    }
}

pub fn snd(p: &Val) -> Val {
    match &**p {
        Value::Pair(_, b) => b.clone(),
        Value::Sys(sys) => distribute(sys, |q, _| snd(q)),
        Value::Neutral(_) => vneu(Neutral::Snd(p.clone())),
        v => panic!("internal: second projection of {:?}", v),
    }
}

pub fn papp(p: &Val, r: &Dnf) -> Val {
    match &**p {
        Value::PLam(i, b) => act(b, &Sub::Dim(i.clone(), r.clone())),
        Value::Sys(sys) => distribute(sys, |q, c| papp(q, &restrict_dnf(r, c))),
        Value::Neutral(_) => match r.as_dir() {
            Some(d) => match &*infer_type(p) {
                Value::Path(_, x, y) => match d {
                    Dir::Zero => x.clone(),
                    Dir::One => y.clone(),
                },
                ty => panic!("internal: path application at type {:?}", ty),
            },
            None => vneu(Neutral::PApp(p.clone(), r.clone())),
        },
        v => panic!("internal: path application of {:?}", v),
    }
}

pub fn restrict_dnf(r: &Dnf, c: &crate::interval::Clause) -> Dnf {
    let mut out = r.clone();
    for (n, d) in c {
        out = out.subst(n, &Dnf::dir(*d));
    }
    out
}

pub fn natrec(m: &Val, z: &Val, s: &Val, n: &Val) -> Val {
    match &**n {
        Value::Zero => z.clone(),
        Value::Suc(k) => app(&app(s, k), &natrec(m, z, s, k)),
        Value::Sys(sys) => distribute(sys, |k, c| {
            natrec(&restrict(m, c), &restrict(z, c), &restrict(s, c), k)
        }),
        Value::Neutral(_) => vneu(Neutral::NatRec(m.clone(), z.clone(), s.clone(), n.clone())),
        v => panic!("internal: natrec on {:?}", v),
    }
}

/// The function part of a glue branch `(T, (f, contr))`.
pub fn equiv_fun(branch: &Val) -> Val {
    fst(&snd(branch))
}

pub fn equiv_contr(branch: &Val) -> Val {
    snd(&snd(branch))
}

pub fn unglue(b: &Val, base: &Val, equivs: &VSys) -> Val {
    if let Some(e) = sys_top(equivs) {
        return app(&equiv_fun(e), b);
    }
    if equivs.is_empty() {
        return b.clone();
    }
    match &**b {
        Value::GlueIntro(_, a) => a.clone(),
        Value::Sys(sys) => distribute(sys, |x, c| {
            unglue(x, &restrict(base, c), &restrict_sys(equivs, c))
        }),
        Value::Neutral(_) => vneu(Neutral::Unglue {
            arg: b.clone(),
            base: base.clone(),
            equivs: equivs.clone(),
        }),
        v => panic!("internal: unglue of {:?}", v),
    }
}

pub fn glue_type(a: Val, sys: VSys) -> Val {
    if let Some(e) = sys_top(&sys) {
        return fst(e);
    }
    if sys.is_empty() {
        return a;
    }
    Rc::new(Value::GlueT(a, sys))
}

pub fn glue_intro(sys: VSys, a: Val) -> Val {
    if let Some(t) = sys_top(&sys) {
        return t.clone();
    }
    if sys.is_empty() {
        return a;
    }
    Rc::new(Value::GlueIntro(sys, a))
}

pub fn mk_sys(sys: VSys) -> Val {
    match sys_top(&sys) {
        Some(v) => v.clone(),
        None => Rc::new(Value::Sys(sys)),
    }
}

/// Splice bindings whose terms are `next` values into the surrounding
/// substitution. Bindings with the same name come from the same source and
/// are shared.
fn resolve(pending: Vec<Pend>, body: Val) -> DsVal {
    let mut out: Vec<Pend> = Vec::new();
    let mut subs: Vec<Sub> = Vec::new();
    for p in pending {
        let mut ty = p.ty;
        for s in &subs {
            ty = act(&ty, s);
        }
        match &*p.term {
            Value::Next(inner) => {
                for q in &inner.pending {
                    if !out.iter().any(|o| o.name == q.name) {
                        out.push(q.clone());
                    }
                }
                subs.push(Sub::Tm(p.name.clone(), inner.body.clone()));
            }
            _ => {
                if !out.iter().any(|o| o.name == p.name) {
                    out.push(Pend { name: p.name, ty, term: p.term });
                }
            }
        }
    }
    let mut body = body;
    for s in &subs {
        body = act(&body, s);
    }
    DsVal { pending: out, body }
}

pub fn mk_later(pending: Vec<Pend>, body: Val) -> Val {
    Rc::new(Value::Later(resolve(pending, body)))
}

pub fn mk_next(pending: Vec<Pend>, body: Val) -> Val {
    let ds = resolve(pending, body);
    if let Value::Neutral(Neutral::Var(x, _)) = &*ds.body {
        if let Some(p) = ds.pending.iter().find(|p| &p.name == x) {
            return p.term.clone();
        }
    }
    Rc::new(Value::Next(ds))
}

pub fn dfix(r: Dnf, ty: Val, clo: Closure) -> Val {
    if r.as_dir() == Some(Dir::One) {
        let stuck = dfix(Dnf::zero(), ty, clo.clone());
        return mk_next(Vec::new(), clo.apply(stuck));
    }
    vneu(Neutral::DFix { r, ty, clo })
}

pub fn later_of(ty: Val) -> Val {
    Rc::new(Value::Later(DsVal { pending: Vec::new(), body: ty }))
}

/// The type of a neutral value.
pub fn infer_type(v: &Val) -> Val {
    let n = match &**v {
        Value::Neutral(n) => n,
        other => panic!("internal: type of non-neutral {:?}", other),
    };
    match n {
        Neutral::Var(_, ty) => ty.clone(),
        Neutral::App(f, a) => match &*infer_type(f) {
            Value::Pi(_, c) => c.apply(a.clone()),
            ty => panic!("internal: applied neutral has type {:?}", ty),
        },
        Neutral::Fst(p) => match &*infer_type(p) {
            Value::Sigma(a, _) => a.clone(),
            ty => panic!("internal: projected neutral has type {:?}", ty),
        },
        Neutral::Snd(p) => match &*infer_type(p) {
            Value::Sigma(_, c) => c.apply(fst(p)),
            ty => panic!("internal: projected neutral has type {:?}", ty),
        },
        Neutral::PApp(p, _) => match &*infer_type(p) {
            Value::Path(a, _, _) => a.clone(),
            ty => panic!("internal: path-applied neutral has type {:?}", ty),
        },
        Neutral::NatRec(m, _, _, k) => app(m, k),
        Neutral::Unglue { base, .. } => base.clone(),
        Neutral::Comp { i, line, .. } => act(line, &Sub::dir(i, Dir::One)),
        Neutral::DFix { ty, .. } => later_of(ty.clone()),
    }
}
