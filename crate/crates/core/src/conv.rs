//! Judgemental equality on values.

use crate::eval::*;
use crate::interval::{face_equal, Face, Name};
use crate::readback::free_vars;
use crate::value::*;
use std::cell::Cell;
use std::rc::Rc;

pub const DEFAULT_FUEL: u64 = 50_000_000;

thread_local! {
    static FUEL: Cell<u64> = const { Cell::new(DEFAULT_FUEL) };
    static EXHAUSTED: Cell<bool> = const { Cell::new(false) };
}

/// Reset the conversion step budget.
pub fn set_fuel(n: u64) {
    FUEL.with(|f| f.set(n));
    EXHAUSTED.with(|e| e.set(false));
}

pub fn fuel_exhausted() -> bool {
    EXHAUSTED.with(|e| e.get())
}

fn tick() -> bool {
    FUEL.with(|f| {
        let n = f.get();
        if n == 0 {
            EXHAUSTED.with(|e| e.set(true));
            false
        } else {
            f.set(n - 1);
            true
        }
    })
}

fn fresh_var(hint: &str, ty: Val) -> Val {
    vvar(Name::fresh(hint), ty)
}

fn fn_domain(v: &Val) -> Option<Val> {
    match &**v {
        Value::Lam(a, _) => Some(a.clone()),
        Value::CompFun { i, line, .. } => match &*act(line, &Sub::dir(i, crate::interval::Dir::One)) {
            Value::Pi(a, _) => Some(a.clone()),
            _ => None,
        },
        Value::Neutral(_) => match &*infer_type(v) {
            Value::Pi(a, _) => Some(a.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn glue_base(v: &Val) -> Option<Val> {
    match &**v {
        Value::GlueIntro(_, a) => Some(a.clone()),
        Value::Neutral(_) => match &*infer_type(v) {
            Value::GlueT(a, equivs) => Some(unglue(v, a, equivs)),
            _ => None,
        },
        _ => None,
    }
}

pub fn conv(a: &Val, b: &Val) -> bool {
    if !tick() {
        return false;
    }
    if Rc::ptr_eq(a, b) {
        return true;
    }
    use Value::*;
    match (&**a, &**b) {
        (Sys(s), _) => s.iter().all(|(c, v)| conv(v, &restrict(b, c))),
        (_, Sys(s)) => s.iter().all(|(c, v)| conv(&restrict(a, c), v)),
        (Lam(..) | CompFun { .. }, _) | (_, Lam(..) | CompFun { .. }) => {
            match fn_domain(a).or_else(|| fn_domain(b)) {
                Some(dom) => {
                    let x = fresh_var("x", dom);
                    conv(&app(a, &x), &app(b, &x))
                }
                None => false,
            }
        }
        (Pair(..), _) | (_, Pair(..)) => {
            if !matches!(&**a, Pair(..) | Neutral(_)) || !matches!(&**b, Pair(..) | Neutral(_)) {
                return false;
            }
            conv(&fst(a), &fst(b)) && conv(&snd(a), &snd(b))
        }
        (PLam(..), _) | (_, PLam(..)) => {
            if !matches!(&**a, PLam(..) | Neutral(_)) || !matches!(&**b, PLam(..) | Neutral(_)) {
                return false;
            }
            let k = crate::interval::Dnf::var(Name::fresh("i"));
            conv(&papp(a, &k), &papp(b, &k))
        }
        (GlueIntro(s1, x1), GlueIntro(s2, x2)) => conv(x1, x2) && conv_system(s1, s2),
        (GlueIntro(s, x), Neutral(_)) | (Neutral(_), GlueIntro(s, x)) => {
            let other = if matches!(&**a, GlueIntro(..)) { b } else { a };
            match glue_base(other) {
                Some(y) => conv(x, &y) && s.iter().all(|(c, t)| conv(t, &restrict(other, c))),
                None => false,
            }
        }
        (Pi(a1, c1), Pi(a2, c2)) | (Sigma(a1, c1), Sigma(a2, c2)) => {
            if std::mem::discriminant(&**a) != std::mem::discriminant(&**b) {
                return false;
            }
            if !conv(a1, a2) {
                return false;
            }
            let x = fresh_var(c1.name.hint(), a1.clone());
            conv(&c1.apply(x.clone()), &c2.apply(x))
        }
        (Path(a1, x1, y1), Path(a2, x2, y2)) => conv(a1, a2) && conv(x1, x2) && conv(y1, y2),
        (Nat, Nat) | (Univ, Univ) | (Zero, Zero) => true,
        (Suc(m), Suc(n)) => conv(m, n),
        (GlueT(a1, s1), GlueT(a2, s2)) => conv(a1, a2) && conv_system(s1, s2),
        (Later(d1), Later(d2)) | (Next(d1), Next(d2)) => {
            std::mem::discriminant(&**a) == std::mem::discriminant(&**b) && conv_ds(d1, d2)
        }
        (Neutral(n1), Neutral(n2)) => conv_neutral(n1, n2),
        _ => false,
    }
}

/// Two systems are equal when they cover the same face and agree on each
/// clause of either.
pub fn conv_system(s1: &VSys, s2: &VSys) -> bool {
    if !face_equal(&sys_face(s1), &sys_face(s2)) {
        return false;
    }
    s1.iter().all(|(c, v)| conv(v, &mk_sys(restrict_sys(s2, c))))
        && s2.iter().all(|(c, v)| conv(&mk_sys(restrict_sys(s1, c)), v))
}

/// Equality under a face restriction, checked clause by clause.
pub fn conv_under(phi: &Face, a: &Val, b: &Val) -> bool {
    phi.clauses().all(|c| conv(&restrict(a, c), &restrict(b, c)))
}

/// The bindings of a delayed substitution that its body actually uses.
pub fn used_pending(ds: &DsVal) -> Vec<Pend> {
    let mut needed = free_vars(&ds.body);
    let mut keep = vec![false; ds.pending.len()];
    for k in (0..ds.pending.len()).rev() {
        if needed.contains(&ds.pending[k].name) {
            keep[k] = true;
            needed.extend(free_vars(&ds.pending[k].ty));
        }
    }
    ds.pending
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.clone())
        .collect()
}

fn conv_ds(d1: &DsVal, d2: &DsVal) -> bool {
    let p1 = used_pending(d1);
    let p2 = used_pending(d2);
    if p1.len() != p2.len() {
        return false;
    }
    let mut taken = vec![false; p2.len()];
    let mut subs: Vec<Sub> = Vec::new();
    let apply = |v: &Val, subs: &[Sub]| subs.iter().fold(v.clone(), |acc, s| act(&acc, s));
    for p in &p1 {
        let found = p2.iter().enumerate().position(|(k, q)| {
            !taken[k] && conv(&p.term, &q.term) && conv(&p.ty, &apply(&q.ty, &subs))
        });
        match found {
            Some(k) => {
                taken[k] = true;
                subs.push(Sub::Tm(p2[k].name.clone(), vvar(p.name.clone(), p.ty.clone())));
            }
            None => return false,
        }
    }
    conv(&d1.body, &apply(&d2.body, &subs))
}

fn conv_neutral(n1: &Neutral, n2: &Neutral) -> bool {
    use Neutral::*;
    match (n1, n2) {
        (Var(x, _), Var(y, _)) => x == y,
        (App(f, a), App(g, b)) => conv(f, g) && conv(a, b),
        (Fst(p), Fst(q)) | (Snd(p), Snd(q)) => {
            std::mem::discriminant(n1) == std::mem::discriminant(n2) && conv(p, q)
        }
        (PApp(p, r), PApp(q, s)) => r == s && conv(p, q),
        (NatRec(m1, z1, s1, k1), NatRec(m2, z2, s2, k2)) => {
            conv(k1, k2) && conv(m1, m2) && conv(z1, z2) && conv(s1, s2)
        }
        (Unglue { arg: a1, base: b1, equivs: e1 }, Unglue { arg: a2, base: b2, equivs: e2 }) => {
            conv(a1, a2) && conv(b1, b2) && conv_system(e1, e2)
        }
        (
            Comp { i: i1, line: l1, tube: t1, base: b1 },
            Comp { i: i2, line: l2, tube: t2, base: b2 },
        ) => {
            let k = crate::interval::Dnf::var(Name::fresh("i"));
            let s1 = Sub::Dim(i1.clone(), k.clone());
            let s2 = Sub::Dim(i2.clone(), k);
            conv(b1, b2)
                && conv(&act(l1, &s1), &act(l2, &s2))
                && conv_system(&act_sys(t1, &s1), &act_sys(t2, &s2))
        }
        (DFix { r: r1, ty: a1, clo: c1 }, DFix { r: r2, ty: a2, clo: c2 }) => {
            if r1 != r2 || !conv(a1, a2) {
                return false;
            }
            let x = fresh_var(c1.name.hint(), later_of(a1.clone()));
            conv(&c1.apply(x.clone()), &c2.apply(x))
        }
        _ => false,
    }
}
