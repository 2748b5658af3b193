//! Kan composition, dispatched on the type line.

use crate::eval::*;
use crate::interval::{Clause, Dir, Dnf, Name};
use crate::prelude;
use crate::value::*;
use std::rc::Rc;

fn dim(i: &Name) -> Dnf {
    Dnf::var(i.clone())
}

fn at(v: &Val, i: &Name, d: Dir) -> Val {
    act(v, &Sub::dir(i, d))
}

fn clause(i: &Name, d: Dir) -> Clause {
    let mut c = Clause::new();
    c.insert(i.clone(), d);
    c
}

fn is_neutral(v: &Val) -> bool {
    matches!(&**v, Value::Neutral(_))
}

fn stuck(i: &Name, line: &Val, tube: &VSys, base: &Val) -> Val {
    vneu(Neutral::Comp { i: i.clone(), line: line.clone(), tube: tube.clone(), base: base.clone() })
}

/// `comp i line [tube] base`, where `line` and `tube` may mention `i` and
/// the faces of `tube` do not.
pub fn comp(i: &Name, line: &Val, tube: &VSys, base: &Val) -> Val {
    if let Some(u) = sys_top(tube) {
        return at(u, i, Dir::One);
    }
    match &**line {
        Value::Pi(..) => Rc::new(Value::CompFun {
            i: i.clone(),
            line: line.clone(),
            tube: tube.clone(),
            base: base.clone(),
        }),
        Value::Sigma(a, b) => comp_sigma(i, a, b, tube, base),
        Value::Path(a, lhs, rhs) => comp_path(i, a, lhs, rhs, tube, base),
        Value::Nat => comp_nat(i, tube, base).unwrap_or_else(|| stuck(i, line, tube, base)),
        Value::Univ => comp_univ(i, tube, base).unwrap_or_else(|| stuck(i, line, tube, base)),
        Value::GlueT(a, equivs) => comp_glue(i, a, equivs, base, tube),
        Value::Sys(types) if types.iter().all(|(c, _)| !c.contains_key(i)) => {
            mk_sys(map_sys(types, |ty, c| {
                comp(i, ty, &restrict_sys(tube, c), &restrict(base, c))
            }))
        }
        _ => stuck(i, line, tube, base),
    }
}

fn comp_sigma(i: &Name, a: &Val, b: &Closure, tube: &VSys, base: &Val) -> Val {
    let tube1 = map_sys(tube, |u, _| fst(u));
    let filler = fill(i, a, &tube1, &fst(base));
    let first = at(&filler, i, Dir::One);
    let second = comp(i, &b.apply(filler), &map_sys(tube, |u, _| snd(u)), &snd(base));
    Rc::new(Value::Pair(first, second))
}

/// The path endpoints join the tube as two extra faces.
fn comp_path(i: &Name, a: &Val, lhs: &Val, rhs: &Val, tube: &VSys, base: &Val) -> Val {
    let j = Name::fresh("j");
    let mut tube2 = map_sys(tube, |u, _| papp(u, &dim(&j)));
    tube2.push((clause(&j, Dir::Zero), lhs.clone()));
    tube2.push((clause(&j, Dir::One), rhs.clone()));
    Rc::new(Value::PLam(j.clone(), comp(i, a, &tube2, &papp(base, &dim(&j)))))
}

/// The filler of a composition: a line in `i` that is `base` at 0 and the
/// composite at 1.
pub fn fill(i: &Name, line: &Val, tube: &VSys, base: &Val) -> Val {
    let j = Name::fresh("j");
    let squeeze = Sub::Dim(i.clone(), dim(i).meet(&dim(&j)));
    let mut tube2 = act_sys(tube, &squeeze);
    tube2.push((clause(i, Dir::Zero), base.clone()));
    comp(&j, &act(line, &squeeze), &tube2, base)
}

/// Transport backwards: a line that is `a1` at 1 and ends at type `line(0)`.
fn trans_fill_neg(i: &Name, line: &Val, a1: &Val) -> Val {
    let flip = Sub::Dim(i.clone(), dim(i).neg());
    act(&fill(i, &act(line, &flip), &Vec::new(), a1), &flip)
}

pub fn comp_pi(i: &Name, line: &Val, tube: &VSys, base: &Val, arg: &Val) -> Val {
    let (dom, cod) = match &**line {
        Value::Pi(a, b) => (a, b),
        v => panic!("internal: function composition at {:?}", v),
    };
    let u = trans_fill_neg(i, dom, arg);
    let u0 = at(&u, i, Dir::Zero);
    let tube2 = map_sys(tube, |f, c| app(f, &restrict(&u, c)));
    comp(i, &cod.apply(u.clone()), &tube2, &app(base, &u0))
}

fn comp_nat(i: &Name, tube: &VSys, base: &Val) -> Option<Val> {
    match &**base {
        Value::Zero if tube.iter().all(|(_, u)| matches!(&**u, Value::Zero)) => Some(base.clone()),
        Value::Suc(b) => {
            let mut preds = Vec::new();
            for (c, u) in tube {
                match &**u {
                    Value::Suc(p) => preds.push((c.clone(), p.clone())),
                    _ => return None,
                }
            }
            Some(Rc::new(Value::Suc(comp(i, &Rc::new(Value::Nat), &preds, b))))
        }
        _ => None,
    }
}

/// Composition of types glues the base to the tube's end along the
/// transport equivalence.
fn comp_univ(i: &Name, tube: &VSys, base: &Val) -> Option<Val> {
    if tube.iter().any(|(_, e)| is_neutral(e)) {
        return None;
    }
    let k = Name::fresh("k");
    let p = prelude::values();
    let branches = map_sys(tube, |e, _| {
        let end = at(e, i, Dir::One);
        let rev = act(e, &Sub::Dim(i.clone(), dim(&k).neg()));
        let eq_line = app(&app(&p.equiv, &end), &rev);
        let eq = comp(&k, &eq_line, &Vec::new(), &app(&p.id_equiv, &end));
        Rc::new(Value::Pair(end, eq))
    });
    Some(glue_type(base.clone(), branches))
}

fn comp_glue(i: &Name, a: &Val, equivs: &VSys, wi0: &Val, ws: &VSys) -> Val {
    let p = prelude::values();
    let ai1 = at(a, i, Dir::One);
    let vs = map_sys(ws, |w, c| unglue(w, &restrict(a, c), &restrict_sys(equivs, c)));
    let vsi1 = act_sys(&vs, &Sub::dir(i, Dir::One));
    let vi0 = unglue(wi0, &at(a, i, Dir::Zero), &act_sys(equivs, &Sub::dir(i, Dir::Zero)));
    let vi1_raw = comp(i, a, &vs, &vi0);

    // Fibers over the raw composite on the faces where the glue does not
    // depend on i.
    let mut fibers: VSys = Vec::new();
    for (g, eq) in equivs.iter().filter(|(g, _)| !g.contains_key(i)) {
        let dom = fst(eq);
        let ws_g = restrict_sys(ws, g);
        let w0_g = restrict(wi0, g);
        let us = fill(i, &dom, &ws_g, &w0_g);
        let us1 = at(&us, i, Dir::One);
        let j = Name::fresh("j");
        let mut tube = restrict_sys(&vs, g);
        tube.push((clause(&j, Dir::One), app(&equiv_fun(eq), &us)));
        let path = comp(i, &restrict(a, g), &tube, &restrict(&vi0, g));
        fibers.push((g.clone(), Rc::new(Value::Pair(us1, Rc::new(Value::PLam(j, path))))));
    }

    let wsi1 = act_sys(ws, &Sub::dir(i, Dir::One));
    let equivs1 = act_sys(equivs, &Sub::dir(i, Dir::One));
    let mut total: VSys = Vec::new();
    for (d, eq) in &equivs1 {
        let y = restrict(&vi1_raw, d);
        let fib_ty = app(&app(&app(&app(&p.fiber, &fst(eq)), &restrict(&ai1, d)), &equiv_fun(eq)), &y);
        let contr = app(&equiv_contr(eq), &y);
        let mut partial: VSys = restrict_sys(&wsi1, d)
            .into_iter()
            .zip(restrict_sys(&vsi1, d))
            .map(|((c, w), (_, v))| {
                let k = Name::fresh("k");
                (c, Rc::new(Value::Pair(w, Rc::new(Value::PLam(k, v)))))
            })
            .collect();
        partial.extend(restrict_sys(&fibers, d));
        let j = Name::fresh("j");
        let ext_tube = map_sys(&partial, |x, c| {
            papp(&app(&snd(&restrict(&contr, c)), x), &dim(&j))
        });
        total.push((d.clone(), comp(&j, &fib_ty, &ext_tube, &fst(&contr))));
    }

    let j = Name::fresh("j");
    let mut tube = map_sys(&total, |f, _| papp(&snd(f), &dim(&j)));
    tube.extend(vsi1.iter().cloned());
    let vi1 = comp(&j, &ai1, &tube, &vi1_raw);
    glue_intro(map_sys(&total, |f, _| fst(f)), vi1)
}
