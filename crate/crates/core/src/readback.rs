//! Reading values back into terms.
//!
//! Normal forms are eta-short for functions, pairs and paths whose body is
//! a neutral applied to the bound variable.
//!
//! Bound names are chosen deterministically: the binder's hint with the
//! smallest numeric suffix that is not already in scope. Delayed
//! substitutions are put in a canonical form on the way out: unused
//! bindings are dropped, a body that is just the last binding is
//! contracted, and independent bindings are sorted.

use crate::interval::{Clause, Dnf, Face, IntervalExpr, Name};
use crate::syntax::{free_names, rc, Branch, DsBind, System, Term};
use crate::value::*;
use std::collections::{BTreeSet, HashMap};

/// Display names for value-level names currently in scope.
#[derive(Clone, Debug, Default)]
pub struct Names {
    stack: Vec<(Name, Name)>,
    counts: HashMap<Name, usize>,
    uniform: bool,
}

impl Names {
    pub fn new() -> Names {
        Names::default()
    }

    pub fn push(&mut self, value_name: Name, display: Name) {
        *self.counts.entry(display.clone()).or_insert(0) += 1;
        self.stack.push((value_name, display));
    }

    pub fn pop(&mut self) {
        if let Some((_, d)) = self.stack.pop() {
            if let Some(c) = self.counts.get_mut(&d) {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(&d);
                }
            }
        }
    }

    pub fn display(&self, n: &Name) -> Name {
        self.stack
            .iter()
            .rev()
            .find(|(v, _)| v == n)
            .map(|(_, d)| d.clone())
            .unwrap_or_else(|| n.clone())
    }

    pub fn in_use(&self, d: &Name) -> bool {
        self.counts.contains_key(d)
    }

    /// Ignore binder hints, so alpha-equivalent values print identically.
    pub fn uniform(mut self) -> Names {
        self.uniform = true;
        self
    }

    pub fn choose(&self, hint: &str) -> Name {
        let base = if self.uniform {
            "v"
        } else if hint.is_empty() || hint == "_" {
            "x"
        } else {
            hint
        };
        let cand = Name::new(base);
        if !self.in_use(&cand) {
            return cand;
        }
        let mut k = 1usize;
        loop {
            let cand = Name::new(&format!("{}{}", base, k));
            if !self.in_use(&cand) {
                return cand;
            }
            k += 1;
        }
    }

    fn bind(&mut self, hint: &str) -> (Name, Name) {
        let v = Name::fresh(hint);
        let d = self.choose(hint);
        self.push(v.clone(), d.clone());
        (v, d)
    }
}

pub fn readback(v: &Val, names: &mut Names) -> Term {
    Reader { names }.val(v)
}

/// Free value-level variable names of a value.
pub fn free_vars(v: &Val) -> BTreeSet<Name> {
    free_names(&readback(v, &mut Names::new())).vars
}

struct Reader<'a> {
    names: &'a mut Names,
}

impl Reader<'_> {
    fn dim(&self, r: &Dnf) -> IntervalExpr {
        rename_expr(&r.to_expr(), self.names)
    }

    fn clause(&self, c: &Clause) -> Face {
        Face::from_clause(c.iter().map(|(n, d)| (self.names.display(n), *d)).collect())
    }

    fn sys(&mut self, sys: &VSys) -> System {
        sys.iter()
            .map(|(c, v)| Branch { face: self.clause(c), term: rc(self.val(v)) })
            .collect()
    }

    fn binder(&mut self, hint: &str, ty: &Val, f: impl FnOnce(Val) -> Val) -> (Name, Term) {
        let (x, d) = self.names.bind(hint);
        let body = self.val(&f(vvar(x, ty.clone())));
        self.names.pop();
        (d, body)
    }

    fn dim_binder(&mut self, i: &Name, f: impl FnOnce(&mut Self, &Name) -> Term) -> (Name, Term) {
        let (k, d) = self.names.bind(i.hint());
        let body = f(self, &k);
        self.names.pop();
        (d, body)
    }

    fn dependent(&mut self, a: &Val, c: &Closure) -> (Name, Term, Term) {
        let dom = self.val(a);
        let (d, body) = self.binder(c.name.hint(), a, |x| c.apply(x));
        let d = if free_names(&body).vars.contains(&d) { d } else { Name::new("_") };
        (d, dom, body)
    }

    fn comp(&mut self, i: &Name, line: &Val, tube: &VSys, base: &Val) -> Term {
        let base = self.val(base);
        let mut line_t = None;
        let (d, tube_t) = self.dim_binder(i, |r, k| {
            let ren = Sub::Dim(i.clone(), Dnf::var(k.clone()));
            line_t = Some(r.val(&act(line, &ren)));
            let tube2 = act_sys(tube, &ren);
            Term::Sys(r.sys(&tube2))
        });
        let tube_t = match tube_t {
            Term::Sys(s) => s,
            _ => unreachable!(),
        };
        Term::Comp(d, rc(line_t.unwrap()), tube_t, rc(base))
    }

    fn val(&mut self, v: &Val) -> Term {
        match &**v {
            Value::Pi(a, c) => {
                let (d, a, b) = self.dependent(a, c);
                Term::Pi(d, rc(a), rc(b))
            }
            Value::Sigma(a, c) => {
                let (d, a, b) = self.dependent(a, c);
                Term::Sigma(d, rc(a), rc(b))
            }
            Value::Path(a, x, y) => Term::Path(rc(self.val(a)), rc(self.val(x)), rc(self.val(y))),
            Value::Nat => Term::Nat,
            Value::Univ => Term::Univ,
            Value::Zero => Term::Zero,
            Value::Suc(n) => Term::Suc(rc(self.val(n))),
            Value::Lam(a, c) => {
                let dom = self.val(a);
                let (d, body) = self.binder(c.name.hint(), a, |x| c.apply(x));
                match &body {
                    Term::App(f, x) if matches!(&**x, Term::Var(y) if *y == d) && !free_names(f).vars.contains(&d) => {
                        (**f).clone()
                    }
                    _ => Term::Lam(d, Some(rc(dom)), rc(body)),
                }
            }
            Value::Pair(a, b) => {
                let (a, b) = (self.val(a), self.val(b));
                match (&a, &b) {
                    (Term::Fst(p), Term::Snd(q)) if p == q => (**p).clone(),
                    _ => Term::Pair(rc(a), rc(b)),
                }
            }
            Value::PLam(i, b) => {
                let (d, body) = self.dim_binder(i, |r, k| {
                    let w = act(b, &Sub::Dim(i.clone(), Dnf::var(k.clone())));
                    r.val(&w)
                });
                match &body {
                    Term::PApp(p, IntervalExpr::Var(j)) if *j == d && !free_names(p).intervals.contains(&d) => {
                        (**p).clone()
                    }
                    _ => Term::PLam(d, rc(body)),
                }
            }
            Value::Later(ds) => match self.canon_ds(ds, false) {
                Ok((binds, body)) => Term::Later(binds, rc(body)),
                Err(t) => t,
            },
            Value::Next(ds) => match self.canon_ds(ds, true) {
                Ok((binds, body)) => Term::Next(binds, rc(body)),
                Err(t) => t,
            },
            Value::GlueT(a, sys) => {
                let a = self.val(a);
                Term::Glue(rc(a), self.sys(sys))
            }
            Value::GlueIntro(sys, a) => {
                let s = self.sys(sys);
                Term::GlueIntro(s, rc(self.val(a)))
            }
            Value::Sys(sys) => Term::Sys(self.sys(sys)),
            Value::CompFun { i, line, tube, base } => self.comp(i, line, tube, base),
            Value::Neutral(n) => self.neutral(n),
        }
    }

    fn neutral(&mut self, n: &Neutral) -> Term {
        match n {
            Neutral::Var(x, _) => Term::Var(self.names.display(x)),
            Neutral::App(f, a) => Term::App(rc(self.val(f)), rc(self.val(a))),
            Neutral::Fst(p) => Term::Fst(rc(self.val(p))),
            Neutral::Snd(p) => Term::Snd(rc(self.val(p))),
            Neutral::PApp(p, r) => Term::PApp(rc(self.val(p)), self.dim(r)),
            Neutral::NatRec(m, z, s, k) => Term::NatRec(
                rc(self.val(m)),
                rc(self.val(z)),
                rc(self.val(s)),
                rc(self.val(k)),
            ),
            Neutral::Unglue { arg, base, equivs } => {
                let arg = self.val(arg);
                let base = self.val(base);
                Term::Unglue(rc(arg), Some((rc(base), self.sys(equivs))))
            }
            Neutral::Comp { i, line, tube, base } => self.comp(i, line, tube, base),
            Neutral::DFix { r, ty, clo } => {
                let ty_t = self.val(ty);
                let later = crate::eval::later_of(ty.clone());
                let (d, body) = self.binder(clo.name.hint(), &later, |x| clo.apply(x));
                Term::DFix(self.dim(r), d, Some(rc(ty_t)), rc(body))
            }
        }
    }

    /// Canonical delayed substitution and body, or the bound term itself
    /// when a `next` contracts.
    fn canon_ds(&mut self, ds: &DsVal, is_next: bool) -> Result<(Vec<DsBind>, Term), Term> {
        let terms: Vec<Term> = ds.pending.iter().map(|p| self.val(&p.term)).collect();
        let mut displays = Vec::new();
        let mut tys = Vec::new();
        for p in &ds.pending {
            tys.push(self.val(&p.ty));
            let d = self.names.choose(p.name.hint());
            self.names.push(p.name.clone(), d.clone());
            displays.push(d);
        }
        let body = self.val(&ds.body);
        for _ in &ds.pending {
            self.names.pop();
        }

        // Weakening: keep only bindings the body needs, directly or through
        // the types of other kept bindings.
        let n = ds.pending.len();
        let mut needed: BTreeSet<Name> = free_names(&body).vars;
        let mut keep = vec![false; n];
        for k in (0..n).rev() {
            if needed.contains(&displays[k]) {
                keep[k] = true;
                needed.extend(free_names(&tys[k]).vars);
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&k| keep[k]).collect();

        if is_next {
            if let (Some(&last), Term::Var(x)) = (kept.last(), &body) {
                if x == &displays[last] {
                    return Err(terms[last].clone());
                }
            }
        }

        // Exchange: order independent bindings by their printed terms.
        let deps: Vec<BTreeSet<Name>> = kept.iter().map(|&k| free_names(&tys[k]).vars).collect();
        let mut order = Vec::new();
        let mut placed = vec![false; kept.len()];
        while order.len() < kept.len() {
            let mut best: Option<usize> = None;
            for (a, &k) in kept.iter().enumerate() {
                if placed[a] {
                    continue;
                }
                let ready = kept.iter().enumerate().all(|(b, &k2)| {
                    placed[b] || b == a || !deps[a].contains(&displays[k2])
                });
                if !ready {
                    continue;
                }
                let key = (terms[k].to_string(), tys[k].to_string());
                let better = match best {
                    None => true,
                    Some(bi) => {
                        let kb = kept[bi];
                        key < (terms[kb].to_string(), tys[kb].to_string())
                    }
                };
                if better {
                    best = Some(a);
                }
            }
            let a = best.expect("dependency cycle in delayed substitution");
            placed[a] = true;
            order.push(kept[a]);
        }
        let binds = order
            .into_iter()
            .map(|k| DsBind {
                name: displays[k].clone(),
                ty: Some(rc(tys[k].clone())),
                term: rc(terms[k].clone()),
            })
            .collect();
        Ok((binds, body))
    }
}

pub fn rename_expr(e: &IntervalExpr, names: &Names) -> IntervalExpr {
    match e {
        IntervalExpr::Zero | IntervalExpr::One => e.clone(),
        IntervalExpr::Var(n) => IntervalExpr::Var(names.display(n)),
        IntervalExpr::Neg(a) => IntervalExpr::neg(rename_expr(a, names)),
        IntervalExpr::Meet(a, b) => IntervalExpr::meet(rename_expr(a, names), rename_expr(b, names)),
        IntervalExpr::Join(a, b) => IntervalExpr::join(rename_expr(a, names), rename_expr(b, names)),
    }
}
