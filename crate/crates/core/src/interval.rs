//! The interval and the face lattice.
//!
//! Interval expressions live in the free De Morgan algebra over a set of
//! names. Equality is decided by a canonical form: negations are pushed to
//! the names, and the result is kept as an irredundant disjunction of
//! conjunctions of literals `i` / `-i` (the free De Morgan algebra on a set
//! `X` is the free bounded distributive lattice on `X` plus a disjoint copy
//! of `X` for the negated names).
//!
//! Faces are kept in the same shape, except that a clause mentioning both
//! `(i=0)` and `(i=1)` is contradictory and is removed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// An interval or term-level name. Ordered by its text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

static FRESH: AtomicU64 = AtomicU64::new(0);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    /// A name that cannot clash with any user-written identifier.
    pub fn fresh(hint: &str) -> Name {
        let n = FRESH.fetch_add(1, Ordering::Relaxed);
        Name(Arc::from(format!("{}%{}", hint.split('%').next().unwrap_or("x"), n)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The user-facing part of the name, with any generated suffix removed.
    pub fn hint(&self) -> &str {
        self.0.split('%').next().unwrap_or("x")
    }

    pub fn is_generated(&self) -> bool {
        self.0.contains('%')
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

/// An endpoint of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Zero,
    One,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Zero => Dir::One,
            Dir::One => Dir::Zero,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dir::Zero => write!(f, "0"),
            Dir::One => write!(f, "1"),
        }
    }
}

/// Surface form of an interval expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalExpr {
    Zero,
    One,
    Var(Name),
    Neg(Box<IntervalExpr>),
    Meet(Box<IntervalExpr>, Box<IntervalExpr>),
    Join(Box<IntervalExpr>, Box<IntervalExpr>),
}

impl IntervalExpr {
    pub fn var(name: impl Into<Name>) -> IntervalExpr {
        IntervalExpr::Var(name.into())
    }

    pub fn neg(r: IntervalExpr) -> IntervalExpr {
        IntervalExpr::Neg(Box::new(r))
    }

    pub fn meet(r: IntervalExpr, s: IntervalExpr) -> IntervalExpr {
        IntervalExpr::Meet(Box::new(r), Box::new(s))
    }

    pub fn join(r: IntervalExpr, s: IntervalExpr) -> IntervalExpr {
        IntervalExpr::Join(Box::new(r), Box::new(s))
    }

    pub fn from_dir(d: Dir) -> IntervalExpr {
        match d {
            Dir::Zero => IntervalExpr::Zero,
            Dir::One => IntervalExpr::One,
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            IntervalExpr::Zero | IntervalExpr::One => {}
            IntervalExpr::Var(n) => {
                out.insert(n.clone());
            }
            IntervalExpr::Neg(r) => r.collect_names(out),
            IntervalExpr::Meet(r, s) | IntervalExpr::Join(r, s) => {
                r.collect_names(out);
                s.collect_names(out);
            }
        }
    }

    pub fn mentions(&self, i: &Name) -> bool {
        match self {
            IntervalExpr::Zero | IntervalExpr::One => false,
            IntervalExpr::Var(n) => n == i,
            IntervalExpr::Neg(r) => r.mentions(i),
            IntervalExpr::Meet(r, s) | IntervalExpr::Join(r, s) => r.mentions(i) || s.mentions(i),
        }
    }
}

/// Structural, capture-free substitution of `s` for `i` in `r`.
pub fn dm_subst(r: &IntervalExpr, i: &Name, s: &IntervalExpr) -> IntervalExpr {
    match r {
        IntervalExpr::Zero => IntervalExpr::Zero,
        IntervalExpr::One => IntervalExpr::One,
        IntervalExpr::Var(n) if n == i => s.clone(),
        IntervalExpr::Var(n) => IntervalExpr::Var(n.clone()),
        IntervalExpr::Neg(a) => IntervalExpr::neg(dm_subst(a, i, s)),
        IntervalExpr::Meet(a, b) => IntervalExpr::meet(dm_subst(a, i, s), dm_subst(b, i, s)),
        IntervalExpr::Join(a, b) => IntervalExpr::join(dm_subst(a, i, s), dm_subst(b, i, s)),
    }
}

/// Equality in the free De Morgan algebra.
pub fn dm_equal(r: &IntervalExpr, s: &IntervalExpr) -> bool {
    Dnf::from_expr(r) == Dnf::from_expr(s)
}

/// The canonical representative of `r`.
pub fn dm_canonical(r: &IntervalExpr) -> IntervalExpr {
    Dnf::from_expr(r).to_expr()
}

/// A literal `i` or `-i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub name: Name,
    pub negated: bool,
}

/// Canonical form of an interval expression: an antichain of clauses, each
/// clause a conjunction of literals. `[]` is 0 and `[[]]` is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dnf {
    clauses: BTreeSet<BTreeSet<Lit>>,
}

impl Dnf {
    pub fn zero() -> Dnf {
        Dnf { clauses: BTreeSet::new() }
    }

    pub fn one() -> Dnf {
        let mut clauses = BTreeSet::new();
        clauses.insert(BTreeSet::new());
        Dnf { clauses }
    }

    pub fn dir(d: Dir) -> Dnf {
        match d {
            Dir::Zero => Dnf::zero(),
            Dir::One => Dnf::one(),
        }
    }

    pub fn lit(name: Name, negated: bool) -> Dnf {
        let mut c = BTreeSet::new();
        c.insert(Lit { name, negated });
        let mut clauses = BTreeSet::new();
        clauses.insert(c);
        Dnf { clauses }
    }

    pub fn var(name: Name) -> Dnf {
        Dnf::lit(name, false)
    }

    pub fn clauses(&self) -> impl Iterator<Item = &BTreeSet<Lit>> {
        self.clauses.iter()
    }

    fn reduce(clauses: BTreeSet<BTreeSet<Lit>>) -> Dnf {
        let keep: BTreeSet<BTreeSet<Lit>> = clauses
            .iter()
            .filter(|c| !clauses.iter().any(|d| d != *c && d.is_subset(c)))
            .cloned()
            .collect();
        Dnf { clauses: keep }
    }

    pub fn from_expr(r: &IntervalExpr) -> Dnf {
        match r {
            IntervalExpr::Zero => Dnf::zero(),
            IntervalExpr::One => Dnf::one(),
            IntervalExpr::Var(n) => Dnf::var(n.clone()),
            IntervalExpr::Neg(a) => Dnf::from_expr(a).neg(),
            IntervalExpr::Meet(a, b) => Dnf::from_expr(a).meet(&Dnf::from_expr(b)),
            IntervalExpr::Join(a, b) => Dnf::from_expr(a).join(&Dnf::from_expr(b)),
        }
    }

    pub fn to_expr(&self) -> IntervalExpr {
        let mut disj: Option<IntervalExpr> = None;
        for c in &self.clauses {
            let mut conj: Option<IntervalExpr> = None;
            for l in c {
                let atom = if l.negated {
                    IntervalExpr::neg(IntervalExpr::Var(l.name.clone()))
                } else {
                    IntervalExpr::Var(l.name.clone())
                };
                conj = Some(match conj {
                    None => atom,
                    Some(acc) => IntervalExpr::meet(acc, atom),
                });
            }
            let conj = conj.unwrap_or(IntervalExpr::One);
            disj = Some(match disj {
                None => conj,
                Some(acc) => IntervalExpr::join(acc, conj),
            });
        }
        disj.unwrap_or(IntervalExpr::Zero)
    }

    pub fn as_dir(&self) -> Option<Dir> {
        if self.clauses.is_empty() {
            Some(Dir::Zero)
        } else if self.clauses.len() == 1 && self.clauses.iter().next().unwrap().is_empty() {
            Some(Dir::One)
        } else {
            None
        }
    }

    pub fn as_var(&self) -> Option<&Name> {
        if self.clauses.len() != 1 {
            return None;
        }
        let c = self.clauses.iter().next().unwrap();
        if c.len() != 1 {
            return None;
        }
        let l = c.iter().next().unwrap();
        if l.negated {
            None
        } else {
            Some(&l.name)
        }
    }

    pub fn meet(&self, other: &Dnf) -> Dnf {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            for d in &other.clauses {
                out.insert(c.union(d).cloned().collect());
            }
        }
        Dnf::reduce(out)
    }

    pub fn join(&self, other: &Dnf) -> Dnf {
        Dnf::reduce(self.clauses.union(&other.clauses).cloned().collect())
    }

    pub fn neg(&self) -> Dnf {
        // -(c1 \/ ... \/ cn) = -c1 /\ ... /\ -cn, each -ci a join of literals.
        let mut acc = Dnf::one();
        for c in &self.clauses {
            let mut d = Dnf::zero();
            for l in c {
                d = d.join(&Dnf::lit(l.name.clone(), !l.negated));
            }
            acc = acc.meet(&d);
        }
        acc
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.clauses
            .iter()
            .flat_map(|c| c.iter().map(|l| l.name.clone()))
            .collect()
    }

    pub fn mentions(&self, i: &Name) -> bool {
        self.clauses.iter().any(|c| c.iter().any(|l| &l.name == i))
    }

    /// Substitute `r` for the name `i`.
    pub fn subst(&self, i: &Name, r: &Dnf) -> Dnf {
        if !self.mentions(i) {
            return self.clone();
        }
        let neg_r = r.neg();
        let mut acc = Dnf::zero();
        for c in &self.clauses {
            let mut conj = Dnf::one();
            for l in c {
                let piece = if &l.name == i {
                    if l.negated {
                        neg_r.clone()
                    } else {
                        r.clone()
                    }
                } else {
                    Dnf::lit(l.name.clone(), l.negated)
                };
                conj = conj.meet(&piece);
            }
            acc = acc.join(&conj);
        }
        acc
    }
}

impl fmt::Display for IntervalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(r: &IntervalExpr, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match r {
                IntervalExpr::Zero => write!(f, "0"),
                IntervalExpr::One => write!(f, "1"),
                IntervalExpr::Var(n) => write!(f, "{}", n),
                // `--` would start a comment.
                IntervalExpr::Neg(a) if matches!(**a, IntervalExpr::Neg(_)) => {
                    write!(f, "-(")?;
                    go(a, 0, f)?;
                    write!(f, ")")
                }
                IntervalExpr::Neg(a) => {
                    write!(f, "-")?;
                    go(a, 3, f)
                }
                IntervalExpr::Meet(a, b) => {
                    if prec > 2 {
                        write!(f, "(")?;
                    }
                    go(a, 2, f)?;
                    write!(f, " /\\ ")?;
                    go(b, 3, f)?;
                    if prec > 2 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                IntervalExpr::Join(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " \\/ ")?;
                    go(b, 2, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

/// A conjunction of face literals `(i=d)`; never contradictory.
pub type Clause = BTreeMap<Name, Dir>;

/// An element of the face lattice in canonical disjunctive normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    clauses: BTreeSet<Clause>,
}

fn clause_subset(c: &Clause, d: &Clause) -> bool {
    c.iter().all(|(n, v)| d.get(n) == Some(v))
}

impl Face {
    pub fn bot() -> Face {
        Face { clauses: BTreeSet::new() }
    }

    pub fn top() -> Face {
        let mut clauses = BTreeSet::new();
        clauses.insert(Clause::new());
        Face { clauses }
    }

    /// The generator `(i=d)`.
    pub fn eq(i: Name, d: Dir) -> Face {
        let mut c = Clause::new();
        c.insert(i, d);
        Face::from_clause(c)
    }

    pub fn from_clause(c: Clause) -> Face {
        let mut clauses = BTreeSet::new();
        clauses.insert(c);
        Face { clauses }
    }

    pub fn from_clauses(cs: impl IntoIterator<Item = Clause>) -> Face {
        Face::reduce(cs.into_iter().collect())
    }

    fn reduce(clauses: BTreeSet<Clause>) -> Face {
        let keep = clauses
            .iter()
            .filter(|c| !clauses.iter().any(|d| d != *c && clause_subset(d, c)))
            .cloned()
            .collect();
        Face { clauses: keep }
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter()
    }

    pub fn is_bot(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.clauses.len() == 1 && self.clauses.iter().next().unwrap().is_empty()
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.clauses.iter().flat_map(|c| c.keys().cloned()).collect()
    }

    pub fn mentions(&self, i: &Name) -> bool {
        self.clauses.iter().any(|c| c.contains_key(i))
    }

    pub fn meet(&self, other: &Face) -> Face {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            for d in &other.clauses {
                if let Some(m) = meet_clause(c, d) {
                    out.insert(m);
                }
            }
        }
        Face::reduce(out)
    }

    pub fn join(&self, other: &Face) -> Face {
        Face::reduce(self.clauses.union(&other.clauses).cloned().collect())
    }

    /// `self <= other`.
    pub fn entails(&self, other: &Face) -> bool {
        self.clauses
            .iter()
            .all(|c| other.clauses.iter().any(|d| clause_subset(d, c)))
    }

    pub fn subst(&self, i: &Name, r: &Dnf) -> Face {
        if !self.mentions(i) {
            return self.clone();
        }
        let mut acc = Face::bot();
        for c in &self.clauses {
            let mut conj = Face::top();
            for (n, d) in c {
                let piece = if n == i {
                    face_of_dnf(r, *d)
                } else {
                    Face::eq(n.clone(), *d)
                };
                conj = conj.meet(&piece);
            }
            acc = acc.join(&conj);
        }
        acc
    }

    /// Restrict by the clause `alpha`: every literal decided by `alpha` is
    /// replaced by its truth value.
    pub fn restrict(&self, alpha: &Clause) -> Face {
        let mut out = BTreeSet::new();
        'outer: for c in &self.clauses {
            let mut rest = Clause::new();
            for (n, d) in c {
                match alpha.get(n) {
                    Some(e) if e == d => {}
                    Some(_) => continue 'outer,
                    None => {
                        rest.insert(n.clone(), *d);
                    }
                }
            }
            out.insert(rest);
        }
        Face::reduce(out)
    }

    pub fn forall(&self, i: &Name) -> Face {
        Face {
            clauses: self
                .clauses
                .iter()
                .filter(|c| !c.contains_key(i))
                .cloned()
                .collect(),
        }
    }
}

/// Conjunction of two clauses, or `None` if contradictory.
pub fn meet_clause(c: &Clause, d: &Clause) -> Option<Clause> {
    let mut out = c.clone();
    for (n, v) in d {
        match out.get(n) {
            Some(w) if w != v => return None,
            _ => {
                out.insert(n.clone(), *v);
            }
        }
    }
    Some(out)
}

/// Whether two clauses can hold together.
pub fn clauses_compatible(c: &Clause, d: &Clause) -> bool {
    d.iter().all(|(n, v)| c.get(n).is_none_or(|w| w == v))
}

fn face_of_dnf(r: &Dnf, d: Dir) -> Face {
    let r = match d {
        Dir::One => r.clone(),
        Dir::Zero => r.neg(),
    };
    let mut out = BTreeSet::new();
    'outer: for c in r.clauses() {
        let mut cl = Clause::new();
        for l in c {
            let v = if l.negated { Dir::Zero } else { Dir::One };
            match cl.get(&l.name) {
                Some(w) if *w != v => continue 'outer,
                _ => {
                    cl.insert(l.name.clone(), v);
                }
            }
        }
        out.insert(cl);
    }
    Face::reduce(out)
}

/// The face `(r = d)`.
pub fn face_of_eq(r: &IntervalExpr, d: Dir) -> Face {
    face_of_dnf(&Dnf::from_expr(r), d)
}

pub fn face_meet(phi: &Face, psi: &Face) -> Face {
    phi.meet(psi)
}

pub fn face_join(phi: &Face, psi: &Face) -> Face {
    phi.join(psi)
}

pub fn face_equal(phi: &Face, psi: &Face) -> bool {
    phi == psi
}

pub fn face_entails(phi: &Face, psi: &Face) -> bool {
    phi.entails(psi)
}

pub fn face_subst(phi: &Face, i: &Name, r: &IntervalExpr) -> Face {
    phi.subst(i, &Dnf::from_expr(r))
}

pub fn face_forall(i: &Name, phi: &Face) -> Face {
    phi.forall(i)
}

pub fn fmt_clause(c: &Clause, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_empty() {
        return write!(f, "(1=1)");
    }
    let mut first = true;
    for (n, d) in c {
        if !first {
            write!(f, " /\\ ")?;
        }
        first = false;
        write!(f, "({}={})", n, d)?;
    }
    Ok(())
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "(0=1)");
        }
        let mut first = true;
        for c in &self.clauses {
            if !first {
                write!(f, " \\/ ")?;
            }
            first = false;
            fmt_clause(c, f)?;
        }
        Ok(())
    }
}
