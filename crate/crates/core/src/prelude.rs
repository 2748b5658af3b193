//! Definitions every module can use without importing, and which the
//! evaluator needs for composition in the universe and in Glue types.

use crate::check::{check_module, CheckedModule, Scope};
use crate::interval::Name;
use crate::parser::parse_module;
use crate::value::Val;
use std::rc::Rc;

pub const SOURCE: &str = "module prelude where

fiber (T A : U) (f : T -> A) (y : A) : U = (x : T) * Path A y (f x)

isContr (C : U) : U = (c : C) * ((y : C) -> Path C c y)

Equiv (T A : U) : U = (f : T -> A) * ((y : A) -> isContr (fiber T A f y))

idEquiv (A : U) : Equiv A A =
  (\\x -> x, \\y -> ((y, <_> y), \\z -> <i> (z.2 @ i, <j> z.2 @ (i /\\ j))))
";

pub struct Prelude {
    pub module: Rc<CheckedModule>,
    pub equiv: Val,
    pub id_equiv: Val,
    pub fiber: Val,
}

thread_local! {
    static PRELUDE: Rc<Prelude> = build();
}

fn build() -> Rc<Prelude> {
    let parsed = parse_module(SOURCE).expect("prelude parses");
    let module = check_module(&parsed, &Scope::default()).expect("prelude checks");
    let get = |n: &str| module.get(&Name::new(n)).expect("prelude name").val.clone();
    Rc::new(Prelude {
        equiv: get("Equiv"),
        id_equiv: get("idEquiv"),
        fiber: get("fiber"),
        module: Rc::new(module),
    })
}

pub fn values() -> Rc<Prelude> {
    PRELUDE.with(|p| p.clone())
}

pub fn module() -> Rc<CheckedModule> {
    values().module.clone()
}
