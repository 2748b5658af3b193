//! A typing context for unit tests, built from surface syntax.

use crate::check::{check, check_type, eval_interval, infer, scope_with, Ctx};
use crate::interval::{Dnf, IntervalExpr, Name};
use crate::parser::{parse_interval, parse_term};
use crate::value::{Val, Value};
use std::rc::Rc;

pub struct Scene {
    pub ctx: Ctx,
}

impl Scene {
    /// Declares `name : type` pairs in order; later types may mention
    /// earlier names.
    pub fn new(vars: &[(&str, &str)]) -> Scene {
        let mut s = Scene { ctx: Ctx::new(Rc::new(scope_with(&[]))) };
        for (x, ty) in vars {
            let ty = s.ty(ty);
            s.ctx = s.ctx.bind_var(&Name::new(x), ty).0;
        }
        s
    }

    pub fn dims(mut self, names: &[&str]) -> Scene {
        for i in names {
            self.ctx = self.ctx.bind_dim(&Name::new(i)).0;
        }
        self
    }

    pub fn ty(&self, src: &str) -> Val {
        let t = parse_term(src).expect("type parses");
        self.ctx.eval(&check_type(&self.ctx, &t).unwrap_or_else(|e| panic!("{}: {}", src, e)))
    }

    pub fn at(&self, src: &str, ty: &str) -> Val {
        let t = parse_term(src).expect("term parses");
        let ty = self.ty(ty);
        self.ctx.eval(&check(&self.ctx, &t, &ty).unwrap_or_else(|e| panic!("{}: {}", src, e)))
    }

    pub fn infer(&self, src: &str) -> (Val, Val) {
        let t = parse_term(src).expect("term parses");
        let (core, ty) = infer(&self.ctx, &t).unwrap_or_else(|e| panic!("{}: {}", src, e));
        (self.ctx.eval(&core), ty)
    }

    /// The value-level name of a bound dimension.
    pub fn dim(&self, i: &str) -> Name {
        let d = self.interval(i);
        d.as_var().expect("a dimension").clone()
    }

    pub fn interval(&self, src: &str) -> Dnf {
        let r: IntervalExpr = parse_interval(src).expect("interval parses");
        eval_interval(&self.ctx, &r).expect("interval checks")
    }

    pub fn show(&self, v: &Val) -> String {
        self.ctx.show(v)
    }
}

pub fn is_neutral(v: &Val) -> bool {
    matches!(&**v, Value::Neutral(..))
}
