use gctt_core::interval::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

const NAMES: [&str; 3] = ["i", "j", "k"];

fn arb_expr() -> impl Strategy<Value = IntervalExpr> {
    let leaf = prop_oneof![
        Just(IntervalExpr::Zero),
        Just(IntervalExpr::One),
        (0..3usize).prop_map(|n| IntervalExpr::var(NAMES[n])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(IntervalExpr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IntervalExpr::meet(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| IntervalExpr::join(a, b)),
        ]
    })
}

// The four-element De Morgan algebra 0 < a, b < 1 with -a = a, -b = b.
// It generates the variety, so two terms are equal in the free algebra iff
// they agree under every assignment into it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Four {
    Bot,
    A,
    B,
    Top,
}

fn four_bits(x: Four) -> (bool, bool) {
    match x {
        Four::Bot => (false, false),
        Four::A => (true, false),
        Four::B => (false, true),
        Four::Top => (true, true),
    }
}

fn four_from(b: (bool, bool)) -> Four {
    match b {
        (false, false) => Four::Bot,
        (true, false) => Four::A,
        (false, true) => Four::B,
        (true, true) => Four::Top,
    }
}

fn four_eval(r: &IntervalExpr, env: &BTreeMap<&str, Four>) -> Four {
    match r {
        IntervalExpr::Zero => Four::Bot,
        IntervalExpr::One => Four::Top,
        IntervalExpr::Var(n) => env[n.as_str()],
        IntervalExpr::Neg(a) => match four_eval(a, env) {
            Four::Bot => Four::Top,
            Four::Top => Four::Bot,
            x => x,
        },
        IntervalExpr::Meet(a, b) => {
            let (x1, x2) = four_bits(four_eval(a, env));
            let (y1, y2) = four_bits(four_eval(b, env));
            four_from((x1 && y1, x2 && y2))
        }
        IntervalExpr::Join(a, b) => {
            let (x1, x2) = four_bits(four_eval(a, env));
            let (y1, y2) = four_bits(four_eval(b, env));
            four_from((x1 || y1, x2 || y2))
        }
    }
}

fn all_four_envs() -> Vec<BTreeMap<&'static str, Four>> {
    let vals = [Four::Bot, Four::A, Four::B, Four::Top];
    let mut out = vec![];
    for a in vals {
        for b in vals {
            for c in vals {
                out.push([("i", a), ("j", b), ("k", c)].into_iter().collect());
            }
        }
    }
    out
}

fn oracle_equal(r: &IntervalExpr, s: &IntervalExpr) -> bool {
    all_four_envs()
        .iter()
        .all(|env| four_eval(r, env) == four_eval(s, env))
}

// Faces are interpreted by valuations of the atoms (i=0), (i=1) that never
// make both true. Face equality in the lattice is agreement under all of
// them.
type Valuation = BTreeMap<(String, Dir), bool>;

fn all_valuations() -> Vec<Valuation> {
    // Each name independently: neither, (i=0) only, (i=1) only.
    let mut out = vec![Valuation::new()];
    for n in NAMES {
        let mut next = vec![];
        for v in &out {
            for (z, o) in [(false, false), (true, false), (false, true)] {
                let mut w = v.clone();
                w.insert((n.to_string(), Dir::Zero), z);
                w.insert((n.to_string(), Dir::One), o);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn face_holds(f: &Face, v: &Valuation) -> bool {
    f.clauses()
        .any(|c| c.iter().all(|(n, d)| v[&(n.as_str().to_string(), *d)]))
}

// The atom (r = d) interpreted directly over the syntax of r.
fn eq_holds(r: &IntervalExpr, d: Dir, v: &Valuation) -> bool {
    match (r, d) {
        (IntervalExpr::Zero, Dir::Zero) | (IntervalExpr::One, Dir::One) => true,
        (IntervalExpr::Zero, Dir::One) | (IntervalExpr::One, Dir::Zero) => false,
        (IntervalExpr::Var(n), d) => v[&(n.as_str().to_string(), d)],
        (IntervalExpr::Neg(a), d) => eq_holds(a, d.flip(), v),
        (IntervalExpr::Meet(a, b), Dir::One) | (IntervalExpr::Join(a, b), Dir::Zero) => {
            eq_holds(a, d, v) && eq_holds(b, d, v)
        }
        (IntervalExpr::Meet(a, b), Dir::Zero) | (IntervalExpr::Join(a, b), Dir::One) => {
            eq_holds(a, d, v) || eq_holds(b, d, v)
        }
    }
}

fn arb_face() -> impl Strategy<Value = Face> {
    (arb_expr(), prop_oneof![Just(Dir::Zero), Just(Dir::One)], arb_expr())
        .prop_map(|(r, d, s)| face_join(&face_of_eq(&r, d), &face_of_eq(&s, Dir::One)))
}

fn face_oracle_equal(f: &Face, g: &Face) -> bool {
    all_valuations()
        .iter()
        .all(|v| face_holds(f, v) == face_holds(g, v))
}

#[test]
fn oracle_frozen_values() {
    let i = IntervalExpr::var("i");
    let j = IntervalExpr::var("j");
    let lem = IntervalExpr::join(i.clone(), IntervalExpr::neg(i.clone()));
    assert!(!oracle_equal(&lem, &IntervalExpr::One));
    assert!(oracle_equal(
        &IntervalExpr::neg(IntervalExpr::meet(i.clone(), j.clone())),
        &IntervalExpr::join(IntervalExpr::neg(i.clone()), IntervalExpr::neg(j.clone()))
    ));
    // Kleene's law is not a De Morgan law.
    let lhs = IntervalExpr::meet(i.clone(), IntervalExpr::neg(i.clone()));
    let rhs = IntervalExpr::join(j.clone(), IntervalExpr::neg(j.clone()));
    let kleene = IntervalExpr::join(lhs.clone(), rhs.clone());
    assert!(!oracle_equal(&kleene, &rhs));
    assert!(!dm_equal(&kleene, &rhs));
}

proptest! {
    #[test]
    fn dm_equal_matches_four_element_oracle(r in arb_expr(), s in arb_expr()) {
        prop_assert_eq!(dm_equal(&r, &s), oracle_equal(&r, &s));
    }

    #[test]
    fn canonical_is_equal_and_idempotent(r in arb_expr()) {
        let c = dm_canonical(&r);
        prop_assert!(oracle_equal(&r, &c));
        prop_assert_eq!(dm_canonical(&c), c);
    }

    #[test]
    fn canonical_decides_equality(r in arb_expr(), s in arb_expr()) {
        prop_assert_eq!(dm_canonical(&r) == dm_canonical(&s), dm_equal(&r, &s));
    }

    #[test]
    fn double_negation(r in arb_expr()) {
        prop_assert!(dm_equal(&IntervalExpr::neg(IntervalExpr::neg(r.clone())), &r));
    }

    #[test]
    fn subst_commutes_with_evaluation(r in arb_expr(), s in arb_expr(), n in 0..3usize) {
        let name = Name::new(NAMES[n]);
        let sub = dm_subst(&r, &name, &s);
        for env in all_four_envs() {
            let mut env2 = env.clone();
            env2.insert(NAMES[n], four_eval(&s, &env));
            prop_assert_eq!(four_eval(&sub, &env), four_eval(&r, &env2));
        }
    }

    #[test]
    fn face_of_eq_matches_valuations(r in arb_expr(), one in any::<bool>()) {
        let d = if one { Dir::One } else { Dir::Zero };
        let f = face_of_eq(&r, d);
        for v in all_valuations() {
            prop_assert_eq!(face_holds(&f, &v), eq_holds(&r, d, &v));
        }
    }

    #[test]
    fn face_ops_match_valuations(f in arb_face(), g in arb_face()) {
        let m = face_meet(&f, &g);
        let j = face_join(&f, &g);
        let mut entails = true;
        for v in all_valuations() {
            prop_assert_eq!(face_holds(&m, &v), face_holds(&f, &v) && face_holds(&g, &v));
            prop_assert_eq!(face_holds(&j, &v), face_holds(&f, &v) || face_holds(&g, &v));
            if face_holds(&f, &v) && !face_holds(&g, &v) {
                entails = false;
            }
        }
        prop_assert_eq!(face_entails(&f, &g), entails);
        prop_assert_eq!(face_equal(&f, &g), face_oracle_equal(&f, &g));
    }

    #[test]
    fn face_lattice_laws(f in arb_face(), g in arb_face(), h in arb_face()) {
        prop_assert_eq!(face_meet(&f, &g), face_meet(&g, &f));
        prop_assert_eq!(face_join(&f, &g), face_join(&g, &f));
        prop_assert_eq!(face_join(&f, &face_meet(&f, &g)), f.clone());
        prop_assert_eq!(face_meet(&f, &face_join(&f, &g)), f.clone());
        prop_assert_eq!(
            face_meet(&f, &face_join(&g, &h)),
            face_join(&face_meet(&f, &g), &face_meet(&f, &h))
        );
        prop_assert!(face_entails(&face_meet(&f, &g), &f));
    }

    #[test]
    fn face_subst_matches_valuations(f in arb_face(), s in arb_expr(), n in 0..3usize) {
        let name = Name::new(NAMES[n]);
        let g = face_subst(&f, &name, &s);
        for v in all_valuations() {
            let mut w = v.clone();
            w.insert((NAMES[n].to_string(), Dir::Zero), eq_holds(&s, Dir::Zero, &v));
            w.insert((NAMES[n].to_string(), Dir::One), eq_holds(&s, Dir::One, &v));
            prop_assert_eq!(face_holds(&g, &v), face_holds(&f, &w));
        }
    }

    #[test]
    fn forall_is_largest_face_below_without_name(f in arb_face(), n in 0..3usize) {
        let name = Name::new(NAMES[n]);
        let g = face_forall(&name, &f);
        prop_assert!(!g.mentions(&name));
        prop_assert!(face_entails(&g, &f));
        // Any clause of f not mentioning the name is below g.
        for c in f.clauses().filter(|c| !c.contains_key(&name)) {
            prop_assert!(face_entails(&Face::from_clause(c.clone()), &g));
        }
    }
}
