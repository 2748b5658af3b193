//! Acceptance suite. Prints one line per criterion and fails if any does.

use gctt_core::check::{check, check_type, eval_interval, infer, scope_with, Ctx};
use gctt_core::conv::conv;
use gctt_core::driver::{is_numeral, normal_form, Loader};
use gctt_core::interval::*;
use gctt_core::parser::parse_term;
use gctt_core::value::{act, restrict, Sub, Val, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::rc::Rc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn gctt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gctt"))
        .args(args)
        .env_remove("GCTT_PATH")
        .output()
        .expect("run gctt")
}

// ---------------------------------------------------------------------------
// Intervals and faces, against brute-force models.

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
enum Four {
    Bot,
    A,
    B,
    Top,
}

impl Four {
    fn bits(self) -> (bool, bool) {
        match self {
            Four::Bot => (false, false),
            Four::A => (true, false),
            Four::B => (false, true),
            Four::Top => (true, true),
        }
    }

    fn of(b: (bool, bool)) -> Four {
        match b {
            (false, false) => Four::Bot,
            (true, false) => Four::A,
            (false, true) => Four::B,
            (true, true) => Four::Top,
        }
    }
}

fn four_eval(r: &IntervalExpr, i: Four, j: Four) -> Four {
    match r {
        IntervalExpr::Zero => Four::Bot,
        IntervalExpr::One => Four::Top,
        IntervalExpr::Var(n) if n.as_str() == "i" => i,
        IntervalExpr::Var(_) => j,
        IntervalExpr::Neg(a) => match four_eval(a, i, j) {
            Four::Bot => Four::Top,
            Four::Top => Four::Bot,
            x => x,
        },
        IntervalExpr::Meet(a, b) | IntervalExpr::Join(a, b) => {
            let (x1, x2) = four_eval(a, i, j).bits();
            let (y1, y2) = four_eval(b, i, j).bits();
            if matches!(r, IntervalExpr::Meet(..)) {
                Four::of((x1 && y1, x2 && y2))
            } else {
                Four::of((x1 || y1, x2 || y2))
            }
        }
    }
}

const FOURS: [Four; 4] = [Four::Bot, Four::A, Four::B, Four::Top];

fn signature(r: &IntervalExpr) -> [Four; 16] {
    let mut out = [Four::Bot; 16];
    for (a, i) in FOURS.iter().enumerate() {
        for (b, j) in FOURS.iter().enumerate() {
            out[a * 4 + b] = four_eval(r, *i, *j);
        }
    }
    out
}

/// All expressions over `i`, `j` whose syntax tree has at most `depth`
/// levels.
fn expressions(depth: usize) -> Vec<IntervalExpr> {
    let mut level = vec![
        IntervalExpr::Zero,
        IntervalExpr::One,
        IntervalExpr::var("i"),
        IntervalExpr::var("j"),
    ];
    for _ in 1..depth {
        let mut next = level.clone();
        for a in &level {
            next.push(IntervalExpr::neg(a.clone()));
        }
        for a in &level {
            for b in &level {
                next.push(IntervalExpr::meet(a.clone(), b.clone()));
                next.push(IntervalExpr::join(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

fn criterion_1() -> Outcome {
    let exprs = expressions(3);
    let sigs: Vec<[Four; 16]> = exprs.iter().map(signature).collect();
    let canon: Vec<IntervalExpr> = exprs.iter().map(dm_canonical).collect();
    let mut pairs = 0usize;
    for a in 0..exprs.len() {
        for b in a..exprs.len() {
            let expected = sigs[a] == sigs[b];
            ensure(dm_equal(&exprs[a], &exprs[b]) == expected, || {
                format!("dm_equal({}, {}) disagrees with the oracle", exprs[a], exprs[b])
            })?;
            ensure((canon[a] == canon[b]) == expected, || {
                format!("canonical forms of {} and {} disagree with the oracle", exprs[a], exprs[b])
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{} expressions, {} pairs", exprs.len(), pairs))
}

type Valuation = BTreeMap<(&'static str, Dir), bool>;

fn valuations() -> Vec<Valuation> {
    let mut out = Vec::new();
    let states = [(false, false), (true, false), (false, true)];
    for (i0, i1) in states {
        for (j0, j1) in states {
            out.push(
                [
                    (("i", Dir::Zero), i0),
                    (("i", Dir::One), i1),
                    (("j", Dir::Zero), j0),
                    (("j", Dir::One), j1),
                ]
                .into_iter()
                .collect(),
            );
        }
    }
    out
}

fn holds(f: &Face, v: &Valuation) -> bool {
    f.clauses().any(|c| {
        c.iter().all(|(n, d)| {
            let key = if n.as_str() == "i" { "i" } else { "j" };
            v[&(key, *d)]
        })
    })
}

fn clauses_over(names: &[&str]) -> Vec<Clause> {
    let mut out = vec![Clause::new()];
    for n in names {
        let mut next = Vec::new();
        for c in &out {
            next.push(c.clone());
            for d in [Dir::Zero, Dir::One] {
                let mut c2 = c.clone();
                c2.insert(Name::new(n), d);
                next.push(c2);
            }
        }
        out = next;
    }
    out
}

/// Every face given by a set of clauses over the names.
fn faces_over(names: &[&str]) -> Vec<Face> {
    let clauses = clauses_over(names);
    (0u32..(1 << clauses.len()))
        .map(|mask| {
            Face::from_clauses(
                clauses.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, c)| c.clone()),
            )
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let faces = faces_over(&["i", "j"]);
    let vals = valuations();
    let truth: Vec<Vec<bool>> = faces.iter().map(|f| vals.iter().map(|v| holds(f, v)).collect()).collect();
    for a in 0..faces.len() {
        for b in 0..faces.len() {
            ensure(face_equal(&faces[a], &faces[b]) == (truth[a] == truth[b]), || {
                format!("face_equal({}, {}) disagrees with the oracle", faces[a], faces[b])
            })?;
        }
    }
    let i0 = Face::eq(Name::new("i"), Dir::Zero);
    let i1 = Face::eq(Name::new("i"), Dir::One);
    ensure(face_equal(&face_meet(&i0, &i1), &Face::bot()), || "(i=0) /\\ (i=1) is not bottom".into())?;
    ensure(!face_equal(&face_join(&i0, &i1), &Face::top()), || "(i=0) \\/ (i=1) is top".into())?;
    Ok(format!("{} faces, {} pairs", faces.len(), faces.len() * faces.len()))
}

fn criterion_3() -> Outcome {
    let phis = faces_over(&["i", "j"]);
    let mut checked = 0;
    for (bound, other) in [("i", "j"), ("j", "i")] {
        let name = Name::new(bound);
        let psis = faces_over(&[other]);
        for phi in &phis {
            let all = face_forall(&name, phi);
            ensure(!all.mentions(&name), || format!("forall {}. {} still mentions {}", bound, phi, bound))?;
            for psi in &psis {
                ensure(face_entails(psi, &all) == face_entails(psi, phi), || {
                    format!("adjunction fails for psi = {}, phi = {}", psi, phi)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} instances", checked))
}

// ---------------------------------------------------------------------------
// The corpus, through the command-line tool.

const CORPUS: [&str; 9] = [
    "funext",
    "later_ext",
    "transitivity",
    "unfold_lemma",
    "unique_fix",
    "streams",
    "zipWith",
    "y_combinator",
    "canonicity",
];

fn corpus_files() -> Vec<PathBuf> {
    CORPUS.iter().map(|n| corpus_dir().join(format!("{}.gctt", n))).collect()
}

fn criterion_4() -> Outcome {
    let files = corpus_files();
    let args: Vec<String> = std::iter::once("check".to_string())
        .chain(files.iter().map(|f| f.display().to_string()))
        .collect();
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let start = Instant::now();
    let out = gctt(&refs);
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {:?}", elapsed))?;
    Ok(format!("{} files in {:.2?}", files.len(), elapsed))
}

fn stdout_of(args: &[&str]) -> Result<String, String> {
    let out = gctt(args);
    if out.status.code() != Some(0) {
        return Err(format!("{:?} failed: {}", args, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_5() -> Outcome {
    let file = corpus_dir().join("unfold_lemma.gctt");
    let file = file.to_str().unwrap();
    let cases = [
        ("ones_unfold", "ones", "cons N 1 (next ones)"),
        ("zeros_unfold", "zeros", "step (next zeros)"),
    ];
    for (path, fixed, unfolded) in cases {
        let at0 = stdout_of(&["normalize", file, path, "--at", "i=0"])?;
        let at1 = stdout_of(&["normalize", file, path, "--at", "i=1"])?;
        let fix = stdout_of(&["normalize", file, "--expr", fixed])?;
        let once = stdout_of(&["normalize", file, "--expr", unfolded])?;
        ensure(at0 == fix, || format!("{} at i=0:\n{}\nfixed point:\n{}", path, at0, fix))?;
        ensure(at1 == once, || format!("{} at i=1:\n{}\nunfolded:\n{}", path, at1, once))?;
        ensure(at0 != at1, || format!("{} has equal endpoints", path))?;
    }
    Ok(format!("{} unfold paths, both endpoints byte-equal", cases.len()))
}

fn criterion_9() -> Outcome {
    let mut loader = Loader::new(vec![corpus_dir()]);
    let mut count = 0;
    let mut through = Vec::new();
    for f in corpus_files() {
        let m = loader.load_file(&f).map_err(|e| e.to_string())?;
        for d in &m.decls {
            if matches!(&*d.ty, Value::Nat) {
                ensure(is_numeral(&d.val), || {
                    format!("{}.{} is stuck: {}", m.name, d.name, normal_form(&d.val))
                })?;
                count += 1;
                through.push(d.name.to_string());
            }
        }
    }
    for needed in ["via_univ", "via_glue", "stream_head", "round_trip", "boxed"] {
        ensure(through.iter().any(|n| n == needed), || format!("corpus lacks `{}`", needed))?;
    }
    Ok(format!("{} closed naturals, all numerals", count))
}

fn expected_kind(src: &str) -> Option<String> {
    src.lines()
        .find_map(|l| l.trim().strip_prefix("-- expect:"))
        .map(|k| k.trim().to_string())
}

fn criterion_10() -> Outcome {
    let dir = corpus_dir().join("negative");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "gctt"))
        .collect();
    files.sort();
    let mut kinds = Vec::new();
    for f in &files {
        let src = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let kind = expected_kind(&src).ok_or_else(|| format!("{} lacks an expect line", f.display()))?;
        let out = gctt(&["check", f.to_str().unwrap()]);
        let err = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(1), || format!("{}: exit {:?}", f.display(), out.status.code()))?;
        ensure(err.contains(&format!("[{}]", kind)), || format!("{}: expected [{}], got {}", f.display(), kind, err))?;
        kinds.push(kind);
    }
    for needed in ["mismatch", "face-not-covering", "system-incompatible", "boundary-violation", "ds-ill-formed"] {
        ensure(kinds.iter().any(|k| k == needed), || format!("no negative file for {}", needed))?;
    }
    let ill_guarded = std::fs::read_to_string(dir.join("ill_guarded_fix.gctt")).map_err(|e| e.to_string())?;
    ensure(ill_guarded.contains("(A -> A) -> A"), || "ill-guarded fix has the wrong shape".into())?;
    Ok(format!("{} files rejected with their designated kinds", files.len()))
}

// ---------------------------------------------------------------------------
// Judgemental equalities, in a context of free variables.

struct Scene {
    ctx: Ctx,
}

impl Scene {
    fn new(vars: &[(&str, &str)]) -> Scene {
        let mut ctx = Ctx::new(Rc::new(scope_with(&[])));
        for (x, ty) in vars {
            let t = parse_term(ty).expect("type parses");
            let core = check_type(&ctx, &t).unwrap_or_else(|e| panic!("{}: {}", ty, e));
            let tv = ctx.eval(&core);
            ctx = ctx.bind_var(&Name::new(x), tv).0;
        }
        Scene { ctx }
    }

    fn dims(mut self, names: &[&str]) -> Scene {
        for n in names {
            self.ctx = self.ctx.bind_dim(&Name::new(n)).0;
        }
        self
    }

    fn ty(&self, src: &str) -> Val {
        let t = parse_term(src).expect("type parses");
        let core = check_type(&self.ctx, &t).unwrap_or_else(|e| panic!("{}: {}", src, e));
        self.ctx.eval(&core)
    }

    fn at(&self, src: &str, ty: &str) -> Result<Val, String> {
        let t = parse_term(src).map_err(|e| format!("{}: {}", src, e))?;
        let core = check(&self.ctx, &t, &self.ty(ty)).map_err(|e| format!("{}: {}", src, e))?;
        Ok(self.ctx.eval(&core))
    }

    fn show(&self, v: &Val) -> String {
        self.ctx.show(v)
    }
}

fn equal(s: &Scene, a: &str, b: &str, ty: &str) -> Result<(), String> {
    let (x, y) = (s.at(a, ty)?, s.at(b, ty)?);
    ensure(conv(&x, &y), || format!("`{}` and `{}` are not equal", a, b))?;
    ensure(s.show(&x) == s.show(&y), || format!("normal forms differ: {} vs {}", s.show(&x), s.show(&y)))
}

fn distinct(s: &Scene, a: &str, b: &str, ty: &str) -> Result<(), String> {
    let (x, y) = (s.at(a, ty)?, s.at(b, ty)?);
    ensure(!conv(&x, &y), || format!("`{}` and `{}` are equal", a, b))
}

fn criterion_6() -> Outcome {
    let s = Scene::new(&[("A", "U"), ("f", "|> A -> A")]);
    let d1 = s.at("dfix 1 x. f x", "|> A")?;
    let unfolded = s.at("next (f (dfix 0 x. f x))", "|> A")?;
    ensure(conv(&d1, &unfolded), || "dfix 1 does not unfold".into())?;
    ensure(s.show(&d1) == s.show(&unfolded), || format!("{} vs {}", s.show(&d1), s.show(&unfolded)))?;
    distinct(&s, "dfix 0 x. f x", "next (f (dfix 0 x. f x))", "|> A")?;
    // Along a path variable the unfolding only happens at the 1 end.
    let si = Scene::new(&[("A", "U"), ("f", "|> A -> A")]).dims(&["i"]);
    let di = si.at("dfix i x. f x", "|> A")?;
    let i = dim_name(&si.ctx, "i");
    let unfolded = si.at("next (f (dfix 0 x. f x))", "|> A")?;
    let at1 = act(&di, &Sub::dir(&i, Dir::One));
    let at0 = act(&di, &Sub::dir(&i, Dir::Zero));
    ensure(conv(&at1, &unfolded), || "dfix i at i=1 does not unfold".into())?;
    ensure(!conv(&at0, &unfolded), || "dfix i at i=0 unfolds".into())?;
    Ok(format!("dfix 1 x. f x = {}", s.show(&d1)))
}

fn criterion_7() -> Outcome {
    let s = Scene::new(&[
        ("A", "U"),
        ("B", "U"),
        ("C", "U"),
        ("P", "A -> U"),
        ("Q", "A -> B -> U"),
        ("a", "A"),
        ("b", "B"),
        ("t", "|> A"),
        ("t2", "|> A"),
        ("u", "|> B"),
        ("g", "(x : A) -> P x"),
        ("k", "A -> B -> C"),
    ]);
    let rules: [(&str, &str, &str, &str); 7] = [
        ("type weakening", "|> [x <- t] B", "|> B", "U"),
        ("type exchange", "|> [x <- t, y <- u] Q x y", "|> [y <- u, x <- t] Q x y", "U"),
        ("type next-substitution", "|> [x <- next a] P x", "|> P a", "U"),
        ("term weakening", "next [x <- t] b", "next b", "|> B"),
        ("term exchange", "next [x <- t, y <- u] k x y", "next [y <- u, x <- t] k x y", "|> C"),
        ("term next-substitution", "next [x <- next a] g x", "next (g a)", "|> P a"),
        ("term eta", "next [x <- t] x", "t", "|> A"),
    ];
    for (name, lhs, rhs, ty) in rules {
        equal(&s, lhs, rhs, ty).map_err(|e| format!("{}: {}", name, e))?;
    }
    // A binding the body uses cannot be dropped.
    distinct(&s, "|> [x <- t] P x", "|> [x <- t2] P x", "U")?;
    distinct(&s, "|> [x <- t] P x", "|> P a", "U")?;
    distinct(&s, "next [x <- t] x", "next [x <- t2] x", "|> A")?;
    let scoped = parse_term("|> P x").unwrap();
    ensure(check_type(&s.ctx, &scoped).is_err(), || "weakened type with a free binder checks".into())?;
    Ok(format!("{} rules and the weakening side condition", rules.len()))
}

fn dim_name(ctx: &Ctx, n: &str) -> Name {
    eval_interval(ctx, &IntervalExpr::var(n)).unwrap().as_var().unwrap().clone()
}

// ---------------------------------------------------------------------------
// Random compositions. A tube is a family e(j) cut down to a face; the base
// is e(0), so every instance is well typed by construction.

type Family = Rc<dyn Fn(&IntervalExpr) -> String>;

struct Gen {
    rng: ChaCha8Rng,
}

const OUTER: [&str; 2] = ["k", "l"];

impl Gen {
    fn interval(&mut self, depth: u32) -> IntervalExpr {
        let choice = if depth == 0 { self.rng.gen_range(0..5) } else { self.rng.gen_range(0..8) };
        match choice {
            0 => IntervalExpr::Zero,
            1 => IntervalExpr::One,
            2 => IntervalExpr::var("j"),
            3 | 4 => IntervalExpr::var(OUTER[self.rng.gen_range(0..2)]),
            5 => IntervalExpr::neg(self.interval(depth - 1)),
            6 => IntervalExpr::meet(self.interval(depth - 1), self.interval(depth - 1)),
            _ => IntervalExpr::join(self.interval(depth - 1), self.interval(depth - 1)),
        }
    }

    fn dim(&mut self) -> Rc<dyn Fn(&IntervalExpr) -> String> {
        let r = self.interval(2);
        Rc::new(move |j: &IntervalExpr| format!("({})", dm_subst(&r, &Name::new("j"), j)))
    }

    fn nat(&mut self, depth: u32, bound: &[&'static str]) -> Family {
        let choice = if depth == 0 { self.rng.gen_range(0..4) } else { self.rng.gen_range(0..9) };
        match choice {
            0 => {
                let n = self.rng.gen_range(0..3);
                Rc::new(move |_: &IntervalExpr| n.to_string())
            }
            1 => {
                let r = self.dim();
                Rc::new(move |j: &IntervalExpr| format!("(p @ {})", r(j)))
            }
            2 => {
                let (r1, r2) = (self.dim(), self.dim());
                Rc::new(move |j: &IntervalExpr| format!("(s @ {} @ {})", r1(j), r2(j)))
            }
            3 => {
                if bound.is_empty() {
                    Rc::new(|_: &IntervalExpr| "w.1".to_string())
                } else {
                    let x = bound[self.rng.gen_range(0..bound.len())];
                    Rc::new(move |_: &IntervalExpr| x.to_string())
                }
            }
            4 => {
                let e = self.nat(depth - 1, bound);
                Rc::new(move |j: &IntervalExpr| format!("(suc {})", e(j)))
            }
            5 => {
                let e = self.nat(depth - 1, bound);
                Rc::new(move |j: &IntervalExpr| format!("(f {})", e(j)))
            }
            6 => {
                let (r, e) = (self.dim(), self.nat(depth - 1, bound));
                Rc::new(move |j: &IntervalExpr| format!("((g @ {}) {})", r(j), e(j)))
            }
            7 => {
                let e = self.nat(depth - 1, bound);
                Rc::new(move |j: &IntervalExpr| format!("(natrec (\\_ -> N) {} (\\_ m -> suc m) 1)", e(j)))
            }
            _ => {
                let (r, e) = (self.dim(), self.nat(depth - 1, bound));
                Rc::new(move |j: &IntervalExpr| format!("(comp z N [ ({}=1) -> {} ] {})", r(j), e(j), e(j)))
            }
        }
    }

    /// A type line and a family of elements of it.
    fn instance(&mut self) -> (Family, Family) {
        let constant = |s: &'static str| -> Family { Rc::new(move |_: &IntervalExpr| s.to_string()) };
        match self.rng.gen_range(0..7) {
            0 => (constant("N"), self.nat(3, &[])),
            1 => {
                let e: Family = match self.rng.gen_range(0..3) {
                    0 => {
                        let r = self.dim();
                        Rc::new(move |j: &IntervalExpr| format!("(<m> s @ {} @ m)", r(j)))
                    }
                    1 => {
                        let r = self.dim();
                        Rc::new(move |j: &IntervalExpr| format!("(s @ {})", r(j)))
                    }
                    _ => constant("p"),
                };
                (constant("Path N n n2"), e)
            }
            2 => {
                let (a, b) = (self.nat(2, &[]), self.nat(2, &[]));
                (constant("N * N"), Rc::new(move |j: &IntervalExpr| format!("({}, {})", a(j), b(j))))
            }
            3 => {
                let body = self.nat(2, &["x"]);
                (constant("N -> N"), Rc::new(move |j: &IntervalExpr| format!("(\\x -> {})", body(j))))
            }
            4 => {
                let r = self.dim();
                (constant("N -> N"), Rc::new(move |j: &IntervalExpr| format!("(g @ {})", r(j))))
            }
            5 => {
                let e = self.nat(2, &[]);
                (
                    constant("(x : N) * Path N x x"),
                    Rc::new(move |j: &IntervalExpr| format!("({}, <_> {})", e(j), e(j))),
                )
            }
            _ => {
                // The type itself varies along the composition.
                let line: Family = Rc::new(|j: &IntervalExpr| format!("Path N (p @ ({})) n2", j));
                let e: Family = Rc::new(|j: &IntervalExpr| format!("(<m> p @ (({}) \\/ m))", j));
                (line, e)
            }
        }
    }

    fn face(&mut self) -> Vec<Clause> {
        let all = clauses_over(&OUTER);
        let n = self.rng.gen_range(0..4);
        (0..n).map(|_| all[self.rng.gen_range(1..all.len())].clone()).collect()
    }
}

fn show_clause(c: &Clause) -> String {
    c.iter().map(|(n, d)| format!("({}={})", n, if *d == Dir::Zero { 0 } else { 1 })).collect::<Vec<_>>().join(" /\\ ")
}

fn criterion_8() -> Outcome {
    let s = Scene::new(&[
        ("n", "N"),
        ("n2", "N"),
        ("p", "Path N n n2"),
        ("q", "Path N n n2"),
        ("s", "Path (Path N n n2) p q"),
        ("f", "N -> N"),
        ("f2", "N -> N"),
        ("g", "Path (N -> N) f f2"),
        ("w", "N * N"),
    ])
    .dims(&OUTER);
    let mut gen = Gen { rng: ChaCha8Rng::seed_from_u64(0x5eed) };
    let j = IntervalExpr::var("j");
    let (zero, one) = (IntervalExpr::Zero, IntervalExpr::One);
    let mut clauses_checked = 0;
    let mut kinds: HashMap<String, usize> = HashMap::new();
    for case in 0..200 {
        let (line, family) = gen.instance();
        let face = gen.face();
        let tube: Vec<String> = face.iter().map(|c| format!("{} -> {}", show_clause(c), family(&j))).collect();
        let src = format!("comp j ({}) [ {} ] {}", line(&j), tube.join(", "), family(&zero));
        let term = parse_term(&src).map_err(|e| format!("case {}: {}: {}", case, src, e))?;
        let (core, ty) = infer(&s.ctx, &term).map_err(|e| format!("case {}: {}: {}", case, src, e))?;
        let result = s.ctx.eval(&core);
        let top = s.ty(&line(&one));
        ensure(conv(&ty, &top), || format!("case {}: result type {} is not the line at 1", case, s.show(&ty)))?;
        let lid = s.at(&family(&one), &line(&one))?;
        for c in &face {
            let vc: Clause = c.iter().map(|(n, d)| (dim_name(&s.ctx, n.as_str()), *d)).collect();
            let (got, want) = (restrict(&result, &vc), restrict(&lid, &vc));
            ensure(conv(&got, &want) && s.ctx.show_canonical(&got) == s.ctx.show_canonical(&want), || {
                format!("case {}: {} under {}: {} vs {}", case, src, show_clause(c), s.show(&got), s.show(&want))
            })?;
            clauses_checked += 1;
        }
        *kinds.entry(line(&j)).or_default() += 1;
    }
    let mut summary: Vec<String> = kinds.iter().map(|(k, n)| format!("{}: {}", k, n)).collect();
    summary.sort();
    Ok(format!("200 instances, {} clauses; {}", clauses_checked, summary.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("interval oracle equivalence", criterion_1),
        ("face oracle equivalence", criterion_2),
        ("forall adjunction", criterion_3),
        ("golden corpus checks", criterion_4),
        ("unfold path endpoints", criterion_5),
        ("dfix discipline", criterion_6),
        ("later equational theory", criterion_7),
        ("composition boundary law", criterion_8),
        ("canonicity of closed naturals", criterion_9),
        ("negative suite", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {} ({:.2?}): {}", k + 1, name, took, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {} ({:.2?}): {}", k + 1, name, took, why);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
