//! Lexer and recursive-descent parser for `.gctt` files.
//!
//! Declarations are separated by position: a token in column 1 always
//! starts a new declaration.

use crate::interval::{face_join, face_meet, face_of_eq, Dir, Face, IntervalExpr, Name};
use crate::syntax::{rc, Branch, Decl, DelayedSubst, DsBind, ModuleFile, Span, System, Term};
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    Keyword,
    Int,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Arrow,
    LArrow,
    PathOpen,
    PathClose,
    Lambda,
    Dot,
    Star,
    At,
    Minus,
    Meet,
    Join,
    Later,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokKind,
    pub text: String,
    pub span: Span,
}

pub const KEYWORDS: &[&str] = &[
    "module", "where", "import", "data", "let", "U", "N", "comp", "Glue", "glue", "unglue", "next",
    "dfix", "fix", "transp", "suc", "zero", "natrec", "Path",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[parse] expected ")?;
        match self.expected.len() {
            0 => write!(f, "nothing")?,
            1 => write!(f, "{}", self.expected[0])?,
            _ => write!(f, "one of {}", self.expected.join(", "))?,
        }
        write!(f, " found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

fn describe(t: &Token) -> String {
    match t.kind {
        TokKind::Eof => "end of input".to_string(),
        _ => format!("`{}`", t.text),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0usize, 1u32, 1u32);
    let sym3 = [("|>", TokKind::Later)];
    let sym2 = [
        ("->", TokKind::Arrow),
        ("<-", TokKind::LArrow),
        ("/\\", TokKind::Meet),
        ("\\/", TokKind::Join),
    ];
    while pos < bytes.len() {
        let c = bytes[pos];
        if c == b'\n' {
            pos += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            pos += 1;
            col += 1;
            continue;
        }
        if src[pos..].starts_with("--") {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        let span_at = |len: usize| Span { line, col, start, end: start + len };
        let mut matched = None;
        for (s, k) in sym3.iter().chain(sym2.iter()) {
            if src[pos..].starts_with(s) {
                matched = Some((s.len(), *k));
                break;
            }
        }
        if let Some((len, kind)) = matched {
            out.push(Token { kind, text: src[pos..pos + len].to_string(), span: span_at(len) });
            pos += len;
            col += len as u32;
            continue;
        }
        let single = match c {
            b'(' => Some(TokKind::LParen),
            b')' => Some(TokKind::RParen),
            b'[' => Some(TokKind::LBrack),
            b']' => Some(TokKind::RBrack),
            b'{' => Some(TokKind::LBrace),
            b'}' => Some(TokKind::RBrace),
            b',' => Some(TokKind::Comma),
            b':' => Some(TokKind::Colon),
            b'=' => Some(TokKind::Equals),
            b'<' => Some(TokKind::PathOpen),
            b'>' => Some(TokKind::PathClose),
            b'\\' => Some(TokKind::Lambda),
            b'.' => Some(TokKind::Dot),
            b'*' => Some(TokKind::Star),
            b'@' => Some(TokKind::At),
            b'-' => Some(TokKind::Minus),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, text: (c as char).to_string(), span: span_at(1) });
            pos += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = pos;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let len = end - pos;
            out.push(Token { kind: TokKind::Int, text: src[pos..end].to_string(), span: span_at(len) });
            pos = end;
            col += len as u32;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = pos;
            while end < bytes.len()
                && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_' || bytes[end] == b'\'')
            {
                end += 1;
            }
            let text = &src[pos..end];
            let kind = if KEYWORDS.contains(&text) { TokKind::Keyword } else { TokKind::Ident };
            let len = end - pos;
            out.push(Token { kind, text: text.to_string(), span: span_at(len) });
            pos = end;
            col += len as u32;
            continue;
        }
        let ch = src[pos..].chars().next().unwrap();
        return Err(ParseError {
            span: span_at(ch.len_utf8()),
            expected: vec!["a token".to_string()],
            found: format!("illegal character `{}`", ch),
        });
    }
    out.push(Token {
        kind: TokKind::Eof,
        text: String::new(),
        span: Span { line, col, start: pos, end: pos },
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Index of the first token of the current declaration, if any.
    decl_start: Option<usize>,
}

type PResult<T> = Result<T, ParseError>;

fn loc(span: Span, t: Term) -> Term {
    match t {
        Term::Loc(..) => t,
        t => Term::Loc(span, rc(t)),
    }
}

impl Parser {
    fn eof_token(&self) -> Token {
        let sp = self.toks[self.pos.min(self.toks.len() - 1)].span;
        Token { kind: TokKind::Eof, text: String::new(), span: Span { end: sp.start, ..sp } }
    }

    fn peek_at(&self, k: usize) -> Token {
        let idx = self.pos + k;
        if idx >= self.toks.len() {
            return self.eof_token();
        }
        if let Some(start) = self.decl_start {
            // A column-1 token ends the current declaration.
            for j in self.pos..=idx {
                if j > start && self.toks[j].span.col == 1 {
                    let sp = self.toks[j].span;
                    return Token { kind: TokKind::Eof, text: String::new(), span: sp };
                }
            }
        }
        self.toks[idx].clone()
    }

    fn peek(&self) -> Token {
        self.peek_at(0)
    }

    fn kind(&self) -> TokKind {
        self.peek().kind
    }

    fn is_kw(&self, kw: &str) -> bool {
        let t = self.peek();
        t.kind == TokKind::Keyword && t.text == kw
    }

    fn bump(&mut self) -> Token {
        let t = self.peek();
        if t.kind != TokKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            span: t.span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: describe(&t),
        })
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> PResult<Token> {
        if self.kind() == kind {
            Ok(self.bump())
        } else {
            self.err(&[what])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Token> {
        if self.is_kw(kw) {
            Ok(self.bump())
        } else {
            self.err(&[&format!("`{}`", kw)])
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        if self.kind() == TokKind::Ident {
            Ok(Name::new(&self.bump().text))
        } else {
            self.err(&["identifier"])
        }
    }

    fn span_from(&self, start: Span) -> Span {
        let end = if self.pos > 0 { self.toks[self.pos - 1].span.end } else { start.end };
        Span { end: end.max(start.end), ..start }
    }

    // Intervals.

    fn interval(&mut self) -> PResult<IntervalExpr> {
        let mut r = self.interval_meet()?;
        while self.kind() == TokKind::Join {
            self.bump();
            r = IntervalExpr::join(r, self.interval_meet()?);
        }
        Ok(r)
    }

    fn interval_meet(&mut self) -> PResult<IntervalExpr> {
        let mut r = self.interval_neg()?;
        while self.kind() == TokKind::Meet {
            self.bump();
            r = IntervalExpr::meet(r, self.interval_neg()?);
        }
        Ok(r)
    }

    fn interval_neg(&mut self) -> PResult<IntervalExpr> {
        if self.kind() == TokKind::Minus {
            self.bump();
            return Ok(IntervalExpr::neg(self.interval_neg()?));
        }
        self.interval_atom()
    }

    fn interval_atom(&mut self) -> PResult<IntervalExpr> {
        let t = self.peek();
        match t.kind {
            TokKind::Int if t.text == "0" => {
                self.bump();
                Ok(IntervalExpr::Zero)
            }
            TokKind::Int if t.text == "1" => {
                self.bump();
                Ok(IntervalExpr::One)
            }
            TokKind::Ident => {
                self.bump();
                Ok(IntervalExpr::Var(Name::new(&t.text)))
            }
            TokKind::LParen => {
                self.bump();
                let r = self.interval()?;
                self.expect(TokKind::RParen, "`)`")?;
                Ok(r)
            }
            _ => self.err(&["interval expression"]),
        }
    }

    // Faces.

    fn face(&mut self) -> PResult<Face> {
        let mut f = self.face_conj()?;
        while self.kind() == TokKind::Join {
            self.bump();
            f = face_join(&f, &self.face_conj()?);
        }
        Ok(f)
    }

    fn face_conj(&mut self) -> PResult<Face> {
        let mut f = self.face_atom()?;
        while self.kind() == TokKind::Meet {
            self.bump();
            f = face_meet(&f, &self.face_atom()?);
        }
        Ok(f)
    }

    fn face_atom(&mut self) -> PResult<Face> {
        self.expect(TokKind::LParen, "face `(i=0)`")?;
        let save = self.pos;
        if let Ok(r) = self.interval() {
            if self.kind() == TokKind::Equals {
                self.bump();
                let t = self.peek();
                let d = match (t.kind, t.text.as_str()) {
                    (TokKind::Int, "0") => Dir::Zero,
                    (TokKind::Int, "1") => Dir::One,
                    _ => return self.err(&["`0`", "`1`"]),
                };
                self.bump();
                self.expect(TokKind::RParen, "`)`")?;
                return Ok(face_of_eq(&r, d));
            }
        }
        self.pos = save;
        let f = self.face()?;
        self.expect(TokKind::RParen, "`)`")?;
        Ok(f)
    }

    fn system(&mut self) -> PResult<System> {
        self.expect(TokKind::LBrack, "`[`")?;
        let mut out = Vec::new();
        if self.kind() == TokKind::RBrack {
            self.bump();
            return Ok(out);
        }
        loop {
            let face = self.face()?;
            self.expect(TokKind::Arrow, "`->`")?;
            let term = self.term()?;
            out.push(Branch { face, term: rc(term) });
            match self.kind() {
                TokKind::Comma => {
                    self.bump();
                }
                TokKind::RBrack => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&["`,`", "`]`"]),
            }
        }
    }

    /// A delayed substitution, present only if the next tokens are `[` and
    /// an identifier or `]`.
    fn delayed_subst(&mut self) -> PResult<DelayedSubst> {
        let mut out = Vec::new();
        if self.kind() != TokKind::LBrack {
            return Ok(out);
        }
        let next = self.peek_at(1).kind;
        if next != TokKind::Ident && next != TokKind::RBrack {
            return Ok(out);
        }
        self.bump();
        if self.kind() == TokKind::RBrack {
            self.bump();
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            let ty = if self.kind() == TokKind::Colon {
                self.bump();
                Some(rc(self.term()?))
            } else {
                None
            };
            self.expect(TokKind::LArrow, "`<-`")?;
            let term = rc(self.term()?);
            out.push(DsBind { name, ty, term });
            match self.kind() {
                TokKind::Comma => {
                    self.bump();
                }
                TokKind::RBrack => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(&["`,`", "`]`"]),
            }
        }
    }

    // Terms.

    pub fn term(&mut self) -> PResult<Term> {
        let start = self.peek().span;
        let t = match self.kind() {
            TokKind::Lambda => self.lambda()?,
            TokKind::PathOpen => {
                self.bump();
                let mut names = vec![self.ident()?];
                while self.kind() == TokKind::Ident {
                    names.push(self.ident()?);
                }
                self.expect(TokKind::PathClose, "`>`")?;
                let body = self.term()?;
                names.into_iter().rev().fold(body, |b, i| Term::PLam(i, rc(b)))
            }
            TokKind::Keyword if self.is_kw("dfix") || self.is_kw("fix") => self.fix_form()?,
            _ => self.arrow()?,
        };
        Ok(loc(self.span_from(start), t))
    }

    fn lambda(&mut self) -> PResult<Term> {
        self.expect(TokKind::Lambda, "`\\`")?;
        let mut binders: Vec<(Name, Option<Rc<Term>>)> = Vec::new();
        loop {
            match self.kind() {
                TokKind::Ident => binders.push((self.ident()?, None)),
                TokKind::LParen => {
                    self.bump();
                    let mut names = vec![self.ident()?];
                    while self.kind() == TokKind::Ident {
                        names.push(self.ident()?);
                    }
                    self.expect(TokKind::Colon, "`:`")?;
                    let ty = rc(self.term()?);
                    self.expect(TokKind::RParen, "`)`")?;
                    for n in names {
                        binders.push((n, Some(ty.clone())));
                    }
                }
                TokKind::Arrow if !binders.is_empty() => break,
                _ => return self.err(&["binder", "`->`"]),
            }
        }
        self.bump();
        let body = self.term()?;
        Ok(binders.into_iter().rev().fold(body, |b, (x, a)| Term::Lam(x, a, rc(b))))
    }

    fn fix_form(&mut self) -> PResult<Term> {
        let kw = self.bump().text;
        // The interval is omitted when a binder follows directly.
        let binder_next = match (self.peek().kind, self.peek_at(1).kind) {
            (TokKind::Ident, TokKind::Dot) => true,
            (TokKind::LParen, TokKind::Ident) => self.peek_at(2).kind == TokKind::Colon,
            _ => false,
        };
        let r = if binder_next { IntervalExpr::Zero } else { self.interval_neg()? };
        let (x, ann) = if self.kind() == TokKind::LParen {
            self.bump();
            let x = self.ident()?;
            self.expect(TokKind::Colon, "`:`")?;
            let a = rc(self.term()?);
            self.expect(TokKind::RParen, "`)`")?;
            (x, Some(a))
        } else {
            (self.ident()?, None)
        };
        self.expect(TokKind::Dot, "`.`")?;
        let body = rc(self.term()?);
        if kw == "dfix" {
            Ok(Term::DFix(r, x, ann, body))
        } else if ann.is_some() {
            self.err(&["unannotated binder for `fix`"])
        } else {
            Ok(Term::Fix(r, x, body))
        }
    }

    /// Try to read binder groups `(x y : A)(z : B)`; restores the position
    /// and returns `None` if the tokens are not of that shape.
    fn binder_groups(&mut self) -> PResult<Option<Vec<(Name, Rc<Term>)>>> {
        let save = self.pos;
        let mut out = Vec::new();
        while self.kind() == TokKind::LParen && self.peek_at(1).kind == TokKind::Ident {
            let mut k = 1;
            while self.peek_at(k).kind == TokKind::Ident {
                k += 1;
            }
            if self.peek_at(k).kind != TokKind::Colon {
                break;
            }
            self.bump();
            let mut names = Vec::new();
            while self.kind() == TokKind::Ident {
                names.push(self.ident()?);
            }
            self.bump();
            let ty = rc(self.term()?);
            self.expect(TokKind::RParen, "`)`")?;
            for n in names {
                out.push((n, ty.clone()));
            }
        }
        if out.is_empty() || !matches!(self.kind(), TokKind::Arrow | TokKind::Star) {
            self.pos = save;
            return Ok(None);
        }
        Ok(Some(out))
    }

    fn arrow(&mut self) -> PResult<Term> {
        let start = self.peek().span;
        if let Some(groups) = self.binder_groups()? {
            if self.kind() == TokKind::Arrow {
                self.bump();
                let cod = self.term()?;
                return Ok(groups.into_iter().rev().fold(cod, |b, (x, a)| Term::Pi(x, a, rc(b))));
            }
            self.bump();
            let snd = self.sigma()?;
            let sig = groups.into_iter().rev().fold(snd, |b, (x, a)| Term::Sigma(x, a, rc(b)));
            let sig = loc(self.span_from(start), sig);
            return self.arrow_tail(sig);
        }
        let lhs = self.sigma()?;
        self.arrow_tail(lhs)
    }

    fn arrow_tail(&mut self, lhs: Term) -> PResult<Term> {
        if self.kind() == TokKind::Arrow {
            self.bump();
            let cod = self.term()?;
            Ok(Term::Pi(Name::new("_"), rc(lhs), rc(cod)))
        } else {
            Ok(lhs)
        }
    }

    fn sigma(&mut self) -> PResult<Term> {
        let start = self.peek().span;
        if let Some(groups) = self.binder_groups()? {
            if self.kind() == TokKind::Star {
                self.bump();
                let snd = self.sigma()?;
                let t = groups.into_iter().rev().fold(snd, |b, (x, a)| Term::Sigma(x, a, rc(b)));
                return Ok(loc(self.span_from(start), t));
            }
            return self.err(&["`*`"]);
        }
        let lhs = self.app()?;
        if self.kind() == TokKind::Star {
            self.bump();
            let rhs = self.sigma()?;
            return Ok(loc(self.span_from(start), Term::Sigma(Name::new("_"), rc(lhs), rc(rhs))));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        let t = self.peek();
        match t.kind {
            TokKind::Ident | TokKind::Int | TokKind::LParen | TokKind::LBrack => true,
            TokKind::Keyword => matches!(t.text.as_str(), "U" | "N" | "zero"),
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let start = self.peek().span;
        let t = self.peek();
        if t.kind == TokKind::Later {
            self.bump();
            let ds = self.delayed_subst()?;
            let body = self.app()?;
            return Ok(loc(self.span_from(start), Term::Later(ds, rc(body))));
        }
        if t.kind == TokKind::Keyword {
            let kw = t.text.as_str();
            let form = match kw {
                "suc" => {
                    self.bump();
                    Some(Term::Suc(rc(self.atom()?)))
                }
                "natrec" => {
                    self.bump();
                    let p = rc(self.atom()?);
                    let z = rc(self.atom()?);
                    let s = rc(self.atom()?);
                    let n = rc(self.atom()?);
                    Some(Term::NatRec(p, z, s, n))
                }
                "Path" => {
                    self.bump();
                    let a = rc(self.atom()?);
                    let x = rc(self.atom()?);
                    let y = rc(self.atom()?);
                    Some(Term::Path(a, x, y))
                }
                "comp" | "transp" => {
                    self.bump();
                    let i = self.ident()?;
                    let a = rc(self.atom()?);
                    let sys = if kw == "comp" { self.system()? } else { Vec::new() };
                    let b = rc(self.atom()?);
                    Some(Term::Comp(i, a, sys, b))
                }
                "Glue" => {
                    self.bump();
                    let a = rc(self.atom()?);
                    let sys = self.system()?;
                    Some(Term::Glue(a, sys))
                }
                "glue" => {
                    self.bump();
                    let sys = self.system()?;
                    let a = rc(self.atom()?);
                    Some(Term::GlueIntro(sys, a))
                }
                "unglue" => {
                    self.bump();
                    let ann = if self.kind() == TokKind::LBrace {
                        self.bump();
                        let b = rc(self.atom()?);
                        let sys = self.system()?;
                        self.expect(TokKind::RBrace, "`}`")?;
                        Some((b, sys))
                    } else {
                        None
                    };
                    Some(Term::Unglue(rc(self.atom()?), ann))
                }
                "next" => {
                    self.bump();
                    let ds = self.delayed_subst()?;
                    let body = self.app()?;
                    Some(Term::Next(ds, rc(body)))
                }
                _ => None,
            };
            if let Some(f) = form {
                return Ok(loc(self.span_from(start), f));
            }
        }
        let mut head = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            head = loc(self.span_from(start), Term::App(rc(head), rc(arg)));
        }
        while self.kind() == TokKind::At {
            self.bump();
            let r = self.interval()?;
            head = loc(self.span_from(start), Term::PApp(rc(head), r));
        }
        Ok(head)
    }

    fn atom(&mut self) -> PResult<Term> {
        let start = self.peek().span;
        let t = self.peek();
        let mut base = match t.kind {
            TokKind::Ident => {
                self.bump();
                Term::Var(Name::new(&t.text))
            }
            TokKind::Int => {
                self.bump();
                let n: u64 = t.text.parse().map_err(|_| ParseError {
                    span: t.span,
                    expected: vec!["numeral".to_string()],
                    found: describe(&t),
                })?;
                Term::numeral(n)
            }
            TokKind::Keyword if t.text == "U" => {
                self.bump();
                Term::Univ
            }
            TokKind::Keyword if t.text == "N" => {
                self.bump();
                Term::Nat
            }
            TokKind::Keyword if t.text == "zero" => {
                self.bump();
                Term::Zero
            }
            TokKind::LBrack => Term::Sys(self.system()?),
            TokKind::LParen => {
                self.bump();
                let a = self.term()?;
                if self.kind() == TokKind::Comma {
                    let mut items = vec![a];
                    while self.kind() == TokKind::Comma {
                        self.bump();
                        items.push(self.term()?);
                    }
                    self.expect(TokKind::RParen, "`)`")?;
                    let last = items.pop().unwrap();
                    items.into_iter().rev().fold(last, |b, a| Term::Pair(rc(a), rc(b)))
                } else {
                    self.expect(TokKind::RParen, "`)`")?;
                    a
                }
            }
            _ => {
                return self.err(&[
                    "identifier",
                    "numeral",
                    "`(`",
                    "`[`",
                    "`U`",
                    "`N`",
                    "`zero`",
                ])
            }
        };
        base = loc(self.span_from(start), base);
        while self.kind() == TokKind::Dot && self.peek_at(1).kind == TokKind::Int {
            self.bump();
            let n = self.bump();
            base = match n.text.as_str() {
                "1" => Term::Fst(rc(base)),
                "2" => Term::Snd(rc(base)),
                _ => {
                    self.pos -= 1;
                    return self.err(&["`1`", "`2`"]);
                }
            };
            base = loc(self.span_from(start), base);
        }
        Ok(base)
    }

    // Modules.

    fn decl(&mut self) -> PResult<Decl> {
        self.decl_start = Some(self.pos);
        let start = self.peek().span;
        let name = self.ident()?;
        let mut params: Vec<(Name, Rc<Term>)> = Vec::new();
        while self.kind() == TokKind::LParen {
            self.bump();
            let mut names = vec![self.ident()?];
            while self.kind() == TokKind::Ident {
                names.push(self.ident()?);
            }
            self.expect(TokKind::Colon, "`:`")?;
            let ty = rc(self.term()?);
            self.expect(TokKind::RParen, "`)`")?;
            for n in names {
                params.push((n, ty.clone()));
            }
        }
        self.expect(TokKind::Colon, "`:`")?;
        let ty = self.term()?;
        self.expect(TokKind::Equals, "`=`")?;
        let body = self.term()?;
        if self.kind() != TokKind::Eof {
            return self.err(&["end of declaration"]);
        }
        self.decl_start = None;
        let span = self.span_from(start);
        let ty = params.iter().rev().fold(ty, |b, (x, a)| Term::Pi(x.clone(), a.clone(), rc(b)));
        let body = params
            .iter()
            .rev()
            .fold(body, |b, (x, a)| Term::Lam(x.clone(), Some(a.clone()), rc(b)));
        Ok(Decl { name, ty: rc(ty), body: rc(body), span })
    }

    fn module(&mut self) -> PResult<ModuleFile> {
        self.expect_kw("module")?;
        let name = self.ident()?;
        self.expect_kw("where")?;
        let mut imports = Vec::new();
        while self.is_kw("import") {
            self.bump();
            imports.push(self.ident()?);
        }
        let mut decls = Vec::new();
        while self.kind() != TokKind::Eof {
            if self.peek().kind == TokKind::Keyword && self.peek().text == "data" {
                return self.err(&["declaration (`data` is reserved)"]);
            }
            decls.push(self.decl()?);
        }
        Ok(ModuleFile { name, imports, decls })
    }
}

pub fn parse_module_tokens(tokens: Vec<Token>) -> Result<ModuleFile, ParseError> {
    let mut p = Parser { toks: tokens, pos: 0, decl_start: None };
    p.module()
}

pub fn parse_module(src: &str) -> Result<ModuleFile, ParseError> {
    parse_module_tokens(tokenize(src)?)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, decl_start: None };
    let t = p.term()?;
    if p.kind() != TokKind::Eof {
        return p.err(&["end of input"]);
    }
    Ok(t)
}

pub fn parse_interval(src: &str) -> Result<IntervalExpr, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, decl_start: None };
    let r = p.interval()?;
    if p.kind() != TokKind::Eof {
        return p.err(&["end of input"]);
    }
    Ok(r)
}
