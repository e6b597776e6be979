//! A small text language for diagrams.
//!
//! ```text
//! # comments run to the end of the line
//! type Q
//! gen f : Q -> Q unitary
//! gen psi : -> Q Q dagger psi_eff
//! (id[Q] * cup[Q]) . (cap[Q] * id[Q])
//! ```
//!
//! `a . b` is `a` followed by `b`, read left to right like a diagram read
//! from top to bottom. `a * b` places `b` beside `a` and binds tighter than
//! `.`. Atoms are generator names, `id[Q,R]`, `cup[Q]`, `cap[Q]`,
//! `swap[Q,R]`, `spider{light,Q,2,1}` (inputs then outputs), `dag(e)` and
//! `tr(e)`.

use std::fmt;

use thiserror::Error;

use crate::diagram::{Color, Diagram, DiagramError, GeneratorDecl, Signature, WireType};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: type error in `{expr}`: {msg}")]
    Type { pos: Pos, expr: String, msg: String },
    #[error("{pos}: bad declaration: {msg}")]
    Declaration { pos: Pos, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Id(Vec<WireType>),
    Gen(String),
    Seq(Box<Expr>, Box<Expr>),
    Par(Box<Expr>, Box<Expr>),
    Cup(WireType),
    Cap(WireType),
    Swap(WireType, WireType),
    Spider(Color, WireType, usize, usize),
    Dagger(Box<Expr>),
    Transpose(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}

/// Declarations plus one expression.
#[derive(Clone, Debug)]
pub struct Program {
    pub signature: Signature,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 12] = ["->", ".", "*", "(", ")", "[", "]", "{", "}", ",", ":", ";"];

fn lex_line(line: &str, lineno: usize) -> Result<Vec<(Tok, Pos)>, DslError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: lineno,
            col: i + 1,
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| DslError::Syntax {
                pos,
                msg: format!("number `{s}` is too large"),
            })?;
            out.push((Tok::Num(n), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let rest: String = chars[i..].iter().take(2).collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), pos));
                i += s.chars().count();
            }
            None => {
                return Err(DslError::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".into(), |t| t.to_string())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek() == Some(&Tok::Sym(sym(s))) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DslError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.found()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}, found {}", self.found())),
        }
    }

    fn num(&mut self) -> Result<usize, DslError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.i += 1;
                Ok(n)
            }
            _ => self.err(format!("expected a number, found {}", self.found())),
        }
    }

    fn seq(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.par()?;
        while self.peek() == Some(&Tok::Sym(".")) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.par()?;
            lhs = Expr::new(ExprKind::Seq(Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::Sym("*")) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.atom()?;
            lhs = Expr::new(ExprKind::Par(Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn types(&mut self, close: &str) -> Result<Vec<WireType>, DslError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(WireType::new(self.ident("a type name")?));
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn exactly<const N: usize>(&mut self, pos: Pos, what: &str) -> Result<[WireType; N], DslError> {
        self.expect("[")?;
        let ts = self.types("]")?;
        ts.try_into().map_err(|ts: Vec<WireType>| DslError::Syntax {
            pos,
            msg: format!("`{what}` takes {N} type(s), got {}", ts.len()),
        })
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        if self.eat("(") {
            let e = self.seq()?;
            self.expect(")")?;
            return Ok(e);
        }
        let name = self.ident("an expression")?;
        let kind = match name.as_str() {
            "id" => {
                self.expect("[")?;
                ExprKind::Id(self.types("]")?)
            }
            "cup" => {
                let [t] = self.exactly(pos, "cup")?;
                ExprKind::Cup(t)
            }
            "cap" => {
                let [t] = self.exactly(pos, "cap")?;
                ExprKind::Cap(t)
            }
            "swap" => {
                let [s, t] = self.exactly(pos, "swap")?;
                ExprKind::Swap(s, t)
            }
            "spider" => {
                self.expect("{")?;
                let cpos = self.pos();
                let color: Color = self
                    .ident("a spider color")?
                    .parse()
                    .map_err(|msg| DslError::Syntax { pos: cpos, msg })?;
                self.expect(",")?;
                let ty = WireType::new(self.ident("a type name")?);
                self.expect(",")?;
                let n = self.num()?;
                self.expect(",")?;
                let m = self.num()?;
                self.expect("}")?;
                ExprKind::Spider(color, ty, n, m)
            }
            "dag" | "tr" => {
                self.expect("(")?;
                let e = Box::new(self.seq()?);
                self.expect(")")?;
                if name == "dag" {
                    ExprKind::Dagger(e)
                } else {
                    ExprKind::Transpose(e)
                }
            }
            _ => ExprKind::Gen(name),
        };
        Ok(Expr::new(kind, pos))
    }
}

fn sym(s: &str) -> &'static str {
    SYMBOLS.iter().find(|x| **x == s).expect("known symbol")
}

fn parse_tokens(toks: Vec<(Tok, Pos)>, end: Pos) -> Result<Expr, DslError> {
    let mut p = Parser { toks, i: 0, end };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.seq()?;
    if p.peek().is_some() {
        return p.err(format!("unexpected {}", p.found()));
    }
    Ok(e)
}

/// Parse a bare expression.
pub fn parse_expr(text: &str) -> Result<Expr, DslError> {
    let mut toks = Vec::new();
    for (n, line) in text.lines().enumerate() {
        toks.extend(lex_line(line, n + 1)?);
    }
    parse_tokens(toks, end_pos(text))
}

fn end_pos(text: &str) -> Pos {
    let lines: Vec<&str> = text.lines().collect();
    Pos {
        line: lines.len().max(1),
        col: lines.last().map_or(0, |l| l.chars().count()) + 1,
    }
}

/// `gen NAME : TYPES -> TYPES [dagger NAME] [self_adjoint] [unitary]`
fn declaration(toks: &[(Tok, Pos)], sig: &mut Signature) -> Result<(), DslError> {
    let pos = toks[0].1;
    let decl_err = |pos: Pos, msg: String| DslError::Declaration { pos, msg };
    let Tok::Ident(kw) = &toks[0].0 else {
        unreachable!("declarations start with a keyword")
    };
    let ident = |k: usize| -> Result<String, DslError> {
        match toks.get(k) {
            Some((Tok::Ident(s), _)) => Ok(s.clone()),
            Some((t, p)) => Err(decl_err(*p, format!("expected a name, found {t}"))),
            None => Err(decl_err(pos, "declaration ends early".into())),
        }
    };
    if kw == "type" {
        if toks.len() == 1 {
            return Err(decl_err(pos, "`type` needs at least one name".into()));
        }
        for k in 1..toks.len() {
            sig.add_type(WireType::new(ident(k)?));
        }
        return Ok(());
    }
    let name = ident(1)?;
    if toks.get(2).map(|t| &t.0) != Some(&Tok::Sym(":")) {
        return Err(decl_err(pos, format!("expected `:` after `{name}`")));
    }
    let arrow = toks
        .iter()
        .position(|t| t.0 == Tok::Sym("->"))
        .ok_or_else(|| decl_err(pos, "missing `->`".into()))?;
    let mut k = 3;
    let mut inputs = Vec::new();
    while k < arrow {
        inputs.push(ident(k)?);
        k += 1;
    }
    k = arrow + 1;
    let mut outputs = Vec::new();
    while k < toks.len() && !matches!(&toks[k].0, Tok::Ident(s) if ["dagger", "self_adjoint", "unitary"].contains(&s.as_str()))
    {
        outputs.push(ident(k)?);
        k += 1;
    }
    let ins: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let outs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    let mut decl = GeneratorDecl::new(&name, &ins, &outs);
    while k < toks.len() {
        match ident(k)?.as_str() {
            "dagger" => {
                decl = decl.with_dagger(&ident(k + 1)?);
                k += 2;
            }
            "self_adjoint" => {
                decl = decl.self_adjoint();
                k += 1;
            }
            "unitary" => {
                decl = decl.unitary();
                k += 1;
            }
            other => return Err(decl_err(toks[k].1, format!("unknown flag `{other}`"))),
        }
    }
    for t in inputs.iter().chain(&outputs) {
        if !sig.has_type(&WireType::new(t.as_str())) {
            sig.add_type(WireType::new(t.as_str()));
        }
    }
    sig.add_generator(decl)
        .map_err(|e| decl_err(pos, e.to_string()))
}

/// Parse declarations and an expression. `base` supplies types and
/// generators declared elsewhere, e.g. by a model file.
pub fn parse_program(text: &str, base: &Signature) -> Result<Program, DslError> {
    let mut sig = base.clone();
    let mut expr_toks = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let toks = lex_line(line, n + 1)?;
        let keyword = matches!(toks.first(), Some((Tok::Ident(k), _)) if k == "type" || k == "gen");
        if keyword && looks_like_declaration(&toks) {
            declaration(&toks, &mut sig)?;
        } else {
            expr_toks.extend(toks);
        }
    }
    let expr = parse_tokens(expr_toks, end_pos(text))?;
    Ok(Program {
        signature: sig,
        expr,
    })
}

/// `type` or `gen` followed by a name rather than an operator, so that a
/// generator called `gen` can still be used in an expression.
fn looks_like_declaration(toks: &[(Tok, Pos)]) -> bool {
    matches!(toks.get(1), Some((Tok::Ident(_), _)))
}

fn type_err(e: &Expr, msg: impl fmt::Display) -> DslError {
    DslError::Type {
        pos: e.pos,
        expr: print_expr(e),
        msg: msg.to_string(),
    }
}

/// Build the diagram an expression denotes.
pub fn elaborate(e: &Expr, sig: &Signature) -> Result<Diagram, DslError> {
    let check = |e: &Expr, ts: &[&WireType]| -> Result<(), DslError> {
        for t in ts {
            sig.check_type(t).map_err(|err| type_err(e, err))?;
        }
        Ok(())
    };
    Ok(match &e.kind {
        ExprKind::Id(ts) => {
            check(e, &ts.iter().collect::<Vec<_>>())?;
            Diagram::identity(ts)
        }
        ExprKind::Gen(name) => sig.generator(name).map_err(|err| type_err(e, err))?,
        ExprKind::Cup(t) => {
            check(e, &[t])?;
            Diagram::cup(t)
        }
        ExprKind::Cap(t) => {
            check(e, &[t])?;
            Diagram::cap(t)
        }
        ExprKind::Swap(s, t) => {
            check(e, &[s, t])?;
            Diagram::swap(s, t)
        }
        ExprKind::Spider(c, t, n, m) => {
            check(e, &[t])?;
            Diagram::spider(*c, t, *n, *m)
        }
        ExprKind::Dagger(a) => elaborate(a, sig)?.dagger(),
        ExprKind::Transpose(a) => elaborate(a, sig)?.transpose(),
        ExprKind::Par(a, b) => elaborate(a, sig)?.compose_par(&elaborate(b, sig)?),
        ExprKind::Seq(a, b) => {
            let (da, db) = (elaborate(a, sig)?, elaborate(b, sig)?);
            da.compose_seq(&db).map_err(|err| match err {
                DiagramError::ArityMismatch { .. } | DiagramError::TypeMismatch { .. } => type_err(
                    e,
                    format!(
                        "`{}` ends in {} but `{}` starts with {}",
                        print_expr(a),
                        show_types(&da.output_types()),
                        print_expr(b),
                        show_types(&db.input_types())
                    ),
                ),
                other => type_err(e, other),
            })?
        }
    })
}

fn show_types(ts: &[WireType]) -> String {
    format!(
        "[{}]",
        ts.iter().map(|t| t.name()).collect::<Vec<_>>().join(",")
    )
}

/// Parse declarations and an expression and build the diagram.
pub fn load(text: &str, base: &Signature) -> Result<(Signature, Diagram), DslError> {
    let p = parse_program(text, base)?;
    let d = elaborate(&p.expr, &p.signature)?;
    Ok((p.signature, d))
}

fn write_types(ts: &[WireType]) -> String {
    ts.iter().map(|t| t.name()).collect::<Vec<_>>().join(",")
}

/// Print with the fewest parentheses that parse back to the same tree.
pub fn print_expr(e: &Expr) -> String {
    fn go(e: &Expr, level: u8, out: &mut String) {
        // 0: sequence, 1: parallel, 2: atom
        match &e.kind {
            ExprKind::Seq(a, b) => {
                if level > 0 {
                    out.push('(');
                }
                go(a, 0, out);
                out.push_str(" . ");
                go(b, 1, out);
                if level > 0 {
                    out.push(')');
                }
            }
            ExprKind::Par(a, b) => {
                if level > 1 {
                    out.push('(');
                }
                go(a, 1, out);
                out.push_str(" * ");
                go(b, 2, out);
                if level > 1 {
                    out.push(')');
                }
            }
            ExprKind::Id(ts) => out.push_str(&format!("id[{}]", write_types(ts))),
            ExprKind::Gen(n) => out.push_str(n),
            ExprKind::Cup(t) => out.push_str(&format!("cup[{}]", t.name())),
            ExprKind::Cap(t) => out.push_str(&format!("cap[{}]", t.name())),
            ExprKind::Swap(s, t) => out.push_str(&format!("swap[{},{}]", s.name(), t.name())),
            ExprKind::Spider(c, t, n, m) => {
                out.push_str(&format!("spider{{{c},{},{n},{m}}}", t.name()))
            }
            ExprKind::Dagger(a) | ExprKind::Transpose(a) => {
                out.push_str(if matches!(e.kind, ExprKind::Dagger(_)) {
                    "dag("
                } else {
                    "tr("
                });
                go(a, 0, out);
                out.push(')');
            }
        }
    }
    let mut s = String::new();
    go(e, 0, &mut s);
    s
}

/// Declarations for every type and generator of `sig`, one per line.
pub fn print_signature(sig: &Signature) -> String {
    let mut out = String::new();
    let types: Vec<&str> = sig.types().map(|t| t.name()).collect();
    if !types.is_empty() {
        out.push_str(&format!("type {}\n", types.join(" ")));
    }
    for g in sig.generators() {
        let ins: Vec<&str> = g.inputs.iter().map(|t| t.name()).collect();
        let outs: Vec<&str> = g.outputs.iter().map(|t| t.name()).collect();
        out.push_str(&format!("gen {} : {} -> {}", g.name, ins.join(" "), outs.join(" ")));
        if let Some(d) = &g.dagger {
            out.push_str(&format!(" dagger {d}"));
        }
        if g.unitary {
            out.push_str(" unitary");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "type Q\ngen f : Q -> Q unitary\ngen g : Q Q -> Q\n";

    fn load_ok(body: &str) -> Diagram {
        load(&format!("{HEADER}{body}"), &Signature::new()).unwrap().1
    }

    #[test]
    fn snake_is_the_identity() {
        let d = load_ok("(id[Q] * cup[Q]) . (cap[Q] * id[Q])");
        assert!(d.canonical_equal(&Diagram::identity(&[WireType::new("Q")])));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("a . b * c . d").unwrap();
        assert_eq!(print_expr(&e), "a . b * c . d");
        let ExprKind::Seq(l, _) = &e.kind else { panic!() };
        assert!(matches!(l.kind, ExprKind::Seq(_, _)));
        let e = parse_expr("a * (b . c)").unwrap();
        assert_eq!(print_expr(&e), "a * (b . c)");
        let e = parse_expr("a . (b . c)").unwrap();
        assert_eq!(print_expr(&e), "a . (b . c)");
    }

    #[test]
    fn double_dagger() {
        let d = load_ok("dag(dag(f))");
        assert!(d.canonical_equal(&load_ok("f")));
        assert!(load_ok("tr(f)").canonical_equal(&load_ok("f").transpose_by_bending()));
    }

    #[test]
    fn type_errors_are_positioned() {
        let err = load(&format!("{HEADER}f . g"), &Signature::new()).unwrap_err();
        match err {
            DslError::Type { pos, expr, .. } => {
                assert_eq!(pos, Pos { line: 4, col: 3 });
                assert_eq!(expr, "f . g");
            }
            other => panic!("{other}"),
        }
        let err = load(&format!("{HEADER}f . nope"), &Signature::new()).unwrap_err();
        assert!(matches!(err, DslError::Type { pos: Pos { line: 4, col: 5 }, .. }));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = parse_expr("f .\n  (g * ").unwrap_err();
        assert!(matches!(err, DslError::Syntax { pos: Pos { line: 2, .. }, .. }), "{err}");
        let err = parse_expr("f $ g").unwrap_err();
        assert_eq!(
            err,
            DslError::Syntax {
                pos: Pos { line: 1, col: 3 },
                msg: "unexpected character `$`".into()
            }
        );
        assert!(parse_expr("spider{blue,Q,1,1}").is_err());
        assert!(parse_expr("cup[Q,Q]").is_err());
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn spiders_and_swaps() {
        let d = load_ok("spider{dark,Q,1,2} . swap[Q,Q]");
        assert_eq!((d.inputs().len(), d.outputs().len()), (1, 2));
        assert!(load_ok("id[]").canonical_equal(&Diagram::empty()));
    }

    #[test]
    fn signature_round_trip() {
        let (sig, _) = load(&format!("{HEADER}f"), &Signature::new()).unwrap();
        let text = print_signature(&sig);
        let (sig2, _) = load(&format!("{text}f"), &Signature::new()).unwrap();
        assert_eq!(sig, sig2);
    }
}
