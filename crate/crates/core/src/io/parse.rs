//! The problem-file grammar.
//!
//! ```text
//! # two monomial ideals in the plane
//! ring Q[X,Y];
//! I = (X^2, X*Y^2);
//! J = (X^2, X*Y);
//! option c = 5;
//! option assert_domain;
//! ```
//!
//! Fields are `Q` or `GF p`; relations follow the variable list as
//! `/ (f1, f2, ...)`. Multiplication is explicit (`*`), powers use `^`,
//! coefficients are integers (or `a/b`). `#` starts a comment.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Rational, Rationals};
use crate::poly::Polynomial;
use crate::ring::{GradedIdeal, RingSpec};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize, usize))> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        let (l0, c0) = (line, col);
        let advance = |line: &mut usize, col: &mut usize, c: char| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if ch == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                advance(&mut line, &mut col, chars[i].1);
                i += 1;
            }
            continue;
        }
        if ch.is_whitespace() {
            advance(&mut line, &mut col, ch);
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                advance(&mut line, &mut col, chars[i].1);
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push(Token {
                tok: Tok::Int(s.parse().unwrap()),
                pos,
                line: l0,
                col: c0,
            });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                advance(&mut line, &mut col, chars[i].1);
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push(Token {
                tok: Tok::Ident(s),
                pos,
                line: l0,
                col: c0,
            });
            continue;
        }
        if "[](),;=+-*^/".contains(ch) {
            out.push(Token {
                tok: Tok::Sym(ch),
                pos,
                line: l0,
                col: c0,
            });
            advance(&mut line, &mut col, ch);
            i += 1;
            continue;
        }
        return Err(Error::Syntax {
            line,
            col,
            msg: format!("unexpected character `{ch}`"),
        });
    }
    Ok((out, (text.len(), line, col)))
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    end: (usize, usize, usize),
    names: &'a [String],
}

type QPoly = Polynomial<Rationals>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize, usize) {
        self.toks
            .get(self.at)
            .map_or(self.end, |t| (t.pos, t.line, t.col))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (_, line, col) = self.here();
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected a name, found {}", self.describe()))),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.err(format!("expected an integer, found {}", self.describe()))),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.err(format!("{what} is too large")))
    }

    fn poly(&mut self) -> Result<QPoly> {
        let v = self.names.len();
        let f = Rationals;
        let mut acc = Polynomial::zero(v);
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t, &f) } else { acc.add(&t, &f) };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.power()?;
        while self.eat('*') {
            let f = self.power()?;
            acc = acc.mul(&f, &Rationals);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.small_int("exponent")?;
            if e > u16::MAX as u32 {
                return Err(Error::Overflow);
            }
            return Ok(base.pow(e, &Rationals));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly> {
        let v = self.names.len();
        let (_, line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let mut c = Rational::from_bigint(n);
                if self.eat('/') {
                    let d = self.int()?;
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    c = c.div(&Rational::from_bigint(d));
                }
                Ok(Polynomial::constant(v, c, &Rationals))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Polynomial::var(v, i, &Rationals)),
                    None => Err(Error::UnknownVariable { name, line, col }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            _ => Err(self.err(format!("expected a term, found {}", self.describe()))),
        }
    }

    /// `( poly, poly, ... )`, possibly empty; each entry with its position.
    fn poly_list(&mut self) -> Result<Vec<(QPoly, (usize, usize))>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let (_, line, col) = self.here();
            out.push((self.poly()?, (line, col)));
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}

/// Parse a single polynomial in the given variables.
pub fn parse_polynomial<F: Field>(text: &str, names: &[String], field: &F) -> Result<Polynomial<F>> {
    let (toks, end) = lex(text).map_err(|e| to_offset(e, text))?;
    let mut p = Parser {
        toks,
        at: 0,
        end,
        names,
    };
    let q = p.poly().map_err(|e| to_offset(e, text))?;
    if p.at < p.toks.len() {
        return Err(to_offset(p.err(format!("unexpected {}", p.describe())), text));
    }
    convert(&q, field)
}

fn to_offset(e: Error, text: &str) -> Error {
    match e {
        Error::Syntax { line, col, msg } => {
            let pos = text
                .split_inclusive('\n')
                .take(line - 1)
                .map(|l| l.chars().count())
                .sum::<usize>()
                + col
                - 1;
            Error::Parse { pos, msg }
        }
        other => other,
    }
}

/// Map a polynomial with rational coefficients into another field.
pub fn convert<F: Field>(p: &Polynomial<Rationals>, field: &F) -> Result<Polynomial<F>> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let den = field.from_bigint(&c.denom());
        if field.is_zero(&den) {
            return Err(Error::InvalidField(format!(
                "coefficient {c} has a denominator divisible by the characteristic"
            )));
        }
        terms.push((m.clone(), field.div(&field.from_bigint(&c.numer()), &den)));
    }
    Ok(Polynomial::from_terms(p.nvars(), terms, field))
}

/// Optional settings carried by a problem file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProblemOptions {
    pub c: Option<u32>,
    pub assert_domain: bool,
    pub oracle: bool,
}

/// A parsed problem: ring data, named ideals, options. Polynomials are kept
/// with rational coefficients; [`ProblemSpec::instantiate`] maps them into
/// the declared field.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub relations: Vec<Polynomial<Rationals>>,
    pub ideals: Vec<(String, Vec<Polynomial<Rationals>>)>,
    pub options: ProblemOptions,
}

/// A problem instantiated over a concrete field.
pub struct Problem<F: Field> {
    pub ring: Arc<RingSpec<F>>,
    pub ideals: Vec<(String, GradedIdeal<F>)>,
    pub options: ProblemOptions,
}

impl<F: Field> Problem<F> {
    pub fn ideal(&self, name: &str) -> Result<&GradedIdeal<F>> {
        self.ideals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, i)| i)
            .ok_or_else(|| Error::Precondition(format!("problem defines no ideal named `{name}`")))
    }
}

const RESERVED: &[&str] = &["ring", "option", "Q", "GF"];

/// Parse a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let (toks, end) = lex(text)?;
    let no_names: Vec<String> = Vec::new();
    let mut p = Parser {
        toks,
        at: 0,
        end,
        names: &no_names,
    };

    if p.peek() != Some(&Tok::Ident("ring".into())) {
        return Err(p.err("a problem must start with a `ring` declaration"));
    }
    p.at += 1;
    let field = match p.ident()?.as_str() {
        "Q" => FieldSpec::Rationals,
        "GF" => {
            let (_, line, col) = p.here();
            let n = p.int()?;
            let spec = FieldSpec::PrimeField {
                p: u64::try_from(n).map_err(|_| Error::Syntax {
                    line,
                    col,
                    msg: "characteristic is too large".into(),
                })?,
            };
            spec.validate()?;
            spec
        }
        other => {
            p.at -= 1;
            return Err(p.err(format!("unknown field `{other}`; expected `Q` or `GF p`")));
        }
    };
    p.expect('[')?;
    let mut variables: Vec<String> = Vec::new();
    loop {
        let (_, line, col) = p.here();
        let name = p.ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("`{name}` is reserved and cannot name a variable"),
            });
        }
        if variables.contains(&name) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("duplicate variable `{name}`"),
            });
        }
        variables.push(name);
        if p.eat(']') {
            break;
        }
        p.expect(',')?;
    }
    let names = variables.clone();
    p.names = &names;
    let mut relations = Vec::new();
    if p.eat('/') {
        for (i, (r, _)) in p.poly_list()?.into_iter().enumerate() {
            check_homogeneous(&r, "relations", i, &names)?;
            if !r.is_zero() {
                relations.push(r);
            }
        }
    }
    p.expect(';')?;

    let mut ideals: Vec<(String, Vec<QPoly>)> = Vec::new();
    let mut options = ProblemOptions::default();
    while p.peek().is_some() {
        let (_, line, col) = p.here();
        let name = p.ident()?;
        if name == "option" {
            let key = p.ident()?;
            match key.as_str() {
                "c" => {
                    p.expect('=')?;
                    options.c = Some(p.small_int("c")?);
                }
                "assert_domain" => options.assert_domain = true,
                "oracle" => options.oracle = true,
                _ => {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("unknown option `{key}`"),
                    })
                }
            }
            p.expect(';')?;
            continue;
        }
        if RESERVED.contains(&name.as_str()) || names.contains(&name) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("`{name}` cannot name an ideal"),
            });
        }
        if ideals.iter().any(|(n, _)| *n == name) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("ideal `{name}` defined twice"),
            });
        }
        p.expect('=')?;
        let gens = p.poly_list()?;
        p.expect(';')?;
        let mut out = Vec::new();
        for (i, (g, _)) in gens.into_iter().enumerate() {
            check_homogeneous(&g, &name, i, &names)?;
            if !g.is_zero() {
                out.push(g);
            }
        }
        ideals.push((name, out));
    }
    Ok(ProblemSpec {
        field,
        variables,
        relations,
        ideals,
        options,
    })
}

fn check_homogeneous(p: &QPoly, ideal: &str, index: usize, names: &[String]) -> Result<()> {
    if p.is_zero() || p.is_homogeneous() {
        Ok(())
    } else {
        Err(Error::NonHomogeneous {
            ideal: ideal.to_string(),
            index,
            text: p.display(names, &Rationals),
        })
    }
}

impl ProblemSpec {
    /// Canonical text form; parsing it gives back an equal spec.
    pub fn to_canonical_string(&self) -> String {
        let show = |p: &QPoly| p.display(&self.variables, &Rationals);
        let mut s = String::new();
        write!(s, "ring {}[{}]", self.field, self.variables.join(",")).unwrap();
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(show).collect();
            write!(s, " / ({})", rels.join(", ")).unwrap();
        }
        s.push_str(";\n");
        for (name, gens) in &self.ideals {
            let g: Vec<String> = gens.iter().map(show).collect();
            writeln!(s, "{name} = ({});", g.join(", ")).unwrap();
        }
        if let Some(c) = self.options.c {
            writeln!(s, "option c = {c};").unwrap();
        }
        if self.options.assert_domain {
            s.push_str("option assert_domain;\n");
        }
        if self.options.oracle {
            s.push_str("option oracle;\n");
        }
        s
    }

    pub fn instantiate<F: Field>(&self, field: F) -> Result<Problem<F>> {
        if field.spec() != self.field {
            return Err(Error::InvalidField(format!(
                "problem is over {} but was instantiated over {}",
                self.field,
                field.spec()
            )));
        }
        let rels = self
            .relations
            .iter()
            .map(|r| convert(r, &field))
            .collect::<Result<Vec<_>>>()?;
        let ring = RingSpec::new(field.clone(), self.variables.clone(), rels)?;
        let mut ideals = Vec::new();
        for (name, gens) in &self.ideals {
            let gens = gens
                .iter()
                .map(|g| convert(g, &field))
                .collect::<Result<Vec<_>>>()?;
            ideals.push((name.clone(), GradedIdeal::new(ring.clone(), gens)?));
        }
        Ok(Problem {
            ring,
            ideals,
            options: self.options.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::monomial::Monomial;
    use proptest::prelude::*;

    const PLANE: &str = "ring Q[X,Y]; I = (X^2, X*Y^2); J = (X^2, X*Y);";
    const CUBIC_CONE: &str = "ring Q[x,y,z] / (x^3+y^3+z^3); I = (x+y+z, y*z); J = (x+y, z);";

    #[test]
    fn reference_examples_parse() {
        let s = parse_problem(PLANE).unwrap();
        assert_eq!(s.field, FieldSpec::Rationals);
        assert_eq!(s.variables, vec!["X", "Y"]);
        assert_eq!(s.ideals.len(), 2);
        assert_eq!(s.ideals[0].0, "I");
        let p = s.instantiate(Rationals).unwrap();
        assert_eq!(p.ideal("J").unwrap().display_gens(), vec!["X^2", "X*Y"]);

        let s = parse_problem(CUBIC_CONE).unwrap();
        assert_eq!(s.relations.len(), 1);
        let p = s.instantiate(Rationals).unwrap();
        assert_eq!(p.ring.degree(), 3);
        assert_eq!(p.ideal("I").unwrap().generators().len(), 2);
    }

    #[test]
    fn rejects_non_homogeneous() {
        let e = parse_problem("ring Q[x,y]; I = (x^2 + y);").unwrap_err();
        assert!(matches!(e, Error::NonHomogeneous { .. }), "{e}");
        assert!(e.is_parse());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_problem("ring Q[x,y];\nI = (x^2, w);") {
            Err(Error::UnknownVariable { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("w", 2, 11));
            }
            other => panic!("{other:?}"),
        }
        match parse_problem("ring Q[x,y];\nI = (x^2 y);") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 10)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_problem("ring R[x];"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("ring GF 4[x];"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_polynomial("x+", &["x".to_string()], &Rationals), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn options_and_fields() {
        let s = parse_problem("ring GF 101[a,b]; # comment\nI = (a*b); option c = 7; option assert_domain;").unwrap();
        assert_eq!(s.field, FieldSpec::PrimeField { p: 101 });
        assert_eq!(s.options.c, Some(7));
        assert!(s.options.assert_domain);
        let p = s.instantiate(PrimeField::new(101).unwrap()).unwrap();
        assert_eq!(p.ring.nvars(), 2);
        assert!(s.instantiate(Rationals).is_err());
    }

    #[test]
    fn polynomial_syntax() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let p = parse_polynomial("(x+y)*(x-y)", &names, &Rationals).unwrap();
        assert_eq!(p.display(&names, &Rationals), "x^2-y^2");
        let q = parse_polynomial("-3*x*y - 1/2", &names, &Rationals).unwrap();
        assert_eq!(q.display(&names, &Rationals), "-3*x*y-1/2");
        let r = parse_polynomial("(x+y)^2", &names, &PrimeField::new(3).unwrap()).unwrap();
        assert_eq!(r.display(&names, &PrimeField::new(3).unwrap()), "x^2-x*y+y^2");
    }

    #[test]
    fn round_trip() {
        for text in [PLANE, CUBIC_CONE, "ring GF 7[u,v,w]; A = (u*v-2*w^2, 3*u); option oracle;"] {
            let s = parse_problem(text).unwrap();
            let t = s.to_canonical_string();
            let s2 = parse_problem(&t).unwrap();
            assert_eq!(s, s2);
            assert_eq!(s2.to_canonical_string(), t);
        }
    }

    proptest! {
        #[test]
        fn random_polynomials_round_trip(
            terms in prop::collection::vec((-20i64..20, 0u16..4, 0u16..4), 1..6),
            d in 1u16..4,
        ) {
            let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
            let f = Rationals;
            let p = Polynomial::<Rationals>::from_terms(
                3,
                terms.into_iter().filter_map(|(c, a, b)| {
                    (a + b <= d).then(|| (Monomial::new([a, b, d - a - b]), f.from_i64(c)))
                }).collect::<Vec<_>>(),
                &f,
            );
            let text = p.display(&names, &f);
            prop_assert_eq!(parse_polynomial(&text, &names, &f).unwrap(), p);
        }
    }
}
