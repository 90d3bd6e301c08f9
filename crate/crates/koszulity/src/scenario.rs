//! Scenario files: JSON descriptions of a weighted base ring, a list of
//! sections, a verification window, and which checks to run.

use crate::constructions::RawPoly;
use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::grading::Window;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const ALL_CHECKS: [&str; 10] =
    ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub weights: Vec<i32>,
    /// polynomials in x1..xn; see `parse_poly` for the grammar
    pub sections: Vec<String>,
    pub window: WindowSpec,
    #[serde(default)]
    pub field: Option<String>,
    /// subset of C1..C10; omitted means all
    #[serde(default)]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub caps: CapsSpec,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowSpec {
    pub h: (i32, i32),
    pub w: (i32, i32),
    pub d: (i32, i32),
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct CapsSpec {
    /// largest slice dimension materialized before giving up (default 20000)
    pub max_slice_dim: Option<usize>,
    /// extra depths tried past the structural bound when localizing
    pub localize_extra_depth: Option<i32>,
}

/// A fully validated scenario, ready for the pipeline.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub weights: Vec<i32>,
    pub section_sources: Vec<String>,
    pub sections: Vec<RawPoly>,
    pub window: Window,
    pub field: FieldKind,
    pub checks: Vec<String>,
    pub max_slice_dim: usize,
    pub localize_extra_depth: i32,
}

impl Scenario {
    pub fn from_file_spec(sf: ScenarioFile) -> Result<Scenario> {
        if sf.id.is_empty() || !sf.id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::Scenario(format!(
                "scenario id {:?} must be nonempty [A-Za-z0-9_-]",
                sf.id
            )));
        }
        let n = sf.weights.len();
        if n == 0 {
            return Err(Error::Scenario("weights must be nonempty".into()));
        }
        let sections = sf
            .sections
            .iter()
            .map(|s| parse_poly(s, n))
            .collect::<Result<Vec<_>>>()?;
        let window = Window::new(sf.window.h, sf.window.w, sf.window.d)?;
        let field = match &sf.field {
            None => FieldKind::Rational,
            Some(s) => parse_field(s)?,
        };
        let checks = match &sf.checks {
            None => ALL_CHECKS.iter().map(|s| s.to_string()).collect(),
            Some(list) => {
                let mut out = Vec::new();
                for c in list {
                    let c = c.trim().to_ascii_uppercase();
                    if !ALL_CHECKS.contains(&c.as_str()) {
                        return Err(Error::Scenario(format!(
                            "unknown check {c:?}; expected one of C1..C10"
                        )));
                    }
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                out
            }
        };
        Ok(Scenario {
            id: sf.id,
            description: sf.description,
            weights: sf.weights,
            section_sources: sf.sections,
            sections,
            window,
            field,
            checks,
            max_slice_dim: sf.caps.max_slice_dim.unwrap_or(20_000),
            localize_extra_depth: sf.caps.localize_extra_depth.unwrap_or(3),
        })
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        let sf: ScenarioFile = serde_json::from_str(&text)?;
        Scenario::from_file_spec(sf)
    }

    pub fn runs(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }
}

/// "rational" or "fp:<p>" with p prime in (2^20, 2^30).
pub fn parse_field(s: &str) -> Result<FieldKind> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("rational") {
        return Ok(FieldKind::Rational);
    }
    if let Some(rest) = s.strip_prefix("fp:") {
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::Field(format!("bad modulus {rest:?}")))?;
        let k = FieldKind::Fp(p);
        k.validate()?;
        return Ok(k);
    }
    Err(Error::Field(format!(
        "expected \"rational\" or \"fp:<prime>\", got {s:?}"
    )))
}

// ---------------------------------------------------------------------------
// polynomial parser
//
// expr   := term (('+' | '-') term)*
// term   := factor ('*' factor)*
// factor := INT | VAR ('^' INT)? | '(' expr ')' ('^' INT)? | '-' factor
// VAR    := 'x' INT   (1-based, at most n)
//
// Whitespace is insignificant; multiplication is always explicit.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err_at(col: usize, msg: impl Into<String>) -> Error {
    Error::PolyParse { col, msg: msg.into() }
}

fn lex(src: &str, n: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let v = digits
                    .parse::<BigInt>()
                    .map_err(|_| err_at(col, format!("bad integer {digits:?}")))?;
                toks.push((Tok::Int(v), col));
            }
            'x' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err_at(col, "expected variable index after 'x'"));
                }
                let digits: String = chars[start..i].iter().collect();
                let idx: usize = digits
                    .parse()
                    .map_err(|_| err_at(col, format!("bad variable index {digits:?}")))?;
                if idx == 0 || idx > n {
                    return Err(err_at(
                        col,
                        format!("variable x{idx} out of range (1..={n})"),
                    ));
                }
                toks.push((Tok::Var(idx - 1), col));
            }
            _ => return Err(err_at(col, format!("unexpected character {c:?}"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RawPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = poly_add(&acc, &self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = poly_add(&acc, &poly_neg(&self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RawPoly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = poly_mul(&acc, &self.factor()?, self.n);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(v)) => {
                let s = v.to_string();
                s.parse::<u32>()
                    .map_err(|_| err_at(col, format!("exponent {s} out of range")))
            }
            other => Err(err_at(
                col,
                format!("expected integer exponent, got {other:?}"),
            )),
        }
    }

    fn factor(&mut self) -> Result<RawPoly> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(poly_const(v, self.n)),
            Some(Tok::Var(i)) => {
                let mut e = 1u32;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    e = self.exponent()?;
                }
                let mut exp = vec![0u32; self.n];
                exp[i] = e;
                Ok(vec![(exp, BigRational::from_integer(BigInt::from(1)))])
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let ccol = self.col();
                match self.bump() {
                    Some(Tok::RParen) => {}
                    other => {
                        return Err(err_at(ccol, format!("expected ')', got {other:?}")))
                    }
                }
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let e = self.exponent()?;
                    let mut acc = poly_const(BigInt::from(1), self.n);
                    for _ in 0..e {
                        acc = poly_mul(&acc, &inner, self.n);
                    }
                    Ok(acc)
                } else {
                    Ok(inner)
                }
            }
            Some(Tok::Minus) => Ok(poly_neg(&self.factor()?)),
            other => Err(err_at(
                col,
                format!("expected integer, variable, or '(', got {other:?}"),
            )),
        }
    }
}

fn poly_const(v: BigInt, n: usize) -> RawPoly {
    let q = BigRational::from_integer(v);
    if q.is_zero() {
        Vec::new()
    } else {
        vec![(vec![0u32; n], q)]
    }
}

fn poly_normalize(mut p: RawPoly) -> RawPoly {
    p.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: RawPoly = Vec::new();
    for (exp, c) in p {
        match out.last_mut() {
            Some((e, acc)) if *e == exp => *acc += c,
            _ => out.push((exp, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn poly_add(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let mut all = a.clone();
    all.extend(b.iter().cloned());
    poly_normalize(all)
}

fn poly_neg(a: &RawPoly) -> RawPoly {
    a.iter().map(|(e, c)| (e.clone(), -c.clone())).collect()
}

fn poly_mul(a: &RawPoly, b: &RawPoly, n: usize) -> RawPoly {
    let mut all = Vec::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = vec![0u32; n];
            for i in 0..n {
                e[i] = ea[i] + eb[i];
            }
            all.push((e, ca * cb));
        }
    }
    poly_normalize(all)
}

/// Parse one polynomial in variables x1..xn into exponent/coefficient form.
pub fn parse_poly(src: &str, n: usize) -> Result<RawPoly> {
    let toks = lex(src, n)?;
    let end_col = src.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end_col, n };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err_at(p.col(), "trailing input after expression"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q_from_i64;

    #[test]
    fn parses_sums_of_powers() {
        let p = parse_poly("x1^3 + x2^3 + x3^3", 3).unwrap();
        assert_eq!(
            p,
            vec![
                (vec![0, 0, 3], q_from_i64(1)),
                (vec![0, 3, 0], q_from_i64(1)),
                (vec![3, 0, 0], q_from_i64(1)),
            ]
        );
    }

    #[test]
    fn parses_products_and_signs() {
        let p = parse_poly("2*x1*x2 - x2^2", 2).unwrap();
        assert_eq!(
            p,
            vec![(vec![0, 2], q_from_i64(-1)), (vec![1, 1], q_from_i64(2))]
        );
        let q = parse_poly("-x1 + x1", 1).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn parses_parenthesized_powers() {
        let p = parse_poly("(x1 + x2)^2", 2).unwrap();
        assert_eq!(
            p,
            vec![
                (vec![0, 2], q_from_i64(1)),
                (vec![1, 1], q_from_i64(2)),
                (vec![2, 0], q_from_i64(1)),
            ]
        );
    }

    #[test]
    fn errors_carry_column_positions() {
        match parse_poly("x1 + y2", 2) {
            Err(Error::PolyParse { col, .. }) => assert_eq!(col, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x3", 2) {
            Err(Error::PolyParse { col, msg }) => {
                assert_eq!(col, 1);
                assert!(msg.contains("out of range"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x1 *", 2) {
            Err(Error::PolyParse { col, .. }) => assert_eq!(col, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x1 x2", 2) {
            Err(Error::PolyParse { col, msg }) => {
                assert_eq!(col, 4);
                assert!(msg.contains("trailing"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn field_strings() {
        assert_eq!(parse_field("rational").unwrap(), FieldKind::Rational);
        assert_eq!(parse_field("fp:1048583").unwrap(), FieldKind::Fp(1_048_583));
        assert!(parse_field("fp:6").is_err());
        assert!(parse_field("real").is_err());
    }

    #[test]
    fn scenario_roundtrip() {
        let text = r#"{
            "id": "axes",
            "description": "two crossing lines",
            "weights": [1, 1],
            "sections": ["x1*x2"],
            "window": { "h": [-4, 3], "w": [-5, 5], "d": [0, 6] },
            "field": "rational",
            "checks": ["C1", "C2"]
        }"#;
        let sf: ScenarioFile = serde_json::from_str(text).unwrap();
        let sc = Scenario::from_file_spec(sf).unwrap();
        assert_eq!(sc.id, "axes");
        assert_eq!(sc.sections.len(), 1);
        assert_eq!(sc.sections[0], vec![(vec![1, 1], q_from_i64(1))]);
        assert!(sc.runs("C1") && sc.runs("C2") && !sc.runs("C3"));
        assert_eq!(sc.max_slice_dim, 20_000);
    }

    #[test]
    fn unknown_checks_rejected() {
        let text = r#"{
            "id": "bad",
            "weights": [1],
            "sections": ["x1"],
            "window": { "h": [-1, 1], "w": [-1, 1], "d": [0, 1] },
            "checks": ["C11"]
        }"#;
        let sf: ScenarioFile = serde_json::from_str(text).unwrap();
        assert!(Scenario::from_file_spec(sf).is_err());
    }
}
