//! Text formats: complex files, map files, the element grammar and the JSON
//! records for elements.
//!
//! Element grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! element  := '0' | [sign] term (sign term)*
//! term     := [rational '*'] basis
//! rational := int ['/' int]
//! basis    := '[' verts '|' verts ']' | '<' verts (';' verts)* '>'
//! ```
//!
//! Vertex tokens are any run of characters other than whitespace, `;`, `|`
//! and the brackets `[ ] < >`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::functor::VertexMap;
use crate::incidence::{BasisPair, IncidenceElement};
use crate::stories::{IdealGenerator, Story, StoryElement};
use crate::Scalar;

/// Parses a complex file:
///
/// ```text
/// # comment
/// vertices: 1 2 3 4
/// facet: 1 2 3
/// ```
pub fn parse_complex(text: &str) -> Result<Complex> {
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut facets: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| Error::Syntax {
            line: line_no,
            message: format!("expected `vertices:` or `facet:`, found `{line}`"),
        })?;
        let tokens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "vertices" => {
                if vertices.is_some() {
                    return Err(Error::Syntax { line: line_no, message: "second `vertices:` line".into() });
                }
                vertices = Some((line_no, tokens));
            }
            "facet" => facets.push((line_no, tokens)),
            other => {
                return Err(Error::Syntax { line: line_no, message: format!("unknown key `{other}`") });
            }
        }
    }
    let (vline, order) = vertices.ok_or_else(|| Error::Syntax {
        line: text.lines().count().max(1),
        message: "missing `vertices:` line".into(),
    })?;
    if let Err(e) = Complex::build::<String, Vec<String>>(&order, &[]) {
        return Err(located(vline, e));
    }
    for (line, facet) in &facets {
        let probe: Vec<Vec<String>> = vec![facet.clone()];
        if let Err(e) = Complex::build(&order, &probe) {
            return Err(located(*line, e));
        }
    }
    let facets: Vec<Vec<String>> = facets.into_iter().map(|(_, f)| f).collect();
    Complex::build(&order, &facets)
}

fn located(line: usize, e: Error) -> Error {
    match e {
        e @ Error::Syntax { .. } => e,
        other => Error::Syntax { line, message: other.to_string() },
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Prints a complex in the file format, listing the maximal simplices.
pub fn format_complex(c: &Complex) -> String {
    let mut out = format!("vertices: {}\n", c.vertex_order().join(" "));
    for id in c.facets() {
        if c.simplex(id).len() > 1 {
            out.push_str(&format!("facet: {}\n", c.format_id(id)));
        }
    }
    out
}

/// Parses a map file (`map:` header, then `source -> target` lines).
pub fn parse_map(text: &str, source: &Arc<Complex>, target: &Arc<Complex>) -> Result<VertexMap> {
    let mut header = false;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if !header {
            if line != "map:" {
                return Err(Error::Syntax { line: line_no, message: "expected `map:` header".into() });
            }
            header = true;
            continue;
        }
        let (from, to) = line.split_once("->").ok_or_else(|| Error::Syntax {
            line: line_no,
            message: format!("expected `source -> target`, found `{line}`"),
        })?;
        let (from, to) = (from.trim(), to.trim());
        if from.is_empty() || to.is_empty() || from.contains(char::is_whitespace) || to.contains(char::is_whitespace) {
            return Err(Error::Syntax { line: line_no, message: format!("malformed assignment `{line}`") });
        }
        pairs.push((line_no, from.to_string(), to.to_string()));
    }
    if !header {
        return Err(Error::Syntax { line: text.lines().count().max(1), message: "missing `map:` header".into() });
    }
    for (line, from, to) in &pairs {
        if source.vertex_id(from).is_none() {
            return Err(located(*line, Error::UnknownVertex(from.clone())));
        }
        if target.vertex_id(to).is_none() {
            return Err(located(*line, Error::UnknownVertex(to.clone())));
        }
    }
    let assignment: Vec<(String, String)> = pairs.into_iter().map(|(_, f, t)| (f, t)).collect();
    VertexMap::new(source, target, &assignment)
}

pub fn format_map(m: &VertexMap) -> String {
    let mut out = String::from("map:\n");
    for (v, label) in m.source().vertex_order().iter().enumerate() {
        out.push_str(&format!("{label} -> {}\n", m.target().vertex_label(m.image_of_vertex(v as u32))));
    }
    out
}

/// `num/den` in lowest terms; integers without a denominator.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `int` or `int/int`, with an optional leading `-`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = |message: String| Error::Expr { column: 1, message };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad(format!("bad rational `{text}`")))?;
    let den: BigInt = den.parse().map_err(|_| bad(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(bad(format!("zero denominator in `{text}`")));
    }
    Ok(Scalar::new(num, den))
}

pub fn format_pair(c: &Complex, pair: &BasisPair) -> String {
    format!("[{} | {}]", c.format_id(pair.lower()), c.format_id(pair.upper()))
}

pub fn format_story(c: &Complex, story: &Story) -> String {
    let parts: Vec<String> = story.statements().iter().map(|&id| c.format_id(id)).collect();
    format!("<{}>", parts.join(" ; "))
}

fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (i, (basis, x)) in terms.enumerate() {
        let negative = x.is_negative();
        let magnitude = x.abs();
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if !magnitude.is_one() {
            out.push_str(&format_scalar(&magnitude));
            out.push_str(" * ");
        }
        out.push_str(&basis);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_generator(c: &Complex, g: &IdealGenerator) -> String {
    let scalars: Vec<(String, Scalar)> =
        g.terms().iter().map(|(s, sign)| (format_story(c, s), sign.to_scalar())).collect();
    format_terms(scalars.iter().map(|(s, x)| (s.clone(), x)))
}

impl fmt::Display for IncidenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.complex();
        f.write_str(&format_terms(self.terms().map(|(p, x)| (format_pair(c, p), x))))
    }
}

impl fmt::Display for StoryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.complex();
        f.write_str(&format_terms(self.terms().map(|(s, x)| (format_story(c, s), x))))
    }
}

/// Basis term of an unresolved expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisExpr {
    /// `[P | Q]`
    Pair(Vec<String>, Vec<String>),
    /// `<P0 ; P1 ; …>`
    Story(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermExpr {
    pub coeff: Scalar,
    pub basis: BasisExpr,
}

/// Syntax tree of an element expression, before vertex resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementExpr {
    pub terms: Vec<TermExpr>,
}

/// An element of either algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Incidence(IncidenceElement),
    Story(StoryElement),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Incidence(x) => x.fmt(f),
            Element::Story(x) => x.fmt(f),
        }
    }
}

impl ElementExpr {
    /// Resolves vertex labels against `c`. An empty expression (`0`) resolves
    /// to the zero incidence element.
    pub fn resolve(&self, c: &Arc<Complex>) -> Result<Element> {
        let is_story = matches!(self.terms.first().map(|t| &t.basis), Some(BasisExpr::Story(_)));
        if is_story {
            let mut out = StoryElement::zero(c);
            for term in &self.terms {
                let BasisExpr::Story(parts) = &term.basis else {
                    return Err(Error::Expr { column: 1, message: "cannot mix pairs and stories".into() });
                };
                let ids = parts.iter().map(|p| c.id_from_labels(p)).collect::<Result<Vec<_>>>()?;
                out.add_term(Story::new(c, ids)?, term.coeff.clone());
            }
            Ok(Element::Story(out))
        } else {
            let mut out = IncidenceElement::zero(c);
            for term in &self.terms {
                let BasisExpr::Pair(p, q) = &term.basis else {
                    return Err(Error::Expr { column: 1, message: "cannot mix pairs and stories".into() });
                };
                let lower = c.id_from_labels(p)?;
                let upper = c.id_from_labels(q)?;
                out.add_term(BasisPair::new(c, lower, upper)?, term.coeff.clone());
            }
            Ok(Element::Incidence(out))
        }
    }
}

pub fn parse_element(text: &str, c: &Arc<Complex>) -> Result<Element> {
    parse_expr(text)?.resolve(c)
}

pub fn parse_incidence(text: &str, c: &Arc<Complex>) -> Result<IncidenceElement> {
    match parse_element(text, c)? {
        Element::Incidence(x) => Ok(x),
        Element::Story(_) => Err(Error::Expr { column: 1, message: "expected an incidence element".into() }),
    }
}

pub fn parse_story_element(text: &str, c: &Arc<Complex>) -> Result<StoryElement> {
    if text.trim() == "0" {
        return Ok(StoryElement::zero(c));
    }
    match parse_element(text, c)? {
        Element::Story(x) => Ok(x),
        Element::Incidence(_) => Err(Error::Expr { column: 1, message: "expected a story element".into() }),
    }
}

/// Parses the syntax of an element expression.
pub fn parse_expr(text: &str) -> Result<ElementExpr> {
    let mut p = Parser { chars: text.char_indices().collect(), pos: 0 };
    p.element()
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expr { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected `{want}`, found `{c}`")),
            None => self.err(format!("expected `{want}`, found end of input")),
        }
    }

    fn element(&mut self) -> Result<ElementExpr> {
        let mut out = ElementExpr::default();
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            if self.peek().is_none() {
                return Ok(out);
            }
            self.pos = save;
        }
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -Scalar::one()
            }
            Some('+') => {
                self.pos += 1;
                Scalar::one()
            }
            _ => Scalar::one(),
        };
        loop {
            let mut term = self.term()?;
            term.coeff *= &sign;
            out.terms.push(term);
            sign = match self.peek() {
                None => break,
                Some('+') => Scalar::one(),
                Some('-') => -Scalar::one(),
                Some(c) => return self.err(format!("expected `+` or `-`, found `{c}`")),
            };
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<TermExpr> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let x = self.rational()?;
                self.expect('*')?;
                x
            }
            _ => Scalar::one(),
        };
        let basis = match self.peek() {
            Some('[') => {
                self.pos += 1;
                let p = self.verts()?;
                self.expect('|')?;
                let q = self.verts()?;
                self.expect(']')?;
                BasisExpr::Pair(p, q)
            }
            Some('<') => {
                self.pos += 1;
                let mut parts = vec![self.verts()?];
                while self.peek() == Some(';') {
                    self.pos += 1;
                    parts.push(self.verts()?);
                }
                self.expect('>')?;
                BasisExpr::Story(parts)
            }
            Some(c) => return self.err(format!("expected `[` or `<`, found `{c}`")),
            None => return self.err("expected a term, found end of input"),
        };
        Ok(TermExpr { coeff, basis })
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    fn rational(&mut self) -> Result<Scalar> {
        let num: BigInt = self.digits()?.parse().expect("digits");
        let den: BigInt = if self.peek() == Some('/') {
            self.pos += 1;
            self.digits()?.parse().expect("digits")
        } else {
            BigInt::one()
        };
        if den.is_zero() {
            return self.err("zero denominator");
        }
        Ok(Scalar::new(num, den))
    }

    fn verts(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            while let Some(&(_, c)) = self.chars.get(self.pos) {
                if c.is_whitespace() || matches!(c, ';' | '|' | '[' | ']' | '<' | '>') {
                    break;
                }
                self.pos += 1;
            }
            if start == self.pos {
                break;
            }
            out.push(self.chars[start..self.pos].iter().map(|c| c.1).collect());
        }
        if out.is_empty() {
            return self.err("expected at least one vertex");
        }
        Ok(out)
    }
}

/// JSON record for one incidence term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub coeff: String,
}

/// JSON record for one story term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoryRecord {
    pub story: Vec<Vec<String>>,
    pub coeff: String,
}

pub fn incidence_records(x: &IncidenceElement) -> Vec<PairRecord> {
    let c = x.complex();
    x.terms()
        .map(|(pair, coeff)| PairRecord {
            p: c.labels(c.simplex(pair.lower())),
            q: c.labels(c.simplex(pair.upper())),
            coeff: format_scalar(coeff),
        })
        .collect()
}

pub fn incidence_from_records(records: &[PairRecord], c: &Arc<Complex>) -> Result<IncidenceElement> {
    let mut out = IncidenceElement::zero(c);
    for r in records {
        let pair = BasisPair::from_labels(c, &r.p, &r.q)?;
        out.add_term(pair, parse_scalar(&r.coeff)?);
    }
    Ok(out)
}

pub fn story_records(x: &StoryElement) -> Vec<StoryRecord> {
    let c = x.complex();
    x.terms()
        .map(|(story, coeff)| StoryRecord {
            story: story.statements().iter().map(|&id| c.labels(c.simplex(id))).collect(),
            coeff: format_scalar(coeff),
        })
        .collect()
}

pub fn story_from_records(records: &[StoryRecord], c: &Arc<Complex>) -> Result<StoryElement> {
    let mut out = StoryElement::zero(c);
    for r in records {
        let ids = r.story.iter().map(|s| c.id_from_labels(s)).collect::<Result<Vec<_>>>()?;
        out.add_term(Story::new(c, ids)?, parse_scalar(&r.coeff)?);
    }
    Ok(out)
}

/// Compact JSON for an element; record fields keep their declared order.
pub fn element_to_json(x: &Element) -> String {
    match x {
        Element::Incidence(x) => serde_json::to_string(&incidence_records(x)),
        Element::Story(x) => serde_json::to_string(&story_records(x)),
    }
    .expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arc<Complex> {
        Arc::new(Complex::build(&["1", "2", "3"], &[vec!["1", "2", "3"]]).unwrap())
    }

    #[test]
    fn complex_files() {
        let c = parse_complex("vertices: 1 2 3\nfacet: 1 2\nfacet: 2 3").unwrap();
        assert_eq!(c.len(), 5);
        let single = parse_complex("vertices: 1\n").unwrap();
        assert_eq!(single.len(), 1);
        let err = parse_complex("vertices: 1 2\nfacet: 1 3").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, message: "unknown vertex `3`".into() });
        let with_comments = parse_complex("# path\n\nvertices: a b # order matters\nfacet: b a\n").unwrap();
        assert_eq!(with_comments.vertex_order(), ["a", "b"]);
        assert!(matches!(parse_complex("facet: 1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_complex("vertices: 1\nfacet:"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_complex("vertices 1 2"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn complex_round_trip() {
        let c = parse_complex("vertices: 3 1 2\nfacet: 1 2 3\nfacet: 3 1").unwrap();
        let again = parse_complex(&format_complex(&c)).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn element_examples() {
        let c = triangle();
        let x = parse_incidence("3/2 * [1 2 | 1 2 3] - [1 | 1 2]", &c).unwrap();
        let expected = &IncidenceElement::basis(&c, BasisPair::from_labels(&c, &["1", "2"], &["1", "2", "3"]).unwrap())
            .scale(&Scalar::new(3.into(), 2.into()))
            - &IncidenceElement::basis(&c, BasisPair::from_labels(&c, &["1"], &["1", "2"]).unwrap());
        assert_eq!(x, expected);
        assert_eq!(x.to_string(), "-[1 | 1 2] + 3/2 * [1 2 | 1 2 3]");

        let s = parse_story_element("<1 ; 1 2 ; 1 2 3>", &c).unwrap();
        assert_eq!(s.to_string(), "<1 ; 1 2 ; 1 2 3>");
        assert!(matches!(parse_element("[1 2 | 1]", &c), Err(Error::NotASubset { .. })));
        assert!(matches!(parse_element("<1 ; 1>", &c), Err(Error::RepeatedNeighbour(_))));
        assert!(matches!(parse_element("[1 | 1 4]", &c), Err(Error::UnknownVertex(_))));
        assert!(matches!(parse_element("[1 | 1] + <1>", &c), Err(Error::Expr { .. })));
        assert!(matches!(parse_element("2 [1 | 1]", &c), Err(Error::Expr { .. })));
        assert!(matches!(parse_element("1/0 * [1 | 1]", &c), Err(Error::Expr { .. })));
    }

    #[test]
    fn primed_vertices_and_whitespace() {
        let c = Arc::new(parse_complex("vertices: 1' 2' 3'\nfacet: 1' 2'\nfacet: 2' 3'").unwrap());
        let a = parse_incidence("[1'|1' 2']", &c).unwrap();
        let b = parse_incidence("  [ 1'  |  2'   1' ]  ", &c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[1' | 1' 2']");
    }

    #[test]
    fn zero_and_signs() {
        let c = triangle();
        assert!(parse_incidence("0", &c).unwrap().is_zero());
        assert!(parse_story_element("0", &c).unwrap().is_zero());
        assert_eq!(IncidenceElement::zero(&c).to_string(), "0");
        let x = parse_incidence("-2 * [1 | 1] + [2 | 2] - [3 | 3] + [1 | 1] + [1 | 1]", &c).unwrap();
        assert_eq!(x.to_string(), "[2 | 2] - [3 | 3]");
    }

    #[test]
    fn scalars() {
        assert_eq!(format_scalar(&Scalar::new(6.into(), 4.into())), "3/2");
        assert_eq!(format_scalar(&Scalar::new((-4).into(), 2.into())), "-2");
        assert_eq!(parse_scalar("-3/6").unwrap(), Scalar::new((-1).into(), 2.into()));
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
    }

    #[test]
    fn json_records() {
        let c = triangle();
        let x = parse_incidence("3/2 * [1 2 | 1 2 3] - [1 | 1 2]", &c).unwrap();
        let json = serde_json::to_string(&incidence_records(&x)).unwrap();
        assert_eq!(json, r#"[{"p":["1"],"q":["1","2"],"coeff":"-1"},{"p":["1","2"],"q":["1","2","3"],"coeff":"3/2"}]"#);
        let back: Vec<PairRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(incidence_from_records(&back, &c).unwrap(), x);

        let s = parse_story_element("<1 ; 1 2> - 1/3 * <2>", &c).unwrap();
        let json = serde_json::to_string(&story_records(&s)).unwrap();
        assert_eq!(json, r#"[{"story":[["2"]],"coeff":"-1/3"},{"story":[["1"],["1","2"]],"coeff":"1"}]"#);
        let back: Vec<StoryRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(story_from_records(&back, &c).unwrap(), s);
    }
}
