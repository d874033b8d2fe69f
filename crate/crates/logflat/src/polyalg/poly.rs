//! Polynomial rings with block degree-reverse-lexicographic orders.

use super::field::{Coef, Field};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;

pub type Mono = Vec<u32>;

/// Product of blocks, each ordered by degree reverse lexicographic order;
/// earlier blocks dominate later ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub blocks: Vec<Vec<usize>>,
}

impl MonomialOrder {
    pub fn degrevlex(n: usize) -> Self {
        MonomialOrder { blocks: vec![(0..n).collect()] }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for blk in &self.blocks {
            let da: u64 = blk.iter().map(|&i| a[i] as u64).sum();
            let db: u64 = blk.iter().map(|&i| b[i] as u64).sum();
            if da != db {
                return da.cmp(&db);
            }
            for &i in blk.iter().rev() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
        }
        Ordering::Equal
    }
}

/// Polynomial with terms sorted in decreasing order for its ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub terms: Vec<(Mono, Coef)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Mono, Coef)> {
        self.terms.first()
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Coef {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|e| *e == 0))
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.iter().sum()).max()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[i] > 0)
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `k[x₁,…,xₙ]` with a monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub field: Field,
    pub names: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Field, names: &[&str]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        PolyRing { field, names, order: MonomialOrder::degrevlex(n) }
    }

    pub fn with_names(field: Field, names: Vec<String>) -> Self {
        let n = names.len();
        PolyRing { field, names, order: MonomialOrder::degrevlex(n) }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing { field: self.field, names: self.names.clone(), order }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn one_mono(&self) -> Mono {
        vec![0; self.nvars()]
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn constant(&self, c: Coef) -> Poly {
        let c = self.field.norm(c);
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(self.one_mono(), c)] }
        }
    }

    pub fn int(&self, v: i64) -> Poly {
        self.constant(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn one(&self) -> Poly {
        self.int(1)
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut m = self.one_mono();
        m[i] = 1;
        Poly { terms: vec![(m, Coef::one())] }
    }

    pub fn var_named(&self, name: &str) -> Result<Poly> {
        self.var_index(name)
            .map(|i| self.var(i))
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable '{name}'")))
    }

    pub fn monomial(&self, m: Mono, c: Coef) -> Poly {
        let c = self.field.norm(c);
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(&self, terms: Vec<(Mono, Coef)>) -> Poly {
        let mut acc: HashMap<Mono, Coef> = HashMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert_with(Coef::zero);
            *e = &*e + c;
        }
        let mut terms: Vec<(Mono, Coef)> = acc
            .into_iter()
            .map(|(m, c)| (m, self.field.norm(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    /// Re-sorts a polynomial after a change of monomial order.
    pub fn resort(&self, f: &Poly) -> Poly {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Poly {
        self.add_scaled(f, g, &Coef::one(), None)
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        self.add_scaled(f, g, &-Coef::one(), None)
    }

    pub fn neg(&self, f: &Poly) -> Poly {
        Poly { terms: f.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect() }
    }

    /// `f + c·m·g`, merging sorted term lists.
    pub fn add_scaled(&self, f: &Poly, g: &Poly, c: &Coef, m: Option<&[u32]>) -> Poly {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &(Mono, Coef)| -> (Mono, Coef) {
            let mono = match m {
                Some(m) => mono_mul(&t.0, m),
                None => t.0.clone(),
            };
            (mono, self.field.mul(&t.1, c))
        };
        let mut gj = g.terms.first().map(shifted);
        while i < f.terms.len() || gj.is_some() {
            match (f.terms.get(i), &gj) {
                (Some(a), Some(b)) => match self.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(gj.take().unwrap());
                        j += 1;
                        gj = g.terms.get(j).map(shifted);
                    }
                    Ordering::Equal => {
                        let s = self.field.add(&a.1, &b.1);
                        if !s.is_zero() {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                        j += 1;
                        gj = g.terms.get(j).map(shifted);
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(gj.take().unwrap());
                    j += 1;
                    gj = g.terms.get(j).map(shifted);
                }
                (None, None) => break,
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn scale(&self, f: &Poly, c: &Coef) -> Poly {
        let c = self.field.norm(c.clone());
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: f.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(a, &c))).collect() }
    }

    pub fn mul_mono(&self, f: &Poly, m: &[u32], c: &Coef) -> Poly {
        let c = self.field.norm(c.clone());
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: f.terms.iter().map(|(a, b)| (mono_mul(a, m), self.field.mul(b, &c))).collect() }
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Mono, Coef> = HashMap::with_capacity(f.terms.len() * g.terms.len());
        for (a, x) in &f.terms {
            for (b, y) in &g.terms {
                let e = acc.entry(mono_mul(a, b)).or_insert_with(Coef::zero);
                *e = &*e + x * y;
            }
        }
        self.from_terms(acc.into_iter().collect())
    }

    pub fn pow(&self, f: &Poly, e: u32) -> Poly {
        let mut out = self.one();
        let mut base = f.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        out
    }

    pub fn product(&self, fs: &[Poly]) -> Poly {
        fs.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, f: &Poly) -> Poly {
        match f.lead() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(f, &self.field.inv(c)),
        }
    }

    /// Substitutes polynomials (in `target`) for the variables.
    pub fn substitute(&self, f: &Poly, images: &[Poly], target: &PolyRing) -> Poly {
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc = Poly::zero();
        for (m, c) in &f.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| target.pow(&images[i], e)).clone();
                t = target.mul(&t, &p);
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Moves a polynomial into a ring whose variables are listed by `map[i]`,
    /// the index in `target` of variable `i`.
    pub fn embed(&self, f: &Poly, target: &PolyRing, map: &[usize]) -> Poly {
        let terms = f
            .terms
            .iter()
            .map(|(m, c)| {
                let mut t = target.one_mono();
                for (i, &e) in m.iter().enumerate() {
                    t[map[i]] += e;
                }
                (t, c.clone())
            })
            .collect();
        target.from_terms(terms)
    }

    /// Evaluates at a point of the field.
    pub fn eval(&self, f: &Poly, point: &[Coef]) -> Coef {
        let mut s = Coef::zero();
        for (m, c) in &f.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = self.field.mul(&t, &point[i]);
                }
            }
            s = self.field.add(&s, &t);
        }
        s
    }

    pub fn format(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in f.terms.iter().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
                .collect();
            let neg = match self.field {
                Field::Q => c.is_negative(),
                Field::Fp(_) => false,
            };
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    /// Parses sums of products of numbers, variables, powers and parentheses.
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let toks = tokenize(s)?;
        let mut p = Parser { ring: self, toks, pos: 0 };
        let f = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::InvalidInput(format!("trailing input in polynomial '{s}'")));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = vec![];
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[start..i].iter().collect();
            out.push(Tok::Num(t.parse().expect("digits parse as an integer")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::InvalidInput(format!("unexpected character '{c}' in polynomial")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '+' && c != '-' {
                break;
            }
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { self.ring.add(&acc, &t) } else { self.ring.sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = match self.peek() {
                        Some(Tok::Num(n)) => n.clone(),
                        _ => return Err(Error::InvalidInput("division only by integer literals".into())),
                    };
                    self.pos += 1;
                    if !self.ring.field.int_invertible(&d) {
                        return Err(Error::InvalidInput("division by zero in the coefficient field".into()));
                    }
                    let inv = self.ring.field.inv(&self.ring.field.norm(BigRational::from_integer(d)));
                    acc = self.ring.scale(&acc, &inv);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(self.ring.neg(&f));
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
            return self.factor();
        }
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                self.ring.constant(BigRational::from_integer(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ring.var_named(&name)?
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::InvalidInput("unbalanced parentheses".into()));
                }
                self.pos += 1;
                e
            }
            other => return Err(Error::InvalidInput(format!("unexpected token {other:?} in polynomial"))),
        };
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(n)) => u32::try_from(n.clone())
                    .map_err(|_| Error::InvalidInput("exponent too large".into()))?,
                _ => return Err(Error::InvalidInput("exponent must be a nonnegative integer".into())),
            };
            self.pos += 1;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let r = PolyRing::new(Field::Q, &["x", "y"]);
        let f = r.parse("x^2*y - 3*x + 1/2").unwrap();
        assert_eq!(r.format(&f), "x^2*y - 3*x + 1/2");
        assert_eq!(r.parse(&r.format(&f)).unwrap(), f);
        let g = r.parse("(x+y)^2").unwrap();
        assert_eq!(r.format(&g), "x^2 + 2*x*y + y^2");
        assert!(r.parse("x + z").is_err());
        assert_eq!(r.parse("2x").unwrap(), r.scale(&r.var(0), &Coef::from_integer(2.into())));
    }

    #[test]
    fn degrevlex_ordering() {
        let o = MonomialOrder::degrevlex(3);
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[0, 0, 2], &[1, 0, 0]), Ordering::Greater);
        let e = MonomialOrder { blocks: vec![vec![2], vec![0, 1]] };
        assert_eq!(e.cmp(&[0, 0, 1], &[5, 5, 0]), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        let r = PolyRing::new(Field::Fp(5), &["x"]);
        let f = r.parse("x + 1").unwrap();
        let g = r.pow(&f, 5);
        assert_eq!(g, r.parse("x^5 + 1").unwrap());
    }
}
