//! Named group families and the text grammar that builds them.
//!
//! ```text
//! EXPR  := TERM ('x' TERM)*
//! TERM  := NAME '(' INT (',' INT)* ')' | 'perm' '[' GEN (',' GEN)* ']'
//! GEN   := CYCLE+
//! CYCLE := '(' INT* ')'          points separated by spaces or commas
//! NAME  := Z | S | A | D | Dic | AGL
//! ```
//!
//! `×` and `*` are accepted as synonyms for `x`. Points in `perm[...]` are
//! 0-based.
//!
//! Note the dihedral convention: `D(n)` is the dihedral group of **order**
//! `n` (so `D(12)` is the symmetry group of the hexagon), and `Dic(n)` is the
//! dicyclic group of order `n`.

use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use crate::arith::is_prime;
use crate::error::{Error, ParseError, Result};
use crate::group::Group;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    /// `Z(n)`, cyclic of order n
    Cyclic(u64),
    /// `S(n)`, symmetric on n points
    Symmetric(u64),
    /// `A(n)`, alternating on n points
    Alternating(u64),
    /// `D(n)`, dihedral of order n
    Dihedral(u64),
    /// `Dic(n)`, dicyclic of order n
    Dicyclic(u64),
    /// `AGL(1,q)`, affine maps `x ↦ ax + b` of the field with q elements
    Affine(u64),
    /// `perm[...]`, generators given in 0-based cycle notation
    Perm(Vec<Vec<Vec<u32>>>),
    Product(Vec<GroupExpr>),
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Cyclic(n) => write!(f, "Z({n})"),
            GroupExpr::Symmetric(n) => write!(f, "S({n})"),
            GroupExpr::Alternating(n) => write!(f, "A({n})"),
            GroupExpr::Dihedral(n) => write!(f, "D({n})"),
            GroupExpr::Dicyclic(n) => write!(f, "Dic({n})"),
            GroupExpr::Affine(q) => write!(f, "AGL(1,{q})"),
            GroupExpr::Perm(gens) => {
                f.write_str("perm[")?;
                for (i, gen) in gens.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    if gen.is_empty() {
                        f.write_str("()")?;
                    }
                    for cycle in gen {
                        let pts: Vec<String> = cycle.iter().map(u32::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                f.write_str("]")
            }
            GroupExpr::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Times,
    End,
}

struct Lexer<'a> {
    chars: Peekable<CharIndices<'a>>,
    /// character offsets, not byte offsets
    offsets: Vec<usize>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        let mut offsets = vec![0; src.len() + 1];
        let mut count = 0;
        for (byte, _) in src.char_indices() {
            offsets[byte] = count;
            count += 1;
        }
        offsets[src.len()] = count;
        Lexer {
            chars: src.char_indices().peekable(),
            offsets,
        }
    }

    fn tokens(mut self, src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&(byte, c)) = self.chars.peek() {
            let pos = self.offsets[byte];
            if c.is_whitespace() {
                self.chars.next();
                continue;
            }
            let token = match c {
                '(' => Token::LParen,
                ')' => Token::RParen,
                '[' => Token::LBracket,
                ']' => Token::RBracket,
                ',' => Token::Comma,
                'x' | '×' | '*' => Token::Times,
                c if c.is_ascii_digit() => {
                    let mut end = byte;
                    while let Some(&(b, d)) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        end = b + 1;
                        self.chars.next();
                    }
                    let value = src[byte..end].parse().map_err(|_| {
                        ParseError::Domain(format!("integer at position {pos} is too large"))
                    })?;
                    out.push((Token::Int(value), pos));
                    continue;
                }
                c if c.is_ascii_alphabetic() => {
                    let mut end = byte;
                    while let Some(&(b, d)) = self.chars.peek() {
                        if !d.is_ascii_alphabetic() || d == 'x' {
                            break;
                        }
                        end = b + 1;
                        self.chars.next();
                    }
                    out.push((Token::Name(src[byte..end].to_string()), pos));
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            };
            self.chars.next();
            out.push((token, pos));
        }
        out.push((Token::End, self.offsets[src.len()]));
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].0.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<GroupExpr, ParseError> {
        let mut factors = vec![self.term()?];
        while *self.peek() == Token::Times {
            self.bump();
            factors.push(self.term()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            GroupExpr::Product(factors)
        })
    }

    fn term(&mut self) -> Result<GroupExpr, ParseError> {
        let pos = self.pos();
        let name = match self.peek() {
            Token::Name(n) => n.clone(),
            _ => return self.error("expected a group constructor"),
        };
        self.bump();
        if name == "perm" {
            return self.perm_body();
        }
        if !matches!(name.as_str(), "Z" | "S" | "A" | "D" | "Dic" | "AGL") {
            return Err(ParseError::Syntax {
                pos,
                message: format!("unknown constructor {name:?}"),
            });
        }
        self.expect(Token::LParen, "'('")?;
        let mut args = Vec::new();
        if *self.peek() != Token::RParen {
            loop {
                match self.bump() {
                    Token::Int(v) => args.push(v),
                    _ => {
                        self.at -= 1;
                        return self.error("expected an integer argument");
                    }
                }
                if *self.peek() == Token::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RParen, "')'")?;
        build_named(&name, &args, pos)
    }

    fn perm_body(&mut self) -> Result<GroupExpr, ParseError> {
        self.expect(Token::LBracket, "'['")?;
        let mut gens = Vec::new();
        if *self.peek() == Token::RBracket {
            self.bump();
            return Ok(GroupExpr::Perm(gens));
        }
        loop {
            let mut cycles = Vec::new();
            while *self.peek() == Token::LParen {
                self.bump();
                let mut cycle = Vec::new();
                loop {
                    match self.peek().clone() {
                        Token::Int(v) => {
                            let v = u32::try_from(v).map_err(|_| {
                                ParseError::Domain(format!("point {v} is too large"))
                            })?;
                            cycle.push(v);
                            self.bump();
                        }
                        Token::Comma => {
                            self.bump();
                        }
                        Token::RParen => {
                            self.bump();
                            break;
                        }
                        _ => return self.error("expected a point or ')'"),
                    }
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            if cycles.is_empty() && self.tokens[self.at - 1].0 != Token::RParen {
                return self.error("expected a cycle");
            }
            gens.push(cycles);
            match self.bump() {
                Token::Comma => continue,
                Token::RBracket => break,
                _ => {
                    self.at -= 1;
                    return self.error("expected ',' or ']'");
                }
            }
        }
        Ok(GroupExpr::Perm(gens))
    }
}

fn build_named(name: &str, args: &[u64], pos: usize) -> Result<GroupExpr, ParseError> {
    let expected = if name == "AGL" { 2 } else { 1 };
    if args.len() != expected {
        return Err(ParseError::Arity {
            name: name.to_string(),
            expected: if expected == 1 { "1" } else { "2" },
            got: args.len(),
            pos,
        });
    }
    let n = args[0];
    let domain = |msg: String| Err(ParseError::Domain(msg));
    match name {
        "Z" | "S" | "A" if n == 0 => domain(format!("{name}({n}): argument must be positive")),
        "Z" => Ok(GroupExpr::Cyclic(n)),
        "S" => Ok(GroupExpr::Symmetric(n)),
        "A" => Ok(GroupExpr::Alternating(n)),
        "D" if n < 2 || !n.is_multiple_of(2) => {
            domain(format!("D({n}): the order of a dihedral group must be even and positive"))
        }
        "D" => Ok(GroupExpr::Dihedral(n)),
        "Dic" if n == 0 || !n.is_multiple_of(4) => {
            domain(format!("Dic({n}): the order of a dicyclic group must be a positive multiple of 4"))
        }
        "Dic" => Ok(GroupExpr::Dicyclic(n)),
        "AGL" if n != 1 => domain(format!("AGL({n},{}): only dimension 1 is supported", args[1])),
        "AGL" if !is_prime(args[1]) => domain(format!("AGL(1,{}): q must be prime", args[1])),
        "AGL" => Ok(GroupExpr::Affine(args[1])),
        _ => unreachable!("names are checked by the caller"),
    }
}

pub fn parse(src: &str) -> Result<GroupExpr, ParseError> {
    let tokens = Lexer::new(src).tokens(src)?;
    let mut parser = Parser { tokens, at: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return parser.error("unexpected trailing input");
    }
    Ok(expr)
}

fn cap_error(actual: u64, cap: usize) -> Error {
    Error::CapExceeded {
        what: "group order",
        limit: cap,
        actual: usize::try_from(actual).unwrap_or(usize::MAX),
    }
}

fn cycle_perm(degree: usize, cycles: &[Vec<u32>]) -> Permutation {
    Permutation::from_cycles(degree, cycles).expect("constructor cycles are valid")
}

/// Left-regular representation of a group given by its multiplication on
/// `0..order`.
fn regular(order: usize, gens: &[usize], mul: impl Fn(usize, usize) -> usize) -> Vec<Permutation> {
    gens.iter()
        .map(|&g| {
            Permutation::from_images((0..order).map(|q| mul(g, q) as u32).collect())
                .expect("left multiplication is a bijection")
        })
        .collect()
}

/// Expected order of the group an expression denotes, saturating.
pub fn expected_order(e: &GroupExpr) -> Option<u64> {
    Some(match e {
        GroupExpr::Cyclic(n) | GroupExpr::Dihedral(n) | GroupExpr::Dicyclic(n) => *n,
        GroupExpr::Symmetric(n) => (1..=*n).try_fold(1u64, |acc, k| acc.checked_mul(k))?,
        GroupExpr::Alternating(n) => {
            let f = (1..=*n).try_fold(1u64, |acc, k| acc.checked_mul(k))?;
            if *n >= 2 {
                f / 2
            } else {
                f
            }
        }
        GroupExpr::Affine(q) => q * (q - 1),
        GroupExpr::Perm(_) => return None,
        GroupExpr::Product(factors) => factors
            .iter()
            .map(expected_order)
            .try_fold(1u64, |acc, o| acc.checked_mul(o?))?,
    })
}

pub fn build(e: &GroupExpr) -> Result<Group> {
    build_capped(e, crate::group::DEFAULT_ORDER_CAP)
}

pub fn build_capped(e: &GroupExpr, cap: usize) -> Result<Group> {
    if !matches!(e, GroupExpr::Perm(_) | GroupExpr::Product(_)) {
        match expected_order(e) {
            Some(o) if o <= cap as u64 => {}
            Some(o) => return Err(cap_error(o, cap)),
            None => return Err(cap_error(u64::MAX, cap)),
        }
    }
    match e {
        GroupExpr::Cyclic(n) => {
            let n = *n as usize;
            if n == 1 {
                return Ok(Group::trivial_group());
            }
            let cycle: Vec<u32> = (0..n as u32).collect();
            Group::from_generators_capped(n, vec![cycle_perm(n, &[cycle])], cap)
        }
        GroupExpr::Symmetric(n) => {
            let n = *n as usize;
            if n == 1 {
                return Ok(Group::trivial_group());
            }
            let mut gens = vec![cycle_perm(n, &[vec![0, 1]])];
            if n > 2 {
                gens.push(cycle_perm(n, &[(0..n as u32).collect()]));
            }
            Group::from_generators_capped(n, gens, cap)
        }
        GroupExpr::Alternating(n) => {
            let n = *n as usize;
            let gens = (2..n as u32).map(|i| cycle_perm(n, &[vec![0, 1, i]])).collect();
            Group::from_generators_capped(n.max(1), gens, cap)
        }
        GroupExpr::Dihedral(order) => {
            let m = (*order / 2) as usize;
            match m {
                1 => Group::from_generators_capped(2, vec![cycle_perm(2, &[vec![0, 1]])], cap),
                2 => Group::from_generators_capped(
                    4,
                    vec![cycle_perm(4, &[vec![0, 1]]), cycle_perm(4, &[vec![2, 3]])],
                    cap,
                ),
                _ => {
                    let rotation = cycle_perm(m, &[(0..m as u32).collect()]);
                    let reflection = Permutation::from_images(
                        (0..m).map(|i| ((m - i) % m) as u32).collect(),
                    )
                    .expect("reflection is a bijection");
                    Group::from_generators_capped(m, vec![rotation, reflection], cap)
                }
            }
        }
        GroupExpr::Dicyclic(order) => {
            let m = (*order / 4) as usize;
            let gens = if m % 2 == 1 {
                // Z/m ⋊ Z/4 on pairs (u, v) ↦ 4u + v, odd v acting by u ↦ -u.
                let act = |v: usize, u: usize| if v % 2 == 1 { (m - u) % m } else { u };
                let mul = |a: usize, b: usize| {
                    let (u1, v1, u2, v2) = (a / 4, a % 4, b / 4, b % 4);
                    4 * ((u1 + act(v1, u2)) % m) + (v1 + v2) % 4
                };
                regular(4 * m, &[4, 1], mul)
            } else {
                // a^i x^j ↦ 2i + j with a^{2m} = 1, x² = a^m, x a x⁻¹ = a⁻¹.
                let n = 2 * m;
                let mul = |a: usize, b: usize| {
                    let (i, j, k, l) = (a / 2, a % 2, b / 2, b % 2);
                    let mut e = if j == 1 { (i + n - k) % n } else { (i + k) % n };
                    if j + l == 2 {
                        e = (e + m) % n;
                    }
                    2 * e + (j + l) % 2
                };
                regular(4 * m, &[2, 1], mul)
            };
            Group::from_generators_capped(4 * m, gens, cap)
        }
        GroupExpr::Affine(q) => {
            let q = *q as usize;
            let root = (1..q)
                .find(|&g| {
                    let mut x = 1;
                    (1..q - 1).all(|_| {
                        x = x * g % q;
                        x != 1
                    })
                })
                .expect("a prime field has a primitive root");
            let translate = Permutation::from_images((0..q).map(|x| ((x + 1) % q) as u32).collect())
                .expect("translation is a bijection");
            let scale = Permutation::from_images((0..q).map(|x| (x * root % q) as u32).collect())
                .expect("scaling by a unit is a bijection");
            Group::from_generators_capped(q, vec![translate, scale], cap)
        }
        GroupExpr::Perm(gens) => {
            let degree = gens
                .iter()
                .flatten()
                .flatten()
                .map(|&p| p as usize + 1)
                .max()
                .unwrap_or(1);
            let perms = gens
                .iter()
                .map(|cycles| Permutation::from_cycles(degree, cycles))
                .collect::<Result<Vec<_>>>()?;
            Group::from_generators_capped(degree, perms, cap)
        }
        GroupExpr::Product(factors) => {
            if let Some(o) = expected_order(e) {
                if o > cap as u64 {
                    return Err(cap_error(o, cap));
                }
            }
            let groups = factors
                .iter()
                .map(|f| build_capped(f, cap))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Group> = groups.iter().collect();
            Group::direct_product(&refs, cap)
        }
    }
}

pub fn parse_and_build(src: &str, cap: usize) -> Result<Group> {
    build_capped(&parse(src)?, cap)
}

/// The named groups the test suites and examples range over.
pub const CATALOG: &[&str] = &[
    "Z(1)",
    "Z(2)",
    "Z(3)",
    "Z(4)",
    "Z(2) x Z(2)",
    "Z(5)",
    "Z(6)",
    "Z(2) x Z(3)",
    "S(3)",
    "D(6)",
    "Z(7)",
    "Z(8)",
    "Z(2) x Z(4)",
    "Z(2) x Z(2) x Z(2)",
    "D(8)",
    "Dic(8)",
    "Z(9)",
    "Z(3) x Z(3)",
    "D(10)",
    "Z(10)",
    "Z(12)",
    "Z(2) x Z(6)",
    "A(4)",
    "D(12)",
    "Dic(12)",
    "S(3) x Z(2)",
    "D(14)",
    "Z(16)",
    "Z(4) x Z(4)",
    "Z(2) x Z(2) x Z(4)",
    "D(16)",
    "Dic(16)",
    "D(8) x Z(2)",
    "Dic(8) x Z(2)",
    "D(18)",
    "S(3) x Z(3)",
    "Z(3) x Z(6)",
    "D(20)",
    "Dic(20)",
    "AGL(1,5)",
    "Z(20)",
    "S(4)",
    "A(4) x Z(2)",
    "D(24)",
    "Dic(24)",
    "S(3) x Z(4)",
    "Dic(12) x Z(2)",
    "D(12) x Z(2)",
    "S(3) x Z(2) x Z(2)",
    "D(8) x Z(3)",
    "Dic(8) x Z(3)",
    "Z(24)",
    "D(30)",
    "D(8) x Z(2) x Z(2)",
    "S(3) x S(3)",
    "A(4) x Z(3)",
    "Dic(12) x Z(3)",
    "S(3) x Z(6)",
    "AGL(1,7)",
    "S(4) x Z(2)",
    "A(4) x Z(4)",
    "Dic(12) x Z(4)",
    "D(48)",
    "Z(2) x Z(2) x Z(2) x Z(2)",
    "AGL(1,11)",
    "S(3) x D(10)",
    "A(5)",
    "A(4) x Z(5)",
    "D(8) x S(3)",
    "A(4) x S(3)",
    "S(4) x Z(3)",
    "D(10) x Z(5)",
    "D(100)",
    "AGL(1,13)",
    "S(5)",
    "A(5) x Z(2)",
    "S(4) x Z(5)",
    "D(8) x D(10)",
    "A(4) x D(10)",
];

/// Catalog entries with order at most `max_order`, built, deduplicated by
/// their canonical text.
pub fn catalog_groups(max_order: u64) -> Vec<(String, Group)> {
    let mut seen = std::collections::BTreeSet::new();
    CATALOG
        .iter()
        .filter_map(|src| {
            let e = parse(src).expect("catalog entries parse");
            let order = expected_order(&e).expect("catalog entries are named");
            (order <= max_order && seen.insert(e.to_string()))
                .then(|| (e.to_string(), build(&e).expect("catalog entries build")))
        })
        .collect()
}
