//! Equation-of-motion text: `x'' + g*y' + x = x^2 - y^2; y'' - g*x' + y = -2*x*y`.
//!
//! Every equation names its unknown by the first `''` term; the unknowns are
//! the positions, in line order. Linear terms become `(B₁, B₂)`, the
//! position-only remainder becomes the force `f(x)`.

use hamiltonize::potential::{PolyField, MAX_FIELD_DEGREE};
use hamiltonize::rational::parse_rational;
use hamiltonize::reduction::EquationsOfMotion;
use hamiltonize::{MultiPoly, RatMatrix, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unbound parameter `{name}` at line {line}, column {col}")]
    UnboundParameter { name: String, line: usize, col: usize },
    #[error("line {line}: velocity-dependent nonlinear terms are not supported")]
    NonlinearVelocity { line: usize },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Bindings = BTreeMap<String, Rational>;

/// `γ → g`, `λ → l`; other names pass through.
pub fn normalize_name(name: &str) -> String {
    name.chars()
        .map(|c| match c {
            'γ' | 'Γ' => 'g',
            'λ' | 'Λ' => 'l',
            c => c,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String, u8),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(r) => write!(f, "{r}"),
            Tok::Ident(s, k) => write!(f, "{s}{}", "'".repeat(*k as usize)),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Equals => f.write_str("="),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = parse_decimal(&text).ok_or_else(|| syntax(line, col, format!("bad number `{text}`")))?;
            out.push(Spanned { tok: Tok::Num(value), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name = normalize_name(&chars[start..i].iter().collect::<String>());
            let mut primes = 0u8;
            while i < chars.len() && chars[i] == '\'' {
                primes += 1;
                i += 1;
            }
            if primes > 2 {
                return Err(syntax(line, col, "at most second derivatives are allowed"));
            }
            out.push(Spanned {
                tok: Tok::Ident(name, primes),
                col,
            });
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// `12`, `0.25`, `.5` as exact rationals.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (int_part, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac.contains('.') || (int_part.is_empty() && frac.is_empty()) {
        return None;
    }
    parse_rational(&format!("{int_part}{frac}/1{}", "0".repeat(frac.len())))
}

/// How identifiers resolve while parsing.
struct Ring<'a> {
    positions: &'a [String],
    bindings: &'a Bindings,
    vars: Vec<String>,
}

impl<'a> Ring<'a> {
    fn new(positions: &'a [String], bindings: &'a Bindings) -> Self {
        let vars = (0..3)
            .flat_map(|k| positions.iter().map(move |p| format!("{p}{}", "'".repeat(k))))
            .collect();
        Self {
            positions,
            bindings,
            vars,
        }
    }

    fn constant(&self, c: Rational) -> MultiPoly {
        MultiPoly::constant(self.vars.clone(), c)
    }
}

struct Parser<'a, 'r> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_col: usize,
    ring: &'a Ring<'r>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, self.col(), msg)
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let d = self.unary()?;
                    if d.total_degree().unwrap_or(0) > 0 {
                        return Err(syntax(self.line, col, "division by a non-constant expression"));
                    }
                    let c = d.coeff(&vec![0; d.nvars()]);
                    if c.is_zero() {
                        return Err(syntax(self.line, col, "division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(e)) if e.is_integer() && !e.is_negative() => {
                self.pos += 1;
                let k = e.to_integer().to_u32().filter(|&k| k <= 64).ok_or_else(|| syntax(self.line, col, "exponent too large"))?;
                Ok(base.pow(k))
            }
            _ => Err(syntax(self.line, col, "exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(self.ring.constant(v))
            }
            Some(Tok::Ident(name, primes)) => {
                self.pos += 1;
                if let Some(i) = self.ring.positions.iter().position(|p| *p == name) {
                    return Ok(MultiPoly::var(self.ring.vars.clone(), primes as usize * self.ring.positions.len() + i));
                }
                if primes > 0 {
                    return Err(syntax(self.line, col, format!("`{name}` has no equation of its own")));
                }
                match self.ring.bindings.get(&name) {
                    Some(v) => Ok(self.ring.constant(v.clone())),
                    None => Err(ParseError::UnboundParameter {
                        name,
                        line: self.line,
                        col,
                    }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(syntax(self.line, col, format!("unexpected `{t}`"))),
            None => Err(syntax(self.line, col, "unexpected end of equation")),
        }
    }
}

/// One equation with its physical position in the source.
struct Segment {
    line: usize,
    col0: usize,
    toks: Vec<Spanned>,
    end_col: usize,
}

fn segments(text: &str) -> Result<Vec<Segment>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut col0 = 1;
        for piece in body.split(';') {
            let width = piece.chars().count();
            if !piece.trim().is_empty() {
                out.push(Segment {
                    line,
                    col0,
                    toks: lex(piece, line, col0)?,
                    end_col: col0 + width,
                });
            }
            col0 += width + 1;
        }
    }
    Ok(out)
}

/// Linear equations of motion plus the nonlinear force, with the
/// unknowns in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSystem {
    pub positions: Vec<String>,
    pub eom: EquationsOfMotion,
    pub force: PolyField,
}

pub fn parse_eom(text: &str, bindings: &Bindings) -> Result<ParsedSystem, ParseError> {
    let segs = segments(text)?;
    if segs.is_empty() {
        return Err(ParseError::Input("no equations".into()));
    }
    let mut positions: Vec<String> = Vec::new();
    for s in &segs {
        let head = s.toks.iter().find_map(|t| match &t.tok {
            Tok::Ident(name, 2) => Some((name.clone(), t.col)),
            _ => None,
        });
        let Some((name, col)) = head else {
            return Err(syntax(s.line, s.col0, "equation has no second-derivative term"));
        };
        if positions.contains(&name) {
            return Err(syntax(s.line, col, format!("second equation for `{name}`")));
        }
        if bindings.contains_key(&name) {
            return Err(syntax(s.line, col, format!("`{name}` is both a variable and a parameter")));
        }
        positions.push(name);
    }
    let n = positions.len();
    let ring = Ring::new(&positions, bindings);
    let mut b1 = RatMatrix::zeros(n, n);
    let mut b2 = RatMatrix::zeros(n, n);
    let mut force = Vec::with_capacity(n);
    for (i, s) in segs.iter().enumerate() {
        let Some(eq) = s.toks.iter().position(|t| t.tok == Tok::Equals) else {
            return Err(syntax(s.line, s.end_col, "expected `=`"));
        };
        let side = |toks: &[Spanned], end_col: usize| -> Result<MultiPoly, ParseError> {
            let mut p = Parser {
                toks,
                pos: 0,
                line: s.line,
                end_col,
                ring: &ring,
            };
            let v = p.expr()?;
            if p.pos < toks.len() {
                return Err(p.err(format!("unexpected `{}`", toks[p.pos].tok)));
            }
            Ok(v)
        };
        let eq_col = s.toks[eq].col;
        let lhs = side(&s.toks[..eq], eq_col)?;
        let rhs = side(&s.toks[eq + 1..], s.end_col)?;
        // E(x, x', x'') = 0
        let e = &lhs - &rhs;
        let mut lead = Rational::zero();
        let mut rest = MultiPoly::zero(ring.vars.clone());
        for (exps, c) in e.terms() {
            let accel: u32 = exps[2 * n..].iter().sum();
            if accel == 0 {
                rest.add_term(exps.clone(), c.clone());
            } else if accel == 1 && exps[2 * n + i] == 1 && exps[..2 * n].iter().all(|&d| d == 0) {
                lead = c.clone();
            } else {
                return Err(syntax(
                    s.line,
                    s.col0,
                    format!("second derivatives may only enter as a constant multiple of {}''", positions[i]),
                ));
            }
        }
        if lead.is_zero() {
            return Err(syntax(s.line, s.col0, format!("the {}'' terms cancel", positions[i])));
        }
        // x_i'' = -rest / lead
        let rhs = rest.scale(&(-lead.recip()));
        let mut f = MultiPoly::zero(positions.clone());
        for (exps, c) in rhs.terms() {
            let vel: u32 = exps[n..2 * n].iter().sum();
            let deg: u32 = exps.iter().sum();
            if deg == 1 {
                let j = exps.iter().position(|&d| d == 1).expect("degree one");
                if j < n {
                    b2[(i, j)] = c.clone();
                } else {
                    b1[(i, j - n)] = c.clone();
                }
            } else if vel > 0 {
                return Err(ParseError::NonlinearVelocity { line: s.line });
            } else {
                f.add_term(exps[..n].to_vec(), c.clone());
            }
        }
        force.push(f);
    }
    let force = PolyField::new(force).map_err(|e| ParseError::Input(e.to_string()))?;
    debug_assert!(force.components().iter().all(|c| c.total_degree().unwrap_or(0) <= MAX_FIELD_DEGREE));
    let eom = EquationsOfMotion::new(b1, b2).map_err(|e| ParseError::Input(e.to_string()))?;
    Ok(ParsedSystem { positions, eom, force })
}

/// Evaluates an expression with no variables, e.g. a matrix entry `"-g/2"`.
pub fn parse_constant(text: &str, bindings: &Bindings) -> Result<Rational, ParseError> {
    let toks = lex(text, 1, 1)?;
    let ring = Ring::new(&[], bindings);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        line: 1,
        end_col: text.chars().count() + 1,
        ring: &ring,
    };
    let v = p.expr()?;
    if p.pos < toks.len() {
        return Err(p.err(format!("unexpected `{}`", toks[p.pos].tok)));
    }
    Ok(v.coeff(&[]))
}

fn push_term(out: &mut String, c: &Rational, name: &str) {
    if c.is_zero() {
        return;
    }
    out.push_str(if c.is_negative() { " - " } else { " + " });
    let mag = c.abs();
    if !mag.is_one() {
        out.push_str(&format!("{mag}*"));
    }
    out.push_str(name);
}

/// Pretty-printer inverse to [`parse_eom`]: `x'' - B₁ẋ - B₂x = f(x)`, one line per unknown.
pub fn render(sys: &ParsedSystem) -> String {
    let n = sys.positions.len();
    let mut lines = Vec::with_capacity(n);
    for i in 0..n {
        let mut line = format!("{}''", sys.positions[i]);
        for j in 0..n {
            push_term(&mut line, &-&sys.eom.b1[(i, j)], &format!("{}'", sys.positions[j]));
        }
        for j in 0..n {
            push_term(&mut line, &-&sys.eom.b2[(i, j)], &sys.positions[j]);
        }
        line.push_str(" = ");
        line.push_str(&sys.force.components()[i].to_string());
        lines.push(line);
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use hamiltonize::rational::{int, rat};

    fn bind(pairs: &[(&str, Rational)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn damped_oscillator() {
        let s = parse_eom("x'' + g*x' + x = 0", &bind(&[("g", int(1))])).unwrap();
        assert_eq!(s.positions, vec!["x"]);
        assert_eq!(s.eom.b1, RatMatrix::from_i64(&[&[-1]]));
        assert_eq!(s.eom.b2, RatMatrix::from_i64(&[&[-1]]));
        assert!(s.force.is_zero());
        assert_eq!(render(&s), "x'' + x' + x = 0");
    }

    #[test]
    fn dual_system() {
        let b = bind(&[("g", int(1)), ("l", rat(1, 2))]);
        let s = parse_eom("x'' + g*y' + x = -l*y ; y'' − g*x' + y = −l*x", &b).unwrap();
        assert_eq!(s.eom.b1, RatMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        assert_eq!(
            s.eom.b2,
            RatMatrix::from_rows(vec![vec![int(-1), rat(-1, 2)], vec![rat(-1, 2), int(-1)]])
        );
        let again = parse_eom(&render(&s), &Bindings::new()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn henon_heiles_force() {
        let s = parse_eom("x'' + γ*y' + x = x^2 - y^2\ny'' - γ*x' + y = -2*x*y", &bind(&[("g", rat(1, 10))])).unwrap();
        assert_eq!(s.force.components()[0].to_string(), "x^2 - y^2");
        assert_eq!(s.force.components()[1].to_string(), "-2*x*y");
        assert_eq!(parse_eom(&render(&s), &Bindings::new()).unwrap(), s);
    }

    #[test]
    fn leading_coefficient_is_normalized() {
        let s = parse_eom("2*x'' + (x' + 3*x)/2 = 0.5*x^2", &Bindings::new()).unwrap();
        assert_eq!(s.eom.b1, RatMatrix::diag(&[rat(-1, 4)]));
        assert_eq!(s.eom.b2, RatMatrix::diag(&[rat(-3, 4)]));
        assert_eq!(s.force.components()[0].to_string(), "1/4*x^2");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_eom("x'' + k*x = 0", &Bindings::new()),
            Err(ParseError::UnboundParameter {
                name: "k".into(),
                line: 1,
                col: 7
            })
        );
        assert_eq!(
            parse_eom("x'' + x = 0\ny'' + x'*y = 0", &Bindings::new()),
            Err(ParseError::NonlinearVelocity { line: 2 })
        );
        match parse_eom("x'' + x = 0; y'' + $ = 0", &Bindings::new()) {
            Err(ParseError::Syntax { line: 1, col: 20, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_eom("x'' + x", &Bindings::new()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_eom("x'' + z' = 0", &Bindings::new()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_eom("x'' = x/x", &Bindings::new()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_eom("x'' = x^7", &Bindings::new()), Err(ParseError::Input(_))));
    }

    #[test]
    fn constants() {
        let b = bind(&[("g", rat(1, 3))]);
        assert_eq!(parse_constant("-g/2 + 1", &b).unwrap(), rat(5, 6));
        assert_eq!(parse_constant("2^3", &b).unwrap(), int(8));
        assert_eq!(parse_constant("0.125", &b).unwrap(), rat(1, 8));
        assert!(parse_constant("x", &b).is_err());
    }
}
