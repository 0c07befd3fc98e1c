//! Structure-equation grammar.
//!
//! Two notations are accepted:
//!
//! * Salamon shorthand `(0,0,12,13)`: one entry per generator, each a signed
//!   sum of index pairs `ij` (meaning `e^i∧e^j`, only for `n ≤ 9`) with
//!   optional coefficients `2×34`, `1/2*13`, `½×63`, `i×12`, `a1*12`.
//! * Long form, one line per generator: `d e4 = e1.2 - 1/2*a1*e3.4`.
//!
//! Whitespace is insignificant; `×`, `·` and `*` are interchangeable, `−`
//! is accepted for `-`.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::exterior::{Form, Monomial};
use crate::poly::{ParamForm, Poly};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range 1..{n} at position {pos}")]
    IndexOutOfRange { index: usize, n: usize, pos: usize },
    #[error("duplicate index {index} inside one monomial at position {pos}")]
    DuplicateIndex { index: usize, pos: usize },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("differential of e{index} given twice (position {pos})")]
    Redefined { index: usize, pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Slash,
    Times,
    Plus,
    Minus,
    Half,
    Dot,
    LParen,
    RParen,
    Comma,
    Eq,
    Sep,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        let tok = match c {
            '\n' | ';' => Tok::Sep,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { tok: Tok::Num(chars[start..i].iter().collect()), pos });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
                continue;
            }
            '/' => Tok::Slash,
            '*' | '×' | '·' => Tok::Times,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '½' => Tok::Half,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            other => return Err(ParseError::Syntax { pos, msg: format!("unexpected character `{other}`") }),
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

fn generator_index(ident: &str) -> Option<usize> {
    let digits = ident.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    end: usize,
    n: usize,
    params: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, n: usize, params: &'a [String]) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        Ok(Parser { toks, at: 0, end: text.chars().count(), n, params })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.tok.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn skip_seps(&mut self) {
        while self.peek() == Some(&Tok::Sep) {
            self.at += 1;
        }
    }

    fn integer(&self, digits: &str) -> Result<Scalar, ParseError> {
        digits
            .parse::<Scalar>()
            .map_err(|_| ParseError::Syntax { pos: self.pos(), msg: format!("bad number {digits}") })
    }

    /// A single coefficient factor at the cursor, if any. Numbers are only
    /// consumed when `number_ok` says the token is not an index pair.
    fn factor(&mut self) -> Result<Option<Poly>, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(d)) => {
                self.at += 1;
                let mut value = self.integer(&d)?;
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.bump() {
                        Some(Tok::Num(den)) => {
                            let den = self.integer(&den)?;
                            if den.is_zero() {
                                return Err(ParseError::Syntax { pos, msg: "zero denominator".into() });
                            }
                            value = &value / &den;
                        }
                        _ => return Err(ParseError::Syntax { pos, msg: "expected denominator".into() }),
                    }
                }
                Ok(Some(Poly::constant(value)))
            }
            Some(Tok::Half) => {
                self.at += 1;
                Ok(Some(Poly::constant(Scalar::from_ratio(1, 2))))
            }
            Some(Tok::Ident(name)) if generator_index(&name).is_none() => {
                self.at += 1;
                if name == "i" {
                    return Ok(Some(Poly::constant(Scalar::i())));
                }
                match self.params.iter().position(|p| *p == name) {
                    Some(k) => Ok(Some(Poly::symbol(k))),
                    None => Err(ParseError::UnknownSymbol { name, pos }),
                }
            }
            _ => Ok(None),
        }
    }

    fn pair(&mut self) -> Result<(bool, Monomial), ParseError> {
        let pos = self.pos();
        let Some(Tok::Num(d)) = self.bump() else {
            return Err(ParseError::Syntax { pos, msg: "expected index pair".into() });
        };
        if d.len() != 2 {
            return Err(ParseError::Syntax { pos, msg: format!("`{d}` is not a two-digit index pair") });
        }
        let bytes = d.as_bytes();
        let (i, j) = ((bytes[0] - b'0') as usize, (bytes[1] - b'0') as usize);
        for index in [i, j] {
            if index == 0 || index > self.n {
                return Err(ParseError::IndexOutOfRange { index, n: self.n, pos });
            }
        }
        if i == j {
            return Err(ParseError::DuplicateIndex { index: i, pos });
        }
        let (negative, m) = Monomial::generator(i).wedge(Monomial::generator(j)).expect("distinct");
        Ok((negative, m))
    }

    /// `[coeff (×|*)]* pair`
    fn shorthand_term(&mut self) -> Result<(Poly, Monomial), ParseError> {
        let mut coeff = Poly::constant(Scalar::one());
        loop {
            let is_pair = matches!(self.peek(), Some(Tok::Num(_)))
                && !matches!(self.peek2(), Some(Tok::Times) | Some(Tok::Slash));
            if is_pair {
                let (negative, m) = self.pair()?;
                if negative {
                    coeff = coeff.scale(&-Scalar::one());
                }
                return Ok((coeff, m));
            }
            match self.factor()? {
                Some(f) => coeff = coeff.mul(&f),
                None => return self.err("expected coefficient or index pair"),
            }
            self.expect(Tok::Times, "`×` or `*` after coefficient")?;
        }
    }

    /// `[coeff (*|×)]* e<i>(.<j>)*`
    fn long_term(&mut self) -> Result<(Poly, Monomial), ParseError> {
        let mut coeff = Poly::constant(Scalar::one());
        loop {
            if let Some(Tok::Ident(name)) = self.peek().cloned() {
                if let Some(first) = generator_index(&name) {
                    let pos = self.pos();
                    self.at += 1;
                    let mut indices = vec![(first, pos)];
                    while self.peek() == Some(&Tok::Dot) {
                        self.at += 1;
                        let pos = self.pos();
                        match self.bump() {
                            Some(Tok::Num(d)) => {
                                let index =
                                    d.parse().map_err(|_| ParseError::Syntax { pos, msg: "bad index".into() })?;
                                indices.push((index, pos));
                            }
                            _ => return Err(ParseError::Syntax { pos, msg: "expected index after `.`".into() }),
                        }
                    }
                    let mut m = Monomial::ONE;
                    let mut negative = false;
                    for (index, pos) in indices {
                        if index == 0 || index > self.n {
                            return Err(ParseError::IndexOutOfRange { index, n: self.n, pos });
                        }
                        match m.wedge(Monomial::generator(index)) {
                            Some((s, next)) => {
                                negative ^= s;
                                m = next;
                            }
                            None => return Err(ParseError::DuplicateIndex { index, pos }),
                        }
                    }
                    if negative {
                        coeff = coeff.scale(&-Scalar::one());
                    }
                    return Ok((coeff, m));
                }
            }
            match self.factor()? {
                Some(f) => coeff = coeff.mul(&f),
                None => return self.err("expected coefficient or generator"),
            }
            // `2e1` is tolerated; otherwise a multiplication sign is required
            if self.peek() == Some(&Tok::Times) {
                self.at += 1;
            } else if !matches!(self.peek(), Some(Tok::Ident(s)) if generator_index(s).is_some()) {
                return self.err("expected `*` after coefficient");
            }
        }
    }

    fn at_expr_end(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Comma) | Some(Tok::RParen) | Some(Tok::Sep))
    }

    /// `0 | [+|-] term ((+|-) term)*`, stopping at `,` `)` or a line break.
    fn expr(&mut self, long: bool) -> Result<ParamForm, ParseError> {
        let mut out = ParamForm::zero();
        if self.peek() == Some(&Tok::Num("0".into())) {
            let save = self.at;
            self.at += 1;
            if self.at_expr_end() {
                return Ok(out);
            }
            self.at = save;
        }
        if self.at_expr_end() {
            return self.err("empty expression");
        }
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    true
                }
                _ if first => false,
                _ => return self.err("expected `+` or `-`"),
            };
            first = false;
            let (mut coeff, m) = if long { self.long_term()? } else { self.shorthand_term()? };
            if negative {
                coeff = coeff.scale(&-Scalar::one());
            }
            out.add_term(m, &coeff);
            if self.at_expr_end() {
                return Ok(out);
            }
        }
    }

    fn uses_long_form(&self) -> bool {
        self.toks.iter().any(|t| matches!(&t.tok, Tok::Ident(s) if generator_index(s).is_some()))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_seps();
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn salamon(&mut self) -> Result<Vec<ParamForm>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut entries = Vec::new();
        loop {
            entries.push(self.expr(false)?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => {
                    self.at -= 1;
                    return self.err("expected `,` or `)`");
                }
            }
        }
        self.finish()?;
        if entries.len() != self.n {
            return Err(ParseError::EntryCount { expected: self.n, found: entries.len() });
        }
        Ok(entries)
    }

    fn long_form(&mut self) -> Result<Vec<ParamForm>, ParseError> {
        let mut eqs: Vec<Option<ParamForm>> = vec![None; self.n];
        loop {
            self.skip_seps();
            if self.peek().is_none() {
                break;
            }
            match self.bump() {
                Some(Tok::Ident(d)) if d == "d" => {}
                _ => {
                    self.at -= 1;
                    return self.err("expected `d e<k> = ...`");
                }
            }
            let pos = self.pos();
            let index = match self.bump() {
                Some(Tok::Ident(g)) => match generator_index(&g) {
                    Some(k) => k,
                    None => return Err(ParseError::Syntax { pos, msg: "expected generator e<k>".into() }),
                },
                _ => return Err(ParseError::Syntax { pos, msg: "expected generator e<k>".into() }),
            };
            if index == 0 || index > self.n {
                return Err(ParseError::IndexOutOfRange { index, n: self.n, pos });
            }
            self.expect(Tok::Eq, "`=`")?;
            let value = self.expr(true)?;
            if eqs[index - 1].is_some() {
                return Err(ParseError::Redefined { index, pos });
            }
            eqs[index - 1] = Some(value);
            if !matches!(self.peek(), None | Some(Tok::Sep)) {
                return self.err("expected end of line");
            }
        }
        Ok(eqs.into_iter().map(Option::unwrap_or_default).collect())
    }
}

/// Parses structure equations in either notation into one (possibly
/// parametric) form per generator.
pub fn parse_structure_equations(text: &str, n: usize, params: &[String]) -> Result<Vec<ParamForm>, ParseError> {
    if n == 0 {
        return Err(ParseError::Syntax { pos: 0, msg: "dimension must be at least 1".into() });
    }
    let mut p = Parser::new(text, n, params)?;
    p.skip_seps();
    if p.peek() == Some(&Tok::LParen) {
        if n > 9 {
            return p.err("shorthand notation needs n ≤ 9; use `d e<k> = ...` lines");
        }
        p.salamon()
    } else {
        p.long_form()
    }
}

/// A single form expression: long form (`e1.2 + 2*e3.4`) or, when no
/// `e<k>` token occurs, pair shorthand (`12+34-2×56`).
pub fn parse_form(text: &str, n: usize, params: &[String]) -> Result<ParamForm, ParseError> {
    let mut p = Parser::new(text, n, params)?;
    let long = p.uses_long_form();
    if !long && n > 9 {
        return p.err("pair shorthand needs n ≤ 9");
    }
    let f = p.expr(long)?;
    p.finish()?;
    Ok(f)
}

/// Parses a form with no parameters.
pub fn parse_concrete_form(text: &str, n: usize) -> Result<Form, ParseError> {
    Ok(parse_form(text, n, &[])?.instantiate(&[]))
}

fn push_rational_term(
    out: &mut String,
    value: &num_rational::BigRational,
    imaginary: bool,
    symbols: &[usize],
    params: &[String],
    target: &str,
) {
    let negative = value.is_negative();
    let mag = value.abs();
    out.push(if negative { '-' } else { '+' });
    let mut factors: Vec<String> = Vec::new();
    if !mag.is_one() {
        factors.push(if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        });
    }
    if imaginary {
        factors.push("i".into());
    }
    factors.extend(symbols.iter().map(|&s| params[s].clone()));
    for f in factors {
        let _ = write!(out, "{f}*");
    }
    out.push_str(target);
}

/// Renders a form in the grammar accepted by [`parse_form`]; `shorthand`
/// selects pair notation (2-forms with `n ≤ 9` only).
pub fn format_form(form: &ParamForm, params: &[String], shorthand: bool) -> String {
    let mut out = String::new();
    for (m, poly) in form.terms() {
        let target = if shorthand { m.indices().iter().map(|i| i.to_string()).collect::<String>() } else { m.label() };
        for (symbols, c) in poly.terms() {
            if !c.re().is_zero() {
                push_rational_term(&mut out, c.re(), false, symbols, params, &target);
            }
            if !c.im().is_zero() {
                push_rational_term(&mut out, c.im(), true, symbols, params, &target);
            }
        }
    }
    if out.is_empty() {
        return "0".into();
    }
    match out.strip_prefix('+') {
        Some(rest) => rest.to_string(),
        None => out,
    }
}

/// Renders structure equations: shorthand when `n ≤ 9` and every entry is a
/// 2-form, long form otherwise.
pub fn print_structure(eqs: &[ParamForm], params: &[String]) -> String {
    let n = eqs.len();
    let shorthand = n <= 9 && eqs.iter().all(|f| f.is_zero() || f.homogeneous_degree() == Some(2));
    if shorthand {
        let entries: Vec<String> = eqs.iter().map(|f| format_form(f, params, true)).collect();
        format!("({})", entries.join(","))
    } else {
        eqs.iter().enumerate().map(|(k, f)| format!("d e{} = {}\n", k + 1, format_form(f, params, false))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concrete(text: &str, n: usize) -> Vec<Form> {
        parse_structure_equations(text, n, &[]).unwrap().iter().map(|f| f.instantiate(&[])).collect()
    }

    fn e(indices: &[usize]) -> Form {
        Form::wedge_of(indices)
    }

    #[test]
    fn salamon_basic() {
        let d = concrete("(0,0,0,12)", 4);
        assert!(d[..3].iter().all(Form::is_zero));
        assert_eq!(d[3], e(&[1, 2]));
        assert!(concrete("(0,0,0,0)", 4).iter().all(Form::is_zero));
    }

    #[test]
    fn salamon_coefficients() {
        let d = concrete("(0,64+15,2×16,1/2×13,14+1/2×63,0)", 6);
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(d[1], &e(&[6, 4]) + &e(&[1, 5]));
        assert_eq!(d[2], e(&[1, 6]).scale(&Scalar::from_integer(2)));
        assert_eq!(d[3], e(&[1, 3]).scale(&half));
        assert_eq!(d[4], &e(&[1, 4]) + &e(&[6, 3]).scale(&half));
        assert_eq!(concrete("(0, 0, -23, 24)", 4)[2], -&e(&[2, 3]));
        assert_eq!(concrete("(0,½×12,i×12)", 3)[2], e(&[1, 2]).scale(&Scalar::i()));
        assert_eq!(concrete("(0,0,12−13)", 3)[2], &e(&[1, 2]) - &e(&[1, 3]));
    }

    #[test]
    fn long_form() {
        let d = concrete("d e3 = e1.2\nd e4 = 2*e1.3 - 1/2*e2.1", 4);
        assert_eq!(d[2], e(&[1, 2]));
        assert_eq!(d[3], &e(&[1, 3]).scale(&Scalar::from_integer(2)) + &e(&[1, 2]).scale(&Scalar::from_ratio(1, 2)));
        assert!(d[0].is_zero());
        let params = vec!["a1".to_string()];
        let p = parse_structure_equations("d e2 = -a1*e1.2", 2, &params).unwrap();
        assert_eq!(p[1].instantiate(&[Scalar::from_integer(3)]), e(&[1, 2]).scale(&Scalar::from_integer(-3)));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_structure_equations("(0,0,15,0)", 4, &[]),
            Err(ParseError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(
            parse_structure_equations("(0,0,11,0)", 4, &[]),
            Err(ParseError::DuplicateIndex { index: 1, .. })
        ));
        assert!(matches!(
            parse_structure_equations("d e3 = e1.1", 3, &[]),
            Err(ParseError::DuplicateIndex { index: 1, .. })
        ));
        assert!(matches!(
            parse_structure_equations("(0,0,12)", 4, &[]),
            Err(ParseError::EntryCount { expected: 4, found: 3 })
        ));
        match parse_structure_equations("(0,0,1#2,0)", 4, &[]) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_structure_equations("(0,b*12)", 2, &[]), Err(ParseError::UnknownSymbol { .. })));
        assert!(matches!(
            parse_structure_equations("d e1 = 0\nd e1 = 0", 2, &[]),
            Err(ParseError::Redefined { index: 1, .. })
        ));
    }

    #[test]
    fn shorthand_two_form() {
        let omega = parse_concrete_form("16+2×34−25", 6).unwrap();
        assert_eq!(omega, &(&e(&[1, 6]) + &e(&[3, 4]).scale(&Scalar::from_integer(2))) - &e(&[2, 5]));
        assert_eq!(parse_concrete_form("e1.2 + e3.4", 4).unwrap(), &e(&[1, 2]) + &e(&[3, 4]));
    }

    #[test]
    fn print_reparses() {
        for (text, n) in
            [("(0,64+15,2×16,1/2×13,14+1/2×63,0)", 6), ("(0,0,i×12,0)", 4), ("d e11 = e1.10\nd e3 = -3/2*e1.2", 11)]
        {
            let first = parse_structure_equations(text, n, &[]).unwrap();
            let printed = print_structure(&first, &[]);
            assert_eq!(parse_structure_equations(&printed, n, &[]).unwrap(), first, "{printed}");
        }
    }
}
