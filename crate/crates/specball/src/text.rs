//! Parsers and printers for the text formats: polynomials, fields,
//! certificates, composition words, complex literals and matrices.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use specball_core::coeff::ExactComplex;
use specball_core::decompose::{field_hash, Certificate, CertificateTerm, TermKind};
use specball_core::field::{VectorField, COMPONENT_NAMES};
use specball_core::poly::{FiberPoly, InvariantPoly, Poly, Ring};
use specball_core::specball::{CompositionWord, ElementaryMap, Matrix2};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub line: Option<usize>,
    pub msg: String,
}

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self { line: None, msg: msg.into() }
    }

    fn at_line(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::new(msg))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn decimal(text: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::new(format!("bad number `{text}`"));
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() {
        return Err(bad());
    }
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
    })
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific suffix, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(decimal(&text)?));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return err(format!("unexpected character `{ch}`"));
        }
    }
    Ok(out)
}

struct PolyParser<R: Ring> {
    toks: Vec<Tok>,
    pos: usize,
    _ring: std::marker::PhantomData<R>,
}

impl<R: Ring> PolyParser<R> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<R>, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<R>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = constant_of(&d).ok_or_else(|| ParseError::new("division by a non-constant"))?;
                let inv = c.inv().ok_or_else(|| ParseError::new("division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<R>, ParseError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly<R>, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.pos += 1;
                u32::try_from(n.to_integer()).map_err(|_| ParseError::new("exponent too large"))?
            }
            _ => return err("expected an integer exponent"),
        };
        if !neg {
            return Ok(base.pow(e));
        }
        match base.monomial_inverse() {
            Some(inv) => Ok(inv.pow(e)),
            None if base.len() == 1 => err(format!(
                "negative exponent on `{base}`: only {} may carry negative powers",
                laurent_names::<R>()
            )),
            None => err(format!("negative exponent on non-monomial `{base}`")),
        }
    }

    fn atom(&mut self) -> Result<Poly<R>, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(ExactComplex::from_rational(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = Poly::<R>::var_named(&name) {
                    Ok(v)
                } else if name == "i" {
                    Ok(Poly::constant(ExactComplex::i()))
                } else {
                    err(format!("unknown variable `{name}` (expected one of {})", R::NAMES.join(", ")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return err("missing `)`");
                }
                Ok(inner)
            }
            Some(t) => err(format!("unexpected token {t:?}")),
            None => err("unexpected end of input"),
        }
    }
}

fn laurent_names<R: Ring>() -> String {
    let names: Vec<&str> = R::NAMES.iter().zip(R::LAURENT).filter(|(_, l)| **l).map(|(n, _)| *n).collect();
    if names.is_empty() {
        "no variables of this ring".into()
    } else {
        names.join(", ")
    }
}

fn constant_of<R: Ring>(p: &Poly<R>) -> Option<ExactComplex> {
    match p.len() {
        0 => Some(ExactComplex::zero()),
        1 => {
            let (m, c) = p.terms().next()?;
            m.is_one().then(|| c.clone())
        }
        _ => None,
    }
}

/// Parse a polynomial in the variables of ring `R`.
pub fn parse_poly<R: Ring>(s: &str) -> Result<Poly<R>, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return err("empty polynomial");
    }
    let mut p = PolyParser::<R> { toks, pos: 0, _ring: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return err(format!("trailing input at token {:?}", p.toks[p.pos]));
    }
    Ok(out)
}

/// `d11: ..; d12: ..; d21: ..; d22: ..`; missing components are zero.
pub fn parse_field(s: &str) -> Result<VectorField, ParseError> {
    let mut v = VectorField::zero();
    let mut seen = [false; 4];
    for piece in s.split([';', '\n']).map(str::trim).filter(|p| !p.is_empty() && !p.starts_with('#')) {
        let (name, body) =
            piece.split_once(':').ok_or_else(|| ParseError::new(format!("expected `dij: poly`, got `{piece}`")))?;
        let name = name.trim();
        let i = COMPONENT_NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| ParseError::new(format!("unknown component `{name}`")))?;
        if seen[i] {
            return err(format!("component `{name}` given twice"));
        }
        seen[i] = true;
        v.v[i] = parse_poly::<specball_core::poly::Euclid>(body)?;
    }
    Ok(v)
}

pub fn print_field(v: &VectorField) -> String {
    v.to_string()
}

/// Split `rest` at occurrences of `key=` for the given keys.
fn key_values<'a, 'k>(rest: &'a str, keys: &[&'k str]) -> Result<Vec<(&'k str, &'a str)>, ParseError> {
    let mut starts: Vec<(usize, &str)> = Vec::new();
    for key in keys {
        let pat = format!("{key}=");
        let mut from = 0;
        while let Some(k) = rest[from..].find(&pat) {
            let at = from + k;
            let boundary = at == 0 || rest[..at].ends_with(char::is_whitespace);
            if boundary {
                starts.push((at, key));
            }
            from = at + pat.len();
        }
    }
    starts.sort();
    if starts.first().map(|s| rest[..s.0].trim().is_empty()) == Some(false) {
        return err(format!("unexpected text `{}`", rest[..starts[0].0].trim()));
    }
    if starts.is_empty() && !rest.trim().is_empty() {
        return err(format!("expected {} but got `{}`", keys.join("=, "), rest.trim()));
    }
    let mut out = Vec::new();
    for (n, (at, key)) in starts.iter().enumerate() {
        let end = starts.get(n + 1).map(|s| s.0).unwrap_or(rest.len());
        let value = rest[at + key.len() + 1..end].trim();
        if out.iter().any(|(k, _)| k == key) {
            return err(format!("`{key}` given twice"));
        }
        out.push((*key, value));
    }
    Ok(out)
}

fn required<'a>(kv: &[(&str, &'a str)], key: &str) -> Result<&'a str, ParseError> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| ParseError::new(format!("missing `{key}=`")))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("reconstruction hash {actual} does not match input={expected}")]
    ReconstructionMismatch { expected: String, actual: String },
    #[error("certificate refers to input {cert} but the given field hashes to {field}")]
    InputMismatch { cert: String, field: String },
}

fn parse_certificate_text(s: &str) -> Result<Certificate, ParseError> {
    let mut lines =
        s.split(['\n', ';']).enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (n, header) = lines.next().ok_or_else(|| ParseError::new("empty certificate"))?;
    let hash = header
        .strip_prefix("CERT v1 input=")
        .map(str::trim)
        .filter(|h| h.len() == 64 && h.chars().all(|c| c.is_ascii_hexdigit()))
        .ok_or_else(|| ParseError::new("expected `CERT v1 input=<sha256 hex>`").at_line(n))?;
    let mut terms = Vec::new();
    let mut trailer = false;
    for (n, line) in lines {
        if trailer {
            return Err(ParseError::new("text after `RESIDUAL 0`").at_line(n));
        }
        if line == "RESIDUAL 0" {
            trailer = true;
            continue;
        }
        let rest = line.strip_prefix("TERM ").ok_or_else(|| ParseError::new(format!("expected TERM, got `{line}`")).at_line(n))?;
        let (kind, rest) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
        let kind = TermKind::from_name(kind).ok_or_else(|| ParseError::new(format!("unknown term kind `{kind}`")).at_line(n))?;
        let term = (|| {
            if kind.has_b() {
                let kv = key_values(rest, &["a", "b"])?;
                let a = parse_poly::<specball_core::poly::Invariant>(required(&kv, "a")?)?;
                let b = parse_poly::<specball_core::poly::Fiber>(required(&kv, "b")?)?;
                Ok(CertificateTerm::bracket(kind, a, b))
            } else {
                let kv = key_values(rest, &["a"])?;
                let a: InvariantPoly = parse_poly(required(&kv, "a")?)?;
                Ok(match kind {
                    TermKind::Hd => CertificateTerm::hd(a),
                    _ => CertificateTerm::triple(a),
                })
            }
        })()
        .map_err(|e: ParseError| e.at_line(n))?;
        terms.push(term);
    }
    if !trailer {
        return err("missing `RESIDUAL 0` trailer");
    }
    Ok(Certificate { terms, input_hash: hash.to_ascii_lowercase() })
}

/// Parse a certificate and check that its reconstruction hashes to the
/// recorded input.
pub fn parse_certificate(s: &str) -> Result<Certificate, CertificateError> {
    let cert = parse_certificate_text(s)?;
    let actual = field_hash(&cert.reconstruct());
    if actual != cert.input_hash {
        return Err(CertificateError::ReconstructionMismatch { expected: cert.input_hash, actual });
    }
    Ok(cert)
}

/// [`parse_certificate`], additionally checking that it refers to `input`.
pub fn parse_certificate_for(s: &str, input: &VectorField) -> Result<Certificate, CertificateError> {
    let cert = parse_certificate(s)?;
    let field = field_hash(input);
    if field != cert.input_hash {
        return Err(CertificateError::InputMismatch { cert: cert.input_hash, field });
    }
    Ok(cert)
}

pub fn print_certificate(c: &Certificate) -> String {
    c.to_string()
}

/// Shortest round-trip form: `re+imi`, or `re` when the imaginary part is `+0`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return format!("{}", z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_real(s: &str) -> Result<f64, ParseError> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| ParseError::new(format!("bad real number `{t}`")))?;
    if !v.is_finite() {
        return err(format!("non-finite number `{t}`"));
    }
    Ok(v)
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with decimal or scientific parts.
pub fn parse_complex(s: &str) -> Result<Complex64, ParseError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return err("empty complex literal");
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(Complex64::new(re, im))
}

/// `[[a, b], [c, d]]` with complex literal entries.
pub fn parse_matrix(s: &str) -> Result<Matrix2, ParseError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("[[")
        .and_then(|r| r.strip_suffix("]]"))
        .ok_or_else(|| ParseError::new("expected `[[a, b], [c, d]]`"))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return err("expected two rows");
    }
    let mut e = Vec::with_capacity(4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return err("expected two entries per row");
        }
        for c in cells {
            e.push(parse_complex(c)?);
        }
    }
    Ok(Matrix2::new(e[0], e[1], e[2], e[3]))
}

pub fn print_matrix(m: &Matrix2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        format_complex(m.a11),
        format_complex(m.a12),
        format_complex(m.a21),
        format_complex(m.a22)
    )
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WordError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: Mobius parameters need |alpha| < 1 and |gamma| = 1")]
    MobiusParameters { line: usize },
}

fn word_line(line: &str) -> Result<ElementaryMap, ParseError> {
    let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let fiber = |key: &str| -> Result<(FiberPoly, f64), ParseError> {
        let kv = key_values(rest, &[key, "t"])?;
        Ok((parse_poly(required(&kv, key)?)?, parse_real(required(&kv, "t")?)?))
    };
    Ok(match head {
        "TRANSPOSE" => {
            if !rest.trim().is_empty() {
                return err("TRANSPOSE takes no arguments");
            }
            ElementaryMap::Transpose
        }
        "MOBIUS" => {
            let kv = key_values(rest, &["alpha", "gamma"])?;
            ElementaryMap::Mobius {
                alpha: parse_complex(required(&kv, "alpha")?)?,
                gamma: parse_complex(required(&kv, "gamma")?)?,
            }
        }
        "DIAG" => {
            let kv = key_values(rest, &["a", "t"])?;
            let a: InvariantPoly = parse_poly(required(&kv, "a")?)?;
            ElementaryMap::diag(a, parse_real(required(&kv, "t")?)?)
        }
        "SHEAR" => {
            let (b, t) = fiber("beta")?;
            ElementaryMap::shear(b, t)
        }
        "OVER" => {
            let (b, t) = fiber("alpha")?;
            ElementaryMap::over(b, t)
        }
        "SHEAR_T" => {
            let (b, t) = fiber("beta")?;
            ElementaryMap::shear_t(b, t)
        }
        "OVER_T" => {
            let (b, t) = fiber("alpha")?;
            ElementaryMap::over_t(b, t)
        }
        other => return err(format!("unknown map `{other}`")),
    })
}

/// One map per line (or `;`-separated), applied right to left: the last
/// line acts first.
pub fn parse_word(s: &str) -> Result<CompositionWord, WordError> {
    let mut maps = Vec::new();
    for (n, line) in s.split(['\n', ';']).enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let e = word_line(line).map_err(|e| e.at_line(n + 1))?;
        if let ElementaryMap::Mobius { alpha, gamma } = &e {
            if alpha.norm() >= 1.0 || (gamma.norm() - 1.0).abs() > 1e-12 {
                return Err(WordError::MobiusParameters { line: n + 1 });
            }
        }
        maps.push(e);
    }
    Ok(CompositionWord::new(maps))
}

pub fn print_map(e: &ElementaryMap) -> String {
    match e {
        ElementaryMap::Transpose => "TRANSPOSE".into(),
        ElementaryMap::Mobius { alpha, gamma } => {
            format!("MOBIUS alpha={} gamma={}", format_complex(*alpha), format_complex(*gamma))
        }
        ElementaryMap::Diag { a, t } => format!("DIAG a={a} t={t}"),
        ElementaryMap::Shear { beta, t } => format!("SHEAR beta={beta} t={t}"),
        ElementaryMap::Over { alpha, t } => format!("OVER alpha={alpha} t={t}"),
        ElementaryMap::ShearT { beta, t } => format!("SHEAR_T beta={beta} t={t}"),
        ElementaryMap::OverT { alpha, t } => format!("OVER_T alpha={alpha} t={t}"),
    }
}

pub fn print_word(w: &CompositionWord) -> String {
    let mut s = String::new();
    for e in &w.maps {
        let _ = writeln!(s, "{}", print_map(e));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use specball_core::poly::{Euclid, Spectral};

    #[test]
    fn poly_grammar() {
        let p: Poly<Euclid> = parse_poly("x11^2 - 3/2*x12 + (1/2 - 3*i)*x21*x22 - 4").unwrap();
        assert_eq!(parse_poly::<Euclid>(&p.to_string()).unwrap(), p);
        let q: Poly<Spectral> = parse_poly("y^-2*x + i*y").unwrap();
        assert_eq!(q.min_exponent(1), -2);
        assert!(parse_poly::<Euclid>("x12^-1").is_err());
        assert!(parse_poly::<Euclid>("y").unwrap_err().msg.contains("unknown variable"));
        assert!(parse_poly::<Spectral>("(x + y)^-1").is_err());
        assert_eq!(parse_poly::<Euclid>("0.25*x11").unwrap(), parse_poly("1/4*x11").unwrap());
        assert_eq!(parse_poly::<Euclid>("-x11^2").unwrap(), -&parse_poly::<Euclid>("x11^2").unwrap());
        assert!(parse_poly::<Euclid>("x11 / x12").is_err());
        assert!(parse_poly::<Euclid>("").is_err());
    }

    #[test]
    fn field_format() {
        let v = parse_field("d12: x12; d21: -x21").unwrap();
        assert_eq!(v.to_string(), "d11: 0; d12: x12; d21: -x21; d22: 0");
        assert_eq!(parse_field(&v.to_string()).unwrap(), v);
        assert!(parse_field("d13: 1").is_err());
        assert!(parse_field("d11: 1; d11: 2").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), Complex64::new(0.5, 0.25));
        assert_eq!(parse_complex("-1e-3-2E+2i").unwrap(), Complex64::new(-1e-3, -200.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("2.5i").unwrap(), Complex64::new(0.0, 2.5));
        for z in [Complex64::new(0.1, -0.3), Complex64::new(-0.0, 1e-300), Complex64::new(1.0 / 3.0, 0.0)] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back, z);
        }
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn matrix_format() {
        let m = Matrix2::new(
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.3, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.5, 0.0),
        );
        assert_eq!(parse_matrix(&print_matrix(&m)).unwrap(), m);
        assert!(parse_matrix("[[1, 2], [3]]").is_err());
    }

    #[test]
    fn word_format() {
        let text = "TRANSPOSE\nMOBIUS alpha=0.1+0.2i gamma=-1\nDIAG a=u1 - u3 t=0.5\nSHEAR beta=y + 2*s t=-0.25\nOVER alpha=p t=1\nSHEAR_T beta=1 t=2\nOVER_T alpha=y^2 t=0.125\n";
        let w = parse_word(text).unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(print_word(&w), text);
        assert_eq!(parse_word(&print_word(&w)).unwrap(), w);
        assert!(matches!(parse_word("MOBIUS alpha=1 gamma=1"), Err(WordError::MobiusParameters { .. })));
        assert!(parse_word("DIAG a=y t=1").is_err());
        assert!(parse_word("SHEAR beta=1").is_err());
        assert_eq!(parse_word("").unwrap(), CompositionWord::empty());
    }

    #[test]
    fn certificate_format() {
        use specball_core::decompose::decompose;
        use specball_core::field::{lie_bracket, make_generator, Generator};
        let x = lie_bracket(
            &make_generator(&Generator::Diag(InvariantPoly::var(0))),
            &make_generator(&Generator::Over(FiberPoly::one())),
        );
        let cert = decompose(&x).unwrap().certificate;
        let text = print_certificate(&cert);
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        assert_eq!(parse_certificate_for(&text, &x).unwrap(), cert);
        assert!(matches!(
            parse_certificate_for(&text, &VectorField::zero()),
            Err(CertificateError::InputMismatch { .. })
        ));
        // drop a term: reconstruction no longer matches the input hash
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(1);
        assert!(matches!(
            parse_certificate(&lines.join("\n")),
            Err(CertificateError::ReconstructionMismatch { .. })
        ));
        assert!(parse_certificate("CERT v1 input=xyz\nRESIDUAL 0").is_err());
    }
}
