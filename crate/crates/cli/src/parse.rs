//! Polynomial input parsing: a recursive-descent parser for the text
//! grammar (sums of `c*x^i*y^j` terms with complex literals like `2+3i`,
//! `i`, `-i`, parenthesized subexpressions, and `^` powers) plus the JSON
//! term-array form. Errors carry the byte offset of the offending token.

use abelint::polyring::BivarPoly;
use abelint::{c64, Complex64};

/// A parse failure with its position in the input.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at byte {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

/// Parsed polynomial plus the derived chart data the pipeline needs.
#[derive(Debug, Clone)]
pub struct PolySpec {
    pub poly: BivarPoly,
    pub n: usize,
    /// `h_0 ≠ 0`: coefficient of `x^(n+1)`.
    pub chart_h0_ok: bool,
    /// `h_(n+1) ≠ 0`: coefficient of `y^(n+1)`.
    pub chart_hn1_ok: bool,
    /// `Σ(H) ≠ 0` within the genericity threshold.
    pub generic: bool,
    pub sigma: Option<Complex64>,
}

/// Parse either grammar (JSON if the input leads with `[`) and derive the
/// chart checks.
pub fn parse_poly(text: &str) -> Result<PolySpec, ParseError> {
    let trimmed = text.trim_start();
    let poly = if trimmed.starts_with('[') {
        parse_json_terms(text)?
    } else {
        Parser::new(text).parse()?
    };
    let deg = poly.degree().unwrap_or(0);
    if deg < 2 {
        return Err(ParseError {
            offset: 0,
            message: format!("polynomial degree {deg} is unsupported (need degree >= 2)"),
        });
    }
    let n = deg - 1;
    let top = poly.top_part().map_err(|e| ParseError {
        offset: 0,
        message: e.to_string(),
    })?;
    let scale = top.coeff_scale();
    let chart_h0_ok = top.h(0).norm() > 1e-12 * scale;
    let chart_hn1_ok = top.h(n + 1).norm() > 1e-12 * scale;
    let (sigma, generic) = if chart_h0_ok {
        let s = top.sigma().map_err(|e| ParseError {
            offset: 0,
            message: e.to_string(),
        })?;
        (Some(s), top.is_generic().unwrap_or(false))
    } else {
        (None, false)
    };
    Ok(PolySpec {
        poly,
        n,
        chart_h0_ok,
        chart_hn1_ok,
        generic,
        sigma,
    })
}

/// Parse a constant complex expression like `1.2`, `1+0.3i`, `-i`.
pub fn parse_constant(text: &str) -> Result<Complex64, ParseError> {
    let p = Parser::new(text).parse()?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(ParseError {
            offset: 0,
            message: format!("expected a constant, got '{text}'"),
        });
    }
    Ok(p.coeff(0, 0))
}

#[derive(serde::Deserialize)]
struct JsonTerm {
    i: usize,
    j: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

fn parse_json_terms(text: &str) -> Result<BivarPoly, ParseError> {
    let terms: Vec<JsonTerm> = serde_json::from_str(text).map_err(|e| ParseError {
        offset: e.column().saturating_sub(1),
        message: format!("JSON term array: {e}"),
    })?;
    Ok(BivarPoly::from_terms(
        terms
            .into_iter()
            .map(|t| ((t.i, t.j), c64(t.re, t.im))),
    ))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn parse(mut self) -> Result<BivarPoly, ParseError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.bytes.len() {
            return Err(self.error(format!(
                "unexpected '{}'",
                self.bytes[self.pos] as char
            )));
        }
        Ok(p)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            offset: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<BivarPoly, ParseError> {
        let mut sign = 1.0;
        if let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                if c == b'-' {
                    sign = -1.0;
                }
            }
        }
        let mut acc = self.term()?.scale(c64(sign, 0.0));
        while let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                let t = self.term()?;
                acc = if c == b'+' { acc.add(&t) } else { acc.sub(&t) };
            } else {
                break;
            }
        }
        Ok(acc)
    }

    // term := factor (('*')? factor)*   with juxtaposition ("3x", "x y")
    fn term(&mut self) -> Result<BivarPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == b'x' || c == b'y' || c == b'i' || c == b'(' || c.is_ascii_digit() || c == b'.' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // factor := (number['i'] | 'i' | var | '(' expr ')') ('^' uint)?
    fn factor(&mut self) -> Result<BivarPoly, ParseError> {
        let c = self
            .peek()
            .ok_or_else(|| self.error("unexpected end of input".into()))?;
        let base = if c.is_ascii_digit() || c == b'.' {
            let v = self.number()?;
            if self.bytes.get(self.pos) == Some(&b'i') {
                self.pos += 1;
                BivarPoly::monomial(0, 0, c64(0.0, v))
            } else {
                BivarPoly::monomial(0, 0, c64(v, 0.0))
            }
        } else if c == b'i' {
            self.pos += 1;
            BivarPoly::monomial(0, 0, c64(0.0, 1.0))
        } else if c == b'x' {
            self.pos += 1;
            BivarPoly::monomial(1, 0, Complex64::ONE)
        } else if c == b'y' {
            self.pos += 1;
            BivarPoly::monomial(0, 1, Complex64::ONE)
        } else if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    inner
                }
                _ => return Err(self.error("expected ')'".into())),
            }
        } else {
            return Err(self.error(format!("unexpected '{}'", c as char)));
        };

        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            let mut acc = BivarPoly::monomial(0, 0, Complex64::ONE);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_digit() || c == b'.' {
                self.pos += 1;
            } else if (c == b'e' || c == b'E')
                && self.pos > start
                && self
                    .bytes
                    .get(self.pos + 1)
                    .is_some_and(|&d| d.is_ascii_digit() || d == b'+' || d == b'-')
            {
                self.pos += 2;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|d| d.is_ascii_digit())
                {
                    self.pos += 1;
                }
                break;
            } else {
                break;
            }
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<f64>().map_err(|_| ParseError {
            offset: start,
            message: format!("bad numeric literal '{s}'"),
        })
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an exponent".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<usize>()
            .map_err(|_| ParseError {
                offset: start,
                message: "exponent out of range".into(),
            })
    }
}
