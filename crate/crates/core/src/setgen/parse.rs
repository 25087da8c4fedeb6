//! Recursive-descent parser for the set-spec grammar.
//!
//! ```text
//! spec := full | interval(lo=<t>,hi=<t>) | lacunary | lacunary(base=<r>)
//!       | seq(a=<r>) | cantor(ratio=<r>,lo=<t>,hi=<t>) | points(<t>,...)
//!       | pointsfile(<path>) | union(<spec>,...) | scale(<r>,<spec>)
//!       | periodize(<spec>) | window(<r>,<spec>)
//! ```
//!
//! Keyword arguments may appear in any order. `cantor` defaults to
//! `lo=1, hi=2` when those are omitted.

use std::path::Path;

use super::DilationSetSpec;
use crate::{Error, Result};

/// Parses and validates a set spec.
pub fn parse_set_spec(text: &str) -> Result<DilationSetSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    spec.validate()?;
    Ok(spec)
}

/// Reads a points file: one positive decimal per line, `#` starts a comment.
pub fn parse_points_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_points_text(&text)
}

fn parse_points_text(text: &str) -> Result<Vec<f64>> {
    let mut points = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let t: f64 = content.parse().map_err(|_| {
            Error::Parameter(format!("points file line {}: not a number: {content:?}", line_no + 1))
        })?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Parameter(format!(
                "points file line {}: {t} is not positive",
                line_no + 1
            )));
        }
        points.push(t);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(points)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(rest.len());
        let token = &rest[..len];
        let value = token
            .parse::<f64>()
            .map_err(|_| self.error(format!("expected a number, found {token:?}")))?;
        self.pos += len;
        Ok(value)
    }

    /// `name=<number>` pairs up to the closing parenthesis.
    fn keyword_args(&mut self, allowed: &[&str]) -> Result<Vec<(&'a str, f64)>> {
        let mut args: Vec<(&str, f64)> = Vec::new();
        loop {
            let at = self.pos;
            let name = self.ident()?;
            if !allowed.contains(&name) {
                self.pos = at;
                self.skip_ws();
                return Err(self.error(format!("unknown argument {name:?}")));
            }
            if args.iter().any(|(n, _)| *n == name) {
                self.pos = at;
                self.skip_ws();
                return Err(self.error(format!("duplicate argument {name:?}")));
            }
            self.expect('=')?;
            args.push((name, self.number()?));
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        Ok(args)
    }

    fn spec(&mut self) -> Result<DilationSetSpec> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?;
        let lookup = |args: &[(&str, f64)], key: &str| {
            args.iter().find(|(n, _)| *n == key).map(|(_, v)| *v)
        };
        let spec = match name {
            "full" => DilationSetSpec::FullRay,
            "lacunary" => {
                if self.eat('(') {
                    let args = self.keyword_args(&["base"])?;
                    DilationSetSpec::Lacunary { base: lookup(&args, "base").unwrap_or(2.0) }
                } else {
                    DilationSetSpec::Lacunary { base: 2.0 }
                }
            }
            "interval" => {
                self.expect('(')?;
                let args = self.keyword_args(&["lo", "hi"])?;
                match (lookup(&args, "lo"), lookup(&args, "hi")) {
                    (Some(lo), Some(hi)) => DilationSetSpec::FullInterval { lo, hi },
                    _ => return Err(self.error("interval needs lo= and hi=")),
                }
            }
            "seq" => {
                self.expect('(')?;
                let args = self.keyword_args(&["a"])?;
                DilationSetSpec::Sequence { a: lookup(&args, "a").unwrap_or(f64::NAN) }
            }
            "cantor" => {
                self.expect('(')?;
                let args = self.keyword_args(&["ratio", "lo", "hi"])?;
                let ratio =
                    lookup(&args, "ratio").ok_or_else(|| self.error("cantor needs ratio="))?;
                DilationSetSpec::Cantor {
                    ratio,
                    lo: lookup(&args, "lo").unwrap_or(1.0),
                    hi: lookup(&args, "hi").unwrap_or(2.0),
                }
            }
            "points" => {
                self.expect('(')?;
                let mut points = vec![self.number()?];
                while self.eat(',') {
                    points.push(self.number()?);
                }
                self.expect(')')?;
                points.sort_by(f64::total_cmp);
                points.dedup();
                DilationSetSpec::ExplicitPoints(points)
            }
            "pointsfile" => {
                self.expect('(')?;
                self.skip_ws();
                let rest = &self.src[self.pos..];
                let close = rest.find(')').ok_or_else(|| self.error("unterminated path"))?;
                let path = rest[..close].trim().trim_matches('"');
                if path.is_empty() {
                    return Err(self.error("empty path"));
                }
                let points = parse_points_file(Path::new(path))?;
                self.pos += close + 1;
                DilationSetSpec::ExplicitPoints(points)
            }
            "union" => {
                self.expect('(')?;
                let mut parts = vec![self.spec()?];
                while self.eat(',') {
                    parts.push(self.spec()?);
                }
                self.expect(')')?;
                DilationSetSpec::Union(parts)
            }
            "scale" => {
                self.expect('(')?;
                let lambda = self.number()?;
                self.expect(',')?;
                let inner = Box::new(self.spec()?);
                self.expect(')')?;
                DilationSetSpec::Scale { lambda, inner }
            }
            "periodize" => {
                self.expect('(')?;
                let inner = Box::new(self.spec()?);
                self.expect(')')?;
                DilationSetSpec::Periodize(inner)
            }
            "window" => {
                self.expect('(')?;
                let r = self.number()?;
                self.expect(',')?;
                let inner = Box::new(self.spec()?);
                self.expect(')')?;
                DilationSetSpec::WindowRestrict { r, inner }
            }
            other => {
                self.pos = start;
                return Err(self.error(format!("unknown set {other:?}")));
            }
        };
        Ok(spec)
    }
}
