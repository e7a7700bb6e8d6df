//! Instance configuration: a space, named objects and named collections.
//!
//! ```toml
//! space = "3,3"
//!
//! [objects]
//! F = "ker(1)"
//! FG = "F + G"
//!
//! [collections]
//! main = ["FG", "O_X(0)", "O_X(3)"]
//! ```
//!
//! Object expressions are sums of terms `k*T`, where `T` is `O_X(d)`,
//! `O_Z(e)`, `ker(e)`, a name defined under `[objects]`, or a parenthesised
//! expression.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::cone::ConeSpace;
use crate::error::Error;
use crate::objects::{kernel_bundle, SheafObject};
use crate::tilting::NamedObject;

pub const P1113_TOML: &str = include_str!("../configs/p1113.toml");
pub const P112_TOML: &str = include_str!("../configs/p112.toml");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(String),
    #[error("malformed config: {0}")]
    Toml(String),
    #[error("bad space {0:?}: expected \"n,m\"")]
    Space(String),
    #[error("cannot parse {input:?} at position {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("unknown object name {0:?}")]
    UnknownName(String),
    #[error("object definitions are cyclic through {0:?}")]
    Cycle(String),
    #[error("unknown collection {0:?}")]
    UnknownCollection(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

/// Parse `"n,m"` into a space.
pub fn parse_space(s: &str) -> Result<ConeSpace, ConfigError> {
    let bad = || ConfigError::Space(s.to_string());
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: i64 = b.trim().parse().map_err(|_| bad())?;
    Ok(ConeSpace::new(n, m)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    OX(i64),
    OZ(i64),
    Ker(i64),
    Name(String),
    Sum(Vec<(Expr, usize)>),
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Parse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ConfigError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<i64, ConfigError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        match self.input[start..self.pos].parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_') {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.input[start..self.pos])
    }

    fn expr(&mut self) -> Result<Expr, ConfigError> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 && terms[0].1 == 1 {
            terms.pop().unwrap().0
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<(Expr, usize), ConfigError> {
        let mut mult = 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.integer()?;
            if k < 0 {
                return self.err("multiplicities must be non-negative");
            }
            self.expect(b'*')?;
            mult = k as usize;
        }
        Ok((self.factor()?, mult))
    }

    fn factor(&mut self) -> Result<Expr, ConfigError> {
        if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let Some(id) = self.ident() else {
            return self.err("expected an object");
        };
        let ctor: Option<fn(i64) -> Expr> = match id {
            "O_X" => Some(Expr::OX),
            "O_Z" => Some(Expr::OZ),
            "ker" => Some(Expr::Ker),
            _ => None,
        };
        match ctor {
            Some(make) => {
                self.expect(b'(')?;
                let v = self.integer()?;
                self.expect(b')')?;
                Ok(make(v))
            }
            None if id.as_bytes()[0].is_ascii_digit() => self.err("names cannot start with a digit"),
            None => Ok(Expr::Name(id.to_string())),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, ConfigError> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpaceField {
    Text(String),
    Pair([i64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    space: SpaceField,
    #[serde(default)]
    objects: BTreeMap<String, String>,
    #[serde(default)]
    collections: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub space: ConeSpace,
    pub objects: BTreeMap<String, SheafObject>,
    pub collections: BTreeMap<String, Vec<NamedObject>>,
    definitions: BTreeMap<String, Expr>,
}

impl InstanceConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Toml(e.message().to_string()))?;
        let space = match raw.space {
            SpaceField::Text(s) => parse_space(&s)?,
            SpaceField::Pair([n, m]) => {
                let n = usize::try_from(n).map_err(|_| ConfigError::Space(format!("{n},{m}")))?;
                ConeSpace::new(n, m)?
            }
        };
        let definitions = raw
            .objects
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_expr(v)?)))
            .collect::<Result<BTreeMap<_, _>, ConfigError>>()?;
        let mut cfg = InstanceConfig {
            space,
            objects: BTreeMap::new(),
            collections: BTreeMap::new(),
            definitions,
        };
        for name in raw.objects.keys() {
            let obj = cfg.resolve(&Expr::Name(name.clone()), &mut Vec::new())?;
            cfg.objects.insert(name.clone(), obj);
        }
        for (cname, entries) in &raw.collections {
            let list = entries
                .iter()
                .map(|s| Ok(NamedObject::new(s.clone(), cfg.object(s)?)))
                .collect::<Result<Vec<_>, ConfigError>>()?;
            cfg.collections.insert(cname.clone(), list);
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        InstanceConfig::parse(&text)
    }

    /// A config with a space and no definitions, for inline expressions.
    pub fn bare(space: ConeSpace) -> Self {
        InstanceConfig {
            space,
            objects: BTreeMap::new(),
            collections: BTreeMap::new(),
            definitions: BTreeMap::new(),
        }
    }

    /// Resolve a defined name or an inline expression.
    pub fn object(&self, text: &str) -> Result<SheafObject, ConfigError> {
        if let Some(obj) = self.objects.get(text) {
            return Ok(obj.clone());
        }
        self.resolve(&parse_expr(text)?, &mut Vec::new())
    }

    pub fn collection(&self, name: &str) -> Result<&[NamedObject], ConfigError> {
        self.collections
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| ConfigError::UnknownCollection(name.to_string()))
    }

    fn resolve(&self, e: &Expr, stack: &mut Vec<String>) -> Result<SheafObject, ConfigError> {
        Ok(match e {
            Expr::OX(d) => SheafObject::ox(*d),
            Expr::OZ(d) => SheafObject::oz(*d),
            Expr::Ker(d) => kernel_bundle(&self.space, *d)?,
            Expr::Name(n) => {
                if stack.contains(n) {
                    return Err(ConfigError::Cycle(n.clone()));
                }
                let def = self.definitions.get(n).ok_or_else(|| ConfigError::UnknownName(n.clone()))?;
                stack.push(n.clone());
                let out = self.resolve(def, stack)?;
                stack.pop();
                out
            }
            Expr::Sum(parts) => SheafObject::Sum(
                parts
                    .iter()
                    .map(|(p, k)| Ok((self.resolve(p, stack)?, *k)))
                    .collect::<Result<_, ConfigError>>()?,
            ),
        })
    }
}

/// The builtin instance configs by name.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "P1113" => Some(P1113_TOML),
        "P112" => Some(P112_TOML),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        assert_eq!(parse_expr("O_X(-2)").unwrap(), Expr::OX(-2));
        assert_eq!(
            parse_expr("2*O_Z(1) + ker(2)").unwrap(),
            Expr::Sum(vec![(Expr::OZ(1), 2), (Expr::Ker(2), 1)])
        );
        assert_eq!(parse_expr(" F ").unwrap(), Expr::Name("F".into()));
        assert!(parse_expr("O_X(").is_err());
        assert!(parse_expr("F +").is_err());
        assert!(parse_expr("F G").is_err());
    }

    #[test]
    fn builtin_configs_resolve() {
        let c = InstanceConfig::parse(P1113_TOML).unwrap();
        assert_eq!(c.objects["FG"].rank(), 9);
        assert_eq!(c.collection("main").unwrap().len(), 3);
        let s = InstanceConfig::parse(P112_TOML).unwrap();
        assert_eq!((s.space.n(), s.space.m()), (2, 2));
        assert_eq!(s.objects["F_S"].rank(), 2);
    }

    #[test]
    fn config_errors() {
        let cyc = "space = \"3,3\"\n[objects]\nA = \"B\"\nB = \"A + O_X(0)\"\n";
        assert!(matches!(InstanceConfig::parse(cyc), Err(ConfigError::Cycle(_))));
        let unknown = "space = [3, 3]\n[collections]\nc = [\"Q\"]\n";
        assert!(matches!(InstanceConfig::parse(unknown), Err(ConfigError::UnknownName(_))));
        assert!(matches!(InstanceConfig::parse("space = \"3;3\""), Err(ConfigError::Space(_))));
        let bad_kernel = "space = \"3,3\"\n[objects]\nK = \"ker(3)\"\n";
        assert!(matches!(InstanceConfig::parse(bad_kernel), Err(ConfigError::Engine(Error::InvalidObject(_)))));
    }
}
