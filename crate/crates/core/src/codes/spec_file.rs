//! Plain-text code definitions.
//!
//! One `key = value` pair per line; `#` starts a comment. Recognised keys:
//!
//! | key               | meaning                                                        |
//! |-------------------|----------------------------------------------------------------|
//! | `name`            | label for reports (default: `family(n,k)`)                     |
//! | `family`          | `cyclic`, `generator`, `bch`, `qr`, `random-ldpc`, `alist`     |
//! | `n`               | block length                                                   |
//! | `k`               | expected dimension; construction fails on mismatch             |
//! | `support`         | decimal exponents, comma or space separated                    |
//! | `design_distance` | BCH design distance                                            |
//! | `even_subcode`    | `true` multiplies the generator by `x + 1`                     |
//! | `extend`          | `true` appends an overall parity bit                           |
//! | `col_weight`, `row_weight` | regular random LDPC profile                           |
//! | `rows`, `col_fractions`    | irregular profile, e.g. `2:0.4 3:0.4 6:0.2`           |
//! | `seed`            | random LDPC seed                                               |
//! | `path`            | alist file, relative to the spec file                          |
//! | `dmin`            | claimed minimum distance, informational                        |
//!
//! For `cyclic`, `support` lists the ones of the first parity-check row;
//! for `generator`, the exponents of the generator polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use super::cyclic::{
    bch_generator_polynomial, cyclic_h_from_polynomial, extend_with_overall_parity,
    h_from_generator_polynomial, qr_generator_polynomial, CyclicCodeSpec,
};
use super::field::{order_of_two, Gf2mField};
use super::ldpc::{random_ldpc, WeightProfile};
use super::poly::Gf2Poly;
use super::{alist, Code, CodeError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Cyclic,
    Generator,
    Bch,
    Qr,
    RandomLdpc,
    Alist,
}

impl Family {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cyclic" => Family::Cyclic,
            "generator" => Family::Generator,
            "bch" => Family::Bch,
            "qr" => Family::Qr,
            "random-ldpc" => Family::RandomLdpc,
            "alist" => Family::Alist,
            _ => return None,
        })
    }

    fn as_str(&self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Generator => "generator",
            Family::Bch => "bch",
            Family::Qr => "qr",
            Family::RandomLdpc => "random-ldpc",
            Family::Alist => "alist",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::parse(s).ok_or_else(|| CodeError::InvalidParameter(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpecFile {
    pub name: Option<String>,
    pub family: Family,
    pub n: usize,
    pub k: Option<usize>,
    pub support: Vec<usize>,
    pub design_distance: Option<usize>,
    pub even_subcode: bool,
    pub extend: bool,
    pub col_weight: Option<usize>,
    pub row_weight: Option<usize>,
    pub rows: Option<usize>,
    pub col_fractions: Vec<(usize, f64)>,
    pub seed: u64,
    pub path: Option<PathBuf>,
    pub dmin: Option<usize>,
}

impl CodeSpecFile {
    pub fn new(family: Family, n: usize) -> Self {
        CodeSpecFile {
            name: None,
            family,
            n,
            k: None,
            support: Vec::new(),
            design_distance: None,
            even_subcode: false,
            extend: false,
            col_weight: None,
            row_weight: None,
            rows: None,
            col_fractions: Vec::new(),
            seed: 0,
            path: None,
            dmin: None,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CodeError> {
        let err = |line: usize, message: String| CodeError::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(i + 1, format!("expected key = value, got {line:?}")));
            };
            let key = key.trim().to_string();
            if kv
                .insert(key.clone(), (i + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(err(i + 1, format!("duplicate key {key:?}")));
            }
        }
        let last = text.lines().count();
        let num = |key: &str| -> Result<Option<usize>, CodeError> {
            kv.get(key)
                .map(|(l, v)| {
                    v.parse::<usize>()
                        .map_err(|_| err(*l, format!("{key}: expected an integer, got {v:?}")))
                })
                .transpose()
        };
        let flag = |key: &str| -> Result<bool, CodeError> {
            match kv.get(key) {
                None => Ok(false),
                Some((_, v)) if v == "true" => Ok(true),
                Some((_, v)) if v == "false" => Ok(false),
                Some((l, v)) => Err(err(*l, format!("{key}: expected true/false, got {v:?}"))),
            }
        };
        let (fl, fv) = kv
            .get("family")
            .ok_or_else(|| err(last, "missing key \"family\"".into()))?;
        let family = Family::parse(fv).ok_or_else(|| err(*fl, format!("unknown family {fv:?}")))?;
        let n = num("n")?.ok_or_else(|| err(last, "missing key \"n\"".into()))?;
        let support = match kv.get("support") {
            None => Vec::new(),
            Some((l, v)) => v
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err(*l, format!("support: bad exponent {t:?}")))
                })
                .collect::<Result<_, _>>()?,
        };
        let col_fractions = match kv.get("col_fractions") {
            None => Vec::new(),
            Some((l, v)) => v
                .split_whitespace()
                .map(|t| {
                    let parsed = t
                        .split_once(':')
                        .and_then(|(d, f)| Some((d.parse().ok()?, f.parse().ok()?)));
                    parsed.ok_or_else(|| err(*l, format!("col_fractions: bad entry {t:?}")))
                })
                .collect::<Result<_, _>>()?,
        };
        let seed = match kv.get("seed") {
            None => 0,
            Some((l, v)) => v
                .parse()
                .map_err(|_| err(*l, format!("seed: expected an integer, got {v:?}")))?,
        };
        let known = [
            "name",
            "family",
            "n",
            "k",
            "support",
            "design_distance",
            "even_subcode",
            "extend",
            "col_weight",
            "row_weight",
            "rows",
            "col_fractions",
            "seed",
            "path",
            "dmin",
        ];
        if let Some((key, (l, _))) = kv.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            return Err(err(*l, format!("unknown key {key:?}")));
        }
        Ok(CodeSpecFile {
            name: kv.get("name").map(|(_, v)| v.clone()),
            family,
            n,
            k: num("k")?,
            support,
            design_distance: num("design_distance")?,
            even_subcode: flag("even_subcode")?,
            extend: flag("extend")?,
            col_weight: num("col_weight")?,
            row_weight: num("row_weight")?,
            rows: num("rows")?,
            col_fractions,
            seed,
            path: kv.get("path").map(|(_, v)| PathBuf::from(v)),
            dmin: num("dmin")?,
        })
    }

    pub fn read(path: &Path) -> Result<Self, CodeError> {
        let text = std::fs::read_to_string(path).map_err(|source| CodeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut spec = Self::parse(&text, &path.display().to_string())?;
        if let (Some(rel), Some(dir)) = (&spec.path, path.parent()) {
            if rel.is_relative() {
                spec.path = Some(dir.join(rel));
            }
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<Code, CodeError> {
        let n = self.n;
        let mut code = match self.family {
            Family::Cyclic => {
                cyclic_h_from_polynomial(&CyclicCodeSpec::new(n, self.support.clone())?)?
            }
            Family::Generator => h_from_generator_polynomial(
                &self.generator(Gf2Poly::from_support(&self.support)),
                n,
            )?,
            Family::Bch => {
                let m = (n + 1).trailing_zeros();
                if (n + 1).count_ones() != 1 {
                    return Err(CodeError::InvalidParameter(format!(
                        "BCH length {n} is not 2^m - 1"
                    )));
                }
                let d = self.design_distance.ok_or_else(|| {
                    CodeError::InvalidParameter("bch needs design_distance".into())
                })?;
                let g = bch_generator_polynomial(&Gf2mField::new(m)?, n, d)?;
                h_from_generator_polynomial(&self.generator(g), n)?
            }
            Family::Qr => {
                if n < 3 || n % 2 == 0 {
                    return Err(CodeError::InvalidParameter(format!(
                        "QR length {n} must be an odd prime"
                    )));
                }
                let m = order_of_two(n as u64) as u32;
                let g = qr_generator_polynomial(n, &Gf2mField::new(m)?)?;
                h_from_generator_polynomial(&self.generator(g), n)?
            }
            Family::RandomLdpc => {
                let profile = match (self.col_weight, self.row_weight, self.rows) {
                    (Some(cw), Some(rw), _) => WeightProfile::regular(n, cw, rw)?,
                    (_, _, Some(rows)) if !self.col_fractions.is_empty() => {
                        WeightProfile::irregular(n, rows, &self.col_fractions)?
                    }
                    _ => {
                        return Err(CodeError::InvalidParameter(
                            "random-ldpc needs col_weight/row_weight or rows/col_fractions".into(),
                        ))
                    }
                };
                random_ldpc(n, &profile, self.seed)?
            }
            Family::Alist => {
                let path = self.path.as_ref().ok_or_else(|| {
                    CodeError::InvalidParameter("alist family needs a path".into())
                })?;
                alist::read_alist(path)?
            }
        };
        if self.extend {
            code = extend_with_overall_parity(&code);
        }
        if let Some(k) = self.k {
            if code.k() != k {
                return Err(CodeError::InvalidParameter(format!(
                    "built ({},{}) but spec declares k = {k}",
                    code.n(),
                    code.k()
                )));
            }
        }
        let name = self
            .name
            .clone()
            .unwrap_or_else(|| format!("{}({},{})", self.family.as_str(), code.n(), code.k()));
        let dmin = self.dmin.or(code.dmin_claimed());
        Ok(code.with_name(name).with_dmin(dmin))
    }

    fn generator(&self, g: Gf2Poly) -> Gf2Poly {
        if self.even_subcode {
            g.mul(&Gf2Poly::from_support(&[0, 1]))
        } else {
            g
        }
    }
}

impl fmt::Display for CodeSpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name = {name}")?;
        }
        writeln!(f, "family = {}", self.family.as_str())?;
        writeln!(f, "n = {}", self.n)?;
        if let Some(k) = self.k {
            writeln!(f, "k = {k}")?;
        }
        if !self.support.is_empty() {
            let s: Vec<String> = self.support.iter().map(|e| e.to_string()).collect();
            writeln!(f, "support = {}", s.join(" "))?;
        }
        let opt = |f: &mut fmt::Formatter<'_>, key: &str, v: Option<usize>| match v {
            Some(v) => writeln!(f, "{key} = {v}"),
            None => Ok(()),
        };
        opt(f, "design_distance", self.design_distance)?;
        if self.even_subcode {
            writeln!(f, "even_subcode = true")?;
        }
        if self.extend {
            writeln!(f, "extend = true")?;
        }
        opt(f, "col_weight", self.col_weight)?;
        opt(f, "row_weight", self.row_weight)?;
        opt(f, "rows", self.rows)?;
        if !self.col_fractions.is_empty() {
            let s: Vec<String> = self
                .col_fractions
                .iter()
                .map(|(d, p)| format!("{d}:{p}"))
                .collect();
            writeln!(f, "col_fractions = {}", s.join(" "))?;
        }
        if self.family == Family::RandomLdpc {
            writeln!(f, "seed = {}", self.seed)?;
        }
        if let Some(p) = &self.path {
            writeln!(f, "path = {}", p.display())?;
        }
        opt(f, "dmin", self.dmin)
    }
}
