//! Run configuration: a sectioned `key = value` text format with integer
//! arrays in square brackets.
//!
//! ```text
//! [ambient]
//! n = [2, 2]            # factor dimensions N_i (m is the length)
//! full_product = true   # dim and a are derived for full products
//!
//! [bundle]
//! k = 1
//! split = [[5, 5]]      # k rows of m degrees, d_{i,j} = row j entry i
//!
//! [curve]
//! e = [1, 1]            # optional multidegree profile
//! ```
//!
//! A proper subvariety instead gives `dim`, `a` and `homogeneous = true`
//! explicitly; an explicit-Chern bundle gives `c1 = [...]` plus repeated
//! `ck = [a_1, ..., a_m, coeff]` lines instead of `split`. The optional
//! `[atlas]` section drives the sweep subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use alghyp_core::chow::MultiIndex;
use alghyp_core::model::{
    AmbientSpace, BundleInput, ChernData, DominationFlag, ModelError, SplitBundleSpec,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmbientSection {
    pub m: Option<usize>,
    pub n: Vec<u32>,
    pub dim: Option<u32>,
    pub a: Option<Vec<i64>>,
    pub full_product: bool,
    pub homogeneous: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationSetting {
    Auto,
    True,
    False,
}

impl DominationSetting {
    fn as_str(&self) -> &'static str {
        match self {
            DominationSetting::Auto => "auto",
            DominationSetting::True => "true",
            DominationSetting::False => "false",
        }
    }

    pub fn to_flag(self) -> DominationFlag {
        match self {
            DominationSetting::Auto => DominationFlag::Auto,
            DominationSetting::True => DominationFlag::AssertedTrue,
            DominationSetting::False => DominationFlag::AssertedFalse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSection {
    pub k: u32,
    pub split: Option<Vec<Vec<i64>>>,
    pub c1: Option<Vec<i64>>,
    /// Repeated `ck` lines: exponent tuple followed by the coefficient.
    pub ck: Vec<(Vec<u32>, i64)>,
    pub section_dominating: Option<DominationSetting>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSection {
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasSection {
    pub n_range: (u32, u32),
    pub k_range: (u32, u32),
    pub degree_max: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub ambient: AmbientSection,
    pub bundle: BundleSection,
    pub curve: Option<CurveSection>,
    pub atlas: Option<AtlasSection>,
}

/// Recursive bracket value: an integer or a list of values.
#[derive(Debug, Clone)]
enum Value {
    Int(i64),
    Word(String),
    List(Vec<Value>),
}

fn tokenize_value(line: usize, s: &str) -> Result<Value, ConfigError> {
    fn inner(line: usize, s: &str, pos: &mut usize) -> Result<Value, ConfigError> {
        let bytes = s.as_bytes();
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos >= bytes.len() {
            return Err(parse_err(line, "unexpected end of value"));
        }
        if bytes[*pos] == b'[' {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                let mut look = *pos;
                while look < bytes.len() && bytes[look].is_ascii_whitespace() {
                    look += 1;
                }
                if look < bytes.len() && bytes[look] == b']' {
                    *pos = look + 1;
                    break;
                }
                items.push(inner(line, s, pos)?);
                while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                    *pos += 1;
                }
                if *pos < bytes.len() && bytes[*pos] == b',' {
                    *pos += 1;
                } else if *pos < bytes.len() && bytes[*pos] == b']' {
                    *pos += 1;
                    break;
                } else if *pos >= bytes.len() {
                    return Err(parse_err(line, "unterminated `[`"));
                } else {
                    return Err(parse_err(
                        line,
                        format!("expected `,` or `]` at byte {} of value", *pos),
                    ));
                }
            }
            Ok(Value::List(items))
        } else {
            let start = *pos;
            while *pos < bytes.len()
                && !bytes[*pos].is_ascii_whitespace()
                && bytes[*pos] != b','
                && bytes[*pos] != b']'
            {
                *pos += 1;
            }
            let token = &s[start..*pos];
            if let Ok(v) = token.parse::<i64>() {
                Ok(Value::Int(v))
            } else {
                Ok(Value::Word(token.to_string()))
            }
        }
    }
    let mut pos = 0usize;
    let value = inner(line, s, &mut pos)?;
    while pos < s.len() && s.as_bytes()[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if pos != s.len() {
        return Err(parse_err(
            line,
            format!("trailing content `{}` after value", &s[pos..]),
        ));
    }
    Ok(value)
}

impl Value {
    fn as_int(&self, line: usize, key: &str) -> Result<i64, ConfigError> {
        match self {
            Value::Int(v) => Ok(*v),
            _ => Err(parse_err(line, format!("key `{key}`: expected an integer"))),
        }
    }

    fn as_bool(&self, line: usize, key: &str) -> Result<bool, ConfigError> {
        match self {
            Value::Word(w) if w == "true" => Ok(true),
            Value::Word(w) if w == "false" => Ok(false),
            _ => Err(parse_err(
                line,
                format!("key `{key}`: expected `true` or `false`"),
            )),
        }
    }

    fn as_int_array(&self, line: usize, key: &str) -> Result<Vec<i64>, ConfigError> {
        match self {
            Value::List(items) => items.iter().map(|v| v.as_int(line, key)).collect(),
            _ => Err(parse_err(
                line,
                format!("key `{key}`: expected an integer array like [1, 2]"),
            )),
        }
    }

    fn as_int_matrix(&self, line: usize, key: &str) -> Result<Vec<Vec<i64>>, ConfigError> {
        match self {
            Value::List(items) => items
                .iter()
                .map(|v| v.as_int_array(line, key))
                .collect(),
            _ => Err(parse_err(
                line,
                format!("key `{key}`: expected a matrix like [[1, 2], [3, 4]]"),
            )),
        }
    }
}

fn to_u32_array(values: &[i64], line: usize, key: &str) -> Result<Vec<u32>, ConfigError> {
    values
        .iter()
        .map(|&v| {
            u32::try_from(v)
                .map_err(|_| parse_err(line, format!("key `{key}`: entries must be >= 0")))
        })
        .collect()
}

/// Parses and validates a configuration document. Errors name the offending
/// line and key.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Ambient,
        Bundle,
        Curve,
        Atlas,
    }

    let mut section = Section::None;
    let mut ambient = AmbientSection::default();
    let mut seen_ambient = false;
    let mut bundle_k: Option<u32> = None;
    let mut bundle_split: Option<Vec<Vec<i64>>> = None;
    let mut bundle_c1: Option<Vec<i64>> = None;
    let mut bundle_ck: Vec<(Vec<u32>, i64)> = Vec::new();
    let mut bundle_dom: Option<DominationSetting> = None;
    let mut seen_bundle = false;
    let mut curve: Option<CurveSection> = None;
    let mut atlas_n: Option<(u32, u32)> = None;
    let mut atlas_k: Option<(u32, u32)> = None;
    let mut atlas_dmax: Option<i64> = None;
    let mut seen_atlas = false;
    let mut seen_keys: BTreeMap<String, usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "ambient" => {
                    seen_ambient = true;
                    Section::Ambient
                }
                "bundle" => {
                    seen_bundle = true;
                    Section::Bundle
                }
                "curve" => Section::Curve,
                "atlas" => {
                    seen_atlas = true;
                    Section::Atlas
                }
                other => {
                    return Err(parse_err(line_no, format!("unknown section `[{other}]`")))
                }
            };
            continue;
        }
        let (key, value_str) = line.split_once('=').ok_or_else(|| {
            parse_err(line_no, format!("expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim();
        let value = tokenize_value(line_no, value_str.trim())?;

        let section_name = match section {
            Section::None => {
                return Err(parse_err(
                    line_no,
                    format!("key `{key}` appears before any section header"),
                ))
            }
            Section::Ambient => "ambient",
            Section::Bundle => "bundle",
            Section::Curve => "curve",
            Section::Atlas => "atlas",
        };
        // ck lines may repeat; every other key is single-shot.
        if !(section == Section::Bundle && key == "ck") {
            let tag = format!("{section_name}.{key}");
            if let Some(prev) = seen_keys.insert(tag, line_no) {
                return Err(parse_err(
                    line_no,
                    format!("duplicate key `{key}` (first given on line {prev})"),
                ));
            }
        }

        match (section, key) {
            (Section::Ambient, "m") => {
                let v = value.as_int(line_no, key)?;
                if v < 1 {
                    return Err(parse_err(line_no, "key `m`: must be >= 1"));
                }
                ambient.m = Some(v as usize);
            }
            (Section::Ambient, "n") => {
                let arr = value.as_int_array(line_no, key)?;
                ambient.n = to_u32_array(&arr, line_no, key)?;
            }
            (Section::Ambient, "dim") => {
                let v = value.as_int(line_no, key)?;
                let v = u32::try_from(v)
                    .map_err(|_| parse_err(line_no, "key `dim`: must be >= 0"))?;
                ambient.dim = Some(v);
            }
            (Section::Ambient, "a") => {
                ambient.a = Some(value.as_int_array(line_no, key)?);
            }
            (Section::Ambient, "full_product") => {
                ambient.full_product = value.as_bool(line_no, key)?;
            }
            (Section::Ambient, "homogeneous") => {
                ambient.homogeneous = Some(value.as_bool(line_no, key)?);
            }
            (Section::Bundle, "k") => {
                let v = value.as_int(line_no, key)?;
                if v < 1 {
                    return Err(parse_err(line_no, "key `k`: rank must be >= 1"));
                }
                bundle_k = Some(v as u32);
            }
            (Section::Bundle, "split") => {
                bundle_split = Some(value.as_int_matrix(line_no, key)?);
            }
            (Section::Bundle, "c1") => {
                bundle_c1 = Some(value.as_int_array(line_no, key)?);
            }
            (Section::Bundle, "ck") => {
                let arr = value.as_int_array(line_no, key)?;
                if arr.len() < 2 {
                    return Err(parse_err(
                        line_no,
                        "key `ck`: expected [a_1, ..., a_m, coefficient]",
                    ));
                }
                let (expo, coeff) = arr.split_at(arr.len() - 1);
                bundle_ck.push((to_u32_array(expo, line_no, key)?, coeff[0]));
            }
            (Section::Bundle, "section_dominating") => {
                let setting = match &value {
                    Value::Word(w) if w == "auto" => DominationSetting::Auto,
                    Value::Word(w) if w == "true" => DominationSetting::True,
                    Value::Word(w) if w == "false" => DominationSetting::False,
                    _ => {
                        return Err(parse_err(
                            line_no,
                            "key `section_dominating`: expected auto, true or false",
                        ))
                    }
                };
                bundle_dom = Some(setting);
            }
            (Section::Curve, "e") => {
                let arr = value.as_int_array(line_no, key)?;
                curve = Some(CurveSection {
                    e: to_u32_array(&arr, line_no, key)?,
                });
            }
            (Section::Atlas, "n_range") => {
                let arr = value.as_int_array(line_no, key)?;
                let arr = to_u32_array(&arr, line_no, key)?;
                if arr.len() != 2 {
                    return Err(parse_err(line_no, "key `n_range`: expected [lo, hi]"));
                }
                atlas_n = Some((arr[0], arr[1]));
            }
            (Section::Atlas, "k_range") => {
                let arr = value.as_int_array(line_no, key)?;
                let arr = to_u32_array(&arr, line_no, key)?;
                if arr.len() != 2 {
                    return Err(parse_err(line_no, "key `k_range`: expected [lo, hi]"));
                }
                atlas_k = Some((arr[0], arr[1]));
            }
            (Section::Atlas, "degree_max") => {
                atlas_dmax = Some(value.as_int(line_no, key)?);
            }
            (_, key) => {
                return Err(parse_err(
                    line_no,
                    format!("unknown key `{key}` in section [{section_name}]"),
                ));
            }
        }
    }

    if !seen_ambient && !seen_atlas {
        return Err(ConfigError::Validation(
            "missing [ambient] section".into(),
        ));
    }
    let atlas = if seen_atlas {
        Some(AtlasSection {
            n_range: atlas_n
                .ok_or_else(|| ConfigError::Validation("atlas: missing n_range".into()))?,
            k_range: atlas_k
                .ok_or_else(|| ConfigError::Validation("atlas: missing k_range".into()))?,
            degree_max: atlas_dmax
                .ok_or_else(|| ConfigError::Validation("atlas: missing degree_max".into()))?,
        })
    } else {
        None
    };

    // Atlas-only configs need no ambient/bundle sections.
    if let (false, Some(atlas_section)) = (seen_ambient, &atlas) {
        validate_atlas(atlas_section)?;
        return Ok(RunConfig {
            ambient: AmbientSection::default(),
            bundle: BundleSection {
                k: 1,
                split: None,
                c1: None,
                ck: Vec::new(),
                section_dominating: None,
            },
            curve: None,
            atlas,
        });
    }
    if !seen_bundle {
        return Err(ConfigError::Validation("missing [bundle] section".into()));
    }

    let cfg = RunConfig {
        ambient,
        bundle: BundleSection {
            k: bundle_k
                .ok_or_else(|| ConfigError::Validation("bundle: missing rank k".into()))?,
            split: bundle_split,
            c1: bundle_c1,
            ck: bundle_ck,
            section_dominating: bundle_dom,
        },
        curve,
        atlas,
    };
    validate(&cfg)?;
    Ok(cfg)
}

/// Cross-field validation: arities agree, exactly one bundle description is
/// present, and every exponent is in range.
pub fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    let amb = &cfg.ambient;
    if amb.n.is_empty() {
        return Err(ConfigError::Validation(
            "ambient: key `n` is required and must be nonempty".into(),
        ));
    }
    let m = amb.n.len();
    if let Some(given) = amb.m {
        if given != m {
            return Err(ConfigError::Validation(format!(
                "ambient: m = {given} disagrees with the length {m} of n"
            )));
        }
    }
    if let Some(a) = &amb.a {
        if a.len() != m {
            return Err(ConfigError::Validation(format!(
                "ambient: a has length {}, expected m = {m}",
                a.len()
            )));
        }
    }
    if !amb.full_product {
        if amb.dim.is_none() {
            return Err(ConfigError::Validation(
                "ambient: `dim` is required unless full_product = true".into(),
            ));
        }
        if amb.a.is_none() {
            return Err(ConfigError::Validation(
                "ambient: `a` is required unless full_product = true".into(),
            ));
        }
    } else if amb.homogeneous == Some(false) {
        return Err(ConfigError::Validation(
            "ambient: a full product of projective spaces is homogeneous".into(),
        ));
    }

    let bundle = &cfg.bundle;
    let has_split = bundle.split.is_some();
    let has_chern = bundle.c1.is_some() || !bundle.ck.is_empty();
    if has_split && has_chern {
        return Err(ConfigError::Validation(
            "bundle: give either `split` or explicit Chern data (`c1`/`ck`), not both".into(),
        ));
    }
    if !has_split && !has_chern {
        return Err(ConfigError::Validation(
            "bundle: give `split` or explicit Chern data (`c1` plus `ck` lines)".into(),
        ));
    }
    if let Some(split) = &bundle.split {
        if split.len() != bundle.k as usize {
            return Err(ConfigError::Validation(format!(
                "bundle: split has {} rows, expected k = {}",
                split.len(),
                bundle.k
            )));
        }
        for (j, row) in split.iter().enumerate() {
            if row.len() != m {
                return Err(ConfigError::Validation(format!(
                    "bundle: split row {} has {} entries, expected m = {m}",
                    j + 1,
                    row.len()
                )));
            }
        }
    }
    if let Some(c1) = &bundle.c1 {
        if c1.len() != m {
            return Err(ConfigError::Validation(format!(
                "bundle: c1 has length {}, expected m = {m}",
                c1.len()
            )));
        }
        if bundle.ck.is_empty() && bundle.k > 1 {
            return Err(ConfigError::Validation(
                "bundle: explicit Chern data with k >= 2 needs `ck` lines".into(),
            ));
        }
    } else if !bundle.ck.is_empty() {
        return Err(ConfigError::Validation(
            "bundle: `ck` lines need an accompanying `c1`".into(),
        ));
    }
    for (expo, _) in &bundle.ck {
        if expo.len() != m {
            return Err(ConfigError::Validation(format!(
                "bundle: ck exponent {expo:?} has {} entries, expected m = {m}",
                expo.len()
            )));
        }
        let total: u32 = expo.iter().sum();
        if total != bundle.k {
            return Err(ConfigError::Validation(format!(
                "bundle: ck exponent {expo:?} has degree {total}, expected k = {}",
                bundle.k
            )));
        }
        if expo.iter().zip(&amb.n).any(|(e, n)| e > n) {
            return Err(ConfigError::Validation(format!(
                "bundle: ck exponent {expo:?} exceeds the factor dimensions {:?}",
                amb.n
            )));
        }
    }
    if let Some(curve) = &cfg.curve {
        if curve.e.len() != m {
            return Err(ConfigError::Validation(format!(
                "curve: e has length {}, expected m = {m}",
                curve.e.len()
            )));
        }
        if curve.e.iter().all(|&x| x == 0) {
            return Err(ConfigError::Validation(
                "curve: profile e must have a positive entry".into(),
            ));
        }
    }
    if let Some(atlas) = &cfg.atlas {
        validate_atlas(atlas)?;
    }
    Ok(())
}

fn validate_atlas(atlas: &AtlasSection) -> Result<(), ConfigError> {
    if atlas.n_range.0 > atlas.n_range.1 || atlas.k_range.0 > atlas.k_range.1 {
        return Err(ConfigError::Validation(
            "atlas: ranges must satisfy lo <= hi".into(),
        ));
    }
    if atlas.n_range.0 < 3 {
        return Err(ConfigError::Validation(
            "atlas: n range starts at 3 (below that no rank is admissible)".into(),
        ));
    }
    if atlas.degree_max < 1 {
        return Err(ConfigError::Validation(
            "atlas: degree_max must be >= 1".into(),
        ));
    }
    Ok(())
}

fn render_int_array<T: std::fmt::Display>(values: &[T]) -> String {
    let mut s = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{v}");
    }
    s.push(']');
    s
}

/// Renders a configuration back to text; `parse_config(render_config(cfg))`
/// reproduces `cfg` exactly.
pub fn render_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let amb = &cfg.ambient;
    if !amb.n.is_empty() {
        out.push_str("[ambient]\n");
        if let Some(m) = amb.m {
            let _ = writeln!(out, "m = {m}");
        }
        let _ = writeln!(out, "n = {}", render_int_array(&amb.n));
        if let Some(dim) = amb.dim {
            let _ = writeln!(out, "dim = {dim}");
        }
        if let Some(a) = &amb.a {
            let _ = writeln!(out, "a = {}", render_int_array(a));
        }
        let _ = writeln!(out, "full_product = {}", amb.full_product);
        if let Some(h) = amb.homogeneous {
            let _ = writeln!(out, "homogeneous = {h}");
        }
        out.push_str("\n[bundle]\n");
        let _ = writeln!(out, "k = {}", cfg.bundle.k);
        if let Some(split) = &cfg.bundle.split {
            let rows: Vec<String> = split.iter().map(|r| render_int_array(r)).collect();
            let _ = writeln!(out, "split = [{}]", rows.join(", "));
        }
        if let Some(c1) = &cfg.bundle.c1 {
            let _ = writeln!(out, "c1 = {}", render_int_array(c1));
        }
        for (expo, coeff) in &cfg.bundle.ck {
            let mut flat: Vec<i64> = expo.iter().map(|&e| i64::from(e)).collect();
            flat.push(*coeff);
            let _ = writeln!(out, "ck = {}", render_int_array(&flat));
        }
        if let Some(dom) = cfg.bundle.section_dominating {
            let _ = writeln!(out, "section_dominating = {}", dom.as_str());
        }
        if let Some(curve) = &cfg.curve {
            out.push_str("\n[curve]\n");
            let _ = writeln!(out, "e = {}", render_int_array(&curve.e));
        }
    }
    if let Some(atlas) = &cfg.atlas {
        out.push_str("\n[atlas]\n");
        let _ = writeln!(out, "n_range = [{}, {}]", atlas.n_range.0, atlas.n_range.1);
        let _ = writeln!(out, "k_range = [{}, {}]", atlas.k_range.0, atlas.k_range.1);
        let _ = writeln!(out, "degree_max = {}", atlas.degree_max);
    }
    out
}

/// The fully resolved inputs for one classification run.
pub struct ResolvedRun {
    pub ambient: AmbientSpace,
    pub bundle: BundleInput,
    pub profile: Option<Vec<u32>>,
}

/// Turns a validated config into model inputs, deriving full-product data
/// and the k = 1 top Chern coefficients where applicable.
pub fn resolve(cfg: &RunConfig) -> Result<ResolvedRun, ConfigError> {
    let amb = &cfg.ambient;
    let ambient = if amb.full_product {
        if let Some(dim) = amb.dim {
            let expected: u32 = amb.n.iter().sum();
            if dim != expected {
                return Err(ConfigError::Validation(format!(
                    "ambient: dim = {dim} disagrees with the full-product dimension {expected}"
                )));
            }
        }
        if let Some(a) = &amb.a {
            for (i, (&ai, &ni)) in a.iter().zip(&amb.n).enumerate() {
                if ai != -i64::from(ni) - 1 {
                    return Err(ConfigError::Validation(format!(
                        "ambient: a_{} = {ai} disagrees with the full-product value {}",
                        i + 1,
                        -i64::from(ni) - 1
                    )));
                }
            }
        }
        AmbientSpace::product(&amb.n)
    } else {
        AmbientSpace::new(
            amb.n.clone(),
            amb.dim.expect("validated"),
            amb.a.clone().expect("validated"),
            false,
            amb.homogeneous.unwrap_or(false),
        )?
    };

    let setting = cfg
        .bundle
        .section_dominating
        .unwrap_or(DominationSetting::Auto);
    let bundle = if let Some(split) = &cfg.bundle.split {
        let spec = SplitBundleSpec::new(split.clone())?;
        BundleInput::Split {
            spec,
            domination: setting.to_flag(),
        }
    } else {
        let c1 = cfg.bundle.c1.clone().expect("validated");
        let mut d_alpha: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        if cfg.bundle.ck.is_empty() {
            // k = 1: the top Chern class is c1 itself.
            for (i, &d) in c1.iter().enumerate() {
                if d != 0 {
                    d_alpha.insert(MultiIndex::unit(c1.len(), i), BigInt::from(d));
                }
            }
        } else {
            for (expo, coeff) in &cfg.bundle.ck {
                let alpha = MultiIndex::new(expo.clone());
                if d_alpha.insert(alpha, BigInt::from(*coeff)).is_some() {
                    return Err(ConfigError::Validation(format!(
                        "bundle: repeated ck exponent {expo:?}"
                    )));
                }
            }
            if cfg.bundle.k == 1 {
                for (i, &d) in c1.iter().enumerate() {
                    let alpha = MultiIndex::unit(c1.len(), i);
                    let stored = d_alpha.get(&alpha).cloned().unwrap_or_default();
                    if stored != BigInt::from(d) {
                        return Err(ConfigError::Validation(format!(
                            "bundle: with k = 1 the ck coefficients must equal c1; factor {} \
                             has {stored} vs {d}",
                            i + 1
                        )));
                    }
                }
            }
        }
        BundleInput::Chern(ChernData::new(
            cfg.bundle.k,
            c1,
            d_alpha,
            setting.to_flag(),
        )?)
    };

    Ok(ResolvedRun {
        ambient,
        bundle,
        profile: cfg.curve.as_ref().map(|c| c.e.clone()),
    })
}
