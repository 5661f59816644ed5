//! Flat `key = value` configuration with dotted keys.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! ignored. Lists are comma separated. Every key has a default, so empty
//! input yields the default configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::operators::MemberSpec;
use crate::symbols::ALPHA_MARGIN;

/// Every recognised key with its default value, in documentation order.
pub const DEFAULTS: &[(&str, &str)] = &[
    ("grid.r_max", "16"),
    ("grid.n_r", "2560"),
    ("grid.lambda_max", "256"),
    ("grid.n_lambda", "4096"),
    ("family", "default"),
    ("output.dir", "hyperlac-out"),
    ("plancherel.dimensions", "2,3,4"),
    ("plancherel.tolerance", "1e-3"),
    ("symbols.dimensions", "2,3"),
    ("symbols.alphas", "0,0.5+1i,1,crit+0.1"),
    ("symbols.slack", "1.2"),
    ("symbols.lambda_max", "200"),
    ("symbols.normalization_tolerance", "1e-8"),
    ("symbols.density_tolerance", "1e-12"),
    ("symbols.mass_tolerance", "1e-6"),
    ("i3.dimensions", "2,3"),
    ("i3.alphas", "0,crit+0.1"),
    ("i3.j", "20"),
    ("i3.lambda_max", "200"),
    ("i3.tolerance", "1e-3"),
    ("kunze_stein.dimensions", "2,3"),
    ("kunze_stein.ps", "1.2,1.5,1.8"),
    ("kunze_stein.slack", "1.5"),
    ("kunze_stein.ratio_tolerance", "0.01"),
    ("kunze_stein.summability_slack", "1.2"),
    ("cz.dimensions", "2,3"),
    ("cz.alphas", "0.5,1,2"),
    ("cz.slope_tolerance", "0.05"),
    ("cz.drift_threshold", "0.02"),
    ("maximal.dimensions", "2,3"),
    ("maximal.ps", "1.25,1.5,2"),
    ("maximal.alpha", "0"),
    ("maximal.j", "20"),
    ("maximal.k", "20"),
    ("maximal.stability_tolerance", "0.05"),
    ("oracle.dimensions", "2,3,4"),
    ("oracle.radii", "0.25,1,3"),
    ("oracle.alphas", "1,0.5+1i"),
    ("oracle.r_max", "12"),
    ("oracle.n_r", "256"),
    ("oracle.tolerance", "1e-3"),
    ("region.dimensions", "2,3"),
    ("region.samples", "100"),
    ("region.tolerance", "1e-3"),
];

/// A complex order, either fixed or relative to the dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Fixed(Complex64),
    /// `(2 - n)/2 + offset`, written `crit+offset`.
    Critical {
        offset: f64,
    },
}

impl AlphaSpec {
    pub fn resolve(self, n: Dimension) -> Complex64 {
        match self {
            Self::Fixed(a) => a,
            Self::Critical { offset } => Complex64::new((2.0 - n.get() as f64) / 2.0 + offset, 0.0),
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(a) => write!(f, "{a}"),
            Self::Critical { offset } if *offset < 0.0 => write!(f, "crit{offset}"),
            Self::Critical { offset } => write!(f, "crit+{offset}"),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("crit") {
            let offset = if rest.is_empty() {
                0.0
            } else {
                rest.trim_start_matches('+')
                    .parse::<f64>()
                    .map_err(|_| format!("bad offset in `{s}`"))?
            };
            return Ok(Self::Critical { offset });
        }
        let a = Complex64::from_str(s).map_err(|_| format!("`{s}` is not a complex number"))?;
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(Self::Fixed(a))
    }
}

/// Radial and spectral grid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub r_max: f64,
    pub n_r: usize,
    pub lambda_max: f64,
    pub n_lambda: usize,
}

impl GridConfig {
    /// Both node counts doubled.
    pub fn refined(self) -> Self {
        Self {
            n_r: 2 * self.n_r,
            n_lambda: 2 * self.n_lambda,
            ..self
        }
    }

    /// Both node counts halved.
    pub fn coarsened(self) -> Self {
        Self {
            n_r: self.n_r / 2,
            n_lambda: self.n_lambda / 2,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelConfig {
    pub dimensions: Vec<Dimension>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolsConfig {
    pub dimensions: Vec<Dimension>,
    pub alphas: Vec<AlphaSpec>,
    pub slack: f64,
    pub lambda_max: f64,
    pub normalization_tolerance: f64,
    pub density_tolerance: f64,
    pub mass_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct I3Config {
    pub dimensions: Vec<Dimension>,
    pub alphas: Vec<AlphaSpec>,
    pub j: usize,
    pub lambda_max: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KunzeSteinConfig {
    pub dimensions: Vec<Dimension>,
    pub ps: Vec<f64>,
    pub slack: f64,
    pub ratio_tolerance: f64,
    pub summability_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CzConfig {
    pub dimensions: Vec<Dimension>,
    pub alphas: Vec<f64>,
    pub slope_tolerance: f64,
    pub drift_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalConfig {
    pub dimensions: Vec<Dimension>,
    pub ps: Vec<f64>,
    pub alpha: AlphaSpec,
    pub j: usize,
    pub k: usize,
    pub stability_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub dimensions: Vec<Dimension>,
    pub radii: Vec<f64>,
    pub alphas: Vec<AlphaSpec>,
    pub r_max: f64,
    pub n_r: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionConfig {
    pub dimensions: Vec<Dimension>,
    pub samples: usize,
    pub tolerance: f64,
}

/// Fully defaulted and validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    /// `None` selects the default members for each dimension.
    pub family: Option<Vec<MemberSpec>>,
    pub output_dir: PathBuf,
    pub plancherel: PlancherelConfig,
    pub symbols: SymbolsConfig,
    pub i3: I3Config,
    pub kunze_stein: KunzeSteinConfig,
    pub cz: CzConfig,
    pub maximal: MaximalConfig,
    pub oracle: OracleConfig,
    pub region: RegionConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        validate_config("").expect("built-in defaults are valid")
    }
}

impl ExperimentConfig {
    /// Family members for dimension `n`.
    pub fn family_for(&self, n: Dimension) -> Vec<MemberSpec> {
        self.family.clone().unwrap_or_else(|| MemberSpec::defaults(n))
    }

    /// The configuration echoed back in `key = value` form.
    pub fn to_text(&self) -> String {
        let dims = |d: &[Dimension]| join(d.iter().map(|n| n.get()));
        let alphas = |a: &[AlphaSpec]| join(a.iter());
        let floats = |v: &[f64]| join(v.iter());
        let family = match &self.family {
            None => "default".to_string(),
            Some(v) => join(v.iter()),
        };
        let entries: Vec<(&str, String)> = vec![
            ("grid.r_max", self.grid.r_max.to_string()),
            ("grid.n_r", self.grid.n_r.to_string()),
            ("grid.lambda_max", self.grid.lambda_max.to_string()),
            ("grid.n_lambda", self.grid.n_lambda.to_string()),
            ("family", family),
            ("output.dir", self.output_dir.display().to_string()),
            ("plancherel.dimensions", dims(&self.plancherel.dimensions)),
            ("plancherel.tolerance", self.plancherel.tolerance.to_string()),
            ("symbols.dimensions", dims(&self.symbols.dimensions)),
            ("symbols.alphas", alphas(&self.symbols.alphas)),
            ("symbols.slack", self.symbols.slack.to_string()),
            ("symbols.lambda_max", self.symbols.lambda_max.to_string()),
            (
                "symbols.normalization_tolerance",
                self.symbols.normalization_tolerance.to_string(),
            ),
            ("symbols.density_tolerance", self.symbols.density_tolerance.to_string()),
            ("symbols.mass_tolerance", self.symbols.mass_tolerance.to_string()),
            ("i3.dimensions", dims(&self.i3.dimensions)),
            ("i3.alphas", alphas(&self.i3.alphas)),
            ("i3.j", self.i3.j.to_string()),
            ("i3.lambda_max", self.i3.lambda_max.to_string()),
            ("i3.tolerance", self.i3.tolerance.to_string()),
            ("kunze_stein.dimensions", dims(&self.kunze_stein.dimensions)),
            ("kunze_stein.ps", floats(&self.kunze_stein.ps)),
            ("kunze_stein.slack", self.kunze_stein.slack.to_string()),
            (
                "kunze_stein.ratio_tolerance",
                self.kunze_stein.ratio_tolerance.to_string(),
            ),
            (
                "kunze_stein.summability_slack",
                self.kunze_stein.summability_slack.to_string(),
            ),
            ("cz.dimensions", dims(&self.cz.dimensions)),
            ("cz.alphas", floats(&self.cz.alphas)),
            ("cz.slope_tolerance", self.cz.slope_tolerance.to_string()),
            ("cz.drift_threshold", self.cz.drift_threshold.to_string()),
            ("maximal.dimensions", dims(&self.maximal.dimensions)),
            ("maximal.ps", floats(&self.maximal.ps)),
            ("maximal.alpha", self.maximal.alpha.to_string()),
            ("maximal.j", self.maximal.j.to_string()),
            ("maximal.k", self.maximal.k.to_string()),
            (
                "maximal.stability_tolerance",
                self.maximal.stability_tolerance.to_string(),
            ),
            ("oracle.dimensions", dims(&self.oracle.dimensions)),
            ("oracle.radii", floats(&self.oracle.radii)),
            ("oracle.alphas", alphas(&self.oracle.alphas)),
            ("oracle.r_max", self.oracle.r_max.to_string()),
            ("oracle.n_r", self.oracle.n_r.to_string()),
            ("oracle.tolerance", self.oracle.tolerance.to_string()),
            ("region.dimensions", dims(&self.region.dimensions)),
            ("region.samples", self.region.samples.to_string()),
            ("region.tolerance", self.region.tolerance.to_string()),
        ];
        entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn join<I: IntoIterator<Item = D>, D: fmt::Display>(items: I) -> String {
    items.into_iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        msg: msg.into(),
    }
}

/// Raw values keyed by name, defaults filled in.
struct Raw(BTreeMap<&'static str, String>);

impl Raw {
    fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<&'static str, String> = DEFAULTS.iter().map(|&(k, v)| (k, v.to_string())).collect();
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("line {} is not `key = value`", lineno + 1)))?;
            let key = key.trim();
            let slot = DEFAULTS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(k, _)| *k)
                .ok_or_else(|| config_err(key, "unknown key"))?;
            if seen.insert(slot, lineno).is_some() {
                return Err(config_err(key, "key given more than once"));
            }
            map.insert(slot, value.trim().to_string());
        }
        Ok(Self(map))
    }

    fn str(&self, key: &str) -> &str {
        self.0.get(key).map(String::as_str).expect("every key has a default")
    }

    fn scalar<V: FromStr>(&self, key: &str, what: &str) -> Result<V> {
        self.str(key)
            .parse()
            .map_err(|_| config_err(key, format!("expected {what}, got `{}`", self.str(key))))
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v: f64 = self.scalar(key, "a number")?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(config_err(key, format!("must be a finite number > 0, got {v}")))
        }
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v: usize = self.scalar(key, "a non-negative integer")?;
        if v > 0 {
            Ok(v)
        } else {
            Err(config_err(key, "must be > 0"))
        }
    }

    fn list<V, F: Fn(&str) -> std::result::Result<V, String>>(&self, key: &str, parse: F) -> Result<Vec<V>> {
        let raw = self.str(key);
        if raw.is_empty() {
            return Err(config_err(key, "list must not be empty"));
        }
        raw.split(',')
            .map(|item| parse(item.trim()).map_err(|m| config_err(key, m)))
            .collect()
    }

    fn dimensions(&self, key: &str) -> Result<Vec<Dimension>> {
        self.list(key, |s| {
            let n: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
            Dimension::new(n).map_err(|e| e.to_string())
        })
    }

    fn alphas(&self, key: &str) -> Result<Vec<AlphaSpec>> {
        self.list(key, AlphaSpec::from_str)
    }

    fn floats(&self, key: &str) -> Result<Vec<f64>> {
        self.list(key, |s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("`{s}` is not a finite number")),
        })
    }
}

/// `Re alpha > (1 - n)/2 + ALPHA_MARGIN` for every listed `alpha` and `n`.
fn check_alphas(key: &str, alphas: &[AlphaSpec], dims: &[Dimension]) -> Result<()> {
    for &n in dims {
        for &a in alphas {
            let v = a.resolve(n);
            let bound = (1.0 - n.get() as f64) / 2.0 + ALPHA_MARGIN;
            if !(v.re > bound) {
                return Err(config_err(
                    key,
                    format!("alpha {a} has Re alpha = {} but n = {n} needs Re alpha > {bound}", v.re),
                ));
            }
        }
    }
    Ok(())
}

fn check_ps(key: &str, ps: &[f64], lo: f64, hi: f64) -> Result<()> {
    match ps.iter().find(|&&p| !(p > lo && p <= hi)) {
        Some(p) => Err(config_err(key, format!("exponent {p} must lie in ({lo}, {hi}]"))),
        None => Ok(()),
    }
}

/// Parses, defaults and validates a configuration text.
pub fn validate_config(raw: &str) -> Result<ExperimentConfig> {
    let r = Raw::parse(raw)?;
    let grid = GridConfig {
        r_max: r.positive("grid.r_max")?,
        n_r: r.count("grid.n_r")?,
        lambda_max: r.positive("grid.lambda_max")?,
        n_lambda: r.count("grid.n_lambda")?,
    };
    let family = match r.str("family") {
        "default" => None,
        "" => return Err(config_err("family", "family must not be empty")),
        _ => Some(
            r.str("family")
                .split(',')
                .map(|s| s.parse::<MemberSpec>())
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let output_dir = match r.str("output.dir") {
        "" => return Err(config_err("output.dir", "must not be empty")),
        s => PathBuf::from(s),
    };

    let plancherel = PlancherelConfig {
        dimensions: r.dimensions("plancherel.dimensions")?,
        tolerance: r.positive("plancherel.tolerance")?,
    };

    let symbols = SymbolsConfig {
        dimensions: r.dimensions("symbols.dimensions")?,
        alphas: r.alphas("symbols.alphas")?,
        slack: r.positive("symbols.slack")?,
        lambda_max: r.positive("symbols.lambda_max")?,
        normalization_tolerance: r.positive("symbols.normalization_tolerance")?,
        density_tolerance: r.positive("symbols.density_tolerance")?,
        mass_tolerance: r.positive("symbols.mass_tolerance")?,
    };
    check_alphas("symbols.alphas", &symbols.alphas, &symbols.dimensions)?;

    let i3 = I3Config {
        dimensions: r.dimensions("i3.dimensions")?,
        alphas: r.alphas("i3.alphas")?,
        j: r.count("i3.j")?,
        lambda_max: r.positive("i3.lambda_max")?,
        tolerance: r.positive("i3.tolerance")?,
    };
    check_alphas("i3.alphas", &i3.alphas, &i3.dimensions)?;

    let kunze_stein = KunzeSteinConfig {
        dimensions: r.dimensions("kunze_stein.dimensions")?,
        ps: r.floats("kunze_stein.ps")?,
        slack: r.positive("kunze_stein.slack")?,
        ratio_tolerance: r.positive("kunze_stein.ratio_tolerance")?,
        summability_slack: r.positive("kunze_stein.summability_slack")?,
    };
    if let Some(p) = kunze_stein.ps.iter().find(|&&p| !(p > 1.0 && p < 2.0)) {
        return Err(config_err("kunze_stein.ps", format!("exponent {p} must lie in (1, 2)")));
    }

    let cz = CzConfig {
        dimensions: r.dimensions("cz.dimensions")?,
        alphas: r.floats("cz.alphas")?,
        slope_tolerance: r.positive("cz.slope_tolerance")?,
        drift_threshold: r.positive("cz.drift_threshold")?,
    };
    if let Some(a) = cz.alphas.iter().find(|&&a| !(a > 0.0)) {
        return Err(config_err("cz.alphas", format!("order {a} must be > 0")));
    }

    let maximal = MaximalConfig {
        dimensions: r.dimensions("maximal.dimensions")?,
        ps: r.floats("maximal.ps")?,
        alpha: r.scalar::<AlphaSpec>("maximal.alpha", "a complex order")?,
        j: r.count("maximal.j")?,
        k: r.count("maximal.k")?,
        stability_tolerance: r.positive("maximal.stability_tolerance")?,
    };
    check_alphas("maximal.alpha", &[maximal.alpha], &maximal.dimensions)?;
    check_ps("maximal.ps", &maximal.ps, 1.0, f64::INFINITY)?;

    let oracle = OracleConfig {
        dimensions: r.dimensions("oracle.dimensions")?,
        radii: r.floats("oracle.radii")?,
        alphas: r.alphas("oracle.alphas")?,
        r_max: r.positive("oracle.r_max")?,
        n_r: r.count("oracle.n_r")?,
        tolerance: r.positive("oracle.tolerance")?,
    };
    if let Some(t) = oracle.radii.iter().find(|&&t| !(t > 0.0)) {
        return Err(config_err("oracle.radii", format!("radius {t} must be > 0")));
    }
    for &n in &oracle.dimensions {
        if let Some(a) = oracle.alphas.iter().find(|a| !(a.resolve(n).re > 0.0)) {
            return Err(config_err(
                "oracle.alphas",
                format!("the kernel route needs Re alpha > 0, got {a} at n = {n}"),
            ));
        }
    }

    let region = RegionConfig {
        dimensions: r.dimensions("region.dimensions")?,
        samples: r.count("region.samples")?,
        tolerance: r.positive("region.tolerance")?,
    };
    if region.samples < 2 {
        return Err(config_err("region.samples", "need at least 2 samples"));
    }

    Ok(ExperimentConfig {
        grid,
        family,
        output_dir,
        plancherel,
        symbols,
        i3,
        kunze_stein,
        cz,
        maximal,
        oracle,
        region,
    })
}
