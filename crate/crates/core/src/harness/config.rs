//! Declarative experiment description, read from TOML.
//!
//! ```toml
//! seed = 0
//!
//! [domain]
//! kind = "disk"          # or "box" with lo = [..], hi = [..]
//! dim = 2
//! radius = 1.0
//! h = 0.015625
//!
//! [phi]
//! kind = "power_sum"     # also "log_perturbed", "two_dim_coupled"
//! p = [2.0, 2.0]
//! lambda = [1.0, 1.0]
//!
//! [data]
//! f = "1"                # expression, or { file = "f.csv" }
//! g = ["0", "0"]
//!
//! [constants]
//! c1 = 1.0
//! c2 = 1.0
//! g_variant = "pseudo"   # or "conservative"
//!
//! [[checks]]
//! kind = "comparison"
//! threshold = 1.05
//!
//! [[norms]]
//! name = "u_l2"
//! of = "u"
//! norm = { kind = "lorentz", p = 2, q = 2 }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::expr::Expr;
use crate::error::{invalid, Error, Result};
use crate::norms::{LorentzZygmund, NormSpec};
use crate::pde::SolveOptions;
use crate::rearrange::GridFunction;
use crate::verify::{GVariant, RegularityCase};
use crate::young::{OneDimYoung, YoungSpec};

/// Fewest interior cells allowed along any axis.
pub const MIN_INTERIOR_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// seed for random test fields
    #[serde(default)]
    pub seed: u64,
    pub domain: Domain,
    pub phi: PhiConfig,
    pub data: DataConfig,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub solver: SolveOptions,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub norms: Vec<NormConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    /// directory that relative data files resolve against
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Domain {
    Disk { dim: usize, radius: f64, h: f64 },
    /// a cube; one cell is centred on every lattice node and boundary nodes carry zero
    Box { lo: Vec<f64>, hi: Vec<f64>, h: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiConfig {
    PowerSum { p: Vec<f64>, lambda: Vec<f64> },
    LogPerturbed { p: Vec<f64>, alpha: Vec<f64>, c: f64 },
    TwoDimCoupled { alpha: f64, beta: f64, delta: f64, c: f64 },
}

/// An expression string or a grid file written by `GridFunction::to_csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Expr(String),
    File { file: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub f: Source,
    /// one component per axis, or empty for `g = 0`
    #[serde(default)]
    pub g: Vec<Source>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub g_variant: GVariant,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            g_variant: GVariant::Pseudo,
        }
    }
}

fn comparison_threshold() -> f64 {
    1.05
}

fn slack() -> f64 {
    0.05
}

fn stable_factor() -> f64 {
    1.25
}

fn infinite() -> f64 {
    f64::INFINITY
}

fn is_infinite(x: &f64) -> bool {
    x.is_infinite()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckConfig {
    /// `sup u*/v <= threshold`
    Comparison {
        #[serde(default = "comparison_threshold")]
        threshold: f64,
    },
    /// `int Phi(grad u) <= (1 + slack) int Phi_diamond(|grad v|)`
    GradientEstimate {
        #[serde(default = "slack")]
        slack: f64,
    },
    /// on the solution, or on `random_fields` band-limited fields when positive
    PolyaSzego {
        #[serde(default = "slack")]
        slack: f64,
        #[serde(default)]
        random_fields: usize,
    },
    /// empirical constant of the regularity bound; passes when finite and at most `max_constant`
    Regularity {
        case: RegularityCase,
        m: f64,
        sigma: f64,
        #[serde(default)]
        r: Vec<f64>,
        #[serde(default)]
        s: Vec<f64>,
        #[serde(default = "infinite", skip_serializing_if = "is_infinite")]
        max_constant: f64,
    },
    /// truncations of `|x|^-gamma`; replaces `data.f`
    Distributional {
        gamma: f64,
        m: f64,
        levels: Vec<f64>,
        #[serde(default = "stable_factor")]
        stable_factor: f64,
    },
    /// `max |u - exact| <= tol` on the domain cells
    SolverError { exact: String, tol: f64 },
}

impl CheckConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CheckConfig::Comparison { .. } => "comparison",
            CheckConfig::GradientEstimate { .. } => "gradient_estimate",
            CheckConfig::PolyaSzego { .. } => "polya_szego",
            CheckConfig::Regularity { .. } => "regularity",
            CheckConfig::Distributional { .. } => "distributional",
            CheckConfig::SolverError { .. } => "solver_error",
        }
    }
}

/// A number or the word `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Num(f64),
    Word(String),
}

impl Exponent {
    pub fn value(&self) -> Result<f64> {
        match self {
            Exponent::Num(x) => Ok(*x),
            Exponent::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Exponent::Word(w) => invalid(format!("exponent must be a number or \"inf\", got {w:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormKind {
    Lorentz {
        p: Exponent,
        q: Exponent,
    },
    LorentzZygmund {
        p: Exponent,
        q: Exponent,
        alpha: f64,
        #[serde(default)]
        beta: f64,
    },
    /// Luxemburg norm for `A(s) = coef s^power`
    Orlicz {
        power: f64,
        #[serde(default = "one")]
        coef: f64,
    },
    OrliczLorentz {
        power: f64,
        #[serde(default = "one")]
        coef: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl NormKind {
    pub fn to_spec(&self, dim: usize) -> Result<NormSpec> {
        Ok(match self {
            NormKind::Lorentz { p, q } => NormSpec::lorentz(p.value()?, q.value()?),
            NormKind::LorentzZygmund { p, q, alpha, beta } => {
                NormSpec::LorentzZygmund(LorentzZygmund::new(p.value()?, q.value()?, *alpha, *beta)?)
            }
            NormKind::Orlicz { power, coef } => NormSpec::Orlicz(OneDimYoung::power(*coef, *power)?),
            NormKind::OrliczLorentz { power, coef } => NormSpec::OrliczLorentz {
                a: OneDimYoung::power(*coef, *power)?,
                dim,
            },
        })
    }
}

/// Field a norm is taken of: `u`, `f`, or `g1`..`gN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub name: String,
    #[serde(default = "default_target")]
    pub of: String,
    pub norm: NormKind,
}

fn default_target() -> String {
    "u".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

/// `(line, column)`, both from 1, of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Grid cells per axis for a length and spacing; the spacing must divide the length.
fn cells(length: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) || !h.is_finite() {
        return invalid(format!("resolution h must be positive, got {h}"));
    }
    let n = (length / h).round();
    if n < 1.0 || ((n * h - length) / length).abs() > 1e-9 {
        return invalid(format!("resolution h = {h} does not divide the extent {length}"));
    }
    Ok(n as usize)
}

impl ExperimentConfig {
    /// Parses and validates TOML text.
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml_str(&text, base)
    }

    /// Canonical TOML: fixed key order, defaults spelled out.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config fields are TOML-representable")
    }

    /// SHA-256 of the canonical text, lowercase hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn dim(&self) -> usize {
        match &self.domain {
            Domain::Disk { dim, .. } => *dim,
            Domain::Box { lo, .. } => lo.len(),
        }
    }

    /// Exponents and weights of the power-sum integrand.
    pub fn power_sum(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match &self.phi {
            PhiConfig::PowerSum { p, lambda } => Ok((p.clone(), lambda.clone())),
            _ => Err(Error::Unsupported(
                "only the power-sum integrand is solved; other kinds are available to symmetrize".into(),
            )),
        }
    }

    pub fn young_spec(&self) -> Result<YoungSpec> {
        match &self.phi {
            PhiConfig::PowerSum { p, lambda } => YoungSpec::power_sum(p.clone(), lambda.clone()),
            PhiConfig::LogPerturbed { p, alpha, c } => YoungSpec::log_perturbed(p.clone(), alpha.clone(), *c),
            PhiConfig::TwoDimCoupled { alpha, beta, delta, c } => {
                YoungSpec::two_dim_coupled(*alpha, *beta, *delta, *c)
            }
        }
    }

    /// Empty grid of the domain.
    pub fn grid(&self) -> Result<GridFunction> {
        match &self.domain {
            Domain::Disk { dim, radius, h } => {
                if !(*radius > 0.0) {
                    return invalid("disk radius must be positive");
                }
                let n = cells(2.0 * radius, *h)?;
                if n < MIN_INTERIOR_CELLS {
                    return invalid(format!(
                        "resolution gives {n} cells across the disk; at least {MIN_INTERIOR_CELLS} are required"
                    ));
                }
                GridFunction::ball(*dim, *radius, n)
            }
            Domain::Box { lo, hi, h } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return invalid("box bounds lo and hi need one entry per axis");
                }
                let counts = lo
                    .iter()
                    .zip(hi)
                    .map(|(a, b)| if b > a { cells(b - a, *h) } else { invalid("box needs hi > lo on every axis") })
                    .collect::<Result<Vec<_>>>()?;
                if counts.iter().any(|&k| k != counts[0]) {
                    return invalid("box sides must have equal length");
                }
                if counts[0] - 1 < MIN_INTERIOR_CELLS {
                    return invalid(format!(
                        "resolution gives {} interior cells per axis; at least {MIN_INTERIOR_CELLS} are required",
                        counts[0] - 1
                    ));
                }
                GridFunction::vertex_box(lo, hi, counts[0])
            }
        }
    }

    /// Evaluates a data source on the domain grid.
    pub fn field(&self, src: &Source, grid: &GridFunction) -> Result<GridFunction> {
        match src {
            Source::Expr(e) => {
                let e = Expr::parse(e, grid.dim())?;
                Ok(grid.with_fn(|x| e.eval(x)))
            }
            Source::File { file } => {
                let g = GridFunction::from_csv(&std::fs::read_to_string(self.base_dir.join(file))?)?;
                if !g.same_skeleton(grid) {
                    return invalid(format!("grid file {file} does not match the domain grid"));
                }
                g.validate()?;
                Ok(g)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if i64::try_from(self.seed).is_err() {
            return invalid(format!("seed {} exceeds the TOML integer range", self.seed));
        }
        let dim = self.dim();
        if dim == 0 {
            return invalid("domain dimension must be positive");
        }
        self.grid()?;
        match &self.phi {
            PhiConfig::PowerSum { p, lambda } => {
                if p.len() != dim || lambda.len() != dim {
                    return invalid(format!(
                        "phi.p and phi.lambda need {dim} entries, got {} and {}",
                        p.len(),
                        lambda.len()
                    ));
                }
            }
            PhiConfig::LogPerturbed { p, alpha, .. } => {
                if p.len() != dim || alpha.len() != dim {
                    return invalid(format!("phi.p and phi.alpha need {dim} entries"));
                }
            }
            PhiConfig::TwoDimCoupled { .. } => {
                if dim != 2 {
                    return invalid("two_dim_coupled needs a two-dimensional domain");
                }
            }
        }
        if !self.data.g.is_empty() && self.data.g.len() != dim {
            return invalid(format!("data.g needs {dim} components or none, got {}", self.data.g.len()));
        }
        for src in std::iter::once(&self.data.f).chain(&self.data.g) {
            match src {
                Source::Expr(e) => {
                    Expr::parse(e, dim)?;
                }
                Source::File { file } => {
                    if !self.base_dir.join(file).is_file() {
                        return invalid(format!("data file {file} does not exist"));
                    }
                }
            }
        }
        if !(self.constants.c1 > 0.0 && self.constants.c2 > 0.0) {
            return invalid("constants c1 and c2 must be positive");
        }
        for c in &self.checks {
            match c {
                CheckConfig::Comparison { threshold } if !(*threshold > 0.0) => {
                    return invalid("comparison threshold must be positive")
                }
                CheckConfig::GradientEstimate { slack } | CheckConfig::PolyaSzego { slack, .. } if !(*slack >= 0.0) => {
                    return invalid("slack must be non-negative")
                }
                CheckConfig::Distributional { levels, .. } if levels.is_empty() => {
                    return invalid("distributional check needs at least one truncation level")
                }
                CheckConfig::SolverError { exact, .. } => {
                    Expr::parse(exact, dim)?;
                }
                _ => {}
            }
        }
        for n in &self.norms {
            n.norm.to_spec(dim)?;
            let ok = n.of == "u"
                || n.of == "f"
                || n.of
                    .strip_prefix('g')
                    .and_then(|k| k.parse::<usize>().ok())
                    .is_some_and(|k| k >= 1 && k <= self.data.g.len());
            if !ok {
                return invalid(format!("norm {:?} targets unknown field {:?}", n.name, n.of));
            }
        }
        Ok(())
    }

    /// Copy with the scalar at a dotted key path (array entries by index,
    /// e.g. `phi.p.1`) replaced by `value`.
    pub fn with_scalar(&self, path: &str, value: f64) -> Result<Self> {
        let mut doc = toml::Value::try_from(self).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut cur = &mut doc;
        for key in path.split('.') {
            cur = match cur {
                toml::Value::Table(t) => t.get_mut(key),
                toml::Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
                _ => None,
            }
            .ok_or_else(|| Error::InvalidInput(format!("sweep axis {path:?} is not a config key")))?;
        }
        match cur {
            toml::Value::Float(_) | toml::Value::Integer(_) => *cur = toml::Value::Float(value),
            _ => return invalid(format!("sweep axis {path:?} does not name a scalar number")),
        }
        let text = toml::to_string(&doc).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::from_toml_str(&text, self.base_dir.clone())
    }

    /// Output directory, resolved against the working directory.
    pub fn output_dir(&self) -> PathBuf {
        PathBuf::from(&self.output.dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORSION: &str = r#"
[domain]
kind = "disk"
dim = 2
radius = 1.0
h = 0.0625

[phi]
kind = "power_sum"
p = [2, 2]
lambda = [1, 1]

[data]
f = "1"

[[checks]]
kind = "comparison"

[[norms]]
name = "sup"
norm = { kind = "lorentz", p = "inf", q = "inf" }
"#;

    #[test]
    fn canonical_text_round_trips_byte_identically() {
        let cfg = ExperimentConfig::from_toml_str(TORSION, ".").unwrap();
        let text = cfg.canonical();
        let again = ExperimentConfig::from_toml_str(&text, ".").unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.canonical(), text);
        assert_eq!(again.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 64);
    }

    #[test]
    fn defaults_are_filled_in() {
        let cfg = ExperimentConfig::from_toml_str(TORSION, ".").unwrap();
        assert_eq!(cfg.checks[0], CheckConfig::Comparison { threshold: 1.05 });
        assert_eq!(cfg.constants, Constants::default());
        assert_eq!(cfg.solver, SolveOptions::default());
        assert_eq!(cfg.norms[0].of, "u");
        assert_eq!(cfg.grid().unwrap().n, vec![32, 32]);
    }

    #[test]
    fn parse_errors_report_line_and_column() {
        let bad = TORSION.replace("radius = 1.0", "radius = = 1.0");
        match ExperimentConfig::from_toml_str(&bad, ".") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (5, 10)),
            other => panic!("{other:?}"),
        }
        let bad = TORSION.replace("f = \"1\"", "f = \"1 +\"");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad, "."), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_names_the_broken_invariant() {
        let msg = |text: String| ExperimentConfig::from_toml_str(&text, ".").unwrap_err().to_string();
        assert!(msg(TORSION.replace("p = [2, 2]", "p = [2]")).contains("phi.p"));
        assert!(msg(TORSION.replace("h = 0.0625", "h = 0.25")).contains("at least 16"));
        assert!(msg(TORSION.replace("h = 0.0625", "h = 0.3")).contains("does not divide"));
        assert!(msg(TORSION.replace("f = \"1\"", "f = { file = \"missing.csv\" }")).contains("does not exist"));
        assert!(msg(TORSION.replace("name = \"sup\"", "name = \"sup\"\nof = \"g1\"")).contains("unknown field"));
    }

    #[test]
    fn sweep_axes_replace_scalars() {
        let cfg = ExperimentConfig::from_toml_str(TORSION, ".").unwrap();
        let c = cfg.with_scalar("domain.h", 1.0 / 32.0).unwrap();
        assert_eq!(c.grid().unwrap().n, vec![64, 64]);
        let c = cfg.with_scalar("phi.p.1", 3.0).unwrap();
        assert_eq!(c.power_sum().unwrap().0, vec![2.0, 3.0]);
        assert!(cfg.with_scalar("domain.kind", 1.0).is_err());
        assert!(cfg.with_scalar("domain.nope", 1.0).is_err());
        assert_ne!(c.hash(), cfg.hash());
    }

    #[test]
    fn box_domains_use_vertex_grids() {
        let text = TORSION
            .replace("kind = \"disk\"\ndim = 2\nradius = 1.0", "kind = \"box\"\nlo = [0, 0]\nhi = [1, 1]")
            .replace("h = 0.0625", "h = 0.03125");
        let cfg = ExperimentConfig::from_toml_str(&text, ".").unwrap();
        let g = cfg.grid().unwrap();
        assert_eq!(g.n, vec![33, 33]);
        assert_eq!(g.masked_count(), 31 * 31);
    }
}
