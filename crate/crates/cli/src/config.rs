//! Run configuration: a TOML file whose sections and keys are all optional
//! and default to the built-in reference run. Unknown keys are errors.

use std::path::{Path, PathBuf};

use genfun_core::qft::Potential;
use genfun_core::quadrature::QuadOptions;
use genfun_core::{
    standard_test_suite, EpsilonGrid, GenNumber, Mollifier, MollifierKind, TestFunction, Thresholds,
    TransitionProblem,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config error: {0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mollifier: MollifierSection,
    pub grid: GridSection,
    pub suite: SuiteSection,
    pub tolerances: Tolerances,
    pub output: OutputSection,
    pub reproduce: ReproduceSection,
    pub qft: Vec<QftBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MollifierSection {
    /// `kind[:key=value,...]`, e.g. `cosine_power:exponent=4`.
    pub kind: String,
    pub radius: f64,
}

impl Default for MollifierSection {
    fn default() -> Self {
        Self { kind: "bump".into(), radius: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub eps0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = EpsilonGrid::default();
        Self { eps0: g.eps0(), ratio: g.ratio(), count: g.count() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteSection {
    pub count: usize,
    pub seed: u64,
}

impl Default for SuiteSection {
    fn default() -> Self {
        Self { count: 6, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub quadrature_abs: f64,
    pub quadrature_rel: f64,
    /// Exact identities such as ∫(H² − H)H' = −1/6.
    pub identity: f64,
    /// Extrapolated limits this close to zero vanish.
    pub limit: f64,
    pub supnorm: f64,
    pub decay_order: f64,
    pub infinite_order: f64,
    /// Relative, for the coefficient of an infinite quantity.
    pub coefficient: f64,
    pub unitarity: f64,
    pub completeness: f64,
    pub closed_form: f64,
    pub sweep_spread: f64,
    pub truncation: f64,
    pub finite_exponent: f64,
    pub min_fit_quality: f64,
    pub negligible_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let q = QuadOptions::default();
        let t = Thresholds::default();
        Self {
            quadrature_abs: q.abs_tol,
            quadrature_rel: q.rel_tol,
            identity: 1e-10,
            limit: 1e-8,
            supnorm: 1e-6,
            decay_order: 0.1,
            infinite_order: 0.05,
            coefficient: 0.01,
            unitarity: 1e-10,
            completeness: 1e-9,
            closed_form: 1e-8,
            sweep_spread: 1e-10,
            truncation: 1e-6,
            finite_exponent: t.finite_exponent,
            min_fit_quality: t.min_fit_quality,
            negligible_order: t.negligible_order,
        }
    }
}

impl Tolerances {
    pub fn quad(&self) -> QuadOptions {
        QuadOptions { abs_tol: self.quadrature_abs, rel_tol: self.quadrature_rel, ..QuadOptions::default() }
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            finite_exponent: self.finite_exponent,
            min_fit_quality: self.min_fit_quality,
            negligible_order: self.negligible_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReproduceSection {
    pub mollifiers: Vec<String>,
    /// `∫Hⁿ H'` is checked for `n = 1..=family_max_power`.
    pub family_max_power: u32,
}

impl Default for ReproduceSection {
    fn default() -> Self {
        Self {
            mollifiers: vec!["bump".into(), "cosine_power:exponent=4".into(), "truncated_gaussian:sigma=0.35".into()],
            family_max_power: 6,
        }
    }
}

/// `0.8`, `{ log_inverse = 0.1 }` (c·log(1/ε)) or `{ power = [c, a] }` (c·εᵃ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coupling {
    Constant(f64),
    LogInverse {
        log_inverse: f64,
    },
    Power {
        power: [f64; 2],
    },
}

impl Coupling {
    pub fn gen_number(&self) -> GenNumber {
        match *self {
            Coupling::Constant(c) => GenNumber::constant(c),
            Coupling::LogInverse { log_inverse } => GenNumber::log_inverse(log_inverse),
            Coupling::Power { power: [c, a] } => GenNumber::power(c, a),
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match *self {
            Coupling::Constant(c) => Some(c),
            _ => None,
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            Coupling::Constant(c) => c.is_finite(),
            Coupling::LogInverse { log_inverse } => log_inverse.is_finite(),
            Coupling::Power { power } => power.iter().all(|v| v.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DysonSection {
    pub max_order: usize,
    pub time_steps: usize,
    /// Defaults to the last entry of `times`.
    #[serde(default)]
    pub time: Option<f64>,
    /// Gate: some partial sum must misbehave.
    #[serde(default)]
    pub expect_divergence: bool,
    /// Gate: the highest partial sum must match the exact probability.
    #[serde(default)]
    pub agree_within: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// `sin²(g t)` for the two-level problem.
    Rabi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QftBlock {
    pub name: String,
    pub dimension: usize,
    #[serde(default = "one")]
    pub omega: f64,
    /// Coefficients of `(a + a†)^k`.
    #[serde(default)]
    pub potential: Option<Vec<f64>>,
    /// `[i, j, v]` entries, mirrored.
    #[serde(default)]
    pub explicit: Option<Vec<(usize, usize, f64)>>,
    pub coupling: Coupling,
    #[serde(default)]
    pub counterterm: Option<Coupling>,
    #[serde(default)]
    pub initial: usize,
    #[serde(default, rename = "final")]
    pub final_state: usize,
    pub times: Vec<f64>,
    /// Evaluate on every grid ε instead of the first only.
    #[serde(default)]
    pub sweep: bool,
    /// Extra truncations; rows are emitted for each.
    #[serde(default)]
    pub dimensions: Option<Vec<usize>>,
    #[serde(default)]
    pub dyson: Option<DysonSection>,
    #[serde(default)]
    pub closed_form: Option<ClosedForm>,
    #[serde(default)]
    pub expect_eps_independent: bool,
    /// Marks models that only stand in for the unspecified examples.
    #[serde(default)]
    pub note: Option<String>,
}

fn one() -> f64 {
    1.0
}

const STAND_IN: &str = "stand-in model: quartic anharmonic coupling, not a specific field theory";

impl QftBlock {
    fn rabi(name: &str, g: f64, times: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            dimension: 2,
            omega: 0.0,
            potential: None,
            explicit: Some(vec![(0, 1, 1.0)]),
            coupling: Coupling::Constant(g),
            counterterm: None,
            initial: 0,
            final_state: 1,
            times,
            sweep: false,
            dimensions: None,
            dyson: None,
            closed_form: Some(ClosedForm::Rabi),
            expect_eps_independent: false,
            note: None,
        }
    }

    fn quartic(name: &str, dimension: usize, coupling: Coupling) -> Self {
        Self {
            name: name.into(),
            dimension,
            omega: 1.0,
            potential: Some(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
            explicit: None,
            coupling,
            counterterm: None,
            initial: 0,
            final_state: 0,
            times: vec![1.0],
            sweep: false,
            dimensions: None,
            dyson: None,
            closed_form: None,
            expect_eps_independent: false,
            note: Some(STAND_IN.into()),
        }
    }

    pub fn potential(&self) -> Result<Potential, ConfigError> {
        match (&self.potential, &self.explicit) {
            (Some(c), None) => Ok(Potential::Polynomial(c.clone())),
            (None, Some(e)) => Ok(Potential::Explicit(e.clone())),
            _ => Err(bad(format!("qft block '{}': give exactly one of potential, explicit", self.name))),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.dimensions.clone().unwrap_or_else(|| vec![self.dimension])
    }

    /// Problem at the block's own dimension and time.
    pub fn problem(&self, dimension: usize, time: f64) -> Result<TransitionProblem, ConfigError> {
        use genfun_core::{FockSpec, InteractionSpec, StateVector};
        let err = |e: genfun_core::Error| bad(format!("qft block '{}': {e}", self.name));
        let mut interaction = InteractionSpec::new(self.potential()?, self.coupling.gen_number());
        if let Some(ct) = &self.counterterm {
            interaction = interaction.with_counterterm(ct.gen_number());
        }
        TransitionProblem::new(
            FockSpec::new(dimension, self.omega).map_err(err)?,
            interaction,
            StateVector::basis(dimension, self.initial).map_err(err)?,
            StateVector::basis(dimension, self.final_state).map_err(err)?,
            time,
        )
        .map_err(err)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let name = &self.name;
        if name.is_empty() || name.contains([',', '"', '\n']) {
            return Err(bad(format!("qft block name {name:?} must be nonempty without commas or quotes")));
        }
        if self.times.is_empty() {
            return Err(bad(format!("qft block '{name}': times is empty")));
        }
        if !self.coupling.is_finite() || !self.counterterm.is_none_or(|c| c.is_finite()) {
            return Err(bad(format!("qft block '{name}': coupling parameters must be finite")));
        }
        let dims = self.dims();
        if dims.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad(format!("qft block '{name}': dimensions must increase")));
        }
        for &n in &dims {
            for &t in &self.times {
                self.problem(n, t)?;
            }
        }
        if let Some(d) = &self.dyson {
            if d.max_order > genfun_core::qft::MAX_DYSON_ORDER {
                return Err(bad(format!("qft block '{name}': dyson max_order above {}", genfun_core::qft::MAX_DYSON_ORDER)));
            }
            if d.time_steps < genfun_core::qft::MIN_TIME_STEPS {
                return Err(bad(format!("qft block '{name}': dyson needs at least {} time steps", genfun_core::qft::MIN_TIME_STEPS)));
            }
            if d.time.is_some_and(|t| !t.is_finite()) {
                return Err(bad(format!("qft block '{name}': dyson time must be finite")));
            }
        }
        if self.closed_form == Some(ClosedForm::Rabi) && self.coupling.constant_value().is_none() {
            return Err(bad(format!("qft block '{name}': the Rabi check needs a constant coupling")));
        }
        Ok(())
    }

    pub fn dyson_time(&self) -> Option<f64> {
        self.dyson.as_ref().map(|d| d.time.unwrap_or(*self.times.last().unwrap()))
    }
}

pub fn default_qft_blocks() -> Vec<QftBlock> {
    let times = vec![0.3, 0.7, 1.1, 1.9, 2.6];
    let mut blocks: Vec<QftBlock> = [0.25, 0.5, 1.0, 2.0]
        .iter()
        .map(|&g| QftBlock::rabi(&format!("rabi_g{g}"), g, times.clone()))
        .collect();

    let mut small = QftBlock::rabi("rabi_small", 0.1, vec![1.0]);
    small.dyson = Some(DysonSection {
        max_order: 4,
        time_steps: 1000,
        time: None,
        expect_divergence: false,
        agree_within: Some(1e-5),
    });
    blocks.push(small);

    blocks.push(QftBlock {
        name: "displaced".into(),
        potential: Some(vec![0.0, 1.0]),
        coupling: Coupling::Constant(0.3),
        dimensions: Some(vec![8, 16, 24, 32, 64]),
        note: None,
        ..QftBlock::quartic("displaced", 24, Coupling::Constant(0.3))
    });

    let mut strong = QftBlock::quartic("quartic_strong", 20, Coupling::Constant(0.8));
    strong.dyson = Some(DysonSection {
        max_order: 12,
        time_steps: 10_000,
        time: None,
        expect_divergence: true,
        agree_within: None,
    });
    blocks.push(strong);

    let mut ct = QftBlock::quartic("quartic_counterterm", 12, Coupling::Constant(0.5));
    ct.counterterm = Some(Coupling::LogInverse { log_inverse: 1.0 });
    ct.sweep = true;
    ct.expect_eps_independent = true;
    blocks.push(ct);

    let mut growing = QftBlock::quartic("quartic_growing", 12, Coupling::LogInverse { log_inverse: 0.1 });
    growing.sweep = true;
    blocks.push(growing);

    let mut trunc = QftBlock::quartic("quartic_truncation", 8, Coupling::Constant(0.2));
    trunc.dimensions = Some((2..=12).map(|k| 4 * k).collect());
    blocks.push(trunc);
    blocks
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mollifier: MollifierSection::default(),
            grid: GridSection::default(),
            suite: SuiteSection::default(),
            tolerances: Tolerances::default(),
            output: OutputSection::default(),
            reproduce: ReproduceSection::default(),
            qft: default_qft_blocks(),
        }
    }
}

/// A mollifier with its label, as written in CSV rows.
#[derive(Clone)]
pub struct NamedMollifier {
    pub label: String,
    pub mollifier: Mollifier,
}

/// `kind[:key=value,...]` with keys `exponent`, `sigma`, `center`, `radius`.
pub fn parse_mollifier(spec: &str, default_radius: f64) -> Result<NamedMollifier, ConfigError> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), p),
        None => (spec.trim(), ""),
    };
    let mut exponent: Option<u32> = None;
    let mut sigma: Option<f64> = None;
    let mut center: Option<f64> = None;
    let mut radius = default_radius;
    for kv in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("mollifier parameter '{kv}' is not key=value")))?;
        let num = || v.trim().parse::<f64>().map_err(|_| bad(format!("mollifier parameter {k}: '{v}' is not a number")));
        match k.trim() {
            "exponent" => {
                exponent = Some(v.trim().parse().map_err(|_| bad(format!("mollifier exponent '{v}' is not a positive integer")))?)
            }
            "sigma" => sigma = Some(num()?),
            "center" => center = Some(num()?),
            "radius" => radius = num()?,
            other => return Err(bad(format!("unknown mollifier parameter '{other}'"))),
        }
    }
    let unexpected = |what: &str| bad(format!("mollifier '{name}' takes no parameter {what}"));
    let kind = match name {
        "bump" => {
            if exponent.is_some() || sigma.is_some() || center.is_some() {
                return Err(unexpected("other than radius"));
            }
            MollifierKind::Bump
        }
        "cosine_power" => {
            if sigma.is_some() || center.is_some() {
                return Err(unexpected("sigma/center"));
            }
            MollifierKind::CosinePower { exponent: exponent.unwrap_or(4) }
        }
        "truncated_gaussian" => {
            if exponent.is_some() {
                return Err(unexpected("exponent"));
            }
            MollifierKind::TruncatedGaussian { sigma: sigma.unwrap_or(0.35), center: center.unwrap_or(0.0) }
        }
        other => {
            return Err(bad(format!(
                "unknown mollifier kind '{other}' (expected bump, cosine_power, truncated_gaussian)"
            )))
        }
    };
    let mollifier = Mollifier::new(kind, radius).map_err(|e| bad(e.to_string()))?;
    let label = if radius == 1.0 {
        kind.to_string()
    } else if kind == MollifierKind::Bump {
        format!("bump:radius={radius}")
    } else {
        format!("{kind},radius={radius}")
    };
    Ok(NamedMollifier { label, mollifier })
}

/// `eps0,ratio,count`
pub fn parse_grid(spec: &str) -> Result<GridSection, ConfigError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad(format!("grid '{spec}' must be eps0,ratio,count")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("grid value '{s}' is not a number")));
    Ok(GridSection {
        eps0: num(parts[0])?,
        ratio: num(parts[1])?,
        count: parts[2].parse().map_err(|_| bad(format!("grid count '{}' is not an integer", parts[2])))?,
    })
}

/// Command-line settings that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub mollifiers: Vec<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(seed) = o.seed {
            self.suite.seed = seed;
        }
        if let Some(g) = &o.grid {
            self.grid = parse_grid(g)?;
        }
        if !o.mollifiers.is_empty() {
            self.mollifier.kind = o.mollifiers[0].clone();
            self.reproduce.mollifiers = o.mollifiers.clone();
        }
        if let Some(out) = &o.out {
            self.output.dir = out.clone();
        }
        Ok(())
    }

    /// Everything is checked here, before any computation starts.
    pub fn validate(&self) -> Result<Validated, ConfigError> {
        let grid = EpsilonGrid::new(self.grid.eps0, self.grid.ratio, self.grid.count).map_err(|e| bad(e.to_string()))?;
        let suite = standard_test_suite(self.suite.count, self.suite.seed).map_err(|e| bad(e.to_string()))?;
        let mollifier = parse_mollifier(&self.mollifier.kind, self.mollifier.radius)?;
        if self.reproduce.mollifiers.is_empty() {
            return Err(bad("reproduce.mollifiers is empty"));
        }
        let mollifiers = self
            .reproduce
            .mollifiers
            .iter()
            .map(|m| parse_mollifier(m, self.mollifier.radius))
            .collect::<Result<Vec<_>, _>>()?;
        let mut labels: Vec<&str> = mollifiers.iter().map(|m| m.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("reproduce.mollifiers lists a mollifier twice"));
        }
        let t = &self.tolerances;
        let all = [
            t.quadrature_abs, t.quadrature_rel, t.identity, t.limit, t.supnorm, t.decay_order, t.infinite_order,
            t.coefficient, t.unitarity, t.completeness, t.closed_form, t.sweep_spread, t.truncation,
            t.finite_exponent, t.min_fit_quality, t.negligible_order,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(bad("tolerances must be finite and non-negative"));
        }
        if t.quadrature_abs == 0.0 && t.quadrature_rel == 0.0 {
            return Err(bad("quadrature tolerances cannot both be zero"));
        }
        if self.reproduce.family_max_power == 0 {
            return Err(bad("reproduce.family_max_power must be at least 1"));
        }
        let mut names: Vec<&str> = self.qft.iter().map(|b| b.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("qft block names must be unique"));
        }
        for b in &self.qft {
            b.validate()?;
        }
        Ok(Validated { config: self.clone(), grid, suite, mollifier, mollifiers })
    }
}

/// A checked configuration with its derived objects.
#[derive(Clone)]
pub struct Validated {
    pub config: RunConfig,
    pub grid: EpsilonGrid,
    pub suite: Vec<TestFunction>,
    /// For `eval` and `classify`.
    pub mollifier: NamedMollifier,
    /// For `reproduce`.
    pub mollifiers: Vec<NamedMollifier>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_run() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn shipped_default_config_matches_builtin() {
        let text = include_str!("../../../configs/default.toml");
        assert_eq!(RunConfig::from_toml(text).unwrap(), RunConfig::default());
    }

    #[test]
    fn default_round_trips_through_toml() {
        let text = toml::to_string(&RunConfig::default()).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for text in [
            "[grid]\neps0 = 0.1\nstep = 2",
            "colour = 1",
            "[mollifier]\nkind = 'bump'\nwidth = 1",
            "[[qft]]\nname='a'\ndimension=2\ncoupling=1.0\ntimes=[1.0]\nexplicit=[[0,1,1.0]]\nbogus=1",
        ] {
            assert!(RunConfig::from_toml(text).is_err(), "{text}");
        }
    }

    #[test]
    fn couplings_parse_in_all_forms() {
        let text = r#"
            [[qft]]
            name = "a"
            dimension = 4
            potential = [0.0, 1.0]
            coupling = { log_inverse = 0.1 }
            counterterm = { power = [2.0, -1.0] }
            times = [1.0]
        "#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.qft[0].coupling, Coupling::LogInverse { log_inverse: 0.1 });
        assert_eq!(c.qft[0].counterterm, Some(Coupling::Power { power: [2.0, -1.0] }));
        c.validate().unwrap();
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut c = RunConfig::default();
        c.grid.count = 2;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.grid.eps0 = 1.0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.qft[0].explicit = Some(vec![(0, 5, 1.0)]);
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.qft[1].potential = Some(vec![1.0]);
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.qft[1].name = c.qft[0].name.clone();
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.reproduce.mollifiers.push("bump".into());
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.tolerances.identity = f64::NAN;
        assert!(c.validate().is_err());
    }

    #[test]
    fn mollifier_specs() {
        assert_eq!(parse_mollifier("bump", 1.0).unwrap().label, "bump");
        assert_eq!(parse_mollifier("cosine_power:exponent=6", 1.0).unwrap().label, "cosine_power:exponent=6");
        let m = parse_mollifier("truncated_gaussian:sigma=0.3,center=0.2,radius=2", 1.0).unwrap();
        assert_eq!(m.label, "truncated_gaussian:sigma=0.3,center=0.2,radius=2");
        assert_eq!(m.mollifier.support_radius(), 2.0);
        assert_eq!(parse_mollifier("bump:radius=0.5", 1.0).unwrap().label, "bump:radius=0.5");
        for bad in ["nope", "bump:sigma=1", "cosine_power:exponent=x", "cosine_power:exponent=0", "bump:radius=-1", "bump:r"] {
            assert!(parse_mollifier(bad, 1.0).is_err(), "{bad}");
        }
    }

    #[test]
    fn overrides() {
        let mut c = RunConfig::default();
        c.apply(&Overrides {
            seed: Some(7),
            grid: Some("0.25,0.25,8".into()),
            mollifiers: vec!["cosine_power:exponent=2".into()],
            out: Some("elsewhere".into()),
        })
        .unwrap();
        assert_eq!(c.suite.seed, 7);
        assert_eq!(c.grid, GridSection { eps0: 0.25, ratio: 0.25, count: 8 });
        assert_eq!(c.reproduce.mollifiers, vec!["cosine_power:exponent=2".to_string()]);
        assert_eq!(c.output.dir, PathBuf::from("elsewhere"));
        assert!(parse_grid("0.1,0.5").is_err());
        assert!(parse_grid("0.1,0.5,x").is_err());
    }
}
