//! Plain-text run configuration.
//!
//! The format is one `key = value` assignment per line, `#` starts a comment,
//! blank lines are ignored.  Unknown and duplicate keys are errors, so a
//! config never silently carries a misspelling, and every error cites its
//! line number.  Compound values use `preset:{arg, arg, ...}` with positional
//! arguments, for example `init_phi = tanh-bump:{0.5, 0.2, 0.9}`.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `dim` | space dimension, 1 or 2 | 1 |
//! | `length_x` | box edge along x | 1.0 |
//! | `length_y` | box edge along y (dim = 2 only) | 1.0 |
//! | `cutoff` | per-axis mode cutoff n | 16 |
//! | `quad_points` | per-axis quadrature points | 4(n+1) |
//! | `ell` | latent-heat coefficient ℓ, strictly positive | 1.0 |
//! | `Lambda` | θ–φ coupling weight Λ | 1.0 |
//! | `chi` | chemotaxis weight χ | 1.0 |
//! | `tau` | phase viscosity τ | 0.1 |
//! | `lambda_p` `lambda_a` `lambda_e` | proliferation, apoptosis, thermal damping rates | 0.0 |
//! | `lambda_c` `lambda_b` `lambda_d` | consumption, supply relaxation, uptake rates | 0.0 |
//! | `eps` | Yosida regularization level | 0.1 |
//! | `potential` | `quartic`, `linear`, or `zero` | `quartic` |
//! | `growth_shape` | `ramp`, `one`, or `zero` | `ramp` |
//! | `uptake_shape` | `clamp`, `one`, or `zero` | `clamp` |
//! | `heat_source` | `off`, `constant:{v}`, `gauss-bump:{center.., width, amp}`, `cosine-mode:{index, amp}` | `off` |
//! | `nutrient_supply` | same grammar as `heat_source` | `off` |
//! | `init_theta` `init_phi` `init_sigma` | `zero`, `mode:{index, amp}`, `tanh-bump:{center, width, amp}`, `random-band:{max_mode, amp, seed}` | `zero` |
//! | `scheme` | `imex1` or `rk4` | `imex1` |
//! | `dt` | step size | 1e-3 |
//! | `t_end` | final time | 1.0 |
//! | `monitor_every` | steps between records | 1 |
//! | `out` | output path prefix | `run` |
//! | `n_list` | cutoffs for the mode study, e.g. `8, 16, 32` | empty |
//! | `eps_list` | levels for the regularization study | empty |
//! | `delta_list` | sizes for the perturbation study | empty |
//! | `perturb` | subset of `theta0, phi0, sigma0, u` | all four |

use std::collections::HashMap;

use thiserror::Error;

use crate::basis::BoxDomain;
use crate::model::{InitialData, ModelError, SourceSpec};
use crate::potential::{GrowthShape, PotentialSpec, UptakeShape};
use crate::stepper::Scheme;
use crate::study::{PerturbTarget, RunSetup, StudyConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    Duplicate { line: usize, key: String, first: usize },
    #[error("line {line}: bad value for `{key}`: {message}")]
    BadValue { line: usize, key: String, message: String },
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

/// A parsed and validated configuration: the run itself plus the study lists
/// and the output prefix.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub study: StudyConfig,
    pub out_prefix: String,
}

impl RunConfig {
    pub fn setup(&self) -> &RunSetup {
        &self.study.setup
    }
}

const KNOWN_KEYS: [&str; 33] = [
    "dim",
    "length_x",
    "length_y",
    "cutoff",
    "quad_points",
    "ell",
    "Lambda",
    "chi",
    "tau",
    "lambda_p",
    "lambda_a",
    "lambda_e",
    "lambda_c",
    "lambda_b",
    "lambda_d",
    "eps",
    "potential",
    "growth_shape",
    "uptake_shape",
    "heat_source",
    "nutrient_supply",
    "init_theta",
    "init_phi",
    "init_sigma",
    "scheme",
    "dt",
    "t_end",
    "monitor_every",
    "out",
    "n_list",
    "eps_list",
    "delta_list",
    "perturb",
];

struct Entry {
    line: usize,
    value: String,
}

struct Table {
    entries: HashMap<String, Entry>,
}

impl Table {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }
}

fn scan(text: &str) -> Result<Table, ConfigError> {
    let mut entries: HashMap<String, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line, message: "empty key".into() });
        }
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.to_string() });
        }
        if let Some(prev) = entries.get(key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
                first: prev.line,
            });
        }
        entries.insert(key.to_string(), Entry { line, value: value.to_string() });
    }
    Ok(Table { entries })
}

fn bad(entry: &Entry, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { line: entry.line, key: key.to_string(), message: message.into() }
}

fn parse_f64(table: &mut Table, key: &str, default: f64) -> Result<f64, ConfigError> {
    match table.take(key) {
        None => Ok(default),
        Some(e) => e
            .value
            .parse::<f64>()
            .map_err(|_| bad(&e, key, format!("`{}` is not a number", e.value))),
    }
}

fn parse_usize(table: &mut Table, key: &str, default: usize) -> Result<usize, ConfigError> {
    match table.take(key) {
        None => Ok(default),
        Some(e) => e
            .value
            .parse::<usize>()
            .map_err(|_| bad(&e, key, format!("`{}` is not a nonnegative integer", e.value))),
    }
}

/// Split `preset:{a, b, c}` into the preset name and its argument list; a
/// bare `name` has no arguments.
fn split_preset<'v>(e: &'v Entry, key: &str) -> Result<(&'v str, Vec<&'v str>), ConfigError> {
    let v = e.value.as_str();
    match v.find(':') {
        None => Ok((v, Vec::new())),
        Some(pos) => {
            let name = &v[..pos];
            let rest = v[pos + 1..].trim();
            if !(rest.starts_with('{') && rest.ends_with('}')) {
                return Err(bad(e, key, format!("expected `{name}:{{...}}`, got `{v}`")));
            }
            let inner = &rest[1..rest.len() - 1];
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            Ok((name, args))
        }
    }
}

fn args_f64(e: &Entry, key: &str, args: &[&str]) -> Result<Vec<f64>, ConfigError> {
    args.iter()
        .map(|a| a.parse::<f64>().map_err(|_| bad(e, key, format!("`{a}` is not a number"))))
        .collect()
}

fn want_args(e: &Entry, key: &str, name: &str, got: usize, want: usize) -> Result<(), ConfigError> {
    if got == want {
        Ok(())
    } else {
        Err(bad(e, key, format!("`{name}` takes {want} argument(s), got {got}")))
    }
}

fn parse_source(table: &mut Table, key: &str, dim: usize) -> Result<SourceSpec, ConfigError> {
    let Some(e) = table.take(key) else { return Ok(SourceSpec::Off) };
    let (name, args) = split_preset(&e, key)?;
    match name {
        "off" => {
            want_args(&e, key, name, args.len(), 0)?;
            Ok(SourceSpec::Off)
        }
        "constant" => {
            want_args(&e, key, name, args.len(), 1)?;
            let v = args_f64(&e, key, &args)?;
            Ok(SourceSpec::Constant { value: v[0] })
        }
        "gauss-bump" => {
            // center coordinates (one per dimension), then width, amplitude.
            want_args(&e, key, name, args.len(), dim + 2)?;
            let v = args_f64(&e, key, &args)?;
            let center = if dim == 1 { [v[0], 0.0] } else { [v[0], v[1]] };
            let (width, amplitude) = (v[dim], v[dim + 1]);
            if !(width.is_finite() && width > 0.0) {
                return Err(bad(&e, key, "gauss-bump width must be positive"));
            }
            Ok(SourceSpec::GaussBump { center, width, amplitude })
        }
        "cosine-mode" => {
            want_args(&e, key, name, args.len(), 2)?;
            let index = args[0]
                .parse::<usize>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a mode index", args[0])))?;
            let amplitude = args[1]
                .parse::<f64>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a number", args[1])))?;
            Ok(SourceSpec::CosineMode { index, amplitude })
        }
        other => Err(bad(&e, key, format!("unknown source preset `{other}`"))),
    }
}

fn parse_init(table: &mut Table, key: &str) -> Result<InitialData, ConfigError> {
    let Some(e) = table.take(key) else { return Ok(InitialData::Zero) };
    let (name, args) = split_preset(&e, key)?;
    match name {
        "zero" => {
            want_args(&e, key, name, args.len(), 0)?;
            Ok(InitialData::Zero)
        }
        "mode" => {
            want_args(&e, key, name, args.len(), 2)?;
            let index = args[0]
                .parse::<usize>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a mode index", args[0])))?;
            let amplitude = args[1]
                .parse::<f64>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a number", args[1])))?;
            Ok(InitialData::Mode { index, amplitude })
        }
        "tanh-bump" => {
            want_args(&e, key, name, args.len(), 3)?;
            let v = args_f64(&e, key, &args)?;
            if !(v[1].is_finite() && v[1] > 0.0) {
                return Err(bad(&e, key, "tanh-bump width must be positive"));
            }
            Ok(InitialData::TanhBump { center: v[0], width: v[1], amplitude: v[2] })
        }
        "random-band" => {
            // The seed is a mandatory argument: random data without a seed
            // would break run-to-run determinism.
            want_args(&e, key, name, args.len(), 3)?;
            let max_mode = args[0]
                .parse::<usize>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a mode count", args[0])))?;
            let amplitude = args[1]
                .parse::<f64>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a number", args[1])))?;
            let seed = args[2]
                .parse::<u64>()
                .map_err(|_| bad(&e, key, format!("`{}` is not a seed", args[2])))?;
            Ok(InitialData::RandomBand { max_mode, amplitude, seed })
        }
        other => Err(bad(&e, key, format!("unknown initial-data preset `{other}`"))),
    }
}

fn parse_list_f64(table: &mut Table, key: &str) -> Result<Vec<f64>, ConfigError> {
    let Some(e) = table.take(key) else { return Ok(Vec::new()) };
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| bad(&e, key, format!("`{s}` is not a number"))))
        .collect()
}

fn parse_list_usize(table: &mut Table, key: &str) -> Result<Vec<usize>, ConfigError> {
    let Some(e) = table.take(key) else { return Ok(Vec::new()) };
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| bad(&e, key, format!("`{s}` is not an integer"))))
        .collect()
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut table = scan(text)?;

    let dim = match table.take("dim") {
        None => 1,
        Some(e) => match e.value.as_str() {
            "1" => 1,
            "2" => 2,
            other => return Err(bad(&e, "dim", format!("must be 1 or 2, got `{other}`"))),
        },
    };
    let length_x = parse_f64(&mut table, "length_x", 1.0)?;
    let length_y_entry = table.take("length_y");
    let domain = if dim == 1 {
        if let Some(e) = length_y_entry {
            return Err(bad(&e, "length_y", "only meaningful when dim = 2"));
        }
        BoxDomain::interval(length_x).map_err(ModelError::from)?
    } else {
        let length_y = match length_y_entry {
            None => 1.0,
            Some(e) => e
                .value
                .parse::<f64>()
                .map_err(|_| bad(&e, "length_y", format!("`{}` is not a number", e.value)))?,
        };
        BoxDomain::rectangle(length_x, length_y).map_err(ModelError::from)?
    };

    let cutoff = parse_usize(&mut table, "cutoff", 16)?;
    let quad_points = match table.take("quad_points") {
        None => None,
        Some(e) => Some(
            e.value
                .parse::<usize>()
                .map_err(|_| bad(&e, "quad_points", format!("`{}` is not an integer", e.value)))?,
        ),
    };

    let mut params = crate::model::ModelParams {
        ell: parse_f64(&mut table, "ell", 1.0)?,
        big_lambda: parse_f64(&mut table, "Lambda", 1.0)?,
        chi: parse_f64(&mut table, "chi", 1.0)?,
        tau: parse_f64(&mut table, "tau", 0.1)?,
        lambda_p: parse_f64(&mut table, "lambda_p", 0.0)?,
        lambda_a: parse_f64(&mut table, "lambda_a", 0.0)?,
        lambda_e: parse_f64(&mut table, "lambda_e", 0.0)?,
        lambda_c: parse_f64(&mut table, "lambda_c", 0.0)?,
        lambda_b: parse_f64(&mut table, "lambda_b", 0.0)?,
        lambda_d: parse_f64(&mut table, "lambda_d", 0.0)?,
        ..Default::default()
    };
    params.yosida = crate::potential::YosidaConfig::with_eps(parse_f64(&mut table, "eps", 0.1)?);

    params.potential = match table.take("potential") {
        None => PotentialSpec::Quartic,
        Some(e) => match e.value.as_str() {
            "quartic" => PotentialSpec::Quartic,
            "linear" => PotentialSpec::Linear,
            "zero" => PotentialSpec::Zero,
            other => {
                return Err(bad(&e, "potential", format!("unknown potential preset `{other}`")))
            }
        },
    };
    params.nonlin.h = match table.take("growth_shape") {
        None => GrowthShape::Ramp,
        Some(e) => match e.value.as_str() {
            "ramp" => GrowthShape::Ramp,
            "one" => GrowthShape::One,
            "zero" => GrowthShape::Zero,
            other => return Err(bad(&e, "growth_shape", format!("unknown shape `{other}`"))),
        },
    };
    params.nonlin.k = match table.take("uptake_shape") {
        None => UptakeShape::Clamp,
        Some(e) => match e.value.as_str() {
            "clamp" => UptakeShape::Clamp,
            "one" => UptakeShape::One,
            "zero" => UptakeShape::Zero,
            other => return Err(bad(&e, "uptake_shape", format!("unknown shape `{other}`"))),
        },
    };
    params.heat_source = parse_source(&mut table, "heat_source", dim)?;
    params.nutrient_supply = parse_source(&mut table, "nutrient_supply", dim)?;

    let init_theta = parse_init(&mut table, "init_theta")?;
    let init_phi = parse_init(&mut table, "init_phi")?;
    let init_sigma = parse_init(&mut table, "init_sigma")?;

    let scheme = match table.take("scheme") {
        None => Scheme::Imex1,
        Some(e) => match e.value.as_str() {
            "imex1" => Scheme::Imex1,
            "rk4" => Scheme::Rk4,
            other => return Err(bad(&e, "scheme", format!("unknown scheme `{other}`"))),
        },
    };
    let stepper = crate::stepper::StepperConfig {
        scheme,
        dt: parse_f64(&mut table, "dt", 1e-3)?,
        t_end: parse_f64(&mut table, "t_end", 1.0)?,
        monitor_every: parse_usize(&mut table, "monitor_every", 1)?,
    };

    let out_prefix = match table.take("out") {
        None => "run".to_string(),
        Some(e) => e.value,
    };

    let n_list = parse_list_usize(&mut table, "n_list")?;
    let eps_list = parse_list_f64(&mut table, "eps_list")?;
    let delta_list = parse_list_f64(&mut table, "delta_list")?;
    let perturb = match table.take("perturb") {
        None => StudyConfig::default().perturb,
        Some(e) => {
            let mut targets = Vec::new();
            for part in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                targets.push(match part {
                    "theta0" => PerturbTarget::Theta0,
                    "phi0" => PerturbTarget::Phi0,
                    "sigma0" => PerturbTarget::Sigma0,
                    "u" => PerturbTarget::HeatSource,
                    other => {
                        return Err(bad(
                            &e,
                            "perturb",
                            format!("unknown target `{other}` (expected theta0, phi0, sigma0, u)"),
                        ))
                    }
                });
            }
            if targets.is_empty() {
                return Err(bad(&e, "perturb", "needs at least one target"));
            }
            targets
        }
    };

    // The sign hypotheses are re-checked here so a bad config dies at parse
    // time with the hypothesis named, not later inside a run.
    params.validate()?;

    let setup = RunSetup {
        domain,
        cutoff,
        quad_points,
        params,
        init_theta,
        init_phi,
        init_sigma,
        stepper,
    };
    Ok(RunConfig {
        study: StudyConfig { setup, n_list, eps_list, delta_list, perturb },
        out_prefix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_yields_the_documented_defaults() {
        let cfg = parse_config("").unwrap();
        let s = cfg.setup();
        assert_eq!(s.domain.dim(), 1);
        assert_eq!(s.cutoff, 16);
        assert_eq!(s.quad_points, None);
        assert_eq!(s.params.ell, 1.0);
        assert_eq!(s.params.tau, 0.1);
        assert_eq!(s.params.yosida.eps, 0.1);
        assert!(matches!(s.params.potential, PotentialSpec::Quartic));
        assert!(matches!(s.init_phi, InitialData::Zero));
        assert_eq!(s.stepper.dt, 1e-3);
        assert_eq!(s.stepper.monitor_every, 1);
        assert_eq!(cfg.out_prefix, "run");
        assert_eq!(cfg.study.perturb.len(), 4);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "\n# a comment\n  cutoff = 8   # trailing comment\n\n dt = 0.01\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.setup().cutoff, 8);
        assert_eq!(cfg.setup().stepper.dt, 0.01);
    }

    #[test]
    fn unknown_keys_are_rejected_with_the_line_number() {
        let err = parse_config("cutoff = 8\ncutofff = 9\n").unwrap_err();
        match err {
            ConfigError::UnknownKey { line, key } => {
                assert_eq!(line, 2);
                assert_eq!(key, "cutofff");
            }
            other => panic!("expected UnknownKey, got {other}"),
        }
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = parse_config("dt = 0.1\ndt = 0.2\n").unwrap_err();
        assert!(matches!(err, ConfigError::Duplicate { line: 2, first: 1, .. }));
    }

    #[test]
    fn negative_chi_cites_the_hypothesis() {
        let err = parse_config("chi = -1\n").unwrap_err();
        assert!(err.to_string().contains("(H1)"), "message was: {err}");
    }

    #[test]
    fn presets_parse_with_positional_arguments() {
        let text = "init_phi = random-band:{4, 0.1, 42}\n\
                    init_theta = tanh-bump:{0.5, 0.2, 0.9}\n\
                    heat_source = cosine-mode:{1, 0.25}\n\
                    nutrient_supply = gauss-bump:{0.5, 0.1, 2.0}\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(
            cfg.setup().init_phi,
            InitialData::RandomBand { max_mode: 4, amplitude: 0.1, seed: 42 }
        );
        assert!(matches!(
            cfg.setup().params.heat_source,
            SourceSpec::CosineMode { index: 1, .. }
        ));
        assert!(matches!(
            cfg.setup().params.nutrient_supply,
            SourceSpec::GaussBump { width, .. } if width == 0.1
        ));
    }

    #[test]
    fn parsing_twice_gives_identical_results() {
        let text = "cutoff = 12\ninit_phi = random-band:{4, 0.1, 42}\ndt = 2e-3\n";
        let a = parse_config(text).unwrap();
        let b = parse_config(text).unwrap();
        assert_eq!(a.setup().init_phi, b.setup().init_phi);
        assert_eq!(a.setup().stepper.dt, b.setup().stepper.dt);
    }

    #[test]
    fn length_y_requires_two_dimensions() {
        let err = parse_config("length_y = 2.0\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { .. }));
        let cfg = parse_config("dim = 2\nlength_y = 2.0\n").unwrap();
        assert_eq!(cfg.setup().domain.lengths(), vec![1.0, 2.0]);
    }

    #[test]
    fn study_lists_parse() {
        let text = "n_list = 8, 16, 32\neps_list = 0.2, 0.1\ndelta_list = 1e-2, 1e-3\nperturb = theta0, u\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.study.n_list, vec![8, 16, 32]);
        assert_eq!(cfg.study.eps_list, vec![0.2, 0.1]);
        assert_eq!(cfg.study.delta_list, vec![1e-2, 1e-3]);
        assert_eq!(
            cfg.study.perturb,
            vec![PerturbTarget::Theta0, PerturbTarget::HeatSource]
        );
    }

    #[test]
    fn gauss_bump_takes_an_extra_center_coordinate_in_two_dimensions() {
        let cfg = parse_config("dim = 2\nheat_source = gauss-bump:{0.3, 0.7, 0.1, 1.5}\n").unwrap();
        match &cfg.setup().params.heat_source {
            SourceSpec::GaussBump { center, width, amplitude } => {
                assert_eq!(*center, [0.3, 0.7]);
                assert_eq!(*width, 0.1);
                assert_eq!(*amplitude, 1.5);
            }
            other => panic!("unexpected source {other:?}"),
        }
        let err = parse_config("heat_source = gauss-bump:{0.3, 0.7, 0.1, 1.5}\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { .. }));
    }
}
