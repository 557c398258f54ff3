//! Runtime-selectable filter paradigms.
//!
//! Every fitting paradigm sits behind the [`FilterStrategy`] trait and is
//! registered by name, so configs and the CLI can select paradigms as plain
//! strings like `"mse"`, `"adv(0.375)"` or `"tsvd(8)"`. Hyperparameters are
//! given in parentheses; `adv` and `sc` default to β = 3/8 and β = 1/8,
//! which make the adversarial fits reproduce the textbook equivalences out
//! of the box.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::stochastics::{NoiseModel, NoiseSide, SpectrumProfile};

use super::{
    fit_adv, fit_mse, fit_post, fit_prox, fit_sc, pseudo_inverse_filter, truncated_svd_filter,
    Filter, Paradigm,
};

pub const DEFAULT_ADV_BETA: f64 = 0.375;
pub const DEFAULT_SC_BETA: f64 = 0.125;

/// A filter-fitting paradigm selectable at runtime.
pub trait FilterStrategy: Send + Sync {
    /// Registry name including hyperparameters, e.g. `"adv(0.375)"`.
    fn name(&self) -> String;

    fn paradigm(&self) -> Paradigm;

    /// The space the training noise must live in. Baselines that ignore the
    /// training noise accept either side.
    fn training_side(&self) -> NoiseSide;

    /// True if the fit actually consumes the training noise and data profile.
    fn is_data_driven(&self) -> bool {
        true
    }

    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter>;
}

struct Mse;
struct Prox;
struct Post;
struct Adv {
    beta: f64,
}
struct Sc {
    beta: f64,
}
struct Pinv;
struct Tsvd {
    k: usize,
}

impl FilterStrategy for Mse {
    fn name(&self) -> String {
        "mse".into()
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::Mse
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::YSide
    }
    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
        fit_mse(sigma, training, pi)
    }
}

impl FilterStrategy for Prox {
    fn name(&self) -> String {
        "prox".into()
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::Prox
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::XSide
    }
    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
        fit_prox(sigma, training, pi)
    }
}

impl FilterStrategy for Post {
    fn name(&self) -> String {
        "post".into()
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::Post
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::XSide
    }
    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
        fit_post(sigma, training, pi)
    }
}

impl FilterStrategy for Adv {
    fn name(&self) -> String {
        format!("adv({})", self.beta)
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::Adv { beta: self.beta }
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::YSide
    }
    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
        fit_adv(sigma, training, pi, self.beta)
    }
}

impl FilterStrategy for Sc {
    fn name(&self) -> String {
        format!("sc({})", self.beta)
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::Sc { beta: self.beta }
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::YSide
    }
    fn fit(&self, sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
        fit_sc(sigma, training, pi, self.beta)
    }
}

impl FilterStrategy for Pinv {
    fn name(&self) -> String {
        "pinv".into()
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::PseudoInverse
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::YSide
    }
    fn is_data_driven(&self) -> bool {
        false
    }
    fn fit(&self, sigma: &[f64], _training: &NoiseModel, _pi: &SpectrumProfile) -> Result<Filter> {
        pseudo_inverse_filter(sigma)
    }
}

impl FilterStrategy for Tsvd {
    fn name(&self) -> String {
        format!("tsvd({})", self.k)
    }
    fn paradigm(&self) -> Paradigm {
        Paradigm::TruncatedSvd { k: self.k }
    }
    fn training_side(&self) -> NoiseSide {
        NoiseSide::YSide
    }
    fn is_data_driven(&self) -> bool {
        false
    }
    fn fit(&self, sigma: &[f64], _training: &NoiseModel, _pi: &SpectrumProfile) -> Result<Filter> {
        truncated_svd_filter(sigma, self.k)
    }
}

type StrategyBuilder = fn(&str, &[f64]) -> Result<Box<dyn FilterStrategy>>;

/// Name-indexed registry of filter strategies.
pub struct StrategyRegistry {
    builders: BTreeMap<&'static str, StrategyBuilder>,
}

impl StrategyRegistry {
    /// Registry with the built-in paradigms.
    pub fn builtin() -> Self {
        let mut reg = Self {
            builders: BTreeMap::new(),
        };
        reg.register("mse", |name, args| {
            no_args(name, args)?;
            Ok(Box::new(Mse))
        });
        reg.register("prox", |name, args| {
            no_args(name, args)?;
            Ok(Box::new(Prox))
        });
        reg.register("post", |name, args| {
            no_args(name, args)?;
            Ok(Box::new(Post))
        });
        reg.register("adv", |name, args| {
            let beta = optional_beta(name, args, DEFAULT_ADV_BETA)?;
            Ok(Box::new(Adv { beta }))
        });
        reg.register("sc", |name, args| {
            let beta = optional_beta(name, args, DEFAULT_SC_BETA)?;
            Ok(Box::new(Sc { beta }))
        });
        reg.register("pinv", |name, args| {
            no_args(name, args)?;
            Ok(Box::new(Pinv))
        });
        reg.register("tsvd", |name, args| {
            if args.len() != 1 || args[0].fract() != 0.0 || args[0] < 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name}: tsvd needs one positive integer argument, e.g. tsvd(8)"
                )));
            }
            Ok(Box::new(Tsvd {
                k: args[0] as usize,
            }))
        });
        reg
    }

    pub fn register(&mut self, name: &'static str, builder: StrategyBuilder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    /// Parse `"name"` or `"name(arg, ...)"` into a strategy instance.
    pub fn parse(&self, text: &str) -> Result<Box<dyn FilterStrategy>> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            None => (text, Vec::new()),
            Some(open) => {
                let name = &text[..open];
                let rest = &text[open + 1..];
                let close = rest.rfind(')').ok_or_else(|| {
                    Error::InvalidParameter(format!("{text:?}: missing closing parenthesis"))
                })?;
                if !rest[close + 1..].trim().is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "{text:?}: trailing characters after argument list"
                    )));
                }
                let args = rest[..close]
                    .split(',')
                    .filter(|a| !a.trim().is_empty())
                    .map(|a| {
                        a.trim().parse::<f64>().map_err(|_| {
                            Error::InvalidParameter(format!(
                                "{text:?}: invalid numeric argument {a:?}"
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                (name, args)
            }
        };
        let builder = self
            .builders
            .get(name.trim())
            .ok_or_else(|| Error::UnknownParadigm {
                name: name.trim().to_string(),
            })?;
        builder(text, &args)
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn no_args(name: &str, args: &[f64]) -> Result<()> {
    if args.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name}: this paradigm takes no arguments"
        )))
    }
}

fn optional_beta(name: &str, args: &[f64], default: f64) -> Result<f64> {
    match args {
        [] => Ok(default),
        [beta] if *beta > 0.0 && beta.is_finite() => Ok(*beta),
        _ => Err(Error::InvalidParameter(format!(
            "{name}: expected a single positive beta argument"
        ))),
    }
}

/// Parse a paradigm name against the built-in registry.
pub fn parse_paradigm(text: &str) -> Result<Box<dyn FilterStrategy>> {
    StrategyRegistry::builtin().parse(text)
}
