//! Optimizer registry addressable by name with `key=value` overrides.

use std::collections::BTreeMap;

use crate::baselines::{De, DeParams, Pso, PsoParams, RandomSearch};
use crate::embgo::{Embgo, EmbgoParams};
use crate::error::{Error, Result};
use crate::levy::LevyParams;
use crate::mbgo::Mbgo;
use crate::run::Optimizer;

pub const ALGORITHM_NAMES: [&str; 5] = ["embgo", "mbgo", "de", "pso", "random"];

/// An optimizer together with its fully resolved parameter set.
pub struct ResolvedAlgorithm {
    pub name: String,
    /// Every parameter, defaults included, as printed values.
    pub params: BTreeMap<String, String>,
    pub optimizer: Box<dyn Optimizer>,
}

impl std::fmt::Debug for ResolvedAlgorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResolvedAlgorithm")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

struct Overrides<'a> {
    algorithm: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Overrides<'a> {
    fn new(algorithm: &'a str, params: &'a [(String, String)]) -> Self {
        Self {
            algorithm,
            values: params
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect(),
        }
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.values.remove(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                Error::InvalidConfig(format!("{}: cannot parse {key}={raw}", self.algorithm))
            }),
        }
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::InvalidConfig(format!(
                "{} has no parameter '{k}'",
                self.algorithm
            ))),
        }
    }
}

/// Parameter keys accepted by `name`.
pub fn parameter_keys(name: &str) -> Result<&'static [&'static str]> {
    Ok(match name {
        "embgo" => &["beta", "shared_r"],
        "mbgo" => &["movement", "battle"],
        "de" => &["f", "cr"],
        "pso" => &["w", "c1", "c2", "v_max"],
        "random" => &[],
        _ => {
            return Err(Error::Unknown {
                kind: "algorithm",
                name: name.to_string(),
            })
        }
    })
}

/// Builds an optimizer by name. Unknown names or parameter keys are errors.
pub fn build_optimizer(name: &str, params: &[(String, String)]) -> Result<ResolvedAlgorithm> {
    parameter_keys(name)?;
    let mut o = Overrides::new(name, params);
    let mut resolved = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        resolved.insert(k.to_string(), v);
    };
    let optimizer: Box<dyn Optimizer> = match name {
        "embgo" => {
            let d = EmbgoParams::default();
            let beta = o.take("beta", d.levy.beta())?;
            let shared_r = o.take("shared_r", d.shared_r)?;
            put("beta", beta.to_string());
            put("shared_r", shared_r.to_string());
            Box::new(Embgo::new(EmbgoParams {
                levy: LevyParams::new(beta)?,
                shared_r,
            }))
        }
        "mbgo" => {
            let movement = o.take("movement", true)?;
            let battle = o.take("battle", true)?;
            put("movement", movement.to_string());
            put("battle", battle.to_string());
            if !movement && !battle {
                return Err(Error::InvalidConfig("mbgo needs at least one phase".into()));
            }
            Box::new(Mbgo { movement, battle })
        }
        "de" => {
            let d = DeParams::default();
            let p = DeParams {
                f: o.take("f", d.f)?,
                cr: o.take("cr", d.cr)?,
            };
            p.validate()?;
            put("f", p.f.to_string());
            put("cr", p.cr.to_string());
            Box::new(De::new(p))
        }
        "pso" => {
            let d = PsoParams::default();
            let p = PsoParams {
                w: o.take("w", d.w)?,
                c1: o.take("c1", d.c1)?,
                c2: o.take("c2", d.c2)?,
                v_max: o.take("v_max", d.v_max)?,
            };
            if !(p.v_max > 0.0) {
                return Err(Error::InvalidConfig("pso v_max must be positive".into()));
            }
            put("w", p.w.to_string());
            put("c1", p.c1.to_string());
            put("c2", p.c2.to_string());
            put("v_max", p.v_max.to_string());
            Box::new(Pso::new(p))
        }
        _ => Box::new(RandomSearch),
    };
    o.finish()?;
    Ok(ResolvedAlgorithm {
        name: name.to_string(),
        params: resolved,
        optimizer,
    })
}
