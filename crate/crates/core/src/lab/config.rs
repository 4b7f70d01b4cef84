//! Experiment configuration (JSON) and its validation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::seeds::ResolvedSeeds;
use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Domain, DomainSpec, Generator, PointSet, DUPLICATE_THRESHOLD};
use crate::kernels::{Family, JitterPolicy, Kernel, KernelSpec};
use crate::rkhs::KernelCombination;

/// Powers of two from 4 to 512.
pub fn default_schedule() -> Vec<usize> {
    (2..=9).map(|k| 1usize << k).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kernel: KernelSpec,
    pub domain: DomainSpec,
    pub sequence: SequenceSpec,
    pub target: TargetSpec,
    #[serde(default = "default_schedule")]
    pub n_schedule: Vec<usize>,
    #[serde(default)]
    pub holder: HolderSpec,
    #[serde(default)]
    pub jitter: JitterSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    UniformRandom,
    Halton,
    FarthestPoint,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub generator: GeneratorKind,
    /// Overrides the derived sequence seed (uniform_random only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Required for `explicit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avoid_ball: Option<BallSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

fn default_coefficient_range() -> [f64; 2] {
    [-1.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    /// `f = Σ c_j K(y_j, ·)` with the given centers and coefficients.
    Explicit {
        centers: Vec<Vec<f64>>,
        coefficients: Vec<f64>,
    },
    /// `terms` centers uniform in the domain, coefficients uniform in the range.
    Random {
        terms: usize,
        #[serde(default = "default_coefficient_range")]
        coefficient_range: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

fn default_pairs() -> usize {
    2000
}

/// Where the Hölder pair `(α, C)` of the error bound comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum HolderSpec {
    Estimated {
        #[serde(default = "default_pairs")]
        pairs: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Declared {
        constant: f64,
        /// Defaults to the kernel's declared exponent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
}

impl Default for HolderSpec {
    fn default() -> Self {
        HolderSpec::Estimated {
            pairs: default_pairs(),
            seed: None,
        }
    }
}

/// `"none"`, `"auto"` or a fixed non-negative shift.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "JitterRepr", into = "JitterRepr")]
pub struct JitterSpec(pub JitterPolicy);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JitterRepr {
    Named(String),
    Fixed(f64),
}

impl TryFrom<JitterRepr> for JitterSpec {
    type Error = Error;

    fn try_from(r: JitterRepr) -> Result<Self> {
        match r {
            JitterRepr::Named(s) => s.parse().map(JitterSpec),
            JitterRepr::Fixed(l) => l.to_string().parse().map(JitterSpec),
        }
    }
}

impl From<JitterSpec> for JitterRepr {
    fn from(j: JitterSpec) -> Self {
        match j.0 {
            JitterPolicy::None => JitterRepr::Named("none".into()),
            JitterPolicy::Auto => JitterRepr::Named("auto".into()),
            JitterPolicy::Fixed(l) => JitterRepr::Fixed(l),
        }
    }
}

/// Resolved Hölder source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HolderSource {
    Estimated { pairs: usize, seed: u64 },
    Declared { constant: f64, alpha: f64 },
}

/// A validated configuration with every seed and object resolved.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub kernel: Kernel,
    pub domain: Domain,
    pub generator: Generator,
    pub avoid_ball: Option<Ball>,
    pub target: KernelCombination,
    pub schedule: Vec<usize>,
    pub holder: HolderSource,
    pub jitter: JitterPolicy,
    pub seeds: ResolvedSeeds,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the config and builds the experiment it describes.
    pub fn resolve(&self) -> Result<Experiment> {
        let cfg = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::config(other.to_string()),
        };
        let kernel = Kernel::from_spec(&self.kernel).map_err(cfg)?;
        let domain = Domain::from_spec(&self.domain).map_err(cfg)?;
        let d = domain.dim();
        if matches!(kernel.family(), Family::Wendland31 { .. }) && d > 3 {
            return Err(Error::config("wendland31 is positive definite only for d <= 3"));
        }

        let schedule = self.n_schedule.clone();
        if schedule.is_empty() || schedule[0] == 0 {
            return Err(Error::config("n_schedule must be non-empty and start at n >= 1"));
        }
        if schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("n_schedule must be strictly increasing"));
        }

        let seeds = {
            let mut s = ResolvedSeeds::from_master(self.seed);
            if let Some(seed) = self.sequence.seed {
                s.sequence = seed;
            }
            if let TargetSpec::Random { seed: Some(seed), .. } = self.target {
                s.target = seed;
            }
            if let HolderSpec::Estimated { seed: Some(seed), .. } = self.holder {
                s.holder = seed;
            }
            s
        };

        let generator = match self.sequence.generator {
            GeneratorKind::UniformRandom => Generator::UniformRandom {
                seed: seeds.sequence,
            },
            GeneratorKind::Halton => Generator::Halton,
            GeneratorKind::FarthestPoint => Generator::FarthestPoint,
            GeneratorKind::Explicit => {
                let rows = self
                    .sequence
                    .points
                    .as_ref()
                    .ok_or_else(|| Error::config("explicit sequence needs `points`"))?;
                Generator::Explicit(PointSet::from_rows(rows).map_err(cfg)?)
            }
        };
        if self.sequence.points.is_some() && self.sequence.generator != GeneratorKind::Explicit {
            return Err(Error::config("`points` is only valid for the explicit generator"));
        }

        let avoid_ball = match &self.sequence.avoid_ball {
            Some(b) => {
                if b.center.len() != d {
                    return Err(Error::config("avoid_ball center has the wrong dimension"));
                }
                if !(b.radius > 0.0 && b.radius.is_finite()) {
                    return Err(Error::config("avoid_ball radius must be positive"));
                }
                Some(Ball {
                    center: b.center.clone(),
                    radius: b.radius,
                })
            }
            None => None,
        };

        let target = self.build_target(kernel, &domain, seeds.target).map_err(cfg)?;

        let holder = match self.holder {
            HolderSpec::Estimated { pairs, .. } => HolderSource::Estimated {
                pairs,
                seed: seeds.holder,
            },
            HolderSpec::Declared { constant, alpha } => {
                let alpha = alpha
                    .or(kernel.holder_exponent())
                    .unwrap_or_else(|| kernel.family().declared_holder_exponent());
                if !(constant > 0.0 && constant.is_finite()) {
                    return Err(Error::config("declared Hölder constant must be positive"));
                }
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::config("declared Hölder exponent must lie in (0, 1]"));
                }
                HolderSource::Declared { constant, alpha }
            }
        };

        Ok(Experiment {
            name: self.name.clone().unwrap_or_else(|| "experiment".to_string()),
            kernel,
            domain,
            generator,
            avoid_ball,
            target,
            schedule,
            holder,
            jitter: self.jitter.0,
            seeds,
        })
    }

    fn build_target(&self, kernel: Kernel, domain: &Domain, seed: u64) -> Result<KernelCombination> {
        let d = domain.dim();
        match &self.target {
            TargetSpec::Explicit {
                centers,
                coefficients,
            } => {
                let centers = PointSet::from_rows(centers)?;
                if centers.dim() != d {
                    return Err(Error::config("target centers have the wrong dimension"));
                }
                if let Some(i) = centers.iter().position(|c| !domain.contains(c)) {
                    return Err(Error::config(format!("target center {i} lies outside the domain")));
                }
                KernelCombination::new(kernel, centers, coefficients.clone())
            }
            TargetSpec::Random {
                terms,
                coefficient_range: [lo, hi],
                ..
            } => {
                if *terms == 0 {
                    return Err(Error::config("random target needs at least one term"));
                }
                if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                    return Err(Error::config("coefficient_range must be [lo, hi] with lo <= hi"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut centers = PointSet::new(d);
                let mut unit = vec![0.0; d];
                while centers.len() < *terms {
                    unit.iter_mut().for_each(|u| *u = rng.random::<f64>());
                    let p = domain.from_unit(&unit);
                    if centers.iter().all(|q| distance(q, &p) >= DUPLICATE_THRESHOLD) {
                        centers.push(&p)?;
                    }
                }
                let coefficients = (0..*terms)
                    .map(|_| lo + (hi - lo) * rng.random::<f64>())
                    .collect();
                KernelCombination::new(kernel, centers, coefficients)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "kernel": {"family": "gaussian", "shape": 10},
        "domain": {"lower": [0], "upper": [1], "grid": 101},
        "sequence": {"generator": "farthest_point"},
        "target": {"kind": "random", "terms": 5}
    }"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_json(BASE).unwrap();
        assert_eq!(cfg.n_schedule, vec![4, 8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(cfg.jitter, JitterSpec(JitterPolicy::None));
        let exp = cfg.resolve().unwrap();
        assert_eq!(exp.target.len(), 5);
        assert!(exp.target.coefficients().iter().all(|c| (-1.0..=1.0).contains(c)));
        assert!(matches!(exp.holder, HolderSource::Estimated { pairs: 2000, .. }));
    }

    #[test]
    fn missing_kernel_is_a_config_error() {
        let text = BASE.replace(r#""kernel": {"family": "gaussian", "shape": 10},"#, "");
        assert!(matches!(ExperimentConfig::from_json(&text), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = BASE.replace(r#""terms": 5"#, r#""terms": 5, "bogus": 1"#);
        assert!(ExperimentConfig::from_json(&text).is_err());
    }

    #[test]
    fn schedule_must_increase() {
        let mut cfg = ExperimentConfig::from_json(BASE).unwrap();
        cfg.n_schedule = vec![4, 4, 8];
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn target_centers_inside_domain() {
        let mut cfg = ExperimentConfig::from_json(BASE).unwrap();
        cfg.target = TargetSpec::Explicit {
            centers: vec![vec![1.5]],
            coefficients: vec![1.0],
        };
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn jitter_forms() {
        for (raw, want) in [
            (r#""auto""#, JitterPolicy::Auto),
            (r#""none""#, JitterPolicy::None),
            ("1e-10", JitterPolicy::Fixed(1e-10)),
        ] {
            let j: JitterSpec = serde_json::from_str(raw).unwrap();
            assert_eq!(j.0, want);
            assert_eq!(serde_json::to_string(&j).unwrap(), raw.replace("1e-10", "1e-10"));
        }
        assert!(serde_json::from_str::<JitterSpec>(r#""sometimes""#).is_err());
    }

    #[test]
    fn same_seed_same_target() {
        let cfg = ExperimentConfig::from_json(BASE).unwrap();
        let a = cfg.resolve().unwrap().target;
        let b = cfg.resolve().unwrap().target;
        assert_eq!(a, b);
        let mut other = cfg.clone();
        other.seed = 1;
        assert_ne!(other.resolve().unwrap().target, a);
    }
}
