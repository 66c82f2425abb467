//! Scenario profiles: the bundle of scenario, designs, burn-in policies, and
//! simulation sizes that a campaign runs from, either built in or loaded from
//! a plain key = value file.

use super::BurninOption;
use crate::design::{DesignSpec, Shrinkage, TuningSchedule};
use crate::error::Error;
use crate::metrics::DeltaVariant;
use crate::scenario::TrialScenario;
use crate::Result;
use std::path::Path;

/// A named simulation campaign configuration.
#[derive(Debug, Clone)]
pub struct ScenarioProfile {
    pub name: String,
    pub scenario: TrialScenario,
    pub designs: Vec<DesignSpec>,
    pub burnin_options: Vec<BurninOption>,
    pub n_sim_metrics: usize,
    pub n_sim_oc: usize,
    pub delta_variant: DeltaVariant,
    /// Success probability shared by both arms under the null; defaults to
    /// the scenario's control rate.
    pub null_p: Option<f64>,
    pub seed: u64,
}

impl ScenarioProfile {
    fn base(name: &str, p0: f64, p1: f64, n: u32) -> Self {
        ScenarioProfile {
            name: name.to_string(),
            scenario: TrialScenario::new(p0, p1, n).expect("built-in scenario is valid"),
            designs: DesignSpec::all_ten(),
            burnin_options: vec![
                BurninOption::Min,
                BurninOption::Formula,
                BurninOption::Third,
            ],
            n_sim_metrics: 1000,
            n_sim_oc: 10000,
            delta_variant: DeltaVariant::Rss,
            null_p: None,
            seed: super::DEFAULT_SEED,
        }
    }

    /// Cardiac arrest trial: low success rates, a large effect, and a small
    /// sample.
    pub fn arrest() -> Self {
        Self::base("arrest", 0.12, 0.37, 86)
    }

    /// Thrombophlebitis trial: success rates close to 1, a small effect, and
    /// a moderate sample.
    pub fn calisto() -> Self {
        Self::base("calisto", 0.941, 0.991, 360)
    }

    /// The null scenario the type I error columns simulate under.
    pub fn null_scenario(&self) -> Result<TrialScenario> {
        self.scenario
            .at_null(self.null_p.unwrap_or(self.scenario.p0))
    }

    /// Load a profile from a key = value file.
    ///
    /// Top-level keys: `name`, `p0`, `p1`, `n`, `n_half`, `alpha`, `designs`
    /// (comma-separated labels), `burnin` (comma-separated policies), `delta`
    /// (`rss`/`ssd`), `n_sim_metrics`, `n_sim_oc`, `null_p`, `seed`. A
    /// `[design <label>]` section adjusts one design: `erade_alpha`,
    /// `shrinkage` (`raw`/`add-half`), `tuning` (`thall-wathen` or
    /// `constant:<c>`), `prior` (four comma-separated Beta parameters), and
    /// `urn_burnin_update` (`true`/`false`). Unknown keys are errors, not
    /// warnings, so a typo cannot silently fall back to a default.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_impl(&text)
    }

    fn from_str_impl(text: &str) -> Result<Self> {
        let mut p0 = None;
        let mut p1 = None;
        let mut n = None;
        let mut profile = Self::base("profile", 0.5, 0.5, 4);
        let mut designs_named: Option<Vec<String>> = None;
        let mut burnin_named: Option<Vec<String>> = None;
        let mut n_half = None;
        let mut alpha = None;
        let mut section: Option<String> = None;
        let mut overrides: Vec<(String, String, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Profile(format!("line {}: {}", idx + 1, msg));
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header".into()))?
                    .trim();
                let label = inner
                    .strip_prefix("design")
                    .ok_or_else(|| err(format!("unknown section: [{inner}]")))?
                    .trim();
                DesignSpec::from_label(label)
                    .map_err(|_| err(format!("unknown design in section: {label}")))?;
                section = Some(label.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got: {line}")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            if let Some(design) = &section {
                match key.as_str() {
                    "erade_alpha" | "shrinkage" | "tuning" | "prior" | "urn_burnin_update" => {
                        overrides.push((design.clone(), key, value));
                    }
                    other => return Err(err(format!("unknown design key: {other}"))),
                }
                continue;
            }
            match key.as_str() {
                "name" => profile.name = value,
                "p0" => p0 = Some(parse_f64(&value).map_err(err)?),
                "p1" => p1 = Some(parse_f64(&value).map_err(err)?),
                "n" => n = Some(parse_u32(&value).map_err(err)?),
                "n_half" => n_half = Some(parse_f64(&value).map_err(err)?),
                "alpha" => alpha = Some(parse_f64(&value).map_err(err)?),
                "null_p" => profile.null_p = Some(parse_f64(&value).map_err(err)?),
                "seed" => {
                    profile.seed = value
                        .parse()
                        .map_err(|_| err(format!("invalid seed: {value}")))?
                }
                "n_sim_metrics" => {
                    profile.n_sim_metrics = value
                        .parse()
                        .map_err(|_| err(format!("invalid n_sim_metrics: {value}")))?
                }
                "n_sim_oc" => {
                    profile.n_sim_oc = value
                        .parse()
                        .map_err(|_| err(format!("invalid n_sim_oc: {value}")))?
                }
                "delta" => {
                    profile.delta_variant =
                        DeltaVariant::parse(&value).map_err(|e| err(e.to_string()))?
                }
                "designs" => designs_named = Some(split_list(&value)),
                "burnin" => burnin_named = Some(split_list(&value)),
                other => return Err(err(format!("unknown key: {other}"))),
            }
        }

        let p0 = p0.ok_or_else(|| Error::Profile("missing key: p0".into()))?;
        let p1 = p1.ok_or_else(|| Error::Profile("missing key: p1".into()))?;
        let n = n.ok_or_else(|| Error::Profile("missing key: n".into()))?;
        let mut scenario = TrialScenario::new(p0, p1, n)?;
        if let Some(h) = n_half {
            scenario = scenario.with_n_half(h)?;
        }
        if let Some(a) = alpha {
            scenario = scenario.with_alpha(a)?;
        }
        profile.scenario = scenario;

        if let Some(names) = designs_named {
            profile.designs = names
                .iter()
                .map(|s| DesignSpec::from_label(s))
                .collect::<Result<_>>()?;
        }
        if let Some(names) = burnin_named {
            profile.burnin_options = names
                .iter()
                .map(|s| BurninOption::parse(s))
                .collect::<Result<_>>()?;
        }
        for (label, key, value) in overrides {
            apply_design_override(&mut profile.designs, &label, &key, &value)?;
        }
        if let Some(p) = profile.null_p {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Profile(format!("null_p out of [0, 1]: {p}")));
            }
        }
        Ok(profile)
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse().map_err(|_| format!("invalid number: {s}"))
}

fn parse_u32(s: &str) -> std::result::Result<u32, String> {
    s.parse().map_err(|_| format!("invalid integer: {s}"))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

fn apply_design_override(
    designs: &mut [DesignSpec],
    label: &str,
    key: &str,
    value: &str,
) -> Result<()> {
    let design = designs
        .iter_mut()
        .find(|d| {
            d.label()
                == DesignSpec::from_label(label)
                    .map(|d| d.label())
                    .unwrap_or("")
        })
        .ok_or_else(|| {
            Error::Profile(format!(
                "section [design {label}] has no match in designs list"
            ))
        })?;
    match key {
        "erade_alpha" => {
            let a: f64 = value
                .parse()
                .map_err(|_| Error::Profile(format!("invalid erade_alpha: {value}")))?;
            design.erade_alpha = a;
        }
        "shrinkage" => {
            let shrinkage = match value.to_ascii_lowercase().as_str() {
                "raw" => Shrinkage::RawMle,
                "add-half" | "addhalf" => Shrinkage::AddHalf,
                other => return Err(Error::Profile(format!("unknown shrinkage: {other}"))),
            };
            match design.target.as_mut() {
                Some(target) => target.shrinkage = shrinkage,
                None => {
                    return Err(Error::Profile(format!(
                        "design {label} has no allocation target to shrink"
                    )))
                }
            }
        }
        "tuning" => {
            design.tuning = match value.to_ascii_lowercase().as_str() {
                "thall-wathen" | "thallwathen" => TuningSchedule::ThallWathen,
                other => match other.strip_prefix("constant:") {
                    Some(c) => TuningSchedule::Constant(
                        c.parse()
                            .map_err(|_| Error::Profile(format!("invalid tuning constant: {c}")))?,
                    ),
                    None => return Err(Error::Profile(format!("unknown tuning: {other}"))),
                },
            };
        }
        "prior" => {
            let parts: Vec<f64> = value
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Profile(format!("invalid prior: {value}")))?;
            if parts.len() != 4 {
                return Err(Error::Profile(format!(
                    "prior needs four parameters, got {}",
                    parts.len()
                )));
            }
            design.prior = (parts[0], parts[1], parts[2], parts[3]);
        }
        "urn_burnin_update" => {
            design.urn_burnin_update = match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                other => return Err(Error::Profile(format!("invalid boolean: {other}"))),
            };
        }
        _ => unreachable!("filtered during parsing"),
    }
    design.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn load(text: &str) -> Result<ScenarioProfile> {
        ScenarioProfile::from_str_impl(text)
    }

    #[test]
    fn builtin_profiles() {
        let arrest = ScenarioProfile::arrest();
        assert_eq!(arrest.scenario.n, 86);
        assert_eq!(arrest.designs.len(), 10);
        assert_eq!(arrest.n_sim_oc, 10000);
        let null = arrest.null_scenario().unwrap();
        assert_eq!(null.p0, null.p1);
        assert_eq!(null.p0, 0.12);

        let calisto = ScenarioProfile::calisto();
        assert_eq!(calisto.scenario.n, 360);
        assert_eq!(calisto.scenario.p1, 0.991);
    }

    #[test]
    fn parse_minimal_and_full_profiles() {
        let p = load("p0 = 0.2\np1 = 0.4\nn = 100\n").unwrap();
        assert_eq!(p.scenario.n, 100);
        assert_eq!(p.designs.len(), 10);

        let text = "\
name = custom
p0 = 0.2        # control
p1 = 0.4
n = 100
n_half = 2000
alpha = 0.10
designs = er, brar-t, rpw
burnin = min, formula, 10
delta = ssd
n_sim_metrics = 77
n_sim_oc = 88
null_p = 0.3
seed = 99

[design brar-t]
tuning = constant:0.4

[design rpw]
urn_burnin_update = false
";
        let p = load(text).unwrap();
        assert_eq!(p.name, "custom");
        assert_eq!(p.scenario.n_half, 2000.0);
        assert_eq!(p.scenario.alpha, 0.10);
        assert_eq!(p.designs.len(), 3);
        assert_eq!(
            p.burnin_options,
            vec![
                BurninOption::Min,
                BurninOption::Formula,
                BurninOption::Fixed(10)
            ]
        );
        assert_eq!(p.delta_variant, DeltaVariant::Ssd);
        assert_eq!((p.n_sim_metrics, p.n_sim_oc), (77, 88));
        assert_eq!(p.null_p, Some(0.3));
        assert_eq!(p.seed, 99);
        assert!(matches!(p.designs[1].tuning, TuningSchedule::Constant(c) if c == 0.4));
        assert!(!p.designs[2].urn_burnin_update);
        assert_eq!(p.null_scenario().unwrap().p0, 0.3);
    }

    #[test]
    fn unknown_keys_are_hard_errors() {
        let base = "p0 = 0.2\np1 = 0.4\nn = 100\n";
        assert!(matches!(
            load(&format!("{base}n_sims = 5\n")),
            Err(Error::Profile(msg)) if msg.contains("unknown key")
        ));
        assert!(matches!(
            load(&format!("{base}[design rpw]\nurn = false\n")),
            Err(Error::Profile(msg)) if msg.contains("unknown design key")
        ));
        assert!(matches!(
            load(&format!("{base}[sim]\nx = 1\n")),
            Err(Error::Profile(msg)) if msg.contains("unknown section")
        ));
        assert!(load(&format!("{base}[design zzz]\nprior = 1,1,1,1\n")).is_err());
    }

    #[test]
    fn missing_scenario_keys_are_reported() {
        assert!(matches!(
            load("p0 = 0.2\nn = 100\n"),
            Err(Error::Profile(msg)) if msg.contains("p1")
        ));
    }

    #[test]
    fn overriding_an_unlisted_design_fails() {
        let text =
            "p0 = 0.2\np1 = 0.4\nn = 100\ndesigns = er\n[design rpw]\nurn_burnin_update = false\n";
        assert!(matches!(
            load(text),
            Err(Error::Profile(msg)) if msg.contains("no match")
        ));
    }

    #[test]
    fn from_file_reads_what_was_written() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trial.profile");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "p0 = 0.12").unwrap();
        writeln!(f, "p1 = 0.37").unwrap();
        writeln!(f, "n = 86").unwrap();
        writeln!(f, "designs = ptw").unwrap();
        drop(f);
        let p = ScenarioProfile::from_file(&path).unwrap();
        assert_eq!(p.scenario.n, 86);
        assert_eq!(p.designs.len(), 1);
        assert_eq!(p.designs[0].label(), "ptw");
    }
}
