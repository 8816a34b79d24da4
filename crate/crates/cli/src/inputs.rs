//! Problem files, presets and the compact classifier syntax.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tradeoff_core::adversary_sim::PerturbationSpec;
use tradeoff_core::classifier::best_orientation;
use tradeoff_core::param_designer::{LinearConstraint, ParamDesignProblem};
use tradeoff_core::{BoundarySet, ClassifierSpec, HypothesisPair, Norm, Orientation};

use crate::error::{CliError, CliResult};

pub const TABLE1_JSON: &str = include_str!("../presets/table1.json");
pub const FIG2C_JSON: &str = include_str!("../presets/fig2c.json");
pub const FIG3_JSON: &str = include_str!("../presets/fig3.json");
pub const S1_JSON: &str = include_str!("../presets/s1.json");
pub const S2_JSON: &str = include_str!("../presets/s2.json");

/// Parses JSON, reporting the path of the offending key on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Config(format!("{origin}: {inner}"))
        } else {
            CliError::Config(format!("{origin}: key `{path}`: {inner}"))
        }
    })
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::io(path, e))
}

/// A preset name (`table1`, `fig2a`, `fig2b`, `fig2c`) or a path to a JSON file.
pub fn load_problem(arg: &str) -> CliResult<HypothesisPair> {
    match arg {
        "table1" | "fig2a" | "fig2b" => parse_json(TABLE1_JSON, "preset table1"),
        "fig2c" => parse_json(FIG2C_JSON, "preset fig2c"),
        path => parse_json(&read(path)?, path),
    }
}

pub fn load_perturbation(scenario: Option<&str>, file: Option<&str>) -> CliResult<PerturbationSpec> {
    match (scenario, file) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "--scenario and --perturbation are mutually exclusive".into(),
        )),
        (_, Some(path)) => parse_json(&read(path)?, path),
        (Some("s1"), None) => parse_json(S1_JSON, "preset s1"),
        (Some("s2"), None) => parse_json(S2_JSON, "preset s2"),
        (Some("none") | None, None) => Ok(PerturbationSpec::default()),
        (Some(other), None) => Err(CliError::Config(format!(
            "unknown scenario `{other}` (expected s1, s2 or none)"
        ))),
    }
}

/// Admissible set of the design problem as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    pub template: HypothesisPair,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default)]
    pub constraints: Vec<LinearConstraint>,
}

impl BoxFile {
    pub fn problem(&self, gamma: f64, norm: Norm) -> CliResult<ParamDesignProblem> {
        let p = ParamDesignProblem {
            template: self.template.clone(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            constraints: self.constraints.clone(),
            gamma,
            norm,
        };
        p.validate()?;
        Ok(p)
    }
}

pub fn load_box(arg: &str) -> CliResult<BoxFile> {
    match arg {
        "fig3" => parse_json(FIG3_JSON, "preset fig3"),
        path => parse_json(&read(path)?, path),
    }
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("{what}: `{s}` is not a finite number")))
}

fn parse_orientation(s: &str) -> CliResult<Orientation> {
    match s {
        "h0_first" | "h0" => Ok(Orientation::H0First),
        "h1_first" | "h1" => Ok(Orientation::H1First),
        _ => Err(CliError::Config(format!(
            "unknown orientation `{s}` (expected h0_first or h1_first)"
        ))),
    }
}

/// `ml:<eta>`, `linear:<y>[:<orientation>]` or `general:<y1>,<y2>,..[:<orientation>]`.
/// Without an orientation the more accurate one for `pair` is used.
pub fn parse_classifier(s: &str, pair: &HypothesisPair) -> CliResult<ClassifierSpec> {
    let mut parts = s.splitn(3, ':');
    let kind = parts.next().unwrap_or_default();
    let body = parts
        .next()
        .ok_or_else(|| CliError::Config(format!("classifier `{s}`: missing parameters")))?;
    let orientation = parts.next().map(parse_orientation).transpose()?;
    let spec = match kind {
        "ml" => {
            if orientation.is_some() {
                return Err(CliError::Config("an ml classifier takes no orientation".into()));
            }
            ClassifierSpec::ml(parse_f64(body, "eta")?)?
        }
        "linear" => {
            let y = parse_f64(body, "boundary")?;
            let orientation = match orientation {
                Some(o) => o,
                None => best_orientation(&[y], pair)?.0.orientation(),
            };
            ClassifierSpec::Linear { y, orientation }
        }
        "general" => {
            let ys = body
                .split(',')
                .map(|v| parse_f64(v, "boundary"))
                .collect::<CliResult<Vec<_>>>()?;
            let b = match orientation {
                Some(o) => BoundarySet::new(ys, o)?,
                None => best_orientation(&ys, pair)?.0,
            };
            ClassifierSpec::General(b)
        }
        _ => {
            return Err(CliError::Config(format!(
                "unknown classifier kind `{kind}` (expected ml, linear or general)"
            )))
        }
    };
    Ok(spec.resolve(pair)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        let t = load_problem("table1").unwrap();
        assert_eq!(t.theta(), vec![0.0, 9.0, 9.0, 4.0]);
        assert_eq!(load_problem("fig2c").unwrap().theta(), vec![0.0, 4.0, 5.0, 3.0]);
        assert_eq!(load_perturbation(Some("s1"), None).unwrap(), PerturbationSpec::s1());
        assert_eq!(load_perturbation(Some("s2"), None).unwrap(), PerturbationSpec::s2());
        let b = load_box("fig3").unwrap().problem(0.9, Norm::Inf).unwrap();
        assert_eq!(b, ParamDesignProblem::fig3(0.9, Norm::Inf));
    }

    #[test]
    fn error_names_key() {
        let bad = r#"{"h0":{"family":"gaussian","params":{"mu":0,"sigma":"x"}},"h1":{"family":"gaussian","params":{"mu":1,"sigma":1}},"p0":0.5}"#;
        let e = parse_json::<HypothesisPair>(bad, "f").unwrap_err().to_string();
        assert!(e.contains("h0"), "{e}");
        let extra = r#"{"mu_bar_0":0,"sigma_bar_0":0,"mu_bar_1":0,"sigma_bar_1":0,"oops":1}"#;
        let e = parse_json::<PerturbationSpec>(extra, "f").unwrap_err().to_string();
        assert!(e.contains("oops"), "{e}");
    }

    #[test]
    fn classifier_syntax() {
        let p = load_problem("table1").unwrap();
        match parse_classifier("ml:1", &p).unwrap() {
            ClassifierSpec::MaximumLikelihood { boundaries, .. } => assert_eq!(boundaries.unwrap().len(), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_classifier("linear:3.65:h0_first", &p).unwrap(),
            ClassifierSpec::Linear {
                y: 3.65,
                orientation: Orientation::H0First
            }
        );
        let g = parse_classifier("general:3.65,18.78", &p).unwrap();
        assert_eq!(g.boundary_set().unwrap().orientation(), Orientation::H0First);
        for bad in ["ml", "ml:x", "linear:1:sideways", "quad:1", "general:2,1:h0_first", "ml:-1"] {
            assert!(parse_classifier(bad, &p).is_err(), "{bad}");
        }
    }
}
