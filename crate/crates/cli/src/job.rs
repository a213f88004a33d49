//! Job files: a TOML description of the fan, the polynomial system and
//! optional defaults for the command line.
//!
//! ```toml
//! field = "q"
//!
//! [fan]
//! rays = [[1, 0], [0, 1], [-1, -1], [0, -1]]
//! max_cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
//! sigma = [0, 1]
//!
//! [[polynomials]]
//! degree = [2, 1]
//! terms = [{ monomial = "z1^2*z2", coeff = "3" }, { point = [1, 1], coeff = "-1/2" }]
//! ```
//!
//! A system may instead be drawn at random (`[random] classes = [...]`) or
//! fitted through torus points (`[fitted]`); both use the `--seed` RNG.

use serde::Deserialize;

use torelim_core::{DivisorClass, Fan, FacetPresentation, LatticeVector, Rationals, ToricContext};
use torelim_core::polyalg::Field;
use torelim_core::sylvester::Routing;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    field: Option<String>,
    command: Option<String>,
    #[serde(default)]
    args: Vec<String>,
    fan: RawFan,
    #[serde(default)]
    polynomials: Vec<RawPoly>,
    random: Option<RawRandom>,
    fitted: Option<RawFitted>,
    routing: Option<RawRouting>,
    residue: Option<RawResidue>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    sigma: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    degree: Option<Vec<i64>>,
    presentation: Option<Vec<i64>>,
    #[serde(default)]
    terms: Vec<RawTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    monomial: Option<String>,
    exponent: Option<Vec<u32>>,
    point: Option<Vec<i64>>,
    coeff: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandom {
    classes: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFitted {
    class: Vec<i64>,
    points: Vec<Vec<String>>,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRouting {
    default: Option<Vec<usize>>,
    #[serde(default)]
    overrides: Vec<RawOverride>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    mu: String,
    priority: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResidue {
    p: String,
    q: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl std::str::FromStr for FieldChoice {
    type Err = String;

    /// `q` or `p:<prime>`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "q" | "Q" => Ok(FieldChoice::Rationals),
            other => other
                .strip_prefix("p:")
                .and_then(|p| p.trim().parse().ok())
                .map(FieldChoice::Prime)
                .ok_or_else(|| format!("field must be \"q\" or \"p:<prime>\", got {other:?}")),
        }
    }
}

/// One polynomial: its class and `(exponent, coefficient string)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    pub cls: DivisorClass,
    pub terms: Vec<(Vec<u32>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemSource {
    Explicit(Vec<PolySpec>),
    Random(Vec<DivisorClass>),
    Fitted { cls: DivisorClass, points: Vec<Vec<String>>, count: usize },
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub ctx: ToricContext,
    pub field: Option<FieldChoice>,
    pub command: Option<Vec<String>>,
    pub system: SystemSource,
    pub routing: Routing,
    pub residue: Option<(String, String)>,
}

impl JobSpec {
    pub fn degrees(&self) -> Vec<DivisorClass> {
        match &self.system {
            SystemSource::Explicit(ps) => ps.iter().map(|p| p.cls.clone()).collect(),
            SystemSource::Random(cs) => cs.clone(),
            SystemSource::Fitted { cls, count, .. } => vec![cls.clone(); *count],
        }
    }
}

/// Parses and validates a job, reporting every problem found.
pub fn parse_job(text: &str) -> Result<JobSpec, Vec<String>> {
    let raw: RawJob = toml::from_str(text).map_err(|e| vec![e.to_string()])?;
    let mut errors = Vec::new();

    let field = raw.field.as_deref().and_then(|s| s.parse().map_err(|e| errors.push(e)).ok());
    if let Some(cmd) = &raw.command {
        if !crate::COMMANDS.contains(&cmd.as_str()) {
            errors.push(format!("unknown command {cmd:?}"));
        }
    }

    let fan = match Fan::from_coords(raw.fan.rays, raw.fan.max_cones) {
        Ok(fan) => fan,
        Err(e) => {
            errors.push(format!("fan: {e}"));
            return Err(errors);
        }
    };
    let sigma = match raw.fan.sigma {
        Some(s) => s,
        None => match torelim_core::toric::find_positive_cones(&fan) {
            Ok(cones) if !cones.is_empty() => cones[0].clone(),
            Ok(_) => fan.max_cones()[0].clone(),
            Err(e) => {
                errors.push(format!("fan: {e}"));
                return Err(errors);
            }
        },
    };
    let ctx = match ToricContext::new(fan, &sigma) {
        Ok(ctx) => ctx,
        Err(e) => {
            errors.push(format!("fan: {e}"));
            return Err(errors);
        }
    };

    let class = |v: &[i64], what: &str, errors: &mut Vec<String>| -> Option<DivisorClass> {
        if v.len() != ctx.r() {
            errors.push(format!("{what}: class {v:?} must have {} entries", ctx.r()));
            return None;
        }
        Some(DivisorClass(v.to_vec()))
    };

    let mut sources = 0;
    let mut system = SystemSource::Explicit(Vec::new());
    if !raw.polynomials.is_empty() {
        sources += 1;
        let mut polys = Vec::new();
        for (i, p) in raw.polynomials.iter().enumerate() {
            if let Some(spec) = parse_poly(&ctx, i, p, &mut errors) {
                polys.push(spec);
            }
        }
        system = SystemSource::Explicit(polys);
    }
    if let Some(r) = &raw.random {
        sources += 1;
        let classes: Vec<_> = r.classes.iter().filter_map(|c| class(c, "random", &mut errors)).collect();
        system = SystemSource::Random(classes);
    }
    if let Some(fit) = &raw.fitted {
        sources += 1;
        for (k, pt) in fit.points.iter().enumerate() {
            if pt.len() != ctx.n() {
                errors.push(format!("fitted: point {k} must have {} coordinates", ctx.n()));
            }
            for x in pt {
                if let Err(e) = Rationals.parse(x) {
                    errors.push(format!("fitted: point {k}: {e}"));
                }
            }
        }
        if let Some(cls) = class(&fit.class, "fitted", &mut errors) {
            system = SystemSource::Fitted { cls, points: fit.points.clone(), count: fit.count };
        }
    }
    if sources > 1 {
        errors.push("give at most one of [[polynomials]], [random] and [fitted]".into());
    }

    let mut routing = Routing::standard(ctx.n());
    if let Some(r) = &raw.routing {
        if let Some(d) = &r.default {
            match Routing::with_priority(d.clone()) {
                Ok(x) => routing = x,
                Err(e) => errors.push(format!("routing: {e}")),
            }
        }
        for o in &r.overrides {
            let mu = match ctx.parse_monomial(&o.mu) {
                Ok(mu) => mu,
                Err(e) => {
                    errors.push(format!("routing: {e}"));
                    continue;
                }
            };
            match routing.clone().with_override(mu, o.priority.clone()) {
                Ok(x) => routing = x,
                Err(e) => errors.push(format!("routing: {e}")),
            }
        }
    }

    let command = raw.command.map(|c| std::iter::once(c).chain(raw.args).collect());
    let residue = raw.residue.map(|r| (r.p, r.q));
    if errors.is_empty() {
        Ok(JobSpec { ctx, field, command, system, routing, residue })
    } else {
        Err(errors)
    }
}

fn parse_poly(ctx: &ToricContext, i: usize, p: &RawPoly, errors: &mut Vec<String>) -> Option<PolySpec> {
    let before = errors.len();
    let cls = match (&p.degree, &p.presentation) {
        (Some(d), None) if d.len() == ctx.r() => Some(DivisorClass(d.clone())),
        (Some(d), None) => {
            errors.push(format!("polynomial {i}: degree {d:?} must have {} entries", ctx.r()));
            None
        }
        (None, Some(a)) => match ctx.class_of(&FacetPresentation(a.clone())) {
            Ok(c) => Some(c),
            Err(e) => {
                errors.push(format!("polynomial {i}: {e}"));
                None
            }
        },
        _ => {
            errors.push(format!("polynomial {i}: give exactly one of degree and presentation"));
            None
        }
    };
    let mut terms = Vec::new();
    for (k, t) in p.terms.iter().enumerate() {
        let where_ = format!("polynomial {i}, term {k}");
        if let Err(e) = Rationals.parse(&t.coeff) {
            errors.push(format!("{where_}: {e}"));
        }
        let expo = match (&t.monomial, &t.exponent, &t.point) {
            (Some(m), None, None) => ctx.parse_monomial(m).map_err(|e| e.to_string()),
            (None, Some(e), None) => Ok(e.clone()),
            (None, None, Some(pt)) => match &cls {
                Some(c) => ctx.exponent_of_point(c, &LatticeVector(pt.clone())).map_err(|e| e.to_string()),
                None => Err("lattice point given without a valid class".into()),
            },
            _ => Err("give exactly one of monomial, exponent and point".into()),
        };
        let expo = match expo {
            Ok(e) => e,
            Err(e) => {
                errors.push(format!("{where_}: {e}"));
                continue;
            }
        };
        match (ctx.degree_of(&expo), &cls) {
            (Ok(found), Some(c)) if &found != c => errors.push(format!(
                "{where_}: {} has class {found}, expected {c}",
                ctx.format_monomial(&expo)
            )),
            (Err(e), _) => errors.push(format!("{where_}: {e}")),
            _ => terms.push((expo, t.coeff.clone())),
        }
    }
    if errors.len() > before {
        return None;
    }
    Some(PolySpec { cls: cls?, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H1_JOB: &str = include_str!("../fixtures/h1_example.toml");

    #[test]
    fn fixture_parses() {
        let job = parse_job(H1_JOB).unwrap();
        let SystemSource::Explicit(polys) = &job.system else { panic!("explicit system expected") };
        assert_eq!(polys.len(), 3);
        assert!(polys.iter().all(|p| p.terms.len() == 5));
        assert_eq!(job.degrees(), vec![DivisorClass(vec![2, 1]); 3]);
    }

    #[test]
    fn empty_system_is_fine() {
        let text = "command = \"check-positivity\"\n[fan]\nrays = [[1]]\nmax_cones = [[0]]\n";
        assert!(parse_job(text).is_err());
        let text = "command = \"check-positivity\"\n[fan]\nrays = [[1], [-1]]\nmax_cones = [[0], [1]]\n";
        let job = parse_job(text).unwrap();
        assert_eq!(job.system, SystemSource::Explicit(vec![]));
    }

    #[test]
    fn mixed_class_terms_are_reported() {
        let text = r#"
[fan]
rays = [[1, 0], [0, 1], [-1, -1], [0, -1]]
max_cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
[[polynomials]]
degree = [2, 1]
terms = [{ monomial = "z1^2*z2", coeff = "1" }, { monomial = "x1*z1", coeff = "2/0" }, { monomial = "x2", coeff = "1" }]
"#;
        let errors = parse_job(text).unwrap_err();
        assert!(errors.iter().any(|e| e.contains("x2") && e.contains("(1,1)")), "{errors:?}");
        assert!(errors.iter().any(|e| e.contains("x1*z1")), "{errors:?}");
        assert!(errors.iter().any(|e| e.contains("2/0")), "{errors:?}");
    }

    #[test]
    fn unknown_command_and_field() {
        let text = "command = \"solve\"\nfield = \"r\"\n[fan]\nrays = [[1], [-1]]\nmax_cones = [[0], [1]]\n";
        let errors = parse_job(text).unwrap_err();
        assert_eq!(errors.len(), 2, "{errors:?}");
    }

    #[test]
    fn lattice_points_and_presentations() {
        let text = r#"
[fan]
rays = [[1, 0], [0, 1], [-1, -1], [0, -1]]
max_cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
[[polynomials]]
presentation = [0, 0, 2, 1]
terms = [{ point = [0, 0], coeff = "1" }, { point = [1, 1], coeff = "-1" }]
"#;
        let job = parse_job(text).unwrap();
        let SystemSource::Explicit(polys) = &job.system else { panic!() };
        assert_eq!(polys[0].cls, DivisorClass(vec![2, 1]));
        assert_eq!(job.ctx.format_monomial(&polys[0].terms[0].0), "z1^2*z2");
        assert_eq!(job.ctx.format_monomial(&polys[0].terms[1].0), "x1*x2");
    }
}
