//! Command execution, generic over the coefficient field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torelim_core::elimination::{self, Certificate, MatrixMode};
use torelim_core::error::{EliminationError, PolyError};
use torelim_core::polyalg::{Field, SparsePoly};
use torelim_core::resrescomplex::{residue_of_product, sparse_resultant};
use torelim_core::sylvester::{decompose_with, sylvester_form_with};
use torelim_core::toric::find_positive_cones;
use torelim_core::{DivisorClass, GradedMonomial, ToricContext};

use crate::job::{JobSpec, SystemSource};
use crate::{CliError, Cmd, FormatArg, ModeArg};

pub fn run<F: Field>(f: &F, job: &JobSpec, cmd: &Cmd, seed: u64) -> Result<String, CliError> {
    let ctx = &job.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let routing = &job.routing;
    match cmd {
        Cmd::CheckPositivity => Ok(positivity_report(ctx)?),
        Cmd::Monomials { class } => {
            let basis = ctx.monomial_basis(&parse_class(class)?)?;
            let mut out = format!("count: {}\n", basis.len());
            for m in basis {
                out.push_str(&ctx.format_monomial(&m.expo));
                out.push('\n');
            }
            Ok(out)
        }
        Cmd::Decompose { mu, poly } => {
            let system = build_system(f, job, &mut rng)?;
            let mu = parse_mono(ctx, mu)?;
            let mut out = String::new();
            for (i, p) in system.iter().enumerate() {
                if poly.is_some_and(|k| k != i) {
                    continue;
                }
                let d = decompose_with(ctx, f, p, &mu, routing, i)?;
                let pieces: Vec<String> = d
                    .divisors
                    .iter()
                    .zip(&d.parts)
                    .map(|(div, part)| format!("{} * ({})", ctx.format_monomial(&div.expo), part.render(ctx, f)))
                    .collect();
                out.push_str(&format!("F{i} = {}\n", pieces.join(" + ")));
            }
            Ok(out)
        }
        Cmd::Sylvester { mu } => {
            let system = build_system(f, job, &mut rng)?;
            let mu = parse_mono(ctx, mu)?;
            let s = sylvester_form_with(ctx, f, &system, &mu, routing)?;
            Ok(format!("Sylv[{}] = {}\n", ctx.format_monomial(&mu.expo), s.value.render(ctx, f)))
        }
        Cmd::BuildMatrix { alpha, mode, pivot_set, force, format } => {
            let system = build_system(f, job, &mut rng)?;
            let alpha = parse_class(alpha)?;
            let recipe = elimination::plan(ctx, &job.degrees(), &alpha, mode.map(to_mode), pivot_set.as_deref(), *force)?;
            let m = elimination::build(ctx, f, &system, &recipe, routing)?;
            match format {
                FormatArg::Csv => Ok(m.to_csv(ctx, f)?),
                FormatArg::Json => serde_json::to_string_pretty(&m.view(ctx, f))
                    .map(|s| s + "\n")
                    .map_err(|e| CliError::Io(e.to_string())),
            }
        }
        Cmd::DegreeValid { alpha, pivot_set } => {
            let alpha = parse_class(alpha)?;
            degree_report(ctx, &job.degrees(), &alpha, pivot_set.as_deref())
        }
        Cmd::CountSolutions { alpha, mode, pivot_set, force } => {
            let system = build_system(f, job, &mut rng)?;
            let alpha = parse_class(alpha)?;
            let recipe = elimination::plan(ctx, &job.degrees(), &alpha, mode.map(to_mode), pivot_set.as_deref(), *force)?;
            Ok(format!("{}\n", elimination::count_solutions(ctx, f, &system, &recipe, routing)?))
        }
        Cmd::Resultant { alpha, force } => {
            let system = build_system(f, job, &mut rng)?;
            let alpha = parse_class(alpha)?;
            elimination::plan(ctx, &job.degrees(), &alpha, None, None, *force)?;
            Ok(format!("{}\n", f.render(&sparse_resultant(ctx, f, &system, &alpha, routing)?)))
        }
        Cmd::Residue { nu, p, q } => {
            let system = build_system(f, job, &mut rng)?;
            let nu = parse_class(nu)?;
            let from_job = job.residue.clone().unwrap_or_default();
            let p_text = p.clone().unwrap_or(from_job.0);
            let q_text = q.clone().unwrap_or(from_job.1);
            if p_text.is_empty() || q_text.is_empty() {
                return Err(CliError::Job(vec!["residue needs P and Q (--p/--q or a [residue] section)".into()]));
            }
            let delta = ctx.delta_class(&job.degrees());
            let p = poly_arg(ctx, f, &nu, &p_text, &mut rng)?;
            let q = poly_arg(ctx, f, &(&delta - &nu), &q_text, &mut rng)?;
            let r = residue_of_product(ctx, f, &system, &p, &q, routing)?;
            let one = SparsePoly::monomial(f, &ctx.graded(vec![0; ctx.num_vars()])?);
            let expanded = residue_of_product(ctx, f, &system, &one, &p.mul(f, &q), routing)?;
            Ok(format!(
                "residue: {}\nnumerator: {}\ndenominator: {}\nnormalization: {}\nexpanded: {}\n",
                f.render(&r.value),
                f.render(&r.numerator),
                f.render(&r.denominator),
                f.render(&r.normalization),
                f.render(&expanded.value),
            ))
        }
        Cmd::Run => Err(CliError::Job(vec!["`run` must be resolved before dispatch".into()])),
    }
}

fn to_mode(m: ModeArg) -> MatrixMode {
    match m {
        ModeArg::Macaulay => MatrixMode::Macaulay,
        ModeArg::Hybrid => MatrixMode::Hybrid,
        ModeArg::Overdetermined => MatrixMode::Overdetermined,
    }
}

fn parse_class(s: &str) -> Result<DivisorClass, CliError> {
    s.parse::<DivisorClass>().map_err(|e| CliError::from(torelim_core::Error::from(e)))
}

fn parse_mono(ctx: &ToricContext, s: &str) -> Result<GradedMonomial, CliError> {
    Ok(ctx.graded(ctx.parse_monomial(s)?)?)
}

fn build_system<F: Field>(f: &F, job: &JobSpec, rng: &mut ChaCha8Rng) -> Result<Vec<SparsePoly<F::Elem>>, CliError> {
    let ctx = &job.ctx;
    match &job.system {
        SystemSource::Explicit(polys) => polys
            .iter()
            .map(|p| {
                let terms = p
                    .terms
                    .iter()
                    .map(|(e, c)| Ok((e.clone(), f.parse(c)?)))
                    .collect::<Result<Vec<_>, PolyError>>()?;
                Ok(SparsePoly::from_terms(ctx, f, p.cls.clone(), terms)?)
            })
            .collect(),
        SystemSource::Random(classes) => {
            classes.iter().map(|c| Ok(SparsePoly::random(ctx, f, c, rng)?)).collect()
        }
        SystemSource::Fitted { cls, points, count } => {
            let pts = points
                .iter()
                .map(|pt| pt.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(elimination::forms_through_points(ctx, f, cls, &pts, *count, rng)?)
        }
    }
}

/// `random`, or a sum of terms such as `3*x1*z1 - 1/2*z1^2*z2`.
fn poly_arg<F: Field>(
    ctx: &ToricContext,
    f: &F,
    cls: &DivisorClass,
    text: &str,
    rng: &mut ChaCha8Rng,
) -> Result<SparsePoly<F::Elem>, CliError> {
    if text.trim() == "random" {
        return Ok(SparsePoly::random(ctx, f, cls, rng)?);
    }
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for c in compact.chars() {
        let splits = matches!(c, '+' | '-') && !matches!(prev, None | Some('+' | '-' | '*' | '/' | '^'));
        if splits {
            pieces.push((negative, std::mem::take(&mut current)));
            negative = c == '-';
        } else if c == '-' && current.is_empty() {
            negative = !negative;
        } else if c == '+' && current.is_empty() {
        } else {
            current.push(c);
        }
        prev = Some(c);
    }
    pieces.push((negative, current));
    let mut terms = Vec::new();
    for (neg, piece) in pieces {
        if piece.is_empty() {
            return Err(CliError::Job(vec![format!("malformed polynomial {text:?}")]));
        }
        let (coeff, mono) = match piece.split_once('*') {
            Some((head, rest)) => match f.parse(head) {
                Ok(c) => (c, rest.to_string()),
                Err(_) => (f.one(), piece.clone()),
            },
            None => match f.parse(&piece) {
                Ok(c) => (c, "1".to_string()),
                Err(_) => (f.one(), piece.clone()),
            },
        };
        let coeff = if neg { f.neg(&coeff) } else { coeff };
        let expo = ctx.parse_monomial(&mono)?;
        if expo.iter().all(|&e| e == 0) && f.is_zero(&coeff) {
            continue;
        }
        terms.push((expo, coeff));
    }
    Ok(SparsePoly::from_terms(ctx, f, cls.clone(), terms)?)
}

fn positivity_report(ctx: &ToricContext) -> Result<String, CliError> {
    let fan = ctx.fan();
    let rep = fan.validate();
    let cones = find_positive_cones(fan)?;
    let vars: Vec<String> = (0..ctx.num_vars()).map(|k| ctx.var_name(k)).collect();
    let mut out = format!(
        "fan: primitive={} smooth={} complete={} torus_factor_free={}\n",
        rep.primitive, rep.smooth, rep.complete, rep.torus_factor_free
    );
    out.push_str(&format!("sigma: {:?}\n", ctx.sigma()));
    out.push_str(&format!("positivity: {}\n", ctx.positivity()));
    out.push_str(&format!("positive cones: {cones:?}\n"));
    out.push_str(&format!("cox variables: {}\n", vars.join(" ")));
    out.push_str("grading:\n");
    for row in ctx.pi() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&format!("  {}\n", cells.join(" ")));
    }
    out.push_str(&format!("anticanonical: {}\n", ctx.anticanonical()));
    Ok(out)
}

fn degree_report(
    ctx: &ToricContext,
    degrees: &[DivisorClass],
    alpha: &DivisorClass,
    pivot_set: Option<&[usize]>,
) -> Result<String, CliError> {
    let mut out = format!("alpha: {alpha}\ndelta: {}\n", ctx.delta_class(degrees));
    match elimination::plan(ctx, degrees, alpha, None, pivot_set, false) {
        Ok(recipe) => {
            out.push_str("admitted: true\n");
            let mode = match recipe.mode {
                MatrixMode::Macaulay => "macaulay",
                MatrixMode::Hybrid => "hybrid",
                MatrixMode::Overdetermined => "overdetermined",
            };
            match &recipe.certificate {
                Certificate::DeltaPlusNef { nu } => out.push_str(&format!("certificate: delta-plus-nef\nnu: {nu}\n")),
                Certificate::DeltaMinusNef { nu } => out.push_str(&format!("certificate: delta-minus-nef\nnu: {nu}\n")),
                Certificate::Overdetermined { pivot_set, nu } => {
                    out.push_str(&format!("certificate: overdetermined\npivot set: {pivot_set:?}\nnu: {nu}\n"))
                }
                Certificate::Forced => out.push_str("certificate: forced\n"),
            }
            out.push_str(&format!("mode: {mode}\n"));
        }
        Err(EliminationError::NotAdmitted { reasons, .. }) => {
            out.push_str("admitted: false\n");
            for r in reasons {
                out.push_str(&format!("reason: {r}\n"));
            }
        }
        Err(EliminationError::Overdetermined(r)) => out.push_str(&format!("admitted: false\nreason: {r}\n")),
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}
