//! Macaulay and hybrid elimination matrices, their degree certificates and
//! solution counting by corank.
//!
//! Rows are always the monomial basis of `C_α`. Multiple-columns come first,
//! grouped by polynomial and ordered by shift; Sylvester columns follow,
//! ordered by subsystem and then by `μ`.

use itertools::Itertools;
use rand::Rng;

use crate::error::{EliminationError, PolyError};
use crate::polyalg::field::Field;
use crate::polyalg::labeled::{Label, LabeledScalarMatrix};
use crate::polyalg::matrix::{corank, nullspace, Matrix};
use crate::polyalg::poly::SparsePoly;
use crate::sylvester::{sylvester_form_with, Routing};
use crate::toric::{DivisorClass, ToricContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixMode {
    Macaulay,
    Hybrid,
    Overdetermined,
}

/// Why a degree was admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `α = δ + ν` with `ν` nef.
    DeltaPlusNef { nu: DivisorClass },
    /// `α = δ − ν`, `ν` nef with the decomposition bound, every `α_i − ν` nef.
    DeltaMinusNef { nu: DivisorClass },
    /// `α = δ_S − ν` for an overdetermined system.
    Overdetermined { pivot_set: Vec<usize>, nu: DivisorClass },
    /// Supplied by the caller without a check.
    Forced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRecipe {
    pub alpha: DivisorClass,
    pub mode: MatrixMode,
    pub certificate: Certificate,
}

fn degrees_of<E: Clone>(system: &[SparsePoly<E>]) -> Vec<DivisorClass> {
    system.iter().map(|p| p.cls().clone()).collect()
}

/// Columns `x^γ · F_i` for every `i` and every `x^γ ∈ C_{α−α_i}`.
pub fn macaulay_matrix<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
) -> Result<LabeledScalarMatrix<F::Elem>, PolyError> {
    let rows = ctx.monomial_basis(alpha)?;
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (i, p) in system.iter().enumerate() {
        for shift in ctx.monomial_basis(&(alpha - p.cls()))? {
            cols.push(p.mul_monomial(&shift).coefficient_vector(f, &rows)?);
            labels.push(Label::Multiple { poly: i, shift });
        }
    }
    let matrix = Matrix::from_columns(cols, rows.len())?;
    LabeledScalarMatrix::new(matrix, rows.into_iter().map(Label::Monomial).collect(), labels)
}

pub fn hybrid_matrix<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
) -> Result<LabeledScalarMatrix<F::Elem>, EliminationError> {
    hybrid_matrix_with(ctx, f, system, alpha, &Routing::standard(ctx.n()))
}

/// Macaulay block followed by one Sylvester column per `x^μ ∈ C_{δ−α}`.
pub fn hybrid_matrix_with<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, EliminationError> {
    if system.len() != ctx.n() + 1 {
        return Err(EliminationError::SystemSize { expected: ctx.n() + 1, found: system.len() });
    }
    let mut m = macaulay_matrix(ctx, f, system, alpha)?;
    append_sylvester_columns(ctx, f, system, None, alpha, routing, &mut m)?;
    Ok(m)
}

fn append_sylvester_columns<F: Field>(
    ctx: &ToricContext,
    f: &F,
    subsystem: &[SparsePoly<F::Elem>],
    subset: Option<Vec<usize>>,
    alpha: &DivisorClass,
    routing: &Routing,
    m: &mut LabeledScalarMatrix<F::Elem>,
) -> Result<(), EliminationError> {
    let delta = ctx.delta_class(&degrees_of(subsystem));
    let nu = &delta - alpha;
    let mus = ctx.monomial_basis(&nu)?;
    if mus.is_empty() {
        return Ok(());
    }
    let rows: Vec<_> = m
        .rows
        .iter()
        .map(|l| match l {
            Label::Monomial(g) => g.clone(),
            _ => unreachable!("elimination rows are monomials"),
        })
        .collect();
    for mu in mus {
        let s = sylvester_form_with(ctx, f, subsystem, &mu, routing)?;
        m.matrix.push_column(s.value.coefficient_vector(f, &rows)?)?;
        m.cols.push(Label::Sylvester { mu, subset: subset.clone() });
    }
    Ok(())
}

/// Sufficient nef criteria. Clause (ii) is tried first, so `α = δ` is
/// reported as hybrid with `ν = 0`.
pub fn degree_valid(
    ctx: &ToricContext,
    degrees: &[DivisorClass],
    alpha: &DivisorClass,
) -> Result<Certificate, EliminationError> {
    let mut reasons = Vec::new();
    for (i, d) in degrees.iter().enumerate() {
        if !ctx.is_full_dimensional(d)? {
            reasons.push(format!("polytope {i} of class {d} is not full-dimensional"));
        }
    }
    if reasons.is_empty() {
        let delta = ctx.delta_class(degrees);
        let nu = &delta - alpha;
        let mut minus_ok = true;
        if !ctx.is_nef_class(&nu)? {
            reasons.push(format!("δ−α = {nu} is not nef"));
            minus_ok = false;
        } else if !ctx.decomposition_degree_ok(&nu, degrees)? {
            reasons.push(format!("δ−α = {nu} violates the decomposition bound"));
            minus_ok = false;
        } else {
            for (i, d) in degrees.iter().enumerate() {
                let diff = d - &nu;
                if !ctx.is_nef_class(&diff)? {
                    reasons.push(format!("α_{i} − ν = {diff} is not nef"));
                    minus_ok = false;
                }
            }
        }
        if minus_ok {
            return Ok(Certificate::DeltaMinusNef { nu });
        }
        let nu = alpha - &delta;
        if ctx.is_nef_class(&nu)? {
            return Ok(Certificate::DeltaPlusNef { nu });
        }
        reasons.push(format!("α−δ = {nu} is not nef"));
    }
    Err(EliminationError::NotAdmitted { alpha: alpha.to_string(), reasons })
}

/// Checks the overdetermined conditions for pivot set `s` and returns `ν = δ_S − α`.
pub fn overdetermined_certificate(
    ctx: &ToricContext,
    degrees: &[DivisorClass],
    alpha: &DivisorClass,
    s: &[usize],
) -> Result<DivisorClass, EliminationError> {
    let n = ctx.n();
    if degrees.len() < n + 2 {
        return Err(EliminationError::SystemSize { expected: n + 2, found: degrees.len() });
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n + 1 || sorted.iter().any(|&i| i >= degrees.len()) {
        return Err(EliminationError::BadPivotSet(s.to_vec()));
    }
    let chosen: Vec<DivisorClass> = sorted.iter().map(|&i| degrees[i].clone()).collect();
    let nu = &ctx.delta_class(&chosen) - alpha;
    let reject = |msg: String| Err(EliminationError::Overdetermined(msg));
    if !ctx.is_nef_class(&nu)? {
        return reject(format!("ν = {nu} is not nef"));
    }
    if !ctx.decomposition_degree_ok(&nu, degrees)? {
        return reject(format!("ν = {nu} violates the decomposition bound"));
    }
    for &i in &sorted {
        for j in (0..degrees.len()).filter(|j| !sorted.contains(j)) {
            let diff = &degrees[i] - &degrees[j];
            if !ctx.is_nef_class(&diff)? {
                return reject(format!("α_{i} − α_{j} = {diff} is not nef"));
            }
        }
        let diff = &degrees[i] - &nu;
        if !ctx.is_nef_class(&diff)? {
            return reject(format!("α_{i} − ν = {diff} is not nef (index {i})"));
        }
    }
    Ok(nu)
}

/// All pivot sets for which [`overdetermined_certificate`] succeeds.
pub fn find_pivot_sets(
    ctx: &ToricContext,
    degrees: &[DivisorClass],
    alpha: &DivisorClass,
) -> Result<Vec<Vec<usize>>, EliminationError> {
    let mut out = Vec::new();
    for s in (0..degrees.len()).combinations(ctx.n() + 1) {
        match overdetermined_certificate(ctx, degrees, alpha, &s) {
            Ok(_) => out.push(s),
            Err(EliminationError::Overdetermined(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Hybrid matrix of an overdetermined system, certified by pivot set `s`.
pub fn overdetermined_hybrid_matrix<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    s: &[usize],
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, EliminationError> {
    if system.len() == ctx.n() + 1 {
        return hybrid_matrix_with(ctx, f, system, alpha, routing);
    }
    overdetermined_certificate(ctx, &degrees_of(system), alpha, s)?;
    overdetermined_columns(ctx, f, system, alpha, routing)
}

// Multiples of every polynomial, then Sylvester columns of every subsystem of
// size n+1 in lexicographic order.
fn overdetermined_columns<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, EliminationError> {
    let mut m = macaulay_matrix(ctx, f, system, alpha)?;
    for t in (0..system.len()).combinations(ctx.n() + 1) {
        let sub: Vec<_> = t.iter().map(|&i| system[i].clone()).collect();
        append_sylvester_columns(ctx, f, &sub, Some(t), alpha, routing, &mut m)?;
    }
    Ok(m)
}

/// Chooses the construction for `alpha`. With `force`, degrees that fail the
/// nef criteria are still accepted under [`Certificate::Forced`].
pub fn plan(
    ctx: &ToricContext,
    degrees: &[DivisorClass],
    alpha: &DivisorClass,
    mode: Option<MatrixMode>,
    pivot_set: Option<&[usize]>,
    force: bool,
) -> Result<MatrixRecipe, EliminationError> {
    let n = ctx.n();
    if degrees.len() < n + 1 {
        return Err(EliminationError::SystemSize { expected: n + 1, found: degrees.len() });
    }
    let overdetermined = degrees.len() > n + 1;
    let certificate = if overdetermined {
        let certified = match pivot_set {
            Some(s) => overdetermined_certificate(ctx, degrees, alpha, s).map(|nu| (s.to_vec(), nu)),
            None => match find_pivot_sets(ctx, degrees, alpha)?.into_iter().next() {
                Some(s) => overdetermined_certificate(ctx, degrees, alpha, &s).map(|nu| (s, nu)),
                None => Err(EliminationError::Overdetermined(format!("no pivot set certifies {alpha}"))),
            },
        };
        match certified {
            Ok((pivot_set, nu)) => Certificate::Overdetermined { pivot_set, nu },
            Err(_) if force => Certificate::Forced,
            Err(e) => return Err(e),
        }
    } else {
        match degree_valid(ctx, degrees, alpha) {
            Ok(c) => c,
            Err(_) if force => Certificate::Forced,
            Err(e) => return Err(e),
        }
    };
    let mode = match mode {
        Some(m) => m,
        None if overdetermined => MatrixMode::Overdetermined,
        None => {
            let nu = &ctx.delta_class(degrees) - alpha;
            if ctx.monomial_basis(&nu)?.is_empty() {
                MatrixMode::Macaulay
            } else {
                MatrixMode::Hybrid
            }
        }
    };
    Ok(MatrixRecipe { alpha: alpha.clone(), mode, certificate })
}

pub fn build<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    recipe: &MatrixRecipe,
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, EliminationError> {
    match recipe.mode {
        MatrixMode::Macaulay => Ok(macaulay_matrix(ctx, f, system, &recipe.alpha)?),
        MatrixMode::Hybrid => hybrid_matrix_with(ctx, f, system, &recipe.alpha, routing),
        MatrixMode::Overdetermined => overdetermined_columns(ctx, f, system, &recipe.alpha, routing),
    }
}

/// Corank of the elimination matrix; equals the number of solutions when
/// the specialized system has finitely many.
pub fn count_solutions<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    recipe: &MatrixRecipe,
    routing: &Routing,
) -> Result<usize, EliminationError> {
    let m = build(ctx, f, system, recipe, routing)?;
    Ok(corank(f, &m.matrix))
}

/// `count` random forms of class `cls` vanishing at the given torus points.
/// Points are in the coordinates `x1..xn` with every `z` set to one.
pub fn forms_through_points<F: Field, R: Rng + ?Sized>(
    ctx: &ToricContext,
    f: &F,
    cls: &DivisorClass,
    points: &[Vec<F::Elem>],
    count: usize,
    rng: &mut R,
) -> Result<Vec<SparsePoly<F::Elem>>, EliminationError> {
    let basis = ctx.monomial_basis(cls)?;
    let mut rows = Vec::with_capacity(points.len());
    for (k, t) in points.iter().enumerate() {
        if t.len() != ctx.n() || t.iter().any(|x| f.is_zero(x)) {
            return Err(EliminationError::BadPoint(k));
        }
        let mut cox = t.clone();
        cox.extend((0..ctx.r()).map(|_| f.one()));
        let row = basis
            .iter()
            .map(|m| SparsePoly::monomial(f, m).evaluate(f, &cox))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let eval = Matrix::from_rows(rows, basis.len())?;
    let kernel = nullspace(f, &eval);
    if kernel.is_empty() {
        return Err(EliminationError::NoFittedForms(cls.to_string()));
    }
    (0..count)
        .map(|_| {
            let mut v = vec![f.zero(); basis.len()];
            for k in &kernel {
                let c = f.random(rng);
                for (x, y) in v.iter_mut().zip(k) {
                    *x = f.add(x, &f.mul(&c, y));
                }
            }
            Ok(SparsePoly::from_coefficient_vector(f, cls.clone(), &basis, &v)?)
        })
        .collect()
}
