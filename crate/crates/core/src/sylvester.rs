//! Decompositions of polynomials along a monomial, toric Sylvester forms and
//! the duality certificate relating them to the toric Jacobian.
//!
//! For a monomial `x^μ` of class `ν`, every polynomial of the system splits as
//!
//! ```text
//! F = z1^(μ_z1+1)…zr^(μ_zr+1) · F_0 + x1^(μ_1+1) · F_1 + … + xn^(μ_n+1) · F_n
//! ```
//!
//! and `Sylv_μ` is the determinant of the `(n+1) x (n+1)` matrix of parts.
//! Parts are indexed by *targets*: target `0` is the `z` block, target `k`
//! is `x_k`. A [`Routing`] decides which target receives a term that is
//! divisible by several divisors.

use std::collections::BTreeMap;

use crate::elimination::macaulay_matrix;
use crate::error::SylvesterError;
use crate::polyalg::field::Field;
use crate::polyalg::matrix::in_column_span;
use crate::polyalg::poly::{PolyMatrix, SparsePoly};
use crate::toric::{DivisorClass, GradedMonomial, ToricContext};

/// Target priorities, with optional per-monomial overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Routing {
    default: Vec<usize>,
    overrides: BTreeMap<Vec<u32>, Vec<usize>>,
}

impl Routing {
    /// `z` block first, then `x1, …, xn`.
    pub fn standard(n: usize) -> Self {
        Self { default: (0..=n).collect(), overrides: BTreeMap::new() }
    }

    pub fn with_priority(priority: Vec<usize>) -> Result<Self, SylvesterError> {
        check_permutation(&priority)?;
        Ok(Self { default: priority, overrides: BTreeMap::new() })
    }

    /// Uses `priority` for the monomial with exponent `mu` only.
    pub fn with_override(mut self, mu: Vec<u32>, priority: Vec<usize>) -> Result<Self, SylvesterError> {
        check_permutation(&priority)?;
        if priority.len() != self.default.len() {
            return Err(SylvesterError::BadRouting(priority));
        }
        self.overrides.insert(mu, priority);
        Ok(self)
    }

    pub fn priority_for(&self, mu: &[u32]) -> &[usize] {
        self.overrides.get(mu).unwrap_or(&self.default)
    }
}

fn check_permutation(p: &[usize]) -> Result<(), SylvesterError> {
    let mut s = p.to_vec();
    s.sort_unstable();
    if s.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(SylvesterError::BadRouting(p.to_vec()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<E> {
    pub source: SparsePoly<E>,
    pub mu: GradedMonomial,
    pub parts: Vec<SparsePoly<E>>,
    pub divisors: Vec<GradedMonomial>,
}

impl<E: Clone + PartialEq> Decomposition<E> {
    /// `Σ divisors[j] · parts[j]`.
    pub fn reconstruct<F: Field<Elem = E>>(&self, f: &F) -> SparsePoly<E> {
        let mut acc = SparsePoly::zero(self.source.cls().clone());
        for (p, d) in self.parts.iter().zip(&self.divisors) {
            acc = acc.add(f, &p.mul_monomial(d)).expect("parts times divisors share the source class");
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterForm<E> {
    pub mu: GradedMonomial,
    pub value: SparsePoly<E>,
    pub parts_matrix: PolyMatrix<E>,
}

/// The divisors `z^(μ_z+1)`, `x1^(μ_1+1)`, …, `xn^(μ_n+1)`.
pub fn divisors_for(ctx: &ToricContext, mu: &GradedMonomial) -> Result<Vec<GradedMonomial>, SylvesterError> {
    let n = ctx.n();
    let mut out = Vec::with_capacity(n + 1);
    let mut z = vec![0; ctx.num_vars()];
    for k in n..ctx.num_vars() {
        z[k] = mu.expo[k] + 1;
    }
    out.push(ctx.graded(z)?);
    for k in 0..n {
        let mut x = vec![0; ctx.num_vars()];
        x[k] = mu.expo[k] + 1;
        out.push(ctx.graded(x)?);
    }
    Ok(out)
}

fn divides(d: &[u32], e: &[u32]) -> bool {
    d.iter().zip(e).all(|(a, b)| a <= b)
}

/// Decomposition with the standard routing.
pub fn decompose<F: Field>(
    ctx: &ToricContext,
    f: &F,
    poly: &SparsePoly<F::Elem>,
    mu: &GradedMonomial,
) -> Result<Decomposition<F::Elem>, SylvesterError> {
    decompose_with(ctx, f, poly, mu, &Routing::standard(ctx.n()), 0)
}

/// Sends each term to the first target in the routing priority whose divisor
/// divides it. `index` only labels errors.
pub fn decompose_with<F: Field>(
    ctx: &ToricContext,
    f: &F,
    poly: &SparsePoly<F::Elem>,
    mu: &GradedMonomial,
    routing: &Routing,
    index: usize,
) -> Result<Decomposition<F::Elem>, SylvesterError> {
    if mu.expo.len() != ctx.num_vars() {
        return Err(crate::error::ToricError::ExponentLength { expected: ctx.num_vars(), found: mu.expo.len() }.into());
    }
    let priority = routing.priority_for(&mu.expo);
    if priority.len() != ctx.n() + 1 {
        return Err(SylvesterError::BadRouting(priority.to_vec()));
    }
    let divisors = divisors_for(ctx, mu)?;
    let mut parts: Vec<SparsePoly<F::Elem>> =
        divisors.iter().map(|d| SparsePoly::zero(poly.cls() - &d.cls)).collect();
    for (e, c) in poly.terms() {
        let Some(&t) = priority.iter().find(|&&t| divides(&divisors[t].expo, e)) else {
            return Err(SylvesterError::Unroutable { poly: index, term: ctx.format_monomial(e) });
        };
        let q: Vec<u32> = e.iter().zip(&divisors[t].expo).map(|(a, b)| a - b).collect();
        let term = SparsePoly::from_terms(ctx, f, parts[t].cls().clone(), [(q, c.clone())])?;
        parts[t] = parts[t].add(f, &term)?;
    }
    Ok(Decomposition { source: poly.clone(), mu: mu.clone(), parts, divisors })
}

pub fn sylvester_form<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    mu: &GradedMonomial,
) -> Result<SylvesterForm<F::Elem>, SylvesterError> {
    sylvester_form_with(ctx, f, system, mu, &Routing::standard(ctx.n()))
}

pub fn sylvester_form_with<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    mu: &GradedMonomial,
    routing: &Routing,
) -> Result<SylvesterForm<F::Elem>, SylvesterError> {
    if !ctx.positivity() {
        return Err(SylvesterError::NoPositivity);
    }
    if system.len() != ctx.n() + 1 {
        return Err(SylvesterError::SystemSize { expected: ctx.n() + 1, found: system.len() });
    }
    let found = ctx.degree_of(&mu.expo)?;
    if found != mu.cls {
        return Err(SylvesterError::MonomialClass { expected: mu.cls.to_string(), found: found.to_string() });
    }
    let degrees: Vec<DivisorClass> = system.iter().map(|p| p.cls().clone()).collect();
    if !ctx.decomposition_degree_ok(&mu.cls, &degrees)? {
        return Err(SylvesterError::DegreeCondition { nu: mu.cls.to_string() });
    }
    let mut rows = Vec::with_capacity(system.len());
    let mut divisors = Vec::new();
    for (i, p) in system.iter().enumerate() {
        let d = decompose_with(ctx, f, p, mu, routing, i)?;
        divisors = d.divisors;
        rows.push(d.parts);
    }
    let col_cls = divisors.iter().map(|d| d.cls.clone()).collect();
    let parts_matrix = PolyMatrix::new(rows, degrees, col_cls)?;
    let value = parts_matrix.det(f);
    Ok(SylvesterForm { mu: mu.clone(), value, parts_matrix })
}

/// The Sylvester form at `μ = 0`; requires every polytope to be full-dimensional.
pub fn toric_jacobian<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    routing: &Routing,
) -> Result<SylvesterForm<F::Elem>, SylvesterError> {
    for (index, p) in system.iter().enumerate() {
        if !ctx.is_full_dimensional(p.cls())? {
            return Err(SylvesterError::LowerDimensional { index });
        }
    }
    let zero = ctx.graded(vec![0; ctx.num_vars()])?;
    sylvester_form_with(ctx, f, system, &zero, routing)
}

/// Tests `x^μ' · Sylv_μ − [μ = μ'] · Sylv_0 ∈ I_δ` by column-span membership
/// against the Macaulay matrix in degree `δ`.
pub fn duality_certificate<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    mu: &GradedMonomial,
    mu_prime: &GradedMonomial,
    routing: &Routing,
) -> Result<bool, SylvesterError> {
    if mu.cls != mu_prime.cls {
        return Err(SylvesterError::MonomialClass { expected: mu.cls.to_string(), found: mu_prime.cls.to_string() });
    }
    let sylv = sylvester_form_with(ctx, f, system, mu, routing)?.value;
    let mut v = sylv.mul_monomial(mu_prime);
    if mu == mu_prime {
        let zero = ctx.graded(vec![0; ctx.num_vars()])?;
        let sylv0 = sylvester_form_with(ctx, f, system, &zero, routing)?.value;
        v = v.sub(f, &sylv0)?;
    }
    let delta = ctx.delta_class(&system.iter().map(|p| p.cls().clone()).collect::<Vec<_>>());
    if v.cls() != &delta {
        return Err(SylvesterError::MonomialClass { expected: delta.to_string(), found: v.cls().to_string() });
    }
    let m = macaulay_matrix(ctx, f, system, &delta)?;
    let basis = ctx.monomial_basis(&delta)?;
    let coeffs = v.coefficient_vector(f, &basis)?;
    Ok(in_column_span(f, &m.matrix, &coeffs)?)
}
