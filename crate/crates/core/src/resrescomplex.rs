//! Koszul strands, determinants of complexes, sparse resultants and toric
//! residues computed from bordered hybrid matrices.

use std::collections::HashMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::elimination::{hybrid_matrix_with, macaulay_matrix};
use crate::error::ComplexError;
use crate::polyalg::field::Field;
use crate::polyalg::labeled::{Label, LabeledScalarMatrix};
use crate::polyalg::matrix::{det, independent_columns, Matrix};
use crate::polyalg::poly::SparsePoly;
use crate::sylvester::{sylvester_form_with, Routing};
use crate::toric::{DivisorClass, ToricContext};

/// The degree-`α` strand `K_m → … → K_1 → K_0 = C_α` of the Koszul complex.
/// `maps[k-1]` is `d_k : K_k → K_{k-1}`; trailing empty terms are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulStrand<E> {
    pub alpha: DivisorClass,
    pub maps: Vec<LabeledScalarMatrix<E>>,
    pub saturated: bool,
}

impl<E: Clone> KoszulStrand<E> {
    /// Ranks of the terms, `K_0` first.
    pub fn term_sizes(&self) -> Vec<usize> {
        let mut out = vec![self.maps.first().map_or(0, |m| m.matrix.rows())];
        out.extend(self.maps.iter().map(|m| m.matrix.cols()));
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.term_sizes()
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Whether every `d_{k-1} ∘ d_k` vanishes.
    pub fn is_complex<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.windows(2).all(|w| {
            let prod = crate::polyalg::matrix::mul(f, &w[0].matrix, &w[1].matrix).expect("composable");
            crate::polyalg::matrix::is_zero_matrix(f, &prod)
        })
    }
}

/// Builds the strand. When `saturated`, `d_1` is the hybrid matrix and `d_2`
/// gets a zero row per Sylvester column.
pub fn koszul_strand<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    saturated: bool,
    routing: &Routing,
) -> Result<KoszulStrand<F::Elem>, ComplexError> {
    let d1 = if saturated {
        hybrid_matrix_with(ctx, f, system, alpha, routing)?
    } else {
        macaulay_matrix(ctx, f, system, alpha)?
    };
    let mut maps = vec![d1];
    let top = (2..=system.len()).rev().find(|&k| has_terms(ctx, system, alpha, k)).unwrap_or(1);
    for k in 2..=top {
        let prev_labels = maps[k - 2].cols.clone();
        let index: HashMap<(Vec<usize>, &[u32]), usize> = prev_labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match l {
                Label::Multiple { poly, shift } => Some(((vec![*poly], shift.expo.as_slice()), i)),
                Label::Koszul { subset, shift } => Some(((subset.clone(), shift.expo.as_slice()), i)),
                _ => None,
            })
            .collect();
        let mut labels = Vec::new();
        for subset in (0..system.len()).combinations(k) {
            let cls = subset.iter().fold(alpha.clone(), |acc, &j| &acc - system[j].cls());
            for shift in ctx.monomial_basis(&cls)? {
                labels.push(Label::Koszul { subset: subset.clone(), shift });
            }
        }
        let mut m = Matrix::zeros(f, prev_labels.len(), labels.len());
        for (c, label) in labels.iter().enumerate() {
            let Label::Koszul { subset, shift } = label else { unreachable!() };
            for (p, &j) in subset.iter().enumerate() {
                let rest: Vec<usize> = subset.iter().copied().filter(|&x| x != j).collect();
                for (expo, coeff) in system[j].mul_monomial(shift).terms() {
                    let row = index[&(rest.clone(), expo.as_slice())];
                    let v = if p % 2 == 0 { coeff.clone() } else { f.neg(coeff) };
                    m.set(row, c, f.add(m.get(row, c), &v));
                }
            }
        }
        maps.push(LabeledScalarMatrix::new(m, prev_labels, labels)?);
    }
    Ok(KoszulStrand { alpha: alpha.clone(), maps, saturated })
}

fn has_terms<E: Clone>(ctx: &ToricContext, system: &[SparsePoly<E>], alpha: &DivisorClass, k: usize) -> bool {
    (0..system.len()).combinations(k).any(|subset| {
        let cls = subset.iter().fold(alpha.clone(), |acc, &j| &acc - system[j].cls());
        ctx.monomial_basis(&cls).is_ok_and(|b| !b.is_empty())
    })
}

/// Alternating product of minors, chosen from the injective end: rows of
/// `d_k` are picked greedily in `row_orders[k-1]`, and their complement fixes
/// the columns of `d_{k-1}`.
fn complex_det_with<F: Field>(
    f: &F,
    strand: &KoszulStrand<F::Elem>,
    row_orders: &[Vec<usize>],
) -> Result<F::Elem, ComplexError> {
    let m = strand.maps.len();
    if m == 0 {
        return Ok(f.one());
    }
    let mut cols: Vec<usize> = (0..strand.maps[m - 1].matrix.cols()).collect();
    let mut value = f.one();
    for k in (1..=m).rev() {
        let d = &strand.maps[k - 1].matrix;
        let fail = if k == 1 { ComplexError::NotSurjective } else { ComplexError::Degenerate { level: k } };
        let t = d.transpose();
        let mut rows = independent_columns(f, &t, &cols, &row_orders[k - 1]);
        if rows.len() < cols.len() || (k == 1 && rows.len() < d.rows()) {
            return Err(fail);
        }
        rows.sort_unstable();
        let minor = det(f, &d.submatrix(&rows, &cols))?;
        value = if k % 2 == 1 { f.mul(&value, &minor) } else { f.div(&value, &minor)? };
        cols = (0..d.rows()).filter(|i| rows.binary_search(i).is_err()).collect();
    }
    Ok(value)
}

/// Deterministic: rows are scanned left to right at every level.
pub fn determinant_of_complex<F: Field>(f: &F, strand: &KoszulStrand<F::Elem>) -> Result<F::Elem, ComplexError> {
    let orders: Vec<Vec<usize>> = strand.maps.iter().map(|d| (0..d.matrix.rows()).collect()).collect();
    complex_det_with(f, strand, &orders)
}

/// Same value up to sign, with randomly permuted scan orders.
pub fn determinant_of_complex_shuffled<F: Field, R: Rng + ?Sized>(
    f: &F,
    strand: &KoszulStrand<F::Elem>,
    rng: &mut R,
) -> Result<F::Elem, ComplexError> {
    let orders: Vec<Vec<usize>> = strand
        .maps
        .iter()
        .map(|d| {
            let mut o: Vec<usize> = (0..d.matrix.rows()).collect();
            o.shuffle(rng);
            o
        })
        .collect();
    complex_det_with(f, strand, &orders)
}

/// The sparse resultant up to a nonzero constant: `det ℍ_α` when the
/// saturated strand is a single square map, otherwise the determinant of
/// the strand. A non-surjective `d_1` means the resultant vanishes.
pub fn sparse_resultant<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    routing: &Routing,
) -> Result<F::Elem, ComplexError> {
    let strand = koszul_strand(ctx, f, system, alpha, true, routing)?;
    if strand.maps.len() == 1 && strand.maps[0].matrix.is_square() {
        return Ok(det(f, &strand.maps[0].matrix)?);
    }
    match determinant_of_complex(f, &strand) {
        Err(ComplexError::NotSurjective) => Ok(f.zero()),
        other => other,
    }
}

// Square submatrix of ℍ_{δ−ν} holding every Sylvester column, completed by
// the leftmost independent Macaulay columns.
fn square_hybrid<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    cls: &DivisorClass,
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, ComplexError> {
    let h = hybrid_matrix_with(ctx, f, system, cls, routing)?;
    if h.matrix.is_square() {
        return Ok(h);
    }
    let sylv = h.sylvester_columns();
    let mut order = sylv.clone();
    order.extend((0..h.cols.len()).filter(|j| !h.cols[*j].is_sylvester()));
    let rows: Vec<usize> = (0..h.rows.len()).collect();
    let chosen = independent_columns(f, &h.matrix, &rows, &order);
    if chosen.len() < rows.len() || !sylv.iter().all(|j| chosen.contains(j)) {
        return Err(ComplexError::ResultantVanishes);
    }
    let mut chosen = chosen;
    chosen.sort_unstable();
    Ok(h.select_columns(&chosen))
}

fn theta_from<F: Field>(
    ctx: &ToricContext,
    f: &F,
    h: &LabeledScalarMatrix<F::Elem>,
    p: &SparsePoly<F::Elem>,
    q: &SparsePoly<F::Elem>,
) -> Result<LabeledScalarMatrix<F::Elem>, ComplexError> {
    let rows: Vec<_> = h
        .rows
        .iter()
        .map(|l| match l {
            Label::Monomial(g) => g.clone(),
            _ => unreachable!("hybrid rows are monomials"),
        })
        .collect();
    let mut m = h.matrix.clone();
    m.push_column(q.coefficient_vector(f, &rows)?)?;
    let mut last = Vec::with_capacity(h.cols.len() + 1);
    for l in &h.cols {
        last.push(match l {
            Label::Sylvester { mu, .. } => p.coefficient(&mu.expo).cloned().unwrap_or_else(|| f.zero()),
            _ => f.zero(),
        });
    }
    last.push(f.zero());
    // Every term of P must sit under some Sylvester column.
    for expo in p.terms().keys() {
        let covered = h.cols.iter().any(|l| matches!(l, Label::Sylvester { mu, .. } if &mu.expo == expo));
        if !covered {
            return Err(ComplexError::EmptyBasis(ctx.format_monomial(expo)));
        }
    }
    m.push_row(last)?;
    let mut row_labels = h.rows.clone();
    row_labels.push(Label::External("p".into()));
    let mut col_labels = h.cols.clone();
    col_labels.push(Label::External("q".into()));
    Ok(LabeledScalarMatrix::new(m, row_labels, col_labels)?)
}

fn check_classes<F: Field>(
    ctx: &ToricContext,
    system: &[SparsePoly<F::Elem>],
    p: &SparsePoly<F::Elem>,
    q: &SparsePoly<F::Elem>,
) -> Result<DivisorClass, ComplexError> {
    let degrees: Vec<DivisorClass> = system.iter().map(|s| s.cls().clone()).collect();
    let delta = ctx.delta_class(&degrees);
    let want = &delta - p.cls();
    if q.cls() != &want {
        return Err(ComplexError::ClassMismatch { expected: want.to_string(), found: q.cls().to_string() });
    }
    if ctx.monomial_basis(p.cls())?.is_empty() {
        return Err(ComplexError::EmptyBasis(p.cls().to_string()));
    }
    Ok(want)
}

/// The bordered matrix `Θ = (ℋ q; 0 pᵀ 0)` with `ℋ` the (square part of the)
/// hybrid matrix in degree `δ − ν`, `ν` the class of `p`.
pub fn theta_matrix<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    p: &SparsePoly<F::Elem>,
    q: &SparsePoly<F::Elem>,
    routing: &Routing,
) -> Result<LabeledScalarMatrix<F::Elem>, ComplexError> {
    let cls = check_classes::<F>(ctx, system, p, q)?;
    let h = square_hybrid(ctx, f, system, &cls, routing)?;
    theta_from(ctx, f, &h, p, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueResult<E> {
    pub value: E,
    /// `det Θ` for `(P, Q)`.
    pub numerator: E,
    /// `det ℋ`.
    pub denominator: E,
    /// `det Θ / det ℋ` for `(x^μ0, Sylv_μ0)`, which the value is divided by.
    pub normalization: E,
}

/// Toric residue of `P·Q`, scaled so that the residue of the toric Jacobian is one.
pub fn residue_of_product<F: Field>(
    ctx: &ToricContext,
    f: &F,
    system: &[SparsePoly<F::Elem>],
    p: &SparsePoly<F::Elem>,
    q: &SparsePoly<F::Elem>,
    routing: &Routing,
) -> Result<ResidueResult<F::Elem>, ComplexError> {
    let cls = check_classes::<F>(ctx, system, p, q)?;
    let h = square_hybrid(ctx, f, system, &cls, routing)?;
    let denominator = det(f, &h.matrix)?;
    if f.is_zero(&denominator) {
        return Err(ComplexError::ResultantVanishes);
    }
    let mu0 = ctx.monomial_basis(p.cls())?.into_iter().next().expect("checked nonempty");
    let sylv0 = sylvester_form_with(ctx, f, system, &mu0, routing)?.value;
    let x_mu0 = SparsePoly::monomial(f, &mu0);
    let reference = det(f, &theta_from(ctx, f, &h, &x_mu0, &sylv0)?.matrix)?;
    let normalization = f.div(&reference, &denominator)?;
    if f.is_zero(&normalization) {
        return Err(ComplexError::ResultantVanishes);
    }
    let numerator = det(f, &theta_from(ctx, f, &h, p, q)?.matrix)?;
    let value = f.div(&f.div(&numerator, &denominator)?, &normalization)?;
    Ok(ResidueResult { value, numerator, denominator, normalization })
}
