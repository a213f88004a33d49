//! Scalar matrices whose rows and columns carry algebraic labels.

use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::polyalg::field::Field;
use crate::polyalg::matrix::Matrix;
use crate::toric::{GradedMonomial, ToricContext};

/// What a row or column of an elimination matrix stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A monomial of the target graded piece.
    Monomial(GradedMonomial),
    /// The product `shift * F_poly`.
    Multiple { poly: usize, shift: GradedMonomial },
    /// A basis element `shift * e_J` of a Koszul term.
    Koszul { subset: Vec<usize>, shift: GradedMonomial },
    /// The Sylvester form attached to `mu`, optionally for a subsystem.
    Sylvester { mu: GradedMonomial, subset: Option<Vec<usize>> },
    External(String),
}

impl Label {
    pub fn is_sylvester(&self) -> bool {
        matches!(self, Label::Sylvester { .. })
    }

    pub fn tag(&self, ctx: &ToricContext) -> String {
        let mono = |m: &GradedMonomial| ctx.format_monomial(&m.expo);
        match self {
            Label::Monomial(m) => mono(m),
            Label::Multiple { poly, shift } => format!("F{poly}*{}", mono(shift)),
            Label::Koszul { subset, shift } => format!("e{}*{}", index_list(subset, '[', ']'), mono(shift)),
            Label::Sylvester { mu, subset: None } => format!("Sylv[{}]", mono(mu)),
            Label::Sylvester { mu, subset: Some(t) } => format!("Sylv[{}]{}", mono(mu), index_list(t, '{', '}')),
            Label::External(s) => format!("ext:{s}"),
        }
    }

    pub fn parse(ctx: &ToricContext, tag: &str) -> Result<Label, PolyError> {
        let bad = || PolyError::Export(format!("unrecognized label {tag:?}"));
        let graded = |s: &str| -> Result<GradedMonomial, PolyError> {
            let expo = ctx.parse_monomial(s)?;
            Ok(ctx.graded(expo)?)
        };
        if let Some(rest) = tag.strip_prefix("ext:") {
            return Ok(Label::External(rest.to_string()));
        }
        if let Some(rest) = tag.strip_prefix("Sylv[") {
            let (mu, tail) = rest.split_once(']').ok_or_else(bad)?;
            let subset = if tail.is_empty() {
                None
            } else {
                let inner = tail.strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
                Some(parse_indices(inner).ok_or_else(bad)?)
            };
            return Ok(Label::Sylvester { mu: graded(mu)?, subset });
        }
        if let Some(rest) = tag.strip_prefix("e[") {
            let (inner, tail) = rest.split_once(']').ok_or_else(bad)?;
            let shift = tail.strip_prefix('*').ok_or_else(bad)?;
            return Ok(Label::Koszul { subset: parse_indices(inner).ok_or_else(bad)?, shift: graded(shift)? });
        }
        if let Some(rest) = tag.strip_prefix('F') {
            let (idx, shift) = rest.split_once('*').ok_or_else(bad)?;
            let poly = idx.parse().map_err(|_| bad())?;
            return Ok(Label::Multiple { poly, shift: graded(shift)? });
        }
        Ok(Label::Monomial(graded(tag)?))
    }
}

fn index_list(v: &[usize], open: char, close: char) -> String {
    let inner: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{open}{}{close}", inner.join(","))
}

fn parse_indices(s: &str) -> Option<Vec<usize>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// Dense scalar matrix with labeled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledScalarMatrix<E> {
    pub matrix: Matrix<E>,
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
}

/// Plain-text view used for structured export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixView {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl<E: Clone> LabeledScalarMatrix<E> {
    pub fn new(matrix: Matrix<E>, rows: Vec<Label>, cols: Vec<Label>) -> Result<Self, PolyError> {
        if matrix.rows() != rows.len() {
            return Err(PolyError::LengthMismatch { expected: matrix.rows(), found: rows.len() });
        }
        if matrix.cols() != cols.len() {
            return Err(PolyError::LengthMismatch { expected: matrix.cols(), found: cols.len() });
        }
        Ok(Self { matrix, rows, cols })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.rows(), self.matrix.cols())
    }

    /// Indices of the Sylvester columns.
    pub fn sylvester_columns(&self) -> Vec<usize> {
        (0..self.cols.len()).filter(|&j| self.cols[j].is_sylvester()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let all_rows: Vec<usize> = (0..self.rows.len()).collect();
        Self {
            matrix: self.matrix.submatrix(&all_rows, cols),
            rows: self.rows.clone(),
            cols: cols.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    pub fn view<F: Field<Elem = E>>(&self, ctx: &ToricContext, f: &F) -> MatrixView {
        MatrixView {
            rows: self.rows.iter().map(|l| l.tag(ctx)).collect(),
            cols: self.cols.iter().map(|l| l.tag(ctx)).collect(),
            entries: (0..self.matrix.rows())
                .map(|i| self.matrix.row(i).iter().map(|x| f.render(x)).collect())
                .collect(),
        }
    }

    /// Header `row,<column tags>`, then one line per row starting with its tag.
    pub fn to_csv<F: Field<Elem = E>>(&self, ctx: &ToricContext, f: &F) -> Result<String, PolyError> {
        let view = self.view(ctx, f);
        let mut w = csv::Writer::from_writer(Vec::new());
        let export = |e: csv::Error| PolyError::Export(e.to_string());
        let mut header = vec!["row".to_string()];
        header.extend(view.cols);
        w.write_record(&header).map_err(export)?;
        for (tag, row) in view.rows.into_iter().zip(view.entries) {
            let mut rec = vec![tag];
            rec.extend(row);
            w.write_record(&rec).map_err(export)?;
        }
        let bytes = w.into_inner().map_err(|e| PolyError::Export(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| PolyError::Export(e.to_string()))
    }

    pub fn from_csv<F: Field<Elem = E>>(ctx: &ToricContext, f: &F, text: &str) -> Result<Self, PolyError> {
        let export = |e: csv::Error| PolyError::Export(e.to_string());
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(export)?.clone();
        if header.get(0) != Some("row") {
            return Err(PolyError::Export("first header cell must be \"row\"".into()));
        }
        let cols = header.iter().skip(1).map(|t| Label::parse(ctx, t)).collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(export)?;
            let mut it = rec.iter();
            let tag = it.next().ok_or_else(|| PolyError::Export("empty record".into()))?;
            rows.push(Label::parse(ctx, tag)?);
            entries.push(it.map(|x| f.parse(x)).collect::<Result<Vec<_>, _>>()?);
        }
        let matrix = Matrix::from_rows(entries, cols.len())?;
        Self::new(matrix, rows, cols)
    }
}
