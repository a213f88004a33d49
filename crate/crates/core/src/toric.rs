//! The graded ambient: grading map, divisor classes and monomial bases.
//!
//! Variables are kept in Cox order: the rays of `σ` in the order the caller
//! gave them (`x1..xn`), then the remaining rays in increasing index order
//! (`z1..zr`). With that order the grading map has the block shape `(P | Id)`
//! and the class group is `Z^r`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ToricError;
use crate::lattice::{int_det, FacetPresentation, Fan, LatticeVector};

/// An element of the class group `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn new(cl: Vec<i64>) -> Self {
        Self(cl)
    }

    pub fn zero(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", LatticeVector(self.0.clone()))
    }
}

impl FromStr for DivisorClass {
    type Err = ToricError;

    /// Accepts `(3,1)`, `3,1` or `3 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Result<Vec<i64>, _> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok(DivisorClass(v)),
            _ => Err(ToricError::ParseClass(s.to_string())),
        }
    }
}

/// A monomial of the Cox ring together with its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedMonomial {
    pub expo: Vec<u32>,
    pub cls: DivisorClass,
}

/// Fan, distinguished cone and grading data.
#[derive(Clone, Debug)]
pub struct ToricContext {
    fan: Fan,
    sigma: Vec<usize>,
    // ray index of each Cox variable
    order: Vec<usize>,
    // Cox position of each ray
    position: Vec<usize>,
    pcal: Vec<Vec<i64>>,
    pi: Vec<Vec<i64>>,
    anticanonical: DivisorClass,
    positivity: bool,
}

impl ToricContext {
    pub fn new(fan: Fan, sigma: &[usize]) -> Result<Self, ToricError> {
        let report = fan.validate();
        if !report.is_valid() {
            return Err(ToricError::InvalidFan(report));
        }
        if sigma.len() != fan.dim() || !fan.is_max_cone(sigma) {
            return Err(ToricError::SigmaNotMaxCone(sigma.to_vec()));
        }
        let n = fan.dim();
        let others: Vec<usize> = (0..fan.num_rays()).filter(|i| !sigma.contains(i)).collect();
        let mut order = sigma.to_vec();
        order.extend(&others);
        let mut position = vec![0; fan.num_rays()];
        for (k, &ray) in order.iter().enumerate() {
            position[ray] = k;
        }

        // Coordinates of each other ray in the basis given by σ, negated.
        let basis: Vec<Vec<i128>> = sigma
            .iter()
            .map(|&i| fan.rays()[i].coords().iter().map(|&c| c as i128).collect())
            .collect();
        let det = int_det(basis.clone());
        let pcal: Vec<Vec<i64>> = others
            .iter()
            .map(|&j| {
                let u: Vec<i128> = fan.rays()[j].coords().iter().map(|&c| c as i128).collect();
                (0..n)
                    .map(|i| {
                        let mut m = basis.clone();
                        m[i] = u.clone();
                        (-int_det(m) / det) as i64
                    })
                    .collect()
            })
            .collect();
        let r = others.len();
        let pi: Vec<Vec<i64>> = pcal
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let mut full = row.clone();
                full.extend((0..r).map(|k| i64::from(k == j)));
                full
            })
            .collect();
        let anticanonical = DivisorClass(pi.iter().map(|row| row.iter().sum()).collect());
        let positivity = pcal.iter().flatten().all(|&p| p >= 0);
        Ok(Self {
            fan,
            sigma: sigma.to_vec(),
            order,
            position,
            pcal,
            pi,
            anticanonical,
            positivity,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Number of `x` variables.
    pub fn n(&self) -> usize {
        self.fan.dim()
    }

    /// Number of `z` variables, which is also the rank of the class group.
    pub fn r(&self) -> usize {
        self.order.len() - self.n()
    }

    pub fn num_vars(&self) -> usize {
        self.order.len()
    }

    /// Ray index of each Cox variable.
    pub fn cox_order(&self) -> &[usize] {
        &self.order
    }

    pub fn pi(&self) -> &[Vec<i64>] {
        &self.pi
    }

    /// The `P` block of the grading map.
    pub fn pcal(&self) -> &[Vec<i64>] {
        &self.pcal
    }

    pub fn anticanonical(&self) -> &DivisorClass {
        &self.anticanonical
    }

    pub fn positivity(&self) -> bool {
        self.positivity
    }

    pub fn degree_of(&self, expo: &[u32]) -> Result<DivisorClass, ToricError> {
        self.check_expo(expo)?;
        Ok(DivisorClass(
            self.pi
                .iter()
                .map(|row| row.iter().zip(expo).map(|(p, &e)| p * i64::from(e)).sum())
                .collect(),
        ))
    }

    pub fn graded(&self, expo: Vec<u32>) -> Result<GradedMonomial, ToricError> {
        let cls = self.degree_of(&expo)?;
        Ok(GradedMonomial { expo, cls })
    }

    fn check_expo(&self, expo: &[u32]) -> Result<(), ToricError> {
        if expo.len() != self.num_vars() {
            return Err(ToricError::ExponentLength { expected: self.num_vars(), found: expo.len() });
        }
        Ok(())
    }

    fn check_class(&self, cls: &DivisorClass) -> Result<(), ToricError> {
        if cls.len() != self.r() {
            return Err(ToricError::ClassLength { expected: self.r(), found: cls.len() });
        }
        Ok(())
    }

    /// The σ-normalized presentation of a class: zero on the rays of `σ`, the
    /// class itself on the others. Since `π = (P | Id)`, this is the unique
    /// preimage vanishing on `σ`.
    pub fn presentation(&self, cls: &DivisorClass) -> Result<FacetPresentation, ToricError> {
        self.check_class(cls)?;
        let n = self.n();
        let mut a = vec![0; self.fan.num_rays()];
        for (j, &ray) in self.order[n..].iter().enumerate() {
            a[ray] = cls.0[j];
        }
        Ok(FacetPresentation(a))
    }

    pub fn class_of(&self, a: &FacetPresentation) -> Result<DivisorClass, ToricError> {
        if a.0.len() != self.fan.num_rays() {
            return Err(crate::error::LatticeError::PresentationLength {
                expected: self.fan.num_rays(),
                found: a.0.len(),
            }
            .into());
        }
        Ok(DivisorClass(
            self.pi
                .iter()
                .map(|row| row.iter().zip(&self.order).map(|(p, &ray)| p * a.0[ray]).sum())
                .collect(),
        ))
    }

    /// Monomials `x^(Fm + a)` for the lattice points `m` of the polytope.
    pub fn monomial_basis_for(&self, a: &FacetPresentation) -> Result<Vec<GradedMonomial>, ToricError> {
        let cls = self.class_of(a)?;
        let points = self.fan.lattice_points(a)?;
        points
            .into_iter()
            .map(|m| {
                let expo: Option<Vec<u32>> = self
                    .order
                    .iter()
                    .map(|&ray| u32::try_from(m.dot(&self.fan.rays()[ray]) + a.0[ray]).ok())
                    .collect();
                match expo {
                    Some(expo) => Ok(GradedMonomial { expo, cls: cls.clone() }),
                    None => Err(ToricError::NegativeExponent { point: m.0 }),
                }
            })
            .collect()
    }

    pub fn monomial_basis(&self, cls: &DivisorClass) -> Result<Vec<GradedMonomial>, ToricError> {
        self.monomial_basis_for(&self.presentation(cls)?)
    }

    /// `δ = Σ α_i − K_X`.
    pub fn delta_class(&self, degrees: &[DivisorClass]) -> DivisorClass {
        degrees
            .iter()
            .fold(-&self.anticanonical, |acc, d| &acc + d)
    }

    pub fn is_nef_class(&self, cls: &DivisorClass) -> Result<bool, ToricError> {
        Ok(self.fan.is_nef(&self.presentation(cls)?)?)
    }

    pub fn is_full_dimensional(&self, cls: &DivisorClass) -> Result<bool, ToricError> {
        Ok(self.fan.polytope_dimension(&self.presentation(cls)?)? == Some(self.n()))
    }

    /// `ν` is nef and `0 <= ν_j < min_i a_{i,j}` on every ray outside `σ`.
    pub fn decomposition_degree_ok(&self, nu: &DivisorClass, degrees: &[DivisorClass]) -> Result<bool, ToricError> {
        self.check_class(nu)?;
        for d in degrees {
            self.check_class(d)?;
        }
        if !self.is_nef_class(nu)? {
            return Ok(false);
        }
        Ok((0..self.r()).all(|j| {
            let bound = degrees.iter().map(|d| d.0[j]).min().unwrap_or(i64::MAX);
            0 <= nu.0[j] && nu.0[j] < bound
        }))
    }

    pub fn var_name(&self, k: usize) -> String {
        if k < self.n() {
            format!("x{}", k + 1)
        } else {
            format!("z{}", k - self.n() + 1)
        }
    }

    /// `x1*z1^2*z2`, or `1` for the constant monomial.
    pub fn format_monomial(&self, expo: &[u32]) -> String {
        let factors: Vec<String> = expo
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| {
                if e == 1 {
                    self.var_name(k)
                } else {
                    format!("{}^{}", self.var_name(k), e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Vec<u32>, ToricError> {
        let bad = || ToricError::ParseMonomial(s.to_string());
        let mut expo = vec![0u32; self.num_vars()];
        let s = s.trim();
        if s == "1" {
            return Ok(expo);
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (var, e) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let (kind, idx) = var.split_at(1.min(var.len()));
            let idx: usize = idx.parse().map_err(|_| bad())?;
            if idx == 0 {
                return Err(bad());
            }
            let k = match kind {
                "x" if idx <= self.n() => idx - 1,
                "z" if idx <= self.r() => self.n() + idx - 1,
                _ => return Err(bad()),
            };
            expo[k] += e;
        }
        Ok(expo)
    }

    /// Cox exponent of the lattice point `m` in the σ-normalized presentation of `cls`.
    pub fn exponent_of_point(&self, cls: &DivisorClass, m: &LatticeVector) -> Result<Vec<u32>, ToricError> {
        let a = self.presentation(cls)?;
        self.order
            .iter()
            .map(|&ray| u32::try_from(m.dot(&self.fan.rays()[ray]) + a.0[ray]))
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|_| ToricError::NegativeExponent { point: m.0.clone() })
    }

    /// Position of ray `ray` among the Cox variables.
    pub fn position_of_ray(&self, ray: usize) -> usize {
        self.position[ray]
    }
}

/// Maximal cones (as given) with respect to which the fan has the positivity property.
pub fn find_positive_cones(fan: &Fan) -> Result<Vec<Vec<usize>>, ToricError> {
    let mut out = Vec::new();
    for cone in fan.max_cones() {
        if ToricContext::new(fan.clone(), cone)?.positivity() {
            out.push(cone.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: i64) -> ToricContext {
        ToricContext::new(Fan::hirzebruch(r), &[0, 1]).unwrap()
    }

    fn cl(v: &[i64]) -> DivisorClass {
        DivisorClass(v.to_vec())
    }

    #[test]
    fn grading_map_of_hirzebruch() {
        let ctx = h(1);
        assert_eq!(ctx.pi(), &[vec![1, 1, 1, 0], vec![0, 1, 0, 1]]);
        assert!(ctx.positivity());
        assert_eq!(ctx.anticanonical(), &cl(&[3, 2]));
        assert_eq!(h(3).pi(), &[vec![1, 3, 1, 0], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn grading_map_kills_ray_matrix() {
        for ctx in [h(1), h(2), ToricContext::new(Fan::projective_space(3), &[0, 1, 2]).unwrap()] {
            let n = ctx.n();
            for row in ctx.pi() {
                for d in 0..n {
                    let s: i64 = row
                        .iter()
                        .zip(ctx.cox_order())
                        .map(|(p, &ray)| p * ctx.fan().rays()[ray].coords()[d])
                        .sum();
                    assert_eq!(s, 0);
                }
            }
        }
    }

    #[test]
    fn projective_space_grading() {
        let ctx = ToricContext::new(Fan::projective_space(2), &[0, 1]).unwrap();
        assert_eq!(ctx.pi(), &[vec![1, 1, 1]]);
        assert!(ctx.positivity());
    }

    #[test]
    fn rejects_bad_sigma_and_fans() {
        assert!(matches!(
            ToricContext::new(Fan::hirzebruch(1), &[0, 2]),
            Err(ToricError::SigmaNotMaxCone(_))
        ));
        let quadrant = Fan::from_coords(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(ToricContext::new(quadrant, &[0, 1]), Err(ToricError::InvalidFan(_))));
    }

    #[test]
    fn degrees_of_monomials() {
        let ctx = h(1);
        assert_eq!(ctx.degree_of(&[0, 1, 1, 0]).unwrap(), cl(&[2, 1]));
        assert_eq!(ctx.degree_of(&[1, 1, 1, 1]).unwrap(), cl(&[3, 2]));
        assert_eq!(ctx.degree_of(&[0, 0, 0, 0]).unwrap(), cl(&[0, 0]));
        assert!(ctx.degree_of(&[1, 0]).is_err());
    }

    #[test]
    fn bases_on_h1() {
        let ctx = h(1);
        let names = |c: &[i64]| -> Vec<String> {
            ctx.monomial_basis(&cl(c))
                .unwrap()
                .iter()
                .map(|m| ctx.format_monomial(&m.expo))
                .collect()
        };
        assert_eq!(names(&[2, 1]), ["z1^2*z2", "x1*z1*z2", "x1^2*z2", "x2*z1", "x1*x2"]);
        assert_eq!(names(&[1, 0]), ["z1", "x1"]);
        assert_eq!(names(&[3, 1]).len(), 7);
        assert_eq!(names(&[3, 2]).len(), 9);
        assert_eq!(names(&[0, 0]), ["1"]);
        for m in ctx.monomial_basis(&cl(&[3, 1])).unwrap() {
            assert_eq!(ctx.degree_of(&m.expo).unwrap(), cl(&[3, 1]));
        }
    }

    #[test]
    fn delta_classes() {
        let ctx = h(1);
        assert_eq!(ctx.delta_class(&[cl(&[2, 1]), cl(&[2, 1]), cl(&[2, 1])]), cl(&[3, 1]));
        assert_eq!(ctx.delta_class(&[cl(&[2, 1]), cl(&[2, 1]), cl(&[1, 1])]), cl(&[2, 1]));
        let p1 = ToricContext::new(Fan::projective_space(1), &[0]).unwrap();
        assert_eq!(p1.delta_class(&[cl(&[1]), cl(&[1])]), cl(&[0]));
    }

    #[test]
    fn decomposition_degrees() {
        let ctx = h(1);
        let sys = [cl(&[2, 1]), cl(&[2, 1]), cl(&[2, 1])];
        assert!(ctx.decomposition_degree_ok(&cl(&[0, 0]), &sys).unwrap());
        assert!(ctx.decomposition_degree_ok(&cl(&[1, 0]), &sys).unwrap());
        assert!(!ctx.decomposition_degree_ok(&cl(&[2, 1]), &sys).unwrap());
        assert!(!ctx.decomposition_degree_ok(&cl(&[0, 1]), &sys).unwrap());
    }

    #[test]
    fn nef_and_dimension() {
        let ctx = h(1);
        assert!(ctx.is_nef_class(&cl(&[2, 1])).unwrap());
        assert!(!ctx.is_nef_class(&cl(&[0, 1])).unwrap());
        assert!(ctx.is_full_dimensional(&cl(&[2, 1])).unwrap());
        assert!(ctx.is_full_dimensional(&cl(&[1, 1])).unwrap());
        assert!(!ctx.is_full_dimensional(&cl(&[1, 0])).unwrap());
    }

    #[test]
    fn monomial_text_round_trip() {
        let ctx = h(1);
        for e in [vec![0, 0, 0, 0], vec![1, 0, 2, 1], vec![0, 3, 0, 0]] {
            assert_eq!(ctx.parse_monomial(&ctx.format_monomial(&e)).unwrap(), e);
        }
        assert!(ctx.parse_monomial("y1").is_err());
        assert!(ctx.parse_monomial("z3").is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("(3,1)".parse::<DivisorClass>().unwrap(), cl(&[3, 1]));
        assert_eq!("-1, 2".parse::<DivisorClass>().unwrap(), cl(&[-1, 2]));
        assert!("(a,1)".parse::<DivisorClass>().is_err());
        assert_eq!(cl(&[3, 1]).to_string(), "(3,1)");
    }

    #[test]
    fn positivity_search() {
        let six = Fan::from_coords(
            vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![5, 0]],
        )
        .unwrap();
        assert!(find_positive_cones(&six).unwrap().is_empty());
        assert!(!find_positive_cones(&Fan::hirzebruch(2)).unwrap().is_empty());
    }
}
