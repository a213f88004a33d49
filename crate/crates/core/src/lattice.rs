//! Lattice vectors, smooth complete fans and the polytopes they carry.
//!
//! A polytope is always given through a [`FacetPresentation`]: one integer
//! `a_j` per ray, describing `{ m : <m, u_j> >= -a_j }`. All enumeration here
//! works off the vertices dual to the maximal cones, which bound the polytope
//! whenever the fan is complete.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// A point of `Z^n`, used both for rays in `N` and lattice points in `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The `a`-vector of `{ m : <m, u_j> >= -a_j }`, indexed by rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FacetPresentation(pub Vec<i64>);

impl FacetPresentation {
    pub fn new(a: Vec<i64>) -> Self {
        Self(a)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Presentation of the polytope translated by `t` (same class).
    pub fn translate(&self, fan: &Fan, t: &LatticeVector) -> FacetPresentation {
        FacetPresentation(
            self.0
                .iter()
                .zip(fan.rays())
                .map(|(a, u)| a + t.dot(u))
                .collect(),
        )
    }
}

/// Independent checks performed by [`Fan::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub primitive: bool,
    pub smooth: bool,
    pub complete: bool,
    pub torus_factor_free: bool,
}

impl FanReport {
    pub fn is_valid(&self) -> bool {
        self.primitive && self.smooth && self.complete && self.torus_factor_free
    }
}

/// A simplicial fan given by its rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Structural construction; geometric properties are checked by [`Fan::validate`].
    pub fn new(rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let Some(first) = rays.first() else {
            return Err(LatticeError::NoRays);
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(LatticeError::RayDimension { ray: i, expected: dim, found: r.dim() });
            }
        }
        if max_cones.is_empty() {
            return Err(LatticeError::NoCones);
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            if cone.len() != dim {
                return Err(LatticeError::ConeSize { cone: c, expected: dim, found: cone.len() });
            }
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() {
                return Err(LatticeError::RepeatedRay { cone: c });
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(LatticeError::RayIndex { cone: c, index: bad, rays: rays.len() });
            }
            cones.push(cone);
        }
        Ok(Self { dim, rays, max_cones: cones })
    }

    pub fn from_coords(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        Self::new(rays.into_iter().map(LatticeVector).collect(), max_cones)
    }

    /// Fan of `P^n`: rays `e_1..e_n, -(e_1+..+e_n)`, all `n`-subsets as cones.
    pub fn projective_space(n: usize) -> Self {
        assert!(n > 0, "projective space of dimension 0");
        let mut rays: Vec<LatticeVector> = (0..n)
            .map(|i| LatticeVector((0..n).map(|j| i64::from(i == j)).collect()))
            .collect();
        rays.push(LatticeVector(vec![-1; n]));
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Self::new(rays, cones).expect("projective space fan is well formed")
    }

    /// Hirzebruch surface `H_r`: rays `(1,0), (0,1), (-1,-r), (0,-1)`.
    pub fn hirzebruch(r: i64) -> Self {
        Self::from_coords(
            vec![vec![1, 0], vec![0, 1], vec![-1, -r], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .expect("Hirzebruch fan is well formed")
    }

    /// Product fan in `N_1 x N_2`. Rays of `other` are appended after the rays of `self`.
    pub fn product(&self, other: &Fan) -> Fan {
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for r in &self.rays {
            let mut c = r.0.clone();
            c.extend(std::iter::repeat_n(0, other.dim));
            rays.push(LatticeVector(c));
        }
        for r in &other.rays {
            let mut c = vec![0; self.dim];
            c.extend_from_slice(&r.0);
            rays.push(LatticeVector(c));
        }
        let shift = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|i| i + shift));
                cones.push(c);
            }
        }
        Fan::new(rays, cones).expect("product of well-formed fans")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn is_max_cone(&self, cone: &[usize]) -> bool {
        let mut key = cone.to_vec();
        key.sort_unstable();
        self.max_cones.iter().any(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s == key
        })
    }

    /// Determinant of the matrix whose rows are the rays of `cone` (in the given order).
    pub fn cone_determinant(&self, cone: &[usize]) -> i128 {
        let rows: Vec<Vec<i128>> = cone
            .iter()
            .map(|&i| self.rays[i].0.iter().map(|&c| c as i128).collect())
            .collect();
        int_det(rows)
    }

    pub fn validate(&self) -> FanReport {
        let primitive = self.rays.iter().all(LatticeVector::is_primitive);
        let smooth = self
            .max_cones
            .iter()
            .all(|c| self.cone_determinant(c).abs() == 1);
        let torus_factor_free = int_rank(
            self.rays
                .iter()
                .map(|r| r.0.iter().map(|&c| c as i128).collect())
                .collect(),
        ) == self.dim;
        let complete = torus_factor_free && self.walls_are_closed();
        FanReport { primitive, smooth, complete, torus_factor_free }
    }

    // Every wall lies in exactly two maximal cones, which sit on opposite sides of it.
    fn walls_are_closed(&self) -> bool {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for cone in &self.max_cones {
            for &apex in cone {
                let mut wall: Vec<usize> = cone.iter().copied().filter(|&i| i != apex).collect();
                wall.sort_unstable();
                walls.entry(wall).or_default().push(apex);
            }
        }
        walls.iter().all(|(wall, apexes)| {
            if apexes.len() != 2 {
                return false;
            }
            let side = |apex: usize| {
                let mut c = wall.clone();
                c.push(apex);
                self.cone_determinant(&c).signum()
            };
            let (s0, s1) = (side(apexes[0]), side(apexes[1]));
            s0 != 0 && s1 != 0 && s0 == -s1
        })
    }

    /// Vertex `m` of the polytope with `<m, u_j> = -a_j` for the rays of `cone`.
    pub fn sigma_vertex(&self, cone: &[usize], a: &FacetPresentation) -> Result<LatticeVector, LatticeError> {
        let (num, den) = self.rational_vertex(cone, a)?;
        if num.iter().any(|x| x % den != 0) {
            return Err(LatticeError::NonLatticeVertex { cone: cone.to_vec() });
        }
        Ok(LatticeVector(num.iter().map(|x| (x / den) as i64).collect()))
    }

    // Cramer's rule; returns numerators and a positive common denominator.
    fn rational_vertex(&self, cone: &[usize], a: &FacetPresentation) -> Result<(Vec<i128>, i128), LatticeError> {
        self.check_presentation(a)?;
        if cone.len() != self.dim || cone.iter().any(|&i| i >= self.rays.len()) {
            return Err(LatticeError::BadCone { cone: cone.to_vec() });
        }
        let rows: Vec<Vec<i128>> = cone
            .iter()
            .map(|&i| self.rays[i].0.iter().map(|&c| c as i128).collect())
            .collect();
        let rhs: Vec<i128> = cone.iter().map(|&i| -(a.0[i] as i128)).collect();
        let det = int_det(rows.clone());
        if det == 0 {
            return Err(LatticeError::SingularCone { cone: cone.to_vec() });
        }
        let mut num = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let mut m = rows.clone();
            for (row, b) in m.iter_mut().zip(&rhs) {
                row[k] = *b;
            }
            num.push(int_det(m));
        }
        if det < 0 {
            num.iter_mut().for_each(|x| *x = -*x);
        }
        Ok((num, det.abs()))
    }

    fn check_presentation(&self, a: &FacetPresentation) -> Result<(), LatticeError> {
        if a.0.len() != self.rays.len() {
            return Err(LatticeError::PresentationLength { expected: self.rays.len(), found: a.0.len() });
        }
        Ok(())
    }

    fn satisfies(&self, m: &LatticeVector, a: &FacetPresentation) -> bool {
        self.rays.iter().zip(&a.0).all(|(u, aj)| m.dot(u) >= -aj)
    }

    /// Integer points of the polytope, ordered lexicographically with the
    /// last coordinate most significant.
    pub fn lattice_points(&self, a: &FacetPresentation) -> Result<Vec<LatticeVector>, LatticeError> {
        self.check_presentation(a)?;
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for cone in &self.max_cones {
            let (num, den) = self.rational_vertex(cone, a)?;
            for k in 0..self.dim {
                lo[k] = lo[k].min(Integer::div_floor(&num[k], &den) as i64);
                hi[k] = hi[k].max(Integer::div_ceil(&num[k], &den) as i64);
            }
        }
        let mut points = Vec::new();
        let mut cur = lo.clone();
        'scan: loop {
            let m = LatticeVector(cur.clone());
            if self.satisfies(&m, a) {
                points.push(m);
            }
            for k in 0..self.dim {
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    continue 'scan;
                }
                cur[k] = lo[k];
            }
            break;
        }
        Ok(points)
    }

    /// Support-function convexity: each cone vertex satisfies every facet inequality.
    pub fn is_nef(&self, a: &FacetPresentation) -> Result<bool, LatticeError> {
        for cone in &self.max_cones {
            let (num, den) = self.rational_vertex(cone, a)?;
            let ok = self.rays.iter().zip(&a.0).all(|(u, aj)| {
                let dot: i128 = num.iter().zip(&u.0).map(|(x, c)| x * (*c as i128)).sum();
                dot >= -(*aj as i128) * den
            });
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Facet-wise sum, which presents the Minkowski sum when both summands are nef.
    pub fn minkowski_sum(&self, a1: &FacetPresentation, a2: &FacetPresentation) -> Result<FacetPresentation, LatticeError> {
        for (which, a) in [(1, a1), (2, a2)] {
            if !self.is_nef(a)? {
                return Err(LatticeError::NonNefSummand { which });
            }
        }
        Ok(FacetPresentation(a1.0.iter().zip(&a2.0).map(|(x, y)| x + y).collect()))
    }

    /// Dimension of the polytope, or `None` when it has no lattice points.
    pub fn polytope_dimension(&self, a: &FacetPresentation) -> Result<Option<usize>, LatticeError> {
        let pts = self.lattice_points(a)?;
        let Some(base) = pts.first() else {
            return Ok(None);
        };
        let diffs: Vec<Vec<i128>> = pts[1..]
            .iter()
            .map(|p| p.0.iter().zip(&base.0).map(|(x, y)| (x - y) as i128).collect())
            .collect();
        Ok(Some(int_rank(diffs)))
    }
}

/// Fraction-free determinant over `i128`.
pub(crate) fn int_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Rank of an integer matrix by fraction-free elimination.
pub(crate) fn int_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let Some(cols) = m.first().map(Vec::len) else {
        return 0;
    };
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    r
}
