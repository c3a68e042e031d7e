//! Finite-dimensional *-algebras given as direct sums of ℂ, ℍ and M_n(ℂ),
//! their elements, and block-diagonal representations.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{c, realify, ComplexMatrix, RealMatrix, Tolerance, C64, I, ONE, ZERO};

/// One direct summand of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummandKind {
    Complex,
    /// Quaternions, realized as `[[α, β], [-β̄, ᾱ]]` inside M₂(ℂ).
    Quaternion,
    FullMatrix(usize),
}

impl SummandKind {
    /// Size of the matrices realizing this summand.
    pub fn matrix_dim(&self) -> usize {
        match self {
            SummandKind::Complex => 1,
            SummandKind::Quaternion => 2,
            SummandKind::FullMatrix(n) => *n,
        }
    }

    /// Dimension as a real vector space.
    pub fn real_dim(&self) -> usize {
        match self {
            SummandKind::Complex => 2,
            SummandKind::Quaternion => 4,
            SummandKind::FullMatrix(n) => 2 * n * n,
        }
    }

    fn basis(&self) -> Vec<ComplexMatrix> {
        match self {
            SummandKind::Complex => vec![ComplexMatrix::diag(&[ONE]), ComplexMatrix::diag(&[I])],
            SummandKind::Quaternion => vec![
                quaternion(ONE, ZERO),
                quaternion(I, ZERO),
                quaternion(ZERO, ONE),
                quaternion(ZERO, I),
            ],
            SummandKind::FullMatrix(n) => {
                let n = *n;
                let mut out = Vec::with_capacity(2 * n * n);
                for unit in [ONE, I] {
                    for i in 0..n {
                        for j in 0..n {
                            out.push(ComplexMatrix::from_fn(n, n, |r, s| if (r, s) == (i, j) { unit } else { ZERO }));
                        }
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandKind::Complex => write!(f, "C"),
            SummandKind::Quaternion => write!(f, "H"),
            SummandKind::FullMatrix(n) => write!(f, "M({n})"),
        }
    }
}

impl FromStr for SummandKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" => Ok(SummandKind::Complex),
            "H" => Ok(SummandKind::Quaternion),
            _ => {
                let n = s
                    .strip_prefix("M(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidAlgebra(format!("unknown summand '{s}'")))?;
                if n == 0 {
                    return Err(Error::InvalidAlgebra("M(0) is not a summand".into()));
                }
                Ok(SummandKind::FullMatrix(n))
            }
        }
    }
}

impl Serialize for SummandKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SummandKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The quaternion `α + βj` as `[[α, β], [-β̄, ᾱ]]`.
pub fn quaternion(alpha: C64, beta: C64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => alpha,
        (0, 1) => beta,
        (1, 0) => -beta.conj(),
        _ => alpha.conj(),
    })
}

fn quaternion_residual(m: &ComplexMatrix) -> f64 {
    let q = quaternion(m[(0, 0)], m[(0, 1)]);
    m.distance(&q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraSpec {
    summands: Vec<SummandKind>,
}

impl AlgebraSpec {
    pub fn new(summands: Vec<SummandKind>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidAlgebra("an algebra needs at least one summand".into()));
        }
        if summands.contains(&SummandKind::FullMatrix(0)) {
            return Err(Error::InvalidAlgebra("M(0) is not a summand".into()));
        }
        Ok(Self { summands })
    }

    pub fn summands(&self) -> &[SummandKind] {
        &self.summands
    }

    pub fn real_dim(&self) -> usize {
        self.summands.iter().map(SummandKind::real_dim).sum()
    }
}

/// An element of an [`AlgebraSpec`]: one matrix per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub components: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn new(spec: &AlgebraSpec, components: Vec<ComplexMatrix>) -> Result<Self> {
        let x = Self { components };
        x.check_matches(spec, Tolerance::default())?;
        Ok(x)
    }

    /// Element with every component a scalar multiple of the identity.
    pub fn scalars(spec: &AlgebraSpec, values: &[C64]) -> Result<Self> {
        if values.len() != spec.summands.len() {
            return Err(Error::SpecMismatch(format!(
                "{} scalars for {} summands",
                values.len(),
                spec.summands.len()
            )));
        }
        let components = spec
            .summands
            .iter()
            .zip(values)
            .map(|(s, &v)| {
                let m = ComplexMatrix::identity(s.matrix_dim()).scale(v);
                // A quaternion scalar must be real to stay in ℍ.
                if *s == SummandKind::Quaternion { m.map(|z| c(z.re, 0.0)) } else { m }
            })
            .collect();
        Self::new(spec, components)
    }

    pub fn one(spec: &AlgebraSpec) -> Self {
        Self { components: spec.summands.iter().map(|s| ComplexMatrix::identity(s.matrix_dim())).collect() }
    }

    pub fn zero(spec: &AlgebraSpec) -> Self {
        Self {
            components: spec
                .summands
                .iter()
                .map(|s| ComplexMatrix::zeros(s.matrix_dim(), s.matrix_dim()))
                .collect(),
        }
    }

    pub fn check_matches(&self, spec: &AlgebraSpec, tol: Tolerance) -> Result<()> {
        if self.components.len() != spec.summands.len() {
            return Err(Error::SpecMismatch(format!(
                "{} components for {} summands",
                self.components.len(),
                spec.summands.len()
            )));
        }
        for (k, (m, s)) in self.components.iter().zip(&spec.summands).enumerate() {
            let d = s.matrix_dim();
            if m.rows() != d || m.cols() != d {
                return Err(Error::SpecMismatch(format!(
                    "component {k} is {}x{}, summand {s} needs {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if *s == SummandKind::Quaternion && !tol.accepts(quaternion_residual(m)) {
                return Err(Error::SpecMismatch(format!("component {k} is not quaternionic")));
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a * b).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { components: self.components.iter().map(|a| a.scale_real(s)).collect() }
    }

    /// The involution `x ↦ x*`.
    pub fn star(&self) -> Self {
        Self { components: self.components.iter().map(ComplexMatrix::adjoint).collect() }
    }
}

/// Basis of the algebra as a real vector space.
pub fn algebra_basis(spec: &AlgebraSpec) -> Vec<AlgebraElement> {
    let mut out = Vec::with_capacity(spec.real_dim());
    for (k, s) in spec.summands.iter().enumerate() {
        for b in s.basis() {
            let mut x = AlgebraElement::zero(spec);
            x.components[k] = b;
            out.push(x);
        }
    }
    out
}

/// Seeded random element; real and imaginary parts uniform on [-1, 1].
pub fn random_element(spec: &AlgebraSpec, seed: u64) -> AlgebraElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(spec, &mut rng)
}

pub fn random_element_with<R: Rng>(spec: &AlgebraSpec, rng: &mut R) -> AlgebraElement {
    let mut draw = || c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
    let components = spec
        .summands
        .iter()
        .map(|s| match s {
            SummandKind::Complex => ComplexMatrix::diag(&[draw()]),
            SummandKind::Quaternion => {
                let alpha = draw();
                quaternion(alpha, draw())
            }
            SummandKind::FullMatrix(n) => ComplexMatrix::from_fn(*n, *n, |_, _| draw()),
        })
        .collect();
    AlgebraElement { components }
}

/// One diagonal block `I_m ⊗ π_s(x)` (entrywise conjugated when flagged).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, bool)", into = "(usize, usize, bool)")]
pub struct Block {
    pub summand: usize,
    pub multiplicity: usize,
    pub conjugated: bool,
}

impl Block {
    pub const fn new(summand: usize, multiplicity: usize, conjugated: bool) -> Self {
        Self { summand, multiplicity, conjugated }
    }
}

impl From<(usize, usize, bool)> for Block {
    fn from((summand, multiplicity, conjugated): (usize, usize, bool)) -> Self {
        Self { summand, multiplicity, conjugated }
    }
}

impl From<Block> for (usize, usize, bool) {
    fn from(b: Block) -> Self {
        (b.summand, b.multiplicity, b.conjugated)
    }
}

/// Block-diagonal representation of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    algebra: AlgebraSpec,
    blocks: Vec<Block>,
    total_dim: usize,
}

impl Representation {
    pub fn new(algebra: AlgebraSpec, blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("representation needs at least one block".into()));
        }
        let mut total_dim = 0;
        for (k, b) in blocks.iter().enumerate() {
            let s = algebra.summands.get(b.summand).ok_or_else(|| {
                Error::InvalidAlgebra(format!("block {k} refers to missing summand {}", b.summand))
            })?;
            if b.multiplicity == 0 {
                return Err(Error::InvalidAlgebra(format!("block {k} has multiplicity 0")));
            }
            total_dim += b.multiplicity * s.matrix_dim();
        }
        Ok(Self { algebra, blocks, total_dim })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn represent(&self, x: &AlgebraElement) -> Result<ComplexMatrix> {
        x.check_matches(&self.algebra, Tolerance::default())?;
        Ok(self.represent_unchecked(x))
    }

    pub(crate) fn represent_unchecked(&self, x: &AlgebraElement) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.total_dim, self.total_dim);
        let mut offset = 0;
        for b in &self.blocks {
            let m = &x.components[b.summand];
            let m = if b.conjugated { m.conj() } else { m.clone() };
            let d = m.rows();
            for _ in 0..b.multiplicity {
                for i in 0..d {
                    for j in 0..d {
                        out[(offset + i, offset + j)] = m[(i, j)];
                    }
                }
                offset += d;
            }
        }
        out
    }

    /// Images of [`algebra_basis`].
    pub fn represented_basis(&self) -> Vec<ComplexMatrix> {
        algebra_basis(&self.algebra).iter().map(|x| self.represent_unchecked(x)).collect()
    }
}

/// True iff the representation is injective on the algebra.
pub fn check_faithful(rep: &Representation) -> bool {
    faithfulness_rank(&rep.represented_basis()) == rep.algebra.real_dim()
}

/// Real rank of a family of matrices.
pub(crate) fn faithfulness_rank(images: &[ComplexMatrix]) -> usize {
    let columns: Vec<Vec<f64>> = images.iter().map(|m| realify(m.entries())).collect();
    RealMatrix::from_columns(&columns).rank()
}
