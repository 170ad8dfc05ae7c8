//! Exact derivation spaces of finite commutative algebras.
//!
//! A derivation `D` is stored as an `m × m` matrix whose column `k` holds the
//! coordinates of `D(e_k)`. Imposing `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)`
//! for all `i ≤ j` gives a homogeneous linear system in the `m²` entries,
//! solved exactly over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Largest pointwise algebra accepted.
pub const MAX_POINTWISE: usize = 16;
/// Largest truncation degree accepted.
pub const MAX_DEGREE: usize = 8;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense square matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    size: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(size: usize) -> Self {
        Matrix { size, data: vec![Q::zero(); size * size] }
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = Matrix::zeros(size);
        for r in 0..size {
            for c in 0..size {
                m.data[r * size + c] = f(r, c);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.size + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.size).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        (0..self.size)
            .map(|r| (0..self.size).fold(Q::zero(), |acc, c| acc + self.get(r, c) * &v[c]))
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.size, |r, c| {
            (0..self.size).fold(Q::zero(), |acc, k| acc + self.get(r, k) * other.get(k, c))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.size, |r, c| self.get(r, c) - other.get(r, c))
    }

    /// Rows of `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.size).map(|r| (0..self.size).map(|c| rational_string(self.get(r, c))).collect()).collect()
    }

    fn entries(&self) -> &[Q] {
        &self.data
    }
}

/// `p/q` with the denominator always written, e.g. `"0/1"`, `"-3/2"`.
pub fn rational_string(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "size")]
pub enum AlgebraKind {
    /// `ℝⁿ` with coordinatewise product.
    Pointwise(usize),
    /// `ℝ[x] / (x^{d+1})`, basis `1, x, …, x^d`.
    TruncatedPolynomial(usize),
    /// Structure constants supplied directly.
    Custom(usize),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Pointwise(n) => write!(f, "pointwise(n={n})"),
            AlgebraKind::TruncatedPolynomial(d) => write!(f, "truncated-poly(d={d})"),
            AlgebraKind::Custom(m) => write!(f, "custom(m={m})"),
        }
    }
}

/// A finite-dimensional commutative associative algebra given by its
/// structure constants `e_i e_j = Σ_k C[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    kind: AlgebraKind,
    dim: usize,
    table: Vec<Q>,
}

impl FiniteAlgebra {
    pub fn pointwise(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_POINTWISE {
            return Err(Error::argument(format!("pointwise size must be in 1..={MAX_POINTWISE}, got {n}")));
        }
        let mut table = vec![Q::zero(); n * n * n];
        for i in 0..n {
            table[(i * n + i) * n + i] = Q::one();
        }
        Ok(FiniteAlgebra { kind: AlgebraKind::Pointwise(n), dim: n, table })
    }

    pub fn truncated_polynomial(d: usize) -> Result<Self> {
        if d > MAX_DEGREE {
            return Err(Error::argument(format!("truncation degree must be at most {MAX_DEGREE}, got {d}")));
        }
        let m = d + 1;
        let mut table = vec![Q::zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                if i + j <= d {
                    table[(i * m + j) * m + i + j] = Q::one();
                }
            }
        }
        Ok(FiniteAlgebra { kind: AlgebraKind::TruncatedPolynomial(d), dim: m, table })
    }

    /// `constants[i][j][k]` is the coefficient of `e_k` in `e_i e_j`.
    /// Commutativity and associativity are checked.
    pub fn from_structure_constants(constants: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let m = constants.len();
        if m == 0 || m > MAX_POINTWISE {
            return Err(Error::argument(format!("algebra dimension must be in 1..={MAX_POINTWISE}, got {m}")));
        }
        let mut table = Vec::with_capacity(m * m * m);
        for row in &constants {
            if row.len() != m || row.iter().any(|v| v.len() != m) {
                return Err(Error::argument("structure constants must be an m×m×m table"));
            }
            for v in row {
                table.extend(v.iter().cloned());
            }
        }
        let a = FiniteAlgebra { kind: AlgebraKind::Custom(m), dim: m, table };
        a.check_invariants()?;
        Ok(a)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn multiply(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let m = self.dim;
        let mut out = vec![Q::zero(); m];
        for (i, ui) in u.iter().enumerate().take(m) {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate().take(m) {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &uv * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    /// Matrix of `u ↦ a·u`.
    pub fn multiplication_matrix(&self, a: &[Q]) -> Matrix {
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|k| self.multiply(a, &self.basis_element(k))).collect();
        Matrix::from_fn(self.dim, |r, c| cols[c][r].clone())
    }

    /// Commutativity and associativity on all basis pairs and triples.
    pub fn check_invariants(&self) -> Result<()> {
        let m = self.dim;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if self.structure_constant(i, j, k) != self.structure_constant(j, i, k) {
                        return Err(Error::Invariant(format!("e{i}·e{j} ≠ e{j}·e{i}")));
                    }
                }
            }
        }
        let e: Vec<Vec<Q>> = (0..m).map(|i| self.basis_element(i)).collect();
        for i in 0..m {
            for j in 0..m {
                let ij = self.multiply(&e[i], &e[j]);
                for k in 0..m {
                    let left = self.multiply(&ij, &e[k]);
                    let right = self.multiply(&e[i], &self.multiply(&e[j], &e[k]));
                    if left != right {
                        return Err(Error::Invariant(format!("(e{i}·e{j})·e{k} ≠ e{i}·(e{j}·e{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Leibniz constraint rows, one per `(i ≤ j, l)`, over the unknowns
    /// `M[a][b]` at column index `a·m + b`.
    fn constraint_rows(&self) -> Vec<BTreeMap<usize, Q>> {
        let m = self.dim;
        let var = |a: usize, b: usize| a * m + b;
        let mut rows = Vec::new();
        for i in 0..m {
            for j in i..m {
                for l in 0..m {
                    let mut row: BTreeMap<usize, Q> = BTreeMap::new();
                    let mut add = |col: usize, v: &Q| {
                        let e = row.entry(col).or_insert_with(Q::zero);
                        *e += v;
                    };
                    for k in 0..m {
                        let c = self.structure_constant(i, j, k);
                        if !c.is_zero() {
                            add(var(l, k), c);
                        }
                    }
                    for p in 0..m {
                        let c = self.structure_constant(p, j, l);
                        if !c.is_zero() {
                            add(var(p, i), &-c);
                        }
                        let c = self.structure_constant(i, p, l);
                        if !c.is_zero() {
                            add(var(p, j), &-c);
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// Exact check of `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)` for all `i ≤ j`.
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        if d.size() != self.dim {
            return false;
        }
        let x = d.entries();
        self.constraint_rows()
            .iter()
            .all(|row| row.iter().fold(Q::zero(), |acc, (&c, v)| acc + v * &x[c]).is_zero())
    }
}

/// Reduced row echelon form of a sparse rational system.
struct Echelon {
    /// Pivot column → fully reduced row with a 1 in that column.
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: BTreeMap<usize, Q>) {
        for (&p, prow) in &self.rows {
            if let Some(f) = row.get(&p).cloned() {
                for (&c, v) in prow {
                    let e = row.entry(c).or_insert_with(Q::zero);
                    *e -= &f * v;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        let Some((&pivot, lead)) = row.iter().next() else {
            return;
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for prow in self.rows.values_mut() {
            if let Some(f) = prow.get(&pivot).cloned() {
                for (&c, v) in &row {
                    let e = prow.entry(c).or_insert_with(Q::zero);
                    *e -= &f * v;
                }
                prow.retain(|_, v| !v.is_zero());
            }
        }
        self.rows.insert(pivot, row);
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// All derivations of an algebra, as an exact basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub algebra: FiniteAlgebra,
    pub basis: Vec<Matrix>,
    pub dimension: usize,
    /// Rank of the Leibniz constraint system; `dimension = m² − rank`.
    pub constraint_rank: usize,
    /// Matrix positions `(row, col)` of the free unknowns, one per basis element.
    free: Vec<(usize, usize)>,
}

pub fn solve_derivation_space(algebra: &FiniteAlgebra) -> Result<DerivationSpace> {
    algebra.check_invariants()?;
    let m = algebra.dim();
    let unknowns = m * m;
    let mut ech = Echelon::new();
    for row in algebra.constraint_rows() {
        ech.insert(row);
    }
    let free_cols: Vec<usize> = (0..unknowns).filter(|c| !ech.rows.contains_key(c)).collect();
    let basis: Vec<Matrix> = free_cols
        .iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); unknowns];
            x[f] = Q::one();
            for (&p, row) in &ech.rows {
                if let Some(v) = row.get(&f) {
                    x[p] = -v.clone();
                }
            }
            Matrix { size: m, data: x }
        })
        .collect();
    Ok(DerivationSpace {
        algebra: algebra.clone(),
        dimension: basis.len(),
        constraint_rank: ech.rank(),
        free: free_cols.iter().map(|&c| (c / m, c % m)).collect(),
        basis,
    })
}

impl DerivationSpace {
    /// Exact membership of `d` in the span of the basis.
    pub fn contains(&self, d: &Matrix) -> bool {
        if d.size() != self.algebra.dim() {
            return false;
        }
        // each basis element is 1 on its own free position and 0 on the others
        let mut combo = Matrix::zeros(d.size());
        for (b, &(r, c)) in self.basis.iter().zip(&self.free) {
            let coef = d.get(r, c);
            if coef.is_zero() {
                continue;
            }
            for (x, y) in combo.data.iter_mut().zip(b.entries()) {
                *x += coef * y;
            }
        }
        combo == *d
    }

    /// Every basis element passes the exact Leibniz check.
    pub fn verify(&self) -> bool {
        self.basis.iter().all(|b| self.algebra.is_derivation(b))
    }

    pub fn report(&self) -> DerivationReport {
        let factorizations = match self.algebra.kind() {
            AlgebraKind::TruncatedPolynomial(_) => Some(
                factor_through_derivative(self)
                    .expect("kind checked")
                    .iter()
                    .map(|f| FactorReport { q: f.q.iter().map(rational_string).collect(), residual_zero: f.is_exact() })
                    .collect(),
            ),
            _ => None,
        };
        DerivationReport {
            algebra: self.algebra.kind(),
            algebra_dim: self.algebra.dim(),
            dimension: self.dimension,
            constraint_rank: self.constraint_rank,
            basis: self.basis.iter().map(Matrix::to_strings).collect(),
            factorizations,
        }
    }
}

/// Serializable form of a [`DerivationSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub algebra: AlgebraKind,
    pub algebra_dim: usize,
    pub dimension: usize,
    pub constraint_rank: usize,
    /// Basis matrices; column `k` holds `D(e_k)`.
    pub basis: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorizations: Option<Vec<FactorReport>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub q: Vec<String>,
    pub residual_zero: bool,
}

/// `M = (multiplication by q) ∘ d/dx + residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `q = M(x)`.
    pub q: Vec<Q>,
    pub residual: Matrix,
}

impl Factorization {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Formal derivative on `ℝ[x]/(x^{d+1})`: `x^k ↦ k x^{k-1}`.
pub fn formal_derivative(d: usize) -> Matrix {
    let mut m = Matrix::zeros(d + 1);
    for k in 1..=d {
        m.set(k - 1, k, q(k as i64));
    }
    m
}

/// Factor one matrix through the formal derivative of a truncated
/// polynomial algebra.
pub fn factor_matrix(algebra: &FiniteAlgebra, m: &Matrix) -> Result<Factorization> {
    let AlgebraKind::TruncatedPolynomial(d) = algebra.kind() else {
        return Err(Error::KindMismatch(format!("factorization needs a truncated polynomial algebra, got {}", algebra.kind())));
    };
    if m.size() != d + 1 {
        return Err(Error::argument(format!("matrix size {} does not match algebra dimension {}", m.size(), d + 1)));
    }
    let qv = if d == 0 { vec![Q::zero()] } else { m.column(1) };
    let through = algebra.multiplication_matrix(&qv).mul(&formal_derivative(d));
    Ok(Factorization { residual: m.sub(&through), q: qv })
}

pub fn factor_through_derivative(space: &DerivationSpace) -> Result<Vec<Factorization>> {
    if !matches!(space.algebra.kind(), AlgebraKind::TruncatedPolynomial(_)) {
        return Err(Error::KindMismatch(format!(
            "factorization needs a truncated polynomial algebra, got {}",
            space.algebra.kind()
        )));
    }
    space.basis.iter().map(|b| factor_matrix(&space.algebra, b)).collect()
}

/// On a pointwise algebra: does `D v` vanish wherever `v` does?
pub fn cube_root_annihilation_check(algebra: &FiniteAlgebra, d: &Matrix, v: &[Q]) -> Result<bool> {
    if !matches!(algebra.kind(), AlgebraKind::Pointwise(_)) {
        return Err(Error::KindMismatch(format!("cube roots are modelled only on pointwise algebras, got {}", algebra.kind())));
    }
    if v.len() != algebra.dim() || d.size() != algebra.dim() {
        return Err(Error::argument("vector and matrix must match the algebra dimension"));
    }
    if !v.iter().any(Zero::is_zero) {
        return Err(Error::argument("v needs at least one zero coordinate"));
    }
    if !algebra.is_derivation(d) {
        return Err(Error::Invariant("candidate matrix does not satisfy the Leibniz rule".into()));
    }
    let dv = d.apply(v);
    Ok(v.iter().zip(&dv).all(|(x, y)| !x.is_zero() || y.is_zero()))
}

/// `P ↦ x^k P'` on `ℝ[x]/(x^{d+1})`.
pub fn shifted_derivative(d: usize, k: usize) -> Result<Matrix> {
    let a = FiniteAlgebra::truncated_polynomial(d)?;
    let mut xk = vec![Q::zero(); d + 1];
    if k <= d {
        xk[k] = Q::one();
    }
    Ok(a.multiplication_matrix(&xk).mul(&formal_derivative(d)))
}
