//! Exact integer linear algebra over lattices.
//!
//! Everything here works over `i64` with overflow checks enabled workspace-wide,
//! so an out-of-range intermediate aborts instead of wrapping. Sublattices are
//! kept in a canonical row Hermite normal form, which makes structural equality
//! meaningful and cheap.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    /// A character of the big torus that is not trivial on the acting subtorus.
    #[error("exponent vector pairs nontrivially with the kernel lattice")]
    NotInvariant,
    /// A vector asked to be expressed in a basis it does not belong to.
    #[error("vector is not a member of the sublattice")]
    NotMember,
    /// A covector paired with a vector on which it is not integral.
    #[error("pairing is not an integer")]
    NonIntegralPairing,
    #[error("ambient rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

// ---------------------------------------------------------------------------
// Vectors and covectors
// ---------------------------------------------------------------------------

/// A point of an integer lattice, in ambient coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticeVector(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|&c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        LatticeVector(self.0.iter().map(|&x| c * x).collect())
    }

    pub fn dot(&self, other: &Self) -> i64 {
        assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Gcd of the coordinates; 0 for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0, |acc, &c| gcd(acc, c))
    }

    /// Divide out the content, keeping the direction.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|&c| c / g).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An element of the dual lattice. Numerators over a denominator of 1 or 2;
/// the half-integral case covers the dual of a sublattice of index 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Covector {
    pub num: Vec<i64>,
    pub den: i64,
}

impl Covector {
    pub fn integral(num: impl Into<Vec<i64>>) -> Self {
        Covector { num: num.into(), den: 1 }
    }

    /// Build from numerators over `den`, reducing den 2 to den 1 when possible.
    pub fn new(num: impl Into<Vec<i64>>, den: i64) -> Self {
        assert!(den == 1 || den == 2, "denominator must be 1 or 2");
        let num = num.into();
        if den == 2 && num.iter().all(|&n| n % 2 == 0) {
            return Covector { num: num.iter().map(|&n| n / 2).collect(), den: 1 };
        }
        Covector { num, den }
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn try_pair(&self, v: &LatticeVector) -> Result<i64, LatticeError> {
        if self.rank() != v.rank() {
            return Err(LatticeError::RankMismatch { expected: self.rank(), got: v.rank() });
        }
        let s: i64 = self.num.iter().zip(&v.0).map(|(a, b)| a * b).sum();
        if s % self.den != 0 {
            return Err(LatticeError::NonIntegralPairing);
        }
        Ok(s / self.den)
    }

    /// Exact pairing; panics if the value is not an integer, which would mean
    /// the covector was paired against a vector outside its primal lattice.
    pub fn pair(&self, v: &LatticeVector) -> i64 {
        self.try_pair(v).expect("covector paired outside its primal lattice")
    }
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

/// A dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat { rows: r, cols: c, data: rows.concat() }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank());
        LatticeVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Exact determinant by cofactor expansion; fine at the ranks used here.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        match n {
            0 => 1,
            1 => self[(0, 0)],
            2 => self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)],
            _ => {
                let mut acc = 0i64;
                for j in 0..n {
                    let a = self[(0, j)];
                    if a == 0 {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * a * minor.det();
                }
                acc
            }
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMat {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols).filter(|&j| j != skip_col).map(|j| self[(i, j)]).collect()
            })
            .collect();
        IntMat::from_rows(&rows)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs() == 1
    }

    /// Inverse of a determinant-±1 matrix, via the adjugate.
    pub fn inverse_unimodular(&self) -> IntMat {
        let d = self.det();
        assert!(d.abs() == 1, "matrix is not unimodular");
        let n = self.rows;
        let mut out = IntMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                out[(j, i)] = d * sign * self.minor(i, j).det();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ---------------------------------------------------------------------------
// Smith and Hermite normal forms
// ---------------------------------------------------------------------------

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with each invariant factor dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<i64> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d[(i, i)]).filter(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMat) -> Snf {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);

    let k = d.rows.min(d.cols);
    let mut t = 0;
    while t < k {
        // Pick the smallest nonzero entry of the trailing block as pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if d[(i, j)] != 0
                    && pivot.map_or(true, |(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        // Clear the pivot row and column.
        let mut clean = true;
        for i in t + 1..d.rows {
            if d[(i, t)] != 0 {
                let q = div_round(d[(i, t)], d[(t, t)]);
                add_row(&mut d, &mut u, t, i, -q);
                if d[(i, t)] != 0 {
                    clean = false;
                }
            }
        }
        for j in t + 1..d.cols {
            if d[(t, j)] != 0 {
                let q = div_round(d[(t, j)], d[(t, t)]);
                add_col(&mut d, &mut v, t, j, -q);
                if d[(t, j)] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // remainders left; repeat with a smaller pivot
        }

        // Divisibility fix: the pivot must divide the rest of the block.
        let p = d[(t, t)];
        let mut fixed = true;
        'outer: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if d[(i, j)] % p != 0 {
                    add_row(&mut d, &mut u, i, t, 1);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[(t, t)] < 0 {
            negate_row(&mut d, &mut u, t);
        }
        t += 1;
    }
    Snf { u, d, v }
}

fn swap_rows(m: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let (x, y) = (m[(a, j)], m[(b, j)]);
        m[(a, j)] = y;
        m[(b, j)] = x;
    }
    for j in 0..u.cols {
        let (x, y) = (u[(a, j)], u[(b, j)]);
        u[(a, j)] = y;
        u[(b, j)] = x;
    }
}

fn swap_cols(m: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let (x, y) = (m[(i, a)], m[(i, b)]);
        m[(i, a)] = y;
        m[(i, b)] = x;
    }
    for i in 0..v.rows {
        let (x, y) = (v[(i, a)], v[(i, b)]);
        v[(i, a)] = y;
        v[(i, b)] = x;
    }
}

/// row b += c * row a
fn add_row(m: &mut IntMat, u: &mut IntMat, a: usize, b: usize, c: i64) {
    for j in 0..m.cols {
        m[(b, j)] += c * m[(a, j)];
    }
    for j in 0..u.cols {
        u[(b, j)] += c * u[(a, j)];
    }
}

/// col b += c * col a
fn add_col(m: &mut IntMat, v: &mut IntMat, a: usize, b: usize, c: i64) {
    for i in 0..m.rows {
        m[(i, b)] += c * m[(i, a)];
    }
    for i in 0..v.rows {
        v[(i, b)] += c * v[(i, a)];
    }
}

fn negate_row(m: &mut IntMat, u: &mut IntMat, a: usize) {
    for j in 0..m.cols {
        m[(a, j)] = -m[(a, j)];
    }
    for j in 0..u.cols {
        u[(a, j)] = -u[(a, j)];
    }
}

fn div_round(a: i64, b: i64) -> i64 {
    // Round-to-nearest quotient keeps remainders small and termination fast.
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + r.signum() * b.signum()
    } else {
        q
    }
}

/// Row Hermite normal form: echelon basis with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&c| c != 0)).cloned().collect();
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row >= rows.len() {
            break;
        }
        // Reduce the column below pivot_row to a single nonzero entry by gcd steps.
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(pivot_row) {
                if row[col] != 0 && best.map_or(true, |b| row[col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            let p = rows[pivot_row][col];
            for i in pivot_row + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = div_round(rows[i][col], p);
                    for j in 0..n {
                        rows[i][j] -= q * rows[pivot_row][j];
                    }
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col] == 0 {
            continue;
        }
        if rows[pivot_row][col] < 0 {
            for j in 0..n {
                rows[pivot_row][j] = -rows[pivot_row][j];
            }
        }
        // Reduce the entries above the pivot.
        let p = rows[pivot_row][col];
        for i in 0..pivot_row {
            let q = rows[i][col].div_euclid(p);
            if q != 0 {
                for j in 0..n {
                    rows[i][j] -= q * rows[pivot_row][j];
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Basis of the integer kernel `{x : m x = 0}`. The result is saturated.
pub fn integer_kernel(m: &IntMat) -> Vec<LatticeVector> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols)
        .map(|j| LatticeVector((0..m.cols).map(|i| snf.v[(i, j)]).collect()))
        .collect()
}

// ---------------------------------------------------------------------------
// Sublattices
// ---------------------------------------------------------------------------

/// A subgroup of `Z^ambient_rank`, stored by a canonical Hermite basis.
/// Two sublattices are equal iff they have the same ambient rank and basis;
/// all construction paths normalize to the same canonical form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<LatticeVector>,
    /// Congruence description, when the lattice was cut out by congruences.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    congruences: Option<Vec<(Covector, i64)>>,
}

impl PartialEq for Sublattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis == other.basis
    }
}
impl Eq for Sublattice {}

impl Sublattice {
    pub fn from_generators(ambient_rank: usize, generators: &[LatticeVector]) -> Self {
        assert!(generators.iter().all(|g| g.rank() == ambient_rank));
        let rows: Vec<Vec<i64>> = generators.iter().map(|g| g.0.clone()).collect();
        let basis = hermite_normal_form(&rows).into_iter().map(LatticeVector).collect();
        Sublattice { ambient_rank, basis, congruences: None }
    }

    pub fn full(rank: usize) -> Self {
        let gens: Vec<LatticeVector> = (0..rank)
            .map(|i| {
                let mut c = vec![0; rank];
                c[i] = 1;
                LatticeVector(c)
            })
            .collect();
        Sublattice::from_generators(rank, &gens)
    }

    /// The subgroup of `Z^n` on which every listed covector vanishes modulo
    /// its modulus. Covectors must be integral here.
    pub fn from_congruences(ambient_rank: usize, congruences: &[(Covector, i64)]) -> Self {
        assert!(congruences.iter().all(|(c, m)| c.den == 1 && c.rank() == ambient_rank && *m >= 2));
        if congruences.is_empty() {
            return Sublattice::full(ambient_rank);
        }
        // v satisfies the congruences iff (v, k) solves [C | -diag(m)] x = 0
        // for some integer k; project the kernel to the first n coordinates.
        let k = congruences.len();
        let mut rows = Vec::with_capacity(k);
        for (i, (c, m)) in congruences.iter().enumerate() {
            let mut row = c.num.clone();
            row.extend(std::iter::repeat(0).take(k));
            row[ambient_rank + i] = -m;
            rows.push(row);
        }
        let kernel = integer_kernel(&IntMat::from_rows(&rows));
        let gens: Vec<LatticeVector> =
            kernel.iter().map(|v| LatticeVector(v.0[..ambient_rank].to_vec())).collect();
        let mut sub = Sublattice::from_generators(ambient_rank, &gens);
        sub.congruences = Some(congruences.to_vec());
        sub
    }

    /// `{v in ambient : <m, v> = 0 for all m in conditions}`, saturated in
    /// the ambient lattice.
    pub fn annihilator(ambient: &Sublattice, conditions: &[Covector]) -> Self {
        if conditions.is_empty() {
            return ambient.clone();
        }
        // Pair each condition with the ambient basis; integral by duality.
        let rows: Vec<Vec<i64>> = conditions
            .iter()
            .map(|c| ambient.basis.iter().map(|b| c.pair(b)).collect())
            .collect();
        let kernel = integer_kernel(&IntMat::from_rows(&rows));
        let gens: Vec<LatticeVector> = kernel
            .iter()
            .map(|coeffs| {
                let mut v = LatticeVector::zero(ambient.ambient_rank);
                for (c, b) in coeffs.0.iter().zip(&ambient.basis) {
                    v = v.add(&b.scale(*c));
                }
                v
            })
            .collect();
        Sublattice::from_generators(ambient.ambient_rank, &gens)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn congruences(&self) -> Option<&[(Covector, i64)]> {
        self.congruences.as_deref()
    }

    /// Index in `Z^ambient_rank`; `None` when the rank is not full.
    pub fn index_in_ambient(&self) -> Option<i64> {
        if self.rank() != self.ambient_rank {
            return None;
        }
        // HNF is upper triangular on the pivot columns, so the index is the
        // product of the pivots, i.e. the determinant of the basis matrix.
        let m = IntMat::from_rows(&self.basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>());
        Some(m.det().abs())
    }

    /// Coordinates of `v` over the stored basis, if `v` is a member.
    pub fn coordinates_of(&self, v: &LatticeVector) -> Result<Vec<i64>, LatticeError> {
        if v.rank() != self.ambient_rank {
            return Err(LatticeError::RankMismatch { expected: self.ambient_rank, got: v.rank() });
        }
        let mut rest = v.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let pivot_col = b.0.iter().position(|&c| c != 0).expect("basis rows are nonzero");
            if rest.0[..pivot_col].iter().any(|&c| c != 0) {
                return Err(LatticeError::NotMember);
            }
            let p = b.0[pivot_col];
            if rest.0[pivot_col] % p != 0 {
                return Err(LatticeError::NotMember);
            }
            let x = rest.0[pivot_col] / p;
            rest = rest.sub(&b.scale(x));
            coords.push(x);
        }
        if rest.is_zero() {
            Ok(coords)
        } else {
            Err(LatticeError::NotMember)
        }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.coordinates_of(v).is_ok()
    }

    /// Whether `v` lies in the rational span of this lattice.
    pub fn in_rational_span(&self, v: &LatticeVector) -> bool {
        let mut rows: Vec<Vec<i64>> = self.basis.iter().map(|b| b.0.clone()).collect();
        rows.push(v.0.clone());
        hermite_normal_form(&rows).len() == self.rank()
    }

    /// Rebuild an ambient vector from basis coordinates.
    pub fn from_coordinates(&self, coords: &[i64]) -> LatticeVector {
        assert_eq!(coords.len(), self.rank());
        let mut v = LatticeVector::zero(self.ambient_rank);
        for (c, b) in coords.iter().zip(&self.basis) {
            v = v.add(&b.scale(*c));
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Lattice maps
// ---------------------------------------------------------------------------

/// An integer-linear map between sublattices, given on ambient coordinates.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    pub matrix: IntMat,
    pub domain: Sublattice,
    pub codomain: Sublattice,
}

impl LatticeMap {
    pub fn new(matrix: IntMat, domain: Sublattice, codomain: Sublattice) -> Self {
        assert_eq!(matrix.cols, domain.ambient_rank());
        assert_eq!(matrix.rows, codomain.ambient_rank());
        for b in domain.basis() {
            assert!(codomain.contains(&matrix.apply(b)), "map does not land in the codomain");
        }
        LatticeMap { matrix, domain, codomain }
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.apply(v)
    }

    /// Exact image and kernel, as sublattices of the codomain and domain
    /// ambient spaces respectively.
    pub fn image_and_kernel(&self) -> (Sublattice, Sublattice) {
        let images: Vec<LatticeVector> =
            self.domain.basis().iter().map(|b| self.matrix.apply(b)).collect();
        let image = Sublattice::from_generators(self.codomain.ambient_rank(), &images);

        // Kernel in domain basis coordinates, pushed back to ambient coordinates.
        let rows: Vec<Vec<i64>> = (0..self.matrix.rows)
            .map(|i| images.iter().map(|im| im.0[i]).collect())
            .collect();
        let kernel_coords = integer_kernel(&IntMat::from_rows(&rows));
        let gens: Vec<LatticeVector> =
            kernel_coords.iter().map(|c| self.domain.from_coordinates(&c.0)).collect();
        let kernel = Sublattice::from_generators(self.domain.ambient_rank(), &gens);
        (image, kernel)
    }
}

// ---------------------------------------------------------------------------
// The specific lattices of the moduli setup
// ---------------------------------------------------------------------------

/// Coordinate order on the six-torus: (r1, r2, g1, g2, b1, b2).
pub const TORUS_RANK: usize = 6;

/// The quotient lattice `N6`: 4-tuples with even coordinate sum.
pub fn lattice_n6() -> Sublattice {
    Sublattice::from_congruences(4, &[(Covector::integral([1, 1, 1, 1]), 2)])
}

/// The kernel lattice: tuples (p, p, g, g, b, b) with p + g + b = 0.
pub fn lattice_n_sigma() -> Sublattice {
    Sublattice::from_generators(
        6,
        &[
            LatticeVector::new([1, 1, 0, 0, -1, -1]),
            LatticeVector::new([0, 0, 1, 1, -1, -1]),
        ],
    )
}

/// The quotient map from the six-torus cocharacters to `N6`:
/// (p1, p2, g1, g2, b1, b2) -> (sum, p1 - p2, g1 - g2, b1 - b2).
pub fn quotient_map_matrix() -> IntMat {
    IntMat::from_rows(&[
        vec![1, 1, 1, 1, 1, 1],
        vec![1, -1, 0, 0, 0, 0],
        vec![0, 0, 1, -1, 0, 0],
        vec![0, 0, 0, 0, 1, -1],
    ])
}

pub fn quotient_map() -> LatticeMap {
    LatticeMap::new(quotient_map_matrix(), Sublattice::full(6), lattice_n6())
}

/// Push a character of the six-torus down to the quotient torus.
///
/// The exponent tuple must be trivial on the acting subtorus, i.e. pair to
/// zero with the kernel lattice. The result is the unique (possibly
/// half-integral) covector whose pullback along the quotient map is the
/// given exponent.
pub fn character_pushforward(exponent: &[i64; 6]) -> Result<Covector, LatticeError> {
    let [r1, r2, g1, g2, b1, b2] = *exponent;
    // Invariance is exactly the equality of the three color sums.
    if r1 + r2 != g1 + g2 || g1 + g2 != b1 + b2 {
        return Err(LatticeError::NotInvariant);
    }
    Ok(Covector::new([r1 + r2, r1 - r2, g1 - g2, b1 - b2], 2))
}

/// Pull a covector on the quotient back to a six-torus exponent tuple.
pub fn character_pullback(c: &Covector) -> [i64; 6] {
    assert_eq!(c.rank(), 4);
    let pair = |v: [i64; 4]| c.pair(&LatticeVector::new(v));
    [
        pair([1, 1, 0, 0]),
        pair([1, -1, 0, 0]),
        pair([1, 0, 1, 0]),
        pair([1, 0, -1, 0]),
        pair([1, 0, 0, 1]),
        pair([1, 0, 0, -1]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: impl Into<Vec<i64>>) -> LatticeVector {
        LatticeVector::new(c)
    }

    #[test]
    fn snf_identity() {
        let m = IntMat::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMat::identity(2));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![2, 2]);
    }

    #[test]
    fn snf_of_quotient_map() {
        let m = quotient_map_matrix();
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![1, 1, 1, 2]);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
    }

    #[test]
    fn n6_has_index_two() {
        let n6 = lattice_n6();
        assert_eq!(n6.rank(), 4);
        assert_eq!(n6.index_in_ambient(), Some(2));
        assert!(n6.contains(&v([1, 1, 0, 0])));
        assert!(!n6.contains(&v([1, 0, 0, 0])));
        assert!(n6.contains(&v([2, 0, 0, 0])));
    }

    #[test]
    fn congruences_trivial_and_product() {
        assert_eq!(Sublattice::from_congruences(2, &[]), Sublattice::full(2));
        let even = Sublattice::from_congruences(
            2,
            &[(Covector::integral([1, 0]), 2), (Covector::integral([0, 1]), 2)],
        );
        assert_eq!(even.index_in_ambient(), Some(4));
        assert!(even.contains(&v([2, -4])));
        assert!(!even.contains(&v([1, 2])));
    }

    #[test]
    fn pushforward_of_coordinate_characters() {
        // r1 g1 b1
        assert_eq!(
            character_pushforward(&[1, 0, 1, 0, 1, 0]).unwrap(),
            Covector::new([1, 1, 1, 1], 2)
        );
        // r1 / r2
        assert_eq!(
            character_pushforward(&[1, -1, 0, 0, 0, 0]).unwrap(),
            Covector::integral([0, 1, 0, 0])
        );
        // r2 g1 b1
        assert_eq!(
            character_pushforward(&[0, 1, 1, 0, 1, 0]).unwrap(),
            Covector::new([1, -1, 1, 1], 2)
        );
        assert_eq!(
            character_pushforward(&[1, 0, 0, 0, 0, 0]),
            Err(LatticeError::NotInvariant)
        );
    }

    #[test]
    fn pushforward_pullback_round_trip() {
        // The images of all six coordinate characters of the product torus
        // that are invariant come back unchanged.
        let exps = [
            [1, 0, 1, 0, 1, 0],
            [1, -1, 0, 0, 0, 0],
            [0, 0, 1, -1, 0, 0],
            [0, 0, 0, 0, 1, -1],
            [0, 1, 1, 0, 1, 0],
            [2, 0, 1, 1, 1, 1],
        ];
        for e in exps {
            let c = character_pushforward(&e).unwrap();
            assert_eq!(character_pullback(&c), e);
        }
    }

    #[test]
    fn annihilator_cuts_out_rank_one() {
        let n6 = lattice_n6();
        let conditions = vec![
            character_pushforward(&[0, 1, 1, 0, 1, 0]).unwrap(),
            character_pushforward(&[1, 0, 0, 1, 1, 0]).unwrap(),
            character_pushforward(&[1, 0, 1, 0, 0, 1]).unwrap(),
        ];
        let n3 = Sublattice::annihilator(&n6, &conditions);
        assert_eq!(n3.rank(), 1);
        assert!(n3.contains(&v([-1, 1, 1, 1])));
        assert_eq!(n3, Sublattice::from_generators(4, &[v([-1, 1, 1, 1])]));
    }

    #[test]
    fn annihilator_with_no_conditions_is_ambient() {
        let n6 = lattice_n6();
        assert_eq!(Sublattice::annihilator(&n6, &[]), n6);
    }

    #[test]
    fn quotient_map_image_and_kernel() {
        let (image, kernel) = quotient_map().image_and_kernel();
        assert_eq!(image, lattice_n6());
        assert_eq!(kernel, lattice_n_sigma());
    }

    #[test]
    fn zero_and_identity_maps() {
        let zero = LatticeMap::new(IntMat::zero(2, 2), Sublattice::full(2), Sublattice::full(2));
        let (im, ker) = zero.image_and_kernel();
        assert_eq!(im.rank(), 0);
        assert_eq!(ker, Sublattice::full(2));

        let id = LatticeMap::new(IntMat::identity(4), Sublattice::full(4), Sublattice::full(4));
        let (im, ker) = id.image_and_kernel();
        assert_eq!(im, Sublattice::full(4));
        assert_eq!(ker.rank(), 0);
    }

    #[test]
    fn coordinates_in_basis() {
        let n4b = Sublattice::from_generators(4, &[v([1, -1, 0, 0]), v([0, 0, 1, -1])]);
        assert_eq!(n4b.coordinates_of(&v([1, -1, 0, 0])).unwrap(), vec![1, 0]);
        assert_eq!(n4b.coordinates_of(&v([1, -1, 1, -1])).unwrap(), vec![1, 1]);
        assert_eq!(n4b.coordinates_of(&v([1, 0, 0, 0])), Err(LatticeError::NotMember));
        // Round trip on an arbitrary member.
        let w = n4b.from_coordinates(&[3, -2]);
        assert_eq!(n4b.coordinates_of(&w).unwrap(), vec![3, -2]);
    }

    #[test]
    fn rational_span_membership() {
        let l = Sublattice::from_generators(3, &[v([2, 0, 0]), v([0, 2, 0])]);
        assert!(l.in_rational_span(&v([1, 1, 0])));
        assert!(!l.contains(&v([1, 1, 0])));
        assert!(!l.in_rational_span(&v([0, 0, 1])));
    }

    #[test]
    fn half_integral_pairing_is_integral_on_n6() {
        let n6 = lattice_n6();
        let c = Covector::new([1, 1, 1, 1], 2);
        for b in n6.basis() {
            let _ = c.pair(b); // must not panic
        }
        assert_eq!(c.try_pair(&v([1, 0, 0, 0])), Err(LatticeError::NonIntegralPairing));
    }
}
