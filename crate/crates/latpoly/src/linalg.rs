//! Exact integer and rational linear algebra.
//!
//! The substrate for every other module: arbitrary-precision integer
//! vectors and matrices, fraction-free determinants, Hermite-style
//! unimodular completion, and affine frame solving. No floating point
//! anywhere — counts and witnesses downstream must be bit-exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision integer, the scalar type of the whole crate.
pub type Int = BigInt;
/// Exact rational scalar (kept in lowest terms by `num-rational`).
pub type Rat = BigRational;

/// Convenience constructor for an `Int` from a machine integer.
pub fn int(x: i64) -> Int {
    Int::from(x)
}

/// Builds an integer vector from machine integers; handy in tests and
/// constructions.
pub fn ivec(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

/// Exact dot product of two integer vectors of equal length.
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product of a rational vector with an integer vector.
pub fn dot_ri(a: &[Rat], b: &[Int]) -> Rat {
    debug_assert_eq!(a.len(), b.len(), "dot_ri: length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rat::from_integer(y.clone()))
        .sum()
}

/// Sum of two integer vectors.
pub fn vadd(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Difference `a - b` of two integer vectors.
pub fn vsub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scales an integer vector by `c`.
pub fn vscale(c: &Int, a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| c * x).collect()
}

/// Divides a nonzero integer vector by the (positive) gcd of its entries,
/// preserving direction. Errors on the zero vector.
pub fn primitive(v: &[Int]) -> Result<Vec<Int>> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::Degenerate("primitive: zero vector".into()));
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from explicit rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("from_rows: ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.concat() })
    }

    /// Test-friendly constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        Self::from_rows(&rows).expect("from_i64: ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "apply: dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "det: {}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                // Pivot by row swap; a fully zero column means det = 0.
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    // Bareiss update: division by the previous pivot is exact.
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = Int::zero();
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * m[(n - 1, n - 1)].clone())
    }

    /// True when the matrix is square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Exact inverse of a unimodular matrix (integral by Cramer's rule).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let inv = self
            .to_rational()
            .inverse()
            .ok_or_else(|| Error::Degenerate("inverse_unimodular: singular matrix".into()))?;
        let m = RatMatrix::to_integer(&inv).ok_or_else(|| {
            Error::Precondition("inverse_unimodular: matrix is not unimodular".into())
        })?;
        Ok(m)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense row-major rational matrix; only the handful of operations the
/// exact pipeline needs (inverse, solve, integrality casts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "RatMatrix: ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse: not square");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = IntMatrix::identity(n).to_rational();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let x = a[(pivot, j)].clone();
                    let y = a[(col, j)].clone();
                    a[(pivot, j)] = y;
                    a[(col, j)] = x;
                    let x = inv[(pivot, j)].clone();
                    let y = inv[(col, j)].clone();
                    inv[(pivot, j)] = y;
                    inv[(col, j)] = x;
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let s = &a[(col, j)] * &f;
                    a[(i, j)] = &a[(i, j)] - &s;
                    let s = &inv[(col, j)] * &f;
                    inv[(i, j)] = &inv[(i, j)] - &s;
                }
            }
        }
        Some(inv)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimension mismatch");
        let mut out = RatMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Casts to an integer matrix when every entry has denominator 1.
    pub fn to_integer(m: &RatMatrix) -> Option<IntMatrix> {
        let mut out = IntMatrix::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let x = &m[(i, j)];
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Some(out)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` exactly over the rationals; `None` when `A` is singular.
pub fn solve_rational(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let inv = a.inverse()?;
    Some(
        (0..inv.rows)
            .map(|i| inv.row(i).iter().zip(b).map(|(x, y)| x * y).sum())
            .collect(),
    )
}

/// Completes a primitive integer vector `c` to a unimodular matrix whose
/// last row is `c`.
///
/// Built from the column-style Hermite reduction of `c`: a chain of
/// elementary (determinant ±1) column operations `V` sends `c` to the last
/// standard basis vector, so `V^{-1}` is unimodular with last row `c`. The
/// map `x -> Mx` then carries the affine hyperplane `{c . y = 1}` onto
/// `{x_n = 1}`.
pub fn hermite_completion(c: &[Int]) -> Result<IntMatrix> {
    let n = c.len();
    if n == 0 {
        return Err(Error::Dimension("hermite_completion: empty vector".into()));
    }
    let mut g = Int::zero();
    for x in c {
        g = g.gcd(x);
    }
    if !g.is_one() {
        return Err(Error::Precondition(format!(
            "hermite_completion: vector is not primitive (content {g})"
        )));
    }
    let mut w = c.to_vec();
    let mut v = IntMatrix::identity(n);
    // Fold every entry into the last position with extended-gcd column
    // operations, keeping the transform unimodular at each step.
    for i in 0..n - 1 {
        if w[i].is_zero() {
            continue;
        }
        let e = w[n - 1].extended_gcd(&w[i]);
        let (p, q) = (w[n - 1].clone() / &e.gcd, w[i].clone() / &e.gcd);
        for r in 0..n {
            let last = v[(r, n - 1)].clone();
            let cur = v[(r, i)].clone();
            // det [[x, -q], [y, p]] = (x*w[n-1] + y*w[i]) / gcd = 1
            v[(r, n - 1)] = &e.x * &last + &e.y * &cur;
            v[(r, i)] = &p * &cur - &q * &last;
        }
        w[n - 1] = e.gcd;
        w[i] = Int::zero();
    }
    if w[n - 1].is_negative() {
        for r in 0..n {
            let x = -v[(r, n - 1)].clone();
            v[(r, n - 1)] = x;
        }
        w[n - 1] = -w[n - 1].clone();
    }
    debug_assert!(w[n - 1].is_one(), "hermite_completion: gcd chain must end at 1");
    let m = v.inverse_unimodular()?;
    debug_assert_eq!(m.row(n - 1), c, "hermite_completion: last row mismatch");
    Ok(m)
}

/// Affine map `x -> Ux + b` with unimodular linear part, the witness type
/// for every equivalence in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: IntMatrix,
    shift: Vec<Int>,
}

impl AffineMap {
    /// Validates that `linear` is square, unimodular, and sized to `shift`.
    pub fn new(linear: IntMatrix, shift: Vec<Int>) -> Result<Self> {
        if linear.rows() != linear.cols() || linear.rows() != shift.len() {
            return Err(Error::Dimension("AffineMap: linear/shift size mismatch".into()));
        }
        if !linear.is_unimodular() {
            return Err(Error::Precondition("AffineMap: linear part is not unimodular".into()));
        }
        Ok(AffineMap { linear, shift })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap { linear: IntMatrix::identity(n), shift: vec![Int::zero(); n] }
    }

    /// Pure translation by `b`.
    pub fn translation(b: Vec<Int>) -> Self {
        AffineMap { linear: IntMatrix::identity(b.len()), shift: b }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn shift(&self) -> &[Int] {
        &self.shift
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        vadd(&self.linear.apply(v), &self.shift)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.mul(&other.linear),
            shift: vadd(&self.linear.apply(&other.shift), &self.shift),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse_unimodular().expect("AffineMap keeps |det| = 1");
        let shift = inv.apply(&self.shift).iter().map(|x| -x).collect();
        AffineMap { linear: inv, shift }
    }
}

/// The unique affine map sending `src[i] -> dst[i]`, returned only when its
/// linear part is unimodular (`Ok(None)` otherwise). `src` must consist of
/// n+1 affinely independent points of Z^n.
pub fn solve_affine_frame(src: &[Vec<Int>], dst: &[Vec<Int>]) -> Result<Option<AffineMap>> {
    let n = src.first().map_or(0, Vec::len);
    if src.len() != n + 1 || dst.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "solve_affine_frame: need {} points in dimension {n}, got {} -> {}",
            n + 1,
            src.len(),
            dst.len()
        )));
    }
    if src.iter().chain(dst).any(|p| p.len() != n) {
        return Err(Error::Dimension("solve_affine_frame: mixed point dimensions".into()));
    }
    // Columns of S are src[i] - src[0]; affine independence <=> S invertible.
    let mut s = RatMatrix::zero(n, n);
    let mut d = RatMatrix::zero(n, n);
    for j in 0..n {
        for i in 0..n {
            s[(i, j)] = Rat::from_integer(&src[j + 1][i] - &src[0][i]);
            d[(i, j)] = Rat::from_integer(&dst[j + 1][i] - &dst[0][i]);
        }
    }
    let s_inv = s.inverse().ok_or_else(|| {
        Error::Degenerate("solve_affine_frame: source points affinely dependent".into())
    })?;
    let u = d.mul(&s_inv);
    let Some(u) = RatMatrix::to_integer(&u) else {
        return Ok(None);
    };
    if !u.is_unimodular() {
        return Ok(None);
    }
    let shift = vsub(&dst[0], &u.apply(&src[0]));
    Ok(Some(AffineMap { linear: u, shift }))
}

/// Deterministic pseudo-random affine unimodular map, used by tests and the
/// verification suites to exercise invariance under change of lattice basis.
/// The linear part is lower-unitriangular x signed-permutation x
/// upper-unitriangular with shear entries in [-2, 2]; the product form keeps
/// matrix entries O(n) instead of compounding them across rounds, so images
/// of the built-in polytopes stay cheap to count while every pair of
/// coordinates still mixes. The translation part has entries in [-3, 3].
pub fn seeded_unimodular_map(n: usize, seed: u64) -> AffineMap {
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        // splitmix64: cheap, deterministic, good enough for test transforms.
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let mut shear = |lower: bool| {
        let mut m = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                let c = int((next() % 5) as i64 - 2);
                m[if lower { (i, j) } else { (j, i) }] = c;
            }
        }
        m
    };
    let l = shear(true);
    let r = shear(false);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    let mut p = IntMatrix::zero(n, n);
    for (i, &c) in perm.iter().enumerate() {
        p[(i, c)] = if next() % 2 == 0 { int(1) } else { int(-1) };
    }
    let u = l.mul(&p).mul(&r);
    let shift = (0..n).map(|_| int((next() % 7) as i64 - 3)).collect();
    debug_assert!(u.is_unimodular());
    AffineMap { linear: u, shift }
}

/// LLL reduction (delta = 3/4) of the rows of `d`, which must be linearly
/// independent. Returns the unimodular transform `t` such that `t * d` has
/// LLL-reduced rows. Exact rational Gram–Schmidt, so the result is
/// deterministic; intended for the small systems that arise here.
pub fn lll_rows(d: &IntMatrix) -> IntMatrix {
    let (n, m) = (d.rows(), d.cols());
    let mut b: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..m).map(|j| Rat::from_integer(d[(i, j)].clone())).collect())
        .collect();
    let mut t = IntMatrix::identity(n);
    let rat_dot = |x: &[Rat], y: &[Rat]| {
        let mut acc = Rat::zero();
        for (a, c) in x.iter().zip(y) {
            acc += a * c;
        }
        acc
    };
    let gram = |b: &[Vec<Rat>]| {
        let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut norm2: Vec<Rat> = Vec::with_capacity(n);
        let mut mu = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = rat_dot(&b[i], &star[j]) / &norm2[j];
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            let nv = rat_dot(&v, &v);
            debug_assert!(!nv.is_zero(), "lll_rows: rows must be linearly independent");
            norm2.push(nv);
            star.push(v);
        }
        (norm2, mu)
    };
    let delta = Rat::new(int(3), int(4));
    let mut k = 1;
    while k < n {
        let (norm2, mut mu) = gram(&b);
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if !q.is_zero() {
                let qi = q.to_integer();
                let (head, tail) = b.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &q * y;
                }
                for col in 0..n {
                    let sub = &qi * &t[(j, col)];
                    t[(k, col)] -= sub;
                }
                for l in 0..j {
                    let sub = &q * &mu[j][l];
                    mu[k][l] -= sub;
                }
                mu[k][j] -= q;
            }
        }
        let m2 = &mu[k][k - 1] * &mu[k][k - 1];
        if norm2[k] >= (&delta - m2) * &norm2[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            for col in 0..n {
                let a = t[(k, col)].clone();
                t[(k, col)] = t[(k - 1, col)].clone();
                t[(k - 1, col)] = a;
            }
            k = k.max(2) - 1;
        }
    }
    debug_assert!(t.is_unimodular());
    t
}

/// Row Hermite normal form with its transform: returns `(h, u)` with `u`
/// unimodular and `u * a = h`, where `h` has positive pivots, entries above
/// each pivot reduced into `[0, pivot)`, and zero rows at the bottom. For
/// full-column-rank `a` this `h` is the unique canonical representative of
/// the left `GL_n(Z)`-orbit of `a`, which is what makes it usable as an
/// orbit key.
pub fn hermite_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..cols {
        if r >= m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !h[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                let x = h[(r, k)].clone();
                h[(r, k)] = h[(p, k)].clone();
                h[(p, k)] = x;
            }
            for k in 0..m {
                let x = u[(r, k)].clone();
                u[(r, k)] = u[(p, k)].clone();
                u[(p, k)] = x;
            }
        }
        for i in r + 1..m {
            if h[(i, c)].is_zero() {
                continue;
            }
            let e = h[(r, c)].extended_gcd(&h[(i, c)]);
            let (s, t) = (h[(r, c)].clone() / &e.gcd, h[(i, c)].clone() / &e.gcd);
            // det [[x, y], [-t, s]] = (x * h[r][c] + y * h[i][c]) / gcd = 1
            for k in 0..cols {
                let top = h[(r, k)].clone();
                let bot = h[(i, k)].clone();
                h[(r, k)] = &e.x * &top + &e.y * &bot;
                h[(i, k)] = &s * &bot - &t * &top;
            }
            for k in 0..m {
                let top = u[(r, k)].clone();
                let bot = u[(i, k)].clone();
                u[(r, k)] = &e.x * &top + &e.y * &bot;
                u[(i, k)] = &s * &bot - &t * &top;
            }
        }
        if h[(r, c)].is_negative() {
            for k in 0..cols {
                let x = -h[(r, k)].clone();
                h[(r, k)] = x;
            }
            for k in 0..m {
                let x = -u[(r, k)].clone();
                u[(r, k)] = x;
            }
        }
        for j in 0..r {
            let q = h[(j, c)].div_floor(&h[(r, c)]);
            if q.is_zero() {
                continue;
            }
            for k in 0..cols {
                let sub = &q * &h[(r, k)];
                h[(j, k)] -= sub;
            }
            for k in 0..m {
                let sub = &q * &u[(r, k)];
                u[(j, k)] -= sub;
            }
        }
        r += 1;
    }
    (h, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn det_identity_and_diagonal() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), int(1));
        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(d.det().unwrap(), int(6));
    }

    #[test]
    fn det_height_normalizing_shift_matrix() {
        // 4x4 companion of the (1,1,1,2) functional; cofactor expansion along
        // the first column gives -1.
        let t = IntMatrix::from_i64(&[
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 1, 2],
        ]);
        assert_eq!(t.det().unwrap(), int(-1));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.det(), Err(Error::Dimension(_))));
    }

    #[test]
    fn det_zero_pivot_needs_row_swap() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det().unwrap(), int(-1));
        let singular = IntMatrix::from_i64(&[&[0, 0], &[1, 2]]);
        assert_eq!(singular.det().unwrap(), int(0));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&ivec(&[2, 4, 6])).unwrap(), ivec(&[1, 2, 3]));
        assert_eq!(primitive(&ivec(&[0, -3])).unwrap(), ivec(&[0, -1]));
        assert_eq!(primitive(&ivec(&[-1, 1])).unwrap(), ivec(&[-1, 1]));
        assert!(matches!(primitive(&ivec(&[0, 0])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn hermite_completion_aligned_vector_is_identity() {
        let m = hermite_completion(&ivec(&[0, 0, 1])).unwrap();
        assert_eq!(m, IntMatrix::identity(3));
    }

    #[test]
    fn hermite_completion_prescribes_last_row() {
        for c in [ivec(&[1, 1, 2]), ivec(&[3, 5]), ivec(&[2, 3, 5, 7]), ivec(&[-1])] {
            let m = hermite_completion(&c).unwrap();
            assert_eq!(m.row(c.len() - 1), &c[..], "last row must be c");
            assert!(m.det().unwrap().abs().is_one(), "completion must be unimodular");
        }
    }

    #[test]
    fn hermite_completion_rejects_imprimitive() {
        assert!(matches!(
            hermite_completion(&ivec(&[2, 4])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hermite_completion_sends_lifted_cube_normals_to_height_one() {
        // Lifted facet normals of the unit cube in dimension 3: (e_i, 0) and
        // (-e_i, 1). The functional (1,1,1,2) takes value 1 on all of them,
        // so the completed matrix must map each to a point at height 1.
        let c = ivec(&[1, 1, 1, 2]);
        let m = hermite_completion(&c).unwrap();
        let mut normals = Vec::new();
        for i in 0..3 {
            let mut plus = vec![Int::zero(); 4];
            plus[i] = int(1);
            let mut minus = vec![Int::zero(); 4];
            minus[i] = int(-1);
            minus[3] = int(1);
            normals.push(plus);
            normals.push(minus);
        }
        for nu in normals {
            assert_eq!(dot(&c, &nu), int(1));
            let image = m.apply(&nu);
            assert_eq!(image[3], int(1), "image of {nu:?} must sit at height 1");
        }
    }

    #[test]
    fn hermite_form_reconstructs_and_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 3, 1], &[4, 7, 2], &[6, 18, 5]]);
        let (h, u) = hermite_form(&a);
        assert!(u.is_unimodular());
        assert_eq!(u.mul(&a), h);
        for i in 0..3 {
            assert!(h[(i, i)].is_positive(), "pivots must be positive");
            for j in 0..i {
                assert!(h[(i, j)].is_zero(), "below-diagonal must vanish");
                assert!(
                    !h[(j, i)].is_negative() && h[(j, i)] < h[(i, i)],
                    "above-pivot entries must be reduced"
                );
            }
        }
    }

    #[test]
    fn hermite_form_is_a_left_orbit_key() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[2, 3], &[0, -5]]);
        let (h, _) = hermite_form(&a);
        for seed in 0..20 {
            let v = seeded_unimodular_map(3, seed);
            let (h2, u2) = hermite_form(&v.linear().mul(&a));
            assert_eq!(h2, h, "orbit representative must not depend on the basis");
            assert!(u2.is_unimodular());
        }
    }

    #[test]
    fn lll_decouples_skewed_rows() {
        let d = IntMatrix::from_i64(&[&[1, 0, 3], &[1000, 1, 2999]]);
        let t = lll_rows(&d);
        assert!(t.is_unimodular());
        let r = t.mul(&d);
        for i in 0..2 {
            let n2 = (0..3).fold(Int::zero(), |acc, j| acc + &r[(i, j)] * &r[(i, j)]);
            assert!(n2 <= int(10), "row {i} of {r:?} is still long");
        }
        // already-reduced input comes back untouched
        let id = IntMatrix::identity(4);
        assert_eq!(lll_rows(&id), id);
    }

    #[test]
    fn hermite_form_unimodular_input_gives_identity() {
        let v = seeded_unimodular_map(4, 9);
        let (h, u) = hermite_form(v.linear());
        assert_eq!(h, IntMatrix::identity(4));
        assert_eq!(u.mul(v.linear()), IntMatrix::identity(4));
    }

    #[test]
    fn hermite_form_rank_deficient_leaves_zero_rows() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[2, 4], &[3, 6]]);
        let (h, u) = hermite_form(&a);
        assert!(u.is_unimodular());
        assert_eq!(u.mul(&a), h);
        assert_eq!(h.row(1), &ivec(&[0, 0])[..]);
        assert_eq!(h.row(2), &ivec(&[0, 0])[..]);
    }

    #[test]
    fn affine_frame_identity_and_swap() {
        let src = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])];
        let id = solve_affine_frame(&src, &src).unwrap().unwrap();
        assert_eq!(id, AffineMap::identity(2));

        let dst = vec![ivec(&[0, 0]), ivec(&[0, 1]), ivec(&[1, 0])];
        let swap = solve_affine_frame(&src, &dst).unwrap().unwrap();
        assert_eq!(swap.linear().det().unwrap(), int(-1));
        assert_eq!(swap.apply(&ivec(&[1, 0])), ivec(&[0, 1]));
    }

    #[test]
    fn affine_frame_rejects_dependent_source() {
        let src = vec![ivec(&[0, 0]), ivec(&[1, 1]), ivec(&[2, 2])];
        let dst = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])];
        assert!(matches!(
            solve_affine_frame(&src, &dst),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn affine_frame_declines_non_unimodular_match() {
        // Doubling map exists but is not unimodular, so no witness.
        let src = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])];
        let dst = vec![ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[0, 2])];
        assert!(solve_affine_frame(&src, &dst).unwrap().is_none());
    }

    #[test]
    fn affine_frame_recovers_seeded_maps() {
        let src = vec![
            ivec(&[0, 0, 0]),
            ivec(&[1, 0, 0]),
            ivec(&[0, 1, 0]),
            ivec(&[0, 0, 1]),
        ];
        for seed in 0..40 {
            let map = seeded_unimodular_map(3, seed);
            let dst: Vec<_> = src.iter().map(|p| map.apply(p)).collect();
            let recovered = solve_affine_frame(&src, &dst).unwrap().unwrap();
            assert_eq!(recovered, map);
            // Forward and backward solves compose to the identity on src.
            let back = solve_affine_frame(&dst, &src).unwrap().unwrap();
            let round = back.compose(&recovered);
            for p in &src {
                assert_eq!(round.apply(p), *p);
            }
        }
    }

    #[test]
    fn affine_map_inverse_composes_to_identity() {
        for seed in 0..20 {
            let map = seeded_unimodular_map(4, seed);
            let inv = map.inverse();
            assert_eq!(map.compose(&inv), AffineMap::identity(4));
            assert_eq!(inv.compose(&map), AffineMap::identity(4));
        }
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(-6i64..=6, n * n).prop_map(move |xs| {
            let rows: Vec<Vec<Int>> =
                xs.chunks(n).map(|c| c.iter().map(|&x| int(x)).collect()).collect();
            IntMatrix::from_rows(&rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in small_matrix(3), b in small_matrix(3)) {
            let lhs = a.mul(&b).det().unwrap();
            let rhs = a.det().unwrap() * b.det().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn det_transpose_invariant(a in small_matrix(4)) {
            prop_assert_eq!(a.det().unwrap(), a.transpose().det().unwrap());
        }
    }
}
