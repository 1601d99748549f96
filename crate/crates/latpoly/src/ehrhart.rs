//! Lattice-point counting and Ehrhart arithmetic: a recursive slicing
//! counter over Fourier–Motzkin projections, Ehrhart polynomials in the
//! binomial basis, h*-vectors, contact-Betti sequences, series identities,
//! and a numeric root-location check.
//!
//! Everything except [`root_real_parts`] is exact integer/rational
//! arithmetic; root finding is the single, clearly fenced floating-point
//! operation in the crate.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::linalg::{dot, int, lll_rows, Int, IntMatrix, Rat};
use crate::polytope::Polytope;
use crate::{Error, Result};

/// One slicing inequality `a . x + c * t >= 0` (strict `>` in interior
/// mode), with `a` primitive and `c` rational from content normalization.
#[derive(Clone, Debug)]
struct SliceIneq {
    a: Vec<Int>,
    c: Rat,
}

/// Precomputed Fourier–Motzkin projection tower for one facet system,
/// reusable across dilation factors `t` because the offsets scale linearly.
/// `levels[v - 1]` constrains the first `v` coordinates; given values for a
/// prefix, the exact integer range of the next coordinate reads off in one
/// pass over that level.
pub(crate) struct SliceTower {
    dim: usize,
    levels: Vec<Vec<SliceIneq>>,
    /// Present when the tower was built in a rebased coordinate system:
    /// `(inv, v0)` maps a raw point `y` of the rebased dilate back to
    /// `inv * y + t * v0` in the original lattice.
    back: Option<(IntMatrix, Vec<Int>)>,
}

impl SliceTower {
    pub(crate) fn new(p: &Polytope) -> SliceTower {
        let hs = p.facets();
        let n = hs.dim();
        let verts = p.vertices();
        // Slicing cost tracks the coordinate widths of the body, not its
        // volume, and a skewed lattice basis inflates the intermediate
        // projection shadows arbitrarily. Counts and point sets are
        // invariant under unimodular maps and lattice translations, so
        // rebase to an LLL-reduced basis (first vertex at the origin) and
        // map enumerated points back on emission.
        let mut diffs = IntMatrix::zero(n, verts.len() - 1);
        for j in 1..verts.len() {
            for i in 0..n {
                diffs[(i, j - 1)] = &verts[j][i] - &verts[0][i];
            }
        }
        let red = lll_rows(&diffs);
        let (top, vertices, back): (Vec<SliceIneq>, Vec<Vec<Int>>, _) =
            if red == IntMatrix::identity(n) {
                let top = hs
                    .iter()
                    .map(|h| SliceIneq {
                        a: h.normal.clone(),
                        c: Rat::from_integer(h.offset.clone()),
                    })
                    .collect();
                (top, verts.to_vec(), None)
            } else {
                let inv = red.inverse_unimodular().expect("LLL transform is unimodular");
                let tv0 = red.apply(&verts[0]);
                // Normals transform by the inverse transpose; offsets absorb
                // the translation so each facet keeps its value at every
                // mapped vertex.
                let top = hs
                    .iter()
                    .map(|h| {
                        let a: Vec<Int> = (0..n)
                            .map(|i| {
                                let mut acc = Int::zero();
                                for j in 0..n {
                                    acc += &inv[(j, i)] * &h.normal[j];
                                }
                                acc
                            })
                            .collect();
                        let c = &h.offset + dot(&h.normal, &verts[0]);
                        SliceIneq { a, c: Rat::from_integer(c) }
                    })
                    .collect();
                let vertices = verts
                    .iter()
                    .map(|v| {
                        let w = red.apply(v);
                        (0..n).map(|i| &w[i] - &tv0[i]).collect()
                    })
                    .collect();
                (top, vertices, Some((inv, verts[0].clone())))
            };
        let mut levels = vec![Vec::new(); n];
        levels[n - 1] = top;
        for v in (1..n).rev() {
            // Fourier–Motzkin alone piles up redundant inequalities fast
            // (doubly exponentially on cross-polytope-like systems), so each
            // level is cut back to the facets of the projected polytope.
            // Intermediate levels only bound prefix ranges — membership is
            // decided by the original facets at the top level — so dropping
            // redundant rows never changes a count.
            levels[v - 1] = essential(eliminate_last(&levels[v]), &vertices, v);
        }
        SliceTower { dim: n, levels, back }
    }

    /// Number of lattice points of `t * P`, strict = interior count.
    pub(crate) fn count(&self, t: &Int, strict: bool) -> Int {
        let t = Rat::from_integer(t.clone());
        let Some((lo, hi)) = self.coordinate_range(&[], &t, strict) else {
            return Int::zero();
        };
        if self.dim == 1 {
            return hi - lo + 1;
        }
        // Independent top-level slices; summed deterministically.
        let mut firsts = Vec::new();
        let mut x = lo;
        while x <= hi {
            firsts.push(x.clone());
            x += 1;
        }
        firsts
            .into_par_iter()
            .map(|x1| {
                let mut prefix = vec![x1];
                self.count_rec(&mut prefix, &t, strict)
            })
            .sum()
    }

    fn count_rec(&self, prefix: &mut Vec<Int>, t: &Rat, strict: bool) -> Int {
        let Some((lo, hi)) = self.coordinate_range(prefix, t, strict) else {
            return Int::zero();
        };
        if prefix.len() + 1 == self.dim {
            return hi - lo + 1;
        }
        let mut total = Int::zero();
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            total += self.count_rec(prefix, t, strict);
            prefix.pop();
            x += 1;
        }
        total
    }

    /// All lattice points of `t * P`, in lexicographic order.
    pub(crate) fn enumerate(&self, t: &Int) -> Vec<Vec<Int>> {
        let tr = Rat::from_integer(t.clone());
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.enumerate_rec(&mut prefix, &tr, &mut out);
        if let Some((inv, v0)) = &self.back {
            for pt in out.iter_mut() {
                let w = inv.apply(pt);
                *pt = (0..self.dim).map(|i| &w[i] + t * &v0[i]).collect();
            }
            out.sort();
        }
        out
    }

    fn enumerate_rec(&self, prefix: &mut Vec<Int>, t: &Rat, out: &mut Vec<Vec<Int>>) {
        let Some((lo, hi)) = self.coordinate_range(prefix, t, false) else {
            return;
        };
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            if prefix.len() == self.dim {
                out.push(prefix.clone());
            } else {
                self.enumerate_rec(prefix, t, out);
            }
            prefix.pop();
            x += 1;
        }
    }

    /// Exact integer range of the next coordinate after `prefix`, or `None`
    /// when empty. Both bounds always exist because projections of a bounded
    /// polytope are bounded.
    fn coordinate_range(&self, prefix: &[Int], t: &Rat, strict: bool) -> Option<(Int, Int)> {
        let v = prefix.len() + 1;
        let mut lo: Option<Int> = None;
        let mut hi: Option<Int> = None;
        for q in &self.levels[v - 1] {
            let av = &q.a[v - 1];
            if av.is_zero() {
                continue; // constrains only the prefix, already enforced one level down
            }
            let partial = dot(&q.a[..v - 1], prefix);
            // a_v * x_v >= -c*t - partial  (or strict >)
            let rhs = -(&q.c * t) - Rat::from_integer(partial);
            let bound = rhs / Rat::from_integer(av.clone());
            if av.is_positive() {
                let b = if strict {
                    bound.floor().to_integer() + 1
                } else {
                    bound.ceil().to_integer()
                };
                lo = Some(match lo {
                    Some(cur) => cur.max(b),
                    None => b,
                });
            } else {
                let b = if strict {
                    bound.ceil().to_integer() - 1
                } else {
                    bound.floor().to_integer()
                };
                hi = Some(match hi {
                    Some(cur) => cur.min(b),
                    None => b,
                });
            }
        }
        let lo = lo.expect("slicing: projection must be bounded below");
        let hi = hi.expect("slicing: projection must be bounded above");
        (lo <= hi).then_some((lo, hi))
    }
}

/// Fourier–Motzkin elimination of the last coordinate. Combinations stay
/// integral; each result is content-normalized and parallel inequalities
/// keep only their tightest offset (valid for all t >= 0).
fn eliminate_last(ineqs: &[SliceIneq]) -> Vec<SliceIneq> {
    let v = ineqs[0].a.len();
    let mut best: BTreeMap<Vec<Int>, Rat> = BTreeMap::new();
    let mut add = |a: Vec<Int>, c: Rat| {
        let mut g = Int::zero();
        for x in &a {
            g = g.gcd(x);
        }
        if g.is_zero() {
            // 0 . x + c*t >= 0: vacuous for t >= 0 on a nonempty polytope.
            debug_assert!(!c.is_negative(), "infeasible pure-t combination");
            return;
        }
        let a: Vec<Int> = a.iter().map(|x| x / &g).collect();
        let c = c / Rat::from_integer(g);
        best.entry(a)
            .and_modify(|cur| {
                if c < *cur {
                    *cur = c.clone();
                }
            })
            .or_insert(c);
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for q in ineqs {
        let last = &q.a[v - 1];
        if last.is_zero() {
            add(q.a[..v - 1].to_vec(), q.c.clone());
        } else if last.is_positive() {
            pos.push(q);
        } else {
            neg.push(q);
        }
    }
    for p in &pos {
        for q in &neg {
            let alpha = -q.a[v - 1].clone(); // > 0
            let beta = p.a[v - 1].clone(); // > 0
            let a: Vec<Int> = (0..v - 1)
                .map(|i| &alpha * &p.a[i] + &beta * &q.a[i])
                .collect();
            let c = &p.c * Rat::from_integer(alpha) + &q.c * Rat::from_integer(beta);
            add(a, c);
        }
    }
    best.into_iter().map(|(a, c)| SliceIneq { a, c }).collect()
}

/// Keep only inequalities tight on a facet of the projection to the first
/// `v` coordinates, recognized by the tight subset of projected vertices
/// spanning an affine space of dimension `v - 1` (evaluated at `t = 1`;
/// tightness is invariant under dilation).
fn essential(ineqs: Vec<SliceIneq>, vertices: &[Vec<Int>], v: usize) -> Vec<SliceIneq> {
    let mut proj: Vec<Vec<Int>> = vertices.iter().map(|w| w[..v].to_vec()).collect();
    proj.sort();
    proj.dedup();
    ineqs
        .into_iter()
        .filter(|q| {
            let tight: Vec<Vec<Int>> = proj
                .iter()
                .filter(|w| (Rat::from_integer(dot(&q.a, w)) + &q.c).is_zero())
                .cloned()
                .collect();
            !tight.is_empty() && crate::polytope::affine_rank(&tight) == v - 1
        })
        .collect()
}

fn check_dilation(t: &Int) -> Result<()> {
    if t.is_negative() {
        return Err(Error::Precondition(format!("dilation factor {t} must be nonnegative")));
    }
    Ok(())
}

/// `L_P(t)`: number of lattice points of `t * P`; `t = 0` gives 1.
pub fn count_points(p: &Polytope, t: &Int) -> Result<Int> {
    check_dilation(t)?;
    Ok(SliceTower::new(p).count(t, false))
}

/// `L_{P interior}(t)`: lattice points strictly inside `t * P`.
pub fn count_interior(p: &Polytope, t: &Int) -> Result<Int> {
    check_dilation(t)?;
    Ok(SliceTower::new(p).count(t, true))
}

/// Lattice points on the boundary of `t * P` (total minus interior).
pub fn count_boundary(p: &Polytope, t: &Int) -> Result<Int> {
    check_dilation(t)?;
    let tower = SliceTower::new(p);
    Ok(tower.count(t, false) - tower.count(t, true))
}

/// All lattice points of `t * P` in lexicographic order.
pub fn lattice_points(p: &Polytope, t: &Int) -> Result<Vec<Vec<Int>>> {
    check_dilation(t)?;
    Ok(SliceTower::new(p).enumerate(t))
}

/// Reference counter: scan the bounding box of `t * P` and test every facet
/// inequality per point. Exponentially slower than slicing; exists purely
/// as an independent oracle for the production counter.
pub fn count_points_naive(p: &Polytope, t: &Int) -> Result<Int> {
    check_dilation(t)?;
    let n = p.dim();
    let mut lo = p.vertices()[0].clone();
    let mut hi = p.vertices()[0].clone();
    for v in p.vertices() {
        for i in 0..n {
            if v[i] < lo[i] {
                lo[i] = v[i].clone();
            }
            if v[i] > hi[i] {
                hi[i] = v[i].clone();
            }
        }
    }
    let lo: Vec<Int> = lo.into_iter().map(|x| x * t).collect();
    let hi: Vec<Int> = hi.into_iter().map(|x| x * t).collect();
    let hs = p.facets();
    let inside = |x: &[Int]| hs.iter().all(|h| !(dot(&h.normal, x) + &h.offset * t).is_negative());
    let mut count = Int::zero();
    let mut cursor = lo.clone();
    'scan: loop {
        if inside(&cursor) {
            count += 1;
        }
        // odometer increment over the box
        for i in (0..n).rev() {
            if cursor[i] < hi[i] {
                cursor[i] += 1;
                for j in i + 1..n {
                    cursor[j] = lo[j].clone();
                }
                continue 'scan;
            }
        }
        break;
    }
    Ok(count)
}

/// The h*-vector `(h*_0, ..., h*_n)` of an n-dimensional lattice polytope:
/// the numerator coefficients of the Ehrhart series. Entries are always
/// nonnegative integers, with h*_0 = 1 for honest polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HStar {
    dim: usize,
    coeffs: Vec<Int>,
}

impl HStar {
    pub fn new(dim: usize, coeffs: Vec<Int>) -> Result<HStar> {
        if coeffs.len() != dim + 1 {
            return Err(Error::Dimension(format!(
                "HStar: need {} coefficients for dimension {dim}, got {}",
                dim + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::Precondition("HStar: coefficients must be nonnegative".into()));
        }
        Ok(HStar { dim, coeffs })
    }

    pub fn from_i64(dim: usize, coeffs: &[i64]) -> Result<HStar> {
        HStar::new(dim, coeffs.iter().map(|&x| int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    /// Sum of all coefficients: the normalized volume n! vol(P).
    pub fn total(&self) -> Int {
        self.coeffs.iter().sum()
    }

    /// Palindromic about the center: `h*_k = h*_{n-k}` for all k. This is
    /// the Hibi criterion: it holds exactly for the reflexive polytopes.
    pub fn is_palindromic(&self) -> bool {
        self.is_gorenstein_palindromic(1)
    }

    /// Symmetry `h*_k = h*_{n+1-r-k}` (out-of-range indices read as 0): the
    /// h*-signature of Gorenstein index r.
    pub fn is_gorenstein_palindromic(&self, r: u32) -> bool {
        let get = |i: i64| -> Int {
            if (0..=self.dim as i64).contains(&i) {
                self.coeffs[i as usize].clone()
            } else {
                Int::zero()
            }
        };
        let d = self.dim as i64 + 1 - r as i64;
        (0..=self.dim as i64).all(|k| get(k) == get(d - k))
    }
}

/// The Ehrhart counting polynomial `L_P`, held in the binomial basis:
/// `L(t) = sum_k h*_k C(t + n - k, n)`. Exact for every integer argument,
/// including negatives (Ehrhart–Macdonald reciprocity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    hstar: HStar,
}

impl EhrhartPolynomial {
    pub fn from_hstar(hstar: HStar) -> EhrhartPolynomial {
        EhrhartPolynomial { hstar }
    }

    pub fn hstar(&self) -> &HStar {
        &self.hstar
    }

    pub fn degree(&self) -> usize {
        self.hstar.dim
    }

    pub fn evaluate(&self, t: &Int) -> Int {
        let n = self.hstar.dim;
        let mut acc = Int::zero();
        for (k, h) in self.hstar.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            acc += h * binomial_poly(&(t + int((n - k) as i64)), n);
        }
        acc
    }

    /// Monomial coefficients (ascending powers of t, exact rationals); the
    /// leading coefficient is vol(P) > 0, so the degree is exactly n.
    pub fn monomial_coefficients(&self) -> Vec<Rat> {
        let n = self.hstar.dim;
        let mut total = vec![Rat::zero(); n + 1];
        let nfact = Rat::from_integer(factorial(n));
        for (k, h) in self.hstar.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            // C(t + n - k, n) = prod_{i=0}^{n-1} (t + n - k - i) / n!
            let mut poly = vec![Rat::one()];
            for i in 0..n {
                let c = Rat::from_integer(int(n as i64 - k as i64 - i as i64));
                let mut next = vec![Rat::zero(); poly.len() + 1];
                for (d, coeff) in poly.iter().enumerate() {
                    next[d + 1] += coeff;
                    next[d] += coeff * &c;
                }
                poly = next;
            }
            let scale = Rat::from_integer(h.clone()) / &nfact;
            for (d, coeff) in poly.into_iter().enumerate() {
                total[d] += coeff * &scale;
            }
        }
        total
    }
}

/// `C(x, n)` as the degree-n polynomial `x(x-1)...(x-n+1)/n!`, exact for
/// every integer x (negative included).
fn binomial_poly(x: &Int, n: usize) -> Int {
    let mut num = Int::one();
    for i in 0..n {
        num *= x - int(i as i64);
    }
    num / factorial(n)
}

fn factorial(n: usize) -> Int {
    let mut f = Int::one();
    for i in 2..=n {
        f *= int(i as i64);
    }
    f
}

/// Computes the Ehrhart polynomial by exact counting at `t = 0..n` and
/// back-substitution in the unitriangular binomial-basis system, then
/// re-counts at `t = n+1, n+2` as a built-in self-check.
///
/// Panics on a self-check mismatch — that indicates an internal counting
/// bug, never a property of the input.
pub fn ehrhart(p: &Polytope) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    let tower = SliceTower::new(p);
    let counts: Vec<Int> = (0..=n).map(|t| tower.count(&int(t as i64), false)).collect();
    let mut h: Vec<Int> = Vec::with_capacity(n + 1);
    for t in 0..=n {
        // counts[t] = sum_{k<=t} h_k C(t+n-k, n), and C(n, n) = 1.
        let mut acc = counts[t].clone();
        for (k, hk) in h.iter().enumerate() {
            acc -= hk * binomial_poly(&int((t + n - k) as i64), n);
        }
        h.push(acc);
    }
    assert!(h[0].is_one(), "h*_0 = {} but must be 1: counting bug", h[0]);
    assert!(
        h.iter().all(|x| !x.is_negative()),
        "negative h* entry in {h:?}: counting bug"
    );
    let poly = EhrhartPolynomial::from_hstar(HStar::new(n, h)?);
    for t in [n + 1, n + 2] {
        let counted = tower.count(&int(t as i64), false);
        let predicted = poly.evaluate(&int(t as i64));
        assert_eq!(
            counted, predicted,
            "Ehrhart self-check failed at t = {t}: counted {counted}, polynomial {predicted}"
        );
    }
    Ok(poly)
}

/// Contact-Betti sequence: the even-degree ranks `cb_{2k}`, which stabilize
/// at `sum h*` once k exceeds n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiSequence {
    cb: Vec<Int>,
    tail: Int,
}

impl BettiSequence {
    /// `cb_{2k}`, extending past the computed range with the stable tail.
    pub fn cb(&self, k: usize) -> &Int {
        self.cb.get(k).unwrap_or(&self.tail)
    }

    /// The values `cb_0, cb_2, ..., cb_{2n}`.
    pub fn values(&self) -> &[Int] {
        &self.cb
    }

    pub fn tail(&self) -> &Int {
        &self.tail
    }
}

/// `cb_{2k} = sum_{m=0}^{k} h*_{n-m}`: partial sums of the reversed
/// h*-vector. Nondecreasing because h* is nonnegative.
pub fn contact_betti(h: &HStar) -> BettiSequence {
    let n = h.dim();
    let mut cb = Vec::with_capacity(n + 1);
    let mut acc = Int::zero();
    for m in 0..=n {
        acc += &h.coeffs()[n - m];
        cb.push(acc.clone());
    }
    debug_assert!(cb.windows(2).all(|w| w[0] <= w[1]));
    BettiSequence { tail: acc, cb }
}

/// Exact polynomial identity `hD(z) = (1 + z^s + ... + z^{s(r-1)})·hD2(z)`,
/// compared with trailing zeros ignored.
pub fn series_product_check(hd: &HStar, hd2: &HStar, r: u32, s: u32) -> bool {
    let mut product = vec![Int::zero(); s as usize * (r as usize).saturating_sub(1) + hd2.dim() + 1];
    for j in 0..r as usize {
        for (i, c) in hd2.coeffs().iter().enumerate() {
            product[j * s as usize + i] += c;
        }
    }
    let trim = |xs: &[Int]| {
        let end = xs.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
        xs[..end].to_vec()
    };
    trim(&product) == trim(hd.coeffs())
}

/// `cb_{2i}` of the index-r quotient diagram, computed from the reflexive
/// diagram's h* alone: `sum_{k >= 0} h*_{i - rk - r + 1}` (indices outside
/// `0..=n` read as 0).
pub fn betti_from_quotient(hd: &HStar, r: u32, i: u32) -> Int {
    assert!(r >= 1, "betti_from_quotient: r must be >= 1");
    let n = hd.dim() as i64;
    let mut acc = Int::zero();
    let mut idx = i as i64 + 1 - r as i64;
    while idx >= 0 {
        if idx <= n {
            acc += &hd.coeffs()[idx as usize];
        }
        idx -= r as i64;
    }
    acc
}

/// Outcome of the numeric root-location check.
#[derive(Clone, Debug)]
pub struct RootCheck {
    /// Real parts of all complex roots, ascending.
    pub real_parts: Vec<f64>,
    /// True iff every real part is within `tol` of the target.
    pub all_match: bool,
}

/// Locates all complex roots of `L` and tests whether every real part lies
/// within `tol` of `target`. The polynomial is first split into square-free
/// parts by exact rational arithmetic (Yun's algorithm), so the iterative
/// solver only ever sees simple roots and converges quadratically even when
/// `L` itself has multiple roots; each root is reported with its
/// multiplicity. The final Durand–Kerner iterations are the one
/// floating-point computation in the crate.
pub fn root_real_parts(l: &EhrhartPolynomial, target: f64, tol: f64) -> Result<RootCheck> {
    if l.degree() == 0 {
        return Err(Error::Precondition("root_real_parts: degree must be >= 1".into()));
    }
    let mut real_parts = Vec::new();
    for (mult, part) in squarefree_parts(&l.monomial_coefficients()) {
        let coeffs: Vec<f64> = part
            .iter()
            .map(|c| c.to_f64().expect("Ehrhart coefficients fit in f64 at these scales"))
            .collect();
        for z in durand_kerner(&coeffs) {
            real_parts.extend(std::iter::repeat(z.re).take(mult));
        }
    }
    real_parts.sort_by(|a, b| a.total_cmp(b));
    let all_match = real_parts.iter().all(|re| (re - target).abs() <= tol);
    Ok(RootCheck { real_parts, all_match })
}

// Rational polynomial helpers for the square-free split. Polynomials are
// ascending coefficient vectors with nonzero leading term (trimmed).

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    poly_trim((1..p.len()).map(|i| &p[i] * Rat::from_integer(int(i as i64))).collect())
}

/// Exact quotient; panics if the division leaves a remainder, which would
/// mean the caller's gcd bookkeeping is wrong.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(!lead.is_zero(), "poly_div_exact: zero divisor");
    assert!(rem.len() > dd || rem.iter().all(|c| c.is_zero()), "poly_div_exact: degree underflow");
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + dd] / &lead;
        if !q.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let sub = &q * d;
                rem[k + i] -= sub;
            }
        }
        quot[k] = q;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "poly_div_exact: nonzero remainder");
    poly_trim(quot)
}

/// Monic gcd by the Euclidean algorithm over the rationals.
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    if lead.is_zero() || lead.is_one() {
        a
    } else {
        a.iter().map(|c| c / &lead).collect()
    }
}

fn poly_rem(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    while rem.len() > dd && !(rem.len() == 1 && rem[0].is_zero()) {
        let k = rem.len() - 1 - dd;
        let q = rem.last().unwrap() / &lead;
        for (i, d) in den.iter().enumerate() {
            let sub = &q * d;
            rem[k + i] -= sub;
        }
        rem = poly_trim(rem);
        if rem.iter().all(|c| c.is_zero()) {
            return vec![Rat::zero()];
        }
    }
    rem
}

/// Yun's square-free decomposition: returns `(m, f_m)` pairs with each `f_m`
/// square-free, pairwise coprime, and `p = lead * prod f_m^m`. Factors of
/// degree zero are dropped.
fn squarefree_parts(p: &[Rat]) -> Vec<(usize, Vec<Rat>)> {
    let p = poly_trim(p.to_vec());
    let dp = poly_derivative(&p);
    let g = poly_gcd(&p, &dp);
    if g.len() == 1 {
        // Already square-free (the common case).
        return vec![(1, p)];
    }
    let mut parts = Vec::new();
    let mut w = poly_div_exact(&p, &g);
    let mut y = poly_div_exact(&dp, &g);
    let mut m = 1;
    loop {
        // z = y - w': its gcd with w is the multiplicity-m part.
        let wd = poly_derivative(&w);
        let mut z = vec![Rat::zero(); y.len().max(wd.len())];
        for (i, c) in y.iter().enumerate() {
            z[i] += c;
        }
        for (i, c) in wd.iter().enumerate() {
            z[i] -= c;
        }
        let z = poly_trim(z);
        if z.len() == 1 && z[0].is_zero() {
            if w.len() > 1 {
                parts.push((m, w));
            }
            return parts;
        }
        let f = poly_gcd(&w, &z);
        if f.len() > 1 {
            parts.push((m, f.clone()));
        }
        w = poly_div_exact(&w, &f);
        y = poly_div_exact(&z, &f);
        m += 1;
    }
}

/// Simultaneous root iteration for a polynomial given by ascending
/// coefficients with nonzero leading term.
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 {
            break;
        }
    }
    roots
}
