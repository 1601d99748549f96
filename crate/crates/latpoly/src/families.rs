//! Constructions: cubes, cross-polytopes, small cross-polytopes, pyramids,
//! pseudo-bipyramids, prequantization of Gorenstein halfspace systems, the
//! P_k / T_k / D_k family, and Bott moment polytopes with their diagrams.
//!
//! Builders that know their halfspace description attach it directly, so
//! the brute-force facet enumeration never runs on e.g. a 10-cube.

use num_traits::{One, Zero};

use crate::linalg::{
    dot, hermite_completion, int, primitive, solve_rational, Int, IntMatrix, Rat, RatMatrix,
};
use crate::polytope::{Halfspace, HalfspaceSystem, Polytope};
use crate::{Error, Result};

fn unit_vector(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); n];
    v[i] = Int::one();
    v
}

/// Axis-aligned cube `[lo, hi]^n`.
pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Polytope> {
    if n < 1 {
        return Err(Error::InvalidParam("cube: dimension must be >= 1".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidParam(format!("cube: need lo < hi, got [{lo}, {hi}]")));
    }
    let mut vertices = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        vertices.push(
            (0..n)
                .map(|i| int(if mask >> i & 1 == 1 { hi } else { lo }))
                .collect(),
        );
    }
    let mut halfspaces = Vec::with_capacity(2 * n);
    for i in 0..n {
        halfspaces.push(Halfspace::new(unit_vector(n, i), int(-lo))?);
        let mut neg = vec![Int::zero(); n];
        neg[i] = int(-1);
        halfspaces.push(Halfspace::new(neg, int(hi))?);
    }
    Ok(Polytope::trusted_with_facets(vertices, HalfspaceSystem::new(n, halfspaces)?))
}

/// Cross-polytope `conv(±e_1, ..., ±e_n)`; facets are all sign patterns.
pub fn cross_polytope(n: usize) -> Result<Polytope> {
    if n < 1 {
        return Err(Error::InvalidParam("cross_polytope: dimension must be >= 1".into()));
    }
    let mut vertices = Vec::with_capacity(2 * n);
    for i in 0..n {
        vertices.push(unit_vector(n, i));
        let mut neg = vec![Int::zero(); n];
        neg[i] = int(-1);
        vertices.push(neg);
    }
    let mut halfspaces = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let normal: Vec<Int> =
            (0..n).map(|i| int(if mask >> i & 1 == 1 { 1 } else { -1 })).collect();
        halfspaces.push(Halfspace::new(normal, Int::one())?);
    }
    Ok(Polytope::trusted_with_facets(vertices, HalfspaceSystem::new(n, halfspaces)?))
}

/// Small cross-polytope: vertices `0`, `(0,...,0,1)`, `(e_i, 0)` and
/// `(-e_i, 1)` for `i = 1..n-1`. Bounded by `0 <= sum_{i in A} x_i + x_n <= 1`
/// over all subsets A of the first n-1 coordinates.
pub fn small_cross_polytope(n: usize) -> Result<Polytope> {
    if n < 1 {
        return Err(Error::InvalidParam("small_cross_polytope: dimension must be >= 1".into()));
    }
    let mut vertices = vec![vec![Int::zero(); n], unit_vector(n, n - 1)];
    for i in 0..n - 1 {
        let mut plus = vec![Int::zero(); n];
        plus[i] = Int::one();
        vertices.push(plus);
        let mut minus = vec![Int::zero(); n];
        minus[i] = int(-1);
        minus[n - 1] = Int::one();
        vertices.push(minus);
    }
    let mut halfspaces = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << (n - 1)) {
        let a: Vec<Int> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    Int::one()
                } else {
                    int((mask >> i & 1) as i64)
                }
            })
            .collect();
        let neg: Vec<Int> = a.iter().map(|x| -x).collect();
        halfspaces.push(Halfspace::new(a, Int::zero())?);
        halfspaces.push(Halfspace::new(neg, Int::one())?);
    }
    Ok(Polytope::trusted_with_facets(vertices, HalfspaceSystem::new(n, halfspaces)?))
}

/// `conv(P x {0} U {(0, ..., 0, 1)})`: one dimension up, h* unchanged.
pub fn pyramid(p: &Polytope) -> Result<Polytope> {
    let n = p.dim();
    let mut vertices: Vec<Vec<Int>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(Int::zero());
            w
        })
        .collect();
    vertices.push(unit_vector(n + 1, n));
    // Facets: the base at height 0, plus each facet of P tilted through the
    // apex: (nu, -lambda) . (x, t) + lambda >= 0.
    let mut halfspaces = vec![Halfspace::new(unit_vector(n + 1, n), Int::zero())?];
    for h in p.facets().iter() {
        let mut normal = h.normal.clone();
        normal.push(-h.offset.clone());
        halfspaces.push(Halfspace::new(normal, h.offset.clone())?);
    }
    Ok(Polytope::trusted_with_facets(vertices, HalfspaceSystem::new(n + 1, halfspaces)?))
}

/// `conv({(s1, 1), (s2, -1)} U P x {0})` for lattice points `s1, s2` of `P`.
/// With `require_diagram`, additionally rejects special points sharing a
/// facet of `P` — the configuration whose pseudo-bipyramid facets stop being
/// simplices.
pub fn pseudo_bipyramid(
    p: &Polytope,
    s1: &[Int],
    s2: &[Int],
    require_diagram: bool,
) -> Result<Polytope> {
    let n = p.dim();
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if s.len() != n {
            return Err(Error::Dimension(format!("pseudo_bipyramid: {name} has wrong dimension")));
        }
        if !p.contains(s) {
            return Err(Error::Precondition(format!(
                "pseudo_bipyramid: {name} = {s:?} is not a lattice point of the base"
            )));
        }
    }
    if require_diagram {
        let shared = p
            .facets()
            .iter()
            .find(|h| h.eval(s1).is_zero() && h.eval(s2).is_zero());
        if let Some(h) = shared {
            return Err(Error::Domain(format!(
                "pseudo_bipyramid: special points both lie on the facet {:?}; \
                 the result would have a non-simplicial facet",
                h.normal
            )));
        }
    }
    let mut points: Vec<Vec<Int>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(Int::zero());
            w
        })
        .collect();
    let mut top = s1.to_vec();
    top.push(Int::one());
    points.push(top);
    let mut bottom = s2.to_vec();
    bottom.push(int(-1));
    points.push(bottom);
    Polytope::hull(points)
}

/// Result of prequantizing a Gorenstein halfspace system: the toric diagram
/// together with the height-1 normalization data.
#[derive(Clone, Debug)]
pub struct Prequantization {
    /// Convex hull of the transformed facet normals: the toric diagram.
    pub diagram: Polytope,
    /// The primitive functional with `c . (nu_i, lambda_i) = 1` on every
    /// lifted facet normal.
    pub height_functional: Vec<Int>,
    /// Unimodular map on Z^{n+1} (last row = the functional) sending every
    /// lifted normal to the height-1 slice.
    pub cone_map: IntMatrix,
}

/// Prequantizes the polytope `{x : nu_i . x + lambda_i >= 0}`: finds the
/// integral functional taking value 1 on every lifted normal `(nu_i,
/// lambda_i)`, completes it to a unimodular change of basis, and reads the
/// diagram off the height-1 slice. Such a functional exists precisely for
/// the Gorenstein systems; anything else errors.
pub fn prequantize(hs: &HalfspaceSystem) -> Result<Prequantization> {
    let n = hs.dim();
    let lifted: Vec<Vec<Int>> = hs
        .iter()
        .map(|h| {
            let mut u = h.normal.clone();
            u.push(h.offset.clone());
            u
        })
        .collect();
    // Pin c down on n+1 independent lifted normals, then verify the rest.
    let mut picked: Vec<&Vec<Int>> = Vec::with_capacity(n + 1);
    for u in &lifted {
        let mut cand: Vec<Vec<Int>> = picked.iter().map(|p| (*p).clone()).collect();
        cand.push(u.clone());
        if crate::polytope::linear_rank(&cand) == picked.len() + 1 {
            picked.push(u);
            if picked.len() == n + 1 {
                break;
            }
        }
    }
    if picked.len() < n + 1 {
        return Err(Error::Degenerate(
            "prequantize: lifted normals do not span; system is not a bounded full-dimensional polytope"
                .into(),
        ));
    }
    let a = RatMatrix::from_rows(
        &picked
            .iter()
            .map(|u| u.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect::<Vec<_>>(),
    );
    let ones = vec![Rat::one(); n + 1];
    let c = solve_rational(&a, &ones)
        .ok_or_else(|| Error::Degenerate("prequantize: singular normal frame".into()))?;
    if c.iter().any(|x| !x.is_integer()) {
        return Err(Error::NotGorenstein(
            "prequantize: the height functional is not integral; no dilation of the polytope is reflexive"
                .into(),
        ));
    }
    let c: Vec<Int> = c.into_iter().map(|x| x.to_integer()).collect();
    for u in &lifted {
        if !dot(&c, u).is_one() {
            return Err(Error::NotGorenstein(
                "prequantize: no single functional reaches every lifted normal at height 1; \
                 no dilation of the polytope is reflexive"
                    .into(),
            ));
        }
    }
    // c . u = 1 forces primitivity, so the completion cannot fail.
    let t = hermite_completion(&c)?;
    let vertices: Vec<Vec<Int>> = lifted
        .iter()
        .map(|u| {
            let image = t.apply(u);
            debug_assert!(image[n].is_one());
            image[..n].to_vec()
        })
        .collect();
    let diagram = Polytope::hull(vertices)?;
    Ok(Prequantization { diagram, height_functional: c, cone_map: t })
}

/// [`prequantize`] with the polytope's preconditions checked first: the
/// input must be Delzant (simple with unimodular vertex frames).
pub fn prequantize_polytope(p: &Polytope) -> Result<Prequantization> {
    if !p.is_delzant() {
        return Err(Error::Precondition("prequantize: polytope is not Delzant".into()));
    }
    prequantize(p.facets())
}

fn check_family_params(name: &str, n: usize, k: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParam(format!("{name}: dimension must be >= 2")));
    }
    if k < 0 || k >= n as i64 {
        return Err(Error::InvalidParam(format!("{name}: need 0 <= k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// The reflexive Delzant frustum `conv((n+k)T - 1 x {-1}, (n-k)T - 1 x {1})`
/// with `T` the standard (n-1)-simplex: two parallel simplices, 2n vertices.
pub fn family_pk(n: usize, k: i64) -> Result<Polytope> {
    check_family_params("family_pk", n, k)?;
    let mut vertices = Vec::with_capacity(2 * n);
    for (scale, level) in [(n as i64 + k, -1), (n as i64 - k, 1)] {
        let mut base = vec![int(-1); n - 1];
        base.push(int(level));
        vertices.push(base);
        for i in 0..n - 1 {
            let mut v = vec![int(-1); n];
            v[i] = int(scale - 1);
            v[n - 1] = int(level);
            vertices.push(v);
        }
    }
    // x_i + 1 >= 0; -x_n + 1 >= 0; -sum_{i<n} x_i - k x_n + 1 >= 0.
    let mut halfspaces = Vec::with_capacity(n + 2);
    for i in 0..n {
        halfspaces.push(Halfspace::new(unit_vector(n, i), Int::one())?);
    }
    let mut top = vec![Int::zero(); n];
    top[n - 1] = int(-1);
    halfspaces.push(Halfspace::new(top, Int::one())?);
    let mut slant = vec![int(-1); n];
    slant[n - 1] = int(-k);
    halfspaces.push(Halfspace::new(slant, Int::one())?);
    Ok(Polytope::trusted_with_facets(vertices, HalfspaceSystem::new(n, halfspaces)?))
}

/// The reflexive toric diagram of the prequantized frustum: the bipyramid
/// `conv(e_1, ..., e_n, -e_n, (-1, ..., -1, -k))`.
pub fn family_tk(n: usize, k: i64) -> Result<Polytope> {
    check_family_params("family_tk", n, k)?;
    let mut vertices: Vec<Vec<Int>> = (0..n).map(|i| unit_vector(n, i)).collect();
    let mut neg = vec![Int::zero(); n];
    neg[n - 1] = int(-1);
    vertices.push(neg);
    let mut vk = vec![int(-1); n];
    vk[n - 1] = int(-k);
    vertices.push(vk);
    Polytope::hull(vertices)
}

/// The Gorenstein index-2 toric diagram of the halved frustum: vertices
/// `0, e_1, ..., e_{n-1}, -e_{n-1} + e_n, -sum_{i<=n-2} e_i - k e_{n-1} +
/// ((n+k)/2) e_n`. Requires `k = n (mod 2)` for the last vertex to be
/// integral.
pub fn family_dk(n: usize, k: i64) -> Result<Polytope> {
    check_family_params("family_dk", n, k)?;
    if (k - n as i64) % 2 != 0 {
        return Err(Error::InvalidParam(format!(
            "family_dk: need k = n (mod 2), got k = {k}, n = {n}"
        )));
    }
    let mut vertices = vec![vec![Int::zero(); n]];
    for i in 0..n - 1 {
        vertices.push(unit_vector(n, i));
    }
    let mut an1 = vec![Int::zero(); n];
    an1[n - 2] = int(-1);
    an1[n - 1] = Int::one();
    vertices.push(an1);
    let mut an2 = vec![int(-1); n];
    an2[n - 2] = int(-k);
    an2[n - 1] = int((n as i64 + k) / 2);
    vertices.push(an2);
    Polytope::hull(vertices)
}

/// Lower-triangular integer matrix with diagonal -1: the twist data of an
/// iterated P^1-bundle. Columns of this matrix, together with the standard
/// basis vectors, are the inward facet normals of the associated moment
/// polytope (all offsets 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottMatrix {
    entries: IntMatrix,
}

impl BottMatrix {
    pub fn new(entries: IntMatrix) -> Result<BottMatrix> {
        let n = entries.rows();
        if entries.cols() != n || n < 1 {
            return Err(Error::Dimension("BottMatrix: must be square and nonempty".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j && entries[(i, j)] != int(-1) {
                    return Err(Error::Precondition("BottMatrix: diagonal must be -1".into()));
                }
                if j > i && !entries[(i, j)].is_zero() {
                    return Err(Error::Precondition(
                        "BottMatrix: must be lower triangular".into(),
                    ));
                }
            }
        }
        Ok(BottMatrix { entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<BottMatrix> {
        BottMatrix::new(IntMatrix::from_i64(rows))
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    fn column(&self, j: usize) -> Vec<Int> {
        (0..self.dim()).map(|i| self.entries[(i, j)].clone()).collect()
    }

    /// The monotonicity test, column by column: each column j < n must
    /// either vanish below the diagonal, have a single subdiagonal 1, or
    /// have a leading subdiagonal -1 at some row q whose lower entries copy
    /// column q.
    pub fn is_monotone(&self) -> bool {
        let n = self.dim();
        let a = &self.entries;
        (0..n - 1).all(|j| {
            let all_zero = (j + 1..n).all(|i| a[(i, j)].is_zero());
            if all_zero {
                return true;
            }
            let plus = (j + 1..n).any(|q| {
                a[(q, j)].is_one() && (j + 1..n).all(|i| i == q || a[(i, j)].is_zero())
            });
            if plus {
                return true;
            }
            (j + 1..n).any(|q| {
                a[(q, j)] == int(-1)
                    && (j + 1..q).all(|i| a[(i, j)].is_zero())
                    && (q + 1..n).all(|i| a[(i, j)] == a[(i, q)])
            })
        })
    }

    /// The moment polytope `{x : x_i + 1 >= 0, L_j . x + 1 >= 0}` cut out by
    /// the 2n normals. A combinatorial cube for monotone matrices; steep
    /// twists can collapse a face of the region, which is an error.
    pub fn moment_polytope(&self) -> Result<Polytope> {
        let n = self.dim();
        let mut halfspaces = Vec::with_capacity(2 * n);
        for i in 0..n {
            halfspaces.push(Halfspace::new(unit_vector(n, i), Int::one())?);
            halfspaces.push(Halfspace::new(primitive(&self.column(i))?, Int::one())?);
        }
        Polytope::from_halfspaces(&HalfspaceSystem::new(n, halfspaces)?)
    }

    /// Convex hull of the 2n normals: the toric diagram of the prequantized
    /// moment polytope. Only monotone matrices admit the height-1
    /// normalization, so anything else is rejected.
    pub fn diagram(&self) -> Result<Polytope> {
        if !self.is_monotone() {
            return Err(Error::Domain(
                "bott diagram: matrix is not monotone; its moment polytope is not reflexive"
                    .into(),
            ));
        }
        let n = self.dim();
        let mut points = Vec::with_capacity(2 * n);
        for i in 0..n {
            points.push(unit_vector(n, i));
            points.push(self.column(i));
        }
        Polytope::hull(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ehrhart::{count_points, ehrhart, series_product_check, HStar};
    use crate::linalg::ivec;

    #[test]
    fn cube_and_cross_basics() {
        let c = cube(3, 0, 1).unwrap();
        assert_eq!(c.vertex_count(), 8);
        assert_eq!(c.facets().len(), 6);
        assert!(cube(2, 1, 1).is_err());
        assert!(cube(0, 0, 1).is_err());

        let x = cross_polytope(3).unwrap();
        assert_eq!(x.vertex_count(), 6);
        assert_eq!(x.facets().len(), 8);
        assert!(x.is_reflexive());
        assert_eq!(cross_polytope(1).unwrap().vertices(), &[ivec(&[-1]), ivec(&[1])]);
    }

    #[test]
    fn small_cross_base_cases_and_coordinates() {
        assert_eq!(
            small_cross_polytope(1).unwrap().vertices(),
            &[ivec(&[0]), ivec(&[1])]
        );
        let s3 = small_cross_polytope(3).unwrap();
        let expected: Vec<Vec<Int>> = [
            [0, 0, 0],
            [0, 0, 1],
            [1, 0, 0],
            [0, 1, 0],
            [-1, 0, 1],
            [0, -1, 1],
        ]
        .iter()
        .map(|v| ivec(v))
        .collect();
        for v in &expected {
            assert!(s3.vertices().contains(v), "missing {v:?}");
        }
        assert_eq!(s3.vertex_count(), 6);
    }

    #[test]
    fn attached_halfspace_systems_are_complete() {
        // Round-tripping H -> V must reproduce the closed-form vertex sets.
        for p in [
            cube(3, -1, 2).unwrap(),
            cross_polytope(4).unwrap(),
            small_cross_polytope(2).unwrap(),
            small_cross_polytope(3).unwrap(),
            small_cross_polytope(4).unwrap(),
            family_pk(3, 1).unwrap(),
            family_pk(4, 2).unwrap(),
            pyramid(&cross_polytope(2).unwrap()).unwrap(),
        ] {
            let q = Polytope::from_halfspaces(p.facets()).unwrap();
            assert_eq!(q.vertices(), p.vertices());
        }
    }

    #[test]
    fn small_cross_polytopes_are_toric_diagrams() {
        for n in 1..=4 {
            assert!(small_cross_polytope(n).unwrap().is_toric_diagram(), "n = {n}");
        }
    }

    #[test]
    fn pyramid_counts_and_hstar() {
        let pyr = pyramid(&cross_polytope(2).unwrap()).unwrap();
        assert_eq!(pyr.vertex_count(), 5);
        // h* is unchanged by pyramids (degree stays, dimension grows)
        for n in [3usize, 4] {
            let p = pyramid(&cross_polytope(n - 1).unwrap()).unwrap();
            let h = ehrhart(&p).unwrap().hstar().clone();
            let s = ehrhart(&small_cross_polytope(n).unwrap()).unwrap().hstar().clone();
            assert_eq!(h, s, "pyramid over cross = small cross h*, n = {n}");
        }
    }

    #[test]
    fn pseudo_bipyramid_over_origin_pair_is_standard_bipyramid() {
        let base = cross_polytope(2).unwrap();
        let zero = ivec(&[0, 0]);
        let bipyr = pseudo_bipyramid(&base, &zero, &zero, false).unwrap();
        assert_eq!(bipyr, cross_polytope(3).unwrap());
    }

    #[test]
    fn pseudo_bipyramid_of_small_cross_grows_the_family() {
        let s2 = small_cross_polytope(2).unwrap();
        let p = pseudo_bipyramid(&s2, &ivec(&[0, 0]), &ivec(&[0, 1]), true).unwrap();
        assert!(p.is_toric_diagram());
        assert_eq!(
            ehrhart(&p).unwrap().hstar(),
            ehrhart(&small_cross_polytope(3).unwrap()).unwrap().hstar()
        );
    }

    #[test]
    fn pseudo_bipyramid_series_relation_holds_for_every_lattice_pair() {
        let base = cross_polytope(2).unwrap();
        let h_base = ehrhart(&base).unwrap().hstar().clone();
        let points = crate::ehrhart::lattice_points(&base, &int(1)).unwrap();
        for s1 in &points {
            for s2 in &points {
                let bipyr = pseudo_bipyramid(&base, s1, s2, false).unwrap();
                let h = ehrhart(&bipyr).unwrap().hstar().clone();
                assert!(
                    series_product_check(&h, &h_base, 2, 1),
                    "(1+z) relation fails for {s1:?}, {s2:?}"
                );
            }
        }
    }

    #[test]
    fn pseudo_bipyramid_rejects_shared_facet_in_diagram_mode() {
        let s2 = small_cross_polytope(2).unwrap();
        let v = ivec(&[1, 0]);
        assert!(matches!(
            pseudo_bipyramid(&s2, &v, &v, true),
            Err(Error::Domain(_))
        ));
        // same pair is fine when no diagram is requested
        assert!(pseudo_bipyramid(&s2, &v, &v, false).is_ok());
        // and a non-lattice-point is always rejected
        assert!(matches!(
            pseudo_bipyramid(&s2, &ivec(&[5, 5]), &v, false),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn prequantize_centered_cube_gives_cross_polytope() {
        for n in 2..=4usize {
            let preq = prequantize_polytope(&cube(n, -1, 1).unwrap()).unwrap();
            assert_eq!(preq.diagram, cross_polytope(n).unwrap());
            // already reflexive: functional is the last coordinate, map is trivial
            let mut expected = vec![Int::zero(); n + 1];
            expected[n] = Int::one();
            assert_eq!(preq.height_functional, expected);
            assert_eq!(preq.cone_map, IntMatrix::identity(n + 1));
        }
    }

    #[test]
    fn prequantize_unit_cube_gives_small_cross_hstar() {
        for n in 2..=4usize {
            let preq = prequantize_polytope(&cube(n, 0, 1).unwrap()).unwrap();
            assert_eq!(preq.height_functional, {
                let mut c = vec![Int::one(); n + 1];
                c[n] = int(2);
                c
            });
            assert!(preq.diagram.is_toric_diagram());
            assert_eq!(
                ehrhart(&preq.diagram).unwrap().hstar(),
                ehrhart(&small_cross_polytope(n).unwrap()).unwrap().hstar(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn prequantize_rejects_non_gorenstein() {
        let p = Polytope::hull(vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 3])]).unwrap();
        assert_eq!(p.gorenstein_index(), None);
        assert!(matches!(prequantize(p.facets()), Err(Error::NotGorenstein(_))));
    }

    #[test]
    fn prequantize_checks_delzant() {
        // the octahedron is not simple, hence not Delzant
        assert!(matches!(
            prequantize_polytope(&cross_polytope(3).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quotient_series_relation_between_scaled_prequantizations() {
        // D from 2Q and D' from Q satisfy h*_D = (1+z) h*_{D'}
        for n in 2..=3usize {
            let d = prequantize_polytope(&cube(n, 0, 2).unwrap()).unwrap().diagram;
            let d2 = prequantize_polytope(&cube(n, 0, 1).unwrap()).unwrap().diagram;
            let hd = ehrhart(&d).unwrap().hstar().clone();
            let hd2 = ehrhart(&d2).unwrap().hstar().clone();
            assert!(series_product_check(&hd, &hd2, 2, 1), "n = {n}");
            // and the diagram of the doubled cube is the full cross-polytope
            assert_eq!(hd, ehrhart(&cross_polytope(n).unwrap()).unwrap().hstar().clone());
        }
    }

    #[test]
    fn family_pk_shape_and_reflexivity() {
        for (n, k) in [(2usize, 0i64), (2, 1), (3, 0), (3, 1), (3, 2), (4, 1)] {
            let p = family_pk(n, k).unwrap();
            assert_eq!(p.vertex_count(), 2 * n, "two parallel simplices");
            assert_eq!(p.facets().len(), n + 2);
            assert!(p.is_reflexive(), "n = {n}, k = {k}");
            assert!(p.is_delzant(), "n = {n}, k = {k}");
        }
        assert!(matches!(family_pk(3, 3), Err(Error::InvalidParam(_))));
        assert!(matches!(family_pk(3, -1), Err(Error::InvalidParam(_))));
        assert!(matches!(family_pk(1, 0), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn family_tk_matches_paper_vertices_and_hstar() {
        let t1 = family_tk(3, 1).unwrap();
        let mut expected: Vec<Vec<Int>> = vec![
            ivec(&[1, 0, 0]),
            ivec(&[0, 1, 0]),
            ivec(&[0, 0, 1]),
            ivec(&[0, 0, -1]),
            ivec(&[-1, -1, -1]),
        ];
        expected.sort();
        assert_eq!(t1.vertices(), &expected[..]);
        for (n, k) in [(3usize, 0i64), (3, 2), (4, 1), (5, 3)] {
            let t = family_tk(n, k).unwrap();
            assert!(t.is_toric_diagram());
            assert!(t.is_reflexive());
            let mut h = vec![2i64; n + 1];
            h[0] = 1;
            h[n] = 1;
            assert_eq!(
                ehrhart(&t).unwrap().hstar(),
                &HStar::from_i64(n, &h).unwrap(),
                "n = {n}, k = {k}"
            );
        }
    }

    #[test]
    fn family_tk_bipyramid_barycenter_identity() {
        // sum of base vertices = ((n-k)/2) e_n + ((n+k)/2)(-e_n) = -k e_n
        for (n, k) in [(3usize, 1i64), (4, 2), (5, 0)] {
            let mut sum = vec![Int::zero(); n];
            for i in 0..n - 1 {
                sum = crate::linalg::vadd(&sum, &unit_vector(n, i));
            }
            let mut vk = vec![int(-1); n];
            vk[n - 1] = int(-k);
            sum = crate::linalg::vadd(&sum, &vk);
            let mut rhs = vec![Int::zero(); n];
            rhs[n - 1] = int(-k);
            assert_eq!(sum, rhs);
        }
    }

    #[test]
    fn family_dk_matches_paper_vertices_and_hstar() {
        let d1 = family_dk(3, 1).unwrap();
        let mut expected: Vec<Vec<Int>> = vec![
            ivec(&[0, 0, 0]),
            ivec(&[1, 0, 0]),
            ivec(&[0, 1, 0]),
            ivec(&[0, -1, 1]),
            ivec(&[-1, -1, 2]),
        ];
        expected.sort();
        assert_eq!(d1.vertices(), &expected[..]);
        for (n, k) in [(2usize, 0i64), (3, 1), (4, 0), (4, 2), (5, 1)] {
            let d = family_dk(n, k).unwrap();
            assert!(d.is_toric_diagram(), "n = {n}, k = {k}");
            assert_eq!(d.gorenstein_index(), Some(2));
            let mut h = vec![1i64; n + 1];
            h[n] = 0;
            assert_eq!(ehrhart(&d).unwrap().hstar(), &HStar::from_i64(n, &h).unwrap());
        }
        assert!(matches!(family_dk(3, 0), Err(Error::InvalidParam(_))));
        assert!(matches!(family_dk(4, 1), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn family_dk_base_case_is_small_cross() {
        assert_eq!(family_dk(2, 0).unwrap(), small_cross_polytope(2).unwrap());
    }

    #[test]
    fn series_relation_between_tk_and_dk() {
        for (n, k) in [(3usize, 1i64), (4, 2), (5, 1)] {
            let ht = ehrhart(&family_tk(n, k).unwrap()).unwrap().hstar().clone();
            let hd = ehrhart(&family_dk(n, k).unwrap()).unwrap().hstar().clone();
            assert!(series_product_check(&ht, &hd, 2, 1), "n = {n}, k = {k}");
        }
    }

    fn five_monotone_matrices() -> Vec<BottMatrix> {
        [
            [[-1i64, 0, 0], [0, -1, 0], [0, 0, -1]],
            [[-1, 0, 0], [0, -1, 0], [0, 1, -1]],
            [[-1, 0, 0], [0, -1, 0], [1, -1, -1]],
            [[-1, 0, 0], [0, -1, 0], [1, 1, -1]],
            [[-1, 0, 0], [1, -1, 0], [0, 1, -1]],
        ]
        .iter()
        .map(|rows| {
            BottMatrix::from_i64(&rows.iter().map(|r| &r[..]).collect::<Vec<_>>()).unwrap()
        })
        .collect()
    }

    #[test]
    fn bott_matrix_validation() {
        assert!(BottMatrix::from_i64(&[&[-1, 0], &[3, -1]]).is_ok());
        assert!(BottMatrix::from_i64(&[&[1, 0], &[0, -1]]).is_err());
        assert!(BottMatrix::from_i64(&[&[-1, 5], &[0, -1]]).is_err());
    }

    #[test]
    fn monotone_conditions_on_known_matrices() {
        for (i, l) in five_monotone_matrices().iter().enumerate() {
            assert!(l.is_monotone(), "matrix {i} must be monotone");
        }
        // single subdiagonal 2: violates all three column conditions
        assert!(!BottMatrix::from_i64(&[&[-1, 0], &[2, -1]]).unwrap().is_monotone());
        // -1 lead whose lower entries fail to copy column q
        let bad = BottMatrix::from_i64(&[&[-1, 0, 0], &[-1, -1, 0], &[1, 0, -1]]).unwrap();
        assert!(!bad.is_monotone());
        // -1 lead with matching copy passes
        let good = BottMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[-1, 0, -1]]).unwrap();
        assert!(good.is_monotone());
    }

    #[test]
    fn negated_identity_gives_cube_and_cross() {
        let l = BottMatrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]).unwrap();
        assert_eq!(l.moment_polytope().unwrap(), cube(3, -1, 1).unwrap());
        assert_eq!(l.diagram().unwrap(), cross_polytope(3).unwrap());
    }

    #[test]
    fn bott_diagrams_share_the_cross_polytope_hstar() {
        let base = ehrhart(&cross_polytope(3).unwrap()).unwrap();
        for (i, l) in five_monotone_matrices().iter().enumerate() {
            let d = l.diagram().unwrap();
            assert_eq!(d.vertex_count(), 6);
            assert!(d.is_toric_diagram(), "matrix {i}");
            assert!(d.is_reflexive(), "matrix {i}");
            assert_eq!(ehrhart(&d).unwrap(), base, "matrix {i}");
        }
    }

    #[test]
    fn bott_moment_polytopes_prequantize_to_their_diagrams() {
        for l in five_monotone_matrices() {
            let moment = l.moment_polytope().unwrap();
            assert!(moment.is_delzant());
            assert!(moment.is_reflexive());
            let preq = prequantize_polytope(&moment).unwrap();
            // offsets are already all 1, so the diagram is literally the
            // hull of the normals
            assert_eq!(preq.diagram, l.diagram().unwrap());
            assert_eq!(preq.cone_map, IntMatrix::identity(4));
        }
    }

    #[test]
    fn non_monotone_matrix_has_no_diagram() {
        // subdiagonal 2: the anticanonical offsets collapse a face of the box
        let steep = BottMatrix::from_i64(&[&[-1, 0], &[2, -1]]).unwrap();
        assert!(steep.moment_polytope().is_err());
        assert!(matches!(steep.diagram(), Err(Error::Domain(_))));
        // copy-condition failure: the region survives but is not simple at
        // one corner, and no diagram is produced
        let skew = BottMatrix::from_i64(&[&[-1, 0, 0], &[-1, -1, 0], &[1, 0, -1]]).unwrap();
        let moment = skew.moment_polytope().unwrap();
        assert_eq!(moment.vertex_count(), 7);
        assert!(!moment.is_simple());
        assert!(matches!(skew.diagram(), Err(Error::Domain(_))));
    }

    #[test]
    fn counts_of_family_members_stay_consistent() {
        // L_{T_k}(1) = n + 3 lattice points (vertices plus origin)
        for (n, k) in [(3usize, 1i64), (4, 0)] {
            let t = family_tk(n, k).unwrap();
            assert_eq!(count_points(&t, &int(1)).unwrap(), int(n as i64 + 3));
            let d = family_dk(n, (n as i64) % 2).unwrap();
            assert_eq!(count_points(&d, &int(1)).unwrap(), int(n as i64 + 2));
        }
    }
}
