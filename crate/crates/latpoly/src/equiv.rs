//! Affine unimodular equivalence of lattice polytopes: a facet-anchored
//! complete search with verified witnesses, an orbit-canonical vertex list,
//! and constructive recognizers for the small cross-polytope and the D_k
//! bipyramid family.
//!
//! The search and the canonical form both anchor on affine frames made of a
//! facet's vertices plus one vertex off the facet. Any equivalence must send
//! such a frame to another one, so enumerating frames is complete; solving
//! each candidate frame keeps every accepted map integral and unimodular by
//! construction.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::ehrhart::{count_points, ehrhart, lattice_points};
use crate::families::{family_dk, small_cross_polytope};
use crate::linalg::{
    dot, hermite_form, int, solve_affine_frame, vsub, AffineMap, Int, IntMatrix, Rat,
};
use crate::polytope::Polytope;
use crate::{Error, Result};

/// Outcome of an equivalence decision. `map` is present exactly on the
/// equivalent verdict and sends the vertex set of the first polytope
/// bijectively onto the second's; for the recognition procedures, `reason`
/// names the first structural check that failed.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub equivalent: bool,
    pub map: Option<AffineMap>,
    pub reason: Option<String>,
}

impl EquivalenceWitness {
    fn witness(map: AffineMap) -> EquivalenceWitness {
        EquivalenceWitness { equivalent: true, map: Some(map), reason: None }
    }

    fn exhausted() -> EquivalenceWitness {
        EquivalenceWitness { equivalent: false, map: None, reason: None }
    }

    fn failed(step: &str) -> EquivalenceWitness {
        EquivalenceWitness { equivalent: false, map: None, reason: Some(step.to_string()) }
    }
}

/// Result of recognizing a D_k bipyramid: the recovered parameter together
/// with a verified affine unimodular map onto `family_dk(n, k)`.
#[derive(Clone, Debug)]
pub struct FamilyIdentification {
    pub k: i64,
    pub map: AffineMap,
}

fn binom(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut b = Int::one();
    for i in 0..k {
        b = b * int((n - i) as i64) / int((i + 1) as i64);
    }
    b
}

/// Vertex indices tight on each facet, in facet order.
fn tight_sets(p: &Polytope) -> Vec<Vec<usize>> {
    p.facets()
        .iter()
        .map(|h| {
            (0..p.vertex_count()).filter(|&i| h.eval(&p.vertices()[i]).is_zero()).collect()
        })
        .collect()
}

/// Number of facets through each vertex — an equivalence invariant used to
/// prune frame candidates.
fn vertex_degrees(tight: &[Vec<usize>], nverts: usize) -> Vec<usize> {
    let mut deg = vec![0usize; nverts];
    for ts in tight {
        for &i in ts {
            deg[i] += 1;
        }
    }
    deg
}

/// Greedy affine frame of `p`: the first `n` affinely independent vertices
/// of facet 0 followed by the first vertex off that facet, as indices.
fn anchor_frame(p: &Polytope, tight0: &[usize]) -> Vec<usize> {
    let n = p.dim();
    let mut frame: Vec<usize> = Vec::with_capacity(n + 1);
    let mut points: Vec<Vec<Int>> = Vec::with_capacity(n + 1);
    let off = (0..p.vertex_count()).filter(|i| !tight0.contains(i));
    for i in tight0.iter().copied().chain(off) {
        points.push(p.vertices()[i].clone());
        if crate::polytope::affine_rank(&points) == points.len() - 1 {
            frame.push(i);
            if frame.len() == n + 1 {
                return frame;
            }
        } else {
            points.pop();
        }
    }
    unreachable!("a full-dimensional polytope always yields a complete frame")
}

/// Depth-first enumeration of ordered tuples: positions `0..n-1` choose
/// distinct vertices of the facet `ts`, position `n` a vertex off it, each
/// matching the anchor's facet-degree pattern. Calls `emit` for every
/// complete tuple until it returns `Some`.
fn for_each_tuple<T>(
    ts: &[usize],
    off: &[usize],
    deg: &[usize],
    want: &[usize],
    emit: &mut dyn FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    let n = want.len() - 1;
    fn rec<T>(
        ts: &[usize],
        off: &[usize],
        deg: &[usize],
        want: &[usize],
        n: usize,
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> Option<T>,
    ) -> Option<T> {
        let pos = chosen.len();
        if pos == n {
            for &w in off {
                if deg[w] != want[n] {
                    continue;
                }
                chosen.push(w);
                let hit = emit(chosen);
                chosen.pop();
                if hit.is_some() {
                    return hit;
                }
            }
            return None;
        }
        for &w in ts {
            if deg[w] != want[pos] || chosen.contains(&w) {
                continue;
            }
            chosen.push(w);
            let hit = rec(ts, off, deg, want, n, chosen, emit);
            chosen.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
    let mut chosen = Vec::with_capacity(n + 1);
    rec(ts, off, deg, want, n, &mut chosen, emit)
}

/// Decides affine unimodular equivalence of two full-dimensional lattice
/// polytopes by complete search: one affine frame of `d1` is fixed, and its
/// candidate images — a facet of `d2`, an ordered labeling of that facet's
/// vertices, and one vertex off it — are exhausted. Every accepted map is
/// verified to biject the vertex sets, so an equivalent verdict always
/// ships a valid witness and exhaustion proves inequivalence.
pub fn unimodular_equivalent(d1: &Polytope, d2: &Polytope) -> Result<EquivalenceWitness> {
    if d1.dim() != d2.dim() {
        return Err(Error::Dimension(format!(
            "unimodular_equivalent: dimensions {} and {} differ",
            d1.dim(),
            d2.dim()
        )));
    }
    if d1.vertex_count() != d2.vertex_count() || d1.facets().len() != d2.facets().len() {
        return Ok(EquivalenceWitness::exhausted());
    }
    let t1 = tight_sets(d1);
    let t2 = tight_sets(d2);
    let deg1 = vertex_degrees(&t1, d1.vertex_count());
    let deg2 = vertex_degrees(&t2, d2.vertex_count());
    let multiset = |xs: &[usize]| {
        let mut s = xs.to_vec();
        s.sort_unstable();
        s
    };
    let sizes = |ts: &[Vec<usize>]| multiset(&ts.iter().map(Vec::len).collect::<Vec<_>>());
    if multiset(&deg1) != multiset(&deg2) || sizes(&t1) != sizes(&t2) {
        return Ok(EquivalenceWitness::exhausted());
    }

    let frame = anchor_frame(d1, &t1[0]);
    let src: Vec<Vec<Int>> = frame.iter().map(|&i| d1.vertices()[i].clone()).collect();
    let want: Vec<usize> = frame.iter().map(|&i| deg1[i]).collect();
    let targets: BTreeSet<&[Int]> = d2.vertices().iter().map(|v| &v[..]).collect();

    let hit = t2.par_iter().find_map_any(|ts| {
        let off: Vec<usize> =
            (0..d2.vertex_count()).filter(|i| !ts.contains(i)).collect();
        for_each_tuple(ts, &off, &deg2, &want, &mut |chosen| {
            let dst: Vec<Vec<Int>> =
                chosen.iter().map(|&i| d2.vertices()[i].clone()).collect();
            let map = solve_affine_frame(&src, &dst)
                .expect("anchor frame is affinely independent")?;
            let image: BTreeSet<Vec<Int>> =
                d1.vertices().iter().map(|v| map.apply(v)).collect();
            if image.len() == targets.len()
                && image.iter().all(|v| targets.contains(&v[..]))
            {
                Some(map)
            } else {
                None
            }
        })
    });
    Ok(match hit {
        Some(map) => EquivalenceWitness::witness(map),
        None => EquivalenceWitness::exhausted(),
    })
}

/// Canonical vertex list of a full-dimensional lattice polytope: the
/// lexicographically minimal sorted vertex list over every facet-frame
/// normalization. Each frame (facet, ordered vertex labeling, off-facet
/// vertex) is normalized through the Hermite form of its difference matrix,
/// which is constant on unimodular orbits, so equal canonical forms hold
/// exactly for equivalent polytopes.
pub fn canonical_form(d: &Polytope) -> Result<Vec<Vec<Int>>> {
    let n = d.dim();
    let tight = tight_sets(d);
    let mut best: Option<Vec<Vec<Int>>> = None;
    for ts in &tight {
        let off: Vec<usize> = (0..d.vertex_count()).filter(|i| !ts.contains(i)).collect();
        let mut anchors: Vec<Vec<usize>> = Vec::new();
        collect_tuples(ts, &off, n, &mut Vec::new(), &mut anchors);
        for chosen in anchors {
            let w0 = &d.vertices()[chosen[0]];
            let mut a = IntMatrix::zero(n, n);
            for (j, &wj) in chosen[1..].iter().enumerate() {
                for i in 0..n {
                    a[(i, j)] = &d.vertices()[wj][i] - &w0[i];
                }
            }
            let (h, u) = hermite_form(&a);
            if (0..n).any(|i| h[(i, i)].is_zero()) {
                continue;
            }
            let mut image: Vec<Vec<Int>> =
                d.vertices().iter().map(|v| u.apply(&vsub(v, w0))).collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("canonical_form: no full-rank frame found".into()))
}

fn collect_tuples(
    ts: &[usize],
    off: &[usize],
    n: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == n {
        for &w in off {
            chosen.push(w);
            out.push(chosen.clone());
            chosen.pop();
        }
        return;
    }
    for &w in ts {
        if chosen.contains(&w) {
            continue;
        }
        chosen.push(w);
        collect_tuples(ts, off, n, chosen, out);
        chosen.pop();
    }
}

/// Equality of Ehrhart polynomials, decided through the h*-vector.
pub fn ehrhart_equivalent(d1: &Polytope, d2: &Polytope) -> Result<bool> {
    if d1.dim() != d2.dim() {
        return Err(Error::Dimension(format!(
            "ehrhart_equivalent: dimensions {} and {} differ",
            d1.dim(),
            d2.dim()
        )));
    }
    Ok(ehrhart(d1)?.hstar() == ehrhart(d2)?.hstar())
}

/// Primitive integer generator of the affine dependencies of `points`
/// (coefficients summing to zero with a vanishing weighted point sum), or
/// `None` unless that space is exactly one-dimensional.
fn affine_dependency(points: &[Vec<Int>]) -> Option<Vec<Int>> {
    let m = points.len();
    let n = points.first().map_or(0, Vec::len);
    // Rows: one per coordinate plus the coefficient-sum row.
    let mut mat: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..m).map(|j| Rat::from_integer(points[j][i].clone())).collect())
        .collect();
    mat.push(vec![Rat::one(); m]);
    let rows = n + 1;
    let mut pivot_of_col = vec![usize::MAX; m];
    let mut r = 0;
    for c in 0..m {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in &mut mat[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for k in 0..m {
                    let sub = &f * &mat[r][k];
                    mat[i][k] = &mat[i][k] - sub;
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    let free: Vec<usize> = (0..m).filter(|&c| pivot_of_col[c] == usize::MAX).collect();
    let [fc] = free[..] else {
        return None;
    };
    let mut lam = vec![Rat::zero(); m];
    lam[fc] = Rat::one();
    for c in 0..m {
        let pr = pivot_of_col[c];
        if pr != usize::MAX {
            lam[c] = -mat[pr][fc].clone();
        }
    }
    // Clear denominators and divide out the content.
    let mut scale = Int::one();
    for x in &lam {
        scale = scale.lcm(x.denom());
    }
    let mut out: Vec<Int> =
        lam.iter().map(|x| x.numer() * &scale / x.denom()).collect();
    let mut g = Int::zero();
    for x in &out {
        g = g.gcd(x);
    }
    for x in &mut out {
        *x = &*x / &g;
    }
    Some(out)
}

/// Recognizes a polytope as a member of the D_k bipyramid family and
/// recovers `k` together with a verified map onto `family_dk(n, k)`.
///
/// The procedure follows the classification argument: the h*-vector must be
/// `(1, ..., 1, 0)`, the n+2 lattice points must all be vertices, the unique
/// affine dependency must split them into a base of n vertices with equal
/// coefficients and two apices whose coefficients read off `k`, and the
/// frame made of one apex, n-1 base vertices, and the other apex must carry
/// the vertex set onto the family member's.
pub fn identify_dk(s: &Polytope) -> Result<FamilyIdentification> {
    let n = s.dim();
    if n < 2 {
        return Err(Error::NotInFamily(
            "identify_dk: the family is defined for dimension >= 2".into(),
        ));
    }
    let poly = ehrhart(s)?;
    let hs = poly.hstar().coeffs();
    let expected_hstar =
        (0..=n).map(|j| if j < n { Int::one() } else { Int::zero() }).collect::<Vec<_>>();
    if hs != expected_hstar {
        return Err(Error::NotInFamily(format!(
            "identify_dk: h* is {hs:?}, not 1 + z + ... + z^{}",
            n - 1
        )));
    }
    if s.vertex_count() != n + 2 {
        return Err(Error::NotInFamily(format!(
            "identify_dk: expected {} vertices, found {}",
            n + 2,
            s.vertex_count()
        )));
    }
    if count_points(s, &Int::one())? != int((n + 2) as i64) {
        return Err(Error::NotInFamily(
            "identify_dk: polytope has lattice points besides its vertices".into(),
        ));
    }
    let mut lam = affine_dependency(s.vertices()).ok_or_else(|| {
        Error::Domain("identify_dk: affine dependency space is not one-dimensional".into())
    })?;
    if lam.iter().any(Zero::is_zero) {
        return Err(Error::Domain(
            "identify_dk: affine dependency skips a vertex".into(),
        ));
    }
    if lam.iter().filter(|x| x.is_positive()).count() == 2 {
        for x in &mut lam {
            *x = -x.clone();
        }
    }
    let base: Vec<usize> = (0..n + 2).filter(|&i| lam[i].is_positive()).collect();
    let apex: Vec<usize> = (0..n + 2).filter(|&i| lam[i].is_negative()).collect();
    if base.len() != n || apex.len() != 2 {
        return Err(Error::Domain(format!(
            "identify_dk: dependency splits vertices {}/{}, not {n}/2",
            base.len(),
            apex.len()
        )));
    }
    if base.iter().any(|&i| !lam[i].is_one()) {
        return Err(Error::Domain(
            "identify_dk: base coefficients of the dependency are unequal".into(),
        ));
    }
    let mu0 = -lam[apex[0]].clone();
    let mu1 = -lam[apex[1]].clone();
    // The apex with the smaller coefficient plays (n - k)/2; ties broken by
    // vertex order so the returned map is deterministic.
    let (a_small, a_large, diff) =
        if mu0 <= mu1 { (apex[0], apex[1], &mu1 - &mu0) } else { (apex[1], apex[0], &mu0 - &mu1) };
    let k = diff.to_i64().expect("apex coefficients are bounded by the dimension");
    debug_assert_eq!((n as i64 - k) % 2, 0, "k = n - 2 mu_1 forces the parity");
    debug_assert!((0..n as i64).contains(&k), "positive apex coefficients bound k");

    let target = family_dk(n, k)?;
    // Frame of the classification proof: y_1 -> e_{n-1}, base -> 0, e_1,
    // ..., e_{n-2}, y_2 -> e_n - e_{n-1} (math indexing).
    let unit = |i: usize| {
        let mut e = vec![Int::zero(); n];
        e[i] = Int::one();
        e
    };
    let mut dst: Vec<Vec<Int>> = vec![unit(n - 2)];
    dst.push(vec![Int::zero(); n]);
    for i in 0..n - 2 {
        dst.push(unit(i));
    }
    let mut last = vec![Int::zero(); n];
    last[n - 2] = int(-1);
    last[n - 1] = Int::one();
    dst.push(last);
    let mut src: Vec<Vec<Int>> = vec![s.vertices()[a_small].clone()];
    for &b in &base[..n - 1] {
        src.push(s.vertices()[b].clone());
    }
    src.push(s.vertices()[a_large].clone());
    let map = match solve_affine_frame(&src, &dst) {
        Ok(Some(map)) => map,
        Ok(None) | Err(_) => {
            return Err(Error::Domain(
                "identify_dk: the proof frame is not a lattice basis".into(),
            ))
        }
    };
    let image: BTreeSet<Vec<Int>> = s.vertices().iter().map(|v| map.apply(v)).collect();
    let want: BTreeSet<Vec<Int>> = target.vertices().iter().cloned().collect();
    if image != want {
        return Err(Error::Domain(
            "identify_dk: frame map does not carry the vertex set onto the family member".into(),
        ));
    }
    Ok(FamilyIdentification { k, map })
}

/// Recognizes the small cross-polytope from its h*-vector by replaying the
/// structural uniqueness argument: count checks at dilations 1 and 2, the
/// unique interior point of the doubled polytope, the edge-midpoint
/// bookkeeping, the antipodal vertex pairing, and a facet-frame
/// normalization that lands exactly on `small_cross_polytope(n)`. On
/// failure the witness names the first step that broke.
pub fn is_small_cross(s: &Polytope) -> Result<EquivalenceWitness> {
    let n = s.dim();
    let poly = ehrhart(s)?;
    let expected: Vec<Int> = (0..=n).map(|j| binom(n - 1, j)).collect();
    if poly.hstar().coeffs() != expected {
        return Ok(EquivalenceWitness::failed("h*"));
    }
    let two_n = int(2 * n as i64);
    if int(s.vertex_count() as i64) != two_n || count_points(s, &Int::one())? != two_n {
        return Ok(EquivalenceWitness::failed("lattice point count"));
    }
    let pts2 = lattice_points(s, &int(2))?;
    if pts2.len() != 2 * n * n + 1 {
        return Ok(EquivalenceWitness::failed("second dilation count"));
    }
    let interior: Vec<&Vec<Int>> = pts2
        .iter()
        .filter(|x| {
            s.facets()
                .iter()
                .all(|h| (dot(&h.normal, x) + int(2) * &h.offset).is_positive())
        })
        .collect();
    let [c] = interior[..] else {
        return Ok(EquivalenceWitness::failed("interior point of 2S"));
    };
    let verts = s.vertices();
    let mut accounted: BTreeSet<Vec<Int>> = BTreeSet::new();
    accounted.insert(c.clone());
    for v in verts {
        accounted.insert(v.iter().map(|x| x * int(2)).collect());
    }
    let mut midpoint_sums: BTreeSet<Vec<Int>> = BTreeSet::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let sum: Vec<Int> =
                verts[i].iter().zip(&verts[j]).map(|(a, b)| a + b).collect();
            if &sum != c {
                midpoint_sums.insert(sum);
            }
        }
    }
    if midpoint_sums.len() != 2 * n * (n - 1) {
        return Ok(EquivalenceWitness::failed("edge count"));
    }
    accounted.extend(midpoint_sums);
    if accounted != pts2.iter().cloned().collect::<BTreeSet<_>>() {
        return Ok(EquivalenceWitness::failed("edge count"));
    }
    let vset: BTreeSet<&[Int]> = verts.iter().map(|v| &v[..]).collect();
    for v in verts {
        let w = vsub(c, v);
        if w == *v || !vset.contains(&w[..]) {
            return Ok(EquivalenceWitness::failed("antipodal pairing"));
        }
    }

    // Facet-frame normalization: send one facet to {e_1, ..., e_{n-1}, 0}
    // inside the hyperplane x_n = 0, reflect so the center sits above it,
    // then shear the center onto e_n.
    let h0 = &s.facets().halfspaces()[0];
    let tight: Vec<&Vec<Int>> = verts.iter().filter(|v| h0.eval(v).is_zero()).collect();
    if tight.len() != n {
        return Ok(EquivalenceWitness::failed("facet frame"));
    }
    let origin_v = tight[n - 1];
    let mut a = IntMatrix::zero(n, n - 1);
    for j in 0..n - 1 {
        for i in 0..n {
            a[(i, j)] = &tight[j][i] - &origin_v[i];
        }
    }
    let (h, mut u) = hermite_form(&a);
    let standard = (0..n).all(|i| {
        (0..n - 1).all(|j| {
            if i == j {
                h[(i, j)].is_one()
            } else {
                h[(i, j)].is_zero()
            }
        })
    });
    if !standard {
        return Ok(EquivalenceWitness::failed("facet frame"));
    }
    let mut shift: Vec<Int> = u.apply(origin_v).iter().map(|x| -x).collect();
    // The center lives in coordinates of 2S, so its image doubles the shift.
    let center_image = |u: &IntMatrix, b: &[Int]| -> Vec<Int> {
        u.apply(c).iter().zip(b).map(|(x, s)| x + int(2) * s).collect()
    };
    let mut ci = center_image(&u, &shift);
    if !ci[n - 1].abs().is_one() {
        return Ok(EquivalenceWitness::failed("facet frame"));
    }
    if ci[n - 1].is_negative() {
        let mut refl = IntMatrix::identity(n);
        refl[(n - 1, n - 1)] = int(-1);
        u = refl.mul(&u);
        shift = refl.apply(&shift);
        ci = center_image(&u, &shift);
    }
    let mut shear = IntMatrix::identity(n);
    for i in 0..n - 1 {
        shear[(i, n - 1)] = -ci[i].clone();
    }
    let map = AffineMap::new(shear.mul(&u), shear.apply(&shift))
        .expect("products of unimodular matrices stay unimodular");
    debug_assert_eq!(center_image(map.linear(), map.shift()), {
        let mut e = vec![Int::zero(); n];
        e[n - 1] = Int::one();
        e
    });
    let image: BTreeSet<Vec<Int>> = verts.iter().map(|v| map.apply(v)).collect();
    let want: BTreeSet<Vec<Int>> =
        small_cross_polytope(n)?.vertices().iter().cloned().collect();
    if image != want {
        return Ok(EquivalenceWitness::failed("vertex match"));
    }
    Ok(EquivalenceWitness::witness(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::{enumerate_cacti, realize, RootedCactus};
    use crate::ehrhart::HStar;
    use crate::families::{cross_polytope, family_tk};
    use crate::linalg::{ivec, seeded_unimodular_map};

    fn assert_valid_witness(w: &EquivalenceWitness, d1: &Polytope, d2: &Polytope) {
        assert!(w.equivalent, "expected an equivalence, got {:?}", w.reason);
        let map = w.map.as_ref().expect("equivalent verdicts carry a map");
        let image: BTreeSet<Vec<Int>> = d1.vertices().iter().map(|v| map.apply(v)).collect();
        let want: BTreeSet<Vec<Int>> = d2.vertices().iter().cloned().collect();
        assert_eq!(image, want, "witness must biject the vertex sets");
    }

    #[test]
    fn witness_on_seeded_images() {
        let d = family_tk(4, 1).unwrap();
        for seed in 0..50 {
            let phi = seeded_unimodular_map(4, seed);
            let moved = d.apply(&phi).unwrap();
            let w = unimodular_equivalent(&d, &moved).unwrap();
            assert_valid_witness(&w, &d, &moved);
        }
    }

    #[test]
    fn tk_members_are_pairwise_inequivalent() {
        let family: Vec<Polytope> = (0..4).map(|k| family_tk(4, k).unwrap()).collect();
        for i in 0..family.len() {
            for j in 0..family.len() {
                let w = unimodular_equivalent(&family[i], &family[j]).unwrap();
                assert_eq!(w.equivalent, i == j, "T_{i} vs T_{j}");
            }
        }
    }

    #[test]
    fn cosphere_pair_is_inequivalent() {
        // Two quadrilaterals with five lattice points each: matching vertex
        // counts, facet counts, and degree patterns, so every cheap prune
        // passes and the frame search has to exhaust. They differ in
        // normalized volume (4 vs 3), so the h*-vectors split them too.
        let d1 = Polytope::hull(vec![
            ivec(&[0, 0]),
            ivec(&[1, 0]),
            ivec(&[0, 1]),
            ivec(&[2, 2]),
        ])
        .unwrap();
        let d2 = Polytope::hull(vec![
            ivec(&[0, 0]),
            ivec(&[1, 0]),
            ivec(&[2, 1]),
            ivec(&[2, 2]),
        ])
        .unwrap();
        assert_eq!(ehrhart(&d1).unwrap().hstar(), &HStar::from_i64(2, &[1, 2, 1]).unwrap());
        assert_eq!(ehrhart(&d2).unwrap().hstar(), &HStar::from_i64(2, &[1, 2, 0]).unwrap());
        assert!(!ehrhart_equivalent(&d1, &d2).unwrap());
        assert!(!unimodular_equivalent(&d1, &d2).unwrap().equivalent);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = cross_polytope(2).unwrap();
        let b = cross_polytope(3).unwrap();
        assert!(matches!(unimodular_equivalent(&a, &b), Err(Error::Dimension(_))));
        assert!(matches!(ehrhart_equivalent(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn ehrhart_equivalence_examples() {
        let cross = cross_polytope(3).unwrap();
        let small = small_cross_polytope(3).unwrap();
        assert!(!ehrhart_equivalent(&cross, &small).unwrap());
        assert!(ehrhart_equivalent(&cross, &cross).unwrap());
        let star = realize(&RootedCactus::star(3)).unwrap();
        assert!(ehrhart_equivalent(&cross, &star).unwrap());
    }

    #[test]
    fn canonical_form_is_a_unimodular_invariant() {
        let cross = cross_polytope(3).unwrap();
        let form = canonical_form(&cross).unwrap();
        for seed in 0..10 {
            let moved = cross.apply(&seeded_unimodular_map(3, seed)).unwrap();
            assert_eq!(canonical_form(&moved).unwrap(), form);
        }
    }

    #[test]
    fn canonical_form_agrees_with_the_search_on_cacti() {
        let diagrams: Vec<Polytope> =
            enumerate_cacti(3).iter().map(|c| realize(c).unwrap()).collect();
        assert_eq!(diagrams.len(), 5);
        let forms: Vec<_> = diagrams.iter().map(|d| canonical_form(d).unwrap()).collect();
        for i in 0..diagrams.len() {
            for j in 0..diagrams.len() {
                let w = unimodular_equivalent(&diagrams[i], &diagrams[j]).unwrap();
                assert_eq!(w.equivalent, i == j);
                assert_eq!(forms[i] == forms[j], i == j);
            }
        }
    }

    #[test]
    fn identify_recovers_every_valid_parameter() {
        for n in 2..=5usize {
            for k in (0..n as i64).filter(|k| (n as i64 - k) % 2 == 0) {
                let d = family_dk(n, k).unwrap();
                let id = identify_dk(&d).unwrap();
                assert_eq!(id.k, k, "n = {n}");
                let moved = d.apply(&seeded_unimodular_map(n, 7 * n as u64 + k as u64)).unwrap();
                let id = identify_dk(&moved).unwrap();
                assert_eq!(id.k, k, "n = {n} under a change of basis");
                let image: BTreeSet<Vec<Int>> =
                    moved.vertices().iter().map(|v| id.map.apply(v)).collect();
                let want: BTreeSet<Vec<Int>> =
                    d.vertices().iter().cloned().collect();
                assert_eq!(image, want, "map must land on family_dk({n}, {k})");
            }
        }
    }

    #[test]
    fn identify_handles_the_symmetric_apex_case() {
        let id = identify_dk(&family_dk(4, 0).unwrap()).unwrap();
        assert_eq!(id.k, 0);
    }

    #[test]
    fn identify_rejects_other_h_star_profiles() {
        let err = identify_dk(&small_cross_polytope(3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotInFamily(_)), "got {err:?}");
        let err = identify_dk(&cross_polytope(3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotInFamily(_)), "got {err:?}");
    }

    #[test]
    fn small_cross_recognized_under_seeded_maps() {
        for n in 1..=4usize {
            let s = small_cross_polytope(n).unwrap();
            for seed in 0..5 {
                let moved = s.apply(&seeded_unimodular_map(n, seed + 100 * n as u64)).unwrap();
                let w = is_small_cross(&moved).unwrap();
                assert_valid_witness(&w, &moved, &s);
            }
        }
    }

    #[test]
    fn small_cross_rejections_name_the_failed_step() {
        let w = is_small_cross(&cross_polytope(3).unwrap()).unwrap();
        assert!(!w.equivalent);
        assert_eq!(w.reason.as_deref(), Some("h*"));
        let chain = realize(&RootedCactus::chain(3)).unwrap();
        let w = is_small_cross(&chain).unwrap();
        assert_eq!(w.reason.as_deref(), Some("h*"));
    }

    #[test]
    fn realized_cacti_separate_exactly_by_class() {
        let diagrams: Vec<Polytope> =
            enumerate_cacti(3).iter().map(|c| realize(c).unwrap()).collect();
        for (i, a) in diagrams.iter().enumerate() {
            for (j, b) in diagrams.iter().enumerate() {
                let w = unimodular_equivalent(a, b).unwrap();
                assert_eq!(w.equivalent, i == j, "classes {i} and {j}");
                if w.equivalent {
                    assert_valid_witness(&w, a, b);
                }
            }
        }
    }
}
