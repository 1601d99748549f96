//! Rooted cacti of triangles: exact counting, canonical enumeration, a JSON
//! interchange form, realization as reflexive toric diagrams, and the inverse
//! extraction from a diagram.
//!
//! A rooted cactus is a multiset of branches at a root vertex; each branch is
//! one triangle whose two non-root corners carry further rooted cacti. Size is
//! the number of triangles.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ehrhart::lattice_points;
use crate::linalg::{int, vadd, vsub, Int};
use crate::polytope::Polytope;
use crate::{Error, Result};

/// One triangle hanging off a vertex, with the two sub-cacti at its other
/// corners ordered canonically (larger first).
pub type Branch = (RootedCactus, RootedCactus);

/// Canonically ordered rooted cactus: branch pairs are (larger, smaller) and
/// the branch list is sorted descending, so structural equality is
/// isomorphism of rooted cacti.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootedCactus {
    branches: Vec<Branch>,
}

impl RootedCactus {
    /// Normalizes one level; sub-cacti are expected canonical already.
    pub fn new(mut branches: Vec<Branch>) -> RootedCactus {
        for pair in &mut branches {
            if pair.0 < pair.1 {
                std::mem::swap(&mut pair.0, &mut pair.1);
            }
        }
        branches.sort_by(|a, b| b.cmp(a));
        RootedCactus { branches }
    }

    pub fn empty() -> RootedCactus {
        RootedCactus { branches: Vec::new() }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Total number of triangles.
    pub fn size(&self) -> usize {
        self.branches.iter().map(|(a, b)| 1 + a.size() + b.size()).sum()
    }

    /// All n triangles at the root; realizes as the cross-polytope.
    pub fn star(n: usize) -> RootedCactus {
        RootedCactus::new(vec![(RootedCactus::empty(), RootedCactus::empty()); n])
    }

    /// Each triangle hanging off a corner of the previous one.
    pub fn chain(n: usize) -> RootedCactus {
        let mut c = RootedCactus::empty();
        for _ in 0..n {
            c = RootedCactus::new(vec![(c, RootedCactus::empty())]);
        }
        c
    }

    /// Nested-array form: a node is a list of triangles, a triangle is the
    /// pair of its child nodes. `[[[],[]]]` is the single triangle.
    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    fn to_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.branches
                .iter()
                .map(|(a, b)| serde_json::Value::Array(vec![a.to_value(), b.to_value()]))
                .collect(),
        )
    }

    /// Parses the nested-array form and canonicalizes it.
    pub fn from_json(text: &str) -> Result<RootedCactus> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("cactus JSON: {e}")))?;
        RootedCactus::from_value(&value)
    }

    fn from_value(value: &serde_json::Value) -> Result<RootedCactus> {
        let node = value
            .as_array()
            .ok_or_else(|| Error::Parse("cactus JSON: node must be an array".into()))?;
        let mut branches = Vec::with_capacity(node.len());
        for triangle in node {
            let pair = triangle
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| {
                    Error::Parse("cactus JSON: triangle must be a pair of nodes".into())
                })?;
            branches.push((RootedCactus::from_value(&pair[0])?, RootedCactus::from_value(&pair[1])?));
        }
        Ok(RootedCactus::new(branches))
    }
}

/// Numbers of rooted cacti with 0, 1, ..., n triangles, by the multiset
/// (Euler-transform) recurrence over branches: a branch of size m is an
/// unordered pair of cacti with m-1 triangles between them.
pub fn count_cacti_table(n: usize) -> Vec<Int> {
    let mut counts = vec![Int::one()];
    let mut branch_counts = vec![Int::zero()]; // no branch has size 0
    let two = int(2);
    for m in 1..=n {
        let mut t = Int::zero();
        for a in 0..m {
            let b = m - 1 - a;
            if a > b {
                break;
            }
            if a < b {
                t += &counts[a] * &counts[b];
            } else {
                t += &counts[a] * (&counts[a] + 1) / &two;
            }
        }
        branch_counts.push(t);
        // m * N(m) = sum_k (sum_{d | k} d * T(d)) * N(m - k)
        let mut total = Int::zero();
        for k in 1..=m {
            let mut c = Int::zero();
            for d in 1..=k {
                if k % d == 0 {
                    c += int(d as i64) * &branch_counts[d];
                }
            }
            total += c * &counts[m - k];
        }
        let (q, r) = num_integer::Integer::div_rem(&total, &int(m as i64));
        debug_assert!(r.is_zero());
        counts.push(q);
    }
    counts
}

/// Number of rooted cacti with exactly n triangles.
pub fn count_cacti(n: usize) -> Int {
    count_cacti_table(n).pop().expect("table is never empty")
}

/// All canonical rooted cacti with exactly n triangles, one representative
/// per isomorphism class.
pub fn enumerate_cacti(n: usize) -> Vec<RootedCactus> {
    // cacti_by_size[m] and branches_by_size[m], built bottom-up
    let mut cacti: Vec<Vec<RootedCactus>> = vec![vec![RootedCactus::empty()]];
    let mut branches: Vec<Vec<Branch>> = vec![Vec::new()];
    for m in 1..=n {
        let mut level: Vec<Branch> = Vec::new();
        for a in 0..m {
            let b = m - 1 - a;
            if a > b {
                break;
            }
            for (i, hi) in cacti[b].iter().enumerate() {
                let js = if a == b { i.. } else { 0.. };
                for lo in &cacti[a][js] {
                    // hi has the larger size; same-size pairs take hi >= lo
                    let (x, y) = if hi >= lo { (hi.clone(), lo.clone()) } else { (lo.clone(), hi.clone()) };
                    level.push((x, y));
                }
            }
        }
        level.sort();
        branches.push(level);
        let mut out = Vec::new();
        let mut chosen: Vec<Branch> = Vec::new();
        pick_multiset(&branches, m, m, 0, &mut chosen, &mut out);
        cacti.push(out);
    }
    cacti.pop().expect("requested level was built")
}

/// Multisets of branches totalling `remaining` triangles, chosen in
/// non-increasing (size, index) order so each multiset appears once.
fn pick_multiset(
    branches: &[Vec<Branch>],
    remaining: usize,
    size_cap: usize,
    idx_cap: usize,
    chosen: &mut Vec<Branch>,
    out: &mut Vec<RootedCactus>,
) {
    if remaining == 0 {
        out.push(RootedCactus::new(chosen.clone()));
        return;
    }
    for s in (1..=size_cap.min(remaining)).rev() {
        let start = if s == size_cap { idx_cap } else { 0 };
        for i in start..branches[s].len() {
            chosen.push(branches[s][i].clone());
            pick_multiset(branches, remaining - s, s, i, chosen, out);
            chosen.pop();
        }
    }
}

/// Realizes a cactus with n triangles as a reflexive toric diagram in Z^n:
/// triangle k at corner y contributes the points e_k and y - e_k, with the
/// larger sub-cactus rooted at e_k. The star becomes the cross-polytope.
pub fn realize(c: &RootedCactus) -> Result<Polytope> {
    let n = c.size();
    if n == 0 {
        return Err(Error::InvalidParam("realize: the empty cactus has no diagram".into()));
    }
    let mut points = Vec::with_capacity(2 * n);
    let mut next = 0usize;
    place(c, &vec![Int::zero(); n], n, &mut next, &mut points);
    Polytope::hull(points)
}

fn place(
    node: &RootedCactus,
    at: &[Int],
    n: usize,
    next: &mut usize,
    points: &mut Vec<Vec<Int>>,
) {
    for (hi, lo) in node.branches() {
        let mut ek = vec![Int::zero(); n];
        ek[*next] = Int::one();
        *next += 1;
        let other = vsub(at, &ek);
        points.push(ek.clone());
        points.push(other.clone());
        place(hi, &ek, n, next, points);
        place(lo, &other, n, next, points);
    }
}

/// Recovers the cactus from a realized diagram (in any unimodular-affine
/// position): centers the unique interior lattice point, pairs the 2n
/// remaining points into triangles via a + b = parent, and reads off the
/// triangle tree. Inputs without that structure are rejected with the first
/// failed property.
pub fn extract_cactus(p: &Polytope) -> Result<RootedCactus> {
    let n = p.dim();
    let pts = lattice_points(p, &Int::one())?;
    if pts.len() != 2 * n + 1 {
        return Err(Error::Domain(format!(
            "extract: found {} lattice points, a realized diagram has {}",
            pts.len(),
            2 * n + 1
        )));
    }
    let interior: Vec<&Vec<Int>> =
        pts.iter().filter(|x| p.facets().strictly_contains(x)).collect();
    let [center] = interior[..] else {
        return Err(Error::Domain(format!(
            "extract: found {} interior lattice points, need exactly one",
            interior.len()
        )));
    };
    if p.vertex_count() != 2 * n {
        return Err(Error::Domain(format!(
            "extract: {} vertices, but all {} non-center lattice points must be vertices",
            p.vertex_count(),
            2 * n
        )));
    }
    let center = center.clone();
    let points: Vec<Vec<Int>> =
        pts.iter().filter(|x| **x != center).map(|x| vsub(x, &center)).collect();
    let index: BTreeMap<&[Int], usize> =
        points.iter().enumerate().map(|(i, x)| (x.as_slice(), i)).collect();
    // mate candidates: j such that p_i + p_j is the origin or another point
    let zero = vec![Int::zero(); n];
    let mates: Vec<Vec<usize>> = points
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (0..points.len())
                .filter(|&j| {
                    if i == j {
                        return false;
                    }
                    let s = vadd(a, &points[j]);
                    s == zero || index.contains_key(s.as_slice())
                })
                .collect()
        })
        .collect();
    let mut matched = vec![usize::MAX; points.len()];
    if let Some(cactus) = pair_up(&points, &index, &mates, &mut matched, n) {
        Ok(cactus)
    } else {
        Err(Error::Domain(
            "extract: the points admit no triangle-tree decomposition".into(),
        ))
    }
}

/// Backtracking search for a perfect matching whose triangle parents form a
/// tree rooted at the origin; returns the first cactus found.
fn pair_up(
    points: &[Vec<Int>],
    index: &BTreeMap<&[Int], usize>,
    mates: &[Vec<usize>],
    matched: &mut Vec<usize>,
    n: usize,
) -> Option<RootedCactus> {
    let Some(i) = matched.iter().position(|&m| m == usize::MAX) else {
        return assemble(points, index, matched, n);
    };
    for &j in &mates[i] {
        if matched[j] != usize::MAX {
            continue;
        }
        matched[i] = j;
        matched[j] = i;
        if let Some(c) = pair_up(points, index, mates, matched, n) {
            return Some(c);
        }
        matched[i] = usize::MAX;
        matched[j] = usize::MAX;
    }
    None
}

/// Turns a complete matching into the rooted cactus, if the parent relation
/// is an honest tree covering every triangle.
fn assemble(
    points: &[Vec<Int>],
    index: &BTreeMap<&[Int], usize>,
    matched: &[usize],
    n: usize,
) -> Option<RootedCactus> {
    // triangles as (i, j) with i < j; children_at[p] = triangles parented at
    // point p, roots = triangles whose corners sum to the origin
    let mut children_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); points.len()];
    let mut roots: Vec<(usize, usize)> = Vec::new();
    for (i, &j) in matched.iter().enumerate() {
        if i >= j {
            continue;
        }
        let s = vadd(&points[i], &points[j]);
        if s.iter().all(|x| x.is_zero()) {
            roots.push((i, j));
        } else {
            children_at[*index.get(s.as_slice())?].push((i, j));
        }
    }
    let mut visited = 0usize;
    let cactus = grow(&roots, &children_at, &mut visited);
    (visited == n).then_some(cactus)
}

fn grow(
    triangles: &[(usize, usize)],
    children_at: &[Vec<(usize, usize)>],
    visited: &mut usize,
) -> RootedCactus {
    let branches = triangles
        .iter()
        .map(|&(i, j)| {
            *visited += 1;
            (
                grow(&children_at[i], children_at, visited),
                grow(&children_at[j], children_at, visited),
            )
        })
        .collect();
    RootedCactus::new(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ehrhart::ehrhart;
    use crate::families::{cross_polytope, cube, family_dk, family_tk};
    use crate::linalg::{ivec, seeded_unimodular_map};
    use std::collections::BTreeSet;

    const TABLE: [i64; 16] = [
        1, 1, 2, 5, 13, 37, 111, 345, 1105, 3624, 12099, 41000, 140647, 487440, 1704115, 6002600,
    ];

    #[test]
    fn count_table_matches_known_values() {
        let counts = count_cacti_table(15);
        for (n, expected) in TABLE.iter().enumerate() {
            assert_eq!(counts[n], int(*expected), "n = {n}");
        }
        assert_eq!(count_cacti(10), int(12099));
    }

    #[test]
    fn enumeration_agrees_with_the_recurrence() {
        for n in 0..=7usize {
            let all = enumerate_cacti(n);
            assert_eq!(int(all.len() as i64), count_cacti(n), "n = {n}");
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len(), "duplicates at n = {n}");
            for c in &all {
                assert_eq!(c.size(), n);
            }
        }
    }

    #[test]
    fn star_and_chain_are_enumerated() {
        let all = enumerate_cacti(4);
        assert!(all.contains(&RootedCactus::star(4)));
        assert!(all.contains(&RootedCactus::chain(4)));
        assert_ne!(RootedCactus::star(4), RootedCactus::chain(4));
        assert_eq!(RootedCactus::star(1), RootedCactus::chain(1));
        assert_eq!(RootedCactus::star(4).size(), 4);
        assert_eq!(RootedCactus::chain(4).size(), 4);
    }

    #[test]
    fn json_round_trip_and_normalization() {
        for n in 0..=4usize {
            for c in enumerate_cacti(n) {
                assert_eq!(RootedCactus::from_json(&c.to_json()).unwrap(), c);
            }
        }
        assert_eq!(RootedCactus::empty().to_json(), "[]");
        assert_eq!(RootedCactus::star(1).to_json(), "[[[],[]]]");
        // swapped pair and shuffled branches normalize to the same cactus
        let a = RootedCactus::from_json("[[[],[[[],[]]]],[[],[]]]").unwrap();
        let b = RootedCactus::from_json("[[[],[]],[[[[],[]]],[]]]").unwrap();
        assert_eq!(a, b);
        assert!(RootedCactus::from_json("[[[]]]").is_err());
        assert!(RootedCactus::from_json("[3]").is_err());
    }

    #[test]
    fn star_realizes_as_cross_polytope() {
        for n in 1..=4usize {
            let d = realize(&RootedCactus::star(n)).unwrap();
            assert_eq!(d, cross_polytope(n).unwrap());
        }
        assert!(realize(&RootedCactus::empty()).is_err());
    }

    #[test]
    fn realized_diagrams_are_reflexive_with_cross_polytope_hstar() {
        for n in 2..=4usize {
            let base = ehrhart(&cross_polytope(n).unwrap()).unwrap();
            for c in enumerate_cacti(n) {
                let d = realize(&c).unwrap();
                assert_eq!(d.vertex_count(), 2 * n);
                assert!(d.is_reflexive());
                assert!(d.is_toric_diagram());
                assert_eq!(ehrhart(&d).unwrap(), base);
            }
        }
    }

    #[test]
    fn extraction_inverts_realization() {
        for n in 1..=5usize {
            for c in enumerate_cacti(n) {
                let d = realize(&c).unwrap();
                assert_eq!(extract_cactus(&d).unwrap(), c, "n = {n}");
            }
        }
    }

    #[test]
    fn extraction_is_unimodular_invariant() {
        for (seed, c) in enumerate_cacti(3).into_iter().enumerate() {
            let d = realize(&c).unwrap();
            for s in 0..4u64 {
                let map = seeded_unimodular_map(3, 97 * seed as u64 + s);
                let moved = d.apply(&map).unwrap();
                assert_eq!(extract_cactus(&moved).unwrap(), c);
            }
        }
    }

    #[test]
    fn extraction_rejects_foreign_polytopes() {
        // wrong lattice point count
        assert!(matches!(
            extract_cactus(&family_tk(3, 1).unwrap()),
            Err(Error::Domain(_))
        ));
        // no interior point at all
        assert!(matches!(
            extract_cactus(&family_dk(3, 1).unwrap()),
            Err(Error::Domain(_))
        ));
        // too many lattice points
        assert!(matches!(
            extract_cactus(&cube(2, -1, 1).unwrap()),
            Err(Error::Domain(_))
        ));
        // right counts, but one boundary lattice point is not a vertex
        let blunt = Polytope::hull(vec![ivec(&[1, 1]), ivec(&[1, -1]), ivec(&[-1, 0])]).unwrap();
        assert!(matches!(extract_cactus(&blunt), Err(Error::Domain(_))));
    }
}
