//! Simplicial complexes on bitmask vertex sets, shelling detection and
//! search, restriction data (f, min, r), full subcomplexes and the critical
//! chain complexes obtained by algebraic Morse reduction.

use crate::intlin::{homology_at, HomologyGroup, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Vertices are bits; vertex v is bit 1 << v.
pub type VertexSet = u64;

pub fn vertex_list(mask: VertexSet) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn subsets_of(mask: VertexSet) -> Vec<VertexSet> {
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.reverse();
    out
}

/// Renders a face as its 1-based vertex list, the empty face as "∅".
pub fn face_name(mask: VertexSet) -> String {
    if mask == 0 {
        return "∅".into();
    }
    vertex_list(mask).iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join("")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    VertexOutOfRange { vertex: usize, m: usize },
    NotPure,
    OrderMismatch,
    NotRegularOnRestriction { position: usize },
    MorseStuck,
}

impl fmt::Display for SimplicialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplicialError::VertexOutOfRange { vertex, m } => {
                write!(f, "vertex {} out of range 1..={}", vertex + 1, m)
            }
            SimplicialError::NotPure => write!(f, "complex is not pure"),
            SimplicialError::OrderMismatch => write!(f, "order does not cover the facet set"),
            SimplicialError::NotRegularOnRestriction { position } => {
                write!(f, "inherited order is not regular-expanding at step {position}")
            }
            SimplicialError::MorseStuck => {
                write!(f, "Morse elimination found no unit pair among non-critical generators")
            }
        }
    }
}

impl std::error::Error for SimplicialError {}

/// Simplicial complex on m vertices given by its facets (maximal faces).
/// Every singleton is a face; isolated vertices are kept as facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub m: usize,
    pub facets: Vec<VertexSet>,
}

impl SimplicialComplex {
    pub fn is_pure(&self) -> bool {
        let mut sizes = self.facets.iter().map(|f| f.count_ones());
        match sizes.next() {
            None => true,
            Some(first) => sizes.all(|s| s == first),
        }
    }

    pub fn facet_dim(&self) -> u32 {
        self.facets.iter().map(|f| f.count_ones()).max().unwrap_or(0)
    }

    pub fn contains(&self, face: VertexSet) -> bool {
        if face == 0 {
            return true;
        }
        self.facets.iter().any(|&f| face & !f == 0)
    }

    /// All faces including the empty face, grouped by cardinality.
    pub fn faces_by_dim(&self) -> Vec<Vec<VertexSet>> {
        let mut seen: BTreeSet<VertexSet> = BTreeSet::new();
        for &f in &self.facets {
            for s in subsets_of(f) {
                seen.insert(s);
            }
        }
        seen.insert(0);
        let maxd = self.facet_dim() as usize;
        let mut out = vec![Vec::new(); maxd + 1];
        for face in seen {
            out[face.count_ones() as usize].push(face);
        }
        out
    }

    pub fn all_faces(&self) -> Vec<VertexSet> {
        self.faces_by_dim().into_iter().flatten().collect()
    }
}

/// Builds the normalized complex: facets pairwise non-contained, all m
/// singletons present (vertices not covered become facets of size one).
pub fn build_complex(m: usize, facets: &[Vec<usize>]) -> Result<SimplicialComplex, SimplicialError> {
    let mut masks: Vec<VertexSet> = Vec::new();
    for facet in facets {
        let mut mask = 0u64;
        for &v in facet {
            if v >= m {
                return Err(SimplicialError::VertexOutOfRange { vertex: v, m });
            }
            mask |= 1 << v;
        }
        masks.push(mask);
    }
    let covered: VertexSet = masks.iter().fold(0, |a, &b| a | b);
    for v in 0..m {
        if covered >> v & 1 == 0 {
            masks.push(1 << v);
        }
    }
    masks.sort();
    masks.dedup();
    let maximal: Vec<VertexSet> = masks
        .iter()
        .filter(|&&f| f != 0 && !masks.iter().any(|&g| g != f && f & !g == 0))
        .cloned()
        .collect();
    Ok(SimplicialComplex { m, facets: maximal })
}

/// Facet order as a permutation of the facet list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetOrder {
    pub sequence: Vec<VertexSet>,
}

impl FacetOrder {
    pub fn of(complex: &SimplicialComplex) -> Self {
        FacetOrder { sequence: complex.facets.clone() }
    }

    pub fn covers(&self, complex: &SimplicialComplex) -> bool {
        let mut a = self.sequence.clone();
        let mut b = complex.facets.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// Per-facet min sets and restrictions, per-face first facet.
#[derive(Clone, Debug)]
pub struct RestrictionData {
    pub order: FacetOrder,
    /// min(sigma_i): inclusion-minimal faces of sigma_i not contained in any
    /// earlier facet, in ascending bitmask order.
    pub min_sets: Vec<Vec<VertexSet>>,
    /// r(sigma_i) = union of min(sigma_i).
    pub restrictions: Vec<VertexSet>,
    /// f(tau): order-first facet containing tau, for every face of K.
    pub first_facet: BTreeMap<VertexSet, usize>,
    pub is_regular: bool,
    pub is_pure: bool,
}

impl RestrictionData {
    /// r(f(face)): restriction of the first facet containing the face.
    pub fn restriction_of(&self, face: VertexSet) -> VertexSet {
        self.restrictions[self.first_facet[&face]]
    }
}

/// Minimal subsets of `target` not contained in any of `earlier`.
fn minimal_new_subsets(target: VertexSet, earlier: &[VertexSet]) -> Vec<VertexSet> {
    let mut mins: Vec<VertexSet> = Vec::new();
    let mut by_size: Vec<VertexSet> = subsets_of(target);
    by_size.sort_by_key(|s| (s.count_ones(), *s));
    for tau in by_size {
        if earlier.iter().any(|&e| tau & !e == 0) {
            continue;
        }
        if mins.iter().any(|&m| m & !tau == 0) {
            continue;
        }
        mins.push(tau);
    }
    mins.sort();
    mins
}

pub fn restriction_data(
    complex: &SimplicialComplex,
    order: &FacetOrder,
) -> Result<RestrictionData, SimplicialError> {
    if !order.covers(complex) {
        return Err(SimplicialError::OrderMismatch);
    }
    let seq = &order.sequence;
    let mut min_sets = Vec::with_capacity(seq.len());
    let mut restrictions = Vec::with_capacity(seq.len());
    for (i, &sigma) in seq.iter().enumerate() {
        let mins = minimal_new_subsets(sigma, &seq[..i]);
        let r = mins.iter().fold(0u64, |a, &b| a | b);
        min_sets.push(mins);
        restrictions.push(r);
    }
    let mut first_facet = BTreeMap::new();
    for face in complex.all_faces() {
        let idx = seq
            .iter()
            .position(|&s| face & !s == 0)
            .expect("every face lies in some facet");
        first_facet.insert(face, idx);
    }
    let is_regular = min_sets.iter().all(|m| m.len() == 1);
    Ok(RestrictionData {
        order: order.clone(),
        min_sets,
        restrictions,
        first_facet,
        is_regular,
        is_pure: complex.is_pure(),
    })
}

/// Shelling test: every B_j = (union of earlier facets) ∩ sigma_j must be
/// nonempty and pure of cardinality one less than the facet cardinality.
pub fn is_shelling(
    complex: &SimplicialComplex,
    order: &FacetOrder,
) -> Result<bool, SimplicialError> {
    if !complex.is_pure() {
        return Err(SimplicialError::NotPure);
    }
    if !order.covers(complex) {
        return Err(SimplicialError::OrderMismatch);
    }
    let n = complex.facet_dim();
    let seq = &order.sequence;
    for j in 1..seq.len() {
        if !prefix_step_is_shelling(&seq[..j], seq[j], n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// B_j as a complex is generated by the earlier intersections; the shelling
/// condition asks every maximal face (possibly the empty face alone) to have
/// cardinality n - 1.
fn prefix_step_is_shelling(earlier: &[VertexSet], sigma: VertexSet, n: u32) -> bool {
    let inters: Vec<VertexSet> = earlier.iter().map(|&e| e & sigma).collect();
    let maximal: Vec<VertexSet> = inters
        .iter()
        .filter(|&&x| !inters.iter().any(|&y| y != x && x & !y == 0))
        .cloned()
        .collect();
    maximal.iter().all(|&x| x.count_ones() == n - 1)
}

/// Exhaustive backtracking shelling search; intended for small facet counts.
pub fn find_shelling(complex: &SimplicialComplex) -> Result<Option<FacetOrder>, SimplicialError> {
    if !complex.is_pure() {
        return Err(SimplicialError::NotPure);
    }
    let facets = &complex.facets;
    let n = complex.facet_dim();
    if facets.len() <= 1 || n <= 1 {
        return Ok(Some(FacetOrder { sequence: facets.clone() }));
    }
    // memo[(used_mask, candidate)] -> whether candidate legally extends used_mask
    let mut memo: BTreeMap<(u64, usize), bool> = BTreeMap::new();
    let mut used_mask: u64 = 0;
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        facets: &[VertexSet],
        n: u32,
        used_mask: &mut u64,
        stack: &mut Vec<usize>,
        memo: &mut BTreeMap<(u64, usize), bool>,
    ) -> bool {
        if stack.len() == facets.len() {
            return true;
        }
        for cand in 0..facets.len() {
            if *used_mask >> cand & 1 == 1 {
                continue;
            }
            let key = (*used_mask, cand);
            let ok = *memo.entry(key).or_insert_with(|| {
                if stack.is_empty() {
                    true
                } else {
                    let earlier: Vec<VertexSet> =
                        stack.iter().map(|&i| facets[i]).collect();
                    prefix_step_is_shelling(&earlier, facets[cand], n)
                }
            });
            if !ok {
                continue;
            }
            stack.push(cand);
            *used_mask |= 1 << cand;
            if dfs(facets, n, used_mask, stack, memo) {
                return true;
            }
            *used_mask &= !(1 << cand);
            stack.pop();
        }
        false
    }

    if dfs(facets, n, &mut used_mask, &mut stack, &mut memo) {
        let sequence = stack.iter().map(|&i| facets[i]).collect();
        Ok(Some(FacetOrder { sequence }))
    } else {
        Ok(None)
    }
}

/// Full subcomplex on omega, re-indexed over the vertices of omega in
/// ascending order. Returns the complex together with the old labels of the
/// new vertices.
pub fn restrict(complex: &SimplicialComplex, omega: VertexSet) -> (SimplicialComplex, Vec<usize>) {
    let labels = vertex_list(omega & ((1u64 << complex.m) - 1).max(omega));
    let reindex = |face: VertexSet| -> VertexSet {
        labels
            .iter()
            .enumerate()
            .filter(|(_, &old)| face >> old & 1 == 1)
            .fold(0u64, |a, (new, _)| a | 1 << new)
    };
    let faces: Vec<VertexSet> = complex
        .all_faces()
        .into_iter()
        .filter(|&f| f != 0 && f & !omega == 0)
        .collect();
    let maximal: Vec<VertexSet> = faces
        .iter()
        .filter(|&&f| !faces.iter().any(|&g| g != f && f & !g == 0))
        .map(|&f| reindex(f))
        .collect();
    let mut facets = maximal;
    facets.sort();
    (SimplicialComplex { m: labels.len(), facets }, labels)
}

/// Augmented integer chain complex of a set of faces: the empty face sits in
/// degree zero and faces of cardinality d in degree d. Differential of [s] is
/// the alternating sum over vertex removals with sign (-1)^(s,j).
#[derive(Clone, Debug)]
pub struct ZChainComplex {
    /// generators[d] lists the faces of cardinality d, ascending.
    pub generators: Vec<Vec<VertexSet>>,
    /// differentials[d]: degree d -> d-1, rows indexed by generators[d-1].
    pub differentials: Vec<IntMatrix>,
}

/// (s, j): number of vertices of s strictly below j.
pub fn position_sign_count(s: VertexSet, j: usize) -> u32 {
    (s & ((1u64 << j) - 1)).count_ones()
}

impl ZChainComplex {
    pub fn from_faces(all_faces: &[VertexSet]) -> Self {
        let maxd = all_faces.iter().map(|f| f.count_ones()).max().unwrap_or(0) as usize;
        let mut generators = vec![Vec::new(); maxd + 1];
        for &f in all_faces {
            generators[f.count_ones() as usize].push(f);
        }
        for g in &mut generators {
            g.sort();
            g.dedup();
        }
        let mut differentials = vec![IntMatrix::zeros(0, generators.first().map_or(0, |g| g.len()))];
        for d in 1..=maxd {
            let src = &generators[d];
            let tgt = &generators[d - 1];
            let mut mat = IntMatrix::zeros(tgt.len(), src.len());
            for (c, &s) in src.iter().enumerate() {
                for j in vertex_list(s) {
                    let face = s & !(1 << j);
                    if let Ok(r) = tgt.binary_search(&face) {
                        let sign = if position_sign_count(s, j) % 2 == 0 { 1 } else { -1 };
                        mat.set(r, c, BigInt::from(sign));
                    }
                }
            }
            differentials.push(mat);
        }
        ZChainComplex { generators, differentials }
    }

    pub fn of_complex(complex: &SimplicialComplex) -> Self {
        Self::from_faces(&complex.all_faces())
    }

    /// Differential into degree d (from d+1); zero-width when out of range.
    fn incoming(&self, d: usize) -> IntMatrix {
        if d + 1 < self.differentials.len() {
            self.differentials[d + 1].clone()
        } else {
            IntMatrix::zeros(self.generators.get(d).map_or(0, |g| g.len()), 0)
        }
    }

    /// Homology by chain degree.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        (0..self.generators.len())
            .map(|d| {
                let d_in = self.incoming(d);
                let d_out = if d == 0 {
                    IntMatrix::zeros(0, self.generators[0].len())
                } else {
                    self.differentials[d].clone()
                };
                homology_at(&d_in, &d_out).expect("chain complex differentials compose to zero")
            })
            .collect()
    }
}

/// Reduced homology of |K| indexed by topological degree (index 0 holds
/// H~_0). The augmented complex shifts degrees by one.
pub fn reduced_homology(complex: &SimplicialComplex) -> Vec<HomologyGroup> {
    let chain = ZChainComplex::of_complex(complex);
    let mut h = chain.homology();
    if h.is_empty() {
        return Vec::new();
    }
    // chain degree d+1 <-> topological degree d; degree 0 only carries the
    // augmentation class of the empty complex.
    h.remove(0);
    h
}

/// Critical chain complex of a restriction K_omega under the ambient facet
/// order: generators are the critical steps of the inherited expanding
/// sequence, with differential obtained by eliminating every non-critical
/// generator of the augmented complex through unit Gaussian steps.
#[derive(Clone, Debug)]
pub struct CriticalComplex {
    /// Critical faces by chain degree (face cardinality), ambient labels.
    pub generators: Vec<Vec<VertexSet>>,
    /// Ambient facet index that contributed each critical face.
    pub provenance: Vec<Vec<usize>>,
    /// differentials[d]: degree d -> d-1.
    pub differentials: Vec<IntMatrix>,
}

impl CriticalComplex {
    pub fn homology(&self) -> Vec<HomologyGroup> {
        (0..self.generators.len())
            .map(|d| {
                let d_in = if d + 1 < self.differentials.len() {
                    self.differentials[d + 1].clone()
                } else {
                    IntMatrix::zeros(self.generators[d].len(), 0)
                };
                let d_out = if d == 0 {
                    IntMatrix::zeros(0, self.generators[0].len())
                } else {
                    self.differentials[d].clone()
                };
                homology_at(&d_in, &d_out).expect("critical differential squares to zero")
            })
            .collect()
    }
}

/// Inherited expanding sequence data on K_omega: per ambient step i, the set
/// s_i = sigma_i ∩ omega, its min set and whether it is critical.
pub struct InheritedSequence {
    pub steps: Vec<VertexSet>,
    pub min_sets: Vec<Vec<VertexSet>>,
    /// (step index, critical face) pairs.
    pub criticals: Vec<(usize, VertexSet)>,
}

pub fn inherited_sequence(
    order: &FacetOrder,
    omega: VertexSet,
) -> Result<InheritedSequence, SimplicialError> {
    let steps: Vec<VertexSet> = order.sequence.iter().map(|&s| s & omega).collect();
    let mut min_sets = Vec::with_capacity(steps.len());
    let mut criticals = Vec::new();
    for (i, &s) in steps.iter().enumerate() {
        let mins = minimal_new_subsets(s, &steps[..i]);
        if mins.len() > 1 {
            return Err(SimplicialError::NotRegularOnRestriction { position: i });
        }
        if mins.len() == 1 && mins[0] == s {
            criticals.push((i, s));
        }
        min_sets.push(mins);
    }
    Ok(InheritedSequence { steps, min_sets, criticals })
}

pub fn critical_complex(
    complex: &SimplicialComplex,
    order: &FacetOrder,
    omega: VertexSet,
) -> Result<CriticalComplex, SimplicialError> {
    let seq = inherited_sequence(order, omega)?;
    let faces: Vec<VertexSet> = complex
        .all_faces()
        .into_iter()
        .filter(|&f| f & !omega == 0)
        .collect();
    let chain = ZChainComplex::from_faces(&faces);
    let critical_faces: BTreeMap<VertexSet, usize> =
        seq.criticals.iter().map(|&(i, f)| (f, i)).collect();
    let reduced = morse_reduce(&chain, |face| critical_faces.contains_key(&face))?;
    let provenance = reduced
        .generators
        .iter()
        .map(|degree| degree.iter().map(|f| critical_faces[f]).collect())
        .collect();
    Ok(CriticalComplex {
        generators: reduced.generators,
        provenance,
        differentials: reduced.differentials,
    })
}

struct MorseReduced {
    generators: Vec<Vec<VertexSet>>,
    differentials: Vec<IntMatrix>,
}

/// Gaussian elimination of non-critical generators: repeatedly cancel a
/// non-critical source x whose differential hits a non-critical target y
/// with a unit coefficient. Homology is preserved at every step.
fn morse_reduce(
    chain: &ZChainComplex,
    is_critical: impl Fn(VertexSet) -> bool,
) -> Result<MorseReduced, SimplicialError> {
    let degrees = chain.generators.len();
    let mut gens: Vec<Vec<VertexSet>> = chain.generators.clone();
    // differential entries as maps (target_face -> coefficient)
    let mut diffs: Vec<BTreeMap<(VertexSet, VertexSet), BigInt>> = Vec::with_capacity(degrees);
    for d in 0..degrees {
        let mut map = BTreeMap::new();
        if d > 0 {
            let mat = &chain.differentials[d];
            for (c, &src) in chain.generators[d].iter().enumerate() {
                for (r, &tgt) in chain.generators[d - 1].iter().enumerate() {
                    let v = mat.get(r, c);
                    if !v.is_zero() {
                        map.insert((src, tgt), v.clone());
                    }
                }
            }
        }
        diffs.push(map);
    }

    loop {
        // Find the first non-critical pair with a unit coefficient, scanning
        // degrees ascending and faces in ascending bitmask order.
        let mut found: Option<(usize, VertexSet, VertexSet)> = None;
        'scan: for d in 1..degrees {
            for &x in &gens[d] {
                if is_critical(x) {
                    continue;
                }
                let mut candidates: Vec<VertexSet> = diffs[d]
                    .iter()
                    .filter(|((sx, ty), v)| *sx == x && !is_critical(*ty) && v.abs() == BigInt::from(1))
                    .map(|((_, ty), _)| *ty)
                    .collect();
                candidates.sort();
                if let Some(&y) = candidates.first() {
                    found = Some((d, x, y));
                    break 'scan;
                }
            }
        }
        let (d, x, y) = match found {
            Some(t) => t,
            None => break,
        };

        let eps = diffs[d][&(x, y)].clone();
        let dx: Vec<(VertexSet, BigInt)> = gens[d - 1]
            .iter()
            .filter_map(|&t| diffs[d].get(&(x, t)).map(|v| (t, v.clone())))
            .collect();

        // Degree-d sources other than x lose their y component.
        let sources: Vec<VertexSet> = gens[d].iter().cloned().filter(|&w| w != x).collect();
        for w in sources {
            let beta = match diffs[d].get(&(w, y)) {
                Some(b) => b.clone(),
                None => continue,
            };
            let factor = &beta * &eps; // eps is ±1 so eps^{-1} = eps
            for (t, v) in &dx {
                let entry = diffs[d].entry((w, *t)).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    diffs[d].remove(&(w, *t));
                }
            }
        }
        // Degree d+1 differentials simply drop their x component.
        if d + 1 < degrees {
            let keys: Vec<(VertexSet, VertexSet)> =
                diffs[d + 1].keys().filter(|(_, t)| *t == x).cloned().collect();
            for k in keys {
                diffs[d + 1].remove(&k);
            }
        }
        // Remove x and y.
        gens[d].retain(|&g| g != x);
        gens[d - 1].retain(|&g| g != y);
        let keys: Vec<(VertexSet, VertexSet)> = diffs[d]
            .keys()
            .filter(|(s, t)| *s == x || *t == y)
            .cloned()
            .collect();
        for k in keys {
            diffs[d].remove(&k);
        }
    }

    for d in 0..degrees {
        for &g in &gens[d] {
            if !is_critical(g) {
                return Err(SimplicialError::MorseStuck);
            }
        }
    }

    // Truncate trailing empty degrees and assemble matrices.
    let top = gens.iter().rposition(|g| !g.is_empty()).map_or(0, |d| d + 1);
    let gens: Vec<Vec<VertexSet>> = gens.into_iter().take(top.max(1)).collect();
    let mut differentials = Vec::with_capacity(gens.len());
    differentials.push(IntMatrix::zeros(0, gens[0].len()));
    for d in 1..gens.len() {
        let mut mat = IntMatrix::zeros(gens[d - 1].len(), gens[d].len());
        for (c, &s) in gens[d].iter().enumerate() {
            for (r, &t) in gens[d - 1].iter().enumerate() {
                if let Some(v) = diffs[d].get(&(s, t)) {
                    mat.set(r, c, v.clone());
                }
            }
        }
        differentials.push(mat);
    }
    Ok(MorseReduced { generators: gens, differentials })
}
