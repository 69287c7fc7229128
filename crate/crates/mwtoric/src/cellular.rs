//! Chain complexes of cells with Milnor-Witt coefficients: the moment-angle
//! cubical complex, the canonical restriction complex of a fan, the shellable
//! complex indexed by critical faces, decomposition into free and eta-cone
//! summands, homology sheaf and motive reports, Chow bases and the complete
//! surface classifier.

use crate::fan::{
    canonical_transform, frame, row_sets, surface_data, validate, Fan, FanError, SurfaceData,
};
use crate::intlin::{smith_normal_form, IntMatrix};
use crate::mwring::{
    mw_add, mw_mul, mw_neg, CubicalCell, MwConstant, MwError,
};
use crate::simplicial::{
    critical_complex, face_name, is_shelling, position_sign_count, subsets_of, vertex_list,
    SimplicialComplex, SimplicialError, VertexSet,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub enum CellularError {
    Fan(FanError),
    Simplicial(SimplicialError),
    Mw(MwError),
    NotShellable,
    NotEtaGraded(String),
    NotComplete,
    SurfaceParity(String),
    ReductionStuck,
}

impl fmt::Display for CellularError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellularError::Fan(e) => write!(f, "{e}"),
            CellularError::Simplicial(e) => write!(f, "{e}"),
            CellularError::Mw(e) => write!(f, "{e}"),
            CellularError::NotShellable => {
                write!(f, "facet order is not a shelling; use the canonical pathway")
            }
            CellularError::NotEtaGraded(msg) => write!(f, "complex is not eta-graded: {msg}"),
            CellularError::NotComplete => write!(f, "surface fan is not complete"),
            CellularError::SurfaceParity(msg) => write!(f, "surface parity violation: {msg}"),
            CellularError::ReductionStuck => {
                write!(f, "unit reduction could not eliminate all transient generators")
            }
        }
    }
}

impl std::error::Error for CellularError {}

impl From<FanError> for CellularError {
    fn from(e: FanError) -> Self {
        CellularError::Fan(e)
    }
}

impl From<SimplicialError> for CellularError {
    fn from(e: SimplicialError) -> Self {
        CellularError::Simplicial(e)
    }
}

impl From<MwError> for CellularError {
    fn from(e: MwError) -> Self {
        CellularError::Mw(e)
    }
}

/// Labeled generator of a Milnor-Witt chain complex. The weight is the
/// K^MW twist carried by the cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub weight: u32,
    pub sigma: VertexSet,
    pub omega: VertexSet,
    /// Facet that contributed the generator, when meaningful.
    pub facet: Option<VertexSet>,
}

/// Dense matrix of Milnor-Witt constants; rows over targets, columns over
/// sources.
#[derive(Clone, Debug)]
pub struct MwMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<MwConstant>,
}

impl MwMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MwMatrix { rows, cols, entries: vec![MwConstant::zero(0); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> MwConstant {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MwConstant) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct MwChainComplex {
    /// generators[d]: generators in chain degree d.
    pub generators: Vec<Vec<Generator>>,
    /// differentials[d]: degree d -> d-1; differentials[0] has zero rows.
    pub differentials: Vec<MwMatrix>,
}

impl MwChainComplex {
    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(|g| g.len()).sum()
    }

    /// Checks d . d = 0 over exact Milnor-Witt arithmetic.
    pub fn d_squared_is_zero(&self) -> Result<bool, MwError> {
        for d in 2..self.differentials.len() {
            let a = &self.differentials[d - 1];
            let b = &self.differentials[d];
            for i in 0..a.rows {
                for j in 0..b.cols {
                    let mut acc: Option<MwConstant> = None;
                    for k in 0..a.cols {
                        let prod = mw_mul(a.get(i, k), b.get(k, j));
                        if prod.is_zero() {
                            continue;
                        }
                        acc = Some(match acc {
                            None => prod,
                            Some(x) => mw_add(x, prod)?,
                        });
                    }
                    if let Some(x) = acc {
                        if !x.is_zero() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// True when each degree-d generator has weight d and every differential
    /// entry is an integer multiple of eta.
    pub fn is_eta_graded(&self) -> bool {
        for (d, gens) in self.generators.iter().enumerate() {
            if gens.iter().any(|g| g.weight != d as u32) {
                return false;
            }
        }
        self.differentials
            .iter()
            .all(|m| (0..m.rows * m.cols).all(|i| m.entries[i].as_eta_multiple().is_some()))
    }

    /// Integer matrices underlying an eta-graded differential.
    pub fn eta_matrices(&self) -> Option<Vec<IntMatrix>> {
        if !self.is_eta_graded() {
            return None;
        }
        let mut out = Vec::with_capacity(self.differentials.len());
        for m in &self.differentials {
            let mut im = IntMatrix::zeros(m.rows, m.cols);
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let a = m.get(r, c).as_eta_multiple().unwrap();
                    im.set(r, c, BigInt::from(a));
                }
            }
            out.push(im);
        }
        Some(out)
    }
}

/// Moment-angle cubical complex of K: cells (sigma, tau_one, tau_star) with
/// sigma a face of K, graded by |sigma|, with the oriented cubical
/// differential.
pub fn moment_angle_complex(complex: &SimplicialComplex) -> MwChainComplex {
    let m = complex.m;
    let full: VertexSet = if m == 64 { !0 } else { (1u64 << m) - 1 };
    let faces = complex.faces_by_dim();
    let mut generators: Vec<Vec<Generator>> = Vec::with_capacity(faces.len());
    let mut index: BTreeMap<(VertexSet, VertexSet), (usize, usize)> = BTreeMap::new();
    for (d, layer) in faces.iter().enumerate() {
        let mut gens = Vec::new();
        for &sigma in layer {
            for omega in subsets_of(full & !sigma) {
                let g = Generator {
                    label: format!("e^{}_{}", face_name(sigma), face_name(omega)),
                    weight: sigma.count_ones() + omega.count_ones(),
                    sigma,
                    omega,
                    facet: None,
                };
                index.insert((sigma, omega), (d, gens.len()));
                gens.push(g);
            }
        }
        generators.push(gens);
    }
    let mut differentials = vec![MwMatrix::zeros(0, generators[0].len())];
    for d in 1..generators.len() {
        let mut mat = MwMatrix::zeros(generators[d - 1].len(), generators[d].len());
        for (c, g) in generators[d].iter().enumerate() {
            for j in vertex_list(g.sigma) {
                let tgt_sigma = g.sigma & !(1 << j);
                let tgt_omega = g.omega | 1 << j;
                let (dd, r) = index[&(tgt_sigma, tgt_omega)];
                debug_assert_eq!(dd, d - 1);
                let bra = MwConstant::bra_minus_one_pow(position_sign_count(g.sigma, j) as i128);
                let eps = MwConstant::epsilon_pow(position_sign_count(g.omega, j) as i128);
                let coef = mw_mul(bra, eps);
                let prev = mat.get(r, c);
                let v = if prev.is_zero() { coef } else { mw_add(prev, coef).expect("degree 0") };
                mat.set(r, c, v);
            }
        }
        differentials.push(mat);
    }
    MwChainComplex { generators, differentials }
}

/// Sparse working form used by the unit-elimination passes.
struct SparseComplex {
    gens: Vec<Vec<Option<Generator>>>,
    /// diffs[d]: (source index in degree d, target index in degree d-1) -> entry
    diffs: Vec<BTreeMap<(usize, usize), MwConstant>>,
}

impl SparseComplex {
    fn from_complex(c: &MwChainComplex) -> Self {
        let gens = c.generators.iter().map(|g| g.iter().cloned().map(Some).collect()).collect();
        let mut diffs = Vec::with_capacity(c.differentials.len());
        for (d, m) in c.differentials.iter().enumerate() {
            let mut map = BTreeMap::new();
            if d > 0 {
                for s in 0..m.cols {
                    for t in 0..m.rows {
                        let v = m.get(t, s);
                        if !v.is_zero() {
                            map.insert((s, t), v);
                        }
                    }
                }
            }
            diffs.push(map);
        }
        SparseComplex { gens, diffs }
    }

    /// Cancels the pair (x at degree d, y at degree d-1) along a unit entry.
    fn cancel(&mut self, d: usize, x: usize, y: usize, unit_inv: MwConstant) {
        let dx: Vec<(usize, MwConstant)> = self
            .diffs[d]
            .iter()
            .filter(|((s, _), _)| *s == x)
            .map(|((_, t), v)| (*t, *v))
            .collect();
        let with_y: Vec<(usize, MwConstant)> = self
            .diffs[d]
            .iter()
            .filter(|((s, t), _)| *t == y && *s != x)
            .map(|((s, _), v)| (*s, *v))
            .collect();
        for (w, beta) in with_y {
            let factor = mw_mul(beta, unit_inv);
            for &(t, v) in &dx {
                let correction = mw_neg(mw_mul(factor, v));
                let key = (w, t);
                let new = match self.diffs[d].get(&key) {
                    Some(&old) => mw_add(old, correction).expect("matched entry degrees"),
                    None => correction,
                };
                if new.is_zero() {
                    self.diffs[d].remove(&key);
                } else {
                    self.diffs[d].insert(key, new);
                }
            }
        }
        if d + 1 < self.diffs.len() {
            let keys: Vec<(usize, usize)> =
                self.diffs[d + 1].keys().filter(|(_, t)| *t == x).cloned().collect();
            for k in keys {
                self.diffs[d + 1].remove(&k);
            }
        }
        let keys: Vec<(usize, usize)> = self.diffs[d]
            .keys()
            .filter(|(s, t)| *s == x || *t == y)
            .cloned()
            .collect();
        for k in keys {
            self.diffs[d].remove(&k);
        }
        self.gens[d][x] = None;
        self.gens[d - 1][y] = None;
    }

    /// First unit entry whose source and target both fail `keep`, scanning
    /// degrees ascending.
    fn find_transient_unit(&self, keep: impl Fn(&Generator) -> bool) -> Option<(usize, usize, usize, MwConstant)> {
        for d in 1..self.gens.len() {
            for ((s, t), v) in &self.diffs[d] {
                let src = match &self.gens[d][*s] {
                    Some(g) => g,
                    None => continue,
                };
                let tgt = match &self.gens[d - 1][*t] {
                    Some(g) => g,
                    None => continue,
                };
                if keep(src) || keep(tgt) {
                    continue;
                }
                if let Some(inv) = v.gw_unit_inverse() {
                    return Some((d, *s, *t, inv));
                }
            }
        }
        None
    }

    /// Any unit entry at all.
    fn find_any_unit(&self) -> Option<(usize, usize, usize, MwConstant)> {
        self.find_transient_unit(|_| false)
    }

    fn into_complex(self) -> MwChainComplex {
        let mut keep_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.gens.len());
        let mut generators: Vec<Vec<Generator>> = Vec::with_capacity(self.gens.len());
        for layer in &self.gens {
            let mut map = Vec::with_capacity(layer.len());
            let mut gens = Vec::new();
            for g in layer {
                match g {
                    Some(g) => {
                        map.push(Some(gens.len()));
                        gens.push(g.clone());
                    }
                    None => map.push(None),
                }
            }
            keep_index.push(map);
            generators.push(gens);
        }
        let top = generators.iter().rposition(|g| !g.is_empty()).map_or(0, |d| d + 1).max(1);
        generators.truncate(top);
        let mut differentials = vec![MwMatrix::zeros(0, generators[0].len())];
        for d in 1..generators.len() {
            let mut mat = MwMatrix::zeros(generators[d - 1].len(), generators[d].len());
            for ((s, t), v) in &self.diffs[d] {
                if let (Some(si), Some(ti)) = (keep_index[d][*s], keep_index[d - 1][*t]) {
                    mat.set(ti, si, *v);
                }
            }
            // fill zero degrees for bookkeeping
            for (c, src) in generators[d].iter().enumerate() {
                for (r, tgt) in generators[d - 1].iter().enumerate() {
                    if mat.get(r, c).is_zero() {
                        mat.set(r, c, MwConstant::zero(src.weight as i32 - tgt.weight as i32));
                    }
                }
            }
            differentials.push(mat);
        }
        MwChainComplex { generators, differentials }
    }
}

/// Cancels unit entries between transient generators until only generators
/// satisfying `keep` remain. Errs when a transient generator survives with
/// no unit entry left to cancel it.
pub fn eliminate_transients(
    complex: &MwChainComplex,
    keep: impl Fn(&Generator) -> bool,
) -> Result<MwChainComplex, CellularError> {
    let mut sparse = SparseComplex::from_complex(complex);
    while let Some((d, s, t, inv)) = sparse.find_transient_unit(&keep) {
        sparse.cancel(d, s, t, inv);
    }
    let stuck = sparse
        .gens
        .iter()
        .flatten()
        .flatten()
        .any(|g| !keep(g));
    if stuck {
        return Err(CellularError::ReductionStuck);
    }
    Ok(sparse.into_complex())
}

/// Cancels unit entries anywhere until none remain.
pub fn reduce_by_units(complex: &MwChainComplex) -> MwChainComplex {
    let mut sparse = SparseComplex::from_complex(complex);
    while let Some((d, s, t, inv)) = sparse.find_any_unit() {
        sparse.cancel(d, s, t, inv);
    }
    sparse.into_complex()
}

/// Canonical restriction complex of a smooth fan.
///
/// The full canonical complex has one cell per face sigma of K and twist set
/// omega inside the frame of f(sigma); the differential moves one sigma
/// vertex into the twist, transports back to canonical position and expands
/// through the action coefficients. The restriction generators (those with
/// sigma ⊔ (omega ∩ f) inside r(f(sigma)), plus free extra frame directions)
/// are kept and the transient remainder is eliminated by unit Gaussian
/// steps, which transfers the differential.
pub fn canonical_complex(fan: &Fan) -> Result<MwChainComplex, CellularError> {
    let report = validate(fan);
    if !report.ok_for_cellular() {
        return Err(CellularError::Fan(FanError::Validation(format!(
            "fan fails validation (smooth: {}, surjective: {}, m > n: {}; cones: {:?})",
            report.smooth, report.surjective, report.more_rays_than_dim, report.cone_failures
        ))));
    }
    let data = fan.restriction_data();
    let m = fan.m();
    let full: VertexSet = if m == 64 { !0 } else { (1u64 << m) - 1 };

    let mut frames: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (idx, &facet) in data.order.sequence.iter().enumerate() {
        frames.insert(idx, frame(fan, facet)?);
    }
    let f_of = |sigma: VertexSet| -> usize { data.first_facet[&sigma] };

    let faces = fan.complex.faces_by_dim();
    let mut generators: Vec<Vec<Generator>> = Vec::with_capacity(faces.len());
    let mut index: BTreeMap<(VertexSet, VertexSet), (usize, usize)> = BTreeMap::new();
    for (d, layer) in faces.iter().enumerate() {
        let mut gens = Vec::new();
        for &sigma in layer {
            let fr = frames[&f_of(sigma)];
            for omega in subsets_of(fr & !sigma) {
                let g = Generator {
                    label: format!("e^{}_{}", face_name(sigma), face_name(omega)),
                    weight: sigma.count_ones() + omega.count_ones(),
                    sigma,
                    omega,
                    facet: Some(data.order.sequence[f_of(sigma)]),
                };
                index.insert((sigma, omega), (d, gens.len()));
                gens.push(g);
            }
        }
        generators.push(gens);
    }

    let mut differentials = vec![MwMatrix::zeros(0, generators[0].len())];
    for d in 1..generators.len() {
        let mut mat = MwMatrix::zeros(generators[d - 1].len(), generators[d].len());
        // initialize zero degrees
        for (c, src) in generators[d].iter().enumerate() {
            for (r, tgt) in generators[d - 1].iter().enumerate() {
                mat.set(r, c, MwConstant::zero(src.weight as i32 - tgt.weight as i32));
            }
        }
        for (c, g) in generators[d].iter().enumerate() {
            for j in vertex_list(g.sigma) {
                let sign = if position_sign_count(g.sigma, j) % 2 == 0 { 1 } else { -1 };
                let eps = MwConstant::epsilon_pow(position_sign_count(g.omega, j) as i128);
                let base = mw_mul(MwConstant::integer(sign), eps);
                let tgt_sigma = g.sigma & !(1 << j);
                let cell = CubicalCell::new(
                    tgt_sigma,
                    full & !tgt_sigma & !(g.omega | 1 << j),
                    g.omega | 1 << j,
                );
                let tgt_frame = frames[&f_of(tgt_sigma)];
                let transform = canonical_transform(fan, &cell, tgt_frame)?;
                for omega_t in subsets_of(tgt_frame & !tgt_sigma) {
                    let coef =
                        crate::mwring::action_coefficient(&transform.section, &cell, omega_t)?;
                    if coef.is_zero() {
                        continue;
                    }
                    let (dd, r) = index[&(tgt_sigma, omega_t)];
                    debug_assert_eq!(dd, d - 1);
                    let term = mw_mul(base, coef);
                    let prev = mat.get(r, c);
                    let v = if prev.is_zero() { term } else { mw_add(prev, term)? };
                    mat.set(r, c, v);
                }
            }
        }
        differentials.push(mat);
    }

    let all = MwChainComplex { generators, differentials };

    // Restriction marking: sigma ⊔ (omega ∩ f) ⊆ r(f(sigma)); extra frame
    // directions outside f(sigma) are free.
    let keep = |g: &Generator| -> bool {
        let fi = f_of(g.sigma);
        let f_mask = data.order.sequence[fi];
        let r_mask = data.restrictions[fi];
        (g.sigma | (g.omega & f_mask)) & !r_mask == 0
    };
    eliminate_transients(&all, keep)
}

/// Shellable complex: one generator per facet at degree |r(sigma)|, with the
/// eta-scaled critical differential assembled over all row sets.
pub fn lambda_complex(fan: &Fan) -> Result<MwChainComplex, CellularError> {
    let report = validate(fan);
    if !report.ok_for_cellular() {
        return Err(CellularError::Fan(FanError::Validation(
            "fan fails smoothness or surjectivity".into(),
        )));
    }
    if !report.pure {
        return Err(CellularError::NotShellable);
    }
    if !is_shelling(&fan.complex, &fan.order)? {
        return Err(CellularError::NotShellable);
    }
    let table = row_sets(fan)?;
    let data = fan.restriction_data();
    let n = fan.n();

    // Generators per degree with provenance, plus per-omega blocks.
    let mut generators: Vec<Vec<Generator>> = vec![Vec::new(); n + 1];
    let mut position: BTreeMap<(VertexSet, VertexSet), (usize, usize)> = BTreeMap::new();
    for (i, &facet) in data.order.sequence.iter().enumerate() {
        let r = data.restrictions[i];
        let omega = table.facet_assignment[i]
            .ok_or_else(|| CellularError::Fan(FanError::Internal("facet without row set".into())))?;
        let d = r.count_ones() as usize;
        let g = Generator {
            label: face_name(facet),
            weight: d as u32,
            sigma: r,
            omega,
            facet: Some(facet),
        };
        position.insert((omega, r), (d, generators[d].len()));
        generators[d].push(g);
    }

    let mut differentials = vec![MwMatrix::zeros(0, generators[0].len())];
    for d in 1..generators.len() {
        let mut mat = MwMatrix::zeros(generators[d - 1].len(), generators[d].len());
        for r in 0..mat.rows {
            for c in 0..mat.cols {
                mat.set(r, c, MwConstant::zero(1));
            }
        }
        differentials.push(mat);
    }

    let mut omegas: Vec<VertexSet> = table.rows.iter().map(|&(_, w)| w).collect();
    omegas.sort();
    omegas.dedup();
    for (omega, cri) in critical_complexes_of(fan, &omegas)? {
        for d in 1..cri.generators.len() {
            let matc = &cri.differentials[d];
            for (ci, &src) in cri.generators[d].iter().enumerate() {
                let Some(&(sd, sc)) = position.get(&(omega, src)) else { continue };
                debug_assert_eq!(sd, d);
                for (ri, &tgt) in cri.generators[d - 1].iter().enumerate() {
                    let v = matc.get(ri, ci);
                    if v.is_zero() {
                        continue;
                    }
                    let Some(&(td, tr)) = position.get(&(omega, tgt)) else { continue };
                    debug_assert_eq!(td, d - 1);
                    let a = v.to_i128().expect("critical differential entry overflow");
                    differentials[sd].set(tr, sc, MwConstant::eta_power(1, a));
                }
            }
        }
    }

    Ok(MwChainComplex { generators, differentials })
}

/// Per-omega critical complexes, computed in parallel when the
/// MWTORIC_PARALLEL env var asks for more than one worker. The computations
/// are independent and the inputs immutable.
fn critical_complexes_of(
    fan: &Fan,
    omegas: &[VertexSet],
) -> Result<Vec<(VertexSet, crate::simplicial::CriticalComplex)>, CellularError> {
    let workers: usize = std::env::var("MWTORIC_PARALLEL")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 1)
        .unwrap_or(1);
    if workers <= 1 || omegas.len() < 2 {
        return omegas
            .iter()
            .map(|&w| Ok((w, critical_complex(&fan.complex, &fan.order, w)?)))
            .collect();
    }
    let chunk = omegas.len().div_ceil(workers);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = omegas
            .chunks(chunk)
            .map(|block| {
                scope.spawn(move || {
                    block
                        .iter()
                        .map(|&w| Ok((w, critical_complex(&fan.complex, &fan.order, w)?)))
                        .collect::<Result<Vec<_>, SimplicialError>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker does not panic"))
            .collect::<Result<Vec<_>, SimplicialError>>()
    })?;
    Ok(results.into_iter().flatten().collect())
}

/// Summand of a decomposition: a free K^MW generator or the cone of l*eta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SummandKind {
    Free,
    ConeOfLEta { l: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub kind: SummandKind,
    /// Twist: weight of the bottom generator.
    pub q: u32,
    /// Shift: q plus the chain degree of the bottom generator.
    pub p: u32,
    pub generator: String,
    pub top_generator: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub summands: Vec<Summand>,
    /// One motivic cell (q, p, label) per generator of the complex.
    pub motivic_cells: Vec<(u32, u32, String)>,
}

impl DecompositionReport {
    /// B(l) grouped by (l, q): summand generator labels.
    pub fn b_table(&self) -> BTreeMap<(BigInt, u32), Vec<String>> {
        let mut out: BTreeMap<(BigInt, u32), Vec<String>> = BTreeMap::new();
        for s in &self.summands {
            let l = match &s.kind {
                SummandKind::Free => BigInt::zero(),
                SummandKind::ConeOfLEta { l } => l.clone(),
            };
            out.entry((l, s.q)).or_default().push(s.generator.clone());
        }
        out
    }

    /// Multiset of (l, q) with multiplicity, l = 0 for free summands.
    pub fn b_multiset(&self) -> BTreeMap<(BigInt, u32), usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            let l = match &s.kind {
                SummandKind::Free => BigInt::zero(),
                SummandKind::ConeOfLEta { l } => l.clone(),
            };
            *out.entry((l, s.q)).or_insert(0) += 1;
        }
        out
    }
}

/// Splits an eta-graded complex via per-degree Smith normal forms: zero
/// SNF columns/rows yield free summands, a diagonal entry l pairs a top with
/// a bottom generator into the cone of l*eta.
pub fn decompose(complex: &MwChainComplex) -> Result<DecompositionReport, CellularError> {
    if !complex.is_eta_graded() {
        return Err(CellularError::NotEtaGraded(
            "decompose requires weight = degree and integer eta entries".into(),
        ));
    }
    let mats = complex.eta_matrices().expect("checked eta-graded");
    let snfs: Vec<_> = mats.iter().map(smith_normal_form).collect();

    let degrees = complex.generators.len();
    let mut used: Vec<Vec<bool>> = complex.generators.iter().map(|g| vec![false; g.len()]).collect();
    let mut summands = Vec::new();

    let claim = |used: &mut Vec<bool>, scores: Vec<BigInt>| -> usize {
        // greatest |coefficient|, then lowest index, skipping claimed slots
        let mut best: Option<(usize, BigInt)> = None;
        for (i, s) in scores.iter().enumerate() {
            if used[i] {
                continue;
            }
            let a = s.abs();
            match &best {
                Some((_, b)) if *b >= a => {}
                _ => best = Some((i, a)),
            }
        }
        let idx = best.map(|(i, _)| i).unwrap_or_else(|| {
            used.iter().position(|u| !u).expect("free slot must exist")
        });
        used[idx] = true;
        idx
    };

    for d in 1..degrees {
        let snf = &snfs[d];
        let mat = &mats[d];
        let rank = snf.rank();
        for k in 0..rank {
            let l = snf.diagonal[k].clone();
            // source basis column k of V
            let v_col = snf.v.column(k);
            let src = claim(&mut used[d], v_col);
            // image vector divided by l locates the bottom generator
            let img = mat.mul_vec(&snf.v.column(k));
            let img: Vec<BigInt> = img.into_iter().map(|x| x / &l).collect();
            let tgt = claim(&mut used[d - 1], img);
            let bottom = &complex.generators[d - 1][tgt];
            let top = &complex.generators[d][src];
            summands.push(Summand {
                kind: SummandKind::ConeOfLEta { l },
                q: bottom.weight,
                p: bottom.weight + (d as u32 - 1),
                generator: pick_label(bottom),
                top_generator: Some(pick_label(top)),
            });
        }
    }
    for d in 0..degrees {
        for (i, g) in complex.generators[d].iter().enumerate() {
            if !used[d][i] {
                summands.push(Summand {
                    kind: SummandKind::Free,
                    q: g.weight,
                    p: g.weight + d as u32,
                    generator: pick_label(g),
                    top_generator: None,
                });
            }
        }
    }
    summands.sort_by(|a, b| {
        (a.q, a.p, &a.generator).cmp(&(b.q, b.p, &b.generator))
    });
    Ok(DecompositionReport { summands, motivic_cells: motivic_cells(complex) })
}

fn pick_label(g: &Generator) -> String {
    match g.facet {
        Some(f) => face_name(f),
        None => g.label.clone(),
    }
}

fn motivic_cells(complex: &MwChainComplex) -> Vec<(u32, u32, String)> {
    let mut cells = Vec::new();
    for (d, gens) in complex.generators.iter().enumerate() {
        for g in gens {
            cells.push((g.weight, g.weight + d as u32, pick_label(g)));
        }
    }
    cells.sort();
    cells
}

/// Decomposition for a complex whose differentials all vanish: one free
/// summand per generator with the general (q, p) bookkeeping.
pub fn decompose_zero_differential(
    complex: &MwChainComplex,
) -> Result<DecompositionReport, CellularError> {
    if complex.differentials.iter().any(|m| !m.is_zero()) {
        return Err(CellularError::NotEtaGraded(
            "reduced complex still has nonzero differentials".into(),
        ));
    }
    let mut summands = Vec::new();
    for (d, gens) in complex.generators.iter().enumerate() {
        for g in gens {
            summands.push(Summand {
                kind: SummandKind::Free,
                q: g.weight,
                p: g.weight + d as u32,
                generator: pick_label(g),
                top_generator: None,
            });
        }
    }
    summands.sort_by(|a, b| (a.q, a.p, &a.generator).cmp(&(b.q, b.p, &b.generator)));
    Ok(DecompositionReport { summands, motivic_cells: motivic_cells(complex) })
}

/// One homology sheaf term with an optional Milnor K-theory alias.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafTerm {
    pub label: String,
    pub alias: Option<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct HomologySheafReport {
    /// degrees[i]: terms of H_i, sorted by label.
    pub degrees: Vec<Vec<SheafTerm>>,
}

fn weight_label(q: u32) -> String {
    if q == 0 { "Z".into() } else { format!("K^MW_{q}") }
}

/// Homology sheaves from a decomposition, using the cone calculus: a free
/// summand at q contributes K^MW_q in degree q; the cone of l*eta contributes
/// the l*eta quotient in degree q and the l*eta torsion in degree q+1.
pub fn homology_sheaves(report: &DecompositionReport) -> HomologySheafReport {
    let mut by_degree: BTreeMap<usize, BTreeMap<(String, Option<String>), usize>> = BTreeMap::new();
    let mut add = |i: usize, label: String, alias: Option<String>| {
        *by_degree.entry(i).or_default().entry((label, alias)).or_insert(0) += 1;
    };
    for s in &report.summands {
        match &s.kind {
            SummandKind::Free => add(s.q as usize, weight_label(s.q), None),
            SummandKind::ConeOfLEta { l } => {
                if l.is_one() {
                    add(
                        s.q as usize,
                        format!("K^MW_{}/η", s.q),
                        Some(format!("K^M_{}", s.q)),
                    );
                    add(
                        s.q as usize + 1,
                        format!("_{{η}}K^MW_{}", s.q + 1),
                        Some(format!("2K^M_{}", s.q + 1)),
                    );
                } else {
                    add(s.q as usize, format!("K^MW_{}/{}η", s.q, l), None);
                    add(s.q as usize + 1, format!("_{{{}η}}K^MW_{}", l, s.q + 1), None);
                }
            }
        }
    }
    let top = by_degree.keys().max().cloned().unwrap_or(0);
    let mut degrees = vec![Vec::new(); top + 1];
    for (i, terms) in by_degree {
        let mut list: Vec<SheafTerm> = terms
            .into_iter()
            .map(|((label, alias), multiplicity)| SheafTerm { label, alias, multiplicity })
            .collect();
        list.sort_by(|a, b| a.label.cmp(&b.label));
        degrees[i] = list;
    }
    HomologySheafReport { degrees }
}

/// Motive reports rendered as sorted summand strings.
#[derive(Clone, Debug)]
pub struct MotiveReports {
    pub motivic: Vec<String>,
    pub mw_motivic: Vec<String>,
    pub eta_inverted: Vec<String>,
    pub rational: Vec<String>,
}

pub fn motive_reports(report: &DecompositionReport) -> MotiveReports {
    let mut motivic: Vec<String> =
        report.motivic_cells.iter().map(|(q, p, _)| format!("Z({q})[{p}]")).collect();
    let mut rational: Vec<String> =
        report.motivic_cells.iter().map(|(q, p, _)| format!("Q({q})[{p}]")).collect();
    let mut mw = Vec::new();
    let mut eta_inv = Vec::new();
    for s in &report.summands {
        match &s.kind {
            SummandKind::Free => {
                mw.push(format!("Z~({})[{}]", s.q, s.p));
                eta_inv.push(format!("Z~({})[{}]", s.q, s.p));
            }
            SummandKind::ConeOfLEta { l } => {
                mw.push(format!("Z~({})[{}]//{}·η", s.q, s.p, l));
                if !l.is_one() {
                    eta_inv.push(format!("Z~({})[{}]//{}", s.q, s.p, l));
                }
            }
        }
    }
    motivic.sort();
    rational.sort();
    mw.sort();
    eta_inv.sort();
    MotiveReports { motivic, mw_motivic: mw, eta_inverted: eta_inv, rational }
}

/// Chow basis: the disjoint union of min(sigma) over facets.
#[derive(Clone, Debug)]
pub struct ChowGenerator {
    pub tau: VertexSet,
    pub codim: u32,
    pub parent_facet: VertexSet,
}

#[derive(Clone, Debug)]
pub struct ChowBasis {
    pub generators: Vec<ChowGenerator>,
    /// ranks[k] = rank of CH^k for k = 0..=n.
    pub ranks: Vec<usize>,
}

pub fn chow_basis(fan: &Fan) -> ChowBasis {
    let data = fan.restriction_data();
    let mut generators = Vec::new();
    for (i, mins) in data.min_sets.iter().enumerate() {
        for &tau in mins {
            generators.push(ChowGenerator {
                tau,
                codim: tau.count_ones(),
                parent_facet: data.order.sequence[i],
            });
        }
    }
    generators.sort_by_key(|g| (g.codim, g.tau));
    let mut ranks = vec![0usize; fan.n() + 1];
    for g in &generators {
        if (g.codim as usize) < ranks.len() {
            ranks[g.codim as usize] += 1;
        }
    }
    ChowBasis { generators, ranks }
}

/// Chow-Witt group label of one cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowWittGroup {
    pub gw_rank: usize,
    pub two_z_rank: usize,
    pub z_rank: usize,
}

impl fmt::Display for ChowWittGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for _ in 0..self.two_z_rank {
            parts.push("2Z".to_string());
        }
        match self.gw_rank {
            0 => {}
            1 => parts.push("GW".into()),
            k => parts.push(format!("GW^{k}")),
        }
        match self.z_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Complete-surface report: closed-form reduced complex, Chow-Witt table,
/// decomposition and motive reports.
#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub rays: usize,
    pub a_values: Vec<i128>,
    pub a_sigma: i128,
    pub complex: MwChainComplex,
    pub decomposition: DecompositionReport,
    pub homology: HomologySheafReport,
    pub motives: MotiveReports,
    pub chow_witt: Vec<ChowWittGroup>,
    /// Orientation-change matrices d(a_i) rendered per ray.
    pub orientation_changes: Vec<[String; 2]>,
}

pub fn surface_report(fan: &Fan) -> Result<SurfaceReport, CellularError> {
    if fan.n() != 2 {
        return Err(CellularError::Fan(FanError::Input("surface report needs n = 2".into())));
    }
    let s: SurfaceData = surface_data(fan)?;
    if !s.complete {
        return Err(CellularError::NotComplete);
    }
    let l = fan.m();
    let a_values: Vec<i128> = s.self_intersections.iter().map(|a| a.unwrap()).collect();
    let a_sigma = s.a_sigma.unwrap_or(0);
    if l % 2 == 1 && a_sigma % 2 == 0 {
        return Err(CellularError::SurfaceParity(format!(
            "odd ray count {l} forces odd a_sigma, got {a_sigma}"
        )));
    }

    // Reduced complex K^MW_2 --(a_sigma)_eps eta--> K^MW_1^(l-2) --0--> Z.
    let mut generators = vec![Vec::new(), Vec::new(), Vec::new()];
    generators[0].push(Generator {
        label: "e^∅_∅".into(),
        weight: 0,
        sigma: 0,
        omega: 0,
        facet: None,
    });
    for k in 0..l - 2 {
        generators[1].push(Generator {
            label: format!("K^MW_1({})", k + 1),
            weight: 1,
            sigma: 0,
            omega: 0,
            facet: None,
        });
    }
    generators[2].push(Generator {
        label: "K^MW_2".into(),
        weight: 2,
        sigma: 0,
        omega: 0,
        facet: None,
    });
    let mut d1 = MwMatrix::zeros(1, l - 2);
    for c in 0..l - 2 {
        d1.set(0, c, MwConstant::zero(1));
    }
    let mut d2 = MwMatrix::zeros(l - 2, 1);
    for r in 0..l - 2 {
        d2.set(r, 0, MwConstant::zero(1));
    }
    d2.set(0, 0, MwConstant::eta_power(1, crate::mwring::chi(a_sigma)));
    let complex = MwChainComplex {
        generators,
        differentials: vec![MwMatrix::zeros(0, 1), d1, d2],
    };
    let decomposition = decompose(&complex)?;
    let homology = homology_sheaves(&decomposition);
    let motives = motive_reports(&decomposition);

    let odd = a_sigma.rem_euclid(2) == 1;
    let chow_witt = vec![
        ChowWittGroup { gw_rank: 1, two_z_rank: 0, z_rank: 0 },
        if odd {
            ChowWittGroup { gw_rank: l - 3, two_z_rank: 1, z_rank: 0 }
        } else {
            ChowWittGroup { gw_rank: l - 2, two_z_rank: 0, z_rank: 0 }
        },
        if odd {
            ChowWittGroup { gw_rank: 0, two_z_rank: 0, z_rank: 1 }
        } else {
            ChowWittGroup { gw_rank: 1, two_z_rank: 0, z_rank: 0 }
        },
    ];
    let orientation_changes = a_values
        .iter()
        .map(|&a| {
            let bra = MwConstant::bra_minus_one_pow(a);
            let twist = mw_mul(crate::mwring::n_epsilon(a), MwConstant::eta());
            [bra.to_string(), twist.to_string()]
        })
        .collect();
    Ok(SurfaceReport {
        rays: l,
        a_values,
        a_sigma,
        complex,
        decomposition,
        homology,
        motives,
        chow_witt,
        orientation_changes,
    })
}

/// Decomposition driver for any smooth fan: the shellable pathway when the
/// order shells, otherwise the canonical complex reduced by units (which must
/// come out eta-gradable or with zero differentials).
pub fn decomposition_for(fan: &Fan) -> Result<DecompositionReport, CellularError> {
    let report = validate(fan);
    let shellable = report.pure
        && matches!(is_shelling(&fan.complex, &fan.order), Ok(true));
    if shellable {
        return decompose(&lambda_complex(fan)?);
    }
    let canonical = canonical_complex(fan)?;
    if canonical.is_eta_graded() {
        return decompose(&canonical);
    }
    let reduced = reduce_by_units(&canonical);
    if reduced.differentials.iter().all(|m| m.is_zero()) {
        decompose_zero_differential(&reduced)
    } else if reduced.is_eta_graded() {
        decompose(&reduced)
    } else {
        Err(CellularError::NotEtaGraded(
            "canonical pathway did not reduce to an eta-graded or split complex".into(),
        ))
    }
}
