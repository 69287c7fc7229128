//! Fan data (K, lambda), smoothness validation, row sets, canonical
//! transforms, chart transition sections, surface self-intersection data and
//! the builtin example fans.

use crate::intlin::{is_lattice_basis_part, smith_normal_form, solve_integer, IntMatrix};
use crate::mwring::{CubicalCell, SectionMatrix};
use crate::simplicial::{
    build_complex, face_name, restriction_data, vertex_list, FacetOrder, RestrictionData,
    SimplicialComplex, VertexSet,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanError {
    Validation(String),
    Input(String),
    Internal(String),
}

impl fmt::Display for FanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanError::Validation(msg) => write!(f, "validation: {msg}"),
            FanError::Input(msg) => write!(f, "input: {msg}"),
            FanError::Internal(msg) => write!(f, "internal: {msg}"),
        }
    }
}

impl std::error::Error for FanError {}

/// A fan: simplicial complex K on m vertices, characteristic matrix lambda
/// with column j = lambda(v_j), and a facet order.
#[derive(Clone, Debug)]
pub struct Fan {
    pub complex: SimplicialComplex,
    pub lambda: IntMatrix,
    pub order: FacetOrder,
}

impl Fan {
    pub fn n(&self) -> usize {
        self.lambda.rows
    }

    pub fn m(&self) -> usize {
        self.lambda.cols
    }

    pub fn new(
        complex: SimplicialComplex,
        lambda: IntMatrix,
        order: Option<FacetOrder>,
    ) -> Result<Fan, FanError> {
        if lambda.cols != complex.m {
            return Err(FanError::Input(format!(
                "lambda has {} columns but the complex has {} vertices",
                lambda.cols, complex.m
            )));
        }
        let order = order.unwrap_or_else(|| FacetOrder::of(&complex));
        if !order.covers(&complex) {
            return Err(FanError::Input("order does not cover the facet set".into()));
        }
        Ok(Fan { complex, lambda, order })
    }

    pub fn ray(&self, j: usize) -> Vec<BigInt> {
        self.lambda.column(j)
    }

    /// Columns of lambda selected by a vertex mask, ascending.
    pub fn lambda_on(&self, mask: VertexSet) -> IntMatrix {
        let cols = vertex_list(mask);
        self.lambda.submatrix(&(0..self.n()).collect::<Vec<_>>(), &cols)
    }

    pub fn restriction_data(&self) -> RestrictionData {
        restriction_data(&self.complex, &self.order).expect("order covers facets by construction")
    }
}

/// Validation report; failures are listed, not thrown.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub smooth: bool,
    pub surjective: bool,
    pub pure: bool,
    pub more_rays_than_dim: bool,
    pub complete_surface: Option<bool>,
    pub cone_failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok_for_cellular(&self) -> bool {
        self.smooth && self.surjective && self.more_rays_than_dim
    }
}

pub fn validate(fan: &Fan) -> ValidationReport {
    let mut report = ValidationReport {
        pure: fan.complex.is_pure() && fan.complex.facet_dim() as usize == fan.n(),
        more_rays_than_dim: fan.m() > fan.n(),
        ..ValidationReport::default()
    };
    let snf = smith_normal_form(&fan.lambda);
    report.surjective = snf.rank() == fan.n() && snf.diagonal.iter().all(|d| d.is_one() || d.is_zero())
        && snf.diagonal.iter().filter(|d| d.is_one()).count() == fan.n();
    report.smooth = true;
    for &facet in &fan.complex.facets {
        if !is_lattice_basis_part(&fan.lambda_on(facet)) {
            report.smooth = false;
            report.cone_failures.push(face_name(facet));
        }
    }
    if fan.n() == 2 {
        report.complete_surface = Some(surface_data(fan).is_ok_and(|s| s.complete));
    }
    report
}

/// All 2^n row sets omega_kappa together with the per-facet assignment.
#[derive(Clone, Debug)]
pub struct RowSetTable {
    /// (kappa bits, omega mask) for every kappa in F_2^n, kappa ascending.
    pub rows: Vec<(u64, VertexSet)>,
    /// For each facet (in order position), the unique omega with
    /// r(sigma) = sigma ∩ omega. Only full-dimensional facets admit a unique
    /// assignment; smaller facets carry None.
    pub facet_assignment: Vec<Option<VertexSet>>,
}

pub fn row_sets(fan: &Fan) -> Result<RowSetTable, FanError> {
    let n = fan.n();
    let m = fan.m();
    let mut rows = Vec::with_capacity(1 << n);
    for kappa in 0..(1u64 << n) {
        let mut omega: VertexSet = 0;
        for j in 0..m {
            let mut s = BigInt::zero();
            for i in 0..n {
                if kappa >> i & 1 == 1 {
                    s += fan.lambda.get(i, j);
                }
            }
            if !s.mod_floor_two().is_zero() {
                omega |= 1 << j;
            }
        }
        rows.push((kappa, omega));
    }
    let data = fan.restriction_data();
    let mut facet_assignment = Vec::with_capacity(data.order.sequence.len());
    for (i, &sigma) in data.order.sequence.iter().enumerate() {
        let r = data.restrictions[i];
        let matches: Vec<VertexSet> =
            rows.iter().filter(|(_, w)| sigma & w == r).map(|(_, w)| *w).collect();
        if sigma.count_ones() as usize == n {
            match matches.len() {
                1 => facet_assignment.push(Some(matches[0])),
                0 => {
                    return Err(FanError::Internal(format!(
                        "no row set realizes r({}) = {}",
                        face_name(sigma),
                        face_name(r)
                    )))
                }
                _ => {
                    return Err(FanError::Internal(format!(
                        "row set for facet {} is not unique",
                        face_name(sigma)
                    )))
                }
            }
        } else {
            facet_assignment.push(None);
        }
    }
    Ok(RowSetTable { rows, facet_assignment })
}

trait ModTwo {
    fn mod_floor_two(&self) -> BigInt;
}

impl ModTwo for BigInt {
    fn mod_floor_two(&self) -> BigInt {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(2))
    }
}

/// Canonical transform of a cell: the unique kernel-valued section with the
/// fixed columns of the definition. Rows are indexed by tau_star, columns by
/// the full vertex set.
#[derive(Clone, Debug)]
pub struct CanonicalTransform {
    pub cell: CubicalCell,
    pub section: SectionMatrix,
}

/// Frame of a cone: f(sigma) extended to n columns forming a lattice basis.
/// For pure smooth fans this is f(sigma) itself.
pub fn frame(fan: &Fan, f_sigma: VertexSet) -> Result<VertexSet, FanError> {
    let n = fan.n();
    if f_sigma.count_ones() as usize == n {
        return Ok(f_sigma);
    }
    let mut frame = f_sigma;
    for j in 0..fan.m() {
        if frame.count_ones() as usize == n {
            break;
        }
        if frame >> j & 1 == 1 {
            continue;
        }
        let cand = frame | 1 << j;
        if is_lattice_basis_part(&fan.lambda_on(cand)) {
            frame = cand;
        }
    }
    if frame.count_ones() as usize != n {
        return Err(FanError::Internal(format!(
            "cannot extend chart {} to a lattice basis from the ray set",
            face_name(f_sigma)
        )));
    }
    Ok(frame)
}

/// Canonical transform T_e relative to a frame F containing f(sigma_e):
/// rows vanish on tau_one \ F, carry -delta on tau_star \ F, and the F
/// columns are solved uniquely so each row lies in ker lambda.
pub fn canonical_transform(
    fan: &Fan,
    e: &CubicalCell,
    frame_mask: VertexSet,
) -> Result<CanonicalTransform, FanError> {
    let m = fan.m();
    let rows = vertex_list(e.tau_star);
    let cols: Vec<usize> = (0..m).collect();
    let mut section = SectionMatrix::zeros(rows.clone(), cols);
    let frame_cols = vertex_list(frame_mask);
    let basis = fan.lambda_on(frame_mask);
    for &i in &rows {
        if frame_mask >> i & 1 == 1 {
            continue; // row of a frame coordinate is identically zero
        }
        section.set(i, i, -1);
        let target = fan.ray(i);
        let sol = solve_integer(&basis, &target)
            .map_err(|e| FanError::Internal(e.to_string()))?
            .ok_or_else(|| {
                FanError::Internal(format!(
                    "no integer solution expanding ray {} over frame {}",
                    i + 1,
                    face_name(frame_mask)
                ))
            })?;
        for (k, &j) in frame_cols.iter().enumerate() {
            let v = sol[k]
                .to_i128()
                .ok_or_else(|| FanError::Internal("transform coefficient overflow".into()))?;
            section.set(i, j, v);
        }
    }
    debug_assert!(rows.iter().all(|&i| {
        let mut acc = vec![BigInt::zero(); fan.n()];
        for j in 0..m {
            let c = section.get(i, j);
            if c != 0 {
                for (t, a) in acc.iter_mut().zip(fan.ray(j)) {
                    *t += BigInt::from(c) * a;
                }
            }
        }
        acc.iter().all(|x| x.is_zero())
    }), "canonical transform row escapes ker lambda");
    Ok(CanonicalTransform { cell: *e, section })
}

/// Chart transition between two facet charts sharing a cone: the full
/// integer exponent matrix, rows over the target chart, columns over the
/// source chart, with c^from_j = prod_b (c^to_b)^(E[b][j]).
#[derive(Clone, Debug)]
pub struct TransitionSection {
    pub cone: VertexSet,
    pub from: VertexSet,
    pub to: VertexSet,
    /// exponents[b][a] over to-rows and from-columns, both ascending.
    pub exponents: IntMatrix,
}

impl TransitionSection {
    /// Cocycle composition: (A -> B) then (B -> C) equals (A -> C) at the
    /// level of exponent matrices.
    pub fn compose(&self, next: &TransitionSection) -> Result<TransitionSection, FanError> {
        if self.to != next.from || self.cone != next.cone {
            return Err(FanError::Input("transition charts do not chain".into()));
        }
        Ok(TransitionSection {
            cone: self.cone,
            from: self.from,
            to: next.to,
            exponents: next.exponents.mul(&self.exponents),
        })
    }

    /// Section matrix minus the identity: the zero matrix on from == to.
    pub fn section_offset(&self) -> IntMatrix {
        let mut out = self.exponents.clone();
        let from = vertex_list(self.from);
        let to = vertex_list(self.to);
        for (r, &b) in to.iter().enumerate() {
            for (c, &a) in from.iter().enumerate() {
                if a == b {
                    let v = out.get(r, c) - BigInt::one();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// The twist exponents rewritten in the torus coordinates of the from
    /// chart: rows over from \ cone, columns over from, zero outside cone
    /// columns. This is the group section fed to the cell action.
    pub fn twist_in_from_coordinates(&self) -> Result<SectionMatrix, FanError> {
        let from = vertex_list(self.from);
        let to = vertex_list(self.to);
        let torus_from: Vec<usize> =
            from.iter().cloned().filter(|&a| self.cone >> a & 1 == 0).collect();
        let torus_to: Vec<usize> =
            to.iter().cloned().filter(|&b| self.cone >> b & 1 == 0).collect();
        let affine: Vec<usize> = vertex_list(self.cone);
        // torus block T[b][i] and twist block E[b][j in cone]
        let pos_to: Vec<usize> =
            torus_to.iter().map(|b| to.iter().position(|x| x == b).unwrap()).collect();
        let pos_from_torus: Vec<usize> =
            torus_from.iter().map(|a| from.iter().position(|x| x == a).unwrap()).collect();
        let pos_from_affine: Vec<usize> =
            affine.iter().map(|a| from.iter().position(|x| x == a).unwrap()).collect();
        let t_block = self.exponents.submatrix(&pos_to, &pos_from_torus);
        let twist_block = self.exponents.submatrix(&pos_to, &pos_from_affine);
        // invert the unimodular torus block by solving columnwise
        let k = torus_from.len();
        let mut result = SectionMatrix::zeros(torus_from.clone(), from.clone());
        for (cj, &j) in affine.iter().enumerate() {
            let col = twist_block.column(cj);
            let sol = solve_integer(&t_block, &col)
                .map_err(|e| FanError::Internal(e.to_string()))?
                .ok_or_else(|| FanError::Internal("torus block is not unimodular".into()))?;
            for idx in 0..k {
                let v = sol[idx]
                    .to_i128()
                    .ok_or_else(|| FanError::Internal("twist exponent overflow".into()))?;
                result.set(torus_from[idx], j, v);
            }
        }
        Ok(result)
    }
}

/// Exponent matrix of the monomial coordinate change from the `from` chart
/// into the `to` chart, restricted over the shared cone. Column a solves
/// lambda(v_b) over the from-basis: E[b][a] is the coefficient of
/// lambda(v_a).
pub fn transition_section(
    fan: &Fan,
    cone: VertexSet,
    from: VertexSet,
    to: VertexSet,
) -> Result<TransitionSection, FanError> {
    if cone & !from != 0 || cone & !to != 0 {
        return Err(FanError::Input("cone is not shared by both charts".into()));
    }
    if !fan.complex.contains(from) || !fan.complex.contains(to) {
        return Err(FanError::Input("charts must be faces of the complex".into()));
    }
    let from_cols = vertex_list(from);
    let to_rows = vertex_list(to);
    let basis = fan.lambda_on(from);
    let mut exponents = IntMatrix::zeros(to_rows.len(), from_cols.len());
    for (r, &b) in to_rows.iter().enumerate() {
        let sol = solve_integer(&basis, &fan.ray(b))
            .map_err(|e| FanError::Internal(e.to_string()))?
            .ok_or_else(|| {
                FanError::Internal(format!(
                    "ray {} does not expand over chart {}",
                    b + 1,
                    face_name(from)
                ))
            })?;
        for c in 0..from_cols.len() {
            exponents.set(r, c, sol[c].clone());
        }
    }
    Ok(TransitionSection { cone, from, to, exponents })
}

/// Self-intersection data of a 2-dimensional fan.
#[derive(Clone, Debug)]
pub struct SurfaceData {
    /// Ray indices in counterclockwise cyclic order.
    pub cyclic_rays: Vec<usize>,
    /// a_i for each interior position (all of them when complete), with
    /// v_{i-1} + v_{i+1} = a_i v_i. None for boundary rays of a fan that is
    /// not complete.
    pub self_intersections: Vec<Option<i128>>,
    pub a_sigma: Option<i128>,
    pub complete: bool,
}

fn cross(u: &[BigInt], v: &[BigInt]) -> BigInt {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Quadrant-based exact counterclockwise comparison starting from the
/// positive x-axis.
fn angle_class(v: &[BigInt]) -> u8 {
    let x = &v[0];
    let y = &v[1];
    if y.is_zero() {
        return if x.is_positive() { 0 } else { 4 };
    }
    if y.is_positive() {
        if x.is_positive() {
            1
        } else if x.is_zero() {
            2
        } else {
            3
        }
    } else if x.is_negative() {
        5
    } else if x.is_zero() {
        6
    } else {
        7
    }
}

pub fn surface_data(fan: &Fan) -> Result<SurfaceData, FanError> {
    if fan.n() != 2 {
        return Err(FanError::Input("surface data requires a 2-dimensional fan".into()));
    }
    let m = fan.m();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| {
        let va = fan.ray(a);
        let vb = fan.ray(b);
        let ca = angle_class(&va);
        let cb = angle_class(&vb);
        ca.cmp(&cb).then_with(|| {
            // same open quadrant: counterclockwise iff cross > 0
            let c = cross(&va, &vb);
            if c.is_positive() {
                std::cmp::Ordering::Less
            } else if c.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    let adjacent_is_cone = |a: usize, b: usize| -> bool {
        fan.complex.contains(1u64 << a | 1u64 << b)
    };
    let complete = m >= 3 && (0..m).all(|i| adjacent_is_cone(idx[i], idx[(i + 1) % m]));
    let mut self_intersections = vec![None; m];
    for i in 0..m {
        let prev = idx[(i + m - 1) % m];
        let cur = idx[i];
        let next = idx[(i + 1) % m];
        let has_prev = adjacent_is_cone(prev, cur);
        let has_next = adjacent_is_cone(cur, next);
        if !(has_prev && has_next) {
            continue;
        }
        let vp = fan.ray(prev);
        let vc = fan.ray(cur);
        let vn = fan.ray(next);
        let det = cross(&vc, &vn);
        if det.abs() != BigInt::one() {
            return Err(FanError::Validation(format!(
                "adjacent rays {} and {} do not span the lattice",
                cur + 1,
                next + 1
            )));
        }
        // self-intersection: a_i v_i + v_{i-1} + v_{i+1} = 0 exactly
        let a = -cross(&vp, &vn) / &det;
        for k in 0..2 {
            let lhs = &vp[k] + &vn[k] + &a * &vc[k];
            if !lhs.is_zero() {
                return Err(FanError::Validation(format!(
                    "rays around {} violate the wheel relation",
                    cur + 1
                )));
            }
        }
        self_intersections[i] =
            Some(a.to_i128().ok_or_else(|| FanError::Internal("a_i overflow".into()))?);
    }
    let known: Vec<i128> = self_intersections.iter().flatten().cloned().collect();
    let a_sigma = if known.is_empty() {
        None
    } else {
        Some(known.iter().fold(0i128, |g, &a| gcd_i128(g, a)))
    };
    Ok(SurfaceData { cyclic_rays: idx, self_intersections, a_sigma, complete })
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Builtin example fans. The parameter is the dimension for
/// projective_space, the twist for hirzebruch, and a semicolon-separated ray
/// list "x,y;x,y;..." for surface_from_rays.
pub fn builtin(name: &str, param: Option<&str>) -> Result<Fan, FanError> {
    let int_param = |what: &str| -> Result<i64, FanError> {
        param
            .ok_or_else(|| FanError::Input(format!("{name} needs {what}")))?
            .parse::<i64>()
            .map_err(|_| FanError::Input(format!("{name}: {what} must be an integer")))
    };
    match name {
        "projective_space" => {
            let n = int_param("a dimension n")?;
            if !(1..=16).contains(&n) {
                return Err(FanError::Input("projective_space dimension out of range".into()));
            }
            projective_space(n as usize)
        }
        "hirzebruch" => hirzebruch(int_param("a parameter a")?),
        "surface_from_rays" => {
            let list = param
                .ok_or_else(|| FanError::Input("surface_from_rays needs a ray list".into()))?;
            let mut rays = Vec::new();
            for part in list.split(';') {
                let coords: Vec<&str> = part.split(',').map(str::trim).collect();
                if coords.len() != 2 {
                    return Err(FanError::Input(format!("bad ray '{part}', expected x,y")));
                }
                let x = coords[0]
                    .parse::<i64>()
                    .map_err(|_| FanError::Input(format!("bad ray coordinate '{}'", coords[0])))?;
                let y = coords[1]
                    .parse::<i64>()
                    .map_err(|_| FanError::Input(format!("bad ray coordinate '{}'", coords[1])))?;
                rays.push((x, y));
            }
            surface_from_rays(&rays)
        }
        "exotic_nonshellable" => exotic(vec![vec![0, 1], vec![2, 3]]),
        "exotic_nonpure" => exotic(vec![vec![0, 1], vec![1, 2], vec![3]]),
        other => Err(FanError::Input(format!("unknown builtin fan: {other}"))),
    }
}

pub fn projective_space(n: usize) -> Result<Fan, FanError> {
    let m = n + 1;
    let mut lambda = IntMatrix::zeros(n, m);
    for i in 0..n {
        lambda.set(i, i, BigInt::one());
        lambda.set(i, n, BigInt::from(-1));
    }
    // facets: all n-subsets of the m vertices, lexicographic
    let mut facets = Vec::new();
    for excluded in (0..m).rev() {
        let verts: Vec<usize> = (0..m).filter(|&v| v != excluded).collect();
        facets.push(verts);
    }
    facets.sort();
    let complex = build_complex(m, &facets).map_err(|e| FanError::Input(e.to_string()))?;
    Fan::new(complex, lambda, None)
}

pub fn hirzebruch(a: i64) -> Result<Fan, FanError> {
    let lambda = IntMatrix::from_rows_i64(&[vec![0, 1, 0, -1], vec![1, 0, -1, a]]);
    let complex = build_complex(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
        .map_err(|e| FanError::Input(e.to_string()))?;
    let order = FacetOrder {
        sequence: vec![0b0011, 0b0110, 0b1100, 0b1001],
    };
    Fan::new(complex, lambda, Some(order))
}

fn exotic(facets: Vec<Vec<usize>>) -> Result<Fan, FanError> {
    let lambda = IntMatrix::from_rows_i64(&[vec![0, 1, 0, -1], vec![1, 0, -1, 0]]);
    let complex = build_complex(4, &facets).map_err(|e| FanError::Input(e.to_string()))?;
    Fan::new(complex, lambda, None)
}

/// Complete smooth surface fan from a counterclockwise ray list; cones are
/// the adjacent pairs.
pub fn surface_from_rays(rays: &[(i64, i64)]) -> Result<Fan, FanError> {
    let m = rays.len();
    if m < 3 {
        return Err(FanError::Input("a complete surface fan needs at least 3 rays".into()));
    }
    let mut lambda = IntMatrix::zeros(2, m);
    for (j, &(x, y)) in rays.iter().enumerate() {
        lambda.set(0, j, BigInt::from(x));
        lambda.set(1, j, BigInt::from(y));
    }
    let mut facets = Vec::new();
    for j in 0..m {
        facets.push(vec![j, (j + 1) % m]);
    }
    let complex = build_complex(m, &facets).map_err(|e| FanError::Input(e.to_string()))?;
    let order = FacetOrder {
        sequence: (0..m).map(|j| 1u64 << j | 1u64 << ((j + 1) % m)).collect(),
    };
    Fan::new(complex, lambda, Some(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mwring::{sigma_action, MwConstant};

    fn mask(verts_1based: &[usize]) -> VertexSet {
        verts_1based.iter().fold(0, |a, &v| a | 1 << (v - 1))
    }

    #[test]
    fn validate_p2() {
        let fan = projective_space(2).unwrap();
        let report = validate(&fan);
        assert!(report.smooth);
        assert!(report.surjective);
        assert!(report.pure);
        assert!(report.more_rays_than_dim);
        assert_eq!(report.complete_surface, Some(true));
    }

    #[test]
    fn validate_flags_singular_cone() {
        let lambda = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 1]]);
        let complex = build_complex(2, &[vec![0], vec![1]]).unwrap();
        let fan = Fan::new(complex, lambda, None).unwrap();
        let report = validate(&fan);
        assert!(!report.smooth);
        assert_eq!(report.cone_failures, vec!["1".to_string()]);
    }

    #[test]
    fn validate_hirzebruch_all_a() {
        for a in -3..=3 {
            let fan = hirzebruch(a).unwrap();
            let report = validate(&fan);
            assert!(report.smooth && report.surjective && report.pure, "a = {a}");
        }
    }

    #[test]
    fn row_sets_hirzebruch() {
        let odd = row_sets(&hirzebruch(1).unwrap()).unwrap();
        let got: Vec<VertexSet> = odd.rows.iter().map(|&(_, w)| w).collect();
        let expect = [0, mask(&[1, 3, 4]), mask(&[2, 4]), mask(&[1, 2, 3])];
        for w in expect {
            assert!(got.contains(&w), "missing omega {w:#b} in odd case");
        }
        let even = row_sets(&hirzebruch(2).unwrap()).unwrap();
        let got: Vec<VertexSet> = even.rows.iter().map(|&(_, w)| w).collect();
        let expect = [0, mask(&[1, 3]), mask(&[2, 4]), mask(&[1, 2, 3, 4])];
        for w in expect {
            assert!(got.contains(&w), "missing omega {w:#b} in even case");
        }
    }

    #[test]
    fn row_sets_per_facet_unique() {
        let fan = hirzebruch(1).unwrap();
        let table = row_sets(&fan).unwrap();
        let data = fan.restriction_data();
        for (i, assignment) in table.facet_assignment.iter().enumerate() {
            let w = assignment.expect("full-dimensional facet");
            assert_eq!(data.order.sequence[i] & w, data.restrictions[i]);
        }
    }

    #[test]
    fn canonical_transform_p2() {
        let fan = projective_space(2).unwrap();
        // cell with tau_star = {3}, f(sigma_e) = {1,2}: the row solves
        // lambda(v3) = -lambda(v1) - lambda(v2).
        let e = CubicalCell::new(0, 0, mask(&[3]));
        let t = canonical_transform(&fan, &e, mask(&[1, 2])).unwrap();
        assert_eq!(t.section.get(2, 0), -1);
        assert_eq!(t.section.get(2, 1), -1);
        assert_eq!(t.section.get(2, 2), -1);
    }

    #[test]
    fn canonical_transform_identity_for_canonical_cell() {
        let fan = projective_space(2).unwrap();
        let e = CubicalCell::new(mask(&[1]), mask(&[3]), mask(&[2]));
        // tau_star inside the frame: zero rows
        let t = canonical_transform(&fan, &e, mask(&[1, 2])).unwrap();
        assert!(t.section.is_zero());
    }

    #[test]
    fn canonical_transform_hirzebruch_row() {
        for a in 0..4 {
            let fan = hirzebruch(a).unwrap();
            let e = CubicalCell::new(0, mask(&[2]), mask(&[1]));
            let t = canonical_transform(&fan, &e, mask(&[3, 4])).unwrap();
            // lambda(v1) = (0,1) = r13*(0,-1) + r14*(-1,a)
            assert_eq!(t.section.get(0, 0), -1);
            assert_eq!(t.section.get(0, 2), -1);
            assert_eq!(t.section.get(0, 3), 0);
        }
    }

    #[test]
    fn transition_identity_is_zero_offset() {
        let fan = projective_space(2).unwrap();
        let t = transition_section(&fan, mask(&[2]), mask(&[1, 2]), mask(&[1, 2])).unwrap();
        assert!(t.section_offset().is_zero());
    }

    #[test]
    fn transition_p2_reproduces_worked_matrix() {
        // sigma = {2} shared by {1,2} and {2,3}: the twist in from-torus
        // coordinates has exponent 1, so the induced action matrix is
        // [[<-1>, eta], [0, 1]].
        let fan = projective_space(2).unwrap();
        let t = transition_section(&fan, mask(&[2]), mask(&[1, 2]), mask(&[2, 3])).unwrap();
        let twist = t.twist_in_from_coordinates().unwrap();
        assert_eq!(twist.get(0, 1), 1);
        let e = CubicalCell::new(mask(&[2]), 0, mask(&[1]));
        let table = sigma_action(&twist, &e);
        for (omega, coef) in table {
            if omega == mask(&[1]) {
                assert_eq!(coef, MwConstant::bra_minus_one());
            } else {
                assert_eq!(coef, MwConstant::eta());
            }
        }
    }

    #[test]
    fn transition_cocycle() {
        let fan = projective_space(2).unwrap();
        let s = mask(&[2]);
        let ab = transition_section(&fan, s, mask(&[1, 2]), mask(&[2, 3])).unwrap();
        let bc = transition_section(&fan, s, mask(&[2, 3]), mask(&[1, 2])).unwrap();
        let ac = transition_section(&fan, s, mask(&[1, 2]), mask(&[1, 2])).unwrap();
        assert_eq!(ab.compose(&bc).unwrap().exponents, ac.exponents);
    }

    #[test]
    fn transition_surface_exponent_matches_self_intersection() {
        for a in 0..4i64 {
            let fan = hirzebruch(a).unwrap();
            // ray v1 shared by sigma_4 = {4,1} and sigma_1 = {1,2}: twist
            // section exponent is a_1 = a up to sign.
            let t = transition_section(&fan, mask(&[1]), mask(&[1, 4]), mask(&[1, 2])).unwrap();
            let twist = t.twist_in_from_coordinates().unwrap();
            assert_eq!(twist.get(3, 0).abs(), a as i128, "a = {a}");
        }
    }

    #[test]
    fn surface_data_p2() {
        let fan = projective_space(2).unwrap();
        let s = surface_data(&fan).unwrap();
        assert!(s.complete);
        assert_eq!(s.self_intersections.iter().flatten().cloned().collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(s.a_sigma, Some(1));
    }

    #[test]
    fn surface_data_hirzebruch() {
        for a in 0..4i64 {
            let fan = hirzebruch(a).unwrap();
            let s = surface_data(&fan).unwrap();
            let mut values: Vec<i128> = s.self_intersections.iter().flatten().cloned().collect();
            values.sort();
            let mut expect = vec![a as i128, 0, -(a as i128), 0];
            expect.sort();
            assert_eq!(values, expect, "a = {a}");
            assert_eq!(s.a_sigma, Some((a as i128).abs()));
        }
    }

    #[test]
    fn surface_blowup_has_minus_one() {
        // blow up P2 at the first cone: rays e1, e1+e2, e2, -e1-e2
        let fan = surface_from_rays(&[(1, 0), (1, 1), (0, 1), (-1, -1)]).unwrap();
        let s = surface_data(&fan).unwrap();
        assert!(s.complete);
        let a: Vec<i128> = s.self_intersections.iter().flatten().cloned().collect();
        assert!(a.contains(&-1), "exceptional curve must have self-intersection -1");
    }

    #[test]
    fn builtin_names() {
        assert!(builtin("projective_space", Some("2")).is_ok());
        assert!(builtin("hirzebruch", Some("1")).is_ok());
        let ns = builtin("exotic_nonshellable", None).unwrap();
        assert_eq!(ns.complex.facets, vec![mask(&[1, 2]), mask(&[3, 4])]);
        let np = builtin("exotic_nonpure", None).unwrap();
        assert_eq!(np.complex.facets, vec![mask(&[1, 2]), mask(&[2, 3]), mask(&[4])]);
        assert!(builtin("nope", None).is_err());
    }
}
