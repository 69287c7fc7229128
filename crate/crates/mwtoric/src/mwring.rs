//! Graded Milnor-Witt coefficient algebra and the toric-action coefficient
//! calculus: closed-form c(g,e)_omega, its brute-force oracle, the sigma-part
//! action and the canonical projection.
//!
//! Constants live in the three-variant lattice  Z*eta^k | Z + Z*h | Z*[-1]^k
//! which is closed under the relations  h*eta = 0, h*[-1] = 0, h^2 = 2h,
//! eta*[-1] = h - 2.

use std::fmt;

/// Graded Milnor-Witt coefficient in canonical form.
///
/// Degrees: `EtaPower { k, .. }` has degree -k, `GwPart` degree 0,
/// `BracketPower { k, .. }` degree +k. A vanishing leading integer collapses
/// to `Zero` of the same degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MwConstant {
    Zero { degree: i32 },
    /// a * eta^k, k >= 1.
    EtaPower { k: u32, a: i128 },
    /// a + b*h.
    GwPart { a: i128, b: i128 },
    /// a * [-1]^k, k >= 1.
    BracketPower { k: u32, a: i128 },
}

use MwConstant::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MwError {
    DegreeMismatch { left: i32, right: i32 },
    /// The t_e = |omega| closed form divides by 2 and the t_e < |omega| form
    /// by a power of 2; a non-exact division means the formula was fed data
    /// outside its proven domain.
    NonExactDivision,
    BadSection(String),
}

impl fmt::Display for MwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MwError::DegreeMismatch { left, right } => {
                write!(f, "cannot add Milnor-Witt constants of degrees {left} and {right}")
            }
            MwError::NonExactDivision => write!(f, "non-exact division in coefficient closed form"),
            MwError::BadSection(msg) => write!(f, "bad section matrix: {msg}"),
        }
    }
}

impl std::error::Error for MwError {}

impl MwConstant {
    pub fn zero(degree: i32) -> Self {
        Zero { degree }
    }

    pub fn one() -> Self {
        GwPart { a: 1, b: 0 }
    }

    pub fn integer(n: i128) -> Self {
        GwPart { a: n, b: 0 }.normalize()
    }

    /// h = 2 + eta*[-1].
    pub fn h() -> Self {
        GwPart { a: 0, b: 1 }
    }

    /// <-1> = h - 1.
    pub fn bra_minus_one() -> Self {
        GwPart { a: -1, b: 1 }
    }

    /// epsilon = -<-1> = 1 - h.
    pub fn epsilon() -> Self {
        GwPart { a: 1, b: -1 }
    }

    pub fn eta() -> Self {
        EtaPower { k: 1, a: 1 }
    }

    pub fn bracket() -> Self {
        BracketPower { k: 1, a: 1 }
    }

    pub fn eta_power(k: u32, a: i128) -> Self {
        if k == 0 { Self::integer(a) } else { EtaPower { k, a }.normalize() }
    }

    pub fn bracket_power(k: u32, a: i128) -> Self {
        if k == 0 { Self::integer(a) } else { BracketPower { k, a }.normalize() }
    }

    pub fn degree(&self) -> i32 {
        match *self {
            Zero { degree } => degree,
            EtaPower { k, .. } => -(k as i32),
            GwPart { .. } => 0,
            BracketPower { k, .. } => k as i32,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Zero { .. })
    }

    fn normalize(self) -> Self {
        match self {
            EtaPower { k, a: 0 } => Zero { degree: -(k as i32) },
            GwPart { a: 0, b: 0 } => Zero { degree: 0 },
            BracketPower { k, a: 0 } => Zero { degree: k as i32 },
            other => other,
        }
    }

    /// <-1>^n collapses via <-1>^2 = 1.
    pub fn bra_minus_one_pow(n: i128) -> Self {
        if n.rem_euclid(2) == 0 { Self::one() } else { Self::bra_minus_one() }
    }

    pub fn epsilon_pow(n: i128) -> Self {
        if n.rem_euclid(2) == 0 { Self::one() } else { Self::epsilon() }
    }

    /// The "eta = 0, h = 2" integral shadow: GwPart(a,b) -> a + 2b, eta and
    /// [-1] multiples -> 0.
    pub fn rank_shadow(&self) -> i128 {
        match *self {
            GwPart { a, b } => a + 2 * b,
            _ => 0,
        }
    }

    /// Integer multiple of eta when the constant is one, i.e. a*eta^1.
    pub fn as_eta_multiple(&self) -> Option<i128> {
        match *self {
            Zero { .. } => Some(0),
            EtaPower { k: 1, a } => Some(a),
            _ => None,
        }
    }

    /// Units of GW(Z): 1, -1, <-1>, epsilon. All are self-inverse.
    pub fn gw_unit_inverse(&self) -> Option<MwConstant> {
        match *self {
            GwPart { a, b } if (a * (a + 2 * b)).abs() == 1 => Some(*self),
            _ => None,
        }
    }
}

impl fmt::Display for MwConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Zero { .. } => write!(f, "0"),
            EtaPower { k, a } => write!(f, "{a}·η^{k}"),
            GwPart { a, b } => write!(f, "{a} + {b}·h"),
            BracketPower { k, a } => write!(f, "{a}·[-1]^{k}"),
        }
    }
}

/// Addition inside one degree.
pub fn mw_add(x: MwConstant, y: MwConstant) -> Result<MwConstant, MwError> {
    if x.degree() != y.degree() {
        return Err(MwError::DegreeMismatch { left: x.degree(), right: y.degree() });
    }
    let out = match (x, y) {
        (Zero { .. }, other) | (other, Zero { .. }) => other,
        (EtaPower { k, a }, EtaPower { a: a2, .. }) => EtaPower { k, a: a + a2 },
        (GwPart { a, b }, GwPart { a: a2, b: b2 }) => GwPart { a: a + a2, b: b + b2 },
        (BracketPower { k, a }, BracketPower { a: a2, .. }) => BracketPower { k, a: a + a2 },
        _ => unreachable!("equal degrees imply equal variants"),
    };
    Ok(out.normalize())
}

pub fn mw_neg(x: MwConstant) -> MwConstant {
    match x {
        Zero { degree } => Zero { degree },
        EtaPower { k, a } => EtaPower { k, a: -a },
        GwPart { a, b } => GwPart { a: -a, b: -b },
        BracketPower { k, a } => BracketPower { k, a: -a },
    }
}

pub fn mw_sub(x: MwConstant, y: MwConstant) -> Result<MwConstant, MwError> {
    mw_add(x, mw_neg(y))
}

/// Multiplication in the three-variant lattice.
pub fn mw_mul(x: MwConstant, y: MwConstant) -> MwConstant {
    let out = match (x, y) {
        (Zero { degree }, other) | (other, Zero { degree }) => {
            Zero { degree: degree + other.degree() }
        }
        (EtaPower { k, a }, EtaPower { k: k2, a: a2 }) => EtaPower { k: k + k2, a: a * a2 },
        (BracketPower { k, a }, BracketPower { k: k2, a: a2 }) => {
            BracketPower { k: k + k2, a: a * a2 }
        }
        (GwPart { a, b }, GwPart { a: a2, b: b2 }) => {
            GwPart { a: a * a2, b: a * b2 + b * a2 + 2 * b * b2 }
        }
        // h annihilates eta and [-1], so only the integer part acts.
        (GwPart { a, .. }, EtaPower { k, a: a2 }) | (EtaPower { k, a: a2 }, GwPart { a, .. }) => {
            EtaPower { k, a: a * a2 }
        }
        (GwPart { a, .. }, BracketPower { k, a: a2 })
        | (BracketPower { k, a: a2 }, GwPart { a, .. }) => BracketPower { k, a: a * a2 },
        // eta^j * [-1]^k via (eta*[-1])^min = (-2)^(min-1) (h-2).
        (EtaPower { k, a }, BracketPower { k: k2, a: a2 })
        | (BracketPower { k: k2, a: a2 }, EtaPower { k, a }) => {
            let coef = a * a2;
            let min = k.min(k2);
            if k == k2 {
                // (-2)^(k-1) * (h - 2) * coef
                let p = pow_i128(-2, min - 1);
                GwPart { a: -2 * p * coef, b: p * coef }
            } else if k > k2 {
                EtaPower { k: k - k2, a: coef * pow_i128(-2, min) }
            } else {
                BracketPower { k: k2 - k, a: coef * pow_i128(-2, min) }
            }
        }
    };
    out.normalize()
}

fn pow_i128(base: i128, exp: u32) -> i128 {
    base.checked_pow(exp).expect("coefficient overflow")
}

/// n_epsilon = ((n - chi(n))/2) h + chi(n): the endomorphism of weight one
/// induced by the n-th power map.
pub fn n_epsilon(n: i128) -> MwConstant {
    let c = chi(n);
    GwPart { a: c, b: (n - c) / 2 }.normalize()
}

/// Mod-2 character: 0 for even, 1 for odd.
pub fn chi(n: i128) -> i128 {
    n.rem_euclid(2)
}

/// Cubical cell labels over an ambient coordinate set: sigma carries the
/// oriented affine directions, tau_one the coordinates pinned to 1, tau_star
/// the free Gm directions. Stored as bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubicalCell {
    pub sigma: u64,
    pub tau_one: u64,
    pub tau_star: u64,
}

impl CubicalCell {
    pub fn new(sigma: u64, tau_one: u64, tau_star: u64) -> Self {
        debug_assert_eq!(sigma & tau_one, 0);
        debug_assert_eq!(sigma & tau_star, 0);
        debug_assert_eq!(tau_one & tau_star, 0);
        CubicalCell { sigma, tau_one, tau_star }
    }

    pub fn tau(&self) -> u64 {
        self.tau_one | self.tau_star
    }

    /// Twist degree t_e.
    pub fn twist(&self) -> u32 {
        self.tau_star.count_ones()
    }

    pub fn dim(&self) -> u32 {
        self.sigma.count_ones()
    }
}

/// Integer exponent matrix of a group section, rows over tau_star, columns
/// over named ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionMatrix {
    pub row_labels: Vec<usize>,
    pub col_labels: Vec<usize>,
    entries: Vec<i128>,
}

impl SectionMatrix {
    pub fn new(row_labels: Vec<usize>, col_labels: Vec<usize>, entries: Vec<i128>) -> Self {
        assert_eq!(entries.len(), row_labels.len() * col_labels.len());
        SectionMatrix { row_labels, col_labels, entries }
    }

    pub fn zeros(row_labels: Vec<usize>, col_labels: Vec<usize>) -> Self {
        let entries = vec![0; row_labels.len() * col_labels.len()];
        SectionMatrix { row_labels, col_labels, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn row_index(&self, label: usize) -> Option<usize> {
        self.row_labels.iter().position(|&l| l == label)
    }

    fn col_index(&self, label: usize) -> Option<usize> {
        self.col_labels.iter().position(|&l| l == label)
    }

    /// Entry by labels; absent column labels read as zero.
    pub fn get(&self, row_label: usize, col_label: usize) -> i128 {
        let r = self.row_index(row_label).expect("unknown row label");
        match self.col_index(col_label) {
            Some(c) => self.entries[r * self.col_labels.len() + c],
            None => 0,
        }
    }

    pub fn set(&mut self, row_label: usize, col_label: usize, value: i128) {
        let r = self.row_index(row_label).expect("unknown row label");
        let c = self.col_index(col_label).expect("unknown col label");
        self.entries[r * self.col_labels.len() + c] = value;
    }

    /// r'_{ij} = r_{ij} + delta_{ij}.
    pub fn primed(&self, row_label: usize, col_label: usize) -> i128 {
        self.get(row_label, col_label) + if row_label == col_label { 1 } else { 0 }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn subsets(mask: u64) -> Vec<u64> {
    // Enumerates all submasks ascending; the classic (s-1) & mask walk.
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

fn validate_section(r: &SectionMatrix, e: &CubicalCell) -> Result<(), MwError> {
    for i in bits(e.tau_star) {
        if r.row_index(i).is_none() {
            return Err(MwError::BadSection(format!("missing row for tau_star coordinate {i}")));
        }
    }
    Ok(())
}

/// The alternating chi-sum shared by all three closed-form cases:
///   S = sum_{pi <= omega} (-1)^(|omega|-|pi|) prod_{i in tau_star} chi( sum_{j in pi ⊔ sigma} r'_{ij} ).
fn chi_alternating_sum(r: &SectionMatrix, e: &CubicalCell, omega: u64) -> i128 {
    let tau_star = bits(e.tau_star);
    let sigma = bits(e.sigma);
    let omega_size = omega.count_ones();
    let mut total: i128 = 0;
    for pi in subsets(omega) {
        let sign = if (omega_size - pi.count_ones()) % 2 == 0 { 1 } else { -1 };
        let mut prod: i128 = 1;
        for &i in &tau_star {
            let mut s: i128 = 0;
            for j in bits(pi) {
                s += r.primed(i, j);
            }
            for &j in &sigma {
                s += r.primed(i, j);
            }
            prod *= chi(s);
            if prod == 0 {
                break;
            }
        }
        total += sign * prod;
    }
    total
}

/// Closed-form coefficient c(g,e)_omega of the cell [e_omega] in g_*[e].
///
/// omega must be a subset of tau_e. The three cases follow the twist degree:
/// t_e > |omega| gives an eta power, t_e = |omega| a GW part (with an exact
/// division by 2), t_e < |omega| a bracket power with an exact division by
/// 2^(|omega|-t_e).
pub fn action_coefficient(
    r: &SectionMatrix,
    e: &CubicalCell,
    omega: u64,
) -> Result<MwConstant, MwError> {
    validate_section(r, e)?;
    debug_assert_eq!(omega & !e.tau(), 0, "omega must lie inside tau_e");
    let t = e.twist();
    let w = omega.count_ones();
    let s = chi_alternating_sum(r, e, omega);
    if t > w {
        Ok(MwConstant::eta_power(t - w, s))
    } else if t == w {
        let tau_star = bits(e.tau_star);
        let omega_bits = bits(omega);
        let n = tau_star.len();
        let mut det_m = crate::intlin::IntMatrix::zeros(n, n);
        for (ri, &i) in tau_star.iter().enumerate() {
            for (ci, &j) in omega_bits.iter().enumerate() {
                det_m.set(ri, ci, num_bigint::BigInt::from(r.primed(i, j)));
            }
        }
        let det: i128 = num_traits::ToPrimitive::to_i128(&det_m.determinant())
            .expect("determinant overflow");
        // c = S + ((det - S)/2) h, exact by the parity of det and S.
        if (det - s) % 2 != 0 {
            return Err(MwError::NonExactDivision);
        }
        Ok(GwPart { a: s, b: (det - s) / 2 }.normalize())
    } else {
        let k = w - t;
        let denom = pow_i128(2, k);
        if s % denom != 0 {
            return Err(MwError::NonExactDivision);
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        Ok(MwConstant::bracket_power(k, sign * (s / denom)))
    }
}

/// Brute-force evaluation of c(g,e)_omega as the full sum over maps
/// f: tau_star -> omega ⊔ {infinity}, reduced monomial by monomial through
/// the ring operations. Serves as the oracle for `action_coefficient`.
pub fn action_coefficient_bruteforce(
    r: &SectionMatrix,
    e: &CubicalCell,
    omega: u64,
) -> Result<MwConstant, MwError> {
    validate_section(r, e)?;
    let tau_star = bits(e.tau_star);
    let sigma = bits(e.sigma);
    let omega_bits = bits(omega);
    let t = tau_star.len();
    let w = omega_bits.len();
    let degree = w as i32 - t as i32;
    // Targets: omega labels then the formal infinity at index w.
    let infinity = w;
    let n_targets = w + 1;
    let mut total = MwConstant::zero(degree);

    let r_primed_inf = |i: usize| -> i128 { sigma.iter().map(|&k| r.primed(i, k)).sum() };

    let mut assignment = vec![0usize; t];
    loop {
        // One map f: tau_star -> omega ⊔ {infinity}.
        let image_mask: u64 = assignment
            .iter()
            .filter(|&&a| a != infinity)
            .fold(0u64, |acc, &a| acc | 1 << a);
        let image_size = image_mask.count_ones() as usize;

        // sgn(f): inversions with infinity ranked above every omega element.
        let mut inversions = 0u64;
        for x in 0..t {
            for y in x + 1..t {
                if assignment[x] > assignment[y] {
                    inversions += 1;
                }
            }
        }

        let mut term = MwConstant::epsilon_pow(inversions as i128);
        term = mw_mul(term, MwConstant::eta_power((t - image_size) as u32, 1));
        let bracket_exp = (w - image_size) as u32;
        let bracket_sign = if bracket_exp % 2 == 0 { 1 } else { -1 };
        term = mw_mul(term, MwConstant::bracket_power(bracket_exp, bracket_sign));

        // chi factor for omega coordinates missed by f.
        for (jq, &j) in omega_bits.iter().enumerate() {
            if image_mask >> jq & 1 == 1 {
                continue;
            }
            let mut s_j: i128 = 0;
            for (iq, &i) in tau_star.iter().enumerate() {
                if assignment[iq] != infinity && assignment[iq] < jq {
                    s_j += r.primed(i, j);
                }
            }
            term = mw_mul(term, MwConstant::integer(chi(s_j)));
            if term.is_zero() {
                break;
            }
        }

        if !term.is_zero() {
            for (iq, &i) in tau_star.iter().enumerate() {
                let fi = assignment[iq];
                // <-1> exponent over targets strictly above f(i).
                let mut bra_exp: i128 = 0;
                if fi != infinity {
                    for (jq, &j) in omega_bits.iter().enumerate() {
                        if jq > fi {
                            bra_exp += r.primed(i, j);
                        }
                    }
                    bra_exp += r_primed_inf(i);
                }
                term = mw_mul(term, MwConstant::bra_minus_one_pow(bra_exp));
                let r_if = if fi == infinity { r_primed_inf(i) } else { r.primed(i, omega_bits[fi]) };
                term = mw_mul(term, n_epsilon(r_if));
                if term.is_zero() {
                    break;
                }
            }
        }

        total = mw_add(total, term)?;

        // Next assignment in mixed radix.
        let mut pos = 0;
        loop {
            if pos == t {
                return Ok(total);
            }
            assignment[pos] += 1;
            if assignment[pos] < n_targets {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
        if t == 0 {
            return Ok(total);
        }
    }
}

/// Action of a section touching only sigma columns: the coefficient of
/// [e_omega] is <-1>^(sum over omega rows) * prod of chi over missed rows *
/// eta^(t_e - |omega|), for omega a subset of tau_star.
pub fn sigma_action(r: &SectionMatrix, e: &CubicalCell) -> Vec<(u64, MwConstant)> {
    let sigma = bits(e.sigma);
    let row_sum = |i: usize| -> i128 { sigma.iter().map(|&j| r.get(i, j)).sum() };
    subsets(e.tau_star)
        .into_iter()
        .map(|omega| {
            let mut bra_exp = 0i128;
            let mut prod = 1i128;
            for i in bits(e.tau_star) {
                if omega >> i & 1 == 1 {
                    bra_exp += row_sum(i);
                } else {
                    prod *= chi(row_sum(i));
                }
            }
            let coef = mw_mul(
                MwConstant::bra_minus_one_pow(bra_exp),
                mw_mul(
                    MwConstant::integer(prod),
                    MwConstant::eta_power(e.twist() - omega.count_ones(), 1),
                ),
            );
            (omega, coef)
        })
        .collect()
}

/// Outcome of projecting a transported cell onto the restriction complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalProjection {
    Zero,
    /// eta^t_e times the base cell [e_empty].
    EtaToBase { t: u32 },
}

/// Projection T-bar_*[e] onto the restriction complex, given the canonical
/// transform of the cell. `sigma_is_restriction` states sigma_e = r(f(sigma_e))
/// and `f_sigma` is the bitmask of f(sigma_e).
pub fn canonical_projection(
    t_e: &SectionMatrix,
    e: &CubicalCell,
    sigma_is_restriction: bool,
    f_sigma: u64,
) -> CanonicalProjection {
    if !sigma_is_restriction {
        return CanonicalProjection::Zero;
    }
    let t = e.twist();
    if t == 0 {
        return CanonicalProjection::EtaToBase { t: 0 };
    }
    if e.tau_star & f_sigma != 0 {
        return CanonicalProjection::Zero;
    }
    // eta^t * prod chi(row sums over sigma columns of T_e)
    let sigma = bits(e.sigma);
    for i in bits(e.tau_star) {
        let s: i128 = sigma.iter().map(|&j| t_e.get(i, j)).sum();
        if chi(s) == 0 {
            return CanonicalProjection::Zero;
        }
    }
    CanonicalProjection::EtaToBase { t }
}
