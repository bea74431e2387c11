//! The tensorial Fano basis of su(4), its structure constants, and the
//! five-block decomposition `su(4) = k ⊕ a ⊕ a′ ⊕ t`.
//!
//! Indices are 1-based throughout to match the conventional λ₁..λ₁₅ labels.
//! Every λᵢ is `σ_μ ⊗ σ_ν / (2i)` with the (μ, ν) order of [`FANO_ORDER`].

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::linalg::ComplexMatrix;

pub const DIM: usize = 15;

/// (μ, ν) labels of λ₁..λ₁₅; 0 is the 2×2 identity.
pub const FANO_ORDER: [(usize, usize); DIM] = [
    (1, 0),
    (2, 0),
    (3, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 3),
];

/// Λ₁, spans the Abelian subalgebra 𝔞.
pub const LAMBDA_A: [usize; 3] = [1, 4, 7];
/// Λ₂, spans the Abelian subalgebra 𝔞′.
pub const LAMBDA_A_PRIME: [usize; 3] = [9, 11, 13];
/// Λ₃, the `u` half of 𝔨.
pub const LAMBDA_K_U: [usize; 3] = [2, 8, 14];
/// Λ₄, the `v` half of 𝔨.
pub const LAMBDA_K_V: [usize; 3] = [5, 10, 12];
/// Λ₅, spans the Cartan subalgebra 𝔱.
pub const LAMBDA_T: [usize; 3] = [3, 6, 15];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("basis index {0} out of range 1..=15")]
    IndexOutOfRange(usize),
    #[error("structure constant {kind}({i},{j},{k}) = {value} is not an integer in {{-1,0,1}}")]
    NonIntegral {
        kind: &'static str,
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
    #[error("matrix is not in su(4) (reconstruction defect {defect:.3e})")]
    NotInAlgebra { defect: f64 },
    #[error("malformed table data: {0}")]
    TableData(String),
}

/// Which summand of `k ⊕ a ⊕ a′ ⊕ t` a basis element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    A,
    APrime,
    K,
    T,
}

impl Subspace {
    pub fn of(index: usize) -> Subspace {
        if LAMBDA_A.contains(&index) {
            Subspace::A
        } else if LAMBDA_A_PRIME.contains(&index) {
            Subspace::APrime
        } else if LAMBDA_K_U.contains(&index) || LAMBDA_K_V.contains(&index) {
            Subspace::K
        } else if LAMBDA_T.contains(&index) {
            Subspace::T
        } else {
            panic!("basis index {index} out of range")
        }
    }

    pub fn indices(self) -> Vec<usize> {
        match self {
            Subspace::A => LAMBDA_A.to_vec(),
            Subspace::APrime => LAMBDA_A_PRIME.to_vec(),
            Subspace::K => LAMBDA_K_U.iter().chain(&LAMBDA_K_V).copied().collect(),
            Subspace::T => LAMBDA_T.to_vec(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subspace::A => "a",
            Subspace::APrime => "a'",
            Subspace::K => "k",
            Subspace::T => "t",
        }
    }
}

pub fn pauli(mu: usize) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let entries = match mu {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -i, i, z],
        3 => [one, z, z, -one],
        _ => panic!("Pauli index {mu} out of range"),
    };
    ComplexMatrix::from_row_slice(2, &entries).expect("static Pauli matrix")
}

/// The ordered anti-Hermitian Fano basis together with λ₀ = I₄/(2i).
#[derive(Debug, Clone)]
pub struct FanoBasis {
    lambda: Vec<ComplexMatrix>,
    lambda0: ComplexMatrix,
}

impl FanoBasis {
    fn build() -> Self {
        let half_over_i = Complex64::new(0.0, -0.5);
        let lambda = FANO_ORDER
            .iter()
            .map(|&(mu, nu)| pauli(mu).kron(&pauli(nu)).scale(half_over_i))
            .collect();
        Self {
            lambda,
            lambda0: ComplexMatrix::identity(4).scale(half_over_i),
        }
    }

    /// Shared instance; the basis is immutable once built.
    pub fn get() -> &'static FanoBasis {
        static BASIS: OnceLock<FanoBasis> = OnceLock::new();
        BASIS.get_or_init(FanoBasis::build)
    }

    /// λᵢ for `1 ≤ i ≤ 15`.
    pub fn lambda(&self, i: usize) -> &ComplexMatrix {
        &self.lambda[i - 1]
    }

    /// λ₀ = I₄/(2i), the identity normalization used by the 𝒜-factor expansions.
    pub fn lambda0(&self) -> &ComplexMatrix {
        &self.lambda0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ComplexMatrix)> {
        self.lambda.iter().enumerate().map(|(k, m)| (k + 1, m))
    }
}

pub fn fano_lambda(i: usize) -> Result<ComplexMatrix, AlgebraError> {
    if !(1..=DIM).contains(&i) {
        return Err(AlgebraError::IndexOutOfRange(i));
    }
    Ok(FanoBasis::get().lambda(i).clone())
}

/// Coefficients of an su(4) element on λ₁..λ₁₅.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement {
    pub coeffs: [f64; DIM],
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit vector eᵢ (1-based).
    pub fn basis(i: usize) -> Self {
        let mut e = Self::zero();
        e.coeffs[i - 1] = 1.0;
        e
    }

    /// Element supported on three basis indices.
    pub fn from_triple(indices: [usize; 3], values: [f64; 3]) -> Self {
        let mut e = Self::zero();
        for (idx, v) in indices.iter().zip(values) {
            e.coeffs[idx - 1] = v;
        }
        e
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs[i - 1]
    }

    pub fn triple(&self, indices: [usize; 3]) -> [f64; 3] {
        indices.map(|i| self.coeff(i))
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let basis = FanoBasis::get();
        basis
            .iter()
            .fold(ComplexMatrix::zeros(4), |acc, (i, l)| &acc + &l.scale_real(self.coeff(i)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.coeffs.iter_mut().zip(other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Expansion coefficients `cᵢ = −Tr(X·λᵢ)` of an anti-Hermitian traceless 4×4 matrix.
pub fn project(x: &ComplexMatrix) -> Result<AlgebraElement, AlgebraError> {
    project_with_tol(x, crate::linalg::VERIFICATION_TOL)
}

pub fn project_with_tol(x: &ComplexMatrix, tol: f64) -> Result<AlgebraElement, AlgebraError> {
    if x.dim() != 4 {
        return Err(AlgebraError::NotInAlgebra {
            defect: f64::INFINITY,
        });
    }
    let basis = FanoBasis::get();
    let mut coeffs = [0.0; DIM];
    for (i, l) in basis.iter() {
        coeffs[i - 1] = -(x * l).trace().re;
    }
    let element = AlgebraElement { coeffs };
    let defect = element.to_matrix().distance(x);
    if defect > tol {
        return Err(AlgebraError::NotInAlgebra { defect });
    }
    Ok(element)
}

/// Dense integer structure constants:
/// `[λᵢ, λⱼ] = Σ fᵏᵢⱼ λₖ` and `dᵏᵢⱼ = −i·Tr({λᵢ, λⱼ}·λₖ)`.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureConstants {
    f: Vec<i8>,
    d: Vec<i8>,
}

impl std::fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nf = self.f.iter().filter(|&&x| x != 0).count();
        let nd = self.d.iter().filter(|&&x| x != 0).count();
        write!(f, "StructureConstants {{ nonzero f: {nf}, nonzero d: {nd} }}")
    }
}

fn offset(i: usize, j: usize, k: usize) -> usize {
    ((i - 1) * DIM + (j - 1)) * DIM + (k - 1)
}

impl StructureConstants {
    pub fn f(&self, i: usize, j: usize, k: usize) -> i8 {
        self.f[offset(i, j, k)]
    }

    pub fn d(&self, i: usize, j: usize, k: usize) -> i8 {
        self.d[offset(i, j, k)]
    }

    /// Nonzero `(k, fᵏᵢⱼ)` pairs of the commutator `[λᵢ, λⱼ]`.
    pub fn commutator_terms(&self, i: usize, j: usize) -> Vec<(usize, i8)> {
        (1..=DIM)
            .filter_map(|k| {
                let v = self.f(i, j, k);
                (v != 0).then_some((k, v))
            })
            .collect()
    }

    /// Bracket of two algebra elements computed from f alone.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for i in 1..=DIM {
            let xi = x.coeff(i);
            if xi == 0.0 {
                continue;
            }
            for j in 1..=DIM {
                let yj = y.coeff(j);
                if yj == 0.0 {
                    continue;
                }
                for k in 1..=DIM {
                    out.coeffs[k - 1] += xi * yj * f64::from(self.f(i, j, k));
                }
            }
        }
        out
    }
}

const INTEGRALITY_TOL: f64 = 1e-12;

fn round_constant(
    kind: &'static str,
    (i, j, k): (usize, usize, usize),
    value: f64,
) -> Result<i8, AlgebraError> {
    let rounded = value.round();
    if (value - rounded).abs() > INTEGRALITY_TOL || rounded.abs() > 1.0 {
        return Err(AlgebraError::NonIntegral {
            kind,
            i,
            j,
            k,
            value,
        });
    }
    Ok(rounded as i8)
}

pub fn compute_structure_constants() -> Result<StructureConstants, AlgebraError> {
    let basis = FanoBasis::get();
    let mut f = vec![0i8; DIM * DIM * DIM];
    let mut d = vec![0i8; DIM * DIM * DIM];
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 1..=DIM {
        for j in 1..=DIM {
            let comm = basis.lambda(i).commutator(basis.lambda(j));
            let anti = basis.lambda(i).anticommutator(basis.lambda(j));
            for k in 1..=DIM {
                let lk = basis.lambda(k);
                let fv = -(&comm * lk).trace();
                let dv = -i_unit * (&anti * lk).trace();
                if fv.im.abs() > INTEGRALITY_TOL {
                    return Err(AlgebraError::NonIntegral { kind: "f", i, j, k, value: fv.im });
                }
                if dv.im.abs() > INTEGRALITY_TOL {
                    return Err(AlgebraError::NonIntegral { kind: "d", i, j, k, value: dv.im });
                }
                f[offset(i, j, k)] = round_constant("f", (i, j, k), fv.re)?;
                d[offset(i, j, k)] = round_constant("d", (i, j, k), dv.re)?;
            }
        }
    }
    Ok(StructureConstants { f, d })
}

/// Shared instance of the computed constants.
pub fn structure_constants() -> &'static StructureConstants {
    static SC: OnceLock<StructureConstants> = OnceLock::new();
    SC.get_or_init(|| compute_structure_constants().expect("Fano basis constants are integral"))
}

/// One printed cell of the commutator table: `[λᵢ, λⱼ] = sign·λₖ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct CommutatorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub sign: i8,
}

/// One printed row of the symmetric-constant table: `d(i, j, k) = value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct SymmetricEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: i8,
}

pub const TABLE1_JSON: &str = include_str!("../data/table1_commutators.json");
pub const TABLE2_JSON: &str = include_str!("../data/table2_dsym.json");

/// The printed commutator table as a lookup `(i, j) → (k, sign)`; absent cells are zero.
#[derive(Debug, Clone)]
pub struct CommutatorTable {
    cells: Vec<Option<(usize, i8)>>,
}

impl CommutatorTable {
    pub fn parse(json: &str) -> Result<Self, AlgebraError> {
        let entries: Vec<CommutatorEntry> =
            serde_json::from_str(json).map_err(|e| AlgebraError::TableData(e.to_string()))?;
        let mut cells = vec![None; DIM * DIM];
        for e in entries {
            for idx in [e.i, e.j, e.k] {
                if !(1..=DIM).contains(&idx) {
                    return Err(AlgebraError::IndexOutOfRange(idx));
                }
            }
            if e.sign != 1 && e.sign != -1 {
                return Err(AlgebraError::TableData(format!("bad sign in {e:?}")));
            }
            let slot = &mut cells[(e.i - 1) * DIM + (e.j - 1)];
            if slot.is_some() {
                return Err(AlgebraError::TableData(format!("duplicate cell ({}, {})", e.i, e.j)));
            }
            *slot = Some((e.k, e.sign));
        }
        Ok(Self { cells })
    }

    pub fn shipped() -> Self {
        Self::parse(TABLE1_JSON).expect("shipped commutator table parses")
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<(usize, i8)> {
        self.cells[(i - 1) * DIM + (j - 1)]
    }

    pub fn nonzero_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Whether the printed cells (i, j) and (j, i) agree with antisymmetry.
    pub fn is_antisymmetric_at(&self, i: usize, j: usize) -> bool {
        match (self.cell(i, j), self.cell(j, i)) {
            (None, None) => true,
            (Some((k1, s1)), Some((k2, s2))) => k1 == k2 && s1 == -s2,
            _ => false,
        }
    }
}

/// A commutator-table cell that disagrees with the computed constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Mismatch {
    pub i: usize,
    pub j: usize,
    pub printed: Option<(usize, i8)>,
    pub computed: Vec<(usize, i8)>,
    /// The printed table itself breaks antisymmetry at this pair, marking the cell as a typo.
    pub flagged: bool,
}

pub fn verify_table1(sc: &StructureConstants) -> Vec<Table1Mismatch> {
    verify_table1_against(sc, &CommutatorTable::shipped())
}

pub fn verify_table1_against(sc: &StructureConstants, table: &CommutatorTable) -> Vec<Table1Mismatch> {
    let mut out = Vec::new();
    for i in 1..=DIM {
        for j in 1..=DIM {
            let computed = sc.commutator_terms(i, j);
            let printed = table.cell(i, j);
            let agrees = match printed {
                None => computed.is_empty(),
                Some(cell) => computed == [cell],
            };
            if !agrees {
                out.push(Table1Mismatch {
                    i,
                    j,
                    printed,
                    computed,
                    flagged: !table.is_antisymmetric_at(i, j),
                });
            }
        }
    }
    out
}

pub fn table2_entries() -> Vec<SymmetricEntry> {
    serde_json::from_str(TABLE2_JSON).expect("shipped symmetric table parses")
}

/// Disagreements between the computed d and the symmetric-constant table.
#[derive(Debug, Clone, PartialEq)]
pub enum Table2Mismatch {
    /// A printed triple whose computed value (in some index order) differs.
    Value { i: usize, j: usize, k: usize, printed: i8, computed: i8 },
    /// A computed nonzero `d(i, j, k)`, `i ≤ j ≤ k`, not covered by any printed row.
    Unlisted { i: usize, j: usize, k: usize, computed: i8 },
}

fn permutations(t: (usize, usize, usize)) -> [(usize, usize, usize); 6] {
    let (a, b, c) = t;
    [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
}

pub fn verify_table2(sc: &StructureConstants) -> Vec<Table2Mismatch> {
    let entries = table2_entries();
    let mut out = Vec::new();
    let mut listed = std::collections::BTreeSet::new();
    for e in &entries {
        for (i, j, k) in permutations((e.i, e.j, e.k)) {
            listed.insert((i, j, k));
            let computed = sc.d(i, j, k);
            if computed != e.value {
                out.push(Table2Mismatch::Value { i, j, k, printed: e.value, computed });
            }
        }
    }
    for i in 1..=DIM {
        for j in i..=DIM {
            for k in j..=DIM {
                let computed = sc.d(i, j, k);
                if computed != 0 && !listed.contains(&(i, j, k)) {
                    out.push(Table2Mismatch::Unlisted { i, j, k, computed });
                }
            }
        }
    }
    out
}

/// A bracket component that escapes the subspace required by the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionViolation {
    pub rule: &'static str,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub pairs_checked: usize,
    pub violations: Vec<InclusionViolation>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bracket inclusions of the decomposition, as (rule, left, right, allowed targets).
fn inclusion_rules() -> Vec<(&'static str, Subspace, Subspace, Vec<Subspace>)> {
    use Subspace::*;
    vec![
        ("[a,a]=0", A, A, vec![]),
        ("[a',a']=0", APrime, APrime, vec![]),
        ("[t,t]=0", T, T, vec![]),
        ("[a',a]⊆k", APrime, A, vec![K]),
        ("[k,k]⊆k", K, K, vec![K]),
        ("[t,a]⊆k", T, A, vec![K]),
        ("[t,a']⊆k", T, APrime, vec![K]),
        ("[k,t]⊆a⊕a'", K, T, vec![A, APrime]),
    ]
}

pub fn verify_inclusions(sc: &StructureConstants) -> InclusionReport {
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for (rule, left, right, allowed) in inclusion_rules() {
        for &i in &left.indices() {
            for &j in &right.indices() {
                pairs_checked += 1;
                for (k, _) in sc.commutator_terms(i, j) {
                    if !allowed.contains(&Subspace::of(k)) {
                        violations.push(InclusionViolation { rule, i, j, k });
                    }
                }
            }
        }
    }
    InclusionReport {
        pairs_checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn printed(prefactor: Complex64, rows: [[Complex64; 4]; 4]) -> ComplexMatrix {
        let flat: Vec<Complex64> = rows.iter().flatten().map(|z| z * prefactor).collect();
        ComplexMatrix::from_row_slice(4, &flat).unwrap()
    }

    const HALF_OVER_I: Complex64 = Complex64::new(0.0, -0.5);

    #[test]
    fn lambda3_matches_listing() {
        let o = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let expected = printed(
            HALF_OVER_I,
            [[o, z, z, z], [z, o, z, z], [z, z, -o, z], [z, z, z, -o]],
        );
        assert!(fano_lambda(3).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn lambda9_follows_kronecker_construction() {
        // The listing prints λ₉ with prefactor i/2; the Kronecker product σ₁⊗σ₃/(2i)
        // carries −i/2, which is the sign that the 𝒜₂ diagonalization needs.
        let o = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let pattern = [[z, z, o, z], [z, z, z, -o], [o, z, z, z], [z, -o, z, z]];
        let l9 = fano_lambda(9).unwrap();
        assert!(l9.distance(&printed(HALF_OVER_I, pattern)) < 1e-15);
        assert!(l9.distance(&printed(c(0.0, 0.5), pattern)) > 1.0);
    }

    #[test]
    fn selected_lambdas_match_listing() {
        let o = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let i = c(0.0, 1.0);
        let cases = [
            (2, [[z, z, -i, z], [z, z, z, -i], [i, z, z, z], [z, i, z, z]]),
            (8, [[z, z, z, -i], [z, z, i, z], [z, -i, z, z], [i, z, z, z]]),
            (11, [[z, z, z, -o], [z, z, o, z], [z, o, z, z], [-o, z, z, z]]),
            (12, [[z, z, -i, z], [z, z, z, i], [i, z, z, z], [z, -i, z, z]]),
            (14, [[z, -i, z, z], [i, z, z, z], [z, z, z, i], [z, z, -i, z]]),
            (15, [[o, z, z, z], [z, -o, z, z], [z, z, -o, z], [z, z, z, o]]),
        ];
        for (idx, rows) in cases {
            let expected = printed(HALF_OVER_I, rows);
            assert!(fano_lambda(idx).unwrap().distance(&expected) < 1e-15, "λ{idx}");
        }
    }

    #[test]
    fn fano_basis_is_orthonormal_and_anti_hermitian() {
        let basis = FanoBasis::get();
        for (i, li) in basis.iter() {
            assert!(li.skew_hermitian_defect() < 1e-15);
            assert!(li.trace().norm() < 1e-15);
            for (j, lj) in basis.iter() {
                let tr = (li * lj).trace();
                let expected = if i == j { -1.0 } else { 0.0 };
                assert!((tr - c(expected, 0.0)).norm() < 1e-15, "Tr(λ{i}λ{j}) = {tr}");
            }
        }
    }

    #[test]
    fn index_out_of_range_is_an_error() {
        assert_eq!(fano_lambda(0), Err(AlgebraError::IndexOutOfRange(0)));
        assert_eq!(fano_lambda(16), Err(AlgebraError::IndexOutOfRange(16)));
    }

    #[test]
    fn subsets_partition_the_basis() {
        let mut all: Vec<usize> = [LAMBDA_A, LAMBDA_A_PRIME, LAMBDA_K_U, LAMBDA_K_V, LAMBDA_T]
            .concat();
        all.sort_unstable();
        assert_eq!(all, (1..=15).collect::<Vec<_>>());
    }

    #[test]
    fn selected_structure_constants() {
        let sc = compute_structure_constants().unwrap();
        assert_eq!(sc.d(1, 4, 7), 1);
        assert_eq!(sc.d(7, 11, 15), -1);
        // Computed from the matrices: [λ₁, λ₁₁] = +λ₁₄ and [λ₄, λ₉] = −λ₈.
        assert_eq!(sc.commutator_terms(1, 11), vec![(14, 1)]);
        assert_eq!(sc.commutator_terms(4, 9), vec![(8, -1)]);
        for i in 1..=DIM {
            assert!(sc.commutator_terms(i, i).is_empty());
        }
    }

    #[test]
    fn f_is_antisymmetric_and_d_symmetric() {
        let sc = structure_constants();
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    assert_eq!(sc.f(i, j, k), -sc.f(j, i, k));
                    // Total antisymmetry via orthonormality.
                    assert_eq!(sc.f(i, j, k), sc.f(j, k, i));
                    assert_eq!(sc.d(i, j, k), sc.d(j, i, k));
                    assert_eq!(sc.d(i, j, k), sc.d(j, k, i));
                }
            }
        }
    }

    #[test]
    fn commutator_matches_matrix_bracket() {
        let basis = FanoBasis::get();
        let sc = structure_constants();
        for i in 1..=DIM {
            for j in 1..=DIM {
                let direct = basis.lambda(i).commutator(basis.lambda(j));
                let expanded = sc
                    .commutator_terms(i, j)
                    .into_iter()
                    .fold(ComplexMatrix::zeros(4), |acc, (k, s)| {
                        &acc + &basis.lambda(k).scale_real(f64::from(s))
                    });
                assert!(direct.distance(&expanded) < 1e-14);
            }
        }
    }

    #[test]
    fn anticommutator_identity() {
        // {λᵢ, λⱼ} = −½δᵢⱼ I₄ − i Σₖ dᵏᵢⱼ λₖ for d = −i·Tr({λᵢ, λⱼ}λₖ).
        let basis = FanoBasis::get();
        let sc = structure_constants();
        let minus_i = c(0.0, -1.0);
        for i in 1..=DIM {
            for j in 1..=DIM {
                let lhs = basis.lambda(i).anticommutator(basis.lambda(j));
                let mut rhs = if i == j {
                    ComplexMatrix::identity(4).scale_real(-0.5)
                } else {
                    ComplexMatrix::zeros(4)
                };
                for k in 1..=DIM {
                    let dk = f64::from(sc.d(i, j, k));
                    if dk != 0.0 {
                        rhs = &rhs + &basis.lambda(k).scale(minus_i * dk);
                    }
                }
                assert!(lhs.distance(&rhs) < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn jacobi_identity_holds() {
        let sc = structure_constants();
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    for l in 1..=DIM {
                        let s: i32 = (1..=DIM)
                            .map(|m| {
                                i32::from(sc.f(i, j, m)) * i32::from(sc.f(m, k, l))
                                    + i32::from(sc.f(j, k, m)) * i32::from(sc.f(m, i, l))
                                    + i32::from(sc.f(k, i, m)) * i32::from(sc.f(m, j, l))
                            })
                            .sum();
                        assert_eq!(s, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn table1_mismatches_are_all_print_inconsistencies() {
        let table = CommutatorTable::shipped();
        assert_eq!(table.nonzero_cells(), 118);
        let mismatches = verify_table1(structure_constants());
        assert_eq!(mismatches.len(), 8);
        assert!(mismatches.iter().all(|m| m.flagged));
        let cells: Vec<(usize, usize)> = mismatches.iter().map(|m| (m.i, m.j)).collect();
        assert!(cells.contains(&(9, 15)));
    }

    #[test]
    fn table1_detects_a_corrupted_cell() {
        let mut json: Vec<CommutatorEntry> = serde_json::from_str(TABLE1_JSON).unwrap();
        let cell = json.iter_mut().find(|e| e.i == 1 && e.j == 2).unwrap();
        cell.sign = -cell.sign;
        let text = serde_json::to_string(
            &json
                .iter()
                .map(|e| serde_json::json!({"i": e.i, "j": e.j, "k": e.k, "sign": e.sign}))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let table = CommutatorTable::parse(&text).unwrap();
        let mismatches = verify_table1_against(structure_constants(), &table);
        let hit = mismatches.iter().find(|m| (m.i, m.j) == (1, 2)).unwrap();
        assert!(hit.flagged);
        assert_eq!(mismatches.len(), 9);
    }

    #[test]
    fn table2_matches_computed_d() {
        let sc = structure_constants();
        assert!(verify_table2(sc).is_empty());
        let entries = table2_entries();
        assert_eq!(entries.iter().filter(|e| e.value == 1).count(), 12);
        assert_eq!(entries.iter().filter(|e| e.value == -1).count(), 3);
    }

    #[test]
    fn inclusions_have_no_violations() {
        let report = verify_inclusions(structure_constants());
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.pairs_checked, 9 * 6 + 36 + 18);
    }

    #[test]
    fn inclusion_examples() {
        let sc = structure_constants();
        assert!(sc.commutator_terms(1, 4).is_empty());
        assert!(sc.commutator_terms(9, 1).is_empty());
        assert_eq!(sc.commutator_terms(11, 1), vec![(14, -1)]);
        assert_eq!(Subspace::of(14), Subspace::K);
    }

    #[test]
    fn project_recovers_coefficients() {
        assert_eq!(
            project(&fano_lambda(5).unwrap()).unwrap().coeffs,
            AlgebraElement::basis(5).coeffs
        );
        let mut e = AlgebraElement::zero();
        for (k, c) in e.coeffs.iter_mut().enumerate() {
            *c = (k as f64 * 0.37).sin() * 2.0 - 0.4;
        }
        let back = project(&e.to_matrix()).unwrap();
        for (a, b) in back.coeffs.iter().zip(e.coeffs) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn project_rejects_non_algebra_matrices() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(project(&m), Err(AlgebraError::NotInAlgebra { .. })));
    }

    #[test]
    fn bracket_from_f_matches_matrices() {
        let sc = structure_constants();
        let x = AlgebraElement::from_triple(LAMBDA_A, [0.3, -1.2, 0.8]);
        let y = AlgebraElement::from_triple(LAMBDA_K_V, [1.0, 0.5, -0.25]);
        let via_f = sc.bracket(&x, &y).to_matrix();
        let via_m = x.to_matrix().commutator(&y.to_matrix());
        assert!(via_f.distance(&via_m) < 1e-14);
    }
}
