use crate::linalg::ComplexMatrix;

/// A 4×4 matrix stored as twice its value, so Hadamard matrices with entries
/// ±1/2 are held exactly as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Doubled(pub [[i32; 4]; 4]);

impl Doubled {
    pub fn transpose(&self) -> Self {
        let mut t = [[0; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t[j][i] = *x;
            }
        }
        Doubled(t)
    }

    /// Exact product, rescaled so the result is again doubled.
    /// Returns `None` if the product is not representable at that scale.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        let raw = int_mul(&self.0, &other.0);
        let mut out = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if raw[i][j] % 2 != 0 {
                    return None;
                }
                out[i][j] = raw[i][j] / 2;
            }
        }
        Some(Doubled(out))
    }

    pub fn is_orthogonal(&self) -> bool {
        int_mul(&self.0, &self.transpose().0) == scaled_identity(4)
    }

    pub fn entries_are_signs(&self) -> bool {
        self.0.iter().flatten().all(|x| x.abs() == 1)
    }

    pub fn to_real(&self) -> [[f64; 4]; 4] {
        self.0.map(|row| row.map(|x| f64::from(x) / 2.0))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, |i, j| f64::from(self.0[i][j]).into())
            .scale_real(0.5)
    }
}

fn scaled_identity(s: i32) -> [[i32; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = s;
    }
    m
}

pub fn int_mul(a: &[[i32; 4]; 4], b: &[[i32; 4]; 4]) -> [[i32; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub const H1: Doubled = Doubled([
    [1, 1, -1, -1],
    [1, -1, -1, 1],
    [1, -1, 1, -1],
    [1, 1, 1, 1],
]);

pub const H2: Doubled = Doubled([
    [-1, 1, -1, 1],
    [-1, 1, 1, -1],
    [-1, -1, 1, 1],
    [1, 1, 1, 1],
]);

pub const H_PRIME: Doubled = Doubled([
    [-1, 1, 1, 1],
    [1, 1, -1, 1],
    [1, -1, 1, 1],
    [1, 1, 1, -1],
]);

pub const H_DOUBLE_PRIME: Doubled = Doubled([
    [-1, -1, -1, 1],
    [1, 1, -1, 1],
    [-1, 1, 1, 1],
    [1, -1, 1, 1],
]);

pub const P1: [[i32; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
pub const Q1: [[i32; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]];
pub const P2: [[i32; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]];
pub const Q2: [[i32; 4]; 4] = [[-1, 0, 0, 0], [0, 0, 0, 1], [0, -1, 0, 0], [0, 0, 1, 0]];

/// Sylvester Hadamard matrix of order 4 (unnormalized, entries ±1).
pub fn sylvester4() -> [[i32; 4]; 4] {
    let h2 = [[1, 1], [1, -1]];
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = h2[i / 2][j / 2] * h2[i % 2][j % 2];
        }
    }
    out
}

/// The five printed Hadamard matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardSet {
    pub h1: Doubled,
    pub h2: Doubled,
    pub h: Doubled,
    pub hp: Doubled,
    pub hpp: Doubled,
}

pub fn hadamards() -> HadamardSet {
    HadamardSet {
        h1: H1,
        h2: H2,
        h: H1,
        hp: H_PRIME,
        hpp: H_DOUBLE_PRIME,
    }
}

/// Exact checks on the Hadamard data, one flag per relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardReport {
    pub all_orthogonal: bool,
    pub all_sign_entries: bool,
    pub h_is_h1: bool,
    pub hp_is_h1t_h2: bool,
    pub hpp_is_h2t: bool,
    pub h1_from_sylvester: bool,
    pub h2_from_sylvester: bool,
}

impl HadamardReport {
    pub fn passed(&self) -> bool {
        self.all_orthogonal
            && self.all_sign_entries
            && self.h_is_h1
            && self.hp_is_h1t_h2
            && self.hpp_is_h2t
            && self.h1_from_sylvester
            && self.h2_from_sylvester
    }
}

pub fn verify_hadamards(set: &HadamardSet) -> HadamardReport {
    let all = [set.h1, set.h2, set.h, set.hp, set.hpp];
    let s = sylvester4();
    let from_sylvester = |p: &[[i32; 4]; 4], q: &[[i32; 4]; 4], target: &Doubled| {
        int_mul(&int_mul(p, &s), q) == target.0
    };
    HadamardReport {
        all_orthogonal: all.iter().all(Doubled::is_orthogonal),
        all_sign_entries: all.iter().all(Doubled::entries_are_signs),
        h_is_h1: set.h == set.h1,
        hp_is_h1t_h2: set.h1.transpose().mul(&set.h2) == Some(set.hp),
        hpp_is_h2t: set.hpp == set.h2.transpose(),
        h1_from_sylvester: from_sylvester(&P1, &Q1, &set.h1),
        h2_from_sylvester: from_sylvester(&P2, &Q2, &set.h2),
    }
}
