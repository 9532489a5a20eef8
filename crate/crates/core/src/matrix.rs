//! The 4x4 integer matrices that propagate curvature quadruples.
//!
//! Replacing member `j` of a triple by its inscribed disk acts on
//! `(alpha, beta, gamma, kappa)` as right-multiplication by a fixed matrix
//! `M_j`; a word acts by the left-to-right product of its letters' matrices,
//! so the first letter applies first. Powers `j^n` and the words `j^n k`
//! have closed forms with quadratic entries, implemented here without
//! iterated products.

use serde::Serialize;

use crate::curvature::CurvatureVector;
use crate::error::Result;
use crate::scalar::{Backend, Scalar};
use crate::word::{IndexWord, Letter, Word};

/// Row-major 4x4 matrix over a backend scalar.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Matrix4<N>(pub [[N; 4]; 4]);

/// The default concrete matrix type: wide integers with overflow detection.
pub type CurvMatrix = Matrix4<u128>;

impl<N: Scalar> Matrix4<N> {
    pub fn identity() -> Self {
        Self::from_u32_rows([
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ])
    }

    fn from_u32_rows(rows: [[u32; 4]; 4]) -> Self {
        Matrix4(rows.map(|r| r.map(N::from_u32)))
    }

    /// The generator acting for one letter.
    pub fn generator(j: Letter) -> Self {
        match j.index() {
            0 => Self::from_u32_rows([
                [1, 0, 0, 0],
                [1, 1, 0, 1],
                [1, 0, 1, 1],
                [2, 0, 0, 1],
            ]),
            1 => Self::from_u32_rows([
                [1, 1, 0, 1],
                [0, 1, 0, 0],
                [0, 1, 1, 1],
                [0, 2, 0, 1],
            ]),
            _ => Self::from_u32_rows([
                [1, 0, 1, 1],
                [0, 1, 1, 1],
                [0, 0, 1, 0],
                [0, 0, 2, 1],
            ]),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out: [[N; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| N::from_u32(0)));
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = N::from_u32(0);
                for (k, rhs_row) in rhs.0.iter().enumerate() {
                    let term = self.0[i][k].checked_mul(&rhs_row[j], "matrix product")?;
                    acc = acc.checked_add(&term, "matrix product")?;
                }
                out[i][j] = acc;
            }
        }
        Ok(Matrix4(out))
    }

    /// Left-to-right product over the letters of `w`; the empty word gives
    /// the identity.
    pub fn of_word(w: &Word) -> Result<Self> {
        let mut m = Self::identity();
        for &l in w.letters() {
            m = m.mul(&Self::generator(l))?;
        }
        Ok(m)
    }

    /// Closed form for `M_{j^n}`: entries `n^2` and `2n` in the pattern of
    /// the generator, evaluated directly.
    pub fn closed_form_power(j: Letter, n: u32) -> Result<Self> {
        let nn = N::from_u32(n).checked_mul(&N::from_u32(n), "closed form")?;
        let n1 = N::from_u32(n);
        let n2 = N::from_u32(2).checked_mul(&N::from_u32(n), "closed form")?;
        let (z, o) = (N::from_u32(0), N::from_u32(1));
        let rows = match j.index() {
            0 => [
                [o.clone(), z.clone(), z.clone(), z.clone()],
                [nn.clone(), o.clone(), z.clone(), n1.clone()],
                [nn, z.clone(), o.clone(), n1],
                [n2, z.clone(), z, o],
            ],
            1 => [
                [o.clone(), nn.clone(), z.clone(), n1.clone()],
                [z.clone(), o.clone(), z.clone(), z.clone()],
                [z.clone(), nn, o.clone(), n1],
                [z.clone(), n2, z, o],
            ],
            _ => [
                [o.clone(), z.clone(), nn.clone(), n1.clone()],
                [z.clone(), o.clone(), nn, n1],
                [z.clone(), z.clone(), o.clone(), z.clone()],
                [z.clone(), z, n2, o],
            ],
        };
        Ok(Matrix4(rows))
    }

    /// Closed form for `M_{j^n k}`, with entries `n^2`, `(n+1)^2`,
    /// `n(n+1)`, `n^2+n+1`, `2n`, `2(n+1)`, `2n+1`.
    pub fn closed_form_index(tau: IndexWord) -> Result<Self> {
        let n = tau.n() as u128;
        let c = |v: u128| N::from_u128(v);
        let sq = c(n * n);
        let sq1 = c((n + 1) * (n + 1));
        let cross = c(n * (n + 1));
        let poly = c(n * n + n + 1);
        let d = c(2 * n);
        let d1 = c(2 * (n + 1));
        let odd = c(2 * n + 1);
        let (z, o) = (N::from_u32(0), N::from_u32(1));
        let rows = match (tau.j().value(), tau.k().value()) {
            (2, 3) => [
                [o.clone(), sq.clone(), sq1.clone(), poly],
                [z.clone(), o.clone(), o.clone(), o.clone()],
                [z.clone(), sq, sq1, cross],
                [z.clone(), d, d1, odd],
            ],
            (3, 2) => [
                [o.clone(), sq1.clone(), sq.clone(), poly],
                [z.clone(), sq1, sq, cross],
                [z.clone(), o.clone(), o.clone(), o.clone()],
                [z.clone(), d1, d, odd],
            ],
            (3, 1) => [
                [sq1.clone(), z.clone(), sq.clone(), cross],
                [sq1, o.clone(), sq, poly],
                [o.clone(), z.clone(), o.clone(), o.clone()],
                [d1, z.clone(), d, odd],
            ],
            (1, 3) => [
                [o.clone(), z.clone(), o.clone(), o.clone()],
                [sq.clone(), o.clone(), sq1.clone(), poly],
                [sq, z.clone(), sq1, cross],
                [d, z.clone(), d1, odd],
            ],
            (1, 2) => [
                [o.clone(), o.clone(), z.clone(), o.clone()],
                [sq.clone(), sq1.clone(), z.clone(), cross],
                [sq, sq1, o.clone(), poly],
                [d, d1, z.clone(), odd],
            ],
            (2, 1) => [
                [sq1.clone(), sq.clone(), z.clone(), cross],
                [o.clone(), o.clone(), z.clone(), o.clone()],
                [sq1, sq, o.clone(), poly],
                [d1, d, z.clone(), odd],
            ],
            _ => unreachable!("IndexWord guarantees j != k"),
        };
        Ok(Matrix4(rows))
    }

    pub fn row(&self, i: usize) -> &[N; 4] {
        &self.0[i]
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].to_f64()))
    }
}

/// A curvature quadruple in backend representation: the node state of the
/// counting engine. Children cost five additions each; the full matrix is
/// never materialized along a search path.
#[derive(Clone, PartialEq, Debug)]
pub struct Quad<N> {
    pub entries: [N; 3],
    pub kappa: N,
}

impl<N: Scalar> Quad<N> {
    pub fn from_u128(e: [u128; 4]) -> Self {
        Quad {
            entries: [
                N::from_u128(e[0]),
                N::from_u128(e[1]),
                N::from_u128(e[2]),
            ],
            kappa: N::from_u128(e[3]),
        }
    }

    pub fn from_f64_lossy(q: [f64; 4]) -> Self {
        debug_assert!(matches!(N::BACKEND, Backend::Float64));
        Quad {
            entries: [
                N::from_f64_lossy(q[0]),
                N::from_f64_lossy(q[1]),
                N::from_f64_lossy(q[2]),
            ],
            kappa: N::from_f64_lossy(q[3]),
        }
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.entries[0].to_f64(),
            self.entries[1].to_f64(),
            self.entries[2].to_f64(),
            self.kappa.to_f64(),
        ]
    }

    /// Curvature of the inscribed disk: `alpha + beta + gamma + 2 kappa`.
    pub fn inscribed_value(&self) -> Result<N> {
        let s = N::sum3(&self.entries[0], &self.entries[1], &self.entries[2])?;
        s.checked_add(&self.kappa, "inscribed value")?
            .checked_add(&self.kappa, "inscribed value")
    }

    /// The quadruple after replacing member `j` by the inscribed disk.
    pub fn child(&self, j: Letter) -> Result<Quad<N>> {
        let value = self.inscribed_value()?;
        self.child_with_value(j, &value)
    }

    /// Same as [`Quad::child`] with the parent's inscribed value precomputed.
    pub fn child_with_value(&self, j: Letter, value: &N) -> Result<Quad<N>> {
        let [ka, kb] = j.others();
        let keep_a = &self.entries[ka.index()];
        let keep_b = &self.entries[kb.index()];
        let kappa = keep_a
            .checked_add(keep_b, "child kappa")?
            .checked_add(&self.kappa, "child kappa")?;
        let mut entries = self.entries.clone();
        entries[j.index()] = value.clone();
        Ok(Quad { entries, kappa })
    }

    /// Row-vector times matrix.
    pub fn apply(&self, m: &Matrix4<N>) -> Result<Quad<N>> {
        let g = [
            self.entries[0].clone(),
            self.entries[1].clone(),
            self.entries[2].clone(),
            self.kappa.clone(),
        ];
        let mut out: [N; 4] = std::array::from_fn(|_| N::from_u32(0));
        for (col, slot) in out.iter_mut().enumerate() {
            let mut acc = N::from_u32(0);
            for (row, gi) in g.iter().enumerate() {
                let term = gi.checked_mul(&m.0[row][col], "vector-matrix product")?;
                acc = acc.checked_add(&term, "vector-matrix product")?;
            }
            *slot = acc;
        }
        Ok(Quad {
            entries: [out[0].clone(), out[1].clone(), out[2].clone()],
            kappa: out[3].clone(),
        })
    }
}

/// Applies a matrix to a curvature vector, using the vector's exact view
/// when present (errors loudly on overflow) and floats otherwise.
pub fn apply(g: &CurvatureVector, m: &CurvMatrix) -> Result<CurvatureVector> {
    if let Some(e) = g.exact() {
        let q: Quad<u128> = Quad::from_u128(e);
        let r = q.apply(m)?;
        let out = [r.entries[0], r.entries[1], r.entries[2], r.kappa];
        let v = CurvatureVector::from_exact(out);
        debug_assert!(v.in_gamma(), "matrix action must preserve the kappa identity");
        Ok(v)
    } else {
        let q: Quad<f64> = Quad::from_f64_lossy(g.quadruple());
        let mf = Matrix4::<f64>(m.to_f64().map(|r| r));
        let r = q.apply(&mf)?;
        CurvatureVector::from_quadruple(r.to_f64())
    }
}

/// Applies the word `w` to `g` letter by letter (first letter first) via the
/// cheap child recursion; equal to `apply(g, M_w)` but without forming the
/// matrix.
pub fn apply_word(g: &CurvatureVector, w: &Word) -> Result<CurvatureVector> {
    if let Some(e) = g.exact() {
        let mut q: Quad<u128> = Quad::from_u128(e);
        for &l in w.letters() {
            q = q.child(l)?;
        }
        Ok(CurvatureVector::from_exact([
            q.entries[0],
            q.entries[1],
            q.entries[2],
            q.kappa,
        ]))
    } else {
        let mut q: Quad<f64> = Quad::from_f64_lossy(g.quadruple());
        for &l in w.letters() {
            q = q.child(l)?;
        }
        CurvatureVector::from_quadruple(q.to_f64())
    }
}
