//! The two-component correlation transfer matrix, its monodromy blocks,
//! pseudo-vacua, boundary vectors, permutation unitaries and the
//! four-component OTOC transfer matrix.
//!
//! Leg conventions. A half-width `m` transfer matrix acts on `2m` qubit
//! legs ordered left to right; legs `1..m` come from the daggered circuit
//! component, legs `m+1..2m` from the plain one. Basis index of a folded
//! vector puts leg 1 on the most significant bits. Inhomogeneities are
//! mirror-paired: daggered column `k` carries `ε_k`, plain column `m+j`
//! carries `ε_{m−j+1}`, so the innermost column pair shares `ε_m` and
//! unitarity peels the contractions from the inside out.

use itertools::Itertools;
use ndarray::prelude::*;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gates::{r_check_matrix, Pauli};
use crate::numerics::{
    bilinear, contract, identity, inner, kron, max_abs, vec_norm, CMatrix, CVector, Tensor, ONE,
    ZERO,
};

pub const MAX_M_CORRELATION: usize = 4;
pub const MAX_M_OTOC: usize = 2;

/// Which contraction network a [`TransferMatrix`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmKind {
    Correlation,
    Otoc,
}

/// A state on the folded operator space of half-width `m` (length `4^m`
/// for correlations; the OTOC space uses two stacked copies of it).
#[derive(Debug, Clone)]
pub struct FoldedVector {
    pub m: usize,
    pub vec: CVector,
}

impl FoldedVector {
    pub fn norm(&self) -> f64 {
        vec_norm(&self.vec)
    }
}

/// Dense transfer matrix with its construction parameters.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub m: usize,
    pub lambda: f64,
    pub epsilons: Vec<f64>,
    pub kind: TmKind,
    pub matrix: CMatrix,
    pub normalized: bool,
}

/// Monodromy matrix: the transfer contraction with the two-dimensional
/// auxiliary line left open, split into the four auxiliary blocks.
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub m: usize,
    pub lambda: C64,
    pub epsilons: Vec<f64>,
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
}

impl Monodromy {
    /// Trace over the auxiliary space with the 1/2 normalization.
    pub fn transfer(&self) -> CMatrix {
        (&self.a + &self.d).mapv(|z| z * C64::new(0.5, 0.0))
    }

    /// Full operator on (auxiliary ⊗ folded) space, auxiliary leg first.
    pub fn full_operator(&self) -> CMatrix {
        let dim = self.a.nrows();
        let mut t = CMatrix::zeros((2 * dim, 2 * dim));
        for (block, (ba, bb)) in [(&self.a, (0, 0)), (&self.b, (0, 1)), (&self.c, (1, 0)), (&self.d, (1, 1))] {
            let mut view = t.slice_mut(s![ba * dim..(ba + 1) * dim, bb * dim..(bb + 1) * dim]);
            view.assign(block);
        }
        t
    }
}

fn check_m(m: usize, kind: TmKind) -> Result<()> {
    let cap = match kind {
        TmKind::Correlation => MAX_M_CORRELATION,
        TmKind::Otoc => MAX_M_OTOC,
    };
    if m == 0 || m > cap {
        return Err(Error::ResourceCap {
            what: "transfer-matrix half-width m",
            value: m,
            cap,
        });
    }
    Ok(())
}

fn check_eps(m: usize, eps: &[f64]) -> Result<()> {
    if eps.len() != m {
        return Err(Error::Domain(format!(
            "need {m} inhomogeneities, got {}",
            eps.len()
        )));
    }
    Ok(())
}

/// Column tensor of the daggered component with legs `[a_in, i, j, a_out]`:
/// entries `R̆(−u)_{(a_in, i), (j, a_out)}`.
fn column_dagger(u: C64) -> Tensor {
    let r = r_check_matrix(-u);
    let mut data = ArrayD::zeros(IxDyn(&[2, 2, 2, 2]));
    for a in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for b in 0..2 {
                    data[IxDyn(&[a, i, j, b])] = r[[a * 2 + i, j * 2 + b]];
                }
            }
        }
    }
    Tensor::new(data)
}

/// Column tensor of the plain component with legs `[a_in, i, j, a_out]`:
/// entries `R̆(u)_{(j, a_in), (a_out, i)}`.
fn column_plain(u: C64) -> Tensor {
    let r = r_check_matrix(u);
    let mut data = ArrayD::zeros(IxDyn(&[2, 2, 2, 2]));
    for a in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for b in 0..2 {
                    data[IxDyn(&[a, i, j, b])] = r[[j * 2 + a, b * 2 + i]];
                }
            }
        }
    }
    Tensor::new(data)
}

/// Chain the 2m column tensors, returning legs
/// `[a_in, i_1..i_{2m}, j_1..j_{2m}, a_out]`.
fn monodromy_tensor(m: usize, lambda: C64, eps: &[f64]) -> Result<Tensor> {
    let mut cols: Vec<Tensor> = Vec::with_capacity(2 * m);
    for k in 0..m {
        cols.push(column_dagger(lambda - C64::new(eps[k], 0.0)));
    }
    for j in 0..m {
        cols.push(column_plain(lambda - C64::new(eps[m - 1 - j], 0.0)));
    }
    let mut t = cols[0].clone();
    for col in &cols[1..] {
        let last = t.rank() - 1;
        t = contract(&t, col, &[(last, 0)])?;
    }
    // legs now [a_in, i1, j1, i2, j2, ..., a_out]; group the i's then j's
    let n_legs = t.rank();
    let mut perm: Vec<usize> = vec![0];
    for k in 0..2 * m {
        perm.push(1 + 2 * k);
    }
    for k in 0..2 * m {
        perm.push(2 + 2 * k);
    }
    perm.push(n_legs - 1);
    let data = t.data.permuted_axes(IxDyn(&perm));
    Ok(Tensor::new(data.as_standard_layout().into_owned()))
}

/// Build the monodromy blocks at a (possibly complex) spectral parameter.
///
/// Block assignment is fixed by the vacuum relations: `A` has eigenvalue
/// `∏ i(λ−ε_k)/(1+i(λ−ε_k))` on |0…0 1…1⟩, `C` annihilates it, and `B`
/// raises the pseudo-vacuum ladder.
pub fn build_monodromy(m: usize, lambda: C64, eps: &[f64]) -> Result<Monodromy> {
    check_m(m, TmKind::Correlation)?;
    check_eps(m, eps)?;
    let t = monodromy_tensor(m, lambda, eps)?;
    let dim = 1usize << (2 * m);
    let flat = t.to_matrix(2 * m + 1); // rows: (a_in, i-legs); cols: (j-legs, a_out)
    let mut blocks = [
        CMatrix::zeros((dim, dim)),
        CMatrix::zeros((dim, dim)),
        CMatrix::zeros((dim, dim)),
        CMatrix::zeros((dim, dim)),
    ];
    for a in 0..2 {
        for b in 0..2 {
            let mut blk = CMatrix::zeros((dim, dim));
            for i in 0..dim {
                for j in 0..dim {
                    blk[[i, j]] = flat[[a * dim + i, j * 2 + b]];
                }
            }
            blocks[a * 2 + b] = blk;
        }
    }
    let [a, b, c, d] = blocks;
    Ok(Monodromy {
        m,
        lambda,
        epsilons: eps.to_vec(),
        a,
        b,
        c,
        d,
    })
}

/// Build the normalized transfer matrix of the requested kind.
pub fn build_transfer(m: usize, lambda: f64, eps: &[f64], kind: TmKind) -> Result<TransferMatrix> {
    check_m(m, kind)?;
    check_eps(m, eps)?;
    let mono = build_monodromy(m, C64::new(lambda, 0.0), eps)?;
    let matrix = match kind {
        TmKind::Correlation => mono.transfer(),
        TmKind::Otoc => {
            let raw = kron(&mono.a, &mono.a)
                + kron(&mono.b, &mono.c)
                + kron(&mono.c, &mono.b)
                + kron(&mono.d, &mono.d);
            // normalize so the doubly contracted vacuum has eigenvalue exactly 1
            let unital = otoc_pseudo_vacuum(m, 0, 0)?;
            let image = raw.dot(&unital.vec);
            let scale = inner(&unital.vec, &image);
            raw.mapv(|z| z / scale)
        }
    };
    Ok(TransferMatrix {
        m,
        lambda,
        epsilons: eps.to_vec(),
        kind,
        matrix,
        normalized: true,
    })
}

/// Pseudo-vacuum |∅⟩_{m,n}: n polarized |0⟩ legs, a rainbow of `m − n`
/// nested identity arcs pairing leg `i` with leg `2m+1−i` (each weighted
/// 1/√2), and n polarized |1⟩ legs. An optional permutation is applied as
/// its exchange unitary.
pub fn pseudo_vacuum(m: usize, n: usize, perm: Option<&[usize]>, eps: Option<&[f64]>) -> Result<FoldedVector> {
    check_m(m, TmKind::Correlation)?;
    if n > m {
        return Err(Error::InvalidVacuum(format!("polarization n = {n} exceeds m = {m}")));
    }
    let legs = 2 * m;
    let dim = 1usize << legs;
    let weight = (0.5f64).powf((m - n) as f64 / 2.0);
    let mut vec = CVector::zeros(dim);
    'outer: for idx in 0..dim {
        let bit = |leg: usize| (idx >> (legs - 1 - leg)) & 1; // leg 0-based from the left
        for k in 0..n {
            if bit(k) != 0 {
                continue 'outer;
            }
            if bit(legs - 1 - k) != 1 {
                continue 'outer;
            }
        }
        for k in n..m {
            if bit(k) != bit(legs - 1 - k) {
                continue 'outer;
            }
        }
        vec[idx] = C64::new(weight, 0.0);
    }
    let mut state = FoldedVector { m, vec };
    if let Some(p) = perm {
        let eps = eps.ok_or_else(|| {
            Error::InvalidVacuum("permuted vacuum requires the inhomogeneity list".into())
        })?;
        check_eps(m, eps)?;
        let u = permutation_unitary(m, p, eps)?;
        // The orbit member associated with P carries the vacuum through
        // τ(λ|ε) = U_P† τ(λ|ε_P) U_P, hence acts with U_P†.
        state = FoldedVector {
            m,
            vec: u.t().mapv(|z| z.conj()).dot(&state.vec),
        };
    }
    Ok(state)
}

/// Boundary vector of a one-site operator: rainbow arcs with σ_α replacing
/// one arc, overall factor 2^{−m/2}. The ket (time-0 corner of the causal
/// diamond) carries σ on the innermost arc (legs m, m+1); the bra (time-t
/// corner, adjacent to the auxiliary trace) carries it on the outermost
/// arc (legs 1, 2m) with the reversed leg labelling, i.e. transposed.
/// This placement is pinned by the circuit-oracle cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Ket,
    Bra,
}

pub fn boundary_vector(m: usize, alpha: Pauli, side: Side) -> Result<FoldedVector> {
    check_m(m, TmKind::Correlation)?;
    let legs = 2 * m;
    let dim = 1usize << legs;
    let sigma = alpha.matrix();
    let weight = (0.5f64).powf(m as f64 / 2.0);
    let mut vec = CVector::zeros(dim);
    let arc_range: std::ops::Range<usize> = match side {
        Side::Ket => 0..m - 1,
        Side::Bra => 1..m,
    };
    'outer: for idx in 0..dim {
        let bit = |leg: usize| (idx >> (legs - 1 - leg)) & 1;
        for k in arc_range.clone() {
            if bit(k) != bit(legs - 1 - k) {
                continue 'outer;
            }
        }
        let amp = match side {
            Side::Ket => sigma[[bit(m - 1), bit(m)]],
            Side::Bra => sigma[[bit(legs - 1), bit(0)]],
        };
        vec[idx] = amp * C64::new(weight, 0.0);
    }
    Ok(FoldedVector { m, vec })
}

/// Embed a two-qubit operator on adjacent legs `(leg, leg+1)` of a
/// `2m`-leg folded space.
fn embed_adjacent(g: &CMatrix, leg: usize, total_legs: usize) -> CMatrix {
    let left = identity(1usize << leg);
    let right = identity(1usize << (total_legs - leg - 2));
    kron(&kron(&left, g), &right)
}

/// Unitary exchanging inhomogeneities at columns `pos` and `pos+1`
/// (0-based): R̆(Δ) on the daggered legs and R̆(−Δ) on the mirrored plain
/// legs, with Δ = ε_pos − ε_{pos+1}.
pub fn exchange_unitary(m: usize, pos: usize, delta: f64) -> Result<CMatrix> {
    if pos + 1 >= m {
        return Err(Error::Domain(format!("exchange position {pos} out of range for m = {m}")));
    }
    let legs = 2 * m;
    let d = C64::new(delta, 0.0);
    let left = embed_adjacent(&r_check_matrix(d), pos, legs);
    let mirror_leg = legs - 2 - pos;
    let right = embed_adjacent(&r_check_matrix(-d), mirror_leg, legs);
    Ok(left.dot(&right))
}

/// Unitary `U_P` with `τ(λ|ε) = U_P† τ(λ|ε_P) U_P`, assembled from
/// adjacent exchanges applied left to right along a decomposition of `P`.
pub fn permutation_unitary(m: usize, perm: &[usize], eps: &[f64]) -> Result<CMatrix> {
    check_eps(m, eps)?;
    if perm.len() != m || {
        let mut seen = vec![false; m];
        perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
    } {
        return Err(Error::InvalidVacuum(format!("invalid permutation {perm:?} for m = {m}")));
    }
    let dim = 1usize << (2 * m);
    let mut u = identity(dim);
    // Bubble the identity arrangement into `perm`, tracking which original
    // index currently sits at each column.
    let mut cur: Vec<usize> = (0..m).collect();
    for target in 0..m {
        let from = cur.iter().position(|&v| v == perm[target]).expect("valid permutation");
        for pos in (target..from).rev() {
            let delta = eps[cur[pos]] - eps[cur[pos + 1]];
            let w = exchange_unitary(m, pos, delta)?;
            u = w.dot(&u);
            cur.swap(pos, pos + 1);
        }
    }
    Ok(u)
}

/// A deduplicated member of the pseudo-vacuum orbit.
#[derive(Debug, Clone)]
pub struct OrbitState {
    pub state: FoldedVector,
    /// Original indices of the inhomogeneities the eigenvalue depends on.
    pub selection: Vec<usize>,
    /// One permutation generating this member.
    pub perm: Vec<usize>,
}

/// Generate `U_P |∅⟩_{m,n}` over all permutations and deduplicate by
/// overlap, returning the `C(m, n)` distinct pseudo-vacua.
pub fn vacuum_orbit(m: usize, n: usize, eps: &[f64]) -> Result<Vec<OrbitState>> {
    check_m(m, TmKind::Correlation)?;
    check_eps(m, eps)?;
    let mut gap = f64::INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            gap = gap.min((eps[i] - eps[j]).abs());
        }
    }
    if m > 1 && gap < 1e-6 {
        return Err(Error::IllConditionedOrbit { gap });
    }
    let mut out: Vec<OrbitState> = Vec::new();
    for perm in (0..m).permutations(m) {
        let state = pseudo_vacuum(m, n, Some(&perm), Some(eps))?;
        let nrm = state.norm();
        let dup = out.iter().any(|o| {
            inner(&o.state.vec, &state.vec).norm() / (o.state.norm() * nrm) > 1.0 - 1e-9
        });
        if !dup {
            let mut selection: Vec<usize> = perm[..n].to_vec();
            selection.sort_unstable();
            out.push(OrbitState {
                state,
                selection,
                perm,
            });
        }
    }
    let expected = binomial(m, n);
    if out.len() != expected {
        return Err(Error::NumericalFailure {
            context: format!("vacuum orbit m={m} n={n}"),
            detail: format!("found {} distinct states, expected {}", out.len(), expected),
        });
    }
    Ok(out)
}

pub fn binomial(m: usize, n: usize) -> usize {
    if n > m {
        return 0;
    }
    let mut acc = 1usize;
    for k in 0..n.min(m - n) {
        acc = acc * (m - k) / (k + 1);
    }
    acc
}

/// Correlator from transfer-matrix powers:
/// `(σ_β,m| τ_m^steps |σ_α,m)`.
pub fn correlation_via_tm(
    m: usize,
    steps: usize,
    alpha: Pauli,
    beta: Pauli,
    lambda: f64,
    eps: &[f64],
) -> Result<C64> {
    let tm = build_transfer(m, lambda, eps, TmKind::Correlation)?;
    let ket = boundary_vector(m, alpha, Side::Ket)?;
    let bra = boundary_vector(m, beta, Side::Bra)?;
    let mut v = ket.vec;
    for _ in 0..steps {
        v = tm.matrix.dot(&v);
    }
    Ok(bilinear(&bra.vec, &v))
}

/// OTOC pseudo-vacuum |∅⟩_{m,n} ⊗ |∅⟩_{m,l} on the doubled folded space.
pub fn otoc_pseudo_vacuum(m: usize, n: usize, l: usize) -> Result<FoldedVector> {
    check_m(m, TmKind::Otoc)?;
    let v1 = pseudo_vacuum(m, n, None, None)?;
    let v2 = pseudo_vacuum(m, l, None, None)?;
    let dim = v1.vec.len();
    let mut vec = CVector::zeros(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            vec[i * dim + j] = v1.vec[i] * v2.vec[j];
        }
    }
    Ok(FoldedVector { m, vec })
}

/// OTOC boundary vectors. At the time-0 corner the two operator insertions
/// straddle the two circuit copies, so the ket pairs the copies crosswise;
/// at the time-t side the insertions stay within each copy, so the bra is
/// a plain product of one-copy boundary vectors.
pub fn otoc_boundary_vector(m: usize, alpha: Pauli, side: Side) -> Result<FoldedVector> {
    check_m(m, TmKind::Otoc)?;
    match side {
        Side::Bra => {
            let b = boundary_vector(m, alpha, Side::Bra)?;
            let dim = b.vec.len();
            let mut vec = CVector::zeros(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    vec[i * dim + j] = b.vec[i] * b.vec[j];
                }
            }
            Ok(FoldedVector { m, vec })
        }
        Side::Ket => {
            let legs = 2 * m;
            let dim = 1usize << legs;
            let sigma = alpha.matrix();
            let weight = (0.5f64).powf(m as f64);
            let mut vec = CVector::zeros(dim * dim);
            for ia in 0..dim {
                let bit_a = |leg: usize| (ia >> (legs - 1 - leg)) & 1;
                'inner: for ib in 0..dim {
                    let bit_b = |leg: usize| (ib >> (legs - 1 - leg)) & 1;
                    for k in 1..m {
                        if bit_a(k) != bit_b(legs - 1 - k) || bit_b(k) != bit_a(legs - 1 - k) {
                            continue 'inner;
                        }
                    }
                    let amp = sigma[[bit_a(0), bit_b(legs - 1)]] * sigma[[bit_b(0), bit_a(legs - 1)]];
                    vec[ia * dim + ib] = amp * C64::new(weight, 0.0);
                }
            }
            Ok(FoldedVector { m, vec })
        }
    }
}

/// OTOC from transfer-matrix powers, normalized so the identity insertion
/// gives exactly 1.
pub fn otoc_via_tm(
    m: usize,
    steps: usize,
    alpha: Pauli,
    beta: Pauli,
    lambda: f64,
    eps: &[f64],
) -> Result<C64> {
    let tm = build_transfer(m, lambda, eps, TmKind::Otoc)?;
    let ket = otoc_boundary_vector(m, alpha, Side::Ket)?;
    let bra = otoc_boundary_vector(m, beta, Side::Bra)?;
    let ket0 = otoc_boundary_vector(m, Pauli::I, Side::Ket)?;
    let bra0 = otoc_boundary_vector(m, Pauli::I, Side::Bra)?;
    let norm = bilinear(&bra0.vec, &ket0.vec);
    let mut v = ket.vec;
    for _ in 0..steps {
        v = tm.matrix.dot(&v);
    }
    Ok(bilinear(&bra.vec, &v) / norm)
}

/// Max-norm residual of the braided exchange relation
/// `R̆₁₂(λ−μ) T₁(μ) T₂(λ) = T₁(λ) T₂(μ) R̆₁₂(λ−μ)`
/// on the doubled auxiliary space. Conjugating by `R̆` swaps the spectral
/// parameters; tracing both auxiliary legs then yields
/// `τ(λ)τ(μ) = τ(μ)τ(λ)`.
pub fn rtt_residual(m: usize, lambda: f64, mu: f64, eps: &[f64]) -> Result<f64> {
    let t_l = build_monodromy(m, C64::new(lambda, 0.0), eps)?;
    let t_m = build_monodromy(m, C64::new(mu, 0.0), eps)?;
    let dim = t_l.a.nrows();
    // spaces ordered (aux₁, aux₂, folded)
    let embed = |mono: &Monodromy, which: usize| -> CMatrix {
        let mut out = CMatrix::zeros((4 * dim, 4 * dim));
        let blocks = [[&mono.a, &mono.b], [&mono.c, &mono.d]];
        for a_row in 0..2 {
            for a_col in 0..2 {
                let blk = blocks[a_row][a_col];
                for o in 0..2 {
                    let (r_aux, c_aux) = if which == 0 {
                        (a_row * 2 + o, a_col * 2 + o)
                    } else {
                        (o * 2 + a_row, o * 2 + a_col)
                    };
                    let mut view =
                        out.slice_mut(s![r_aux * dim..(r_aux + 1) * dim, c_aux * dim..(c_aux + 1) * dim]);
                    view.zip_mut_with(blk, |t, &v| *t += v);
                }
            }
        }
        out
    };
    let t1_mu = embed(&t_m, 0);
    let t2_l = embed(&t_l, 1);
    let t1_l = embed(&t_l, 0);
    let t2_mu = embed(&t_m, 1);
    let r = kron(&r_check_matrix(C64::new(lambda - mu, 0.0)), &identity(dim));
    let lhs = r.dot(&t1_mu).dot(&t2_l);
    let rhs = t1_l.dot(&t2_mu).dot(&r);
    Ok(max_abs(&(&lhs - &rhs)))
}

/// Max-norm of `[B(λ), B(μ)]`.
pub fn b_commutator_residual(m: usize, lambda: f64, mu: f64, eps: &[f64]) -> Result<f64> {
    let bl = build_monodromy(m, C64::new(lambda, 0.0), eps)?.b;
    let bm = build_monodromy(m, C64::new(mu, 0.0), eps)?.b;
    Ok(max_abs(&(&bl.dot(&bm) - &bm.dot(&bl))))
}

/// Vacuum eigenvalue `½ (∏_k a_k + ∏_k d_k)` over the selected arguments
/// `λ − ε` with `a = iu/(1+iu)`, `d = −iu/(1−iu)`.
pub fn vacuum_eigenvalue(lambda: C64, selected_eps: &[f64]) -> C64 {
    let i = C64::new(0.0, 1.0);
    let mut pa = ONE;
    let mut pd = ONE;
    for &e in selected_eps {
        let u = lambda - C64::new(e, 0.0);
        pa *= i * u / (ONE + i * u);
        pd *= -i * u / (ONE - i * u);
    }
    (pa + pd) * C64::new(0.5, 0.0)
}
