//! Dense complex linear-algebra kernel.
//!
//! Everything downstream works with plain [`ndarray`] containers of
//! `Complex64`; this module adds the handful of operations the rest of the
//! crate relies on: general tensor contraction by leg pairs, matrix powers,
//! backward-stable eigenvalue extraction (LAPACK Schur/QR iteration via
//! `zgeev`), SVD-based numerical rank and single-linkage eigenvalue
//! clustering.

use ndarray::prelude::*;
use ndarray_linalg::{Eig, SVD};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

/// Kronecker product, first factor on the most significant index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = CMatrix::zeros((ra * rb, ca * cb));
    for ia in 0..ra {
        for ja in 0..ca {
            let f = a[[ia, ja]];
            if f == ZERO {
                continue;
            }
            let mut block = out.slice_mut(s![ia * rb..(ia + 1) * rb, ja * cb..(ja + 1) * cb]);
            block.zip_mut_with(b, |o, &v| *o = f * v);
        }
    }
    out
}

/// Largest entry modulus.
pub fn max_abs<D: Dimension>(a: &Array<C64, D>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Plain bilinear pairing `Σ_i a_i b_i` (no conjugation).
pub fn bilinear(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian inner product `Σ_i conj(a_i) b_i`.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn ensure_finite<D: Dimension>(a: &Array<C64, D>, context: &str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalFailure {
            context: context.to_string(),
            detail: "non-finite entries in result".to_string(),
        })
    }
}

/// Dense complex tensor with an ordered list of legs.
#[derive(Debug, Clone)]
pub struct Tensor {
    pub data: ArrayD<C64>,
}

impl Tensor {
    pub fn new(data: ArrayD<C64>) -> Self {
        Tensor { data }
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Tensor {
            data: m.clone().into_dyn(),
        }
    }

    /// Reinterpret a matrix as a tensor with the given leg dimensions,
    /// row legs first.
    pub fn from_matrix_legs(m: &CMatrix, row_legs: &[usize], col_legs: &[usize]) -> Result<Self> {
        let shape: Vec<usize> = row_legs.iter().chain(col_legs.iter()).copied().collect();
        let total: usize = shape.iter().product();
        if total != m.len() {
            return Err(Error::NumericalFailure {
                context: "tensor reshape".into(),
                detail: format!("legs {:?} incompatible with matrix of {} entries", shape, m.len()),
            });
        }
        let data = m
            .clone()
            .into_dyn()
            .into_shape_with_order(IxDyn(&shape))
            .expect("checked length");
        Ok(Tensor { data })
    }

    pub fn rank(&self) -> usize {
        self.data.ndim()
    }

    pub fn shape(&self) -> &[usize] {
        self.data.shape()
    }

    /// Flatten to a matrix with the first `row_rank` legs as rows.
    pub fn to_matrix(&self, row_rank: usize) -> CMatrix {
        let rows: usize = self.shape()[..row_rank].iter().product();
        let cols: usize = self.shape()[row_rank..].iter().product();
        let std = self.data.as_standard_layout().into_owned();
        std.into_shape_with_order((rows, cols)).expect("consistent shape")
    }

    pub fn to_vector(&self) -> CVector {
        let n = self.data.len();
        let std = self.data.as_standard_layout().into_owned();
        std.into_shape_with_order(n).expect("consistent shape")
    }
}

/// Contract `a` and `b` over the given `(leg of a, leg of b)` pairs.
///
/// The result carries the uncontracted legs of `a` followed by those of
/// `b`, each group in its original order. Legs are 0-indexed.
pub fn contract(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
    let sa = a.shape().to_vec();
    let sb = b.shape().to_vec();
    let mut used_a = vec![false; sa.len()];
    let mut used_b = vec![false; sb.len()];
    for &(la, lb) in pairs {
        if la >= sa.len() || lb >= sb.len() || used_a[la] || used_b[lb] {
            return Err(Error::ContractShape {
                left_leg: la,
                left_dim: sa.get(la).copied().unwrap_or(0),
                right_leg: lb,
                right_dim: sb.get(lb).copied().unwrap_or(0),
            });
        }
        if sa[la] != sb[lb] {
            return Err(Error::ContractShape {
                left_leg: la,
                left_dim: sa[la],
                right_leg: lb,
                right_dim: sb[lb],
            });
        }
        used_a[la] = true;
        used_b[lb] = true;
    }

    let free_a: Vec<usize> = (0..sa.len()).filter(|&l| !used_a[l]).collect();
    let free_b: Vec<usize> = (0..sb.len()).filter(|&l| !used_b[l]).collect();

    // Permute a to [free..., contracted...] and b to [contracted..., free...],
    // then contract as a single matrix product.
    let perm_a: Vec<usize> = free_a.iter().chain(pairs.iter().map(|(la, _)| la)).copied().collect();
    let perm_b: Vec<usize> = pairs.iter().map(|(_, lb)| *lb).chain(free_b.iter().copied()).collect();

    let at = a.data.clone().permuted_axes(IxDyn(&perm_a));
    let bt = b.data.clone().permuted_axes(IxDyn(&perm_b));

    let m: usize = free_a.iter().map(|&l| sa[l]).product();
    let k: usize = pairs.iter().map(|&(la, _)| sa[la]).product();
    let n: usize = free_b.iter().map(|&l| sb[l]).product();

    let am = at
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((m, k))
        .expect("consistent shape");
    let bm = bt
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((k, n))
        .expect("consistent shape");
    let cm = am.dot(&bm);

    let mut out_shape: Vec<usize> = free_a.iter().map(|&l| sa[l]).collect();
    out_shape.extend(free_b.iter().map(|&l| sb[l]));
    if out_shape.is_empty() {
        out_shape.push(1);
        let data = cm.into_dyn().into_shape_with_order(IxDyn(&out_shape)).expect("scalar");
        return Ok(Tensor { data });
    }
    let data = cm
        .into_dyn()
        .into_shape_with_order(IxDyn(&out_shape))
        .expect("consistent shape");
    ensure_finite(&data, "contract")?;
    Ok(Tensor { data })
}

/// `k`-fold matrix product; `k = 0` gives the identity.
pub fn mat_power(a: &CMatrix, k: usize) -> Result<CMatrix> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::NonSquare { rows: r, cols: c });
    }
    let mut result = identity(r);
    let mut base = a.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.dot(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.dot(&base);
        }
    }
    ensure_finite(&result, "mat_power")?;
    Ok(result)
}

/// All eigenvalues with algebraic multiplicity, from the diagonal of the
/// unitarily-similar triangular factor (LAPACK QR iteration on the
/// Hessenberg form).
pub fn eigenvalues(a: &CMatrix) -> Result<CVector> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::NonSquare { rows: r, cols: c });
    }
    if r == 0 {
        return Ok(CVector::zeros(0));
    }
    let (vals, _) = a.eig().map_err(|e| Error::NumericalFailure {
        context: format!("eigenvalues of {r}x{r} matrix"),
        detail: e.to_string(),
    })?;
    ensure_finite(&vals, "eigenvalues")?;
    Ok(vals)
}

pub fn singular_values(a: &CMatrix) -> Result<Array1<f64>> {
    let (_, s, _) = a.svd(false, false).map_err(|e| Error::NumericalFailure {
        context: format!("svd of {}x{} matrix", a.nrows(), a.ncols()),
        detail: e.to_string(),
    })?;
    Ok(s)
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Domain(format!("rank rel_tol {rel_tol} outside (0, 1)")));
    }
    let s = singular_values(a)?;
    let smax = s.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&v| v > rel_tol * smax).count())
}

pub fn spectral_radius(vals: &CVector) -> f64 {
    vals.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Single-linkage clustering of complex values.
///
/// Two values join the same cluster if they are within `tol` of each other,
/// directly or through a chain. Each cluster reports its mean and size;
/// clusters are sorted by `(re, im)` of the mean for determinism.
pub fn cluster_eigenvalues(vals: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let n = vals.len();
    if n == 0 {
        return Vec::new();
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] - vals[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut acc: std::collections::HashMap<usize, (C64, usize)> = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let e = acc.entry(r).or_insert((ZERO, 0));
        e.0 += vals[i];
        e.1 += 1;
    }
    let mut out: Vec<(C64, usize)> = acc
        .into_values()
        .map(|(sum, count)| (sum / count as f64, count))
        .collect();
    out.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("finite eigenvalues")
    });
    out
}
