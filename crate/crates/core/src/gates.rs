//! Elementary two-qubit gates: the Yang-Baxter `R̆`-matrix, the braiding
//! relation, the Trotter identity tying the circuit to the XXX chain, and
//! the spin-1 Lax correspondence of the doubled gate.
//!
//! Basis order on two qubits is |00⟩, |01⟩, |10⟩, |11⟩ with the left factor
//! on the left circuit leg. All other modules inherit this convention.

use ndarray::prelude::*;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{self, identity, kron, max_abs, CMatrix, ONE, ZERO};

/// One-site operator basis {σ₀, σₓ, σᵧ, σ_z}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Pauli> {
        Pauli::ALL.get(i).copied()
    }

    pub fn matrix(self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => array![[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => array![[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => array![[ZERO, -i], [i, ZERO]],
            Pauli::Z => array![[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "0",
            Pauli::X => "x",
            Pauli::Y => "y",
            Pauli::Z => "z",
        }
    }
}

impl std::str::FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pauli> {
        match s {
            "0" | "i" | "I" | "id" => Ok(Pauli::I),
            "x" | "X" => Ok(Pauli::X),
            "y" | "Y" => Ok(Pauli::Y),
            "z" | "Z" => Ok(Pauli::Z),
            other => Err(Error::Domain(format!("unknown Pauli label '{other}'"))),
        }
    }
}

/// Two-qubit permutation (swap) operator.
pub fn permutation_op() -> CMatrix {
    let mut p = CMatrix::zeros((4, 4));
    for a in 0..2 {
        for b in 0..2 {
            p[[a * 2 + b, b * 2 + a]] = ONE;
        }
    }
    p
}

/// `R̆(u) = (𝟙 + i·u·P) / (1 + i·u)` for a possibly complex argument.
///
/// Complex arguments are needed when evaluating monodromy blocks at Bethe
/// rapidities; the matrix is unitary only for real `u`.
pub fn r_check_matrix(u: C64) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let denom = ONE + i * u;
    let p = permutation_op();
    let mut m = identity(4);
    m.zip_mut_with(&p, |e, &pe| *e = (*e + i * u * pe) / denom);
    m
}

/// A two-qubit circuit gate `R̆(λ − ε)` with its spectral parameter and
/// inhomogeneity stored separately.
#[derive(Debug, Clone)]
pub struct Gate {
    pub matrix: CMatrix,
    pub lambda: f64,
    pub epsilon: f64,
}

impl Gate {
    pub fn argument(&self) -> f64 {
        self.lambda - self.epsilon
    }
}

/// Build the unitary gate `R̆(λ − ε)`.
pub fn r_check(lambda: f64, epsilon: f64) -> Gate {
    Gate {
        matrix: r_check_matrix(C64::new(lambda - epsilon, 0.0)),
        lambda,
        epsilon,
    }
}

fn embed_12(g: &CMatrix) -> CMatrix {
    kron(g, &identity(2))
}

fn embed_23(g: &CMatrix) -> CMatrix {
    kron(&identity(2), g)
}

/// Max-norm residual of the braiding relation
/// `R̆₁₂(λ) R̆₂₃(λ+μ) R̆₁₂(μ) = R̆₂₃(μ) R̆₁₂(λ+μ) R̆₂₃(λ)`
/// on three sites.
pub fn check_braiding(lambda: f64, mu: f64) -> f64 {
    let r12 = |x: f64| embed_12(&r_check_matrix(C64::new(x, 0.0)));
    let r23 = |x: f64| embed_23(&r_check_matrix(C64::new(x, 0.0)));
    let lhs = r12(lambda).dot(&r23(lambda + mu)).dot(&r12(mu));
    let rhs = r23(mu).dot(&r12(lambda + mu)).dot(&r23(lambda));
    max_abs(&(&lhs - &rhs))
}

/// Two-site XXX coupling `h = −J (σₓσₓ + σᵧσᵧ + σ_zσ_z)`.
pub fn xxx_coupling(j: f64) -> CMatrix {
    let mut h = CMatrix::zeros((4, 4));
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        let m = p.matrix();
        h = h + kron(&m, &m);
    }
    h.mapv(|z| z * C64::new(-j, 0.0))
}

/// Gate and scalar phase with `phase · R̆(tan 2J·dt) = exp(−i·dt·h)`.
pub fn trotter_gate(j: f64, dt: f64) -> Result<(Gate, C64)> {
    let angle = 2.0 * j * dt;
    if !(angle.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "2·J·dt = {angle} reaches the tan singularity at ±π/2"
        )));
    }
    let arg = angle.tan();
    let gate = Gate {
        matrix: r_check_matrix(C64::new(arg, 0.0)),
        lambda: arg,
        epsilon: 0.0,
    };
    let phase = C64::new(0.0, j * dt).exp();
    Ok((gate, phase))
}

/// Contract one `R̆(−λ)` column against one `R̆(λ)` column into the doubled
/// gate acting on (auxiliary qubit) ⊗ (one-site operator space), and return
/// the maximum deviation from its closed form: the identity operator passes
/// through untouched, while on the Pauli sector the doubled gate acts as
/// `(2λ/(1+λ²)) (λ δ_{αβ} δ_{ab} + Σ_γ ε_{αβγ} (σ_γ)_{ab})` — the spin-1
/// Lax matrix elements.
pub fn check_spin1_lax(lambda: f64) -> f64 {
    let l = C64::new(lambda, 0.0);
    let rm = r_check_matrix(-l); // indices ((a,i1),(j1,c))
    let rp = r_check_matrix(l); // indices ((j2,c),(b,i2))

    // M[a,b; α,β] = Σ (σ_α)_{i2 i1} L[a,i1,j1,i2,j2,b] (σ_β)_{j1 j2}
    let sandwich = |alpha: Pauli, beta: Pauli| -> CMatrix {
        let sa = alpha.matrix();
        let sb = beta.matrix();
        let mut m = CMatrix::zeros((2, 2));
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = ZERO;
                for i1 in 0..2 {
                    for j1 in 0..2 {
                        for i2 in 0..2 {
                            for j2 in 0..2 {
                                for c in 0..2 {
                                    acc += sa[[i2, i1]]
                                        * rm[[a * 2 + i1, j1 * 2 + c]]
                                        * rp[[j2 * 2 + c, b * 2 + i2]]
                                        * sb[[j1, j2]];
                                }
                            }
                        }
                    }
                }
                m[[a, b]] = acc;
            }
        }
        m
    };

    let levi = |a: usize, b: usize, c: usize| -> f64 {
        match (a, b, c) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
            (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
            _ => 0.0,
        }
    };

    let mut worst: f64 = 0.0;
    for alpha in Pauli::ALL {
        for beta in Pauli::ALL {
            let got = sandwich(alpha, beta);

            // General closed form of the doubled gate, valid for every pair:
            // [Tr(σ_α) σ_β − iλ [σ_α, σ_β] + λ² Tr(σ_α σ_β) 𝟙] / (1 + λ²).
            let sa = alpha.matrix();
            let sb = beta.matrix();
            let comm = sa.dot(&sb) - sb.dot(&sa);
            let tr_a: C64 = (0..2).map(|k| sa[[k, k]]).sum();
            let tr_ab: C64 = sa.dot(&sb).diag().sum();
            let denom = C64::new(1.0 + lambda * lambda, 0.0);
            let general = (sb.mapv(|z| z * tr_a) - comm.mapv(|z| z * C64::new(0.0, lambda))
                + identity(2).mapv(|z| z * tr_ab * C64::new(lambda * lambda, 0.0)))
            .mapv(|z| z / denom);
            worst = worst.max(max_abs(&(&got - &general)));

            // Identity input: trivial channel.
            if beta == Pauli::I {
                let expected = identity(2).mapv(|z| z * tr_a);
                worst = worst.max(max_abs(&(&got - &expected)));
            }

            // Pauli sector: spin-1 Lax matrix elements.
            if alpha != Pauli::I && beta != Pauli::I {
                let (ai, bi) = (alpha.index(), beta.index());
                let pref = C64::new(2.0 * lambda / (1.0 + lambda * lambda), 0.0);
                let mut expected = CMatrix::zeros((2, 2));
                if ai == bi {
                    expected = identity(2).mapv(|z| z * C64::new(lambda, 0.0));
                }
                for (gi, gp) in [(1, Pauli::X), (2, Pauli::Y), (3, Pauli::Z)] {
                    let e = levi(ai, bi, gi);
                    if e != 0.0 {
                        expected = expected + gp.matrix().mapv(|z| z * C64::new(e, 0.0));
                    }
                }
                let expected = expected.mapv(|z| z * pref);
                worst = worst.max(max_abs(&(&got - &expected)));
            }
        }
    }
    worst
}

/// Max-norm unitarity defect `‖G G† − 𝟙‖_max`.
pub fn unitarity_residual(g: &CMatrix) -> f64 {
    let gdag = g.t().mapv(|z| z.conj());
    let prod = g.dot(&gdag);
    max_abs(&(&prod - &identity(g.nrows())))
}

pub use numerics::I as IMAG;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Power-series matrix exponential, independent of the tan identity.
    fn expm_series(a: &CMatrix) -> CMatrix {
        let n = a.nrows();
        let mut term = identity(n);
        let mut sum = identity(n);
        for k in 1..60 {
            term = term.dot(a).mapv(|z| z / C64::new(k as f64, 0.0));
            sum = sum + &term;
            if max_abs(&term) < 1e-300 {
                break;
            }
        }
        sum
    }

    #[test]
    fn gate_at_zero_argument_is_identity() {
        let g = r_check(0.0, 0.0);
        assert!(max_abs(&(&g.matrix - &identity(4))) == 0.0);
    }

    #[test]
    fn gate_at_huge_argument_approaches_permutation() {
        let g = r_check(1e12, 0.0);
        assert!(max_abs(&(&g.matrix - &permutation_op())) < 1e-10);
    }

    #[test]
    fn gate_entries_at_unit_argument() {
        let g = r_check(1.0, 0.0).matrix;
        assert!((g[[0, 0]] - ONE).norm() < 1e-15);
        assert!((g[[3, 3]] - ONE).norm() < 1e-15);
        assert!((g[[1, 1]] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((g[[2, 2]] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((g[[1, 2]] - c(0.5, 0.5)).norm() < 1e-15);
        assert!((g[[2, 1]] - c(0.5, 0.5)).norm() < 1e-15);
        assert!(g[[0, 1]].norm() < 1e-15 && g[[3, 1]].norm() < 1e-15);
    }

    #[test]
    fn gate_argument_tracks_inhomogeneity() {
        let g = r_check(1.7, 0.4);
        assert_eq!(g.argument(), 1.7 - 0.4);
        let direct = r_check_matrix(c(1.3, 0.0));
        assert!(max_abs(&(&g.matrix - &direct)) < 1e-15);
    }

    #[test]
    fn braiding_residuals() {
        assert_eq!(check_braiding(0.0, 0.0), 0.0);
        assert!(check_braiding(0.7, -1.3) <= 1e-13);
        // near-singular prefactors, looser bound
        assert!(check_braiding(1e6, 1.0) <= 1e-9);
    }

    #[test]
    fn trotter_identity_against_series_exponential() {
        for (j, dt) in [(1.0, 0.1), (0.7, 0.05)] {
            let (gate, phase) = trotter_gate(j, dt).unwrap();
            let direct = expm_series(&xxx_coupling(j).mapv(|z| z * c(0.0, -dt)));
            let viagate = gate.matrix.mapv(|z| z * phase);
            assert!(max_abs(&(&viagate - &direct)) <= 1e-12, "J={j} dt={dt}");
        }
    }

    #[test]
    fn trotter_zero_coupling_is_identity() {
        let (gate, phase) = trotter_gate(0.0, 0.3).unwrap();
        assert!(max_abs(&(&gate.matrix - &identity(4))) == 0.0);
        assert!((phase - ONE).norm() < 1e-15);
    }

    #[test]
    fn trotter_rejects_tan_singularity() {
        assert!(trotter_gate(1.0, std::f64::consts::FRAC_PI_4).is_err());
    }

    #[test]
    fn trotter_spot_argument() {
        let (gate, _) = trotter_gate(1.0, 0.25).unwrap();
        assert!((gate.argument() - 0.5f64.tan()).abs() < 1e-15);
    }

    #[test]
    fn spin1_lax_correspondence() {
        assert!(check_spin1_lax(0.0) <= 1e-14);
        assert!(check_spin1_lax(1.0) <= 1e-12);
        assert!(check_spin1_lax(0.37) <= 1e-12);
        assert!(check_spin1_lax(-2.5) <= 1e-12);
    }

    proptest! {
        #[test]
        fn gate_unitary_for_real_argument(arg in -5.0f64..5.0) {
            let g = r_check_matrix(c(arg, 0.0));
            prop_assert!(unitarity_residual(&g) <= 1e-12);
        }

        #[test]
        fn gate_inverse_is_negated_argument(arg in -5.0f64..5.0) {
            let prod = r_check_matrix(c(arg, 0.0)).dot(&r_check_matrix(c(-arg, 0.0)));
            prop_assert!(max_abs(&(&prod - &identity(4))) <= 1e-12);
        }

        #[test]
        fn gate_adjoint_is_negated_argument(arg in -5.0f64..5.0) {
            let dag = r_check_matrix(c(arg, 0.0)).t().mapv(|z| z.conj());
            let neg = r_check_matrix(c(-arg, 0.0));
            prop_assert!(max_abs(&(&dag - &neg)) <= 1e-13);
        }

        #[test]
        fn braiding_holds_for_random_pairs(l in -4.0f64..4.0, m in -4.0f64..4.0) {
            prop_assert!(check_braiding(l, m) <= 1e-12);
        }
    }
}
