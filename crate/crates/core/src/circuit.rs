//! Brute-force circuit oracle: exact operator evolution on a finite
//! periodic chain under the brickwork circuit, used as ground truth for
//! everything the transfer-matrix machinery produces.
//!
//! Conventions (fixed here, inherited by the cross-checks): site 0 is the
//! leftmost site and the most significant bit of a basis index, `x` counts
//! sites to the right, the even-bond layer acts first, and the brick
//! pattern wraps periodically. Correlated operators are placed relative to
//! an origin on site 1 (see [`ORIGIN`]). Results are guaranteed
//! size-independent whenever `L ≥ 2t + 2` (the operators never see the
//! boundary).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gates::{r_check, xxx_coupling, Pauli};
use crate::numerics::{identity, CMatrix, ZERO};

const MAX_SITES_DENSE: usize = 12;
const MAX_SITES_OTOC: usize = 10;

/// Geometry and gate parameters of a finite brickwork chain.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub sites: usize,
    pub layers: usize,
    pub lambda: f64,
    /// Optional per-bond inhomogeneity; bond `i` couples sites `(i, i+1 mod L)`.
    pub epsilons: Option<Vec<f64>>,
}

impl ChainSpec {
    pub fn new(sites: usize, layers: usize, lambda: f64) -> Result<Self> {
        if sites < 2 || sites % 2 != 0 {
            return Err(Error::Domain(format!(
                "chain length must be even and at least 2, got {sites}"
            )));
        }
        if sites > MAX_SITES_DENSE {
            return Err(Error::ResourceCap {
                what: "chain sites",
                value: sites,
                cap: MAX_SITES_DENSE,
            });
        }
        Ok(ChainSpec {
            sites,
            layers,
            lambda,
            epsilons: None,
        })
    }

    pub fn with_epsilons(mut self, eps: Vec<f64>) -> Result<Self> {
        if eps.len() != self.sites {
            return Err(Error::Domain(format!(
                "need one inhomogeneity per bond ({} bonds), got {}",
                self.sites,
                eps.len()
            )));
        }
        self.epsilons = Some(eps);
        Ok(self)
    }

    /// True when the light cone of `layers` steps cannot wrap around, so
    /// results agree with the infinite chain.
    pub fn light_cone_sufficient(&self) -> bool {
        self.sites >= 2 * self.layers + 2
    }

    fn bond_epsilon(&self, bond: usize) -> f64 {
        self.epsilons.as_ref().map_or(0.0, |e| e[bond])
    }

    /// Bonds of one layer; even-indexed layers start at site 0.
    fn layer_bonds(&self, layer: usize) -> Vec<(usize, usize)> {
        let start = layer % 2;
        (0..self.sites / 2)
            .map(|k| {
                let i = (start + 2 * k) % self.sites;
                (i, (i + 1) % self.sites)
            })
            .collect()
    }
}

fn bit_offset(sites: usize, site: usize) -> usize {
    1 << (sites - 1 - site)
}

/// In place `M ← G_{ij} M` for a two-qubit gate on sites `(i, j)`.
fn apply_gate_rows(m: &mut CMatrix, g: &CMatrix, i: usize, j: usize, sites: usize) {
    let n = 1usize << sites;
    let oi = bit_offset(sites, i);
    let oj = bit_offset(sites, j);
    let data = m.as_slice_mut().expect("row-major layout");
    let mut rows = [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]];
    for base in 0..n {
        if base & oi != 0 || base & oj != 0 {
            continue;
        }
        let idx = [base, base + oj, base + oi, base + oi + oj];
        for (k, &r) in idx.iter().enumerate() {
            rows[k].copy_from_slice(&data[r * n..(r + 1) * n]);
        }
        for (a, &r) in idx.iter().enumerate() {
            let out = &mut data[r * n..(r + 1) * n];
            for c in 0..n {
                out[c] = g[[a, 0]] * rows[0][c]
                    + g[[a, 1]] * rows[1][c]
                    + g[[a, 2]] * rows[2][c]
                    + g[[a, 3]] * rows[3][c];
            }
        }
    }
}

/// In place `M ← M G_{ij}` for a two-qubit gate on sites `(i, j)`.
fn apply_gate_cols(m: &mut CMatrix, g: &CMatrix, i: usize, j: usize, sites: usize) {
    let n = 1usize << sites;
    let oi = bit_offset(sites, i);
    let oj = bit_offset(sites, j);
    let data = m.as_slice_mut().expect("row-major layout");
    for r in 0..n {
        let row = &mut data[r * n..(r + 1) * n];
        for base in 0..n {
            if base & oi != 0 || base & oj != 0 {
                continue;
            }
            let idx = [base, base + oj, base + oi, base + oi + oj];
            let old = [row[idx[0]], row[idx[1]], row[idx[2]], row[idx[3]]];
            for (b, &c) in idx.iter().enumerate() {
                row[c] = old[0] * g[[0, b]] + old[1] * g[[1, b]] + old[2] * g[[2, b]] + old[3] * g[[3, b]];
            }
        }
    }
}

/// Dense one-site operator placed on `site` of an `sites`-qubit chain.
pub fn place_one_site(op: &CMatrix, site: usize, sites: usize) -> CMatrix {
    let n = 1usize << sites;
    let o = bit_offset(sites, site);
    let mut out = CMatrix::zeros((n, n));
    for r in 0..n {
        let a = usize::from(r & o != 0);
        for b in 0..2 {
            let c = (r & !o) | if b == 1 { o } else { 0 };
            out[[r, c]] = op[[a, b]];
        }
    }
    out
}

/// Conjugate `op` through all `layers` of the circuit: `U op U†`.
fn evolve_heisenberg(spec: &ChainSpec, op: &mut CMatrix) {
    for layer in 0..spec.layers {
        let bonds = spec.layer_bonds(layer);
        for &(i, j) in &bonds {
            let g = r_check(spec.lambda, spec.bond_epsilon(i)).matrix;
            apply_gate_rows(op, &g, i, j, spec.sites);
        }
        for &(i, j) in &bonds {
            let gd = r_check(spec.lambda, spec.bond_epsilon(i))
                .matrix
                .t()
                .mapv(|z| z.conj());
            apply_gate_cols(op, &gd, i, j, spec.sites);
        }
    }
}

/// Assemble the full evolution operator as a dense `2^L × 2^L` matrix.
pub fn build_brick_circuit(spec: &ChainSpec) -> Result<CMatrix> {
    let n = 1usize << spec.sites;
    let mut u = identity(n);
    for layer in 0..spec.layers {
        for (i, j) in spec.layer_bonds(layer) {
            let g = r_check(spec.lambda, spec.bond_epsilon(i)).matrix;
            apply_gate_rows(&mut u, &g, i, j, spec.sites);
        }
    }
    Ok(u)
}

/// Operators sit at `origin + x`, with the origin on the sublattice for
/// which the causal diamond between the two insertions closes: site 0
/// (left leg of a first-layer gate) for odd depth, site 1 for even depth.
/// With a depth-independent origin, half the `t − x` even points sit off
/// the gate lattice and their correlators vanish identically.
fn origin(layers: usize) -> i64 {
    ((layers + 1) % 2) as i64
}

fn site_of(x: i64, layers: usize, sites: usize) -> usize {
    let l = sites as i64;
    ((((origin(layers) + x) % l) + l) % l) as usize
}

/// Infinite-temperature correlator
/// `c_{αβ}(x, t) = tr(σ_α(0) · U(t) σ_β(x) U†(t)) / 2^L`.
pub fn infinite_temp_correlation(spec: &ChainSpec, x: i64, alpha: Pauli, beta: Pauli) -> Result<C64> {
    if 2 * x.unsigned_abs() as usize >= spec.sites {
        return Err(Error::Domain(format!(
            "offset |x| = {} must stay below half the chain ({})",
            x.abs(),
            spec.sites / 2
        )));
    }
    let mut op = place_one_site(&beta.matrix(), site_of(x, spec.layers, spec.sites), spec.sites);
    evolve_heisenberg(spec, &mut op);
    let n = 1usize << spec.sites;
    let o0 = bit_offset(spec.sites, site_of(0, spec.layers, spec.sites));
    let sa = alpha.matrix();
    let mut acc = ZERO;
    for r in 0..n {
        let a = usize::from(r & o0 != 0);
        for b in 0..2 {
            if sa[[a, b]] == ZERO {
                continue;
            }
            let c = (r & !o0) | if b == 1 { o0 } else { 0 };
            acc += sa[[a, b]] * op[[c, r]];
        }
    }
    Ok(acc / C64::new(n as f64, 0.0))
}

/// Out-of-time-order correlator
/// `⟨σ_α(0,0) σ_β(x,t) σ_α(0,0) σ_β(x,t)⟩` at infinite temperature.
pub fn otoc_direct(spec: &ChainSpec, x: i64, alpha: Pauli, beta: Pauli) -> Result<C64> {
    if spec.sites > MAX_SITES_OTOC {
        return Err(Error::ResourceCap {
            what: "chain sites for direct OTOC",
            value: spec.sites,
            cap: MAX_SITES_OTOC,
        });
    }
    if 2 * x.unsigned_abs() as usize >= spec.sites {
        return Err(Error::Domain(format!(
            "offset |x| = {} must stay below half the chain ({})",
            x.abs(),
            spec.sites / 2
        )));
    }
    let mut op = place_one_site(&beta.matrix(), site_of(x, spec.layers, spec.sites), spec.sites);
    evolve_heisenberg(spec, &mut op);
    // M = σ_α(0) · σ_β(x,t), then C = tr(M²)/2^L.
    let w = place_one_site(&alpha.matrix(), site_of(0, spec.layers, spec.sites), spec.sites);
    let m = w.dot(&op);
    let n = 1usize << spec.sites;
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += m[[r, c]] * m[[c, r]];
        }
    }
    Ok(acc / C64::new(n as f64, 0.0))
}

/// Periodic XXX Hamiltonian `Σ_n −J (σσ)_{n,n+1}` on the full chain.
pub fn heisenberg_hamiltonian(sites: usize, j: f64) -> CMatrix {
    let n = 1usize << sites;
    let h2 = xxx_coupling(j);
    let mut h = CMatrix::zeros((n, n));
    for bond in 0..sites {
        let (i, jj) = (bond, (bond + 1) % sites);
        let oi = bit_offset(sites, i);
        let oj = bit_offset(sites, jj);
        for r in 0..n {
            let a = usize::from(r & oi != 0) * 2 + usize::from(r & oj != 0);
            for bc in 0..4 {
                let v = h2[[a, bc]];
                if v == ZERO {
                    continue;
                }
                let mut c = r & !oi & !oj;
                if bc & 2 != 0 {
                    c |= oi;
                }
                if bc & 1 != 0 {
                    c |= oj;
                }
                h[[r, c]] += v;
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::unitarity_residual;
    use crate::numerics::{kron, max_abs};
    use ndarray_linalg::Eigh;

    #[test]
    fn zero_layers_is_identity() {
        let spec = ChainSpec::new(4, 0, 1.3).unwrap();
        let u = build_brick_circuit(&spec).unwrap();
        assert!(max_abs(&(&u - &identity(16))) == 0.0);
    }

    #[test]
    fn zero_lambda_is_identity_for_any_depth() {
        let spec = ChainSpec::new(4, 3, 0.0).unwrap();
        let u = build_brick_circuit(&spec).unwrap();
        assert!(max_abs(&(&u - &identity(16))) < 1e-14);
    }

    #[test]
    fn single_even_layer_matches_kronecker_assembly() {
        let spec = ChainSpec::new(4, 1, 1.0).unwrap();
        let u = build_brick_circuit(&spec).unwrap();
        let g = r_check(1.0, 0.0).matrix;
        let expect = kron(&g, &g);
        assert!(max_abs(&(&u - &expect)) < 1e-14);
    }

    #[test]
    fn circuit_is_unitary() {
        for (sites, layers) in [(6, 3), (8, 4)] {
            let spec = ChainSpec::new(sites, layers, 0.8).unwrap();
            let u = build_brick_circuit(&spec).unwrap();
            assert!(unitarity_residual(&u) <= 1e-10);
        }
    }

    #[test]
    fn rejects_odd_or_oversized_chains() {
        assert!(ChainSpec::new(5, 1, 1.0).is_err());
        assert!(matches!(ChainSpec::new(14, 1, 1.0), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn identity_correlator_is_one() {
        let spec = ChainSpec::new(6, 2, 1.0).unwrap();
        for x in [-2, 0, 1] {
            let c = infinite_temp_correlation(&spec, x, Pauli::I, Pauli::I).unwrap();
            assert!((c - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn correlations_vanish_outside_light_cone() {
        let spec = ChainSpec::new(8, 1, 0.9).unwrap();
        for x in [2, 3] {
            let c = infinite_temp_correlation(&spec, x, Pauli::Z, Pauli::Z).unwrap();
            assert!(c.norm() < 1e-12, "x={x} beyond t=1 should trivialize, got {c}");
        }
        let c = infinite_temp_correlation(&spec, 2, Pauli::X, Pauli::Y).unwrap();
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn correlator_independent_of_chain_length_inside_light_cone() {
        for (x, t) in [(0, 2), (1, 3), (2, 2)] {
            let a = infinite_temp_correlation(&ChainSpec::new(2 * t + 2, t, 1.0).unwrap(), x, Pauli::Z, Pauli::Z)
                .unwrap();
            let b = infinite_temp_correlation(&ChainSpec::new(2 * t + 4, t, 1.0).unwrap(), x, Pauli::Z, Pauli::Z)
                .unwrap();
            assert!((a - b).norm() <= 1e-10, "(x,t)=({x},{t}): {a} vs {b}");
        }
    }

    #[test]
    fn hermitian_correlators_are_real() {
        let spec = ChainSpec::new(8, 3, 0.7).unwrap();
        for alpha in [Pauli::X, Pauli::Y, Pauli::Z] {
            for beta in [Pauli::X, Pauli::Y, Pauli::Z] {
                for x in [-1, 0, 1, 2] {
                    let c = infinite_temp_correlation(&spec, x, alpha, beta).unwrap();
                    assert!(c.im.abs() <= 1e-10, "Im c = {} at ({alpha:?},{beta:?},x={x})", c.im);
                }
            }
        }
    }

    #[test]
    fn otoc_with_identity_insertion_is_one() {
        let spec = ChainSpec::new(6, 2, 1.0).unwrap();
        for (a, b) in [(Pauli::I, Pauli::Z), (Pauli::X, Pauli::I)] {
            let v = otoc_direct(&spec, 1, a, b).unwrap();
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn otoc_of_disjoint_paulis_at_zero_depth_is_one() {
        let spec = ChainSpec::new(6, 0, 1.0).unwrap();
        let v = otoc_direct(&spec, 2, Pauli::Z, Pauli::Z).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn otoc_rejects_oversized_chain() {
        let spec = ChainSpec::new(12, 1, 1.0).unwrap();
        assert!(matches!(
            otoc_direct(&spec, 0, Pauli::Z, Pauli::Z),
            Err(Error::ResourceCap { .. })
        ));
    }

    /// Circuit correlators approach the XXX-Hamiltonian correlators as the
    /// Trotter step shrinks; on a shared finite chain the comparison is
    /// exact up to splitting error.
    #[test]
    fn trotter_error_shrinks_with_step() {
        let sites = 6;
        let jcoup = 1.0;
        let t_phys = 0.4;
        let n = 1usize << sites;

        let h = heisenberg_hamiltonian(sites, jcoup);
        let (w, v) = h.eigh(ndarray_linalg::UPLO::Lower).unwrap();
        let vd = v.t().mapv(|z| z.conj());
        let phases = CMatrix::from_diag(
            &w.mapv(|e| C64::new(0.0, -e * t_phys).exp()),
        );
        let u_exact = v.dot(&phases).dot(&vd);
        let op0 = place_one_site(&Pauli::Z.matrix(), 1, sites);
        let evolved = u_exact.dot(&op0).dot(&u_exact.t().mapv(|z| z.conj()));
        let w0 = place_one_site(&Pauli::Z.matrix(), 0, sites);
        let c_exact: C64 = w0.dot(&evolved).diag().sum() / C64::new(n as f64, 0.0);

        let mut errs = Vec::new();
        for dt in [0.2, 0.1, 0.05] {
            let periods = (t_phys / dt).round() as usize;
            let lambda = (2.0 * jcoup * dt).tan();
            let spec = ChainSpec::new(sites, 2 * periods, lambda).unwrap();
            let c = infinite_temp_correlation(&spec, 1, Pauli::Z, Pauli::Z).unwrap();
            errs.push(((dt as f64).ln(), (c - c_exact).norm().max(1e-300).ln()));
        }
        // least-squares slope of ln err vs ln dt
        let n_pts = errs.len() as f64;
        let sx: f64 = errs.iter().map(|p| p.0).sum();
        let sy: f64 = errs.iter().map(|p| p.1).sum();
        let sxx: f64 = errs.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = errs.iter().map(|p| p.0 * p.1).sum();
        let slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
        assert!(
            (slope - 2.0).abs() <= 0.5,
            "Trotter error order {slope:.3}, expected quadratic trend"
        );
    }
}
