//! System parameters and the single-excitation Hamiltonians of the dot-ring
//! lattice, in the real-space and momentum-space pictures.
//!
//! The ring has `2N` sites threaded by a dimensionless flux `phi`; one extra
//! dot (index 0 of the basis, called A) couples to ring site 0 with strength
//! `g`. We set hbar = 1, so the hopping `J`, the coupling `g`, the on-site
//! energy `omega_A` and every decay rate share a single inverse-time unit.
//!
//! Basis ordering is fixed as `[A, site 0, ..., site 2N-1]` in real space and
//! `[A, mode 0, ..., mode 2N-1]` in momentum space; every propagator column
//! in this crate refers to index 0 as the dot.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Particle statistics of the excitations on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statistics::Fermion => write!(f, "fermion"),
            Statistics::Boson => write!(f, "boson"),
        }
    }
}

/// The five physical controls plus particle statistics; the single source of
/// truth for every formula in this crate.
///
/// `half_count` is N: the ring carries 2N sites labelled `0..2N-1`. Shifting
/// the flux by an integer permutes the ring modes, so all rate formulas are
/// periodic in `flux` with period 1 (covered by property tests, not by
/// normalizing the stored value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// N; the ring has 2N sites.
    pub half_count: usize,
    /// Hopping amplitude J between neighbouring ring sites.
    pub hopping: f64,
    /// Dot-to-ring coupling g (site 0 only), g >= 0.
    pub coupling: f64,
    /// On-site energy omega_A of the dot.
    pub onsite: f64,
    /// Dimensionless magnetic flux phi through the ring.
    pub flux: f64,
    pub statistics: Statistics,
}

impl SystemParams {
    pub fn new(
        half_count: usize,
        hopping: f64,
        coupling: f64,
        onsite: f64,
        flux: f64,
        statistics: Statistics,
    ) -> Result<Self> {
        let params = SystemParams {
            half_count,
            hopping,
            coupling,
            onsite,
            flux,
            statistics,
        };
        params.validate()?;
        Ok(params)
    }

    /// Rejects unusable parameters outright; no silent clamping.
    pub fn validate(&self) -> Result<()> {
        if self.half_count == 0 {
            return Err(Error::parameter("half_count must be at least 1"));
        }
        for (name, value) in [
            ("hopping", self.hopping),
            ("coupling", self.coupling),
            ("onsite", self.onsite),
            ("flux", self.flux),
        ] {
            if !value.is_finite() {
                return Err(Error::parameter(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        if self.coupling < 0.0 {
            return Err(Error::parameter(format!(
                "coupling must be non-negative, got {}",
                self.coupling
            )));
        }
        Ok(())
    }

    /// Number of ring sites, 2N.
    pub fn ring_len(&self) -> usize {
        2 * self.half_count
    }

    /// Single-excitation dimension, 2N + 1.
    pub fn dimension(&self) -> usize {
        self.ring_len() + 1
    }

    /// Full width 4|J| of the ring band [-2|J|, 2|J|].
    pub fn bandwidth(&self) -> f64 {
        4.0 * self.hopping.abs()
    }

    /// True when the dot level lies outside the ring band.
    pub fn off_band(&self) -> bool {
        self.onsite.abs() > 2.0 * self.hopping.abs()
    }

    pub fn with_flux(mut self, flux: f64) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_onsite(mut self, onsite: f64) -> Self {
        self.onsite = onsite;
        self
    }
}

/// Which picture a Hamiltonian matrix was built in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    RealSpace,
    MomentumSpace,
}

/// Dense Hermitian matrix on the (2N+1)-dimensional single-excitation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub entries: DMatrix<Complex64>,
    pub basis: BasisTag,
}

impl HamiltonianMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    /// max |H - H^dagger| entrywise; zero for matrices built by this module.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dimension();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Band energy of ring mode `k`: `eps_k = 2 J cos(pi (phi + k) / N)`.
///
/// The angle argument is reduced modulo the ring period before the cosine, so
/// the exact period-2N identity in `phi` holds whenever `phi + k` is exactly
/// representable.
pub fn dispersion(params: &SystemParams, k: usize) -> Result<f64> {
    params.validate()?;
    let ring = params.ring_len();
    if k >= ring {
        return Err(Error::argument(format!(
            "mode index {k} out of range 0..{ring}"
        )));
    }
    Ok(dispersion_unchecked(params, k))
}

pub(crate) fn dispersion_unchecked(params: &SystemParams, k: usize) -> f64 {
    let n = params.half_count as f64;
    let reduced = (params.flux + k as f64).rem_euclid(2.0 * n);
    2.0 * params.hopping * (PI * reduced / n).cos()
}

/// Real-space single-excitation Hamiltonian.
///
/// The ring block is tridiagonal-with-corner: each directed bond `j -> j+1`
/// (periodically closed, site 2N = site 0) carries `J e^{i pi phi / N}` and
/// its reverse the conjugate. Only ring site 0 couples to the dot, with real
/// amplitude `g`; the dot diagonal entry is `omega_A`.
pub fn build_real_space(params: &SystemParams) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let ring = params.ring_len();
    let dim = params.dimension();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    h[(0, 0)] = Complex64::new(params.onsite, 0.0);

    let bond = Complex64::cis(PI * params.flux / params.half_count as f64) * params.hopping;
    for j in 0..ring {
        let a = 1 + j;
        let b = 1 + (j + 1) % ring;
        // accumulate: for a two-site ring both directed bonds share a pair
        h[(a, b)] += bond;
        h[(b, a)] += bond.conj();
    }

    let g = Complex64::new(params.coupling, 0.0);
    h[(0, 1)] += g;
    h[(1, 0)] += g;

    Ok(HamiltonianMatrix {
        entries: h,
        basis: BasisTag::RealSpace,
    })
}

/// Momentum-space single-excitation Hamiltonian: diagonal ring block with the
/// Bloch energies and a uniform real dot coupling `g / sqrt(2N)` to every
/// mode. Unitarily equivalent to [`build_real_space`] through the discrete
/// Fourier transform of the ring sites.
pub fn build_momentum_space(params: &SystemParams) -> Result<HamiltonianMatrix> {
    params.validate()?;
    let ring = params.ring_len();
    let dim = params.dimension();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    h[(0, 0)] = Complex64::new(params.onsite, 0.0);

    let gk = Complex64::new(params.coupling / (ring as f64).sqrt(), 0.0);
    for k in 0..ring {
        h[(1 + k, 1 + k)] = Complex64::new(dispersion_unchecked(params, k), 0.0);
        h[(0, 1 + k)] = gk;
        h[(1 + k, 0)] = gk;
    }

    Ok(HamiltonianMatrix {
        entries: h,
        basis: BasisTag::MomentumSpace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(n: usize, j: f64, g: f64, w: f64, phi: f64) -> SystemParams {
        SystemParams::new(n, j, g, w, phi, Statistics::Fermion).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SystemParams::new(0, 1.0, 1.0, 0.0, 0.0, Statistics::Fermion).is_err());
        assert!(SystemParams::new(1, f64::NAN, 1.0, 0.0, 0.0, Statistics::Fermion).is_err());
        assert!(SystemParams::new(1, 1.0, -0.5, 0.0, 0.0, Statistics::Fermion).is_err());
        assert!(SystemParams::new(1, 1.0, 1.0, f64::INFINITY, 0.0, Statistics::Fermion).is_err());
    }

    #[test]
    fn dispersion_band_center_and_quarter() {
        let p = params(20, 5.0, 1.0, 0.0, 0.0);
        assert_relative_eq!(dispersion(&p, 0).unwrap(), 10.0, max_relative = 1e-15);

        let p = params(2, 3.7, 0.0, 0.0, 0.0);
        assert!(dispersion(&p, 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn dispersion_matches_direct_evaluation() {
        // independent route: evaluate the cosine without the shared helper
        let p = params(20, 5.0, 1.0, 0.0, 0.6);
        let direct = 2.0 * 5.0 * (3.6 * PI / 20.0).cos();
        assert_relative_eq!(dispersion(&p, 3).unwrap(), direct, max_relative = 1e-14);
    }

    #[test]
    fn dispersion_rejects_out_of_range_mode() {
        let p = params(3, 1.0, 0.0, 0.0, 0.0);
        assert!(dispersion(&p, 6).is_err());
        assert!(dispersion(&p, 5).is_ok());
    }

    #[test]
    fn real_space_matches_stated_structure() {
        let p = params(20, 5.0, 1.0, 0.0, 0.6);
        let h = build_real_space(&p).unwrap();
        assert_eq!(h.dimension(), 41);
        assert_eq!(h.hermiticity_defect(), 0.0);
        // bond magnitude J, coupling g at (0,1) only
        assert_relative_eq!(h.entries[(1, 2)].norm(), 5.0, max_relative = 1e-15);
        assert_eq!(h.entries[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(h.entries[(0, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn decoupled_dot_has_block_diagonal_form() {
        let p = params(5, 2.0, 0.0, 3.5, 0.2);
        let h = build_real_space(&p).unwrap();
        assert_eq!(h.entries[(0, 0)], Complex64::new(3.5, 0.0));
        for j in 1..h.dimension() {
            assert_eq!(h.entries[(0, j)], Complex64::new(0.0, 0.0));
            assert_eq!(h.entries[(j, 0)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn dispersionless_ring_couples_dot_to_site_zero_only() {
        let p = params(4, 0.0, 0.7, 0.0, 0.3);
        let h = build_real_space(&p).unwrap();
        for i in 0..h.dimension() {
            for j in 0..h.dimension() {
                let expect_nonzero = (i == 0 && j == 1) || (i == 1 && j == 0);
                assert_eq!(h.entries[(i, j)].norm() > 0.0, expect_nonzero, "({i},{j})");
            }
        }
    }

    #[test]
    fn momentum_space_structure() {
        let p = params(20, 2.5, 1.0, 0.0, 0.0);
        let h = build_momentum_space(&p).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        let expected = 1.0 / 40.0f64.sqrt();
        for k in 0..p.ring_len() {
            assert_relative_eq!(h.entries[(0, 1 + k)].re, expected, max_relative = 1e-15);
            assert_relative_eq!(
                h.entries[(1 + k, 1 + k)].re,
                dispersion(&p, k).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn momentum_space_with_zero_coupling_is_diagonal() {
        let p = params(3, 1.5, 0.0, 4.0, 0.1);
        let h = build_momentum_space(&p).unwrap();
        for i in 0..h.dimension() {
            for j in 0..h.dimension() {
                if i != j {
                    assert_eq!(h.entries[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(h.entries[(0, 0)].re, 4.0);
    }

    /// Dyadic fluxes keep `phi + k` and `phi + 2N` exactly representable, so
    /// the period-2N identity holds bitwise.
    fn dyadic_flux() -> impl Strategy<Value = f64> {
        (-4096i64..=4096).prop_map(|m| m as f64 / 1024.0)
    }

    proptest! {
        #[test]
        fn dispersion_exact_period_two_n(
            n in 1usize..12,
            j in -8.0f64..8.0,
            phi in dyadic_flux(),
            k in 0usize..24,
        ) {
            let k = k % (2 * n);
            let p = params(n, j, 0.0, 0.0, phi);
            let shifted = p.with_flux(phi + 2.0 * n as f64);
            prop_assert_eq!(
                dispersion(&p, k).unwrap(),
                dispersion(&shifted, k).unwrap()
            );
        }

        #[test]
        fn dispersion_multiset_invariant_under_unit_flux_shift(
            n in 1usize..12,
            j in -8.0f64..8.0,
            phi in dyadic_flux(),
        ) {
            let p = params(n, j, 0.0, 0.0, phi);
            let shifted = p.with_flux(phi + 1.0);
            let mut a: Vec<f64> = (0..p.ring_len()).map(|k| dispersion(&p, k).unwrap()).collect();
            let mut b: Vec<f64> =
                (0..p.ring_len()).map(|k| dispersion(&shifted, k).unwrap()).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(x, y);
            }
        }

        #[test]
        fn hamiltonians_are_exactly_hermitian(
            n in 1usize..10,
            j in -8.0f64..8.0,
            g in 0.0f64..4.0,
            w in -20.0f64..20.0,
            phi in -4.0f64..4.0,
        ) {
            let p = params(n, j, g, w, phi);
            prop_assert_eq!(build_real_space(&p).unwrap().hermiticity_defect(), 0.0);
            prop_assert_eq!(build_momentum_space(&p).unwrap().hermiticity_defect(), 0.0);
        }
    }
}
