//! Physical constants (SI) and the kinematics of an incident atom.
//!
//! Everything internal is SI; nK, μm, mm/s appear only at I/O boundaries.

use crate::error::{Error, Result};
use crate::real::Real;

/// CODATA 2018 values. All exact since the 2019 SI redefinition except the
/// atomic mass unit.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalConstants<R> {
    /// reduced Planck constant, J s
    pub hbar: R,
    /// speed of light, m/s
    pub c: R,
    /// Boltzmann constant, J/K
    pub k_b: R,
    /// unified atomic mass unit, kg
    pub atomic_mass_unit: R,
}

impl<R: Real> PhysicalConstants<R> {
    pub fn new() -> Self {
        PhysicalConstants {
            hbar: R::of(1.054_571_817e-34),
            c: R::of(2.997_924_58e8),
            k_b: R::of(1.380_649e-23),
            atomic_mass_unit: R::of(1.660_539_066_60e-27),
        }
    }

    /// Thermal photon wavelength ħc/(k_B T), the Casimir-Polder/Lifshitz
    /// crossover scale (7.6 μm at 300 K).
    pub fn thermal_wavelength(&self, t: R) -> Result<R> {
        if !(t > R::zero()) {
            return Err(Error::domain("thermal wavelength requires T > 0"));
        }
        Ok(self.hbar * self.c / (self.k_b * t))
    }

    /// Energy in joules for a temperature-unit value (E = k_B T).
    pub fn energy_from_temperature(&self, t: R) -> R {
        self.k_b * t
    }

    /// Temperature-unit equivalent of an energy (T = E/k_B).
    pub fn temperature_from_energy(&self, e: R) -> R {
        e / self.k_b
    }
}

impl<R: Real> Default for PhysicalConstants<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Kinematics of a normally incident atom: velocity, wavenumber and energy
/// are kept together and mutually consistent (k = m v/ħ, E = ħ²k²/(2m)).
#[derive(Debug, Clone, Copy)]
pub struct Incidence<R> {
    pub velocity: R,
    pub wavenumber: R,
    pub energy: R,
}

pub fn incidence_from_velocity<R: Real>(
    constants: &PhysicalConstants<R>,
    v: R,
    mass: R,
) -> Result<Incidence<R>> {
    if v < R::zero() {
        return Err(Error::domain("incident velocity must be non-negative"));
    }
    if !(mass > R::zero()) {
        return Err(Error::domain("mass must be positive"));
    }
    let k = mass * v / constants.hbar;
    let e = R::of(0.5) * mass * v * v;
    Ok(Incidence {
        velocity: v,
        wavenumber: k,
        energy: e,
    })
}

/// The dimensionless scattering parameter k_i β₄.
pub fn k_beta4<R: Real>(incidence: &Incidence<R>, beta4: R) -> Result<R> {
    if !(beta4 > R::zero()) {
        return Err(Error::domain("beta4 must be positive"));
    }
    Ok(incidence.wavenumber * beta4)
}
