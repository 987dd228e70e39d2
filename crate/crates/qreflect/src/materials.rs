//! Species/surface catalog and the closed-form interaction coefficients
//! C4, C3(T), C2(T_S, T_E), β₄, β₀.

use crate::error::{Error, Result};
use crate::quad;
use crate::real::Real;
use crate::units::PhysicalConstants;

/// electronvolt in joules (exact)
pub const EV: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone)]
pub struct Species<R> {
    pub name: String,
    /// atomic mass, kg
    pub mass: R,
    /// static polarizability volume (Gaussian convention), m³
    pub alpha0: R,
    /// effective transition length l = λ_tr/2π, m
    pub transition_length: R,
}

/// Reference C4 anchoring: a surface may carry a published C4 for a specific
/// polarizability; C4 for other species then scales linearly in α₀.
#[derive(Debug, Clone, Copy)]
pub struct C4Reference<R> {
    /// polarizability the reference C4 was quoted for, m³
    pub alpha0: R,
    /// reference C4, J·m⁴
    pub c4: R,
}

#[derive(Debug, Clone)]
pub struct Surface<R> {
    pub name: String,
    /// static permittivity, dimensionless, > 1
    pub epsilon0: R,
    /// optional fixed φ(ε₀) replacing the quadrature value
    pub phi_override: Option<R>,
    /// optional published C4 anchor (see C4Reference)
    pub c4_ref: Option<C4Reference<R>>,
}

#[derive(Debug, Clone)]
pub struct AtomSurfacePair<R> {
    pub species: Species<R>,
    pub surface: Surface<R>,
    /// retarded interaction strength, J·m⁴
    pub c4: R,
}

/// Angular integrand (s−p)/(s+p) + (1−2p²)(s−εp)/(s+εp) with s = √(ε−1+p²),
/// common to the retarded reduction factor and the Matsubara terms of the
/// thermal Green function. The Fresnel factors are rationalized to avoid
/// catastrophic cancellation as ε → 1:
///   s² − p² = ε−1,  s² − ε²p² = (ε−1)(1 − (ε+1)p²).
pub(crate) fn fresnel_h<R: Real>(p: R, eps: R) -> R {
    let em1 = eps - R::one();
    let s = (em1 + p * p).sqrt();
    let sp = s + p;
    let sep = s + eps * p;
    em1 / (sp * sp)
        + (R::one() - R::of(2.0) * p * p) * em1 * (R::one() - (eps + R::one()) * p * p)
            / (sep * sep)
}

/// Dielectric-wall reduction factor φ(ε₀) of the retarded atom-surface
/// interaction: φ = ½ ∫₁^∞ dp/p⁴ [ (s−p)/(s+p) + (1−2p²)(s−εp)/(s+εp) ]
/// with s = √(ε−1+p²). φ(1⁺) = 0, φ(∞) = 1.
pub fn phi<R: Real>(epsilon0: R) -> Result<R> {
    if !(epsilon0 > R::one()) {
        return Err(Error::domain("phi requires epsilon0 > 1"));
    }
    let eps = epsilon0;
    // substitute p = 1/q to map the tail onto (0, 1]
    let integrand = |q: R| {
        let p = R::one() / q;
        q * q * fresnel_h(p, eps)
    };
    let est = quad::integrate(&integrand, R::of(1e-12), R::one(), R::of(1e-12))?;
    Ok(R::of(0.5) * est.value)
}

impl<R: Real> AtomSurfacePair<R> {
    /// Build a pair, resolving C4 with the precedence: explicit override,
    /// surface reference anchor (scaled linearly in α₀), φ override,
    /// φ quadrature.
    pub fn new(
        constants: &PhysicalConstants<R>,
        species: Species<R>,
        surface: Surface<R>,
        c4_override: Option<R>,
    ) -> Result<Self> {
        let c4 = if let Some(c4) = c4_override {
            c4
        } else if let Some(anchor) = surface.c4_ref {
            anchor.c4 * species.alpha0 / anchor.alpha0
        } else {
            let phi_val = match surface.phi_override {
                Some(p) => p,
                None => phi(surface.epsilon0)?,
            };
            R::of(3.0 / (8.0 * std::f64::consts::PI))
                * species.alpha0
                * constants.hbar
                * constants.c
                * phi_val
        };
        if !(c4 > R::zero()) {
            return Err(Error::domain("C4 must be positive"));
        }
        Ok(AtomSurfacePair {
            species,
            surface,
            c4,
        })
    }

    /// Lifshitz strength C3(T) = α₀ k_B T (ε₀−1)/(4(ε₀+1)), J·m³.
    pub fn c3(&self, constants: &PhysicalConstants<R>, t: R) -> Result<R> {
        if t < R::zero() {
            return Err(Error::domain("c3 requires T >= 0"));
        }
        let eps = self.surface.epsilon0;
        Ok(self.species.alpha0 * constants.k_b * t * (eps - R::one())
            / (R::of(4.0) * (eps + R::one())))
    }

    /// Non-equilibrium tail strength
    /// C2(T_S, T_E) = π α₀ k_B² (T_E²−T_S²)(ε₀+1)/(12 ħ c √(ε₀−1)), J·m².
    /// Positive iff the environment is hotter than the surface.
    pub fn c2(&self, constants: &PhysicalConstants<R>, t_s: R, t_e: R) -> Result<R> {
        if t_s < R::zero() || t_e < R::zero() {
            return Err(Error::domain("c2 requires non-negative temperatures"));
        }
        let eps = self.surface.epsilon0;
        let kb = constants.k_b;
        Ok(R::of(std::f64::consts::PI) * self.species.alpha0 * kb * kb
            * (t_e * t_e - t_s * t_s)
            * (eps + R::one())
            / (R::of(12.0) * constants.hbar * constants.c * (eps - R::one()).sqrt()))
    }

    /// β₄ = √(2 m C4)/ħ, the length scale of the retarded regime.
    pub fn beta4(&self, constants: &PhysicalConstants<R>) -> R {
        (R::of(2.0) * self.species.mass * self.c4).sqrt() / constants.hbar
    }

    /// β₀ = 2 m C2/ħ², dimensionless strength of the C2/r² tail.
    pub fn beta0(&self, constants: &PhysicalConstants<R>, t_s: R, t_e: R) -> Result<R> {
        let c2 = self.c2(constants, t_s, t_e)?;
        Ok(R::of(2.0) * self.species.mass * c2 / (constants.hbar * constants.hbar))
    }
}

#[derive(Debug, Clone)]
pub struct Catalog<R> {
    pub species: Vec<Species<R>>,
    pub surfaces: Vec<Surface<R>>,
}

impl<R: Real> Catalog<R> {
    /// Built-in catalog: ⁸⁷Rb, metastable ⁴He*, ground-state ⁴He, and a Si
    /// surface anchored to the published Rb/Si C4 of 7.6×10⁻³⁷ eV·m⁴.
    pub fn builtin(constants: &PhysicalConstants<R>) -> Self {
        let u = constants.atomic_mass_unit;
        let a3 = R::of(1e-30); // Å³ in m³
        let l = R::of(130e-9);
        Catalog {
            species: vec![
                Species {
                    name: "Rb87".to_string(),
                    mass: R::of(87.0) * u,
                    alpha0: R::of(47.25) * a3,
                    transition_length: l,
                },
                Species {
                    name: "He*".to_string(),
                    mass: R::of(4.0) * u,
                    alpha0: R::of(46.8) * a3,
                    transition_length: l,
                },
                Species {
                    name: "He".to_string(),
                    mass: R::of(4.0) * u,
                    alpha0: R::of(0.205) * a3,
                    transition_length: l,
                },
            ],
            surfaces: vec![Surface {
                name: "Si".to_string(),
                epsilon0: R::of(12.0),
                phi_override: None,
                c4_ref: Some(C4Reference {
                    alpha0: R::of(47.25) * a3,
                    c4: R::of(7.6e-37 * EV),
                }),
            }],
        }
    }

    pub fn find_species(&self, name: &str) -> Result<&Species<R>> {
        self.species
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Catalog(format!("unknown species '{name}'")))
    }

    pub fn find_surface(&self, name: &str) -> Result<&Surface<R>> {
        self.surfaces
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Catalog(format!("unknown surface '{name}'")))
    }

    pub fn pair(
        &self,
        constants: &PhysicalConstants<R>,
        species: &str,
        surface: &str,
    ) -> Result<AtomSurfacePair<R>> {
        AtomSurfacePair::new(
            constants,
            self.find_species(species)?.clone(),
            self.find_surface(surface)?.clone(),
            None,
        )
    }

    /// Parse a catalog file and merge it over the built-in entries (same-name
    /// records replace built-ins). Records are blank-line separated blocks of
    /// `key = value` lines starting with `species = NAME` or `surface = NAME`.
    ///
    /// Species keys: `mass_u`, `alpha0_A3`, `l_nm`.
    /// Surface keys: `epsilon0`, optional `phi`, optional
    /// `c4_ref_eV_m4` with `c4_ref_alpha0_A3`.
    pub fn merge_from_str(&mut self, text: &str) -> Result<()> {
        let mut block: Vec<(String, String)> = Vec::new();
        let mut lines = text.lines().chain(std::iter::once(""));
        loop {
            let line = match lines.next() {
                Some(l) => l,
                None => break,
            };
            let trimmed = match line.find('#') {
                Some(i) => line[..i].trim(),
                None => line.trim(),
            };
            if trimmed.is_empty() {
                if !block.is_empty() {
                    self.ingest_block(&block)?;
                    block.clear();
                }
                continue;
            }
            let (k, v) = trimmed
                .split_once('=')
                .ok_or_else(|| Error::Catalog(format!("malformed catalog line: '{trimmed}'")))?;
            block.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(())
    }

    fn ingest_block(&mut self, block: &[(String, String)]) -> Result<()> {
        let parse = |v: &str| -> Result<R> {
            v.parse::<f64>()
                .map(R::of)
                .map_err(|_| Error::Catalog(format!("not a number: '{v}'")))
        };
        let get = |key: &str| -> Option<&str> {
            block
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
        };
        let constants = PhysicalConstants::<R>::new();
        let a3 = R::of(1e-30);
        if let Some(name) = get("species") {
            let mass_u = parse(
                get("mass_u")
                    .ok_or_else(|| Error::Catalog(format!("species {name}: missing mass_u")))?,
            )?;
            let alpha0 = parse(get("alpha0_A3").ok_or_else(|| {
                Error::Catalog(format!("species {name}: missing alpha0_A3"))
            })?)?;
            let l_nm = parse(
                get("l_nm")
                    .ok_or_else(|| Error::Catalog(format!("species {name}: missing l_nm")))?,
            )?;
            let sp = Species {
                name: name.to_string(),
                mass: mass_u * constants.atomic_mass_unit,
                alpha0: alpha0 * a3,
                transition_length: l_nm * R::of(1e-9),
            };
            if !(sp.mass > R::zero() && sp.alpha0 > R::zero() && sp.transition_length > R::zero())
            {
                return Err(Error::Catalog(format!(
                    "species {name}: all parameters must be positive"
                )));
            }
            self.species.retain(|s| !s.name.eq_ignore_ascii_case(name));
            self.species.push(sp);
            Ok(())
        } else if let Some(name) = get("surface") {
            let epsilon0 = parse(get("epsilon0").ok_or_else(|| {
                Error::Catalog(format!("surface {name}: missing epsilon0"))
            })?)?;
            if !(epsilon0 > R::one()) {
                return Err(Error::Catalog(format!(
                    "surface {name}: epsilon0 must exceed 1"
                )));
            }
            let phi_override = match get("phi") {
                Some(v) => Some(parse(v)?),
                None => None,
            };
            let c4_ref = match (get("c4_ref_eV_m4"), get("c4_ref_alpha0_A3")) {
                (Some(c4), Some(a)) => Some(C4Reference {
                    alpha0: parse(a)? * a3,
                    c4: parse(c4)? * R::of(EV),
                }),
                (None, None) => None,
                _ => {
                    return Err(Error::Catalog(format!(
                        "surface {name}: c4_ref_eV_m4 and c4_ref_alpha0_A3 must be given together"
                    )))
                }
            };
            self.surfaces.retain(|s| !s.name.eq_ignore_ascii_case(name));
            self.surfaces.push(Surface {
                name: name.to_string(),
                epsilon0,
                phi_override,
                c4_ref,
            });
            Ok(())
        } else {
            Err(Error::Catalog(
                "catalog record must start with 'species =' or 'surface ='".to_string(),
            ))
        }
    }

    pub fn merge_from_file(&mut self, path: &std::path::Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.merge_from_str(&text)
    }
}
