//! Temperature-dependent atom-surface interaction potentials at thermal
//! non-equilibrium and quantum reflection of ultracold atoms from them.
//!
//! Everything is generic over the scalar type via [`Real`] (`f32` or `f64`);
//! the aliases at the crate root fix `f64`, which all tolerances are
//! calibrated for.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod materials;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod real;
pub mod scattering;
pub mod search;
pub mod units;

pub use error::{Error, Result};
pub use real::Real;

pub type Constants = units::PhysicalConstants<f64>;
pub type Incidence = units::Incidence<f64>;
pub type Species = materials::Species<f64>;
pub type Surface = materials::Surface<f64>;
pub type Pair = materials::AtomSurfacePair<f64>;
pub type Catalog = materials::Catalog<f64>;
pub type Model = potential::PotentialModel<f64>;
pub type Table = potential::PotentialTable<f64>;
pub type Barrier = potential::BarrierInfo<f64>;
pub type Settings = scattering::SolverSettings<f64>;
pub type Problem = scattering::ScatteringProblem<f64>;
pub type Reflection = scattering::ReflectionResult<f64>;
pub type Fit = asymptotics::AsymptoteFit<f64>;
