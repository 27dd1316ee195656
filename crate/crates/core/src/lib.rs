//! Aharonov-Bohm phase differences computed two ways: as the holonomy of the
//! four-potential around the closed spacetime loop formed by the two
//! interferometer worldlines, and as the electric plus magnetic flux of the
//! field 2-form through a spacetime surface bounded by those worldlines.
//!
//! The two routes agree by Stokes' theorem in four dimensions. The total is
//! the same in every inertial frame, while its split into magnetic and
//! electric parts depends on both the frame and the chosen surface.

pub mod em;
pub mod error;
pub mod holonomy;
pub mod quadrature;
pub mod scenarios;
pub mod spacetime;
pub mod synthetic;
pub mod verify;

pub use em::{
    boost_field, boost_potential, boosted_configuration, capacitor_configuration, solenoid_configuration,
    CapacitorConfig, EmConfiguration, FieldSample, PotentialSample, Region, SolenoidConfig,
};
pub use error::{Error, Result};
pub use holonomy::{
    flux_phase, gauge_shift, potential_phase, reduced_flux, stokes_check, Coupling, GaugeFunction, PathCheck,
    PhaseDecomposition, ReducedFlux, StokesReport,
};
pub use quadrature::QuadratureSpec;
pub use spacetime::{
    boost_event, boost_worldline, ruled_surface_equal_time, surface_jacobian, Boost, Event, SpacetimeSurface,
    Tangent, ThreeVec, Worldline, WorldlinePair, SPEED_OF_LIGHT,
};
