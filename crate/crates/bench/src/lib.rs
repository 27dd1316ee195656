//! Fixtures shared by the criterion benchmarks under `benches/`.

use abflux_core::scenarios::{build_capacitor_scenario, build_solenoid_scenario, CapacitorScenario, SolenoidScenario};
use abflux_core::{boosted_configuration, Boost, EmConfiguration, WorldlinePair};

/// A scenario's worldlines and configuration in the frame moving at `beta·c` along x.
pub struct Fixture {
    pub pair: WorldlinePair,
    pub cfg: EmConfiguration,
}

fn in_frame((pair, cfg): (WorldlinePair, EmConfiguration), beta: f64, c: f64) -> Fixture {
    let b = Boost::along_x(beta, c).expect("subluminal");
    Fixture { pair: pair.boosted(&b).expect("boostable"), cfg: boosted_configuration(&cfg, &b) }
}

pub fn solenoid(beta: f64) -> Fixture {
    let s = SolenoidScenario::default();
    in_frame(build_solenoid_scenario(&s).expect("default solenoid"), beta, s.c)
}

pub fn capacitor(beta: f64) -> Fixture {
    let s = CapacitorScenario::default();
    in_frame(build_capacitor_scenario(&s).expect("default capacitor"), beta, s.c)
}
