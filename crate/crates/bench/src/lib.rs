//! Fixtures shared by the benchmarks: the reference barrier and damping.

use dissres_core::{BarrierSpec, DampingKernel, DissipationSpec, EnergyPoint};

pub fn barrier() -> BarrierSpec {
    BarrierSpec::new(5.0).unwrap()
}

pub fn energy(eps: f64) -> EnergyPoint {
    EnergyPoint::new(eps).unwrap()
}

pub fn kernel(gamma_star: f64) -> DampingKernel {
    DampingKernel::new(DissipationSpec::new(gamma_star, 100.0).unwrap())
}
