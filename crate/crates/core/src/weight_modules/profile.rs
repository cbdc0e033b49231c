//! Declared support profiles and the finite-generation test.

use alloc::vec::Vec;

use super::{ModuleWindow, Orbit};

/// Declared bound on the weight-space dimensions over one orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimBound {
    Bounded(usize),
    Unbounded,
}

/// One orbit of the support with its dimension bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitProfile {
    pub orbit: Orbit,
    pub bound: DimBound,
}

/// A finite description of the support and dimensions of a weight module.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Profile {
    pub orbits: Vec<OrbitProfile>,
    pub infinitely_many_orbits: bool,
}

impl Profile {
    /// The profile of a direct sum of the given windows.
    pub fn of_windows(ms: &[&ModuleWindow]) -> Profile {
        let mut orbits: Vec<OrbitProfile> = Vec::new();
        for m in ms {
            if m.is_zero() {
                continue;
            }
            let top = m.dims().values().copied().max().unwrap_or(0);
            match orbits.iter_mut().find(|o| o.orbit == *m.orbit()) {
                Some(o) => {
                    if let DimBound::Bounded(b) = o.bound {
                        o.bound = DimBound::Bounded(b + top);
                    }
                }
                None => orbits.push(OrbitProfile {
                    orbit: m.orbit().clone(),
                    bound: DimBound::Bounded(top),
                }),
            }
        }
        Profile {
            orbits,
            infinitely_many_orbits: false,
        }
    }
}

/// Finitely many orbits and a uniform dimension bound.
pub fn finitely_generated(p: &Profile) -> bool {
    !p.infinitely_many_orbits
        && p.orbits
            .iter()
            .all(|o| matches!(o.bound, DimBound::Bounded(_)))
}
