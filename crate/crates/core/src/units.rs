/// Physical constants of the unit system a computation runs in.
///
/// `Normalized` sets c = μ₀ = ε₀ = ħ = 1; the SI variant carries CODATA
/// values with ε₀ derived from μ₀ so that μ₀ε₀ = 1/c².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub c: f64,
    pub mu0: f64,
    pub eps0: f64,
    pub hbar: f64,
    pub kind: UnitKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Normalized,
    Si,
}

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

impl UnitSystem {
    pub const fn normalized() -> Self {
        UnitSystem {
            c: 1.0,
            mu0: 1.0,
            eps0: 1.0,
            hbar: 1.0,
            kind: UnitKind::Normalized,
        }
    }

    pub fn si() -> Self {
        let c = SPEED_OF_LIGHT;
        let mu0 = VACUUM_PERMEABILITY;
        UnitSystem {
            c,
            mu0,
            eps0: 1.0 / (mu0 * c * c),
            hbar: REDUCED_PLANCK,
            kind: UnitKind::Si,
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::normalized()
    }
}
