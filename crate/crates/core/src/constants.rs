//! Pinned physical constants (CODATA 2018, NIST atomic masses).

/// Hartree per electronvolt: 1 eV = 0.036749322176 E_h.
pub const HARTREE_PER_EV: f64 = 0.036_749_322_176;

/// Bohr radius in ångström.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;

/// Electron masses per unified atomic mass unit.
pub const ELECTRON_MASSES_PER_AMU: f64 = 1_822.888_486_209;

/// Atomic masses (u), NIST Atomic Weights and Isotopic Compositions.
pub const MASS_CS133: f64 = 132.905_451_961;
pub const MASS_LI7: f64 = 7.016_003_434;
pub const MASS_SI28: f64 = 27.976_926_534_65;
pub const MASS_SN120: f64 = 119.902_201_63;
