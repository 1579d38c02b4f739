//! Diatomic presets and conversion from spectroscopic to atomic units.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{
    BOHR_ANGSTROM, ELECTRON_MASSES_PER_AMU, HARTREE_PER_EV, MASS_CS133, MASS_LI7, MASS_SI28,
    MASS_SN120,
};
use crate::error::{Error, Result};
use crate::system::SystemParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculePreset {
    pub name: String,
    #[serde(rename = "De_eV")]
    pub de_ev: f64,
    pub re_angstrom: f64,
    pub mu_amu: f64,
    #[serde(default)]
    pub mu_note: String,
    #[serde(default)]
    pub source: String,
}

impl MoleculePreset {
    fn validate(&self) -> Result<()> {
        for (what, v) in [("De_eV", self.de_ev), ("re_angstrom", self.re_angstrom), ("mu_amu", self.mu_amu)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("preset {}: {what} must be positive, got {v}", self.name)));
            }
        }
        if self.name.is_empty() {
            return Err(Error::domain("preset name must be non-empty"));
        }
        Ok(())
    }
}

fn reduced(m1: f64, m2: f64) -> f64 {
    m1 * m2 / (m1 + m2)
}

pub fn list_presets() -> Vec<MoleculePreset> {
    vec![
        MoleculePreset {
            name: "Cs2".into(),
            de_ev: 0.452_468_659_5,
            re_angstrom: 4.648,
            mu_amu: MASS_CS133 / 2.0,
            mu_note: "m(133Cs)/2, NIST atomic mass".into(),
            source: "X1Sigma_g+ ground state".into(),
        },
        MoleculePreset {
            name: "Li2".into(),
            de_ev: 1.055_918_901,
            re_angstrom: 2.6729,
            mu_amu: MASS_LI7 / 2.0,
            mu_note: "m(7Li)/2, NIST atomic mass".into(),
            source: "X1Sigma_g+ ground state".into(),
        },
        MoleculePreset {
            name: "SiSn".into(),
            de_ev: 2.642_965_641,
            re_angstrom: 2.514,
            mu_amu: reduced(MASS_SI28, MASS_SN120),
            mu_note: "m(28Si)m(120Sn)/(m(28Si)+m(120Sn)), NIST atomic masses".into(),
            source: "X3Sigma ground state".into(),
        },
    ]
}

/// Case-insensitive lookup among `presets`.
pub fn find_preset<'a>(presets: &'a [MoleculePreset], name: &str) -> Result<&'a MoleculePreset> {
    presets
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let known: Vec<&str> = presets.iter().map(|p| p.name.as_str()).collect();
            Error::Usage(format!("unknown preset '{name}' (known: {})", known.join(", ")))
        })
}

/// Built-ins with entries from a JSON file (one object or an array) merged over them by name.
pub fn load_presets(path: Option<&Path>) -> Result<Vec<MoleculePreset>> {
    let mut map: BTreeMap<String, MoleculePreset> = BTreeMap::new();
    let mut order = Vec::new();
    for p in list_presets() {
        order.push(p.name.to_ascii_lowercase());
        map.insert(p.name.to_ascii_lowercase(), p);
    }
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let items: Vec<MoleculePreset> = if value.is_array() {
            serde_json::from_value(value)?
        } else {
            vec![serde_json::from_value(value)?]
        };
        for p in items {
            p.validate()?;
            let key = p.name.to_ascii_lowercase();
            if !map.contains_key(&key) {
                order.push(key.clone());
            }
            map.insert(key, p);
        }
    }
    Ok(order.into_iter().filter_map(|k| map.remove(&k)).collect())
}

pub fn ev_to_hartree(ev: f64) -> f64 {
    ev * HARTREE_PER_EV
}

pub fn hartree_to_ev(h: f64) -> f64 {
    h / HARTREE_PER_EV
}

pub fn angstrom_to_bohr(a: f64) -> f64 {
    a / BOHR_ANGSTROM
}

pub fn bohr_to_angstrom(b: f64) -> f64 {
    b * BOHR_ANGSTROM
}

pub fn amu_to_electron_masses(u: f64) -> f64 {
    u * ELECTRON_MASSES_PER_AMU
}

pub fn electron_masses_to_amu(m: f64) -> f64 {
    m / ELECTRON_MASSES_PER_AMU
}

/// Preset in Hartree atomic units; `mu_override` (electron masses) replaces the preset mass.
pub fn to_atomic_units(
    preset: &MoleculePreset,
    dm: f64,
    delta: f64,
    mu_override: Option<f64>,
) -> Result<SystemParams> {
    preset.validate()?;
    SystemParams::new(
        ev_to_hartree(preset.de_ev),
        angstrom_to_bohr(preset.re_angstrom),
        dm,
        delta,
        mu_override.unwrap_or_else(|| amu_to_electron_masses(preset.mu_amu)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conversions() {
        assert_eq!(ev_to_hartree(1.0), 0.036_749_322_176);
        assert!((ev_to_hartree(2.642_965_641) - 0.097_127_195_84).abs() < 1e-11);
        assert!((angstrom_to_bohr(4.648) - 8.783_447_027).abs() < 1e-8);
    }

    #[test]
    fn presets() {
        let all = list_presets();
        let sisn = find_preset(&all, "SiSn").unwrap();
        assert_eq!((sisn.de_ev, sisn.re_angstrom), (2.642_965_641, 2.514));
        let li = find_preset(&all, "li2").unwrap();
        assert_eq!((li.de_ev, li.re_angstrom), (1.055_918_901, 2.6729));
        let cs = find_preset(&all, "Cs2").unwrap();
        assert!((cs.mu_amu - 66.4527).abs() < 1e-4);
        assert!(all.iter().all(|p| !p.mu_note.is_empty()));
        assert!(find_preset(&all, "H2").is_err());
    }

    #[test]
    fn sisn_params() {
        let all = list_presets();
        let p = to_atomic_units(find_preset(&all, "SiSn").unwrap(), 0.4, 0.2, None).unwrap();
        assert!((p.a + 2.0 * p.re * p.de).abs() < 1e-15);
        assert!((p.mu - 22.68 * 1822.888).abs() < 0.01 * 1822.888);
    }

    #[test]
    fn dissociation_ordering() {
        let all = list_presets();
        let de: Vec<f64> = ["SiSn", "Li2", "Cs2"]
            .iter()
            .map(|n| to_atomic_units(find_preset(&all, n).unwrap(), 0.0, 0.0, None).unwrap().de)
            .collect();
        assert!(de[0] > de[1] && de[1] > de[2]);
    }

    #[test]
    fn override_file_merges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(
            &path,
            r#"[{"name": "cs2", "De_eV": 0.5, "re_angstrom": 4.6, "mu_amu": 66.0, "mu_note": "test"},
                {"name": "N2", "De_eV": 9.8, "re_angstrom": 1.1, "mu_amu": 7.0, "mu_note": "test"}]"#,
        )
        .unwrap();
        let all = load_presets(Some(&path)).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(find_preset(&all, "Cs2").unwrap().de_ev, 0.5);
        assert_eq!(all[3].name, "N2");

        std::fs::write(&path, r#"{"name": "X", "De_eV": -1, "re_angstrom": 1, "mu_amu": 1}"#).unwrap();
        assert!(load_presets(Some(&path)).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(x in 1e-6f64..1e6) {
            prop_assert!((hartree_to_ev(ev_to_hartree(x)) - x).abs() <= 1e-12 * x);
            prop_assert!((bohr_to_angstrom(angstrom_to_bohr(x)) - x).abs() <= 1e-12 * x);
            prop_assert!((electron_masses_to_amu(amu_to_electron_masses(x)) - x).abs() <= 1e-12 * x);
        }
    }
}
