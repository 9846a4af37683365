//! Builtin cones.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::cone::{MarkedCone, SymIntMat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(serialize_with = "crate::json::serialize_cone")]
    pub cone: MarkedCone,
    pub provenance: String,
}

const PRINCIPAL: &str = "principal cone {x_ij <= 0 (i != j), sum_j x_ij >= 0} in the zeta basis";

/// The principal cone spanned by `ζ_11, …, ζ_gg, ζ_12, ζ_13, …, ζ_{g−1,g}`,
/// all multiplied by `level` inside the lattice `level · Sym_g(ℤ)`.
pub fn principal_cone(g: usize, level: &BigInt) -> Result<MarkedCone> {
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for i in 0..g {
        gens.push(SymIntMat::zeta(g, i, i).scaled(level));
        labels.push(format!("z{}{}", i + 1, i + 1));
    }
    for i in 0..g {
        for j in i + 1..g {
            gens.push(SymIntMat::zeta(g, i, j).scaled(level));
            labels.push(format!("z{}{}", i + 1, j + 1));
        }
    }
    MarkedCone::new(g, level.clone(), gens, Some(labels))
}

fn level_suffix(name: &str) -> Option<BigInt> {
    let n: BigInt = name.strip_prefix("principal-g2-level-")?.parse().ok()?;
    (n >= BigInt::one()).then_some(n)
}

/// Known names: `principal-g2`, `principal-g3`, and `principal-g2-level-<n>` for `n >= 1`.
pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let (cone, provenance) = match name {
        "principal-g2" => (principal_cone(2, &BigInt::one())?, PRINCIPAL.to_string()),
        "principal-g3" => (principal_cone(3, &BigInt::one())?, PRINCIPAL.to_string()),
        _ => match level_suffix(name) {
            Some(n) => (
                principal_cone(2, &n)?,
                format!("{PRINCIPAL}, scaled to the level-{n} lattice"),
            ),
            None => return Err(Error::UnknownCatalogEntry(name.to_string())),
        },
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        cone,
        provenance,
    })
}

/// Sorted by name; the level family is listed at `n = 2`.
pub fn catalog_list() -> Vec<CatalogEntry> {
    let mut v: Vec<CatalogEntry> = ["principal-g2", "principal-g2-level-2", "principal-g3"]
        .iter()
        .map(|n| catalog_get(n).expect("builtin"))
        .collect();
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{is_regular, lattice_volume};

    fn s(rows: &[&[i64]]) -> SymIntMat {
        SymIntMat::from_i64(rows).unwrap()
    }

    #[test]
    fn principal_g2_generators() {
        let e = catalog_get("principal-g2").unwrap();
        assert_eq!(
            e.cone.generators(),
            &[s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, -1], &[-1, 1]])]
        );
        assert_eq!(e.cone.labels().unwrap(), &["z11", "z22", "z12"]);
    }

    #[test]
    fn principal_g3_is_regular() {
        let e = catalog_get("principal-g3").unwrap();
        assert_eq!(e.cone.generators().len(), 6);
        assert_eq!(lattice_volume(&e.cone).unwrap(), BigInt::one());
        assert!(is_regular(&e.cone).unwrap());
    }

    #[test]
    fn level_family() {
        let e = catalog_get("principal-g2-level-3").unwrap();
        assert_eq!(e.cone.scale(), &BigInt::from(3));
        assert_eq!(lattice_volume(&e.cone).unwrap(), BigInt::one());
        assert!(catalog_get("principal-g2-level-0").is_err());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(catalog_get("nope"), Err(Error::UnknownCatalogEntry(_))));
        let names: Vec<String> = catalog_list().into_iter().map(|e| e.name).collect();
        assert_eq!(names, ["principal-g2", "principal-g2-level-2", "principal-g3"]);
    }
}
