use std::time::{Duration, Instant};

use siegel_toroidal::catalog::catalog_get;
use siegel_toroidal::residue::t_degree_bounds;
use siegel_toroidal::volume::{verify_ma_identity, volume_function, MaMode};

#[test]
fn principal_g3_symbolic_within_budget() {
    let v = volume_function(&catalog_get("principal-g3").unwrap().cone).unwrap();
    let start = Instant::now();
    let r = verify_ma_identity(&v, MaMode::Symbolic, 1, 0).unwrap();
    let elapsed = start.elapsed();
    assert!(r.holds);
    assert!(r.witnesses.is_empty());
    assert!(elapsed < Duration::from_secs(600), "{elapsed:?}");
}

#[test]
fn principal_g3_t_degree_bounds() {
    let v = volume_function(&catalog_get("principal-g3").unwrap().cone).unwrap();
    let r = t_degree_bounds(&v).unwrap();
    assert!(r.det_checked);
    assert!(r.holds, "{:?}", r.failures);
}
