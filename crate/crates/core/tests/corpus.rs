//! Ordering checks on a real text corpus. Uses `DSHAPE_TCMC` if set, else the
//! system license texts; skipped when neither is readable.

use std::path::Path;

use direct_shaping::mlc::{average_cost, cell_levels, independent_slc_encode, mlc_encode, MlcCostModel, MlcPages};
use direct_shaping::{slc_encode, BitStream};

fn corpus() -> Option<BitStream> {
    if let Ok(path) = std::env::var("DSHAPE_TCMC") {
        return std::fs::read(path).ok().map(|b| BitStream::from_bytes(&b));
    }
    let mut names: Vec<_> = std::fs::read_dir(Path::new("/usr/share/common-licenses"))
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .collect();
    names.sort();
    let bytes: Vec<u8> = names.iter().filter_map(|p| std::fs::read(p).ok()).flatten().collect();
    (!bytes.is_empty()).then(|| BitStream::from_bytes(&bytes))
}

#[test]
fn zero_fraction_falls_with_word_length() {
    let Some(s) = corpus() else {
        eprintln!("skipped: no corpus");
        return;
    };
    let frac = |s: &BitStream| s.count_zeros() as f64 / s.len() as f64;
    let mut last = frac(&s);
    for m in [2, 4, 8] {
        let f = frac(&slc_encode(&s, m).unwrap());
        assert!(f < last, "m = {m}: {f} not below {last}");
        last = f;
    }
}

#[test]
fn mlc_beats_independent_pages() {
    let Some(s) = corpus() else {
        eprintln!("skipped: no corpus");
        return;
    };
    let model = MlcCostModel::new([0.0, 0.58, 0.87, 1.29]).unwrap();
    let data = MlcPages::split_halves(&s, 4);
    let cost = |p: &MlcPages| average_cost(&cell_levels(p).unwrap(), &model);
    let uncoded = cost(&data);
    let shaped = cost(&mlc_encode(&data, 4, &model).unwrap());
    let indep = cost(&independent_slc_encode(&data, 4).unwrap());
    assert!(shaped < indep && indep < uncoded, "{shaped} {indep} {uncoded}");
}
