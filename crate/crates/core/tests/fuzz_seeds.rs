//! Replays the checked-in fuzz seeds through the same entry points on stable.

use std::fs;
use std::path::PathBuf;

use sylow_core::corpus;
use sylow_core::partition::PartitionSpec;
use sylow_core::perm::Perm;
use sylow_core::words::parse_generators;
use sylow_core::wreath::Params;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn cycle_seeds_round_trip() {
    let mut parsed = 0;
    for s in seeds("parse_cycles") {
        if let Ok(perm) = Perm::parse_cycles(&s, 27) {
            assert_eq!(Perm::parse_cycles(&perm.format_cycles(), 27).unwrap(), perm);
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn generator_seeds() {
    let params = Params::new(3, 4).unwrap();
    let ok = seeds("parse_generators")
        .iter()
        .filter(|s| parse_generators(s, &params).is_ok())
        .count();
    assert!(ok >= 4);
}

#[test]
fn perm_json_seeds() {
    let decoded: Vec<Perm> = seeds("perm_json")
        .iter()
        .filter_map(|s| serde_json::from_str(s).ok())
        .collect();
    assert_eq!(decoded.len(), 1);
    assert_eq!(decoded[0].format_cycles(), "(0 1 2)");
}

#[test]
fn index_seeds() {
    let params = Params::new(2, 4).unwrap();
    let ok = seeds("parse_indices")
        .iter()
        .filter(|s| PartitionSpec::parse(&params, s).is_ok())
        .count();
    assert!(ok >= 1);
}

#[test]
fn corpus_seeds() {
    let loaded = seeds("corpus_load")
        .iter()
        .filter(|s| corpus::load(s).is_ok())
        .count();
    assert_eq!(loaded, 1);
}
