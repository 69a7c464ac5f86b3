//! Frozen seed-to-instance mapping of the generator. Regenerate with
//! `SWAPSENSUS_BLESS=1 cargo test -p swapsensus --test golden` only when the
//! change is intended.

use std::fs;
use std::path::PathBuf;

use swapsensus::oracle::{gen_planted_with, OpMix};
use swapsensus::{format_instance, parse_instance, sh_distance, swap_distance};

const CASES: &[(u64, usize, usize, usize, usize, OpMix)] = &[
    (1, 6, 3, 3, 0, OpMix::Mixed),
    (7, 12, 4, 3, 2, OpMix::Mixed),
    (42, 20, 5, 4, 3, OpMix::Mixed),
    (3, 10, 4, 3, 3, OpMix::SwapsOnly),
    (2024, 30, 6, 5, 4, OpMix::SwapsOnly),
];

fn render(seed: u64, n: usize, k: usize, sigma: usize, ops: usize, mix: OpMix) -> String {
    let p = gen_planted_with(seed, n, k, sigma, ops, mix);
    format!(
        "# seed {seed} n {n} k {k} sigma {sigma} ops {ops} mix {mix:?}\n# center {}\n{}",
        p.center,
        format_instance(&p.instance)
    )
}

#[test]
fn generator_output_is_frozen() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("SWAPSENSUS_BLESS").is_some();
    for &(seed, n, k, sigma, ops, mix) in CASES {
        let path = dir.join(format!("planted_{seed}_{n}_{k}_{sigma}_{ops}_{mix:?}.txt").to_lowercase());
        let text = render(seed, n, k, sigma, ops, mix);
        if bless {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let frozen = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, frozen, "{} changed", path.display());

        // the frozen words really are within the budget of the center
        let center = frozen.lines().nth(1).unwrap().trim_start_matches("# center ").parse().unwrap();
        let inst = parse_instance(&frozen).unwrap();
        for w in inst.words() {
            assert!(sh_distance(&center, w).unwrap().0 <= ops);
            if mix == OpMix::SwapsOnly {
                assert!(swap_distance(&center, w).is_some_and(|d| d <= ops));
            }
        }
    }
}
