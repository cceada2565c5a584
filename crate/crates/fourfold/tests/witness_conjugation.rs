use fourfold::cover::{CoverGroup, RamificationProfile};
use fourfold::monodromy::{search, verify_tuple, SearchMode, SearchOptions, SearchStatus, WitnessFile};
use fourfold::perm::all_perms;
use proptest::prelude::*;

fn profile_strategy() -> impl Strategy<Value = RamificationProfile> {
    let group = prop::sample::select(CoverGroup::ALL.to_vec());
    (group, 0u32..=2, prop::collection::vec(0u32..=3, 5)).prop_filter_map("invalid profile", |(group, g, raw)| {
        let n = group.symbols().len();
        let p = RamificationProfile::from_counts(group, g, raw[..n].to_vec()).ok()?;
        p.is_valid().then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn witnesses_survive_conjugation(p in profile_strategy()) {
        let opts = SearchOptions { mode: SearchMode::GaloisImage, budget: 2_000_000, parallel: false };
        let out = search(&p, &opts);
        prop_assume!(out.status == SearchStatus::Witness);
        let t = out.witness.unwrap();
        prop_assert!(verify_tuple(&t, &p, SearchMode::GaloisImage).unwrap().ok());
        for x in all_perms() {
            let c = t.conjugate_by(x);
            let check = verify_tuple(&c, &p, SearchMode::TransitiveImage).unwrap();
            prop_assert!(check.ok(), "conjugate by {} fails: {:?}", x, check.diagnostics);
        }
    }

    #[test]
    fn witness_files_round_trip(p in profile_strategy()) {
        let opts = SearchOptions { mode: SearchMode::GaloisImage, budget: 2_000_000, parallel: false };
        let out = search(&p, &opts);
        prop_assume!(out.status == SearchStatus::Witness);
        let file = WitnessFile::new(&p, SearchMode::GaloisImage, out.witness.as_ref().unwrap());
        let back: WitnessFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert!(back.verify().unwrap().ok());
    }
}
