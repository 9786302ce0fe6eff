mod common;

const CASES: u32 = 256;

macro_rules! property {
    ($name:ident, $check:path) => {
        #[test]
        fn $name() {
            if let Err(e) = $check(CASES) {
                panic!("{e}");
            }
        }
    };
}

property!(pattern_validation_matches_oracle, common::check_pattern_validation);
property!(pattern_text_round_trips, common::check_pattern_round_trip);
property!(matches_are_sound_and_disjoint, common::check_match_soundness);
property!(trie_agrees_with_single_patterns, common::check_trie_matching);
property!(dawg_threshold_zero_is_lossless, common::check_dawg_lossless);
property!(dawg_counts_are_conserved, common::check_dawg_counts);
property!(dawg_generalization_is_monotone, common::check_dawg_monotonicity);
property!(dawg_outputs_cover_inputs, common::check_dawg_cover);
property!(clustering_is_transitive_partition, common::check_clustering);
property!(evaluate_is_monotone_and_bounded, common::check_evaluate);
property!(ccdf_never_increases, common::check_ccdf);
property!(precision_stays_bounded, common::check_precision_bounds);
property!(attributions_never_shrink, common::check_loop_invariants);
property!(runs_are_byte_deterministic, common::check_determinism);
