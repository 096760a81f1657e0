//! The full property suite on the reference corpus, and agreement between
//! sequential and parallel execution.

use incidence_core::corpus::{complexes, hollow_triangle, path_non_simplicial, simplicial_maps};
use incidence_core::props::{run_properties, PropsConfig};
use incidence_core::stories::{sigma_rank, verify_differential_ideal};
use incidence_core::Execution;

#[test]
fn corpus_passes_every_property() {
    let cfg = PropsConfig { random_pairs: 100, ..Default::default() };
    let failures: Vec<_> = run_properties(&complexes(20, 0), &cfg).into_iter().filter(|o| !o.passed).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn execution_modes_agree() {
    let small = vec![("hollow".to_string(), hollow_triangle())];
    let run = |exec| run_properties(&small, &PropsConfig { random_pairs: 20, exec, ..Default::default() });
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));

    for (_, c) in complexes(5, 3) {
        assert_eq!(
            verify_differential_ideal(&c, 2, 9, Execution::Sequential),
            verify_differential_ideal(&c, 2, 9, Execution::Parallel)
        );
        assert_eq!(sigma_rank(&c, 2, Execution::Sequential), sigma_rank(&c, 2, Execution::Parallel));
    }
}

#[test]
fn map_corpus_is_differentiable() {
    for (name, m) in simplicial_maps() {
        let report = m.check_differentiable(2, Execution::Parallel);
        assert!(report.passed(), "{name}: {report:?}");
    }
    let bad = path_non_simplicial().check_differentiable(2, Execution::Parallel);
    assert!(!bad.ideal_preserved);
    assert!(!bad.passed());
}

/// Images of fair stories under the corpus maps are fair or degenerate,
/// exhaustively up to degree 3.
#[test]
fn corpus_maps_send_fair_stories_to_fair_or_degenerate_ones() {
    use incidence_core::stories::{is_fair, stories, Story};
    for (name, m) in simplicial_maps() {
        let (src, dst) = (m.source(), m.target());
        for n in 0..=3 {
            for w in stories(src, n).iter().filter(|w| is_fair(src, w)) {
                let image = m.image_sequence(w);
                if image.windows(2).all(|p| p[0] != p[1]) {
                    assert!(is_fair(dst, &Story::new(dst, image).unwrap()), "{name}");
                }
            }
        }
    }
}
