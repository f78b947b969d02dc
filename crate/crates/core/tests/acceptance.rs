//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;

use planar_spectra::bounds::{paschke_lower, Bound};
use planar_spectra::decompose::{
    decompose_a, decompose_b, decompose_c, verify_decomposition, DecomposeError, Decomposition,
};
use planar_spectra::dense::rho_dense_oracle;
use planar_spectra::embedding::find_light_edge;
use planar_spectra::generators::{
    complete, complete_bipartite, gen_hkd, gen_named, gen_tessellation, Family, FamilyParams,
};
use planar_spectra::graph::{edge, max_common_neighbors, orient_max_indegree, EdgeLabel, Graph};
use planar_spectra::spectral::{geometric_test_vector, rayleigh_lower, rho_power, SpectralEstimate};
use planar_spectra::tessellation::analyze_patch;
use planar_spectra::verify::{default_corpus, min_orienting_k, CorpusEntry, EntryKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;
const PATCHES: [(usize, usize); 5] = [(4, 5), (5, 4), (4, 6), (6, 4), (5, 5)];
const PATCH_RADIUS: usize = 6;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn rho(g: &Graph) -> SpectralEstimate {
    rho_power(g, TOL).expect("graph has edges")
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=12);
    let p: f64 = rng.gen_range(0.15..0.9);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn oracle_equivalence(corpus: &[CorpusEntry]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut graphs: Vec<Graph> = (0..200).map(|_| random_graph(&mut rng)).collect();
    graphs.extend(
        corpus
            .iter()
            .filter(|e| matches!(e.kind, EntryKind::Plain) && e.graph.vertex_count() <= 500)
            .map(|e| e.graph.clone()),
    );
    let (mut worst, mut outside, mut checked) = (0.0f64, 0, 0);
    for g in &graphs {
        if g.edge_count() == 0 {
            continue;
        }
        let est = rho(g);
        let exact = rho_dense_oracle(g).unwrap();
        worst = worst.max((est.upper - exact).abs());
        if !(est.lower - 1e-12 <= exact && exact <= est.upper + 1e-12) {
            outside += 1;
        }
        checked += 1;
    }
    Outcome::new(
        worst <= 1e-7 && outside == 0,
        format!("{checked} graphs, max |upper - oracle| = {worst:.2e}, intervals missing the oracle: {outside}"),
    )
}

fn exact_small_spectra() -> Outcome {
    let named = |family, n| {
        gen_named(
            family,
            FamilyParams {
                n,
                ..Default::default()
            },
        )
        .unwrap()
    };
    let mut cases: Vec<(String, Graph, f64)> = Vec::new();
    for n in [1, 4, 9, 17] {
        cases.push((format!("K_1,{n}"), named(Family::Star, n), (n as f64).sqrt()));
    }
    for (m, n) in [(2, 3), (3, 7), (4, 4)] {
        cases.push((format!("K_{m},{n}"), complete_bipartite(m, n), ((m * n) as f64).sqrt()));
    }
    for n in [3, 8, 15] {
        cases.push((format!("C_{n}"), named(Family::Cycle, n), 2.0));
    }
    cases.push(("P_3".into(), named(Family::Path, 3), 2f64.sqrt()));
    let bad: Vec<&str> = cases
        .iter()
        .filter(|(_, g, want)| {
            let e = rho(g);
            (e.upper - want).abs() > 1e-8 || (e.lower - want).abs() > 1e-8
        })
        .map(|(name, _, _)| name.as_str())
        .collect();
    Outcome::new(
        bad.is_empty(),
        format!("{} closed forms, mismatches: {bad:?}", cases.len()),
    )
}

fn hkd_sequence(k: usize, d: usize, top: usize) -> (Vec<f64>, bool) {
    let limit = Bound::LowerLimit { k, d }.evaluate().unwrap();
    let seq: Vec<f64> = (0..=top).map(|i| rho(&gen_hkd(k, d, i).unwrap().graph).upper).collect();
    let ok = seq.windows(2).all(|w| w[0] < w[1]) && seq.iter().all(|&r| r < limit);
    (seq, ok)
}

fn lower_bound_construction() -> Outcome {
    let (s28, ok28) = hkd_sequence(2, 8, 6);
    let (s39, ok39) = hkd_sequence(3, 9, 4);
    let h = gen_hkd(2, 8, 6).unwrap();
    let f = geometric_test_vector(h.graph.vertex_count(), &h.layers, 0.57);
    let ray = rayleigh_lower(&h.graph, &f).unwrap();
    let fmt = |s: &[f64]| s.iter().map(|r| format!("{r:.5}")).collect::<Vec<_>>().join(", ");
    Outcome::new(
        ok28 && ok39 && ray > 6.5,
        format!(
            "H(2,8): [{}] increasing below {:.5}: {ok28}; H(3,9): [{}] increasing below {:.5}: {ok39}; \
             Rayleigh on H(2,8)_6 with q = 0.57: {ray:.5} (needs > 6.5)",
            fmt(&s28),
            2.0 * 12f64.sqrt(),
            fmt(&s39),
            2.0 * 18f64.sqrt(),
        ),
    )
}

fn hayes(corpus: &[CorpusEntry]) -> Outcome {
    let (mut rows, mut bad) = (0, Vec::new());
    for e in corpus.iter().filter(|e| e.graph.edge_count() > 0) {
        let g = &e.graph;
        let delta = g.max_degree();
        let upper = rho(g).upper;
        for k in min_orienting_k(g)..=delta / 2 {
            if orient_max_indegree(g, k).is_err() {
                continue;
            }
            rows += 1;
            let bound = Bound::Hayes { k, max_degree: delta }.evaluate().unwrap();
            if upper > bound + 1e-9 {
                bad.push(format!("{} k={k}", e.id));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && rows > 0,
        format!("{rows} (graph, k) pairs, violations: {bad:?}"),
    )
}

fn planar_bounds(corpus: &[CorpusEntry]) -> Outcome {
    let mut bad = Vec::new();
    let mut families = std::collections::BTreeSet::new();
    let mut rows = 0;
    for e in corpus.iter().filter(|e| e.is_planar() && e.graph.max_degree() >= 10) {
        let delta = e.graph.max_degree();
        let upper = rho(&e.graph).upper;
        families.insert(match e.kind {
            EntryKind::Hkd { d, .. } => format!("hkd-{d}"),
            _ => e.family.clone(),
        });
        for b in [
            Bound::Planar2 { max_degree: delta },
            Bound::Planar1 { max_degree: delta },
        ] {
            rows += 1;
            if upper > b.evaluate().unwrap() + 1e-9 {
                bad.push(format!("{} {}", e.id, b.id()));
            }
        }
    }
    let covered = ["hkd-10", "hkd-12", "hkd-16", "tessellation", "apollonian"]
        .iter()
        .all(|f| families.contains(*f));
    Outcome::new(
        bad.is_empty() && covered,
        format!("{rows} rows over {families:?}, violations: {bad:?}"),
    )
}

fn decomposition_contracts(corpus: &[CorpusEntry]) -> Outcome {
    let mut bad = Vec::new();
    let (mut graphs, mut raised_k) = (0, Vec::new());
    for e in corpus.iter().filter(|e| e.is_planar()) {
        graphs += 1;
        let g = &e.graph;
        let k = (max_common_neighbors(g) + 1).max(2);
        if k > 2 {
            raised_k.push(format!("{}:{k}", e.id));
        }
        let runs: [(&str, Result<Decomposition, DecomposeError>); 3] = [
            ("a", decompose_a(g, 0)),
            ("b", decompose_b(g, 0)),
            ("c", decompose_c(g, 0, k)),
        ];
        for (name, run) in runs {
            match run {
                Ok(d) => {
                    let rep = verify_decomposition(g, &d);
                    if !rep.passed {
                        bad.push(format!("{} {name}: {:?}", e.id, rep.violations.first()));
                    }
                }
                Err(err) => bad.push(format!("{} {name}: {err}", e.id)),
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{graphs} planar graphs x 3 variants, failures: {bad:?}; variant c used k > 2 where K_2,2 occurs ({} graphs)",
            raised_k.len()
        ),
    )
}

fn tessellation_pipeline() -> (Outcome, Outcome) {
    let mut bad7 = Vec::new();
    let mut bad8 = Vec::new();
    let mut summary = Vec::new();
    let mut cycles = 0;
    for (p, q) in PATCHES {
        let patch = gen_tessellation(p, q, PATCH_RADIUS).unwrap();
        let rep = analyze_patch(&patch, 1e-8).unwrap();
        let min_worm = rep.earthworm_histogram.keys().next().copied().unwrap_or(0);
        let forests = rep.forests.parts.iter().all(|t| t.is_forest) && rep.forests.layer_union_ok;
        let ok = rep.layers.passed
            && rep.earthworm_violations.is_empty()
            && min_worm >= q - 3
            && forests
            && rep.bound.tessellation_satisfied;
        if !ok {
            bad7.push(format!("{{{p},{q}}}"));
        }
        summary.push(format!(
            "{{{p},{q}}} rho {:.4} <= {:.4}, min worm {min_worm}",
            rep.bound.rho_upper, rep.bound.tessellation
        ));
        cycles += rep.boundary_checks.len();
        for b in rep.boundary_checks.iter().filter(|b| !b.holds) {
            bad8.push(format!("{{{p},{q}}} k={} d={}", b.k, b.d));
        }
    }
    (
        Outcome::new(
            bad7.is_empty(),
            format!("radius {PATCH_RADIUS}: {}; failures: {bad7:?}", summary.join("; ")),
        ),
        Outcome::new(
            bad8.is_empty() && cycles > 0,
            format!("{cycles} face and layer cycles, violations: {bad8:?}"),
        ),
    )
}

fn bound_grid() -> Outcome {
    let (mut pairs, mut over_tess, mut over_hs) = (0, Vec::new(), Vec::new());
    for p in 4..=10 {
        for q in 4..=10 {
            if 2 * (p + q) > p * q {
                continue;
            }
            pairs += 1;
            let lower = paschke_lower(p, q).unwrap();
            let tess = Bound::Tessellation { p, q }.evaluate().unwrap();
            let hs = Bound::HiguchiShirai { p, q }.evaluate().unwrap();
            if lower > tess + 1e-9 {
                over_tess.push((p, q));
            }
            if lower > hs + 1e-9 {
                over_hs.push((p, q));
            }
        }
    }
    let monotone = (4..=10).all(|p| {
        let gap: Vec<f64> = (4..=200)
            .filter(|&q| 2 * (p + q) <= p * q)
            .map(|q| Bound::Tessellation { p, q }.evaluate().unwrap() - 2.0 * ((p - 1) as f64).sqrt())
            .collect();
        gap.windows(2).all(|w| w[1] < w[0]) && *gap.last().unwrap() < 0.011
    });
    Outcome::new(
        over_tess.is_empty() && over_hs.is_empty() && monotone,
        format!(
            "{pairs} pairs; paschke above tessellation: {over_tess:?}; paschke above higuchi_shirai: {} pairs {over_hs:?}; gap decreasing to 0: {monotone}",
            over_hs.len()
        ),
    )
}

fn negative_controls() -> Outcome {
    let k12 = complete(12);
    let no_rule = matches!(decompose_a(&k12, 0), Err(DecomposeError::NoReductionApplies { .. }));
    let no_light = find_light_edge(&k12, 0).is_err();
    // each hub claims s = 10 L-edges to its own leaves; the other leaves keep none
    let g = complete_bipartite(3, 33);
    let labels = g
        .edges()
        .map(|(a, b)| {
            let leaf = b - 3;
            let l = leaf < 30 && leaf / 10 == a;
            let (u, v) = edge(a, b);
            (u, v, if l { EdgeLabel::L } else { EdgeLabel::T })
        })
        .collect();
    let claim = Decomposition {
        variant: planar_spectra::decompose::Variant::A,
        s: 10,
        k: None,
        labels,
    };
    let rejected = !verify_decomposition(&g, &claim).passed;
    Outcome::new(
        no_rule && no_light && rejected,
        format!("K_12 no reduction: {no_rule}; K_12 no light edge: {no_light}; K_3,33 claim rejected: {rejected}"),
    )
}

fn main() -> ExitCode {
    let corpus = default_corpus();
    let (c7, c8) = tessellation_pipeline();
    let results = [
        ("oracle equivalence", oracle_equivalence(&corpus)),
        ("exact small spectra", exact_small_spectra()),
        ("lower-bound construction", lower_bound_construction()),
        ("orientation bound", hayes(&corpus)),
        ("planar bounds", planar_bounds(&corpus)),
        ("decomposition contracts", decomposition_contracts(&corpus)),
        ("tessellation pipeline", c7),
        ("boundary degree sum", c8),
        ("bound consistency grid", bound_grid()),
        ("negative controls", negative_controls()),
    ];
    let mut failed = 0;
    for (i, (name, out)) in results.iter().enumerate() {
        let tag = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!("criterion {:>2} {tag} {name}: {}", i + 1, out.detail);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
