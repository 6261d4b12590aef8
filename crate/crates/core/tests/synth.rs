mod common;

use kgexplain_core::miner::{coexists, mine, DomainCatalog, MinerConfig, Polarity};
use kgexplain_core::stats::correlate;
use kgexplain_core::synth::{generate_scenario, PlantedSpec, ScenarioConfig, SynthError};
use kgexplain_core::{ground_template, serialize_ontology};

fn catalog(s: &kgexplain_core::synth::SynthScenario) -> DomainCatalog {
    DomainCatalog::materialize(
        s.domains.iter().map(|(o, _)| o.clone()),
        s.domains.iter().map(|(_, sig)| sig.clone()),
    )
    .unwrap()
}

#[test]
fn replay_matches_bookkeeping() {
    let s = generate_scenario(&ScenarioConfig::default(), 42).unwrap();
    assert_eq!(s.domains.len(), 12);
    assert_eq!(s.transfers.len(), 40);
    assert_eq!(s.planted.len(), 3);
    let cat = catalog(&s);
    for p in &s.planted {
        assert_eq!(p.indicator.len(), 40);
        for (i, t) in s.transfers.iter().enumerate() {
            assert_eq!(
                coexists(&p.axioms, t, &cat).unwrap(),
                p.indicator[i],
                "{:?} transfer {i}",
                p.axioms
            );
        }
        for (o, sig) in cat.iter() {
            let holds = p
                .axioms
                .iter()
                .all(|a| o.abox().contains(&ground_template(a, sig).unwrap()));
            assert_eq!(holds, p.hosts.contains(o.id()));
        }
        assert!(p.indicator.iter().any(|&b| b) && p.indicator.iter().any(|&b| !b));
    }
}

#[test]
fn deterministic_in_seed() {
    let cfg = ScenarioConfig::default();
    let a = generate_scenario(&cfg, 7).unwrap();
    let b = generate_scenario(&cfg, 7).unwrap();
    assert_eq!(a, b);
    let text = |s: &kgexplain_core::synth::SynthScenario| {
        s.domains
            .iter()
            .map(|(o, _)| serialize_ontology(o))
            .collect::<Vec<_>>()
    };
    assert_eq!(text(&a), text(&b));
    let c = generate_scenario(&cfg, 8).unwrap();
    assert_ne!(a.transfers, c.transfers);
}

#[test]
fn zero_noise_scores_are_exact() {
    let cfg = ScenarioConfig {
        noise_sigma: 0.0,
        base_score: 0.25,
        ..ScenarioConfig::default()
    };
    for seed in 0..10 {
        let s = generate_scenario(&cfg, seed).unwrap();
        let cat = catalog(&s);
        for (i, t) in s.transfers.iter().enumerate() {
            let mut expected = 0.25;
            for p in &s.planted {
                if coexists(&p.axioms, t, &cat).unwrap() {
                    expected += p.effect;
                }
            }
            assert_eq!(t.score, expected, "seed {seed} transfer {i}");
        }
    }
}

#[test]
fn single_planted_evidence_correlates_perfectly() {
    let cfg = ScenarioConfig {
        noise_sigma: 0.0,
        planted: vec![PlantedSpec {
            effect: 0.8,
            axioms: 1,
            fraction: Some(0.3),
        }],
        ..ScenarioConfig::default()
    };
    for seed in 0..10 {
        let s = generate_scenario(&cfg, seed).unwrap();
        let p = &s.planted[0];
        let scores: Vec<f64> = s.transfers.iter().map(|t| t.score).collect();
        let r = correlate(&p.indicator, &scores).unwrap().r;
        assert_eq!(r, 1.0, "seed {seed}");
    }
}

#[test]
fn planted_recovery_over_seeds() {
    let cfg = ScenarioConfig::default();
    for seed in [1, 2, 3, 42, 1000] {
        let s = generate_scenario(&cfg, seed).unwrap();
        let r = mine(&s.transfers, &catalog(&s), &MinerConfig::default()).unwrap();
        for p in &s.planted {
            let keys: Vec<String> = p
                .axioms
                .iter()
                .map(kgexplain_core::axiom::sort_key)
                .collect();
            let found = r.evidences.iter().find(|e| e.keys() == keys);
            let found = found.unwrap_or_else(|| panic!("seed {seed}: {keys:?} missing"));
            assert_eq!(found.polarity, p.polarity);
            assert_eq!(p.polarity == Polarity::Positive, p.effect > 0.0);
        }
    }
}

#[test]
fn infeasible_configs() {
    let too_many = ScenarioConfig {
        planted: vec![PlantedSpec {
            effect: 0.5,
            axioms: 11,
            fraction: None,
        }],
        ..ScenarioConfig::default()
    };
    assert!(matches!(
        generate_scenario(&too_many, 1),
        Err(SynthError::Infeasible(_))
    ));
    let zero = ScenarioConfig {
        planted: vec![PlantedSpec {
            effect: 0.0,
            axioms: 1,
            fraction: None,
        }],
        ..ScenarioConfig::default()
    };
    assert!(generate_scenario(&zero, 1).is_err());
    let no_domains = ScenarioConfig {
        domains: 0,
        ..ScenarioConfig::default()
    };
    assert!(generate_scenario(&no_domains, 1).is_err());
}
