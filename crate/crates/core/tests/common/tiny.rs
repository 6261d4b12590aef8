//! Small random mining instances and an exhaustive reference miner.

use std::collections::BTreeSet;

use kgexplain_core::axiom::sort_key;
use kgexplain_core::miner::{enumerate_candidates, DomainCatalog, MinerConfig};
use kgexplain_core::stats::correlate;
use kgexplain_core::syntax::parse_ontology;
use kgexplain_core::transfer::TransferRecord;
use kgexplain_core::{ground_template, DomainSignature, Name};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Tiny {
    pub catalog: DomainCatalog,
    pub transfers: Vec<TransferRecord>,
    pub config: MinerConfig,
}

fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    unit(rng) < p
}

fn below(rng: &mut ChaCha8Rng, k: u64) -> u64 {
    rng.next_u64() % k
}

/// 4 or 5 domains with roles `x` and `y`, up to 10 transfers, a
/// two-dimensional unbounded search, and thresholds loose enough that
/// evidences actually get accepted.
pub fn tiny_instance(seed: u64) -> Tiny {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let domains = 4 + below(&mut rng, 2) as usize;
        let mut ontologies = Vec::new();
        let mut sigs = Vec::new();
        for d in 0..domains {
            let (a, b) = (format!("a{d}"), format!("b{d}"));
            let mut text = format!("Node({a})\nNode({b})\n");
            for c in 0..3 {
                if coin(&mut rng, 0.5) {
                    text.push_str(&format!("C{c}({a})\n"));
                }
            }
            for c in 0..2 {
                if coin(&mut rng, 0.4) {
                    text.push_str(&format!("C{c}({b})\n"));
                }
            }
            if coin(&mut rng, 0.5) {
                text.push_str(&format!("p0({a}, {b})\n"));
            }
            if coin(&mut rng, 0.5) {
                text.push_str(&format!("p1({a}, hub)\n"));
            }
            if coin(&mut rng, 0.5) {
                text.push_str("SUB C1 C3\n");
            }
            let id = n(&format!("D{d}"));
            ontologies.push(parse_ontology(id.clone(), &text).unwrap().0);
            sigs.push(DomainSignature::new(id, [(n("x"), n(&a)), (n("y"), n(&b))]).unwrap());
        }
        let catalog = DomainCatalog::materialize(ontologies, sigs).unwrap();
        let candidates = enumerate_candidates(&catalog).unwrap();
        if candidates.len() > 20 {
            continue;
        }

        let m = 3 + below(&mut rng, 8) as usize;
        let planted: Vec<usize> = (0..2)
            .map(|_| below(&mut rng, candidates.len().max(1) as u64) as usize)
            .collect();
        let structured = coin(&mut rng, 0.6);
        let mut transfers = Vec::new();
        for _ in 0..m {
            let s = below(&mut rng, domains as u64) as usize;
            let mut t = below(&mut rng, domains as u64 - 1) as usize;
            if t >= s {
                t += 1;
            }
            let (src, tgt) = (n(&format!("D{s}")), n(&format!("D{t}")));
            let noise = unit(&mut rng) * 2.0 - 1.0;
            let mut score = noise;
            if structured {
                score *= 0.1;
                for (k, &c) in planted.iter().enumerate() {
                    let on = [&src, &tgt].iter().all(|d| {
                        let (o, sig) = catalog.get(d).unwrap();
                        ground_template(&candidates[c], sig).is_ok_and(|g| o.abox().contains(&g))
                    });
                    if on {
                        score += if k == 0 { 1.0 } else { -1.0 };
                    }
                }
            }
            transfers.push(TransferRecord::new(src, tgt, n("conv3"), score).unwrap());
        }
        let theta = 0.1 + 0.6 * unit(&mut rng);
        let config = MinerConfig {
            theta_pos: theta,
            theta_neg: -theta,
            alpha: 0.05 + 0.9 * unit(&mut rng),
            min_support: 1 + below(&mut rng, 2) as usize,
            max_dimension: 2,
            beam_width: None,
        };
        return Tiny {
            catalog,
            transfers,
            config,
        };
    }
}

/// Accepted evidences as (sorted serialized axioms, polarity), found by
/// scoring every combination of at most `max_dimension` candidates.
///
/// Combinations are drawn from the candidates whose own indicator varies and
/// meets the support threshold: a candidate holding on every transfer adds
/// nothing to a combination it joins.
pub fn exhaustive(tiny: &Tiny) -> BTreeSet<(Vec<String>, String)> {
    let candidates = enumerate_candidates(&tiny.catalog).unwrap();
    let scores: Vec<f64> = tiny.transfers.iter().map(|t| t.score).collect();
    let holds = |c: usize, d: &Name| {
        let (o, sig) = tiny.catalog.get(d).unwrap();
        ground_template(&candidates[c], sig).is_ok_and(|g| o.abox().contains(&g))
    };
    let indicator: Vec<Vec<bool>> = (0..candidates.len())
        .map(|c| {
            tiny.transfers
                .iter()
                .map(|t| holds(c, &t.source) && holds(c, &t.target))
                .collect()
        })
        .collect();
    let cfg = &tiny.config;
    let support = |v: &[bool]| v.iter().filter(|&&b| b).count();
    let pool: Vec<usize> = (0..candidates.len())
        .filter(|&c| {
            support(&indicator[c]) >= cfg.min_support && correlate(&indicator[c], &scores).is_ok()
        })
        .collect();

    let mut out = BTreeSet::new();
    let mut consider = |combo: &[usize]| {
        let conj: Vec<bool> = (0..scores.len())
            .map(|i| combo.iter().all(|&c| indicator[c][i]))
            .collect();
        if support(&conj) < cfg.min_support {
            return;
        }
        let Ok(stats) = correlate(&conj, &scores) else {
            return;
        };
        if let Some(p) = cfg.accept(&stats) {
            let mut keys: Vec<String> = combo.iter().map(|&c| sort_key(&candidates[c])).collect();
            keys.sort();
            out.insert((keys, p.as_str().to_string()));
        }
    };
    // all subsets of the pool up to max_dimension, by bitmask
    let k = pool.len();
    for mask in 1u64..(1u64 << k) {
        if mask.count_ones() as usize > cfg.max_dimension {
            continue;
        }
        let combo: Vec<usize> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pool[i])
            .collect();
        consider(&combo);
    }
    out
}
