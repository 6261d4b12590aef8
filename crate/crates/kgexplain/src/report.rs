//! JSON documents written by the command-line tools.

use kgexplain_core::enrich::Alignment;
use kgexplain_core::miner::{EvidenceReport, MinerConfig};
use kgexplain_core::reasoner::Bindings;
use kgexplain_core::synth::SynthScenario;
use kgexplain_core::zsl::Justification;
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigJson {
    pub theta_pos: f64,
    pub theta_neg: f64,
    pub alpha: f64,
    pub min_support: usize,
    pub max_dimension: usize,
    /// null when unbounded
    pub beam_width: Option<usize>,
}

impl From<&MinerConfig> for ConfigJson {
    fn from(c: &MinerConfig) -> Self {
        ConfigJson {
            theta_pos: c.theta_pos,
            theta_neg: c.theta_neg,
            alpha: c.alpha,
            min_support: c.min_support,
            max_dimension: c.max_dimension,
            beam_width: c.beam_width,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvidenceJson {
    pub axioms: Vec<String>,
    pub polarity: &'static str,
    pub r: f64,
    pub n: usize,
    /// null for a perfect correlation
    pub t_stat: Option<f64>,
    pub p_value: f64,
    pub support: usize,
    pub indicator: Vec<u8>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub config: ConfigJson,
    pub feature: Option<String>,
    pub candidates_scanned: usize,
    pub skipped_zero_variance: usize,
    pub pruned_support: usize,
    pub evidences: Vec<EvidenceJson>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| u8::from(b)).collect()
}

pub fn report_json(r: &EvidenceReport, feature: Option<&str>) -> ReportJson {
    ReportJson {
        config: (&r.config).into(),
        feature: feature.map(String::from),
        candidates_scanned: r.candidates_scanned,
        skipped_zero_variance: r.skipped_zero_variance,
        pruned_support: r.pruned_support,
        evidences: r
            .evidences
            .iter()
            .map(|e| EvidenceJson {
                axioms: e.keys(),
                polarity: e.polarity.as_str(),
                r: e.stats.r,
                n: e.stats.n,
                t_stat: finite(e.stats.t_stat),
                p_value: e.stats.p_value,
                support: e.stats.support,
                indicator: bits(&e.indicator),
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct AlignmentJson {
    pub root: String,
    pub status: &'static str,
    pub entity: Option<String>,
}

pub fn alignment_json(report: &[Alignment]) -> Vec<AlignmentJson> {
    report
        .iter()
        .map(|a| AlignmentJson {
            root: a.root.to_string(),
            status: a.status.as_str(),
            entity: a.entity.clone(),
        })
        .collect()
}

/// Query answers as objects from variable name to rendered value.
pub fn bindings_json(answers: &[Bindings]) -> Vec<std::collections::BTreeMap<String, String>> {
    answers
        .iter()
        .map(|b| {
            b.iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct WeightJson {
    pub class: String,
    pub weight: f64,
}

#[derive(Debug, Serialize)]
pub struct AncestorJson {
    pub seen: String,
    pub ancestors: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PropertyJson {
    pub property: String,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct SharedJson {
    pub seen: String,
    pub shared: Vec<PropertyJson>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JustificationJson {
    pub unseen: String,
    pub impressive: Vec<WeightJson>,
    pub hierarchy_evidence: Vec<AncestorJson>,
    pub property_evidence: Vec<SharedJson>,
    pub rendered: Vec<String>,
}

impl From<&Justification> for JustificationJson {
    fn from(j: &Justification) -> Self {
        JustificationJson {
            unseen: j.unseen.clone(),
            impressive: j
                .impressive
                .iter()
                .map(|(c, w)| WeightJson {
                    class: c.clone(),
                    weight: *w,
                })
                .collect(),
            hierarchy_evidence: j
                .hierarchy_evidence
                .iter()
                .map(|(s, a)| AncestorJson {
                    seen: s.clone(),
                    ancestors: a.clone(),
                })
                .collect(),
            property_evidence: j
                .property_evidence
                .iter()
                .map(|(s, ps)| SharedJson {
                    seen: s.clone(),
                    shared: ps
                        .iter()
                        .map(|(p, v)| PropertyJson {
                            property: p.clone(),
                            value: v.clone(),
                        })
                        .collect(),
                })
                .collect(),
            rendered: j.rendered.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlantedJson {
    pub axioms: Vec<String>,
    pub polarity: &'static str,
    pub effect: f64,
    pub hosts: Vec<String>,
    pub indicator: Vec<u8>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroundTruthJson {
    pub seed: u64,
    pub noise_sigma: f64,
    pub planted: Vec<PlantedJson>,
}

pub fn ground_truth_json(s: &SynthScenario) -> GroundTruthJson {
    GroundTruthJson {
        seed: s.seed,
        noise_sigma: s.noise_sigma,
        planted: s
            .planted
            .iter()
            .map(|p| PlantedJson {
                axioms: p
                    .axioms
                    .iter()
                    .map(kgexplain_core::axiom::sort_key)
                    .collect(),
                polarity: p.polarity.as_str(),
                effect: p.effect,
                hosts: p.hosts.iter().map(|h| h.to_string()).collect(),
                indicator: bits(&p.indicator),
            })
            .collect(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use kgexplain_core::miner::{Evidence, Polarity};
    use kgexplain_core::stats::CorrelationResult;
    use kgexplain_core::syntax::parse_statement;

    #[test]
    fn evidence_schema() {
        let report = EvidenceReport {
            config: MinerConfig {
                beam_width: None,
                ..MinerConfig::default()
            },
            candidates_scanned: 5,
            skipped_zero_variance: 1,
            pruned_support: 0,
            evidences: vec![Evidence {
                axioms: vec![parse_statement("ListCarrier(?car)").unwrap()],
                polarity: Polarity::Positive,
                stats: CorrelationResult {
                    r: 1.0,
                    n: 4,
                    t_stat: f64::INFINITY,
                    p_value: 0.0,
                    support: 2,
                },
                indicator: vec![true, false, true, false],
            }],
        };
        let v: serde_json::Value =
            serde_json::from_str(&to_json(&report_json(&report, None))).unwrap();
        assert_eq!(v["candidatesScanned"], 5);
        assert_eq!(v["skippedZeroVariance"], 1);
        assert_eq!(v["config"]["beamWidth"], serde_json::Value::Null);
        assert_eq!(v["config"]["thetaPos"], 0.6);
        let e = &v["evidences"][0];
        assert_eq!(e["axioms"][0], "ListCarrier(?car)");
        assert_eq!(e["polarity"], "positive");
        assert_eq!(e["tStat"], serde_json::Value::Null);
        assert_eq!(e["pValue"], 0.0);
        assert_eq!(e["indicator"], serde_json::json!([1, 0, 1, 0]));
    }
}
