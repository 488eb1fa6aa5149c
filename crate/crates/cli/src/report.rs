use std::fmt::Write as _;

use ablkit::abl::ElementOfReality;
use ablkit::contextuality::{ColoringResult, SearchResult};
use ablkit::rules::{SweepEntry, SweepResult};
use ablkit::{FactResult, OutcomeDistribution, Provenance, RuleReport};
use serde::{Deserialize, Serialize};

use crate::format;

/// Everything a command prints. Serialized as the `--json` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub result: Body,
}

/// An expectation echoed next to a computed result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub claim: String,
    pub provenance: Provenance,
    pub met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    ScenarioList {
        scenarios: Vec<CatalogEntry>,
    },
    ScenarioRun {
        scenario: String,
        description: String,
        facts: Vec<FactResult>,
        all_passed: bool,
    },
    Abl {
        observable: String,
        /// `abl` with a post-selection, `born` without.
        formula: String,
        distribution: OutcomeDistribution,
        element: Option<ElementOfReality>,
    },
    Rule {
        report: RuleReport,
        expected: Option<Expected>,
    },
    Sweep {
        pairing: String,
        interpretation: String,
        rows: Vec<SweepEntry>,
        expected: Option<Expected>,
    },
    Search {
        source: String,
        result: SearchResult,
        parity_obstruction: bool,
        expected: Option<Expected>,
    },
    KsColor {
        result: ColoringResult,
    },
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn element(e: Option<&ElementOfReality>) -> String {
    e.map_or_else(|| "none".to_string(), |e| format::value(e.value))
}

fn expected_line(out: &mut String, e: &Option<Expected>) {
    if let Some(e) = e {
        let _ = writeln!(out, "{} {} expected: {}", pass(e.met), e.provenance, e.claim);
    }
}

fn rule_block(out: &mut String, r: &RuleReport, indent: &str) {
    let _ = writeln!(
        out,
        "{indent}{{{}}} = {}, {{{}}} = {}, {{{}}} = {}",
        r.a,
        element(r.eor_a.as_ref()),
        r.b,
        element(r.eor_b.as_ref()),
        r.combined_label,
        element(r.eor_combined.as_ref())
    );
    let _ = writeln!(out, "{indent}p({}) = {}", r.combined_label, format::distribution(&r.combined));
    let _ = writeln!(out, "{indent}verdict: {:?}", r.verdict);
}

/// `pretty_expected[i]`, when present, replaces the raw expected string of
/// fact `i`.
pub fn render_human(report: &RunReport, pretty_expected: &[Option<String>]) -> String {
    let mut out = String::new();
    match &report.result {
        Body::ScenarioList { scenarios } => {
            for s in scenarios {
                let _ = writeln!(out, "{:<18} {}", s.name, s.description);
            }
        }
        Body::ScenarioRun {
            scenario,
            description,
            facts,
            all_passed,
        } => {
            let _ = writeln!(out, "scenario {scenario}: {description}");
            for (i, f) in facts.iter().enumerate() {
                let expected = pretty_expected.get(i).cloned().flatten().unwrap_or_else(|| f.expected.clone());
                let actual = f.distribution.as_ref().map_or_else(|| f.actual.clone(), format::distribution);
                let _ = writeln!(out, "{} {} {}", pass(f.passed), f.provenance, f.description);
                let _ = writeln!(out, "    expected {expected}");
                let _ = writeln!(out, "    actual   {actual}");
                if !f.passed {
                    let _ = writeln!(
                        out,
                        "    mismatch in scenario {scenario}: {} expected {} but got {}",
                        f.description, f.expected, f.actual
                    );
                }
            }
            let failed = facts.iter().filter(|f| !f.passed).count();
            let _ = writeln!(
                out,
                "{}: {} of {} facts hold",
                pass(*all_passed),
                facts.len() - failed,
                facts.len()
            );
        }
        Body::Abl {
            observable,
            formula,
            distribution,
            element: e,
        } => {
            let _ = writeln!(out, "{formula} distribution of {observable}");
            for o in distribution.outcomes() {
                let _ = writeln!(out, "  {:>8}  {}", format::value(o.eigenvalue), format::probability(o.probability));
            }
            let _ = writeln!(out, "element of reality: {}", element(e.as_ref()));
        }
        Body::Rule { report: r, expected } => {
            let name = match r.rule {
                ablkit::Rule::Sum { r1, r2 } => format!("sum rule (r1 = {r1}, r2 = {r2})"),
                ablkit::Rule::Product => "product rule".to_string(),
            };
            let _ = writeln!(out, "{name} for {}, {}", r.a, r.b);
            rule_block(&mut out, r, "  ");
            expected_line(&mut out, expected);
        }
        Body::Sweep {
            pairing,
            interpretation,
            rows,
            expected,
        } => {
            let _ = writeln!(out, "pairing: {pairing}");
            let _ = writeln!(out, "interpretation: {interpretation}");
            for row in rows {
                let _ = write!(out, "{}  ({}, {})  ", row.post_label, row.a, row.b);
                match &row.result {
                    SweepResult::Skipped { reason } => {
                        let _ = writeln!(out, "skipped: {reason}");
                    }
                    SweepResult::Evaluated { sum, product } => {
                        let _ = writeln!(out, "sum: {:?}  product: {:?}", sum.verdict, product.verdict);
                    }
                }
            }
            let evaluated = rows.iter().filter(|r| !r.is_skipped()).count();
            let holds = rows
                .iter()
                .filter(|r| matches!(&r.result, SweepResult::Evaluated { sum, product } if sum.verdict.holds() || product.verdict.holds()))
                .count();
            let _ = writeln!(
                out,
                "{} rows, {evaluated} evaluated, {holds} with a Holds verdict",
                rows.len()
            );
            expected_line(&mut out, expected);
        }
        Body::Search {
            source,
            result,
            parity_obstruction,
            expected,
        } => {
            let _ = writeln!(out, "constraint system: {source}");
            let _ = writeln!(out, "variables: {}", result.variables.len());
            let _ = writeln!(out, "satisfying: {} of {}", result.count, result.search_space);
            if *parity_obstruction {
                let _ = writeln!(
                    out,
                    "parity certificate: every variable appears an even number of times and the signs multiply to -1"
                );
            }
            for w in &result.witnesses {
                let parts: Vec<String> = result
                    .variables
                    .iter()
                    .zip(&w.values)
                    .map(|(v, x)| format!("{v}={x:+}"))
                    .collect();
                let _ = writeln!(out, "  {}", parts.join(" "));
            }
            expected_line(&mut out, expected);
        }
        Body::KsColor { result } => {
            let _ = writeln!(out, "directions: {}", result.directions);
            let _ = writeln!(out, "satisfying: {} of {}", result.count, result.search_space);
            for w in &result.witnesses {
                let s: Vec<String> = w.iter().map(u8::to_string).collect();
                let _ = writeln!(out, "  {}", s.join(""));
            }
        }
    }
    out
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is plain data");
    s.push('\n');
    s
}
