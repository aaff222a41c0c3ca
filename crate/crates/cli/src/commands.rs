use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use treelength::cert::Certificate;
use treelength::corerect::{RectangleSearch, SearchBudget};
use treelength::io::{load_tree, parse_words, read_text, TreeInput};
use treelength::lfcore::{
    check_axioms, find_first_pair, is_good_pair, simultaneous_good_pair, Axiom, AxiomVerdict,
    CompatVerdict, DaggerOracle, GoodPairCertificate, LengthOracle, PairClass,
};
use treelength::pipeline::{self, CompatStatus};
use treelength::words::{enumerate_words, Alphabet};
use treelength::{Error, Rational, Result, Scalar, Word};

use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Ok = 0,
    Incompatible = 1,
    Unknown = 2,
    InputError = 3,
}

/// What a command prints, in both formats, plus an optional file artifact.
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub code: Code,
    pub artifact: Option<String>,
}

type Tree = TreeInput<Rational>;

fn q(x: &Rational) -> String {
    x.to_fraction()
}

fn load(path: &Path) -> Result<Tree> {
    load_tree(path)
}

fn gather_words(al: &Alphabet, file: Option<&Path>, inline: &[String]) -> Result<Vec<Word>> {
    let mut out = match file {
        Some(p) => parse_words(al, &read_text(p)?)?,
        None => Vec::new(),
    };
    for (i, w) in inline.iter().enumerate() {
        out.push(al.parse_at(w, i + 1)?);
    }
    if out.is_empty() {
        return Err(Error::Precondition("no words given".into()));
    }
    Ok(out)
}

fn class_json(c: &PairClass<Rational>) -> Value {
    json!({
        "kind": c.kind,
        "orientation": c.orientation(),
        "l_g": q(&c.l_g), "l_h": q(&c.l_h), "l_gh": q(&c.l_gh), "l_gh_inv": q(&c.l_gh_inv),
    })
}

fn class_text(c: &PairClass<Rational>) -> String {
    format!(
        "{:?} (ℓ(g)={}, ℓ(h)={}, ℓ(gh)={}, ℓ(gh⁻¹)={})",
        c.kind,
        q(&c.l_g),
        q(&c.l_h),
        q(&c.l_gh),
        q(&c.l_gh_inv)
    )
}

fn good_pair_json(al: &Alphabet, c: &GoodPairCertificate<Rational>) -> Value {
    json!({
        "g": al.format(&c.g), "h": al.format(&c.h),
        "l_g": q(&c.l_g), "l_h": q(&c.l_h), "l_gh": q(&c.l_gh), "l_gh_inv": q(&c.l_gh_inv),
        "lower_slack": q(&c.lower_slack), "upper_slack": q(&c.upper_slack),
    })
}

fn good_pair_text(c: &GoodPairCertificate<Rational>) -> String {
    format!(
        "ℓ(g)={} ℓ(h)={} ℓ(gh⁻¹)={}: 0 < {} < {}",
        q(&c.l_g),
        q(&c.l_h),
        q(&c.l_gh_inv),
        q(&c.lower_slack),
        q(&(c.lower_slack + c.upper_slack))
    )
}

fn value_table(al: &Alphabet, rows: &[(Word, Rational)], what: &str) -> Report {
    let text = rows
        .iter()
        .map(|(w, v)| format!("{}\t{}", al.format(w), q(v)))
        .collect();
    let json = json!({
        "rows": rows.iter().map(|(w, v)| json!({ "word": al.format(w), what: q(v) })).collect::<Vec<_>>()
    });
    Report {
        text,
        json,
        code: Code::Ok,
        artifact: None,
    }
}

pub fn length(tree: &Path, words: Option<&Path>, inline: &[String]) -> Result<Report> {
    let t = load(tree)?;
    let ws = gather_words(t.alphabet(), words, inline)?;
    let rows: Vec<(Word, Rational)> = ws.into_iter().map(|w| {
        let v = t.eval(&w);
        (w, v)
    }).collect();
    Ok(value_table(t.alphabet(), &rows, "length"))
}

pub fn axioms(tree: &Path, len_bound: usize) -> Result<Report> {
    let t = load(tree)?;
    let al = t.alphabet().clone();
    let elements: Vec<Word> = enumerate_words(al.rank(), len_bound).collect();
    let rep = check_axioms(&t, &elements)?;
    let mut text = vec![format!(
        "{} elements, {} ordered pairs",
        rep.elements, rep.ordered_pairs
    )];
    let mut verdicts = serde_json::Map::new();
    for ax in Axiom::ALL {
        let v = rep.verdict(ax);
        text.push(format!("{ax:?}: {v:?}"));
        verdicts.insert(format!("{ax:?}"), json!(format!("{v:?}")));
    }
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": format!("{:?}", v.axiom),
                "words": v.words.iter().map(|w| al.format(w)).collect::<Vec<_>>(),
                "values": v.values.iter().map(q).collect::<Vec<_>>(),
                "detail": v.detail,
            })
        })
        .collect();
    for v in rep.violations.iter().take(10) {
        let ws: Vec<String> = v.words.iter().map(|w| al.format(w)).collect();
        text.push(format!("  {:?} violated at ({}): {}", v.axiom, ws.join(", "), v.detail));
    }
    if rep.violations.len() > 10 {
        text.push(format!("  … {} violations in total", rep.violations.len()));
    }
    let witness = rep.witness.as_ref().map(|c| good_pair_json(&al, c));
    if let Some(c) = &rep.witness {
        text.push(format!(
            "good pair ({}, {}): {}",
            al.format(&c.g),
            al.format(&c.h),
            good_pair_text(c)
        ));
    }
    let pass = rep.all_pass();
    let code = if pass {
        Code::Ok
    } else if rep.verdict(Axiom::VI) == AxiomVerdict::Fail && rep.violations.iter().all(|v| v.axiom == Axiom::VI) {
        Code::Unknown
    } else {
        Code::Incompatible
    };
    Ok(Report {
        text,
        json: json!({
            "elements": rep.elements,
            "ordered_pairs": rep.ordered_pairs,
            "verdicts": verdicts,
            "violations": violations,
            "good_pair": witness,
            "pass": pass,
        }),
        code,
        artifact: rep.witness.as_ref().map(|c| Certificate::good_pair(&al, c).to_json()),
    })
}

pub fn compat(a: &Path, b: &Path, len_bound: usize, budget: Budget, seed: u64) -> Result<Report> {
    let (ta, tb) = (load(a)?, load(b)?);
    let al = ta.alphabet().clone();
    let budget = SearchBudget::new(budget.words, budget.anchors)?;
    let out = pipeline::compat(&ta, &tb, len_bound, budget, seed)?;
    let (status, code) = match out.status {
        CompatStatus::Incompatible => ("incompatible", Code::Incompatible),
        CompatStatus::CompatibleUpToBound => ("compatible up to bound", Code::Ok),
        CompatStatus::Unknown => ("unknown", Code::Unknown),
    };
    let mut text = vec![format!("verdict: {status}")];
    let pair = match &out.verdict {
        CompatVerdict::IncompatibleCombinatorics { g, h, class_l, class_m }
        | CompatVerdict::IncoherentOrientation { g, h, class_l, class_m } => {
            let kind = if matches!(out.verdict, CompatVerdict::IncoherentOrientation { .. }) {
                "orientation"
            } else {
                "combinatorics"
            };
            text.push(format!("pair witness ({kind}): g = {}, h = {}", al.format(g), al.format(h)));
            text.push(format!("  A: {}", class_text(class_l)));
            text.push(format!("  B: {}", class_text(class_m)));
            json!({
                "witness": kind, "g": al.format(g), "h": al.format(h),
                "a": class_json(class_l), "b": class_json(class_m),
            })
        }
        CompatVerdict::CompatibleUpToBound { pairs_checked } => {
            json!({ "pairs_checked": pairs_checked.to_string() })
        }
    };
    let rectangle = match &out.rectangle {
        Some(RectangleSearch::Found(_)) => json!("found"),
        Some(RectangleSearch::NotFoundUpToBudget { a_lifts, b_lifts, words }) => {
            json!({ "not_found": { "a_lifts": a_lifts, "b_lifts": b_lifts, "words": words } })
        }
        None => Value::Null,
    };
    text.extend(out.log.iter().cloned());
    Ok(Report {
        text,
        json: json!({
            "verdict": status,
            "len_bound": len_bound,
            "budget": [budget.max_word_len, budget.max_anchor_len],
            "pair": pair,
            "rectangle": rectangle,
            "certificate": out.certificate,
            "log": out.log,
        }),
        code,
        artifact: out.certificate.as_ref().map(Certificate::to_json),
    })
}

pub fn good_pair(tree: &Path, tree_b: Option<&Path>, len_bound: usize) -> Result<Report> {
    let t = load(tree)?;
    let al = t.alphabet().clone();
    let not_found = |what: &str| Report {
        text: vec![format!("no {what} among words ≤ {len_bound}")],
        json: json!({ "found": false, "len_bound": len_bound }),
        code: Code::Unknown,
        artifact: None,
    };
    match tree_b {
        None => {
            let Some((g, h, ())) = find_first_pair(al.rank(), len_bound, |g, h| is_good_pair(&t, g, h).then_some(()))
            else {
                return Ok(not_found("good pair"));
            };
            let c = GoodPairCertificate::evaluate(&t, &g, &h)?;
            Ok(Report {
                text: vec![
                    format!("good pair g = {}, h = {}", al.format(&g), al.format(&h)),
                    format!("  {}", good_pair_text(&c)),
                ],
                json: json!({ "found": true, "pair": good_pair_json(&al, &c) }),
                code: Code::Ok,
                artifact: Some(Certificate::good_pair(&al, &c).to_json()),
            })
        }
        Some(path) => {
            let m = load(path)?;
            let Some(gp) = simultaneous_good_pair(&t, &m, len_bound)? else {
                return Ok(not_found("simultaneous good pair"));
            };
            Ok(Report {
                text: vec![
                    format!("simultaneous good pair g = {}, h = {}", al.format(&gp.g), al.format(&gp.h)),
                    format!("  A: {}", good_pair_text(&gp.for_l)),
                    format!("  B: {}", good_pair_text(&gp.for_m)),
                    format!("  A+B: {}", good_pair_text(&gp.for_sum)),
                ],
                json: json!({
                    "found": true,
                    "a": good_pair_json(&al, &gp.for_l),
                    "b": good_pair_json(&al, &gp.for_m),
                    "sum": good_pair_json(&al, &gp.for_sum),
                }),
                code: Code::Ok,
                artifact: Some(Certificate::simultaneous(&al, &gp).to_json()),
            })
        }
    }
}

pub fn based_length(tree: &Path, g: &str, h: &str, words: Option<&Path>, inline: &[String]) -> Result<Report> {
    let t = load(tree)?;
    let al = t.alphabet().clone();
    let (g, h) = (al.parse(g)?, al.parse(h)?);
    let c = GoodPairCertificate::evaluate(&t, &g, &h)?;
    let p = DaggerOracle::new(&t, &c)?;
    let ws = gather_words(&al, words, inline)?;
    let rows: Vec<(Word, Rational)> = ws.into_iter().map(|w| {
        let v = p.eval(&w);
        (w, v)
    }).collect();
    Ok(value_table(&al, &rows, "based_length"))
}

pub fn refine(a: &Path, b: &Path, len_bound: usize, sample_bound: usize, pair_bound: usize) -> Result<Report> {
    let (ta, tb) = (load(a)?, load(b)?);
    let al = ta.alphabet().clone();
    let out = match pipeline::refine(&ta, &tb, len_bound, sample_bound, pair_bound) {
        Ok(o) => o,
        Err(Error::Precondition(msg)) if msg.starts_with("trees are incompatible") => {
            return Ok(Report {
                text: vec![format!("refused: {msg}")],
                json: json!({ "refused": msg }),
                code: Code::Incompatible,
                artifact: None,
            })
        }
        Err(e) => return Err(e),
    };
    let gp = &out.good_pair;
    let doc = out.tree.to_document(&al, &format!("orbit of the words of length ≤ {sample_bound}"));
    let pass = out.passes();
    let text = vec![
        format!("good pair g = {}, h = {}", al.format(&gp.g), al.format(&gp.h)),
        format!(
            "tree: {} sample points, {} nodes, {} edges",
            out.tree.sample.len(),
            out.tree.nodes.len(),
            out.tree.edges.len()
        ),
        format!(
            "refinement: {} pairs, {} triples, {} violations",
            out.refinement.pairs_checked,
            out.refinement.triples_checked,
            out.refinement.violations.len()
        ),
        format!("displacement: {} violations", out.displacement.violations.len()),
        format!("newick: {}", out.tree.to_newick(&al)),
    ];
    Ok(Report {
        text,
        json: json!({
            "good_pair": { "g": al.format(&gp.g), "h": al.format(&gp.h) },
            "tree": doc,
            "pairs_checked": out.refinement.pairs_checked,
            "triples_checked": out.refinement.triples_checked,
            "refinement_violations": out.refinement.violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
            "displacement_violations": out.displacement.violations.iter().map(|w| al.format(w)).collect::<Vec<_>>(),
            "pass": pass,
        }),
        code: if pass { Code::Ok } else { Code::Unknown },
        artifact: Some(serde_json::to_string_pretty(&doc).expect("tree documents serialize")),
    })
}

pub fn verify(certificate: &Path, trees: &[PathBuf]) -> Result<Report> {
    let cert = Certificate::from_json(&read_text(certificate)?)?;
    let loaded: Vec<Tree> = trees.iter().map(|p| load(p)).collect::<Result<_>>()?;
    Ok(match cert.verify(&loaded) {
        Ok(lines) => Report {
            text: lines.iter().map(|l| format!("ok: {l}")).chain(["pass".to_string()]).collect(),
            json: json!({ "pass": true, "checks": lines }),
            code: Code::Ok,
            artifact: None,
        },
        Err(e @ (Error::Certificate(_) | Error::Precondition(_))) => Report {
            text: vec![format!("fail: {e}")],
            json: json!({ "pass": false, "reason": e.to_string() }),
            code: Code::Incompatible,
            artifact: None,
        },
        Err(e) => return Err(e),
    })
}
