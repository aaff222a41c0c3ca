//! Acceptance criteria 1–9. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any FAIL.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use treelength::cert::{Certificate, DerivedPairsDoc, RectangleDoc};
use treelength::corerect::{
    certificate_from_rectangle, rectangle_from_pair, RectangleSearch, SearchBudget,
};
use treelength::io::{load_tree, TreeInput};
use treelength::lfcore::{
    based_sum_identity, check_axioms, classify_pair, compatible_on_words, nontrivial_words,
    simultaneous_good_pair, sum_oracle, Axiom, CompatVerdict, DaggerOracle, GoodPairCertificate,
    LengthOracle, Orientation, PairKind, ScaledOracle,
};
use treelength::mgraph::presets::{k4, random_lengths, rose, theta};
use treelength::mgraph::{AxisRelation, MarkedGraph};
use treelength::pipeline::{self, CompatStatus};
use treelength::refine::{build_tree, orbit_metric, verify_refinement};
use treelength::words::{enumerate_cyclic_words, enumerate_words};
use treelength::{Alphabet, Rational, Scalar, Word};

type Outcome = Result<String, String>;
type Tree = TreeInput<Rational>;

fn fixture(name: &str) -> Tree {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_tree(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn marked(name: &str) -> MarkedGraph<Rational> {
    fixture(name).as_marked().expect("marked graph fixture").clone()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let (a, b, t) = (fixture("example10_A.json"), fixture("example10_B.json"), fixture("example10_T.json"));
    let words: Vec<Word> = enumerate_cyclic_words(4, 8).map(|c| c.as_word()).collect();
    let bad: Vec<&Word> = words
        .par_iter()
        .filter(|w| a.eval(w) + b.eval(w) != t.eval(w))
        .collect();
    ensure(bad.is_empty(), || {
        format!("ℓ_A + ℓ_B ≠ ℓ_T at {} (first of {})", a.alphabet().format(bad[0]), bad.len())
    })?;
    Ok(format!("ℓ_A + ℓ_B = ℓ_T on {} cyclic words of length ≤ 8", words.len()))
}

fn random_oracles() -> Vec<(String, MarkedGraph<Rational>)> {
    let graphs = [
        ("rose2", rose::<Rational>(&Alphabet::standard(2)).graph().clone(), 2),
        ("theta3", theta::<Rational>(3), 2),
        ("barbell", marked("barbell.json").graph().clone(), 2),
        ("rose3", rose::<Rational>(&Alphabet::standard(3)).graph().clone(), 3),
        ("theta4", theta::<Rational>(4), 3),
        ("k4", k4::<Rational>(), 3),
    ];
    (0..20u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i);
            let (name, g, rank) = &graphs[i as usize % graphs.len()];
            let g = random_lengths(g, &mut rng);
            let steps = rng.gen_range(3..9);
            let t = MarkedGraph::standard(g, 0, Alphabet::standard(*rank))
                .and_then(|t| t.random_nielsen(&mut rng, steps))
                .expect("random marking");
            (format!("{name}#{i}"), t)
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut oracles = vec![("rose2".to_string(), marked("rose2.json")), ("barbell".to_string(), marked("barbell.json"))];
    oracles.extend(random_oracles());
    let mut pairs = 0usize;
    for (name, t) in &oracles {
        let elements: Vec<Word> = enumerate_words(t.alphabet().rank(), 4).collect();
        let rep = check_axioms(t, &elements).map_err(e2s)?;
        for ax in [Axiom::NonNegativity, Axiom::I, Axiom::II, Axiom::III, Axiom::IV, Axiom::V] {
            ensure(rep.passes(ax), || {
                let v = rep.violations_of(ax).next();
                format!("{name}: axiom {ax:?} fails: {}", v.map_or(String::new(), |v| v.detail.clone()))
            })?;
        }
        let w = rep.witness.as_ref().ok_or_else(|| format!("{name}: no good pair among words ≤ 4"))?;
        w.verify(t).map_err(|e| format!("{name}: witness does not verify: {e}"))?;
        pairs += rep.ordered_pairs;
    }
    Ok(format!("{} oracles pass I–V with a VI witness; {pairs} ordered pairs", oracles.len()))
}

fn criterion_3() -> Outcome {
    let mut n = 0usize;
    for name in ["rose2.json", "barbell.json"] {
        let t = marked(name);
        let al = t.alphabet().clone();
        let words = nontrivial_words(al.rank(), 4);
        let mismatches: Vec<String> = words
            .par_iter()
            .flat_map_iter(|g| {
                let t = &t;
                let al = &al;
                words.iter().filter(move |h| *h != g).filter_map(move |h| {
                    let c = match classify_pair(t, g, h) {
                        Ok(c) => c,
                        Err(e) => return Some(format!("({}, {}): {e}", al.format(g), al.format(h))),
                    };
                    let geometric = match t.relate(g, h).expect("hyperbolic") {
                        AxisRelation::Disjoint { .. } => (PairKind::Disjoint, Orientation::NotOverlap),
                        AxisRelation::Point(_) => (PairKind::Neither, Orientation::NotOverlap),
                        AxisRelation::Overlap { agree: true, .. } => (PairKind::Overlap, Orientation::Agree),
                        AxisRelation::Overlap { agree: false, .. } => (PairKind::Overlap, Orientation::Oppose),
                    };
                    let numeric = (c.kind, c.orientation());
                    (numeric != geometric).then(|| {
                        format!("({}, {}): numeric {numeric:?}, geometric {geometric:?}", al.format(g), al.format(h))
                    })
                })
            })
            .collect();
        ensure(mismatches.is_empty(), || format!("{name}: {} mismatches, first {}", mismatches.len(), mismatches[0]))?;
        n += words.len() * (words.len() - 1);
    }
    Ok(format!("numeric and geometric classes agree on {n} ordered pairs (100%)"))
}

fn criterion_4() -> Outcome {
    let r = marked("rose2.json");
    let al = r.alphabet().clone();
    let (g, h) = (al.parse("a a b").unwrap(), al.parse("a a b'").unwrap());
    let gp = GoodPairCertificate::evaluate(&r, &g, &h).map_err(e2s)?;
    gp.check_inequalities().map_err(e2s)?;
    let x3 = g.concat(&h.inverse());
    let p = r
        .common_point(&[g.clone(), h.clone(), x3])
        .map_err(e2s)?
        .ok_or("the three axes do not meet in a single point")?;
    let dagger = DaggerOracle::new(&r, &gp).map_err(e2s)?;
    let words: Vec<Word> = enumerate_words(2, 5).collect();
    let bad: Vec<&Word> = words.iter().filter(|w| dagger.eval(w) != r.based_length(&p, w)).collect();
    ensure(bad.is_empty(), || format!("differs at {} ({} words)", al.format(bad[0]), bad.len()))?;
    Ok(format!("dagger length = cover length at the triple point on {} words ≤ 5", words.len()))
}

fn criterion_5() -> Outcome {
    let mut out = Vec::new();
    for (label, a, b) in [
        ("example10", fixture("example10_A.json"), fixture("example10_B.json")),
        ("barbell/rose2", fixture("barbell.json"), fixture("rose2.json")),
    ] {
        let gp = simultaneous_good_pair(&a, &b, 4)
            .map_err(e2s)?
            .ok_or_else(|| format!("{label}: no simultaneous good pair ≤ 4"))?;
        let sample: Vec<Word> = enumerate_words(a.alphabet().rank(), 4).collect();
        let rep = based_sum_identity(&a, &b, &gp, &sample).map_err(e2s)?;
        ensure(rep.violations.is_empty(), || format!("{label}: {} violations, first {:?}", rep.violations.len(), rep.violations[0]))?;
        out.push(format!("{label} {} words", rep.checked));
    }
    Ok(format!("P_{{ℓ+m}} = P_ℓ + P_m exactly: {}", out.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut out = Vec::new();
    for (label, a, b) in [
        ("example10", fixture("example10_A.json"), fixture("example10_B.json")),
        ("barbell/rose2", fixture("barbell.json"), fixture("rose2.json")),
    ] {
        let gp = simultaneous_good_pair(&a, &b, 4).map_err(e2s)?.ok_or("no good pair")?;
        let sum = sum_oracle(&a, &b).map_err(e2s)?;
        let p = DaggerOracle::new(&sum, &gp.for_sum).map_err(e2s)?;
        let sample: Vec<Word> = enumerate_words(a.alphabet().rank(), 3).collect();
        let om = orbit_metric(&p, &sample).map_err(|e| format!("{label}: {e}"))?;
        let tree = build_tree(&om).map_err(|e| format!("{label}: {e}"))?;
        ensure(tree.sample_distances() == om.d, || format!("{label}: tree distances differ from the metric"))?;
        let rep = verify_refinement(&a, &b, &gp, &tree).map_err(e2s)?;
        ensure(rep.passes(), || format!("{label}: {:?}", rep.violations[0]))?;
        let n = om.len() as u128;
        out.push(format!(
            "{label} {} points, {} quadruples, {} triples",
            om.len(),
            n * (n - 1) * (n - 2) * (n - 3) / 24,
            rep.triples_checked
        ));
    }
    Ok(format!("four-point, exact reconstruction, ℓ₁ and alignment: {}", out.join("; ")))
}

fn phi_squared() -> Result<MarkedGraph<Rational>, String> {
    let r = marked("rose2.json");
    let al = r.alphabet().clone();
    let phi = |w: &Word| -> Word {
        w.letters()
            .iter()
            .map(|l| {
                let img = if l.generator == 0 { al.parse("a b").unwrap() } else { al.parse("a").unwrap() };
                if l.inverse { img.inverse() } else { img }
            })
            .fold(Word::identity(), |acc, x| acc.concat(&x))
    };
    let auto: Vec<Word> = (0..2).map(|i| phi(&phi(&Word::generator(i)))).collect();
    r.precompose(&auto).map_err(e2s)
}

fn criterion_7() -> Outcome {
    let r = marked("rose2.json");
    let t = marked("rose2_phi2.json");
    let computed = phi_squared()?;
    for w in nontrivial_words(2, 5) {
        ensure(t.eval(&w) == computed.eval(&w), || "fixture is not the φ² marking".into())?;
    }
    let (a, b) = (TreeInput::Marked(r.clone()), TreeInput::Marked(t.clone()));
    let out = pipeline::compat(&a, &b, 3, SearchBudget::new(6, 4).map_err(e2s)?, 0).map_err(e2s)?;
    ensure(out.status == CompatStatus::Incompatible, || format!("status {:?}", out.status))?;
    // (i) pair witness through length values only.
    ensure(!out.verdict.is_compatible_up_to_bound(), || "no pair witness".into())?;
    out.verdict.recheck(&r, &t).map_err(e2s)?;
    // (ii) rectangle through horizons only.
    let Some(RectangleSearch::Found(rect)) = &out.rectangle else {
        return Err("no rectangle within budget (6,4)".into());
    };
    rect.verify(&r, &t).map_err(e2s)?;
    let pairs = certificate_from_rectangle(&r, &t, rect).map_err(e2s)?;
    let back = rectangle_from_pair(&r, &t, &pairs.rho, &pairs.sigma).map_err(e2s)?;
    back.verify(&r, &t).map_err(e2s)?;
    let again = certificate_from_rectangle(&r, &t, &back).map_err(e2s)?;
    ensure(
        (again.class_a.kind, again.class_b.kind) == (PairKind::Disjoint, PairKind::Overlap),
        || "round trip changed the classes".into(),
    )?;
    let cert = out.certificate.as_ref().ok_or("no certificate")?;
    let stored = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/certificates/rose2_vs_phi2_incompatible.json"),
    )
    .map_err(e2s)?;
    let stored = Certificate::from_json(&stored).map_err(e2s)?;
    stored.verify(&[a, b]).map_err(e2s)?;
    let al = r.alphabet();
    let (g, h) = out.verdict.witness().expect("witness");
    Ok(format!(
        "pair ({}, {}) and rectangle verified; round trip via ({}, {}); stored certificate {}",
        al.format(g),
        al.format(h),
        al.format(&pairs.rho),
        al.format(&pairs.sigma),
        if &stored == cert { "matches" } else { "verifies" }
    ))
}

fn criterion_8() -> Outcome {
    let r = marked("rose2.json");
    let t = marked("rose2_phi2.json");
    let verdict = compatible_on_words(&r, &t, 3).map_err(e2s)?;
    let (g, h) = verdict.witness().ok_or("no recorded witness")?;
    let sum = sum_oracle(&r, &t).map_err(e2s)?;
    let elements: Vec<Word> = enumerate_words(2, 3).collect();
    let rep = check_axioms(&sum, &elements).map_err(e2s)?;
    ensure(!rep.passes(Axiom::V), || "sum passes axiom V".into())?;
    let v = rep
        .violations_of(Axiom::V)
        .find(|v| v.words == [g.clone(), h.clone()])
        .ok_or("axiom V holds on the recorded witness pair")?;
    let [lg, lh, p, m] = [&v.values[0], &v.values[1], &v.values[2], &v.values[3]];
    let s = lg + lh;
    let strict = match verdict {
        CompatVerdict::IncoherentOrientation { .. } => *p < s && *m < s,
        _ => p != m || *p <= s,
    };
    ensure(strict, || "inequality is not strict".into())?;
    let f = |x: &Rational| x.to_fraction();
    Ok(format!(
        "axiom V fails for ℓ+m at ({}, {}): ℓ(gh) = {}, ℓ(gh⁻¹) = {} < ℓ(g)+ℓ(h) = {}",
        r.alphabet().format(g),
        r.alphabet().format(h),
        f(p),
        f(m),
        f(&s)
    ))
}

fn criterion_9() -> Outcome {
    let k = Rational::new(3, 7);
    let mut checks = 0usize;
    for name in ["rose2.json", "barbell.json", "rose2_phi2.json"] {
        let t = marked(name);
        let s = ScaledOracle::new(&t, k).map_err(e2s)?;
        let words = nontrivial_words(2, 3);
        for g in &words {
            for h in words.iter().filter(|h| *h != g) {
                let (c, cs) = (classify_pair(&t, g, h).map_err(e2s)?, classify_pair(&s, g, h).map_err(e2s)?);
                ensure(c.scaled(&k) == cs, || format!("{name}: class changes under scaling"))?;
                checks += 1;
            }
        }
    }
    let pairs = [
        (fixture("rose2.json"), fixture("rose2_phi2.json")),
        (fixture("barbell.json"), fixture("rose2.json")),
        (fixture("example10_A.json"), fixture("example10_B.json")),
    ];
    for (a, b) in &pairs {
        let v = compatible_on_words(a, b, 3).map_err(e2s)?;
        let vs = compatible_on_words(&ScaledOracle::new(a, k).map_err(e2s)?, &ScaledOracle::new(b, k).map_err(e2s)?, 3)
            .map_err(e2s)?;
        ensure(v.witness() == vs.witness() && v.is_compatible_up_to_bound() == vs.is_compatible_up_to_bound(), || {
            "compatibility verdict changes under scaling".into()
        })?;
        let (a3, b3) = (a.scaled(&k).map_err(e2s)?, b.scaled(&k).map_err(e2s)?);
        if let Some(gp) = simultaneous_good_pair(a, b, 4).map_err(e2s)? {
            let cert = Certificate::simultaneous(a.alphabet(), &simultaneous_good_pair(&a3, &b3, 4).map_err(e2s)?.ok_or("pair lost under scaling")?);
            cert.verify(&[a3.clone(), b3.clone()]).map_err(e2s)?;
            let gs = simultaneous_good_pair(&a3, &b3, 4).map_err(e2s)?.expect("checked");
            ensure((gs.g, gs.h) == (gp.g, gp.h), || "good pair changes under scaling".into())?;
        }
    }
    let (r, t) = (marked("rose2.json"), marked("rose2_phi2.json"));
    let out = pipeline::compat(
        &TreeInput::Marked(r.clone()),
        &TreeInput::Marked(t.clone()),
        3,
        SearchBudget::new(6, 4).map_err(e2s)?,
        0,
    )
    .map_err(e2s)?;
    let Some(RectangleSearch::Found(rect)) = &out.rectangle else {
        return Err("no rectangle".into());
    };
    let pairs = certificate_from_rectangle(&r, &t, rect).map_err(e2s)?;
    let geometric = Certificate::Incompatible {
        alphabet: r.alphabet().names().to_vec(),
        pair: None,
        rectangle: Some(RectangleDoc::of(&r, &t, rect)),
        derived: Some(DerivedPairsDoc::of(r.alphabet(), &pairs)),
    };
    let (r3, t3) = (r.scaled(&k).map_err(e2s)?, t.scaled(&k).map_err(e2s)?);
    geometric.verify(&[TreeInput::Marked(r3), TreeInput::Marked(t3)]).map_err(e2s)?;
    Ok(format!("{checks} classifications, 3 compatibility verdicts, good-pair and rectangle certificates unchanged by 3/7"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("additivity of the example pair", criterion_1),
        ("axiom suite", criterion_2),
        ("numeric vs geometric classes", criterion_3),
        ("dagger vs cover based length", criterion_4),
        ("based length of the sum", criterion_5),
        ("refinement reconstruction", criterion_6),
        ("incompatibility certificates", criterion_7),
        ("sum of an incompatible pair", criterion_8),
        ("projective invariance", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| id.ends_with(x.as_str()) || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("{id} PASS [{name}] {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL [{name}] {msg} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
