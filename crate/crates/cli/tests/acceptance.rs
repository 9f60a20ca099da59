//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use cobarkit::{run_args, Record, Report};
use cobarkit_core::chains::{chain_homology, normalized_chains};
use cobarkit_core::coalgebra::{chains_coalgebra, points};
use cobarkit_core::cobar::algebra::{h0_presentation, ideal_membership, phi_images, presentation_map_check, tau_algebra};
use cobarkit_core::cobar::free::lambda;
use cobarkit_core::cobar::localize::{localized_cobar, monoidlike_reps};
use cobarkit_core::cobar::poly::NcPolynomial;
use cobarkit_core::cobar::TruncationSpec;
use cobarkit_core::equivalence::{check_omegahat_qi, check_pi1_r_equivalence, verify_phi_psi, Budgets};
use cobarkit_core::simplicial::builtins::{by_name, map_by_name, SUITE};
use cobarkit_core::simplicial::cover::certified_universal_cover;
use cobarkit_core::verdict::{Status, Verdict};
use cobarkit_core::Field;

type Outcome = Result<String, String>;

/// Name, runtime budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn cli(args: &str) -> Report {
    let (r, _) = run_args(args.split_whitespace()).unwrap_or_else(|e| panic!("{args}: {e}"));
    r
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn single(r: &Report, check: &str) -> Result<Verdict, String> {
    let v = r.verdicts(check);
    ensure(v.len() == 1, || format!("{}: expected one `{check}` verdict, records {:?}", r.command, r.records))?;
    Ok(v[0].clone())
}

fn expect(r: &Report, check: &str, want: Status) -> Result<(), String> {
    let v = single(r, check)?;
    ensure(v.status == want, || format!("{} {:?}: {check} is {} not {want}: {:?}", r.command, r.args, v.status, v.evidence))
}

fn route(r: &Report, check: &str) -> Result<Verdict, String> {
    r.records
        .iter()
        .find_map(|x| match x {
            Record::Route { check: c, verdict } if c == check => Some(verdict.clone()),
            _ => None,
        })
        .ok_or_else(|| format!("no {check} route"))
}

fn betti(r: &Report, label: &str, want: &[usize]) -> Result<(), String> {
    let t = r.betti(label).ok_or_else(|| format!("no {label} table in {:?}", r.records))?;
    ensure(t.numbers() == want && t.all_exact(), || format!("{label}: {:?} want {want:?}, exact {}", t.numbers(), t.all_exact()))
}

fn field_flag(f: Field) -> String {
    match f {
        Field::Rationals => "q".into(),
        Field::Prime(p) => format!("fp:{p}"),
    }
}

const FIELDS: [Field; 3] = [Field::Rationals, Field::Prime(2), Field::Prime(3)];

fn c1() -> Outcome {
    for f in ["q", "fp:2"] {
        let r = cli(&format!("cobar-homology --fixture sphere2_min --field {f} --max-degree 6"));
        betti(&r, "cobar-homology", &[1; 7])?;
    }
    Ok("Betti (1,1,1,1,1,1,1), all exact, over ℚ and 𝔽₂".into())
}

fn c2() -> Outcome {
    for x in ["s1", "s1_localized", "rp2_presentation"] {
        for f in ["q", "fp:2"] {
            expect(&cli(&format!("verify-phi-psi --fixture {x} --field {f} --budget 6")), "phi-psi", Status::Verified)?;
        }
    }
    Ok("φ, ψ mutually inverse on S¹, 𝕊¹, rp2 over ℚ and 𝔽₂".into())
}

fn c3() -> Outcome {
    let q = Field::Rationals;
    let r = cli("localized-cobar --fixture s1 --field q --max-degree 1 --max-length 3 --budget 6");
    ensure(r.exit_code() == 0, || format!("localized-cobar failed: {:?}", r.records))?;
    let c = chains_coalgebra(&by_name("s1", 4).map_err(|e| e.to_string())?, q, 4).map_err(|e| e.to_string())?;
    let reps = monoidlike_reps(&c, None).map_err(|e| e.to_string())?;
    let h0 = h0_presentation(&localized_cobar(&c, &reps, 4).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let z = tau_algebra(&by_name("s1_localized", 2).map_err(|e| e.to_string())?, q).map_err(|e| e.to_string())?;
    ensure(h0.generators.len() == 2 && z.generators.len() == 2, || format!("{} vs {}", h0.render(), z.render()))?;
    let one = NcPolynomial::one(q);
    let there = phi_images(q, 2);
    let back: Vec<NcPolynomial> = (0..2).map(|g| h0.generator(g).plus(&one)).collect();
    ensure(presentation_map_check(&h0, &z, &there, 6).map_err(|e| e.to_string())?.algebra.is_verified(), || "forward map".into())?;
    ensure(presentation_map_check(&z, &h0, &back, 6).map_err(|e| e.to_string())?.algebra.is_verified(), || "inverse map".into())?;
    for g in 0..2 {
        ensure(h0.generator(g).substitute(&there).substitute(&back) == h0.generator(g), || "composite on H₀".into())?;
        ensure(z.generator(g).substitute(&back).substitute(&there) == z.generator(g), || "composite on 𝔽[ℤ]".into())?;
    }
    // the units t = [u] and t⁻¹ = [v] of 𝔽[ℤ]
    let (t, ti) = (z.generator(0), z.generator(1));
    ensure(ideal_membership(&z, &t.times(&ti).minus(&one), 6).is_verified(), || "t t⁻¹ ≠ 1".into())?;
    let mut forms = vec![z.normal_form(&one).ok_or("no ℤ oracle")?];
    for k in 1..=5 {
        forms.push(z.normal_form(&t.pow(k)).ok_or("no ℤ oracle")?);
        forms.push(z.normal_form(&ti.pow(k)).ok_or("no ℤ oracle")?);
    }
    for i in 0..forms.len() {
        for j in 0..i {
            ensure(forms[i] != forms[j], || format!("normal forms {i} and {j} coincide"))?;
        }
    }
    Ok(format!("H₀ ≅ 𝔽[t, t⁻¹] by inverse generator maps at budget 6; {} normal forms t^k distinct", forms.len()))
}

fn c4() -> Outcome {
    let mut checked = 0;
    for x in SUITE {
        // heaviest fixture: two degree-0 generators make the length-4 window of H_Ω large
        let (d, l) = if *x == "s1_localized" { (3, 3) } else { (4, 4) };
        for f in FIELDS {
            let r = cli(&format!("verify-appendix --fixture {x} --field {} --level 3 --max-degree {d} --max-length {l}", field_flag(f)));
            let ids = r.identities();
            ensure(ids.len() == 4 && ids.iter().all(|i| i.passed), || format!("{x} over {f}: {:?}", r.records))?;
            checked += ids.len();
        }
    }
    Ok(format!("{checked} identity checks on {} fixtures over ℚ, 𝔽₂, 𝔽₃", SUITE.len()))
}

fn c5() -> Outcome {
    let base = "check --map iota_s1 --field q --max-degree 2";
    expect(&cli(&format!("{base} --notion omega")), "omega-quasi-isomorphism", Status::Refuted)?;
    expect(&cli(&format!("{base} --notion omega-hat")), "omega-hat-quasi-isomorphism", Status::Verified)?;
    expect(&cli(&format!("{base} --notion pi1-r")), "pi1-r-equivalence", Status::Verified)?;
    expect(&cli(&format!("{base} --notion r-eq")), "r-equivalence", Status::Verified)?;
    Ok("ι: S¹ → 𝕊¹ refuted for Ω, verified for Ω̂, π₁-𝔽 and 𝔽".into())
}

fn c6() -> Outcome {
    let id = cli("check --notion pi1-r --map id(rp2_presentation) --field fp:3 --max-degree 2");
    expect(&id, "pi1-r-equivalence", Status::Verified)?;
    ensure(route(&id, "presentation-route")?.is_verified(), || "route (a) on the identity".into())?;
    let x = by_name("rp2_presentation", 4).map_err(|e| e.to_string())?;
    let cover = certified_universal_cover(&x, 200, 3).map_err(|e| e.to_string())?;
    let h = chain_homology(&cover.cover, Field::Prime(3), 2).map_err(|e| e.to_string())?;
    ensure(h.numbers() == [1, 0, 1] && h.all_exact(), || format!("cover Betti {:?}", h.numbers()))?;
    let col = cli("check --notion pi1-r --map collapse(rp2_presentation) --field fp:2 --max-degree 2");
    expect(&col, "pi1-r-equivalence", Status::Refuted)?;
    let a = route(&col, "presentation-route")?;
    ensure(a.status == Status::Refuted && a.evidence.iter().any(|e| e.starts_with("universal covers")), || format!("{:?}", a))?;
    betti(&cli("chain-homology --fixture rp2_presentation --field q --max-degree 2"), "chain-homology", &[1, 0, 0])?;
    betti(&cli("chain-homology --fixture pt --field q --max-degree 2"), "chain-homology", &[1, 0, 0])?;
    expect(&cli("check --notion r-eq --map collapse(rp2_presentation) --field q --max-degree 2"), "r-equivalence", Status::Verified)?;
    expect(&cli("check --notion pi1-r --map collapse(rp2_presentation) --field q --max-degree 2"), "pi1-r-equivalence", Status::Refuted)?;
    Ok("id verified with cover Betti (1,0,1) over 𝔽₃; collapse refuted over 𝔽₂ and ℚ while a ℚ-equivalence".into())
}

fn c7() -> Outcome {
    let r = cli("bar-cobar-check --algebra exterior --field q --max-degree 4");
    expect(&r, "counit-betti", Status::Verified)?;
    betti(&r, "bar-cobar-homology", &[1, 1, 0, 0, 0])?;
    Ok("Betti (1,1,0,0,0)".into())
}

fn c8() -> Outcome {
    let names = ["pt", "s1", "s1_localized", "sphere2_min", "rp2", "rp2_presentation", "nerve_j", "wedge(s1,s1)", "wedge(s1,sphere2_min)"];
    let level = 3;
    for name in names {
        let x = by_name(name, level).map_err(|e| e.to_string())?;
        x.validate().map_err(|e| format!("{name}: {e}"))?;
        for f in FIELDS {
            let c = chains_coalgebra(&x, f, level).map_err(|e| e.to_string())?;
            c.validate().map_err(|e| format!("{name}/{f}: {e}"))?;
            normalized_chains(&c).and_then(|n| n.check_invariants()).map_err(|e| format!("{name}/{f}: {e}"))?;
            // the cobar construction needs a single vertex
            if x.count(0) == 1 {
                lambda(&x, f, level).and_then(|a| a.validate()).map_err(|e| format!("{name}/{f} cobar: {e}"))?;
            }
            let p = points(&c, 1);
            let counts: Vec<usize> = p.levels.iter().map(Vec::len).collect();
            let direct: Vec<usize> = (0..=level).map(|n| x.all_simplices(n).len()).collect();
            ensure(p.status == Status::Verified && counts == direct, || format!("{name}/{f}: points {counts:?} vs {direct:?}"))?;
        }
    }
    for name in ["iota_s1", "collapse(rp2)", "id(sphere2_min)"] {
        map_by_name(name, level).and_then(|m| m.validate()).map_err(|e| format!("{name}: {e}"))?;
    }
    // a definite verdict at the smaller budget is kept at the larger one
    let q = Field::Rationals;
    let mono = |lo: Status, hi: Status, what: &str| ensure(lo == Status::Inconclusive || lo == hi, || format!("{what}: {lo} then {hi}"));
    let sl = by_name("s1_localized", 2).map_err(|e| e.to_string())?;
    let (a, b) = (verify_phi_psi(&sl, q, 2), verify_phi_psi(&sl, q, 6));
    mono(a.map_err(|e| e.to_string())?.status, b.map_err(|e| e.to_string())?.status, "phi-psi")?;
    let iota = map_by_name("iota_s1", 5).map_err(|e| e.to_string())?;
    let t = TruncationSpec::bounded(1, 3);
    let small = Budgets { ideal: 2, ..Budgets::default() };
    let (a, b) = (check_omegahat_qi(&iota, q, t, small), check_omegahat_qi(&iota, q, t, Budgets::default()));
    mono(a.map_err(|e| e.to_string())?.status, b.map_err(|e| e.to_string())?.status, "omega-hat")?;
    let col = map_by_name("collapse(rp2)", 4).map_err(|e| e.to_string())?;
    let small = Budgets { cosets: 1, ..Budgets::default() };
    let f2 = Field::Prime(2);
    let (a, b) = (check_pi1_r_equivalence(&col, f2, 2, t, small), check_pi1_r_equivalence(&col, f2, 2, t, Budgets::default()));
    mono(a.map_err(|e| e.to_string())?.verdict.status, b.map_err(|e| e.to_string())?.verdict.status, "pi1-r")?;
    Ok(format!("{} fixtures × 3 fields, 3 maps, 3 budget pairs", names.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("loop-space homology of S²", 5, c1),
        ("fundamental bialgebra φ/ψ", 10, c2),
        ("localization compatibility on H₀", 10, c3),
        ("chain homotopy, coderivation, H_Ω, EZ suite", 60, c4),
        ("strict-inclusion witnesses for ι", 15, c5),
        ("π₁-R-equivalence with finite π₁", 15, c6),
        ("bar-cobar counit instance", 10, c7),
        ("structural invariant sweep", 60, c8),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let out = match out {
            Ok(d) if took > Duration::from_secs(*limit) => Err(format!("{d}, but over the {limit} s budget")),
            o => o,
        };
        match &out {
            Ok(d) => println!("PASS criterion {}: {name}: {d} ({:.2} s)", k + 1, took.as_secs_f64()),
            Err(e) => {
                println!("FAIL criterion {}: {name}: {e} ({:.2} s)", k + 1, took.as_secs_f64());
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
