//! Acceptance criteria, one line of output per criterion. Runs without the
//! libtest harness so the lines always appear.

mod common;

use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpcells::collapse::{self, Mode};
use tpcells::hecke::{self, XExpression};
use tpcells::poset::check_cw_conditions;
use tpcells::tnn::{self, q, Sampler, Q};
use tpcells::{CoxeterSystem, Exec, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Full-mode checks shared by the S3 and S4 collapse criteria.
fn collapse_checks(sys: &CoxeterSystem, w: &Word, conditions: bool) -> Result<usize, String> {
    let t = collapse::run_collapse(sys, w, Mode::Full).map_err(|e| e.to_string())?;
    let idx = t.class_index();
    for f in collapse::enumerate_faces(sys, w).map_err(|e| e.to_string())? {
        let dead = t.classes[idx[f.face.bits() as usize]].collapsed;
        ensure(dead != f.reduced, || format!("{w}: face {} reduced={} collapsed={dead}", f.face, f.reduced))?;
    }
    let bad = collapse::bruhat_mismatches(sys, &t).map_err(|e| e.to_string())?;
    ensure(bad.is_empty(), || format!("{w}: quotient differs from Bruhat interval: {bad:?}"))?;
    if conditions {
        let rep = collapse::verify_conditions(&t);
        ensure(rep.all_ok(), || format!("{w}: {rep:?}"))?;
    }
    Ok(t.survivors().count())
}

fn c1_collapse_s3() -> Outcome {
    let a2 = sys("A2");
    let mut words = 0;
    for g in a2.elements() {
        for w in a2.reduced_words(&g) {
            let alive = collapse_checks(&a2, &w, false)?;
            if w == word("1,2,1") {
                ensure(alive == 5, || format!("(1,2,1) has {alive} classes, expected 5"))?;
            }
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn c2_collapse_s4() -> Outcome {
    let a3 = sys("A3");
    let words = a3.reduced_words(&a3.longest_element());
    ensure(words.len() == 16, || format!("{} reduced words of w0", words.len()))?;
    for w in &words {
        let alive = collapse_checks(&a3, w, true)?;
        ensure(alive == 23, || format!("{w}: {alive} classes, expected 23"))?;
    }
    Ok("16 words, 23 classes each, conditions hold".into())
}

fn c3_bruhat_battery() -> Outcome {
    let mut intervals = 0;
    for name in ["A3", "B3"] {
        let s = sys(name);
        let els = s.elements();
        for u in &els {
            for v in &els {
                if !s.bruhat_leq(u, v).unwrap() {
                    continue;
                }
                let iv = s.bruhat_interval(u, v).map_err(|e| e.to_string())?;
                for r in check_cw_conditions(&iv.poset) {
                    ensure(r.holds, || format!("{name} [{}, {}] fails {}", s.label(u), s.label(v), r.condition))?;
                }
                intervals += 1;
            }
        }
    }
    Ok(format!("{intervals} intervals"))
}

fn c4_negative_control() -> Outcome {
    let p = non_example_poset();
    let reps = check_cw_conditions(&p);
    let thin = reps.iter().find(|r| r.condition == "thin").unwrap();
    ensure(!thin.holds, || "non-example passes thinness".into())?;
    let named: Vec<(String, String)> =
        thin.counterexamples.iter().map(|&(u, v)| (p.label(u).to_string(), p.label(v).to_string())).collect();
    ensure(named.contains(&("v3".into(), "sigma".into())), || format!("thin counterexamples {named:?}"))?;
    let (v3, s) = (p.find("v3").unwrap(), p.find("sigma").unwrap());
    ensure(p.interval(v3, s).len() == 6, || "[v3, sigma] should have 6 elements".into())?;
    for r in check_cw_conditions(&boolean_poset(3)) {
        ensure(r.holds, || format!("B3 fails {}", r.condition))?;
    }
    Ok(format!("thinness fails at {named:?}"))
}

fn grid() -> Vec<Q> {
    vec![q(1, 1), q(1, 2), q(2, 1), q(1, 3), q(3, 1)]
}

fn x(n: usize, i: usize, t: &Q) -> tnn::RationalMatrix {
    tnn::chevalley_x(n, i, t.clone()).unwrap()
}

fn c5_matrix_identities() -> Outcome {
    let g = grid();
    let mut checks = 0;
    for t1 in &g {
        for t2 in &g {
            // commuting generators need n ≥ 4
            ensure(x(4, 1, t1).mul(&x(4, 3, t2)) == x(4, 3, t2).mul(&x(4, 1, t1)), || "relation (1)".into())?;
            ensure(x(3, 1, t1).mul(&x(3, 1, t2)) == x(3, 1, &(t1 + t2)), || "nil relation".into())?;
            checks += 2;
            for t3 in &g {
                let (u1, u2, u3) = tnn::braid3_transform(t1, t2, t3).unwrap();
                for (i, j) in [(1, 2), (2, 1)] {
                    let lhs = x(3, i, t1).mul(&x(3, j, t2)).mul(&x(3, i, t3));
                    let rhs = x(3, j, &u1).mul(&x(3, i, &u2)).mul(&x(3, j, &u3));
                    ensure(lhs == rhs, || format!("relation (2) at ({t1},{t2},{t3})"))?;
                }
                ensure(&u1 + &u2 + &u3 == t1 + t2 + t3, || "total sum".into())?;
                ensure(u2 == t1 + t3 && t2.clone() == &u1 + &u3, || "per-generator sums".into())?;
                checks += 3;
            }
        }
    }
    Ok(format!("{checks} exact identities"))
}

fn c6_fibers() -> Outcome {
    let mut samples = 0;
    let mut words = 0;
    for name in ["A2", "A3"] {
        let s = sys(name);
        for w in s.reduced_words(&s.longest_element()) {
            let t = collapse::run_collapse(&s, &w, Mode::Full).map_err(|e| e.to_string())?;
            let rep = tnn::verify_fibers(&s, &t, &Sampler::default(), Exec::Parallel).map_err(|e| e.to_string())?;
            let first: Vec<&String> = rep.steps.iter().flat_map(|st| &st.mismatches).chain(&rep.cell_mismatches).take(3).collect();
            ensure(rep.ok(), || format!("{name} {w}: {first:?}"))?;
            samples += rep.steps.iter().map(|s| s.samples).sum::<usize>() + rep.cell_samples;
            words += 1;
        }
    }
    Ok(format!("{words} words, {samples} exact samples"))
}

fn reduced(s: &CoxeterSystem, w: &[usize]) -> bool {
    hecke::demazure_word(s, w).length() == w.len()
}

fn without(w: &[usize], k: usize) -> Vec<usize> {
    let mut v = w.to_vec();
    v.remove(k);
    v
}

fn c7_hecke_lemmas() -> Outcome {
    let mut checked = 0usize;
    for name in ["A3", "B3"] {
        let s = sys(name);
        let all = words_up_to(s.rank(), 6);
        for w in &all {
            let d = w.len();
            let dz = |v: &[usize]| hecke::demazure_word(&s, v);
            if reduced(&s, w) {
                // two different single deletions that stay reduced give different elements
                for a in 0..d {
                    for b in a + 1..d {
                        let (wa, wb) = (without(w, a), without(w, b));
                        if reduced(&s, &wa) && reduced(&s, &wb) {
                            ensure(s.evaluate(&Word(wa)) != s.evaluate(&Word(wb)), || format!("{name} {w:?}: deletions {a},{b} agree"))?;
                            checked += 1;
                        }
                    }
                }
                // reflection of the last letter prepended as a generator creates a deletion pair
                if d > 0 {
                    let refl = s.prefix_reflections(&Word(w.clone())).unwrap();
                    if let Some(i0) = (1..=s.rank()).find(|&i| s.generator(i).unwrap() == refl[d - 1]) {
                        let mut ext = vec![i0];
                        ext.extend(w);
                        let e = XExpression::full(Word(ext));
                        ensure(hecke::deletion_pairs(&s, &e).contains(&(1, d + 1)), || format!("{name} {w:?}: first-root"))?;
                        checked += 1;
                    }
                }
            }
            if d >= 2 {
                let (l, r) = (dz(&w[1..]), dz(&w[..d - 1]));
                if l == r {
                    ensure(l == dz(w), || format!("{name} {w:?}: equal one-sided deletions"))?;
                    checked += 1;
                }
            }
            let e = XExpression::full(Word(w.clone()));
            let pairs = hecke::deletion_pairs(&s, &e);
            for &(a, b) in &pairs {
                let seg = &w[a - 1..b];
                let full = dz(seg);
                ensure(full == dz(&seg[1..]) && full == dz(&seg[..seg.len() - 1]), || format!("{name} {w:?}: del-pair values"))?;
                ensure(full != dz(&seg[1..seg.len() - 1]), || format!("{name} {w:?}: del-pair double deletion"))?;
                for u in 1..seg.len() - 1 {
                    ensure(!reduced(&s, &without(seg, u)), || format!("{name} {w:?}: interior deletion of ({a},{b}) reduced"))?;
                }
                for &(b2, c) in &pairs {
                    if b2 == b {
                        let chain = without(&w[a - 1..c], b - a);
                        ensure(!reduced(&s, &chain), || format!("{name} {w:?}: chained pairs ({a},{b}),({b},{c})"))?;
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} lemma instances"))
}

fn c8_demazure_invariance() -> Outcome {
    let systems = [sys("A3"), sys("B3"), sys("G2")];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut moves = 0;
    for k in 0..1000 {
        let s = &systems[k % 3];
        let len = rng.random_range(0..=8);
        let w: Vec<usize> = (0..len).map(|_| rng.random_range(1..=s.rank())).collect();
        let dz = hecke::demazure_word(s, &w);
        for mv in hecke::applicable_moves(s, &w) {
            let v = apply_move(&w, &mv);
            ensure(hecke::demazure_word(s, &v) == dz, || format!("{} {w:?}: {mv:?}", s.name()))?;
            moves += 1;
        }
        for mask in 0u32..1 << len {
            let sub: Vec<usize> = (0..len).filter(|b| mask >> b & 1 == 1).map(|b| w[b]).collect();
            ensure(s.bruhat_leq(&hecke::demazure_word(s, &sub), &dz).unwrap(), || format!("{} {w:?}: monotonicity", s.name()))?;
        }
    }
    Ok(format!("1000 expressions, {moves} moves"))
}

fn run_campaign(dir: &std::path::Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_tpcells"))
        .args(["campaign", "--out"])
        .arg(dir)
        .stdout(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("campaign exited with {status}"))
}

fn read_tree(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c9_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_campaign(a.path())?;
    run_campaign(b.path())?;
    let (fa, fb) = (read_tree(a.path()), read_tree(b.path()));
    ensure(!fa.is_empty(), || "campaign wrote no files".into())?;
    ensure(fa == fb, || "campaign outputs differ between runs".into())?;
    Ok(format!("{} files byte-identical", fa.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 collapse correctness S3", c1_collapse_s3, Duration::from_secs(1)),
        ("2 collapse correctness S4", c2_collapse_s4, Duration::from_secs(60)),
        ("3 Bruhat regularity battery", c3_bruhat_battery, Duration::from_secs(60)),
        ("4 negative control", c4_negative_control, Duration::MAX),
        ("5 matrix identities", c5_matrix_identities, Duration::MAX),
        ("6 fiber verification", c6_fibers, Duration::from_secs(300)),
        ("7 0-Hecke lemma suite", c7_hecke_lemmas, Duration::MAX),
        ("8 Demazure invariance", c8_demazure_invariance, Duration::MAX),
        ("9 determinism", c9_determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if outcome.is_ok() && took > budget {
            outcome = Err(format!("took {took:.2?}, budget {budget:?}"));
        }
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({took:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name} ({took:.2?}): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
