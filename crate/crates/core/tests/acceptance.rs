//! One line per acceptance criterion; run with `--nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use common::*;
use odlin::datavec::{zero_extensions_up_to, MatrixInstance};
use odlin::histogram::{
    decompose, is_histogram, is_histogram_via_profile, is_multihistogram, mul_simple, smear, Mode, SimpleHistogram,
};
use odlin::linpn::{vas_bounded_reach, Reach};
use odlin::reductions::{
    column_alphabet, instance_to_vas, multihistogram_over_alphabet, simulate_word, vas_to_instance, witness_to_run,
    DEFAULT_REALIZATION_CAP,
};
use odlin::semieq::{oracle_subset, solve_qplus as solve_semieq};
use odlin::solvers::{
    oracle_pproduct, solve_n_bounded, solve_q, solve_qplus, solve_z, verify_witness, Domain, NSearchOptions,
    OracleOptions, Status, Verdict,
};
use odlin::{Rat, RatMat};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn histogram_calculus() -> Outcome {
    let mut rng = rng(1);
    let mut positives = 0;
    for t in 0..1000 {
        let r = rng.gen_range(1..=5);
        let c = rng.gen_range(1..=8);
        // half of the matrices are histograms, possibly perturbed
        let mut h = if t % 2 == 0 || c < r {
            random_matrix(&mut rng, r, c, 6)
        } else {
            let degree = rng.gen_range(0..=3);
            random_histogram(&mut rng, r, c, degree)
        };
        if t % 4 == 1 {
            let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..c));
            h[(i, j)] = (h[(i, j)].clone() + rat(1)).min(rat(6));
        }
        let direct = is_histogram(&h, Mode::Integer);
        positives += direct as usize;
        ensure(direct == is_histogram_via_profile(&h, Mode::Integer), || format!("profile test disagrees on {}", show(&h)))?;
        ensure(direct == reference_is_histogram(&h), || format!("definition disagrees on {}", show(&h)))?;
    }
    for _ in 0..200 {
        let s = rng.gen_range(0..=6);
        let r = rng.gen_range(1..=5);
        let c = rng.gen_range(r..=8);
        let h = random_histogram(&mut rng, r, c, s);
        let parts = decompose(&h).map_err(|e| e.to_string())?;
        ensure(parts.len() == s, || format!("{} parts for degree {s}", parts.len()))?;
        let sum = parts.iter().fold(RatMat::zeros(r, c), |acc, p| acc.add(&p.to_matrix()).unwrap());
        ensure(sum == h, || format!("parts do not re-sum to {}", show(&h)))?;
    }
    Ok(format!("1000 matrices ({positives} histograms), 200 decompositions"))
}

fn worked_examples() -> Outcome {
    let m = RatMat::from_i64(&[&[1, 2], &[3, 0], &[0, 2]]);
    ensure(show(&m) == "[[1,2],[3,0],[0,2]]", || show(&m))?;
    let exts: Vec<String> = zero_extensions_up_to(&m, 4).iter().map(show).collect();
    for e in ["[[0,1,2],[0,3,0],[0,0,2]]", "[[1,0,0,2],[3,0,0,0],[0,0,0,2]]"] {
        ensure(exts.iter().any(|x| x == e), || format!("{e} missing from the 0-extensions"))?;
    }
    let h = RatMat::from_i64(&[&[1, 1, 0, 0, 0], &[0, 0, 2, 0, 0], &[0, 0, 0, 1, 1]]);
    let parts: Vec<String> = decompose(&h).map_err(|e| e.to_string())?.iter().map(|s| show(&s.to_matrix())).collect();
    let expected = ["[[1,0,0,0,0],[0,0,1,0,0],[0,0,0,1,0]]", "[[0,1,0,0,0],[0,0,1,0,0],[0,0,0,0,1]]"];
    ensure(parts == expected, || format!("decomposition {parts:?}"))?;
    let s = SimpleHistogram::new(vec![0, 2], 4).map_err(|e| e.to_string())?;
    ensure(show(&s.to_matrix::<Rat>()) == "[[1,0,0,0],[0,0,1,0]]", || "simple histogram".into())?;
    let n = show(&mul_simple(&m, &s).map_err(|e| e.to_string())?);
    ensure(n == "[[1,0,2,0],[3,0,0,0],[0,0,2,0]]", || format!("product {n}"))?;
    let before = RatMat::from_i64(&[&[3, 0, 0, 1, 0, 0, 0], &[0, 1, 0, 0, 3, 0, 0], &[0, 0, 0, 1, 0, 1, 2]]);
    let after = smear(&before, 4, &[rat(0), rat(2), rat(0)], &[rat(0), rat(1), rat(0)]).map_err(|e| e.to_string())?;
    ensure(
        show(&after) == "[[3,0,0,1,0,0,0,0],[0,1,0,0,2,1,0,0],[0,0,0,1,0,0,1,2]]",
        || format!("smear {}", show(&after)),
    )?;
    Ok("0-extensions, decomposition, product and smear match".into())
}

fn instance_corpus(seed: u64, count: usize) -> Vec<MatrixInstance> {
    let mut rng = rng(seed);
    (0..count).map(|_| random_instance(&mut rng, 3, 3, 3, 3)).collect()
}

fn witness_ok(inst: &MatrixInstance, v: &Verdict, domain: Domain) -> bool {
    v.status != Status::Solvable || v.witness.as_ref().is_some_and(|w| verify_witness(inst, w, domain))
}

fn thm3_solvers() -> Outcome {
    let opts = OracleOptions { m_bound: 4, slot_bound: 6, ..OracleOptions::default() };
    let corpus = instance_corpus(3, 120);
    let (mut solvable_q, mut solvable_z) = (0, 0);
    for (t, inst) in corpus.iter().enumerate() {
        for (domain, exact) in [(Domain::Q, solve_q(inst)), (Domain::Z, solve_z(inst))] {
            ensure(exact.status != Status::Unknown, || format!("instance {t}: {domain} undecided"))?;
            ensure(witness_ok(inst, &exact, domain), || format!("instance {t}: bad {domain} witness"))?;
            let oracle = oracle_pproduct(inst, domain, &opts);
            ensure(witness_ok(inst, &oracle, domain), || format!("instance {t}: bad oracle witness"))?;
            if oracle.status == Status::Solvable {
                ensure(exact.status == Status::Solvable, || format!("instance {t}: oracle solves {domain}, solver does not"))?;
            }
            if exact.status == Status::Unsolvable {
                ensure(oracle.status != Status::Solvable, || format!("instance {t}: oracle refutes {domain} verdict"))?;
            }
            if exact.status == Status::Solvable {
                *if domain == Domain::Q { &mut solvable_q } else { &mut solvable_z } += 1;
            }
        }
    }
    Ok(format!("{} instances, Q solvable {solvable_q}, Z solvable {solvable_z}", corpus.len()))
}

fn semi_equations() -> Outcome {
    let mut rng = rng(4);
    let mut solvable = 0;
    for t in 0..300 {
        let se = random_semieq(&mut rng);
        let fast = solve_semieq(&se);
        let slow = oracle_subset(&se).map_err(|e| e.to_string())?;
        ensure(fast.is_some() == slow.is_some(), || format!("semi-equation {t}: engine {fast:?}, oracle {slow:?}"))?;
        for x in fast.iter().chain(&slow) {
            ensure(se.is_solution(x), || format!("semi-equation {t}: {x:?} is not a solution"))?;
        }
        solvable += fast.is_some() as usize;
    }
    Ok(format!("300 semi-equations, {solvable} solvable"))
}

fn qplus_pipeline() -> Outcome {
    let opts = NSearchOptions { col_bound: 6, entry_bound: 3, ..NSearchOptions::default() };
    let corpus = instance_corpus(3, 120);
    let mut counts = [0usize; 4];
    for (t, inst) in corpus.iter().enumerate() {
        let n = solve_n_bounded(inst, &opts);
        let qp = solve_qplus(inst);
        let q = solve_q(inst);
        let z = solve_z(inst);
        let s = |v: &Verdict| v.status == Status::Solvable;
        ensure(!s(&n) || s(&qp), || format!("instance {t}: N solvable but Q+ not"))?;
        ensure(!s(&qp) || s(&q), || format!("instance {t}: Q+ solvable but Q not"))?;
        ensure(!s(&z) || s(&q), || format!("instance {t}: Z solvable but Q not"))?;
        ensure(witness_ok(inst, &n, Domain::N), || format!("instance {t}: bad N witness"))?;
        for (k, v) in [&n, &qp, &q, &z].into_iter().enumerate() {
            counts[k] += s(v) as usize;
        }
    }
    let updown = instance(&[&[1, -1]], &[&[&[-1, 1]]]);
    ensure(solve_q(&updown).status == Status::Solvable, || "up/down: Q not solvable".into())?;
    ensure(solve_qplus(&updown).status == Status::Unsolvable, || "up/down: Q+ not unsolvable".into())?;
    for (cols, entries) in [(2, 2), (4, 4), (8, 8), (10, 6)] {
        let v = solve_n_bounded(&updown, &NSearchOptions { col_bound: cols, entry_bound: entries, ..NSearchOptions::default() });
        ensure(v.status != Status::Solvable, || format!("up/down: N solvable at {cols}x{entries}"))?;
    }
    Ok(format!("{} instances, solvable N/Q+/Q/Z = {counts:?}; up/down separates Q from Q+", corpus.len()))
}

fn vas_round_trip() -> Outcome {
    let n_opts = NSearchOptions { col_bound: 10, entry_bound: 6, bounds_complete: true, ..NSearchOptions::default() };
    let o_opts = OracleOptions { m_bound: 4, slot_bound: 6, ..OracleOptions::default() };
    let mut oracle_hits = 0;
    let mut check = |vas: &odlin::linpn::Vas, reachable: bool| -> Result<(), String> {
        let reach = vas_bounded_reach(vas, 8, 12);
        match (&reach, reachable) {
            (Reach::Reachable(run), true) => ensure(run.len() <= 6, || format!("{vas:?}: run of {} steps", run.len()))?,
            (Reach::Unreachable, false) => {}
            _ => return Err(format!("{vas:?}: search says {reach:?}")),
        }
        let vi = vas_to_instance(vas, DEFAULT_REALIZATION_CAP).map_err(|e| e.to_string())?;
        let v = solve_n_bounded(&vi.instance, &n_opts);
        let expected = if reachable { Status::Solvable } else { Status::Unsolvable };
        ensure(v.status == expected, || format!("{vas:?}: N verdict {:?}", v.status))?;
        if let Some(w) = &v.witness {
            let run = witness_to_run(&vi, vas, w).map_err(|e| e.to_string())?;
            ensure(vas.is_run(&run), || format!("{vas:?}: {run:?} is not a run"))?;
        }
        let o = oracle_pproduct(&vi.instance, Domain::N, &o_opts);
        if let Some(w) = &o.witness {
            ensure(reachable, || format!("{vas:?}: oracle solves an unreachable instance"))?;
            ensure(vas.is_run(&witness_to_run(&vi, vas, w).map_err(|e| e.to_string())?), || "oracle run".into())?;
            oracle_hits += 1;
        }
        Ok(())
    };
    let (yes, no) = (reachable_vas(), unreachable_vas());
    for v in &yes {
        check(v, true)?;
    }
    for v in &no {
        check(v, false)?;
    }
    Ok(format!("{} reachable, {} unreachable; oracle confirmed {oracle_hits}", yes.len(), no.len()))
}

fn gadget_round_trip() -> Outcome {
    let (mut found, mut simulated_steps) = (0, 0);
    let pairs = gadget_pairs();
    for (t, (exists, inst)) in pairs.iter().enumerate() {
        let alphabet = column_alphabet(inst, 2).map_err(|e| e.to_string())?;
        let (family, complete) = multihistogram_over_alphabet(inst, &alphabet, 8).map_err(|e| e.to_string())?;
        let gadget = instance_to_vas(inst, &alphabet).map_err(|e| e.to_string())?;
        let reach = vas_bounded_reach(&gadget.vas, 6, 40);
        ensure(family.is_some() == *exists, || format!("pair {t}: search found {}", family.is_some()))?;
        match (&family, &reach) {
            (Some(f), Reach::Reachable(run)) => {
                ensure(is_multihistogram(f, &inst.target, &inst.generators, Mode::Integer), || format!("pair {t}: bad family"))?;
                ensure(gadget.vas.is_run(run), || format!("pair {t}: bad run"))?;
                let trace = simulate_word(inst, f).map_err(|e| format!("pair {t}: {e}"))?;
                simulated_steps += trace.run.len();
                found += 1;
            }
            (None, Reach::Unreachable) => ensure(complete, || format!("pair {t}: search incomplete"))?,
            _ => return Err(format!("pair {t}: search {} but VAS {reach:?}", family.is_some())),
        }
    }
    Ok(format!("{} pairs, {found} with multihistograms; invariant held over {simulated_steps} steps", pairs.len()))
}

fn large_instance(seed: u64) -> MatrixInstance {
    let mut rng = rng(seed);
    loop {
        let inst = random_instance(&mut rng, 8, 8, 8, 3);
        if inst.dimension == 8 && inst.k() == 8 && inst.n() <= 8 {
            return inst;
        }
    }
}

fn polynomial_smoke() -> Outcome {
    let limit = Duration::from_secs(30);
    let mut report = Vec::new();
    for seed in 0..6 {
        let inst = large_instance(100 + seed);
        let timed = |name: &str, f: &dyn Fn() -> Verdict| -> Result<String, String> {
            let start = Instant::now();
            let v = f();
            let took = start.elapsed();
            ensure(took <= limit, || format!("{name} took {took:.1?}"))?;
            Ok(format!("{name}:{}", v.status.as_str()))
        };
        report.push(timed("Q", &|| solve_q(&inst))?);
        report.push(timed("Z", &|| solve_z(&inst))?);
        report.push(timed("Q+", &|| solve_qplus(&inst))?);
        let small = NSearchOptions { col_bound: 4, entry_bound: 2, budget: 200_000, ..NSearchOptions::default() };
        report.push(timed("N", &|| solve_n_bounded(&inst, &small))?);
    }
    Ok(report.join(" "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("histogram calculus", histogram_calculus, 10),
        ("worked examples", worked_examples, 10),
        ("Q and Z solvers against the oracle", thm3_solvers, 60),
        ("semi-equation engine", semi_equations, 60),
        ("Q+ pipeline and domain monotonicity", qplus_pipeline, 120),
        ("VAS to data round trip", vas_round_trip, 120),
        ("histogram to VAS round trip", gadget_round_trip, 120),
        ("polynomial-time smoke check", polynomial_smoke, 120),
    ];
    let mut failed = Vec::new();
    for (k, (name, run, seconds)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if took <= Duration::from_secs(*seconds) { Ok(d) } else { Err(format!("{d}; over the {seconds}s limit")) }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        println!("criterion {} {tag} {name} ({took:.2?}): {detail}", k + 1);
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
