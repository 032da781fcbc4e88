//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::{BTreeMap, HashSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use permstat::alternating::{
    a_decompose, a_recompose, des_set_a, des_set_a_by_length, del_set_a, relations_hold, restrict_f,
    rmaj_a,
};
use permstat::covering::{compose_maps_check, f_q, fiber_size, parabolic_subgroup};
use permstat::distributions::{verify, Theorem, VerifyConfig};
use permstat::numbers::{bell_q, dobinski_q, dobinski_terms, relative_error};
use permstat::patterns::h_q_brute;
use permstat::qstats::{del_q, del_q_from_word, del_set_q, des_set_q, ell_q, inv_q, rmaj_q};
use permstat::sweep::{all_permutations, sweep, sweep_even};
use permstat::{Permutation, PositionSet, SweepConfig, Q};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn q(v: usize) -> Q {
    Q::new(v).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn set(v: &[usize]) -> PositionSet {
    v.iter().copied().collect()
}

fn shift_down(s: PositionSet, by: usize) -> PositionSet {
    s.into_iter().map(|i| i - by).collect()
}

/// `(n, q)` pairs with `n + q - 1 <= max_m`.
fn pairs(max_m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for k in 1..=m {
            out.push((m - k + 1, k));
        }
    }
    out
}

fn verify_all(theorems: &[Theorem], max_m: usize) -> Check {
    let config = VerifyConfig { budget: max_m, sweep: SweepConfig::default() };
    for &(n, k) in &pairs(max_m) {
        for &t in theorems {
            let r = verify(t, n, q(k), &config).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{t} n={n} q={k}: {:?}", r.witness))?;
        }
    }
    Ok(())
}

fn worked_example() -> Check {
    let sigma = Permutation::new(vec![7, 8, 6, 5, 2, 9, 4, 1, 3]).unwrap();
    let start = Instant::now();
    let del2 = del_set_q(&sigma, q(2));
    let des2 = des_set_q(&sigma, q(2));
    let del3 = del_set_q(&sigma, q(3));
    let des3 = des_set_q(&sigma, q(3));
    let des4 = des_set_q(&sigma, q(4));
    let elapsed = start.elapsed();
    ensure(del2 == set(&[3, 4, 5, 7, 8]), || format!("Del_2 = {del2:?}"))?;
    ensure(des2 == set(&[2, 3, 4, 6, 7]), || format!("Des_2 = {des2:?}"))?;
    ensure(del3 == set(&[4, 5, 7, 8, 9]), || format!("Del_3 = {del3:?}"))?;
    ensure(des3 == set(&[3, 4, 6, 7, 8]), || format!("Des_3 = {des3:?}"))?;
    ensure(des4 == set(&[4, 6, 7, 8]), || format!("Des_4 = {des4:?}"))?;
    within(elapsed, Duration::from_millis(1))
}

fn products() -> Check {
    let start = Instant::now();
    verify_all(&[Theorem::Qmac, Theorem::Qmac2], 8)?;
    within(start.elapsed(), Duration::from_secs(10))
}

fn class_equidistribution() -> Check {
    let start = Instant::now();
    verify_all(&[Theorem::FsQ2, Theorem::FsQ, Theorem::QRosel1, Theorem::QRosel2], 7)?;
    within(start.elapsed(), Duration::from_secs(30))
}

fn inverse_avoiders() -> Check {
    verify_all(&[Theorem::Q6, Theorem::Qs5, Theorem::Q5], 8)
}

fn length_and_delent() -> Check {
    let cfg = SweepConfig::default();
    for m in 1..=8 {
        let failures = sweep(
            m,
            cfg,
            Vec::new,
            |acc: &mut Vec<String>, p| {
                let inv = p.inverse();
                for k in 1..=m {
                    let qq = q(k);
                    let d = del_q(p, qq);
                    let ok = ell_q(p, qq) == inv_q(p, qq)
                        && del_set_q(p, qq).len() as u64 == del_q_from_word(p, qq)
                        && d == del_q_from_word(p, qq)
                        && inv_q(&inv, qq) == inv_q(p, qq)
                        && del_q(&inv, qq) == d;
                    if !ok {
                        acc.push(format!("{p:?} q={k}"));
                    }
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        ensure(failures.is_empty(), || format!("m={m}: {failures:?}"))?;
    }
    for m in 1..=6 {
        for k in 1..=3.min(m) {
            let qq = q(k);
            let group = parabolic_subgroup(qq, m);
            for p in all_permutations(m) {
                let key = (del_set_q(&p, qq), des_set_q(&p, qq), inv_q(&p, qq));
                for t in &group {
                    for t2 in &group {
                        let moved = t.compose(&p).unwrap().compose(t2).unwrap();
                        let got = (del_set_q(&moved, qq), des_set_q(&moved, qq), inv_q(&moved, qq));
                        ensure(got == key, || format!("double coset of {p:?}, q={k}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn covering_map() -> Check {
    verify_all(&[Theorem::Cover1, Theorem::Fiber], 7)?;
    for m in 1..=7 {
        for k in 1..=m {
            let qq = q(k);
            for p in all_permutations(m) {
                let image = f_q(&p, qq).unwrap();
                ensure(f_q(&p.inverse(), qq).unwrap() == image.inverse(), || {
                    format!("f_q(p^-1) != f_q(p)^-1 for {p:?}, q={k}")
                })?;
            }
            for k2 in 1..=m + 1 - k {
                ensure(compose_maps_check(qq, q(k2), m).unwrap(), || {
                    format!("f_{k} o f_{k2} != f_{} on S_{m}", k + k2 - 1)
                })?;
            }
        }
    }
    for m in 2..=6 {
        for k in 2..=m {
            let qq = q(k);
            let counts = sweep_even(
                m,
                SweepConfig::default(),
                BTreeMap::new,
                |acc: &mut BTreeMap<Permutation, u64>, p| {
                    *acc.entry(f_q(p, qq).unwrap()).or_insert(0) += 1;
                },
                |mut a, b| {
                    for (key, v) in b {
                        *a.entry(key).or_insert(0) += v;
                    }
                    a
                },
            );
            for base in all_permutations(m - k + 1) {
                let got = counts.get(&base).copied().unwrap_or(0);
                ensure(2 * got == fiber_size(&base, qq), || {
                    format!("g_{k} fiber of {base:?} has {got} members")
                })?;
            }
        }
    }
    Ok(())
}

fn counting() -> Check {
    let start = Instant::now();
    let cfg = SweepConfig::default();
    let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in bell.iter().enumerate() {
        let brute = h_q_brute(n, Q::ONE, cfg);
        ensure(brute == BigUint::from(b) && bell_q(n, Q::ONE) == brute, || {
            format!("h_1({n}) = {brute}, expected {b}")
        })?;
    }
    let b2 = [1u64, 2, 6, 22, 94, 454];
    for (n, &b) in b2.iter().enumerate() {
        let brute = h_q_brute(n + 1, q(2), cfg);
        ensure(brute == BigUint::from(b) && bell_q(n, q(2)) == brute, || {
            format!("h_2({}) = {brute}, expected {b}", n + 1)
        })?;
    }
    for n in 0..=5 {
        let brute = h_q_brute(n + 2, q(3), cfg);
        let want = bell_q(n, q(3)) * 2u8;
        ensure(brute == want, || format!("h_3({}) = {brute}, expected {want}", n + 2))?;
    }
    within(start.elapsed(), Duration::from_secs(60))
}

fn refined_counts() -> Check {
    verify_all(&[Theorem::Qpro, Theorem::Qc3, Theorem::Nu1], 8)
}

fn dobinski() -> Check {
    let start = Instant::now();
    for n in 0..=10 {
        for k in 1..=3 {
            let approx = dobinski_q(n, q(k), dobinski_terms(n, q(k))).map_err(|e| e.to_string())?;
            let err = relative_error(&approx, &bell_q(n, q(k)));
            ensure(err < 1e-9, || format!("n={n} q={k}: relative error {err:e}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))
}

fn alternating() -> Check {
    let two = q(2);
    for d in 3..=7 {
        ensure(relations_hold(d).unwrap(), || format!("relations fail in degree {d}"))?;
    }
    for m in 1..=7 {
        let mut seen = HashSet::new();
        for v in all_permutations(m).filter(Permutation::is_even) {
            let w = a_decompose(&v).map_err(|e| e.to_string())?;
            let fail = |what: &str| format!("{what} fails at {v:?}");
            ensure(a_recompose(&w) == v, || fail("round trip"))?;
            ensure(seen.insert(w.clone()), || fail("uniqueness"))?;
            let ell = w.letter_count() as u64;
            ensure(ell == ell_q(&v, two), || fail("ell_A = ell_2"))?;
            ensure(ell == v.inversion_count() - del_q(&v, Q::ONE), || fail("ell_A = ell_S - del_S"))?;
            ensure(w.delent_count() as u64 == del_q(&v, two), || fail("del_A = del_2"))?;
            let des = des_set_a(&v).unwrap();
            ensure(des == shift_down(des_set_q(&v, two), 1), || fail("Des_A = Des_2 - 1"))?;
            ensure(del_set_a(&v).unwrap() == shift_down(del_set_q(&v, two), 1), || fail("Del_A = Del_2 - 1"))?;
            ensure(rmaj_a(&v).unwrap() == rmaj_q(&v, two), || fail("rmaj_A = rmaj_2"))?;
            if m >= 2 {
                ensure(des == des_set_q(&restrict_f(&v).unwrap(), Q::ONE), || fail("Des_A = Des_1(f)"))?;
            }
            if m >= 3 {
                ensure(des == des_set_a_by_length(&v).unwrap(), || fail("Des_A length form"))?;
            }
        }
        let expected: usize = (1..m.saturating_sub(1)).map(|j| j + 2).product();
        ensure(seen.len() == expected, || format!("degree {m}: {} words", seen.len()))?;
    }
    Ok(())
}

fn cli(args: &[String], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_permstat"))
        .args(args)
        .args(["--threads", threads])
        .env_remove("PERMSTAT_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Check {
    let strings = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut invocations = Vec::new();
    for (n, k) in pairs(8) {
        let (n, k) = (n.to_string(), k.to_string());
        let m = (n.parse::<usize>().unwrap() + k.parse::<usize>().unwrap() - 1).to_string();
        for t in ["qmac", "qmac2", "q6", "qs5", "q5"] {
            invocations.push(strings(&["verify", "--theorem", t, "--n", &n, "--q", &k, "--format", "json"]));
        }
        if m.parse::<usize>().unwrap() <= 7 {
            invocations.push(strings(&["verify", "--theorem", "fs_q2", "--n", &n, "--q", &k, "--format", "json"]));
        }
        for stats in ["inv_q,del_q", "rmaj_q,del_q"] {
            invocations.push(strings(&["dist", "--m", &m, "--q", &k, "--stats", stats, "--format", "json"]));
        }
        invocations.push(strings(&[
            "dist", "--m", &m, "--q", &k, "--stats", "rmaj_q,des_q_of_inverse", "--filter", "inverse-avoid",
        ]));
    }
    invocations.push(strings(&["dist", "--m", "7", "--q", "2", "--stats", "inv_q", "--filter", "inv-des-del:2,4:3"]));
    invocations.push(strings(&["dist", "--m", "7", "--q", "2", "--stats", "rmaj_q", "--filter", "inv-des-del:2,4:3"]));
    for args in &invocations {
        let seq = cli(args, "1")?;
        let par = cli(args, "4")?;
        ensure(seq == par, || format!("{args:?}: sequential and parallel output differ"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("worked example q-descent sets", worked_example),
        ("product formulas, n+q-1 <= 8", products),
        ("class-by-class equidistribution, n+q-1 <= 7", class_equidistribution),
        ("inverse-avoider equidistribution, n+q-1 <= 8", inverse_avoiders),
        ("length, delent, inverse and double-coset identities", length_and_delent),
        ("covering map transport, fibers and composition", covering_map),
        ("avoidance counts against Bell numbers", counting),
        ("refined avoider and delent counts, n+q-1 <= 8", refined_counts),
        ("Dobinski-type series to 1e-9", dobinski),
        ("alternating layer, degree <= 7", alternating),
        ("sequential and parallel CLI output identical", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        match result {
            Ok(()) => println!("PASS  {:>2}  {name}  ({:.3} s)", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}  ({:.3} s): {msg}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
