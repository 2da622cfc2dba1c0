//! Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact.

use std::process::{Command, Output};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use syzygy_cert::arith::{binom_mod_p_lucas, h0, is_binom_unit_mod_p, Prime};
use syzygy_cert::bundle::{degree_decomposition, sym_identity_check, syzygy_slope};
use syzygy_cert::cli::Report;
use syzygy_cert::criteria::{
    bound_l3, certify_case, certify_cm1_ratio, certify_l8_truncations, certify_r3_obligations,
    classify, mu_max_bounds, mu_max_proof_check, restriction_threshold, Case, Certificate, Context,
    StabilityVerdict, ThresholdQuery, Verdict,
};
use syzygy_cert::lattice::{
    crude_margin, dominance_leq, enumerate_supports, is_downward_closed, SupportSet,
};
use syzygy_cert::Rat;

type Check = Result<(), String>;
type CheckFn = fn() -> Check;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_lucas() -> Check {
    let mut row = vec![BigUint::one()];
    for i in 0..=300u64 {
        for p in [2u64, 3, 5, 7, 11] {
            let pr = prime(p);
            for k in 0..=i {
                let residue = &row[k as usize] % p;
                let lucas = binom_mod_p_lucas(i, k, pr);
                ensure(residue == BigUint::from(lucas), || {
                    format!("residue p={p} i={i} k={k}")
                })?;
                let unit = is_binom_unit_mod_p(i, k, pr).map_err(|e| e.to_string())?;
                ensure(
                    unit == dominance_leq(k, i, pr) && unit == !residue.is_zero(),
                    || format!("unit/dominance p={p} i={i} k={k}"),
                )?;
            }
        }
        let mut next = vec![BigUint::one(); row.len() + 1];
        for k in 1..row.len() {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
    }
    Ok(())
}

fn c2_telescoping() -> Check {
    for n in 1..=6 {
        for a in 0..=60 {
            ensure(sym_identity_check(n, a), || format!("n={n} a={a}"))?;
        }
    }
    Ok(())
}

fn c3_conservation() -> Check {
    for n in 2..=5 {
        for d in 1..=60 {
            let blocks = degree_decomposition(n, d).map_err(|e| e.to_string())?;
            let deg: BigInt = blocks.iter().map(|b| b.degree.clone()).sum();
            let rank: BigUint = blocks.iter().map(|b| b.rank.clone()).sum();
            ensure(deg == BigInt::from(-(d as i64)), || {
                format!("degree n={n} d={d}")
            })?;
            ensure(rank == h0(n, d) - 1u32, || format!("rank n={n} d={d}"))?;
        }
    }
    Ok(())
}

fn c4_truncations() -> Check {
    for n in 2..=5 {
        for p in [5, 7, 11, 13] {
            for d in 1..p {
                let rep = certify_l8_truncations(n, prime(p), d).map_err(|e| e.to_string())?;
                let mu = syzygy_slope(n, d).unwrap();
                let dd = BigInt::from(d);
                for t in &rep.truncations {
                    if t.top_twist + 1 < d {
                        ensure(t.neg_degree >= dd && t.slope < mu, || {
                            format!("proper truncation n={n} p={p} d={d} i0={}", t.top_twist)
                        })?;
                    } else {
                        ensure(t.neg_degree == dd, || {
                            format!("full bundle n={n} p={p} d={d}")
                        })?;
                    }
                }
                ensure(rep.obligations.iter().all(|o| o.holds), || {
                    format!("obligation n={n} p={p} d={d}")
                })?;
            }
        }
    }
    let negs: Vec<BigInt> = certify_l8_truncations(3, prime(5), 3)
        .unwrap()
        .truncations
        .into_iter()
        .map(|t| t.neg_degree)
        .collect();
    ensure(negs == vec![BigInt::from(10), 8.into(), 3.into()], || {
        format!("(3,5,3) gave {negs:?}")
    })
}

fn c5_r3() -> Check {
    let mut failures = Vec::new();
    for n in 2..=5 {
        for p in [2, 3, 5, 7] {
            for d in 1..=300 {
                let obs = certify_r3_obligations(n, prime(p), d).map_err(|e| e.to_string())?;
                for o in obs.iter().filter(|o| !o.holds) {
                    failures.push(format!(
                        "({n},{p},{d}) {} {} {} {}",
                        o.name,
                        o.lhs,
                        o.rel.symbol(),
                        o.rhs
                    ));
                }
            }
        }
    }
    let obs = certify_r3_obligations(3, prime(2), 7).unwrap();
    let a7 = obs
        .iter()
        .find(|o| o.context == Some(Context::A(7)))
        .unwrap();
    let b = obs.iter().find(|o| o.name == "r3.B").unwrap();
    ensure(
        a7.lhs == rat(252, 119) && a7.rhs == rat(3, 1) && a7.holds,
        || format!("A_7: {a7}"),
    )?;
    ensure(
        b.lhs == rat(30, 1) && b.rhs == rat(36, 1) && b.holds,
        || format!("B: {b}"),
    )?;
    ensure(failures.is_empty(), || {
        format!(
            "{} failed obligations, e.g. {}",
            failures.len(),
            failures
                .iter()
                .take(3)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        )
    })
}

fn c6_cm1() -> Check {
    for n in 2..=5 {
        let obs = certify_cm1_ratio(n, 200).map_err(|e| e.to_string())?;
        ensure(obs.len() == 200, || "length".into())?;
        if let Some(o) = obs.iter().find(|o| !o.holds) {
            return Err(format!("n={n}: {o}"));
        }
    }
    Ok(())
}

fn syzcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzcert"))
        .args(args)
        .env_remove("SYZ_LOG")
        .output()
        .expect("spawn syzcert")
}

fn find_k<'a>(
    c: &'a Certificate,
    name: &str,
) -> Result<&'a syzygy_cert::criteria::Obligation, String> {
    c.obligations
        .iter()
        .find(|o| o.name == name && o.context == Some(Context::K(1)))
        .ok_or_else(|| format!("{name} missing"))
}

fn c7_golden() -> Check {
    let golden = |n, p, d, case| -> Result<Certificate, String> {
        let c = certify_case(n, prime(p), d).map_err(|e| e.to_string())?;
        ensure(
            c.stability() == StabilityVerdict::Stable(case) && c.all_hold,
            || format!("({n},{p},{d}) expected {case}, got {:?}", c.stability()),
        )?;
        Ok(c)
    };
    let c = golden(3, 2, 7, Case::SmallP)?;
    let k = find_k(&c, "l4.k_bound")?;
    ensure(k.lhs == rat(12, 1) && k.rhs == rat(7, 1), || {
        format!("(3,2,7) k=1 {k}")
    })?;
    ensure(
        bound_l3(3, prime(2), 7, 1).unwrap() == BigUint::from(12u32),
        || "l3".into(),
    )?;

    golden(3, 3, 19, Case::TwoDigit)?;

    let c = golden(3, 5, 81, Case::LargeP)?;
    let h = c
        .obligations
        .iter()
        .find(|o| o.name == "l5.h0_top")
        .ok_or("h0_top missing")?;
    ensure(h.lhs == rat(20, 1) && h.rhs == rat(18, 1), || {
        format!("(3,5,81) h0 {h}")
    })?;
    let k = find_k(&c, "l5.k_bound")?;
    ensure(k.lhs == rat(120, 1) && k.rhs == rat(81, 1), || {
        format!("(3,5,81) k=1 {k}")
    })?;

    let c = golden(5, 3, 13, Case::LowDegree)?;
    let k = find_k(&c, "c2.k_bound")?;
    ensure(k.lhs == rat(20, 1) && k.rhs == rat(13, 1), || {
        format!("(5,3,13) k=1 {k}")
    })?;

    ensure(
        classify(3, prime(7), 449).unwrap() == StabilityVerdict::Unknown,
        || "449 classify".into(),
    )?;
    let out = syzcert(&["certify", "-n", "3", "-p", "7", "-d", "449", "--json"]);
    ensure(out.status.code() == Some(3), || {
        format!("449 exit {:?}", out.status.code())
    })
}

fn c8_mu_max() -> Check {
    for n in 2..=5 {
        for d in 1..=300 {
            let b = mu_max_bounds(n, d).map_err(|e| e.to_string())?;
            ensure(b.lower <= b.upper, || format!("order n={n} d={d}"))?;
            ensure((b.lower == b.upper) == (d == 1), || {
                format!("equality n={n} d={d}")
            })?;
            for p in [2, 3, 5, 7] {
                let obs = mu_max_proof_check(n, prime(p), d).map_err(|e| e.to_string())?;
                if let Some(o) = obs.iter().find(|o| !o.holds) {
                    return Err(format!("n={n} p={p} d={d} {} {o}", o.name));
                }
            }
        }
    }
    let obs = mu_max_proof_check(3, prime(2), 7).unwrap();
    let sum = obs.iter().find(|o| o.name == "mu.dim_sum").unwrap();
    ensure(sum.lhs == rat(15, 1) && sum.rhs == rat(15, 1), || {
        format!("(3,2,7) {sum}")
    })
}

/// Independent scan: both inequalities by integer cross-multiplication up to
/// a far horizon; the threshold is one past the last failure.
fn brute_threshold(n: u64, r: i128, disc: i128) -> (u64, u64) {
    let sym = |vars: u64, deg: u64| -> i128 {
        let mut row = vec![1i128; deg as usize + 1];
        for _ in 1..vars {
            for e in 1..row.len() {
                row[e] += row[e - 1];
            }
        }
        row[deg as usize]
    };
    let pass = |d: u64| {
        let di = d as i128;
        let c1 = di * r * (r - 1) > (r - 1) * (r - 1) * disc + 1;
        let num = if n == 2 {
            sym(3, d) - 1
        } else {
            sym(n, d.div_ceil(2))
        };
        let c2 = 4 * num > di * ((r * r - 1).max(4) + 4);
        c1 && c2
    };
    let table: Vec<bool> = (1..=1000).map(pass).collect();
    let first = table.iter().position(|&x| x).unwrap() as u64 + 1;
    let last_fail = table.iter().rposition(|&x| !x).map_or(0, |i| i as u64 + 1);
    (first, last_fail + 1)
}

fn c9_threshold() -> Check {
    let run = |n, r, disc: i64| {
        restriction_threshold(&ThresholdQuery {
            n,
            r,
            hn: 1,
            disc: rat(disc, 1),
            horizon: 10,
        })
        .map_err(|e| e.to_string())
    };
    let a = run(3, 2, 2)?;
    ensure((a.first_pass, a.stable_from) == (7, 9), || {
        format!("(3,2,2): {} {}", a.first_pass, a.stable_from)
    })?;
    ensure(brute_threshold(3, 2, 2) == (7, 9), || {
        "brute (3,2,2)".into()
    })?;
    let b = run(2, 2, 2)?;
    ensure(
        b.stable_from == 2 && brute_threshold(2, 2, 2).1 == 2,
        || format!("(2,2,2): {}", b.stable_from),
    )?;
    let c = run(3, 3, 0)?;
    ensure(
        c.stable_from == 17 && brute_threshold(3, 3, 0).1 == 17,
        || format!("(3,3,0): {}", c.stable_from),
    )
}

fn c10_lattice() -> Check {
    let sups = enumerate_supports(3, prime(2), 4, 1000).map_err(|e| e.to_string())?;
    ensure(sups.len() == 5, || {
        format!("(3,2,4) gave {} supports", sups.len())
    })?;
    for (n, p, d) in [(3, 2, 4), (3, 2, 7), (3, 3, 8), (4, 5, 4), (2, 3, 9)] {
        for s in enumerate_supports(n, prime(p), d, 100_000).map_err(|e| e.to_string())? {
            ensure(is_downward_closed(s.indices(), prime(p), d), || {
                format!("{:?}", s.indices())
            })?;
        }
    }
    let s = SupportSet::new(3, prime(5), 3, vec![0, 1]).map_err(|e| e.to_string())?;
    let m = crude_margin(&s).unwrap();
    ensure(m.margin == rat(104, 19) && m.conclusive, || {
        format!("(3,5,3) {{0,1}}: {}", m.margin)
    })?;
    let full = SupportSet::full(3, prime(2), 7).unwrap();
    let m = crude_margin(&full).unwrap();
    ensure(m.margin < Rat::zero() && !m.conclusive, || {
        format!("full (3,2,7): {}", m.margin)
    })?;
    ensure(
        certify_case(3, prime(2), 7).unwrap().verdict == Verdict::Stable,
        || "certify".into(),
    )?;

    let out = syzcert(&["support", "-n", "3", "-p", "2", "-d", "7", "--json"]);
    ensure(out.status.code() == Some(0), || "support exit".into())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let full_row = v["rows"]
        .as_array()
        .and_then(|rows| {
            rows.iter()
                .find(|r| r["indices"].as_array().is_some_and(|i| i.len() == 7))
        })
        .ok_or("full-support row missing")?;
    ensure(
        full_row["conclusive"] == false && v["certificate_verdict"] == "stable",
        || "report must show an inconclusive full support next to a stable verdict".into(),
    )
}

fn c11_cli() -> Check {
    let certify = ["certify", "-n", "3", "-p", "2", "-d", "7", "--json"];
    let a = syzcert(&certify);
    let b = syzcert(&certify);
    ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
        "certify not byte-identical".into()
    })?;

    let sweep = |jobs: &str| {
        syzcert(&[
            "sweep", "-n", "3", "-p", "2", "--dmin", "1", "--dmax", "40", "--jobs", jobs,
        ])
    };
    let (s1, s4) = (sweep("1"), sweep("4"));
    ensure(s1.stdout == s4.stdout, || {
        "sweep output depends on --jobs".into()
    })?;
    let rows = String::from_utf8_lossy(&s1.stdout).lines().count() - 1;
    ensure(rows == 40, || format!("sweep rows {rows}"))?;

    let text = String::from_utf8(a.stdout).map_err(|e| e.to_string())?;
    let report: Report<Certificate> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(report.kind == "certificate", || "kind".into())?;
    ensure(report.to_json() == text, || {
        "JSON round trip changed bytes".into()
    })?;
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "kind",
        "tool_version",
        "params",
        "expansion",
        "case",
        "verdict",
        "obligations",
        "notes",
    ] {
        ensure(v.get(key).is_some(), || format!("missing key {key}"))?;
    }
    let ob = &v["obligations"][0];
    for key in ["name", "lhs", "rel", "rhs", "holds", "context"] {
        ensure(ob.get(key).is_some(), || {
            format!("missing obligation key {key}")
        })?;
    }
    ensure(ob["lhs"].as_str().is_some_and(|s| s.contains('/')), || {
        "rationals must be num/den".into()
    })?;

    let bad_out = "/nonexistent-dir/report.json";
    let matrix: &[(&[&str], i32)] = &[
        (&["classify", "-n", "3", "-p", "2", "-d", "7", "--json"], 0),
        (
            &[
                "threshold",
                "-n",
                "3",
                "-r",
                "2",
                "--hn",
                "1",
                "--disc",
                "2",
                "--horizon",
                "10",
            ],
            0,
        ),
        (&["curve", "-g", "3", "--deg-l", "7"], 0),
        (
            &["sweep", "-n", "2", "-p", "5", "--dmin", "1", "--dmax", "3"],
            0,
        ),
        (&["classify", "-n", "3", "-p", "4", "-d", "7"], 2),
        (&["certify", "-n", "1", "-p", "2", "-d", "7"], 2),
        (&["certify", "-n", "3", "-p", "2"], 2),
        (&["certify", "-n", "3", "-p", "2", "-d", "7", "--bogus"], 2),
        (
            &["sweep", "-n", "3", "-p", "2", "--dmin", "5", "--dmax", "4"],
            2,
        ),
        (&["curve", "-g", "3", "--deg-l", "6"], 2),
        (&["certify", "-n", "3", "-p", "7", "-d", "449"], 3),
        (
            &[
                "sweep", "-n", "3", "-p", "7", "--dmin", "449", "--dmax", "449",
            ],
            3,
        ),
        (
            &["support", "-n", "3", "-p", "2", "-d", "12", "--cap", "3"],
            4,
        ),
        (&["threshold", "-n", "3", "-r", "2", "--disc", "1000000"], 4),
        (
            &[
                "classify", "-n", "3", "-p", "2", "-d", "7", "--out", bad_out,
            ],
            4,
        ),
    ];
    for (args, code) in matrix {
        let out = syzcert(args);
        ensure(out.status.code() == Some(*code), || {
            format!("{args:?}: exit {:?}, expected {code}", out.status.code())
        })?;
    }
    let cap = syzcert(&["support", "-n", "3", "-p", "2", "-d", "12", "--cap", "3"]);
    ensure(cap.stdout.is_empty(), || {
        "cap overflow must not emit a partial table".into()
    })
}

fn main() {
    let criteria: [(&str, CheckFn); 11] = [
        ("Lucas oracle equivalence", c1_lucas),
        ("telescoping identity", c2_telescoping),
        ("degree conservation", c3_conservation),
        ("exact d < p truncation suite", c4_truncations),
        ("slope-ratio obligation sweep", c5_r3),
        ("ratio lower bound sweep", c6_cm1),
        ("golden certificates", c7_golden),
        ("mu_max sandwich", c8_mu_max),
        ("threshold scans", c9_threshold),
        ("lattice behavior", c10_lattice),
        ("CLI contract", c11_cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
