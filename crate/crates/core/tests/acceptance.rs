//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always show.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use ablkit::abl::{
    abl_distribution, born_distribution, check_functional_consistency, collapse, joint_probability,
    ConsistencyStatus,
};
use ablkit::contextuality::{
    exhaustive_assignment_search, ghz3_constraints, ks_coloring_search, mermin_square_constraints,
    parity_obstruction, quantum_correlation,
};
use ablkit::observables::{joint_spectrum, on_site, spin_along};
use ablkit::rules::{check_product_rule, check_sum_rule, sweep_product_postselections, SweepResult};
use ablkit::scenarios::{build_epr_bohm_vaidman, build_ghz3, build_hardy, build_spin1_ks, CATALOG};
use ablkit::states::singlet;
use ablkit::{Axis, Direction, Error, HardyParameters, KsInstance, Matrix, PrePostSelection, StateVector, Tolerances};
use common::*;
use rand::Rng;

// Tolerances pinned by the criteria.
const GOLDEN: f64 = 1e-9;
const EIGEN: f64 = 1e-12;
const HARDY_ZERO: f64 = 1e-12;
const HARDY_W: f64 = 1e-9;
const SPIN1: f64 = 1e-12;
const SINGLET: f64 = 1e-12;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_abl_golden() -> Check {
    let tol = Tolerances::default();
    let s = build_epr_bohm_vaidman();
    let pps = s.selection();
    let p = |obs: &str, v: f64| -> Result<f64, String> {
        let d = abl_distribution(pps, s.observable(obs).map_err(|e| e.to_string())?, &tol).map_err(|e| e.to_string())?;
        Ok(d.probability_of(v, 1e-9))
    };
    let checks = [
        ("s1y", -1.0, 1.0),
        ("s2x", -1.0, 1.0),
        ("s1y*s2x", 1.0, 0.0),
        ("s1y+s2x", -2.0, 1.0 / 6.0),
        ("s1y+s2x", 0.0, 2.0 / 3.0),
        ("s1y+s2x", 2.0, 1.0 / 6.0),
    ];
    for (obs, v, want) in checks {
        let got = p(obs, v)?;
        ensure(close(got, want, GOLDEN), format!("p({obs}={v}) = {got}, expected {want}"))?;
    }
    Ok("six ABL probabilities within 1e-9".into())
}

fn c2_sweep() -> Check {
    let tol = Tolerances::default();
    let entries = sweep_product_postselections(&Axis::ALL, &Axis::ALL, &tol);
    ensure(entries.len() == 9, format!("{} rows", entries.len()))?;
    let pairs = Axis::ALL.iter().flat_map(|a| Axis::ALL.iter().map(move |b| (*a, *b)));
    let mut evaluated = 0;
    for (entry, (pa, pb)) in entries.iter().zip(pairs) {
        let post = kron_amps(&up_amps(pa), &up_amps(pb));
        let o = pair_oracle(&singlet_amps(), &post, pb, pa);
        match &entry.result {
            SweepResult::Skipped { .. } => {
                ensure(o.denominator <= 1e-24, format!("{} skipped but oracle denominator {}", entry.post_label, o.denominator))?;
            }
            SweepResult::Evaluated { sum, product } => {
                evaluated += 1;
                ensure(!sum.verdict.holds() && !product.verdict.holds(), format!("{} has a Holds verdict", entry.post_label))?;
                let want_sum = oracle_verdict(o.eor_a, o.eor_b, o.eor_sum, |x, y| x + y);
                let want_prod = oracle_verdict(o.eor_a, o.eor_b, o.eor_prod, |x, y| x * y);
                ensure(
                    sum.verdict == want_sum && product.verdict == want_prod,
                    format!("{}: sweep ({:?}, {:?}) vs oracle ({want_sum:?}, {want_prod:?})", entry.post_label, sum.verdict, product.verdict),
                )?;
            }
        }
    }
    Ok(format!("{evaluated} of 9 evaluated, all violate both rules, oracle agrees"))
}

fn c3_ghz3() -> Check {
    let tol = Tolerances::default();
    let s = build_ghz3();
    for (w, e) in [("XYY", 1.0), ("YXY", 1.0), ("YYX", 1.0), ("XXX", -1.0)] {
        let image = s.observable(w).unwrap().matrix().apply_state(s.pre()).unwrap();
        let dev = image.iter().zip(s.pre().amps()).map(|(x, p)| (x - p * e).norm()).fold(0.0, f64::max);
        ensure(dev <= EIGEN, format!("{w}: deviation {dev:e}"))?;
    }
    let sys = ghz3_constraints(&tol).map_err(|e| e.to_string())?;
    let r = exhaustive_assignment_search(&sys).map_err(|e| e.to_string())?;
    ensure((r.count, r.search_space) == (0, 64), format!("{} of {}", r.count, r.search_space))?;
    ensure(parity_obstruction(&sys), "no parity certificate")?;
    Ok("eigenvalues (+1,+1,+1,-1); 0 of 64; parity certificate".into())
}

fn c4_mermin() -> Check {
    let tol = Tolerances::default();
    let sys = mermin_square_constraints(&tol).map_err(|e| e.to_string())?;
    let signs: Vec<i8> = sys.constraints().iter().map(|c| i8::from(c.sign)).collect();
    let plus = signs.iter().filter(|&&s| s == 1).count();
    ensure((signs.len(), plus) == (6, 5), format!("signs {signs:?}"))?;
    let r = exhaustive_assignment_search(&sys).map_err(|e| e.to_string())?;
    ensure((r.count, r.search_space) == (0, 512), format!("{} of {}", r.count, r.search_space))?;
    Ok("five +I, one -I; 0 of 512".into())
}

fn c5_hardy() -> Check {
    let tol = Tolerances::default();
    let mut r = rng(5);
    for i in 0..200 {
        let p = random_hardy(&mut r);
        let s = build_hardy(&p).map_err(|e| e.to_string())?;
        let o = |n: &str| s.observable(n).unwrap();
        let p11 = joint_probability(s.pre(), &[(o("U1"), 1.0), (o("U2"), 1.0)], &tol).map_err(|e| e.to_string())?;
        ensure(p11 <= HARDY_ZERO, format!("set {i}: p(U1=1,U2=1) = {p11:e}"))?;
        for (given, target) in [("U2", "W1"), ("U1", "W2")] {
            let c = collapse(s.pre(), o(given), 0.0, &tol).map_err(|e| e.to_string())?;
            let d = born_distribution(&c, o(target), &tol).map_err(|e| e.to_string())?;
            ensure(close(d.probability_of(1.0, 1e-9), 1.0, HARDY_W), format!("set {i}: {given}=0 does not force {target}=1"))?;
        }
    }
    let sym = HardyParameters::symmetric();
    let s = build_hardy(&sym).map_err(|e| e.to_string())?;
    let w = joint_probability(
        s.pre(),
        &[(s.observable("W1").unwrap(), 0.0), (s.observable("W2").unwrap(), 0.0)],
        &tol,
    )
    .map_err(|e| e.to_string())?;
    let oracle = w_perp_overlap_sq(&sym);
    ensure(close(oracle, 1.0 / 12.0, 1e-15), format!("oracle gives {oracle}"))?;
    ensure(close(w, oracle, HARDY_W), format!("p(W1=0,W2=0) = {w}, oracle {oracle}"))?;
    Ok("200 random triples; p(W1=0,W2=0) = 1/12 at the symmetric point".into())
}

fn c6_spin1() -> Check {
    let tol = Tolerances::default();
    let s = build_spin1_ks();
    let obs: Vec<_> = ["Jx2", "Jy2", "Jz2"].iter().map(|n| s.observable(n).unwrap().clone()).collect();
    let total = obs[0].matrix().add(obs[1].matrix()).unwrap().add(obs[2].matrix()).unwrap();
    let dev = total.distance(&Matrix::identity(3).scale(c(2.0, 0.0)));
    ensure(dev <= SPIN1, format!("J^2 - 2I = {dev:e}"))?;
    let joint = joint_spectrum(&obs, &tol).map_err(|e| e.to_string())?;
    ensure(joint.len() == 3, format!("{} joint eigenspaces", joint.len()))?;
    for j in &joint {
        let mut v = j.values.clone();
        v.sort_by(f64::total_cmp);
        ensure(
            close(v[0], 0.0, 1e-9) && close(v[1], 1.0, 1e-9) && close(v[2], 1.0, 1e-9),
            format!("joint value {:?}", j.values),
        )?;
    }
    let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .map(|[x, y, z]| Direction::new(x, y, z).unwrap())
        .to_vec();
    let r = ks_coloring_search(&KsInstance::new(dirs, vec![[0, 1, 2]], &tol).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(r.count == 3, format!("{} colorings", r.count))?;
    Ok("J^2 = 2I; permutations of (0,1,1); 3 colorings".into())
}

fn c7_properties() -> Check {
    let tol = Tolerances::default();
    let mut r = rng(7);
    for _ in 0..1000 {
        let dim = r.gen_range(2..=9);
        assert_spectral_invariants(&random_hermitian(&mut r, dim), &tol);
    }

    let palette = [-2.0, -1.0, 0.0, 0.5, 1.0, 3.0];
    let mut certain_checked = 0;
    for _ in 0..1000 {
        let dim = r.gen_range(2..=6);
        let basis = random_orthonormal_basis(&mut r, dim);
        let values: Vec<f64> = (0..dim).map(|_| palette[r.gen_range(0..palette.len())]).collect();
        let obs = observable("A", with_spectrum(&basis, &values));
        let (pre, post) = (random_state(&mut r, dim), random_state(&mut r, dim));
        let d = abl_distribution(&PrePostSelection::new(pre, Some(post.clone())).unwrap(), &obs, &tol)
            .map_err(|e| e.to_string())?;
        ensure(close(d.total(), 1.0, 1e-12), format!("ABL total {}", d.total()))?;
        let k = r.gen_range(0..dim);
        let eig = StateVector::new(basis[k].clone()).unwrap();
        match abl_distribution(&PrePostSelection::new(eig, Some(post)).unwrap(), &obs, &tol) {
            Ok(d) => {
                ensure(close(d.probability_of(values[k], 1e-9), 1.0, 1e-9), "eigenstate outcome not certain")?;
                certain_checked += 1;
            }
            Err(Error::ZeroDenominator { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }

        // functional consistency with an eigenstate pre-selection
        let f = |x: f64| x * x - 1.0;
        let eig = StateVector::new(basis[k].clone()).unwrap();
        let pps = PrePostSelection::new(eig, Some(random_state(&mut r, dim))).unwrap();
        match check_functional_consistency(&pps, &obs, &f, "f", &tol) {
            Ok(rep) => ensure(rep.status == ConsistencyStatus::Consistent, "functional consistency violated")?,
            Err(Error::ZeroDenominator { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }

    let mut implications = 0;
    for _ in 0..400 {
        let dim = [4, 8][r.gen_range(0..2)];
        let basis = random_orthonormal_basis(&mut r, dim);
        let mut sign = || -> Vec<f64> { (0..dim).map(|_| if r.gen_bool(0.5) { 1.0 } else { -1.0 }).collect() };
        let (va, vb) = (sign(), sign());
        let a = observable("A", with_spectrum(&basis, &va));
        let b = observable("B", with_spectrum(&basis, &vb));
        let pre = if r.gen_bool(0.5) {
            StateVector::new(basis[r.gen_range(0..dim)].clone()).unwrap()
        } else {
            random_state(&mut r, dim)
        };
        let pps = PrePostSelection::new(pre, Some(random_state(&mut r, dim))).unwrap();
        let sum = check_sum_rule(&pps, &a, &b, 1.0, 1.0, &tol).map_err(|e| e.to_string())?;
        let prod = check_product_rule(&pps, &a, &b, &tol).map_err(|e| e.to_string())?;
        if sum.verdict.holds() {
            implications += 1;
            ensure(prod.verdict.holds(), "sum rule holds but product rule fails")?;
        }
    }

    let psi = singlet();
    for _ in 0..100 {
        let (n1, n2) = (random_direction(&mut r), random_direction(&mut r));
        let a = on_site(&spin_along(&n1), 0, 2).unwrap();
        let b = on_site(&spin_along(&n2), 1, 2).unwrap();
        let e = quantum_correlation(&psi, &a, &b, &tol).map_err(|e| e.to_string())?;
        ensure(close(e, -n1.dot(&n2), SINGLET), format!("singlet correlation {e} vs {}", -n1.dot(&n2)))?;
    }
    Ok(format!(
        "1000 spectra, 1000 triples ({certain_checked} certainty checks), {implications} sum=>product cases, 100 singlet pairs"
    ))
}

/// The CLI binary from this build, rebuilt if stale.
fn cli_binary() -> Result<PathBuf, String> {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let profile_dir = exe.parent().and_then(|d| d.parent()).ok_or("unexpected test binary location")?;
    let target_dir = profile_dir.parent().ok_or("unexpected target layout")?;
    let profile = match profile_dir.file_name().and_then(|n| n.to_str()) {
        Some("debug") => "dev",
        Some(other) => other,
        None => return Err("unexpected profile directory".into()),
    };
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "-p", "ablkit-cli", "--bin", "ablkit", "--profile", profile])
        .env("CARGO_TARGET_DIR", target_dir)
        .status()
        .map_err(|e| format!("could not run cargo: {e}"))?;
    ensure(status.success(), "building the CLI failed")?;
    let bin = profile_dir.join(format!("ablkit{}", std::env::consts::EXE_SUFFIX));
    ensure(bin.exists(), format!("{} missing", bin.display()))?;
    Ok(bin)
}

fn c8_cli() -> Check {
    let bin = cli_binary()?;
    let run = |args: &[&str]| Command::new(&bin).args(args).output().map_err(|e| e.to_string());
    for name in CATALOG {
        let a = run(&["scenario", "run", name, "--json"])?;
        let b = run(&["scenario", "run", name, "--json"])?;
        ensure(a.status.code() == Some(0), format!("{name}: exit {:?}", a.status.code()))?;
        ensure(a.stdout == b.stdout, format!("{name}: repeated runs differ"))?;
        let text = String::from_utf8(a.stdout).map_err(|e| e.to_string())?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(value["result"]["all_passed"] == serde_json::Value::Bool(true), format!("{name}: facts failed"))?;
        ensure(text.contains("\"provenance\": \"["), format!("{name}: no provenance tags"))?;
        let human = run(&["scenario", "run", name])?;
        ensure(human.status.code() == Some(0), format!("{name}: human run exit {:?}", human.status.code()))?;
    }
    ensure(run(&["scenario", "run", "missing"])?.status.code() == Some(1), "unknown scenario must exit 1")?;
    ensure(run(&["no-such-command"])?.status.code() == Some(1), "usage error must exit 1")?;
    let dir = std::env::temp_dir().join(format!("ablkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let file = dir.join("orthogonal.json");
    std::fs::write(
        &file,
        r#"{"dim_per_site": 2, "n_sites": 1, "pre": [[1, 0], [0, 0]], "post": [[0, 0], [1, 0]],
            "observables": [{"name": "id", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let o = run(&["abl", "--file", file.to_str().unwrap(), "--obs", "id"])?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(o.status.code() == Some(2), format!("impossible post-selection exit {:?}", o.status.code()))?;
    ensure(
        String::from_utf8_lossy(&o.stderr).contains("post-selection impossible"),
        "missing impossibility message",
    )?;
    Ok("5 built-ins: exit 0, deterministic JSON with provenance; exit codes 1 and 2".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("ABL golden values", c1_abl_golden),
        ("nine-product-state sweep", c2_sweep),
        ("GHZ3 eigenvalues and parity search", c3_ghz3),
        ("Mermin square", c4_mermin),
        ("Hardy facts", c5_hardy),
        ("spin-1 squared components", c6_spin1),
        ("property suites", c7_properties),
        ("CLI contract", c8_cli),
    ];
    // keep panics from helper asserts on one line each
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
