//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion with
//! its pinned tolerances and time limit; exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::time::Instant;

use anglelab::arctan::{canonical_key, ArcTanSumKey, ArcTanTerm, Tangent, DEFAULT_MAX_BITS};
use anglelab::cli::{execute, reproducible_part};
use anglelab::constructions::{
    cartesian_product, circle_angle_count, line_with_symmetric_pair, BaseSet, Lcg,
};
use anglelab::geometry::{distinct_angle_count, rich_line_profile, PointSet};
use anglelab::pipeline::{exponent_fit, run_pipeline};
use anglelab::sumset::{
    arctan_ratio_set, combo_cardinality, concavity_check, expander_check, pluennecke_check,
    CoeffPattern, ComboOptions, CountMode, ExactRealSet, ExpanderInput, Presentation,
};
use anglelab::Rational;
use common::{float_angle_oracle, random_rational_points, random_rationals};

/// Outcome of one criterion: verdict, human detail, and a deterministic
/// payload of every computed value (compared across thread counts).
struct Verdict {
    pass: bool,
    detail: String,
    payload: String,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn unit(rng: &mut Lcg) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn c1_oracle() -> Verdict {
    let mut rng = Lcg::new(1);
    let (mut agree, mut skipped, mut payload) = (0, 0, Vec::new());
    while payload.len() < 100 {
        let set = random_rational_points(&mut rng, 7);
        match float_angle_oracle(&set, 1e-6, 1e-9) {
            None => skipped += 1,
            Some(oracle) => {
                let exact = distinct_angle_count(&set).unwrap().0;
                agree += usize::from(exact == oracle);
                payload.push(exact);
            }
        }
    }
    Verdict {
        pass: agree == 100,
        detail: format!("{agree}/100 agree (gap 1e-6, cluster tol 1e-9; {skipped} sets skipped by the gap condition)"),
        payload: format!("{payload:?}"),
    }
}

fn c2_fixed() -> Verdict {
    let count = |c: &[(i64, i64)]| distinct_angle_count(&PointSet::from_ints(c).unwrap()).unwrap().0;
    let grid = count(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
    let tri = count(&[(0, 0), (1, 0), (0, 1)]);
    let line = count(&[(0, 0), (1, 0), (2, 0)]);
    let g3 = cartesian_product(&BaseSet::ints(&[0, 1, 2])).unwrap();
    let rich = rich_line_profile(&g3).unwrap().histogram.get(&3).copied().unwrap_or(0);
    let got = (grid, tri, line, rich);
    Verdict {
        pass: got == (2, 2, 2, 8),
        detail: format!("(2x2 grid, right isosceles, collinear, 3x3 L_3) = {got:?}, expected (2, 2, 2, 8) exactly"),
        payload: format!("{got:?}"),
    }
}

fn c3_machin() -> Verdict {
    let t = |c: i64, n: i64, d: i64| ArcTanTerm::new(c, Tangent::Finite(q(n, d)));
    let key = |terms: &[ArcTanTerm]| canonical_key(terms, DEFAULT_MAX_BITS);
    let pi = ArcTanSumKey::new(1, Tangent::zero());
    let quarter = ArcTanSumKey::atan(Tangent::Finite(q(1, 1)));
    let half = ArcTanSumKey::atan(Tangent::Infinite);
    let mut ok = 0;
    let mut payload = Vec::new();
    let mut check = |k: anglelab::Result<ArcTanSumKey>, want: &ArcTanSumKey| {
        let hit = k.as_ref() == Ok(want);
        ok += usize::from(hit);
        payload.push(format!("{k:?}"));
    };
    check(key(&[t(1, 1, 1), t(1, 2, 1), t(1, 3, 1)]), &pi);
    check(key(&[t(1, 1, 2), t(1, 1, 3)]), &quarter);
    check(key(&[t(4, 1, 5), t(-1, 1, 239)]), &quarter);
    let mut rng = Lcg::new(3);
    for _ in 0..20 {
        let (n, d) = (rng.range(1, 10_000), rng.range(1, 10_000));
        check(key(&[t(1, n, d), t(1, d, n)]), &half);
    }
    Verdict {
        pass: ok == 23,
        detail: format!("{ok}/23 identities certified as exact keys"),
        payload: payload.join(";"),
    }
}

fn c4_concavity() -> Verdict {
    let mut rng = Lcg::new(4);
    let mut negative = 0;
    let mut agree = 0;
    let mut worst: f64 = 0.0;
    let mut payload = Vec::new();
    for i in 0..1000 {
        let t = -2.0 + 4.0 * unit(&mut rng);
        let h1 = -2.0 + 4.0 * unit(&mut rng);
        let h2 = h1 + 0.1 + 1.4 * unit(&mut rng);
        let h3 = h2 + 0.1 + 1.4 * unit(&mut rng);
        let r = concavity_check([h1, h2, h3], &[t]).unwrap();
        negative += usize::from(r.negative);
        if i < 100 {
            agree += usize::from(r.agree);
            worst = worst.max(r.samples[0].relative_error);
        }
        payload.push(format!("{:e}", r.samples[0].closed_form));
    }
    Verdict {
        pass: negative == 1000 && agree == 100,
        detail: format!(
            "closed form < 0 at {negative}/1000 samples; matches central differences (step 1e-4) within 1e-4 relative error at {agree}/100 samples (worst relative error {worst:.3e})"
        ),
        payload: payload.join(","),
    }
}

fn c5_pluennecke() -> Verdict {
    let mut rng = Lcg::new(5);
    let opts = ComboOptions::default();
    let (mut ok, mut payload) = (0, Vec::new());
    for _ in 0..50 {
        let n = rng.range(1, 8) as usize;
        let s = ExactRealSet::rationals(random_rationals(&mut rng, n, false));
        let r = pluennecke_check(&s, 4, 3, &opts).unwrap();
        ok += usize::from(r.holds);
        payload.push(r.lhs.upper);
    }
    for _ in 0..20 {
        let n = rng.range(1, 5) as usize;
        let s = ExactRealSet::arctans(random_rationals(&mut rng, n, false).into_iter().map(Tangent::Finite));
        let r = pluennecke_check(&s, 4, 3, &opts).unwrap();
        ok += usize::from(r.holds);
        payload.push(r.lhs.upper);
    }
    Verdict {
        pass: ok == 70,
        detail: format!("holds on {ok}/70 sets (50 rational |S| <= 8, 20 arctan |S| <= 5; k=4, l=3; exact integer comparison)"),
        payload: format!("{payload:?}"),
    }
}

fn c6_expander() -> Verdict {
    let opts = ComboOptions::default();
    let mut base_ratio = None;
    let mut ok = true;
    let mut lines = Vec::new();
    for n in [4u32, 8, 16] {
        // A = {i g}, g = log 4, h = (0, g/2, g): alpha_i = 4^i, eta = (1, 2, 4).
        let input = ExpanderInput {
            presentation: Presentation::Ratio,
            a: (1..=n as i32).map(|i| Rational::from(4).pow(i)).collect(),
            h: [q(1, 1), q(2, 1), q(4, 1)],
        };
        let r = expander_check(&input, &opts, false).unwrap();
        let floor = *base_ratio.get_or_insert(r.ratio);
        let factors = r.card_left >= n as u64 && r.card_right >= n as u64;
        let bench_ok = r.product as f64 >= r.benchmark * floor;
        ok &= factors && bench_ok && r.resolved && r.mode == CountMode::Exact && r.spacing_ok;
        lines.push(format!(
            "N={n}: |L|={} |R|={} product={} benchmark={:.1} ratio={:.4}",
            r.card_left, r.card_right, r.product, r.benchmark, r.ratio
        ));
    }
    Verdict {
        pass: ok,
        detail: format!(
            "product >= N^5/(log2 N)^3 x ratio(N=4), each factor >= N, exact mode: {}",
            lines.join("; ")
        ),
        payload: lines.join(";"),
    }
}

fn c7_theorem3() -> Verdict {
    let mut rng = Lcg::new(7);
    let (mut ok, mut sizes) = (0, Vec::new());
    let pattern = CoeffPattern::new(vec![4, -3]).unwrap();
    for _ in 0..10 {
        let u = ExactRealSet::rationals(random_rationals(&mut rng, 4, true));
        let v = ExactRealSet::rationals(random_rationals(&mut rng, 4, true));
        let t = arctan_ratio_set(&u, &v).unwrap();
        let c = combo_cardinality(&[t], &pattern, &ComboOptions::default()).unwrap();
        ok += usize::from(c.resolved && c.lower >= 32);
        sizes.push(c.lower);
    }
    Verdict {
        pass: ok == 10,
        detail: format!("|4f(X-Y) - 3f(X-Y)| >= 4^(5/2) = 32 on {ok}/10 pairs; sizes {sizes:?}"),
        payload: format!("{sizes:?}"),
    }
}

fn c8_pipeline() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    let mut payload = Vec::new();
    for b in [vec![1, 2, 3, 4], vec![1, 2, 4, 8], vec![1, 2, 3, 4, 5, 6]] {
        let r = run_pipeline(&BaseSet::ints(&b), &ComboOptions::default()).unwrap();
        let plun = r.pluennecke_holds.unwrap_or(true);
        ok &= r.invariant_size && r.invariant_cross_module && plun;
        lines.push(format!(
            "B={b:?}: |T|=D={} {}, |T-T|={} (geometry {}), |4T-3T|={}",
            r.ratio_set_size,
            r.invariant_size,
            r.apex_signed_angle_count,
            r.geometry_signed_angle_count,
            r.seven_fold.map_or("infeasible".to_string(), |s| s.lower.to_string())
        ));
        payload.push(serde_json::to_string(&r).unwrap());
    }
    Verdict {
        pass: ok,
        detail: lines.join("; "),
        payload: payload.join("\n"),
    }
}

fn line_counts(ns: &[usize]) -> Vec<u64> {
    ns.iter()
        .map(|&n| distinct_angle_count(&line_with_symmetric_pair(n, &q(1, 10)).unwrap()).unwrap().0 as u64)
        .collect()
}

fn c9_degenerate() -> Verdict {
    let line = line_counts(&[8, 16, 32]);
    let circle: Vec<_> = [9, 17, 33]
        .iter()
        .map(|&n| circle_angle_count(n, DEFAULT_MAX_BITS).unwrap())
        .collect();
    let doubling = |c: &[u64]| c.windows(2).all(|w| w[1] <= 3 * w[0]);
    let circle_counts: Vec<u64> = circle.iter().map(|c| c.lower).collect();
    let resolved = circle.iter().all(|c| c.resolved);
    Verdict {
        pass: doubling(&line) && doubling(&circle_counts) && resolved,
        detail: format!(
            "count(2n)/count(n) <= 3: line n=8,16,32 -> {line:?}; circle n=9,17,33 -> {circle_counts:?} (certified, resolved={resolved})"
        ),
        payload: format!("{line:?}{circle:?}"),
    }
}

fn c10_growth() -> Verdict {
    let grid: Vec<(u64, u64)> = [4u64, 6, 8, 10]
        .iter()
        .map(|&n| {
            let b = BaseSet::explicit((1..=n as i64).map(Rational::from));
            (n, distinct_angle_count(&cartesian_product(&b).unwrap()).unwrap().0 as u64)
        })
        .collect();
    let ns = [8usize, 16, 32];
    let line: Vec<(u64, u64)> = ns.iter().map(|&n| n as u64).zip(line_counts(&ns)).collect();
    let (sg, sl) = (exponent_fit(&grid).unwrap(), exponent_fit(&line).unwrap());
    Verdict {
        pass: sg >= 2.0 && sl <= 1.3,
        detail: format!("grid slope {sg:.4} (>= 2.0) from {grid:?}; line slope {sl:.4} (<= 1.3) from {line:?}"),
        payload: format!("{grid:?}{line:?}{sg:e}{sl:e}"),
    }
}

type Criterion = (u32, &'static str, u64, fn() -> Verdict);

const CRITERIA: [Criterion; 10] = [
    (1, "oracle equivalence", 10, c1_oracle),
    (2, "fixed values", 1, c2_fixed),
    (3, "Machin suite", 1, c3_machin),
    (4, "concavity closed form", 5, c4_concavity),
    (5, "Pluennecke property", 60, c5_pluennecke),
    (6, "expander conformance", 120, c6_expander),
    (7, "sevenfold arctan sumsets", 120, c7_theorem3),
    (8, "pipeline consistency", 300, c8_pipeline),
    (9, "degenerate families", 60, c9_degenerate),
    (10, "growth contrast", 600, c10_growth),
];

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

/// CLI records for one representative workload per criterion.
fn cli_records(jobs: &str) -> Vec<String> {
    let dir = common::scratch("acceptance");
    let w = |name: &str, body: &str| {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let mut rng = Lcg::new(1);
    let mut doc = String::from("{\"points\":[");
    let set = random_rational_points(&mut rng, 7);
    doc.push_str(&set.iter().map(|p| format!("[\"{}\",\"{}\"]", p.x, p.y)).collect::<Vec<_>>().join(","));
    doc.push_str("]}");
    let pts = w("c1.json", &doc);
    let grid = w("c2.json", r#"{"points":[["0","0"],["1","0"],["0","1"],["1","1"]]}"#);
    let machin = w("c3.json", r#"{"kind":"arctan","terms":[[[4,"1/5"],[-1,"1/239"]],[[1,"1/2"],[1,"1/3"]]]}"#);
    let rat = w("c5.json", r#"{"values":["1","3/2","4","7","-2"]}"#);
    let a = w("c6.json", r#"{"values":["4","16","64","256"]}"#);
    let arct = w("c7.json", r#"{"kind":"arctan","terms":[[[1,"2/3"]],[[1,"5/7"]],[[1,"9/4"]],[[1,"1/8"]]]}"#);
    let recs = w("c10.json", "[[4,40],[6,150],[8,380],[10,780]]");
    let runs: Vec<Vec<&str>> = vec![
        vec!["angles", "--input", &pts],
        vec!["angles", "--input", &grid],
        vec!["sumset", "--pattern", "1,-1", "--set", &machin],
        vec!["concavity", "--h", "0,1,2", "--samples", "-1,0,1"],
        vec!["pluennecke", "--set", &rat],
        vec!["expander", "--a", &a, "--h", "1,2,4"],
        vec!["sumset", "--pattern", "4,-3", "--set", &arct],
        vec!["pipeline", "--values", "1,2,4,8"],
        vec!["construct", "--family", "circle", "--n", "17"],
        vec!["construct", "--family", "line", "--sweep", "8,16"],
        vec!["fit", "--records", &recs],
    ];
    runs.iter()
        .map(|args| {
            let o = execute(["anglelab", "--jobs", jobs].into_iter().chain(args.iter().copied()));
            reproducible_part(&o.text)
        })
        .collect()
}

fn main() {
    let mut failures = 0;
    let mut payloads = Vec::new();
    let report = |n: u32, name: &str, pass: bool, secs: f64, limit: Option<u64>, detail: &str| {
        let limit = limit.map_or("no limit".to_string(), |l| format!("limit {l}s"));
        println!(
            "criterion {n:>2} [{name}]: {} ({secs:.2}s, {limit}) - {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    };
    for (n, name, limit, run) in CRITERIA {
        let start = Instant::now();
        let v = in_pool(8, run);
        let secs = start.elapsed().as_secs_f64();
        let pass = v.pass && secs <= limit as f64;
        failures += usize::from(!pass);
        report(n, name, pass, secs, Some(limit), &v.detail);
        payloads.push(v.payload);
    }

    let start = Instant::now();
    let mut same = 0;
    for ((n, _, _, run), payload) in CRITERIA.iter().zip(&payloads) {
        let single = in_pool(1, run).payload;
        if single == *payload {
            same += 1;
        } else {
            println!("  criterion {n}: values differ between 1 and 8 threads");
        }
    }
    let (one, eight) = (cli_records("1"), cli_records("8"));
    let records_same = one.iter().zip(&eight).filter(|(a, b)| a == b).count();
    let pass = same == CRITERIA.len() && records_same == one.len();
    failures += usize::from(!pass);
    report(
        11,
        "determinism",
        pass,
        start.elapsed().as_secs_f64(),
        None,
        &format!(
            "criteria 1-10 values identical at 1 and 8 threads: {same}/10; CLI records byte-identical (wall_time_ms excluded) at --jobs 1 and --jobs 8: {records_same}/{}",
            one.len()
        ),
    );
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
