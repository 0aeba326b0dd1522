use anglelab::constructions::BaseSet;
use anglelab::geometry::{apex_angle_count, ApexMode, PointSet};
use anglelab::constructions::cartesian_product;
use anglelab::pipeline::{exponent_fit, run_pipeline, split_b};
use anglelab::sumset::ComboOptions;

#[test]
fn cross_module_signed_count() {
    let b = BaseSet::ints(&[1, 2, 4, 8]);
    let r = run_pipeline(&b, &ComboOptions::default()).unwrap();
    let s = split_b(&b).unwrap();
    let q = cartesian_product(&s.b2).unwrap();
    let with_apex = q.union(&PointSet::new(vec![r.apex.clone()]).unwrap());
    let count = apex_angle_count(&with_apex, &r.apex, ApexMode::default()).unwrap();
    assert_eq!(r.apex_signed_angle_count, count as u64);
    assert_eq!(r.ratio_set_size, r.direction_count);
}

#[test]
fn report_is_reproducible() {
    let b = BaseSet::ints(&[1, 3, 4, 7, 9, 10]);
    let a = serde_json::to_string(&run_pipeline(&b, &ComboOptions::default()).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| serde_json::to_string(&run_pipeline(&b, &ComboOptions::default()).unwrap()).unwrap());
    assert_eq!(a, c);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(v["chain"].as_array().unwrap().len() >= 5);
}

#[test]
fn odd_base_drops_median() {
    let r = run_pipeline(&BaseSet::ints(&[1, 2, 3, 4, 5]), &ComboOptions::default()).unwrap();
    assert_eq!(r.split.b1.len(), 2);
    assert!(r.invariant_size && r.invariant_cross_module);
}

#[test]
fn fit_on_grid_counts_is_superquadratic() {
    use anglelab::geometry::distinct_angle_count;
    use anglelab::Rational;
    let recs: Vec<(u64, u64)> = [3u64, 4, 5, 6]
        .iter()
        .map(|&n| {
            let b = BaseSet::explicit((1..=n as i64).map(Rational::from));
            (n, distinct_angle_count(&cartesian_product(&b).unwrap()).unwrap().0 as u64)
        })
        .collect();
    assert!(exponent_fit(&recs).unwrap() > 2.0, "{recs:?}");
}
