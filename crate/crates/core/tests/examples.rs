// Every example is compiled into this test binary and run once.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(gen_rule);
example!(hyperinterpolation);
example!(regularized_fit);
example!(filtered_approx);
example!(operator_norm);
example!(balancing);
example!(kernel_search);
example!(sgg_study);
example!(franke_study);
example!(kernel_study);

#[test]
fn gen_rule_example() {
    let (n, defect) = gen_rule::run_example().unwrap();
    assert_eq!(n, 1922);
    assert!(defect < 1e-10);
}

#[test]
fn hyperinterpolation_example() {
    assert!(hyperinterpolation::run_example().unwrap() < 1e-10);
}

#[test]
fn regularized_fit_example() {
    assert!(regularized_fit::run_example().unwrap() < 1e-10);
}

#[test]
fn filtered_approx_example() {
    let f = filtered_approx::run_example().unwrap();
    assert_eq!(&f[..5], &[1.0; 5]);
    assert!((f[6] - 0.5).abs() < 1e-15);
    assert_eq!(f[8], 0.0);
}

#[test]
fn operator_norm_example() {
    for (alpha, grid, termwise, crude) in operator_norm::run_example().unwrap() {
        assert!(grid <= termwise + 1e-12 && termwise <= crude + 1e-9, "alpha {alpha}");
        if alpha == 0.0 {
            assert!(grid >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn balancing_example() {
    let outcomes = balancing::run_example().unwrap();
    // heavier norm bounds raise the threshold and so the chosen alpha
    assert!(outcomes[0].alpha_star <= outcomes[1].alpha_star);
    assert!(outcomes[1].alpha_star <= outcomes[2].alpha_star);
}

#[test]
fn kernel_search_example() {
    let r = kernel_search::run_example().unwrap();
    assert_eq!(r.per_run.len(), 4);
    assert!((0.0..=5.0).contains(&r.best.lambda1) && (0.0..=5.0).contains(&r.best.lambda2));
}

#[test]
fn sgg_study_example() {
    let out = sgg_study::run_example().unwrap();
    assert_eq!(out.curves.len(), 32);
    assert!(out.median("sgg_best").unwrap() <= out.median("sgg_bp").unwrap());
}

#[test]
fn franke_study_example() {
    let out = franke_study::run_example().unwrap();
    assert!(out.summary["sup_error"] < out.summary["noisy_sup_error"]);
}

#[test]
fn kernel_study_example() {
    let out = kernel_study::run_example().unwrap();
    assert_eq!(out.reports.len(), 12);
    assert!(out.kernel_search.is_some());
}
