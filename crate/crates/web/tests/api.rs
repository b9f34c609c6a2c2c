use fkdv_web::{profile_value, spectrum_value, trace_value};

#[test]
fn profile_is_aligned_bo_wave() {
    let v = profile_value(1.0, 0.5).unwrap();
    assert!((v["b"].as_f64().unwrap() - 1.5).abs() < 1e-8);
    let psi: Vec<f64> = serde_json::from_value(v["psi"].clone()).unwrap();
    let x: Vec<f64> = serde_json::from_value(v["x"].clone()).unwrap();
    assert_eq!(psi.len(), x.len());
    let (imax, _) = psi.iter().enumerate().fold((0, f64::MIN), |a, (i, &p)| if p > a.1 { (i, p) } else { a });
    assert!(x[imax].abs() < 1e-12);
    assert!(psi.iter().sum::<f64>().abs() < 1e-10);
}

#[test]
fn trace_reports_counts_and_verdicts() {
    let v = trace_value(0.55, -0.95, -0.6).unwrap();
    assert!(v["abort"].is_null());
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts[0]["n_neg"], 2);
    assert_eq!(pts.last().unwrap()["n_neg"], 1);
    assert!(pts.iter().all(|p| p["verdict"] == "stable"));
    assert!(trace_value(1.0, -0.9, 10.0).is_err());
    assert!(trace_value(0.2, -0.9, 0.0).is_err());
}

#[test]
fn spectrum_of_stable_wave_is_imaginary() {
    let v = spectrum_value(2.0, 0.0, 10).unwrap();
    let re: Vec<f64> = serde_json::from_value(v["re"].clone()).unwrap();
    assert_eq!(re.len(), 10);
    assert!(re.iter().all(|r| r.abs() < 1e-6));
    assert!(spectrum_value(1.0, -1.5, 10).is_err());
}
