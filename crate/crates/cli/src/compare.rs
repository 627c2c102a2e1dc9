//! Side-by-side comparison of two runs' fidelity and cost aggregates.

use crate::run::RunMetrics;

fn opt(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.6}"),
        None => "-".into(),
    }
}

fn gammas(v: &[f64]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        format!("[{}]", v.iter().map(|g| format!("{g:.6}")).collect::<Vec<_>>().join(", "))
    }
}

pub fn render(a: &RunMetrics, b: &RunMetrics) -> String {
    let mut rows: Vec<(String, String, String)> = vec![
        ("mode".into(), a.mode.clone(), b.mode.clone()),
        ("fidelity".into(), opt(a.fidelity), opt(b.fidelity)),
        ("active duration".into(), opt(a.active_duration), opt(b.active_duration)),
        ("peak gamma magnitude".into(), opt(a.max_abs_gamma), opt(b.max_abs_gamma)),
    ];
    let sites = a.per_site_gain_integrals.len().max(b.per_site_gain_integrals.len());
    for i in 0..sites {
        rows.push((
            format!("gain integral, site {i}"),
            opt(a.per_site_gain_integrals.get(i).copied()),
            opt(b.per_site_gain_integrals.get(i).copied()),
        ));
    }
    rows.push((
        "sigma-gamma integral".into(),
        opt(a.sigma_gamma_integral),
        opt(b.sigma_gamma_integral),
    ));
    rows.push((
        "sum abs gain integrals".into(),
        opt(a.sum_abs_gain_integrals),
        opt(b.sum_abs_gain_integrals),
    ));
    let segs = a.segment_gammas.len().max(b.segment_gammas.len());
    for i in 0..segs {
        rows.push((
            format!("segment {i} site gammas"),
            a.segment_gammas.get(i).map(|v| gammas(v)).unwrap_or_else(|| "-".into()),
            b.segment_gammas.get(i).map(|v| gammas(v)).unwrap_or_else(|| "-".into()),
        ));
    }

    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("metric".len());
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(1);
    let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(1);
    let mut out = format!("{:w0$} | {:>w1$} | {:>w2$}\n", "metric", "A", "B");
    out.push_str(&format!("{}-+-{}-+-{}\n", "-".repeat(w0), "-".repeat(w1), "-".repeat(w2)));
    for (label, va, vb) in rows {
        out.push_str(&format!("{label:w0$} | {va:>w1$} | {vb:>w2$}\n"));
    }
    out
}
