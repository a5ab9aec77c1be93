use magnowork::harness::{format_csv, preset, run_sweep, run_sweep_serial, FigureTag, SweepRow};
use magnowork::model::SystemParams;

fn rows(tag: FigureTag) -> Vec<SweepRow> {
    run_sweep(&preset(tag, SystemParams::default())).unwrap()
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] - 1e-12)
}

#[test]
fn temperature_sweep_shape() {
    let rows = rows(FigureTag::Temp);
    let e_n: Vec<f64> = rows.iter().map(|r| r.e_n.unwrap()).collect();
    assert!(e_n.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(e_n[0] > 0.0 && *e_n.last().unwrap() == 0.0);

    let warm: Vec<&SweepRow> = rows.iter().filter(|r| r.sweep_value > 0.05).collect();
    let column = |f: fn(&SweepRow) -> Option<f64>| warm.iter().map(|r| f(r).unwrap()).collect::<Vec<_>>();
    for (name, col) in [
        ("w_hom", column(|r| r.w_hom)),
        ("w_sep_hom", column(|r| r.w_sep_hom)),
        ("w_max_hom", column(|r| r.w_max_hom)),
        ("w_het", column(|r| r.w_het)),
        ("w_sep_het", column(|r| r.w_sep_het)),
        ("w_max_het", column(|r| r.w_max_het)),
    ] {
        assert!(non_decreasing(&col), "{name} decreases: {col:?}");
    }
}

#[test]
fn coupling_sweep_starts_uncorrelated() {
    let rows = rows(FigureTag::Coupling);
    let first = rows[0];
    assert_eq!(first.sweep_value, 0.0);
    assert!(first.e_n.unwrap() < 1e-12);
    // Without photon-magnon coupling the photon stays in vacuum, so neither
    // scheme has anything to extract.
    assert!(first.w_max_het.unwrap().abs() < 1e-12);
    assert!(first.w_max_hom.unwrap().abs() < 1e-12);
    assert!(rows.iter().any(|r| r.e_n.unwrap_or(0.0) > 0.0));
}

#[test]
fn double_measurement_columns() {
    for r in rows(FigureTag::DoubleMeas) {
        assert!(r.w_00.unwrap() <= r.w_hom.unwrap() + 1e-12);
        assert!(r.w_11.unwrap() <= r.w_het.unwrap() + 1e-12);
    }
}

#[test]
fn detuning_sweep_peaks_inside_the_range() {
    let rows = rows(FigureTag::Detuning);
    let best = rows
        .iter()
        .filter(|r| r.stable_flag)
        .max_by(|a, b| a.e_n.unwrap().total_cmp(&b.e_n.unwrap()))
        .unwrap();
    assert!(best.e_n.unwrap() > 0.0);
    assert!(best.sweep_value > -2.0 && best.sweep_value < 2.0);
}

#[test]
fn sweeps_are_deterministic_and_order_independent() {
    for tag in [FigureTag::Temp, FigureTag::Time] {
        let config = preset(tag, SystemParams::default());
        let a = format_csv(&run_sweep(&config).unwrap());
        let b = format_csv(&run_sweep(&config).unwrap());
        let c = format_csv(&run_sweep_serial(&config).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
