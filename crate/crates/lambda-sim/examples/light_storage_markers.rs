// The closed-form side of light storage: when does the regenerated probe
// cross a given depth, how strong must the readout pulse be to centre it
// there, and how tall and wide will it be.
//
// All of it comes from inverting the accumulated entry flux v(t) against the
// absorption depth u(z), no grid solution required.

use lambda_sim::{
    build_characteristic_table, first_pass_area, matched_r, predict_peak_depth, predicted_fwhm,
    recurrence_markers, regenerated_peak, GridSpec, MarkerPhase, PhysParams,
};

fn fmt(m: Option<lambda_sim::TimeMarker>) -> String {
    match m {
        Some(tm) => match tm.phase {
            MarkerPhase::Recurrence => format!("{:8.4}", tm.time),
            MarkerPhase::FirstPass => format!("{:8.4}*", tm.time),
        },
        None => "  absent".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PhysParams::default();
    // The table only needs the time window; depths are free parameters here.
    let g = GridSpec {
        n_t: 8192,
        ..GridSpec::default()
    };
    let table = build_characteristic_table(&p, &g)?;

    println!("first-pass area     {:.4}", first_pass_area(&p));
    println!("storage depth       {:.4} cm", predict_peak_depth(&p));
    println!("window total v      {:.4}", table.v_infinity);
    println!();
    println!("  z_cm      t_r1      t_rm      t_r2   (* = still in first pass)");
    for z_m in [1.0, 3.0, 10.0, 30.0, 47.72, 60.0, 95.0] {
        let mk = recurrence_markers(&p, z_m, &table)?;
        println!(
            "{z_m:6.2}  {}  {}  {}",
            fmt(mk.t_r1),
            fmt(mk.t_rm),
            fmt(mk.t_r2)
        );
    }

    println!();
    let z_m = 10.0;
    let r_star = matched_r(&p, z_m)?;
    let p_star = PhysParams {
        recur_ratio: r_star,
        ..p
    };
    let mk = recurrence_markers(&p_star, z_m, &build_characteristic_table(&p_star, &g)?)?;
    println!("matched readout for z_m = {z_m} cm: R = {r_star:.4}");
    println!("  regenerated peak  {:.4} /tau", regenerated_peak(&p_star, &mk)?.norm());
    println!("  estimated width   {:.4} tau", predicted_fwhm(&p_star)?);
    Ok(())
}
