// Prints the pulse pair at the entry face as CSV on stdout, with the derived
// scalars (first-pass area, predicted storage depth) on stderr so the CSV can
// be piped straight into a plotting tool:
//
//   cargo run --example entry_pulses > entry.csv

use lambda_sim::{
    coupling_at_entry, first_pass_area, peak_entry_rabi, predict_peak_depth, probe_at_entry,
    GridSpec, PhysParams,
};

fn main() {
    let p = PhysParams::default();
    let g = GridSpec::default();

    eprintln!("probe peak        {} /tau", p.omega_p0_tau);
    eprintln!("coupling peak     {} /tau", p.omega_c0_tau);
    eprintln!("delayed pulse     {} x stronger, centred at t = {} tau", p.recur_ratio, p.recur_center);
    eprintln!("max total Rabi    {:.4} /tau", peak_entry_rabi(&p, &g));
    eprintln!("first-pass area   {:.4}", first_pass_area(&p));
    eprintln!("storage depth     {:.4} cm (predicted)", predict_peak_depth(&p));

    println!("t_over_tau,probe,coupling");
    let n = 1100;
    for i in 0..=n {
        let t = g.t_min + (g.t_max - g.t_min) * i as f64 / n as f64;
        let wp = probe_at_entry(t, &p).re;
        let wc = coupling_at_entry(t, &p).re;
        println!("{t:.4},{wp:.6e},{wc:.6e}");
    }
}
