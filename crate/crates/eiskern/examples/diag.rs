use eiskern::cx::C64;
use eiskern::kernel::{convention_probe, verify_identity, Cutoffs};
use eiskern::lfunc::LStarConvention;

fn main() {
    let points = [
        (C64::new(5.5, 0.5), C64::new(-0.75, 0.25)),
        (C64::new(6.2, -0.3), C64::new(-0.5, 0.0)),
        (C64::new(4.8, 0.0), C64::new(-1.2, 0.4)),
    ];
    let cut = Cutoffs { ac_init: 8, n_init: 32, rel_tol: 1e-7, max_doublings: 5 };
    let probe = convention_probe(12, &points, &cut).unwrap();
    println!(
        "probe k=12: minus={:.3e} plus={:.3e} preferred={:?}",
        probe.minus_max_rel_error, probe.plus_max_rel_error, probe.preferred
    );
    let rep = verify_identity(12, &points[..1], &[1, 2, 3], LStarConvention::TwoPiMinus, &cut).unwrap();
    for row in &rep.rows {
        println!(
            "m={} fourier={:?} spectral={:?} rel={:?}",
            row.m, row.fourier_completed, row.spectral, row.rel_error
        );
    }
}
