//! Sanity checks of the small-scale fading sampler: unit mean power for any
//! Rician K, the Rayleigh = exponential-power identity, and the convergence
//! of strong-K Rician fading to the no-fading channel.
//!
//! ```text
//! cargo run --release --example fading_channels
//! ```

use v2xcalib::config::FadingKind;
use v2xcalib::phy::fading_gain_db;
use v2xcalib::rng::SimRng;

fn percentile(sorted: &[f64], p: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * p).round() as usize]
}

fn main() {
    let n = 200_000;
    let kinds = [
        FadingKind::Rayleigh,
        FadingKind::Rician { k_db: 2.45 },
        FadingKind::Rician { k_db: 3.36 },
        FadingKind::Rician { k_db: 8.0 },
        FadingKind::Rician { k_db: 20.0 },
        FadingKind::None,
    ];
    println!("{n} draws per channel\n");
    println!(
        "{:>16} {:>11} {:>10} {:>10} {:>10} {:>12}",
        "fading", "mean power", "p1", "p50", "p99", "P(<-10 dB)"
    );
    for kind in kinds {
        let mut rng = SimRng::from_seed(2024);
        let mut gains_db: Vec<f64> = (0..n).map(|_| fading_gain_db(kind, &mut rng)).collect();
        gains_db.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mean_linear =
            gains_db.iter().map(|g| 10f64.powf(g / 10.0)).sum::<f64>() / n as f64;
        let deep = gains_db.iter().filter(|&&g| g < -10.0).count() as f64 / n as f64;
        println!(
            "{:>16} {:>11.4} {:>8.2} dB {:>8.2} dB {:>8.2} dB {:>11.4}%",
            kind.to_string(),
            mean_linear,
            percentile(&gains_db, 0.01),
            percentile(&gains_db, 0.5),
            percentile(&gains_db, 0.99),
            deep * 100.0
        );
    }

    // Rayleigh power is Exp(1): compare a few empirical quantiles.
    let mut rng = SimRng::from_seed(7);
    let mut power: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(fading_gain_db(FadingKind::Rayleigh, &mut rng) / 10.0))
        .collect();
    power.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("\nRayleigh power quantiles vs Exp(1):");
    for p in [0.1, 0.5, 0.9, 0.99] {
        let expected = -(1.0 - p as f64).ln();
        println!(
            "  p{:<4} empirical {:.4}, exponential {:.4}",
            (p * 100.0) as u32,
            percentile(&power, p),
            expected
        );
    }
}
