//! Local, no-signalling and quantum values of the CHSH game.

use nlgames::games::{payoff, value, FiniteGame, ValueOptions, ValueType};

fn main() -> nlgames::Result<()> {
    let chsh = FiniteGame::chsh();
    let opts = ValueOptions::default();

    for kind in [ValueType::Local, ValueType::NoSignalling, ValueType::QuantumLowerBound] {
        let report = value(&chsh, kind, &opts)?;
        let check = payoff(&chsh, &report.certificate.correlation(&chsh)?)?;
        println!(
            "{:<3} {:.10}  certificate payoff {:.10}  ({})",
            kind.tag(),
            report.value,
            check,
            report.summary()
        );
    }
    println!("cos^2(pi/8) = {:.10}", (std::f64::consts::PI / 8.0).cos().powi(2));
    Ok(())
}
