//! Two rounds of CHSH played in parallel are won with probability 5/8,
//! more than the 9/16 of two independent rounds.

use nlgames::games::{asymptotic_sequence, power_game, value, FiniteGame, ValueOptions, ValueType};

fn main() -> nlgames::Result<()> {
    let chsh = FiniteGame::chsh();
    let opts = ValueOptions::default();

    let twice = power_game(&chsh, 2)?;
    let one = value(&chsh, ValueType::Local, &opts)?.value;
    let two = value(&twice, ValueType::Local, &opts)?;
    println!("w_loc(CHSH)        = {one}");
    println!("w_loc(CHSH x CHSH) = {}  vs  {}", two.value, one * one);
    println!("{}", two.summary());

    let seq = asymptotic_sequence(&chsh, ValueType::Local, 3, &opts)?;
    println!("\n  n  w_loc(CHSH^n)^(1/n)");
    for e in &seq.entries {
        println!("{:>3}  {:.6}", e.n, e.normalized);
    }
    println!("supermultiplicativity gap {:.3e}", seq.supermultiplicativity_gap());
    Ok(())
}
