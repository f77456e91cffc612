//! A game with memory: CHSH played on a sliding window of two rounds, won
//! when either round is won. Its iterates beat independent repetition.

use nlgames::games::{asymptotic_sequence, inner_value_sequence, memory_game, FiniteGame, ValueOptions, ValueType};

fn main() -> nlgames::Result<()> {
    let chsh = FiniteGame::chsh();
    let opts = ValueOptions::default();
    let n_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);

    let iid = asymptotic_sequence(&chsh, ValueType::Local, n_max, &opts)?;
    let mem = inner_value_sequence(&memory_game(&chsh), ValueType::Local, n_max, &opts)?;

    println!("  n       iid    memory   running max");
    for (a, b) in iid.entries.iter().zip(&mem.entries) {
        println!(
            "{:>3}  {:.6}  {:.6}  {:.6}",
            a.n, a.normalized, b.normalized, b.running_max
        );
    }
    if mem.truncated {
        println!("memory sequence truncated by the enumeration cap");
    }
    Ok(())
}
