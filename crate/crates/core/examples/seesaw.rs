//! See-saw lower bounds on quantum values, with the objective history of the
//! winning seed.

use nlgames::games::FiniteGame;
use nlgames::optimize::qs_seesaw;

fn main() -> nlgames::Result<()> {
    // "Different answers iff both questions are 1" with three questions each.
    let g = FiniteGame::from_fn(3, 3, 2, 2, FiniteGame::uniform_dist(3, 3), |x, y, a, b| {
        ((a ^ b) == 1) == (x == 1 && y == 1)
    })?;
    for d in [1, 2, 3] {
        let s = qs_seesaw(&g, d, 10, 200, 42)?;
        println!(
            "d = {d}: {:.8} after {} sweeps (seed {})",
            s.objective,
            s.history.len() - 1,
            s.seed_index
        );
    }
    let s = qs_seesaw(&FiniteGame::chsh(), 2, 4, 200, 0)?;
    let hist: Vec<String> = s.history.iter().map(|v| format!("{v:.6}")).collect();
    println!("CHSH history: {}", hist.join(" -> "));
    Ok(())
}
