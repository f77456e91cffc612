//! Exact local value by enumerating one player's deterministic strategies
//! and best-responding for the other.

use rayon::prelude::*;

use crate::correlations::decode_strategy;
use crate::error::{Error, Result};
use crate::games::FiniteGame;

/// Largest number of deterministic strategies enumerated on one side.
pub const ENUMERATION_CAP: f64 = 1e8;

/// A deterministic strategy pair `a = f(x)`, `b = g(y)` with its payoff.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterministicStrategy {
    pub value: f64,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// Best deterministic strategy; ties go to the lowest enumeration index
/// (first input most significant).
pub fn local_value(g: &FiniteGame) -> Result<DeterministicStrategy> {
    Ok(top_deterministic(g, 1)?.remove(0))
}

/// The `k` best deterministic strategies on the enumerated side, each paired
/// with its best response, in decreasing order of value.
pub fn top_deterministic(g: &FiniteGame, k: usize) -> Result<Vec<DeterministicStrategy>> {
    let (nx, ny, na, nb) = g.shape();
    let fa = (na as f64).powi(nx as i32);
    let fb = (nb as f64).powi(ny as i32);
    if fa.min(fb) > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            what: "deterministic strategies",
            size: fa.min(fb),
            cap: ENUMERATION_CAP,
        });
    }
    let k = k.max(1);
    if fb < fa {
        let t = g.transposed();
        return Ok(enumerate(&t, k)
            .into_iter()
            .map(|s| DeterministicStrategy {
                value: s.value,
                alice: s.bob,
                bob: s.alice,
            })
            .collect());
    }
    Ok(enumerate(g, k))
}

/// Keeps the `k` best `(value, index)` pairs, value descending then index
/// ascending.
fn insert_top(top: &mut Vec<(f64, usize)>, k: usize, cand: (f64, usize)) {
    let better = |a: &(f64, usize), b: &(f64, usize)| a.0 > b.0 || (a.0 == b.0 && a.1 < b.1);
    if top.len() == k && !better(&cand, top.last().unwrap()) {
        return;
    }
    let pos = top.iter().position(|t| better(&cand, t)).unwrap_or(top.len());
    top.insert(pos, cand);
    top.truncate(k);
}

fn best_response(score: &[f64], ny: usize, nb: usize) -> (f64, Vec<usize>) {
    let mut total = 0.0;
    let mut g = Vec::with_capacity(ny);
    for y in 0..ny {
        let row = &score[y * nb..(y + 1) * nb];
        let mut best = 0;
        for b in 1..nb {
            if row[b] > row[best] {
                best = b;
            }
        }
        total += row[best];
        g.push(best);
    }
    (total, g)
}

fn enumerate(g: &FiniteGame, k: usize) -> Vec<DeterministicStrategy> {
    let (nx, ny, na, nb) = g.shape();
    let stride = ny * nb;
    // weights[(x * na + a) * stride + y * nb + b] = π₀(x,y) λ(x,y,a,b)
    let mut weights = vec![0.0; nx * na * stride];
    for x in 0..nx {
        for a in 0..na {
            for y in 0..ny {
                for b in 0..nb {
                    if g.wins(x, y, a, b) {
                        weights[(x * na + a) * stride + y * nb + b] = g.prob(x, y);
                    }
                }
            }
        }
    }
    let total = na.pow(nx as u32);
    let mut prefix_len = 0;
    while prefix_len < nx && na.pow(prefix_len as u32) < 256 {
        prefix_len += 1;
    }
    let chunks = na.pow(prefix_len as u32);
    let suffix_count = total / chunks;

    let mut top: Vec<(f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut top = Vec::with_capacity(k + 1);
            let mut f = vec![0usize; nx];
            let head = decode_strategy(chunk, prefix_len, na);
            f[..prefix_len].copy_from_slice(&head);
            // partial[l] = sum over x < l of the weight rows chosen by f;
            // always accumulated in increasing x so sums are path independent.
            let mut partial = vec![0.0; (nx + 1) * stride];
            let fill = |partial: &mut [f64], f: &[usize], from: usize| {
                for l in from..nx {
                    let (lo, hi) = partial.split_at_mut((l + 1) * stride);
                    let src = &lo[l * stride..];
                    let w = &weights[(l * na + f[l]) * stride..(l * na + f[l] + 1) * stride];
                    for ((d, s), w) in hi[..stride].iter_mut().zip(src).zip(w) {
                        *d = s + w;
                    }
                }
            };
            fill(&mut partial, &f, 0);
            for step in 0..suffix_count {
                let idx = chunk * suffix_count + step;
                let score = &partial[nx * stride..];
                let mut value = 0.0;
                for y in 0..ny {
                    value += score[y * nb..(y + 1) * nb]
                        .iter()
                        .copied()
                        .fold(f64::NEG_INFINITY, f64::max);
                }
                insert_top(&mut top, k, (value, idx));
                // Odometer over the suffix digits.
                let mut pos = nx;
                while pos > prefix_len {
                    pos -= 1;
                    f[pos] += 1;
                    if f[pos] < na {
                        break;
                    }
                    f[pos] = 0;
                }
                if step + 1 < suffix_count {
                    fill(&mut partial, &f, pos);
                }
            }
            top
        })
        .reduce(Vec::new, |mut a, b| {
            for cand in b {
                insert_top(&mut a, k, cand);
            }
            a
        });
    top.truncate(k);

    top.into_iter()
        .map(|(value, idx)| {
            let alice = decode_strategy(idx, nx, na);
            let mut score = vec![0.0; stride];
            for (x, &a) in alice.iter().enumerate() {
                for (s, w) in score.iter_mut().zip(&weights[(x * na + a) * stride..]) {
                    *s += w;
                }
            }
            let (_, bob) = best_response(&score, ny, nb);
            DeterministicStrategy { value, alice, bob }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chsh_local_value() {
        let s = local_value(&FiniteGame::chsh()).unwrap();
        assert_eq!(s.value, 0.75);
        assert_eq!(s.alice, vec![0, 0]);
        assert_eq!(s.bob, vec![0, 0]);
    }

    #[test]
    fn trivial_games() {
        assert_eq!(local_value(&FiniteGame::all_win(3, 2, 2, 3)).unwrap().value, 1.0);
        assert_eq!(local_value(&FiniteGame::never_win(3, 2, 2, 3)).unwrap().value, 0.0);
    }

    #[test]
    fn top_list_is_sorted_and_distinct() {
        let top = top_deterministic(&FiniteGame::chsh(), 5).unwrap();
        assert_eq!(top.len(), 4);
        assert!(top.windows(2).all(|w| w[0].value >= w[1].value));
        assert!(top.iter().all(|s| s.value == 0.75));
        assert_ne!(top[0].alice, top[1].alice);
    }

    #[test]
    fn transposed_side_is_enumerated_when_smaller() {
        // Alice has 3^4 strategies, Bob 2^1.
        let g = FiniteGame::from_fn(4, 1, 3, 2, FiniteGame::uniform_dist(4, 1), |x, _, a, b| {
            (x + a + b) % 2 == 0
        })
        .unwrap();
        let s = local_value(&g).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.alice.len(), 4);
        assert_eq!(s.bob.len(), 1);
    }
}
