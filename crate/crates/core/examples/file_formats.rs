//! Writes the sample input files used by the command-line tool and reads
//! each one back.
//!
//! ```text
//! cargo run --example file_formats -- [output-dir]
//! ```

use std::path::PathBuf;

use nlgames::channels::{dump_povm, load_povm, Povm};
use nlgames::correlations::{dump_correlation, load_correlation, Correlation};
use nlgames::games::{dump_game, load_game, FiniteGame};
use nlgames::linalg::{kron, pauli_x, pauli_z, ComplexMatrix, HermitianOperator};

fn spectral(op: &HermitianOperator) -> Povm {
    let id = HermitianOperator::identity(op.dim());
    Povm::new(vec![id.add(op).scale(0.5), id.sub(op).scale(0.5)]).unwrap()
}

fn lift(p: &Povm, left: bool) -> Povm {
    let id = ComplexMatrix::identity(2);
    let effects = p
        .effects()
        .iter()
        .map(|e| {
            let m = if left {
                kron(e.matrix(), &id)
            } else {
                kron(&id, e.matrix())
            };
            HermitianOperator::new(m).unwrap()
        })
        .collect();
    Povm::new(effects).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args().nth(1).map_or_else(|| "data".into(), PathBuf::from);
    std::fs::create_dir_all(&dir)?;

    let files = [
        (
            "chsh.game",
            format!("# CHSH: win iff a XOR b = x AND y.\n{}", dump_game(&FiniteGame::chsh())),
        ),
        ("pr_box.corr", dump_correlation(&Correlation::pr_box())),
        ("trine.povm", dump_povm(&Povm::trine())),
        ("basis.povm", dump_povm(&Povm::computational_basis(3))),
        ("z_i.povm", dump_povm(&lift(&spectral(&pauli_z()), true))),
        ("i_x.povm", dump_povm(&lift(&spectral(&pauli_x()), false))),
    ];
    for (name, body) in &files {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        println!("wrote {}", path.display());
    }

    load_game(&files[0].1)?;
    load_correlation(&files[1].1)?;
    for (_, body) in &files[2..] {
        load_povm(body)?;
    }
    println!("all files parse back");
    Ok(())
}
