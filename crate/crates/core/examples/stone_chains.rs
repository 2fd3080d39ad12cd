//! A Stone space given by a chain of finite sets: the Cantor-like space
//! with 1, 2 and 4 points at the first three levels.

use sheafdual::stone::{pullback_clopen, same_set, Clopen, LevelChain};

fn main() -> sheafdual::Result<()> {
    let chain = LevelChain::new(vec![1, 2, 4], vec![vec![0, 0], vec![0, 0, 1, 1]])?;
    for level in 0..chain.num_levels() {
        println!(
            "level {level}: {} clopens",
            chain.enumerate_clopens(level)?.len()
        );
    }

    let left = Clopen::new(&chain, 1, [0])?;
    let up = pullback_clopen(&chain, &left, 2)?;
    println!(
        "{:?} at level 1 pulls back to {:?} at level 2",
        left.points, up.points
    );
    println!("same set: {}", same_set(&chain, &left, &up)?);
    println!(
        "fibres of level 2 over level 0: {:?}",
        chain.fibre_partition(2, 0)?
    );
    Ok(())
}
