//! Dualizing an étale system gives a profinite one: sums of duals pair
//! perfectly with products of the original fibres.

use sheafdual::dualbridge::{
    dual_etale_to_prosheaf, fibre_duality_check, square_commutes_check, sum_product_duality_check,
};
use sheafdual::finab::FinAbGroup;
use sheafdual::ringmod::{FinModule, FiniteRing, ModHom, Side};
use sheafdual::sheafside::EtaleSystem;
use sheafdual::stone::LevelChain;

fn main() -> sheafdual::Result<()> {
    let ring = FiniteRing::cyclic(4)?;
    let z2 = FinModule::over_cyclic(&ring, FinAbGroup::cyclic(2), Side::Left)?;
    let z4 = FinModule::over_cyclic(&ring, FinAbGroup::cyclic(4), Side::Left)?;
    let chain = LevelChain::two_level(1, vec![0, 0])?;
    let doubling = ModHom::new(
        z2.clone(),
        z4.clone(),
        sheafdual::finab::AbHom::from_images(
            FinAbGroup::cyclic(2),
            FinAbGroup::cyclic(4),
            &[vec![2]],
        )?,
    )?;
    let e = EtaleSystem::new(
        chain,
        ring,
        Side::Left,
        vec![vec![z2.clone()], vec![z4, z2.clone()]],
        vec![vec![doubling, ModHom::identity(&z2)]],
    )?;

    let dual = dual_etale_to_prosheaf(&e);
    println!(
        "dual top fibres: {:?}",
        dual.fibres(1)
            .iter()
            .map(|m| m.group().factors().to_vec())
            .collect::<Vec<_>>()
    );

    let w = sum_product_duality_check(&e)?;
    for l in &w.levels {
        println!(
            "level {}: pairing nondegenerate {}",
            l.level,
            l.table.is_nondegenerate()
        );
    }
    println!("sum/product duality: {}", w.holds);
    println!("double dual: {}", fibre_duality_check(&e)?.holds);
    println!("duality square: {}", square_commutes_check(&e, 0)?.holds);
    Ok(())
}
