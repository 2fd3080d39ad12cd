//! Characters of a finite abelian group with values in Q/Z.

use sheafdual::finab::{
    double_dual_check, dual_group, dual_hom, evaluation_map, pairing, AbHom, FinAbGroup,
};

fn main() -> sheafdual::Result<()> {
    let a = FinAbGroup::new(vec![2, 4])?;
    let dual = dual_group(&a);
    println!("A = {:?}, dual = {:?}", a.factors(), dual.factors());

    for chi in dual.elements().take(4) {
        let values: Vec<String> = a
            .elements()
            .map(|x| {
                let v = pairing(&a, &chi, &x);
                format!("{}/{}", v.numerator(), v.denominator())
            })
            .collect();
        println!("  chi = {chi:?}: {}", values.join(" "));
    }

    let ev = evaluation_map(&a);
    println!("evaluation A -> A^^ bijective: {}", ev.is_bijective());
    assert!(double_dual_check(&a));

    // the inclusion Z/2 -> Z/4 dualizes to the restriction Z/4 -> Z/2
    let incl = AbHom::from_images(FinAbGroup::cyclic(2), FinAbGroup::cyclic(4), &[vec![2]])?;
    let res = dual_hom(&incl);
    println!(
        "dual of Z/2 -> Z/4 is {:?} -> {:?}, surjective: {}",
        res.source().factors(),
        res.target().factors(),
        res.is_surjective()
    );
    Ok(())
}
