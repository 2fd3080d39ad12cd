use sheafdual::cohomtree::{mayer_vietoris_check, tree_ses, Tree, TreeAction};
use sheafdual::finab::FinAbGroup;
use sheafdual::ringmod::{FinGroup, FinModule, FiniteRing, Side};

fn main() -> sheafdual::Result<()> {
    // C2 fixes the centre of a two-leaf star and swaps the leaves
    let c2 = FinGroup::cyclic(2);
    let star = Tree::star(2)?;
    let ta = TreeAction::new(c2.clone(), star, vec![vec![0, 1, 2], vec![0, 2, 1]])?;
    let ring = FiniteRing::group_ring(2, &c2)?;
    let a = FinModule::trivial_action(&ring, FinAbGroup::cyclic(2), Side::Left)?;

    let report = mayer_vietoris_check(2, &ta, &a, 2)?;
    for term in &report.terms {
        println!("{:>18} = {:?}", term.label, term.group.factors());
    }
    println!("exact everywhere: {}", report.exact);
    for c in &report.identifications {
        println!("  {}: {}", c.name, c.holds);
    }

    let triangle = Tree::from_graph(3, vec![(0, 1), (1, 2), (2, 0)])?;
    let cyclic = TreeAction::trivial(FinGroup::trivial(), triangle)?;
    match tree_ses(2, &cyclic) {
        Ok(_) => println!("the triangle was accepted"),
        Err(e) => println!("the triangle is rejected: {e}"),
    }
    Ok(())
}
