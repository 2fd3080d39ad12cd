use sheafdual::finab::{smith_normal_form, AbHom, FinAbGroup, IntMatrix};

fn main() -> sheafdual::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("M = {:?}", m.to_rows());
    println!("D = diag{:?}", snf.diagonal());
    assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    println!(
        "det U = {}, det V = {}",
        snf.u.determinant(),
        snf.v.determinant()
    );

    // Z/4 x Z/6 is not in invariant-factor form; normalizing gives (2, 12)
    let n = FinAbGroup::normalize(&[4, 6]);
    println!("Z/4 x Z/6 = {:?}", n.group.factors());

    let g = FinAbGroup::new(vec![2, 12])?;
    let double = AbHom::identity(g.clone()).scale(2);
    println!(
        "multiplication by 2 on {:?}: kernel {:?}, image {:?}, cokernel {:?}",
        g.factors(),
        double.kernel().group.factors(),
        double.image().group.factors(),
        double.cokernel().group.factors()
    );
    Ok(())
}
