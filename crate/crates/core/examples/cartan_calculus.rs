//! Brackets, Jacobians and the Cartan calculus on the formal disk.

use gfcohom::calculus::{gl_embedding, jacobian, FormalForm, FormalVectorField, MonomialField, MultiIndex};
use gfcohom::linalg::{rat, rational_to_string};

fn field(terms: &[(&[u32], usize, i64)]) -> FormalVectorField {
    let mut x = FormalVectorField::zero(2);
    for (e, i, c) in terms {
        x.add_term(MonomialField::new(MultiIndex(e.to_vec()), *i), rat(*c));
    }
    x
}

fn main() -> gfcohom::Result<()> {
    let x = field(&[(&[2, 0], 0, 1), (&[0, 1], 1, 3)]);
    let y = field(&[(&[1, 1], 1, 1), (&[0, 0], 0, -2)]);
    println!("X = {x}\nY = {y}\n[X, Y] = {}", x.bracket(&y)?);

    let j = jacobian(&x, 3);
    println!("Tr J(X) = {}", j.trace());
    // J(0) is the gl(n) part of a field; gl_embedding is its linear inverse.
    let z = x.add(&field(&[(&[1, 0], 1, 5), (&[0, 1], 0, -1)]))?;
    let at_zero = jacobian(&z, 1).at_zero();
    let rows: Vec<String> = at_zero
        .iter()
        .map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>().join(" "))
        .collect();
    println!("J(Z)(0) = [{}], as a linear field: {}", rows.join("; "), gl_embedding(&at_zero));

    // L_X = d i_X + i_X d on a 1-form.
    let w = FormalForm::term(MultiIndex(vec![1, 2]), 0b01, rat(1));
    let lie = w.lie_derivative(&x)?;
    let magic = w.contract(&x)?.de_rham().add(&w.de_rham().contract(&x)?);
    println!("L_X w = {lie}\nCartan formula holds: {}", lie == magic);
    Ok(())
}
