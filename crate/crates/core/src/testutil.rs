//! Small algebras shared by unit tests.

use crate::algebra::Presented;
use crate::field::Fp;
use crate::groebner::GroebnerBounds;
use crate::quiver::{Arrow, Quiver, QuiverPresentation};

pub fn field() -> Fp {
    Fp::new(32003).unwrap()
}

/// Linearly oriented `A_n`, arrows in degree `deg`, optionally modulo
/// the square of the radical.
pub fn linear(n: usize, rad2: bool, deg: i32) -> Presented {
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    let arrows = (0..n - 1)
        .map(|i| Arrow { name: format!("a{}", i + 1), src: i, tgt: i + 1, degree: deg })
        .collect();
    let rels = if rad2 { (0..n.saturating_sub(2)).map(|i| vec![(1, vec![i, i + 1])]).collect() } else { vec![] };
    let pres = QuiverPresentation::new(field(), Quiver::new(vertices, arrows).unwrap(), rels).unwrap();
    Presented::new(&pres, GroebnerBounds::default()).unwrap()
}
