//! States toolbox: the generalized Bell family, fidelity identities, and
//! nearest-product-state extraction.

use qma_forge::states::{
    bell_state, density_of, fidelity, haar_random_pure, is_maximally_entangled,
    nearest_product_state, random_density,
};
use qma_forge::linalg::{tensor, RegisterLayout};

fn main() -> qma_forge::Result<()> {
    // The d^2 generalized Bell states are orthonormal and maximally entangled.
    let d = 4;
    let mut worst_overlap: f64 = 0.0;
    for k in 1..=d {
        for l in 1..=d {
            let g = bell_state(d, k, l)?;
            assert!(is_maximally_entangled(&g, &["a"], 1e-9)?);
            for k2 in 1..=d {
                for l2 in 1..=d {
                    if (k, l) == (k2, l2) {
                        continue;
                    }
                    let h = bell_state(d, k2, l2)?;
                    worst_overlap = worst_overlap.max(g.inner(&h)?.norm());
                }
            }
        }
    }
    println!("d={d} Bell family: worst cross overlap {worst_overlap:.3e}");

    // Fidelity is multiplicative over tensor products.
    let layout = RegisterLayout::single("r", 1)?;
    let joint = RegisterLayout::new(vec![("x".into(), 1), ("y".into(), 1)])?;
    let r1 = random_density(&layout, 2, 1)?;
    let s1 = random_density(&layout, 2, 2)?;
    let r2 = random_density(&layout, 1, 3)?;
    let s2 = random_density(&layout, 2, 4)?;
    let lhs = fidelity(
        &qma_forge::states::DensityOperator::new(joint.clone(), tensor(r1.matrix(), r2.matrix())?)?,
        &qma_forge::states::DensityOperator::new(joint, tensor(s1.matrix(), s2.matrix())?)?,
    )?;
    let rhs = fidelity(&r1, &s1)? * fidelity(&r2, &s2)?;
    println!("product rule: {lhs:.12} vs {rhs:.12}");

    // Nearest product state of a Bell state achieves the 1/sqrt(d) floor.
    let g = bell_state(2, 2, 2)?;
    let (closest, value) = nearest_product_state(&g, &["a"])?;
    println!("Bell state: best product fidelity {value:.12} (1/sqrt(2) = {:.12})", 0.5f64.sqrt());
    println!("closest product state norm: {:.12}", density_of(&closest).matrix().trace().re);

    // A random state sits strictly above the floor.
    let pair = RegisterLayout::new(vec![("a".into(), 1), ("b".into(), 1)])?;
    let psi = haar_random_pure(&pair, 9)?;
    let (_, value) = nearest_product_state(&psi, &["a"])?;
    println!("random 2-qubit state: best product fidelity {value:.6}");
    Ok(())
}
