use num_bigint::BigInt;

use crate::error::Result;
use crate::mccheck::check_at;
use crate::model::{Pmc, Region, Spec};
use crate::polyalg::Valuation;
use crate::Rational;

/// Classified sample: the valuation and whether it satisfies the spec.
pub type Sample = (Valuation<Rational>, bool);

/// `k^dim` cell-centred grid points of `region`, enumerated with the first
/// parameter varying slowest, each model checked exactly.
pub fn sample_grid(pmc: &Pmc, spec: &Spec, region: &Region, k: usize) -> Result<Vec<Sample>> {
    pmc.check_region_dim(region)?;
    let dim = region.dim();
    let k = k.max(1);
    let count = k.checked_pow(dim as u32).expect("grid size overflow");
    let two_k = Rational::from_integer(BigInt::from(2 * k));
    let mut samples = Vec::with_capacity(count);
    for index in 0..count {
        let mut rest = index;
        let mut coords = vec![0usize; dim];
        for d in (0..dim).rev() {
            coords[d] = rest % k;
            rest /= k;
        }
        let values = coords
            .iter()
            .enumerate()
            .map(|(d, &i)| {
                let offset = Rational::from_integer(BigInt::from(2 * i + 1)) / &two_k;
                region.lower(d) + region.width(d) * offset
            })
            .collect();
        let v = Valuation::new(values);
        let ok = check_at(pmc, &v, spec)?;
        samples.push((v, ok));
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn grid_points_are_interior_and_ordered() {
        let pmc = Pmc::parse(
            "pmc\nparams x y\nstate a init\nstate b target\nstate c\n\
             trans a b : x*y\ntrans a c : 1 - x*y\ntrans b b : 1\ntrans c c : 1\n",
        )
        .unwrap();
        let r = Region::new(vec![(ratio(0, 1), ratio(1, 1)), (ratio(0, 1), ratio(1, 2))]).unwrap();
        let spec = Spec::parse("reach >= 0").unwrap();
        let s = sample_grid(&pmc, &spec, &r, 2).unwrap();
        let pts: Vec<Vec<Rational>> = s.iter().map(|(v, _)| v.values().to_vec()).collect();
        assert_eq!(
            pts,
            vec![
                vec![ratio(1, 4), ratio(1, 8)],
                vec![ratio(1, 4), ratio(3, 8)],
                vec![ratio(3, 4), ratio(1, 8)],
                vec![ratio(3, 4), ratio(3, 8)],
            ]
        );
        assert!(s.iter().all(|(_, ok)| *ok));
    }
}
