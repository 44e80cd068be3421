//! Curve combinatorics against a brute-force numerical-semigroup oracle.

use cyclic_sigma::young::YoungData;
use cyclic_sigma::{CurveSpec, C64};
use proptest::prelude::*;

fn model(r: u32, s: u32) -> CurveSpec {
    let mut lam = vec![C64::new(0.0, 0.0); s as usize];
    lam[s as usize - 1] = C64::new(-1.0, 0.0);
    CurveSpec::new(r, s, lam).unwrap()
}

fn in_semigroup(k: u32, r: u32, s: u32) -> bool {
    (0..=k / s).any(|b| (k - b * s).is_multiple_of(r))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaps_and_young_diagram(r in 2u32..4, s in 3u32..26) {
        prop_assume!(gcd(r, s) == 1 && s > r);
        let c = model(r, s);
        let g = ((r - 1) * (s - 1) / 2) as usize;
        prop_assert_eq!(c.genus, g);
        let gaps: Vec<u32> = (1..2 * g as u32).filter(|&k| !in_semigroup(k, r, s)).collect();
        prop_assert_eq!(&c.gaps(), &gaps);
        let orders: Vec<u32> = c.monomial_basis(2 * g).iter().map(|m| m.order).collect();
        let sg: Vec<u32> = (0..).filter(|&k| in_semigroup(k, r, s)).take(2 * g + 1).collect();
        prop_assert_eq!(orders, sg);
        let y = YoungData::new(&c);
        let lambda: Vec<u32> = (1..=g).map(|i| gaps[g - i] - (g - i) as u32).collect();
        prop_assert_eq!(&y.rows, &lambda);
        prop_assert_eq!(y.weight(), (r * r - 1) * (s * s - 1) / 24);
        // Hook lengths of the first column are the gaps.
        let mut hooks = y.hooks.clone();
        hooks.reverse();
        prop_assert_eq!(hooks, gaps);
    }
}

#[test]
fn natural_tables() {
    let rows: [(u32, u32, &[&[usize]]); 7] = [
        (2, 9, &[&[2, 4], &[3], &[4]]),
        (2, 11, &[&[2, 4], &[3, 5], &[4], &[5]]),
        (2, 13, &[&[2, 4, 6], &[3, 5], &[4, 6], &[5], &[6]]),
        (2, 15, &[&[2, 4, 6], &[3, 5, 7], &[4, 6], &[5, 7], &[6], &[7]]),
        (2, 17, &[&[2, 4, 6, 8], &[3, 5, 7], &[4, 6, 8], &[5, 7], &[6, 8], &[7], &[8]]),
        (3, 4, &[&[2], &[3]]),
        (3, 5, &[&[2], &[3], &[4]]),
    ];
    for (r, s, nat) in rows {
        let y = YoungData::new(&model(r, s));
        for (k, want) in nat.iter().enumerate() {
            assert_eq!(y.natural(k + 1), *want, "({r},{s}) k={}", k + 1);
        }
    }
}

#[test]
fn rejects_bad_degrees() {
    assert!(matches!(CurveSpec::from_real(2, 4, &[0.0, 0.0, 0.0, -1.0]), Err(cyclic_sigma::Error::NotCoprime { .. })));
    assert!(matches!(CurveSpec::from_real(2, 5, &[0.0, 0.0, 0.0, 0.0, 0.0]), Err(cyclic_sigma::Error::SingularCurve(_))));
    assert!(matches!(CurveSpec::from_real(2, 5, &[0.0, 1.0]), Err(cyclic_sigma::Error::BadArity { .. })));
}
