use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use arithdyn::dynmap::{IntegerUniMap, ProjPoint, RationalPoint};
use arithdyn::experiments::{gen_random_quadratic, ks_statistic, RandomMapSpec};
use arithdyn::ffield::{is_prime, FpElement, Prime};
use arithdyn::orbit::{detect_cycle, detect_cycle_oracle, DEFAULT_BUDGET};

fn prime_strategy(lo: u64, hi: u64) -> impl Strategy<Value = Prime> {
    (lo..hi).prop_filter_map("prime", |n| if is_prime(n) { Some(Prime::new(n).unwrap()) } else { None })
}

/// Exact value of `num(x)/den(x)` over Q, or `None` at a pole.
fn eval_rational(num: &[i64], den: &[i64], x: &BigRational) -> Option<BigRational> {
    let horner = |c: &[i64]| {
        c.iter().rev().fold(BigRational::zero(), |acc, &a| acc * x + BigRational::from_integer(BigInt::from(a)))
    };
    let d = horner(den);
    if d.is_zero() {
        None
    } else {
        Some(horner(num) / d)
    }
}

fn reduce_rational(v: &BigRational, p: Prime) -> ProjPoint {
    let pb = BigInt::from(p.get());
    let n = ((v.numer() % &pb) + &pb) % &pb;
    let d = ((v.denom() % &pb) + &pb) % &pb;
    if d.is_zero() {
        return ProjPoint::Infinity;
    }
    let m = p.modulus();
    let n: u64 = n.try_into().unwrap();
    let d: u64 = d.try_into().unwrap();
    ProjPoint::Affine(m.element(m.mul(n, m.inv(d).unwrap())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(p in prime_strategy(2, 1 << 31), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let m = p.modulus();
        let (a, b, c) = (m.reduce(a), m.reduce(b), m.reduce(c));
        prop_assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
        prop_assert_eq!(m.mul(a, m.add(b, c)), m.add(m.mul(a, b), m.mul(a, c)));
        prop_assert_eq!(m.add(a, m.neg(a)), 0);
        prop_assert_eq!(m.sub(m.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
        }
        let want = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(p.get());
        prop_assert_eq!(BigInt::from(m.mul(a, b)), want);
    }

    #[test]
    fn brent_matches_oracle(
        p in prime_strategy(3, 2000),
        coeffs in prop::collection::vec(-50i64..50, 2..5),
        x0 in any::<u64>(),
    ) {
        let m = p.modulus();
        let c: Vec<u64> = coeffs.iter().map(|&a| m.from_i64(a)).collect();
        let step = |x: u64| c.iter().rev().fold(0, |acc, &a| m.add(m.mul(acc, x), a));
        let x0 = m.reduce(x0);
        let a = detect_cycle(step, x0, DEFAULT_BUDGET).unwrap();
        let b = detect_cycle_oracle(step, x0, p.get() as usize + 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reduction_commutes_with_evaluation(
        num in prop::collection::vec(-20i64..20, 3..5),
        den in prop::collection::vec(-20i64..20, 1..4),
        xn in -30i64..30,
        xd in 1i64..30,
        p in prime_strategy(5, 400),
    ) {
        let Ok(map) = IntegerUniMap::new(&num, &den) else { return Ok(()) };
        let Ok(m) = map.reduce(p) else { return Ok(()) };
        let x = BigRational::new(BigInt::from(xn), BigInt::from(xd));
        let Some(fx) = eval_rational(map.numerator(), map.denominator(), &x) else { return Ok(()) };
        // stay off points that only have a finite image after cancellation
        let start = RationalPoint::new(xn, xd).reduce(p);
        if start == ProjPoint::Infinity {
            return Ok(());
        }
        prop_assert_eq!(m.eval(start), reduce_rational(&fx, p));
    }

    #[test]
    fn critical_points_are_exactly_the_critical_set(
        num in prop::collection::vec(-9i64..9, 3..5),
        den in prop::collection::vec(-9i64..9, 1..3),
        p in prime_strategy(5, 200),
    ) {
        let Ok(map) = IntegerUniMap::new(&num, &den) else { return Ok(()) };
        let Ok(m) = map.reduce(p) else { return Ok(()) };
        let crit = m.critical_points();
        prop_assert!(crit.len() <= 2 * m.degree() - 2);
        for s in 0..=p.get() {
            let z = ProjPoint::from_state(s, p);
            prop_assert_eq!(m.is_critical(z), crit.contains(&z));
        }
    }

    #[test]
    fn system_step_matches_integer_evaluation(
        index in 0u64..1000,
        dim in 1usize..=4,
        p in prop_oneof![prime_strategy(3, 1 << 16), prime_strategy(1 << 16, 1 << 31)],
        pt in prop::collection::vec(any::<u32>(), 4),
    ) {
        let sys = gen_random_quadratic(RandomMapSpec { dimension: dim, coeff_bound: 100, seed: 3 }, index).unwrap();
        let Ok(r) = sys.reduce(p) else { return Ok(()) };
        let m = p.modulus();
        let x: Vec<u64> = pt[..dim].iter().map(|&v| m.reduce(v as u64)).collect();
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let got = r.eval(&x.iter().map(|&v| m.element(v)).collect::<Vec<_>>()).unwrap();
        let pb = BigInt::from(p.get());
        for (f, g) in sys.components().iter().zip(&got) {
            let want = ((f.eval_int(&big) % &pb) + &pb) % &pb;
            prop_assert_eq!(BigInt::from(g.residue()), want);
        }
    }

    #[test]
    fn ks_is_permutation_invariant(mut v in prop::collection::vec(0.0f64..3.0, 1..200), seed in any::<u64>()) {
        let cdf = |t: f64| (t / 3.0).clamp(0.0, 1.0);
        let a = ks_statistic(&v, cdf).unwrap();
        let n = v.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(a, ks_statistic(&v, cdf).unwrap());
    }
}

#[test]
fn symbolic_jacobian_matches_numeric() {
    // one prime on each side of 2^16, where evaluation switches strategy
    for (p, index) in
        [(10_007u64, 0u64), (1_000_003, 1)].into_iter().flat_map(|(p, o)| (0..5).map(move |i| (p, i + 5 * o)))
    {
        let p = Prime::new(p).unwrap();
        let m = p.modulus();
        {
            let sys = gen_random_quadratic(RandomMapSpec { dimension: 3, coeff_bound: 100, seed: 11 }, index).unwrap();
            let r = sys.reduce(p).unwrap();
            let det = sys.jacobian_det_poly();
            for k in 0..100u64 {
                let pt: Vec<i64> =
                    (0..3).map(|j| ((k * 7919 + j * 104_729 + index * 31) % p.as_u64()) as i64).collect();
                let symbolic = det.eval_int(&pt.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
                let want = ((symbolic % BigInt::from(p.get())) + BigInt::from(p.get())) % BigInt::from(p.get());
                let elems: Vec<FpElement> = pt.iter().map(|&v| m.element(v as u64)).collect();
                let got = r.jacobian_det(&elems).unwrap().residue();
                assert_eq!(BigInt::from(got), want);
            }
        }
    }
}

#[test]
fn generated_maps_have_nonconstant_jacobian() {
    let spec = RandomMapSpec { dimension: 3, coeff_bound: 100, seed: 0 };
    for i in 0..1000 {
        let sys = gen_random_quadratic(spec, i).unwrap();
        assert!(!sys.jacobian_det_poly().is_constant());
        assert!(sys.components().iter().all(|f| f.max_abs_coeff() <= BigInt::from(100)));
    }
}
