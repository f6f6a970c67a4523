use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multweyl::arith::PrimeSieve;
use multweyl::multfunc::MultiplicativeFunction;
use multweyl::partition::{build_partition, exceptional_points, verify_partition};
use multweyl::phase::PolyPhase;
use multweyl::weylsum::{hyperbola_bilinear, rect_bilinear, weyl_sum, RectFamily};

const PHASES: [&str; 4] = [
    "sqrt:2*x",
    "sqrt:2*x^2 + golden*x",
    "x^2/3 + sqrt:3*x",
    "pi*x^3",
];

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

#[test]
fn hyperbola_matches_partition_direct_sum() {
    let n = 5_000u64;
    let sieve = PrimeSieve::new(n).unwrap();
    for name in ["mobius", "liouville"] {
        let f = MultiplicativeFunction::by_name(name)
            .unwrap()
            .sieve_values(&sieve, n)
            .unwrap();
        for expr in PHASES {
            let phase = PolyPhase::parse(expr).unwrap();
            let h = hyperbola_bilinear(&f, &sieve, &phase, n).unwrap();
            let scheme = build_partition(n, 16.0).unwrap();
            let rep = verify_partition(&scheme, &sieve, |p, m| {
                f[m as usize] * f[p as usize] * (p as f64).ln() * phase.exp_at((p * m) as i128)
            })
            .unwrap();
            assert!(rel(h, rep.direct_sum) < 1e-9, "{name} {expr}");
            assert!(rel(h, rep.partitioned_sum) < 1e-9, "{name} {expr}");
        }
    }
}

#[test]
fn rectangles_and_exceptional_set_recover_hyperbola_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sieve = PrimeSieve::new(20_000).unwrap();
    let names = ["mobius", "liouville", "unit"];
    for _ in 0..10 {
        let n: u64 = rng.random_range(64..=20_000);
        let s = rng.random_range(1.0..(n as f64).sqrt());
        let f = MultiplicativeFunction::by_name(names[rng.random_range(0..names.len())])
            .unwrap()
            .sieve_values(&sieve, n)
            .unwrap();
        let phase = PolyPhase::parse(PHASES[rng.random_range(0..PHASES.len())]).unwrap();
        let log_n = (n as f64).ln();
        let beta: Vec<Complex64> = (0..=n as usize)
            .map(|p| f[p] * (p.max(1) as f64).ln() / log_n)
            .collect();

        let scheme = build_partition(n, s).unwrap();
        let sub = RectFamily::from_partition_sub(&scheme).unwrap();
        let main = RectFamily::from_partition_main(&scheme).unwrap();
        let mut total = rect_bilinear(&f, &beta, &sieve, &phase, &sub).unwrap()
            + rect_bilinear(&f, &beta, &sieve, &phase, &main).unwrap();
        for (p, m) in exceptional_points(&scheme, &sieve).unwrap() {
            total += f[m as usize] * beta[p as usize] * phase.exp_at((p * m) as i128);
        }
        let direct = hyperbola_bilinear(&f, &sieve, &phase, n).unwrap();
        assert!(rel(direct, total * log_n) < 1e-9, "N={n} s={s}");
    }
}

#[test]
fn sums_do_not_depend_on_thread_count() {
    let n = 200_000u64;
    let sieve = PrimeSieve::new(n).unwrap();
    let f = MultiplicativeFunction::mobius()
        .sieve_values(&sieve, n)
        .unwrap();
    let phase = PolyPhase::parse("sqrt:2*x^2 + golden*x").unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    weyl_sum(&f, &phase, n).unwrap(),
                    hyperbola_bilinear(&f, &sieve, &phase, n / 4).unwrap(),
                )
            })
    };
    let one = run(1);
    for threads in [2, 3, 4, 7] {
        let other = run(threads);
        assert_eq!(one.0.re.to_bits(), other.0.re.to_bits());
        assert_eq!(one.0.im.to_bits(), other.0.im.to_bits());
        assert_eq!(one.1.re.to_bits(), other.1.re.to_bits());
        assert_eq!(one.1.im.to_bits(), other.1.im.to_bits());
    }
}
