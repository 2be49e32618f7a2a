//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use rand::RngCore;

use common::*;
use swhe_core::attacks;
use swhe_core::boolfhe::{compile_boolean_circuit, fhe_keygen, parse_bool_netlist};
use swhe_core::circuit::{check_capacity, evaluate, parse_circuit, ArithCircuit};
use swhe_core::keys::AnyKey;
use swhe_core::matrix::ModMatrix;
use swhe_core::params::{ParameterSet, Scheme};
use swhe_core::pipeline::{measure_ops, relative_bench, run_pipeline, PipelineJob};
use swhe_core::rng::seeded_rng;
use swhe_core::stats::chi_square_uniformity;
use swhe_core::vector::{augment, generate, u_matrix, AssocFix};

fn pass(n: u32, name: &str, detail: &str) {
    println!("ACCEPTANCE {n} ({name}): PASS — {detail}");
}

// 1. Parameter reproduction: the worked derivations, exact (eta of the
//    single-bit case within ±1).
#[test]
fn acceptance_1_parameter_reproduction() {
    let start = std::time::Instant::now();

    let p = ParameterSet::derive(Scheme::He1, 4, 16, 32, None, None).unwrap();
    assert_eq!((p.lambda, p.eta), (192, 960), "plain d=4 rho=32");

    let p = ParameterSet::derive(Scheme::He1N, 3, 16, 8, None, None).unwrap();
    assert_eq!(p.kappa_bits, Some(72));
    assert_eq!(p.rho_prime, Some(80));
    assert_eq!((p.lambda, p.eta), (480, 2400), "noisy d=3 rho=8");

    let p = ParameterSet::derive(Scheme::He1N, 3, 16, 1, None, None).unwrap();
    assert_eq!(p.kappa_bits, Some(51));
    assert_eq!(p.rho_prime, Some(52));
    assert_eq!(p.lambda, 354);
    assert!((2055..=2057).contains(&p.eta), "eta={}", p.eta);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "must finish within 1s, took {elapsed:?}");
    pass(1, "parameter reproduction", &format!("3 worked derivations exact in {elapsed:?}"));
}

fn eval_encrypted(
    key: &AnyKey,
    circ: &ArithCircuit,
    inputs: &[BigInt],
    rng: &mut impl RngCore,
) -> BigInt {
    match key {
        AnyKey::Scalar(k) => {
            let pp = k.public_params();
            let cts: Vec<_> = inputs.iter().map(|m| k.encrypt(m, rng).unwrap()).collect();
            let outs = evaluate(circ, &cts, &pp).unwrap();
            k.decrypt(&outs[0]).unwrap()
        }
        AnyKey::Vector(pair) => {
            let cts: Vec<_> = inputs
                .iter()
                .map(|m| pair.sk.encrypt(m, rng).unwrap())
                .collect();
            let outs = evaluate(circ, &cts, &pair.pp).unwrap();
            pair.sk.decrypt(&outs[0]).unwrap()
        }
        AnyKey::Crt(pair) => {
            let cts: Vec<_> = inputs
                .iter()
                .map(|m| pair.sk.encrypt(m, rng).unwrap())
                .collect();
            let outs = evaluate(circ, &cts, &pair.pp).unwrap();
            pair.sk.decrypt(&outs[0]).unwrap()
        }
    }
}

// 2. Homomorphism suites over the full scheme grid: 1000 round trips and 200
//    capacity-checked random circuits per configuration, all exact.
#[test]
fn acceptance_2_homomorphism_suites() {
    let mut rng = seeded_rng(0xACC2);
    let grid: [(Scheme, Option<u32>, Option<u32>, &str); 10] = [
        (Scheme::He1, None, None, "HE1"),
        (Scheme::He1N, None, None, "HE1N"),
        (Scheme::He2, None, None, "HE2"),
        (Scheme::He2N, None, None, "HE2N"),
        (Scheme::Hek, Some(3), None, "HE3"),
        (Scheme::Hek, Some(4), None, "HE4"),
        (Scheme::HekN, Some(3), None, "HE3N"),
        (Scheme::He2NCrt, None, Some(1), "HE2NCRT-K1"),
        (Scheme::He2NCrt, None, Some(2), "HE2NCRT-K2"),
        (Scheme::He2NCrt, None, Some(3), "HE2NCRT-K3"),
    ];
    let mut configs = 0;
    for (scheme, k, shards, label) in grid {
        for d in [2u32, 3, 4] {
            for rho in [8u32, 16, 32] {
                let params = suite_params(scheme, d, 6, rho, k, shards);
                let key = AnyKey::generate(&params, false, &mut rng)
                    .unwrap_or_else(|e| panic!("keygen {label} d={d} rho={rho}: {e}"));

                for trial in 0..1000 {
                    let m = random_plain(&mut rng, &params.m_bound);
                    let c = key.encrypt(&m, &mut rng).unwrap();
                    let back = key.decrypt(&c).unwrap();
                    assert_eq!(back, m, "{label} d={d} rho={rho} round trip {trial}");
                }

                let mut done = 0;
                while done < 200 {
                    let gen = random_arith_circuit(&mut rng, 5, 12, d as u64);
                    let circ = parse_circuit(&gen.text).unwrap();
                    if check_capacity(&circ, &params).is_err() {
                        continue;
                    }
                    let inputs: Vec<BigInt> = (0..gen.n_inputs())
                        .map(|_| random_plain(&mut rng, &params.m_bound))
                        .collect();
                    let got = eval_encrypted(&key, &circ, &inputs, &mut rng);
                    let want = oracle_expected(&gen.eval_plain(&inputs), key.kappa());
                    assert_eq!(
                        got, want,
                        "{label} d={d} rho={rho} circuit #{done}:\n{}",
                        gen.text
                    );
                    done += 1;
                }
                configs += 1;
            }
        }
    }
    pass(
        2,
        "homomorphism suites",
        &format!("{configs} configurations x (1000 round trips + 200 circuits), all exact"),
    );
}

// 3. Matrix identities for k in 2..=6, 50 key generations each.
#[test]
fn acceptance_3_matrix_identities() {
    let mut rng = seeded_rng(0xACC3);
    let mut keys = 0;
    for k in 2u32..=6 {
        let params = ParameterSet::derive(Scheme::Hek, 2, 4, 8, Some(k), None).unwrap();
        for _ in 0..50 {
            let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
            let sk = &bundle.sk;
            let pq = sk.pq();
            let ku = k as usize;

            // R U_k = I_k exactly
            let u = u_matrix(ku, &pq);
            assert_eq!(
                bundle.pp.r_matrix.mul_mod(&u, &pq),
                ModMatrix::identity(ku),
                "R U != I at k={k}"
            );
            // R 1* = 1 and R a*_j = a_j
            let ones_star = augment(&vec![BigUint::one(); ku], &pq);
            assert_eq!(
                bundle.pp.r_matrix.mul_vec_mod(&ones_star, &pq),
                vec![BigUint::one(); ku]
            );
            for a in &sk.basis {
                assert_eq!(&bundle.pp.r_matrix.mul_vec_mod(&augment(a, &pq), &pq), a);
            }
            // structure-constant identity per pair
            let astars: Vec<Vec<BigUint>> = std::iter::once(vec![BigUint::one(); ku])
                .chain(sk.basis.iter().cloned())
                .map(|v| augment(&v, &pq))
                .collect();
            for (idx, &(i, j)) in bundle.hidden.pairs.iter().enumerate() {
                let had: Vec<BigUint> = astars[i]
                    .iter()
                    .zip(&astars[j])
                    .map(|(a, b)| (a * b) % &pq)
                    .collect();
                let got = bundle.pp.r_matrix.mul_vec_mod(&had, &pq);
                let rho_p = (&bundle.hidden.rho[idx] * &sk.p) % &pq;
                let want: Vec<BigUint> = (0..ku)
                    .map(|row| {
                        let mut acc = rho_p.clone();
                        for (l, a) in sk.basis.iter().enumerate() {
                            acc += &bundle.hidden.sigma[idx][l] * &a[row];
                        }
                        acc % &pq
                    })
                    .collect();
                assert_eq!(got, want, "structure identity k={k} pair ({i},{j})");
            }
            keys += 1;
        }
    }
    pass(3, "matrix identities", &format!("{keys} key generations, zero failures"));
}

// 4. Associativity: repaired keys project triple products identically mod pq
//    (500 triples per k in 3..=5); unrepaired k=3 keys fall to the associator
//    attack on at least one of 50 draws.
#[test]
fn acceptance_4_associativity_fix() {
    let mut rng = seeded_rng(0xACC4);
    for k in 3u32..=5 {
        let params = ParameterSet::derive(Scheme::Hek, 3, 4, 8, Some(k), None).unwrap();
        let mut triples = 0;
        for _ in 0..5 {
            let bundle = generate(&params, AssocFix::Enabled, false, &mut rng).unwrap();
            for _ in 0..100 {
                let enc = |rng: &mut _| {
                    let m = random_plain(rng, &params.m_bound);
                    bundle.sk.encrypt(&m, rng).unwrap()
                };
                let (c1, c2, c3) = (enc(&mut rng), enc(&mut rng), enc(&mut rng));
                let left = bundle.pp.mul_raw(&bundle.pp.mul_raw(&c1, &c2), &c3);
                let right = bundle.pp.mul_raw(&c1, &bundle.pp.mul_raw(&c2, &c3));
                assert_eq!(
                    bundle.sk.gamma_project(&left),
                    bundle.sk.gamma_project(&right),
                    "projection mismatch with repair enabled, k={k}"
                );
                triples += 1;
            }
        }
        assert_eq!(triples, 500);
    }

    let params = ParameterSet::derive(Scheme::Hek, 3, 4, 8, Some(3), None).unwrap();
    let mut successes = 0;
    for _ in 0..50 {
        let bundle = generate(&params, AssocFix::Disabled, false, &mut rng).unwrap();
        let pool: Vec<_> = (0..6)
            .map(|_| {
                let m = random_plain(&mut rng, &params.m_bound);
                bundle.sk.encrypt(&m, &mut rng).unwrap()
            })
            .collect();
        let report = attacks::associator_attack(&pool, &bundle.pp, 2000);
        if report.success {
            assert_eq!(
                report.recovered_p.as_deref(),
                Some(bundle.sk.p.to_string().as_str()),
                "recovered factor must be the true p"
            );
            successes += 1;
        }
    }
    assert!(successes >= 1, "associator attack never succeeded on unrepaired keys");
    pass(
        4,
        "associativity fix",
        &format!("1500 repaired triples exact; unrepaired k=3 broken on {successes}/50 draws"),
    );
}

// 5. Attack validation: known-plaintext attacks >= 95/100, planted collisions
//    100/100, brute force with budget 2^(rho-8) fails >= 19/20 at rho = 16.
#[test]
fn acceptance_5_attack_validation() {
    let mut rng = seeded_rng(0xACC5);

    let he2 = ParameterSet::derive(Scheme::He2, 2, 4, 8, None, None).unwrap();
    let mut two_pt = 0;
    for _ in 0..100 {
        let bundle = generate(&he2, AssocFix::Auto, false, &mut rng).unwrap();
        let m1 = rng.gen_biguint_below(&he2.m_bound);
        let m2 = rng.gen_biguint_below(&he2.m_bound);
        let mh = rng.gen_biguint_below(&he2.m_bound);
        let c1 = bundle.sk.encrypt(&BigInt::from(m1.clone()), &mut rng).unwrap();
        let c2 = bundle.sk.encrypt(&BigInt::from(m2.clone()), &mut rng).unwrap();
        let ch = bundle.sk.encrypt(&BigInt::from(mh.clone()), &mut rng).unwrap();
        match attacks::he2_two_plaintext_attack(&c1, &c2, &m1, &m2, &bundle.pp.pq, Some((&ch, &mh))) {
            Ok(r) if r.success => {
                assert_eq!(r.recovered_p.unwrap(), bundle.sk.p.to_string());
                two_pt += 1;
            }
            _ => {}
        }
    }
    assert!(two_pt >= 95, "two-plaintext attack succeeded only {two_pt}/100");

    let he3 = ParameterSet::derive(Scheme::Hek, 2, 4, 8, Some(3), None).unwrap();
    let mut kpa = 0;
    for _ in 0..100 {
        let bundle = generate(&he3, AssocFix::Auto, false, &mut rng).unwrap();
        let ms: Vec<BigUint> = (0..3).map(|_| rng.gen_biguint_below(&he3.m_bound)).collect();
        let cts: Vec<_> = ms
            .iter()
            .map(|m| bundle.sk.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap())
            .collect();
        let mh = rng.gen_biguint_below(&he3.m_bound);
        let ch = bundle.sk.encrypt(&BigInt::from(mh.clone()), &mut rng).unwrap();
        match attacks::hek_known_plaintext_attack(&cts, &ms, &bundle.pp.pq, Some((&ch, &mh))) {
            Ok(r) if r.success => {
                assert_eq!(r.recovered_p.unwrap(), bundle.sk.p.to_string());
                kpa += 1;
            }
            _ => {}
        }
    }
    assert!(kpa >= 95, "known-plaintext attack succeeded only {kpa}/100");

    let he1 = ParameterSet::derive(Scheme::He1, 2, 4, 8, None, None).unwrap();
    let mut collisions = 0;
    for _ in 0..100 {
        let key = swhe_core::ScalarSecretKey::generate(&he1, false, &mut rng).unwrap();
        let pp = key.public_params();
        let mut cts: Vec<BigUint> = (0..5)
            .map(|_| {
                let m = rng.gen_biguint_below(&he1.m_bound);
                key.encrypt(&BigInt::from(m), &mut rng).unwrap().value
            })
            .collect();
        let m = rng.gen_biguint_below(&he1.m_bound);
        cts.push(key.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap().value);
        cts.push(key.encrypt(&BigInt::from(m), &mut rng).unwrap().value);
        let r = attacks::collision_attack(&cts, &pp.pq);
        if r.success && r.recovered_p.unwrap() == key.p.to_string() {
            collisions += 1;
        }
    }
    assert_eq!(collisions, 100, "collision attack must recover every planted collision");

    let he1_16 = ParameterSet::derive(Scheme::He1, 2, 8, 16, None, None).unwrap();
    let mut failures = 0;
    for _ in 0..20 {
        let key = swhe_core::ScalarSecretKey::generate(&he1_16, false, &mut rng).unwrap();
        let pp = key.public_params();
        let m = rng.gen_biguint_below(&he1_16.m_bound);
        let ct = key.encrypt(&BigInt::from(m), &mut rng).unwrap().value;
        let report = attacks::brute_force_gcd(
            std::slice::from_ref(&ct),
            &pp.pq,
            None,
            (0u64..1 << 16).map(BigUint::from),
            1 << 8, // budget 2^(rho-8)
            Some(he1_16.lambda),
        );
        if !report.success {
            failures += 1;
        }
    }
    assert!(failures >= 19, "brute force under budget succeeded too often ({failures}/20 failures)");

    pass(
        5,
        "attack validation",
        &format!(
            "two-plaintext {two_pt}/100, known-plaintext {kpa}/100, collisions 100/100, brute-force failures {failures}/20"
        ),
    );
}

// 6. Noise uniformity: honest noisy streams pass chi-square at 0.001, the
//    pinned-noise control fails.
#[test]
fn acceptance_6_noise_uniformity() {
    let mut rng = seeded_rng(0xACC6);

    // kappa_bits = 8 keeps kappa <= 1024 and q (123 bits) astronomically larger
    let p1 = ParameterSet::derive(Scheme::He1N, 2, 3, 1, None, None).unwrap();
    let key = swhe_core::ScalarSecretKey::generate(&p1, false, &mut rng).unwrap();
    let kappa = key.kappa.clone().unwrap();
    let samples = 50 * 256 + 200;
    let values: Vec<BigUint> = (0..samples)
        .map(|_| {
            let m = BigInt::from(rng.gen_range(0u8..2));
            key.encrypt(&m, &mut rng).unwrap().value
        })
        .collect();
    let honest = chi_square_uniformity(&values, &kappa, 0.001).unwrap();
    assert!(honest.pass, "honest scalar stream failed: {honest:?}");

    let p2 = ParameterSet::derive(Scheme::He2N, 2, 3, 1, None, None).unwrap();
    let bundle = generate(&p2, AssocFix::Auto, false, &mut rng).unwrap();
    let kappa2 = bundle.sk.kappa.clone().unwrap();
    let values2: Vec<BigUint> = (0..samples)
        .map(|_| {
            let m = BigInt::from(rng.gen_range(0u8..2));
            bundle.sk.encrypt(&m, &mut rng).unwrap().v[0].clone()
        })
        .collect();
    let honest2 = chi_square_uniformity(&values2, &kappa2, 0.001).unwrap();
    assert!(honest2.pass, "honest vector stream failed: {honest2:?}");

    // negative control: noise fully pinned (r = s = 0) leaves the raw
    // plaintext distribution visible
    let control: Vec<BigUint> = (0..samples)
        .map(|_| {
            let m = BigInt::from(rng.gen_range(0u8..2));
            key.encrypt_with(&m, &BigUint::zero(), Some(&BigUint::zero()))
                .unwrap()
                .value
        })
        .collect();
    let pinned = chi_square_uniformity(&control, &kappa, 0.001).unwrap();
    assert!(!pinned.pass, "pinned-noise control unexpectedly passed");

    pass(
        6,
        "noise uniformity",
        &format!(
            "honest stat {:.1}/{:.1} (scalar), {:.1} (vector); pinned control stat {:.1} rejected",
            honest.statistic, honest.critical, honest2.statistic, pinned.statistic
        ),
    );
}

// 7. CRT equivalence: sharded evaluation + recombination equals the plaintext
//    oracle mod kappa on 200 random circuits for K in 1..=4.
#[test]
fn acceptance_7_crt_equivalence() {
    let mut rng = seeded_rng(0xACC7);
    for shards in 1u32..=4 {
        let params = suite_params(Scheme::He2NCrt, 2, 5, 8, None, Some(shards));
        let key = AnyKey::generate(&params, false, &mut rng).unwrap();
        let mut done = 0;
        while done < 200 {
            let gen = random_arith_circuit(&mut rng, 5, 12, params.d as u64);
            let circ = parse_circuit(&gen.text).unwrap();
            if check_capacity(&circ, &params).is_err() {
                continue;
            }
            let inputs: Vec<BigInt> = (0..gen.n_inputs())
                .map(|_| random_plain(&mut rng, &params.m_bound))
                .collect();
            let got = eval_encrypted(&key, &circ, &inputs, &mut rng);
            let want = oracle_expected(&gen.eval_plain(&inputs), key.kappa());
            assert_eq!(got, want, "K={shards} circuit #{done}:\n{}", gen.text);
            done += 1;
        }
    }
    pass(7, "CRT equivalence", "200 circuits per K in 1..=4, all exact");
}

// 8. Encrypted Boolean circuits: 100 random NAND netlists and a buffered
//    8-bit ripple-carry adder evaluate exactly; wire magnitudes stay below
//    2*kappa at every depth.
#[test]
fn acceptance_8_boolean_fhe() {
    let mut rng = seeded_rng(0xACC8);
    let (bundle, kappa) = fhe_keygen(3, 48, &mut rng).unwrap();
    let two_kappa = &kappa << 1u32;

    let mut max_depth_seen = 0;
    for trial in 0..100 {
        let gen = random_nand_circuit(&mut rng, 6, 64, 40);
        let circ = parse_bool_netlist(&gen.text).unwrap();
        assert!(circ.gates.len() <= 64 && circ.depth() <= 40);
        max_depth_seen = max_depth_seen.max(circ.depth());
        let bits: Vec<bool> = (0..gen.n_inputs).map(|_| rng.gen_bool(0.5)).collect();

        // fresh encodings per evaluation: compile, run once
        let (mut compiled, client) =
            compile_boolean_circuit(&circ, &bundle, &kappa, &mut rng).unwrap();
        let inputs = client.encrypt_inputs(&bits, &mut rng).unwrap();
        let (outs, trace) = compiled.evaluate_traced(&inputs, false).unwrap();
        for wire_ct in &trace {
            let w = client.sk.decrypt(wire_ct).unwrap().to_biguint().unwrap();
            assert!(w < two_kappa, "wire magnitude {w} reached 2*kappa (trial {trial})");
        }
        let got = client.decrypt_outputs(&outs).unwrap();
        assert_eq!(got, gen.eval_plain(&bits), "netlist #{trial}:\n{}", gen.text);
    }

    // the encrypted programs themselves realise their truth tables: decrypt
    // each coefficient (mod p) and re-evaluate every interpolation point
    {
        use swhe_core::boolfhe::{NodeRef, WireProgram};
        let gen = random_nand_circuit(&mut rng, 5, 24, 40);
        let circ = parse_bool_netlist(&gen.text).unwrap();
        let (compiled, client) =
            compile_boolean_circuit(&circ, &bundle, &kappa, &mut rng).unwrap();
        let p = &client.sk.p;
        let dec = |ct: &swhe_core::VectorCiphertext| client.sk.gamma_project(ct) % p;
        for (wi, prog) in compiled.programs.iter().enumerate() {
            let target = &client.wire_encodings[wi];
            match (&compiled.wires[wi].source, prog) {
                (NodeRef::Input(i), WireProgram::Linear { a, b }) => {
                    let (a, b) = (dec(a), dec(b));
                    let src = &client.input_encodings[*i];
                    for bit in [false, true] {
                        let got = (&a + &b * src.get(bit)) % p;
                        assert_eq!(got, target.get(bit) % p, "input wire {wi} point {bit}");
                    }
                }
                (NodeRef::Gate(g), WireProgram::Quad { a, b, c, d }) => {
                    let (a, b, c, d) = (dec(a), dec(b), dec(c), dec(d));
                    let (ea, eb) = compiled.gate_inputs[*g];
                    let enc_a = &client.wire_encodings[ea];
                    let enc_b = &client.wire_encodings[eb];
                    let tt = &compiled.circuit.gates[*g].tt;
                    for (u, x) in [(0usize, &enc_a.w0), (1, &enc_a.w1)] {
                        for (w, y) in [(0usize, &enc_b.w0), (1, &enc_b.w1)] {
                            let got = (&a + &b * x + &c * y + &d * x * y) % p;
                            let want = target.get(tt[u * 2 + w]) % p;
                            assert_eq!(got, want, "gate wire {wi} point ({u},{w})");
                        }
                    }
                }
                _ => panic!("mismatched program kind on wire {wi}"),
            }
        }
    }

    // 8-bit ripple-carry adder, NAND only, carry chain buffered above depth 30
    let adder_text = ripple_carry_adder_nand(8);
    let adder = parse_bool_netlist(&adder_text).unwrap();
    assert!(adder.depth() > 30, "adder depth {}", adder.depth());
    for _ in 0..100 {
        let a = rng.gen_range(0u64..256);
        let b = rng.gen_range(0u64..256);
        let cin = rng.gen_bool(0.5);
        let mut bits = to_bits(a, 8);
        bits.extend(to_bits(b, 8));
        bits.push(cin);

        let (mut compiled, client) =
            compile_boolean_circuit(&adder, &bundle, &kappa, &mut rng).unwrap();
        let inputs = client.encrypt_inputs(&bits, &mut rng).unwrap();
        let (outs, trace) = compiled.evaluate_traced(&inputs, false).unwrap();
        for wire_ct in &trace {
            let w = client.sk.decrypt(wire_ct).unwrap().to_biguint().unwrap();
            assert!(w < two_kappa, "adder wire magnitude {w} reached 2*kappa");
        }
        let got_bits = client.decrypt_outputs(&outs).unwrap();
        let got = from_bits(&got_bits);
        let want = a + b + cin as u64;
        assert_eq!(got, want, "adder({a}, {b}, {cin})");
    }

    pass(
        8,
        "Boolean circuits",
        &format!(
            "100 NAND netlists (max depth {max_depth_seen}) and 100 adder runs exact; \
             encrypted programs verified at every interpolation point; all wires < 2*kappa"
        ),
    );
}

// 9. Pipeline: the 24000-input inner product verifies for every scheme at
//    d in {2,3}, worker counts {1,4,16} agree, and per-mul costs order
//    vector above scalar by more than 1.5x at matched parameters.
#[test]
fn acceptance_9_pipeline() {
    let mut results = Vec::new();
    for (scheme, rho) in [
        (Scheme::He1, 32u32),
        (Scheme::He1N, 8),
        (Scheme::He2, 32),
        (Scheme::He2N, 8),
    ] {
        for d in [2u32, 3] {
            let params = ParameterSet::derive(scheme, d, 16, rho, None, None).unwrap();
            let mut per_worker = Vec::new();
            for workers in [1usize, 4, 16] {
                let job = PipelineJob {
                    params: params.clone(),
                    count: 24000,
                    workers,
                    seed: 0x917e,
                };
                let arts = run_pipeline(&job).unwrap_or_else(|e| {
                    panic!("pipeline {scheme} d={d} workers={workers}: {e}")
                });
                assert!(arts.report.verified);
                per_worker.push(arts.report.result.clone());
            }
            assert!(
                per_worker.windows(2).all(|w| w[0] == w[1]),
                "{scheme} d={d}: worker count changed the result"
            );
            results.push((scheme, d, per_worker.pop().unwrap()));
        }
    }

    // ordinal cost claims at matched parameters
    let mut rng = seeded_rng(0xACC9);
    let mut claims_checked = 0;
    for (plain, vector, rho) in [
        (Scheme::He1, Scheme::He2, 32u32),
        (Scheme::He1N, Scheme::He2N, 8),
    ] {
        let pa = ParameterSet::derive(plain, 2, 16, rho, None, None).unwrap();
        let pb = ParameterSet::derive(vector, 2, 16, rho, None, None).unwrap();
        let costs = vec![
            measure_ops(&pa, 200, 5, &mut rng).unwrap(),
            measure_ops(&pb, 200, 5, &mut rng).unwrap(),
        ];
        let claims = relative_bench(&costs, 1.5);
        assert!(!claims.is_empty(), "no ordinal claim for {plain} vs {vector}");
        for claim in claims {
            assert!(
                claim.holds,
                "per-mul ordering failed: {} (ratio {:.2})",
                claim.label, claim.ratio
            );
            claims_checked += 1;
        }
    }

    pass(
        9,
        "pipeline",
        &format!(
            "{} configurations verified at n=24000 with identical results over 1/4/16 workers; {claims_checked} ordinal cost claims hold",
            results.len()
        ),
    );
}
