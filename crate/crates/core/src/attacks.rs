//! Constructive attacks, used as adversarial validation of the schemes.
//!
//! Every attack verifies what it recovers before reporting success: a
//! recovered p must nontrivially divide the public modulus, and a recovered
//! decryption vector must decrypt held-out ciphertexts. The attacks succeed
//! exactly where the analysis says the schemes are weak (known plaintexts,
//! plaintext collisions, associativity violations, reused wire encodings) and
//! fail within budget where entropy suffices.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{add_mod, gcd, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::matrix::{det_mod, solve_row_system_mod_prime, ModMatrix};
use crate::vector::{VectorCiphertext, VectorPublicParams};

/// Outcome of one attack run. Recovered secrets are reported in decimal so
/// reports serialize as JSON lines.
#[derive(Debug, Clone, Serialize)]
pub struct AttackReport {
    pub attack: String,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_gamma: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_plaintexts: Option<Vec<String>>,
    /// Operations consumed (gcd evaluations, triples inspected, ...).
    pub operations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AttackReport {
    fn failure(attack: &str, operations: u64, budget: Option<u64>, note: &str) -> Self {
        AttackReport {
            attack: attack.into(),
            success: false,
            recovered_p: None,
            recovered_gamma: None,
            recovered_plaintexts: None,
            operations,
            budget,
            note: Some(note.into()),
        }
    }
}

/// Split a nontrivial divisor into (p, q) with p < q; `None` for trivial gcds.
fn split_factor(g: &BigUint, pq: &BigUint) -> Option<(BigUint, BigUint)> {
    if g.is_one() || g >= pq || g.is_zero() {
        return None;
    }
    let other = pq / g;
    if &(g * &other) != pq {
        return None;
    }
    if g < &other {
        Some((g.clone(), other))
    } else {
        Some((other, g.clone()))
    }
}

/// Brute-force guess-and-gcd on scalar ciphertexts: for each candidate
/// plaintext m, gcd(x0, c - m) exposes p once the guess is right. The known
/// multiple of p defaults to the public modulus itself.
///
/// `guesses` should enumerate candidates in descending prior probability;
/// expected work is 2^rho gcds for rho bits of input min entropy.
pub fn brute_force_gcd<I>(
    ciphertexts: &[BigUint],
    pq: &BigUint,
    known_multiple: Option<&BigUint>,
    guesses: I,
    budget: u64,
    lambda_hint: Option<u32>,
) -> AttackReport
where
    I: IntoIterator<Item = BigUint>,
{
    let name = "brute-force-gcd";
    let Some(first) = ciphertexts.first() else {
        return AttackReport::failure(name, 0, Some(budget), "no ciphertexts");
    };
    let x0 = known_multiple.unwrap_or(pq);
    let mut ops = 0u64;
    for guess in guesses {
        if ops >= budget {
            return AttackReport::failure(name, ops, Some(budget), "budget exhausted");
        }
        ops += 1;
        let diff = sub_mod(first, &guess, pq);
        let g = gcd(&gcd(&diff, x0), pq);
        if let Some((p, _q)) = split_factor(&g, pq) {
            if let Some(lambda) = lambda_hint {
                let bits = p.bits() as u32;
                if bits + 1 < lambda || bits > lambda + 1 {
                    continue; // spurious small factor of a wrong guess
                }
            }
            let plaintexts: Vec<String> = ciphertexts.iter().map(|c| (c % &p).to_string()).collect();
            return AttackReport {
                attack: name.into(),
                success: true,
                recovered_p: Some(p.to_string()),
                recovered_gamma: None,
                recovered_plaintexts: Some(plaintexts),
                operations: ops,
                budget: Some(budget),
                note: None,
            };
        }
    }
    AttackReport::failure(name, ops, Some(budget), "guesses exhausted")
}

/// Collision attack: with a repeated plaintext among the ciphertexts, some
/// pairwise difference is a multiple of p, so the running product of
/// differences shares a factor with pq.
pub fn collision_attack(ciphertexts: &[BigUint], pq: &BigUint) -> AttackReport {
    let name = "collision";
    if ciphertexts.len() < 2 {
        return AttackReport::failure(name, 0, None, "need at least two ciphertexts");
    }
    let mut ops = 0u64;
    let mut product = BigUint::one();
    for i in 0..ciphertexts.len() {
        for j in i + 1..ciphertexts.len() {
            ops += 1;
            let diff = sub_mod(&ciphertexts[j], &ciphertexts[i], pq);
            if diff.is_zero() {
                // identical ciphertexts: no factor information in this pair
                continue;
            }
            product = mul_mod(&product, &diff, pq);
            if product.is_zero() {
                // both factors collected; restart from this difference alone
                product = diff;
            }
            let g = gcd(&product, pq);
            if let Some((p, _)) = split_factor(&g, pq) {
                return AttackReport {
                    attack: name.into(),
                    success: true,
                    recovered_p: Some(p.to_string()),
                    recovered_gamma: None,
                    recovered_plaintexts: None,
                    operations: ops,
                    budget: None,
                    note: None,
                };
            }
        }
    }
    AttackReport::failure(name, ops, None, "no collision found")
}

fn gamma_for_known_plaintexts(
    cts: &[&VectorCiphertext],
    plaintexts: &[BigUint],
    p: &BigUint,
) -> Option<Vec<BigUint>> {
    let k = cts.len();
    let cols: Vec<Vec<BigUint>> = cts.iter().map(|c| c.v.clone()).collect();
    let c0 = ModMatrix::from_cols(cols).reduce(p);
    let rhs: Vec<BigUint> = plaintexts.iter().map(|m| m % p).collect();
    let gamma = solve_row_system_mod_prime(&c0, &rhs, p)?;
    (gamma.len() == k).then_some(gamma)
}

fn verify_gamma(
    gamma: &[BigUint],
    holdout: Option<(&VectorCiphertext, &BigUint)>,
    p: &BigUint,
) -> bool {
    match holdout {
        None => true,
        Some((c, m)) => {
            let mut acc = BigUint::zero();
            for (g, v) in gamma.iter().zip(&c.v) {
                acc = add_mod(&acc, &mul_mod(g, v, p), p);
            }
            acc == m % p
        }
    }
}

/// Two known plaintexts break the 2-vector scheme:
/// `(c1-m)(c2'-m') - (c2-m)(c1'-m')` is a multiple of p, and the decryption
/// vector then follows from solving gamma^T [c c'] = [m m'] mod p.
pub fn he2_two_plaintext_attack(
    c: &VectorCiphertext,
    c_prime: &VectorCiphertext,
    m: &BigUint,
    m_prime: &BigUint,
    pq: &BigUint,
    holdout: Option<(&VectorCiphertext, &BigUint)>,
) -> Result<AttackReport> {
    let name = "two-plaintext";
    if c.v.len() != 2 || c_prime.v.len() != 2 {
        return Err(Error::InvalidParams("attack targets 2-vector ciphertexts".into()));
    }
    if c == c_prime {
        return Err(Error::Degenerate("identical ciphertexts, retry with a fresh pair".into()));
    }
    let d1 = sub_mod(&c.v[0], m, pq);
    let d2 = sub_mod(&c.v[1], m, pq);
    let e1 = sub_mod(&c_prime.v[0], m_prime, pq);
    let e2 = sub_mod(&c_prime.v[1], m_prime, pq);
    let witness = sub_mod(&mul_mod(&d1, &e2, pq), &mul_mod(&d2, &e1, pq), pq);
    if witness.is_zero() {
        return Err(Error::Degenerate(
            "degenerate randomness (r s' = r' s), retry with fresh ciphertexts".into(),
        ));
    }
    let g = gcd(&witness, pq);
    let Some((p, _)) = split_factor(&g, pq) else {
        return Ok(AttackReport::failure(name, 1, None, "gcd trivial: guessed plaintexts wrong"));
    };
    let gamma = gamma_for_known_plaintexts(&[c, c_prime], &[m.clone(), m_prime.clone()], &p);
    match gamma {
        Some(gamma) if verify_gamma(&gamma, holdout, &p) => Ok(AttackReport {
            attack: name.into(),
            success: true,
            recovered_p: Some(p.to_string()),
            recovered_gamma: Some(gamma.iter().map(|g| g.to_string()).collect()),
            recovered_plaintexts: None,
            operations: 1,
            budget: None,
            note: None,
        }),
        Some(_) => Ok(AttackReport::failure(name, 1, None, "gamma failed hold-out validation")),
        None => Err(Error::Degenerate("singular known-plaintext system".into())),
    }
}

/// k known plaintexts break the k-vector scheme: det[c_i - m_i 1] is a
/// multiple of p, and gamma solves gamma^T C0 = m^T mod p.
pub fn hek_known_plaintext_attack(
    cts: &[VectorCiphertext],
    plaintexts: &[BigUint],
    pq: &BigUint,
    holdout: Option<(&VectorCiphertext, &BigUint)>,
) -> Result<AttackReport> {
    let name = "known-plaintext";
    let k = cts.first().map(|c| c.v.len()).unwrap_or(0);
    if k < 2 || cts.len() != k || plaintexts.len() != k {
        return Err(Error::InvalidParams(format!(
            "attack needs exactly k={k} ciphertext/plaintext pairs, got {}/{}",
            cts.len(),
            plaintexts.len()
        )));
    }
    let cols: Vec<Vec<BigUint>> = cts
        .iter()
        .zip(plaintexts)
        .map(|(c, m)| c.v.iter().map(|v| sub_mod(v, m, pq)).collect())
        .collect();
    let det = det_mod(&cols, pq);
    let g = gcd(&det, pq);
    let Some((p, _)) = split_factor(&g, pq) else {
        return Ok(AttackReport::failure(
            name,
            1,
            None,
            "degenerate draw: determinant shares no proper factor",
        ));
    };
    let refs: Vec<&VectorCiphertext> = cts.iter().collect();
    match gamma_for_known_plaintexts(&refs, plaintexts, &p) {
        Some(gamma) if verify_gamma(&gamma, holdout, &p) => Ok(AttackReport {
            attack: name.into(),
            success: true,
            recovered_p: Some(p.to_string()),
            recovered_gamma: Some(gamma.iter().map(|g| g.to_string()).collect()),
            recovered_plaintexts: None,
            operations: 1,
            budget: None,
            note: None,
        }),
        Some(_) => Ok(AttackReport::failure(name, 1, None, "gamma failed hold-out validation")),
        None => Ok(AttackReport::failure(name, 1, None, "singular known-plaintext system")),
    }
}

/// Extract p from k encryptions of zero: their determinant picks up the
/// factor p but stays nonzero mod q with high probability.
pub fn zero_encryption_factor(zs: &[&VectorCiphertext], pq: &BigUint) -> Option<BigUint> {
    let k = zs.first()?.v.len();
    if zs.len() != k {
        return None;
    }
    let cols: Vec<Vec<BigUint>> = zs.iter().map(|z| z.v.clone()).collect();
    let det = det_mod(&cols, pq);
    let g = gcd(&det, pq);
    split_factor(&g, pq).map(|(p, _)| p)
}

/// Associator attack on unrepaired k >= 3 keys.
///
/// `(c1 c2) c3 - c1 (c2 c3)` is always an encryption of zero, but raw
/// associators alone can be too correlated: associators with a repeated outer
/// argument vanish by commutativity, so at k = 3 they span at most two
/// dimensions and any k of them have determinant 0. Multiplying one nonzero
/// associator by observed ciphertexts yields further zero encryptions outside
/// that span, and k of those expose p through the determinant. With the
/// multiplicative constants repair every product of zero encryptions stays in
/// a rank-deficient kernel mod q and the determinant stays trivial.
pub fn associator_attack(
    pool: &[VectorCiphertext],
    pp: &VectorPublicParams,
    budget: u64,
) -> AttackReport {
    let name = "associator";
    let k = pp.k;
    if k < 3 {
        return AttackReport::failure(name, 0, Some(budget), "inapplicable: the product is associative for k <= 2");
    }
    let n = pool.len();
    if n < 3 || n < k {
        return AttackReport::failure(name, 0, Some(budget), "need at least max(3, k) ciphertexts");
    }
    let mut ops = 0u64;
    'search: for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i == j || j == l || i == l {
                    continue;
                }
                if ops >= budget {
                    break 'search;
                }
                ops += 1;
                let left = pp.mul_raw(&pp.mul_raw(&pool[i], &pool[j]), &pool[l]);
                let right = pp.mul_raw(&pool[i], &pp.mul_raw(&pool[j], &pool[l]));
                let assoc = pp.sub_raw(&left, &right);
                if assoc.v.iter().all(BigUint::is_zero) {
                    continue;
                }
                // derived zero encryptions: the associator times k observed
                // ciphertexts, sliding over the pool until a window is
                // independent enough
                for start in 0..n {
                    if ops >= budget {
                        break 'search;
                    }
                    ops += 1;
                    let derived: Vec<VectorCiphertext> = (0..k)
                        .map(|t| pp.mul_raw(&assoc, &pool[(start + t) % n]))
                        .collect();
                    let refs: Vec<&VectorCiphertext> = derived.iter().collect();
                    if let Some(p) = zero_encryption_factor(&refs, &pp.pq) {
                        return AttackReport {
                            attack: name.into(),
                            success: true,
                            recovered_p: Some(p.to_string()),
                            recovered_gamma: None,
                            recovered_plaintexts: None,
                            operations: ops,
                            budget: Some(budget),
                            note: Some(format!(
                                "nonzero associator from triple ({i},{j},{l})"
                            )),
                        };
                    }
                }
            }
        }
    }
    AttackReport::failure(
        name,
        ops,
        Some(budget),
        "no factor from associators (keys look repaired)",
    )
}

/// Reuse attack on an encrypted Boolean circuit: three observations of one
/// wire pin two evaluations to the same encoding, so the product of pairwise
/// differences encrypts zero. k such wires expose p.
pub fn reuse_collision_attack(
    wire_observations: &[Vec<VectorCiphertext>],
    pp: &VectorPublicParams,
) -> AttackReport {
    let name = "reuse-collision";
    let k = pp.k;
    let mut ops = 0u64;
    let mut zeros: Vec<VectorCiphertext> = Vec::new();
    for obs in wire_observations {
        if obs.len() < 3 {
            return AttackReport::failure(
                name,
                ops,
                None,
                "inapplicable: need three observations of each wire",
            );
        }
        ops += 1;
        let d12 = pp.sub_raw(&obs[0], &obs[1]);
        let d13 = pp.sub_raw(&obs[0], &obs[2]);
        let d23 = pp.sub_raw(&obs[1], &obs[2]);
        let z = pp.mul_raw(&pp.mul_raw(&d12, &d13), &d23);
        if !z.v.iter().all(BigUint::is_zero) {
            zeros.push(z);
        }
    }
    if zeros.len() < k {
        return AttackReport::failure(
            name,
            ops,
            None,
            &format!("only {} usable zero encryptions, need {k}", zeros.len()),
        );
    }
    // try consecutive windows of k zero encryptions
    for window in zeros.windows(k) {
        ops += 1;
        let refs: Vec<&VectorCiphertext> = window.iter().collect();
        if let Some(p) = zero_encryption_factor(&refs, &pp.pq) {
            return AttackReport {
                attack: name.into(),
                success: true,
                recovered_p: Some(p.to_string()),
                recovered_gamma: None,
                recovered_plaintexts: None,
                operations: ops,
                budget: None,
                note: None,
            };
        }
    }
    AttackReport::failure(name, ops, None, "determinants stayed degenerate")
}

/// Constructive reduction: a full decryption oracle factors the modulus,
/// since c - Dec(c) is a multiple of p for any ciphertext.
pub fn factor_with_decryption_oracle(
    pq: &BigUint,
    sample_ciphertext: &BigUint,
    oracle: impl Fn(&BigUint) -> BigUint,
) -> Option<(BigUint, BigUint)> {
    let m = oracle(sample_ciphertext);
    let rp = sub_mod(sample_ciphertext, &m, pq);
    let g = gcd(&rp, pq);
    split_factor(&g, pq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ParameterSet, Scheme};
    use crate::rng::seeded_rng;
    use crate::scalar::ScalarSecretKey;
    use crate::vector::{generate, AssocFix};
    use num_bigint::{BigInt, RandBigInt};

    fn toy_scalar(rng: &mut impl rand::RngCore, rho: u32) -> (ScalarSecretKey, ParameterSet) {
        let params = ParameterSet::derive(Scheme::He1, 2, 4, rho, None, None).unwrap();
        let key = ScalarSecretKey::generate(&params, false, rng).unwrap();
        (key, params)
    }

    #[test]
    fn brute_force_recovers_low_entropy_key() {
        let mut rng = seeded_rng(91);
        let (key, params) = toy_scalar(&mut rng, 4);
        let pp = key.public_params();
        let ms: Vec<BigUint> = (0..4).map(|_| rng.gen_biguint_below(&params.m_bound)).collect();
        let cts: Vec<BigUint> = ms
            .iter()
            .map(|m| key.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap().value)
            .collect();
        let guesses = (0u32..16).map(BigUint::from);
        let report = brute_force_gcd(&cts, &pp.pq, None, guesses, 1 << 8, Some(params.lambda));
        assert!(report.success, "{:?}", report.note);
        assert_eq!(report.recovered_p.unwrap(), key.p.to_string());
        let recovered: Vec<BigUint> = report
            .recovered_plaintexts
            .unwrap()
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(recovered, ms);
    }

    #[test]
    fn brute_force_respects_budget() {
        let mut rng = seeded_rng(92);
        let (key, params) = toy_scalar(&mut rng, 16);
        let pp = key.public_params();
        let m = BigUint::from(60000u32);
        let ct = key.encrypt(&BigInt::from(m), &mut rng).unwrap().value;
        // ascending guesses never reach 60000 within budget 256
        let report = brute_force_gcd(
            std::slice::from_ref(&ct),
            &pp.pq,
            None,
            (0u32..0xFFFF).map(BigUint::from),
            256,
            Some(params.lambda),
        );
        assert!(!report.success);
        assert_eq!(report.operations, 256);
    }

    #[test]
    fn first_guess_right_is_immediate() {
        let mut rng = seeded_rng(93);
        let (key, params) = toy_scalar(&mut rng, 8);
        let pp = key.public_params();
        let ct = key.encrypt(&BigInt::from(7), &mut rng).unwrap().value;
        let report = brute_force_gcd(
            std::slice::from_ref(&ct),
            &pp.pq,
            None,
            std::iter::once(BigUint::from(7u32)),
            8,
            Some(params.lambda),
        );
        assert!(report.success);
        assert_eq!(report.operations, 1);
    }

    #[test]
    fn collision_attack_on_planted_repeat() {
        let mut rng = seeded_rng(94);
        let (key, params) = toy_scalar(&mut rng, 8);
        let pp = key.public_params();
        let mut cts: Vec<BigUint> = (0..6)
            .map(|_| {
                let m = rng.gen_biguint_below(&params.m_bound);
                key.encrypt(&BigInt::from(m), &mut rng).unwrap().value
            })
            .collect();
        // plant a collision
        let m = BigUint::from(9u32);
        cts.push(key.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap().value);
        cts.push(key.encrypt(&BigInt::from(m), &mut rng).unwrap().value);
        let report = collision_attack(&cts, &pp.pq);
        assert!(report.success);
        assert_eq!(report.recovered_p.unwrap(), key.p.to_string());
    }

    #[test]
    fn collision_attack_single_ciphertext_inapplicable() {
        let report = collision_attack(&[BigUint::from(5u32)], &BigUint::from(143u32));
        assert!(!report.success);
    }

    #[test]
    fn two_plaintext_attack_recovers_key() {
        let mut rng = seeded_rng(95);
        let params = ParameterSet::derive(Scheme::He2, 2, 4, 8, None, None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let (m1, m2) = (BigUint::from(3u32), BigUint::from(7u32));
        let c1 = bundle.sk.encrypt(&BigInt::from(m1.clone()), &mut rng).unwrap();
        let c2 = bundle.sk.encrypt(&BigInt::from(m2.clone()), &mut rng).unwrap();
        let m3 = BigUint::from(11u32);
        let c3 = bundle.sk.encrypt(&BigInt::from(m3.clone()), &mut rng).unwrap();
        let report =
            he2_two_plaintext_attack(&c1, &c2, &m1, &m2, &bundle.pp.pq, Some((&c3, &m3))).unwrap();
        assert!(report.success, "{:?}", report.note);
        assert_eq!(report.recovered_p.unwrap(), bundle.sk.p.to_string());
        // recovered gamma agrees with the true one mod p
        let gamma: Vec<BigUint> = report
            .recovered_gamma
            .unwrap()
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let want: Vec<BigUint> = bundle.sk.gamma.iter().map(|g| g % &bundle.sk.p).collect();
        assert_eq!(gamma, want);
    }

    #[test]
    fn two_plaintext_attack_worked_toy_instance() {
        // p=11, q=13, a=[2,5]: the attack recovers p and the decryption
        // vector [9, 3] mod 11 from two pinned known-plaintext ciphertexts
        use crate::matrix::ModMatrix;
        use crate::params::ParameterSet;
        let params = ParameterSet {
            scheme: Scheme::He2,
            d: 2,
            n_bits: 2,
            rho: 2,
            m_bound: BigUint::from(4u32),
            rho_prime: None,
            kappa_bits: None,
            lambda: 4,
            eta: 4,
            k: 2,
            shards: 1,
            insecure_toy: true,
        };
        let p = BigUint::from(11u32);
        let q = BigUint::from(13u32);
        let basis = vec![vec![BigUint::from(2u32), BigUint::from(5u32)]];
        let mut a_cols = vec![vec![BigUint::one(); 2]];
        a_cols.extend(basis.iter().cloned());
        let inv = ModMatrix::from_cols(a_cols)
            .invert_mod_semiprime(&p, &q)
            .unwrap();
        let gamma = vec![inv[(0, 0)].clone(), inv[(0, 1)].clone()];
        let sk = crate::vector::VectorSecretKey {
            p,
            q,
            kappa: None,
            k: 2,
            basis,
            gamma,
            signed: false,
            params,
        };
        let pq = sk.pq();
        let (m1, m2) = (BigUint::from(3u32), BigUint::from(2u32));
        let c1 = sk
            .encrypt_with(&BigInt::from(3), &BigUint::one(), None, &[BigUint::from(4u32)])
            .unwrap();
        let c2 = sk
            .encrypt_with(&BigInt::from(2), &BigUint::from(2u32), None, &[BigUint::from(3u32)])
            .unwrap();
        let report = he2_two_plaintext_attack(&c1, &c2, &m1, &m2, &pq, None).unwrap();
        assert!(report.success, "{:?}", report.note);
        assert_eq!(report.recovered_p.unwrap(), "11");
        assert_eq!(
            report.recovered_gamma.unwrap(),
            vec!["9".to_string(), "3".to_string()]
        );
    }

    #[test]
    fn two_plaintext_attack_wrong_guess_fails() {
        let mut rng = seeded_rng(96);
        let params = ParameterSet::derive(Scheme::He2, 2, 4, 8, None, None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let (m1, m2) = (BigUint::from(3u32), BigUint::from(7u32));
        let c1 = bundle.sk.encrypt(&BigInt::from(m1.clone()), &mut rng).unwrap();
        let c2 = bundle.sk.encrypt(&BigInt::from(m2), &mut rng).unwrap();
        let wrong = BigUint::from(8u32);
        let report =
            he2_two_plaintext_attack(&c1, &c2, &m1, &wrong, &bundle.pp.pq, None).unwrap();
        assert!(!report.success);
    }

    #[test]
    fn two_plaintext_attack_identical_pair_degenerate() {
        let mut rng = seeded_rng(97);
        let params = ParameterSet::derive(Scheme::He2, 2, 4, 8, None, None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let m = BigUint::from(3u32);
        let c = bundle.sk.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap();
        assert!(matches!(
            he2_two_plaintext_attack(&c, &c, &m, &m, &bundle.pp.pq, None),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn known_plaintext_attack_k3() {
        let mut rng = seeded_rng(98);
        let params = ParameterSet::derive(Scheme::Hek, 2, 4, 8, Some(3), None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let ms: Vec<BigUint> = (0..3).map(|_| rng.gen_biguint_below(&params.m_bound)).collect();
        let cts: Vec<VectorCiphertext> = ms
            .iter()
            .map(|m| bundle.sk.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap())
            .collect();
        let mh = BigUint::from(2u32);
        let ch = bundle.sk.encrypt(&BigInt::from(mh.clone()), &mut rng).unwrap();
        let report =
            hek_known_plaintext_attack(&cts, &ms, &bundle.pp.pq, Some((&ch, &mh))).unwrap();
        assert!(report.success, "{:?}", report.note);
        assert_eq!(report.recovered_p.unwrap(), bundle.sk.p.to_string());
        let gamma: Vec<BigUint> = report
            .recovered_gamma
            .unwrap()
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let want: Vec<BigUint> = bundle.sk.gamma.iter().map(|g| g % &bundle.sk.p).collect();
        assert_eq!(gamma, want);
    }

    #[test]
    fn known_plaintext_attack_underdetermined_declines() {
        let mut rng = seeded_rng(99);
        let params = ParameterSet::derive(Scheme::Hek, 2, 4, 8, Some(3), None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let ms: Vec<BigUint> = vec![BigUint::from(1u32), BigUint::from(2u32)];
        let cts: Vec<VectorCiphertext> = ms
            .iter()
            .map(|m| bundle.sk.encrypt(&BigInt::from(m.clone()), &mut rng).unwrap())
            .collect();
        assert!(hek_known_plaintext_attack(&cts, &ms, &bundle.pp.pq, None).is_err());
    }

    #[test]
    fn associator_attack_contrast() {
        let mut rng = seeded_rng(100);
        let params = ParameterSet::derive(Scheme::Hek, 3, 4, 8, Some(3), None).unwrap();

        // unrepaired keys: some draw must fall within a small budget
        let mut any_success = false;
        for _ in 0..10 {
            let bundle = generate(&params, AssocFix::Disabled, false, &mut rng).unwrap();
            let pool: Vec<VectorCiphertext> = (0..6)
                .map(|_| {
                    let m = rng.gen_biguint_below(&params.m_bound);
                    bundle.sk.encrypt(&BigInt::from(m), &mut rng).unwrap()
                })
                .collect();
            let report = associator_attack(&pool, &bundle.pp, 500);
            if report.success {
                assert_eq!(report.recovered_p.unwrap(), bundle.sk.p.to_string());
                any_success = true;
                break;
            }
        }
        assert!(any_success, "associator attack never succeeded on unrepaired keys");

        // repaired keys: never succeeds
        for _ in 0..5 {
            let bundle = generate(&params, AssocFix::Enabled, false, &mut rng).unwrap();
            let pool: Vec<VectorCiphertext> = (0..6)
                .map(|_| {
                    let m = rng.gen_biguint_below(&params.m_bound);
                    bundle.sk.encrypt(&BigInt::from(m), &mut rng).unwrap()
                })
                .collect();
            let report = associator_attack(&pool, &bundle.pp, 500);
            assert!(!report.success, "repaired keys leaked a factor");
        }
    }

    #[test]
    fn associator_attack_k2_inapplicable() {
        let mut rng = seeded_rng(101);
        let params = ParameterSet::derive(Scheme::He2, 2, 4, 8, None, None).unwrap();
        let bundle = generate(&params, AssocFix::Auto, false, &mut rng).unwrap();
        let pool: Vec<VectorCiphertext> = (0..4)
            .map(|_| bundle.sk.encrypt(&BigInt::from(1), &mut rng).unwrap())
            .collect();
        let report = associator_attack(&pool, &bundle.pp, 100);
        assert!(!report.success);
        assert!(report.note.unwrap().contains("inapplicable"));
    }

    #[test]
    fn reuse_collision_attack_breaks_reevaluated_circuit() {
        use crate::boolfhe::{compile_boolean_circuit, fhe_keygen, parse_bool_netlist};
        let mut rng = seeded_rng(103);
        let (bundle, kappa) = fhe_keygen(3, 40, &mut rng).unwrap();
        let text = "INPUT x0\nINPUT x1\nINPUT x2\n\
                    g0 = GATE1110 x0 x1\ng1 = GATE1110 g0 x2\ng2 = GATE1110 g1 x0\n\
                    g3 = GATE1110 g2 x1\nOUTPUT g3\n";
        let circ = parse_bool_netlist(text).unwrap();
        let (mut compiled, client) =
            compile_boolean_circuit(&circ, &bundle, &kappa, &mut rng).unwrap();

        // three evaluations with fresh inputs; the snooper records every wire
        let mut traces = Vec::new();
        for run in 0..3 {
            let bits = [run % 2 == 0, run % 3 == 0, true];
            let inputs = client.encrypt_inputs(&bits, &mut rng).unwrap();
            let (_, trace) = compiled.evaluate_traced(&inputs, run > 0).unwrap();
            traces.push(trace);
        }
        let wire_count = traces[0].len();
        let observations: Vec<Vec<VectorCiphertext>> = (0..wire_count)
            .map(|w| traces.iter().map(|t| t[w].clone()).collect())
            .collect();

        // the pairwise-difference product of one wire's observations
        // decrypts to zero
        let pp = &bundle.pp;
        let d12 = pp.sub_raw(&observations[0][0], &observations[0][1]);
        let d13 = pp.sub_raw(&observations[0][0], &observations[0][2]);
        let d23 = pp.sub_raw(&observations[0][1], &observations[0][2]);
        let z = pp.mul_raw(&pp.mul_raw(&d12, &d13), &d23);
        assert!((bundle.sk.gamma_project(&z) % &bundle.sk.p).is_zero());

        let report = reuse_collision_attack(&observations, pp);
        assert!(report.success, "{:?}", report.note);
        assert_eq!(report.recovered_p.unwrap(), bundle.sk.p.to_string());
    }

    #[test]
    fn reuse_collision_attack_single_run_inapplicable() {
        use crate::boolfhe::{compile_boolean_circuit, fhe_keygen, parse_bool_netlist};
        let mut rng = seeded_rng(104);
        let (bundle, kappa) = fhe_keygen(3, 40, &mut rng).unwrap();
        let circ =
            parse_bool_netlist("INPUT x0\nINPUT x1\ng0 = GATE1110 x0 x1\nOUTPUT g0\n").unwrap();
        let (mut compiled, client) =
            compile_boolean_circuit(&circ, &bundle, &kappa, &mut rng).unwrap();
        let inputs = client.encrypt_inputs(&[true, false], &mut rng).unwrap();
        let (_, trace) = compiled.evaluate_traced(&inputs, false).unwrap();
        let observations: Vec<Vec<VectorCiphertext>> =
            trace.into_iter().map(|c| vec![c]).collect();
        let report = reuse_collision_attack(&observations, &bundle.pp);
        assert!(!report.success);
        assert!(report.note.unwrap().contains("inapplicable"));
    }

    #[test]
    fn decryption_oracle_factors_modulus() {
        let mut rng = seeded_rng(102);
        let (key, _) = toy_scalar(&mut rng, 8);
        let pp = key.public_params();
        let c = key.encrypt(&BigInt::from(5), &mut rng).unwrap();
        let oracle = |value: &BigUint| {
            let ct = crate::scalar::ScalarCiphertext {
                value: value.clone(),
                bound: BigUint::one(),
            };
            key.decrypt_unchecked(&ct).to_biguint().unwrap()
        };
        let (p, q) = factor_with_decryption_oracle(&pp.pq, &c.value, oracle).unwrap();
        assert_eq!(p, key.p);
        assert_eq!(q, key.q);
    }
}
