//! Vector schemes: ciphertexts are k-vectors of residues modulo pq.
//!
//! A plaintext m encrypts as `(m + r*p)1 + sum_j s_j a_j`, where the secret
//! basis vectors a_1..a_{k-1} together with the all-ones vector a_0 span
//! Z_pq^k. Addition is componentwise. Multiplication augments both operands
//! to dimension k(k+1)/2 with the pair components `2v_i - v_j`, takes the
//! Hadamard product, and collapses back with the public re-encryption matrix
//! R, which satisfies `R U_k = I_k` and maps every augmented basis product
//! into the hidden span `rho_ij p 1 + sum_l sigma_ijl a_l`.
//!
//! For k >= 3 the induced product is not associative; triple products then
//! stay decryptable but their gamma-projections can differ mod q, which an
//! observer can exploit. Key generation therefore defaults to constants with
//! the multiplicative structure `rho_ij = rho_i rho_j mod q`,
//! `sum_l sigma_ijl rho_l = tau rho_i rho_j mod q`, which makes all
//! gamma-projections of triple products symmetric. The noisy variants do not
//! need the repair and default to independent constants.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{
    centered, crt_pair, gen_prime, mod_inverse, mul_mod, rand_below, rand_range, residue, sub_mod,
};
use crate::error::{Error, Result};
use crate::matrix::ModMatrix;
use crate::params::ParameterSet;
use crate::scalar::draw_kappa;

const KEYGEN_ATTEMPTS: u32 = 64;

/// Augmentation pair order: (i, j) with 0 <= i < j < k, lexicographic.
/// Component k + index(i, j) of an augmented vector is 2*v_i - v_j.
pub fn aug_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Unordered pairs (i, j) with 1 <= i <= j <= r, lexicographic; the index
/// order of the hidden structure constants.
pub fn sym_pairs(r: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(r * (r + 1) / 2);
    for i in 1..=r {
        for j in i..=r {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Augmented dimension k(k+1)/2.
pub fn aug_dim(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Augment a k-vector: the vector itself followed by 2*v_i - v_j per pair.
pub fn augment(v: &[BigUint], pq: &BigUint) -> Vec<BigUint> {
    let k = v.len();
    let mut out = Vec::with_capacity(aug_dim(k));
    out.extend_from_slice(v);
    for (i, j) in aug_pairs(k) {
        let doubled = (&v[i] << 1u32) % pq;
        out.push(sub_mod(&doubled, &v[j], pq));
    }
    out
}

/// The fixed 0/±1/2 augmentation matrix: top k rows the identity, one row
/// 2e_i - e_j per pair. `augment(v) = U_k v` for every v.
pub fn u_matrix(k: usize, pq: &BigUint) -> ModMatrix {
    let mut u = ModMatrix::zeros(aug_dim(k), k);
    for i in 0..k {
        u[(i, i)] = BigUint::one();
    }
    for (row, (i, j)) in aug_pairs(k).into_iter().enumerate() {
        u[(k + row, i)] = BigUint::from(2u32) % pq;
        u[(k + row, j)] = pq - BigUint::one();
    }
    u
}

/// Whether key generation repairs the non-associativity of the k >= 3 product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocFix {
    /// Repair for plain k >= 3 schemes, skip for noisy ones.
    Auto,
    Enabled,
    Disabled,
}

impl AssocFix {
    fn resolve(self, k: u32, noisy: bool) -> bool {
        match self {
            AssocFix::Auto => k >= 3 && !noisy,
            AssocFix::Enabled => k >= 3,
            AssocFix::Disabled => false,
        }
    }
}

/// Hidden structure constants of the re-encryption matrix, indexed by
/// [`sym_pairs`] of 1..=k-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    pub pairs: Vec<(usize, usize)>,
    /// rho_ij, drawn (or derived) mod q.
    pub rho: Vec<BigUint>,
    /// sigma_ijl for l in 1..=k-1, residues mod pq.
    pub sigma: Vec<Vec<BigUint>>,
    /// (tau, rho_i) when the associativity repair is active.
    pub fix: Option<(BigUint, Vec<BigUint>)>,
}

/// Secret key material for the vector schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSecretKey {
    pub p: BigUint,
    pub q: BigUint,
    pub kappa: Option<BigUint>,
    pub k: usize,
    /// a_1..a_{k-1}, each a k-vector of residues in [1, pq).
    pub basis: Vec<Vec<BigUint>>,
    /// First row of A_k^{-1} mod pq: gamma^T 1 = 1, gamma^T a_j = 0.
    pub gamma: Vec<BigUint>,
    pub signed: bool,
    pub params: ParameterSet,
}

/// Public evaluation parameters: modulus, bound capacity and R.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorPublicParams {
    pub pq: BigUint,
    pub bound_capacity: BigUint,
    pub k: usize,
    /// k x k(k+1)/2 re-encryption matrix.
    pub r_matrix: ModMatrix,
}

/// k-vector ciphertext with its running plaintext-magnitude bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorCiphertext {
    pub v: Vec<BigUint>,
    pub bound: BigUint,
}

/// Everything key generation produces. The structure constants stay with the
/// key owner; only `pp` ships to the evaluator.
#[derive(Debug, Clone)]
pub struct VectorKeyBundle {
    pub sk: VectorSecretKey,
    pub pp: VectorPublicParams,
    pub hidden: StructureConstants,
    /// Basis draws consumed before one passed the invertibility checks.
    pub keygen_attempts: u32,
}

/// Secret key plus public parameters, the shape key files reload into (the
/// structure constants are not persisted).
#[derive(Debug, Clone)]
pub struct VectorKeyPair {
    pub sk: VectorSecretKey,
    pub pp: VectorPublicParams,
}

impl VectorKeyBundle {
    pub fn pair(&self) -> VectorKeyPair {
        VectorKeyPair {
            sk: self.sk.clone(),
            pp: self.pp.clone(),
        }
    }
}

/// Recompute the decryption vector from a loaded basis, verifying that the
/// basis actually spans Z_pq^k.
pub fn gamma_from_basis(
    basis: &[Vec<BigUint>],
    p: &BigUint,
    q: &BigUint,
) -> Result<Vec<BigUint>> {
    let k = basis.len() + 1;
    let mut a_cols = vec![vec![BigUint::one(); k]];
    a_cols.extend(basis.iter().cloned());
    let a_matrix = ModMatrix::from_cols(a_cols);
    let inv_p = a_matrix
        .invert_mod_prime(p)
        .ok_or_else(|| Error::InvalidParams("basis is singular mod p".into()))?;
    let inv_q = a_matrix
        .invert_mod_prime(q)
        .ok_or_else(|| Error::InvalidParams("basis is singular mod q".into()))?;
    Ok((0..k)
        .map(|j| crt_pair(&inv_p[(0, j)], p, &inv_q[(0, j)], q))
        .collect())
}

/// Generate primes and keys for the given parameter set.
pub fn generate(
    params: &ParameterSet,
    fix: AssocFix,
    signed: bool,
    rng: &mut impl RngCore,
) -> Result<VectorKeyBundle> {
    if !params.scheme.is_vector() {
        return Err(Error::InvalidParams(format!(
            "scheme {} is not a vector scheme",
            params.scheme
        )));
    }
    params.validate()?;
    let p = gen_prime(params.lambda, rng)?;
    let q = loop {
        let q = gen_prime(params.eta, rng)?;
        if q != p {
            break q;
        }
    };
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    let kappa = params.kappa_bits.map(|kb| draw_kappa(kb, rng));
    generate_with_modulus(params, p, q, kappa, fix, signed, rng)
}

/// Generate keys over explicit primes (toy fixtures, CRT shards).
pub fn generate_with_modulus(
    params: &ParameterSet,
    p: BigUint,
    q: BigUint,
    kappa: Option<BigUint>,
    fix: AssocFix,
    signed: bool,
    rng: &mut impl RngCore,
) -> Result<VectorKeyBundle> {
    let k = params.k as usize;
    if k < 2 {
        return Err(Error::InvalidParams("vector schemes need k >= 2".into()));
    }
    let two = BigUint::from(2u32);
    if p == two || q == two {
        // U_k and the k=2 closed form both divide by 2.
        return Err(Error::InvalidParams("vector schemes need odd primes".into()));
    }
    if p >= q {
        return Err(Error::InvalidParams("p must be smaller than q".into()));
    }
    if params.scheme.is_noisy() != kappa.is_some() {
        return Err(Error::InvalidParams(
            "kappa must be present exactly for noisy schemes".into(),
        ));
    }
    let fix_enabled = fix.resolve(params.k, params.scheme.is_noisy());
    let pq = &p * &q;

    for attempt in 1..=KEYGEN_ATTEMPTS {
        let basis: Vec<Vec<BigUint>> = (1..k)
            .map(|_| {
                (0..k)
                    .map(|_| rand_range(&BigUint::one(), &pq, rng))
                    .collect()
            })
            .collect();

        if k == 2 {
            let a1 = &basis[0][0];
            let a2 = &basis[0][1];
            let nonzero = |v: &BigUint| !(v % &p).is_zero() && !(v % &q).is_zero();
            let diff = sub_mod(a2, a1, &pq);
            if !nonzero(a1) || !nonzero(a2) || !nonzero(&diff) {
                continue;
            }
        }

        let mut a_cols = vec![vec![BigUint::one(); k]];
        a_cols.extend(basis.iter().cloned());
        let a_matrix = ModMatrix::from_cols(a_cols);
        let (inv_p, inv_q) = match (
            a_matrix.invert_mod_prime(&p),
            a_matrix.invert_mod_prime(&q),
        ) {
            (Some(ip), Some(iq)) => (ip, iq),
            _ => continue, // basis draw failed to span Z_pq^k
        };
        let gamma: Vec<BigUint> = (0..k)
            .map(|j| crt_pair(&inv_p[(0, j)], &p, &inv_q[(0, j)], &q))
            .collect();

        let constants = match draw_structure_constants(k, fix_enabled, &p, &q, rng) {
            Some(c) => c,
            None => continue,
        };

        let r_matrix = if k == 2 {
            match build_r_closed_form_k2(&basis[0], &p, &pq, &constants) {
                Some(r) => r,
                None => continue,
            }
        } else {
            match build_r_general(&basis, &p, &q, &constants) {
                Some(r) => r,
                None => continue, // augmented product matrix not invertible
            }
        };

        let sk = VectorSecretKey {
            p,
            q,
            kappa,
            k,
            basis,
            gamma,
            signed,
            params: params.clone(),
        };
        let pp = VectorPublicParams {
            pq,
            bound_capacity: params.bound_capacity(),
            k,
            r_matrix,
        };
        return Ok(VectorKeyBundle {
            sk,
            pp,
            hidden: constants,
            keygen_attempts: attempt,
        });
    }
    Err(Error::KeygenExhausted(KEYGEN_ATTEMPTS))
}

fn draw_structure_constants(
    k: usize,
    fix: bool,
    p: &BigUint,
    q: &BigUint,
    rng: &mut impl RngCore,
) -> Option<StructureConstants> {
    let r_dim = k - 1;
    let pairs = sym_pairs(r_dim);
    let pq = p * q;
    if !fix {
        let rho = pairs.iter().map(|_| rand_below(q, rng)).collect();
        let sigma = pairs
            .iter()
            .map(|_| (0..r_dim).map(|_| rand_below(&pq, rng)).collect())
            .collect();
        return Some(StructureConstants {
            pairs,
            rho,
            sigma,
            fix: None,
        });
    }

    // rho_1 must be invertible mod q to solve for sigma_ij1.
    let mut tau = BigUint::zero();
    let mut rho_i: Vec<BigUint> = Vec::new();
    let mut ok = false;
    for _ in 0..KEYGEN_ATTEMPTS {
        tau = rand_below(q, rng);
        rho_i = (0..r_dim).map(|_| rand_below(q, rng)).collect();
        if !rho_i[0].is_zero() {
            ok = true;
            break;
        }
    }
    if !ok {
        return None;
    }
    let rho1_inv = mod_inverse(&rho_i[0], q)?;

    let mut rho = Vec::with_capacity(pairs.len());
    let mut sigma = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let rho_ij = mul_mod(&rho_i[i - 1], &rho_i[j - 1], q);
        let target = mul_mod(&tau, &rho_ij, q);
        // sigma_ijl mod q free for l >= 2, solved for l = 1; mod p uniform.
        let mut sig_q = vec![BigUint::zero(); r_dim];
        let mut partial = BigUint::zero();
        for l in 2..=r_dim {
            let s = rand_below(q, rng);
            partial = (partial + mul_mod(&s, &rho_i[l - 1], q)) % q;
            sig_q[l - 1] = s;
        }
        sig_q[0] = mul_mod(&sub_mod(&target, &partial, q), &rho1_inv, q);
        let sig_pq: Vec<BigUint> = sig_q
            .into_iter()
            .map(|sq| crt_pair(&rand_below(p, rng), p, &sq, q))
            .collect();
        rho.push(rho_ij);
        sigma.push(sig_pq);
    }
    Some(StructureConstants {
        pairs,
        rho,
        sigma,
        fix: Some((tau, rho_i)),
    })
}

/// k = 2 closed form: with beta = 2(a2 - a1)^2,
/// alpha_i = beta^{-1} (sigma a_i + rho p - a_i^2) and
/// R = [[1-2a1', a1', a1'], [-2a2', a2'+1, a2']].
pub fn build_r_closed_form_k2(
    a: &[BigUint],
    p: &BigUint,
    pq: &BigUint,
    constants: &StructureConstants,
) -> Option<ModMatrix> {
    let (a1, a2) = (&a[0], &a[1]);
    let rho = &constants.rho[0];
    let sigma = &constants.sigma[0][0];
    let diff = sub_mod(a2, a1, pq);
    let beta = (BigUint::from(2u32) * &diff * &diff) % pq;
    let beta_inv = mod_inverse(&beta, pq)?;
    let alpha = |ai: &BigUint| -> BigUint {
        let t = (sigma * ai + rho * p) % pq;
        let t = sub_mod(&t, &((ai * ai) % pq), pq);
        mul_mod(&t, &beta_inv, pq)
    };
    let alpha1 = alpha(a1);
    let alpha2 = alpha(a2);
    let one = BigUint::one();
    let row1 = vec![
        sub_mod(&one, &((&alpha1 << 1u32) % pq), pq),
        alpha1.clone(),
        alpha1,
    ];
    let row2 = vec![
        sub_mod(&BigUint::zero(), &((&alpha2 << 1u32) % pq), pq),
        (&alpha2 + &one) % pq,
        alpha2,
    ];
    Some(ModMatrix::from_rows(vec![row1, row2]))
}

/// General construction: solve `R A*2 = [A | C]` where A*2 has columns
/// `a*_i ∘ a*_j` over all basis pairs and C realises the structure constants.
pub fn build_r_general(
    basis: &[Vec<BigUint>],
    p: &BigUint,
    q: &BigUint,
    constants: &StructureConstants,
) -> Option<ModMatrix> {
    let k = basis.len() + 1;
    let kstar = aug_dim(k);
    let pq = p * q;

    let mut astars = Vec::with_capacity(k);
    astars.push(augment(&vec![BigUint::one(); k], &pq));
    for a in basis {
        astars.push(augment(a, &pq));
    }

    let hadamard = |x: &[BigUint], y: &[BigUint]| -> Vec<BigUint> {
        x.iter().zip(y).map(|(a, b)| mul_mod(a, b, &pq)).collect()
    };

    // Columns (0,0), (0,1), ..., (0,k-1) then the proper basis pairs: the
    // first k columns are the augmented basis itself.
    let mut asq_cols = Vec::with_capacity(kstar);
    for j in 0..k {
        asq_cols.push(hadamard(&astars[0], &astars[j]));
    }
    for &(i, j) in &constants.pairs {
        asq_cols.push(hadamard(&astars[i], &astars[j]));
    }
    let asq = ModMatrix::from_cols(asq_cols);
    let asq_inv = asq.invert_mod_semiprime(p, q)?;

    let mut rhs_cols: Vec<Vec<BigUint>> = Vec::with_capacity(kstar);
    rhs_cols.push(vec![BigUint::one(); k]);
    for a in basis {
        rhs_cols.push(a.clone());
    }
    for (pair_idx, _) in constants.pairs.iter().enumerate() {
        let rho_p = mul_mod(&constants.rho[pair_idx], p, &pq);
        let mut col = vec![rho_p; k];
        for (l, a) in basis.iter().enumerate() {
            let sig = &constants.sigma[pair_idx][l];
            for (row, comp) in col.iter_mut().enumerate() {
                *comp = (&*comp + sig * &a[row]) % &pq;
            }
        }
        rhs_cols.push(col);
    }
    let rhs = ModMatrix::from_cols(rhs_cols);
    Some(rhs.mul_mod(&asq_inv, &pq))
}

impl VectorSecretKey {
    pub fn pq(&self) -> BigUint {
        &self.p * &self.q
    }

    fn check_message(&self, m: &BigInt) -> Result<()> {
        let m_bound = BigInt::from(self.params.m_bound.clone());
        if self.signed {
            let half = BigInt::from(&self.p >> 1);
            if *m < -half.clone() || *m >= half {
                return Err(Error::OutOfRange(format!(
                    "signed plaintext {m} outside [-(p-1)/2, (p-1)/2)"
                )));
            }
            if *m < -m_bound.clone() || *m >= m_bound {
                return Err(Error::OutOfRange(format!("signed plaintext {m} outside [-M, M)")));
            }
            if let Some(kappa) = &self.kappa {
                let half_kappa = BigInt::from(kappa >> 1);
                if m.magnitude() > half_kappa.magnitude() {
                    return Err(Error::OutOfRange(format!(
                        "signed plaintext {m} exceeds (kappa-1)/2"
                    )));
                }
            }
        } else if m.sign() == num_bigint::Sign::Minus || *m >= m_bound {
            return Err(Error::OutOfRange(format!("plaintext {m} outside [0, M)")));
        }
        Ok(())
    }

    /// Fresh-encryption bound, as in the scalar schemes.
    pub fn fresh_bound(&self) -> BigUint {
        let mut base = self.params.m_bound.clone();
        if self.signed {
            base <<= 1;
        }
        if let Some(kappa) = &self.kappa {
            base += kappa * kappa;
        }
        base
    }

    /// Encrypt: r from [0, q), noise s from [0, kappa), basis coefficients
    /// from [0, pq).
    pub fn encrypt(&self, m: &BigInt, rng: &mut impl RngCore) -> Result<VectorCiphertext> {
        let pq = self.pq();
        let r = rand_below(&self.q, rng);
        let s = self.kappa.as_ref().map(|kappa| rand_below(kappa, rng));
        let coeffs: Vec<BigUint> = (1..self.k).map(|_| rand_below(&pq, rng)).collect();
        self.encrypt_with(m, &r, s.as_ref(), &coeffs)
    }

    /// Test hook: encrypt with pinned randomness.
    pub fn encrypt_with(
        &self,
        m: &BigInt,
        r: &BigUint,
        s: Option<&BigUint>,
        coeffs: &[BigUint],
    ) -> Result<VectorCiphertext> {
        self.check_message(m)?;
        if coeffs.len() != self.k - 1 {
            return Err(Error::InvalidParams(format!(
                "need {} basis coefficients, got {}",
                self.k - 1,
                coeffs.len()
            )));
        }
        let pq = self.pq();
        let mut base = residue(m, &pq);
        if let Some(kappa) = &self.kappa {
            let s = s.ok_or_else(|| Error::InvalidParams("noisy scheme needs s".into()))?;
            base = (base + s * kappa) % &pq;
        }
        base = (base + r * &self.p) % &pq;
        Ok(VectorCiphertext {
            v: self.spread(&base, coeffs, &pq),
            bound: self.fresh_bound(),
        })
    }

    /// Encrypt an arbitrary residue of Z_pq without the plaintext range check.
    /// Used where "plaintexts" are full residues (encrypted circuit
    /// coefficients); `bound` is stamped by the caller.
    pub fn encrypt_residue(
        &self,
        m: &BigUint,
        bound: BigUint,
        rng: &mut impl RngCore,
    ) -> VectorCiphertext {
        let pq = self.pq();
        let r = rand_below(&self.q, rng);
        let coeffs: Vec<BigUint> = (1..self.k).map(|_| rand_below(&pq, rng)).collect();
        let base = (m % &pq + r * &self.p) % &pq;
        VectorCiphertext {
            v: self.spread(&base, coeffs.as_slice(), &pq),
            bound,
        }
    }

    fn spread(&self, base: &BigUint, coeffs: &[BigUint], pq: &BigUint) -> Vec<BigUint> {
        (0..self.k)
            .map(|row| {
                let mut acc = base.clone();
                for (a, s) in self.basis.iter().zip(coeffs) {
                    acc += s * &a[row];
                }
                acc % pq
            })
            .collect()
    }

    /// gamma^T c mod pq, before any reduction mod p. The projection of any
    /// valid ciphertext is m + (multiple of p).
    pub fn gamma_project(&self, c: &VectorCiphertext) -> BigUint {
        let pq = self.pq();
        let mut acc = BigUint::zero();
        for (g, v) in self.gamma.iter().zip(&c.v) {
            acc += g * v;
        }
        acc % pq
    }

    pub fn decrypt(&self, c: &VectorCiphertext) -> Result<BigInt> {
        if c.bound >= self.p {
            return Err(Error::OverflowRisk {
                bound: c.bound.to_string(),
                capacity: self.p.to_string(),
            });
        }
        Ok(self.decrypt_unchecked(c))
    }

    pub fn decrypt_unchecked(&self, c: &VectorCiphertext) -> BigInt {
        let v = self.gamma_project(c) % &self.p;
        let mut x = if self.signed {
            centered(&v, &self.p)
        } else {
            BigInt::from(v)
        };
        if let Some(kappa) = &self.kappa {
            let r = residue(&x, kappa);
            x = if self.signed {
                centered(&r, kappa)
            } else {
                BigInt::from(r)
            };
        }
        x
    }
}

impl VectorPublicParams {
    fn check_bound(&self, bound: &BigUint) -> Result<()> {
        if *bound > self.bound_capacity {
            return Err(Error::OverflowRisk {
                bound: bound.to_string(),
                capacity: self.bound_capacity.to_string(),
            });
        }
        Ok(())
    }

    fn check_dim(&self, c: &VectorCiphertext) -> Result<()> {
        if c.v.len() != self.k {
            return Err(Error::InvalidParams(format!(
                "ciphertext dimension {} does not match k={}",
                c.v.len(),
                self.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> Result<VectorCiphertext> {
        let bound = &a.bound + &b.bound;
        self.check_bound(&bound)?;
        Ok(self.add_raw(a, b))
    }

    /// Componentwise sum without the capacity check.
    pub fn add_raw(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> VectorCiphertext {
        VectorCiphertext {
            v: a.v
                .iter()
                .zip(&b.v)
                .map(|(x, y)| (x + y) % &self.pq)
                .collect(),
            bound: &a.bound + &b.bound,
        }
    }

    /// Componentwise difference; the magnitude bound of a difference is the
    /// sum of the operand bounds.
    pub fn sub_raw(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> VectorCiphertext {
        VectorCiphertext {
            v: a.v
                .iter()
                .zip(&b.v)
                .map(|(x, y)| sub_mod(x, y, &self.pq))
                .collect(),
            bound: &a.bound + &b.bound,
        }
    }

    pub fn mul(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> Result<VectorCiphertext> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let bound = &a.bound * &b.bound;
        self.check_bound(&bound)?;
        Ok(self.mul_raw(a, b))
    }

    /// `R (a* ∘ b*)` without the capacity check.
    pub fn mul_raw(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> VectorCiphertext {
        let za = augment(&a.v, &self.pq);
        let zb = augment(&b.v, &self.pq);
        let had: Vec<BigUint> = za
            .iter()
            .zip(&zb)
            .map(|(x, y)| mul_mod(x, y, &self.pq))
            .collect();
        VectorCiphertext {
            v: self.r_matrix.mul_vec_mod(&had, &self.pq),
            bound: &a.bound * &b.bound,
        }
    }

    /// Re-encryption of a single ciphertext: `R c*`, the identity map.
    pub fn reencrypt(&self, c: &VectorCiphertext) -> VectorCiphertext {
        let star = augment(&c.v, &self.pq);
        VectorCiphertext {
            v: self.r_matrix.mul_vec_mod(&star, &self.pq),
            bound: c.bound.clone(),
        }
    }

    /// Trivial encryption of a public constant: `value * 1`, no randomness.
    pub fn constant(&self, value: &BigInt) -> VectorCiphertext {
        let r = residue(value, &self.pq);
        VectorCiphertext {
            v: vec![r; self.k],
            bound: value.magnitude().clone().max(BigUint::one()),
        }
    }
}
