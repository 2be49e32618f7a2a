//! Desk-scale encrypted inner-product pipeline.
//!
//! Mirrors a map/reduce deployment in-process: inputs are generated and
//! encrypted client-side, an input file holds d ciphertexts per line, a pool
//! of workers each multiplies the entries of an equal share of the lines, a
//! single reducer sums the products, and the client decrypts and verifies
//! against the plaintext shadow computation. Modular addition is exactly
//! associative and commutative, so the worker count can never change the
//! decrypted result.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::RngCore;
use rand_chacha::ChaCha20Rng;

use crate::arith::rand_below;
use crate::circuit::{check_capacity, ArithCircuit};
use crate::error::{Error, Result};
use crate::keys::{AnyCiphertext, AnyKey};
use crate::params::{ParameterSet, Scheme};
use crate::rng::seeded_rng;

/// One pipeline run: scheme parameters, input volume and worker count.
#[derive(Debug, Clone)]
pub struct PipelineJob {
    pub params: ParameterSet,
    /// Number of encrypted inputs; must be divisible by d.
    pub count: usize,
    pub workers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageTimings {
    pub init_us: u128,
    pub enc_mean_us: f64,
    pub map_us: u128,
    pub reduce_us: u128,
    pub decrypt_us: u128,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub scheme: Scheme,
    pub d: u32,
    pub rho: u32,
    pub count: usize,
    pub lines: usize,
    pub workers: usize,
    pub timings: StageTimings,
    pub result: BigInt,
    pub verified: bool,
}

/// Encrypted input lines (d ciphertexts per line), exposed so callers can
/// serialize them in the tab-separated input-file format.
pub struct PipelineArtifacts {
    pub report: PipelineReport,
    pub lines: Vec<Vec<AnyCiphertext>>,
}

/// Split `n` items over `workers` so share sizes differ by at most one.
pub fn equal_shares(n: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let workers = workers.max(1);
    let base = n / workers;
    let extra = n % workers;
    let mut out = Vec::with_capacity(workers);
    let mut start = 0;
    for w in 0..workers {
        let len = base + usize::from(w < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

pub fn run_pipeline(job: &PipelineJob) -> Result<PipelineArtifacts> {
    let params = &job.params;
    let d = params.d as usize;
    if d < 1 || job.count == 0 || !job.count.is_multiple_of(d) {
        return Err(Error::InvalidParams(format!(
            "input count {} must be a positive multiple of d={d}",
            job.count
        )));
    }
    // the d-way-product / sum circuit must fit the derived capacity
    let circuit = ArithCircuit::inner_product(job.count, d);
    check_capacity(&circuit, params)?;

    let mut rng: ChaCha20Rng = seeded_rng(job.seed);

    let t0 = Instant::now();
    let key = AnyKey::generate(params, false, &mut rng)?;
    let init_us = t0.elapsed().as_micros();

    let plaintexts: Vec<BigUint> = (0..job.count)
        .map(|_| rand_below(&params.m_bound, &mut rng))
        .collect();

    let t1 = Instant::now();
    let cts: Vec<AnyCiphertext> = plaintexts
        .iter()
        .map(|m| key.encrypt(&BigInt::from(m.clone()), &mut rng))
        .collect::<Result<_>>()?;
    let enc_mean_us = t1.elapsed().as_micros() as f64 / job.count as f64;

    let lines: Vec<Vec<AnyCiphertext>> = cts.chunks(d).map(|c| c.to_vec()).collect();
    let line_count = lines.len();

    // map: each worker multiplies together the d entries of its lines
    let t2 = Instant::now();
    let mut products: Vec<Option<AnyCiphertext>> = vec![None; line_count];
    {
        let shares = equal_shares(line_count, job.workers);
        let mut slots: Vec<&mut [Option<AnyCiphertext>]> = Vec::new();
        let mut rest: &mut [Option<AnyCiphertext>] = &mut products;
        for share in &shares {
            let (head, tail) = rest.split_at_mut(share.len());
            slots.push(head);
            rest = tail;
        }
        std::thread::scope(|scope| -> Result<()> {
            let mut handles = Vec::new();
            for (share, slot) in shares.iter().zip(slots) {
                let key = &key;
                let lines = &lines;
                let share = share.clone();
                handles.push(scope.spawn(move || -> Result<()> {
                    for (offset, line_idx) in share.enumerate() {
                        let line = &lines[line_idx];
                        let mut acc = line[0].clone();
                        for ct in &line[1..] {
                            acc = key.mul(&acc, ct)?;
                        }
                        slot[offset] = Some(acc);
                    }
                    Ok(())
                }));
            }
            for h in handles {
                h.join().expect("worker panicked")?;
            }
            Ok(())
        })?;
    }
    let map_us = t2.elapsed().as_micros();

    // reduce: a single fold; modular addition makes any order equivalent
    let t3 = Instant::now();
    let mut acc: Option<AnyCiphertext> = None;
    for p in products.into_iter().map(|p| p.expect("all lines mapped")) {
        acc = Some(match acc {
            None => p,
            Some(a) => key.add(&a, &p)?,
        });
    }
    let total = acc.expect("at least one line");
    let reduce_us = t3.elapsed().as_micros();

    let t4 = Instant::now();
    let result = key.decrypt(&total)?;
    let decrypt_us = t4.elapsed().as_micros();

    // plaintext shadow
    let mut shadow = BigUint::zero();
    for line in plaintexts.chunks(d) {
        let mut prod = line[0].clone();
        for m in &line[1..] {
            prod *= m;
        }
        shadow += prod;
    }
    let expected = match key.kappa() {
        Some(kappa) => BigInt::from(shadow.mod_floor(kappa)),
        None => BigInt::from(shadow),
    };
    if result != expected {
        return Err(Error::VerificationMismatch(format!(
            "pipeline result {result} != plaintext shadow {expected} (scheme {}, d={}, count={})",
            params.scheme, params.d, job.count
        )));
    }

    Ok(PipelineArtifacts {
        report: PipelineReport {
            scheme: params.scheme,
            d: params.d,
            rho: params.rho,
            count: job.count,
            lines: line_count,
            workers: job.workers.max(1),
            timings: StageTimings {
                init_us,
                enc_mean_us,
                map_us,
                reduce_us,
                decrypt_us,
            },
            result,
            verified: true,
        },
        lines,
    })
}

/// Mean per-operation costs of one scheme configuration, microseconds.
#[derive(Debug, Clone)]
pub struct OpCosts {
    pub scheme: Scheme,
    pub k: u32,
    pub d: u32,
    pub rho: u32,
    pub enc_us: f64,
    pub add_us: f64,
    pub mul_us: f64,
    pub dec_us: f64,
}

/// Measure per-op costs: means over `ops` operations, median over `rounds`
/// repetitions.
pub fn measure_ops(
    params: &ParameterSet,
    ops: usize,
    rounds: usize,
    rng: &mut impl RngCore,
) -> Result<OpCosts> {
    let key = AnyKey::generate(params, false, rng)?;
    let m1 = BigInt::from(rand_below(&params.m_bound, rng));
    let m2 = BigInt::from(rand_below(&params.m_bound, rng));
    let c1 = key.encrypt(&m1, rng)?;
    let c2 = key.encrypt(&m2, rng)?;

    let mut encs = Vec::with_capacity(rounds);
    let mut adds = Vec::with_capacity(rounds);
    let mut muls = Vec::with_capacity(rounds);
    let mut decs = Vec::with_capacity(rounds);
    for _ in 0..rounds.max(1) {
        let t = Instant::now();
        for _ in 0..ops {
            std::hint::black_box(key.encrypt(&m1, rng)?);
        }
        encs.push(t.elapsed().as_micros() as f64 / ops as f64);

        let t = Instant::now();
        for _ in 0..ops {
            std::hint::black_box(key.add(&c1, &c2)?);
        }
        adds.push(t.elapsed().as_micros() as f64 / ops as f64);

        let t = Instant::now();
        for _ in 0..ops {
            std::hint::black_box(key.mul(&c1, &c2)?);
        }
        muls.push(t.elapsed().as_micros() as f64 / ops as f64);

        let prod = key.mul(&c1, &c2)?;
        let t = Instant::now();
        for _ in 0..ops {
            std::hint::black_box(key.decrypt(&prod)?);
        }
        decs.push(t.elapsed().as_micros() as f64 / ops as f64);
    }
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(|a, b| a.total_cmp(b));
        v[v.len() / 2]
    };
    Ok(OpCosts {
        scheme: params.scheme,
        k: params.k,
        d: params.d,
        rho: params.rho,
        enc_us: median(encs),
        add_us: median(adds),
        mul_us: median(muls),
        dec_us: median(decs),
    })
}

/// One ordinal comparison between two measured configurations.
#[derive(Debug, Clone)]
pub struct OrderingClaim {
    pub label: String,
    pub ratio: f64,
    pub holds: bool,
}

/// Ordinal cost comparisons between configurations measured on the same
/// hardware: for matched (d, rho), a higher-dimension scheme must pay more
/// per multiplication. Absolute times are reported, never asserted.
pub fn relative_bench(costs: &[OpCosts], min_ratio: f64) -> Vec<OrderingClaim> {
    let mut claims = Vec::new();
    if costs.len() < 2 {
        return claims;
    }
    for a in costs {
        for b in costs {
            if a.d != b.d || a.rho != b.rho || a.k <= b.k {
                continue;
            }
            if a.scheme.is_noisy() != b.scheme.is_noisy() {
                continue;
            }
            let ratio = a.mul_us / b.mul_us;
            claims.push(OrderingClaim {
                label: format!(
                    "per-mul {}(k={}) vs {}(k={}) at d={} rho={}: {:.2}us vs {:.2}us",
                    a.scheme, a.k, b.scheme, b.k, a.d, a.rho, a.mul_us, b.mul_us
                ),
                ratio,
                holds: ratio > min_ratio,
            });
        }
    }
    claims
}
