//! Shared test support: random circuit generators with independent plaintext
//! oracles, and parameter helpers for the scheme grid.
//!
//! The oracles here deliberately avoid the library's own evaluation paths:
//! arithmetic circuits are evaluated over a private gate list kept by the
//! generator, Boolean circuits over a plain bit-vector interpreter, so a bug
//! in the production evaluator cannot hide behind itself.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use rand::RngCore;

use swhe_core::params::{ParameterSet, Scheme};

/// Derived parameters with eta clamped for suite speed. Lambda and kappa are
/// the honest derivation (they govern correctness); q's size only buys
/// security margin, so oversized eta drops to lambda + 16 under the toy flag.
pub fn suite_params(
    scheme: Scheme,
    d: u32,
    n_bits: u32,
    rho: u32,
    k: Option<u32>,
    shards: Option<u32>,
) -> ParameterSet {
    let mut p = ParameterSet::derive(scheme, d, n_bits, rho, k, shards).unwrap();
    if p.eta > p.lambda + 16 {
        p.eta = p.lambda + 16;
        p.insecure_toy = true;
    }
    p
}

// ------------------------------------------------------- arithmetic circuits

/// A generated circuit: netlist text for the library, private structure for
/// the oracle.
pub struct GenArith {
    pub text: String,
    n_inputs: usize,
    gates: Vec<(bool, usize, usize)>, // (is_mul, lhs, rhs) over node ids
    output: usize,
}

impl GenArith {
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Independent plaintext evaluation.
    pub fn eval_plain(&self, inputs: &[BigInt]) -> BigInt {
        assert_eq!(inputs.len(), self.n_inputs);
        let mut vals: Vec<BigInt> = inputs.to_vec();
        for &(is_mul, l, r) in &self.gates {
            let v = if is_mul {
                &vals[l] * &vals[r]
            } else {
                &vals[l] + &vals[r]
            };
            vals.push(v);
        }
        vals[self.output].clone()
    }
}

/// Random DAG with formal degree capped at `max_degree`.
pub fn random_arith_circuit(
    rng: &mut impl RngCore,
    max_inputs: usize,
    max_gates: usize,
    max_degree: u64,
) -> GenArith {
    let n_inputs = rng.gen_range(2..=max_inputs.max(2));
    let n_gates = rng.gen_range(1..=max_gates.max(1));
    let mut text = String::new();
    for i in 0..n_inputs {
        text.push_str(&format!("x{i}\n"));
    }
    let mut gates = Vec::with_capacity(n_gates);
    let mut degree: Vec<u64> = vec![1; n_inputs];
    for g in 0..n_gates {
        let total = n_inputs + g;
        let l = rng.gen_range(0..total);
        let r = rng.gen_range(0..total);
        let want_mul = rng.gen_bool(0.5);
        let is_mul = want_mul && degree[l] + degree[r] <= max_degree;
        let name = |idx: usize| {
            if idx < n_inputs {
                format!("x{idx}")
            } else {
                format!("g{}", idx - n_inputs)
            }
        };
        text.push_str(&format!(
            "g{g} = {} {} {}\n",
            if is_mul { "MUL" } else { "ADD" },
            name(l),
            name(r)
        ));
        degree.push(if is_mul {
            degree[l] + degree[r]
        } else {
            degree[l].max(degree[r])
        });
        gates.push((is_mul, l, r));
    }
    text.push_str(&format!("OUT g{}\n", n_gates - 1));
    GenArith {
        text,
        n_inputs,
        gates,
        output: n_inputs + n_gates - 1,
    }
}

// ---------------------------------------------------------- Boolean circuits

/// A generated NAND netlist plus an independent bit-level oracle.
pub struct GenBool {
    pub text: String,
    pub n_inputs: usize,
    gates: Vec<(usize, usize)>, // NAND over node ids
    outputs: Vec<usize>,
}

impl GenBool {
    pub fn eval_plain(&self, bits: &[bool]) -> Vec<bool> {
        assert_eq!(bits.len(), self.n_inputs);
        let mut vals: Vec<bool> = bits.to_vec();
        for &(l, r) in &self.gates {
            vals.push(!(vals[l] && vals[r]));
        }
        self.outputs.iter().map(|&o| vals[o]).collect()
    }
}

/// Random NAND-only netlist with at most `max_gates` gates and depth capped
/// at `max_depth`.
pub fn random_nand_circuit(
    rng: &mut impl RngCore,
    max_inputs: usize,
    max_gates: usize,
    max_depth: u64,
) -> GenBool {
    let n_inputs = rng.gen_range(2..=max_inputs.max(2));
    let n_gates = rng.gen_range(1..=max_gates.max(1));
    let mut text = String::new();
    for i in 0..n_inputs {
        text.push_str(&format!("INPUT x{i}\n"));
    }
    let mut gates = Vec::with_capacity(n_gates);
    let mut depth: Vec<u64> = vec![0; n_inputs];
    let name = |idx: usize, n_inputs: usize| {
        if idx < n_inputs {
            format!("x{idx}")
        } else {
            format!("g{}", idx - n_inputs)
        }
    };
    for g in 0..n_gates {
        let total = n_inputs + g;
        let (l, r) = loop {
            // bias one operand towards the newest gate so chains get deep
            let l = if g > 0 && rng.gen_bool(0.6) {
                total - 1
            } else {
                rng.gen_range(0..total)
            };
            let r = rng.gen_range(0..total);
            if depth[l].max(depth[r]) < max_depth {
                break (l, r);
            }
        };
        text.push_str(&format!(
            "g{g} = GATE1110 {} {}\n",
            name(l, n_inputs),
            name(r, n_inputs)
        ));
        depth.push(1 + depth[l].max(depth[r]));
        gates.push((l, r));
    }
    // up to three sinks as outputs, always including the last gate
    let mut outputs = vec![n_inputs + n_gates - 1];
    for _ in 0..rng.gen_range(0..3u32) {
        outputs.push(n_inputs + rng.gen_range(0..n_gates));
    }
    outputs.dedup();
    for &o in &outputs {
        text.push_str(&format!("OUTPUT g{}\n", o - n_inputs));
    }
    GenBool {
        text,
        n_inputs,
        gates,
        outputs,
    }
}

/// NAND-only 8-bit ripple-carry adder. Inputs: a0..a7, b0..b7, cin.
/// Outputs: s0..s7, cout. Nine NAND gates per full adder plus an inverter
/// pair buffering each carry, which pushes the carry-chain depth above 30.
pub fn ripple_carry_adder_nand(bits: usize) -> String {
    let mut text = String::new();
    for i in 0..bits {
        text.push_str(&format!("INPUT a{i}\n"));
    }
    for i in 0..bits {
        text.push_str(&format!("INPUT b{i}\n"));
    }
    text.push_str("INPUT cin\n");
    let mut carry = "cin".to_string();
    let mut outs = Vec::new();
    for i in 0..bits {
        // half XOR: x = a ^ b via 4 NAND gates
        text.push_str(&format!("t{i} = GATE1110 a{i} b{i}\n"));
        text.push_str(&format!("u{i} = GATE1110 a{i} t{i}\n"));
        text.push_str(&format!("v{i} = GATE1110 b{i} t{i}\n"));
        text.push_str(&format!("x{i} = GATE1110 u{i} v{i}\n"));
        // sum = x ^ carry
        text.push_str(&format!("p{i} = GATE1110 x{i} {carry}\n"));
        text.push_str(&format!("q{i} = GATE1110 x{i} p{i}\n"));
        text.push_str(&format!("r{i} = GATE1110 {carry} p{i}\n"));
        text.push_str(&format!("s{i} = GATE1110 q{i} r{i}\n"));
        // carry out = NAND(t, p) = (a AND b) OR (x AND carry), buffered
        text.push_str(&format!("c{i} = GATE1110 t{i} p{i}\n"));
        text.push_str(&format!("ci{i} = GATE1110 c{i} c{i}\n"));
        text.push_str(&format!("cb{i} = GATE1110 ci{i} ci{i}\n"));
        carry = format!("cb{i}");
        outs.push(format!("s{i}"));
    }
    for o in &outs {
        text.push_str(&format!("OUTPUT {o}\n"));
    }
    text.push_str(&format!("OUTPUT {carry}\n"));
    text
}

/// Little-endian bit decomposition for the adder oracle.
pub fn to_bits(value: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| (value >> i) & 1 == 1).collect()
}

pub fn from_bits(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
}

/// Random plaintext below the bound.
pub fn random_plain(rng: &mut impl RngCore, bound: &BigUint) -> BigInt {
    use num_bigint::RandBigInt;
    BigInt::from(rng.gen_biguint_below(bound))
}

/// Reduce an oracle value the way a noisy-scheme decryption would.
pub fn oracle_expected(value: &BigInt, kappa: Option<&BigUint>) -> BigInt {
    match kappa {
        Some(kappa) => {
            use num_integer::Integer;
            let m = BigInt::from(kappa.clone());
            value.mod_floor(&m)
        }
        None => value.clone(),
    }
}

#[allow(dead_code)]
pub fn zero() -> BigInt {
    BigInt::zero()
}
