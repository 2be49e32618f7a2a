//! Encrypted Boolean circuits over the k-vector scheme.
//!
//! Every wire carries a fresh noisy encoding of its bit: even `2*s0` for 0,
//! odd `1 + 2*s1` for 1, with s0, s1 below kappa. Gates become encrypted
//! quadratics `Q(x, y) = a + bx + cy + dxy` interpolated through the four
//! input-encoding pairs so that Q maps them exactly onto the output wire's
//! encodings; input wires get encrypted linear maps. Because every wire value
//! is freshly bounded below 2*kappa by construction, noise does not grow with
//! circuit depth and arbitrary-depth circuits evaluate correctly.
//!
//! The price is single use: evaluating one compiled circuit on three input
//! sets pins two evaluations of some wire to the same encoding, and the
//! product of pairwise differences is then an encryption of zero — see
//! [`crate::attacks::reuse_collision_attack`]. Re-evaluation therefore
//! requires an explicit override.
//!
//! Netlist format: `INPUT x`, `g = GATE<tt4> a b` with tt4 the 4-bit truth
//! table over input pairs (00, 01, 10, 11) — NAND is `GATE1110` — and
//! `OUTPUT g`. Constant inputs are not representable; eliminate them upstream.

use num_bigint::BigUint;
use num_traits::One;
use rand::RngCore;

use crate::arith::{mod_inverse, mul_mod, pow2, rand_below, sub_mod};
use crate::error::{Error, Result};
use crate::params::{ParameterSet, Scheme};
use crate::vector::{AssocFix, VectorCiphertext, VectorKeyBundle, VectorPublicParams, VectorSecretKey};

const COMPILE_ATTEMPTS: u32 = 64;

/// Node reference inside a Boolean netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    Input(usize),
    Gate(usize),
}

/// Two-input gate with an arbitrary 4-bit truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolGate {
    /// Output bit for input pairs (0,0), (0,1), (1,0), (1,1).
    pub tt: [bool; 4],
    pub a: NodeRef,
    pub b: NodeRef,
    pub name: String,
}

pub const NAND_TT: [bool; 4] = [true, true, true, false];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolCircuit {
    pub input_names: Vec<String>,
    pub gates: Vec<BoolGate>,
    pub outputs: Vec<NodeRef>,
}

impl BoolCircuit {
    pub fn input_count(&self) -> usize {
        self.input_names.len()
    }

    /// Longest gate chain to any output.
    pub fn depth(&self) -> u64 {
        let mut depth = vec![0u64; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            let d = |r: NodeRef| match r {
                NodeRef::Input(_) => 0,
                NodeRef::Gate(h) => depth[h],
            };
            depth[i] = 1 + d(g.a).max(d(g.b));
        }
        self.outputs
            .iter()
            .map(|&o| match o {
                NodeRef::Input(_) => 0,
                NodeRef::Gate(g) => depth[g],
            })
            .max()
            .unwrap_or(0)
    }
}

/// Parse the Boolean netlist format.
pub fn parse_bool_netlist(text: &str) -> Result<BoolCircuit> {
    use std::collections::HashMap;
    let mut inputs: Vec<String> = Vec::new();
    let mut gates: Vec<BoolGate> = Vec::new();
    let mut by_name: HashMap<String, NodeRef> = HashMap::new();
    let mut outputs = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["INPUT", name] => {
                if by_name.contains_key(*name) {
                    return Err(Error::Parse(format!(
                        "line {lineno}: duplicate name '{name}'"
                    )));
                }
                by_name.insert(name.to_string(), NodeRef::Input(inputs.len()));
                inputs.push(name.to_string());
            }
            ["OUTPUT", name] => {
                let node = by_name.get(*name).ok_or_else(|| {
                    Error::Parse(format!("line {lineno}: OUTPUT of undeclared '{name}'"))
                })?;
                outputs.push(*node);
            }
            [name, "=", gate, a, b] => {
                let table = gate.strip_prefix("GATE").ok_or_else(|| {
                    Error::Parse(format!("line {lineno}: expected GATE<tt4>, got '{gate}'"))
                })?;
                if table.len() != 4 || !table.chars().all(|c| c == '0' || c == '1') {
                    return Err(Error::Parse(format!(
                        "line {lineno}: truth table must be 4 binary digits, got '{table}'"
                    )));
                }
                let mut tt = [false; 4];
                for (i, ch) in table.chars().enumerate() {
                    tt[i] = ch == '1';
                }
                if by_name.contains_key(*name) {
                    return Err(Error::Parse(format!(
                        "line {lineno}: duplicate name '{name}'"
                    )));
                }
                let resolve = |tok: &str| {
                    by_name.get(tok).copied().ok_or_else(|| {
                        Error::Parse(format!(
                            "line {lineno}: operand '{tok}' not defined before use"
                        ))
                    })
                };
                let a = resolve(a)?;
                let b = resolve(b)?;
                by_name.insert(name.to_string(), NodeRef::Gate(gates.len()));
                gates.push(BoolGate {
                    tt,
                    a,
                    b,
                    name: name.to_string(),
                });
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected INPUT, OUTPUT or gate definition"
                )))
            }
        }
    }
    if outputs.is_empty() {
        return Err(Error::Parse("netlist declares no OUTPUT".into()));
    }
    Ok(BoolCircuit {
        input_names: inputs,
        gates,
        outputs,
    })
}

/// Noisy encoding pair of one wire: even for bit 0, odd for bit 1, both < 2*kappa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireEncoding {
    pub w0: BigUint,
    pub w1: BigUint,
}

impl WireEncoding {
    fn draw(kappa: &BigUint, rng: &mut impl RngCore) -> WireEncoding {
        let s0 = rand_below(kappa, rng);
        let s1 = rand_below(kappa, rng);
        WireEncoding {
            w0: &s0 << 1u32,
            w1: (&s1 << 1u32) + BigUint::one(),
        }
    }

    pub fn get(&self, bit: bool) -> &BigUint {
        if bit {
            &self.w1
        } else {
            &self.w0
        }
    }
}

/// Plaintext coefficients of an input-wire map L(x) = a + bx carrying
/// {alpha0, alpha1} to {gamma0, gamma1}.
pub fn linear_coefficients(
    alpha: (&BigUint, &BigUint),
    gamma: (&BigUint, &BigUint),
    pq: &BigUint,
) -> Option<(BigUint, BigUint)> {
    let (a0, a1) = alpha;
    let (g0, g1) = gamma;
    if a0 == a1 {
        return None;
    }
    let inv = mod_inverse(&sub_mod(a1, a0, pq), pq)?;
    let a = mul_mod(&inv, &sub_mod(&(a1 * g0), &(a0 * g1), pq), pq);
    let b = mul_mod(&inv, &sub_mod(g1, g0, pq), pq);
    Some((a, b))
}

/// Plaintext coefficients of a gate quadratic Q(x, y) = a + bx + cy + dxy
/// interpolated through the four points (alpha_u, beta_w) -> target_uw.
pub fn quad_coefficients(
    alpha: (&BigUint, &BigUint),
    beta: (&BigUint, &BigUint),
    targets: &[BigUint; 4],
    pq: &BigUint,
) -> Option<(BigUint, BigUint, BigUint, BigUint)> {
    let (a0, a1) = alpha;
    let (b0, b1) = beta;
    if a0 == a1 || b0 == b1 {
        return None;
    }
    let inv_da = mod_inverse(&sub_mod(a1, a0, pq), pq)?;
    let inv_db = mod_inverse(&sub_mod(b1, b0, pq), pq)?;
    let (t00, t01, t10, t11) = (&targets[0], &targets[1], &targets[2], &targets[3]);
    // column differences give c + d*alpha at each alpha
    let lo = mul_mod(&inv_db, &sub_mod(t01, t00, pq), pq); // c + d*a0
    let hi = mul_mod(&inv_db, &sub_mod(t11, t10, pq), pq); // c + d*a1
    let d = mul_mod(&inv_da, &sub_mod(&hi, &lo, pq), pq);
    let c = sub_mod(&lo, &mul_mod(&d, a0, pq), pq);
    let b = sub_mod(
        &mul_mod(&inv_da, &sub_mod(t10, t00, pq), pq),
        &mul_mod(&d, b0, pq),
        pq,
    );
    let mut a = sub_mod(t00, &mul_mod(&b, a0, pq), pq);
    a = sub_mod(&a, &mul_mod(&c, b0, pq), pq);
    a = sub_mod(&a, &mul_mod(&d, &mul_mod(a0, b0, pq), pq), pq);
    Some((a, b, c, d))
}

fn eval_quad_plain(
    coeffs: &(BigUint, BigUint, BigUint, BigUint),
    x: &BigUint,
    y: &BigUint,
    pq: &BigUint,
) -> BigUint {
    let (a, b, c, d) = coeffs;
    let mut acc = a.clone();
    acc += b * x;
    acc += c * y;
    acc += d * &mul_mod(x, y, pq);
    acc % pq
}

/// Encrypted program attached to one wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireProgram {
    Linear {
        a: VectorCiphertext,
        b: VectorCiphertext,
    },
    Quad {
        a: VectorCiphertext,
        b: VectorCiphertext,
        c: VectorCiphertext,
        d: VectorCiphertext,
    },
}

/// One wire of the compiled circuit (a single fan-out edge of the netlist).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wire {
    pub source: NodeRef,
    pub label: String,
}

/// Evaluator-side compiled circuit: structure plus encrypted coefficients.
/// Contains no encodings and no keys.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub circuit: BoolCircuit,
    pub pp: VectorPublicParams,
    pub kappa: BigUint,
    /// Per gate, the indices of its two input wires.
    pub gate_inputs: Vec<(usize, usize)>,
    /// Per circuit output, its wire index.
    pub output_wires: Vec<usize>,
    pub wires: Vec<Wire>,
    pub programs: Vec<WireProgram>,
    /// Reuse guard; a second evaluation requires an explicit override.
    pub used: bool,
}

/// Client-side secrets: the vector key, kappa, and the encodings needed to
/// encrypt inputs (wire encodings are retained for auditing).
#[derive(Debug, Clone)]
pub struct FheClientKey {
    pub sk: VectorSecretKey,
    pub kappa: BigUint,
    pub input_encodings: Vec<WireEncoding>,
    pub wire_encodings: Vec<WireEncoding>,
}

/// Size a k-vector key for encrypted Boolean evaluation: kappa is the largest
/// power-of-two range with `8*kappa^3 < 2^(lambda-1)`, so one quadratic in two
/// wire values stays decryptable.
pub fn fhe_keygen(
    k: u32,
    lambda: u32,
    rng: &mut impl RngCore,
) -> Result<(VectorKeyBundle, BigUint)> {
    if k < 3 {
        return Err(Error::InvalidParams(
            "encrypted Boolean evaluation needs k >= 3".into(),
        ));
    }
    if lambda < 13 {
        return Err(Error::InvalidParams("lambda too small to fit kappa".into()));
    }
    let kappa_bits = (lambda - 4) / 3;
    let rho = kappa_bits + 1; // wire values live in [0, 2*kappa)
    let eta = (lambda as u64 * lambda as u64)
        .div_ceil(rho as u64)
        .saturating_sub(lambda as u64)
        .max(lambda as u64 + 2) as u32;
    let params = ParameterSet {
        scheme: Scheme::Hek,
        d: 2,
        n_bits: 1,
        rho,
        m_bound: pow2(rho),
        rho_prime: None,
        kappa_bits: None,
        lambda,
        eta,
        k,
        shards: 1,
        insecure_toy: (lambda as u64) < 2 * rho as u64,
    };
    let bundle = generate_unvalidated(&params, rng)?;
    let kappa = crate::scalar::draw_kappa(kappa_bits, rng);
    Ok((bundle, kappa))
}

// The wire-value parameter set intentionally under-sizes lambda relative to
// the generic capacity rule (wire polynomials never deepen), so it skips
// ParameterSet::validate.
fn generate_unvalidated(
    params: &ParameterSet,
    rng: &mut impl RngCore,
) -> Result<VectorKeyBundle> {
    let p = crate::arith::gen_prime(params.lambda, rng)?;
    let q = loop {
        let q = crate::arith::gen_prime(params.eta, rng)?;
        if q != p {
            break q;
        }
    };
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    crate::vector::generate_with_modulus(params, p, q, None, AssocFix::Auto, false, rng)
}

/// The wire list of a netlist: two input wires per gate plus one wire per
/// circuit output, in a fixed derivation order shared by the compiler and the
/// file format.
pub fn wire_layout(circuit: &BoolCircuit) -> (Vec<Wire>, Vec<(usize, usize)>, Vec<usize>) {
    let mut wires = Vec::new();
    let mut gate_inputs = Vec::with_capacity(circuit.gates.len());
    let name_of = |r: NodeRef| match r {
        NodeRef::Input(i) => circuit.input_names[i].clone(),
        NodeRef::Gate(g) => circuit.gates[g].name.clone(),
    };
    for (gi, gate) in circuit.gates.iter().enumerate() {
        let a_idx = wires.len();
        wires.push(Wire {
            source: gate.a,
            label: format!("{}->{}:a", name_of(gate.a), circuit.gates[gi].name),
        });
        let b_idx = wires.len();
        wires.push(Wire {
            source: gate.b,
            label: format!("{}->{}:b", name_of(gate.b), circuit.gates[gi].name),
        });
        gate_inputs.push((a_idx, b_idx));
    }
    let mut output_wires = Vec::with_capacity(circuit.outputs.len());
    for (oi, &out) in circuit.outputs.iter().enumerate() {
        output_wires.push(wires.len());
        wires.push(Wire {
            source: out,
            label: format!("{}->out{}", name_of(out), oi),
        });
    }
    (wires, gate_inputs, output_wires)
}

/// Compile a Boolean netlist into encrypted wire programs.
pub fn compile_boolean_circuit(
    circuit: &BoolCircuit,
    bundle: &VectorKeyBundle,
    kappa: &BigUint,
    rng: &mut impl RngCore,
) -> Result<(CompiledCircuit, FheClientKey)> {
    if bundle.sk.k < 3 {
        return Err(Error::InvalidParams(
            "encrypted Boolean evaluation needs k >= 3".into(),
        ));
    }
    let pq = bundle.sk.pq();
    let two_kappa = kappa << 1u32;
    let worst = (&two_kappa) * (&two_kappa) * (&two_kappa);
    if worst > bundle.pp.bound_capacity {
        return Err(Error::CapacityViolation {
            node: "wire quadratic".into(),
            bound: worst.to_string(),
            capacity: bundle.pp.bound_capacity.to_string(),
        });
    }

    let (wires, gate_inputs, output_wires) = wire_layout(circuit);

    'attempt: for _ in 0..COMPILE_ATTEMPTS {
        let input_encodings: Vec<WireEncoding> = (0..circuit.input_count())
            .map(|_| WireEncoding::draw(kappa, rng))
            .collect();
        let wire_encodings: Vec<WireEncoding> =
            (0..wires.len()).map(|_| WireEncoding::draw(kappa, rng)).collect();

        // Build and verify every program in plaintext before encrypting.
        let mut plain_programs = Vec::with_capacity(wires.len());
        for (wi, wire) in wires.iter().enumerate() {
            let target = &wire_encodings[wi];
            match wire.source {
                NodeRef::Input(i) => {
                    let src = &input_encodings[i];
                    let Some((a, b)) = linear_coefficients(
                        (&src.w0, &src.w1),
                        (&target.w0, &target.w1),
                        &pq,
                    ) else {
                        continue 'attempt;
                    };
                    for bit in [false, true] {
                        let got = (&a + &b * src.get(bit)) % &pq;
                        if got != *target.get(bit) {
                            continue 'attempt;
                        }
                    }
                    plain_programs.push(PlainProgram::Linear { a, b });
                }
                NodeRef::Gate(g) => {
                    let (ea, eb) = gate_inputs[g];
                    let enc_a = &wire_encodings[ea];
                    let enc_b = &wire_encodings[eb];
                    let tt = &circuit.gates[g].tt;
                    let targets = [
                        target.get(tt[0]).clone(),
                        target.get(tt[1]).clone(),
                        target.get(tt[2]).clone(),
                        target.get(tt[3]).clone(),
                    ];
                    let Some(coeffs) = quad_coefficients(
                        (&enc_a.w0, &enc_a.w1),
                        (&enc_b.w0, &enc_b.w1),
                        &targets,
                        &pq,
                    ) else {
                        continue 'attempt;
                    };
                    // all four truth-table points must map exactly
                    for (u, x) in [(0usize, &enc_a.w0), (1, &enc_a.w1)] {
                        for (w, y) in [(0usize, &enc_b.w0), (1, &enc_b.w1)] {
                            let got = eval_quad_plain(&coeffs, x, y, &pq);
                            if got != targets[u * 2 + w] {
                                continue 'attempt;
                            }
                        }
                    }
                    plain_programs.push(PlainProgram::Quad(coeffs));
                }
            }
        }

        // Verified: encrypt the coefficients.
        let coef_bound = pq.clone();
        let mut programs = Vec::with_capacity(plain_programs.len());
        for prog in plain_programs {
            programs.push(match prog {
                PlainProgram::Linear { a, b } => WireProgram::Linear {
                    a: bundle.sk.encrypt_residue(&a, coef_bound.clone(), rng),
                    b: bundle.sk.encrypt_residue(&b, coef_bound.clone(), rng),
                },
                PlainProgram::Quad((a, b, c, d)) => WireProgram::Quad {
                    a: bundle.sk.encrypt_residue(&a, coef_bound.clone(), rng),
                    b: bundle.sk.encrypt_residue(&b, coef_bound.clone(), rng),
                    c: bundle.sk.encrypt_residue(&c, coef_bound.clone(), rng),
                    d: bundle.sk.encrypt_residue(&d, coef_bound.clone(), rng),
                },
            });
        }

        return Ok((
            CompiledCircuit {
                circuit: circuit.clone(),
                pp: bundle.pp.clone(),
                kappa: kappa.clone(),
                gate_inputs,
                output_wires,
                wires,
                programs,
                used: false,
            },
            FheClientKey {
                sk: bundle.sk.clone(),
                kappa: kappa.clone(),
                input_encodings,
                wire_encodings,
            },
        ));
    }
    Err(Error::KeygenExhausted(COMPILE_ATTEMPTS))
}

enum PlainProgram {
    Linear { a: BigUint, b: BigUint },
    Quad((BigUint, BigUint, BigUint, BigUint)),
}

impl FheClientKey {
    /// Encrypt circuit input bits under their input encodings.
    pub fn encrypt_inputs(&self, bits: &[bool], rng: &mut impl RngCore) -> Result<Vec<VectorCiphertext>> {
        if bits.len() != self.input_encodings.len() {
            return Err(Error::InvalidParams(format!(
                "circuit has {} inputs, got {} bits",
                self.input_encodings.len(),
                bits.len()
            )));
        }
        let bound = &self.kappa << 1u32;
        Ok(bits
            .iter()
            .zip(&self.input_encodings)
            .map(|(&b, enc)| self.sk.encrypt_residue(enc.get(b), bound.clone(), rng))
            .collect())
    }

    /// Decrypt output wires to bits: the bit is the wire value mod 2. A value
    /// at or above 2*kappa means the evaluation was corrupted.
    pub fn decrypt_outputs(&self, outputs: &[VectorCiphertext]) -> Result<Vec<bool>> {
        let two_kappa = &self.kappa << 1u32;
        outputs
            .iter()
            .map(|c| {
                let w = self.sk.decrypt(c)?;
                let w = w.to_biguint().ok_or_else(|| {
                    Error::VerificationMismatch("negative wire value".into())
                })?;
                if w >= two_kappa {
                    return Err(Error::VerificationMismatch(format!(
                        "wire value {w} outside [0, 2*kappa)"
                    )));
                }
                Ok(w.bit(0))
            })
            .collect()
    }
}

impl CompiledCircuit {
    pub fn input_count(&self) -> usize {
        self.circuit.input_count()
    }

    /// Evaluate on encrypted inputs, returning the output wire ciphertexts.
    pub fn evaluate(
        &mut self,
        inputs: &[VectorCiphertext],
        allow_reuse: bool,
    ) -> Result<Vec<VectorCiphertext>> {
        Ok(self.evaluate_traced(inputs, allow_reuse)?.0)
    }

    /// Evaluate and also return every wire ciphertext — the transcript a
    /// snooper observing the computation would see.
    pub fn evaluate_traced(
        &mut self,
        inputs: &[VectorCiphertext],
        allow_reuse: bool,
    ) -> Result<(Vec<VectorCiphertext>, Vec<VectorCiphertext>)> {
        if self.used && !allow_reuse {
            return Err(Error::CircuitReuse);
        }
        self.used = true;
        if inputs.len() != self.input_count() {
            return Err(Error::InvalidParams(format!(
                "circuit has {} inputs, got {} ciphertexts",
                self.input_count(),
                inputs.len()
            )));
        }
        let wire_bound = &self.kappa << 1u32;
        let mut values: Vec<Option<VectorCiphertext>> = vec![None; self.wires.len()];

        let run_wire = |wi: usize,
                        values: &mut Vec<Option<VectorCiphertext>>,
                        this: &CompiledCircuit|
         -> Result<()> {
            if values[wi].is_some() {
                return Ok(());
            }
            let out = match (&this.wires[wi].source, &this.programs[wi]) {
                (NodeRef::Input(i), WireProgram::Linear { a, b }) => {
                    let bx = this.pp.mul_raw(b, &inputs[*i]);
                    this.pp.add_raw(a, &bx)
                }
                (NodeRef::Gate(g), WireProgram::Quad { a, b, c, d }) => {
                    let (ea, eb) = this.gate_inputs[*g];
                    let x = values[ea].as_ref().expect("gate inputs evaluated first");
                    let y = values[eb].as_ref().expect("gate inputs evaluated first");
                    let xy = this.pp.mul_raw(x, y);
                    let mut acc = a.clone();
                    acc = this.pp.add_raw(&acc, &this.pp.mul_raw(b, x));
                    acc = this.pp.add_raw(&acc, &this.pp.mul_raw(c, y));
                    acc = this.pp.add_raw(&acc, &this.pp.mul_raw(d, &xy));
                    acc
                }
                _ => {
                    return Err(Error::VerificationMismatch(format!(
                        "wire {} has a mismatched program kind",
                        this.wires[wi].label
                    )))
                }
            };
            values[wi] = Some(VectorCiphertext {
                v: out.v,
                bound: wire_bound.clone(),
            });
            Ok(())
        };

        // gates in netlist order, their input wires first, then output wires
        for g in 0..self.circuit.gates.len() {
            let (ea, eb) = self.gate_inputs[g];
            run_wire(ea, &mut values, self)?;
            run_wire(eb, &mut values, self)?;
        }
        for &ow in &self.output_wires {
            run_wire(ow, &mut values, self)?;
        }

        let all: Vec<VectorCiphertext> = values
            .into_iter()
            .map(|v| v.expect("every wire evaluated"))
            .collect();
        let outs = self.output_wires.iter().map(|&w| all[w].clone()).collect();
        Ok((outs, all))
    }
}

/// Reference evaluation of the netlist over plain bits.
pub fn eval_bool_circuit(circuit: &BoolCircuit, bits: &[bool]) -> Vec<bool> {
    let mut gate_vals = vec![false; circuit.gates.len()];
    let value = |r: NodeRef, gate_vals: &[bool]| match r {
        NodeRef::Input(i) => bits[i],
        NodeRef::Gate(g) => gate_vals[g],
    };
    for i in 0..circuit.gates.len() {
        let g = &circuit.gates[i];
        let a = value(g.a, &gate_vals);
        let b = value(g.b, &gate_vals);
        gate_vals[i] = g.tt[(a as usize) * 2 + (b as usize)];
    }
    circuit
        .outputs
        .iter()
        .map(|&o| value(o, &gate_vals))
        .collect()
}
