//! Arithmetic circuits: parsing, degree and depth, bound propagation, and
//! homomorphic evaluation over any scheme backend.
//!
//! Netlist format, one statement per line (`#` starts a comment):
//!
//! ```text
//! x0                 # declare input 0
//! x1
//! g0 = MUL x0 x1     # gates take two operands: inputs, earlier gates, or
//! g1 = ADD g0 7      # integer literals (trivially encrypted constants)
//! OUT g1
//! ```
//!
//! The bound tracker propagates plaintext-magnitude bounds leaf-to-root
//! (sums add, products multiply) and `check_capacity` accepts a circuit only
//! if every node stays below the scheme's public capacity 2^(lambda-1) — and,
//! for noisy schemes, if the de-noised value stays below the kappa floor. The
//! checker is sound, not complete: a rejected circuit may still decrypt
//! correctly on specific inputs.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::crt::{CrtCiphertext, CrtPublicParams};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{ScalarCiphertext, ScalarPublicParams};
use crate::vector::{VectorCiphertext, VectorPublicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Input(usize),
    Const(BigInt),
    Gate { op: GateOp, lhs: usize, rhs: usize },
}

/// A validated DAG. Nodes are stored in topological order (the textual order
/// of the netlist), inputs and constants first come wherever declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithCircuit {
    pub nodes: Vec<Node>,
    pub outputs: Vec<usize>,
    pub input_count: usize,
    names: Vec<String>,
}

impl ArithCircuit {
    pub fn node_name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    /// Formal polynomial degree per node: inputs 1, constants 0, ADD max,
    /// MUL sum.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            deg[i] = match node {
                Node::Input(_) => 1,
                Node::Const(_) => 0,
                Node::Gate { op: GateOp::Add, lhs, rhs } => deg[*lhs].max(deg[*rhs]),
                Node::Gate { op: GateOp::Mul, lhs, rhs } => deg[*lhs] + deg[*rhs],
            };
        }
        deg
    }

    /// Max degree over output nodes.
    pub fn degree(&self) -> u64 {
        let deg = self.degrees();
        self.outputs.iter().map(|&o| deg[o]).max().unwrap_or(0)
    }

    /// Longest gate chain to any output (leaves are depth 0).
    pub fn depth(&self) -> u64 {
        let mut depth = vec![0u64; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Gate { lhs, rhs, .. } = node {
                depth[i] = 1 + depth[*lhs].max(depth[*rhs]);
            }
        }
        self.outputs.iter().map(|&o| depth[o]).max().unwrap_or(0)
    }

    /// The d-way-product / (n/d)-way-sum inner-product circuit.
    pub fn inner_product(n: usize, d: usize) -> ArithCircuit {
        assert!(d >= 1 && n >= d && n.is_multiple_of(d), "n must be a positive multiple of d");
        let mut nodes: Vec<Node> = (0..n).map(Node::Input).collect();
        let mut names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut gate = 0usize;
        let mut terms = Vec::with_capacity(n / d);
        for line in 0..n / d {
            let mut acc = line * d;
            for j in 1..d {
                nodes.push(Node::Gate {
                    op: GateOp::Mul,
                    lhs: acc,
                    rhs: line * d + j,
                });
                names.push(format!("g{gate}"));
                gate += 1;
                acc = nodes.len() - 1;
            }
            terms.push(acc);
        }
        let mut acc = terms[0];
        for &t in &terms[1..] {
            nodes.push(Node::Gate {
                op: GateOp::Add,
                lhs: acc,
                rhs: t,
            });
            names.push(format!("g{gate}"));
            gate += 1;
            acc = nodes.len() - 1;
        }
        ArithCircuit {
            outputs: vec![acc],
            input_count: n,
            nodes,
            names,
        }
    }
}

/// Parse and validate a netlist. Cycles (forward or self references),
/// dangling references and arity violations are distinct errors.
pub fn parse_circuit(text: &str) -> Result<ArithCircuit> {
    use std::collections::HashMap;

    // First pass: which gate names are defined at all (to tell a forward
    // reference, i.e. a cycle, from a dangling one).
    let mut defined_later: std::collections::HashSet<String> = std::collections::HashSet::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(eq) = line.find('=') {
            defined_later.insert(line[..eq].trim().to_string());
        }
    }

    let mut nodes: Vec<Node> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut outputs = Vec::new();
    let mut input_count = 0usize;

    let resolve = |tok: &str,
                       nodes: &mut Vec<Node>,
                       names: &mut Vec<String>,
                       by_name: &HashMap<String, usize>,
                       lineno: usize|
     -> Result<usize> {
        if let Some(&idx) = by_name.get(tok) {
            return Ok(idx);
        }
        if let Ok(lit) = tok.parse::<BigInt>() {
            nodes.push(Node::Const(lit));
            names.push(tok.to_string());
            return Ok(nodes.len() - 1);
        }
        if defined_later.contains(tok) {
            return Err(Error::Parse(format!(
                "line {lineno}: reference to '{tok}' before its definition (cycles are not allowed)"
            )));
        }
        Err(Error::Parse(format!(
            "line {lineno}: dangling reference to undeclared '{tok}'"
        )))
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if let Some(rest) = line.strip_prefix("OUT ") {
            let _ = rest;
            if tokens.len() != 2 {
                return Err(Error::Parse(format!(
                    "line {lineno}: OUT takes exactly one operand"
                )));
            }
            let target = resolve(tokens[1], &mut nodes, &mut names, &by_name, lineno)?;
            outputs.push(target);
            continue;
        }
        if tokens.len() == 1 {
            // input declaration
            let name = tokens[0];
            if !name.starts_with('x') {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected input declaration 'xN', got '{name}'"
                )));
            }
            if by_name.contains_key(name) {
                return Err(Error::Parse(format!(
                    "line {lineno}: duplicate declaration of '{name}'"
                )));
            }
            nodes.push(Node::Input(input_count));
            names.push(name.to_string());
            by_name.insert(name.to_string(), nodes.len() - 1);
            input_count += 1;
            continue;
        }
        // gate definition: gN = ADD|MUL a b
        if tokens.len() != 5 || tokens[1] != "=" {
            return Err(Error::Parse(format!(
                "line {lineno}: arity violation, expected 'gN = ADD|MUL a b'"
            )));
        }
        let name = tokens[0];
        if by_name.contains_key(name) {
            return Err(Error::Parse(format!(
                "line {lineno}: duplicate definition of '{name}'"
            )));
        }
        let op = match tokens[2] {
            "ADD" => GateOp::Add,
            "MUL" => GateOp::Mul,
            other => {
                return Err(Error::Parse(format!(
                    "line {lineno}: unknown operation '{other}'"
                )))
            }
        };
        let lhs = resolve(tokens[3], &mut nodes, &mut names, &by_name, lineno)?;
        let rhs = resolve(tokens[4], &mut nodes, &mut names, &by_name, lineno)?;
        nodes.push(Node::Gate { op, lhs, rhs });
        names.push(name.to_string());
        by_name.insert(name.to_string(), nodes.len() - 1);
    }

    if outputs.is_empty() {
        return Err(Error::Parse("circuit declares no OUT".into()));
    }
    Ok(ArithCircuit {
        nodes,
        outputs,
        input_count,
        names,
    })
}

/// Per-node plaintext-magnitude bounds: leaf inputs get the fresh-encryption
/// bound, constants their own magnitude, sums add, products multiply.
pub fn bound_trace(circuit: &ArithCircuit, leaf_bound: &BigUint) -> Vec<BigUint> {
    let mut bounds = vec![BigUint::zero(); circuit.nodes.len()];
    for (i, node) in circuit.nodes.iter().enumerate() {
        bounds[i] = match node {
            Node::Input(_) => leaf_bound.clone(),
            Node::Const(c) => c.abs().to_biguint().unwrap_or_default().max(BigUint::one()),
            Node::Gate { op: GateOp::Add, lhs, rhs } => &bounds[*lhs] + &bounds[*rhs],
            Node::Gate { op: GateOp::Mul, lhs, rhs } => &bounds[*lhs] * &bounds[*rhs],
        };
    }
    bounds
}

fn leaf_bound_for(params: &ParameterSet, noisy: bool, signed: bool) -> BigUint {
    let mut base = params.m_bound.clone();
    if signed {
        base <<= 1;
    }
    if noisy {
        if let Some(kb) = params.kappa_bits {
            // worst case kappa: the key generator draws kappa < 2^kappa_bits
            let kappa_max = crate::arith::pow2(kb);
            base += &kappa_max * &kappa_max;
        }
    }
    base
}

/// Accept the circuit only if every node's bound stays within capacity.
///
/// For noisy schemes two traces are checked: the noise-carrying bound against
/// 2^(lambda-1), and the de-noised plaintext bound against the kappa floor
/// 2^(kappa_bits - 1).
pub fn check_capacity(circuit: &ArithCircuit, params: &ParameterSet) -> Result<()> {
    check_capacity_signed(circuit, params, false)
}

pub fn check_capacity_signed(
    circuit: &ArithCircuit,
    params: &ParameterSet,
    signed: bool,
) -> Result<()> {
    let capacity = params.bound_capacity();
    let noisy_trace = bound_trace(circuit, &leaf_bound_for(params, params.scheme.is_noisy(), signed));
    for (i, b) in noisy_trace.iter().enumerate() {
        if *b > capacity {
            return Err(Error::CapacityViolation {
                node: circuit.node_name(i).to_string(),
                bound: b.to_string(),
                capacity: capacity.to_string(),
            });
        }
    }
    if let Some(kappa_floor) = params.plain_value_capacity() {
        let plain_trace = bound_trace(circuit, &leaf_bound_for(params, false, signed));
        for (i, b) in plain_trace.iter().enumerate() {
            if *b > kappa_floor {
                return Err(Error::CapacityViolation {
                    node: format!("{} (de-noised value vs kappa)", circuit.node_name(i)),
                    bound: b.to_string(),
                    capacity: kappa_floor.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Homomorphic operations a circuit evaluation needs from a scheme.
pub trait HeBackend {
    type Ciphertext: Clone;
    fn constant(&self, value: &BigInt) -> Self::Ciphertext;
    fn add(&self, a: &Self::Ciphertext, b: &Self::Ciphertext) -> Result<Self::Ciphertext>;
    fn mul(&self, a: &Self::Ciphertext, b: &Self::Ciphertext) -> Result<Self::Ciphertext>;
}

impl HeBackend for ScalarPublicParams {
    type Ciphertext = ScalarCiphertext;
    fn constant(&self, value: &BigInt) -> ScalarCiphertext {
        ScalarPublicParams::constant(self, value)
    }
    fn add(&self, a: &ScalarCiphertext, b: &ScalarCiphertext) -> Result<ScalarCiphertext> {
        ScalarPublicParams::add(self, a, b)
    }
    fn mul(&self, a: &ScalarCiphertext, b: &ScalarCiphertext) -> Result<ScalarCiphertext> {
        ScalarPublicParams::mul(self, a, b)
    }
}

impl HeBackend for VectorPublicParams {
    type Ciphertext = VectorCiphertext;
    fn constant(&self, value: &BigInt) -> VectorCiphertext {
        VectorPublicParams::constant(self, value)
    }
    fn add(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> Result<VectorCiphertext> {
        VectorPublicParams::add(self, a, b)
    }
    fn mul(&self, a: &VectorCiphertext, b: &VectorCiphertext) -> Result<VectorCiphertext> {
        VectorPublicParams::mul(self, a, b)
    }
}

impl HeBackend for CrtPublicParams {
    type Ciphertext = CrtCiphertext;
    fn constant(&self, value: &BigInt) -> CrtCiphertext {
        CrtPublicParams::constant(self, value)
    }
    fn add(&self, a: &CrtCiphertext, b: &CrtCiphertext) -> Result<CrtCiphertext> {
        CrtPublicParams::add(self, a, b)
    }
    fn mul(&self, a: &CrtCiphertext, b: &CrtCiphertext) -> Result<CrtCiphertext> {
        CrtPublicParams::mul(self, a, b)
    }
}

/// Evaluate the circuit gate by gate over encrypted inputs.
pub fn evaluate<B: HeBackend>(
    circuit: &ArithCircuit,
    inputs: &[B::Ciphertext],
    backend: &B,
) -> Result<Vec<B::Ciphertext>> {
    if inputs.len() != circuit.input_count {
        return Err(Error::InvalidParams(format!(
            "circuit has {} inputs, got {} ciphertexts",
            circuit.input_count,
            inputs.len()
        )));
    }
    let mut values: Vec<Option<B::Ciphertext>> = vec![None; circuit.nodes.len()];
    for (i, node) in circuit.nodes.iter().enumerate() {
        let v = match node {
            Node::Input(slot) => inputs[*slot].clone(),
            Node::Const(c) => backend.constant(c),
            Node::Gate { op, lhs, rhs } => {
                let a = values[*lhs].as_ref().expect("topological order");
                let b = values[*rhs].as_ref().expect("topological order");
                match op {
                    GateOp::Add => backend.add(a, b)?,
                    GateOp::Mul => backend.mul(a, b)?,
                }
            }
        };
        values[i] = Some(v);
    }
    Ok(circuit
        .outputs
        .iter()
        .map(|&o| values[o].clone().expect("outputs are defined"))
        .collect())
}
