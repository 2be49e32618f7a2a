//! Versioned text formats: key files, public parameters, ciphertext streams,
//! shard job files, compiled Boolean circuits and pipeline reports.
//!
//! Everything is line-oriented decimal text for auditability. Secret key
//! files are written with mode 0600; public-parameter files never contain
//! p, q, kappa, the basis vectors or the structure constants.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::boolfhe::{
    parse_bool_netlist, wire_layout, BoolCircuit, CompiledCircuit, FheClientKey, WireEncoding,
    WireProgram,
};
use crate::crt::{CrtCiphertext, CrtPublicParams, CrtSecretKey};
use crate::error::{Error, Result};
use crate::keys::{AnyCiphertext, AnyKey, CrtKeyPair};
use crate::matrix::ModMatrix;
use crate::params::{ParameterSet, Scheme};
use crate::pipeline::PipelineReport;
use crate::scalar::{ScalarCiphertext, ScalarSecretKey};
use crate::vector::{gamma_from_basis, VectorCiphertext, VectorKeyPair, VectorPublicParams, VectorSecretKey};

pub const KEY_MAGIC: &str = "swhe-key v1";
pub const PUBPARAMS_MAGIC: &str = "swhe-pubparams v1";
pub const SHARDJOB_MAGIC: &str = "swhe-shardjob v1";
pub const FHEPROG_MAGIC: &str = "swhe-fheprog v1";
pub const FHEKEY_MAGIC: &str = "swhe-fhekey v1";
pub const REPORT_MAGIC: &str = "swhe-pipeline-report v1";
/// Augmentation pair enumeration shipped in public-parameter files.
pub const PAIR_ORDER_TAG: &str = "lex-v1";

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_biguint(s: &str, what: &str) -> Result<BigUint> {
    s.parse::<BigUint>()
        .map_err(|_| parse_err(format!("bad {what} '{s}'")))
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|_| parse_err(format!("bad {what} '{s}'")))
}

/// Key/value lines after a magic header, with repeated keys collected in order.
struct FieldBlock {
    fields: HashMap<String, Vec<String>>,
}

impl FieldBlock {
    fn parse(text: &str, magic: &str) -> Result<FieldBlock> {
        let mut lines = text.lines();
        let head = lines.next().map(str::trim).unwrap_or_default();
        if head != magic {
            return Err(parse_err(format!("expected header '{magic}', got '{head}'")));
        }
        let mut fields: HashMap<String, Vec<String>> = HashMap::new();
        for raw in lines {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(format!("field line without value: '{line}'")))?;
            fields
                .entry(key.to_string())
                .or_default()
                .push(value.trim().to_string());
        }
        Ok(FieldBlock { fields })
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .get(key)
            .and_then(|v| v.first())
            .map(String::as_str)
            .ok_or_else(|| parse_err(format!("missing field '{key}'")))
    }

    fn get_opt(&self, key: &str) -> Option<&str> {
        self.fields.get(key).and_then(|v| v.first()).map(String::as_str)
    }

    fn all(&self, key: &str) -> &[String] {
        self.fields.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn params_fields(p: &ParameterSet) -> String {
    let mut s = String::new();
    s.push_str(&format!("scheme {}\n", p.scheme));
    s.push_str(&format!("d {}\n", p.d));
    s.push_str(&format!("n_bits {}\n", p.n_bits));
    s.push_str(&format!("rho {}\n", p.rho));
    s.push_str(&format!("m_bound {}\n", p.m_bound));
    s.push_str(&format!("lambda {}\n", p.lambda));
    s.push_str(&format!("eta {}\n", p.eta));
    if let Some(rp) = p.rho_prime {
        s.push_str(&format!("rho_prime {rp}\n"));
    }
    if let Some(kb) = p.kappa_bits {
        s.push_str(&format!("kappa_bits {kb}\n"));
    }
    s.push_str(&format!("k {}\n", p.k));
    s.push_str(&format!("K {}\n", p.shards));
    s.push_str(&format!("insecure_toy {}\n", p.insecure_toy));
    s
}

fn params_from_block(b: &FieldBlock) -> Result<ParameterSet> {
    let scheme = Scheme::parse(b.get("scheme")?)?;
    Ok(ParameterSet {
        scheme,
        d: parse_u32(b.get("d")?, "d")?,
        n_bits: parse_u32(b.get("n_bits")?, "n_bits")?,
        rho: parse_u32(b.get("rho")?, "rho")?,
        m_bound: parse_biguint(b.get("m_bound")?, "m_bound")?,
        lambda: parse_u32(b.get("lambda")?, "lambda")?,
        eta: parse_u32(b.get("eta")?, "eta")?,
        rho_prime: b.get_opt("rho_prime").map(|s| parse_u32(s, "rho_prime")).transpose()?,
        kappa_bits: b.get_opt("kappa_bits").map(|s| parse_u32(s, "kappa_bits")).transpose()?,
        k: parse_u32(b.get("k")?, "k")?,
        shards: parse_u32(b.get("K")?, "K")?,
        insecure_toy: b.get("insecure_toy")? == "true",
    })
}

fn vec_line(v: &[BigUint]) -> String {
    v.iter().map(BigUint::to_string).collect::<Vec<_>>().join(",")
}

fn parse_vec_line(s: &str, what: &str) -> Result<Vec<BigUint>> {
    s.split(',').map(|c| parse_biguint(c.trim(), what)).collect()
}

fn matrix_rows(m: &ModMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows {
        let row: Vec<String> = m.row(i).iter().map(BigUint::to_string).collect();
        s.push_str(&format!("R {}\n", row.join(" ")));
    }
    s
}

fn matrix_from_lines(lines: &[String], cols: usize) -> Result<ModMatrix> {
    let mut rows = Vec::with_capacity(lines.len());
    for line in lines {
        let row: Vec<BigUint> = line
            .split_whitespace()
            .map(|t| parse_biguint(t, "matrix entry"))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "matrix row has {} entries, expected {cols}",
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(ModMatrix::from_rows(rows))
}

// ---------------------------------------------------------------- key files

/// Serialize a secret key. The file carries the full parameter block so
/// encryption needs no side channel for the input bound.
pub fn write_secret_key(key: &AnyKey, signed: bool) -> String {
    let mut s = format!("{KEY_MAGIC}\n");
    match key {
        AnyKey::Scalar(k) => {
            s.push_str(&params_fields(&k.params));
            s.push_str(&format!("signed {signed}\n"));
            s.push_str(&format!("p {}\n", k.p));
            s.push_str(&format!("q {}\n", k.q));
            if let Some(kappa) = &k.kappa {
                s.push_str(&format!("kappa {kappa}\n"));
            }
        }
        AnyKey::Vector(pair) => {
            s.push_str(&params_fields(&pair.sk.params));
            s.push_str(&format!("signed {signed}\n"));
            s.push_str(&format!("p {}\n", pair.sk.p));
            s.push_str(&format!("q {}\n", pair.sk.q));
            if let Some(kappa) = &pair.sk.kappa {
                s.push_str(&format!("kappa {kappa}\n"));
            }
            for a in &pair.sk.basis {
                s.push_str(&format!("a {}\n", vec_line(a)));
            }
            s.push_str(&matrix_rows(&pair.pp.r_matrix));
        }
        AnyKey::Crt(pair) => {
            s.push_str(&params_fields(&pair.sk.params));
            s.push_str(&format!("signed {signed}\n"));
            s.push_str(&format!("kappa {}\n", pair.sk.kappa));
            s.push_str(&format!("bound_capacity {}\n", pair.pp.bound_capacity));
            for (sh, pp) in pair.sk.shards.iter().zip(&pair.pp.shards) {
                s.push_str(&format!("shard_p {}\n", sh.p));
                s.push_str(&format!("shard_q {}\n", sh.q));
                s.push_str(&format!("shard_a {}\n", vec_line(&sh.basis[0])));
                let row: Vec<String> = (0..pp.r_matrix.rows)
                    .map(|i| {
                        pp.r_matrix
                            .row(i)
                            .iter()
                            .map(BigUint::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                s.push_str(&format!("shard_R {}\n", row.join(" | ")));
            }
        }
    }
    s
}

/// Parse a secret key file back into a key (and its signed flag).
pub fn read_secret_key(text: &str) -> Result<(AnyKey, bool)> {
    let b = FieldBlock::parse(text, KEY_MAGIC)?;
    let params = params_from_block(&b)?;
    let signed = b.get_opt("signed") == Some("true");
    let kappa = b
        .get_opt("kappa")
        .map(|s| parse_biguint(s, "kappa"))
        .transpose()?;

    if params.scheme.is_crt() {
        let ps = b.all("shard_p");
        let qs = b.all("shard_q");
        let avs = b.all("shard_a");
        let rms = b.all("shard_R");
        let kcount = params.shards as usize;
        if ps.len() != kcount || qs.len() != kcount || avs.len() != kcount || rms.len() != kcount {
            return Err(parse_err("shard field count does not match K"));
        }
        let kappa = kappa.ok_or_else(|| parse_err("missing field 'kappa'"))?;
        let mut shards = Vec::with_capacity(kcount);
        let mut pps = Vec::with_capacity(kcount);
        let mut pi = BigUint::one();
        let shard_lambda = crate::crt::shard_lambda(
            params.lambda,
            params.shards,
            params.kappa_bits.unwrap_or(1),
        );
        let capacity = match b.get_opt("bound_capacity") {
            Some(v) => parse_biguint(v, "bound_capacity")?,
            None => crate::arith::pow2((shard_lambda - 1) * params.shards),
        };
        for j in 0..kcount {
            let p = parse_biguint(&ps[j], "shard_p")?;
            let q = parse_biguint(&qs[j], "shard_q")?;
            let basis = vec![parse_vec_line(&avs[j], "shard_a")?];
            let gamma = gamma_from_basis(&basis, &p, &q)?;
            pi *= &p;
            let rows: Vec<String> = rms[j].split('|').map(|r| r.trim().to_string()).collect();
            let r_matrix = matrix_from_lines(&rows, 3)?;
            pps.push(VectorPublicParams {
                pq: &p * &q,
                bound_capacity: capacity.clone(),
                k: 2,
                r_matrix,
            });
            shards.push(VectorSecretKey {
                p,
                q,
                kappa: Some(kappa.clone()),
                k: 2,
                basis,
                gamma,
                signed,
                params: ParameterSet {
                    scheme: Scheme::He2N,
                    k: 2,
                    shards: 1,
                    lambda: shard_lambda,
                    ..params.clone()
                },
            });
        }
        let weights = shards
            .iter()
            .map(|s| {
                let m_j = &pi / &s.p;
                let mu_j = crate::arith::mod_inverse(&m_j, &s.p)
                    .ok_or_else(|| parse_err("shard primes are not distinct"))?;
                Ok((m_j, mu_j))
            })
            .collect::<Result<Vec<_>>>()?;
        let sk = CrtSecretKey {
            kappa,
            shards,
            pi,
            weights,
            params,
        };
        let pp = CrtPublicParams {
            shards: pps,
            bound_capacity: capacity,
        };
        return Ok((AnyKey::Crt(CrtKeyPair { sk, pp }), signed));
    }

    let p = parse_biguint(b.get("p")?, "p")?;
    let q = parse_biguint(b.get("q")?, "q")?;
    if params.scheme.is_vector() {
        let k = params.k as usize;
        let basis: Vec<Vec<BigUint>> = b
            .all("a")
            .iter()
            .map(|line| parse_vec_line(line, "basis component"))
            .collect::<Result<_>>()?;
        if basis.len() != k - 1 || basis.iter().any(|a| a.len() != k) {
            return Err(parse_err("basis vectors do not match k"));
        }
        let gamma = gamma_from_basis(&basis, &p, &q)?;
        let kstar = k * (k + 1) / 2;
        let r_matrix = matrix_from_lines(b.all("R"), kstar)?;
        if r_matrix.rows != k {
            return Err(parse_err("re-encryption matrix has wrong row count"));
        }
        let pp = VectorPublicParams {
            pq: &p * &q,
            bound_capacity: params.bound_capacity(),
            k,
            r_matrix,
        };
        let sk = VectorSecretKey {
            p,
            q,
            kappa,
            k,
            basis,
            gamma,
            signed,
            params,
        };
        Ok((AnyKey::Vector(VectorKeyPair { sk, pp }), signed))
    } else {
        let sk = ScalarSecretKey::from_parts(p, q, kappa, signed, params)?;
        Ok((AnyKey::Scalar(sk), signed))
    }
}

// -------------------------------------------------------- public parameters

pub fn write_public_params(key: &AnyKey) -> String {
    let mut s = format!("{PUBPARAMS_MAGIC}\n");
    match key {
        AnyKey::Scalar(k) => {
            let pp = k.public_params();
            s.push_str(&format!("scheme {}\n", k.params.scheme));
            s.push_str(&format!("pq {}\n", pp.pq));
            s.push_str(&format!("bound_capacity {}\n", pp.bound_capacity));
            s.push_str(&format!("insecure_toy {}\n", k.params.insecure_toy));
        }
        AnyKey::Vector(pair) => {
            s.push_str(&format!("scheme {}\n", pair.sk.params.scheme));
            s.push_str(&format!("pq {}\n", pair.pp.pq));
            s.push_str(&format!("bound_capacity {}\n", pair.pp.bound_capacity));
            s.push_str(&format!("insecure_toy {}\n", pair.sk.params.insecure_toy));
            s.push_str(&format!("k {}\n", pair.pp.k));
            s.push_str(&format!("pair_order {PAIR_ORDER_TAG}\n"));
            s.push_str(&matrix_rows(&pair.pp.r_matrix));
        }
        AnyKey::Crt(pair) => {
            s.push_str(&format!("scheme {}\n", pair.sk.params.scheme));
            s.push_str(&format!("bound_capacity {}\n", pair.pp.bound_capacity));
            s.push_str(&format!("insecure_toy {}\n", pair.sk.params.insecure_toy));
            s.push_str(&format!("k 2\npair_order {PAIR_ORDER_TAG}\n"));
            s.push_str(&format!("K {}\n", pair.pp.shards.len()));
            for (j, pp) in pair.pp.shards.iter().enumerate() {
                s.push_str(&format!("shard_pq {} {}\n", j, pp.pq));
                let rows: Vec<String> = (0..pp.r_matrix.rows)
                    .map(|i| {
                        pp.r_matrix
                            .row(i)
                            .iter()
                            .map(BigUint::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                s.push_str(&format!("shard_R {} {}\n", j, rows.join(" | ")));
            }
        }
    }
    s
}

/// Public parameters as loaded by an evaluator (no secrets).
#[derive(Debug, Clone)]
pub enum AnyPublicParams {
    Scalar(crate::scalar::ScalarPublicParams),
    Vector(VectorPublicParams),
    Crt(CrtPublicParams),
}

pub fn read_public_params(text: &str) -> Result<(AnyPublicParams, Scheme)> {
    let b = FieldBlock::parse(text, PUBPARAMS_MAGIC)?;
    let scheme = Scheme::parse(b.get("scheme")?)?;
    let capacity = parse_biguint(b.get("bound_capacity")?, "bound_capacity")?;
    if scheme.is_crt() {
        let kcount = parse_u32(b.get("K")?, "K")? as usize;
        let mut shards = vec![None; kcount];
        for line in b.all("shard_pq") {
            let (j, pq) = line
                .split_once(' ')
                .ok_or_else(|| parse_err("bad shard_pq line"))?;
            let j: usize = j.parse().map_err(|_| parse_err("bad shard index"))?;
            if j >= kcount {
                return Err(parse_err("shard index out of range"));
            }
            shards[j] = Some(parse_biguint(pq.trim(), "shard pq")?);
        }
        let mut out = Vec::with_capacity(kcount);
        for (j, pq) in shards.into_iter().enumerate() {
            let pq = pq.ok_or_else(|| parse_err(format!("missing shard_pq {j}")))?;
            let rline = b
                .all("shard_R")
                .iter()
                .find_map(|l| l.split_once(' ').filter(|(i, _)| i.trim() == j.to_string().as_str()).map(|(_, r)| r.to_string()))
                .ok_or_else(|| parse_err(format!("missing shard_R {j}")))?;
            let rows: Vec<String> = rline.split('|').map(|r| r.trim().to_string()).collect();
            out.push(VectorPublicParams {
                pq,
                bound_capacity: capacity.clone(),
                k: 2,
                r_matrix: matrix_from_lines(&rows, 3)?,
            });
        }
        return Ok((
            AnyPublicParams::Crt(CrtPublicParams {
                shards: out,
                bound_capacity: capacity,
            }),
            scheme,
        ));
    }
    let pq = parse_biguint(b.get("pq")?, "pq")?;
    if scheme.is_vector() {
        let k = parse_u32(b.get("k")?, "k")? as usize;
        let tag = b.get("pair_order")?;
        if tag != PAIR_ORDER_TAG {
            return Err(parse_err(format!("unsupported pair enumeration '{tag}'")));
        }
        let r_matrix = matrix_from_lines(b.all("R"), k * (k + 1) / 2)?;
        Ok((
            AnyPublicParams::Vector(VectorPublicParams {
                pq,
                bound_capacity: capacity,
                k,
                r_matrix,
            }),
            scheme,
        ))
    } else {
        Ok((
            AnyPublicParams::Scalar(crate::scalar::ScalarPublicParams {
                scheme,
                pq,
                bound_capacity: capacity,
            }),
            scheme,
        ))
    }
}

// -------------------------------------------------------- ciphertext streams

pub fn scalar_ct_line(c: &ScalarCiphertext) -> String {
    format!("{}:{}", c.value, c.bound)
}

pub fn parse_scalar_ct_line(line: &str) -> Result<ScalarCiphertext> {
    let (v, b) = line
        .trim()
        .split_once(':')
        .ok_or_else(|| parse_err(format!("ciphertext line without bound: '{line}'")))?;
    Ok(ScalarCiphertext {
        value: parse_biguint(v, "ciphertext value")?,
        bound: parse_biguint(b, "ciphertext bound")?,
    })
}

pub fn vector_ct_line(c: &VectorCiphertext) -> String {
    format!("{}:{}", vec_line(&c.v), c.bound)
}

pub fn parse_vector_ct_line(line: &str) -> Result<VectorCiphertext> {
    let (v, b) = line
        .trim()
        .split_once(':')
        .ok_or_else(|| parse_err(format!("ciphertext line without bound: '{line}'")))?;
    Ok(VectorCiphertext {
        v: parse_vec_line(v, "ciphertext component")?,
        bound: parse_biguint(b, "ciphertext bound")?,
    })
}

/// Serialize a homogeneous ciphertext stream, one ciphertext per line.
/// CRT ciphertexts are not written here; see [`write_shard_job`].
pub fn write_ciphertexts(cts: &[AnyCiphertext]) -> Result<String> {
    let mut s = String::new();
    for c in cts {
        match c {
            AnyCiphertext::Scalar(c) => s.push_str(&scalar_ct_line(c)),
            AnyCiphertext::Vector(c) => s.push_str(&vector_ct_line(c)),
            AnyCiphertext::Crt(_) => {
                return Err(Error::InvalidParams(
                    "CRT ciphertexts serialize as per-shard job files".into(),
                ))
            }
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn read_scalar_ciphertexts(text: &str) -> Result<Vec<ScalarCiphertext>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_scalar_ct_line)
        .collect()
}

pub fn read_vector_ciphertexts(text: &str) -> Result<Vec<VectorCiphertext>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_vector_ct_line)
        .collect()
}

// ------------------------------------------------------------ shard job files

/// Shard job: header with the shard's modulus and matrix, `---`, then the
/// shard's ciphertext lines. Bit-exact decimal text an external runner could
/// consume.
pub fn write_shard_job(j: usize, pp: &VectorPublicParams, cts: &[&VectorCiphertext]) -> String {
    let mut s = format!("{SHARDJOB_MAGIC}\nshard {j}\npq {}\ncapacity {}\n", pp.pq, pp.bound_capacity);
    s.push_str(&matrix_rows(&pp.r_matrix));
    s.push_str("---\n");
    for c in cts {
        s.push_str(&vector_ct_line(c));
        s.push('\n');
    }
    s
}

pub fn read_shard_job(text: &str) -> Result<(usize, VectorPublicParams, Vec<VectorCiphertext>)> {
    let (header, body) = text
        .split_once("\n---\n")
        .ok_or_else(|| parse_err("shard job missing '---' separator"))?;
    let b = FieldBlock::parse(header, SHARDJOB_MAGIC)?;
    let j = b.get("shard")?.parse::<usize>().map_err(|_| parse_err("bad shard index"))?;
    let pq = parse_biguint(b.get("pq")?, "pq")?;
    let capacity = parse_biguint(b.get("capacity")?, "capacity")?;
    let r_matrix = matrix_from_lines(b.all("R"), 3)?;
    let cts = read_vector_ciphertexts(body)?;
    Ok((
        j,
        VectorPublicParams {
            pq,
            bound_capacity: capacity,
            k: 2,
            r_matrix,
        },
        cts,
    ))
}

/// Split one CRT ciphertext stream into its per-shard job files.
pub fn write_shard_jobs(pp: &CrtPublicParams, cts: &[CrtCiphertext]) -> Vec<String> {
    pp.shards
        .iter()
        .enumerate()
        .map(|(j, shard_pp)| {
            let shard_cts: Vec<&VectorCiphertext> = cts.iter().map(|c| &c.shards[j]).collect();
            write_shard_job(j, shard_pp, &shard_cts)
        })
        .collect()
}

// ------------------------------------------------------- compiled circuits

fn bool_netlist_text(c: &BoolCircuit) -> String {
    let mut s = String::new();
    for name in &c.input_names {
        s.push_str(&format!("INPUT {name}\n"));
    }
    let node_name = |r: crate::boolfhe::NodeRef| match r {
        crate::boolfhe::NodeRef::Input(i) => c.input_names[i].clone(),
        crate::boolfhe::NodeRef::Gate(g) => c.gates[g].name.clone(),
    };
    for g in &c.gates {
        let tt: String = g.tt.iter().map(|&b| if b { '1' } else { '0' }).collect();
        s.push_str(&format!(
            "{} = GATE{tt} {} {}\n",
            g.name,
            node_name(g.a),
            node_name(g.b)
        ));
    }
    for &o in &c.outputs {
        s.push_str(&format!("OUTPUT {}\n", node_name(o)));
    }
    s
}

/// Evaluator-side compiled-circuit file: netlist, public matrix, and one
/// encrypted program per wire.
pub fn write_compiled_circuit(c: &CompiledCircuit) -> String {
    let mut s = format!("{FHEPROG_MAGIC}\n");
    s.push_str(&format!("k {}\n", c.pp.k));
    s.push_str(&format!("pq {}\n", c.pp.pq));
    s.push_str(&format!("capacity {}\n", c.pp.bound_capacity));
    s.push_str(&format!("kappa {}\n", c.kappa));
    s.push_str(&format!("used {}\n", c.used));
    s.push_str(&matrix_rows(&c.pp.r_matrix));
    s.push_str("netlist-begin\n");
    s.push_str(&bool_netlist_text(&c.circuit));
    s.push_str("netlist-end\n");
    for (i, prog) in c.programs.iter().enumerate() {
        match prog {
            WireProgram::Linear { a, b } => {
                s.push_str(&format!(
                    "prog {i} lin {} {}\n",
                    vector_ct_line(a),
                    vector_ct_line(b)
                ));
            }
            WireProgram::Quad { a, b, c: cc, d } => {
                s.push_str(&format!(
                    "prog {i} quad {} {} {} {}\n",
                    vector_ct_line(a),
                    vector_ct_line(b),
                    vector_ct_line(cc),
                    vector_ct_line(d)
                ));
            }
        }
    }
    s
}

pub fn read_compiled_circuit(text: &str) -> Result<CompiledCircuit> {
    let (head, rest) = text
        .split_once("netlist-begin\n")
        .ok_or_else(|| parse_err("missing netlist-begin"))?;
    let (netlist, tail) = rest
        .split_once("netlist-end\n")
        .ok_or_else(|| parse_err("missing netlist-end"))?;
    let b = FieldBlock::parse(head, FHEPROG_MAGIC)?;
    let k = parse_u32(b.get("k")?, "k")? as usize;
    let pq = parse_biguint(b.get("pq")?, "pq")?;
    let capacity = parse_biguint(b.get("capacity")?, "capacity")?;
    let kappa = parse_biguint(b.get("kappa")?, "kappa")?;
    let used = b.get("used")? == "true";
    let r_matrix = matrix_from_lines(b.all("R"), k * (k + 1) / 2)?;
    let circuit = parse_bool_netlist(netlist)?;
    let (wires, gate_inputs, output_wires) = wire_layout(&circuit);

    let mut programs: Vec<Option<WireProgram>> = vec![None; wires.len()];
    for raw in tail.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["prog", idx, "lin", a, bb] => {
                let idx: usize = idx.parse().map_err(|_| parse_err("bad prog index"))?;
                programs
                    .get_mut(idx)
                    .ok_or_else(|| parse_err("prog index out of range"))?
                    .replace(WireProgram::Linear {
                        a: parse_vector_ct_line(a)?,
                        b: parse_vector_ct_line(bb)?,
                    });
            }
            ["prog", idx, "quad", a, bb, cc, dd] => {
                let idx: usize = idx.parse().map_err(|_| parse_err("bad prog index"))?;
                programs
                    .get_mut(idx)
                    .ok_or_else(|| parse_err("prog index out of range"))?
                    .replace(WireProgram::Quad {
                        a: parse_vector_ct_line(a)?,
                        b: parse_vector_ct_line(bb)?,
                        c: parse_vector_ct_line(cc)?,
                        d: parse_vector_ct_line(dd)?,
                    });
            }
            _ => return Err(parse_err(format!("bad program line: '{line}'"))),
        }
    }
    let programs: Vec<WireProgram> = programs
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| parse_err(format!("missing program for wire {i}"))))
        .collect::<Result<_>>()?;

    Ok(CompiledCircuit {
        circuit,
        pp: VectorPublicParams {
            pq,
            bound_capacity: capacity,
            k,
            r_matrix,
        },
        kappa,
        gate_inputs,
        output_wires,
        wires,
        programs,
        used,
    })
}

/// Client-side key for a compiled circuit: the vector key, kappa and encodings.
pub fn write_fhe_client_key(key: &FheClientKey) -> String {
    let mut s = format!("{FHEKEY_MAGIC}\n");
    s.push_str(&params_fields(&key.sk.params));
    s.push_str(&format!("signed {}\n", key.sk.signed));
    s.push_str(&format!("p {}\n", key.sk.p));
    s.push_str(&format!("q {}\n", key.sk.q));
    s.push_str(&format!("fhe_kappa {}\n", key.kappa));
    for a in &key.sk.basis {
        s.push_str(&format!("a {}\n", vec_line(a)));
    }
    for (i, e) in key.input_encodings.iter().enumerate() {
        s.push_str(&format!("input_enc {i} {} {}\n", e.w0, e.w1));
    }
    for (i, e) in key.wire_encodings.iter().enumerate() {
        s.push_str(&format!("wire_enc {i} {} {}\n", e.w0, e.w1));
    }
    s
}

pub fn read_fhe_client_key(text: &str) -> Result<FheClientKey> {
    let b = FieldBlock::parse(text, FHEKEY_MAGIC)?;
    let params = params_from_block(&b)?;
    let p = parse_biguint(b.get("p")?, "p")?;
    let q = parse_biguint(b.get("q")?, "q")?;
    let kappa = parse_biguint(b.get("fhe_kappa")?, "fhe_kappa")?;
    let k = params.k as usize;
    let basis: Vec<Vec<BigUint>> = b
        .all("a")
        .iter()
        .map(|line| parse_vec_line(line, "basis component"))
        .collect::<Result<_>>()?;
    if basis.len() != k - 1 || basis.iter().any(|a| a.len() != k) {
        return Err(parse_err("basis vectors do not match k"));
    }
    let gamma = gamma_from_basis(&basis, &p, &q)?;
    let parse_encs = |key: &str| -> Result<Vec<WireEncoding>> {
        let mut encs: Vec<Option<WireEncoding>> = vec![None; b.all(key).len()];
        for line in b.all(key) {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 3 {
                return Err(parse_err(format!("bad {key} line")));
            }
            let idx: usize = tokens[0].parse().map_err(|_| parse_err("bad encoding index"))?;
            if idx >= encs.len() {
                return Err(parse_err("encoding index out of range"));
            }
            encs[idx] = Some(WireEncoding {
                w0: parse_biguint(tokens[1], "encoding")?,
                w1: parse_biguint(tokens[2], "encoding")?,
            });
        }
        encs.into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| parse_err(format!("missing {key} {i}"))))
            .collect()
    };
    let input_encodings = parse_encs("input_enc")?;
    let wire_encodings = parse_encs("wire_enc")?;
    Ok(FheClientKey {
        sk: VectorSecretKey {
            p,
            q,
            kappa: None,
            k,
            basis,
            gamma,
            signed: false,
            params,
        },
        kappa,
        input_encodings,
        wire_encodings,
    })
}

// ------------------------------------------------------------------- reports

pub fn write_pipeline_report(r: &PipelineReport) -> String {
    format!(
        "{REPORT_MAGIC}\nscheme {}\nd {}\nrho {}\ncount {}\nlines {}\nworkers {}\n\
         init_us {}\nenc_mean_us {:.3}\nmap_us {}\nreduce_us {}\ndecrypt_us {}\n\
         result {}\nverified {}\n",
        r.scheme,
        r.d,
        r.rho,
        r.count,
        r.lines,
        r.workers,
        r.timings.init_us,
        r.timings.enc_mean_us,
        r.timings.map_us,
        r.timings.reduce_us,
        r.timings.decrypt_us,
        r.result,
        r.verified
    )
}

// ------------------------------------------------------------------ fs utils

/// Write a secret file with owner-only permissions.
pub fn write_secret_file(path: &Path, content: &str) -> Result<()> {
    let mut opts = std::fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::OpenOptionsExt;
        opts.mode(0o600);
    }
    let mut f = opts.open(path)?;
    f.write_all(content.as_bytes())?;
    Ok(())
}

/// Parse plaintext integers, one per line.
pub fn read_plaintexts(text: &str) -> Result<Vec<BigInt>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<BigInt>()
                .map_err(|_| parse_err(format!("bad plaintext '{l}'")))
        })
        .collect()
}
