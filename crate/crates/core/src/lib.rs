//! Somewhat homomorphic encryption over the integers.
//!
//! The schemes encrypt an integer m as a residue (or vector of residues)
//! modulo a semiprime pq, hiding m behind multiples of the secret prime p,
//! optional masking noise s*kappa, and, in the vector schemes, a secret basis.
//! Addition and multiplication of ciphertexts commute with decryption as long
//! as the evaluated polynomial value stays below p (and below kappa for the
//! noisy variants); every ciphertext carries a public magnitude bound so the
//! evaluator can reject computations that would overflow.
//!
//! Modules:
//! * [`params`] — parameter derivation from degree, input count and entropy
//! * [`scalar`] — single-residue schemes, with and without noise
//! * [`vector`] — k-vector schemes and the re-encryption matrix construction
//! * [`crt`] — the K-shard variant with per-shard moduli and CRT recombination
//! * [`circuit`] — arithmetic-circuit parsing, bound tracking and evaluation
//! * [`boolfhe`] — encrypted Boolean circuits with per-wire noisy encodings
//! * [`attacks`] — constructive cryptanalysis used as adversarial validation
//! * [`pipeline`] — the encrypted inner-product map/reduce harness
//! * [`io`] — versioned text formats for keys, ciphertexts and reports
//!
//! ```
//! use num_bigint::BigInt;
//! use swhe_core::{AnyKey, ParameterSet, Scheme};
//!
//! // sizes for degree-2 polynomials over 16-bit inputs
//! let params = ParameterSet::derive(Scheme::He2, 2, 16, 16, None, None)?;
//! let mut rng = swhe_core::rng::seeded_rng(7);
//! let key = AnyKey::generate(&params, false, &mut rng)?;
//!
//! let a = key.encrypt(&BigInt::from(21), &mut rng)?;
//! let b = key.encrypt(&BigInt::from(2), &mut rng)?;
//! let product = key.mul(&a, &b)?;          // evaluator side: public params only
//! assert_eq!(key.decrypt(&product)?, BigInt::from(42));
//! # Ok::<(), swhe_core::Error>(())
//! ```

pub mod arith;
pub mod attacks;
pub mod boolfhe;
pub mod circuit;
pub mod crt;
pub mod entropy;
pub mod error;
pub mod io;
pub mod keys;
pub mod matrix;
pub mod params;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod vector;

pub use attacks::AttackReport;
pub use boolfhe::{BoolCircuit, CompiledCircuit, FheClientKey, WireEncoding};
pub use circuit::{ArithCircuit, HeBackend};
pub use crt::{CrtCiphertext, CrtKeyBundle, CrtPublicParams, CrtSecretKey};
pub use entropy::{entropy_of, EntropyReport};
pub use error::{Error, ErrorCategory, Result};
pub use keys::{AnyCiphertext, AnyKey, CrtKeyPair};
pub use params::{ParameterSet, Preset, Scheme};
pub use pipeline::{PipelineJob, PipelineReport};
pub use scalar::{ScalarCiphertext, ScalarPublicParams, ScalarSecretKey};
pub use stats::ChiSquareReport;
pub use vector::{
    AssocFix, StructureConstants, VectorCiphertext, VectorKeyBundle, VectorKeyPair,
    VectorPublicParams, VectorSecretKey,
};
