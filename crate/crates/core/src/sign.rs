//! Experimental RSA signatures embedded in the pubinfo graph.
//!
//! Signing happens before minting: the signature element is added to the
//! pubinfo graph, the signature is computed over the placeholder form of
//! everything except the `npx:hasSignature` statement, and the result is
//! then given a trusty URI. The trusty hash therefore covers the signature.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use rsa::pkcs1v15::{Signature, SigningKey, VerifyingKey};
use rsa::pkcs8::{DecodePrivateKey, DecodePublicKey, EncodePrivateKey, EncodePublicKey};
use rsa::signature::{SignatureEncoding, Signer, Verifier};
use rsa::{RsaPrivateKey, RsaPublicKey};
use sha2::Sha256;
use thiserror::Error;

use crate::nanopub::{MalformedNanopub, Nanopub};
use crate::rdf::{Literal, Quad, Term};
use crate::trusty::{self, is_trusty_uri, TrustyError};

pub mod vocab {
    pub const HAS_SIGNATURE: &str = "http://purl.org/nanopub/x/hasSignature";
    pub const HAS_PUBLIC_KEY: &str = "http://purl.org/nanopub/x/hasPublicKey";
    pub const HAS_ALGORITHM: &str = "http://purl.org/nanopub/x/hasAlgorithm";
    pub const HAS_SIGNATURE_TARGET: &str = "http://purl.org/nanopub/x/hasSignatureTarget";
}

pub const ALGORITHM: &str = "RSA";
pub const KEY_BITS: usize = 2048;

#[derive(Debug, Error)]
pub enum SignError {
    #[error("<{0}> already has a trusty URI; signing must happen before minting")]
    AlreadyTrusty(String),
    #[error("<{0}> is already signed")]
    AlreadySigned(String),
    #[error("key file {} already exists", .0.display())]
    KeyExists(PathBuf),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("RSA failure: {0}")]
    Crypto(String),
    #[error(transparent)]
    Trusty(#[from] TrustyError),
    #[error(transparent)]
    Malformed(#[from] MalformedNanopub),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureStatus {
    Valid,
    Invalid(String),
    Unsigned,
}

#[derive(Clone)]
pub struct KeyPair {
    private: RsaPrivateKey,
    public: RsaPublicKey,
}

impl std::fmt::Debug for KeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeyPair")
            .field("algorithm", &ALGORITHM)
            .field("public", &self.public_key_base64())
            .finish_non_exhaustive()
    }
}

impl KeyPair {
    pub fn generate() -> Result<KeyPair, SignError> {
        let private = RsaPrivateKey::new(&mut rand::thread_rng(), KEY_BITS)
            .map_err(|e| SignError::Crypto(e.to_string()))?;
        let public = private.to_public_key();
        Ok(KeyPair { private, public })
    }

    /// Reads a private key file (base64 PKCS#8 DER).
    pub fn load(path: &Path) -> Result<KeyPair, SignError> {
        let text = fs::read_to_string(path).map_err(|source| SignError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_private_base64(text.trim())
    }

    pub fn from_private_base64(text: &str) -> Result<KeyPair, SignError> {
        let der = STANDARD
            .decode(text)
            .map_err(|e| SignError::InvalidKey(e.to_string()))?;
        let private =
            RsaPrivateKey::from_pkcs8_der(&der).map_err(|e| SignError::InvalidKey(e.to_string()))?;
        let public = private.to_public_key();
        Ok(KeyPair { private, public })
    }

    pub fn private_key_base64(&self) -> String {
        let der = self
            .private
            .to_pkcs8_der()
            .expect("an RSA key always encodes as PKCS#8");
        STANDARD.encode(der.as_bytes())
    }

    pub fn public_key_base64(&self) -> String {
        public_key_base64(&self.public)
    }

    pub fn sign_bytes(&self, message: &[u8]) -> Vec<u8> {
        SigningKey::<Sha256>::new(self.private.clone())
            .sign(message)
            .to_vec()
    }

    /// Writes `path` (private) and `path.pub` (public), refusing to
    /// overwrite either. The private file is readable by the owner only.
    pub fn write(&self, path: &Path) -> Result<(), SignError> {
        let public_path = public_key_path(path);
        for p in [path, public_path.as_path()] {
            if p.exists() {
                return Err(SignError::KeyExists(p.to_path_buf()));
            }
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| SignError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        write_new(path, &self.private_key_base64(), true)?;
        write_new(&public_path, &self.public_key_base64(), false)
    }
}

fn public_key_base64(key: &RsaPublicKey) -> String {
    let der = key
        .to_public_key_der()
        .expect("an RSA key always encodes as SPKI");
    STANDARD.encode(der.as_bytes())
}

fn write_new(path: &Path, content: &str, private: bool) -> Result<(), SignError> {
    let mut options = OpenOptions::new();
    options.write(true).create_new(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::OpenOptionsExt;
        options.mode(if private { 0o600 } else { 0o644 });
    }
    #[cfg(not(unix))]
    let _ = private;
    let io_err = |source| SignError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = options.open(path).map_err(|e| {
        if e.kind() == io::ErrorKind::AlreadyExists {
            SignError::KeyExists(path.to_path_buf())
        } else {
            io_err(e)
        }
    })?;
    file.write_all(content.as_bytes()).map_err(io_err)?;
    file.write_all(b"\n").map_err(io_err)
}

pub fn public_key_path(private: &Path) -> PathBuf {
    let mut s = private.as_os_str().to_os_string();
    s.push(".pub");
    PathBuf::from(s)
}

/// `~/.nanopub/id_rsa`.
pub fn default_key_path() -> PathBuf {
    let home = std::env::var_os("HOME")
        .or_else(|| std::env::var_os("USERPROFILE"))
        .map(PathBuf::from)
        .unwrap_or_default();
    home.join(".nanopub").join("id_rsa")
}

/// Generates a fresh key pair and stores it at `path` / `path.pub`.
pub fn make_keys(path: &Path) -> Result<KeyPair, SignError> {
    let public_path = public_key_path(path);
    for p in [path, public_path.as_path()] {
        if p.exists() {
            return Err(SignError::KeyExists(p.to_path_buf()));
        }
    }
    let keys = KeyPair::generate()?;
    keys.write(path)?;
    Ok(keys)
}

fn signature_node(uri: &str) -> String {
    if uri.ends_with('#') || uri.ends_with('/') {
        format!("{uri}sig")
    } else {
        format!("{uri}.sig")
    }
}

fn literal(s: impl Into<String>) -> Term {
    Term::literal(Literal::simple(s))
}

fn preimage(uri: &str, quads: &[Quad]) -> Result<Vec<u8>, TrustyError> {
    trusty::render(trusty::placeholder_form(uri, quads, true)?)
}

/// Signs `np` with `key` and mints a trusty URI for the signed result.
pub fn sign(np: &Nanopub, key: &KeyPair) -> Result<Nanopub, SignError> {
    let uri = np.uri();
    if is_trusty_uri(uri) {
        return Err(SignError::AlreadyTrusty(uri.to_string()));
    }
    if np.pubinfo().any(|q| q.predicate.is_iri_eq(vocab::HAS_SIGNATURE)) {
        return Err(SignError::AlreadySigned(uri.to_string()));
    }
    let node = Term::iri(signature_node(uri));
    let graph = Term::iri(np.pubinfo_graph());
    let mut quads = np.quads().to_vec();
    let element = |p: &str, o: Term| Quad::new(node.clone(), Term::iri(p), o, graph.clone());
    quads.push(element(vocab::HAS_PUBLIC_KEY, literal(key.public_key_base64())));
    quads.push(element(vocab::HAS_ALGORITHM, literal(ALGORITHM)));
    quads.push(element(vocab::HAS_SIGNATURE_TARGET, Term::iri(uri)));

    let signature = key.sign_bytes(&preimage(uri, &quads)?);
    quads.push(element(vocab::HAS_SIGNATURE, literal(STANDARD.encode(signature))));

    let signed = Nanopub::new(quads)?;
    Ok(trusty::make_trusty(&signed)?)
}

fn single_literal<'a>(np: &'a Nanopub, subject: &Term, predicate: &str) -> Result<&'a str, String> {
    let mut values = np
        .pubinfo()
        .filter(|q| &q.subject == subject && q.predicate.is_iri_eq(predicate))
        .map(|q| &q.object);
    let short = predicate.rsplit('/').next().unwrap_or(predicate);
    match (values.next(), values.next()) {
        (None, _) => Err(format!("signature element lacks npx:{short}")),
        (Some(_), Some(_)) => Err(format!("signature element has several npx:{short}")),
        (Some(Term::Literal(l)), None) => Ok(l.lexical()),
        (Some(_), None) => Err(format!("npx:{short} must be a literal")),
    }
}

pub fn verify_signature(np: &Nanopub) -> SignatureStatus {
    let sig_quads: Vec<&Quad> = np
        .pubinfo()
        .filter(|q| q.predicate.is_iri_eq(vocab::HAS_SIGNATURE))
        .collect();
    let sig_quad = match sig_quads.as_slice() {
        [] => return SignatureStatus::Unsigned,
        [q] => *q,
        _ => return SignatureStatus::Invalid("more than one signature".into()),
    };
    match check_signature(np, sig_quad) {
        Ok(()) => SignatureStatus::Valid,
        Err(reason) => SignatureStatus::Invalid(reason),
    }
}

fn check_signature(np: &Nanopub, sig_quad: &Quad) -> Result<(), String> {
    let node = &sig_quad.subject;
    let Term::Literal(sig_value) = &sig_quad.object else {
        return Err("npx:hasSignature must be a literal".into());
    };
    let public = single_literal(np, node, vocab::HAS_PUBLIC_KEY)?;
    let algorithm = single_literal(np, node, vocab::HAS_ALGORITHM)?;
    if algorithm != ALGORITHM {
        return Err(format!("unsupported signature algorithm '{algorithm}'"));
    }
    let target = np
        .pubinfo()
        .find(|q| &q.subject == node && q.predicate.is_iri_eq(vocab::HAS_SIGNATURE_TARGET));
    match target {
        None => return Err("signature element lacks npx:hasSignatureTarget".into()),
        Some(q) if !q.object.is_iri_eq(np.uri()) => {
            return Err("signature target is not this nanopublication".into())
        }
        Some(_) => {}
    }

    let key_der = STANDARD
        .decode(public)
        .map_err(|e| format!("public key is not base64: {e}"))?;
    let key = RsaPublicKey::from_public_key_der(&key_der)
        .map_err(|e| format!("public key is not an RSA key: {e}"))?;
    let sig_bytes = STANDARD
        .decode(sig_value.lexical())
        .map_err(|e| format!("signature is not base64: {e}"))?;
    let signature = Signature::try_from(sig_bytes.as_slice()).map_err(|e| format!("bad signature: {e}"))?;

    let rest: Vec<Quad> = np.quads().iter().filter(|q| *q != sig_quad).cloned().collect();
    let message = preimage(np.uri(), &rest).map_err(|e| e.to_string())?;
    VerifyingKey::<Sha256>::new(key)
        .verify(&message, &signature)
        .map_err(|_| "signature does not match the content".to_string())
}

#[cfg(test)]
mod tests;
