use std::sync::OnceLock;

use super::*;
use crate::nanopub::{check, Classification};
use crate::testutil::fixture;
use crate::trusty::{verify_trusty, TrustyStatus};

fn key() -> &'static KeyPair {
    static KEY: OnceLock<KeyPair> = OnceLock::new();
    KEY.get_or_init(|| KeyPair::generate().unwrap())
}

#[test]
fn signed_nanopub_verifies_and_is_trusty() {
    let np = &fixture()[0];
    let signed = sign(np, key()).unwrap();
    assert_eq!(verify_signature(&signed), SignatureStatus::Valid);
    assert_eq!(verify_trusty(&signed), TrustyStatus::Valid);
    assert_eq!(Classification::of(&signed), Classification::ValidSigned);
    assert_eq!(signed.pubinfo().count(), np.pubinfo().count() + 4);
    let node = format!("{}.sig", signed.uri());
    assert!(signed
        .pubinfo()
        .all(|q| !q.predicate.is_iri_eq(vocab::HAS_SIGNATURE) || q.subject.is_iri_eq(&node)));
    assert_eq!(verify_signature(np), SignatureStatus::Unsigned);
}

#[test]
fn tampering_is_detected() {
    let signed = sign(&fixture()[1], key()).unwrap();
    let mut quads = signed.quads().to_vec();
    for q in &mut quads {
        if q.graph_iri() == Some(signed.assertion_graph()) {
            q.object = Term::iri("http://example.org/diseaseC");
        }
    }
    let tampered = Nanopub::new(quads).unwrap();
    assert!(matches!(verify_signature(&tampered), SignatureStatus::Invalid(_)));
    assert!(matches!(
        Classification::of(&tampered),
        Classification::Invalid(_)
    ));

    // re-minting the trusty URI does not rescue a broken signature
    let refixed = trusty::fix(&tampered).unwrap();
    assert_eq!(verify_trusty(&refixed), TrustyStatus::Valid);
    assert!(matches!(verify_signature(&refixed), SignatureStatus::Invalid(_)));
    let report = check(vec![Ok(refixed)]);
    assert_eq!(report.summary(), "Summary: 1 invalid;");
}

#[test]
fn foreign_key_is_rejected() {
    let signed = sign(&fixture()[2], key()).unwrap();
    let other = KeyPair::generate().unwrap();
    let quads: Vec<Quad> = signed
        .quads()
        .iter()
        .map(|q| {
            if q.predicate.is_iri_eq(vocab::HAS_PUBLIC_KEY) {
                Quad {
                    object: literal(other.public_key_base64()),
                    ..q.clone()
                }
            } else {
                q.clone()
            }
        })
        .collect();
    let swapped = Nanopub::new(quads).unwrap();
    assert_eq!(
        verify_signature(&swapped),
        SignatureStatus::Invalid("signature does not match the content".into())
    );
}

#[test]
fn sign_preconditions() {
    let signed = sign(&fixture()[0], key()).unwrap();
    assert!(matches!(sign(&signed, key()), Err(SignError::AlreadyTrusty(_))));
    let t = trusty::make_trusty(&fixture()[0]).unwrap();
    assert!(matches!(sign(&t, key()), Err(SignError::AlreadyTrusty(_))));
}

#[test]
fn key_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("keys").join("id_rsa");
    let made = make_keys(&path).unwrap();
    assert!(matches!(make_keys(&path), Err(SignError::KeyExists(_))));
    let loaded = KeyPair::load(&path).unwrap();
    assert_eq!(loaded.public_key_base64(), made.public_key_base64());
    let public = fs::read_to_string(public_key_path(&path)).unwrap();
    assert_eq!(public.trim(), made.public_key_base64());
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let mode = fs::metadata(&path).unwrap().permissions().mode();
        assert_eq!(mode & 0o777, 0o600);
    }
    assert!(matches!(
        KeyPair::from_private_base64("not a key"),
        Err(SignError::InvalidKey(_))
    ));
}
