//! C interface to the nanopub library.
//!
//! Objects are opaque handles created by `np_*_new`/`np_*_parse`-style calls
//! and released with the matching `np_*_free`. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! `np_string_free`. Every fallible call returns an `NpStatus`; on failure
//! `np_last_error` describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nanopub::registry::{Client, ClientError, ServerList};
use nanopub::sign::{self, KeyPair, SignError, SignatureStatus};
use nanopub::trusty::{self, ArtifactCode, TrustyError, TrustyStatus};
use nanopub::{Dataset, ExtractError, Format};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The text is not valid RDF in the given format.
    Parse = 3,
    /// The RDF does not hold exactly one well-formed nanopublication.
    Malformed = 4,
    /// Trusty URI problems: nothing to fix, already trusty, or content that
    /// fails verification.
    Trusty = 5,
    Signature = 6,
    Network = 7,
    NotFound = 8,
    Io = 9,
    InvalidArgument = 10,
    Panic = 11,
}

/// Outcome of a verification.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpVerdict {
    Valid = 0,
    Invalid = 1,
    /// No trusty URI, or no signature.
    Absent = 2,
}

pub struct NpNanopub(nanopub::Nanopub);
pub struct NpKeyPair(KeyPair);
pub struct NpClient(Client);

struct Failure(NpStatus, String);

type Res<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Res<()>) -> NpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            NpStatus::Panic
        }
    }
}

fn fail(status: NpStatus, e: impl ToString) -> Failure {
    Failure(status, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(fail(NpStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(NpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Res<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| fail(NpStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Res<()> {
    if out.is_null() {
        return Err(fail(NpStatus::NullPointer, "output pointer is NULL"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(fail(NpStatus::NullPointer, "output pointer is NULL"));
    }
    let c = CString::new(s).map_err(|_| fail(NpStatus::InvalidArgument, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

fn format_of(name: Option<&str>) -> Res<Format> {
    name.map_or(Ok(Format::TriG), |n| {
        n.parse().map_err(|e| fail(NpStatus::InvalidArgument, e))
    })
}

fn trusty_failure(e: TrustyError) -> Failure {
    match e {
        TrustyError::Malformed(m) => fail(NpStatus::Malformed, m),
        other => fail(NpStatus::Trusty, other),
    }
}

fn sign_failure(e: SignError) -> Failure {
    match e {
        SignError::Io { .. } | SignError::KeyExists(_) => fail(NpStatus::Io, e),
        SignError::Trusty(t) => trusty_failure(t),
        SignError::Malformed(m) => fail(NpStatus::Malformed, m),
        other => fail(NpStatus::Signature, other),
    }
}

fn client_failure(e: ClientError) -> Failure {
    let status = match &e {
        ClientError::NotFound(_) | ClientError::MissingElements(_) => NpStatus::NotFound,
        ClientError::Corrupt { .. } | ClientError::NotTrusty(_) => NpStatus::Trusty,
        ClientError::BadRef(_) | ClientError::BadServer(_) | ClientError::NoServers => {
            NpStatus::InvalidArgument
        }
        ClientError::ServerList { .. } => NpStatus::Io,
        _ => NpStatus::Network,
    };
    fail(status, e)
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn np_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn np_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a document holding exactly one nanopublication. `format` is
/// "trig" or "nquads"; NULL means TriG.
///
/// # Safety
/// `text` and `format` must be NUL-terminated or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_parse(
    text: *const c_char,
    format: *const c_char,
    out: *mut *mut NpNanopub,
) -> NpStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let format = format_of(opt_str_arg(format, "format")?)?;
        let ds = Dataset::parse(text, format).map_err(|e| fail(NpStatus::Parse, e))?;
        let np = nanopub::Nanopub::from_dataset(ds).map_err(|e| match e {
            ExtractError::Malformed(m) => fail(NpStatus::Malformed, m),
            other => fail(NpStatus::Malformed, other),
        })?;
        put(out, NpNanopub(np))
    })
}

/// # Safety
/// `np` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_free(np: *mut NpNanopub) {
    if !np.is_null() {
        drop(Box::from_raw(np));
    }
}

/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_uri(np: *const NpNanopub, out: *mut *mut c_char) -> NpStatus {
    guard(|| put_string(out, handle(np, "nanopub")?.0.uri().to_string()))
}

/// Serializes to "trig" or "nquads" (NULL means TriG).
///
/// # Safety
/// `np` must be a live handle; `format` NUL-terminated or NULL; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_to_string(
    np: *const NpNanopub,
    format: *const c_char,
    out: *mut *mut c_char,
) -> NpStatus {
    guard(|| {
        let np = handle(np, "nanopub")?;
        let format = format_of(opt_str_arg(format, "format")?)?;
        let text =
            np.0.to_dataset()
                .serialize(format)
                .map_err(|e| fail(NpStatus::Parse, e))?;
        put_string(out, text)
    })
}

/// Artifact code the nanopub's current content hashes to.
///
/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_artifact_code(np: *const NpNanopub, out: *mut *mut c_char) -> NpStatus {
    guard(|| {
        let code = trusty::compute_artifact_code(&handle(np, "nanopub")?.0).map_err(trusty_failure)?;
        put_string(out, code.as_str().to_string())
    })
}

/// New nanopub with a trusty URI; the input is left untouched.
///
/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_make_trusty(np: *const NpNanopub, out: *mut *mut NpNanopub) -> NpStatus {
    guard(|| {
        let t = trusty::make_trusty(&handle(np, "nanopub")?.0).map_err(trusty_failure)?;
        put(out, NpNanopub(t))
    })
}

/// Re-mints the trusty URI of an edited trusty nanopub.
///
/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_fix(np: *const NpNanopub, out: *mut *mut NpNanopub) -> NpStatus {
    guard(|| {
        let t = trusty::fix(&handle(np, "nanopub")?.0).map_err(trusty_failure)?;
        put(out, NpNanopub(t))
    })
}

/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_verify_trusty(np: *const NpNanopub, out: *mut NpVerdict) -> NpStatus {
    guard(|| {
        let verdict = match trusty::verify_trusty(&handle(np, "nanopub")?.0) {
            TrustyStatus::Valid => NpVerdict::Valid,
            TrustyStatus::Invalid => NpVerdict::Invalid,
            TrustyStatus::NoTrustyUri => NpVerdict::Absent,
        };
        let out = out
            .as_mut()
            .ok_or_else(|| fail(NpStatus::NullPointer, "output pointer is NULL"))?;
        *out = verdict;
        Ok(())
    })
}

/// On `NP_VERDICT_INVALID` the reason is available from `np_last_error`
/// even though the call itself returns `NP_STATUS_OK`.
///
/// # Safety
/// `np` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_verify_signature(np: *const NpNanopub, out: *mut NpVerdict) -> NpStatus {
    let mut reason = None;
    let status = guard(|| {
        let verdict = match sign::verify_signature(&handle(np, "nanopub")?.0) {
            SignatureStatus::Valid => NpVerdict::Valid,
            SignatureStatus::Unsigned => NpVerdict::Absent,
            SignatureStatus::Invalid(why) => {
                reason = Some(why);
                NpVerdict::Invalid
            }
        };
        let out = out
            .as_mut()
            .ok_or_else(|| fail(NpStatus::NullPointer, "output pointer is NULL"))?;
        *out = verdict;
        Ok(())
    });
    if let Some(r) = reason {
        set_last_error(&r);
    }
    status
}

/// Signs a nanopub without a trusty URI and mints one for the result.
///
/// # Safety
/// `np` and `key` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_nanopub_sign(
    np: *const NpNanopub,
    key: *const NpKeyPair,
    out: *mut *mut NpNanopub,
) -> NpStatus {
    guard(|| {
        let signed = sign::sign(&handle(np, "nanopub")?.0, &handle(key, "key")?.0).map_err(sign_failure)?;
        put(out, NpNanopub(signed))
    })
}

/// # Safety
/// `code` must be NUL-terminated or NULL.
#[no_mangle]
pub unsafe extern "C" fn np_artifact_code_is_valid(code: *const c_char) -> bool {
    catch_unwind(|| str_arg(code, "code").is_ok_and(|c| c.parse::<ArtifactCode>().is_ok())).unwrap_or(false)
}

/// True when `sentence` is a well-formed AIDA sentence.
///
/// # Safety
/// `sentence` must be NUL-terminated or NULL.
#[no_mangle]
pub unsafe extern "C" fn np_is_aida_sentence(sentence: *const c_char) -> bool {
    catch_unwind(|| str_arg(sentence, "sentence").is_ok_and(nanopub::nanopub::is_aida_sentence))
        .unwrap_or(false)
}

/// Fresh RSA key pair.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_keypair_generate(out: *mut *mut NpKeyPair) -> NpStatus {
    guard(|| put(out, NpKeyPair(KeyPair::generate().map_err(sign_failure)?)))
}

/// Loads a private key file as written by `np mkkeys`.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_keypair_load(path: *const c_char, out: *mut *mut NpKeyPair) -> NpStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        put(
            out,
            NpKeyPair(KeyPair::load(Path::new(path)).map_err(sign_failure)?),
        )
    })
}

/// Writes `path` and `path.pub`; refuses to overwrite.
///
/// # Safety
/// `key` must be a live handle; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn np_keypair_save(key: *const NpKeyPair, path: *const c_char) -> NpStatus {
    guard(|| {
        let key = handle(key, "key")?;
        key.0
            .write(Path::new(str_arg(path, "path")?))
            .map_err(sign_failure)
    })
}

/// Base64 public key, as stored in signed nanopubs.
///
/// # Safety
/// `key` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_keypair_public_key(key: *const NpKeyPair, out: *mut *mut c_char) -> NpStatus {
    guard(|| put_string(out, handle(key, "key")?.0.public_key_base64()))
}

/// # Safety
/// `key` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn np_keypair_free(key: *mut NpKeyPair) {
    if !key.is_null() {
        drop(Box::from_raw(key));
    }
}

/// Registry client over `count` server URLs; with `count == 0` the
/// built-in server list is used.
///
/// # Safety
/// `urls` must point to `count` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn np_client_new(
    urls: *const *const c_char,
    count: usize,
    out: *mut *mut NpClient,
) -> NpStatus {
    guard(|| {
        let list = if count == 0 {
            ServerList::default()
        } else {
            if urls.is_null() {
                return Err(fail(NpStatus::NullPointer, "urls is NULL"));
            }
            let urls = std::slice::from_raw_parts(urls, count)
                .iter()
                .map(|&u| str_arg(u, "url"))
                .collect::<Res<Vec<_>>>()?;
            ServerList::new(urls).map_err(client_failure)?
        };
        put(out, NpClient(Client::new(list)))
    })
}

/// # Safety
/// `client` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn np_client_free(client: *mut NpClient) {
    if !client.is_null() {
        drop(Box::from_raw(client));
    }
}

/// Fetches a nanopub by trusty URI or artifact code. Only copies whose
/// content matches the code are returned.
///
/// # Safety
/// `client` must be a live handle; `reference` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn np_client_get(
    client: *const NpClient,
    reference: *const c_char,
    out: *mut *mut NpNanopub,
) -> NpStatus {
    guard(|| {
        let client = handle(client, "client")?;
        let np = client
            .0
            .get(str_arg(reference, "reference")?)
            .map_err(client_failure)?;
        put(out, NpNanopub(np))
    })
}

/// Publishes a trusty nanopub; `server_out`, when not NULL, receives the
/// URL of the server that accepted it.
///
/// # Safety
/// `client` and `np` must be live handles; `server_out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn np_client_publish(
    client: *const NpClient,
    np: *const NpNanopub,
    server_out: *mut *mut c_char,
) -> NpStatus {
    guard(|| {
        let client = handle(client, "client")?;
        let np = handle(np, "nanopub")?;
        let reports = client
            .0
            .publish(std::slice::from_ref(&np.0))
            .map_err(client_failure)?;
        match reports.into_iter().next() {
            Some(r) if !server_out.is_null() => put_string(server_out, r.server),
            _ => Ok(()),
        }
    })
}

/// Number of servers holding a verified copy.
///
/// # Safety
/// `client` must be a live handle; `reference` NUL-terminated; `count` writable.
#[no_mangle]
pub unsafe extern "C" fn np_client_status(
    client: *const NpClient,
    reference: *const c_char,
    count: *mut usize,
) -> NpStatus {
    guard(|| {
        let client = handle(client, "client")?;
        let report = client
            .0
            .status(str_arg(reference, "reference")?)
            .map_err(client_failure)?;
        let count = count
            .as_mut()
            .ok_or_else(|| fail(NpStatus::NullPointer, "output pointer is NULL"))?;
        *count = report.count();
        Ok(())
    })
}
