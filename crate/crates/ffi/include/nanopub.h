#ifndef NANOPUB_H
#define NANOPUB_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/*
 Result of every fallible call.
 */
typedef enum NpStatus {
  NP_STATUS_OK = 0,
  NP_STATUS_NULL_POINTER = 1,
  NP_STATUS_INVALID_UTF8 = 2,
  /*
   The text is not valid RDF in the given format.
   */
  NP_STATUS_PARSE = 3,
  /*
   The RDF does not hold exactly one well-formed nanopublication.
   */
  NP_STATUS_MALFORMED = 4,
  /*
   Trusty URI problems: nothing to fix, already trusty, or content that
   fails verification.
   */
  NP_STATUS_TRUSTY = 5,
  NP_STATUS_SIGNATURE = 6,
  NP_STATUS_NETWORK = 7,
  NP_STATUS_NOT_FOUND = 8,
  NP_STATUS_IO = 9,
  NP_STATUS_INVALID_ARGUMENT = 10,
  NP_STATUS_PANIC = 11,
} NpStatus;

/*
 Outcome of a verification.
 */
typedef enum NpVerdict {
  NP_VERDICT_VALID = 0,
  NP_VERDICT_INVALID = 1,
  /*
   No trusty URI, or no signature.
   */
  NP_VERDICT_ABSENT = 2,
} NpVerdict;

typedef struct NpClient NpClient;

typedef struct NpKeyPair NpKeyPair;

typedef struct NpNanopub NpNanopub;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next library call on the same thread.
 */
const char *np_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void np_string_free(char *s);

/*
 Parses a document holding exactly one nanopublication. `format` is
 "trig" or "nquads"; NULL means TriG.

 # Safety
 `text` and `format` must be NUL-terminated or NULL; `out` must be writable.
 */
enum NpStatus np_nanopub_parse(const char *text, const char *format, struct NpNanopub **out);

/*
 # Safety
 `np` must come from this library and not be freed twice. NULL is ignored.
 */
void np_nanopub_free(struct NpNanopub *np);

/*
 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_uri(const struct NpNanopub *np, char **out);

/*
 Serializes to "trig" or "nquads" (NULL means TriG).

 # Safety
 `np` must be a live handle; `format` NUL-terminated or NULL; `out` writable.
 */
enum NpStatus np_nanopub_to_string(const struct NpNanopub *np, const char *format, char **out);

/*
 Artifact code the nanopub's current content hashes to.

 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_artifact_code(const struct NpNanopub *np, char **out);

/*
 New nanopub with a trusty URI; the input is left untouched.

 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_make_trusty(const struct NpNanopub *np, struct NpNanopub **out);

/*
 Re-mints the trusty URI of an edited trusty nanopub.

 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_fix(const struct NpNanopub *np, struct NpNanopub **out);

/*
 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_verify_trusty(const struct NpNanopub *np, enum NpVerdict *out);

/*
 On `NP_VERDICT_INVALID` the reason is available from `np_last_error`
 even though the call itself returns `NP_STATUS_OK`.

 # Safety
 `np` must be a live handle; `out` must be writable.
 */
enum NpStatus np_nanopub_verify_signature(const struct NpNanopub *np, enum NpVerdict *out);

/*
 Signs a nanopub without a trusty URI and mints one for the result.

 # Safety
 `np` and `key` must be live handles; `out` must be writable.
 */
enum NpStatus np_nanopub_sign(const struct NpNanopub *np,
                              const struct NpKeyPair *key,
                              struct NpNanopub **out);

/*
 # Safety
 `code` must be NUL-terminated or NULL.
 */
bool np_artifact_code_is_valid(const char *code);

/*
 True when `sentence` is a well-formed AIDA sentence.

 # Safety
 `sentence` must be NUL-terminated or NULL.
 */
bool np_is_aida_sentence(const char *sentence);

/*
 Fresh RSA key pair.

 # Safety
 `out` must be writable.
 */
enum NpStatus np_keypair_generate(struct NpKeyPair **out);

/*
 Loads a private key file as written by `np mkkeys`.

 # Safety
 `path` must be NUL-terminated; `out` must be writable.
 */
enum NpStatus np_keypair_load(const char *path, struct NpKeyPair **out);

/*
 Writes `path` and `path.pub`; refuses to overwrite.

 # Safety
 `key` must be a live handle; `path` NUL-terminated.
 */
enum NpStatus np_keypair_save(const struct NpKeyPair *key, const char *path);

/*
 Base64 public key, as stored in signed nanopubs.

 # Safety
 `key` must be a live handle; `out` must be writable.
 */
enum NpStatus np_keypair_public_key(const struct NpKeyPair *key, char **out);

/*
 # Safety
 `key` must come from this library and not be freed twice. NULL is ignored.
 */
void np_keypair_free(struct NpKeyPair *key);

/*
 Registry client over `count` server URLs; with `count == 0` the
 built-in server list is used.

 # Safety
 `urls` must point to `count` NUL-terminated strings; `out` must be writable.
 */
enum NpStatus np_client_new(const char *const *urls, size_t count, struct NpClient **out);

/*
 # Safety
 `client` must come from this library and not be freed twice. NULL is ignored.
 */
void np_client_free(struct NpClient *client);

/*
 Fetches a nanopub by trusty URI or artifact code. Only copies whose
 content matches the code are returned.

 # Safety
 `client` must be a live handle; `reference` NUL-terminated; `out` writable.
 */
enum NpStatus np_client_get(const struct NpClient *client,
                            const char *reference,
                            struct NpNanopub **out);

/*
 Publishes a trusty nanopub; `server_out`, when not NULL, receives the
 URL of the server that accepted it.

 # Safety
 `client` and `np` must be live handles; `server_out` writable or NULL.
 */
enum NpStatus np_client_publish(const struct NpClient *client,
                                const struct NpNanopub *np,
                                char **server_out);

/*
 Number of servers holding a verified copy.

 # Safety
 `client` must be a live handle; `reference` NUL-terminated; `count` writable.
 */
enum NpStatus np_client_status(const struct NpClient *client, const char *reference, size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NANOPUB_H */
