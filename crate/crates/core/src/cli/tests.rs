use std::path::Path;

use super::run;
use crate::testutil::FIXTURE;

const SUBCOMMANDS: [&str; 10] = [
    "check", "mktrusty", "fix", "mkindex", "publish", "get", "status", "server", "mkkeys", "sign",
];

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn np(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("np").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture_file(dir: &Path) -> String {
    let path = dir.join("nanopubfile.trig");
    std::fs::write(&path, FIXTURE).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn no_arguments_lists_every_subcommand() {
    let r = np(&[]);
    assert_eq!(r.code, 2);
    for sub in SUBCOMMANDS {
        assert!(
            r.out.lines().any(|l| l.trim_start().starts_with(sub)),
            "{sub} missing:\n{}",
            r.out
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(np(&["frobnicate"]).code, 2);
    let r = np(&["check", "--bogus", "x"]);
    assert_eq!(r.code, 2);
    assert!(r.out.is_empty());
    assert!(!r.err.is_empty());
    assert_eq!(np(&["check"]).code, 2);
    assert_eq!(np(&["--help"]).code, 0);
}

#[test]
fn check_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    let r = np(&["check", &file]);
    assert_eq!((r.code, r.out.as_str()), (0, "Summary: 3 valid (not trusty);\n"));
    assert!(r.err.is_empty());
}

#[test]
fn check_reports_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.trig");
    let broken = FIXTURE.replacen(" np:hasPublicationInfo :pubinfo", "", 1);
    std::fs::write(&path, broken).unwrap();
    let r = np(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    // the unlinked pubinfo graph is reported as an orphan too
    assert_eq!(r.out, "Summary: 2 valid (not trusty); 2 invalid;\n");
    assert!(
        r.err.contains("R2: head lacks np:hasPublicationInfo"),
        "{}",
        r.err
    );

    let r = np(&["check", dir.path().join("missing.trig").to_str().unwrap()]);
    assert_eq!((r.code, r.out.as_str()), (1, "Summary: 1 invalid;\n"));
}

#[test]
fn mktrusty_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    let r = np(&["mktrusty", "-v", &file]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(
        r.out,
        "Nanopub URI: http://example.org/np1#RAHGB0WzgQijR88g_rIwtPCmzYgyO4wRMT7M91ouhojsQ\n\
         Nanopub URI: http://example.org/np2#RA4xTdhe2gPctqvAwdgTU4eRiR1aTQlTYJcF3Sohe5Cus\n\
         Nanopub URI: http://example.org/np3#RAEjvXP0xTkeIa2mKmYT66i_PAJ-u-k0uRBd6_sMe9qG0\n"
    );
    let out = dir.path().join("trusty.nanopubfile.trig");
    assert!(out.exists());
    let r = np(&["check", out.to_str().unwrap()]);
    assert_eq!(r.out, "Summary: 3 valid (trusty);\n");

    let again = np(&["mktrusty", out.to_str().unwrap()]);
    assert_eq!(again.code, 1);
    assert!(again.err.contains("already has a trusty URI"));
}

#[test]
fn format_flag_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    let nq = dir.path().join("all.nq");
    let r = np(&["mktrusty", "-o", nq.to_str().unwrap(), &file]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(std::fs::read_to_string(&nq).unwrap().lines().count(), 24);

    let odd = dir.path().join("data.txt");
    std::fs::copy(&nq, &odd).unwrap();
    assert_eq!(np(&["check", odd.to_str().unwrap()]).code, 1);
    let r = np(&["--format", "nquads", "check", odd.to_str().unwrap()]);
    assert_eq!(r.out, "Summary: 3 valid (trusty);\n");
}

#[test]
fn fix_after_edit() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    np(&["mktrusty", &file]);
    let trusty = dir.path().join("trusty.nanopubfile.trig");
    let t = trusty.to_str().unwrap();
    let r = np(&["fix", t]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("nothing to fix"), "{}", r.err);

    let edited = std::fs::read_to_string(&trusty)
        .unwrap()
        .replace("diseaseB", "diseaseC");
    std::fs::write(&trusty, edited).unwrap();
    assert_eq!(np(&["check", t]).out, "Summary: 3 invalid;\n");
    let r = np(&["fix", "-v", t]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.lines().count(), 3);
    let fixed = dir.path().join("fixed.trusty.nanopubfile.trig");
    assert_eq!(
        np(&["check", fixed.to_str().unwrap()]).out,
        "Summary: 3 valid (trusty);\n"
    );
}

#[test]
fn keys_and_signing() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    let key = dir.path().join("id_rsa");
    let k = key.to_str().unwrap();
    let r = np(&["mkkeys", "-k", k]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(dir.path().join("id_rsa.pub").exists());
    assert_eq!(np(&["mkkeys", "-k", k]).code, 1);

    let r = np(&["sign", "-v", "-k", k, &file]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(
        r.out
            .lines()
            .filter(|l| l.starts_with("Nanopub URI: http://example.org/np"))
            .count(),
        3
    );
    let signed = dir.path().join("signed.nanopubfile.trig");
    assert_eq!(
        np(&["check", signed.to_str().unwrap()]).out,
        "Summary: 3 signed;\n"
    );

    let r = np(&["sign", "-k", dir.path().join("nope").to_str().unwrap(), &file]);
    assert_eq!(r.code, 1);
}

#[test]
fn mkindex_prints_index_uri() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_file(dir.path());
    np(&["mktrusty", &file]);
    let trusty = dir.path().join("trusty.nanopubfile.trig");
    let out = dir.path().join("index.trig");
    let r = np(&["mkindex", "-o", out.to_str().unwrap(), trusty.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let uri = r
        .out
        .strip_prefix("Index URI: http://np.inn.ac/")
        .unwrap()
        .trim_end();
    assert!(uri.parse::<crate::trusty::ArtifactCode>().is_ok(), "{}", r.out);
    assert_eq!(
        np(&["check", out.to_str().unwrap()]).out,
        "Summary: 1 valid (trusty);\n"
    );

    let r = np(&["mkindex", "-o", out.to_str().unwrap(), &file]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("is not a trusty URI"));
}

#[test]
fn network_commands_need_a_readable_server_list() {
    let r = np(&[
        "--servers",
        "/nonexistent/servers.list",
        "status",
        "RAhV9IpiUEjbentzGivp1Lbx0BVegp5sgE3BwS0S2RAYM",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("cannot read server list"));
}
