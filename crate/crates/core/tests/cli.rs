mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;
use nanopub::rdf::{Dataset, Format};
use nanopub::trusty::{verify_trusty, TrustyStatus};
use nanopub::{extract_nanopubs, Nanopub};

const CODES: [&str; 3] = [
    "RAHGB0WzgQijR88g_rIwtPCmzYgyO4wRMT7M91ouhojsQ",
    "RA4xTdhe2gPctqvAwdgTU4eRiR1aTQlTYJcF3Sohe5Cus",
    "RAEjvXP0xTkeIa2mKmYT66i_PAJ-u-k0uRBd6_sMe9qG0",
];

fn np(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_np"))
        .args(args)
        .current_dir(dir)
        .env_remove("NP_SERVERS")
        .output()
        .expect("np runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(o: Output) -> String {
    assert_eq!(
        o.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn read_nanopubs(path: &Path) -> Vec<Nanopub> {
    let text = std::fs::read_to_string(path).unwrap();
    extract_nanopubs(Dataset::parse(&text, Format::TriG).unwrap())
        .into_iter()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn golden_session() {
    let net = Network::start(5);
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("nanopubfile.trig"), FIXTURE).unwrap();
    let servers = net.servers_file(d);
    let servers = servers.to_str().unwrap();

    assert_eq!(
        ok(np(d, &["check", "nanopubfile.trig"])),
        "Summary: 3 valid (not trusty);\n"
    );

    assert_eq!(ok(np(d, &["mktrusty", "nanopubfile.trig"])), "");
    assert!(d.join("trusty.nanopubfile.trig").exists());
    let expected: String = CODES
        .iter()
        .enumerate()
        .map(|(i, c)| format!("Nanopub URI: http://example.org/np{}#{c}\n", i + 1))
        .collect();
    assert_eq!(ok(np(d, &["mktrusty", "-v", "nanopubfile.trig"])), expected);
    assert_eq!(
        ok(np(d, &["check", "trusty.nanopubfile.trig"])),
        "Summary: 3 valid (trusty);\n"
    );

    let line = ok(np(d, &["mkindex", "trusty.nanopubfile.trig"]));
    let index_uri = line
        .strip_prefix("Index URI: http://np.inn.ac/RA")
        .map(|_| line.trim_start_matches("Index URI: ").trim().to_string())
        .unwrap_or_else(|| panic!("unexpected mkindex output {line:?}"));
    let index = read_nanopubs(&d.join("index.trig"));
    assert_eq!(index.len(), 1);
    assert_eq!(index[0].uri(), index_uri);

    let out = ok(np(
        d,
        &["--servers", servers, "publish", "trusty.nanopubfile.trig"],
    ));
    let at = out
        .strip_prefix("3 nanopubs published at ")
        .unwrap_or_else(|| panic!("{out:?}"))
        .trim();
    assert!(net.urls.iter().any(|u| u == at), "{at}");
    let out = ok(np(d, &["--servers", servers, "publish", "index.trig"]));
    assert!(out.starts_with("1 nanopub published at "), "{out}");

    net.mirror(&read_nanopubs(&d.join("trusty.nanopubfile.trig")));
    net.mirror(&index);

    let uri1 = format!("http://example.org/np1#{}", CODES[0]);
    let out = ok(np(d, &["--servers", servers, "status", "-a", &uri1]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6, "{out}");
    let mut listed: Vec<String> = lines[..5]
        .iter()
        .map(|l| l.strip_prefix("URL: ").unwrap().to_string())
        .collect();
    listed.sort();
    let mut want: Vec<String> = net.urls.iter().map(|u| format!("{u}{}", CODES[0])).collect();
    want.sort();
    assert_eq!(listed, want);
    assert_eq!(lines[5], "Found on 5 nanopub servers.");

    for reference in [uri1.as_str(), CODES[0]] {
        let text = ok(np(d, &["--servers", servers, "get", reference]));
        let np = Nanopub::from_dataset(Dataset::parse(&text, Format::TriG).unwrap()).unwrap();
        assert_eq!(np.uri(), uri1);
        assert_eq!(verify_trusty(&np), TrustyStatus::Valid);
    }

    let code = index_uri.rsplit('/').next().unwrap();
    assert_eq!(
        ok(np(
            d,
            &["--servers", servers, "get", "-c", "-o", "content.trig", code]
        )),
        ""
    );
    let content = read_nanopubs(&d.join("content.trig"));
    let mut uris: Vec<&str> = content.iter().map(|n| n.uri()).collect();
    uris.sort();
    let mut want = vec![index_uri.as_str()];
    let trusty_uris: Vec<String> = CODES
        .iter()
        .enumerate()
        .map(|(i, c)| format!("http://example.org/np{}#{c}", i + 1))
        .collect();
    want.extend(trusty_uris.iter().map(String::as_str));
    want.sort();
    assert_eq!(uris, want);
}

#[test]
fn bare_invocation_is_usage() {
    let d = tempfile::tempdir().unwrap();
    let o = np(d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let help = stdout(&o);
    for cmd in [
        "check", "mktrusty", "fix", "mkindex", "publish", "get", "status", "server", "mkkeys", "sign",
    ] {
        assert!(help.contains(&format!("  {cmd} ")), "{cmd} missing from\n{help}");
    }

    let o = np(d.path(), &["check", "--bogus", "x.trig"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());

    assert_eq!(np(d.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn failures_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let o = np(d.path(), &["check", "missing.trig"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.trig"));

    std::fs::write(d.path().join("plain.trig"), FIXTURE).unwrap();
    let list = d.path().join("servers.list");
    std::fs::write(&list, format!("{}\n", dead_url())).unwrap();
    let o = np(
        d.path(),
        &["--servers", list.to_str().unwrap(), "publish", "plain.trig"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn servers_from_environment() {
    let net = Network::start(1);
    net.mirror(&trusty_fixture());
    let d = tempfile::tempdir().unwrap();
    let list = net.servers_file(d.path());
    let o = Command::new(env!("CARGO_BIN_EXE_np"))
        .args(["status", CODES[1]])
        .env("NP_SERVERS", &list)
        .output()
        .unwrap();
    assert_eq!(ok(o), "Found on 1 nanopub server.\n");
}

#[test]
fn sign_session() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    std::fs::write(p.join("nanopubfile.trig"), FIXTURE).unwrap();
    let out = ok(np(p, &["mkkeys", "-k", "keys/id_rsa"]));
    assert!(out.contains("keys/id_rsa.pub"), "{out}");
    let out = ok(np(p, &["sign", "-v", "-k", "keys/id_rsa", "nanopubfile.trig"]));
    assert_eq!(out.lines().count(), 3);
    assert_eq!(
        ok(np(p, &["check", "signed.nanopubfile.trig"])),
        "Summary: 3 signed;\n"
    );

    let tampered = std::fs::read_to_string(p.join("signed.nanopubfile.trig"))
        .unwrap()
        .replace("diseaseB", "diseaseX");
    std::fs::write(p.join("tampered.trig"), tampered).unwrap();
    ok(np(p, &["fix", "tampered.trig"]));
    let o = np(p, &["check", "fixed.tampered.trig"]);
    assert_eq!(o.status.code(), Some(1));
}
