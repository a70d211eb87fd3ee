use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::process::Command;
use std::thread;

use zeta_qsm::cli::run;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn zq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("zeta-qsm").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn zeta_gauss_golden() {
    let (code, out, _) = zq(&["zeta", &data("gauss.field"), "--limit", "10"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "# field=Q(i)\n# limit=10\n# mask=none\nn,a_n\n1,1\n2,1\n3,0\n4,1\n5,2\n6,0\n7,0\n8,1\n9,1\n10,2\n"
    );
}

#[test]
fn zeta_masks_undetermined_primes() {
    let (code, out, _) = zq(&["zeta", &data("k8_48.field"), "--limit", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("# mask=2\n"));
    assert!(out.ends_with("1,1\n2,masked\n3,1\n4,masked\n"), "{out}");
}

#[test]
fn equiv_verdicts() {
    let (code, out, _) = zq(&["equiv", &data("k8_3.field"), &data("k8_48.field"), "--limit", "500", "--exclude", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS equal on"), "{out}");
    let (code, out, _) = zq(&["equiv", &data("gauss.field"), &data("sqrt_m2.field"), "--limit", "50"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAIL first mismatch at n = 3"), "{out}");
}

#[test]
fn gassmann_on_shipped_groups() {
    let (code, out, _) = zq(&["gassmann", &data("fano.group"), "--h1", "points", "--h2", "lines"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS equivalent, non-conjugate\n# group_order=168\n"), "{out}");
    let (code, out, _) = zq(&["gassmann", &data("order32.group"), "--h1", "h1", "--h2", "h2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS equivalent, non-conjugate\n# group_order=32\n"), "{out}");
    let (code, out, _) = zq(&["gassmann", &data("fano.group"), "--h1", "points", "--h2", "points"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS equivalent, conjugate"));
    assert_eq!(zq(&["gassmann", &data("fano.group"), "--h1", "points", "--h2", "nope"]).0, 2);
}

#[test]
fn twist_count_psi_qsm_pass() {
    for args in [
        vec!["twist", &data("gauss.field"), "-d", "-3", "--limit", "300"],
        vec!["count", &data("k8_3.field"), &data("k8_48.field"), "-m", "5", "--limit", "300"],
        vec!["psi", &data("k8_3.field"), &data("k8_48.field"), "--limit", "300", "--exclude", "3"],
        vec!["qsm", &data("gauss.field"), "--limit", "500", "--beta", "2", "-d", "-4"],
        vec!["qsm", &data("q.field"), "--limit", "500", "--mod", "7", "--gamma", "3"],
        vec!["classgroup", "-d", "-56", "--limit", "40", "--characters"],
    ] {
        let (code, out, err) = zq(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.starts_with("PASS "), "{args:?}: {out}");
    }
}

#[test]
fn psi_rejects_inequivalent_fields() {
    let (code, out, _) = zq(&["psi", &data("gauss.field"), &data("sqrt_m2.field"), "--limit", "100"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAIL"));
}

#[test]
fn exit_code_matrix() {
    let k48 = data("k8_48.field");
    let k3 = data("k8_3.field");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["zeta"], 2),
        (vec!["frobnicate"], 2),
        (vec!["zeta", "/no/such.field"], 2),
        (vec!["zeta", &k48, "--limit", "0"], 2),
        (vec!["zeta", &k48, "--limit", "1000001"], 2),
        (vec!["qsm", &k48, "--beta", "1.0"], 2),
        (vec!["qsm", &k48, "--beta", "50.5"], 2),
        (vec!["classgroup", "-d", "-10007"], 2),
        (vec!["classgroup", "-d", "12"], 2),
        (vec!["twist", &k48, "-d", "0"], 2),
        (vec!["zeta", &k48, "--mask", "strict"], 3),
        (vec!["equiv", &k48, &k48, "--mask", "strict", "--limit", "50"], 3),
        (vec!["zeta", &k48, "--mask", "strict", "--exclude", "2"], 0),
        (vec!["zeta", &k48, "--mask", "overrides-required", "--exclude", "2"], 3),
        (vec!["zeta", &k3, "--mask", "overrides-required"], 0),
        (vec!["fetch", "not-a-label"], 5),
        (vec!["--version"], 0),
    ];
    for (args, want) in cases {
        assert_eq!(zq(&args).0, want, "{args:?}");
    }
}

#[test]
fn output_flag_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = zq(&["zeta", &data("q.field"), "--limit", "3", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(&path).unwrap();
    let rows: Vec<Vec<String>> = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    assert_eq!(rows, vec![vec!["1", "1"], vec!["2", "1"], vec!["3", "1"]]);
}

#[test]
fn threads_flag_gives_identical_output() {
    let one = zq(&["zeta", &data("k8_3.field"), "--limit", "3000", "--threads", "1"]);
    let four = zq(&["zeta", &data("k8_3.field"), "--limit", "3000", "--threads", "4"]);
    assert_eq!(one, four);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_zeta-qsm");
    let st = Command::new(bin).args(["zeta", &data("q.field"), "--limit", "2"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&st.stdout), "# field=Q\n# limit=2\n# mask=none\nn,a_n\n1,1\n2,1\n");
    let st = Command::new(bin).args(["equiv", &data("gauss.field"), &data("sqrt_m2.field")]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
}

/// Serves `responses` in order, one connection each; returns the base URL.
fn mock_server(responses: Vec<(u16, String)>) -> (String, thread::JoinHandle<Vec<String>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/api/nf_fields/", listener.local_addr().unwrap());
    let handle = thread::spawn(move || {
        let mut requests = Vec::new();
        for (status, body) in responses {
            let (mut stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            requests.push(line.trim_end().to_string());
            loop {
                let mut h = String::new();
                reader.read_line(&mut h).unwrap();
                if h == "\r\n" || h.is_empty() {
                    break;
                }
            }
            let reason = if status == 200 { "OK" } else { "Not Found" };
            write!(
                stream,
                "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
            let _ = stream.read(&mut [0u8; 16]);
        }
        requests
    });
    (url, handle)
}

#[test]
fn fetch_against_mock_server() {
    let (url, handle) = mock_server(vec![
        (200, r#"{"data": [{"label": "2.0.4.1", "coeffs": [1, 0, 1]}]}"#.into()),
        (200, r#"{"data": []}"#.into()),
        (404, "{}".into()),
    ]);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.field");
    let o = out.to_str().unwrap();

    let (code, stdout, err) = zq(&["fetch", "2.0.4.1", "--endpoint", &url, "--output", o]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("label=2.0.4.1"));
    let (code, z, _) = zq(&["zeta", o, "--limit", "5"]);
    assert_eq!(code, 0);
    assert!(z.ends_with("n,a_n\n1,1\n2,1\n3,0\n4,1\n5,2\n"));

    assert_eq!(zq(&["fetch", "2.0.3.1", "--endpoint", &url, "--output", o]).0, 5);
    assert_eq!(zq(&["fetch", "2.0.7.1", "--endpoint", &url, "--output", o]).0, 5);
    let requests = handle.join().unwrap();
    assert_eq!(requests[0], "GET /api/nf_fields/?label=2.0.4.1&_format=json&_fields=label,coeffs HTTP/1.1");
}

#[test]
fn fetch_unreachable_endpoint_is_network_error() {
    // bind then drop to get a port with nothing listening
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.field");
    let url = format!("http://127.0.0.1:{port}/api/nf_fields/");
    let (code, _, err) = zq(&["fetch", "2.0.4.1", "--endpoint", &url, "--output", out.to_str().unwrap()]);
    assert_eq!(code, 4, "{err}");
    assert!(!out.exists());
}
