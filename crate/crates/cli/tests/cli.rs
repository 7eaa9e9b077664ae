use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

const TOY: &str = "x,y\n1,10\n2,12\n3,11\n4,15\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trendcheck"))
}

fn toy_file(dir: &Path) -> String {
    let path = dir.join("toy.csv");
    std::fs::write(&path, TOY).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn toy_args<'a>(cmd: &'a str, path: &'a str) -> Vec<&'a str> {
    vec![cmd, "--dataset", path, "--target", "y", "--trend", "x", "--begin", "1..2", "--end", "3..4", "--budgets", "500", "--seed", "1"]
}

#[test]
fn support_with_upper_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let mut args = toy_args("support", &path);
    args.extend(["--upper", "0"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("support (exact): 0.250"), "{}", stdout(&out));
    assert!(stdout(&out).contains("support (baseline): 0.250"));
}

#[test]
fn support_unbounded() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let out = run(&toy_args("support", &path));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("support (exact): 1.000"));
    assert!(stdout(&out).contains("mss: - -"));
}

#[test]
fn negative_lower_bound_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let mut args = toy_args("support", &path);
    args.extend(["--lower", "-1", "--upper", "1"]);
    let out = run(&args);
    assert!(stdout(&out).contains("support (exact): 0.500"), "{}", stdout(&out));
}

#[test]
fn overlapping_regions_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let out = run(&["support", "--dataset", &path, "--target", "y", "--trend", "x", "--begin", "1..3", "--end", "3..4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn data_errors_exit_one() {
    let out = run(&["support", "--dataset", "/nonexistent.csv", "--target", "y", "--trend", "x", "--begin", "1..2", "--end", "3..4"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let mut args = toy_args("support", &path);
    args.extend(["--window", "0.5"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    // mss without --width
    assert_eq!(run(&toy_args("mss", &path)).status.code(), Some(2));
    assert_eq!(run(&["support", "--dataset", &path]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn mss_and_tightest_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let mut args = toy_args("mss", &path);
    args.extend(["--width", "2"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("lo=-1.000 hi=1.000 support=0.500"), "{}", stdout(&out));

    let mut args = toy_args("tightest", &path);
    args.extend(["--min-support", "1.0"]);
    let out = run(&args);
    assert!(stdout(&out).contains("lo=-1.000 hi=5.000 width=6.000"), "{}", stdout(&out));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = toy_file(dir.path());
    let mut args = toy_args("all", &path);
    args.extend(["--lower", "0", "--width", "2", "--min-support", "0.5", "--json"]);
    let out = run(&args);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["support"]["exact"]["support"], 0.75);
    assert_eq!(v["echo"]["dataset_id"], "toy");
    assert_eq!(v["echo"]["sampling"]["seed"], 1);
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

fn http_get(port: u16, path: &str) -> Option<String> {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).ok()?;
    write!(stream, "GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").ok()?;
    let mut buf = String::new();
    stream.read_to_string(&mut buf).ok()?;
    Some(buf)
}

fn wait_for(port: u16, path: &str) -> String {
    let start = Instant::now();
    while start.elapsed() < Duration::from_secs(20) {
        if let Some(resp) = http_get(port, path) {
            return resp;
        }
        std::thread::sleep(Duration::from_millis(50));
    }
    panic!("server did not come up on port {port}");
}

#[test]
fn serve_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let port = free_port();
    let _server = Server(
        bin()
            .args(["serve", "--datasets", &dir.path().to_string_lossy(), "--port", &port.to_string()])
            .stderr(Stdio::null())
            .spawn()
            .unwrap(),
    );
    let resp = wait_for(port, "/api/datasets");
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.ends_with("[]"), "{resp}");
}

#[test]
fn serve_lists_datasets() {
    let dir = tempfile::tempdir().unwrap();
    toy_file(dir.path());
    let port = free_port();
    let _server = Server(
        bin()
            .args(["serve", "--datasets", &dir.path().to_string_lossy()])
            .env("TRENDCHECK_PORT", port.to_string())
            .stderr(Stdio::null())
            .spawn()
            .unwrap(),
    );
    let resp = wait_for(port, "/api/datasets");
    assert!(resp.contains("\"id\":\"toy\""), "{resp}");
}

#[test]
fn serve_missing_directory_exits_one() {
    let out = run(&["serve", "--datasets", "/definitely/not/here", "--port", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn serve_port_in_use_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let taken = TcpListener::bind("0.0.0.0:0").unwrap();
    let port = taken.local_addr().unwrap().port();
    let out = run(&["serve", "--datasets", &dir.path().to_string_lossy(), "--port", &port.to_string()]);
    assert_eq!(out.status.code(), Some(1));
}
