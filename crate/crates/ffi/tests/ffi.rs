use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use scalekit_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { scalekit_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn from_catalog(name: &str, params: &[(&str, f64)]) -> (ScalekitStatus, *mut ScalekitDistribution) {
    let name = CString::new(name).unwrap();
    let keys: Vec<CString> = params.iter().map(|(k, _)| CString::new(*k).unwrap()).collect();
    let key_ptrs: Vec<*const c_char> = keys.iter().map(|k| k.as_ptr()).collect();
    let vals: Vec<f64> = params.iter().map(|(_, v)| *v).collect();
    let mut out = ptr::null_mut();
    let s = unsafe { scalekit_distribution_from_catalog(name.as_ptr(), key_ptrs.as_ptr(), vals.as_ptr(), vals.len(), &mut out) };
    (s, out)
}

#[test]
fn catalog_names_are_exposed() {
    let n = scalekit_catalog_len();
    assert!(n >= 20);
    let first = unsafe { CStr::from_ptr(scalekit_catalog_name(0)) };
    assert_eq!(first.to_str().unwrap(), "gumbel");
    assert!(scalekit_catalog_name(n).is_null());
}

#[test]
fn exponential_handle_round_trip() {
    let (s, d) = from_catalog("exponential", &[("lambda", 1.0)]);
    assert_eq!(s, ScalekitStatus::Ok);
    let len = unsafe { scalekit_distribution_len(d) };
    assert!(len > 100);

    let mut h = 0.0;
    assert_eq!(unsafe { scalekit_distribution_entropy(d, &mut h) }, ScalekitStatus::Ok);
    assert!((h - 1.0).abs() < 1e-6);

    let mut l = 0.0;
    assert_eq!(unsafe { scalekit_distribution_laplace(d, 1.0, &mut l) }, ScalekitStatus::Ok);
    assert!((l - 0.5).abs() < 1e-10);

    let mut small = vec![0.0; len - 1];
    let s = unsafe { scalekit_distribution_table(d, small.as_mut_ptr(), ptr::null_mut(), small.len()) };
    assert_eq!(s, ScalekitStatus::BufferTooSmall);

    let mut grid = vec![0.0; len];
    let mut dens = vec![0.0; len];
    let s = unsafe { scalekit_distribution_table(d, grid.as_mut_ptr(), dens.as_mut_ptr(), len) };
    assert_eq!(s, ScalekitStatus::Ok);
    assert!(grid.windows(2).all(|w| w[1] > w[0]));
    assert!((dens[0] - (-grid[0]).exp()).abs() < 1e-12);

    unsafe { scalekit_distribution_free(d) };
}

#[test]
fn errors_come_back_as_codes_with_messages() {
    let (s, d) = from_catalog("nosuch", &[]);
    assert_eq!(s, ScalekitStatus::UnknownDistribution);
    assert!(d.is_null());
    assert!(last_error().contains("nosuch"));

    let (s, _) = from_catalog("lomax", &[("k", 0.5), ("alpha", 1.0)]);
    assert_eq!(s, ScalekitStatus::ParameterOutOfDomain);

    let json = CString::new(
        r#"{"scale":{"base":{"logdeform":{"c":0,"inner":"linear"}}},"observable":"identity","lambda":0.5,"measure":"unit","support":{"lo":0,"hi":null}}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { scalekit_distribution_from_spec_json(json.as_ptr(), &mut out) };
    assert_eq!(s, ScalekitStatus::DivergentIntegral);

    let s = unsafe { scalekit_distribution_density_at(ptr::null(), 1.0, &mut 0.0) };
    assert_eq!(s, ScalekitStatus::NullPointer);
}

#[test]
fn verify_and_levy_through_the_abi() {
    let name = CString::new("gumbel").unwrap();
    let k1 = CString::new("lambda").unwrap();
    let k2 = CString::new("beta").unwrap();
    let keys = [k1.as_ptr(), k2.as_ptr()];
    let vals = [1.0, 1.0];
    let (mut err, mut pass) = (0.0, false);
    let s = unsafe { scalekit_verify_entry(name.as_ptr(), keys.as_ptr(), vals.as_ptr(), 2, &mut err, &mut pass) };
    assert_eq!(s, ScalekitStatus::Ok);
    assert!(pass && err < 1e-8);

    let mut d = ptr::null_mut();
    assert_eq!(unsafe { scalekit_levy_stable(1.0, 1.0, 0, 0.0, &mut d) }, ScalekitStatus::Ok);
    let mut p = 0.0;
    unsafe { scalekit_distribution_density_at(d, 0.0, &mut p) };
    assert!((p - 1.0 / std::f64::consts::PI).abs() < 1e-6);
    unsafe { scalekit_distribution_free(d) };
}

#[test]
fn scenario_fit_through_the_abi() {
    let name = CString::new("waiting_time_gamma").unwrap();
    let mut fit = ScalekitFit {
        ks_statistic: 0.0,
        threshold: 0.0,
        sample_count: 0,
        pass: false,
    };
    let s = unsafe { scalekit_run_scenario(name.as_ptr(), 10_000, 42, &mut fit) };
    assert_eq!(s, ScalekitStatus::Ok);
    assert!(fit.pass);
    assert_eq!(fit.sample_count, 10_000);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/scalekit.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 10);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

/// Compile the C smoke program against the generated header and the static
/// library. `cargo test` only builds the rlib, so the static library is built
/// here with the profile of the running test binary.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler ({cc}); skipping");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile = profile_dir.file_name().unwrap().to_str().unwrap().to_owned();
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let mut build = Command::new(cargo);
    build.args(["build", "--lib", "--manifest-path"]).arg(manifest.join("Cargo.toml"));
    if profile != "debug" {
        build.args(["--profile", &profile]);
    }
    assert!(build.status().unwrap().success(), "building the static library failed");
    let lib = profile_dir.join("libscalekit_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
