//! Runs the Python smoke script when the extension is installed.

use std::path::Path;
use std::process::Command;

#[test]
fn python_smoke_script() {
    let importable = Command::new("python3")
        .args(["-c", "import reliattack"])
        .status()
        .map(|s| s.success())
        .unwrap_or(false);
    if !importable {
        eprintln!("skipping: reliattack is not installed for python3");
        return;
    }
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("python/smoke_test.py");
    let out = Command::new("python3").arg(script).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
