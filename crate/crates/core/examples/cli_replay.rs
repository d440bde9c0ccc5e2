//! Drives the command-line front end in-process and reads back the run
//! record it leaves in the cache directory.
//!
//! cargo run --example cli_replay

use arw::cli::{run, RunRecord};

fn main() -> arw::Result<()> {
    let dir = std::env::temp_dir().join("arw-cli-replay");
    let dir_arg = dir.to_string_lossy().into_owned();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        [
            "arw",
            "--cache-dir",
            &dir_arg,
            "semicorr",
            "25",
            "--l",
            "4",
            "--with-corr",
            "--with-diagonal",
        ],
        &mut out,
        &mut err,
    );
    print!("exit {code}: {}", String::from_utf8_lossy(&out));
    for entry in std::fs::read_dir(&dir)? {
        let path = entry?.path();
        let record: RunRecord = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        println!(
            "{} -> {} {:?}",
            path.display(),
            record.command,
            record.parameters
        );
    }
    Ok(())
}
