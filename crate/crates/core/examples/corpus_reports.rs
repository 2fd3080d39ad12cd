//! Runs every subcommand that applies to each bundled corpus document and
//! prints a one-line verdict per run.

use std::path::Path;

use sheafdual::cli::{parse_instance, run_command, Command, Options};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.ends_with("manifest.json"))
        .collect();
    files.sort();

    for path in files {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let (doc, inst) = match parse_instance(&path) {
            Ok(x) => x,
            Err(e) => {
                println!("{name:<32} input error: {e}");
                continue;
            }
        };
        let verdicts: Vec<String> = Command::ALL
            .iter()
            .filter_map(|&cmd| {
                let r = run_command(cmd, &doc, &inst, Options::default()).ok()?;
                Some(format!(
                    "{}={}",
                    cmd.name(),
                    if r.holds { "pass" } else { "fail" }
                ))
            })
            .collect();
        println!("{name:<32} {}", verdicts.join(" "));
    }
    Ok(())
}
