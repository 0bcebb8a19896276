//! Interrupt a checkpointed run, resume it, and confirm the result is
//! bit-identical to an uninterrupted run.
//!
//! cargo run --release --example checkpoint_resume

use psimoment::report::{to_csv, Checkpoint, Mode};
use psimoment::{run, RunConfig};

fn main() -> psimoment::Result<()> {
    let path = std::env::temp_dir().join("psimoment-example.ckpt");
    let mut cfg = RunConfig::new(Mode::ScaledIntegral, 5e6, &[2, 4, 6]).with_delta(1e-3);
    cfg.segment_size = 1 << 18;
    cfg.record_timing = false;
    cfg.checkpoint_path = Some(path.clone());

    let full = run(&cfg)?;
    let text = std::fs::read_to_string(&path).map_err(|e| psimoment::Error::io(&path, e))?;
    let lines: Vec<&str> = text.lines().collect();
    println!("checkpoint has {} segment records", lines.len() - 1);

    // Keep the header and the first few records, then tear the next one.
    let keep = 4.min(lines.len() - 1);
    let mut cut = lines[..=keep].join("\n");
    cut.push('\n');
    if let Some(next) = lines.get(keep + 1) {
        cut.push_str(&next[..next.len() / 2]);
    }
    std::fs::write(&path, cut).map_err(|e| psimoment::Error::io(&path, e))?;
    println!(
        "after truncation: {} records usable",
        Checkpoint::load(&path)?.completed.len()
    );

    cfg.resume = true;
    cfg.threads = 4;
    let resumed = run(&cfg)?;
    println!(
        "identical CSV after resume: {}",
        to_csv(&full) == to_csv(&resumed)
    );
    print!("{}", to_csv(&resumed));
    std::fs::remove_file(&path).map_err(|e| psimoment::Error::io(&path, e))?;
    Ok(())
}
