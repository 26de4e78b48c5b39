//! Robustness benchmark and strength sweep.
//!
//! For every cover and seed the benchmark calibrates the global strength to
//! a target PSNR, embeds a seeded random message, runs each attack (noise
//! attacks reuse the message seed), extracts and records the BER. Rows come
//! out in (cover, attack, seed) order regardless of thread count.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::attacks::{table1_suite, table2_suite, Attack};
use crate::codec::{extract, Embedder, Watermark};
use crate::complexity::CannyParams;
use crate::error::{Error, Result};
use crate::image_io::{read_pgm, Image};
use crate::metrics::{ber, psnr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 128-bit messages; median, AWGN, salt & pepper, Gaussian blur.
    Table1,
    /// 256-bit messages; median 3×3 and 5×5, JPEG at Q 20/30/40.
    Table2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub message_length: usize,
    pub attacks: Vec<Attack>,
    pub gamma: f64,
    pub alpha_min: f64,
    pub target_psnr: f64,
    pub seeds: Vec<u64>,
    pub canny: CannyParams,
}

impl BenchConfig {
    pub fn preset(preset: Preset, seeds: Vec<u64>) -> Self {
        let (message_length, attacks) = match preset {
            Preset::Table1 => (128, table1_suite()),
            Preset::Table2 => (256, table2_suite()),
        };
        Self {
            message_length,
            attacks,
            gamma: 0.4,
            alpha_min: 0.5,
            target_psnr: 45.0,
            seeds,
            canny: CannyParams::default(),
        }
    }
}

/// One calibrated embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedRecord {
    pub image: String,
    pub seed: u64,
    pub beta: f64,
    pub psnr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub attack: String,
    pub seed: u64,
    pub message_length: usize,
    pub gamma: f64,
    pub beta: f64,
    pub ber_percent: f64,
    /// PSNR of the attacked image against the watermarked one.
    pub psnr_attack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub image: String,
    pub attack: String,
    pub rows: usize,
    pub mean_ber: f64,
    pub min_ber: f64,
    pub max_ber: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub images: Vec<String>,
    pub embeddings: Vec<EmbedRecord>,
    pub rows: Vec<BenchRow>,
}

pub const CSV_HEADER: &str = "image,attack,seed,message_length,gamma,beta,ber_percent,psnr_attack";

impl BenchReport {
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut out = Vec::new();
        for image in &self.images {
            for attack in &self.config.attacks {
                let attack = attack.to_string();
                let bers: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| &r.image == image && r.attack == attack)
                    .map(|r| r.ber_percent)
                    .collect();
                if bers.is_empty() {
                    continue;
                }
                out.push(Aggregate {
                    image: image.clone(),
                    attack,
                    rows: bers.len(),
                    mean_ber: bers.iter().sum::<f64>() / bers.len() as f64,
                    min_ber: bers.iter().copied().fold(f64::INFINITY, f64::min),
                    max_ber: bers.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                });
            }
        }
        out
    }

    /// Mean BER of one attack across every image and seed.
    pub fn mean_ber(&self, attack: &Attack) -> Option<f64> {
        let name = attack.to_string();
        let bers: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.attack == name)
            .map(|r| r.ber_percent)
            .collect();
        (!bers.is_empty()).then(|| bers.iter().sum::<f64>() / bers.len() as f64)
    }

    /// Flat rows followed by `#`-prefixed aggregate lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.image,
                r.attack,
                r.seed,
                r.message_length,
                r.gamma,
                r.beta,
                r.ber_percent,
                r.psnr_attack
            );
        }
        s.push_str(
            "# aggregate,image,attack,rows,mean_ber_percent,min_ber_percent,max_ber_percent\n",
        );
        for a in self.aggregates() {
            let _ = writeln!(
                s,
                "# aggregate,{},{},{},{},{},{}",
                a.image, a.attack, a.rows, a.mean_ber, a.min_ber, a.max_ber
            );
        }
        s
    }

    /// Human-readable table of mean BER (%) per attack and image.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "BER (%) mean over {} seed(s); message length {} bits; target PSNR {} dB; gamma {}",
            c.seeds.len(),
            c.message_length,
            c.target_psnr,
            c.gamma
        );
        let seeds: Vec<String> = c.seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "seeds: {}", seeds.join(" "));
        s.push('\n');

        let _ = write!(s, "{:<14}", "attack");
        for img in &self.images {
            let _ = write!(s, "{img:>12}");
        }
        s.push('\n');
        let aggregates = self.aggregates();
        for attack in &c.attacks {
            let name = attack.to_string();
            let _ = write!(s, "{name:<14}");
            for img in &self.images {
                let mean = aggregates
                    .iter()
                    .find(|a| &a.image == img && a.attack == name)
                    .map(|a| a.mean_ber);
                match mean {
                    Some(m) => {
                        let _ = write!(s, "{m:>12.4}");
                    }
                    None => {
                        let _ = write!(s, "{:>12}", "-");
                    }
                }
            }
            s.push('\n');
        }

        s.push_str("\nembedding\n");
        for e in &self.embeddings {
            let _ = writeln!(
                s,
                "{:<14} seed {:<6} beta {:<10.6} psnr {:.4} dB",
                e.image, e.seed, e.beta, e.psnr
            );
        }
        s
    }
}

/// Loads every `.pgm` file in `dir`, sorted by file name.
pub fn load_covers(dir: impl AsRef<Path>) -> Result<Vec<(String, Image)>> {
    let mut paths: Vec<_> = fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no .pgm covers in {}",
            dir.as_ref().display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, read_pgm(p)?))
        })
        .collect()
}

pub fn run_bench(covers: &[(String, Image)], config: &BenchConfig) -> Result<BenchReport> {
    if covers.is_empty() {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one cover".into(),
        ));
    }
    if config.seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one seed".into(),
        ));
    }
    let embedders = covers
        .par_iter()
        .map(|(_, img)| Embedder::new(img, config.gamma, config.alpha_min, &config.canny))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, u64)> = (0..covers.len())
        .flat_map(|i| config.seeds.iter().map(move |&s| (i, s)))
        .collect();

    let results = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let name = &covers[i].0;
            let embedder = &embedders[i];
            let wm = Watermark::random(config.message_length, seed)?;
            let beta = embedder.calibrate_beta(&wm, config.target_psnr)?;
            let marked = embedder.embed_with_beta(&wm, beta)?;
            let record = EmbedRecord {
                image: name.clone(),
                seed,
                beta,
                psnr: psnr(embedder.cover(), &marked.image)?,
            };
            let rows = config
                .attacks
                .iter()
                .map(|attack| {
                    let attacked = attack.apply(&marked.image, seed)?;
                    let bits = extract(&attacked, &marked.side_info)?;
                    Ok(BenchRow {
                        image: name.clone(),
                        attack: attack.to_string(),
                        seed,
                        message_length: config.message_length,
                        gamma: config.gamma,
                        beta,
                        ber_percent: ber(wm.bits(), &bits)?,
                        psnr_attack: psnr(&marked.image, &attacked)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((record, rows))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut embeddings = Vec::with_capacity(results.len());
    let mut by_job = Vec::with_capacity(results.len());
    for (record, rows) in results {
        embeddings.push(record);
        by_job.push(rows);
    }
    // reorder from (image, seed, attack) to (image, attack, seed)
    let n_seeds = config.seeds.len();
    let mut rows = Vec::with_capacity(jobs.len() * config.attacks.len());
    for image_jobs in by_job.chunks(n_seeds) {
        for a in 0..config.attacks.len() {
            rows.extend(image_jobs.iter().map(|job| job[a].clone()));
        }
    }

    Ok(BenchReport {
        config: config.clone(),
        images: covers.iter().map(|(n, _)| n.clone()).collect(),
        embeddings,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    /// Unattacked PSNR at `beta = 1`, averaged over seeds.
    pub psnr: f64,
    /// BER averaged over every attack and seed.
    pub mean_ber: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSweep {
    pub rows: Vec<SweepRow>,
}

impl GammaSweep {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("gamma,psnr,mean_ber_percent\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{}", r.gamma, r.psnr, r.mean_ber);
        }
        s
    }
}

/// Sweeps the strength exponent with `beta = 1` and no PSNR calibration.
pub fn run_gamma_sweep(
    cover: &Image,
    gammas: &[f64],
    attacks: &[Attack],
    message_length: usize,
    seeds: &[u64],
) -> Result<GammaSweep> {
    if let Some(g) = gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(Error::InvalidParameter(format!(
            "gamma grid values must lie in [0, 1], got {g}"
        )));
    }
    if seeds.is_empty() || attacks.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep needs at least one seed and one attack".into(),
        ));
    }
    let rows = gammas
        .par_iter()
        .map(|&gamma| {
            let embedder = Embedder::new(cover, gamma, 0.5, &CannyParams::default())?;
            let mut psnr_sum = 0.0;
            let mut ber_sum = 0.0;
            for &seed in seeds {
                let wm = Watermark::random(message_length, seed)?;
                let marked = embedder.embed_with_beta(&wm, 1.0)?;
                psnr_sum += psnr(cover, &marked.image)?;
                for attack in attacks {
                    let attacked = attack.apply(&marked.image, seed)?;
                    ber_sum += ber(wm.bits(), &extract(&attacked, &marked.side_info)?)?;
                }
            }
            let n = seeds.len() as f64;
            Ok(SweepRow {
                gamma,
                psnr: psnr_sum / n,
                mean_ber: ber_sum / (n * attacks.len() as f64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaSweep { rows })
}
