//! Content-addressed cache of period matrices.
//!
//! Entries live in `<dir>/<sha256>.json`, keyed by the curve input, the root ordering in use,
//! the period configuration and the cache format version. Unreadable entries are recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curve::Curve;
use crate::error::Result;
use crate::periods::{PeriodConfig, PeriodRecord, Periods};

/// Bumped whenever the period construction changes; old entries then miss.
pub const CACHE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "/periods-1");

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    version: String,
    record: PeriodRecord,
}

/// Whether the last lookup was served from disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Corrupt,
    Disabled,
}

pub fn cache_key(curve: &Curve, cfg: &PeriodConfig) -> String {
    let doc = serde_json::json!({
        "config": cfg,
        "curve": curve.input(),
        "ordering": curve.ordering(),
        "version": CACHE_VERSION,
    });
    hex::encode(Sha256::digest(doc.to_string().as_bytes()))
}

pub fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

fn load(path: &Path, key: &str, curve: &Curve, cfg: &PeriodConfig) -> std::result::Result<Periods, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let entry: Entry = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    if entry.key != key || entry.version != CACHE_VERSION {
        return Err("key or version mismatch".into());
    }
    if entry.record.curve != curve.input() || entry.record.config != *cfg {
        return Err("record does not match the requested curve".into());
    }
    Periods::from_record(&entry.record).map_err(|e| e.to_string())
}

/// Periods of `curve`, from `dir` when a valid entry exists, otherwise computed and stored.
pub fn cached_periods(dir: Option<&Path>, curve: &Curve, cfg: &PeriodConfig) -> Result<(Periods, Lookup)> {
    let Some(dir) = dir else {
        return Ok((Periods::compute(curve, cfg)?, Lookup::Disabled));
    };
    let key = cache_key(curve, cfg);
    let path = entry_path(dir, &key);
    let mut status = Lookup::Miss;
    if path.exists() {
        match load(&path, &key, curve, cfg) {
            Ok(p) => {
                info!("stage=cache event=hit key={key}");
                return Ok((p, Lookup::Hit));
            }
            Err(e) => {
                warn!("stage=cache event=corrupt key={key} reason={e:?}");
                status = Lookup::Corrupt;
            }
        }
    } else {
        info!("stage=cache event=miss key={key}");
    }
    let periods = Periods::compute(curve, cfg)?;
    let entry = Entry { key: key.clone(), version: CACHE_VERSION.into(), record: periods.to_record(cfg) };
    let stored = fs::create_dir_all(dir).and_then(|_| {
        let tmp = dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(&entry).expect("record serializes"))?;
        fs::rename(&tmp, &path)
    });
    if let Err(e) = stored {
        warn!("stage=cache event=write-failed key={key} reason={:?}", e.to_string());
    }
    // reload through the record so hits and misses produce identical numbers
    let periods = Periods::from_record(&entry.record)?;
    Ok((periods, status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn curve() -> Curve {
        let c = |re, im| Complex64::new(re, im);
        Curve::from_roots(vec![c(-1.0, 0.1), c(-0.2, 0.9), c(0.3, -0.6), c(0.8, 0.2), c(1.4, -0.1)], None).unwrap()
    }

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cv = curve();
        let cfg = PeriodConfig::default();
        let (p1, s1) = cached_periods(Some(dir.path()), &cv, &cfg).unwrap();
        assert_eq!(s1, Lookup::Miss);
        let (p2, s2) = cached_periods(Some(dir.path()), &cv, &cfg).unwrap();
        assert_eq!(s2, Lookup::Hit);
        assert_eq!(p1.mu, p2.mu);
        assert_eq!(p1.tau, p2.tau);

        let other = PeriodConfig { rtol: 1e-11, ..cfg };
        assert_ne!(cache_key(&cv, &cfg), cache_key(&cv, &other));
        assert_eq!(cached_periods(Some(dir.path()), &cv, &other).unwrap().1, Lookup::Miss);

        fs::write(entry_path(dir.path(), &cache_key(&cv, &cfg)), "{ not json").unwrap();
        let (p3, s3) = cached_periods(Some(dir.path()), &cv, &cfg).unwrap();
        assert_eq!(s3, Lookup::Corrupt);
        assert_eq!(p1.tau, p3.tau);
        assert_eq!(cached_periods(Some(dir.path()), &cv, &cfg).unwrap().1, Lookup::Hit);
    }
}
