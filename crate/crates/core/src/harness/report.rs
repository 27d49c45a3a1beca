// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};

use chrono::{DateTime, SecondsFormat, Utc};

/// Ordered `key: value` pairs written as the leading comment block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportMetadata {
    entries: Vec<(String, String)>,
}

impl ReportMetadata {
    /// Machine, date and FMA availability.
    pub fn standard() -> Self {
        let mut meta = Self::default();
        meta.push("machine", machine_descriptor());
        meta.push("date", report_date());
        meta.push(
            "fma",
            if cfg!(target_feature = "fma") {
                "hardware"
            } else {
                "software"
            },
        );
        meta
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(out, "# {k}: {}", v.replace('\n', " "))?;
        }
        Ok(())
    }
}

/// CPU model (when the OS exposes it), architecture and logical core count.
pub fn machine_descriptor() -> String {
    let model = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| "unknown cpu".to_string());
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!("{model}; {}; {cores} logical cores", std::env::consts::ARCH)
}

/// UTC timestamp, taken from `SOURCE_DATE_EPOCH` when set so that reports
/// can be reproduced byte for byte.
pub fn report_date() -> String {
    let time = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    time.to_rfc3339_opts(SecondsFormat::Secs, true)
}
