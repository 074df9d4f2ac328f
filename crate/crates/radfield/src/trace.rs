// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text data files: reflection traces, attenuator chains and
//! sampled spectra.
//!
//! All three formats share one shape: `#`-prefixed header lines of the
//! form `# key: value` followed by comma separated numeric rows. Floats
//! are written with the shortest round-tripping representation, so a
//! write-read cycle reproduces values bit for bit and reruns produce byte
//! identical files (headers carry no timestamps).
//!
//! Reflection trace rows are `frequency_hz, power_watt, re_r, im_r`.
//! Chain rows are `attenuation_db, temperature_k`, warm end first.
//! Spectrum rows are `frequency_hz, value` where the value column keeps
//! the consumer's units (frequencies are converted to angular on read).

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::constants::angular_from_hz;
use crate::thermometry::{AttenuatorChain, NoiseSpectrum};
use crate::{Complex64, Error, Result};

/// How the trace was (or should be) referenced to remove the setup
/// response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReferenceMode {
    /// Raw, not referenced.
    #[default]
    None,
    /// Referenced against a far detuned probe of the same line.
    Detuned,
    /// Referenced against a strongly saturated atom.
    Saturated,
}

impl fmt::Display for ReferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceMode::None => "none",
            ReferenceMode::Detuned => "detuned",
            ReferenceMode::Saturated => "saturated",
        })
    }
}

impl FromStr for ReferenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(ReferenceMode::None),
            "detuned" => Ok(ReferenceMode::Detuned),
            "saturated" => Ok(ReferenceMode::Saturated),
            other => Err(Error::InvalidParameter(format!(
                "unknown reference mode '{other}'"
            ))),
        }
    }
}

/// One measured or simulated reflection sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Probe frequency, Hz.
    pub frequency_hz: f64,
    /// Probe power at the room temperature source, W.
    pub power_watt: f64,
    /// Complex reflection coefficient.
    pub reflection: Complex64,
}

/// A reflection data set over a frequency and power grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionTrace {
    points: Vec<TracePoint>,
    reference_mode: ReferenceMode,
}

const TRACE_FORMAT: &str = "reflection-trace/1";

impl ReflectionTrace {
    /// Wrap validated points.
    pub fn new(points: Vec<TracePoint>, reference_mode: ReferenceMode) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("trace has no points".into()));
        }
        for (i, pt) in points.iter().enumerate() {
            if !(pt.frequency_hz > 0.0) || !pt.frequency_hz.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "point {i}: frequency {} Hz",
                    pt.frequency_hz
                )));
            }
            if !(pt.power_watt > 0.0) || !pt.power_watt.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "point {i}: power {} W",
                    pt.power_watt
                )));
            }
            if !pt.reflection.re.is_finite() || !pt.reflection.im.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "point {i}: nonfinite reflection"
                )));
            }
        }
        Ok(Self {
            points,
            reference_mode,
        })
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn reference_mode(&self) -> ReferenceMode {
        self.reference_mode
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct powers in order of first appearance (powers are compared
    /// exactly; they come from grids, not arithmetic).
    pub fn distinct_powers(&self) -> Vec<f64> {
        let mut powers: Vec<f64> = Vec::new();
        for pt in &self.points {
            if !powers.iter().any(|&p| p == pt.power_watt) {
                powers.push(pt.power_watt);
            }
        }
        powers
    }

    /// Serialize to a writer.
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        self.write_to_annotated(w, &[])
    }

    /// Serialize with extra `# key: value` header lines (run settings,
    /// seeds and the like). Readers skip unknown headers, so annotations
    /// never affect a round trip.
    pub fn write_to_annotated<W: Write>(
        &self,
        mut w: W,
        annotations: &[(String, String)],
    ) -> Result<()> {
        writeln!(w, "# format: {TRACE_FORMAT}")?;
        writeln!(w, "# reference_mode: {}", self.reference_mode)?;
        for (key, value) in annotations {
            writeln!(w, "# {key}: {value}")?;
        }
        writeln!(w, "# columns: frequency_hz, power_watt, re_r, im_r")?;
        for pt in &self.points {
            writeln!(
                w,
                "{},{},{},{}",
                pt.frequency_hz, pt.power_watt, pt.reflection.re, pt.reflection.im
            )?;
        }
        Ok(())
    }

    /// Parse from a reader.
    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut reference_mode = ReferenceMode::None;
        let mut points = Vec::new();
        for (line_no, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let line_no = line_no + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(header) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = header.split_once(':') {
                    if key.trim() == "reference_mode" {
                        reference_mode = value.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("unknown reference mode '{}'", value.trim()),
                        })?;
                    }
                    // Other header keys (format, columns, provenance) are
                    // carried for humans and ignored here.
                }
                continue;
            }
            let fields = parse_float_row(trimmed, 4, line_no)?;
            points.push(TracePoint {
                frequency_hz: fields[0],
                power_watt: fields[1],
                reflection: Complex64::new(fields[2], fields[3]),
            });
        }
        if points.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no data rows".into(),
            });
        }
        Self::new(points, reference_mode)
    }

    /// Read a trace file.
    pub fn read_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_from(File::open(path)?)
    }

    /// Write a trace file atomically (temp file in the same directory,
    /// then rename).
    pub fn write_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        write_atomic(path.as_ref(), |w| self.write_to(w))
    }

    /// [`Self::write_path`] with extra header lines.
    pub fn write_path_annotated<P: AsRef<Path>>(
        &self,
        path: P,
        annotations: &[(String, String)],
    ) -> Result<()> {
        write_atomic(path.as_ref(), |w| self.write_to_annotated(w, annotations))
    }
}

/// Write through a sibling temp file and rename into place, so readers
/// never observe a partial file.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("invalid path {}", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp_path = path.with_file_name(tmp_name);
    let mut writer = BufWriter::new(File::create(&tmp_path)?);
    match write(&mut writer).and_then(|()| writer.flush().map_err(Error::from)) {
        Ok(()) => {
            std::fs::rename(&tmp_path, path)?;
            Ok(())
        }
        Err(e) => {
            let _ = std::fs::remove_file(&tmp_path);
            Err(e)
        }
    }
}

fn parse_float_row(line: &str, expected: usize, line_no: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {expected} columns, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("'{f}' is not a number"),
            })
        })
        .collect()
}

/// Read an attenuator chain from `attenuation_db, temperature_k` rows.
pub fn read_chain_from<R: Read>(r: R) -> Result<AttenuatorChain> {
    let mut rows = Vec::new();
    for (line_no, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = parse_float_row(trimmed, 2, line_no + 1)?;
        rows.push((fields[0], fields[1]));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no chain stages".into(),
        });
    }
    AttenuatorChain::from_db_rows(&rows)
}

/// Read an attenuator chain file.
pub fn read_chain<P: AsRef<Path>>(path: P) -> Result<AttenuatorChain> {
    read_chain_from(File::open(path)?)
}

/// Read a sampled spectrum from `frequency_hz, value` rows; frequencies
/// become angular, values are passed through.
pub fn read_spectrum_from<R: Read>(r: R) -> Result<NoiseSpectrum> {
    let mut samples = Vec::new();
    for (line_no, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = parse_float_row(trimmed, 2, line_no + 1)?;
        samples.push((angular_from_hz(fields[0]), fields[1]));
    }
    NoiseSpectrum::from_samples(samples)
}

/// Read a spectrum file.
pub fn read_spectrum<P: AsRef<Path>>(path: P) -> Result<NoiseSpectrum> {
    read_spectrum_from(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_trace() -> ReflectionTrace {
        ReflectionTrace::new(
            vec![
                TracePoint {
                    frequency_hz: 5.0e9,
                    power_watt: 1.0e-7,
                    reflection: Complex64::new(-0.987654321012345, 0.1),
                },
                TracePoint {
                    frequency_hz: 5.1e9,
                    power_watt: 1.0e-6,
                    reflection: Complex64::new(0.25, -1.0 / 3.0),
                },
            ],
            ReferenceMode::Detuned,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let trace = sample_trace();
        let mut buf = Vec::new();
        trace.write_to(&mut buf).unwrap();
        let back = ReflectionTrace::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn rewrite_is_byte_identical() {
        let trace = sample_trace();
        let mut a = Vec::new();
        let mut b = Vec::new();
        trace.write_to(&mut a).unwrap();
        trace.write_to(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "# format: reflection-trace/1\n5e9,1e-7,0.5\n";
        match ReflectionTrace::read_from(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_nonpositive_power() {
        let text = "5e9,0.0,0.5,0.0\n";
        assert!(ReflectionTrace::read_from(text.as_bytes()).is_err());
    }

    #[test]
    fn unknown_headers_are_ignored() {
        let text = "# format: reflection-trace/1\n# operator: someone\n5e9,1e-7,0.5,0.25\n";
        let trace = ReflectionTrace::read_from(text.as_bytes()).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.reference_mode(), ReferenceMode::None);
    }

    #[test]
    fn distinct_powers_keep_first_appearance_order() {
        let text = "5e9,1e-6,0,0\n5.1e9,1e-7,0,0\n5.2e9,1e-6,0,0\n";
        let trace = ReflectionTrace::read_from(text.as_bytes()).unwrap();
        assert_eq!(trace.distinct_powers(), vec![1.0e-6, 1.0e-7]);
    }

    #[test]
    fn atomic_write_replaces_and_cleans_up() {
        let dir = std::env::temp_dir().join("radfield-trace-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("trace.csv");
        let trace = sample_trace();
        trace.write_path(&path).unwrap();
        trace.write_path(&path).unwrap();
        let back = ReflectionTrace::read_path(&path).unwrap();
        assert_eq!(back, trace);
        assert!(!path.with_file_name("trace.csv.tmp").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn chain_file_parses_rows_and_comments() {
        let text = "# chain: warm to cold\n20, 4.0\n20, 0.1\n20, 0.01\n";
        let chain = read_chain_from(text.as_bytes()).unwrap();
        assert_eq!(chain.stages().len(), 3);
        assert!((chain.stages()[0].attenuation - 100.0).abs() < 1e-9);
    }

    #[test]
    fn spectrum_file_converts_frequencies_to_angular() {
        let text = "1.0e9, 0.5\n2.0e9, 0.25\n";
        let s = read_spectrum_from(text.as_bytes()).unwrap();
        let (lo, hi) = s.support();
        assert!((lo - angular_from_hz(1.0e9)).abs() < 1.0);
        assert!((hi - angular_from_hz(2.0e9)).abs() < 1.0);
        assert_eq!(s.density(angular_from_hz(1.0e9)), 0.5);
    }
}
