//! RIFF/WAVE input and output: 16-bit PCM or 32-bit IEEE float, any channel
//! count on input (averaged to mono), mono on output.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SampleBuffer;

const I16_SCALE: f64 = 32_768.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BitDepth {
    Pcm16,
    Float32,
}

/// Outcome of [`write_wav`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteReport {
    pub samples_written: usize,
    /// Samples outside `[-1, 1]` that were saturated (16-bit output only).
    pub clipped: usize,
}

fn map_hound(path: &Path, err: hound::Error) -> Error {
    match err {
        hound::Error::IoError(source) => Error::io(path, source),
        other => Error::Format(format!("{}: {other}", path.display())),
    }
}

/// Quantizes `x` to the 16-bit grid used by [`write_wav`], saturating.
pub fn quantize_i16(x: f64) -> i16 {
    (x * I16_SCALE).round().clamp(-I16_SCALE, I16_SCALE - 1.0) as i16
}

/// Value that a 16-bit round trip of `x` reads back as.
pub fn through_i16(x: f64) -> f64 {
    f64::from(quantize_i16(x)) / I16_SCALE
}

/// Chunked reader that mixes interleaved channels down to mono.
pub struct WavStream {
    reader: WavReader<BufReader<File>>,
    path: std::path::PathBuf,
    channels: usize,
    format: SampleFormat,
    sample_rate_hz: u32,
}

impl WavStream {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let reader = WavReader::open(path).map_err(|e| map_hound(path, e))?;
        let spec = reader.spec();
        match (spec.sample_format, spec.bits_per_sample) {
            (SampleFormat::Int, 16) | (SampleFormat::Float, 32) => {}
            (fmt, bits) => {
                return Err(Error::Format(format!(
                    "{}: {bits}-bit {fmt:?} samples are not supported (16-bit PCM or 32-bit float only)",
                    path.display()
                )))
            }
        }
        if spec.channels == 0 {
            return Err(Error::Format(format!("{}: zero channels", path.display())));
        }
        if spec.sample_rate == 0 {
            return Err(Error::Format(format!("{}: zero sample rate", path.display())));
        }
        Ok(Self {
            channels: usize::from(spec.channels),
            format: spec.sample_format,
            sample_rate_hz: spec.sample_rate,
            path: path.to_path_buf(),
            reader,
        })
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    /// Frames (mono samples) declared in the header.
    pub fn len(&self) -> usize {
        self.reader.duration() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reads up to `max_len` mono samples; `None` once the data is exhausted.
    pub fn next_chunk(&mut self, max_len: usize) -> Result<Option<SampleBuffer>> {
        let want = max_len.max(1) * self.channels;
        let raw: Vec<f64> = match self.format {
            SampleFormat::Int => self
                .reader
                .samples::<i16>()
                .take(want)
                .map(|s| s.map(|v| f64::from(v) / I16_SCALE))
                .collect::<std::result::Result<_, _>>(),
            SampleFormat::Float => self
                .reader
                .samples::<f32>()
                .take(want)
                .map(|s| s.map(f64::from))
                .collect::<std::result::Result<_, _>>(),
        }
        .map_err(|e| map_hound(&self.path, e))?;
        if raw.is_empty() {
            return Ok(None);
        }
        if !raw.len().is_multiple_of(self.channels) {
            return Err(Error::io(
                &self.path,
                std::io::Error::new(std::io::ErrorKind::UnexpectedEof, "partial sample frame"),
            ));
        }
        let mono = if self.channels == 1 {
            raw
        } else {
            let c = self.channels as f64;
            raw.chunks_exact(self.channels)
                .map(|frame| frame.iter().sum::<f64>() / c)
                .collect()
        };
        SampleBuffer::new(mono, self.sample_rate_hz).map(Some)
    }
}

/// Reads a whole file as mono.
pub fn read_wav(path: impl AsRef<Path>) -> Result<SampleBuffer> {
    let mut stream = WavStream::open(path)?;
    let rate = stream.sample_rate_hz();
    let mut samples = Vec::with_capacity(stream.len());
    while let Some(chunk) = stream.next_chunk(1 << 16)? {
        samples.extend_from_slice(chunk.samples());
    }
    SampleBuffer::new(samples, rate)
}

/// Writes `buffer` as a mono file. 16-bit output saturates samples beyond
/// full scale and reports how many were clipped.
pub fn write_wav(path: impl AsRef<Path>, buffer: &SampleBuffer, depth: BitDepth) -> Result<WriteReport> {
    let path = path.as_ref();
    if buffer.is_empty() {
        return Err(Error::invalid("refusing to write an empty WAV file"));
    }
    let spec = WavSpec {
        channels: 1,
        sample_rate: buffer.sample_rate_hz(),
        bits_per_sample: match depth {
            BitDepth::Pcm16 => 16,
            BitDepth::Float32 => 32,
        },
        sample_format: match depth {
            BitDepth::Pcm16 => SampleFormat::Int,
            BitDepth::Float32 => SampleFormat::Float,
        },
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| map_hound(path, e))?;
    let mut clipped = 0;
    for &x in buffer.samples() {
        let res = match depth {
            BitDepth::Pcm16 => {
                if x.abs() > 1.0 {
                    clipped += 1;
                }
                writer.write_sample(quantize_i16(x))
            }
            BitDepth::Float32 => writer.write_sample(x as f32),
        };
        res.map_err(|e| map_hound(path, e))?;
    }
    writer.finalize().map_err(|e| map_hound(path, e))?;
    Ok(WriteReport {
        samples_written: buffer.len(),
        clipped,
    })
}
