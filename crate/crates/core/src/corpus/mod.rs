//! Corpus construction: WAV I/O, RMS and EBR arithmetic, event mixing with
//! exact ground truth, and the synthetic corpus generator.

mod generate;
mod manifest;
mod mix;
pub mod wav;

pub use generate::{
    generate_corpus, mixture_file_name, synth_background, synth_event, synthesize_clip, CorpusSpec,
    EventKind, SynthClip,
};
pub use manifest::{CorpusManifest, MANIFEST_FILE, SPEC_FILE};
pub use mix::{measure_ebr_db, mix_at_ebr, segment_rms, MixtureRecord};
pub use wav::{read_wav, write_wav, BitDepth, WavStream, WriteReport};
