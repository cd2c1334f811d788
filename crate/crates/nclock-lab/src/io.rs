//! Field files: a versioned header followed by the state-index array.
//!
//! Binary layout (little-endian): magic `NCLKFLD\0`, `u32` format version,
//! `u32` header length, the header as JSON, `u64` site count, then one `u32`
//! state index per site in domain order. The JSON variant stores
//! `{"header": .., "states": [..]}` in a single document.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nclock::{build_domain, DiscreteCircle, Point, Shape, SpinField};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"NCLKFLD\0";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported field format version {found} (this build reads {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt field payload: {0}")]
    CorruptPayload(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    Json,
    Binary,
}

impl FieldFormat {
    /// `.json` selects JSON, anything else binary.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => FieldFormat::Json,
            _ => FieldFormat::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum ShapeSpec {
    Square { origin: [f64; 2], side: f64 },
    Ball { center: [f64; 2], radius: f64 },
    Rectangle { min: [f64; 2], max: [f64; 2] },
}

impl From<&Shape> for ShapeSpec {
    fn from(s: &Shape) -> Self {
        match *s {
            Shape::Square { origin, side } => ShapeSpec::Square { origin: [origin.x, origin.y], side },
            Shape::Ball { center, radius } => ShapeSpec::Ball { center: [center.x, center.y], radius },
            Shape::Rectangle { min, max } => ShapeSpec::Rectangle {
                min: [min.x, min.y],
                max: [max.x, max.y],
            },
        }
    }
}

impl From<ShapeSpec> for Shape {
    fn from(s: ShapeSpec) -> Self {
        let p = |a: [f64; 2]| Point::new(a[0], a[1]);
        match s {
            ShapeSpec::Square { origin, side } => Shape::square(p(origin), side),
            ShapeSpec::Ball { center, radius } => Shape::ball(p(center), radius),
            ShapeSpec::Rectangle { min, max } => Shape::rectangle(p(min), p(max)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub format_version: u32,
    pub epsilon: f64,
    pub n_states: u32,
    /// Lattice index of the lower-left corner of the bounding index box.
    pub origin: [i64; 2],
    pub dims: [usize; 2],
    pub shape: ShapeSpec,
    pub sites: usize,
}

impl FieldHeader {
    pub fn of(field: &SpinField) -> Self {
        let d = field.domain();
        let (origin, dims) = d.index_box();
        FieldHeader {
            format_version: FORMAT_VERSION,
            epsilon: field.epsilon(),
            n_states: field.circle().n_states(),
            origin,
            dims,
            shape: ShapeSpec::from(d.shape()),
            sites: d.len(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonField {
    header: FieldHeader,
    states: Vec<u32>,
}

pub fn write_field<W: Write>(field: &SpinField, format: FieldFormat, mut w: W) -> Result<(), IoError> {
    let header = FieldHeader::of(field);
    match format {
        FieldFormat::Json => {
            let doc = JsonField {
                header,
                states: field.states().to_vec(),
            };
            serde_json::to_writer(&mut w, &doc).map_err(std::io::Error::from)?;
        }
        FieldFormat::Binary => {
            let h = serde_json::to_vec(&header).map_err(std::io::Error::from)?;
            w.write_all(MAGIC)?;
            w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
            w.write_u32::<LittleEndian>(h.len() as u32)?;
            w.write_all(&h)?;
            w.write_u64::<LittleEndian>(field.states().len() as u64)?;
            for &s in field.states() {
                w.write_u32::<LittleEndian>(s)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_field(field: &SpinField, path: &Path) -> Result<(), IoError> {
    write_field(field, FieldFormat::for_path(path), BufWriter::new(File::create(path)?))
}

/// Reads either variant; the format is detected from the first bytes.
pub fn read_field<R: Read>(mut r: R) -> Result<SpinField, IoError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.starts_with(MAGIC) {
        read_binary(&bytes[MAGIC.len()..])
    } else if bytes.first() == Some(&b'{') {
        read_json(&bytes)
    } else {
        Err(IoError::CorruptPayload("unrecognized file signature".into()))
    }
}

pub fn load_field(path: &Path) -> Result<SpinField, IoError> {
    read_field(BufReader::new(File::open(path)?))
}

fn corrupt(what: &str) -> impl Fn(std::io::Error) -> IoError + '_ {
    move |e| IoError::CorruptPayload(format!("{what}: {e}"))
}

fn check_version(found: u32) -> Result<(), IoError> {
    if found != FORMAT_VERSION {
        return Err(IoError::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    Ok(())
}

fn read_binary(mut b: &[u8]) -> Result<SpinField, IoError> {
    check_version(b.read_u32::<LittleEndian>().map_err(corrupt("version"))?)?;
    let len = b.read_u32::<LittleEndian>().map_err(corrupt("header length"))? as usize;
    if b.len() < len {
        return Err(IoError::CorruptPayload("truncated header".into()));
    }
    let header: FieldHeader =
        serde_json::from_slice(&b[..len]).map_err(|e| IoError::CorruptPayload(format!("header: {e}")))?;
    check_version(header.format_version)?;
    b = &b[len..];
    let count = b.read_u64::<LittleEndian>().map_err(corrupt("site count"))? as usize;
    if count != header.sites {
        return Err(IoError::DimensionMismatch(format!(
            "payload holds {count} states, header declares {} sites",
            header.sites
        )));
    }
    if b.len() != count * 4 {
        return Err(IoError::CorruptPayload(format!(
            "expected {} payload bytes, found {}",
            count * 4,
            b.len()
        )));
    }
    let mut states = vec![0u32; count];
    b.read_u32_into::<LittleEndian>(&mut states).map_err(corrupt("states"))?;
    assemble(header, states)
}

fn read_json(bytes: &[u8]) -> Result<SpinField, IoError> {
    let v: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| IoError::CorruptPayload(e.to_string()))?;
    if let Some(found) = v.pointer("/header/format_version").and_then(|x| x.as_u64()) {
        check_version(found as u32)?;
    }
    let doc: JsonField = serde_json::from_value(v).map_err(|e| IoError::CorruptPayload(e.to_string()))?;
    if doc.states.len() != doc.header.sites {
        return Err(IoError::DimensionMismatch(format!(
            "payload holds {} states, header declares {} sites",
            doc.states.len(),
            doc.header.sites
        )));
    }
    assemble(doc.header, doc.states)
}

fn assemble(h: FieldHeader, states: Vec<u32>) -> Result<SpinField, IoError> {
    let circle = DiscreteCircle::new(h.n_states).map_err(|e| IoError::CorruptPayload(e.to_string()))?;
    let domain = build_domain(h.shape.into(), h.epsilon).map_err(|e| IoError::CorruptPayload(e.to_string()))?;
    let (origin, dims) = domain.index_box();
    if origin != h.origin || dims != h.dims || domain.len() != h.sites {
        return Err(IoError::DimensionMismatch(format!(
            "header box {:?}+{:?} with {} sites, shape gives {:?}+{:?} with {}",
            h.origin,
            h.dims,
            h.sites,
            origin,
            dims,
            domain.len()
        )));
    }
    if let Some(bad) = states.iter().find(|&&s| s >= h.n_states) {
        return Err(IoError::DimensionMismatch(format!(
            "state {bad} out of range for {} states",
            h.n_states
        )));
    }
    SpinField::new(Arc::new(domain), circle, states).map_err(|e| IoError::DimensionMismatch(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nclock::constructions::vortex_field;
    use proptest::prelude::*;

    fn vortex64() -> SpinField {
        let d = Arc::new(build_domain(Shape::square(Point::new(-0.5, -0.5), 1.0), 1.0 / 64.0).unwrap());
        assert_eq!(d.len(), 64 * 64);
        vortex_field(Point::ORIGIN, 1, d, DiscreteCircle::new(40).unwrap()).unwrap()
    }

    fn bytes(f: &SpinField, format: FieldFormat) -> Vec<u8> {
        let mut buf = Vec::new();
        write_field(f, format, &mut buf).unwrap();
        buf
    }

    #[test]
    fn vortex_round_trip() {
        let f = vortex64();
        for format in [FieldFormat::Json, FieldFormat::Binary] {
            let g = read_field(bytes(&f, format).as_slice()).unwrap();
            assert_eq!(g.states(), f.states());
            assert_eq!(g, f);
        }
    }

    #[test]
    fn truncated_payload() {
        let b = bytes(&vortex64(), FieldFormat::Binary);
        for cut in [b.len() - 1, b.len() - 4 * 100, 12, 3] {
            assert!(matches!(read_field(&b[..cut]), Err(IoError::CorruptPayload(_))), "cut {cut}");
        }
        let j = bytes(&vortex64(), FieldFormat::Json);
        assert!(matches!(read_field(&j[..j.len() / 2]), Err(IoError::CorruptPayload(_))));
        assert!(matches!(read_field(&b"garbage"[..]), Err(IoError::CorruptPayload(_))));
    }

    #[test]
    fn n_states_below_stored_states() {
        let mut doc: serde_json::Value = serde_json::from_slice(&bytes(&vortex64(), FieldFormat::Json)).unwrap();
        doc["header"]["n_states"] = 8.into();
        let b = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(read_field(b.as_slice()), Err(IoError::DimensionMismatch(_))));
        doc["header"]["n_states"] = 40.into();
        doc["header"]["dims"] = serde_json::json!([64, 63]);
        let b = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(read_field(b.as_slice()), Err(IoError::DimensionMismatch(_))));
    }

    #[test]
    fn version_mismatch() {
        let mut b = bytes(&vortex64(), FieldFormat::Binary);
        b[8..12].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            read_field(b.as_slice()),
            Err(IoError::VersionMismatch { found: 7, expected: 1 })
        ));
        let mut doc: serde_json::Value = serde_json::from_slice(&bytes(&vortex64(), FieldFormat::Json)).unwrap();
        doc["header"]["format_version"] = 2.into();
        let j = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(read_field(j.as_slice()), Err(IoError::VersionMismatch { found: 2, .. })));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(FieldFormat::for_path(Path::new("a/field.JSON")), FieldFormat::Json);
        assert_eq!(FieldFormat::for_path(Path::new("field.nclk")), FieldFormat::Binary);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn any_field_round_trips(
            n in 2u32..5000,
            eps in 0.02f64..0.3,
            cx in -3.0f64..3.0,
            r in 0.1f64..1.0,
            ball in any::<bool>(),
            seed in any::<u64>(),
            json in any::<bool>(),
        ) {
            let shape = if ball { Shape::ball(Point::new(cx, 0.3), r) } else { Shape::rectangle(Point::new(cx, -r), Point::new(cx + 2.0 * r, r / 3.0)) };
            let d = match build_domain(shape, eps) { Ok(d) => Arc::new(d), Err(_) => return Ok(()) };
            let states = (0..d.len() as u64).map(|k| ((k.wrapping_mul(6364136223846793005) ^ seed) % n as u64) as u32).collect();
            let f = SpinField::new(d, DiscreteCircle::new(n).unwrap(), states).unwrap();
            let format = if json { FieldFormat::Json } else { FieldFormat::Binary };
            prop_assert_eq!(read_field(bytes(&f, format).as_slice()).unwrap(), f);
        }
    }
}
