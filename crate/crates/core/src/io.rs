//! On-disk formats: pellet trajectories, palate traces and TV tracks as
//! CSV, feature matrices as a small little-endian binary.
//!
//! Every text format starts with a `#<kind> v1,key=value,...` header line.
//! Mistracked values are written as the literal `NaN`. Numbers are written
//! in shortest round-trip form, so text round-trips are exact.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::model::{
    check_time_grid, FeatureKind, FeatureMatrix, PalatalTrace, PelletFrame, PelletId, PelletTrack,
    TvFrame, TvTrack, Variant,
};

pub const PELLET_COLUMNS: &str =
    "t,UL_x,UL_y,LL_x,LL_y,T1_x,T1_y,T2_x,T2_y,T3_x,T3_y,T4_x,T4_y,MANi_x,MANi_y,MANm_x,MANm_y";
pub const TV_COLUMNS: &str = "t,LA,LP,TBCL,TBCD,TTCL,TTCD";
pub const FEATURE_MAGIC: &[u8; 4] = b"FTM1";
const FEATURE_HEADER_LEN: usize = 4 + 1 + 4 + 4 + 4;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

fn format_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Parsed `#kind v1,key=value,...` header.
struct Header<'a> {
    fields: Vec<(&'a str, &'a str)>,
}

impl<'a> Header<'a> {
    fn parse(path: &Path, line: Option<&'a str>, kind: &str) -> Result<Self> {
        let line = line.ok_or_else(|| format_err(path, 1, "missing header line"))?;
        let mut parts = line.split(',');
        let magic = format!("#{kind} v1");
        if parts.next() != Some(magic.as_str()) {
            return Err(format_err(
                path,
                1,
                format!("header must start with {magic:?}"),
            ));
        }
        let fields = parts
            .map(|kv| {
                kv.split_once('=')
                    .ok_or_else(|| format_err(path, 1, format!("header field {kv:?} is not key=value")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Header { fields })
    }

    fn get(&self, path: &Path, key: &str) -> Result<&'a str> {
        self.fields
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| format_err(path, 1, format!("header lacks {key}=")))
    }

    fn rate(&self, path: &Path) -> Result<f64> {
        let raw = self.get(path, "rate_hz")?;
        match raw.parse::<f64>() {
            Ok(r) if r.is_finite() && r > 0.0 => Ok(r),
            _ => Err(format_err(path, 1, format!("rate_hz={raw} is not a positive number"))),
        }
    }
}

fn check_id(what: &'static str, id: &str) -> Result<()> {
    if id.is_empty() || id.contains([',', '=', '\n', '\r']) {
        Err(Error::invalid(
            what,
            format!("{id:?} must be non-empty and free of ',', '=' and newlines"),
        ))
    } else {
        Ok(())
    }
}

fn parse_num(path: &Path, line: usize, col: &str, cell: &str) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| format_err(path, line, format!("column {col}: cannot parse {cell:?}")))
}

/// Data lines with their 1-based line numbers, skipping blank lines.
fn data_lines(text: &str, skip: usize) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(skip)
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

pub fn read_pellet_track(path: &Path) -> Result<PelletTrack> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let header = Header::parse(path, lines.next(), "pellets")?;
    let rate = header.rate(path)?;
    let speaker = header.get(path, "speaker")?;
    let utterance = header.get(path, "utterance")?;
    if lines.next().map(str::trim) != Some(PELLET_COLUMNS) {
        return Err(format_err(path, 2, format!("column header must be {PELLET_COLUMNS}")));
    }
    let names: Vec<&str> = PELLET_COLUMNS.split(',').collect();

    let mut frames = Vec::new();
    let mut lines_of_rows = Vec::new();
    for (row, (line_no, line)) in data_lines(&text, 2).enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() {
            return Err(format_err(
                path,
                line_no,
                format!("row {}: expected {} columns, found {}", row + 1, names.len(), cells.len()),
            ));
        }
        let vals = cells
            .iter()
            .zip(&names)
            .map(|(c, n)| parse_num(path, line_no, n, c))
            .collect::<Result<Vec<_>>>()?;
        let mut pos = [Point::NAN; 8];
        for id in PelletId::ALL {
            let k = 1 + 2 * id.index();
            pos[id.index()] = Point::new(vals[k], vals[k + 1]);
        }
        frames.push(PelletFrame::new(vals[0], pos));
        lines_of_rows.push(line_no);
    }
    check_time_grid(frames.iter().map(|f| f.t), rate).map_err(|(i, msg)| {
        format_err(path, lines_of_rows[i], format!("row {}: {msg}", i + 1))
    })?;
    PelletTrack::new(speaker, utterance, rate, frames)
}

pub fn write_pellet_track(track: &PelletTrack, path: &Path) -> Result<()> {
    check_id("speaker id", &track.speaker_id)?;
    check_id("utterance id", &track.utterance_id)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "#pellets v1,rate_hz={},speaker={},utterance={}",
        track.rate_hz(),
        track.speaker_id,
        track.utterance_id
    );
    out.push_str(PELLET_COLUMNS);
    out.push('\n');
    for f in track.frames() {
        let _ = write!(out, "{}", f.t);
        for p in f.positions() {
            let _ = write!(out, ",{},{}", p.x, p.y);
        }
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}

pub fn read_palatal_trace(path: &Path) -> Result<PalatalTrace> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let header = Header::parse(path, lines.next(), "palate")?;
    let speaker = header.get(path, "speaker")?;
    let extended = match header.get(path, "extended")? {
        "0" => false,
        "1" => true,
        other => return Err(format_err(path, 1, format!("extended={other} must be 0 or 1"))),
    };
    let mut points: Vec<Point> = Vec::new();
    for (line_no, line) in data_lines(&text, 1) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 {
            return Err(format_err(path, line_no, format!("expected x,y, found {} columns", cells.len())));
        }
        let p = Point::new(
            parse_num(path, line_no, "x", cells[0])?,
            parse_num(path, line_no, "y", cells[1])?,
        );
        if !p.is_finite() {
            return Err(format_err(path, line_no, "palate point is not finite"));
        }
        if points.last() == Some(&p) {
            return Err(format_err(path, line_no, "duplicate consecutive point"));
        }
        points.push(p);
    }
    if points.len() < 2 {
        return Err(format_err(
            path,
            text.lines().count().max(1),
            format!("palate has {} point(s), need at least 2", points.len()),
        ));
    }
    PalatalTrace::new(speaker, points, extended)
}

pub fn write_palatal_trace(trace: &PalatalTrace, path: &Path) -> Result<()> {
    check_id("speaker id", &trace.speaker_id)?;
    let mut out = format!(
        "#palate v1,speaker={},extended={}\n",
        trace.speaker_id,
        u8::from(trace.is_extended())
    );
    for p in trace.points() {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    write_bytes(path, out.as_bytes())
}

pub fn read_tv_track(path: &Path) -> Result<TvTrack> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let header = Header::parse(path, lines.next(), "tv")?;
    let rate = header.rate(path)?;
    let speaker = header.get(path, "speaker")?;
    let utterance = header.get(path, "utterance")?;
    let variant: Variant = header
        .get(path, "variant")?
        .parse()
        .map_err(|e: Error| format_err(path, 1, e.to_string()))?;
    if lines.next().map(str::trim) != Some(TV_COLUMNS) {
        return Err(format_err(path, 2, format!("column header must be {TV_COLUMNS}")));
    }
    let names: Vec<&str> = TV_COLUMNS.split(',').collect();
    let mut times = Vec::new();
    let mut frames = Vec::new();
    let mut line_of_row = Vec::new();
    for (row, (line_no, line)) in data_lines(&text, 2).enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() {
            return Err(format_err(
                path,
                line_no,
                format!("row {}: expected {} columns, found {}", row + 1, names.len(), cells.len()),
            ));
        }
        let vals = cells
            .iter()
            .zip(&names)
            .map(|(c, n)| parse_num(path, line_no, n, c))
            .collect::<Result<Vec<_>>>()?;
        times.push(vals[0]);
        frames.push(TvFrame::from_array([vals[1], vals[2], vals[3], vals[4], vals[5], vals[6]]));
        line_of_row.push(line_no);
    }
    check_time_grid(times.iter().copied(), rate)
        .map_err(|(i, msg)| format_err(path, line_of_row[i], format!("row {}: {msg}", i + 1)))?;
    let start = times.first().copied().unwrap_or(0.0);
    TvTrack::new(speaker, utterance, variant, rate, start, frames)
}

pub fn write_tv_track(track: &TvTrack, path: &Path) -> Result<()> {
    check_id("speaker id", &track.speaker_id)?;
    check_id("utterance id", &track.utterance_id)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "#tv v1,rate_hz={},speaker={},utterance={},variant={}",
        track.rate_hz(),
        track.speaker_id,
        track.utterance_id,
        track.variant
    );
    out.push_str(TV_COLUMNS);
    out.push('\n');
    for (i, f) in track.frames().iter().enumerate() {
        let _ = write!(out, "{}", track.time(i));
        for v in f.to_array() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}

/// Encodes a matrix in the `FTM1` layout. Values are narrowed to `f32`.
pub fn encode_feature_matrix(m: &FeatureMatrix) -> Result<Vec<u8>> {
    let rows = u32::try_from(m.rows())
        .map_err(|_| Error::invalid("feature matrix", "too many rows for u32"))?;
    let rate = m.rate_hz() as f32;
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::invalid("feature matrix", "rate does not fit in f32"));
    }
    let mut out = Vec::with_capacity(FEATURE_HEADER_LEN + 4 * m.data().len());
    out.extend_from_slice(FEATURE_MAGIC);
    out.push(m.kind().code());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&rows.to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for (i, &v) in m.data().iter().enumerate() {
        let narrow = v as f32;
        if !narrow.is_finite() {
            return Err(Error::invalid(
                "feature matrix",
                format!("entry {i} ({v}) overflows f32"),
            ));
        }
        out.extend_from_slice(&narrow.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_feature_matrix(bytes: &[u8], path: &Path) -> Result<FeatureMatrix> {
    let err = |msg: String| Error::Decode {
        path: path.to_path_buf(),
        msg,
    };
    if bytes.len() < FEATURE_HEADER_LEN {
        return Err(err(format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != FEATURE_MAGIC {
        return Err(err(format!("bad magic {:?}", &bytes[..4])));
    }
    let kind = FeatureKind::from_code(bytes[4]).ok_or_else(|| err(format!("unknown kind code {}", bytes[4])))?;
    let word = |at: usize| [bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]];
    let rate = f32::from_le_bytes(word(5));
    let rows = u32::from_le_bytes(word(9)) as usize;
    let cols = u32::from_le_bytes(word(13)) as usize;
    if cols != kind.dim() {
        return Err(err(format!("kind {kind} is inconsistent with {cols} columns")));
    }
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(FEATURE_HEADER_LEN))
        .ok_or_else(|| err("shape overflows".into()))?;
    if bytes.len() < expected {
        return Err(err(format!("truncated payload: {} of {expected} bytes", bytes.len())));
    }
    if bytes.len() > expected {
        return Err(err(format!("{} trailing bytes", bytes.len() - expected)));
    }
    let data = bytes[FEATURE_HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    FeatureMatrix::new(kind, rate as f64, cols, data).map_err(|e| err(e.to_string()))
}

pub fn write_feature_matrix(m: &FeatureMatrix, path: &Path) -> Result<()> {
    write_bytes(path, &encode_feature_matrix(m)?)
}

pub fn read_feature_matrix(path: &Path) -> Result<FeatureMatrix> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_feature_matrix(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn pellet_row(t: f64) -> String {
        let mut s = format!("{t}");
        for i in 0..16 {
            let _ = write!(s, ",{}", i as f64 * 0.5 - 3.0);
        }
        s
    }

    fn pellet_file(rows: &[String]) -> String {
        let mut s = format!("#pellets v1,rate_hz=100,speaker=JW11,utterance=tp001\n{PELLET_COLUMNS}\n");
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    #[test]
    fn reads_three_valid_rows() {
        let dir = tempdir().unwrap();
        let rows: Vec<_> = (0..3).map(|i| pellet_row(i as f64 / 100.0)).collect();
        let track = read_pellet_track(&write(dir.path(), "a.csv", &pellet_file(&rows))).unwrap();
        assert_eq!(track.len(), 3);
        assert_eq!(track.speaker_id, "JW11");
        assert_eq!(track.rate_hz(), 100.0);
        assert!(track
            .frames()
            .iter()
            .all(|f| PelletId::ALL.iter().all(|&id| f.is_valid(id))));
    }

    #[test]
    fn nan_cells_mark_pellet_invalid() {
        let dir = tempdir().unwrap();
        let mut rows: Vec<_> = (0..3).map(|i| pellet_row(i as f64 / 100.0)).collect();
        let mut cells: Vec<String> = rows[1].split(',').map(String::from).collect();
        let k = 1 + 2 * PelletId::T3.index();
        cells[k] = "NaN".into();
        cells[k + 1] = "NaN".into();
        rows[1] = cells.join(",");
        let track = read_pellet_track(&write(dir.path(), "a.csv", &pellet_file(&rows))).unwrap();
        assert!(!track.frames()[1].is_valid(PelletId::T3));
        assert!(track.frames()[1].is_valid(PelletId::T2));
        assert!(track.frames()[0].is_valid(PelletId::T3));
    }

    #[test]
    fn decreasing_time_names_the_row() {
        let dir = tempdir().unwrap();
        let mut rows: Vec<_> = (0..6).map(|i| pellet_row(i as f64 / 100.0)).collect();
        rows[4] = pellet_row(0.025);
        let err = read_pellet_track(&write(dir.path(), "a.csv", &pellet_file(&rows))).unwrap_err();
        match err {
            Error::Format { line, msg, .. } => {
                assert_eq!(line, 7);
                assert!(msg.starts_with("row 5:"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_pellet_files() {
        let dir = tempdir().unwrap();
        let short = pellet_file(&["0,1,2".to_string()]);
        let e = read_pellet_track(&write(dir.path(), "a.csv", &short)).unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }), "{e}");

        let mut bad_num = pellet_row(0.0);
        bad_num.push_str("x");
        let e = read_pellet_track(&write(dir.path(), "b.csv", &pellet_file(&[bad_num]))).unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }), "{e}");

        let e = read_pellet_track(&write(dir.path(), "c.csv", "#pellets v2,rate_hz=1\n")).unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }), "{e}");

        let no_rate = format!("#pellets v1,speaker=a,utterance=b\n{PELLET_COLUMNS}\n");
        assert!(read_pellet_track(&write(dir.path(), "d.csv", &no_rate)).is_err());

        let missing = read_pellet_track(&dir.path().join("nope.csv")).unwrap_err();
        assert!(missing.is_io());
    }

    #[test]
    fn palate_files() {
        let dir = tempdir().unwrap();
        let two = write(dir.path(), "p.csv", "#palate v1,speaker=JW33,extended=0\n0,10\n-10,12\n");
        let pal = read_palatal_trace(&two).unwrap();
        assert_eq!(pal.points().len(), 2);
        assert!(!pal.is_extended());

        let dup = write(dir.path(), "d.csv", "#palate v1,speaker=JW33,extended=0\n0,10\n0,10\n-1,1\n");
        let e = read_palatal_trace(&dup).unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }), "{e}");

        let one = write(dir.path(), "o.csv", "#palate v1,speaker=JW33,extended=1\n0,10\n");
        assert!(read_palatal_trace(&one).is_err());

        let mut text = String::from("#palate v1,speaker=JW33,extended=1\n");
        for i in 0..40 {
            let _ = writeln!(text, "{},{}", -(i as f64), 10.0 + (i as f64 * 0.1).sin());
        }
        let forty = read_palatal_trace(&write(dir.path(), "f.csv", &text)).unwrap();
        assert_eq!(forty.points().len(), 40);
        assert_eq!(forty.points()[0], Point::new(0.0, 10.0));
        assert!(forty.is_extended());
    }

    #[test]
    fn empty_tv_track_is_header_only() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("e.csv");
        let t = TvTrack::new("s", "u", Variant::Baseline, 100.0, 0.0, vec![]).unwrap();
        write_tv_track(&t, &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
        assert_eq!(read_tv_track(&path).unwrap(), t);
    }

    #[test]
    fn tv_sentinel_survives_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut f = TvFrame::from_array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        f.la = f64::NAN;
        let t = TvTrack::new("s", "u", Variant::Proposed, 145.0, 0.5, vec![f, f]).unwrap();
        write_tv_track(&t, &path).unwrap();
        let back = read_tv_track(&path).unwrap();
        assert!(back.frames()[0].la.is_nan());
        assert_eq!(back.frames()[1].tbcd, 4.0);
        assert_eq!(back.start_s(), 0.5);
    }

    #[test]
    fn feature_kind_column_mismatch_is_rejected() {
        let mut bytes = FEATURE_MAGIC.to_vec();
        bytes.push(0);
        bytes.extend_from_slice(&100f32.to_le_bytes());
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&1024u32.to_le_bytes());
        bytes.extend(std::iter::repeat(0u8).take(4 * 1024));
        let e = decode_feature_matrix(&bytes, Path::new("x")).unwrap_err();
        assert!(e.to_string().contains("inconsistent"), "{e}");
    }

    #[test]
    fn feature_decode_errors() {
        let m = FeatureMatrix::new(FeatureKind::Mfcc13, 100.0, 13, vec![0.5; 26]).unwrap();
        let bytes = encode_feature_matrix(&m).unwrap();
        let p = Path::new("x");
        assert!(decode_feature_matrix(&bytes[..bytes.len() - 1], p).is_err());
        assert!(decode_feature_matrix(&bytes[..10], p).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_feature_matrix(&bad, p).unwrap_err().to_string().contains("magic"));
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode_feature_matrix(&extra, p).is_err());
        assert_eq!(decode_feature_matrix(&bytes, p).unwrap(), m);
    }
}
