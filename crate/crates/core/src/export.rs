//! Serializations of a design: JSON, incidence matrix, and block list.

use std::io::{self, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::designs::{Design, Family};
use crate::error::{Error, Result};
use crate::gf2m::FieldParams;
use crate::suzuki::{Ovoid, OvoidPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Matrix,
    Blocks,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Matrix => "txt",
            Format::Blocks => "blocks",
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
enum PointJson {
    Infinity(String),
    Affine([u64; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
struct DesignJson {
    q: u64,
    family: u64,
    poly: String,
    v: u64,
    k: u64,
    lambda: u64,
    b: u64,
    r: u64,
    points: Vec<PointJson>,
    blocks: Vec<Vec<u32>>,
}

fn point_json(p: &OvoidPoint) -> PointJson {
    match p {
        OvoidPoint::Infinity => PointJson::Infinity("inf".into()),
        OvoidPoint::Affine(a, b) => PointJson::Affine([a.bits(), b.bits()]),
    }
}

pub fn write_design<W: Write>(d: &Design, format: Format, mut w: W) -> io::Result<()> {
    let p = d.params();
    let poly = d.ovoid().field().poly();
    match format {
        Format::Json => {
            let doc = DesignJson {
                q: d.q(),
                family: d.family().number() as u64,
                poly: format!("{poly:#x}"),
                v: p.v,
                k: p.k,
                lambda: p.lambda,
                b: p.b,
                r: p.r,
                points: d.ovoid().points().iter().map(point_json).collect(),
                blocks: d.blocks().to_vec(),
            };
            serde_json::to_writer(&mut w, &doc)?;
            writeln!(w)?;
        }
        Format::Matrix => {
            writeln!(w, "{} {} {} {} {}", p.v, p.b, p.k, p.lambda, p.r)?;
            let v = p.v as usize;
            let mut rows = vec![vec![b'0'; d.blocks().len()]; v];
            for (j, block) in d.blocks().iter().enumerate() {
                for &i in block {
                    rows[i as usize][j] = b'1';
                }
            }
            for row in rows {
                w.write_all(&row)?;
                w.write_all(b"\n")?;
            }
        }
        Format::Blocks => {
            writeln!(
                w,
                "# q={} family={} poly={poly:#x} v={} k={} lambda={} b={} r={}",
                d.q(),
                d.family(),
                p.v,
                p.k,
                p.lambda,
                p.b,
                p.r
            )?;
            for block in d.blocks() {
                let line: Vec<String> = block.iter().map(u32::to_string).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
    }
    w.flush()
}

/// Rebuilds a design from its JSON export. The point list must match the
/// ovoid for the recorded `q` and polynomial, and the recorded parameters
/// must match the ones derived from the block list.
pub fn design_from_json(text: &str) -> Result<Design> {
    let doc: DesignJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let poly = u64::from_str_radix(doc.poly.trim_start_matches("0x"), 16)
        .map_err(|e| Error::Parse(format!("poly {:?}: {e}", doc.poly)))?;
    let family = Family::from_number(doc.family).ok_or_else(|| Error::Parse(format!("family {}", doc.family)))?;
    let ovoid = Ovoid::build(FieldParams::for_order(doc.q, Some(poly))?)?;
    let expected: Vec<PointJson> = ovoid.points().iter().map(point_json).collect();
    if doc.points != expected {
        return Err(Error::Parse("point list does not match the ovoid".into()));
    }
    let d = Design::from_blocks(Arc::new(ovoid), family, doc.blocks)?;
    let p = d.params();
    if (p.v, p.k, p.lambda, p.b, p.r) != (doc.v, doc.k, doc.lambda, doc.b, doc.r) {
        return Err(Error::Parse(format!(
            "recorded parameters ({}, {}, {}, {}, {}) disagree with the blocks ({p:?})",
            doc.v, doc.k, doc.lambda, doc.b, doc.r
        )));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{build_design, verify_2design, SuzukiSetting};

    fn design(fam: Family) -> Design {
        build_design(&SuzukiSetting::new(8, None).unwrap(), fam).unwrap()
    }

    fn render(d: &Design, f: Format) -> String {
        let mut buf = Vec::new();
        write_design(d, f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn json_roundtrip_verifies() {
        let d = design(Family::Two);
        let text = render(&d, Format::Json);
        let back = design_from_json(&text).unwrap();
        assert_eq!(back.blocks(), d.blocks());
        assert!(verify_2design(&back).passed());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["poly"], "0xb");
        assert_eq!(v["points"][0], "inf");
        assert_eq!(v["points"][1], serde_json::json!([0, 0]));
        let blocks = v["blocks"].as_array().unwrap();
        assert_eq!(blocks.len(), 520);
        for b in blocks {
            let b: Vec<u64> = b.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            assert_eq!(b.len(), 8);
            assert!(b.windows(2).all(|w| w[0] < w[1]) && b[7] < 65);
        }
    }

    #[test]
    fn json_rejects_tampering() {
        let text = render(&design(Family::Two), Format::Json);
        let tampered = text.replacen("\"lambda\":7", "\"lambda\":6", 1);
        assert!(matches!(design_from_json(&tampered), Err(Error::Parse(_))));
        assert!(matches!(design_from_json("{}"), Err(Error::Parse(_))));
    }

    #[test]
    fn matrix_shape() {
        let text = render(&design(Family::Two), Format::Matrix);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "65 520 8 7 64");
        assert_eq!(lines.len(), 66);
        for row in &lines[1..] {
            assert_eq!(row.len(), 520);
            assert_eq!(row.bytes().filter(|&c| c == b'1').count(), 64);
        }
    }

    #[test]
    fn blocks_shape() {
        let text = render(&design(Family::Three), Format::Blocks);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 521);
        assert_eq!(lines[0], "# q=8 family=3 poly=0xb v=65 k=56 lambda=385 b=520 r=448");
        assert_eq!(lines[1].split(' ').count(), 56);
    }

    #[test]
    fn exports_are_deterministic() {
        for f in [Format::Json, Format::Matrix, Format::Blocks] {
            assert_eq!(render(&design(Family::Two), f), render(&design(Family::Two), f));
        }
    }
}
