//! The `lk-1` JSON link format.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::chart::{chart_lift, Vec3};
use super::curve::{LinkCurve, DEFAULT_SAMPLES};
use super::Link2;
use crate::error::{Error, Result};
use crate::linalg::Vec4;

pub const VERSION: &str = "lk-1";

#[derive(Debug, Serialize, Deserialize)]
struct LinkFile {
    version: String,
    components: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Component {
    #[serde(rename = "fourier4")]
    Fourier4 { a0: [f64; 4], a: Vec<[f64; 4]>, b: Vec<[f64; 4]> },
    #[serde(rename = "samples4")]
    Samples4 { nodes: Vec<[f64; 4]> },
    #[serde(rename = "samples3")]
    Samples3 { nodes: Vec<[f64; 3]> },
}

fn v4(a: &[f64; 4]) -> Vec4 {
    Vec4::new(a[0], a[1], a[2], a[3])
}

fn arr4(v: &Vec4) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

impl Component {
    fn into_curve(self, ctx: &str) -> Result<LinkCurve> {
        let wrap = |e: Error| Error::Parse(format!("{ctx}: {e}"));
        match self {
            Component::Fourier4 { a0, a, b } => {
                LinkCurve::fourier(v4(&a0), a.iter().map(v4).collect(), b.iter().map(v4).collect()).map_err(wrap)
            }
            Component::Samples4 { nodes } => {
                let mut pts = Vec::with_capacity(nodes.len());
                for (j, n) in nodes.iter().enumerate() {
                    let p = v4(n);
                    let norm = p.norm();
                    if !((norm - 1.0).abs() <= 1e-6) {
                        return Err(Error::Parse(format!("{ctx}.nodes[{j}]: norm {norm} is off the unit sphere")));
                    }
                    pts.push(p / norm);
                }
                LinkCurve::samples(pts).map_err(wrap)
            }
            Component::Samples3 { nodes } => {
                let pts: Vec<Vec3> = nodes.iter().map(|n| Vec3::new(n[0], n[1], n[2])).collect();
                chart_lift(&pts).map_err(wrap)
            }
        }
    }

    /// Exact for circles and Fourier curves; anything else is resampled.
    pub fn from_curve(c: &LinkCurve) -> Result<Self> {
        Ok(match c {
            LinkCurve::Circle { center, e1, e2, radius } => Component::Fourier4 {
                a0: arr4(center),
                a: vec![arr4(&(e1 * *radius))],
                b: vec![arr4(&(e2 * *radius))],
            },
            LinkCurve::Fourier4 { a0, a, b } => Component::Fourier4 {
                a0: arr4(a0),
                a: a.iter().map(arr4).collect(),
                b: b.iter().map(arr4).collect(),
            },
            LinkCurve::Samples(sp) => Component::Samples4 { nodes: sp.nodes().iter().map(arr4).collect() },
            other => return Component::from_curve(&other.resample(DEFAULT_SAMPLES)?),
        })
    }
}

pub fn parse_link(text: &str) -> Result<Link2> {
    let file: LinkFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.version != VERSION {
        return Err(Error::Parse(format!("version: expected \"{VERSION}\", found {:?}", file.version)));
    }
    if file.components.len() != 2 {
        return Err(Error::Parse(format!("components: expected exactly 2, found {}", file.components.len())));
    }
    let mut curves = Vec::with_capacity(2);
    for (i, v) in file.components.into_iter().enumerate() {
        let ctx = format!("components[{i}]");
        let comp: Component = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{ctx}: {e}")))?;
        curves.push(comp.into_curve(&ctx)?);
    }
    let c2 = curves.pop().unwrap();
    let c1 = curves.pop().unwrap();
    Link2::new(c1, c2)
}

pub fn link_to_json(link: &Link2) -> Result<String> {
    let components = [&link.c1, &link.c2]
        .iter()
        .map(|c| Component::from_curve(c).map(|comp| serde_json::to_value(comp).expect("component serializes")))
        .collect::<Result<Vec<_>>>()?;
    let file = LinkFile { version: VERSION.to_string(), components };
    Ok(serde_json::to_string_pretty(&file).expect("link serializes"))
}

pub fn read_link(path: &Path) -> Result<Link2> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_link(&text)
}

pub fn write_link(path: &Path, link: &Link2) -> Result<()> {
    std::fs::write(path, link_to_json(link)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::catalogue;
    use std::f64::consts::FRAC_PI_6;

    fn err_text(text: &str) -> String {
        match parse_link(text) {
            Err(Error::Parse(m)) => m,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_catalogue() {
        for link in [catalogue::hopf(), catalogue::separated(1.5).unwrap(), catalogue::perturbed_hopf(0.2, 1).unwrap()] {
            let back = parse_link(&link_to_json(&link).unwrap()).unwrap();
            for i in 0..20 {
                let s = 0.31 * i as f64;
                let (a, b) = (link.c1.evaluate(s).unwrap(), back.c1.evaluate(s).unwrap());
                assert!((a.point - b.point).norm() < 1e-15);
                assert!((a.velocity - b.velocity).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn samples_kinds() {
        let nodes3: Vec<String> =
            (0..12).map(|j| format!("[{}, {}, 0.5]", (j as f64 * FRAC_PI_6).cos(), (j as f64 * FRAC_PI_6).sin())).collect();
        let nodes4: Vec<String> = (0..12)
            .map(|j| format!("[0, 0, {}, {}]", (j as f64 * FRAC_PI_6).cos(), (j as f64 * FRAC_PI_6).sin()))
            .collect();
        let text = format!(
            r#"{{"version": "lk-1", "components": [{{"kind": "samples3", "nodes": [{}]}}, {{"kind": "samples4", "nodes": [{}]}}]}}"#,
            nodes3.join(","),
            nodes4.join(",")
        );
        let link = parse_link(&text).unwrap();
        assert!(matches!(link.c1, LinkCurve::Samples(_)));
    }

    #[test]
    fn errors_name_the_field() {
        assert!(err_text(r#"{"version": "lk-2", "components": []}"#).contains("version"));
        assert!(err_text(r#"{"version": "lk-1", "components": []}"#).contains("components"));
        let missing = r#"{"version": "lk-1", "components": [
            {"kind": "fourier4", "a": [[1,0,0,0]], "b": [[0,1,0,0]]},
            {"kind": "fourier4", "a0": [0,0,0,0], "a": [[0,0,1,0]], "b": [[0,0,0,1]]}]}"#;
        let m = err_text(missing);
        assert!(m.contains("components[0]") && m.contains("a0"), "{m}");
        let off = r#"{"version": "lk-1", "components": [
            {"kind": "fourier4", "a0": [0,0,0,0], "a": [[1,0,0,0]], "b": [[0,1,0,0]]},
            {"kind": "samples4", "nodes": [[0,0,1,0],[0,0,0,2]]}]}"#;
        let m = err_text(off);
        assert!(m.contains("components[1].nodes[1]"), "{m}");
        assert!(err_text(r#"{"version": "lk-1", "components": [{"kind": "spline"}, {}]}"#).contains("components[0]"));
        assert!(!err_text("not json").is_empty());
        assert!(err_text(r#"{"components": []}"#).contains("version"));
    }
}
