//! Portrait exports: CSV rows and P6 images.

use rational_toeplitz::{Dim, NodeResult, Portrait, SpectralPart};
use serde::Serialize;

use crate::output::format_float;

pub const WHITE: [u8; 3] = [255, 255, 255];
pub const RED: [u8; 3] = [220, 50, 47];
pub const BLUE: [u8; 3] = [38, 139, 210];
pub const GREEN: [u8; 3] = [133, 153, 0];
pub const GREY: [u8; 3] = [128, 128, 128];

pub fn color(node: &NodeResult) -> [u8; 3] {
    match node {
        NodeResult::Classified(r) if !r.ill_conditioned => match r.part {
            SpectralPart::Resolvent => WHITE,
            SpectralPart::Point => RED,
            SpectralPart::Continuous => BLUE,
            SpectralPart::Residual => GREEN,
        },
        _ => GREY,
    }
}

/// Binary PPM, one pixel per node, top row at the largest imaginary part.
pub fn ppm(p: &Portrait) -> Vec<u8> {
    let (nx, ny) = (p.grid.nx, p.grid.ny);
    let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(3 * nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            out.extend_from_slice(&color(p.at(i, j)));
        }
    }
    out
}

fn dim(d: Dim) -> String {
    match d {
        Dim::Finite(n) => n.to_string(),
        Dim::Infinite => "inf".into(),
    }
}

/// Columns `x, y, part, fredholm, dim_ker, dim_coker, index`; failed nodes
/// have part `failed` and empty trailing fields, a missing index is empty.
pub fn csv(p: &Portrait) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "part", "fredholm", "dim_ker", "dim_coker", "index"])
        .expect("in-memory write");
    for node in &p.nodes {
        let z = node.lambda();
        let (x, y) = (format_float(z.re), format_float(z.im));
        let row = match node {
            NodeResult::Classified(r) => [
                x,
                y,
                r.part.as_str().to_string(),
                r.fredholm.to_string(),
                dim(r.dim_ker),
                dim(r.dim_coker),
                r.index.map(|k| k.to_string()).unwrap_or_default(),
            ],
            NodeResult::Failed { .. } => [x, y, "failed".into(), String::new(), String::new(), String::new(), String::new()],
        };
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[derive(Debug, Serialize)]
pub struct GridDoc {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Serialize)]
pub struct PortraitSummary {
    pub grid: GridDoc,
    pub nodes: usize,
    pub resolvent: usize,
    pub point: usize,
    pub continuous: usize,
    pub residual: usize,
    pub ill_conditioned: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl PortraitSummary {
    pub fn new(p: &Portrait, output: Option<String>) -> Self {
        let g = p.grid;
        PortraitSummary {
            grid: GridDoc {
                x0: g.x0,
                x1: g.x1,
                y0: g.y0,
                y1: g.y1,
                nx: g.nx,
                ny: g.ny,
            },
            nodes: p.nodes.len(),
            resolvent: p.count(SpectralPart::Resolvent),
            point: p.count(SpectralPart::Point),
            continuous: p.count(SpectralPart::Continuous),
            residual: p.count(SpectralPart::Residual),
            ill_conditioned: p.nodes.iter().filter(|n| n.ill_conditioned()).count(),
            failed: p.nodes.iter().filter(|n| matches!(n, NodeResult::Failed { .. })).count(),
            output,
        }
    }
}
