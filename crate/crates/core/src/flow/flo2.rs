//! `.flo2` flow dumps: the ASCII header `FLO2\n<width> <height>\n`
//! followed by `width * height` little-endian f32 values of `u`
//! (row-major), then the same for `v`.

use std::io::{self, BufRead, Write};

use super::FlowField;
use crate::image::Grid;

pub fn write_flo2<W: Write>(mut out: W, flow: &FlowField) -> io::Result<()> {
    write!(out, "FLO2\n{} {}\n", flow.width(), flow.height())?;
    let mut bytes = Vec::with_capacity(8 * flow.width() * flow.height());
    for grid in [&flow.u, &flow.v] {
        for &val in grid.data() {
            bytes.extend_from_slice(&(val as f32).to_le_bytes());
        }
    }
    out.write_all(&bytes)
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

pub fn read_flo2<R: BufRead>(mut input: R) -> io::Result<FlowField> {
    let mut magic = String::new();
    input.read_line(&mut magic)?;
    if magic.trim_end() != "FLO2" {
        return Err(bad("missing FLO2 magic"));
    }
    let mut dims = String::new();
    input.read_line(&mut dims)?;
    let mut it = dims.split_whitespace().map(str::parse::<usize>);
    let (w, h) = match (it.next(), it.next()) {
        (Some(Ok(w)), Some(Ok(h))) => (w, h),
        _ => return Err(bad("malformed dimensions")),
    };
    let mut read_grid = || -> io::Result<Grid<f64>> {
        let mut buf = vec![0u8; 4 * w * h];
        input.read_exact(&mut buf)?;
        let vals = buf
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect();
        Grid::from_vec(w, h, vals).map_err(|e| bad(&e.to_string()))
    };
    let u = read_grid()?;
    let v = read_grid()?;
    Ok(FlowField { u, v })
}
