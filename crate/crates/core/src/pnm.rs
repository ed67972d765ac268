//! Binary PGM (P5) and PPM (P6) writers for frame dumps.

use std::io::{self, Write};

use crate::image::{ColorFrame, Frame};

fn to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn write_pgm<W: Write>(mut out: W, frame: &Frame) -> io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", frame.width(), frame.height())?;
    let bytes: Vec<u8> = frame.pixels.data().iter().map(|&v| to_byte(v)).collect();
    out.write_all(&bytes)
}

pub fn write_ppm<W: Write>(mut out: W, frame: &ColorFrame) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", frame.width(), frame.height())?;
    let bytes: Vec<u8> = frame
        .pixels
        .data()
        .iter()
        .flat_map(|px| px.map(to_byte))
        .collect();
    out.write_all(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Grid;

    #[test]
    fn pgm_header_and_payload() {
        let frame = Frame::new(Grid::from_fn(3, 2, |x, _| x as f64 / 2.0), 0.0);
        let mut buf = Vec::new();
        write_pgm(&mut buf, &frame).unwrap();
        assert!(buf.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(&buf[buf.len() - 3..], &[0, 128, 255]);
    }

    #[test]
    fn ppm_has_three_bytes_per_pixel() {
        let frame = ColorFrame {
            pixels: Grid::filled(4, 4, [1.0, 0.0, 0.5]),
            timestamp: 0.0,
        };
        let mut buf = Vec::new();
        write_ppm(&mut buf, &frame).unwrap();
        let header = b"P6\n4 4\n255\n";
        assert_eq!(buf.len(), header.len() + 48);
        assert_eq!(&buf[header.len()..header.len() + 3], &[255, 0, 128]);
    }
}
