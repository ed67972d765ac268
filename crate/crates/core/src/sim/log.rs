//! Per-step trajectory records and their CSV form.
//!
//! Column order is fixed (see [`CSV_HEADER`]). Floats are written with
//! nine significant digits in scientific notation; optional values are
//! empty fields and flags are `0`/`1`. Every float stored in a
//! [`StepRecord`] is already rounded to that precision, so parsing a
//! written log reproduces the in-memory log exactly.

use std::io::{BufRead, Write};

use crate::{Error, Result};

pub const CSV_HEADER: &str = "step,t,x,y,heading,forward_speed,lateral_velocity,\
raw_l,raw_m,raw_r,l,m,r,l_minus_r,l_plus_r,angle_out,speed_out,\
cmd_lateral,cmd_forward,neutral,clamp_forward,clamp_lateral,zero_angle,zero_speed,\
contact_wall,penetration";

/// Rounds to the nine significant digits the CSV carries.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    /// Applied (post-clamp) velocities over the following tick.
    pub forward_speed: f64,
    pub lateral_velocity: f64,
    pub raw_l: f64,
    pub raw_m: f64,
    pub raw_r: f64,
    pub l: f64,
    pub m: f64,
    pub r: f64,
    pub l_minus_r: f64,
    pub l_plus_r: f64,
    pub angle_out: f64,
    pub speed_out: Option<f64>,
    /// Command before clamping.
    pub cmd_lateral: f64,
    pub cmd_forward: f64,
    /// No flow was available; the neutral command was issued.
    pub neutral: bool,
    pub clamp_forward: bool,
    pub clamp_lateral: bool,
    pub zero_angle: bool,
    pub zero_speed: bool,
    pub contact_wall: Option<usize>,
    pub penetration: f64,
}

impl StepRecord {
    /// Rounds every float field to CSV precision.
    pub fn quantized(mut self) -> Self {
        for v in [
            &mut self.t,
            &mut self.x,
            &mut self.y,
            &mut self.heading,
            &mut self.forward_speed,
            &mut self.lateral_velocity,
            &mut self.raw_l,
            &mut self.raw_m,
            &mut self.raw_r,
            &mut self.l,
            &mut self.m,
            &mut self.r,
            &mut self.l_minus_r,
            &mut self.l_plus_r,
            &mut self.angle_out,
            &mut self.cmd_lateral,
            &mut self.cmd_forward,
            &mut self.penetration,
        ] {
            *v = quantize(*v);
        }
        self.speed_out = self.speed_out.map(quantize);
        self
    }

    fn to_csv_row(&self) -> String {
        let flag = |b: bool| if b { "1" } else { "0" };
        let fields: Vec<String> = vec![
            self.step.to_string(),
            fmt_float(self.t),
            fmt_float(self.x),
            fmt_float(self.y),
            fmt_float(self.heading),
            fmt_float(self.forward_speed),
            fmt_float(self.lateral_velocity),
            fmt_float(self.raw_l),
            fmt_float(self.raw_m),
            fmt_float(self.raw_r),
            fmt_float(self.l),
            fmt_float(self.m),
            fmt_float(self.r),
            fmt_float(self.l_minus_r),
            fmt_float(self.l_plus_r),
            fmt_float(self.angle_out),
            self.speed_out.map(fmt_float).unwrap_or_default(),
            fmt_float(self.cmd_lateral),
            fmt_float(self.cmd_forward),
            flag(self.neutral).into(),
            flag(self.clamp_forward).into(),
            flag(self.clamp_lateral).into(),
            flag(self.zero_angle).into(),
            flag(self.zero_speed).into(),
            self.contact_wall.map(|w| w.to_string()).unwrap_or_default(),
            fmt_float(self.penetration),
        ];
        fields.join(",")
    }

    fn from_csv_row(line: &str, line_no: usize) -> Result<Self> {
        let fields: Vec<&str> = line.split(',').collect();
        let expected = CSV_HEADER.split(',').count();
        if fields.len() != expected {
            return Err(Error::parse(
                line_no,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        let mut it = fields.into_iter();
        let mut next = || it.next().unwrap().trim();
        let float = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::parse(line_no, format!("bad number '{s}': {e}")))
        };
        let flag = |s: &str| -> Result<bool> {
            match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(Error::parse(line_no, format!("bad flag '{s}'"))),
            }
        };
        let step = next()
            .parse::<usize>()
            .map_err(|e| Error::parse(line_no, format!("bad step: {e}")))?;
        Ok(StepRecord {
            step,
            t: float(next())?,
            x: float(next())?,
            y: float(next())?,
            heading: float(next())?,
            forward_speed: float(next())?,
            lateral_velocity: float(next())?,
            raw_l: float(next())?,
            raw_m: float(next())?,
            raw_r: float(next())?,
            l: float(next())?,
            m: float(next())?,
            r: float(next())?,
            l_minus_r: float(next())?,
            l_plus_r: float(next())?,
            angle_out: float(next())?,
            speed_out: match next() {
                "" => None,
                s => Some(float(s)?),
            },
            cmd_lateral: float(next())?,
            cmd_forward: float(next())?,
            neutral: flag(next())?,
            clamp_forward: flag(next())?,
            clamp_lateral: flag(next())?,
            zero_angle: flag(next())?,
            zero_speed: flag(next())?,
            contact_wall: match next() {
                "" => None,
                s => Some(
                    s.parse()
                        .map_err(|e| Error::parse(line_no, format!("bad wall index: {e}")))?,
                ),
            },
            penetration: float(next())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub records: Vec<StepRecord>,
}

impl TrajectoryLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.to_csv_row())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Parses a CSV log. `dt` is recovered from the first two timestamps
    /// (zero for single-record logs).
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim_end() == CSV_HEADER => {}
            Some((_, Ok(_))) => return Err(Error::parse(1, "unexpected CSV header")),
            Some((_, Err(e))) => return Err(Error::parse(1, e.to_string())),
            None => return Err(Error::parse(1, "empty log")),
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| Error::parse(i + 1, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(StepRecord::from_csv_row(line.trim_end(), i + 1)?);
        }
        let dt = match records.as_slice() {
            [a, b, ..] => quantize(b.t - a.t),
            _ => 0.0,
        };
        Ok(Self { dt, records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StepRecord {
        StepRecord {
            step: 3,
            t: 0.30000000000000004,
            x: 1.0 / 3.0,
            y: -2.0e-7,
            speed_out: Some(4.123456789123),
            contact_wall: Some(2),
            neutral: true,
            ..StepRecord::default()
        }
        .quantized()
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_float(1.0 / 3.0), "3.33333333e-1");
        assert_eq!(quantize(1.0 / 3.0), 0.333333333);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let log = TrajectoryLog {
            dt: 0.1,
            records: vec![sample(), StepRecord { step: 4, t: 0.4, ..sample() }.quantized()],
        };
        let text = log.to_csv_string();
        assert!(text.starts_with(CSV_HEADER));
        let back = TrajectoryLog::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.records, log.records);
        assert_eq!(back.to_csv_string(), text);
    }

    #[test]
    fn malformed_rows_report_line() {
        let text = format!("{CSV_HEADER}\n1,2,3\n");
        let err = TrajectoryLog::read_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
