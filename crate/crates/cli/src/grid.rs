//! Sweep grid specifications.
//!
//! Accepted forms:
//!
//! * `a,b,c` explicit values
//! * `start:stop:step` inclusive arithmetic range
//! * `start:stop:count:lin` or `start:stop:count:log` evenly spaced points

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid grid: {}", self.0)
    }
}

fn number(s: &str) -> Result<f64, GridError> {
    let v: f64 = s.trim().parse().map_err(|_| GridError(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(GridError(format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn count(s: &str) -> Result<usize, GridError> {
    match s.trim().parse::<usize>() {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(GridError(format!("point count `{s}` must be a positive integer"))),
    }
}

/// Upper limit on grid length, far above any sensible sweep.
const MAX_POINTS: usize = 1_000_000;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, GridError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(GridError("empty specification".into()));
    }
    if !spec.contains(':') {
        return spec.split(',').map(number).collect();
    }
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if !(step > 0.0) {
                return Err(GridError("step must be positive".into()));
            }
            if stop < start {
                return Err(GridError("stop lies below start".into()));
            }
            let points = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if points > MAX_POINTS {
                return Err(GridError(format!("{points} points exceed the {MAX_POINTS}-point limit")));
            }
            Ok((0..points).map(|i| start + i as f64 * step).collect())
        }
        [start, stop, points, scale] => {
            let (start, stop, points) = (number(start)?, number(stop)?, count(points)?);
            if points > MAX_POINTS {
                return Err(GridError(format!("{points} points exceed the {MAX_POINTS}-point limit")));
            }
            if points == 1 {
                return Ok(vec![start]);
            }
            let t = |i: usize| i as f64 / (points - 1) as f64;
            match scale.trim() {
                "lin" => Ok((0..points).map(|i| start + (stop - start) * t(i)).collect()),
                "log" => {
                    if !(start > 0.0 && stop > 0.0) {
                        return Err(GridError("log spacing needs positive endpoints".into()));
                    }
                    Ok((0..points).map(|i| start * (stop / start).powf(t(i))).collect())
                }
                other => Err(GridError(format!("unknown spacing `{other}`, expected lin or log"))),
            }
        }
        _ => Err(GridError(format!("cannot parse `{spec}`"))),
    }
}

/// Converts grid values to blocklengths, rejecting non-integers.
pub fn integer_grid(values: &[f64]) -> Result<Vec<u32>, GridError> {
    values
        .iter()
        .map(|&v| {
            if v.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&v) {
                Err(GridError(format!("blocklength grid needs positive integers, got {v}")))
            } else {
                Ok(v as u32)
            }
        })
        .collect()
}
