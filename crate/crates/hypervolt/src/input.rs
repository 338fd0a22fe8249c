//! Parsers for untrusted external input: grid specifications
//! (`t_min:t_max:points:spacing`) and two-column sample files. Both are
//! panic-free on arbitrary input; the fuzz targets exercise exactly these
//! two entry points.

use crate::error::ParseError;

/// Cap on sample-file rows, to bound memory on hostile input.
const MAX_SAMPLE_ROWS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Geometric,
    Linear,
}

/// A time grid request: `t_min:t_max:points:spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(
        t_min: f64,
        t_max: f64,
        points: usize,
        spacing: Spacing,
    ) -> Result<Self, ParseError> {
        let field = |name: &str, reason: &str| ParseError::GridField {
            field: name.to_string(),
            reason: reason.to_string(),
        };
        if !t_min.is_finite() || t_min <= 0.0 {
            return Err(field("t_min", "must be a finite positive number"));
        }
        if !t_max.is_finite() || t_max < t_min {
            return Err(field("t_max", "must be finite and >= t_min"));
        }
        if points == 0 {
            return Err(field("points", "must be >= 1"));
        }
        if points == 1 && t_max != t_min {
            return Err(field("points", "a single point requires t_min == t_max"));
        }
        if points > 10_000_000 {
            return Err(field("points", "too many grid points"));
        }
        Ok(GridSpec {
            t_min,
            t_max,
            points,
            spacing,
        })
    }

    /// The realized time grid, strictly increasing.
    pub fn times(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.t_min];
        }
        let n = self.points;
        match self.spacing {
            Spacing::Geometric => {
                let ratio = (self.t_max / self.t_min).powf(1.0 / (n - 1) as f64);
                let mut ts: Vec<f64> =
                    (0..n).map(|i| self.t_min * ratio.powi(i as i32)).collect();
                ts[n - 1] = self.t_max;
                ts
            }
            Spacing::Linear => {
                let h = (self.t_max - self.t_min) / (n - 1) as f64;
                let mut ts: Vec<f64> = (0..n).map(|i| self.t_min + h * i as f64).collect();
                ts[n - 1] = self.t_max;
                ts
            }
        }
    }
}

/// Parse `t_min:t_max:points:spacing`, e.g. `1e-3:1e3:60:geometric`.
pub fn parse_grid_spec(spec: &str) -> Result<GridSpec, ParseError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(ParseError::GridShape(truncate_for_message(spec)));
    }
    let field = |name: &str, reason: String| ParseError::GridField {
        field: name.to_string(),
        reason,
    };
    let t_min: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| field("t_min", format!("not a number: '{}'", truncate_for_message(parts[0]))))?;
    let t_max: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| field("t_max", format!("not a number: '{}'", truncate_for_message(parts[1]))))?;
    let points: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| field("points", format!("not an integer: '{}'", truncate_for_message(parts[2]))))?;
    let spacing = match parts[3].trim() {
        "geometric" => Spacing::Geometric,
        "linear" => Spacing::Linear,
        other => {
            return Err(field(
                "spacing",
                format!("expected geometric|linear, got '{}'", truncate_for_message(other)),
            ))
        }
    };
    GridSpec::new(t_min, t_max, points, spacing)
}

fn truncate_for_message(s: &str) -> String {
    s.chars().take(40).collect()
}

/// A sampled forcing profile: (t, v0) rows with strictly increasing t
/// starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleData {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampleData {
    /// Linear interpolation; zero beyond the last sample (and for t < 0).
    pub fn interpolate(&self, t: f64) -> f64 {
        if !t.is_finite() || t < 0.0 || t > *self.times.last().unwrap() {
            return 0.0;
        }
        match self
            .times
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => self.values[i],
            Err(i) => {
                // times[i-1] < t < times[i]; i >= 1 because times[0] = 0 <= t
                let (t0, t1) = (self.times[i - 1], self.times[i]);
                let (v0, v1) = (self.values[i - 1], self.values[i]);
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Zeroth moment by the trapezoid rule over the samples.
    pub fn moment0_trapezoid(&self) -> f64 {
        let mut m = 0.0;
        for i in 0..self.times.len() - 1 {
            m += 0.5 * (self.values[i] + self.values[i + 1]) * (self.times[i + 1] - self.times[i]);
        }
        m
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

/// Parse a two-column sample file: whitespace- or comma-separated
/// `t value` rows, `#` comments, blank lines ignored. t must be strictly
/// increasing and start at exactly 0; at least two rows.
pub fn parse_sample_file(text: &str) -> Result<SampleData, ParseError> {
    let mut times: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|f| !f.is_empty());
        let err = |reason: String| ParseError::SampleLine {
            line: lineno + 1,
            reason,
        };
        let t_str = fields.next().ok_or_else(|| err("missing t column".into()))?;
        let v_str = fields
            .next()
            .ok_or_else(|| err("missing value column".into()))?;
        if fields.next().is_some() {
            return Err(err("more than two columns".into()));
        }
        let t: f64 = t_str
            .parse()
            .map_err(|_| err(format!("bad t '{}'", truncate_for_message(t_str))))?;
        let v: f64 = v_str
            .parse()
            .map_err(|_| err(format!("bad value '{}'", truncate_for_message(v_str))))?;
        if !t.is_finite() || !v.is_finite() {
            return Err(err("non-finite entry".into()));
        }
        if times.is_empty() {
            if t != 0.0 {
                return Err(err(format!("first sample must be at t = 0, got {t}")));
            }
        } else if t <= *times.last().unwrap() {
            return Err(err(format!("t = {t} does not increase")));
        }
        if times.len() >= MAX_SAMPLE_ROWS {
            return Err(ParseError::SampleShape("too many rows".into()));
        }
        times.push(t);
        values.push(v);
    }
    if times.len() < 2 {
        return Err(ParseError::SampleShape(format!(
            "need at least 2 rows, got {}",
            times.len()
        )));
    }
    Ok(SampleData { times, values })
}
