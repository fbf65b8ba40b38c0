use std::io::{self, Write};

/// Metrics recorded at one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: usize,
    /// `phi(x^(t))`.
    pub phi: f64,
    /// `L~(x^(t), lambda^(t))`.
    pub lagrangian: f64,
    pub nash_gap: f64,
    pub violation: f64,
    pub lambda_sum: f64,
    /// `||x^(t) - x^(t-1)||`, zero at `t = 0`.
    pub displacement: f64,
    pub x: Vec<Vec<f64>>,
    pub lambda: Vec<Vec<f64>>,
}

/// Recorded iterates of one run, in increasing `t`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    rows: Vec<TrajectoryRow>,
}

pub const CSV_HEADER: &str = "t,phi,lagrangian,nash_gap,violation,lambda_sum,displacement";

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a row; `t` must exceed the last recorded `t`.
    pub fn push(&mut self, row: TrajectoryRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "trajectory timestamps must increase");
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TrajectoryRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first(&self) -> Option<&TrajectoryRow> {
        self.rows.first()
    }

    pub fn last(&self) -> Option<&TrajectoryRow> {
        self.rows.last()
    }

    /// Writes the scalar columns as CSV. Floats use the shortest
    /// representation that round-trips, so identical runs give identical bytes.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.t,
                fmt_float(r.phi),
                fmt_float(r.lagrangian),
                fmt_float(r.nash_gap),
                fmt_float(r.violation),
                fmt_float(r.lambda_sum),
                fmt_float(r.displacement)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Shortest round-trip formatting, switching to exponent notation for very
/// small or large magnitudes.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: usize, phi: f64) -> TrajectoryRow {
        TrajectoryRow {
            t,
            phi,
            lagrangian: phi,
            nash_gap: 0.5,
            violation: 0.0,
            lambda_sum: 0.0,
            displacement: 1.25e-7,
            x: vec![],
            lambda: vec![],
        }
    }

    #[test]
    fn csv_layout() {
        let mut tr = Trajectory::new();
        tr.push(row(0, 3.0));
        tr.push(row(5, 0.1));
        let csv = tr.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0,3,3,0.5,0,0,1.25e-7");
        assert_eq!(lines[2], "5,0.1,0.1,0.5,0,0,1.25e-7");
    }

    #[test]
    #[should_panic(expected = "increase")]
    fn timestamps_must_increase() {
        let mut tr = Trajectory::new();
        tr.push(row(3, 1.0));
        tr.push(row(3, 1.0));
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, 1.0, -2.5, 1e-12, 123456.789, 3.3e20, f64::MIN_POSITIVE] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
        }
    }
}
