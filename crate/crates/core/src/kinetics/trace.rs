use std::io::{self, Write};

use crate::network::DualRailSignal;

use super::Tolerances;

/// Sampled concentrations from one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub tolerances: Tolerances,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index_of(name)?;
        Some(self.states.iter().map(|row| row[i]).collect())
    }

    /// `plus - minus` at every sample.
    pub fn difference(&self, rail: &DualRailSignal) -> Option<Vec<f64>> {
        let p = self.index_of(rail.plus.as_str())?;
        let m = self.index_of(rail.minus.as_str())?;
        Some(self.states.iter().map(|row| row[p] - row[m]).collect())
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    pub fn min_value(&self) -> f64 {
        self.states
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `t,<species...>`; floats use the shortest text that
    /// parses back to the same value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "t")?;
        for s in &self.species {
            write!(w, ",{s}")?;
        }
        writeln!(w)?;
        for (t, row) in self.times.iter().zip(&self.states) {
            write!(w, "{t}")?;
            for v in row {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats() {
        let tr = Trace {
            species: vec!["X".into(), "Y".into()],
            times: vec![0.0, 0.1],
            states: vec![vec![1.0, 0.0], vec![0.1 + 0.2, 1.0 / 3.0]],
            tolerances: Tolerances::default(),
        };
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,X,Y"));
        assert_eq!(lines.next(), Some("0,1,0"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row, vec![0.1, 0.1 + 0.2, 1.0 / 3.0]);
    }
}
