//! Time-indexed diffusion trajectories and their CSV representation.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A per-slot record of the global forwarder share, with optional derivative,
/// edge-state, and ensemble spread columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Forwarder share per slot, starting at slot 0.
    pub x_f: Vec<f64>,
    /// Per-slot change of `x_f`, when the producer emits it.
    pub xdot: Option<Vec<f64>>,
    /// Edge shares `(x_ff, x_fn, x_nn)` per slot, when measured.
    pub edge_states: Option<Vec<(f64, f64, f64)>>,
    /// Standard error of the mean per slot, for ensemble averages.
    pub stderr: Option<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

/// Free-form provenance carried along with a trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub rule: Option<String>,
    pub network: Option<String>,
    pub payoff: Option<(f64, f64, f64)>,
    pub alpha: Option<String>,
    pub seed: Option<u64>,
}

impl Trajectory {
    pub fn from_x(x_f: Vec<f64>) -> Self {
        Self {
            x_f,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.x_f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_f.is_empty()
    }

    pub fn final_x(&self) -> Option<f64> {
        self.x_f.last().copied()
    }

    /// Writes `slot,x_f[,xdot][,x_ff,x_fn,x_nn][,stderr]` rows.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let mut header = String::from("slot,x_f");
        if self.xdot.is_some() {
            header.push_str(",xdot");
        }
        if self.edge_states.is_some() {
            header.push_str(",x_ff,x_fn,x_nn");
        }
        if self.stderr.is_some() {
            header.push_str(",stderr");
        }
        writeln!(out, "{header}")?;
        for (t, &x) in self.x_f.iter().enumerate() {
            let mut row = format!("{t},{x}");
            if let Some(xdot) = &self.xdot {
                row.push_str(&format!(",{}", xdot[t]));
            }
            if let Some(edges) = &self.edge_states {
                let (ff, fnn, nn) = edges[t];
                row.push_str(&format!(",{ff},{fnn},{nn}"));
            }
            if let Some(se) = &self.stderr {
                row.push_str(&format!(",{}", se[t]));
            }
            writeln!(out, "{row}")?;
        }
        Ok(())
    }

    /// Reads a trajectory written by [`Trajectory::write_csv`].
    pub fn read_csv(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: "empty trajectory file".into(),
            })??;
        let cols: Vec<&str> = header.trim().split(',').collect();
        if cols.first() != Some(&"slot") || cols.get(1) != Some(&"x_f") {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header {header:?}"),
            });
        }
        let has = |name: &str| cols.contains(&name);
        let (with_xdot, with_edges, with_stderr) = (has("xdot"), has("x_ff"), has("stderr"));

        let mut tr = Trajectory::default();
        let mut xdot = Vec::new();
        let mut edges = Vec::new();
        let mut stderr = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != cols.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} fields, got {}", cols.len(), fields.len()),
                });
            }
            let parse = |i: usize| -> Result<f64> {
                fields[i].parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad number {:?}", fields[i]),
                })
            };
            let mut i = 1;
            tr.x_f.push(parse(i)?);
            i += 1;
            if with_xdot {
                xdot.push(parse(i)?);
                i += 1;
            }
            if with_edges {
                edges.push((parse(i)?, parse(i + 1)?, parse(i + 2)?));
                i += 3;
            }
            if with_stderr {
                stderr.push(parse(i)?);
            }
        }
        if with_xdot {
            tr.xdot = Some(xdot);
        }
        if with_edges {
            tr.edge_states = Some(edges);
        }
        if with_stderr {
            tr.stderr = Some(stderr);
        }
        Ok(tr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_all_columns() {
        let tr = Trajectory {
            x_f: vec![0.1, 0.2, 0.35],
            xdot: Some(vec![0.1, 0.15, 0.0]),
            edge_states: Some(vec![(0.0, 0.2, 0.8), (0.05, 0.3, 0.65), (0.1, 0.4, 0.5)]),
            stderr: Some(vec![0.01, 0.02, 0.015]),
            meta: TrajectoryMeta::default(),
        };
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.x_f, tr.x_f);
        assert_eq!(back.xdot, tr.xdot);
        assert_eq!(back.edge_states, tr.edge_states);
        assert_eq!(back.stderr, tr.stderr);
    }

    #[test]
    fn csv_roundtrip_minimal() {
        let tr = Trajectory::from_x(vec![0.0, 0.5, 1.0]);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("slot,x_f\n0,0\n"));
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.x_f, tr.x_f);
        assert!(back.xdot.is_none());
    }

    #[test]
    fn csv_rejects_malformed_rows() {
        let bad = "slot,x_f\n0,0.1\n1,oops\n";
        match Trajectory::read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
