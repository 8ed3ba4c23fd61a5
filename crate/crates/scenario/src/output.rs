//! Trajectory CSV files. Every value is written with 17 significant digits
//! so a file read back reproduces the samples exactly.

use std::path::Path;

use thiserror::Error;

pub const COLUMNS: [&str; 24] = [
    "t", "r", "v", "eps_a1", "eps_a2", "eps_a3", "eta_a", "eps_b1", "eps_b2", "eps_b3", "eta_b", "x", "y", "z", "vx",
    "vy", "vz", "alpha", "sigma", "beta", "h_mag", "energy", "norm_qa", "norm_qb",
];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: column {column}: {message}")]
    Format {
        line: usize,
        column: &'static str,
        message: String,
    },
}

/// One trajectory sample. Position and velocity are in `E`; quaternion
/// columns are blank for forms that do not carry them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Row {
    pub t: f64,
    pub r: f64,
    pub v: f64,
    pub qa: Option<[f64; 4]>,
    pub qb: Option<[f64; 4]>,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
    pub alpha: f64,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub h_mag: f64,
    pub energy: f64,
    pub norm_qa: Option<f64>,
    pub norm_qb: Option<f64>,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

impl Row {
    fn record(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(COLUMNS.len());
        out.extend([self.t, self.r, self.v].map(fmt));
        for q in [self.qa, self.qb] {
            match q {
                Some(q) => out.extend(q.map(fmt)),
                None => out.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        out.extend(self.position.map(fmt));
        out.extend(self.velocity.map(fmt));
        out.push(fmt(self.alpha));
        out.push(fmt_opt(self.sigma));
        out.push(fmt_opt(self.beta));
        out.push(fmt(self.h_mag));
        out.push(fmt(self.energy));
        out.push(fmt_opt(self.norm_qa));
        out.push(fmt_opt(self.norm_qb));
        out
    }

    fn parse(rec: &csv::StringRecord, line: usize) -> Result<Self, CsvError> {
        if rec.len() != COLUMNS.len() {
            return Err(CsvError::Format {
                line,
                column: "t",
                message: format!("expected {} fields, found {}", COLUMNS.len(), rec.len()),
            });
        }
        let opt = |i: usize| -> Result<Option<f64>, CsvError> {
            let s = &rec[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>().map(Some).map_err(|e| CsvError::Format {
                line,
                column: COLUMNS[i],
                message: e.to_string(),
            })
        };
        let req = |i: usize| -> Result<f64, CsvError> {
            opt(i)?.ok_or(CsvError::Format {
                line,
                column: COLUMNS[i],
                message: "missing value".into(),
            })
        };
        let block4 = |i: usize| -> Result<Option<[f64; 4]>, CsvError> {
            match (opt(i)?, opt(i + 1)?, opt(i + 2)?, opt(i + 3)?) {
                (Some(a), Some(b), Some(c), Some(d)) => Ok(Some([a, b, c, d])),
                (None, None, None, None) => Ok(None),
                _ => Err(CsvError::Format {
                    line,
                    column: COLUMNS[i],
                    message: "partially blank quaternion".into(),
                }),
            }
        };
        Ok(Row {
            t: req(0)?,
            r: req(1)?,
            v: req(2)?,
            qa: block4(3)?,
            qb: block4(7)?,
            position: [req(11)?, req(12)?, req(13)?],
            velocity: [req(14)?, req(15)?, req(16)?],
            alpha: req(17)?,
            sigma: opt(18)?,
            beta: opt(19)?,
            h_mag: req(20)?,
            energy: req(21)?,
            norm_qa: opt(22)?,
            norm_qb: opt(23)?,
        })
    }
}

pub fn write_csv<W: std::io::Write>(w: W, rows: &[Row]) -> Result<(), CsvError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(COLUMNS)?;
    for row in rows {
        wr.write_record(row.record())?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[Row]) -> Result<(), CsvError> {
    let f = std::fs::File::create(path).map_err(csv::Error::from)?;
    write_csv(std::io::BufWriter::new(f), rows)
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<Row>, CsvError> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(CsvError::Format {
            line: 1,
            column: "t",
            message: "unexpected header".into(),
        });
    }
    rd.records()
        .enumerate()
        .map(|(i, rec)| Row::parse(&rec?, i + 2))
        .collect()
}

pub fn read_csv_file(path: &Path) -> Result<Vec<Row>, CsvError> {
    let f = std::fs::File::open(path).map_err(csv::Error::from)?;
    read_csv(std::io::BufReader::new(f))
}
