use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::model::{
    format_rational, parse_rational, CapacityMatrix, CellState, Grid, Matrix, ModelError, Rational,
    SaturationPattern, TransportPlan,
};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("plan csv line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub const PLAN_CSV_HEADER: [&str; 8] = [
    "i", "j", "x_mid", "y_mid", "mass_num", "mass_den", "cap_num", "cap_den",
];

fn midpoint_field(grid: &Grid, cell: usize) -> String {
    grid.midpoint(cell)
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per cell pair, `i` outer; midpoints of 2-d cells are joined with `;`.
pub fn write_plan_csv_to<W: Write>(
    plan: &TransportPlan,
    capacity: &CapacityMatrix,
    out: W,
) -> Result<(), OutputError> {
    let (rows, cols) = plan.shape();
    if capacity.shape() != (rows, cols) {
        return Err(ModelError::ShapeMismatch {
            expected_rows: rows,
            expected_cols: cols,
            rows: capacity.shape().0,
            cols: capacity.shape().1,
        }
        .into());
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(PLAN_CSV_HEADER)?;
    let x_mids: Vec<String> = (0..rows)
        .map(|i| midpoint_field(plan.grid_x(), i))
        .collect();
    let y_mids: Vec<String> = (0..cols)
        .map(|j| midpoint_field(plan.grid_y(), j))
        .collect();
    for (i, x_mid) in x_mids.iter().enumerate() {
        for (j, y_mid) in y_mids.iter().enumerate() {
            let m = plan.get(i, j);
            let u = capacity.get(i, j);
            w.write_record([
                i.to_string(),
                j.to_string(),
                x_mid.clone(),
                y_mid.clone(),
                m.numer().to_string(),
                m.denom().to_string(),
                u.numer().to_string(),
                u.denom().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_plan_csv(
    plan: &TransportPlan,
    capacity: &CapacityMatrix,
    path: &Path,
) -> Result<(), OutputError> {
    let file = std::fs::File::create(path)?;
    write_plan_csv_to(plan, capacity, io::BufWriter::new(file))
}

/// Parses a plan CSV back into the plan and its capacity bounds.
pub fn read_plan_csv<R: io::Read>(
    input: R,
    grid_x: Grid,
    grid_y: Grid,
) -> Result<(TransportPlan, CapacityMatrix), OutputError> {
    let (rows, cols) = (grid_x.num_cells(), grid_y.num_cells());
    let mut reader = csv::Reader::from_reader(input);
    if reader.headers()?.iter().ne(PLAN_CSV_HEADER) {
        return Err(OutputError::Malformed {
            line: 1,
            message: "unexpected header".into(),
        });
    }
    let mut mass = Matrix::filled(rows, cols, None::<Rational>);
    let mut cap = Matrix::filled(rows, cols, None::<Rational>);
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |message: String| OutputError::Malformed { line, message };
        let index = |k: usize, bound: usize| -> Result<usize, OutputError> {
            record[k]
                .parse::<usize>()
                .ok()
                .filter(|&v| v < bound)
                .ok_or_else(|| malformed(format!("bad index {:?}", &record[k])))
        };
        let (i, j) = (index(0, rows)?, index(1, cols)?);
        let frac = |k: usize| -> Result<Rational, OutputError> {
            parse_rational(&format!("{}/{}", &record[k], &record[k + 1]))
                .map_err(|e| malformed(e.to_string()))
        };
        if mass[(i, j)].replace(frac(4)?).is_some() {
            return Err(malformed(format!("duplicate cell ({i}, {j})")));
        }
        cap[(i, j)] = Some(frac(6)?);
    }
    let missing = || OutputError::Malformed {
        line: 0,
        message: "missing cell pairs".into(),
    };
    let collect = |m: Matrix<Option<Rational>>| -> Result<Matrix<Rational>, OutputError> {
        let data: Option<Vec<Rational>> = m.iter().cloned().collect();
        Ok(Matrix::from_vec(rows, cols, data.ok_or_else(missing)?).expect("shape"))
    };
    let plan = TransportPlan::new(grid_x, grid_y, collect(mass)?)?;
    let capacity = CapacityMatrix::from_bounds(collect(cap)?)?;
    Ok((plan, capacity))
}

pub fn pixel_value(state: CellState) -> u8 {
    match state {
        CellState::Saturated => 255,
        CellState::Partial => 128,
        CellState::Empty => 0,
    }
}

/// Plain PGM: one image row per x cell, one column per y cell.
pub fn write_saturation_pgm_to<W: Write>(
    pattern: &SaturationPattern,
    mut out: W,
) -> io::Result<()> {
    let (rows, cols) = pattern.shape();
    write!(out, "P2\n{cols} {rows}\n255\n")?;
    for i in 0..rows {
        let line: Vec<String> = (0..cols)
            .map(|j| pixel_value(pattern.get(i, j)).to_string())
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()
}

pub fn write_saturation_pgm(pattern: &SaturationPattern, path: &Path) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_saturation_pgm_to(pattern, io::BufWriter::new(file))
}

/// Pixels of a plain PGM written by [`write_saturation_pgm`], row-major.
pub fn read_pgm(text: &str) -> Option<Matrix<u8>> {
    let mut tokens = text.split_ascii_whitespace();
    if tokens.next()? != "P2" {
        return None;
    }
    let width: usize = tokens.next()?.parse().ok()?;
    let height: usize = tokens.next()?.parse().ok()?;
    let _maxval: u32 = tokens.next()?.parse().ok()?;
    let pixels: Vec<u8> = tokens.map(|t| t.parse().ok()).collect::<Option<_>>()?;
    Matrix::from_vec(height, width, pixels)
}
