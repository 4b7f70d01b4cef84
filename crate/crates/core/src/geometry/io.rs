//! CSV exchange for point sets (`x1,...,xd`) and sample values (`value`).

use std::io::{Read, Write};

use super::PointSet;
use crate::error::{Error, Result};

pub fn read_points_csv<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let dim = headers.len();
    let expected: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    if dim == 0 || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::config(format!(
            "point CSV header must be x1,...,xd, found {:?}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut coords = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        for field in record.iter() {
            coords.push(parse_number(field, line + 2)?);
        }
    }
    if coords.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    PointSet::from_flat(dim, coords)
}

pub fn read_values_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 1 || &headers[0] != "value" {
        return Err(Error::config("value CSV header must be `value`"));
    }
    rdr.records()
        .enumerate()
        .map(|(line, r)| parse_number(&r?[0], line + 2))
        .collect()
}

pub fn write_points_csv<W: Write>(points: &PointSet, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((1..=points.dim()).map(|i| format!("x{i}")))?;
    for p in points.iter() {
        w.write_record(p.iter().map(|x| format!("{x:e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_values_csv<W: Write>(values: &[f64], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["value"])?;
    for v in values {
        w.write_record([format!("{v:e}")])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::config(format!("line {line}: `{field}` is not a finite number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip_exactly() {
        let pts = PointSet::from_rows(&[[0.1, 1.0 / 3.0], [2e-300, -7.25]]).unwrap();
        let mut buf = Vec::new();
        write_points_csv(&pts, &mut buf).unwrap();
        assert!(buf.starts_with(b"x1,x2\n"));
        assert_eq!(read_points_csv(&buf[..]).unwrap(), pts);
    }

    #[test]
    fn bad_headers_are_rejected() {
        assert!(read_points_csv(&b"a,b\n1,2\n"[..]).is_err());
        assert!(read_values_csv(&b"f\n1\n"[..]).is_err());
        assert!(read_points_csv(&b"x1\nnan\n"[..]).is_err());
    }

    #[test]
    fn values_parse() {
        assert_eq!(read_values_csv(&b"value\n1.5\n-2\n"[..]).unwrap(), vec![1.5, -2.0]);
    }
}
