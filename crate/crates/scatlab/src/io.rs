//! Plain-text table serialization for every data product, plus the JSON
//! shape format. All floating-point fields are written with 17 significant
//! digits so write/read round trips are bit-exact.

use crate::error::{Error, Result};
use crate::forward::{BoundaryCondition, FarFieldTable};
use crate::geometry::{RadialShape, ShapeFile};
use crate::mathcore::SphereGrid;
use crate::smatrix::CrossSectionData;
use crate::trace::{HeatTraceFit, PhaseMethod, PhaseSamples};
use std::path::Path;

fn read_to_string(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::InputNotFound(format!("{}", path.display())));
    }
    Ok(std::fs::read_to_string(path)?)
}

/// Reads the JSON shape format {"L": n, "coeffs": [{"l","m","c"}, ...]}.
pub fn read_shape(path: &Path) -> Result<RadialShape> {
    let text = read_to_string(path)?;
    let file: ShapeFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("shape file: {e}")))?;
    file.into_shape()
}

pub fn write_shape(path: &Path, shape: &RadialShape) -> Result<()> {
    let file = ShapeFile::from_shape(shape);
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Parse(format!("shape serialization: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn fmt_lambdas(lambdas: &[f64]) -> String {
    lambdas.iter().map(|l| format!("{l:.16e}")).collect::<Vec<_>>().join(" ")
}

/// Structured text form of a far-field table: header with the lambda list,
/// grid order, boundary condition, and convention tag, then one row
/// (lambda_index, theta_index, omega_index, Re A, Im A) per entry.
pub fn far_field_to_string(table: &FarFieldTable) -> String {
    let mut s = String::new();
    s.push_str("# far-field-table\n");
    s.push_str("# convention paper-(1.4)\n");
    s.push_str(&format!("# bc {}\n", table.boundary_condition));
    s.push_str(&format!("# order {}\n", table.grid.order));
    s.push_str(&format!("# lambdas {}\n", fmt_lambdas(&table.lambdas)));
    s.push_str("# columns lambda_index theta_index omega_index re_a im_a\n");
    for (li, amp) in table.amplitudes.iter().enumerate() {
        for i in 0..amp.nrows() {
            for j in 0..amp.ncols() {
                let a = amp[(i, j)];
                s.push_str(&format!("{li} {i} {j} {:.16e} {:.16e}\n", a.re, a.im));
            }
        }
    }
    s
}

pub fn write_far_field(path: &Path, table: &FarFieldTable) -> Result<()> {
    std::fs::write(path, far_field_to_string(table))?;
    Ok(())
}

/// Structured text form of cross-section data: header (lambda list, grid
/// order, provenance), rows (lambda_index, theta_index, value).
pub fn cross_section_to_string(data: &CrossSectionData) -> String {
    let mut s = String::new();
    s.push_str("# cross-section-data\n");
    s.push_str(&format!("# provenance {}\n", data.provenance));
    s.push_str(&format!("# order {}\n", data.grid.order));
    s.push_str(&format!("# lambdas {}\n", fmt_lambdas(&data.lambdas)));
    s.push_str("# columns lambda_index theta_index c\n");
    for (li, row) in data.values.iter().enumerate() {
        for (ti, v) in row.iter().enumerate() {
            s.push_str(&format!("{li} {ti} {v:.16e}\n"));
        }
    }
    s
}

pub fn write_cross_section(path: &Path, data: &CrossSectionData) -> Result<()> {
    std::fs::write(path, cross_section_to_string(data))?;
    Ok(())
}

fn header_value<'a>(lines: &'a [&str], key: &str) -> Result<&'a str> {
    let prefix = format!("# {key} ");
    lines
        .iter()
        .find_map(|l| l.strip_prefix(&prefix))
        .ok_or_else(|| Error::Parse(format!("missing header line '# {key} ...'")))
}

fn parse_f64(tok: &str, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what} value '{tok}'")))
}

fn parse_usize(tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad {what} value '{tok}'")))
}

/// Parses the text format written by `cross_section_to_string`.
pub fn parse_cross_section(text: &str) -> Result<CrossSectionData> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first().map(|l| l.trim()) != Some("# cross-section-data") {
        return Err(Error::Parse("not a cross-section-data file".into()));
    }
    let provenance = header_value(&lines, "provenance")?.to_string();
    let order = parse_usize(header_value(&lines, "order")?.trim(), "order")?;
    let lambdas: Vec<f64> = header_value(&lines, "lambdas")?
        .split_whitespace()
        .map(|t| parse_f64(t, "lambda"))
        .collect::<Result<_>>()?;
    let grid = SphereGrid::build(order)?;
    let mut values = vec![vec![f64::NAN; grid.len()]; lambdas.len()];
    for line in lines.iter().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse(format!("malformed row '{line}'")));
        }
        let li = parse_usize(toks[0], "lambda_index")?;
        let ti = parse_usize(toks[1], "theta_index")?;
        let v = parse_f64(toks[2], "cross section")?;
        if li >= lambdas.len() || ti >= grid.len() {
            return Err(Error::Parse(format!("row index out of range: '{line}'")));
        }
        values[li][ti] = v;
    }
    for (li, row) in values.iter().enumerate() {
        if row.iter().any(|v| v.is_nan()) {
            return Err(Error::IncompleteData(format!(
                "missing cross-section rows at lambda index {li}"
            )));
        }
    }
    let data = CrossSectionData { lambdas, grid, values, provenance };
    data.validate()?;
    Ok(data)
}

pub fn read_cross_section(path: &Path) -> Result<CrossSectionData> {
    parse_cross_section(&read_to_string(path)?)
}

/// Structured text form of sigma'(lambda) samples.
pub fn phase_samples_to_string(phase: &PhaseSamples) -> String {
    let mut s = String::new();
    s.push_str("# phase-samples\n");
    s.push_str(&format!("# method {}\n", phase.method));
    s.push_str("# columns lambda sigma_prime\n");
    for (l, v) in phase.lambdas.iter().zip(&phase.sigma_prime) {
        s.push_str(&format!("{l:.16e} {v:.16e}\n"));
    }
    s
}

pub fn write_phase_samples(path: &Path, phase: &PhaseSamples) -> Result<()> {
    std::fs::write(path, phase_samples_to_string(phase))?;
    Ok(())
}

/// Parses the text format written by `phase_samples_to_string`.
pub fn parse_phase_samples(text: &str) -> Result<PhaseSamples> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first().map(|l| l.trim()) != Some("# phase-samples") {
        return Err(Error::Parse("not a phase-samples file".into()));
    }
    let method = match header_value(&lines, "method")?.trim() {
        "det-S" => PhaseMethod::DetS,
        "partial-wave" => PhaseMethod::PartialWave,
        other => return Err(Error::Parse(format!("unknown phase method '{other}'"))),
    };
    let mut lambdas = Vec::new();
    let mut sigma_prime = Vec::new();
    for line in lines.iter().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse(format!("malformed row '{line}'")));
        }
        lambdas.push(parse_f64(toks[0], "lambda")?);
        sigma_prime.push(parse_f64(toks[1], "sigma'")?);
    }
    let phase = PhaseSamples { lambdas, sigma_prime, method };
    phase.validate()?;
    Ok(phase)
}

pub fn read_phase_samples(path: &Path) -> Result<PhaseSamples> {
    parse_phase_samples(&read_to_string(path)?)
}

/// Structured text form of a heat-trace fit: fitted coefficients in the
/// header, (t, H) samples in the body.
pub fn heat_fit_to_string(fit: &HeatTraceFit) -> String {
    let mut s = String::new();
    s.push_str("# heat-trace-fit\n");
    s.push_str(&format!("# a0 {:.16e}\n", fit.a0));
    s.push_str(&format!("# volume-estimate {:.16e}\n", fit.volume_estimate));
    s.push_str(&format!("# b-coeff {:.16e}\n", fit.b_coeff));
    s.push_str(&format!("# c-coeff {:.16e}\n", fit.c_coeff));
    s.push_str(&format!("# fit-residual {:.16e}\n", fit.fit_residual));
    s.push_str("# columns t h\n");
    for (t, h) in fit.t_samples.iter().zip(&fit.h_values) {
        s.push_str(&format!("{t:.16e} {h:.16e}\n"));
    }
    s
}

pub fn write_heat_fit(path: &Path, fit: &HeatTraceFit) -> Result<()> {
    std::fs::write(path, heat_fit_to_string(fit))?;
    Ok(())
}

/// Parses the boundary-condition tag used in file headers and CLI flags.
pub fn parse_bc(text: &str) -> Result<BoundaryCondition> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::compute_far_field_table;
    use crate::smatrix::cross_section_data;
    use crate::trace::{heat_trace_and_a0, sphere_phase_samples, t_window_samples};

    #[test]
    fn shape_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shape.json");
        let shape = RadialShape::sphere(1.5).unwrap();
        write_shape(&path, &shape).unwrap();
        let back = read_shape(&path).unwrap();
        assert_eq!(shape.coeffs(), back.coeffs());
    }

    #[test]
    fn missing_file_maps_to_input_not_found() {
        let err = read_shape(Path::new("/nonexistent/shape.json")).unwrap_err();
        assert!(matches!(err, Error::InputNotFound(_)));
    }

    #[test]
    fn cross_section_round_trip_is_bit_exact() {
        let shape = RadialShape::sphere(1.0).unwrap();
        let grid = SphereGrid::build(6).unwrap();
        let table =
            compute_far_field_table(&shape, &[2.0], &grid, BoundaryCondition::Dirichlet).unwrap();
        let data = cross_section_data(&table, "unit test").unwrap();
        let text = cross_section_to_string(&data);
        let back = parse_cross_section(&text).unwrap();
        assert_eq!(data.values, back.values);
        assert_eq!(data.lambdas, back.lambdas);
        assert_eq!(data.provenance, back.provenance);
        // serialization is deterministic
        assert_eq!(text, cross_section_to_string(&back));
    }

    #[test]
    fn phase_samples_round_trip_is_bit_exact() {
        let phase =
            sphere_phase_samples(1.0, BoundaryCondition::Dirichlet, 10.0, 50).unwrap();
        let text = phase_samples_to_string(&phase);
        let back = parse_phase_samples(&text).unwrap();
        assert_eq!(phase.lambdas, back.lambdas);
        assert_eq!(phase.sigma_prime, back.sigma_prime);
        assert_eq!(phase.method, back.method);
    }

    #[test]
    fn heat_fit_serialization_contains_all_fields() {
        let phase =
            sphere_phase_samples(1.0, BoundaryCondition::Dirichlet, 40.0, 800).unwrap();
        let ts = t_window_samples(0.02, 0.08, 5).unwrap();
        let fit = heat_trace_and_a0(&phase, &ts).unwrap();
        let text = heat_fit_to_string(&fit);
        for key in ["a0", "volume-estimate", "b-coeff", "c-coeff", "fit-residual"] {
            assert!(text.contains(key), "missing {key}");
        }
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
    }

    #[test]
    fn far_field_text_has_header_and_rows() {
        let grid = SphereGrid::build(2).unwrap();
        let table = FarFieldTable::zero(grid, vec![2.0], BoundaryCondition::Dirichlet);
        let text = far_field_to_string(&table);
        assert!(text.contains("# convention paper-(1.4)"));
        assert!(text.contains("# bc dirichlet"));
        let n = table.grid.len();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), n * n);
    }

    #[test]
    fn malformed_cross_section_rejected() {
        assert!(matches!(parse_cross_section("garbage"), Err(Error::Parse(_))));
        let text = "# cross-section-data\n# provenance x\n# order 1\n# lambdas 2.0\n0 0 bad\n";
        assert!(parse_cross_section(text).is_err());
        // missing rows
        let text = "# cross-section-data\n# provenance x\n# order 1\n# lambdas 2.0\n0 0 1.0\n";
        assert!(matches!(parse_cross_section(text), Err(Error::IncompleteData(_))));
    }
}
