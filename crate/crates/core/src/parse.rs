//! The motion definition file format.
//!
//! A structured key-value text with sections:
//!
//! ```text
//! [domain]
//! kind = punctured-disk        # disk | punctured-disk | annulus | finitely-punctured-disk
//! center = 0
//! radius = 1
//! basepoint = 1/2
//!
//! [base]
//! punctures = 0, 1, 1/2
//!
//! [strand.2]
//! expr = lambda
//! ```
//!
//! Annuli use `inner_radius`/`outer_radius`; finitely punctured disks list
//! `punctures` and may override the lasso `route.J` (waypoint list) and
//! `loop_radius.J` per parameter puncture. A root strand replaces `expr` by
//! polynomial coefficients `poly.K` (in the configuration variable, constant
//! term first) plus the `root` label at the basepoint. Numeric values are
//! constant expressions; strand expressions are rational in `lambda`. Errors
//! carry explicit line/column positions; unknown sections and keys are
//! rejected.

use num_complex::Complex64;

use crate::domain::{DomainShape, GeneratorSpec, ParameterDomain};
use crate::expr::{parse_constant_at, parse_expr_at, Expr};
use crate::motion::{MotionFamily, StrandSpec};
use crate::sphere::{make_configuration, SpherePoint};
use crate::{Error, Result, Tolerances};

#[derive(Debug)]
struct RawEntry {
    key: String,
    value: String,
    line: usize,
    value_col: usize,
}

#[derive(Debug)]
struct RawSection {
    name: String,
    line: usize,
    entries: Vec<RawEntry>,
}

fn err_at(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        message: message.into(),
    }
}

fn scan(src: &str) -> Result<Vec<RawSection>> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw_line) in src.lines().enumerate() {
        let line_no = idx + 1;
        let without_comment = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let trimmed = without_comment.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(err_at(line_no, 1, "unterminated section header"));
            };
            sections.push(RawSection {
                name: name.trim().to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = without_comment.find('=') else {
            return Err(err_at(line_no, 1, "expected `key = value`"));
        };
        let key = without_comment[..eq].trim().to_string();
        let value_raw = &without_comment[eq + 1..];
        let leading = value_raw.len() - value_raw.trim_start().len();
        let value = value_raw.trim().to_string();
        if value.is_empty() {
            return Err(err_at(line_no, eq + 2, format!("empty value for `{key}`")));
        }
        let Some(section) = sections.last_mut() else {
            return Err(err_at(line_no, 1, "key outside any section"));
        };
        section.entries.push(RawEntry {
            key,
            value,
            line: line_no,
            value_col: eq + 2 + leading,
        });
    }
    Ok(sections)
}

/// Split a top-level comma list, reporting each element with its column.
fn split_list(value: &str, line: usize, col: usize) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0usize;
    for (i, ch) in value
        .char_indices()
        .chain(std::iter::once((value.len(), ',')))
    {
        if ch == ',' {
            let piece = &value[start..i];
            let lead = piece.len() - piece.trim_start().len();
            out.push((piece.trim().to_string(), line, col + start + lead));
            start = i + 1;
        }
    }
    out
}

struct SectionReader<'a> {
    section: &'a RawSection,
    used: Vec<bool>,
}

impl<'a> SectionReader<'a> {
    fn new(section: &'a RawSection) -> Self {
        SectionReader {
            used: vec![false; section.entries.len()],
            section,
        }
    }

    fn take(&mut self, key: &str) -> Option<&'a RawEntry> {
        for (i, e) in self.section.entries.iter().enumerate() {
            if !self.used[i] && e.key == key {
                self.used[i] = true;
                return Some(e);
            }
        }
        None
    }

    fn require(&mut self, key: &str) -> Result<&'a RawEntry> {
        self.take(key).ok_or_else(|| {
            err_at(
                self.section.line,
                1,
                format!("section [{}] is missing key `{key}`", self.section.name),
            )
        })
    }

    fn finish(self) -> Result<()> {
        for (i, e) in self.section.entries.iter().enumerate() {
            if !self.used[i] {
                return Err(err_at(
                    e.line,
                    1,
                    format!("unknown key `{}` in section [{}]", e.key, self.section.name),
                ));
            }
        }
        Ok(())
    }
}

fn constant(entry: &RawEntry) -> Result<Complex64> {
    parse_constant_at(&entry.value, entry.line, entry.value_col)
}

fn real(entry: &RawEntry) -> Result<f64> {
    let z = constant(entry)?;
    if z.im != 0.0 {
        return Err(err_at(
            entry.line,
            entry.value_col,
            "expected a real number",
        ));
    }
    Ok(z.re)
}

/// Parse a motion definition file into a validated family.
pub fn parse_motion(src: &str, tol: &Tolerances) -> Result<MotionFamily> {
    let sections = scan(src)?;
    let mut domain_sec: Option<&RawSection> = None;
    let mut base_sec: Option<&RawSection> = None;
    let mut strand_secs: Vec<(usize, &RawSection)> = Vec::new();
    for s in &sections {
        if s.name == "domain" {
            if domain_sec.replace(s).is_some() {
                return Err(err_at(s.line, 1, "duplicate [domain] section"));
            }
        } else if s.name == "base" {
            if base_sec.replace(s).is_some() {
                return Err(err_at(s.line, 1, "duplicate [base] section"));
            }
        } else if let Some(num) = s.name.strip_prefix("strand.") {
            let idx: usize = num
                .parse()
                .map_err(|_| err_at(s.line, 1, format!("bad strand index `{num}`")))?;
            strand_secs.push((idx, s));
        } else {
            return Err(err_at(s.line, 1, format!("unknown section [{}]", s.name)));
        }
    }
    let domain_sec = domain_sec.ok_or_else(|| err_at(1, 1, "missing [domain] section"))?;
    let base_sec = base_sec.ok_or_else(|| err_at(1, 1, "missing [base] section"))?;

    let domain = parse_domain(domain_sec, tol)?;

    // base configuration
    let mut base_reader = SectionReader::new(base_sec);
    let punctures_entry = base_reader.require("punctures")?;
    let mut base_points = Vec::new();
    for (text, line, col) in split_list(
        &punctures_entry.value,
        punctures_entry.line,
        punctures_entry.value_col,
    ) {
        base_points.push(SpherePoint::Finite(parse_constant_at(&text, line, col)?));
    }
    base_reader.finish()?;
    let base = make_configuration(&base_points, tol)?;

    // strands
    strand_secs.sort_by_key(|(i, _)| *i);
    let expected: Vec<usize> = (2..base.len()).collect();
    let got: Vec<usize> = strand_secs.iter().map(|(i, _)| *i).collect();
    if got != expected {
        let line = strand_secs
            .first()
            .map(|(_, s)| s.line)
            .unwrap_or(base_sec.line);
        return Err(err_at(
            line,
            1,
            format!("strand sections must cover indices {expected:?}, found {got:?}"),
        ));
    }
    let mut strands = Vec::new();
    for (_, sec) in &strand_secs {
        strands.push(parse_strand(sec, &domain)?);
    }

    MotionFamily::new(domain, base, strands, tol)
}

fn parse_domain(section: &RawSection, tol: &Tolerances) -> Result<ParameterDomain> {
    let mut r = SectionReader::new(section);
    let kind_entry = r.require("kind")?;
    let basepoint = constant(r.require("basepoint")?)?;
    let center_entry = r.take("center");
    let center = match center_entry {
        Some(e) => constant(e)?,
        None => Complex64::new(0.0, 0.0),
    };
    let domain = match kind_entry.value.as_str() {
        "disk" => {
            let radius = real(r.require("radius")?)?;
            ParameterDomain::disk(center, radius, basepoint, tol)?
        }
        "punctured-disk" => {
            let radius = real(r.require("radius")?)?;
            ParameterDomain::punctured_disk(center, radius, basepoint, tol)?
        }
        "annulus" => {
            let inner = real(r.require("inner_radius")?)?;
            let outer = real(r.require("outer_radius")?)?;
            ParameterDomain::annulus(center, inner, outer, basepoint, tol)?
        }
        "finitely-punctured-disk" => {
            let radius = real(r.require("radius")?)?;
            let punct_entry = r.require("punctures")?;
            let mut punctures = Vec::new();
            for (text, line, col) in
                split_list(&punct_entry.value, punct_entry.line, punct_entry.value_col)
            {
                punctures.push(parse_constant_at(&text, line, col)?);
            }
            let mut routes: Vec<Vec<Complex64>> = vec![Vec::new(); punctures.len()];
            let mut radii: Vec<f64> = vec![0.0; punctures.len()];
            for j in 0..punctures.len() {
                if let Some(e) = r.take(&format!("route.{j}")) {
                    let mut way = Vec::new();
                    for (text, line, col) in split_list(&e.value, e.line, e.value_col) {
                        way.push(parse_constant_at(&text, line, col)?);
                    }
                    routes[j] = way;
                }
                if let Some(e) = r.take(&format!("loop_radius.{j}")) {
                    radii[j] = real(e)?;
                }
            }
            ParameterDomain::finitely_punctured_disk(
                center,
                radius,
                punctures,
                basepoint,
                Some(routes),
                Some(radii),
                tol,
            )?
        }
        other => {
            return Err(err_at(
                kind_entry.line,
                kind_entry.value_col,
                format!("unknown domain kind `{other}`"),
            ))
        }
    };
    r.finish()?;
    Ok(domain)
}

fn parse_strand(section: &RawSection, domain: &ParameterDomain) -> Result<StrandSpec> {
    let mut r = SectionReader::new(section);
    if let Some(e) = r.take("expr") {
        let expr = parse_expr_at(&e.value, e.line, e.value_col)?;
        r.finish()?;
        return Ok(StrandSpec::ClosedForm(expr));
    }
    // polynomial root strand: poly.K coefficients plus the root label
    let root_entry = r.require("root")?;
    let root = constant(root_entry)?;
    let mut coeffs: Vec<Option<Expr>> = Vec::new();
    for k in 0..=16usize {
        if let Some(e) = r.take(&format!("poly.{k}")) {
            while coeffs.len() <= k {
                coeffs.push(None);
            }
            coeffs[k] = Some(parse_expr_at(&e.value, e.line, e.value_col)?);
        }
    }
    if coeffs.len() < 2 {
        return Err(err_at(
            section.line,
            1,
            "root strand needs polynomial coefficients up to degree >= 1",
        ));
    }
    let coeffs: Vec<Expr> = coeffs
        .into_iter()
        .map(|c| c.unwrap_or_else(|| Expr::real(0.0)))
        .collect();
    r.finish()?;
    let _ = domain;
    Ok(StrandSpec::algebraic_root(coeffs, root))
}

fn fmt_complex(z: Complex64) -> String {
    Expr::constant(z).to_string()
}

/// Serialize a family back to the definition format. Families whose generator
/// loops were supplied directly (not derivable from the domain shape) cannot
/// be written.
pub fn write_motion(family: &MotionFamily) -> Result<String> {
    let mut out = String::new();
    let domain = family.domain();
    out.push_str("[domain]\n");
    match domain.shape() {
        DomainShape::Disk { center, radius } => {
            out.push_str("kind = disk\n");
            out.push_str(&format!("center = {}\n", fmt_complex(*center)));
            out.push_str(&format!("radius = {radius}\n"));
        }
        DomainShape::PuncturedDisk { center, radius } => {
            out.push_str("kind = punctured-disk\n");
            out.push_str(&format!("center = {}\n", fmt_complex(*center)));
            out.push_str(&format!("radius = {radius}\n"));
        }
        DomainShape::Annulus {
            center,
            inner,
            outer,
        } => {
            out.push_str("kind = annulus\n");
            out.push_str(&format!("center = {}\n", fmt_complex(*center)));
            out.push_str(&format!("inner_radius = {inner}\n"));
            out.push_str(&format!("outer_radius = {outer}\n"));
        }
        DomainShape::FinitelyPuncturedDisk {
            center,
            radius,
            punctures,
        } => {
            out.push_str("kind = finitely-punctured-disk\n");
            out.push_str(&format!("center = {}\n", fmt_complex(*center)));
            out.push_str(&format!("radius = {radius}\n"));
            let list: Vec<String> = punctures.iter().map(|&p| fmt_complex(p)).collect();
            out.push_str(&format!("punctures = {}\n", list.join(", ")));
            match domain.generator_spec() {
                GeneratorSpec::Auto => {}
                GeneratorSpec::Routes { waypoints, radii } => {
                    for (j, way) in waypoints.iter().enumerate() {
                        if !way.is_empty() {
                            let list: Vec<String> = way.iter().map(|&w| fmt_complex(w)).collect();
                            out.push_str(&format!("route.{j} = {}\n", list.join(", ")));
                        }
                    }
                    for (j, r) in radii.iter().enumerate() {
                        out.push_str(&format!("loop_radius.{j} = {r}\n"));
                    }
                }
                GeneratorSpec::Explicit => {
                    return Err(Error::InvalidDomain {
                        reason: "explicit generator loops cannot be written to a definition file"
                            .to_string(),
                    })
                }
            }
        }
    }
    if matches!(domain.generator_spec(), GeneratorSpec::Explicit) {
        return Err(Error::InvalidDomain {
            reason: "explicit generator loops cannot be written to a definition file".to_string(),
        });
    }
    out.push_str(&format!(
        "basepoint = {}\n",
        fmt_complex(domain.basepoint())
    ));

    out.push_str("\n[base]\n");
    let list: Vec<String> = family
        .base()
        .punctures()
        .iter()
        .map(|&p| fmt_complex(p))
        .collect();
    out.push_str(&format!("punctures = {}\n", list.join(", ")));

    for (k, strand) in family.strands().iter().enumerate() {
        out.push_str(&format!("\n[strand.{}]\n", k + 2));
        match strand {
            StrandSpec::ClosedForm(e) => {
                out.push_str(&format!("expr = {e}\n"));
            }
            StrandSpec::AlgebraicRoot { coeffs, base_root } => {
                for (j, c) in coeffs.iter().enumerate() {
                    out.push_str(&format!("poly.{j} = {c}\n"));
                }
                out.push_str(&format!("root = {}\n", fmt_complex(*base_root)));
            }
        }
    }
    Ok(out)
}
