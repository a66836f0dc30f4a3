//! Line formats for cones and windows:
//!
//! ```text
//! cone: normals [[1,0],[0,1]] generators [[1,0],[0,1]]
//! window: halfspace w=[1,1]
//! window: shifted v=[1,1] outer=cone
//! window: shifted v=[1,2] outer=normals [[1,0],[-1,1]] generators [[0,1],[1,1]]
//! window: raw
//! 1 0 <= 2
//! 0 1 <= 2
//! ```
//!
//! `#` starts a comment. A raw window is followed by constraint lines in the
//! polyhedron text format.

use std::str::FromStr;

use super::{AffineError, Cone, WindowPolytope};
use crate::polyhedra::MixedPolyhedron;
use crate::rational::{parse_rational, RatVector, Rational};

fn err(line: usize, message: impl Into<String>) -> AffineError {
    AffineError::Parse { line, message: message.into() }
}

/// Meaningful lines with 1-based numbers, comments stripped.
fn lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses `[a,b,...]` at the start of `s`; returns the atoms and the rest.
fn flat_list(s: &str) -> Option<(Vec<String>, &str)> {
    let s = s.trim_start().strip_prefix('[')?;
    let end = s.find(']')?;
    let inner = s[..end].trim();
    let atoms = if inner.is_empty() { Vec::new() } else { inner.split(',').map(|a| a.trim().to_string()).collect() };
    Some((atoms, &s[end + 1..]))
}

/// Parses `[[..],[..]]` at the start of `s`.
fn nested_list(s: &str) -> Option<(Vec<Vec<String>>, &str)> {
    let mut rest = s.trim_start().strip_prefix('[')?;
    let mut out = Vec::new();
    loop {
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(']') {
            return Some((out, r));
        }
        if !out.is_empty() {
            rest = rest.strip_prefix(',')?;
        }
        let (row, r) = flat_list(rest)?;
        out.push(row);
        rest = r;
    }
}

fn rationals(line: usize, atoms: &[String]) -> Result<RatVector, AffineError> {
    atoms.iter().map(|a| parse_rational(a).map_err(|e| err(line, e.to_string()))).collect()
}

fn integers(line: usize, atoms: &[String]) -> Result<Vec<i64>, AffineError> {
    atoms.iter().map(|a| a.parse::<i64>().map_err(|_| err(line, format!("generator entry {a:?} is not an integer")))).collect()
}

/// `normals [[..]] generators [[..]]`, returning the unparsed tail.
fn cone_body(line: usize, s: &str) -> Result<(Cone, String), AffineError> {
    let s = s.trim_start().strip_prefix("normals").ok_or_else(|| err(line, "expected `normals`"))?;
    let (normals, s) = nested_list(s).ok_or_else(|| err(line, "malformed normals list"))?;
    let s = s.trim_start().strip_prefix("generators").ok_or_else(|| err(line, "expected `generators`"))?;
    let (gens, s) = nested_list(s).ok_or_else(|| err(line, "malformed generators list"))?;
    let normals = normals.iter().map(|r| rationals(line, r)).collect::<Result<Vec<_>, _>>()?;
    let gens = gens.iter().map(|r| integers(line, r)).collect::<Result<Vec<_>, _>>()?;
    Ok((Cone::new(normals, gens)?, s.trim().to_string()))
}

/// Reads the `cone:` line of a file.
pub fn parse_cone(s: &str) -> Result<Cone, AffineError> {
    for (line, text) in lines(s) {
        if let Some(body) = text.strip_prefix("cone:") {
            let (cone, rest) = cone_body(line, body)?;
            if !rest.is_empty() {
                return Err(err(line, format!("unexpected trailing text {rest:?}")));
            }
            return Ok(cone);
        }
    }
    Err(err(0, "no `cone:` line"))
}

/// Reads the `window:` line of a file and builds the window over `cone`.
/// Raw windows are refused unless `allow_raw` is set.
pub fn parse_window(s: &str, cone: &Cone, allow_raw: bool) -> Result<WindowPolytope, AffineError> {
    let all: Vec<(usize, &str)> = lines(s).collect();
    let Some(pos) = all.iter().position(|(_, t)| t.starts_with("window:")) else {
        return Err(err(0, "no `window:` line"));
    };
    let (line, text) = all[pos];
    let body = text["window:".len()..].trim();
    if let Some(rest) = body.strip_prefix("halfspace") {
        let rest = rest.trim_start().strip_prefix("w=").ok_or_else(|| err(line, "expected `w=[...]`"))?;
        let (w, tail) = flat_list(rest).ok_or_else(|| err(line, "malformed w list"))?;
        if !tail.trim().is_empty() {
            return Err(err(line, format!("unexpected trailing text {:?}", tail.trim())));
        }
        return WindowPolytope::halfspace(cone, &rationals(line, &w)?);
    }
    if let Some(rest) = body.strip_prefix("shifted") {
        let rest = rest.trim_start().strip_prefix("v=").ok_or_else(|| err(line, "expected `v=[...]`"))?;
        let (v, tail) = flat_list(rest).ok_or_else(|| err(line, "malformed v list"))?;
        let v: Vec<Rational> = rationals(line, &v)?;
        let outer_text = tail.trim().strip_prefix("outer=").ok_or_else(|| err(line, "expected `outer=`"))?;
        let outer = if outer_text.trim() == "cone" {
            cone.clone()
        } else {
            let (outer, rest) = cone_body(line, outer_text)?;
            if !rest.is_empty() {
                return Err(err(line, format!("unexpected trailing text {rest:?}")));
            }
            outer
        };
        return WindowPolytope::shifted_cone(cone, &outer, &v);
    }
    if body == "raw" {
        if !allow_raw {
            return Err(AffineError::RawWindowRefused);
        }
        let constraints: Vec<&str> = all[pos + 1..].iter().map(|(_, t)| *t).filter(|t| !t.starts_with("cone:")).collect();
        let q = MixedPolyhedron::from_str(&constraints.join("\n"))?;
        return WindowPolytope::raw(cone, &q);
    }
    Err(err(line, format!("unknown window kind {body:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::Provenance;
    use crate::rational::int;

    #[test]
    fn cones() {
        let c = parse_cone("# quadrant\ncone: normals [[1,0],[0,1]] generators [[1,0],[0,1]]\n").unwrap();
        assert_eq!(c, Cone::orthant(2));
        let c = parse_cone("cone: normals [[1, 0], [-1, 1]] generators [[0,1],[1,1]]").unwrap();
        assert_eq!(c.to_string(), "normals [[1,0],[-1,1]] generators [[0,1],[1,1]]");
        assert!(matches!(parse_cone("cone: normals [[1,0]] generators []"), Err(AffineError::NotPointed)));
        assert!(matches!(parse_cone("cone: normals [[1,0],[0,1] generators []"), Err(AffineError::Parse { line: 1, .. })));
        assert!(matches!(parse_cone(""), Err(AffineError::Parse { line: 0, .. })));
    }

    #[test]
    fn windows() {
        let q = Cone::orthant(2);
        let w = parse_window("window: halfspace w=[1,1]", &q, false).unwrap();
        assert_eq!(w, WindowPolytope::halfspace(&q, &[int(1), int(1)]).unwrap());
        let w = parse_window("window: halfspace w=[1/2, 1/3]", &q, false).unwrap();
        assert_eq!(w.lattice_points(1).unwrap().len(), 7);
        let w = parse_window("window: shifted v=[1,1] outer=cone", &q, false).unwrap();
        assert_eq!(w.lattice_points(1).unwrap().len(), 4);
        let w = parse_window("window: shifted v=[2,2] outer=normals [[1,0],[0,1]] generators [[1,0],[0,1]]", &q, false).unwrap();
        assert!(matches!(w.provenance(), Provenance::ShiftedCone { .. }));
        assert!(matches!(parse_window("window: blob", &q, false), Err(AffineError::Parse { line: 1, .. })));
    }

    #[test]
    fn raw_windows_need_permission() {
        let q = Cone::orthant(2);
        let text = "window: raw\n1 0 <= 2\n0 1 <= 2\n";
        assert_eq!(parse_window(text, &q, false), Err(AffineError::RawWindowRefused));
        let w = parse_window(text, &q, true).unwrap();
        assert_eq!(w.provenance(), &Provenance::Raw);
        assert_eq!(w.lattice_points(1).unwrap().len(), 9);
    }
}
