//! Edge-list CSV, certificate JSON and sphere CSV.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::constructions::{Claim, Family, FamilySpec, LambdaSel};
use crate::error::{Error, Result};
use crate::forms::{Sphere, VectorSpace};
use crate::graph::{ColoredGraph, Graph};
use crate::Cert;

/// Comment line naming a construction, written before the rows.
pub fn header_line(spec: &FamilySpec) -> String {
    format!("# {} {}", spec.family.name(), spec.params())
}

/// Rows `u,v` with `u <= v`, loops included, after a `#` header line.
pub fn write_edge_list<W: Write>(mut w: W, spec: &FamilySpec, g: &Graph) -> Result<()> {
    writeln!(w, "{}", header_line(spec))?;
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for (u, v) in g.edges() {
        out.write_record([u.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Rows `u,v,color` over every colored pair, loops included.
pub fn write_colored_edge_list<W: Write>(mut w: W, spec: &FamilySpec, g: &ColoredGraph) -> Result<()> {
    writeln!(w, "{}", header_line(spec))?;
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for u in 0..g.n() {
        for v in u..g.n() {
            if let Some(c) = g.color_label(u, v) {
                out.write_record([u.to_string(), v.to_string(), c.to_string()])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// A parsed edge list: header text after `# `, and `(u, v, color)` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub header: String,
    pub rows: Vec<(usize, usize, Option<u32>)>,
}

impl EdgeList {
    /// Rebuilds an uncolored graph on `n` vertices.
    pub fn graph(&self, n: usize) -> Result<Graph> {
        if let Some(&(u, v, _)) = self.rows.iter().find(|&&(u, v, _)| u >= n || v >= n) {
            return Err(Error::InvalidParameter(format!("edge ({u}, {v}) outside {n} vertices")));
        }
        Ok(Graph::from_edges(n, self.rows.iter().map(|&(u, v, _)| (u, v))))
    }
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<EdgeList> {
    let mut header = String::new();
    let mut rows = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if let Some(h) = line.strip_prefix('#') {
            header = h.trim().to_string();
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad edge row {line:?}")));
        let row = match fields.as_slice() {
            [u, v] => (num(u)?, num(v)?, None),
            [u, v, c] => (num(u)?, num(v)?, Some(num(c)? as u32)),
            _ => return Err(Error::InvalidParameter(format!("bad edge row {line:?}"))),
        };
        rows.push(row);
    }
    Ok(EdgeList { header, rows })
}

/// Lambda value as written in cert output: a color or `"all"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaValue {
    Value(u32),
    Label(AllLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllLabel {
    All,
}

/// One certificate row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertRecord {
    pub family: Family,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub lambda_value: LambdaValue,
    pub d_claim: u64,
    pub lambda_claim: f64,
    pub lambda_measured: f64,
    pub satisfied: bool,
}

impl CertRecord {
    pub fn new(spec: &FamilySpec, claim: &Claim, cert: &Cert) -> Self {
        let lambda_value = match spec.lambda {
            LambdaSel::Value(v) => LambdaValue::Value(v),
            LambdaSel::All(_) => LambdaValue::Label(AllLabel::All),
        };
        CertRecord {
            family: spec.family,
            q: spec.q(),
            n: spec.n,
            d: spec.d,
            lambda_value,
            d_claim: claim.d,
            lambda_claim: cert.lambda_claim,
            lambda_measured: cert.lambda_measured,
            satisfied: cert.satisfied,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Sphere points as rows `x1,...,xd` of field-element literals.
pub fn write_sphere_csv<W: Write>(w: W, space: &VectorSpace, sphere: &Sphere) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record((1..=space.dim()).map(|i| format!("x{i}")))?;
    let f = space.ctx();
    for x in sphere.vectors(space) {
        out.write_record(x.iter().map(|&c| f.format(c)))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Ambient;
    use crate::Caps;

    #[test]
    fn edge_list_round_trip() {
        let caps = Caps::default();
        let spec = FamilySpec::new(Family::Euclidean, 3, 2, LambdaSel::Value(1)).unwrap();
        let amb = Ambient::from_spec(&spec, &caps).unwrap();
        let g = amb.graph(1).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &spec, &g).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 18);
        let parsed = read_edge_list(&buf[..]).unwrap();
        assert!(parsed.header.starts_with("euclidean q=3;d=2"));
        assert_eq!(parsed.graph(9).unwrap().fingerprint(), g.fingerprint());
    }

    #[test]
    fn colored_rows_carry_colors() {
        let caps = Caps::default();
        let spec = FamilySpec::new(Family::Norm, 3, 2, LambdaSel::All(crate::constructions::AllColors::All)).unwrap();
        let amb = Ambient::from_spec(&spec, &caps).unwrap();
        let cg = amb.colored();
        let mut buf = Vec::new();
        write_colored_edge_list(&mut buf, &spec, &cg).unwrap();
        let parsed = read_edge_list(&buf[..]).unwrap();
        assert_eq!(parsed.rows.len(), cg.colored_pairs());
        assert!(parsed.rows.iter().all(|r| r.2.is_some()));
    }

    #[test]
    fn cert_json_fields() {
        let caps = Caps::default();
        let spec = FamilySpec::new(Family::Norm, 3, 2, LambdaSel::Value(1)).unwrap();
        let amb = Ambient::from_spec(&spec, &caps).unwrap();
        let (_, claim, cert) = amb.certify(1, &caps).unwrap();
        let rec = CertRecord::new(&spec, &claim, &cert);
        let v: serde_json::Value = serde_json::from_str(&rec.to_json().unwrap()).unwrap();
        assert_eq!(v["family"], "norm");
        assert_eq!(v["n"], 2);
        assert!(v.get("d").is_none());
        assert_eq!(v["d_claim"], 4);
        assert_eq!(v["lambda_claim"], 3.0);
        assert_eq!(v["satisfied"], true);
        let back: CertRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn sphere_dump() {
        let ctx = std::sync::Arc::new(crate::FieldCtx::new(3, 1).unwrap());
        let form = crate::Form::identity(ctx, 2, crate::FormKind::Quadratic).unwrap();
        let space = VectorSpace::new(form.ctx_arc(), 2).unwrap();
        let s = form.sphere_in(&space, crate::Fq(1)).unwrap();
        let mut buf = Vec::new();
        write_sphere_csv(&mut buf, &space, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x1,x2");
        assert_eq!(lines.len(), 5);
    }
}
