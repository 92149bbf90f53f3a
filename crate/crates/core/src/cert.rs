//! Line-oriented certificate files with a SHA-256 seal.
//!
//! ```text
//! latcert-certificate 1
//! kind localopt
//! target e8
//! field alpha 1/20
//! check ratio_below_one PASS witness text
//! sha256 <hex digest of every preceding line, newline terminated>
//! ```
//!
//! [`verify_certificate`] checks the seal and then re-runs the cheap part of
//! the claim from the recorded fields, so an edited file fails even if its
//! digest was recomputed.

use sha2::{Digest, Sha256};

use crate::arith::{exact_str, parse_rat};
use crate::error::{Error, Result};
use crate::localopt::{final_inequality, local_optimality_certificate};
use crate::radial::certify::certify_packing_bound;
use crate::radial::RadialFn;
use crate::sphere_lp::lp_code_bound;
use crate::{Rat, RatInterval, UniPoly};

const MAGIC: &str = "latcert-certificate 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub kind: String,
    pub target: String,
    pub fields: Vec<(String, String)>,
    pub checks: Vec<CheckLine>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(body: &str) -> String {
    hex(&Sha256::digest(body.as_bytes()))
}

impl Certificate {
    pub fn new(kind: &str, target: &str) -> Self {
        Certificate { kind: kind.into(), target: target.into(), ..Default::default() }
    }

    pub fn field(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn rat_field(&mut self, key: &str, value: &Rat) -> &mut Self {
        self.field(key, exact_str(value))
    }

    pub fn check(&mut self, name: &str, pass: bool, witness: impl Into<String>) -> &mut Self {
        self.checks.push(CheckLine { name: name.into(), pass, witness: witness.into() });
        self
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Format(format!("missing field {key}")))
    }

    pub fn get_rat(&self, key: &str) -> Result<Rat> {
        parse_rat(self.get(key)?).map_err(|e| Error::Format(format!("field {key}: {e}")))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        self.get(key)?.parse().map_err(|_| Error::Format(format!("field {key} is not an integer")))
    }

    fn body(&self) -> String {
        let mut s = format!("{MAGIC}\nkind {}\ntarget {}\n", self.kind, self.target);
        for (k, v) in &self.fields {
            s.push_str(&format!("field {k} {v}\n"));
        }
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            if c.witness.is_empty() {
                s.push_str(&format!("check {} {verdict}\n", c.name));
            } else {
                s.push_str(&format!("check {} {verdict} {}\n", c.name, c.witness));
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let body = self.body();
        let d = digest(&body);
        format!("{body}sha256 {d}\n")
    }

    /// Parses and checks the seal. Structural problems are format errors; a
    /// wrong digest is a verification failure.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.first() != Some(&MAGIC) {
            return Err(Error::Format("not a certificate (missing header)".into()));
        }
        let mut cert = Certificate::default();
        let mut sealed = None;
        for (i, line) in lines.iter().enumerate().skip(1) {
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "kind" => cert.kind = rest.to_string(),
                "target" => cert.target = rest.to_string(),
                "field" => {
                    let (k, v) = rest
                        .split_once(' ')
                        .ok_or_else(|| Error::Format(format!("line {}: field needs a key and a value", i + 1)))?;
                    cert.fields.push((k.into(), v.into()));
                }
                "check" => {
                    let mut parts = rest.splitn(3, ' ');
                    let name = parts.next().unwrap_or_default().to_string();
                    let pass = match parts.next() {
                        Some("PASS") => true,
                        Some("FAIL") => false,
                        _ => return Err(Error::Format(format!("line {}: verdict must be PASS or FAIL", i + 1))),
                    };
                    let witness = parts.next().unwrap_or_default().to_string();
                    cert.checks.push(CheckLine { name, pass, witness });
                }
                "sha256" => {
                    if i + 1 != lines.len() {
                        return Err(Error::Format("digest must be the last line".into()));
                    }
                    sealed = Some(rest.to_string());
                }
                _ => return Err(Error::Format(format!("line {}: unknown tag {tag:?}", i + 1))),
            }
        }
        let sealed = sealed.ok_or_else(|| Error::Format("missing sha256 line".into()))?;
        if cert.kind.is_empty() {
            return Err(Error::Format("missing kind".into()));
        }
        if digest(&cert.body()) != sealed {
            return Err(Error::CertificationFailed("digest does not match contents".into()));
        }
        Ok(cert)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub kind: String,
    pub target: String,
    /// Recomputed checks, in order.
    pub checks: Vec<CheckLine>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Seal check plus recomputation of the recorded claims.
pub fn verify_certificate(text: &str) -> Result<Verification> {
    let cert = Certificate::parse(text)?;
    let checks = match cert.kind.as_str() {
        "localopt" => recheck_localopt(&cert)?,
        "kissing" => recheck_kissing(&cert)?,
        "packing" => recheck_packing(&cert)?,
        k => return Err(Error::Format(format!("unknown certificate kind {k}"))),
    };
    // every recorded verdict must agree with the recomputation
    for c in &cert.checks {
        let Some(r) = checks.iter().find(|r| r.name == c.name) else {
            return Err(Error::Format(format!("unknown check {}", c.name)));
        };
        if r.pass != c.pass {
            return Err(Error::CertificationFailed(format!("check {} does not reproduce", c.name)));
        }
    }
    Ok(Verification { kind: cert.kind, target: cert.target, checks })
}

fn line(name: &str, pass: bool, witness: String) -> CheckLine {
    CheckLine { name: name.into(), pass, witness }
}

/// Builds the certificate for a local optimality claim.
#[allow(clippy::too_many_arguments)]
pub fn localopt_certificate(
    target: &str,
    n: usize,
    min_norm: &Rat,
    alpha: &Rat,
    alpha_numerator: &Rat,
    alpha_weights: &[Rat],
    c: &Rat,
    rho_max: &Rat,
    dev: &Rat,
    adj_sum: &Rat,
    max_gram: &Rat,
    final_cap: &Rat,
) -> Result<Certificate> {
    let mut cert = Certificate::new("localopt", target);
    cert.field("n", n.to_string())
        .rat_field("min_norm", min_norm)
        .rat_field("alpha", alpha)
        .rat_field("alpha_numerator", alpha_numerator)
        .field("alpha_weights", alpha_weights.iter().map(exact_str).collect::<Vec<_>>().join(","))
        .rat_field("c", c)
        .rat_field("rho_max", rho_max)
        .rat_field("inner_dev", dev)
        .rat_field("adj_sum", adj_sum)
        .rat_field("max_gram", max_gram)
        .rat_field("final_cap", final_cap);
    for r in recheck_localopt(&cert)? {
        cert.check(&r.name, r.pass, r.witness);
    }
    Ok(cert)
}

fn recheck_localopt(cert: &Certificate) -> Result<Vec<CheckLine>> {
    let n = cert.get_usize("n")?;
    let m = cert.get_rat("min_norm")?;
    let alpha = cert.get_rat("alpha")?;
    let num = cert.get_rat("alpha_numerator")?;
    let weights = cert
        .get("alpha_weights")?
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| parse_rat(s).map_err(|e| Error::Format(format!("alpha_weights: {e}"))))
        .collect::<Result<Vec<Rat>>>()?;
    let c = cert.get_rat("c")?;
    let rho = cert.get_rat("rho_max")?;
    let dev = cert.get_rat("inner_dev")?;
    let adj = cert.get_rat("adj_sum")?;
    let max_gram = cert.get_rat("max_gram")?;
    let cap = cert.get_rat("final_cap")?;
    let total: Rat = weights.iter().sum();
    let derived = !weights.is_empty() && &num / &total == alpha;
    let mut out = vec![line("alpha_derivation", derived, format!("{}/{}", exact_str(&num), exact_str(&total)))];
    out.push(match local_optimality_certificate(n, &m, &alpha, &c, &rho) {
        Ok(_) => line("ratio_below_one", true, String::new()),
        Err(e) => line("ratio_below_one", false, e.to_string()),
    });
    out.push(match final_inequality(&dev, &adj, &max_gram, n) {
        Ok(b) => line("final_bound", b < cap && b <= rho, crate::arith::sci(&b, 6)),
        Err(e) => line("final_bound", false, e.to_string()),
    });
    Ok(out)
}

pub fn kissing_certificate(target: &str, poly: &UniPoly, n: u32, cos_phi: &Rat, expected: &Rat) -> Result<Certificate> {
    let mut cert = Certificate::new("kissing", target);
    cert.field("n", n.to_string()).rat_field("cos_phi", cos_phi).rat_field("expected", expected);
    cert.field("coeffs", poly.coeffs().iter().map(exact_str).collect::<Vec<_>>().join(","));
    for r in recheck_kissing(&cert)? {
        cert.check(&r.name, r.pass, r.witness);
    }
    Ok(cert)
}

fn rat_list(cert: &Certificate, key: &str) -> Result<Vec<Rat>> {
    cert.get(key)?
        .split(',')
        .map(|s| parse_rat(s).map_err(|e| Error::Format(format!("{key}: {e}"))))
        .collect()
}

fn recheck_kissing(cert: &Certificate) -> Result<Vec<CheckLine>> {
    let n = cert.get_usize("n")? as u32;
    let cos_phi = cert.get_rat("cos_phi")?;
    let expected = cert.get_rat("expected")?;
    let f = UniPoly::new(rat_list(cert, "coeffs")?);
    Ok(vec![match lp_code_bound(&f, n, &cos_phi) {
        Ok(b) => line("code_bound", b.bound == RatInterval::point(expected.clone()), exact_str(b.bound.hi())),
        Err(e) => line("code_bound", false, e.to_string()),
    }])
}

pub fn packing_certificate(target: &str, f: &RadialFn, r: &Rat) -> Result<Certificate> {
    let mut cert = Certificate::new("packing", target);
    cert.field("n", f.n.to_string()).rat_field("scale", &f.scale).rat_field("r", r);
    cert.field("coeffs", f.coeffs.iter().map(exact_str).collect::<Vec<_>>().join(","));
    for r in recheck_packing(&cert)? {
        cert.check(&r.name, r.pass, r.witness);
    }
    Ok(cert)
}

fn recheck_packing(cert: &Certificate) -> Result<Vec<CheckLine>> {
    let n = cert.get_usize("n")? as u32;
    let f = RadialFn::new(n, rat_list(cert, "coeffs")?, cert.get_rat("scale")?);
    let r = cert.get_rat("r")?;
    Ok(vec![match certify_packing_bound(&f, &RatInterval::point(r)) {
        Ok(p) => line("packing_bound", p.checks.iter().all(|c| c.pass), String::new()),
        Err(e) => line("packing_bound", false, e.to_string()),
    }])
}
