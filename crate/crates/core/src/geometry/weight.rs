//! Defect weights: finite atomic measures plus an optional FZZT family.

use std::f64::consts::PI;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::bessel::{entire, entire_tail};

/// Where a single atom sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AtomKind {
    Geodesic { length: f64 },
    /// Sharp cone point, angle in `(0, π)`, entering with `L² = -angle²`.
    Cone { angle: f64 },
    Cusp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub kind: AtomKind,
    pub weight: f64,
}

impl Atom {
    pub fn geodesic(length: f64, weight: f64) -> Self {
        Self { kind: AtomKind::Geodesic { length }, weight }
    }

    pub fn cone(angle: f64, weight: f64) -> Self {
        Self { kind: AtomKind::Cone { angle }, weight }
    }

    /// Cone of angle `2πα` in the JT defect-gas convention.
    pub fn jt_cone(alpha: f64, weight: f64) -> Self {
        Self::cone(2.0 * PI * alpha, weight)
    }

    pub fn cusp(weight: f64) -> Self {
        Self { kind: AtomKind::Cusp, weight }
    }

    /// `L²` of the atom.
    pub fn square_length(&self) -> f64 {
        match self.kind {
            AtomKind::Geodesic { length } => length * length,
            AtomKind::Cone { angle } => -angle * angle,
            AtomKind::Cusp => 0.0,
        }
    }
}

/// The family `-e^{-s0 - zL} dL` on `[0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fzzt {
    pub s0: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Numeric,
    /// Expansion to order `N` in a coupling `w` multiplying the whole weight.
    Formal(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub atoms: Vec<Atom>,
    pub fzzt: Option<Fzzt>,
    pub mode: Mode,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    atoms: Vec<RawAtom>,
    #[serde(default)]
    fzzt: Option<RawFzzt>,
    #[serde(default)]
    mode: Option<RawMode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    kind: RawKind,
    #[serde(default)]
    length: Option<f64>,
    #[serde(default)]
    angle: Option<f64>,
    weight: f64,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Geodesic,
    Cone,
    Cusp,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFzzt {
    s0: f64,
    z: f64,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawMode {
    Numeric,
    Formal(usize),
}

const MAX_FORMAL_ORDER: usize = 64;

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::InvalidWeight { pointer: pointer.into(), message: message.into() }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

impl Weight {
    pub fn zero() -> Self {
        Self { atoms: vec![], fzzt: None, mode: Mode::Numeric }
    }

    pub fn atoms(atoms: Vec<Atom>) -> Self {
        Self { atoms, fzzt: None, mode: Mode::Numeric }
    }

    pub fn fzzt(s0: f64, z: f64) -> Self {
        Self { atoms: vec![], fzzt: Some(Fzzt { s0, z }), mode: Mode::Numeric }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().all(|a| a.weight == 0.0) && self.fzzt.is_none()
    }

    /// Parses the weight file format; errors carry a JSON pointer.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawWeight = serde_path_to_error::deserialize(de).map_err(|e| {
            let message = e.inner().to_string();
            invalid(pointer_of(e.path()), message)
        })?;
        Self::validate(raw)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        Self::from_json_str(&value.to_string())
    }

    fn validate(raw: RawWeight) -> Result<Self> {
        let mut atoms = Vec::with_capacity(raw.atoms.len());
        for (i, a) in raw.atoms.iter().enumerate() {
            let at = |field: &str| format!("/atoms/{i}/{field}");
            if !a.weight.is_finite() {
                return Err(invalid(at("weight"), "weight must be finite"));
            }
            let kind = match a.kind {
                RawKind::Geodesic => {
                    if a.angle.is_some() {
                        return Err(invalid(at("angle"), "a geodesic atom takes a length, not an angle"));
                    }
                    match a.length {
                        Some(l) if l.is_finite() && l > 0.0 => AtomKind::Geodesic { length: l },
                        Some(_) => return Err(invalid(at("length"), "length must be positive and finite")),
                        None => return Err(invalid(at("length"), "missing length")),
                    }
                }
                RawKind::Cone => {
                    if a.length.is_some() {
                        return Err(invalid(at("length"), "a cone atom takes an angle, not a length"));
                    }
                    match a.angle {
                        Some(t) if t > 0.0 && t < PI => AtomKind::Cone { angle: t },
                        Some(_) => return Err(invalid(at("angle"), "cone angle must lie in (0, pi)")),
                        None => return Err(invalid(at("angle"), "missing angle")),
                    }
                }
                RawKind::Cusp => {
                    if a.angle.is_some() {
                        return Err(invalid(at("angle"), "a cusp has no angle"));
                    }
                    if a.length.is_some_and(|l| l != 0.0) {
                        return Err(invalid(at("length"), "a cusp has length 0"));
                    }
                    AtomKind::Cusp
                }
            };
            atoms.push(Atom { kind, weight: a.weight });
        }
        let fzzt = match raw.fzzt {
            None => None,
            Some(f) => {
                if !f.s0.is_finite() {
                    return Err(invalid("/fzzt/s0", "s0 must be finite"));
                }
                if !(f.z.is_finite() && f.z > 0.0) {
                    return Err(invalid("/fzzt/z", "z must be positive and finite"));
                }
                Some(Fzzt { s0: f.s0, z: f.z })
            }
        };
        let mode = match raw.mode {
            None | Some(RawMode::Numeric) => Mode::Numeric,
            Some(RawMode::Formal(n)) if (1..=MAX_FORMAL_ORDER).contains(&n) => Mode::Formal(n),
            Some(RawMode::Formal(_)) => {
                return Err(invalid("/mode/formal", format!("order must lie in 1..={MAX_FORMAL_ORDER}")))
            }
        };
        Ok(Self { atoms, fzzt, mode })
    }

    pub fn to_json(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| match a.kind {
                AtomKind::Geodesic { length } => json!({"kind": "geodesic", "length": length, "angle": null, "weight": a.weight}),
                AtomKind::Cone { angle } => json!({"kind": "cone", "length": null, "angle": angle, "weight": a.weight}),
                AtomKind::Cusp => json!({"kind": "cusp", "length": null, "angle": null, "weight": a.weight}),
            })
            .collect();
        let fzzt = self.fzzt.map_or(Value::Null, |f| json!({"s0": f.s0, "z": f.z}));
        let mode = match self.mode {
            Mode::Numeric => json!("numeric"),
            Mode::Formal(n) => json!({ "formal": n }),
        };
        json!({"atoms": atoms, "fzzt": fzzt, "mode": mode})
    }

    /// `μ(L^{2n})`.
    pub fn even_moment(&self, n: u32) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight * a.square_length().powi(n as i32)).sum();
        let brane = self.fzzt.map_or(0.0, |f| {
            let mut v = -(-f.s0).exp() / f.z;
            for k in 1..=2 * n {
                v *= k as f64 / f.z;
            }
            v
        });
        atoms + brane
    }

    /// Total mass `μ(1)`.
    pub fn mass(&self) -> f64 {
        self.even_moment(0)
    }

    /// `t_k = 2 μ(K^{2k}) / (4^k k!)`.
    pub fn time(&self, k: u32) -> f64 {
        let mut norm = 2.0;
        for i in 1..=k {
            norm /= 4.0 * i as f64;
        }
        norm * self.even_moment(k)
    }

    /// `∫dμ(L) cosh(Lx)`; cones give `cos(αx)`, the brane needs `x < z`.
    pub fn cosh_transform(&self, x: f64) -> Result<f64> {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let b = a.square_length();
                let c = if b >= 0.0 { (b.sqrt() * x).cosh() } else { ((-b).sqrt() * x).cos() };
                a.weight * c
            })
            .sum();
        let brane = match self.fzzt {
            Some(f) if x.abs() >= f.z => {
                return Err(Error::Domain(format!("brane transform needs |x| < z (x = {x}, z = {})", f.z)))
            }
            Some(f) => -(-f.s0).exp() * f.z / (f.z * f.z - x * x),
            None => 0.0,
        };
        Ok(atoms + brane)
    }

    fn check_domain(&self, r: f64) -> Result<()> {
        if let Some(f) = self.fzzt {
            if f.z * f.z <= 2.0 * r {
                return Err(Error::Domain(format!("FZZT moments need z^2 > 2r (z = {}, r = {r})", f.z)));
            }
        }
        Ok(())
    }

    fn brane_derivative(&self, r: f64, j: u32) -> f64 {
        self.fzzt.map_or(0.0, |f| {
            let d = f.z * f.z - 2.0 * r;
            let mut v = (-f.s0).exp() * d.powf(-0.5);
            for i in 1..=j {
                v *= (2 * i - 1) as f64 / d;
            }
            v
        })
    }

    /// `Z^{(j)}(r)`, the `j`-th derivative of the string function.
    pub fn z_derivative(&self, r: f64, j: u32) -> Result<f64> {
        self.check_domain(r)?;
        let q = PI * PI;
        let free = if j == 0 { r * entire(1, -2.0 * q * r) } else { (-2.0 * q).powi(j as i32 - 1) * entire(j - 1, -2.0 * q * r) };
        Ok(free + self.defect_derivative(r, j))
    }

    fn defect_derivative(&self, r: f64, j: u32) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let b = a.square_length();
                a.weight * (b / 2.0).powi(j as i32) * entire(j, b * r / 2.0)
            })
            .sum();
        self.brane_derivative(r, j) - atoms
    }

    /// `Z(r)`.
    pub fn z(&self, r: f64) -> Result<f64> {
        self.z_derivative(r, 0)
    }

    /// `M_k(r) - M_k[0]`, with the defect-free part summed without cancellation.
    pub fn moment_shift(&self, r: f64, k: u32) -> Result<f64> {
        self.check_domain(r)?;
        let q = PI * PI;
        let free = (-2.0 * q).powi(k as i32) * entire_tail(k, -2.0 * q * r);
        Ok(free + self.defect_derivative(r, k + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = r#"{"atoms":[{"kind":"geodesic","length":1.5,"weight":0.1},
            {"kind":"cone","angle":1.0,"weight":0.02},{"kind":"cusp","weight":0.01}],
            "fzzt":{"s0":2.0,"z":3.0},"mode":{"formal":6}}"#;
        let w = Weight::from_json_str(text).unwrap();
        assert_eq!(w.atoms.len(), 3);
        assert_eq!(w.mode, Mode::Formal(6));
        assert_eq!(w.atoms[1].square_length(), -1.0);
        assert_eq!(Weight::from_json(&w.to_json()).unwrap(), w);
        let plain = Weight::from_json_str(r#"{"atoms":[],"mode":"numeric"}"#).unwrap();
        assert!(plain.is_zero());
    }

    #[test]
    fn errors_point_at_the_field() {
        let cases = [
            (r#"{"atoms":[{"kind":"cone","angle":3.5,"weight":0.1}]}"#, "/atoms/0/angle"),
            (r#"{"atoms":[{"kind":"geodesic","weight":0.1},{"kind":"geodesic","length":-1,"weight":0.1}]}"#, "/atoms/0/length"),
            (r#"{"atoms":[{"kind":"cusp","weight":0.1},{"kind":"disk","weight":0.1}]}"#, "/atoms/1/kind"),
            (r#"{"atoms":[{"kind":"cusp","weight":"heavy"}]}"#, "/atoms/0/weight"),
            (r#"{"atoms":[],"fzzt":{"s0":1,"z":-2}}"#, "/fzzt/z"),
            (r#"{"atoms":[],"mode":{"formal":0}}"#, "/mode/formal"),
        ];
        for (text, want) in cases {
            match Weight::from_json_str(text) {
                Err(Error::InvalidWeight { pointer, .. }) => assert_eq!(pointer, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn fzzt_moments_and_times() {
        let w = Weight::fzzt(0.5, 2.0);
        let e = (-0.5f64).exp();
        assert!((w.even_moment(0) + e / 2.0).abs() < 1e-15);
        assert!((w.even_moment(2) + e * 24.0 / 32.0).abs() < 1e-15);
        // closed form t_k = -e^{-s0} 2 (2k)! / (4^k k! z^{2k+1})
        assert!((w.time(2) + e * 2.0 * 24.0 / (16.0 * 2.0 * 32.0)).abs() < 1e-15);
    }

    #[test]
    fn string_function_at_zero_weight() {
        let w = Weight::zero();
        assert_eq!(w.z(0.0).unwrap(), 0.0);
        for k in 0..8u32 {
            let want = (-2.0 * PI * PI).powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
            assert!((w.z_derivative(0.0, k + 1).unwrap() - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = Weight {
            atoms: vec![Atom::geodesic(1.3, 0.05), Atom::cone(0.7, 0.03), Atom::cusp(0.02)],
            fzzt: Some(Fzzt { s0: 1.0, z: 2.5 }),
            mode: Mode::Numeric,
        };
        let h = 1e-5;
        for j in 0..5 {
            let r = 0.07;
            let fd = (w.z_derivative(r + h, j).unwrap() - w.z_derivative(r - h, j).unwrap()) / (2.0 * h);
            let an = w.z_derivative(r, j + 1).unwrap();
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "j={j}: {fd} vs {an}");
        }
    }

    #[test]
    fn brane_outside_domain() {
        let w = Weight::fzzt(0.0, 1.0);
        assert!(matches!(w.z(0.6), Err(Error::Domain(_))));
    }
}
