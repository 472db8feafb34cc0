//! JSON descriptors for norms, sets, lattices and solver scenarios.
//!
//! Every descriptor converts into a library value and back, and the JSON of
//! the converted value parses to an equal descriptor.

use serde::{Deserialize, Serialize};

use crate::anisotropy::{Anisotropy, Kind, OmegaSpec};
use crate::error::{Error, Result};
use crate::geometry::{Facet, Halfspace, PolyhedralSet, SetExpr, Window};
use crate::varmin::{CellWindow, Geometry, GridFunction, GridSet, Lattice, SolverParams};

/// Exponents in `[1, ∞]`; JSON has no infinity, so it is written `"inf"`.
pub(crate) mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(p),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity") => Ok(f64::INFINITY),
            Raw::Str(s) => Err(de::Error::custom(format!("exponent must be a number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormDesc {
    Euclidean {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Pnorm {
        #[serde(with = "exponent")]
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    /// The planar hexagon with vertices `(±1, 0)`, `±(eps, −eps)`, `(0, ±1)`.
    Hexagon {
        eps: f64,
    },
    Parallelogram {
        alpha: f64,
    },
    Cylindrical {
        base: Box<NormDesc>,
    },
    Conical {
        base: Box<NormDesc>,
    },
    Omega {
        omega: OmegaSpec,
        base: Box<NormDesc>,
    },
}

impl NormDesc {
    /// Builds the norm. `dim` fills in the dimension of descriptors that do
    /// not fix it themselves.
    pub fn build(&self, dim: Option<usize>) -> Result<Anisotropy> {
        let need = |own: &Option<usize>| {
            own.or(dim).ok_or_else(|| Error::Invalid("the norm descriptor needs a \"dim\" field here".into()))
        };
        let base_dim = dim.map(|d| d.saturating_sub(1));
        let norm = match self {
            NormDesc::Euclidean { dim: d } => Anisotropy::euclidean(need(d)?)?,
            NormDesc::Pnorm { p, dim: d } => Anisotropy::p_norm(need(d)?, *p)?,
            NormDesc::Quadratic { matrix } => Anisotropy::quadratic(matrix.clone())?,
            NormDesc::Polytope { vertices } => Anisotropy::polytope(vertices)?,
            NormDesc::Hexagon { eps } => Anisotropy::hexagon(*eps)?,
            NormDesc::Parallelogram { alpha } => Anisotropy::parallelogram(*alpha)?,
            NormDesc::Cylindrical { base } => Anisotropy::cylindrical(base.build(base_dim)?),
            NormDesc::Conical { base } => Anisotropy::conical(base.build(base_dim)?),
            NormDesc::Omega { omega, base } => Anisotropy::omega(*omega, base.build(base_dim)?)?,
        };
        if let Some(d) = dim {
            if norm.dim() != d {
                return Err(Error::dims("norm", norm.dim(), "expected", d));
            }
        }
        Ok(norm)
    }

    pub fn describe(norm: &Anisotropy) -> NormDesc {
        let d = Some(norm.dim());
        match norm.kind() {
            Kind::Euclidean => NormDesc::Euclidean { dim: d },
            Kind::PNorm(p) => NormDesc::Pnorm { p: *p, dim: d },
            Kind::Quadratic(q) => NormDesc::Quadratic { matrix: q.matrix().to_vec() },
            Kind::Polytope(p) => NormDesc::Polytope { vertices: p.vertices().to_vec() },
            Kind::Cylindrical(b) => NormDesc::Cylindrical { base: Box::new(Self::describe(b)) },
            Kind::Conical(b) => NormDesc::Conical { base: Box::new(Self::describe(b)) },
            Kind::Omega(w, b) => NormDesc::Omega { omega: *w, base: Box::new(Self::describe(b)) },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    #[default]
    Intersect,
    Union,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceDesc {
    pub normal: Vec<f64>,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDesc {
    Facets {
        facets: Vec<Facet>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<[Vec<f64>; 2]>,
    },
    /// `op` over the half-spaces `{normal·x < offset}` and the nested
    /// `parts`, optionally complemented.
    Halfspaces {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        halfspaces: Vec<HalfspaceDesc>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        parts: Vec<SetDesc>,
        #[serde(default)]
        op: SetOp,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        complement: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<[Vec<f64>; 2]>,
    },
}

impl SetDesc {
    fn window(&self) -> Option<&[Vec<f64>; 2]> {
        match self {
            SetDesc::Facets { window, .. } | SetDesc::Halfspaces { window, .. } => window.as_ref(),
        }
    }

    /// Ambient dimension, when the descriptor determines it.
    pub fn dim(&self) -> Option<usize> {
        if let Some(w) = self.window() {
            return Some(w[0].len());
        }
        match self {
            SetDesc::Facets { facets, .. } => facets.first().map(|f| f.normal.len()),
            SetDesc::Halfspaces { halfspaces, parts, .. } => {
                halfspaces.first().map(|h| h.normal.len()).or_else(|| parts.iter().find_map(SetDesc::dim))
            }
        }
    }

    fn expr(&self) -> Result<SetExpr> {
        match self {
            SetDesc::Facets { .. } => Err(Error::InvalidSet("facet lists cannot be nested in set expressions".into())),
            SetDesc::Halfspaces { halfspaces, parts, op, complement, .. } => {
                let mut items = Vec::with_capacity(halfspaces.len() + parts.len());
                for h in halfspaces {
                    items.push(SetExpr::Half(Halfspace::new(h.normal.clone(), h.offset)?));
                }
                for p in parts {
                    items.push(p.expr()?);
                }
                let e = match op {
                    _ if items.len() == 1 => items.pop().expect("one item"),
                    SetOp::Intersect if items.is_empty() => SetExpr::Full,
                    SetOp::Union if items.is_empty() => SetExpr::Empty,
                    SetOp::Intersect => SetExpr::And(items),
                    SetOp::Union => SetExpr::Or(items),
                };
                Ok(if *complement { e.complement() } else { e })
            }
        }
    }

    /// Builds the set inside its own window, or `bound`, or `(−1, 1)^m`.
    pub fn build(&self, bound: Option<&Window>) -> Result<PolyhedralSet> {
        let window = match (bound, self.window()) {
            (Some(b), _) => b.clone(),
            (None, Some([lo, hi])) => Window::new(lo.clone(), hi.clone())?,
            (None, None) => {
                let d = self.dim().ok_or_else(|| Error::InvalidSet("cannot infer the set dimension".into()))?;
                Window::cube(d, 1.0)?
            }
        };
        if let Some(d) = self.dim() {
            if d != window.dim() {
                return Err(Error::dims("set", d, "window", window.dim()));
            }
        }
        match self {
            SetDesc::Facets { facets, .. } => PolyhedralSet::from_facets(facets.clone(), window),
            SetDesc::Halfspaces { .. } => PolyhedralSet::from_expr(self.expr()?, window),
        }
    }

    fn from_expr(e: &SetExpr) -> SetDesc {
        // bare half-spaces among the children go to `halfspaces`
        let node = |children: Vec<SetDesc>, op: SetOp, complement: bool| {
            let mut halfspaces = Vec::new();
            let mut parts = Vec::new();
            for c in children {
                match c {
                    SetDesc::Halfspaces { halfspaces: h, parts: p, complement: false, .. } if h.len() == 1 && p.is_empty() => {
                        halfspaces.extend(h)
                    }
                    other => parts.push(other),
                }
            }
            SetDesc::Halfspaces { halfspaces, parts, op, complement, window: None }
        };
        match e {
            SetExpr::Empty => node(Vec::new(), SetOp::Union, false),
            SetExpr::Full => node(Vec::new(), SetOp::Intersect, false),
            SetExpr::Half(h) => SetDesc::Halfspaces {
                halfspaces: vec![HalfspaceDesc { normal: h.normal().to_vec(), offset: h.offset() }],
                parts: Vec::new(),
                op: SetOp::Intersect,
                complement: false,
                window: None,
            },
            SetExpr::And(v) => node(v.iter().map(Self::from_expr).collect(), SetOp::Intersect, false),
            SetExpr::Or(v) => node(v.iter().map(Self::from_expr).collect(), SetOp::Union, false),
            SetExpr::Not(inner) => match Self::from_expr(inner) {
                SetDesc::Halfspaces { halfspaces, parts, op, complement, window } => {
                    SetDesc::Halfspaces { halfspaces, parts, op, complement: !complement, window }
                }
                f => f,
            },
        }
    }

    pub fn describe(set: &PolyhedralSet) -> SetDesc {
        let w = Some([set.bound().lo().to_vec(), set.bound().hi().to_vec()]);
        match set.expr() {
            Some(e) => match Self::from_expr(e) {
                SetDesc::Halfspaces { halfspaces, parts, op, complement, .. } => {
                    SetDesc::Halfspaces { halfspaces, parts, op, complement, window: w }
                }
                f => f,
            },
            None => SetDesc::Facets { facets: set.facets().to_vec(), window: w },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDesc {
    pub dims: [usize; 2],
    pub h: f64,
    #[serde(default)]
    pub origin: [f64; 2],
    #[serde(default)]
    pub geometry: Geometry,
}

impl LatticeDesc {
    pub fn build(&self) -> Result<Lattice> {
        Lattice::new(self.dims[0], self.dims[1], self.h, self.origin, self.geometry)
    }

    pub fn describe(l: &Lattice) -> Self {
        LatticeDesc { dims: [l.nx, l.ny], h: l.h, origin: l.origin, geometry: l.geometry }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CollarDesc {
    /// `g(x) = f(x·ζ + offset)` with `f` the identity or the monotone
    /// piecewise-linear map through `profile`.
    Linear {
        zeta: [f64; 2],
        #[serde(default)]
        offset: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        profile: Option<Vec<(f64, f64)>>,
    },
    Indicator {
        set: SetDesc,
    },
    Constant {
        value: f64,
    },
}

fn profile_map(knots: &[(f64, f64)], x: f64) -> f64 {
    let (first, last) = (knots[0], knots[knots.len() - 1]);
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = knots.partition_point(|p| p.0 <= x);
    let (a, b) = (knots[k - 1], knots[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

impl CollarDesc {
    /// Data on the whole lattice; the interior starts at the collar mean.
    pub fn build(&self, l: &Lattice) -> Result<GridFunction> {
        let g = match self {
            CollarDesc::Linear { zeta, offset, profile } => {
                if let Some(k) = profile {
                    let ok = k.len() >= 2 && k.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 >= w[0].1);
                    if !ok {
                        return Err(Error::Invalid("profile knots must increase in x and not decrease in y".into()));
                    }
                }
                let (z, c) = (*zeta, *offset);
                let p = profile.clone();
                GridFunction::from_fn(l.clone(), move |x, y| {
                    let s = z[0] * x + z[1] * y + c;
                    p.as_deref().map_or(s, |k| profile_map(k, s))
                })?
            }
            CollarDesc::Indicator { set } => {
                let s = set.build(None)?;
                GridSet::from_polyhedral(l.clone(), &s)?.indicator()
            }
            CollarDesc::Constant { value } => GridFunction::from_fn(l.clone(), |_, _| *value)?,
        };
        let ring = g.collar();
        let mean = ring.iter().sum::<f64>() / ring.len() as f64;
        Ok(g.with_interior(|_, _| mean))
    }
}

/// Input of the grid solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDesc {
    pub norm: NormDesc,
    pub lattice: LatticeDesc,
    pub collar: CollarDesc,
    #[serde(default)]
    pub solver: SolverParams,
}

impl ScenarioDesc {
    pub fn build(&self) -> Result<(Anisotropy, GridFunction, SolverParams)> {
        let l = self.lattice.build()?;
        let norm = self.norm.build(Some(3))?;
        self.solver.validate()?;
        Ok((norm, self.collar.build(&l)?, self.solver.clone()))
    }
}

/// A set to digitize on a lattice for minimality checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDesc {
    pub lattice: LatticeDesc,
    pub set: SetDesc,
}

impl CandidateDesc {
    pub fn build(&self) -> Result<GridSet> {
        let l = self.lattice.build()?;
        GridSet::from_polyhedral(l, &self.set.build(None)?)
    }
}

/// Parses window lists: `"i,j,nx,ny;…"` for explicit windows, or
/// `"tile:NXxNY[:step]"` for every fitting window on a stride.
pub fn parse_windows(spec: &str, l: &Lattice) -> Result<Vec<CellWindow>> {
    let bad = || Error::Invalid(format!("cannot parse windows {spec:?}"));
    if let Some(rest) = spec.strip_prefix("tile:") {
        let mut it = rest.split(':');
        let size = it.next().ok_or_else(bad)?;
        let (a, b) = size.split_once('x').ok_or_else(bad)?;
        let nx: usize = a.trim().parse().map_err(|_| bad())?;
        let ny: usize = b.trim().parse().map_err(|_| bad())?;
        let step = match it.next() {
            Some(s) => s.trim().parse().map_err(|_| bad())?,
            None => 1,
        };
        let ws = crate::varmin::tiled_windows(l, nx, ny, step);
        if ws.is_empty() {
            return Err(Error::Invalid(format!("no {nx}x{ny} window fits the {}x{} lattice", l.nx, l.ny)));
        }
        return Ok(ws);
    }
    if spec.trim() == "all" {
        return Ok(vec![l.whole()]);
    }
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let v: Vec<usize> = part.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            match v[..] {
                [i, j, nx, ny] => {
                    let w = CellWindow { i, j, nx, ny };
                    l.check_window(&w)?;
                    Ok(w)
                }
                _ => Err(bad()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip_norm(json: &str, dim: Option<usize>) {
        let d: NormDesc = serde_json::from_str(json).unwrap();
        let n = d.build(dim).unwrap();
        let back = NormDesc::describe(&n);
        let again: NormDesc = serde_json::from_str(&serde_json::to_string(&back).unwrap()).unwrap();
        assert_eq!(back, again);
        assert_eq!(again.build(None).unwrap(), n);
    }

    #[test]
    fn norms() {
        round_trip_norm(r#"{"kind":"euclidean","dim":2}"#, None);
        round_trip_norm(r#"{"kind":"pnorm","p":1}"#, Some(3));
        round_trip_norm(r#"{"kind":"pnorm","p":"inf","dim":2}"#, None);
        round_trip_norm(r#"{"kind":"omega","omega":{"p":"inf"},"base":{"kind":"pnorm","p":1}}"#, Some(3));
        round_trip_norm(r#"{"kind":"omega","omega":{"p":2},"base":{"kind":"euclidean"}}"#, Some(3));
        round_trip_norm(r#"{"kind":"cylindrical","base":{"kind":"hexagon","eps":0.5}}"#, None);
        round_trip_norm(r#"{"kind":"polytope","vertices":[[1,0],[0,1],[-1,0],[0,-1]]}"#, None);
        assert!(serde_json::from_str::<NormDesc>(r#"{"kind":"euclidean","dims":2}"#).is_err());
        let e = NormDesc::Euclidean { dim: None }.build(None).unwrap_err();
        assert!(e.to_string().contains("dim"));
    }

    #[test]
    fn sets() {
        let j = r#"{"parts":[{"halfspaces":[{"normal":[1,0],"offset":0},{"normal":[0,-1],"offset":0}]},
                             {"halfspaces":[{"normal":[-1,0],"offset":-2},{"normal":[0,1],"offset":1}]}],
                    "op":"union","window":[[-4,-4],[4,4]]}"#;
        let d: SetDesc = serde_json::from_str(j).unwrap();
        let s = d.build(None).unwrap();
        assert_eq!(s.contains(&[-1.0, 1.0]), Some(true));
        assert_eq!(s.contains(&[3.0, 0.5]), Some(true));
        assert_eq!(s.contains(&[1.0, 0.5]), Some(false));
        let back = SetDesc::describe(&s);
        let s2 = serde_json::from_str::<SetDesc>(&serde_json::to_string(&back).unwrap()).unwrap().build(None).unwrap();
        assert_eq!(s, s2);

        let f = r#"{"facets":[{"normal":[0,1],"area":2,"anchor":[0,0]}],"window":[[-1,-1],[1,1]]}"#;
        let s = serde_json::from_str::<SetDesc>(f).unwrap().build(None).unwrap();
        assert_eq!(s.facets().len(), 1);
    }

    #[test]
    fn scenario_and_windows() {
        let j = r#"{"norm":{"kind":"cylindrical","base":{"kind":"euclidean"}},
                    "lattice":{"dims":[8,8],"h":0.125},
                    "collar":{"kind":"linear","zeta":[1,0]},
                    "solver":{"gap_tol":1e-8,"max_iters":100000,"seed":1}}"#;
        let d: ScenarioDesc = serde_json::from_str(j).unwrap();
        let (n, g, p) = d.build().unwrap();
        assert_eq!(n.dim(), 3);
        assert_eq!(p.seed, 1);
        assert!((g.get(0, 3) + 0.0625).abs() < 1e-12);
        let l = d.lattice.build().unwrap();
        assert_eq!(parse_windows("tile:4x4:2", &l).unwrap().len(), 9);
        assert_eq!(parse_windows("0,0,2,2;1,1,3,3", &l).unwrap().len(), 2);
        assert!(parse_windows("0,0,9,9", &l).is_err());
        assert!(serde_json::from_str::<ScenarioDesc>(&j.replace("\"seed\"", "\"sede\"")).is_err());
    }
}
