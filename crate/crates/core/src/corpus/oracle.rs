//! Floating-point oracle, independent of the symbolic pipeline.
//!
//! Scenario texts are re-parsed into a small float expression tree and
//! every tensor is rebuilt in coordinates: the metric as `E^{-T} G E^{-1}`,
//! Christoffel symbols from coordinate derivatives of `g`, Reeb fields by a
//! least-squares solve. Derivatives are taken with dual numbers, so nested
//! derivatives keep full precision.

use num_dual::{Dual, DualNum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::scenario::Scenario;
use crate::probe::{random_rational, ProbeSet};

/// Identities understood by [`numeric_oracle`]; the last two take a
/// `:<submanifold>` suffix.
pub const ORACLE_IDENTITIES: [&str; 5] = ["nabla_z", "d_squared", "associated", "mean_curvature", "mean_curvature_formula"];

/// Resampling budget per probe.
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown submanifold `{0}`")]
    UnknownSubmanifold(String),
    #[error("cannot read expression `{0}`")]
    Parse(String),
    #[error("no finite evaluation after {MAX_ATTEMPTS} attempts")]
    Poles,
    #[error("{0}")]
    Pipeline(String),
}

trait Num: DualNum<Primitive = f64> + Copy {}
impl<T: DualNum<Primitive = f64> + Copy> Num for T {}

#[derive(Debug, Clone)]
enum Ex {
    Num(f64),
    Var(usize),
    Neg(Box<Ex>),
    Add(Box<Ex>, Box<Ex>),
    Sub(Box<Ex>, Box<Ex>),
    Mul(Box<Ex>, Box<Ex>),
    Div(Box<Ex>, Box<Ex>),
    Pow(Box<Ex>, i32),
}

impl Ex {
    fn eval<T: Num>(&self, x: &[T]) -> T {
        match self {
            Ex::Num(c) => T::from(*c),
            Ex::Var(i) => x[*i],
            Ex::Neg(a) => -a.eval(x),
            Ex::Add(a, b) => a.eval(x) + b.eval(x),
            Ex::Sub(a, b) => a.eval(x) - b.eval(x),
            Ex::Mul(a, b) => a.eval(x) * b.eval(x),
            Ex::Div(a, b) => a.eval(x) / b.eval(x),
            Ex::Pow(a, n) => a.eval(x).powi(*n),
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn parse(text: &str, vars: &[String]) -> Result<Ex, OracleError> {
        let mut p = Parser { chars: text.chars().collect(), pos: 0, vars };
        let e = p.expr().ok_or_else(|| OracleError::Parse(text.into()))?;
        p.ws();
        if p.pos != p.chars.len() {
            return Err(OracleError::Parse(text.into()));
        }
        Ok(e)
    }

    fn ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Option<Ex> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Ex::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Ex::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Some(e);
            }
        }
    }

    fn term(&mut self) -> Option<Ex> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Ex::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Ex::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Some(e);
            }
        }
    }

    fn unary(&mut self) -> Option<Ex> {
        if self.eat('-') {
            return Some(Ex::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.ws();
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let n: i32 = self.chars[start..self.pos].iter().collect::<String>().parse().ok()?;
            return Some(Ex::Pow(Box::new(base), n));
        }
        Some(base)
    }

    fn atom(&mut self) -> Option<Ex> {
        self.ws();
        let c = *self.chars.get(self.pos)?;
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            return self.eat(')').then_some(e);
        }
        let start = self.pos;
        if c.is_ascii_digit() {
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            return self.chars[start..self.pos].iter().collect::<String>().parse().ok().map(Ex::Num);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            return self.vars.iter().position(|v| *v == name).map(Ex::Var);
        }
        None
    }
}

type Mat<T> = Vec<Vec<T>>;

fn solve<T: Num>(mut a: Mat<T>, mut b: Mat<T>) -> Option<Mat<T>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].re().abs().total_cmp(&a[j][col].re().abs()))?;
        if a[piv][col].re().abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
                for c in 0..b[r].len() {
                    let v = b[col][c];
                    b[r][c] -= f * v;
                }
            }
        }
    }
    for r in 0..n {
        let p = a[r][r];
        for v in b[r].iter_mut() {
            *v /= p;
        }
    }
    Some(b)
}

fn identity<T: Num>(n: usize) -> Mat<T> {
    (0..n).map(|i| (0..n).map(|j| T::from(if i == j { 1.0 } else { 0.0 })).collect()).collect()
}

fn matmul<T: Num>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..p).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn transpose<T: Num>(a: &Mat<T>) -> Mat<T> {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j]).collect()).collect()
}

fn seeded<T: Num>(x: &[T], dir: usize) -> Vec<Dual<T>> {
    x.iter()
        .enumerate()
        .map(|(i, v)| Dual::new(*v, T::from(if i == dir { 1.0 } else { 0.0 })))
        .collect()
}

/// The scenario rebuilt as float expression trees.
pub struct NumericModel {
    n: usize,
    /// `frame[a][i]`: coordinate component `i` of `e_a`.
    frame: Vec<Vec<Ex>>,
    alpha: [Vec<Ex>; 2],
    phi: Vec<Vec<Ex>>,
    metric: Vec<Vec<Ex>>,
    subs: Vec<(String, Vec<Vec<Ex>>)>,
}

impl NumericModel {
    pub fn new(s: &Scenario) -> Result<Self, OracleError> {
        let f = s.file();
        let vars = &f.coordinates;
        let row = |r: &Vec<String>| r.iter().map(|t| Parser::parse(t, vars)).collect::<Result<Vec<_>, _>>();
        let mat = |m: &Vec<Vec<String>>| m.iter().map(row).collect::<Result<Vec<_>, _>>();
        Ok(NumericModel {
            n: vars.len(),
            frame: mat(&f.frame)?,
            alpha: [row(&f.alpha1)?, row(&f.alpha2)?],
            phi: mat(&f.phi)?,
            metric: mat(&f.metric)?,
            subs: f.submanifolds.iter().map(|(k, v)| Ok((k.clone(), mat(v)?))).collect::<Result<_, OracleError>>()?,
        })
    }

    /// `E[i][a]`.
    fn frame_at<T: Num>(&self, x: &[T]) -> Mat<T> {
        (0..self.n).map(|i| (0..self.n).map(|a| self.frame[a][i].eval(x)).collect()).collect()
    }

    fn eval_mat<T: Num>(m: &[Vec<Ex>], x: &[T]) -> Mat<T> {
        m.iter().map(|r| r.iter().map(|e| e.eval(x)).collect()).collect()
    }

    /// Coordinate metric `E^{-T} G E^{-1}`.
    fn metric_at<T: Num>(&self, x: &[T]) -> Option<Mat<T>> {
        let einv = solve(self.frame_at(x), identity(self.n))?;
        let g = Self::eval_mat(&self.metric, x);
        Some(matmul(&transpose(&einv), &matmul(&g, &einv)))
    }

    /// Coordinate endomorphism `E Φ E^{-1}`.
    fn phi_at<T: Num>(&self, x: &[T]) -> Option<Mat<T>> {
        let e = self.frame_at(x);
        let einv = solve(e.clone(), identity(self.n))?;
        Some(matmul(&e, &matmul(&Self::eval_mat(&self.phi, x), &einv)))
    }

    /// `D[j][k] = ∂_j α_k − ∂_k α_j`.
    fn dalpha_at<T: Num>(&self, i: usize, x: &[T]) -> Mat<T> {
        let n = self.n;
        let grad: Mat<T> = (0..n)
            .map(|j| {
                let xs = seeded(x, j);
                self.alpha[i].iter().map(|e| e.eval(&xs).eps).collect()
            })
            .collect();
        (0..n).map(|j| (0..n).map(|k| grad[j][k] - grad[k][j]).collect()).collect()
    }

    /// Reeb fields in coordinates by least squares on
    /// `α_i(Z_j) = δ_ij`, `dα_i(Z_j, ·) = 0`.
    fn reeb_at<T: Num>(&self, x: &[T]) -> Option<[Vec<T>; 2]> {
        let n = self.n;
        let mut rows: Mat<T> = Vec::new();
        for i in 0..2 {
            rows.push(self.alpha[i].iter().map(|e| e.eval(x)).collect());
        }
        for i in 0..2 {
            let d = self.dalpha_at(i, x);
            rows.extend(transpose(&d));
        }
        let at = transpose(&rows);
        let ata = matmul(&at, &rows);
        let mut rhs = vec![vec![T::from(0.0); 2]; n];
        for (c, r) in rhs.iter_mut().enumerate() {
            r[0] = at[c][0];
            r[1] = at[c][1];
        }
        let z = solve(ata, rhs)?;
        Some([(0..n).map(|k| z[k][0]).collect(), (0..n).map(|k| z[k][1]).collect()])
    }

    /// `Γ^k_ij` at `[k][i][j]`.
    fn christoffel(&self, x: &[f64]) -> Option<Vec<Mat<f64>>> {
        let n = self.n;
        let g = self.metric_at(x)?;
        let ginv = solve(g, identity(n))?;
        let dg: Vec<Mat<f64>> = (0..n)
            .map(|l| self.metric_at(&seeded(x, l)).map(|m| m.iter().map(|r| r.iter().map(|v| v.eps).collect()).collect()))
            .collect::<Option<_>>()?;
        Some(
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| (0..n).map(|l| 0.5 * ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])).sum())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// `max |∇_{∂_i} Z + φ∂_i|` with `Z = Z₁ + Z₂`.
    fn nabla_z(&self, x: &[f64]) -> Option<f64> {
        let n = self.n;
        let z = self.reeb_at(x)?;
        let zs: Vec<f64> = (0..n).map(|k| z[0][k] + z[1][k]).collect();
        let gamma = self.christoffel(x)?;
        let phi = self.phi_at(x)?;
        let mut worst = 0.0f64;
        for i in 0..n {
            let zd = self.reeb_at(&seeded(x, i))?;
            for k in 0..n {
                let dz = zd[0][k].eps + zd[1][k].eps;
                let conn: f64 = (0..n).map(|j| gamma[k][i][j] * zs[j]).sum();
                worst = worst.max((dz + conn + phi[k][i]).abs());
            }
        }
        Some(worst)
    }

    /// `max |g(X,φY) − ½(D₁ + D₂)(X,Y)|` on coordinate fields.
    fn associated(&self, x: &[f64]) -> Option<f64> {
        let g = self.metric_at(x)?;
        let gphi = matmul(&g, &self.phi_at(x)?);
        let d1 = self.dalpha_at(0, x);
        let d2 = self.dalpha_at(1, x);
        let mut worst = 0.0f64;
        for j in 0..self.n {
            for k in 0..self.n {
                worst = worst.max((gphi[j][k] - 0.5 * (d1[j][k] + d2[j][k])).abs());
            }
        }
        Some(worst)
    }

    /// `max |d(dα_i)|` on coordinate triples.
    fn d_squared(&self, x: &[f64]) -> Option<f64> {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..2 {
            let dd: Vec<Mat<f64>> = (0..n)
                .map(|l| self.dalpha_at(i, &seeded(x, l)).iter().map(|r| r.iter().map(|v| v.eps).collect()).collect())
                .collect();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let v = dd[a][b][c] + dd[b][c][a] + dd[c][a][b];
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        Some(worst)
    }

    /// Coordinate fields `F_a = Σ_b f_a^b e_b` of a subframe.
    fn span_at<T: Num>(&self, span: &[Vec<Ex>], x: &[T]) -> Mat<T> {
        let e = self.frame_at(x);
        span.iter()
            .map(|f| {
                let c: Vec<T> = f.iter().map(|v| v.eval(x)).collect();
                (0..self.n).map(|i| (0..self.n).map(|b| e[i][b] * c[b]).sum()).collect()
            })
            .collect()
    }

    /// Mean curvature in coordinates by the Gauss formula.
    fn mean_curvature(&self, span: &[Vec<Ex>], x: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        let r = span.len();
        let f = self.span_at(span, x);
        let df: Vec<Mat<f64>> = (0..n)
            .map(|i| self.span_at(span, &seeded(x, i)).iter().map(|v| v.iter().map(|d| d.eps).collect()).collect())
            .collect();
        let g = self.metric_at(x)?;
        let gamma = self.christoffel(x)?;
        let ft = f.clone();
        let fcols = transpose(&ft);
        let gf = matmul(&g, &fcols);
        let gt = matmul(&ft, &gf);
        let gt_inv = solve(gt, identity(r))?;
        let tangential = |v: &[f64]| -> Vec<f64> {
            let dots: Vec<f64> = (0..r).map(|a| (0..n).map(|k| gf[k][a] * v[k]).sum()).collect();
            let c: Vec<f64> = (0..r).map(|a| (0..r).map(|b| gt_inv[a][b] * dots[b]).sum()).collect();
            (0..n).map(|k| (0..r).map(|a| c[a] * f[a][k]).sum()).collect()
        };
        let mut h = vec![0.0; n];
        for a in 0..r {
            for b in 0..r {
                let nab: Vec<f64> = (0..n)
                    .map(|k| {
                        let d: f64 = (0..n).map(|i| f[a][i] * df[i][b][k]).sum();
                        let c: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gamma[k][i][j] * f[a][i] * f[b][j]).sum();
                        d + c
                    })
                    .collect();
                let t = tangential(&nab);
                for k in 0..n {
                    h[k] += gt_inv[a][b] * (nab[k] - t[k]) / r as f64;
                }
            }
        }
        Some(h)
    }

    fn sub(&self, name: &str) -> Result<&[Vec<Ex>], OracleError> {
        self.subs.iter().find(|(n, _)| n == name).map(|(_, s)| s.as_slice()).ok_or_else(|| OracleError::UnknownSubmanifold(name.into()))
    }
}

/// Mean curvature of a subframe at a point, in coordinate components.
pub fn oracle_mean_curvature(s: &Scenario, sub: &str, point: &[f64]) -> Result<Vec<f64>, OracleError> {
    let m = NumericModel::new(s)?;
    let span = m.sub(sub)?;
    m.mean_curvature(span, point).filter(|h| h.iter().all(|v| v.is_finite())).ok_or(OracleError::Poles)
}

/// Max absolute residual of `identity` over `probes` seeded random points.
///
/// Identities: `nabla_z` (`∇_X Z + φX`), `d_squared`, `associated`
/// (`g(X,φY) − (dα₁+dα₂)(X,Y)`), `mean_curvature:<sub>` (`|H|`) and
/// `mean_curvature_formula:<sub>` (orthonormal J-basis formula, delegated
/// to the floating-point check of the submanifold module).
pub fn numeric_oracle(s: &Scenario, identity: &str, probes: usize, seed: u64) -> Result<f64, OracleError> {
    let (id, arg) = match identity.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (identity, None),
    };
    if id == "mean_curvature_formula" {
        let sub = arg.ok_or_else(|| OracleError::UnknownIdentity(identity.into()))?;
        return formula_residual(s, sub, probes, seed);
    }
    let m = NumericModel::new(s)?;
    let span = match (id, arg) {
        ("mean_curvature", Some(sub)) => Some(m.sub(sub)?),
        ("nabla_z" | "d_squared" | "associated", None) => None,
        _ => return Err(OracleError::UnknownIdentity(identity.into())),
    };
    let eval = |x: &[f64]| -> Option<f64> {
        let r = match id {
            "nabla_z" => m.nabla_z(x),
            "d_squared" => m.d_squared(x),
            "associated" => m.associated(x),
            _ => m.mean_curvature(span.expect("span"), x).map(|h| h.iter().fold(0.0f64, |a, v| a.max(v.abs()))),
        };
        r.filter(|v| v.is_finite())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let mut value = None;
        for _ in 0..MAX_ATTEMPTS {
            let x: Vec<f64> = (0..m.n).map(|_| rational_f64(&random_rational(&mut rng))).collect();
            if let Some(v) = eval(&x) {
                value = Some(v);
                break;
            }
        }
        worst = worst.max(value.ok_or(OracleError::Poles)?);
    }
    Ok(worst)
}

fn rational_f64(r: &crate::scalar::Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn formula_residual(s: &Scenario, sub: &str, probes: usize, seed: u64) -> Result<f64, OracleError> {
    let span = s.submanifold(sub).ok_or_else(|| OracleError::UnknownSubmanifold(sub.into()))?;
    let ps = ProbeSet::new(s.frame.base_point().to_vec(), seed, probes);
    let mcp = super::run::build_metric_pair(s, &ps).map_err(OracleError::Pipeline)?;
    let subframe = crate::submanifold::Subframe::new(s.frame.clone(), span.to_vec()).map_err(|e| OracleError::Pipeline(e.to_string()))?;
    let (res, used) = crate::submanifold::mean_curvature_formula_residual(&subframe, &mcp, &ps).map_err(|e| OracleError::Pipeline(e.to_string()))?;
    if used == 0 {
        return Err(OracleError::Poles);
    }
    Ok(res)
}
