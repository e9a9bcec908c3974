//! Convex polytopes over the rationals: vertex enumeration, triangulation,
//! exact polynomial integration, and integration against the singular sieve
//! kernel `(1 - w*y)/y` by slicing in `y`.
//!
//! Every region that arises here is an intersection of rational halfspaces in
//! at most four variables. Integrals of polynomials over such regions are
//! rational and are computed exactly; the kernel factor contributes rational
//! multiples of logarithms of rationals, captured in [`LogValue`].

use std::collections::BTreeSet;

use num::{One, Signed, Zero};

use crate::error::RegionError;
use crate::exact::{factorial, rat_int, rational_from_f64, rational_to_f64, LogValue, Rational};
use crate::poly::{Basis, MPoly, Poly};

/// Closed halfspace `normal . x + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    /// Builds `p >= 0` from an affine polynomial.
    pub fn from_affine(p: &MPoly) -> Result<Self, RegionError> {
        if !p.is_affine() {
            return Err(RegionError::ExactShapeViolation(
                "halfspace from non-affine polynomial".into(),
            ));
        }
        let dim = p.arity();
        let mut normal = vec![Rational::zero(); dim];
        let mut offset = Rational::zero();
        for (e, c) in p.terms() {
            match e.iter().position(|&k| k == 1) {
                Some(i) => normal[i] = c.clone(),
                None => offset = c.clone(),
            }
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = self.offset.clone();
        for (n, v) in self.normal.iter().zip(x) {
            acc += n * v;
        }
        acc
    }

    /// Fixes one coordinate and drops it, keeping the index order of the rest.
    fn substitute(&self, var: usize, value: &Rational) -> Halfspace {
        let mut normal = self.normal.clone();
        let coef = normal.remove(var);
        Halfspace {
            normal,
            offset: &self.offset + coef * value,
        }
    }
}

/// Intersection of halfspaces in `dim` variables.
#[derive(Clone, Debug)]
pub struct Region {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl Region {
    pub fn new(dim: usize) -> Self {
        Region {
            dim,
            halfspaces: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn push(&mut self, hs: Halfspace) {
        assert_eq!(hs.normal.len(), self.dim);
        self.halfspaces.push(hs);
    }

    /// Adds the constraint `p >= 0` for an affine polynomial of matching arity.
    pub fn constrain(&mut self, p: &MPoly) -> Result<(), RegionError> {
        assert_eq!(p.arity(), self.dim);
        let hs = Halfspace::from_affine(p)?;
        self.push(hs);
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| !h.eval(x).is_negative())
    }

    /// Fixes `x_var = value`; remaining variables keep their relative order.
    pub fn slice(&self, var: usize, value: &Rational) -> Region {
        Region {
            dim: self.dim - 1,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| h.substitute(var, value))
                .collect(),
        }
    }

    /// All vertices, or an error if the region is nonempty and unbounded.
    /// An empty region yields an empty list.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>, RegionError> {
        let d = self.dim;
        if d == 0 {
            return Ok(if self.halfspaces.iter().all(|h| !h.offset.is_negative()) {
                vec![vec![]]
            } else {
                vec![]
            });
        }
        let mut verts: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for subset in subsets(self.halfspaces.len(), d) {
            let rows: Vec<&Halfspace> = subset.iter().map(|&i| &self.halfspaces[i]).collect();
            let a: Vec<Vec<Rational>> = rows.iter().map(|h| h.normal.clone()).collect();
            let b: Vec<Rational> = rows.iter().map(|h| -&h.offset).collect();
            if let Some(x) = solve_square(&a, &b) {
                if self.contains(&x) {
                    verts.insert(x);
                }
            }
        }
        if verts.is_empty() {
            return Ok(vec![]);
        }
        if self.has_recession_direction() {
            return Err(RegionError::UnboundedSlice);
        }
        Ok(verts.into_iter().collect())
    }

    /// True iff some nonzero direction `r` satisfies `normal . r >= 0` for
    /// every halfspace; extreme rays lie in null spaces of `(dim-1)`-subsets
    /// of the normals.
    fn has_recession_direction(&self) -> bool {
        let d = self.dim;
        let candidates: Vec<Vec<Rational>> = if d == 1 {
            vec![vec![Rational::one()]]
        } else {
            let mut out = Vec::new();
            for subset in subsets(self.halfspaces.len(), d - 1) {
                let rows: Vec<Vec<Rational>> = subset
                    .iter()
                    .map(|&i| self.halfspaces[i].normal.clone())
                    .collect();
                if let Some(r) = null_vector(&rows, d) {
                    out.push(r);
                }
            }
            out
        };
        for r in candidates {
            for dir in [r.clone(), r.iter().map(|v| -v).collect::<Vec<_>>()] {
                let ok = self
                    .halfspaces
                    .iter()
                    .all(|h| !dot(&h.normal, &dir).is_negative());
                if ok {
                    return true;
                }
            }
        }
        false
    }

    /// Decomposes the region into simplices (each `dim + 1` vertices).
    pub fn triangulate(&self) -> Result<Vec<Vec<Vec<Rational>>>, RegionError> {
        let verts = self.vertices()?;
        triangulate_hull(self.dim, &verts, &self.halfspaces)
    }

    /// Exact integral of a polynomial over the region. Lower-dimensional or
    /// empty regions integrate to zero.
    pub fn integrate(&self, integrand: &MPoly) -> Result<Rational, RegionError> {
        assert_eq!(integrand.arity(), self.dim);
        let mut acc = Rational::zero();
        for simplex in self.triangulate()? {
            acc += simplex_integral(&simplex, integrand);
        }
        Ok(acc)
    }
}

/// Sorted `y`-coordinates at which the combinatorial structure of slices
/// `{x : (x, y) in region}` can change: exactly the vertex `y`-coordinates.
pub fn breakpoints(region: &Region, y_var: usize) -> Result<Vec<Rational>, RegionError> {
    let verts = region.vertices()?;
    let set: BTreeSet<Rational> = verts.into_iter().map(|mut v| v.remove(y_var)).collect();
    Ok(set.into_iter().collect())
}

/// Polynomial `g` with `g(y) = int_{slice at y} integrand` on the open panel
/// `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct PanelPolynomial {
    pub lo: Rational,
    pub hi: Rational,
    pub g: Poly,
}

/// The slice integral `G(y)` of a polynomial over a convex polytope is itself
/// polynomial between consecutive breakpoints; this recovers each panel's
/// polynomial by exact interpolation at interior rational nodes, with one
/// extra node as a consistency check.
pub fn panel_polynomials(
    region: &Region,
    y_var: usize,
    integrand: &MPoly,
) -> Result<Vec<PanelPolynomial>, RegionError> {
    assert_eq!(integrand.arity(), region.dim);
    let bps = breakpoints(region, y_var)?;
    let slice_dim = region.dim - 1;
    let deg = integrand.total_degree() as usize + slice_dim;
    let mut out = Vec::new();
    for pair in bps.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let width = hi - lo;
        let nodes: Vec<Rational> = (0..deg + 2)
            .map(|j| lo + &width * rat_int(j as i64 + 1) / rat_int(deg as i64 + 3))
            .collect();
        let values: Result<Vec<Rational>, RegionError> = nodes
            .iter()
            .map(|y| {
                region
                    .slice(y_var, y)
                    .integrate(&integrand.partial_eval(y_var, y))
            })
            .collect();
        let values = values?;
        let g = lagrange(&nodes[..deg + 1], &values[..deg + 1]);
        let check = g.eval(&nodes[deg + 1]);
        if check != values[deg + 1] {
            return Err(RegionError::ExactShapeViolation(format!(
                "slice integral is not polynomial of degree {deg} on panel ({lo}, {hi})"
            )));
        }
        if g.is_zero() {
            continue;
        }
        out.push(PanelPolynomial {
            lo: lo.clone(),
            hi: hi.clone(),
            g,
        });
    }
    Ok(out)
}

/// Exact value of `int_region integrand(x) * (1 - w*y)/y dx` where `y` is the
/// coordinate `y_var`. Panels touching `y = 0` must satisfy `g(0) = 0`, else
/// the integral diverges.
pub fn kernel_integral_exact(
    region: &Region,
    y_var: usize,
    integrand: &MPoly,
    w: &Rational,
) -> Result<LogValue, RegionError> {
    let mut acc = LogValue::zero();
    for panel in panel_polynomials(region, y_var, integrand)? {
        let kernel = Poly::new(vec![Rational::one(), -w], Basis::Monomial);
        let h = kernel.mul(&panel.g);
        let coeffs = h.coeffs();
        let h0 = coeffs.first().cloned().unwrap_or_else(Rational::zero);
        if panel.lo.is_zero() && !h0.is_zero() {
            return Err(RegionError::Divergent);
        }
        // (h(y) - h(0)) / y is polynomial
        let q = Poly::new(coeffs.iter().skip(1).cloned().collect(), Basis::Monomial);
        let mut piece = LogValue::from_rational(q.integrate(&panel.lo, &panel.hi));
        if !h0.is_zero() {
            let ratio = &panel.hi / &panel.lo;
            piece
                .add_log_term(&ratio, &h0)
                .map_err(crate::error::PolyError::Exact)?;
        }
        acc = &acc + &piece;
    }
    Ok(acc)
}

/// Numeric counterpart of [`kernel_integral_exact`]: adaptive Gauss–Legendre
/// in `y`, where each node value `G(y)` is still an exact slice integral at a
/// rationalized node. Returns the value and an error estimate; fails if the
/// tolerance cannot be met.
pub fn kernel_integral_quadrature(
    region: &Region,
    y_var: usize,
    integrand: &MPoly,
    w: &Rational,
    tol: f64,
) -> Result<(f64, f64), RegionError> {
    let bps = breakpoints(region, y_var)?;
    let wf = rational_to_f64(w);
    let eval = |y: f64| -> Result<f64, RegionError> {
        let yr = rational_from_f64(y).expect("finite quadrature node");
        let g = region
            .slice(y_var, &yr)
            .integrate(&integrand.partial_eval(y_var, &yr))?;
        Ok(rational_to_f64(&g) * (1.0 - wf * y) / y)
    };
    let mut total = 0.0;
    let mut err = 0.0;
    for pair in bps.windows(2) {
        let (a, b) = (rational_to_f64(&pair[0]), rational_to_f64(&pair[1]));
        if b - a <= 0.0 {
            continue;
        }
        let panel_tol = tol * (b - a) / (rational_to_f64(bps.last().unwrap()) - rational_to_f64(&bps[0]));
        let (v, e) = adaptive_gl(&eval, a, b, panel_tol, 0)?;
        total += v;
        err += e;
    }
    if err > tol {
        return Err(RegionError::ToleranceUnreachable(err, tol));
    }
    Ok((total, err))
}

fn adaptive_gl(
    f: &dyn Fn(f64) -> Result<f64, RegionError>,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64), RegionError> {
    let whole = gl32(f, a, b)?;
    let m = 0.5 * (a + b);
    let halves = gl32(f, a, m)? + gl32(f, m, b)?;
    let diff = (whole - halves).abs();
    if diff <= tol || depth >= 12 {
        return Ok((halves, diff));
    }
    let (v1, e1) = adaptive_gl(f, a, m, tol / 2.0, depth + 1)?;
    let (v2, e2) = adaptive_gl(f, m, b, tol / 2.0, depth + 1)?;
    Ok((v1 + v2, e1 + e2))
}

fn gl32(f: &dyn Fn(f64) -> Result<f64, RegionError>, a: f64, b: f64) -> Result<f64, RegionError> {
    let (nodes, weights) = gl32_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

/// 32-point Gauss–Legendre nodes and weights on `[-1, 1]`, built once by
/// Newton iteration on the Legendre recurrence.
fn gl32_rule() -> (&'static [f64; 32], &'static [f64; 32]) {
    use std::sync::OnceLock;
    static RULE: OnceLock<([f64; 32], [f64; 32])> = OnceLock::new();
    let (n, w) = RULE.get_or_init(|| {
        const N: usize = 32;
        let mut nodes = [0.0f64; N];
        let mut weights = [0.0f64; N];
        for i in 0..N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(N, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(N, x);
            nodes[i] = -x; // ascending order
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    });
    (n, w)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Exact Lagrange interpolation through `(nodes[i], values[i])`.
fn lagrange(nodes: &[Rational], values: &[Rational]) -> Poly {
    let mut acc = Poly::zero();
    for (i, yi) in values.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yi.clone());
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = &nodes[i] - xj;
            let factor = Poly::new(vec![-xj / &denom, Rational::one() / &denom], Basis::Monomial);
            term = term.mul(&factor);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Integral of a polynomial over one simplex via the affine pull-back to the
/// standard simplex and the factorial formula for simplex moments.
fn simplex_integral(simplex: &[Vec<Rational>], integrand: &MPoly) -> Rational {
    let d = simplex.len() - 1;
    let v0 = &simplex[0];
    let cols: Vec<Vec<Rational>> = simplex[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    let mat: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
        .collect();
    let det = determinant(&mat);
    if det.is_zero() {
        return Rational::zero();
    }
    // x_i = v0[i] + sum_j cols[j][i] * lambda_j
    let exprs: Vec<MPoly> = (0..d)
        .map(|i| {
            let mut e = MPoly::constant(d, v0[i].clone());
            for (j, col) in cols.iter().enumerate() {
                e = e.add(&MPoly::var(d, j).scale(&col[i]));
            }
            e
        })
        .collect();
    let composed = integrand.compose(&exprs);
    let mut acc = Rational::zero();
    for (e, c) in composed.terms() {
        let total: u32 = e.iter().sum();
        let mut num = Rational::one();
        for &a in e {
            num *= factorial(a);
        }
        let den = factorial(total + d as u32);
        acc += c * num / den;
    }
    acc * det.abs()
}

fn triangulate_hull(
    dim: usize,
    verts: &[Vec<Rational>],
    halfspaces: &[Halfspace],
) -> Result<Vec<Vec<Vec<Rational>>>, RegionError> {
    if verts.len() < dim + 1 {
        return Ok(vec![]); // empty or lower-dimensional: measure zero
    }
    match dim {
        0 => Ok(vec![]),
        1 => {
            let lo = verts.iter().min().unwrap().clone();
            let hi = verts.iter().max().unwrap().clone();
            Ok(vec![vec![lo, hi]])
        }
        2 => Ok(fan_polygon(verts)),
        3 => {
            let apex = verts.iter().min().unwrap().clone();
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut out = Vec::new();
            for h in halfspaces {
                let idx: Vec<usize> = (0..verts.len())
                    .filter(|&i| h.eval(&verts[i]).is_zero())
                    .collect();
                if idx.len() < 3 || !seen.insert(idx.clone()) {
                    continue;
                }
                if idx.iter().any(|&i| verts[i] == apex) {
                    continue;
                }
                let facet: Vec<Vec<Rational>> = idx.iter().map(|&i| verts[i].clone()).collect();
                for tri in facet_triangles(&facet)? {
                    let mut tet = tri;
                    tet.push(apex.clone());
                    out.push(tet);
                }
            }
            Ok(out)
        }
        _ => Err(RegionError::ExactShapeViolation(format!(
            "triangulation unsupported in dimension {dim}"
        ))),
    }
}

/// Fan triangulation of a convex polygon given as an unordered vertex set.
fn fan_polygon(verts: &[Vec<Rational>]) -> Vec<Vec<Vec<Rational>>> {
    let n = verts.len();
    let centroid: Vec<Rational> = (0..2)
        .map(|i| verts.iter().map(|v| &v[i]).sum::<Rational>() / rat_int(n as i64))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let da = [&verts[a][0] - &centroid[0], &verts[a][1] - &centroid[1]];
        let db = [&verts[b][0] - &centroid[0], &verts[b][1] - &centroid[1]];
        angular_cmp(&da, &db)
    });
    let mut out = Vec::new();
    for i in 1..n - 1 {
        out.push(vec![
            verts[order[0]].clone(),
            verts[order[i]].clone(),
            verts[order[i + 1]].clone(),
        ]);
    }
    out
}

/// Exact counterclockwise comparison of two nonzero planar directions.
fn angular_cmp(a: &[Rational; 2], b: &[Rational; 2]) -> std::cmp::Ordering {
    let half = |v: &[Rational; 2]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    // positive cross: a before b counterclockwise
    if cross.is_positive() {
        std::cmp::Ordering::Less
    } else if cross.is_negative() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Triangulates a planar convex facet embedded in 3-space: express the
/// vertices in affine coordinates spanned by two edge vectors, fan in those
/// coordinates.
fn facet_triangles(facet: &[Vec<Rational>]) -> Result<Vec<Vec<Vec<Rational>>>, RegionError> {
    let p0 = &facet[0];
    let u1: Vec<Rational> = facet[1].iter().zip(p0).map(|(a, b)| a - b).collect();
    let mut u2 = None;
    for p in &facet[2..] {
        let v: Vec<Rational> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
        if !parallel(&u1, &v) {
            u2 = Some(v);
            break;
        }
    }
    let u2 = u2.ok_or_else(|| {
        RegionError::ExactShapeViolation("degenerate facet: all vertices collinear".into())
    })?;
    // coordinates (a, b) with p - p0 = a u1 + b u2, via the Gram system
    let g = vec![
        vec![dot(&u1, &u1), dot(&u1, &u2)],
        vec![dot(&u2, &u1), dot(&u2, &u2)],
    ];
    let mut planar: Vec<Vec<Rational>> = Vec::with_capacity(facet.len());
    for p in facet {
        let v: Vec<Rational> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
        let rhs = vec![dot(&u1, &v), dot(&u2, &v)];
        let coords = solve_square(&g, &rhs).ok_or_else(|| {
            RegionError::ExactShapeViolation("facet Gram system singular".into())
        })?;
        planar.push(coords);
    }
    let tris2d = fan_polygon(&planar);
    // map planar triangles back through the shared vertex order
    let mut out = Vec::new();
    for tri in tris2d {
        let lift: Vec<Vec<Rational>> = tri
            .iter()
            .map(|c| {
                (0..3)
                    .map(|i| &p0[i] + &c[0] * &u1[i] + &c[1] * &u2[i])
                    .collect()
            })
            .collect();
        out.push(lift);
    }
    Ok(out)
}

fn parallel(a: &[Rational], b: &[Rational]) -> bool {
    // rank of [a; b] is <= 1 iff all 2x2 minors vanish
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` for square `A`; `None` if singular.
fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    m[r][j] = &m[r][j] - &f * &m[col][j];
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rational::zero(),
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for j in col..n {
                    m[r][j] = &m[r][j] - &f * &m[col][j];
                }
            }
        }
    }
    det
}

/// Nonzero vector orthogonal to every row, when the null space has dimension
/// exactly one.
fn null_vector(rows: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for j in 0..dim {
            m[rank][j] = &m[rank][j] / &p;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..dim {
                    m[r][j] = &m[r][j] - &f * &m[rank][j];
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); dim];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -&m[r][free];
    }
    Some(v)
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn simplex_region(d: usize) -> Region {
        let mut r = Region::new(d);
        for i in 0..d {
            r.push(Halfspace::new(unit(d, i), Rational::zero()));
        }
        r.push(Halfspace::new(
            vec![rat_int(-1); d],
            Rational::one(),
        ));
        r
    }

    fn unit(d: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); d];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn simplex_volumes() {
        for d in 1..=3usize {
            let vol = simplex_region(d)
                .integrate(&MPoly::constant(d, Rational::one()))
                .unwrap();
            assert_eq!(vol, Rational::one() / factorial(d as u32));
        }
    }

    #[test]
    fn bitten_square_area() {
        // unit square minus the corner x + y > 3/2: area 1 - 1/8 = 7/8;
        // and the triangle x + y > 3/2 itself has area 1/8
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(unit(2, 1), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(vec![rat_int(0), rat_int(-1)], Rational::one()));
        let mut bitten = r.clone();
        bitten.push(Halfspace::new(vec![rat_int(-1), rat_int(-1)], rat(3, 2)));
        let one = MPoly::constant(2, Rational::one());
        assert_eq!(bitten.integrate(&one).unwrap(), rat(7, 8));
        let mut corner = r;
        corner.push(Halfspace::new(vec![rat_int(1), rat_int(1)], rat(-3, 2)));
        assert_eq!(corner.integrate(&one).unwrap(), rat(1, 8));
    }

    #[test]
    fn cube_moment_in_3d() {
        let mut r = Region::new(3);
        for i in 0..3 {
            r.push(Halfspace::new(unit(3, i), Rational::zero()));
            let mut neg = vec![Rational::zero(); 3];
            neg[i] = rat_int(-1);
            r.push(Halfspace::new(neg, Rational::one()));
        }
        // int_{[0,1]^3} xyz = 1/8
        let xyz = MPoly::var(3, 0)
            .mul(&MPoly::var(3, 1))
            .mul(&MPoly::var(3, 2));
        assert_eq!(r.integrate(&xyz).unwrap(), rat(1, 8));
    }

    #[test]
    fn empty_and_unbounded() {
        let mut empty = Region::new(2);
        empty.push(Halfspace::new(unit(2, 0), rat_int(-1))); // x >= 1
        empty.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::zero())); // x <= 0
        empty.push(Halfspace::new(unit(2, 1), Rational::zero()));
        empty.push(Halfspace::new(vec![rat_int(0), rat_int(-1)], Rational::one()));
        assert!(empty.vertices().unwrap().is_empty());

        let mut unbounded = Region::new(2);
        unbounded.push(Halfspace::new(unit(2, 0), Rational::zero()));
        unbounded.push(Halfspace::new(unit(2, 1), Rational::zero()));
        unbounded.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        assert!(matches!(
            unbounded.vertices(),
            Err(RegionError::UnboundedSlice)
        ));
    }

    #[test]
    fn breakpoints_of_band_region() {
        // {0 < t < 1, 1 < t + y < 4} in variables (t, y): vertex y-coordinates
        // are {0, 1, 3, 4}
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(vec![rat_int(1), rat_int(1)], rat_int(-1)));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(-1)], rat_int(4)));
        let bps = breakpoints(&r, 1).unwrap();
        assert_eq!(bps, vec![rat_int(0), rat_int(1), rat_int(3), rat_int(4)]);
    }

    #[test]
    fn panel_polynomials_of_band() {
        // same band with integrand t: G(y) = int over slice in t.
        // For y in (0,1): t in (1-y, 1), G = (1 - (1-y)^2)/2 = y - y^2/2.
        // For y in (1,3): t in (0,1), G = 1/2.
        // For y in (3,4): t in (0, 4-y), G = (4-y)^2/2.
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(vec![rat_int(1), rat_int(1)], rat_int(-1)));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(-1)], rat_int(4)));
        let panels = panel_polynomials(&r, 1, &MPoly::var(2, 0)).unwrap();
        assert_eq!(panels.len(), 3);
        assert_eq!(
            panels[0].g,
            Poly::new(vec![rat_int(0), rat_int(1), rat(-1, 2)], Basis::Monomial)
        );
        assert_eq!(panels[1].g, Poly::constant(rat(1, 2)));
        assert_eq!(
            panels[2].g,
            Poly::new(vec![rat_int(8), rat_int(-4), rat(1, 2)], Basis::Monomial)
        );
    }

    #[test]
    fn kernel_integral_band_matches_hand_value() {
        // D2 u D3 u D4 piece at k = 2, theta = 1/2: region {0 < t < 1,
        // 1 < t + y < 2}, integrand t, kernel (1 - y/2)/y; value 2 ln 2 - 3/4
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(vec![rat_int(1), rat_int(1)], rat_int(-1)));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(-1)], rat_int(2)));
        let got = kernel_integral_exact(&r, 1, &MPoly::var(2, 0), &rat(1, 2)).unwrap();
        let mut expect = LogValue::from_rational(rat(-3, 4));
        expect.add_log_term(&rat(2, 1), &rat(2, 1)).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn kernel_divergence_detected() {
        // slice integral with g(0) != 0: y in (0,1), t in (0,1), integrand 1
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(unit(2, 1), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(0), rat_int(-1)], Rational::one()));
        let got = kernel_integral_exact(&r, 1, &MPoly::constant(2, Rational::one()), &rat(1, 2));
        assert!(matches!(got, Err(RegionError::Divergent)));
    }

    #[test]
    fn quadrature_agrees_with_exact() {
        let mut r = Region::new(2);
        r.push(Halfspace::new(unit(2, 0), Rational::zero()));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
        r.push(Halfspace::new(vec![rat_int(1), rat_int(1)], rat_int(-1)));
        r.push(Halfspace::new(vec![rat_int(-1), rat_int(-1)], rat_int(2)));
        let w = rat(1, 2);
        let integrand = MPoly::var(2, 0);
        let exact = kernel_integral_exact(&r, 1, &integrand, &w).unwrap();
        let (ev, _) = exact.to_f64_default();
        let (qv, qe) = kernel_integral_quadrature(&r, 1, &integrand, &w, 1e-9).unwrap();
        assert!((ev - qv).abs() < 1e-9 + qe);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn integral_additive_under_split(c_num in 1i64..7) {
            // split the unit square at x = c and compare against the whole
            let c = rat(c_num, 8);
            let mut square = Region::new(2);
            square.push(Halfspace::new(unit(2, 0), Rational::zero()));
            square.push(Halfspace::new(unit(2, 1), Rational::zero()));
            square.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], Rational::one()));
            square.push(Halfspace::new(vec![rat_int(0), rat_int(-1)], Rational::one()));
            let p = MPoly::var(2, 0).pow(2).add(&MPoly::var(2, 1));
            let mut left = square.clone();
            left.push(Halfspace::new(vec![rat_int(-1), rat_int(0)], c.clone()));
            let mut right = square.clone();
            right.push(Halfspace::new(vec![rat_int(1), rat_int(0)], -c.clone()));
            let whole = square.integrate(&p).unwrap();
            let split = left.integrate(&p).unwrap() + right.integrate(&p).unwrap();
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn scaled_simplex_volume(lam_num in 1i64..9, d in 1usize..4) {
            // {x_i > 0, sum x_i < lambda} has volume lambda^d / d!
            let lam = rat(lam_num, 2);
            let mut r = Region::new(d);
            for i in 0..d {
                r.push(Halfspace::new(unit(d, i), Rational::zero()));
            }
            r.push(Halfspace::new(vec![rat_int(-1); d], lam.clone()));
            let vol = r.integrate(&MPoly::constant(d, Rational::one())).unwrap();
            let mut expect = Rational::one();
            for _ in 0..d {
                expect *= &lam;
            }
            prop_assert_eq!(vol, expect / factorial(d as u32));
        }
    }
}
