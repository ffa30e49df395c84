//! Cut-and-project schemes: slope, window parallelotope, projections and lifts.
//!
//! Physical space E is the graph of `x -> alpha x` in `R^k = R^d x R^(k-d)`, the
//! internal space F is `{0} x R^(k-d)`, and the window is `B [0,1)^(k-d)` where
//! the columns of the integer matrix `B` are the window generators. Internal
//! points are expressed in B-coordinates, so the window is the unit cube.

mod config;
mod omega;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use config::{F0Config, SchemeConfig, WindowConfig};
pub use omega::{box_points, Halfspace, HalfspaceConfig, Omega, OmegaConfig};

use crate::error::{Error, Result};
use crate::exactnum::linalg::{nullspace, rational_det, rational_inverse, surd_inverse};
use crate::exactnum::{find_relation, rational_combination, Guard, Real, ScalarMode, Surd};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Along F0 onto E.
    Pi1,
    /// Along F onto E (the first d coordinates).
    Pi2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F0Kind {
    Orthogonal,
    Internal,
    Custom,
}

#[derive(Clone, Debug)]
pub struct Scheme {
    config: SchemeConfig,
    k: usize,
    d: usize,
    alpha: Vec<Vec<Surd>>,
    alpha_real: Vec<Vec<Real>>,
    shift: Vec<Surd>,
    b: Vec<Vec<i64>>,
    b_inv: Vec<Vec<BigRational>>,
    index: u64,
    denominators: Vec<u64>,
    beta: Vec<Vec<Surd>>,
    shift_internal: Vec<Surd>,
    proj: Vec<Vec<Surd>>,
    spread_matrix: Vec<Vec<Surd>>,
    spread: Surd,
    coset_reps: Vec<Vec<i64>>,
    coset_internal: Vec<Vec<BigRational>>,
    guard: Guard,
    f0: F0Kind,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Parses and converts the config numbers into working scalars.
pub fn working_values(reals: &[Real], mode: &ScalarMode) -> Result<Vec<Surd>> {
    match mode {
        ScalarMode::ExactQuadratic => {
            let surds: Vec<Surd> = reals.iter().map(|r| r.to_surd()).collect::<Result<_>>()?;
            let mut field = 0;
            for s in &surds {
                match (field, s.field()) {
                    (_, 0) => {}
                    (0, f) => field = f,
                    (a, f) if a != f => return Err(Error::MixedFields(a, f)),
                    _ => {}
                }
            }
            Ok(surds)
        }
        ScalarMode::RationalSurrogate { precision_bits, .. } => {
            Ok(reals.iter().map(|r| Surd::from_rational(&r.approx(*precision_bits))).collect())
        }
    }
}

impl Scheme {
    pub fn build(config: &SchemeConfig) -> Result<Scheme> {
        let (k, d) = (config.k, config.d);
        if d == 0 || d >= k {
            return Err(Error::config("need 1 <= d < k"));
        }
        let n = k - d;
        if config.alpha.len() != n || config.alpha.iter().any(|row| row.len() != d) {
            return Err(Error::config(format!("alpha must be a {n} x {d} matrix")));
        }
        if config.shift.len() != k {
            return Err(Error::config(format!("shift must have {k} entries")));
        }
        let gens = &config.window.generators;
        if gens.len() != n || gens.iter().any(|g| g.len() != n) {
            return Err(Error::config(format!("window needs {n} generators of length {n}")));
        }
        let generator = match &config.generator {
            Some(g) => {
                g.validate()?;
                Some(Arc::new(g.clone()))
            }
            None => None,
        };
        let guard = config.scalar_mode.guard()?;
        let parse = |s: &String| Real::parse(s, generator.as_ref());
        let alpha_real: Vec<Vec<Real>> =
            config.alpha.iter().map(|row| row.iter().map(parse).collect::<Result<_>>()).collect::<Result<_>>()?;
        let shift_real: Vec<Real> = config.shift.iter().map(parse).collect::<Result<_>>()?;

        let flat: Vec<Real> = alpha_real.iter().flatten().cloned().collect();
        if let Some(rel) = find_relation(&flat) {
            return Err(Error::NotTotallyIrrational { relation: strings(&rel) });
        }

        let mut all = flat.clone();
        all.extend(shift_real.iter().cloned());
        let values = working_values(&all, &config.scalar_mode)?;
        let alpha: Vec<Vec<Surd>> = values[..n * d].chunks(d).map(|c| c.to_vec()).collect();
        let shift = values[n * d..].to_vec();

        // B has the generators as columns
        let b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| gens[j][i]).collect()).collect();
        let b_rat: Vec<Vec<BigRational>> =
            b.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let det = rational_det(&b_rat);
        if det.is_zero() {
            return Err(Error::DegenerateWindow);
        }
        let index = det.abs().to_integer().to_u64().ok_or_else(|| Error::config("window too large"))?;
        let b_inv = rational_inverse(&b_rat).ok_or(Error::DegenerateWindow)?;
        let denominators = b_inv
            .iter()
            .map(|row| {
                // the group generated by the row entries and 1 is (g/l) Z
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                let g = row.iter().fold(l.clone(), |acc, q| acc.gcd(&(q.numer() * (&l / q.denom()))));
                (l / g).to_u64().expect("denominator fits u64")
            })
            .collect();

        let beta: Vec<Vec<Surd>> = (0..n)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..n).fold(Ok(Surd::zero()), |acc: Result<Surd>, l| {
                            acc?.checked_add(&alpha[l][j].mul_rational(&b_inv[i][l]))
                        })
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let mut shift_internal = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Surd::zero();
            for l in 0..n {
                acc = acc.checked_add(&shift[d + l].mul_rational(&b_inv[i][l]))?;
            }
            for j in 0..d {
                acc = acc.checked_sub(&beta[i][j].checked_mul(&shift[j])?)?;
            }
            shift_internal.push(acc);
        }

        let (f0, f0_cols) = Self::f0_columns(config, &alpha, &generator)?;
        if f0 == F0Kind::Orthogonal {
            let columns: Vec<Vec<Real>> = (0..d).map(|j| (0..n).map(|i| alpha_real[i][j].clone()).collect()).collect();
            if let Some(v) = rational_combination(&columns) {
                let mut witness = vec!["*".to_string(); d];
                witness.extend(strings(&v));
                return Err(Error::BadF0 { witness });
            }
        }
        let mut m = vec![vec![Surd::zero(); k]; k];
        for j in 0..d {
            m[j][j] = Surd::one();
            for i in 0..n {
                m[d + i][j] = alpha[i][j].clone();
            }
        }
        for (c, col) in f0_cols.iter().enumerate() {
            for r in 0..k {
                m[r][d + c] = col[r].clone();
            }
        }
        let m_inv = surd_inverse(&m)?;
        let proj: Vec<Vec<Surd>> = m_inv[..d].to_vec();
        if f0 == F0Kind::Custom {
            Self::check_custom_f0(&proj, k)?;
        }
        let spread_matrix: Vec<Vec<Surd>> = (0..d)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        (0..n).fold(Ok(Surd::zero()), |acc: Result<Surd>, l| {
                            acc?.checked_add(&proj[r][d + l].mul_int(b[l][c]))
                        })
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let mut spread = Surd::zero();
        for row in &spread_matrix {
            let mut s = Surd::zero();
            for v in row {
                s = s.checked_add(&v.abs())?;
            }
            if s.try_cmp(&spread)?.is_gt() {
                spread = s;
            }
        }

        let (coset_reps, coset_internal) = Self::cosets(&b, &b_inv);
        if coset_reps.len() as u64 != index {
            return Err(Error::config("internal error: coset count differs from |det B|"));
        }
        Ok(Scheme {
            config: config.clone(),
            k,
            d,
            alpha,
            alpha_real,
            shift,
            b,
            b_inv,
            index,
            denominators,
            beta,
            shift_internal,
            proj,
            spread_matrix,
            spread,
            coset_reps,
            coset_internal,
            guard,
            f0,
        })
    }

    fn f0_columns(
        config: &SchemeConfig,
        alpha: &[Vec<Surd>],
        generator: &Option<Arc<crate::exactnum::CubicGenerator>>,
    ) -> Result<(F0Kind, Vec<Vec<Surd>>)> {
        let (k, d) = (config.k, config.d);
        let n = k - d;
        let unit_internal = |i: usize, first: Vec<Surd>| -> Vec<Surd> {
            let mut v = first;
            v.extend((0..n).map(|l| if l == i { Surd::one() } else { Surd::zero() }));
            v
        };
        match &config.f0 {
            F0Config::Named(s) if s == "orthogonal" => Ok((
                F0Kind::Orthogonal,
                (0..n).map(|i| unit_internal(i, alpha[i].iter().map(|a| -a).collect())).collect(),
            )),
            F0Config::Named(s) if s == "internal" => {
                Ok((F0Kind::Internal, (0..n).map(|i| unit_internal(i, vec![Surd::zero(); d])).collect()))
            }
            F0Config::Named(s) => Err(Error::config(format!("unknown f0 `{s}`"))),
            F0Config::Vectors(rows) => {
                if config.scalar_mode.is_surrogate() {
                    return Err(Error::config("an explicit f0 needs the exact-quadratic scalar mode"));
                }
                if rows.len() != n || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::config(format!("f0 needs {n} vectors of length {k}")));
                }
                let reals: Vec<Real> = rows
                    .iter()
                    .flatten()
                    .map(|s| Real::parse(s, generator.as_ref()))
                    .collect::<Result<_>>()?;
                let mut all: Vec<Real> = reals;
                all.extend(alpha.iter().flatten().map(Real::from_surd));
                let vals = working_values(&all, &ScalarMode::ExactQuadratic)?;
                Ok((F0Kind::Custom, vals[..n * k].chunks(k).map(|c| c.to_vec()).collect()))
            }
        }
    }

    /// An integer point of F0 is a nonzero integer `z` with `P z = 0`.
    fn check_custom_f0(proj: &[Vec<Surd>], k: usize) -> Result<()> {
        let mut rows = Vec::new();
        for row in proj {
            let parts: Vec<(BigRational, BigRational)> = row.iter().map(|s| s.rational_parts()).collect();
            rows.push(parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
            rows.push(parts.iter().map(|p| p.1.clone()).collect::<Vec<_>>());
        }
        if let Some(v) = nullspace(&rows, k).first() {
            let ints = crate::exactnum::linalg::primitive_integer(v);
            return Err(Error::BadF0 { witness: strings(&ints) });
        }
        Ok(())
    }

    /// Integer points of `B [0,1)^n`, one per coset of `B Z^n`, and their B-coordinates.
    fn cosets(b: &[Vec<i64>], b_inv: &[Vec<BigRational>]) -> (Vec<Vec<i64>>, Vec<Vec<BigRational>>) {
        let n = b.len();
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                let lo: i64 = b[i].iter().map(|&x| x.min(0)).sum();
                let hi: i64 = b[i].iter().map(|&x| x.max(0)).sum();
                (lo, hi)
            })
            .collect();
        let mut reps = Vec::new();
        let mut internal = Vec::new();
        for p in box_points(&ranges) {
            let t: Vec<BigRational> = b_inv
                .iter()
                .map(|row| row.iter().zip(&p).map(|(q, &x)| q * BigRational::from_integer(x.into())).sum())
                .collect();
            if t.iter().all(|v| !v.is_negative() && v < &BigRational::one()) {
                reps.push(p);
                internal.push(t);
            }
        }
        (reps, internal)
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Internal dimension `k - d`.
    pub fn codim(&self) -> usize {
        self.k - self.d
    }

    pub fn alpha(&self) -> &[Vec<Surd>] {
        &self.alpha
    }

    pub fn alpha_exact(&self) -> &[Vec<Real>] {
        &self.alpha_real
    }

    pub fn shift(&self) -> &[Surd] {
        &self.shift
    }

    pub fn window_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn window_inverse(&self) -> &[Vec<BigRational>] {
        &self.b_inv
    }

    /// `|det B|`, the number of lifts of every `n_1`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// `m_i` with `(1/m_i) Z` the i-th coordinate group of `B^-1 Z^n`.
    pub fn denominators(&self) -> &[u64] {
        &self.denominators
    }

    /// `B^-1 alpha`.
    pub fn beta(&self) -> &[Vec<Surd>] {
        &self.beta
    }

    /// B-coordinates of `star(s)`.
    pub fn shift_internal(&self) -> &[Surd] {
        &self.shift_internal
    }

    /// Rows of the projection along F0 (a `d x k` matrix).
    pub fn projection_matrix(&self) -> &[Vec<Surd>] {
        &self.proj
    }

    /// `P_F B`: maps B-coordinates of an internal vector to its physical offset.
    pub fn spread_matrix(&self) -> &[Vec<Surd>] {
        &self.spread_matrix
    }

    /// Sup-norm bound on `|pi1(n) - n_1|` for `star(n)` in the open unit cube.
    pub fn spread(&self) -> &Surd {
        &self.spread
    }

    pub fn f0_kind(&self) -> F0Kind {
        self.f0
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    pub fn coset_representatives(&self) -> &[Vec<i64>] {
        &self.coset_reps
    }

    /// `B^-1 c` for each coset representative `c`.
    pub fn coset_internal(&self) -> &[Vec<BigRational>] {
        &self.coset_internal
    }

    /// `-beta n_1` in B-coordinates.
    pub fn slope_offset(&self, n1: &[i64]) -> Vec<Surd> {
        self.beta
            .iter()
            .map(|row| {
                row.iter()
                    .zip(n1)
                    .filter(|(_, &x)| x != 0)
                    .fold(Surd::zero(), |acc, (b, &x)| &acc - &b.mul_int(x))
            })
            .collect()
    }

    /// `B^-1 (n_2 - alpha n_1)`.
    pub fn star(&self, n: &[i64]) -> Vec<Surd> {
        let (n1, n2) = n.split_at(self.d);
        let mut out = self.slope_offset(n1);
        for (i, o) in out.iter_mut().enumerate() {
            let q: BigRational =
                self.b_inv[i].iter().zip(n2).map(|(q, &x)| q * BigRational::from_integer(x.into())).sum();
            *o = o.add_rational(&q);
        }
        out
    }

    pub fn project(&self, n: &[i64], which: Projection) -> Vec<Surd> {
        match which {
            Projection::Pi2 => n[..self.d].iter().map(|&x| Surd::from_int(x)).collect(),
            Projection::Pi1 => self
                .proj
                .iter()
                .map(|row| {
                    row.iter().zip(n).filter(|(_, &x)| x != 0).fold(Surd::zero(), |acc, (p, &x)| &acc + &p.mul_int(x))
                })
                .collect(),
        }
    }

    /// `pi1(n + s)`, the physical position of the point lifted by `n`.
    pub fn physical(&self, n: &[i64]) -> Vec<Surd> {
        let base = self.project(n, Projection::Pi1);
        base.into_iter()
            .zip(&self.proj)
            .map(|(v, row)| row.iter().zip(&self.shift).fold(v, |acc, (p, s)| &acc + &(p * s)))
            .collect()
    }

    /// Physical offset `P_F B t` of an internal vector in B-coordinates.
    pub fn spread_offset(&self, t: &[Surd]) -> Vec<Surd> {
        self.spread_matrix
            .iter()
            .map(|row| row.iter().zip(t).fold(Surd::zero(), |acc, (p, v)| &acc + &(p * v)))
            .collect()
    }

    /// Whether `n + s` lies in the strip.
    pub fn accept(&self, n: &[i64]) -> Result<bool> {
        let z: Vec<Surd> = self.star(n).iter().zip(&self.shift_internal).map(|(a, b)| a + b).collect();
        let zero = Surd::zero();
        let one = Surd::one();
        let mut closed = true;
        let mut boundary = false;
        for v in &z {
            let lo = self.guard.cmp(v, &zero, "strip boundary")?;
            let hi = self.guard.cmp(v, &one, "strip boundary")?;
            if lo.is_lt() || hi.is_gt() {
                closed = false;
            }
            if lo.is_eq() || hi.is_eq() {
                boundary = true;
            }
        }
        if closed && boundary {
            return Err(Error::SingularShift { point: n.to_vec() });
        }
        Ok(closed && z.iter().all(|v| v < &one))
    }

    /// All `n_2` with `star((n_1, n_2)) + w` in `[0,1)^n`, sorted; exactly `index()` of them.
    ///
    /// Each lift carries the first coordinate where it sits exactly on the strip boundary.
    pub fn lifts_flagged(&self, n1: &[i64], w: &[Surd]) -> Result<Vec<(Vec<i64>, Option<usize>)>> {
        let v: Vec<Surd> = self.slope_offset(n1).iter().zip(w).map(|(a, b)| a + b).collect();
        let n = self.codim();
        let mut out = Vec::with_capacity(self.coset_reps.len());
        for (c, t) in self.coset_reps.iter().zip(&self.coset_internal) {
            let mut fl = Vec::with_capacity(n);
            let mut hit = None;
            for i in 0..n {
                let z = v[i].add_rational(&t[i]);
                let f = self.guard.floor(&z, "strip boundary")?;
                if hit.is_none() && z.is_integer() {
                    hit = Some(i);
                }
                fl.push(f.to_i64().expect("lift fits i64"));
            }
            let n2: Vec<i64> =
                (0..n).map(|i| c[i] - (0..n).map(|j| self.b[i][j] * fl[j]).sum::<i64>()).collect();
            out.push((n2, hit));
        }
        out.sort();
        Ok(out)
    }

    /// As [`Scheme::lifts_flagged`], failing through `on_boundary(coordinate, n_2)` on a boundary hit.
    pub fn lifts_at(
        &self,
        n1: &[i64],
        w: &[Surd],
        on_boundary: impl Fn(usize, Vec<i64>) -> Error,
    ) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.coset_reps.len());
        for (n2, hit) in self.lifts_flagged(n1, w)? {
            if let Some(i) = hit {
                return Err(on_boundary(i, n2));
            }
            out.push(n2);
        }
        Ok(out)
    }

    pub fn lifts(&self, n1: &[i64]) -> Result<Vec<Vec<i64>>> {
        self.lifts_at(n1, &self.shift_internal, |_, n2| {
            let mut point = n1.to_vec();
            point.extend(n2);
            Error::SingularShift { point }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn fib() -> Scheme {
        Scheme::build(&SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3")).unwrap()
    }

    #[test]
    fn fibonacci_basics() {
        let s = fib();
        assert_eq!(s.index(), 1);
        assert_eq!(s.denominators(), &[1]);
        assert_eq!(s.star(&[0, 0]), vec![Surd::zero()]);
        assert_eq!(s.star(&[1, 1]), vec![Surd::parse("(3-1*sqrt(5))/2").unwrap()]);
        assert_eq!(s.project(&[0, 7], Projection::Pi2), vec![Surd::zero()]);
        // (1 + a) / (1 + a^2) for the orthogonal complement
        let a = Surd::parse("(-1+1*sqrt(5))/2").unwrap();
        let want = (&Surd::one() + &a) / (&Surd::one() + &(&a * &a));
        assert_eq!(s.project(&[1, 1], Projection::Pi1), vec![want.clone()]);
        assert!((want.to_f64() - 1.1708).abs() < 1e-4);
        assert!(s.accept(&[0, 0]).unwrap());
        assert_eq!(s.lifts(&[0]).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn skew_window() {
        let mut cfg = SchemeConfig::planar("(-1+1*sqrt(5))/2", "0");
        cfg.k = 3;
        cfg.alpha = vec![vec!["(-1+1*sqrt(5))/2".into()], vec!["(1+1*sqrt(5))/4".into()]];
        cfg.shift = vec!["0".into(), "1/3".into(), "1/7".into()];
        cfg.window.generators = vec![vec![1, 1], vec![0, 2]];
        // a single quadratic field always carries a relation among three numbers
        assert!(matches!(Scheme::build(&cfg), Err(Error::NotTotallyIrrational { .. })));
        cfg.scalar_mode = ScalarMode::surrogate(128);
        cfg.alpha[1][0] = "(-1+1*sqrt(2))".into();
        let s = Scheme::build(&cfg).unwrap();
        assert_eq!(s.window_matrix(), &[vec![1, 0], vec![1, 2]]);
        assert_eq!(s.index(), 2);
        assert_eq!(s.denominators(), &[1, 2]);
        assert_eq!(s.window_inverse()[1][0], rat(-1, 2));
        for n1 in -50..=50 {
            let l = s.lifts(&[n1]).unwrap();
            assert_eq!(l.len(), 2);
            for n2 in l {
                assert!(s.accept(&[n1, n2[0], n2[1]]).unwrap());
            }
        }
    }

    #[test]
    fn rational_slope_rejected() {
        let err = Scheme::build(&SchemeConfig::planar("1/2", "1/3")).unwrap_err();
        assert_eq!(err, Error::NotTotallyIrrational { relation: vec!["1".into(), "-2".into()] });
    }

    #[test]
    fn singular_shift_detected() {
        let s = Scheme::build(&SchemeConfig::planar("(-1+1*sqrt(5))/2", "0")).unwrap();
        assert!(matches!(s.lifts(&[0]), Err(Error::SingularShift { .. })));
        assert!(matches!(s.accept(&[0, 0]), Err(Error::SingularShift { .. })));
    }

    #[test]
    fn degenerate_window() {
        let mut cfg = SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3");
        cfg.window.generators = vec![vec![0]];
        assert_eq!(Scheme::build(&cfg).unwrap_err(), Error::DegenerateWindow);
    }

    #[test]
    fn internal_f0_makes_projections_agree() {
        let mut cfg = SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3");
        cfg.f0 = F0Config::Named("internal".into());
        let s = Scheme::build(&cfg).unwrap();
        assert_eq!(s.project(&[3, -4], Projection::Pi1), s.project(&[3, -4], Projection::Pi2));
        assert!(s.spread().is_zero());
    }

    #[test]
    fn custom_f0_meeting_lattice() {
        let mut cfg = SchemeConfig::planar("(-1+1*sqrt(5))/2", "1/3");
        cfg.f0 = F0Config::Vectors(vec![vec!["1".into(), "1".into()]]);
        assert!(matches!(Scheme::build(&cfg), Err(Error::BadF0 { .. })));
        cfg.f0 = F0Config::Vectors(vec![vec!["1".into(), "(0+1*sqrt(5))/1".into()]]);
        Scheme::build(&cfg).unwrap();
    }
}
