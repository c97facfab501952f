//! Finite-dimensional coefficient Lie algebras.
//!
//! A [`GAlgebra`] packages structure constants, a symmetric invariant
//! bilinear form, and (optionally) a finite-dimensional module. All three
//! are validated on construction: antisymmetry and the Jacobi identity for
//! the brackets, invariance `<[x,y],z> = <x,[y,z]>` for the form, and the
//! representation property `M_[x,y] = [M_x, M_y]` for the module.

use crate::scalars::{parse_rat, Rat};
use num_traits::Zero;
use serde::Deserialize;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum AlgebraDefError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("antisymmetry fails at ([u{0}, u{1}], component {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFails(usize, usize, usize),
    #[error("bilinear form is not symmetric at ({0}, {1})")]
    FormNotSymmetric(usize, usize),
    #[error("bilinear form is not invariant on basis triple ({0}, {1}, {2})")]
    FormNotInvariant(usize, usize, usize),
    #[error("module action is not a representation on basis pair ({0}, {1})")]
    NotARepresentation(usize, usize),
    #[error("malformed descriptor: {0}")]
    Descriptor(String),
}

/// A finite-dimensional module given by one matrix per basis element
/// (`mats[i][r][c]` = coefficient of `w_r` in `u_i . w_c`).
#[derive(Debug, Clone, PartialEq)]
pub struct GModule {
    pub dim: usize,
    pub mats: Vec<Vec<Vec<Rat>>>,
}

impl GModule {
    /// Apply `u_i` to the module basis vector `w_c`, returning the column.
    pub fn act(&self, i: usize, c: usize) -> Vec<(usize, Rat)> {
        (0..self.dim)
            .filter_map(|r| {
                let v = &self.mats[i][r][c];
                (!v.is_zero()).then(|| (r, v.clone()))
            })
            .collect()
    }
}

/// Structure constants, invariant form, and optional module.
#[derive(Debug, Clone, PartialEq)]
pub struct GAlgebra {
    pub name: String,
    pub dim: usize,
    /// `c[i][j][k]` = coefficient of `u_k` in `[u_i, u_j]`.
    pub c: Vec<Vec<Vec<Rat>>>,
    /// Symmetric invariant form `gram[i][j] = <u_i, u_j>`.
    pub gram: Vec<Vec<Rat>>,
    pub module: Option<GModule>,
}

impl GAlgebra {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        c: Vec<Vec<Vec<Rat>>>,
        gram: Vec<Vec<Rat>>,
        module: Option<GModule>,
    ) -> Result<Arc<Self>, AlgebraDefError> {
        let g = GAlgebra { name: name.into(), dim, c, gram, module };
        g.validate()?;
        Ok(Arc::new(g))
    }

    /// `[u_i, u_j]` as a sparse list of `(k, coeff)`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        (0..self.dim)
            .filter_map(|k| {
                let v = &self.c[i][j][k];
                (!v.is_zero()).then(|| (k, v.clone()))
            })
            .collect()
    }

    pub fn pairing(&self, i: usize, j: usize) -> Rat {
        self.gram[i][j].clone()
    }

    fn validate(&self) -> Result<(), AlgebraDefError> {
        let n = self.dim;
        if n == 0 {
            return Err(AlgebraDefError::ZeroDimension);
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        return Err(AlgebraDefError::NotAntisymmetric(i, j, k));
                    }
                }
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(AlgebraDefError::FormNotSymmetric(i, j));
                }
            }
        }
        // Jacobi: [u_i,[u_j,u_k]] + [u_j,[u_k,u_i]] + [u_k,[u_i,u_j]] = 0.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = vec![Rat::zero(); n];
                    for (a, b, c3) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for m in 0..n {
                            let inner = &self.c[b][c3][m];
                            if inner.is_zero() {
                                continue;
                            }
                            for t in 0..n {
                                acc[t] += inner * &self.c[a][m][t];
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Err(AlgebraDefError::JacobiFails(i, j, k));
                    }
                }
            }
        }
        // Invariance: <[u_i,u_j], u_k> = <u_i, [u_j,u_k]>.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut lhs = Rat::zero();
                    let mut rhs = Rat::zero();
                    for m in 0..n {
                        lhs += &self.c[i][j][m] * &self.gram[m][k];
                        rhs += &self.c[j][k][m] * &self.gram[i][m];
                    }
                    if lhs != rhs {
                        return Err(AlgebraDefError::FormNotInvariant(i, j, k));
                    }
                }
            }
        }
        if let Some(m) = &self.module {
            let d = m.dim;
            for i in 0..n {
                if m.mats[i].len() != d || m.mats[i].iter().any(|row| row.len() != d) {
                    return Err(AlgebraDefError::Descriptor(
                        "module matrix shape mismatch".into(),
                    ));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    // [M_i, M_j] - M_{[u_i, u_j]} = 0
                    for r in 0..d {
                        for s in 0..d {
                            let mut v = Rat::zero();
                            for t in 0..d {
                                v += &m.mats[i][r][t] * &m.mats[j][t][s];
                                v -= &m.mats[j][r][t] * &m.mats[i][t][s];
                            }
                            for k in 0..n {
                                v -= &self.c[i][j][k] * &m.mats[k][r][s];
                            }
                            if !v.is_zero() {
                                return Err(AlgebraDefError::NotARepresentation(i, j));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One-dimensional abelian algebra with `<u,u> = 1` and the trivial
    /// one-dimensional module.
    pub fn abelian() -> Arc<Self> {
        let one = || Rat::from_integer(1.into());
        GAlgebra::new(
            "abelian",
            1,
            vec![vec![vec![Rat::zero()]]],
            vec![vec![one()]],
            Some(GModule { dim: 1, mats: vec![vec![vec![Rat::zero()]]] }),
        )
        .expect("builtin abelian algebra is valid")
    }

    /// `sl2` with basis `(e, f, h)`, the trace form of the natural
    /// representation, and the natural two-dimensional module.
    pub fn sl2() -> Arc<Self> {
        let r = |n: i64| Rat::from_integer(n.into());
        let mut c = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        // [e,f] = h, [h,e] = 2e, [h,f] = -2f
        c[0][1][2] = r(1);
        c[1][0][2] = r(-1);
        c[2][0][0] = r(2);
        c[0][2][0] = r(-2);
        c[2][1][1] = r(-2);
        c[1][2][1] = r(2);
        let gram = vec![
            vec![r(0), r(1), r(0)],
            vec![r(1), r(0), r(0)],
            vec![r(0), r(0), r(2)],
        ];
        // natural module on (w0, w1): e.w1 = w0, f.w0 = w1, h.w0 = w0, h.w1 = -w1
        let mats = vec![
            vec![vec![r(0), r(1)], vec![r(0), r(0)]],
            vec![vec![r(0), r(0)], vec![r(1), r(0)]],
            vec![vec![r(1), r(0)], vec![r(0), r(-1)]],
        ];
        GAlgebra::new("sl2", 3, c, gram, Some(GModule { dim: 2, mats }))
            .expect("builtin sl2 algebra is valid")
    }

    /// Load a descriptor by name (`abelian`, `sl2`) or from a TOML file path.
    pub fn load(spec: &str) -> Result<Arc<Self>, AlgebraDefError> {
        match spec {
            "abelian" => Ok(Self::abelian()),
            "sl2" => Ok(Self::sl2()),
            path => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    AlgebraDefError::Descriptor(format!("cannot read {path}: {e}"))
                })?;
                Self::from_toml(&text)
            }
        }
    }

    /// Parse a TOML descriptor. Format:
    ///
    /// ```toml
    /// name = "my-algebra"        # optional
    /// dimension = 3
    /// # [u_i, u_j] entries: [i, j, k, "coeff"]; the (j, i) mirror is implied.
    /// brackets = [[0, 1, 2, "1"], [2, 0, 0, "2"], [2, 1, 1, "-2"]]
    /// gram = [["0","1","0"], ["1","0","0"], ["0","0","2"]]
    ///
    /// [module]                   # optional
    /// dimension = 2
    /// # u_i acts by the matrix with entry [i, row, col, "coeff"]
    /// action = [[0, 0, 1, "1"], [1, 1, 0, "1"], [2, 0, 0, "1"], [2, 1, 1, "-1"]]
    /// ```
    pub fn from_toml(text: &str) -> Result<Arc<Self>, AlgebraDefError> {
        #[derive(Deserialize)]
        struct ModuleDoc {
            dimension: usize,
            action: Vec<(usize, usize, usize, String)>,
        }
        #[derive(Deserialize)]
        struct Doc {
            name: Option<String>,
            dimension: usize,
            brackets: Vec<(usize, usize, usize, String)>,
            gram: Vec<Vec<String>>,
            module: Option<ModuleDoc>,
        }
        let doc: Doc =
            toml::from_str(text).map_err(|e| AlgebraDefError::Descriptor(e.to_string()))?;
        let n = doc.dimension;
        if n == 0 {
            return Err(AlgebraDefError::ZeroDimension);
        }
        let idx = |i: usize| -> Result<usize, AlgebraDefError> {
            if i < n {
                Ok(i)
            } else {
                Err(AlgebraDefError::IndexOutOfRange(i, n))
            }
        };
        let mut c = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (i, j, k, lit) in &doc.brackets {
            let (i, j, k) = (idx(*i)?, idx(*j)?, idx(*k)?);
            let v = parse_rat(lit)
                .map_err(|e| AlgebraDefError::Descriptor(format!("bracket coeff: {e}")))?;
            c[i][j][k] += &v;
            c[j][i][k] -= &v;
        }
        if doc.gram.len() != n || doc.gram.iter().any(|row| row.len() != n) {
            return Err(AlgebraDefError::Descriptor(format!(
                "gram matrix must be {n} x {n}"
            )));
        }
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for (i, row) in doc.gram.iter().enumerate() {
            for (j, lit) in row.iter().enumerate() {
                gram[i][j] = parse_rat(lit)
                    .map_err(|e| AlgebraDefError::Descriptor(format!("gram entry: {e}")))?;
            }
        }
        let module = match doc.module {
            None => None,
            Some(m) => {
                let d = m.dimension;
                if d == 0 {
                    return Err(AlgebraDefError::Descriptor("module dimension 0".into()));
                }
                let mut mats = vec![vec![vec![Rat::zero(); d]; d]; n];
                for (i, r0, c0, lit) in &m.action {
                    let i = idx(*i)?;
                    if *r0 >= d || *c0 >= d {
                        return Err(AlgebraDefError::IndexOutOfRange(r0.max(c0) * 1, d));
                    }
                    mats[i][*r0][*c0] = parse_rat(lit)
                        .map_err(|e| AlgebraDefError::Descriptor(format!("action entry: {e}")))?;
                }
                Some(GModule { dim: d, mats })
            }
        };
        GAlgebra::new(doc.name.unwrap_or_else(|| "custom".into()), n, c, gram, module)
    }
}

impl fmt::Display for GAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat_int;

    #[test]
    fn builtins_validate() {
        let a = GAlgebra::abelian();
        assert_eq!(a.dim, 1);
        let s = GAlgebra::sl2();
        assert_eq!(s.bracket(0, 1), vec![(2, rat_int(1))]);
        assert_eq!(s.pairing(0, 1), rat_int(1));
        assert_eq!(s.pairing(2, 2), rat_int(2));
        // natural module: e.w1 = w0
        let m = s.module.as_ref().unwrap();
        assert_eq!(m.act(0, 1), vec![(0, rat_int(1))]);
    }

    #[test]
    fn toml_round_trip_matches_builtin() {
        let text = r#"
            name = "sl2-copy"
            dimension = 3
            brackets = [[0, 1, 2, "1"], [2, 0, 0, "2"], [2, 1, 1, "-2"]]
            gram = [["0","1","0"], ["1","0","0"], ["0","0","2"]]

            [module]
            dimension = 2
            action = [[0, 0, 1, "1"], [1, 1, 0, "1"], [2, 0, 0, "1"], [2, 1, 1, "-1"]]
        "#;
        let g = GAlgebra::from_toml(text).unwrap();
        let s = GAlgebra::sl2();
        assert_eq!(g.c, s.c);
        assert_eq!(g.gram, s.gram);
        assert_eq!(g.module, s.module);
    }

    #[test]
    fn bad_descriptors_are_rejected() {
        // breaks Jacobi: [e,f] = e together with [h,e] = 2e, [h,f] = -2f
        let text = r#"
            dimension = 3
            brackets = [[0, 1, 0, "1"], [2, 0, 0, "2"], [2, 1, 1, "-2"]]
            gram = [["0","1","0"], ["1","0","0"], ["0","0","2"]]
        "#;
        assert!(matches!(
            GAlgebra::from_toml(text).unwrap_err(),
            AlgebraDefError::JacobiFails(..)
        ));
        // non-invariant form on sl2
        let text2 = r#"
            dimension = 3
            brackets = [[0, 1, 2, "1"], [2, 0, 0, "2"], [2, 1, 1, "-2"]]
            gram = [["1","0","0"], ["0","1","0"], ["0","0","1"]]
        "#;
        assert!(matches!(
            GAlgebra::from_toml(text2).unwrap_err(),
            AlgebraDefError::FormNotInvariant(..)
        ));
        // non-representation module on the abelian algebra
        let text3 = r#"
            dimension = 1
            brackets = []
            gram = [["1"]]
            [module]
            dimension = 2
            action = [[0, 0, 1, "1"], [0, 1, 0, "1"]]
        "#;
        // [M0, M0] = 0 holds for any single matrix, so this one validates:
        assert!(GAlgebra::from_toml(text3).is_ok());
    }
}
