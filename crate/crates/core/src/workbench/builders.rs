//! Deterministic constructions of explicit rational tuples.
//!
//! The 2x2 builder fixes the first matrix in canonical form, makes the
//! middle ones upper-triangular with one free entry, and solves the trace
//! condition for the last two. Candidates are enumerated in a fixed order
//! of small rationals so that every run yields the same matrices.

use crate::error::{Error, Result};
use crate::exact_linalg::{matrix_of_linear_map, q, qi, EchelonBasis, RatMatrix, Rational};
use crate::jnf::Jnf;
use crate::spectra::Mode;
use crate::tuple_lab::{self, verify_closure, MatrixTuple};

/// Conjugacy class of a 2x2 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class2 {
    Distinct(Rational, Rational),
    /// A single Jordan block.
    Jordan(Rational),
    Scalar(Rational),
}

impl Class2 {
    fn eigenvalues(&self) -> Vec<Rational> {
        match self {
            Class2::Distinct(a, b) => vec![a.clone(), b.clone()],
            Class2::Jordan(a) | Class2::Scalar(a) => vec![a.clone(), a.clone()],
        }
    }

    fn trace(&self) -> Rational {
        self.eigenvalues().iter().sum()
    }

    fn det(&self) -> Rational {
        self.eigenvalues().iter().product()
    }

    pub fn jnf(&self) -> Jnf {
        let blocks = match self {
            Class2::Distinct(a, b) => vec![(a.to_string(), vec![1]), (b.to_string(), vec![1])],
            Class2::Jordan(a) => vec![(a.to_string(), vec![2])],
            Class2::Scalar(a) => vec![(a.to_string(), vec![1, 1])],
        };
        Jnf::from_blocks(blocks).expect("valid 2x2 class")
    }

    fn canonical(&self) -> RatMatrix {
        match self {
            Class2::Distinct(a, b) => RatMatrix::diag(&[a.clone(), b.clone()]),
            Class2::Jordan(a) => RatMatrix::from_rows(vec![vec![a.clone(), qi(1)], vec![qi(0), a.clone()]])
                .expect("2x2"),
            Class2::Scalar(a) => RatMatrix::scalar(2, a.clone()),
        }
    }

    /// Upper-triangular representative with off-diagonal entry `s`.
    fn triangular(&self, s: &Rational) -> RatMatrix {
        let (a, b) = match self {
            Class2::Distinct(a, b) => (a.clone(), b.clone()),
            Class2::Jordan(a) | Class2::Scalar(a) => (a.clone(), a.clone()),
        };
        RatMatrix::from_rows(vec![vec![a, s.clone()], vec![qi(0), b]]).expect("2x2")
    }
}

/// Nonzero rationals `p/q` ordered by `max(|p|, q)`, then `q`, then `|p|`,
/// positive before negative.
pub fn small_rationals(height: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for h in 1..=height {
        for den in 1..=h {
            for num in 1..=h {
                if num.max(den) != h || num::integer::gcd(num, den) != 1 {
                    continue;
                }
                out.push(q(num, den));
                out.push(q(-num, den));
            }
        }
    }
    out
}

const SEARCH_HEIGHT: i64 = 6;

/// Solves `trace(a x) = tau` for `x` in `class`, enumerating the free entry.
/// `a` must be upper-triangular.
fn last_but_one_candidates(class: &Class2, a: &RatMatrix, tau: &Rational) -> Vec<RatMatrix> {
    let t = class.trace();
    let delta = class.det();
    let (a11, a12, a22) = (&a[(0, 0)], &a[(0, 1)], &a[(1, 1)]);
    let rhs = tau - &(a22 * &t);
    let mut pairs = Vec::new();
    if a11 != a22 {
        // (a11 - a22) x + a12 z = rhs
        for z in small_rationals(SEARCH_HEIGHT) {
            let x = (&rhs - &(a12 * &z)) / (a11 - a22);
            pairs.push((x, z));
        }
    } else if !a12.is_zero() {
        let z = &rhs / a12;
        if !z.is_zero() {
            for x in small_rationals(SEARCH_HEIGHT).into_iter().chain([qi(0)]) {
                pairs.push((x, z.clone()));
            }
        }
    } else if rhs.is_zero() {
        for z in small_rationals(SEARCH_HEIGHT) {
            for x in small_rationals(3) {
                pairs.push((x, z.clone()));
            }
        }
    }
    pairs
        .into_iter()
        .map(|(x, z)| {
            let w = &t - &x;
            let y = (&(&x * &w) - &delta) / &z;
            RatMatrix::from_rows(vec![vec![x, y], vec![z, w]]).expect("2x2")
        })
        .collect()
}

/// Irreducible 2x2 tuples in the given classes with product `I`, in a fixed
/// enumeration order. Scalar classes are factored out of the search.
pub fn solutions_2x2(classes: &[Class2]) -> impl Iterator<Item = MatrixTuple> + '_ {
    let scalar_product: Rational = classes
        .iter()
        .filter_map(|c| match c {
            Class2::Scalar(a) => Some(a.clone()),
            _ => None,
        })
        .product();
    let active: Vec<usize> = (0..classes.len()).filter(|&j| !matches!(classes[j], Class2::Scalar(_))).collect();
    let eigenvalues: Vec<Vec<Rational>> = classes.iter().map(Class2::eigenvalues).collect();
    // product of the active matrices must be c I
    let c = scalar_product.recip().unwrap_or_else(Rational::zero);
    let k = active.len();
    let middle_params: Vec<Vec<Rational>> = if k >= 4 {
        let grid = small_rationals(SEARCH_HEIGHT);
        let mut combos = vec![vec![]];
        for _ in 2..k - 1 {
            combos = combos
                .into_iter()
                .flat_map(|prefix: Vec<Rational>| {
                    grid.iter().map(move |s| {
                        let mut p = prefix.clone();
                        p.push(s.clone());
                        p
                    })
                })
                .collect();
        }
        combos
    } else {
        vec![vec![]]
    };
    middle_params.into_iter().flat_map(move |params| {
        let mut found = Vec::new();
        if k < 3 || c.is_zero() {
            return found;
        }
        let mut a = classes[active[0]].canonical();
        for (idx, s) in params.iter().enumerate() {
            a = a.matmul(&classes[active[idx + 1]].triangular(s)).expect("2x2");
        }
        let last = &classes[active[k - 1]];
        let Some(inv_last) = last.det().recip() else { return found };
        // eigenvalues of a x_{k-1} are c / (eigenvalues of the last class)
        let tau = &c * &(&last.trace() * &inv_last);
        for x in last_but_one_candidates(&classes[active[k - 2]], &a, &tau) {
            let Ok(ax) = a.matmul(&x) else { continue };
            let Ok(inv) = ax.inverse() else { continue };
            let x_last = inv.scale(&c);
            let mut active_mats = vec![classes[active[0]].canonical()];
            for (idx, s) in params.iter().enumerate() {
                active_mats.push(classes[active[idx + 1]].triangular(s));
            }
            active_mats.push(x);
            active_mats.push(x_last);
            let mut it = active_mats.into_iter();
            let matrices: Vec<RatMatrix> = classes
                .iter()
                .map(|cl| match cl {
                    Class2::Scalar(v) => RatMatrix::scalar(2, v.clone()),
                    _ => it.next().expect("one per active class"),
                })
                .collect();
            let Ok(t) = MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues.clone()) else { continue };
            if accept(&t, classes) {
                found.push(t);
            }
        }
        found
    })
}

fn accept(t: &MatrixTuple, classes: &[Class2]) -> bool {
    verify_closure(t).unwrap_or(false)
        && t.matrices().iter().zip(classes).all(|(m, c)| tuple_lab::class_membership(m, &c.jnf()))
        && tuple_lab::is_irreducible(t)
}

pub fn build_2x2(classes: &[Class2]) -> Result<MatrixTuple> {
    solutions_2x2(classes)
        .next()
        .ok_or_else(|| Error::ConstructionFailed(format!("no rational 2x2 tuple found for {classes:?}")))
}

fn n_classes() -> Vec<Class2> {
    vec![
        Class2::Distinct(qi(2), q(1, 2)),
        Class2::Distinct(qi(3), q(1, 3)),
        Class2::Distinct(qi(5), q(1, 5)),
    ]
}

/// Rigid irreducible triple `N_1, N_2, N_3` with `N_1 N_2 N_3 = -I`.
pub fn build_rigid_triple_n() -> Result<MatrixTuple> {
    let quad = build_n_quadruple()?;
    MatrixTuple::new(
        Mode::Multiplicative,
        quad.matrices()[..3].to_vec(),
        quad.eigenvalues()[..3].to_vec(),
    )
}

/// `(N_1, N_2, N_3, -I)`.
pub fn build_n_quadruple() -> Result<MatrixTuple> {
    let mut classes = n_classes();
    classes.push(Class2::Scalar(qi(-1)));
    build_2x2(&classes)
}

/// Quadruple in the classes of the `N_j` with a Jordan block at `-1` last.
pub fn build_p_quadruple() -> Result<MatrixTuple> {
    let mut classes = n_classes();
    classes.push(Class2::Jordan(qi(-1)));
    build_2x2(&classes)
}

fn with_minus_identity(n: &MatrixTuple) -> Result<MatrixTuple> {
    if n.len() != 3 || n.n() != 2 {
        return Err(Error::InvalidTuple("expected a 2x2 triple".into()));
    }
    let minus = RatMatrix::scalar(2, qi(-1));
    if !RatMatrix::product(n.matrices().iter())?.eq(&minus) {
        return Err(Error::PreconditionViolated("N_1 N_2 N_3 must equal -I".into()));
    }
    let mut matrices = n.matrices().to_vec();
    matrices.push(minus);
    let mut eigenvalues = n.eigenvalues().to_vec();
    eigenvalues.push(vec![qi(-1), qi(-1)]);
    MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues)
}

/// Block upper-triangular quadruple with diagonal blocks `N_j`, upper-right
/// blocks `[N_j, Z_j]` for `j <= 3` and `r4` for the fourth matrix, whose
/// diagonal blocks are `-I`. The `Z_j` solve the upper-right block of the
/// product condition.
pub fn build_w_point(n: &MatrixTuple, r4: &RatMatrix) -> Result<MatrixTuple> {
    if r4.rows() != 2 || r4.cols() != 2 || r4.rank() != 1 || !r4.matmul(r4)?.is_zero() {
        return Err(Error::PreconditionViolated("R_4 must be a nilpotent 2x2 matrix of rank 1".into()));
    }
    let quad = with_minus_identity(n)?;
    let blocks = quad.matrices();
    // upper-right of the product: sum_j N_1..N_{j-1} R_j N_{j+1}..N_4 = 0
    let prefix = |j: usize| RatMatrix::product(blocks[..j].iter().chain([&RatMatrix::identity(2)]));
    let suffix = |j: usize| RatMatrix::product(blocks[j + 1..].iter().chain([&RatMatrix::identity(2)]));
    let map = matrix_of_linear_map(12, |idx| {
        let (j, e) = (idx / 4, idx % 4);
        let z = RatMatrix::unit(2, e / 2, e % 2);
        let r = blocks[j].commutator(&z)?;
        Ok(prefix(j)?.matmul(&r)?.matmul(&suffix(j)?)?.vectorize())
    })?;
    let rhs = prefix(3)?.matmul(r4)?.matmul(&suffix(3)?)?.neg();
    let sol = map
        .solve(&RatMatrix::column(rhs.vectorize())?)?
        .ok_or_else(|| Error::SolveFailed("no Z_j for the given R_4".into()))?;
    let mut matrices = Vec::with_capacity(4);
    for (j, nj) in blocks.iter().enumerate() {
        let upper = if j < 3 {
            let z = RatMatrix::from_vectorized(2, &sol.entries()[4 * j..4 * j + 4])?;
            nj.commutator(&z)?
        } else {
            r4.clone()
        };
        matrices.push(RatMatrix::block2x2(nj, &upper, &RatMatrix::zeros(2, 2), nj)?);
    }
    let eigenvalues = quad.eigenvalues().iter().map(|e| e.iter().chain(e).cloned().collect()).collect();
    let t = MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues)?;
    if !verify_closure(&t)? {
        return Err(Error::Internal("W-point fails the product condition".into()));
    }
    Ok(t)
}

/// `(N_j, -I) ⊕ P_j`.
pub fn build_u_point(n: &MatrixTuple, p: &MatrixTuple) -> Result<MatrixTuple> {
    with_minus_identity(n)?.direct_sum(p)
}

/// `(N_j, -I) ⊕ (N_j, -I)`.
pub fn build_y_point(n: &MatrixTuple) -> Result<MatrixTuple> {
    let quad = with_minus_identity(n)?;
    quad.direct_sum(&quad)
}

pub fn upper_right_r4() -> RatMatrix {
    RatMatrix::unit(2, 0, 1)
}

/// Eigenvalue values for the example with three classes of size 4:
/// `a, b, c, f, g, h, u, v, w` with `abfguv = 1` and `acfhuw = 1`.
pub struct SizeFourValues {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub f: Rational,
    pub g: Rational,
    pub h: Rational,
    pub u: Rational,
    pub v: Rational,
    pub w: Rational,
}

pub fn size_four_values() -> SizeFourValues {
    SizeFourValues {
        a: qi(2),
        b: qi(3),
        c: qi(5),
        f: qi(7),
        g: qi(11),
        h: qi(13),
        u: qi(17),
        v: q(1, 7854),
        w: q(1, 15470),
    }
}

/// Irreducible triple with eigenvalues `(a,b), (f,g), (u,v)`, first matrix `diag(a, b)`.
pub fn build_l_triple() -> Result<MatrixTuple> {
    let s = size_four_values();
    build_2x2(&[
        Class2::Distinct(s.a, s.b),
        Class2::Distinct(s.f, s.g),
        Class2::Distinct(s.u, s.v),
    ])
}

/// Irreducible triple with eigenvalues `(a,c), (f,h), (u,w)`.
pub fn build_b_triple() -> Result<MatrixTuple> {
    let s = size_four_values();
    build_2x2(&[
        Class2::Distinct(s.a, s.c),
        Class2::Distinct(s.f, s.h),
        Class2::Distinct(s.u, s.w),
    ])
}

/// Linear spaces of upper-right blocks for block upper-triangular triples
/// with diagonal blocks `L_j` and `B_j`.
pub struct ExtensionSpaces {
    /// Spanning vectors of `{(T_j) : T_j = L_j Y_j - Y_j B_j, condition (*)}`.
    pub t_space: Vec<Vec<Rational>>,
    /// Spanning vectors of `{(L_j Y - Y B_j)}`.
    pub q_space: Vec<Vec<Rational>>,
    /// A triple of upper-right blocks in `t_space` but not in `q_space`.
    pub representative: Vec<RatMatrix>,
}

fn sylvester(l: &RatMatrix, y: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    l.matmul(y)?.sub(&y.matmul(b)?)
}

pub fn extension_spaces(l: &MatrixTuple, b: &MatrixTuple) -> Result<ExtensionSpaces> {
    if l.len() != 3 || b.len() != 3 || l.n() != 2 || b.n() != 2 {
        return Err(Error::InvalidTuple("expected two 2x2 triples".into()));
    }
    let (lm, bm) = (l.matrices(), b.matrices());
    let blocks_of = |y: &[Rational]| -> Result<Vec<RatMatrix>> {
        (0..3).map(|j| sylvester(&lm[j], &RatMatrix::from_vectorized(2, &y[4 * j..4 * j + 4])?, &bm[j])).collect()
    };
    let star = |t: &[RatMatrix]| -> Result<RatMatrix> {
        t[0].matmul(&bm[1])?
            .matmul(&bm[2])?
            .add(&lm[0].matmul(&t[1])?.matmul(&bm[2])?)?
            .add(&lm[0].matmul(&lm[1])?.matmul(&t[2])?)
    };
    let flatten = |t: &[RatMatrix]| -> Vec<Rational> { t.iter().flat_map(|m| m.vectorize()).collect() };
    let star_of_sylvester = matrix_of_linear_map(12, |idx| {
        let mut y = vec![qi(0); 12];
        y[idx] = qi(1);
        Ok(star(&blocks_of(&y)?)?.vectorize())
    })?;
    let t_space = star_of_sylvester
        .nullspace_basis()
        .iter()
        .map(|y| blocks_of(y.entries()).map(|t| flatten(&t)))
        .collect::<Result<Vec<_>>>()?;
    let q_space = (0..4)
        .map(|e| {
            let y = RatMatrix::unit(2, e / 2, e % 2);
            (0..3).map(|j| sylvester(&lm[j], &y, &bm[j])).collect::<Result<Vec<_>>>().map(|t| flatten(&t))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut q_span = EchelonBasis::new(12);
    for v in &q_space {
        q_span.insert(v);
    }
    let outside = t_space
        .iter()
        .find(|v| !q_span.contains(v))
        .ok_or_else(|| Error::ConstructionFailed("T is contained in Q".into()))?;
    let representative =
        (0..3).map(|j| RatMatrix::from_vectorized(2, &outside[4 * j..4 * j + 4])).collect::<Result<Vec<_>>>()?;
    Ok(ExtensionSpaces { t_space, q_space, representative })
}

/// `[[L_j, T_j], [0, B_j]]`.
pub fn assemble_extension(l: &MatrixTuple, b: &MatrixTuple, t: &[RatMatrix]) -> Result<MatrixTuple> {
    let matrices = (0..3)
        .map(|j| RatMatrix::block2x2(&l.matrices()[j], &t[j], &RatMatrix::zeros(2, 2), &b.matrices()[j]))
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues =
        (0..3).map(|j| l.eigenvalues()[j].iter().chain(&b.eigenvalues()[j]).cloned().collect()).collect();
    MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues)
}

/// Triple `[[L_j, T_j], [0, L_j]]` with `T_1 = diag(1, t)`, `T_3 = [L_3, Z_3]`
/// and `T_2 = ξ P + [L_2, Z_2]`, `P` the projector onto the first eigenspace
/// of `L_2`; `ξ != 0` makes the first eigenvalue of `M_2` a Jordan block.
pub fn build_self_extension(l: &MatrixTuple, classes: &[Jnf]) -> Result<MatrixTuple> {
    let lm = l.matrices();
    let e2 = &l.eigenvalues()[1];
    let (f, g) = (&e2[0], &e2[1]);
    let projector = lm[1].sub(&RatMatrix::scalar(2, g.clone()))?.scale(&(f - g).recip().expect("distinct"));
    let eigenvalues: Vec<Vec<Rational>> =
        l.eigenvalues().iter().map(|e| e.iter().chain(e).cloned().collect()).collect();
    for t in std::iter::once(qi(1)).chain(small_rationals(SEARCH_HEIGHT)) {
        let t1 = RatMatrix::diag(&[qi(1), t]);
        // unknowns: ξ, Z_2 (4), Z_3 (4)
        let upper = |x: &[Rational]| -> Result<(RatMatrix, RatMatrix)> {
            let z2 = RatMatrix::from_vectorized(2, &x[1..5])?;
            let z3 = RatMatrix::from_vectorized(2, &x[5..9])?;
            let t2 = projector.scale(&x[0]).add(&lm[1].commutator(&z2)?)?;
            Ok((t2, lm[2].commutator(&z3)?))
        };
        let map = matrix_of_linear_map(9, |idx| {
            let mut x = vec![qi(0); 9];
            x[idx] = qi(1);
            let (t2, t3) = upper(&x)?;
            Ok(lm[0].matmul(&t2)?.matmul(&lm[2])?.add(&lm[0].matmul(&lm[1])?.matmul(&t3)?)?.vectorize())
        })?;
        let rhs = t1.matmul(&lm[1])?.matmul(&lm[2])?.neg();
        let Some(sol) = map.solve(&RatMatrix::column(rhs.vectorize())?)? else { continue };
        if sol.entries()[0].is_zero() {
            continue;
        }
        let (t2, t3) = upper(sol.entries())?;
        let uppers = [t1, t2, t3];
        let matrices = (0..3)
            .map(|j| RatMatrix::block2x2(&lm[j], &uppers[j], &RatMatrix::zeros(2, 2), &lm[j]))
            .collect::<Result<Vec<_>>>()?;
        let tuple = MatrixTuple::new(Mode::Multiplicative, matrices, eigenvalues.clone())?;
        let members = tuple.matrices().iter().zip(classes).all(|(m, j)| tuple_lab::class_membership(m, j));
        if verify_closure(&tuple)? && members {
            return Ok(tuple);
        }
    }
    Err(Error::ConstructionFailed("no diagonal T_1 gives the prescribed classes".into()))
}

/// `(a, b, c, d) = (2, 3, 5, 1/30)`.
pub fn example4_values() -> [Rational; 4] {
    [qi(2), qi(3), qi(5), q(1, 30)]
}

fn example4_eigenvalues() -> Vec<Vec<Rational>> {
    example4_values().iter().map(|x| vec![x.clone(), qi(1), qi(1)]).collect()
}

fn rows3(rows: [[Rational; 3]; 3]) -> RatMatrix {
    RatMatrix::from_rows(rows.into_iter().map(Vec::from).collect()).expect("3x3")
}

/// Reducible quadruple with trivial centralizer.
pub fn example4_first() -> MatrixTuple {
    let [a, b, c, d] = example4_values();
    let (o, z) = (qi(1), qi(0));
    let matrices = vec![
        rows3([[a, z.clone(), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z.clone(), o.clone()]]),
        rows3([[b.clone(), o.clone(), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z.clone(), o.clone()]]),
        rows3([[c.clone(), z.clone(), o.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z.clone(), o.clone()]]),
        rows3([
            [d, -(&b * &c).recip().expect("nonzero"), -c.recip().expect("nonzero")],
            [z.clone(), o.clone(), z.clone()],
            [z.clone(), z, o],
        ]),
    ];
    MatrixTuple::new(Mode::Multiplicative, matrices, example4_eigenvalues()).expect("valid tuple")
}

/// Direct sum of an irreducible 2x2 quadruple and the trivial 1x1 one.
pub fn example4_second() -> MatrixTuple {
    let [a, b, c, d] = example4_values();
    let (o, z) = (qi(1), qi(0));
    let matrices = vec![
        rows3([[a.clone(), o.clone(), z.clone()], [z.clone(), o.clone(), z.clone()], [z.clone(), z.clone(), o.clone()]]),
        rows3([
            [b, -a.recip().expect("nonzero"), z.clone()],
            [z.clone(), o.clone(), z.clone()],
            [z.clone(), z.clone(), o.clone()],
        ]),
        rows3([
            [c, z.clone(), z.clone()],
            [-d.recip().expect("nonzero"), o.clone(), z.clone()],
            [z.clone(), z.clone(), o.clone()],
        ]),
        rows3([[d, z.clone(), z.clone()], [o.clone(), o.clone(), z.clone()], [z.clone(), z, o]]),
    ];
    MatrixTuple::new(Mode::Multiplicative, matrices, example4_eigenvalues()).expect("valid tuple")
}

/// Classes `(2,3), (5,7), (11,13), (1/17, 17/30030)`.
pub fn example5_classes() -> Vec<Class2> {
    vec![
        Class2::Distinct(qi(2), qi(3)),
        Class2::Distinct(qi(5), qi(7)),
        Class2::Distinct(qi(11), qi(13)),
        Class2::Distinct(q(1, 17), q(17, 30030)),
    ]
}

/// Two non-equivalent irreducible quadruples in the same classes.
pub fn example5_pair() -> Result<(MatrixTuple, MatrixTuple)> {
    let classes = example5_classes();
    let mut all = solutions_2x2(&classes);
    let first = all.next().ok_or_else(|| Error::ConstructionFailed("no quadruple".into()))?;
    for other in all {
        if tuple_lab::intertwiner_dim(&first, &other)? == 0 {
            return Ok((first, other));
        }
    }
    Err(Error::ConstructionFailed("no non-equivalent second quadruple".into()))
}
