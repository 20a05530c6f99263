use super::matrix::Matrix;
use super::module::{minimal_columns, vec_degree, FgModule};
use crate::error::{Error, Result};
use crate::ringkernel::{syzygies, Ideal, PrimeIdeal};
use crate::xint::XInt;

/// A truncated free resolution `F_0 <- F_1 <- ... <- F_L` with `d_1` the relations.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub module: FgModule,
    /// `maps[k]` is `d_{k+1}: F_{k+1} -> F_k`.
    pub maps: Vec<Matrix>,
    /// Generator degrees of each `F_k` in the graded case.
    pub degrees: Option<Vec<Vec<i64>>>,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Rank of `F_k`.
    pub fn rank(&self, k: usize) -> usize {
        if k == 0 {
            self.module.rank()
        } else {
            self.maps[k - 1].cols()
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.length()).map(|k| self.rank(k)).collect()
    }
}

/// Resolution of `m` with `length` maps; minimal when `m` is graded.
pub fn resolve(m: &FgModule, length: usize) -> Result<FreeResolution> {
    if length == 0 {
        return Err(Error::Precondition("resolution length must be at least 1".into()));
    }
    let ring = m.ring();
    let graded = m.degrees().map(|d| d.to_vec());
    let mut cur_deg = graded.clone();
    let mut degrees = graded.as_ref().map(|d| vec![d.clone()]);
    let mut rows = m.rank();
    let mut cols = minimal_columns(ring, rows, m.relations().columns(), cur_deg.as_deref())?;
    let mut maps = Vec::with_capacity(length);
    for k in 0..length {
        let d = Matrix::from_cols(rows, &cols);
        let next_deg = match &cur_deg {
            Some(sh) => {
                let mut out = Vec::with_capacity(cols.len());
                for c in &cols {
                    out.push(vec_degree(ring, c, sh)?.expect("nonzero column"));
                }
                Some(out)
            }
            None => None,
        };
        maps.push(d);
        if let (Some(all), Some(nd)) = (degrees.as_mut(), &next_deg) {
            all.push(nd.clone());
        }
        if k + 1 == length {
            break;
        }
        let syz = syzygies(ring, rows, &cols)?;
        rows = cols.len();
        cur_deg = next_deg;
        cols = minimal_columns(ring, rows, syz, cur_deg.as_deref())?;
    }
    Ok(FreeResolution { module: m.clone(), maps, degrees })
}

/// The map `Hom(F_k, N) -> Hom(F_{k+1}, N)` on ambient free modules:
/// block `(j, l)` is `d_{k+1}[l, j] * I_p`.
fn hom_map(res: &FreeResolution, k: usize, p: usize) -> Matrix {
    let d = &res.maps[k];
    let (fk, fk1) = (d.rows(), d.cols());
    let mut m = Matrix::zero(fk1 * p, fk * p);
    for j in 0..fk1 {
        for l in 0..fk {
            let e = d.get(l, j);
            if e.is_zero() {
                continue;
            }
            for t in 0..p {
                m.set(j * p + t, l * p + t, e.clone());
            }
        }
    }
    m
}

/// `Ext^i(M, N)` from a resolution of `M` of length at least `i + 1`.
pub fn ext_from_resolution(res: &FreeResolution, i: usize, n: &FgModule) -> Result<FgModule> {
    if res.length() < i + 1 {
        return Err(Error::Precondition(format!("resolution of length {} too short for Ext^{i}", res.length())));
    }
    let ring = n.ring();
    if ring != res.module.ring() {
        return Err(Error::RingMismatch);
    }
    let p = n.rank();
    let b = n.relations();
    let fi = res.rank(i);
    let fi1 = res.rank(i + 1);
    let out = hom_map(res, i, p);
    let here_rels = b.repeat_diag(fi);
    let next_rels = b.repeat_diag(fi1);
    let here = FgModule::new(ring, fi * p, here_rels.clone(), None)?;
    let target = FgModule::new(ring, fi1 * p, next_rels, None)?;
    let ker = here.kernel_of(&out, &target)?;
    let rels = if i == 0 { here_rels } else { hom_map(res, i - 1, p).hstack(&here_rels) };
    Ok(FgModule::subquotient(ring, &ker.gens, &rels, None)?.module)
}

pub fn ext(i: usize, m: &FgModule, n: &FgModule) -> Result<FgModule> {
    let res = resolve(m, i + 1)?;
    ext_from_resolution(&res, i, n)
}

fn ring_dimension(m: &FgModule) -> Result<usize> {
    Ok(Ideal::zero(m.ring()).dimension()?.unwrap_or(0))
}

/// `grade(a, M)`: least `i` with `Ext^i(R/a, M) ≠ 0`, or `inf` when `M = aM`.
pub fn grade(a: &Ideal, m: &FgModule) -> Result<XInt> {
    if m.quotient_by_ideal(a)?.is_zero()? {
        return Ok(XInt::PosInf);
    }
    let dim = ring_dimension(m)?;
    let res = resolve(&FgModule::cyclic(a).ungraded(), dim + 1)?;
    let m = m.ungraded();
    for i in 0..=dim {
        if !ext_from_resolution(&res, i, &m)?.is_zero()? {
            return Ok(XInt::Fin(i as i64));
        }
    }
    Err(Error::Internal(format!("grade scan passed dimension {dim} without a nonzero Ext")))
}

/// Depth of `M_p`: `inf` when `M_p = 0`, else least `i` with `Ext^i(R/p, M)_p ≠ 0`.
pub fn local_depth(m: &FgModule, p: &PrimeIdeal) -> Result<XInt> {
    let ann = m.annihilator()?;
    if !p.ideal().contains(&ann)? {
        return Ok(XInt::PosInf);
    }
    let dim = ring_dimension(m)?;
    let res = resolve(&FgModule::cyclic(p.ideal()).ungraded(), dim + 1)?;
    let m = m.ungraded();
    for i in 0..=dim {
        let e = ext_from_resolution(&res, i, &m)?;
        if p.ideal().contains(&e.annihilator()?)? {
            return Ok(XInt::Fin(i as i64));
        }
    }
    Err(Error::Internal(format!("depth scan passed dimension {dim} at a prime in the support")))
}

/// Whether `depth M_p ≥ height p`.
pub fn mcm_test(m: &FgModule, p: &PrimeIdeal) -> Result<bool> {
    let d = local_depth(m, p)?;
    Ok(d >= XInt::Fin(p.height()? as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringkernel::PolyRing;

    fn cyc(r: &PolyRing, s: &str) -> FgModule {
        FgModule::cyclic(&Ideal::parse(r, s).unwrap())
    }

    #[test]
    fn resolution_shapes() {
        let r = PolyRing::rational_graded(&["x", "y"]);
        let res = resolve(&cyc(&r, "<x>"), 2).unwrap();
        assert_eq!(res.ranks(), vec![1, 1, 0]);
        assert_eq!(res.maps[0].fmt(&r), "[[x]]");
        let res = resolve(&cyc(&r, "<x, y>"), 2).unwrap();
        assert_eq!(res.ranks(), vec![1, 2, 1]);
        let prod = res.maps[0].mul(&r, &res.maps[1]);
        assert!(prod.is_zero());
        let res = resolve(&FgModule::free(&r, 2), 1).unwrap();
        assert_eq!(res.ranks(), vec![2, 0]);
    }

    #[test]
    fn ext_examples() {
        let r1 = PolyRing::rational(&["x"]);
        let m = cyc(&r1, "<x>");
        let e = ext(1, &m, &m).unwrap();
        assert!(e.annihilator().unwrap().equals(&Ideal::parse(&r1, "<x>").unwrap()).unwrap());
        let r = PolyRing::rational(&["x", "y"]);
        let k = cyc(&r, "<x, y>");
        let e2 = ext(2, &k, &FgModule::free(&r, 1)).unwrap();
        assert!(e2.annihilator().unwrap().equals(&Ideal::parse(&r, "<x, y>").unwrap()).unwrap());
        assert!(ext(1, &k, &FgModule::free(&r, 1)).unwrap().is_zero().unwrap());
        let e0 = ext(0, &FgModule::free(&r, 1), &k).unwrap();
        assert!(e0.annihilator().unwrap().equals(&Ideal::parse(&r, "<x, y>").unwrap()).unwrap());
    }

    #[test]
    fn grade_examples() {
        let r = PolyRing::rational(&["x", "y"]);
        let m = Ideal::parse(&r, "<x, y>").unwrap();
        assert_eq!(grade(&m, &FgModule::free(&r, 1)).unwrap(), XInt::Fin(2));
        let x = Ideal::parse(&r, "<x>").unwrap();
        assert_eq!(grade(&x, &cyc(&r, "<x>")).unwrap(), XInt::Fin(0));
        assert_eq!(grade(&x, &FgModule::zero(&r)).unwrap(), XInt::PosInf);
    }

    #[test]
    fn depth_examples() {
        let r = PolyRing::rational(&["x", "y"]);
        let m = cyc(&r, "<x>");
        let mm = PrimeIdeal::variables(&r, &[0, 1]).unwrap();
        let px = PrimeIdeal::variables(&r, &[0]).unwrap();
        let py = PrimeIdeal::variables(&r, &[1]).unwrap();
        assert_eq!(local_depth(&m, &mm).unwrap(), XInt::Fin(1));
        assert_eq!(local_depth(&m, &px).unwrap(), XInt::Fin(0));
        assert_eq!(local_depth(&m, &py).unwrap(), XInt::PosInf);
        assert!(!mcm_test(&m, &mm).unwrap());
        assert!(mcm_test(&FgModule::free(&r, 1), &mm).unwrap());
        assert!(mcm_test(&m, &py).unwrap());
    }
}
