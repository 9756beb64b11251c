//! Brute-force check of `GL4(k) = P4(k) GSp4(k) u P4(k) t1 GSp4(k)` over
//! `k = F_2` (full enumeration) and `k = F_3` (orbits on `P4(k)\GL4(k)`).

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};

/// A 4x4 matrix over `F_p`, `p` in {2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat4 {
    p: u8,
    e: [[u8; 4]; 4],
}

impl Mat4 {
    pub fn new(p: u8, rows: [[i64; 4]; 4]) -> Self {
        let e = rows.map(|r| r.map(|x| x.rem_euclid(p as i64) as u8));
        Mat4 { p, e }
    }

    pub fn identity(p: u8) -> Self {
        let mut e = [[0; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = 1;
        }
        Mat4 { p, e }
    }

    pub fn scalar(p: u8, c: u8) -> Self {
        let mut m = Mat4::identity(p);
        for i in 0..4 {
            m.e[i][i] = c % p;
        }
        m
    }

    /// `1 + c E_ij`.
    pub fn transvection(p: u8, i: usize, j: usize, c: u8) -> Self {
        let mut m = Mat4::identity(p);
        m.e[i][j] = (m.e[i][j] + c) % p;
        m
    }

    pub fn diag(p: u8, d: [u8; 4]) -> Self {
        let mut m = Mat4::identity(p);
        for i in 0..4 {
            m.e[i][i] = d[i] % p;
        }
        m
    }

    /// The alternating form `[[0, 1_2], [-1_2, 0]]`.
    pub fn j_form(p: u8) -> Self {
        Mat4::new(p, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    }

    /// Swaps the first two basis vectors.
    pub fn t1(p: u8) -> Self {
        Mat4::new(p, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub fn t2(p: u8) -> Self {
        Mat4::new(p, [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]])
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn entries(&self) -> [[u8; 4]; 4] {
        self.e
    }

    pub fn row(&self, i: usize) -> [u8; 4] {
        self.e[i]
    }

    pub fn mul(&self, o: &Mat4) -> Mat4 {
        assert_eq!(self.p, o.p, "matrices over different fields");
        let p = self.p as u32;
        let mut e = [[0u8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let s: u32 = (0..4).map(|k| self.e[i][k] as u32 * o.e[k][j] as u32).sum();
                e[i][j] = (s % p) as u8;
            }
        }
        Mat4 { p: self.p, e }
    }

    pub fn transpose(&self) -> Mat4 {
        let mut e = [[0u8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = self.e[j][i];
            }
        }
        Mat4 { p: self.p, e }
    }

    pub fn det(&self) -> u8 {
        let p = self.p as u32;
        let mut a = self.e.map(|r| r.map(|x| x as u32));
        let mut det = 1u32;
        for c in 0..4 {
            let Some(piv) = (c..4).find(|&r| a[r][c] != 0) else {
                return 0;
            };
            if piv != c {
                a.swap(piv, c);
                det = (p - det) % p;
            }
            det = det * a[c][c] % p;
            let inv = inv_mod(a[c][c], p);
            for r in c + 1..4 {
                let f = a[r][c] * inv % p;
                for k in c..4 {
                    a[r][k] = (a[r][k] + p * p - f * a[c][k]) % p;
                }
            }
        }
        det as u8
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    /// Two bits per entry, row-major.
    pub fn pack(&self) -> u32 {
        let mut w = 0u32;
        for (k, x) in self.e.iter().flatten().enumerate() {
            w |= (*x as u32) << (2 * k);
        }
        w
    }

    pub fn unpack(p: u8, w: u32) -> Mat4 {
        let mut e = [[0u8; 4]; 4];
        for k in 0..16 {
            e[k / 4][k % 4] = ((w >> (2 * k)) & 3) as u8;
        }
        Mat4 { p, e }
    }

    /// Base-`p` digits, row-major; a dense index into `p^16` slots.
    fn code(&self) -> usize {
        self.e.iter().flatten().rev().fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    /// `mu` with `tg J g = mu J`, if any.
    pub fn similitude(&self) -> Option<u8> {
        let j = Mat4::j_form(self.p);
        let lhs = self.transpose().mul(&j).mul(self);
        let mu = lhs.e[0][2];
        (mu != 0 && lhs == j.mul(&Mat4::scalar(self.p, mu))).then_some(mu)
    }

    /// Membership in the zero pattern of `P4`: rows 2-4 vanish in column 1
    /// and row 3 is supported on column 3 only.
    pub fn matches_p4_pattern(&self) -> bool {
        let e = &self.e;
        e[1][0] == 0 && e[3][0] == 0 && e[2][0] == 0 && e[2][1] == 0 && e[2][3] == 0
    }
}

fn inv_mod(x: u32, p: u32) -> u32 {
    (1..p).find(|y| x * y % p == 1).expect("nonzero residue")
}

fn check_p(p: u8) -> Result<()> {
    if p == 2 || p == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("p = {p}; only p = 2 and p = 3 are supported")))
    }
}

/// `|GL4(F_p)| = prod_{i<4} (p^4 - p^i)`.
pub fn gl4_order(p: u64) -> u64 {
    (0..4).map(|i| p.pow(4) - p.pow(i)).product()
}

/// `|GSp4(F_q)| = q^4 (q^2 - 1)(q^4 - 1)(q - 1)`.
pub fn gsp4_order(q: u64) -> u64 {
    q.pow(4) * (q * q - 1) * (q.pow(4) - 1) * (q - 1)
}

/// Every element of `GL4(F_p)` with a dense matrix-to-id table.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    p: u8,
    elements: Vec<Mat4>,
    index: Vec<u32>,
}

const NO_ID: u32 = u32::MAX;

impl GroupEnumeration {
    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat4] {
        &self.elements
    }

    pub fn get(&self, id: usize) -> &Mat4 {
        &self.elements[id]
    }

    pub fn id_of(&self, m: &Mat4) -> Option<usize> {
        match self.index[m.code()] {
            NO_ID => None,
            id => Some(id as usize),
        }
    }
}

/// Enumerates `GL4(F_p)`. Only `p = 2` fits the dense table; `p = 3` is
/// reported infeasible and handled by [`CosetMethod::Quotient`].
pub fn enumerate_gl4(p: u8) -> Result<GroupEnumeration> {
    check_p(p)?;
    if p != 2 {
        return Err(Error::Infeasible(format!(
            "GL4(F_{p}) has {} elements; a dense table needs {p}^16 slots. Use the quotient method",
            gl4_order(p as u64)
        )));
    }
    let slots = (p as usize).pow(16);
    let mut index = vec![NO_ID; slots];
    let mut elements = Vec::with_capacity(gl4_order(p as u64) as usize);
    for code in 0..slots {
        let mut e = [[0u8; 4]; 4];
        let mut c = code;
        for x in e.iter_mut().flatten() {
            *x = (c % p as usize) as u8;
            c /= p as usize;
        }
        let m = Mat4 { p, e };
        if m.is_invertible() {
            index[code] = elements.len() as u32;
            elements.push(m);
        }
    }
    Ok(GroupEnumeration { p, elements, index })
}

/// Ids of `g` with `tg J g = mu J`.
pub fn filter_gsp4(en: &GroupEnumeration) -> Vec<usize> {
    (0..en.len()).filter(|&i| en.elements[i].similitude().is_some()).collect()
}

/// Ids of elements of `P4`.
pub fn filter_p4(en: &GroupEnumeration) -> Vec<usize> {
    (0..en.len()).filter(|&i| en.elements[i].matches_p4_pattern()).collect()
}

fn units(p: u8) -> impl Iterator<Item = u8> {
    2..p
}

/// Transvections respecting the zero pattern, plus diagonal units.
pub fn p4_generators(p: u8) -> Vec<Mat4> {
    let mut g: Vec<Mat4> = [(0, 1), (0, 2), (0, 3), (1, 2), (3, 2), (1, 3), (3, 1)]
        .iter()
        .map(|&(i, j)| Mat4::transvection(p, i, j, 1))
        .collect();
    for u in units(p) {
        for k in 0..4 {
            let mut d = [1; 4];
            d[k] = u;
            g.push(Mat4::diag(p, d));
        }
    }
    g
}

fn block(p: u8, a: [[u8; 2]; 2], b: [[u8; 2]; 2], c: [[u8; 2]; 2], d: [[u8; 2]; 2]) -> Mat4 {
    let mut e = [[0u8; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            e[i][j] = a[i][j] % p;
            e[i][j + 2] = b[i][j] % p;
            e[i + 2][j] = c[i][j] % p;
            e[i + 2][j + 2] = d[i][j] % p;
        }
    }
    Mat4 { p, e }
}

/// Symplectic transvections `[[1,S],[0,1]]`, `[[1,0],[S,1]]`, the Levi
/// `[[A,0],[0,tA^-1]]` and the similitude `diag(1,1,mu,mu)`.
pub fn gsp4_generators(p: u8) -> Vec<Mat4> {
    let i2 = [[1, 0], [0, 1]];
    let z2 = [[0, 0], [0, 0]];
    let sym = [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]];
    let mut g = Vec::new();
    for s in sym {
        g.push(block(p, i2, s, z2, i2));
        g.push(block(p, i2, z2, s, i2));
    }
    let neg = p - 1;
    // A = 1 + E12 gives tA^-1 = 1 - E21
    g.push(block(p, [[1, 1], [0, 1]], z2, z2, [[1, 0], [neg, 1]]));
    g.push(block(p, [[1, 0], [1, 1]], z2, z2, [[1, neg], [0, 1]]));
    for u in units(p) {
        let ui = inv_mod(u as u32, p as u32) as u8;
        g.push(block(p, [[u, 0], [0, 1]], z2, z2, [[ui, 0], [0, 1]]));
        g.push(Mat4::diag(p, [1, 1, u, u]));
    }
    g
}

/// Elementary generators of `GL4(F_p)`.
fn gl4_generators(p: u8) -> Vec<Mat4> {
    let mut g = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                g.push(Mat4::transvection(p, i, j, 1));
            }
        }
    }
    for u in units(p) {
        g.push(Mat4::diag(p, [u, 1, 1, 1]));
    }
    g
}

/// Closure of `gens` under multiplication, by breadth-first search.
pub fn generated_group(p: u8, gens: &[Mat4]) -> HashSet<u32> {
    let id = Mat4::identity(p);
    let mut seen = HashSet::from([id.pack()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let n = m.mul(g);
            if seen.insert(n.pack()) {
                queue.push_back(n);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetMethod {
    /// Union-find over all of `GL4(F_p)`.
    Full,
    /// Orbits of `GSp4` on the right cosets `P4 g`.
    Quotient,
}

impl std::str::FromStr for CosetMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CosetMethod::Full),
            "quotient" => Ok(CosetMethod::Quotient),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub p: u8,
    pub method: CosetMethod,
    pub group_order: u64,
    pub classes: usize,
    /// Number of `GL4` elements in each class, ordered by label.
    pub sizes: Vec<u64>,
    /// Smallest representative of each class, as rows.
    pub reps: Vec<[[u8; 4]; 4]>,
    pub identity_class: usize,
    pub t1_class: usize,
    pub distinct: bool,
    /// Every class is stable under all generators on both sides.
    pub closure_ok: bool,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.classes == 2
            && self.distinct
            && self.closure_ok
            && self.sizes.iter().sum::<u64>() == self.group_order
    }
}

pub fn double_coset_partition(p: u8, method: CosetMethod) -> Result<PartitionReport> {
    check_p(p)?;
    match method {
        CosetMethod::Full => partition_full(p),
        CosetMethod::Quotient => partition_quotient(p),
    }
}

/// Collapses union-find roots to labels `0..k` ordered by smallest member.
fn labels(uf: &UnionFind<usize>, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut label_of_root = HashMap::new();
    let mut first = Vec::new();
    let lab = (0..n)
        .map(|i| {
            *label_of_root.entry(uf.find(i)).or_insert_with(|| {
                first.push(i);
                first.len() - 1
            })
        })
        .collect();
    (lab, first)
}

/// Double-coset label of every element of `en`, by union-find under the
/// generators; labels are ordered by smallest element id.
pub fn full_class_labels(en: &GroupEnumeration) -> Vec<usize> {
    let p = en.p;
    let id = |m: &Mat4| en.id_of(m).expect("product of invertible matrices");
    let mut uf = UnionFind::new(en.len());
    for (i, g) in en.elements.iter().enumerate() {
        for a in &p4_generators(p) {
            uf.union(i, id(&a.mul(g)));
        }
        for b in &gsp4_generators(p) {
            uf.union(i, id(&g.mul(b)));
        }
    }
    labels(&uf, en.len()).0
}

fn partition_full(p: u8) -> Result<PartitionReport> {
    let en = enumerate_gl4(p)?;
    let left = p4_generators(p);
    let right = gsp4_generators(p);
    let id = |m: &Mat4| en.id_of(m).expect("product of invertible matrices");
    let lab = full_class_labels(&en);
    let classes = lab.iter().max().map_or(0, |m| m + 1);
    let mut first = vec![usize::MAX; classes];
    let mut sizes = vec![0u64; classes];
    for (i, &l) in lab.iter().enumerate() {
        first[l] = first[l].min(i);
        sizes[l] += 1;
    }
    let closure_ok = en.elements.iter().enumerate().all(|(i, g)| {
        left.iter().all(|a| lab[id(&a.mul(g))] == lab[i]) && right.iter().all(|b| lab[id(&g.mul(b))] == lab[i])
    });
    let identity_class = lab[id(&Mat4::identity(p))];
    let t1_class = lab[id(&Mat4::t1(p))];
    Ok(PartitionReport {
        p,
        method: CosetMethod::Full,
        group_order: en.len() as u64,
        classes,
        sizes,
        reps: first.iter().map(|&i| en.elements[i].e).collect(),
        identity_class,
        t1_class,
        distinct: identity_class != t1_class,
        closure_ok,
    })
}

pub type CosetKey = ([u8; 4], [[u8; 4]; 3]);

/// Canonical key of the coset `P4 g`: the line through row 3 and the span
/// of rows 2, 3, 4 in reduced row echelon form.
pub fn coset_key(g: &Mat4) -> CosetKey {
    let p = g.p as u32;
    (normalize(g.e[2], p), rref3([g.e[1], g.e[2], g.e[3]], p))
}

fn normalize(v: [u8; 4], p: u32) -> [u8; 4] {
    let lead = v.iter().find(|&&x| x != 0).copied().expect("nonzero row") as u32;
    let inv = inv_mod(lead, p);
    v.map(|x| (x as u32 * inv % p) as u8)
}

fn rref3(rows: [[u8; 4]; 3], p: u32) -> [[u8; 4]; 3] {
    let mut a = rows.map(|r| r.map(|x| x as u32));
    let mut r = 0;
    for c in 0..4 {
        if r == 3 {
            break;
        }
        let Some(piv) = (r..3).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = inv_mod(a[r][c], p);
        for k in 0..4 {
            a[r][k] = a[r][k] * inv % p;
        }
        for i in 0..3 {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..4 {
                    a[i][k] = (a[i][k] + p * p - f * a[r][k]) % p;
                }
            }
        }
        r += 1;
    }
    assert_eq!(r, 3, "rows 2-4 of an invertible matrix are independent");
    a.map(|row| row.map(|x| x as u8))
}

/// One representative per right coset `P4 g`, found from the identity
/// under elementary generators of `GL4`.
pub fn right_coset_reps(p: u8) -> Result<(Vec<Mat4>, HashMap<CosetKey, usize>)> {
    check_p(p)?;
    let mut reps = vec![Mat4::identity(p)];
    let mut ids = HashMap::from([(coset_key(&reps[0]), 0usize)]);
    let gens = gl4_generators(p);
    let mut cursor = 0;
    while cursor < reps.len() {
        let g = reps[cursor];
        for h in &gens {
            let n = g.mul(h);
            let key = coset_key(&n);
            if !ids.contains_key(&key) {
                ids.insert(key, reps.len());
                reps.push(n);
            }
        }
        cursor += 1;
    }
    Ok((reps, ids))
}

fn partition_quotient(p: u8) -> Result<PartitionReport> {
    let (reps, ids) = right_coset_reps(p)?;
    let n = reps.len();
    let group_order = gl4_order(p as u64);
    let p4_order = group_order / n as u64;
    let right = gsp4_generators(p);
    let coset = |m: &Mat4| ids[&coset_key(m)];
    let mut uf = UnionFind::new(n);
    for (i, g) in reps.iter().enumerate() {
        for b in &right {
            uf.union(i, coset(&g.mul(b)));
        }
    }
    let (lab, first) = labels(&uf, n);
    let closure_ok = reps.iter().enumerate().all(|(i, g)| {
        right.iter().all(|b| lab[coset(&g.mul(b))] == lab[i])
            && p4_generators(p).iter().all(|a| coset(&a.mul(g)) == i)
    });
    let mut sizes = vec![0u64; first.len()];
    for &l in &lab {
        sizes[l] += p4_order;
    }
    let identity_class = lab[coset(&Mat4::identity(p))];
    let t1_class = lab[coset(&Mat4::t1(p))];
    Ok(PartitionReport {
        p,
        method: CosetMethod::Quotient,
        group_order,
        classes: first.len(),
        sizes,
        reps: first.iter().map(|&i| reps[i].e).collect(),
        identity_class,
        t1_class,
        distinct: identity_class != t1_class,
        closure_ok,
    })
}
