//! Dynkin diagrams of affine arrangements: Coxeter graph from alcove
//! walls, arrows from length ratios, concentric circles for doubled
//! roots, and classification against the stored diagram tables by
//! brute-force isomorphism (diagrams have at most rank+1 <= 9 vertices).
//!
//! Arrow convention: an arrow on a double or triple link points to the
//! vertex of shorter root length. For the canonical system of an
//! arrangement that is the family with wider spacing.

use crate::arrangement::{Arrangement, Chart, HyperplaneFamily, Window};
use crate::geometry::{angle_class, Vector};
use crate::scalar::{rat, ratio, Rat};
use crate::weyl::{family_orbits, find_alcove, generic_basepoint, Wall, WeylError};
use num_traits::One;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynkinError {
    #[error("walls make an angle outside the crystallographic classes")]
    BadAngle,
    #[error("length data is not Weyl invariant: families {0} and {1} are conjugate but differ")]
    NotInvariant(String, String),
    #[error("linked lengths violate the ratio rule: {0} vs {1} on a {2}-fold link")]
    BadRatio(String, String, u8),
    #[error("circle rule violated at wall of family {0}")]
    BadCircle(String),
    #[error("diagram does not match any stored table entry")]
    Unclassified,
    #[error("rank {0} unsupported for this symbol")]
    BadRank(usize),
    #[error("synthesis for this symbol is not provided")]
    UnsupportedSynthesis,
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Arrangement(#[from] crate::arrangement::ArrangementError),
}

/// Classification symbols for the reduced (Table 1) and nonreduced
/// (Table 2) irreducible affine diagrams of rank at least 2. Nonreduced
/// symbols name the pair (reduced part, co-reduced part).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    A(usize),
    B(usize),
    Bv(usize),
    C(usize),
    Cv(usize),
    Cp(usize),
    D(usize),
    E(usize),
    F4,
    F4v,
    G2,
    G2v,
    /// (B~n, B~nv)
    BBv(usize),
    /// (C~nv, C~n')
    CvCp(usize),
    /// (C~n', C~n)
    CpC(usize),
    /// (C~nv, C~n)
    CvC(usize),
    /// (C~2, C~2v)
    C2C2v,
}

impl Symbol {
    pub fn rank(&self) -> usize {
        match *self {
            Symbol::A(n)
            | Symbol::B(n)
            | Symbol::Bv(n)
            | Symbol::C(n)
            | Symbol::Cv(n)
            | Symbol::Cp(n)
            | Symbol::D(n)
            | Symbol::E(n)
            | Symbol::BBv(n)
            | Symbol::CvCp(n)
            | Symbol::CpC(n)
            | Symbol::CvC(n) => n,
            Symbol::F4 | Symbol::F4v => 4,
            Symbol::G2 | Symbol::G2v | Symbol::C2C2v => 2,
        }
    }

    /// The symbol of the dual system (all arrows reversed); circled
    /// pairs swap to the pair of dualized parts.
    pub fn dual(&self) -> Symbol {
        match *self {
            Symbol::A(n) => Symbol::A(n),
            Symbol::B(n) => Symbol::Bv(n),
            Symbol::Bv(n) => Symbol::B(n),
            Symbol::C(n) => Symbol::Cv(n),
            Symbol::Cv(n) => Symbol::C(n),
            Symbol::Cp(n) => Symbol::Cp(n),
            Symbol::D(n) => Symbol::D(n),
            Symbol::E(n) => Symbol::E(n),
            Symbol::F4 => Symbol::F4v,
            Symbol::F4v => Symbol::F4,
            Symbol::G2 => Symbol::G2v,
            Symbol::G2v => Symbol::G2,
            Symbol::BBv(n) => Symbol::BBv(n),
            Symbol::CvCp(n) => Symbol::CpC(n),
            Symbol::CpC(n) => Symbol::CvCp(n),
            Symbol::CvC(n) => Symbol::CvC(n),
            Symbol::C2C2v => Symbol::C2C2v,
        }
    }

    /// The letter of the underlying affine Weyl group.
    pub fn weyl_letter(&self) -> char {
        match *self {
            Symbol::A(_) => 'A',
            Symbol::B(_) | Symbol::Bv(_) | Symbol::BBv(_) => 'B',
            Symbol::C(_)
            | Symbol::Cv(_)
            | Symbol::Cp(_)
            | Symbol::CvCp(_)
            | Symbol::CpC(_)
            | Symbol::CvC(_)
            | Symbol::C2C2v => 'C',
            Symbol::D(_) => 'D',
            Symbol::E(_) => 'E',
            Symbol::F4 | Symbol::F4v => 'F',
            Symbol::G2 | Symbol::G2v => 'G',
        }
    }

    pub fn parse(s: &str) -> Option<Symbol> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let mut parts = inner.splitn(2, ',');
            let a = parts.next()?.trim().to_string();
            let b = parts.next()?.trim().to_string();
            let n_of = |t: &str, pre: &str, suf: &str| -> Option<usize> {
                let core = t.strip_prefix(pre)?;
                let core = if suf.is_empty() {
                    core
                } else {
                    core.strip_suffix(suf)?
                };
                core.parse().ok()
            };
            if let (Some(n), Some(m)) = (n_of(&a, "B~", ""), n_of(&b, "B~", "v")) {
                if n == m && n >= 3 {
                    return Some(Symbol::BBv(n));
                }
            }
            if a == "C~2" && b == "C~2v" {
                return Some(Symbol::C2C2v);
            }
            if let (Some(n), Some(m)) = (n_of(&a, "C~", "v"), n_of(&b, "C~", "'")) {
                if n == m && n >= 2 {
                    return Some(Symbol::CvCp(n));
                }
            }
            if let (Some(n), Some(m)) = (n_of(&a, "C~", "'"), n_of(&b, "C~", "")) {
                if n == m && n >= 2 {
                    return Some(Symbol::CpC(n));
                }
            }
            if let (Some(n), Some(m)) = (n_of(&a, "C~", "v"), n_of(&b, "C~", "")) {
                if n == m && n >= 2 {
                    return Some(Symbol::CvC(n));
                }
            }
            return None;
        }
        match s {
            "F~4" => return Some(Symbol::F4),
            "F~4v" => return Some(Symbol::F4v),
            "G~2" => return Some(Symbol::G2),
            "G~2v" => return Some(Symbol::G2v),
            _ => {}
        }
        if s.len() < 2 {
            return None;
        }
        let (letter, rest) = s.split_at(1);
        let rest = rest.strip_prefix('~')?;
        let (num, suffix) = match rest.strip_suffix('v') {
            Some(r) => (r, "v"),
            None => match rest.strip_suffix('\'') {
                Some(r) => (r, "'"),
                None => (rest, ""),
            },
        };
        let n: usize = num.parse().ok()?;
        match (letter, suffix) {
            ("A", "") if n >= 2 => Some(Symbol::A(n)),
            ("B", "") if n >= 3 => Some(Symbol::B(n)),
            ("B", "v") if n >= 3 => Some(Symbol::Bv(n)),
            ("C", "") if n >= 2 => Some(Symbol::C(n)),
            ("C", "v") if n >= 2 => Some(Symbol::Cv(n)),
            ("C", "'") if n >= 2 => Some(Symbol::Cp(n)),
            ("D", "") if n >= 4 => Some(Symbol::D(n)),
            ("E", "") if (6..=8).contains(&n) => Some(Symbol::E(n)),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::A(n) => write!(f, "A~{n}"),
            Symbol::B(n) => write!(f, "B~{n}"),
            Symbol::Bv(n) => write!(f, "B~{n}v"),
            Symbol::C(n) => write!(f, "C~{n}"),
            Symbol::Cv(n) => write!(f, "C~{n}v"),
            Symbol::Cp(n) => write!(f, "C~{n}'"),
            Symbol::D(n) => write!(f, "D~{n}"),
            Symbol::E(n) => write!(f, "E~{n}"),
            Symbol::F4 => write!(f, "F~4"),
            Symbol::F4v => write!(f, "F~4v"),
            Symbol::G2 => write!(f, "G~2"),
            Symbol::G2v => write!(f, "G~2v"),
            Symbol::BBv(n) => write!(f, "(B~{n},B~{n}v)"),
            Symbol::CvCp(n) => write!(f, "(C~{n}v,C~{n}')"),
            Symbol::CpC(n) => write!(f, "(C~{n}',C~{n})"),
            Symbol::CvC(n) => write!(f, "(C~{n}v,C~{n})"),
            Symbol::C2C2v => write!(f, "(C~2,C~2v)"),
        }
    }
}

/// Abstract diagram data: link multiplicities, normalized squared
/// lengths, circle marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramShape {
    pub links: Vec<Vec<u8>>,
    pub length2: Vec<Rat>,
    pub circles: Vec<bool>,
}

impl DiagramShape {
    fn vertices(&self) -> usize {
        self.length2.len()
    }

    fn normalized(mut self) -> Self {
        let min = self.length2.iter().min().cloned().expect("nonempty shape");
        for l in self.length2.iter_mut() {
            *l = &*l / &min;
        }
        self
    }
}

/// A computed Dynkin diagram: alcove walls as vertices, the abstract
/// shape, and the classification symbol.
#[derive(Debug, Clone)]
pub struct DynkinDiagram {
    pub walls: Vec<Wall>,
    pub shape: DiagramShape,
    pub symbol: Symbol,
}

impl DynkinDiagram {
    /// Arrows (from, to, multiplicity) per multi-link, pointing to the
    /// shorter root.
    pub fn arrows(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        let n = self.shape.vertices();
        for i in 0..n {
            for j in (i + 1)..n {
                let m = self.shape.links[i][j];
                if m >= 2 {
                    if self.shape.length2[i] < self.shape.length2[j] {
                        out.push((j, i, m));
                    } else {
                        out.push((i, j, m));
                    }
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.vertices()
    }
}

/// Computes the Dynkin diagram of a window given squared root lengths
/// and circle marks per family.
pub fn dynkin(
    window: &Window,
    length2: &[Rat],
    circles: &[bool],
) -> Result<DynkinDiagram, DynkinError> {
    let arr = &window.arrangement;
    assert_eq!(length2.len(), arr.families.len());
    assert_eq!(circles.len(), arr.families.len());

    // Weyl invariance of lengths and circles on family orbits.
    let orbits = family_orbits(window)?;
    for i in 0..arr.families.len() {
        for j in (i + 1)..arr.families.len() {
            if orbits[i] == orbits[j] && (length2[i] != length2[j] || circles[i] != circles[j]) {
                return Err(DynkinError::NotInvariant(
                    arr.families[i].label.clone(),
                    arr.families[j].label.clone(),
                ));
            }
        }
    }

    let basepoint = generic_basepoint(window)?;
    let alcove = find_alcove(window, &basepoint)?;
    let walls = alcove.walls;
    let n = walls.len();

    let mut links = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let class = angle_class(&walls[i].plane, &walls[j].plane);
            let Some(m) = class.link_multiplicity() else {
                return Err(DynkinError::BadAngle);
            };
            links[i][j] = m;
            links[j][i] = m;
        }
    }

    let wall_len: Vec<Rat> = walls.iter().map(|w| length2[w.family].clone()).collect();
    let wall_circ: Vec<bool> = walls.iter().map(|w| circles[w.family]).collect();

    // Ratio rule across links: equal on single links, factor 2 or 3 on
    // double and triple links.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = links[i][j];
            if m == 0 {
                continue;
            }
            let r = &wall_len[i] / &wall_len[j];
            let ok = match m {
                1 => r == rat(1),
                2 => r == rat(2) || r == ratio(1, 2),
                3 => r == rat(3) || r == ratio(1, 3),
                _ => false,
            };
            if !ok {
                return Err(DynkinError::BadRatio(
                    wall_len[i].to_string(),
                    wall_len[j].to_string(),
                    m,
                ));
            }
        }
    }

    // Circle rule: a circled vertex is only doubly linked to other
    // vertices and every arrow on those links points to it.
    for i in 0..n {
        if !wall_circ[i] {
            continue;
        }
        for j in 0..n {
            if i == j || links[i][j] == 0 {
                continue;
            }
            if links[i][j] != 2 || wall_len[i] >= wall_len[j] {
                return Err(DynkinError::BadCircle(
                    arr.families[walls[i].family].label.clone(),
                ));
            }
        }
    }

    let shape = DiagramShape {
        links,
        length2: wall_len,
        circles: wall_circ,
    }
    .normalized();
    let symbol = classify(&shape).ok_or(DynkinError::Unclassified)?;
    Ok(DynkinDiagram {
        walls,
        shape,
        symbol,
    })
}

/// Vertex orbits under the Weyl group: two vertices share a class iff
/// they are joined by a path of single links.
pub fn vertex_orbits(diagram: &DynkinDiagram) -> Vec<Vec<usize>> {
    let n = diagram.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if diagram.shape.links[i][j] == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match reps.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(i),
            None => {
                reps.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// All Table 1 and Table 2 symbols of the given rank.
pub fn symbols_of_rank(rank: usize) -> Vec<Symbol> {
    let mut out = Vec::new();
    if rank >= 2 {
        out.push(Symbol::A(rank));
        out.push(Symbol::C(rank));
        out.push(Symbol::Cv(rank));
        out.push(Symbol::Cp(rank));
        out.push(Symbol::CvCp(rank));
        out.push(Symbol::CpC(rank));
        out.push(Symbol::CvC(rank));
    }
    if rank >= 3 {
        out.push(Symbol::B(rank));
        out.push(Symbol::Bv(rank));
        out.push(Symbol::BBv(rank));
    }
    if rank >= 4 {
        out.push(Symbol::D(rank));
    }
    if rank == 4 {
        out.push(Symbol::F4);
        out.push(Symbol::F4v);
    }
    if rank == 2 {
        out.push(Symbol::G2);
        out.push(Symbol::G2v);
        out.push(Symbol::C2C2v);
    }
    if (6..=8).contains(&rank) {
        out.push(Symbol::E(rank));
    }
    out
}

/// Stored template shape of a symbol, lengths normalized (shortest 1).
pub fn template(symbol: Symbol) -> Result<DiagramShape, DynkinError> {
    let n = symbol.rank();
    let mut links = vec![vec![0u8; n + 1]; n + 1];
    fn link(links: &mut [Vec<u8>], i: usize, j: usize, m: u8) {
        links[i][j] = m;
        links[j][i] = m;
    }
    let ones = |v: i64| vec![rat(v); n + 1];
    let shape = match symbol {
        Symbol::A(_) => {
            if n < 2 {
                return Err(DynkinError::BadRank(n));
            }
            for i in 0..=n {
                link(&mut links, i, (i + 1) % (n + 1), 1);
            }
            DiagramShape {
                links,
                length2: ones(1),
                circles: vec![false; n + 1],
            }
        }
        Symbol::B(_) | Symbol::Bv(_) | Symbol::BBv(_) => {
            if n < 3 {
                return Err(DynkinError::BadRank(n));
            }
            link(&mut links, 0, 2, 1);
            link(&mut links, 1, 2, 1);
            for i in 2..(n - 1) {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, n - 1, n, 2);
            let mut length2 = vec![rat(2); n + 1];
            let mut circles = vec![false; n + 1];
            match symbol {
                Symbol::B(_) => length2[n] = rat(1),
                Symbol::Bv(_) => length2[n] = rat(4),
                Symbol::BBv(_) => {
                    length2[n] = rat(1);
                    circles[n] = true;
                }
                _ => unreachable!(),
            }
            DiagramShape {
                links,
                length2,
                circles,
            }
        }
        Symbol::C(_)
        | Symbol::Cv(_)
        | Symbol::Cp(_)
        | Symbol::CvCp(_)
        | Symbol::CpC(_)
        | Symbol::CvC(_)
        | Symbol::C2C2v => {
            if n < 2 {
                return Err(DynkinError::BadRank(n));
            }
            link(&mut links, 0, 1, 2);
            for i in 1..(n - 1) {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, n - 1, n, 2);
            let mut length2 = vec![rat(2); n + 1];
            let mut circles = vec![false; n + 1];
            match symbol {
                Symbol::C(_) => {
                    length2[0] = rat(4);
                    length2[n] = rat(4);
                }
                Symbol::Cv(_) => {
                    length2[0] = rat(1);
                    length2[n] = rat(1);
                }
                Symbol::Cp(_) => {
                    length2[0] = rat(4);
                    length2[n] = rat(1);
                }
                Symbol::CvCp(_) => {
                    length2[0] = rat(1);
                    length2[n] = rat(1);
                    circles[n] = true;
                }
                Symbol::CpC(_) => {
                    length2[0] = rat(4);
                    length2[n] = rat(1);
                    circles[n] = true;
                }
                Symbol::CvC(_) => {
                    length2[0] = rat(1);
                    length2[n] = rat(1);
                    circles[0] = true;
                    circles[n] = true;
                }
                Symbol::C2C2v => {
                    length2[0] = rat(4);
                    length2[n] = rat(4);
                    circles[1] = true;
                }
                _ => unreachable!(),
            }
            DiagramShape {
                links,
                length2,
                circles,
            }
        }
        Symbol::D(_) => {
            if n < 4 {
                return Err(DynkinError::BadRank(n));
            }
            link(&mut links, 0, 2, 1);
            link(&mut links, 1, 2, 1);
            for i in 2..(n - 2) {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, n - 2, n - 1, 1);
            link(&mut links, n - 2, n, 1);
            DiagramShape {
                links,
                length2: ones(1),
                circles: vec![false; n + 1],
            }
        }
        Symbol::E(6) => {
            for i in 0..4 {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, 2, 5, 1);
            link(&mut links, 5, 6, 1);
            DiagramShape {
                links,
                length2: ones(1),
                circles: vec![false; 7],
            }
        }
        Symbol::E(7) => {
            for i in 0..6 {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, 3, 7, 1);
            DiagramShape {
                links,
                length2: ones(1),
                circles: vec![false; 8],
            }
        }
        Symbol::E(8) => {
            for i in 0..7 {
                link(&mut links, i, i + 1, 1);
            }
            link(&mut links, 2, 8, 1);
            DiagramShape {
                links,
                length2: ones(1),
                circles: vec![false; 9],
            }
        }
        Symbol::E(_) => return Err(DynkinError::BadRank(n)),
        Symbol::F4 | Symbol::F4v => {
            for i in 0..4 {
                link(&mut links, i, i + 1, if i == 2 { 2 } else { 1 });
            }
            let length2 = match symbol {
                Symbol::F4 => vec![rat(2), rat(2), rat(2), rat(1), rat(1)],
                _ => vec![rat(1), rat(1), rat(1), rat(2), rat(2)],
            };
            DiagramShape {
                links,
                length2,
                circles: vec![false; 5],
            }
        }
        Symbol::G2 | Symbol::G2v => {
            link(&mut links, 0, 1, 1);
            link(&mut links, 1, 2, 3);
            let length2 = match symbol {
                Symbol::G2 => vec![rat(3), rat(3), rat(1)],
                _ => vec![rat(1), rat(1), rat(3)],
            };
            DiagramShape {
                links,
                length2,
                circles: vec![false; 3],
            }
        }
    };
    Ok(shape.normalized())
}

/// Classifies a shape against the stored tables, up to isomorphism.
pub fn classify(shape: &DiagramShape) -> Option<Symbol> {
    let n = shape.vertices();
    if n < 3 {
        return None;
    }
    for symbol in symbols_of_rank(n - 1) {
        let Ok(tpl) = template(symbol) else { continue };
        if isomorphic(shape, &tpl) {
            return Some(symbol);
        }
    }
    None
}

type VertexSig = (Rat, bool, Vec<(u8, Rat, bool)>);

/// Backtracking isomorphism test with per-vertex invariant pruning.
fn isomorphic(a: &DiagramShape, b: &DiagramShape) -> bool {
    let n = a.vertices();
    if b.vertices() != n {
        return false;
    }
    let sig = |s: &DiagramShape, i: usize| -> VertexSig {
        let mut nb: Vec<(u8, Rat, bool)> = (0..n)
            .filter(|&j| j != i && s.links[i][j] > 0)
            .map(|j| (s.links[i][j], s.length2[j].clone(), s.circles[j]))
            .collect();
        nb.sort();
        (s.length2[i].clone(), s.circles[i], nb)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    {
        let mut ma = sa.clone();
        let mut mb = sb.clone();
        ma.sort();
        mb.sort();
        if ma != mb {
            return false;
        }
    }

    fn backtrack(
        v: usize,
        n: usize,
        a: &DiagramShape,
        b: &DiagramShape,
        sa: &[VertexSig],
        sb: &[VertexSig],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == n {
            return true;
        }
        for t in 0..n {
            if used[t] || sa[v] != sb[t] {
                continue;
            }
            let mut ok = true;
            for u in 0..v {
                let tu = assign[u].expect("assigned prefix");
                if a.links[v][u] != b.links[t][tu] {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            assign[v] = Some(t);
            used[t] = true;
            if backtrack(v + 1, n, a, b, sa, sb, assign, used) {
                return true;
            }
            assign[v] = None;
            used[t] = false;
        }
        false
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    backtrack(0, n, a, b, &sa, &sb, &mut assign, &mut used)
}

/// A synthesized model arrangement for a symbol.
#[derive(Debug, Clone)]
pub struct SynthesizedModel {
    pub arrangement: Arrangement,
    pub length2: Vec<Rat>,
    pub circles: Vec<bool>,
    pub radius: Rat,
}

impl SynthesizedModel {
    pub fn window(&self) -> Window {
        let center = self
            .arrangement
            .chart
            .as_ref()
            .map(|c| c.base.clone())
            .unwrap_or_else(|| Vector::zero(self.arrangement.dim));
        Window::new(self.arrangement.clone(), center, self.radius.clone())
            .expect("synthesized windows are valid")
    }

    /// The same model with dual lengths: all arrows reverse. For a
    /// nonreduced system the dual's reduced part is the dual of the
    /// co-reduced part, so circled families dualize from their doubled
    /// root (1/(4 l^2)); uncircled families dualize from l^2 itself.
    pub fn dualized(&self) -> SynthesizedModel {
        let length2 = self
            .length2
            .iter()
            .zip(&self.circles)
            .map(|(l, &c)| if c { (l * rat(4)).recip() } else { l.recip() })
            .collect();
        SynthesizedModel {
            arrangement: self.arrangement.clone(),
            length2,
            circles: self.circles.clone(),
            radius: self.radius.clone(),
        }
    }
}

fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![Rat::from_integer(0.into()); dim];
    v[i] = Rat::one();
    Vector::new(v)
}

/// Builds a model arrangement realizing the symbol, with per-family
/// lengths and circles. E-type synthesis is not provided; the
/// classification templates still recognize E diagrams.
pub fn synthesize(symbol: Symbol) -> Result<SynthesizedModel, DynkinError> {
    let n = symbol.rank();
    let radius = rat(3);
    let mk = |label: String, dir: Vector, step: Rat, phase: Rat| {
        HyperplaneFamily::new(label, dir, step, phase).expect("valid synthesis family")
    };
    match symbol {
        Symbol::A(_) => {
            let dim = n + 1;
            let mut fams = Vec::new();
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let dir = unit(dim, i).sub(&unit(dim, j));
                    fams.push(mk(format!("a{i}{j}"), dir, rat(1), rat(0)));
                }
            }
            let basis = (0..n)
                .map(|i| unit(dim, i).sub(&unit(dim, i + 1)))
                .collect();
            let chart = Chart::new(Vector::zero(dim), basis).expect("simplex chart");
            let count = fams.len();
            let arrangement = Arrangement::with_chart(dim, fams, Some(chart))?;
            Ok(SynthesizedModel {
                arrangement,
                length2: vec![rat(2); count],
                circles: vec![false; count],
                radius,
            })
        }
        Symbol::B(_) | Symbol::Bv(_) | Symbol::BBv(_) => {
            if n < 3 {
                return Err(DynkinError::BadRank(n));
            }
            let mut fams = Vec::new();
            let mut length2 = Vec::new();
            let mut circles = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    for (s, name) in [(1i64, "m"), (-1, "p")] {
                        let dir = unit(n, a).sub(&unit(n, b).scale(&rat(s)));
                        fams.push(mk(format!("{name}{a}{b}"), dir, rat(1), rat(0)));
                        length2.push(rat(2));
                        circles.push(false);
                    }
                }
            }
            for a in 0..n {
                let circ = matches!(symbol, Symbol::BBv(_));
                fams.push(mk(format!("s{a}"), unit(n, a), rat(1), rat(0)).reducible(circ));
                length2.push(if matches!(symbol, Symbol::Bv(_)) {
                    rat(4)
                } else {
                    rat(1)
                });
                circles.push(circ);
            }
            let arrangement = Arrangement::new(n, fams)?;
            Ok(SynthesizedModel {
                arrangement,
                length2,
                circles,
                radius,
            })
        }
        Symbol::C(_)
        | Symbol::Cv(_)
        | Symbol::Cp(_)
        | Symbol::CvCp(_)
        | Symbol::CpC(_)
        | Symbol::CvC(_)
        | Symbol::C2C2v => {
            // Coordinate hyperplanes split into integer and half-integer
            // subfamilies (separate Weyl orbits); diagonals unsplit.
            let (int_len, half_len, diag_len) = match symbol {
                Symbol::C(_) | Symbol::C2C2v => (rat(4), rat(4), rat(2)),
                Symbol::Cv(_) | Symbol::CvCp(_) | Symbol::CvC(_) => (rat(1), rat(1), rat(2)),
                Symbol::Cp(_) | Symbol::CpC(_) => (rat(4), rat(1), rat(2)),
                _ => unreachable!(),
            };
            let (int_circ, half_circ, diag_circ) = match symbol {
                Symbol::CvCp(_) | Symbol::CpC(_) => (false, true, false),
                Symbol::CvC(_) => (true, true, false),
                Symbol::C2C2v => (false, false, true),
                _ => (false, false, false),
            };
            let mut fams = Vec::new();
            let mut length2 = Vec::new();
            let mut circles = Vec::new();
            for a in 0..n {
                fams.push(mk(format!("i{a}"), unit(n, a), rat(1), rat(0)).reducible(int_circ));
                length2.push(int_len.clone());
                circles.push(int_circ);
                fams.push(
                    mk(format!("h{a}"), unit(n, a), rat(1), ratio(1, 2)).reducible(half_circ),
                );
                length2.push(half_len.clone());
                circles.push(half_circ);
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    for (s, name) in [(1i64, "m"), (-1, "p")] {
                        let dir = unit(n, a).sub(&unit(n, b).scale(&rat(s)));
                        fams.push(
                            mk(format!("{name}{a}{b}"), dir, rat(1), rat(0)).reducible(diag_circ),
                        );
                        length2.push(diag_len.clone());
                        circles.push(diag_circ);
                    }
                }
            }
            let arrangement = Arrangement::new(n, fams)?;
            Ok(SynthesizedModel {
                arrangement,
                length2,
                circles,
                radius,
            })
        }
        Symbol::D(_) => {
            if n < 4 {
                return Err(DynkinError::BadRank(n));
            }
            let mut fams = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    for (s, name) in [(1i64, "m"), (-1, "p")] {
                        let dir = unit(n, a).sub(&unit(n, b).scale(&rat(s)));
                        fams.push(mk(format!("{name}{a}{b}"), dir, rat(1), rat(0)));
                    }
                }
            }
            let count = fams.len();
            let arrangement = Arrangement::new(n, fams)?;
            Ok(SynthesizedModel {
                arrangement,
                length2: vec![rat(2); count],
                circles: vec![false; count],
                radius,
            })
        }
        Symbol::F4 | Symbol::F4v => {
            let (short_len, long_len) = match symbol {
                Symbol::F4 => (rat(1), rat(2)),
                _ => (rat(4), rat(2)),
            };
            let mut fams = Vec::new();
            let mut length2 = Vec::new();
            for a in 0..4 {
                fams.push(mk(format!("s{a}"), unit(4, a), rat(1), rat(0)));
                length2.push(short_len.clone());
            }
            for a in 0..4usize {
                for b in (a + 1)..4 {
                    for (s, name) in [(1i64, "m"), (-1, "p")] {
                        let dir = unit(4, a).sub(&unit(4, b).scale(&rat(s)));
                        fams.push(mk(format!("{name}{a}{b}"), dir, rat(1), rat(0)));
                        length2.push(long_len.clone());
                    }
                }
            }
            // Half-sum roots (1,+-1,+-1,+-1)/2: step 2 on the primitive
            // integer direction gives the same hyperplane set.
            for s2 in [1i64, -1] {
                for s3 in [1i64, -1] {
                    for s4 in [1i64, -1] {
                        let dir = Vector::from_ints(&[1, s2, s3, s4]);
                        fams.push(mk(format!("q{s2}{s3}{s4}"), dir, rat(2), rat(0)));
                        length2.push(short_len.clone());
                    }
                }
            }
            let count = fams.len();
            let arrangement = Arrangement::new(4, fams)?;
            Ok(SynthesizedModel {
                arrangement,
                length2,
                circles: vec![false; count],
                radius,
            })
        }
        Symbol::G2 | Symbol::G2v => {
            let (short_len, long_len) = match symbol {
                Symbol::G2 => (rat(2), rat(6)),
                _ => (rat(6), rat(2)),
            };
            let shorts = [[1i64, -1, 0], [0, 1, -1], [1, 0, -1]];
            let longs = [[2i64, -1, -1], [-1, 2, -1], [1, 1, -2]];
            let mut fams = Vec::new();
            let mut length2 = Vec::new();
            for (i, c) in shorts.iter().enumerate() {
                fams.push(mk(format!("s{i}"), Vector::from_ints(c), rat(1), rat(0)));
                length2.push(short_len.clone());
            }
            for (i, c) in longs.iter().enumerate() {
                fams.push(mk(format!("l{i}"), Vector::from_ints(c), rat(1), rat(0)));
                length2.push(long_len.clone());
            }
            let chart = Chart::new(
                Vector::zero(3),
                vec![
                    Vector::from_ints(&[1, -1, 0]),
                    Vector::from_ints(&[0, 1, -1]),
                ],
            )
            .expect("sum-zero chart");
            let count = fams.len();
            let arrangement = Arrangement::with_chart(3, fams, Some(chart))?;
            Ok(SynthesizedModel {
                arrangement,
                length2,
                circles: vec![false; count],
                radius,
            })
        }
        Symbol::E(_) => Err(DynkinError::UnsupportedSynthesis),
    }
}

/// DOT output: arrows as directed edges with a multiplicity attribute,
/// circled vertices with peripheries=2.
pub fn to_dot(diagram: &DynkinDiagram, arr: &Arrangement) -> String {
    let mut out = String::from("digraph dynkin {\n");
    for (i, w) in diagram.walls.iter().enumerate() {
        let fam = &arr.families[w.family];
        let peripheries = if diagram.shape.circles[i] { 2 } else { 1 };
        out.push_str(&format!(
            "  v{i} [label=\"{}[{}]\", peripheries={peripheries}];\n",
            fam.label, w.k
        ));
    }
    let arrows: HashMap<(usize, usize), usize> = diagram
        .arrows()
        .into_iter()
        .map(|(f, t, _)| ((f.min(t), f.max(t)), f))
        .collect();
    let n = diagram.vertex_count();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = diagram.shape.links[i][j];
            if m == 0 {
                continue;
            }
            match arrows.get(&(i, j)) {
                Some(&from) => {
                    let to = if from == i { j } else { i };
                    out.push_str(&format!("  v{from} -> v{to} [multiplicity={m}];\n"));
                }
                None => {
                    out.push_str(&format!("  v{i} -> v{j} [dir=none, multiplicity={m}];\n"));
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Plain-text rendering, one line per vertex and per link.
pub fn to_text(diagram: &DynkinDiagram, arr: &Arrangement) -> String {
    let mut out = format!("symbol: {}\n", diagram.symbol);
    for (i, w) in diagram.walls.iter().enumerate() {
        let fam = &arr.families[w.family];
        out.push_str(&format!(
            "vertex {i}: family {} index {} length2 {}{}\n",
            fam.label,
            w.k,
            diagram.shape.length2[i],
            if diagram.shape.circles[i] {
                " circled"
            } else {
                ""
            }
        ));
    }
    let arrows: HashMap<(usize, usize), usize> = diagram
        .arrows()
        .into_iter()
        .map(|(f, t, _)| ((f.min(t), f.max(t)), f))
        .collect();
    let n = diagram.vertex_count();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = diagram.shape.links[i][j];
            if m == 0 {
                continue;
            }
            let marker = match arrows.get(&(i, j)) {
                Some(&from) if from == i => format!("{i} => {j}"),
                Some(_) => format!("{j} => {i}"),
                None => format!("{i} -- {j}"),
            };
            out.push_str(&format!("link {marker} (x{m})\n"));
        }
    }
    out
}

/// Synthesizes and classifies in one step.
pub fn classify_synthesized(symbol: Symbol) -> Result<DynkinDiagram, DynkinError> {
    let model = synthesize(symbol)?;
    let window = model.window();
    dynkin(&window, &model.length2, &model.circles)
}

impl SynthesizedModel {
    /// The root system realizing the model: roots v with
    /// ||v||^2 = length2 on every hyperplane of each family, doubled on
    /// circled families. The synthesis lengths are chosen so the scaling
    /// factor is always rational.
    pub fn root_system(&self) -> crate::root_system::AffineRootSystem {
        use crate::root_system::{AffineRoot, AffineRootSystem};
        let window = self.window();
        let mut roots = Vec::new();
        for wp in &window.planes {
            let f = &self.arrangement.families[wp.family];
            let ratio = &self.length2[wp.family] / &f.direction().norm2();
            let q = rational_sqrt(&ratio).expect("synthesis lengths have rational scale");
            let v = f.direction().scale(&q);
            roots.push(AffineRoot::new(v.clone(), wp.plane.clone()));
            roots.push(AffineRoot::new(v.neg(), wp.plane.clone()));
            if self.circles[wp.family] {
                let w = v.scale(&rat(2));
                roots.push(AffineRoot::new(w.clone(), wp.plane.clone()));
                roots.push(AffineRoot::new(w.neg(), wp.plane.clone()));
            }
        }
        AffineRootSystem {
            ambient_dim: self.arrangement.dim,
            roots,
            window,
        }
    }
}

/// Square root of a rational if it is a perfect square.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    use num_traits::Signed;
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Classifies a root system by reading off its per-family length data:
/// each family's shortest root gives the reduced length, and families
/// whose hyperplanes carry a doubled root are circled.
pub fn classify_system(
    system: &crate::root_system::AffineRootSystem,
) -> Result<DynkinDiagram, DynkinError> {
    let window = &system.window;
    let arr = &window.arrangement;
    let mut lengths = Vec::with_capacity(arr.families.len());
    let mut circles = Vec::with_capacity(arr.families.len());
    for (fi, _) in arr.families.iter().enumerate() {
        let Some(wp) = window.planes.iter().find(|wp| wp.family == fi) else {
            return Err(DynkinError::Unclassified);
        };
        let mut on_plane: Vec<&crate::root_system::AffineRoot> = system
            .roots
            .iter()
            .filter(|r| r.hyperplane == wp.plane)
            .collect();
        if on_plane.is_empty() {
            return Err(DynkinError::Unclassified);
        }
        on_plane.sort_by(|a, b| a.vector.norm2().cmp(&b.vector.norm2()));
        lengths.push(on_plane[0].vector.norm2());
        circles.push(on_plane.len() > 2);
    }
    dynkin(window, &lengths, &circles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::test_windows::{a2_window, c2_window};

    #[test]
    fn templates_pairwise_distinct() {
        for rank in 2..=4 {
            let syms = symbols_of_rank(rank);
            for (i, a) in syms.iter().enumerate() {
                for b in &syms[i + 1..] {
                    let (ta, tb) = (template(*a).unwrap(), template(*b).unwrap());
                    assert!(!isomorphic(&ta, &tb), "templates {a} and {b} collide");
                }
            }
        }
    }

    #[test]
    fn symbol_parse_round_trip() {
        for s in [
            Symbol::A(3),
            Symbol::B(4),
            Symbol::Bv(3),
            Symbol::C(2),
            Symbol::Cv(3),
            Symbol::Cp(2),
            Symbol::D(4),
            Symbol::E(7),
            Symbol::F4,
            Symbol::F4v,
            Symbol::G2,
            Symbol::G2v,
            Symbol::BBv(3),
            Symbol::CvCp(2),
            Symbol::CpC(3),
            Symbol::CvC(4),
            Symbol::C2C2v,
        ] {
            assert_eq!(Symbol::parse(&s.to_string()), Some(s), "{s}");
        }
        assert_eq!(Symbol::parse("A~1"), None);
        assert_eq!(Symbol::parse("Z~9"), None);
    }

    #[test]
    fn a2_window_classifies() {
        let w = a2_window(3);
        let nfam = w.arrangement.families.len();
        let d = dynkin(&w, &vec![rat(2); nfam], &vec![false; nfam]).unwrap();
        assert_eq!(d.symbol, Symbol::A(2));
        assert_eq!(vertex_orbits(&d).len(), 1);
    }

    #[test]
    fn c2_window_classifies_with_canonical_lengths() {
        let w = c2_window(3);
        // Coordinate subfamilies have union spacing 1/2 (length^2 4),
        // diagonals spacing 1 (length^2 2).
        let lengths = vec![rat(4), rat(4), rat(4), rat(4), rat(2), rat(2)];
        let d = dynkin(&w, &lengths, &vec![false; 6]).unwrap();
        assert_eq!(d.symbol, Symbol::C(2));
        assert_eq!(vertex_orbits(&d).len(), 3);
    }

    #[test]
    fn invariance_error_on_orbit_mismatch() {
        let w = c2_window(3);
        // x-integer and y-integer families are conjugate; differ them.
        let lengths = vec![rat(4), rat(4), rat(8), rat(4), rat(2), rat(2)];
        assert!(matches!(
            dynkin(&w, &lengths, &vec![false; 6]),
            Err(DynkinError::NotInvariant(..))
        ));
    }

    #[test]
    fn ratio_rule_enforced() {
        // Equal lengths across a double link violate the ratio rule.
        let w = c2_window(3);
        let lengths = vec![rat(2); 6];
        assert!(matches!(
            dynkin(&w, &lengths, &vec![false; 6]),
            Err(DynkinError::BadRatio(..))
        ));
    }

    #[test]
    fn circle_rule_enforced() {
        let w = c2_window(3);
        // Circling the long extremal family (arrows point away) is illegal.
        let lengths = vec![rat(4), rat(4), rat(4), rat(4), rat(2), rat(2)];
        let circles = vec![true, false, true, false, false, false];
        assert!(matches!(
            dynkin(&w, &lengths, &circles),
            Err(DynkinError::BadCircle(_))
        ));
    }

    #[test]
    fn synthesized_round_trips_small() {
        for symbol in [
            Symbol::A(2),
            Symbol::C(2),
            Symbol::Cv(2),
            Symbol::Cp(2),
            Symbol::G2,
            Symbol::G2v,
            Symbol::B(3),
            Symbol::CvCp(2),
            Symbol::C2C2v,
        ] {
            let d = classify_synthesized(symbol).unwrap();
            assert_eq!(d.symbol, symbol);
        }
    }

    #[test]
    fn dual_lengths_reverse_arrows() {
        let model = synthesize(Symbol::C(3)).unwrap();
        let w = model.window();
        let d = dynkin(&w, &model.length2, &model.circles).unwrap();
        let dd = dynkin(&w, &model.dualized().length2, &model.circles).unwrap();
        assert_eq!(d.symbol, Symbol::C(3));
        assert_eq!(dd.symbol, Symbol::Cv(3));
        let mut fwd: Vec<(usize, usize)> = d.arrows().iter().map(|&(a, b, _)| (a, b)).collect();
        let mut rev: Vec<(usize, usize)> = dd.arrows().iter().map(|&(a, b, _)| (b, a)).collect();
        fwd.sort_unstable();
        rev.sort_unstable();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn orbit_counts_match_table() {
        let cases: Vec<(Symbol, usize)> = vec![
            (Symbol::A(2), 1),
            (Symbol::A(3), 1),
            (Symbol::D(4), 1),
            (Symbol::B(3), 2),
            (Symbol::F4, 2),
            (Symbol::G2, 2),
            (Symbol::C(2), 3),
            (Symbol::C(3), 3),
        ];
        for (symbol, expect) in cases {
            let d = classify_synthesized(symbol).unwrap();
            assert_eq!(vertex_orbits(&d).len(), expect, "{symbol}");
        }
    }

    #[test]
    fn canonical_lengths_recover_weyl_symbol() {
        // The canonical system of an arrangement carries the symbol of
        // its Weyl group: length variants share hyperplanes, so their
        // canonical classification is the base symbol.
        for (variant, base) in [
            (Symbol::A(2), Symbol::A(2)),
            (Symbol::B(3), Symbol::B(3)),
            (Symbol::Bv(3), Symbol::B(3)),
            (Symbol::C(3), Symbol::C(3)),
            (Symbol::Cv(3), Symbol::C(3)),
            (Symbol::Cp(3), Symbol::C(3)),
            (Symbol::D(4), Symbol::D(4)),
            (Symbol::F4, Symbol::F4),
            (Symbol::F4v, Symbol::F4),
            (Symbol::G2, Symbol::G2),
            (Symbol::G2v, Symbol::G2),
        ] {
            let model = synthesize(variant).unwrap();
            let window = model.window();
            let arr = &window.arrangement;
            let canonical: Vec<Rat> = arr
                .families
                .iter()
                .map(|f| {
                    let gap = arr.min_gap_in_direction(f.direction()).unwrap();
                    f.direction().norm2() / (&gap * &gap)
                })
                .collect();
            let d = dynkin(&window, &canonical, &vec![false; canonical.len()]).unwrap();
            assert_eq!(d.symbol, base, "canonical of {variant}");
        }
    }

    #[test]
    fn nonreduced_system_reduce_and_coreduce_classify() {
        // A (C~2v, C~2')-type system: reduce keeps the short roots and
        // classifies C~2v; co-reduce keeps the doubled ones at circled
        // hyperplanes and classifies C~2'.
        let model = synthesize(Symbol::CvCp(2)).unwrap();
        let system = model.root_system();
        assert!(system.validate().unwrap().all_pass());
        let multiples = system.parallel_multiples();
        for m in &multiples {
            let ok = [rat(1), rat(-1), rat(2), rat(-2), ratio(1, 2), ratio(-1, 2)];
            assert!(ok.contains(m), "parallel multiple {m}");
        }
        assert!(multiples.contains(&rat(2)), "system is nonreduced");

        let red = system.reduce();
        assert!(red.validate().unwrap().all_pass());
        assert_eq!(classify_system(&red).unwrap().symbol, Symbol::Cv(2));
        assert_eq!(red.reduce().roots.len(), red.roots.len());

        let cored = system.co_reduce();
        assert!(cored.validate().unwrap().all_pass());
        assert_eq!(classify_system(&cored).unwrap().symbol, Symbol::Cp(2));

        // The full nonreduced system itself carries the pair symbol.
        assert_eq!(classify_system(&system).unwrap().symbol, Symbol::CvCp(2));
    }

    #[test]
    fn a3_restricts_to_a2() {
        // Restriction to the plane of two single-linked wall directions.
        let model = synthesize(Symbol::A(3)).unwrap();
        let system = model.root_system();
        let chart = crate::arrangement::Chart::new(
            crate::geometry::Vector::zero(4),
            vec![
                crate::geometry::Vector::from_ints(&[1, -1, 0, 0]),
                crate::geometry::Vector::from_ints(&[0, 1, -1, 0]),
            ],
        )
        .unwrap();
        let restricted = system.restrict(&chart).unwrap();
        assert!(restricted.validate().unwrap().all_pass());
        assert_eq!(classify_system(&restricted).unwrap().symbol, Symbol::A(2));
    }

    #[test]
    fn dot_output_mentions_peripheries() {
        let model = synthesize(Symbol::C2C2v).unwrap();
        let w = model.window();
        let d = dynkin(&w, &model.length2, &model.circles).unwrap();
        let dot = to_dot(&d, &w.arrangement);
        assert!(dot.contains("peripheries=2"));
        assert!(dot.contains("digraph"));
    }
}
