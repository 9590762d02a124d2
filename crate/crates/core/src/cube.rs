//! Points and index subsets of the Boolean cube `{-1,+1}^d`.
//!
//! Both types are bit-packed. The frozen convention is: **bit `j` set means
//! coordinate `x_{j+1} = -1`**, so every parity reduces to a popcount and the
//! serialized mask integers in dataset/distribution/model files all share one
//! encoding. Subset bits are 0-based internally; displayed sets are 1-based
//! (`{1,4,7}`) to match the usual index-set notation.

use std::fmt;

use crate::error::{Error, Result};

/// Largest dimension for bit-packed points and subsets.
pub const MAX_POINT_DIM: usize = 24;

/// Largest dimension for explicit `2^(d+1)` probability tables; the exact
/// oracles materialize these, which is what caps `d`.
pub const MAX_TABLE_DIM: usize = 20;

/// A point of `{-1,+1}^d`. Bit `j` set means coordinate `j` is `-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubePoint {
    bits: u32,
    dim: u8,
}

impl CubePoint {
    pub fn new(bits: u32, dim: usize) -> Result<Self> {
        check_dim(dim, MAX_POINT_DIM)?;
        if bits >> dim != 0 {
            return Err(Error::Invalid(format!(
                "point bits {bits:#x} have a set bit at/above dimension {dim}"
            )));
        }
        Ok(CubePoint {
            bits,
            dim: dim as u8,
        })
    }

    /// Build from explicit coordinates (`+1`/`-1`), coordinate 0 first.
    pub fn from_coords(coords: &[i8]) -> Result<Self> {
        check_dim(coords.len(), MAX_POINT_DIM)?;
        let mut bits = 0u32;
        for (j, &c) in coords.iter().enumerate() {
            match c {
                1 => {}
                -1 => bits |= 1 << j,
                other => return Err(Error::BadLabel(other as i32)),
            }
        }
        CubePoint::new(bits, coords.len())
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `j` (0-based), exactly `+1` or `-1`.
    ///
    /// Panics if `j >= dim`.
    pub fn coord(&self, j: usize) -> i8 {
        assert!(j < self.dim(), "coordinate {j} out of range");
        if self.bits >> j & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Restriction pattern `x^J`: the bits of `x` at the positions of `j`,
    /// compacted LSB-first. The result indexes the `2^|J|` cells of `J`.
    pub fn restrict(&self, j: SubsetMask) -> u32 {
        debug_assert_eq!(self.dim, j.dim);
        let mut pattern = 0u32;
        let mut rest = j.bits;
        let mut out = 0;
        while rest != 0 {
            let pos = rest.trailing_zeros();
            pattern |= (self.bits >> pos & 1) << out;
            out += 1;
            rest &= rest - 1;
        }
        pattern
    }
}

impl fmt::Debug for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubePoint(d={}, ", self.dim)?;
        for j in 0..self.dim() {
            write!(f, "{}", if self.coord(j) == 1 { '+' } else { '-' })?;
        }
        write!(f, ")")
    }
}

/// A subset `S` of the `d` coordinate indices, as a `d`-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    dim: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, dim: usize) -> Result<Self> {
        check_dim(dim, MAX_POINT_DIM)?;
        if bits >> dim != 0 {
            return Err(Error::Invalid(format!(
                "subset bits {bits:#x} have a set bit at/above dimension {dim}"
            )));
        }
        Ok(SubsetMask {
            bits,
            dim: dim as u8,
        })
    }

    /// The empty set. Panics on an invalid dimension.
    pub fn empty(dim: usize) -> Self {
        SubsetMask::new(0, dim).expect("valid dimension")
    }

    /// All `d` indices. Panics on an invalid dimension.
    pub fn full(dim: usize) -> Self {
        SubsetMask::new(((1u64 << dim) - 1) as u32, dim).expect("valid dimension")
    }

    /// Build from 1-based indices, e.g. `[1, 4, 7]`.
    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        check_dim(dim, MAX_POINT_DIM)?;
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > dim {
                return Err(Error::Invalid(format!(
                    "index {i} outside 1..={dim} in subset"
                )));
            }
            bits |= 1 << (i - 1);
        }
        SubsetMask::new(bits, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `|S|`.
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Membership of 0-based position `j`.
    pub fn contains(&self, j: usize) -> bool {
        j < self.dim() && self.bits >> j & 1 == 1
    }

    pub fn is_subset_of(&self, other: SubsetMask) -> bool {
        self.dim == other.dim && self.bits & !other.bits == 0
    }

    /// Symmetric difference `S (delta) T`.
    pub fn sym_diff(&self, other: SubsetMask) -> Result<SubsetMask> {
        check_same_dim(self.dim(), other.dim())?;
        SubsetMask::new(self.bits ^ other.bits, self.dim())
    }

    /// All submasks of `self` in ascending numeric order (starts at the
    /// empty set, ends at `self`).
    pub fn subsets(&self) -> Submasks {
        Submasks {
            of: *self,
            next: Some(0),
        }
    }

    /// Spread a compact pattern over `|S|` bits back onto the positions of
    /// the set: bit `l` of `compact` goes to the `l`-th smallest member.
    pub fn spread(&self, compact: u32) -> SubsetMask {
        debug_assert!(compact >> self.len() == 0);
        let mut out = 0u32;
        let mut rest = self.bits;
        let mut l = 0;
        while rest != 0 {
            let pos = rest.trailing_zeros();
            out |= (compact >> l & 1) << pos;
            l += 1;
            rest &= rest - 1;
        }
        SubsetMask {
            bits: out,
            dim: self.dim,
        }
    }

    /// 1-based member indices, ascending.
    pub fn one_based_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| self.contains(j))
            .map(|j| j + 1)
            .collect()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask(d={}, {self})", self.dim)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.one_based_indices() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Iterator over submasks in ascending numeric order.
pub struct Submasks {
    of: SubsetMask,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        let item = SubsetMask {
            bits: cur,
            dim: self.of.dim,
        };
        if cur == self.of.bits {
            self.next = None;
        } else {
            // Next submask of `m` above `cur` is ((cur - m) & m) truncated to
            // u32 arithmetic; the standard subset-enumeration step.
            self.next = Some(cur.wrapping_sub(self.of.bits) & self.of.bits);
        }
        Some(item)
    }
}

/// The parity (character) `chi_S(x) = prod_{j in S} x_j`, computed as
/// `(-1)^popcount(S & x)` under the bit-means-minus-one convention.
pub fn chi_eval(s: SubsetMask, x: CubePoint) -> Result<i8> {
    check_same_dim(s.dim(), x.dim())?;
    Ok(chi_eval_bits(s.bits, x.bits))
}

/// Parity on raw masks; callers guarantee matching dimensions.
#[inline]
pub(crate) fn chi_eval_bits(s: u32, x: u32) -> i8 {
    if (s & x).count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Which subset sizes to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumMode {
    /// All subsets with exactly `k` elements.
    ExactlyK,
    /// All subsets with at most `k` elements.
    UpToK,
}

/// All subsets of `{0,..,d-1}` of size exactly/at most `k`, in ascending
/// numeric-mask order. The order is the frozen tie-breaking order for
/// subset selection.
pub fn enumerate_subsets(d: usize, k: usize, mode: EnumMode) -> Result<Vec<SubsetMask>> {
    check_dim(d, MAX_POINT_DIM)?;
    if k > d {
        return Err(Error::SubsetTooLarge { k, d });
    }
    let mut out: Vec<SubsetMask> = Vec::new();
    match mode {
        EnumMode::ExactlyK => push_exactly(d, k, &mut out),
        EnumMode::UpToK => {
            for l in 0..=k {
                push_exactly(d, l, &mut out);
            }
            out.sort_unstable_by_key(|m| m.bits);
        }
    }
    Ok(out)
}

/// Gosper's hack: fixed-popcount masks in ascending order.
fn push_exactly(d: usize, k: usize, out: &mut Vec<SubsetMask>) {
    if k == 0 {
        out.push(SubsetMask::empty(d));
        return;
    }
    let limit: u64 = 1u64 << d;
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(SubsetMask {
            bits: v as u32,
            dim: d as u8,
        });
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
}

/// Binomial coefficient as usize; saturates are not needed at cube scale.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num as usize
}

fn check_dim(dim: usize, max: usize) -> Result<()> {
    if dim == 0 || dim > max {
        Err(Error::BadDim { dim, max })
    } else {
        Ok(())
    }
}

pub(crate) fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::DimMismatch { left, right })
    } else {
        Ok(())
    }
}
