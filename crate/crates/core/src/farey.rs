//! Exact `SL(2,Z)` arithmetic, Farey-tessellation predicates, and
//! `RL`-factorization of hyperbolic monodromies.
//!
//! Generator convention (everything downstream depends on it):
//!
//! ```text
//! R = [1 1]      L = [1 0]
//!     [0 1]          [1 1]
//! ```
//!
//! A monodromy word is a cyclic positive word over `{R, L}` together with a
//! sign; it is stored in its canonical rotation (lexicographically least
//! with `R < L`). Words containing both letters are exactly the hyperbolic
//! (pseudo-Anosov) conjugacy classes with positive trace.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FareyError {
    #[error("slope {0}/{1} is not reduced or is 0/0")]
    InvalidSlope(i64, i64),
    #[error("slopes are not Farey neighbours")]
    NotNeighbours,
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("matrix has trace {0}; |trace| <= 2 is periodic or reducible, not hyperbolic")]
    NotHyperbolic(i64),
    #[error("monodromy word is empty")]
    EmptyWord,
    #[error("cannot parse {0:?}: {1}")]
    Parse(String, &'static str),
}

/// One generator letter of a monodromy word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    R,
    L,
}

impl Letter {
    pub fn matrix(self) -> UnimodularMatrix {
        match self {
            Letter::R => UnimodularMatrix { a: 1, b: 1, c: 0, d: 1 },
            Letter::L => UnimodularMatrix { a: 1, b: 0, c: 1, d: 1 },
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::R => Letter::L,
            Letter::L => Letter::R,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::R => "R",
            Letter::L => "L",
        })
    }
}

/// Sign of a monodromy: `-1` means the word matrix is negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A slope `p/q` in canonical form: `gcd(|p|,|q|) = 1` and `q > 0`, or
/// `(1,0)` for the slope at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Slope, FareyError> {
        if p == 0 && q == 0 {
            return Err(FareyError::InvalidSlope(p, q));
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn infinity() -> Slope {
        Slope { p: 1, q: 0 }
    }

    /// Slope of the primitive integer vector `(p, q)`.
    pub fn of_vector(v: [i64; 2]) -> Result<Slope, FareyError> {
        Slope::new(v[0], v[1])
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Two slopes are Farey neighbours iff the corresponding arcs on the
/// once-punctured torus can be isotoped off each other.
pub fn is_farey_neighbor(s1: Slope, s2: Slope) -> bool {
    (s1.p * s2.q - s2.p * s1.q).abs() == 1
}

/// Farey mediant of two neighbouring slopes.
pub fn mediant(s1: Slope, s2: Slope) -> Result<Slope, FareyError> {
    if !is_farey_neighbor(s1, s2) {
        return Err(FareyError::NotNeighbours);
    }
    // Orient both representatives into a common half plane first, so the
    // mediant vector cannot cancel.
    let (p2, q2) = if s1.p * s2.p + s1.q * s2.q >= 0 {
        (s2.p, s2.q)
    } else {
        (-s2.p, -s2.q)
    };
    Slope::new(s1.p + p2, s1.q + q2)
}

/// A 2x2 integer matrix of determinant one, row major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, FareyError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(FareyError::NotUnimodular(det));
        }
        Ok(UnimodularMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        UnimodularMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> UnimodularMatrix {
        UnimodularMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Image of an integer vector under the matrix.
    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Parse the `a,b;c,d` syntax used on the command line.
    pub fn parse(s: &str) -> Result<Self, FareyError> {
        let err = |m| FareyError::Parse(s.to_string(), m);
        let mut rows = s.split(';');
        let r0 = rows.next().ok_or_else(|| err("missing first row"))?;
        let r1 = rows.next().ok_or_else(|| err("missing second row"))?;
        if rows.next().is_some() {
            return Err(err("more than two rows"));
        }
        let parse_row = |r: &str| -> Result<(i64, i64), FareyError> {
            let mut it = r.split(',');
            let x = it
                .next()
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| err("bad integer entry"))?;
            let y = it
                .next()
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| err("bad integer entry"))?;
            if it.next().is_some() {
                return Err(err("more than two entries in a row"));
            }
            Ok((x, y))
        };
        let (a, b) = parse_row(r0)?;
        let (c, d) = parse_row(r1)?;
        UnimodularMatrix::new(a, b, c, d)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// A cyclic positive word over `{R, L}` with a sign, stored in canonical
/// rotation (lexicographically least with `R < L`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyWord {
    letters: Vec<Letter>,
    sign: Sign,
}

impl MonodromyWord {
    pub fn new(letters: Vec<Letter>, sign: Sign) -> Result<Self, FareyError> {
        if letters.is_empty() {
            return Err(FareyError::EmptyWord);
        }
        Ok(MonodromyWord { letters: canonical_rotation(&letters), sign })
    }

    /// Parse a word string: letters over `{R, L}`, optional leading `-`.
    pub fn parse(s: &str) -> Result<Self, FareyError> {
        let err = |m| FareyError::Parse(s.to_string(), m);
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest),
            None => (Sign::Plus, s),
        };
        let mut letters = Vec::with_capacity(body.len());
        for ch in body.chars() {
            match ch {
                'R' | 'r' => letters.push(Letter::R),
                'L' | 'l' => letters.push(Letter::L),
                _ => return Err(err("expected letters R and L only")),
            }
        }
        if letters.is_empty() {
            return Err(FareyError::EmptyWord);
        }
        MonodromyWord::new(letters, sign)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True iff the word contains both letters, i.e. the monodromy is
    /// hyperbolic (trace at least 3 up to sign).
    pub fn has_both_letters(&self) -> bool {
        self.letters.contains(&Letter::R) && self.letters.contains(&Letter::L)
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            f.write_str("-")?;
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Lexicographically least rotation, with `R < L`.
pub fn canonical_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    let mut best = 0usize;
    for start in 1..n {
        for off in 0..n {
            let x = letters[(start + off) % n];
            let y = letters[(best + off) % n];
            if x != y {
                if x < y {
                    best = start;
                }
                break;
            }
        }
    }
    (0..n).map(|i| letters[(best + i) % n]).collect()
}

/// Product of the generator matrices in word order, times the sign.
pub fn matrix_of_word(w: &MonodromyWord) -> UnimodularMatrix {
    let mut m = UnimodularMatrix::identity();
    for l in w.letters() {
        m = m.mul(&l.matrix());
    }
    if w.sign() == Sign::Minus {
        m = m.neg();
    }
    m
}

/// Recover the cyclic `RL`-word of a hyperbolic matrix, up to conjugacy.
///
/// The word is read from the attracting fixed point of the matrix on the
/// boundary circle: its continued fraction expansion is eventually
/// periodic, the convergents conjugate the matrix into the non-negative
/// cone, and a non-negative determinant-one matrix peels uniquely as a
/// positive word in `R` and `L`.
pub fn factorize(m: &UnimodularMatrix) -> Result<MonodromyWord, FareyError> {
    if m.det() != 1 {
        return Err(FareyError::NotUnimodular(m.det()));
    }
    let tr = m.trace();
    if tr.abs() <= 2 {
        return Err(FareyError::NotHyperbolic(tr));
    }
    let (pos, sign) = if tr > 0 { (*m, Sign::Plus) } else { (m.neg(), Sign::Minus) };
    let letters = positive_word_of(&pos);
    debug_assert!(letters.contains(&Letter::R) && letters.contains(&Letter::L));
    MonodromyWord::new(letters, sign)
}

/// Word of a hyperbolic matrix with trace >= 3, up to conjugacy.
fn positive_word_of(m: &UnimodularMatrix) -> Vec<Letter> {
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let t = a + d;
    debug_assert!(t >= 3);
    // Hyperbolic matrices are never triangular over the integers.
    debug_assert!(c != 0 && b != 0);
    let disc = t * t - 4;

    // Continued fraction of the attracting fixed point (a-d+sqrt(D))/(2c),
    // as exact quadratic surd states (P + sqrt(D))/Q.
    let mut p = a - d;
    let mut q = 2 * c;
    let mut states: Vec<(i128, i128)> = Vec::new();
    let mut quotients: Vec<i128> = Vec::new();
    let (pre, period) = loop {
        if let Some(start) = states.iter().position(|&s| s == (p, q)) {
            break (start, states.len() - start);
        }
        states.push((p, q));
        let fl = surd_floor(p, disc, q);
        quotients.push(fl);
        let p2 = p - fl * q;
        p = -p2;
        q = (disc - p2 * p2) / q;
    };

    // Walk down the expansion; the convergent matrices conjugate m into the
    // non-negative monoid freely generated by R and L.
    let bound = pre + 2 * period + 4;
    let mut g = Mat128::identity();
    for n in 0..=bound {
        let gm = g.inverse_det1().mul(&Mat128 { a, b, c, d }).mul(&g);
        if gm.non_negative() {
            if let Some(word) = peel_word(&gm) {
                if word.contains(&Letter::R) && word.contains(&Letter::L) {
                    return canonical_rotation(&word);
                }
            }
        }
        if n < quotients.len() {
            let letter = if n % 2 == 0 { Letter::R } else { Letter::L };
            g = g.mul(&Mat128::generator_power(letter, quotients[n]));
        } else {
            // Regenerate quotients past the detected cycle.
            let k = pre + (n - pre) % period;
            let letter = if n % 2 == 0 { Letter::R } else { Letter::L };
            g = g.mul(&Mat128::generator_power(letter, quotients[k]));
        }
    }
    unreachable!("conjugation into the non-negative cone must succeed within the period bound");
}

/// floor((P + sqrt(D))/Q) for non-square D > 0, Q != 0.
fn surd_floor(p: i128, d: i128, q: i128) -> i128 {
    let s = isqrt(d);
    if q > 0 {
        (p + s).div_euclid(q)
    } else {
        (-p - s - 1).div_euclid(-q)
    }
}

fn isqrt(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[derive(Clone, Copy)]
struct Mat128 {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
}

impl Mat128 {
    fn identity() -> Self {
        Mat128 { a: 1, b: 0, c: 0, d: 1 }
    }

    fn generator_power(letter: Letter, n: i128) -> Self {
        match letter {
            Letter::R => Mat128 { a: 1, b: n, c: 0, d: 1 },
            Letter::L => Mat128 { a: 1, b: 0, c: n, d: 1 },
        }
    }

    fn mul(&self, o: &Mat128) -> Mat128 {
        Mat128 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    fn inverse_det1(&self) -> Mat128 {
        Mat128 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    fn non_negative(&self) -> bool {
        self.a >= 0 && self.b >= 0 && self.c >= 0 && self.d >= 0
    }
}

/// Unique factorization of a non-negative determinant-one matrix as a word
/// in R and L; `None` only if the matrix is not in the free monoid (which
/// cannot happen for determinant one and non-negative entries).
fn peel_word(m: &Mat128) -> Option<Vec<Letter>> {
    let Mat128 { mut a, mut b, mut c, mut d } = *m;
    let mut word = Vec::new();
    loop {
        if a == 1 && d == 1 && b == 0 && c == 0 {
            return Some(word);
        }
        if a >= c && b >= d && (a > c || b > d) && c + d > 0 {
            word.push(Letter::R);
            a -= c;
            b -= d;
        } else if c >= a && d >= b && a + b > 0 {
            word.push(Letter::L);
            c -= a;
            d -= b;
        } else {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn word(s: &str) -> MonodromyWord {
        MonodromyWord::parse(s).unwrap()
    }

    #[test]
    fn farey_neighbor_examples() {
        assert!(is_farey_neighbor(slope(0, 1), slope(1, 0)));
        assert!(is_farey_neighbor(slope(0, 1), slope(1, 1)));
        assert!(!is_farey_neighbor(slope(1, 2), slope(1, 0)));
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(mediant(slope(0, 1), slope(1, 0)).unwrap(), slope(1, 1));
        assert_eq!(mediant(slope(1, 1), slope(1, 0)).unwrap(), slope(2, 1));
        assert_eq!(mediant(slope(1, 2), slope(1, 3)).unwrap(), slope(2, 5));
        assert_eq!(mediant(slope(1, 2), slope(1, 1)).unwrap(), slope(2, 3));
        assert_eq!(mediant(slope(1, 3), slope(1, 1)), Err(FareyError::NotNeighbours));
    }

    #[test]
    fn mediant_is_neighbor_of_both() {
        // Small exhaustive sweep over canonical slopes.
        let mut slopes = vec![Slope::infinity()];
        for q in 1..=6i64 {
            for p in -6..=6i64 {
                if gcd(p.unsigned_abs(), q as u64) == 1 {
                    slopes.push(slope(p, q));
                }
            }
        }
        for &s1 in &slopes {
            for &s2 in &slopes {
                if s1 != s2 && is_farey_neighbor(s1, s2) {
                    let m = mediant(s1, s2).unwrap();
                    assert!(is_farey_neighbor(m, s1), "{s1} {s2} -> {m}");
                    assert!(is_farey_neighbor(m, s2), "{s1} {s2} -> {m}");
                }
            }
        }
    }

    #[test]
    fn matrix_of_word_examples() {
        assert_eq!(matrix_of_word(&word("RL")), UnimodularMatrix::new(2, 1, 1, 1).unwrap());
        assert_eq!(matrix_of_word(&word("RRLL")), UnimodularMatrix::new(5, 2, 2, 1).unwrap());
        let m = matrix_of_word(&word("-R"));
        assert_eq!((m.a, m.b, m.c, m.d), (-1, -1, 0, -1));
    }

    #[test]
    fn canonical_rotation_least() {
        assert_eq!(word("LR"), word("RL"));
        assert_eq!(word("LRR"), word("RRL"));
        assert_eq!(word("RLRL").letters(), word("LRLR").letters());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(&UnimodularMatrix::new(2, 1, 1, 1).unwrap()).unwrap(), word("RL"));
        assert_eq!(factorize(&UnimodularMatrix::new(5, 2, 2, 1).unwrap()).unwrap(), word("RRLL"));
        assert_eq!(
            factorize(&UnimodularMatrix::new(1, 1, 0, 1).unwrap()),
            Err(FareyError::NotHyperbolic(2))
        );
    }

    #[test]
    fn factorize_round_trip_short_words() {
        // Exhaustive over cyclic words of length <= 8 with both letters.
        for len in 2..=8usize {
            for bits in 1..(1u32 << len) - 1 {
                let letters: Vec<Letter> = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { Letter::L } else { Letter::R })
                    .collect();
                for sign in [Sign::Plus, Sign::Minus] {
                    let w = MonodromyWord::new(letters.clone(), sign).unwrap();
                    let m = matrix_of_word(&w);
                    assert!(m.trace().abs() >= 3, "trace positivity for {w}");
                    assert_eq!(factorize(&m).unwrap(), w, "round trip for {w}");
                }
            }
        }
    }

    /// Independent conjugacy oracle: exhaustive search for g in SL(2,Z)
    /// with entries bounded by 50 such that g m g^{-1} = m2.
    fn conjugate_by_search(m: &UnimodularMatrix, m2: &UnimodularMatrix) -> bool {
        const BOUND: i64 = 50;
        for a in -BOUND..=BOUND {
            for b in -BOUND..=BOUND {
                for c in -BOUND..=BOUND {
                    let d = if a != 0 {
                        if (1 + b * c) % a != 0 {
                            continue;
                        }
                        (1 + b * c) / a
                    } else {
                        if b * c != -1 {
                            continue;
                        }
                        0
                    };
                    if d.abs() > BOUND {
                        continue;
                    }
                    let g = UnimodularMatrix { a, b, c, d };
                    if g.mul(m).mul(&g.inverse()) == *m2 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn factorize_agrees_with_conjugacy_oracle() {
        for (m, expect) in [
            (UnimodularMatrix::new(2, 1, 1, 1).unwrap(), "RL"),
            (UnimodularMatrix::new(5, 2, 2, 1).unwrap(), "RRLL"),
        ] {
            let w = factorize(&m).unwrap();
            assert_eq!(w, word(expect));
            assert!(
                conjugate_by_search(&matrix_of_word(&w), &m),
                "oracle fails to confirm conjugacy for {expect}"
            );
        }
    }

    #[test]
    fn factorize_conjugation_invariance() {
        let g = UnimodularMatrix::new(3, 2, 1, 1).unwrap();
        for s in ["RL", "RRL", "RLLLR", "RRLRLL"] {
            let w = word(s);
            let m = matrix_of_word(&w);
            let conj = g.mul(&m).mul(&g.inverse());
            assert_eq!(factorize(&conj).unwrap(), w);
        }
    }

    #[test]
    fn parse_matrix_syntax() {
        let m = UnimodularMatrix::parse("2,1;1,1").unwrap();
        assert_eq!(m, UnimodularMatrix::new(2, 1, 1, 1).unwrap());
        assert!(UnimodularMatrix::parse("2,1;1").is_err());
        assert!(UnimodularMatrix::parse("1,1;1,1").is_err());
    }

    #[test]
    fn slope_canonical_form() {
        assert_eq!(slope(2, -4), slope(-1, 2));
        assert_eq!(slope(-3, 0), Slope::infinity());
        assert!(Slope::new(0, 0).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = (Vec<Letter>, Sign)> {
            (
                proptest::collection::vec(any::<bool>(), 2..=12).prop_filter(
                    "both letters",
                    |bits| bits.iter().any(|&b| b) && bits.iter().any(|&b| !b),
                ),
                any::<bool>(),
            )
                .prop_map(|(bits, s)| {
                    (
                        bits.iter()
                            .map(|&b| if b { Letter::L } else { Letter::R })
                            .collect(),
                        if s { Sign::Plus } else { Sign::Minus },
                    )
                })
        }

        proptest! {
            #[test]
            fn factorize_round_trips((letters, sign) in word_strategy()) {
                let w = MonodromyWord::new(letters.clone(), sign).unwrap();
                let expect =
                    MonodromyWord::new(canonical_rotation(&letters), sign).unwrap();
                prop_assert_eq!(factorize(&matrix_of_word(&w)).unwrap(), expect);
            }

            #[test]
            fn canonical_rotation_is_cyclic_invariant(
                (letters, _) in word_strategy(),
                shift in 0usize..12,
            ) {
                let mut rotated = letters.clone();
                rotated.rotate_left(shift % letters.len());
                prop_assert_eq!(
                    canonical_rotation(&rotated),
                    canonical_rotation(&letters)
                );
            }

            #[test]
            fn mediant_neighbours_both_parents(gens in proptest::collection::vec(0u8..4, 0..10)) {
                // The columns of any SL(2,Z) matrix are Farey neighbours.
                let mut g = UnimodularMatrix::identity();
                for k in gens {
                    let step = match k {
                        0 => Letter::R.matrix(),
                        1 => Letter::L.matrix(),
                        2 => Letter::R.matrix().inverse(),
                        _ => Letter::L.matrix().inverse(),
                    };
                    g = g.mul(&step);
                }
                let s1 = Slope::of_vector([g.a, g.c]).unwrap();
                let s2 = Slope::of_vector([g.b, g.d]).unwrap();
                let m = mediant(s1, s2).unwrap();
                prop_assert!(is_farey_neighbor(m, s1));
                prop_assert!(is_farey_neighbor(m, s2));
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}
