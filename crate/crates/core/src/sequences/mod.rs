//! Exact, resumable generators for every sequence family.
//!
//! A [`SequenceId`] names a family with its parameters and has a canonical
//! text form such as `primes_in_ap[13,46]`, `hypothesis_h[x,2x+1]` or
//! `prefix_sum[proth]`. [`open`] validates the parameters and returns a
//! [`SequenceStream`] of [`Term`]s; [`SequenceStream::state`] and [`restore`]
//! snapshot and resume a stream bit-exactly.
//!
//! Prime-type and integer lists are 1-based. Combinatorial families and the
//! partition functions keep their 0-based definitions. Bernoulli, Euler,
//! tangent, harmonic and irreducible-count sequences start at 1. A prefix sum
//! has the base of its inner sequence.

pub mod combinatorial;
pub mod integers;
pub mod poly;
pub mod prefix;
pub mod primes;
pub mod special;
pub mod state;
pub mod window;
pub mod zigzag;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::kernel::ExactScalar;
use combinatorial::{BinomialSum, BinomialSums, ThreeTerm, ThreeTermRecurrence};
use integers::{IrreducibleCounts, SquarefreeSource, TwoSquareSource};
pub use poly::IntPoly;
use primes::{ApSource, PrimeSource, PrimitiveRootSource};
use special::{HypothesisHSource, PolyFormSource, ProthSource};
pub use state::{GeneratorState, StateReader, StateWriter};
use window::WindowStream;

/// Primes up to this bound are checked for a fixed divisor of a
/// Hypothesis-H system.
pub const FIXED_DIVISOR_BOUND: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("bad generator state: {0}")]
    BadState(String),
    #[error("the prime {prime} divides the product of the polynomials at every integer")]
    FixedDivisor { prime: u64 },
}

/// A family-specific producer of successive values.
pub trait Generator: Send {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError>;
    /// Append the fields needed to resume after the last produced value.
    fn encode(&self, w: &mut StateWriter);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SequenceId {
    Primes,
    PrimesInAp { a: u64, q: u64 },
    PrimitiveRootPrimes { a: i64 },
    Proth,
    PolyForm(IntPoly),
    HypothesisH(Vec<IntPoly>),
    Squarefree,
    TwoSquare { d: u64 },
    Partitions,
    StrictPartitions,
    Bernoulli,
    Euler,
    Harmonic { m: u32 },
    IrreducibleCount { q: u64 },
    Lucas { a: i64, b: i64 },
    Bell,
    Derangement,
    Springer,
    Tangent,
    CentralTrinomial,
    Motzkin,
    Franel { r: u32 },
    GSeq,
    Apery { r: u32 },
    Schroeder,
    Domb,
    Clf,
    PrefixSum(Box<SequenceId>),
}

impl SequenceId {
    pub fn prefix_sum(inner: SequenceId) -> SequenceId {
        SequenceId::PrefixSum(Box::new(inner))
    }

    /// Index of the first term.
    pub fn base_index(&self) -> u64 {
        use SequenceId::*;
        match self {
            Partitions | StrictPartitions | Lucas { .. } | Bell | Derangement | Springer | CentralTrinomial
            | Motzkin | Franel { .. } | GSeq | Apery { .. } | Schroeder | Domb | Clf => 0,
            PrefixSum(inner) => inner.base_index(),
            _ => 1,
        }
    }

    /// Whether the terms form an ascending list of primes or integers.
    pub fn is_integer_list(&self) -> bool {
        use SequenceId::*;
        matches!(
            self,
            Primes
                | PrimesInAp { .. }
                | PrimitiveRootPrimes { .. }
                | Proth
                | PolyForm(_)
                | HypothesisH(_)
                | Squarefree
                | TwoSquare { .. }
        )
    }

    pub fn validate(&self) -> Result<(), SequenceError> {
        use SequenceId::*;
        let bad = |s: String| Err(SequenceError::InvalidParams(s));
        match self {
            PrimesInAp { a, q } => {
                if *a == 0 || *q == 0 || a.gcd(q) != 1 {
                    return bad(format!("primes_in_ap[{a},{q}] needs positive a, q with gcd 1"));
                }
            }
            PrimitiveRootPrimes { a } => {
                if a.unsigned_abs() <= 1 || primes::is_perfect_power(*a) {
                    return bad(format!("primitive root {a} must not be a perfect power or in {{-1,0,1}}"));
                }
            }
            PolyForm(f) => {
                PolyFormSource::new(f.clone())?;
            }
            HypothesisH(fs) => {
                if fs.is_empty() {
                    return bad("hypothesis_h needs at least one polynomial".into());
                }
                for f in fs {
                    if f.degree() == 0 || f.leading() <= 0 {
                        return bad(format!("{f} must be non-constant with positive leading coefficient"));
                    }
                    if !f.looks_irreducible() {
                        return bad(format!("{f} is reducible"));
                    }
                }
                if let Some(prime) = poly::fixed_prime_divisor(fs, FIXED_DIVISOR_BOUND) {
                    return Err(SequenceError::FixedDivisor { prime });
                }
            }
            TwoSquare { d } if *d == 0 => return bad("two_square needs d >= 1".into()),
            Harmonic { m } if *m == 0 => return bad("harmonic needs m >= 1".into()),
            IrreducibleCount { q } if !integers::is_prime_power(*q) => {
                return bad(format!("{q} is not a prime power"));
            }
            Lucas { a, b } => combinatorial::Lucas::validate(*a, *b)?,
            Franel { r } if *r < 2 => return bad("franel needs r >= 2".into()),
            Apery { r } if *r < 1 => return bad("apery needs r >= 1".into()),
            PrefixSum(inner) => inner.validate()?,
            _ => {}
        }
        Ok(())
    }

    fn generator(&self) -> Box<dyn Generator> {
        use SequenceId::*;
        match self {
            Primes => Box::new(WindowStream::new(PrimeSource)),
            PrimesInAp { a, q } => Box::new(WindowStream::new(ApSource { a: *a, q: *q })),
            PrimitiveRootPrimes { a } => Box::new(WindowStream::new(PrimitiveRootSource { a: *a })),
            Proth => Box::new(WindowStream::new(ProthSource)),
            PolyForm(f) => Box::new(WindowStream::new(PolyFormSource { poly: f.clone() })),
            HypothesisH(fs) => Box::new(WindowStream::new(HypothesisHSource::new(fs.clone()))),
            Squarefree => Box::new(WindowStream::new(SquarefreeSource)),
            TwoSquare { d } => Box::new(WindowStream::new(TwoSquareSource { d: *d })),
            Partitions => Box::new(integers::Partitions::new()),
            StrictPartitions => Box::new(integers::StrictPartitions::new()),
            Bernoulli => Box::new(zigzag::Bernoulli::new()),
            Euler => Box::new(zigzag::Euler::new()),
            Harmonic { m } => Box::new(zigzag::Harmonic::new(*m)),
            IrreducibleCount { q } => Box::new(IrreducibleCounts::new(*q)),
            Lucas { a, b } => Box::new(combinatorial::Lucas::new(*a, *b)),
            Bell => Box::new(combinatorial::Bell::new()),
            Derangement => Box::new(combinatorial::Derangement::new()),
            Springer => Box::new(zigzag::Springer::new()),
            Tangent => Box::new(zigzag::Tangent::new()),
            CentralTrinomial => Box::new(ThreeTermRecurrence::new(ThreeTerm::CentralTrinomial)),
            Motzkin => Box::new(ThreeTermRecurrence::new(ThreeTerm::Motzkin)),
            Franel { r } => Box::new(BinomialSums::new(BinomialSum::Franel(*r))),
            GSeq => Box::new(BinomialSums::new(BinomialSum::G)),
            Apery { r } => Box::new(BinomialSums::new(BinomialSum::Apery(*r))),
            Schroeder => Box::new(BinomialSums::new(BinomialSum::Schroeder)),
            Domb => Box::new(BinomialSums::new(BinomialSum::Domb)),
            Clf => Box::new(BinomialSums::new(BinomialSum::Clf)),
            PrefixSum(inner) => Box::new(prefix::PrefixSum::new(inner.generator())),
        }
    }

    fn decode_generator(&self, r: &mut StateReader<'_>) -> Result<Box<dyn Generator>, SequenceError> {
        use SequenceId::*;
        Ok(match self {
            Primes => Box::new(WindowStream::decode(PrimeSource, r)?),
            PrimesInAp { a, q } => Box::new(WindowStream::decode(ApSource { a: *a, q: *q }, r)?),
            PrimitiveRootPrimes { a } => Box::new(WindowStream::decode(PrimitiveRootSource { a: *a }, r)?),
            Proth => Box::new(WindowStream::decode(ProthSource, r)?),
            PolyForm(f) => Box::new(WindowStream::decode(PolyFormSource { poly: f.clone() }, r)?),
            HypothesisH(fs) => Box::new(WindowStream::decode(HypothesisHSource::new(fs.clone()), r)?),
            Squarefree => Box::new(WindowStream::decode(SquarefreeSource, r)?),
            TwoSquare { d } => Box::new(WindowStream::decode(TwoSquareSource { d: *d }, r)?),
            Partitions => Box::new(integers::Partitions::decode(r)?),
            StrictPartitions => Box::new(integers::StrictPartitions::decode(r)?),
            Bernoulli => Box::new(zigzag::Bernoulli::decode(r)?),
            Euler => Box::new(zigzag::Euler::decode(r)?),
            Harmonic { m } => Box::new(zigzag::Harmonic::decode(*m, r)?),
            IrreducibleCount { q } => Box::new(IrreducibleCounts::decode(*q, r)?),
            Lucas { a, b } => Box::new(combinatorial::Lucas::decode(*a, *b, r)?),
            Bell => Box::new(combinatorial::Bell::decode(r)?),
            Derangement => Box::new(combinatorial::Derangement::decode(r)?),
            Springer => Box::new(zigzag::Springer::decode(r)?),
            Tangent => Box::new(zigzag::Tangent::decode(r)?),
            CentralTrinomial => Box::new(ThreeTermRecurrence::decode(ThreeTerm::CentralTrinomial, r)?),
            Motzkin => Box::new(ThreeTermRecurrence::decode(ThreeTerm::Motzkin, r)?),
            Franel { r: e } => Box::new(BinomialSums::decode(BinomialSum::Franel(*e), r)?),
            GSeq => Box::new(BinomialSums::decode(BinomialSum::G, r)?),
            Apery { r: e } => Box::new(BinomialSums::decode(BinomialSum::Apery(*e), r)?),
            Schroeder => Box::new(BinomialSums::decode(BinomialSum::Schroeder, r)?),
            Domb => Box::new(BinomialSums::decode(BinomialSum::Domb, r)?),
            Clf => Box::new(BinomialSums::decode(BinomialSum::Clf, r)?),
            PrefixSum(inner) => Box::new(prefix::PrefixSum::decode(r, |r| inner.decode_generator(r))?),
        })
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SequenceId::*;
        match self {
            Primes => f.write_str("primes"),
            PrimesInAp { a, q } => write!(f, "primes_in_ap[{a},{q}]"),
            PrimitiveRootPrimes { a } => write!(f, "primitive_root_primes[{a}]"),
            Proth => f.write_str("proth"),
            PolyForm(p) => write!(f, "polyform[{p}]"),
            HypothesisH(ps) => {
                f.write_str("hypothesis_h[")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
            Squarefree => f.write_str("squarefree"),
            TwoSquare { d } => write!(f, "two_square[{d}]"),
            Partitions => f.write_str("partitions"),
            StrictPartitions => f.write_str("strict_partitions"),
            Bernoulli => f.write_str("bernoulli"),
            Euler => f.write_str("euler"),
            Harmonic { m } => write!(f, "harmonic[{m}]"),
            IrreducibleCount { q } => write!(f, "irreducible_count[{q}]"),
            Lucas { a, b } => write!(f, "lucas[{a},{b}]"),
            Bell => f.write_str("bell"),
            Derangement => f.write_str("derangement"),
            Springer => f.write_str("springer"),
            Tangent => f.write_str("tangent"),
            CentralTrinomial => f.write_str("central_trinomial"),
            Motzkin => f.write_str("motzkin"),
            Franel { r } => write!(f, "franel[{r}]"),
            GSeq => f.write_str("g"),
            Apery { r } => write!(f, "apery[{r}]"),
            Schroeder => f.write_str("schroeder"),
            Domb => f.write_str("domb"),
            Clf => f.write_str("clf"),
            PrefixSum(inner) => write!(f, "prefix_sum[{inner}]"),
        }
    }
}

/// Split at commas that are not nested inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl FromStr for SequenceId {
    type Err = SequenceError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        use SequenceId::*;
        let s = text.trim();
        let perr = |why: String| SequenceError::Parse(format!("sequence '{s}': {why}"));
        let (name, args) = match s.find('[') {
            Some(i) => {
                if !s.ends_with(']') {
                    return Err(perr("missing closing ']'".into()));
                }
                (s[..i].trim(), Some(&s[i + 1..s.len() - 1]))
            }
            None => (s, None),
        };
        let args: Vec<&str> = args.map(split_top_level).unwrap_or_default();
        let want = |n: usize| -> Result<(), SequenceError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(perr(format!("expected {n} parameter(s), found {}", args.len())))
            }
        };
        fn num<T: FromStr>(s: &str, text: &str) -> Result<T, SequenceError> {
            s.parse()
                .map_err(|_| SequenceError::Parse(format!("sequence '{text}': bad integer '{s}'")))
        }
        let id = match name {
            "primes" => {
                want(0)?;
                Primes
            }
            "primes_in_ap" => {
                want(2)?;
                PrimesInAp {
                    a: num(args[0], s)?,
                    q: num(args[1], s)?,
                }
            }
            "primitive_root_primes" => {
                want(1)?;
                PrimitiveRootPrimes { a: num(args[0], s)? }
            }
            "proth" => {
                want(0)?;
                Proth
            }
            "polyform" => {
                want(1)?;
                PolyForm(args[0].parse()?)
            }
            "hypothesis_h" => {
                if args.is_empty() || args.iter().any(|a| a.is_empty()) {
                    return Err(perr("expected a list of polynomials".into()));
                }
                HypothesisH(args.iter().map(|a| a.parse()).collect::<Result<_, _>>()?)
            }
            "squarefree" => {
                want(0)?;
                Squarefree
            }
            "two_square" => {
                if args.is_empty() {
                    TwoSquare { d: 1 }
                } else {
                    want(1)?;
                    TwoSquare { d: num(args[0], s)? }
                }
            }
            "partitions" => {
                want(0)?;
                Partitions
            }
            "strict_partitions" => {
                want(0)?;
                StrictPartitions
            }
            "bernoulli" => {
                want(0)?;
                Bernoulli
            }
            "euler" => {
                want(0)?;
                Euler
            }
            "harmonic" => {
                want(1)?;
                Harmonic { m: num(args[0], s)? }
            }
            "irreducible_count" => {
                want(1)?;
                IrreducibleCount { q: num(args[0], s)? }
            }
            "lucas" => {
                want(2)?;
                Lucas {
                    a: num(args[0], s)?,
                    b: num(args[1], s)?,
                }
            }
            "fibonacci" => {
                want(0)?;
                Lucas { a: 1, b: -1 }
            }
            "bell" => {
                want(0)?;
                Bell
            }
            "derangement" => {
                want(0)?;
                Derangement
            }
            "springer" => {
                want(0)?;
                Springer
            }
            "tangent" => {
                want(0)?;
                Tangent
            }
            "central_trinomial" => {
                want(0)?;
                CentralTrinomial
            }
            "motzkin" => {
                want(0)?;
                Motzkin
            }
            "franel" => {
                want(1)?;
                Franel { r: num(args[0], s)? }
            }
            "g" => {
                want(0)?;
                GSeq
            }
            "apery" => {
                want(1)?;
                Apery { r: num(args[0], s)? }
            }
            "schroeder" => {
                want(0)?;
                Schroeder
            }
            "domb" => {
                want(0)?;
                Domb
            }
            "clf" => {
                want(0)?;
                Clf
            }
            "prefix_sum" => {
                want(1)?;
                PrefixSum(Box::new(args[0].parse()?))
            }
            other => return Err(perr(format!("unknown family '{other}'"))),
        };
        Ok(id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub index: u64,
    pub value: ExactScalar,
}

/// A validated, resumable stream of terms for one sequence.
pub struct SequenceStream {
    id: SequenceId,
    next_index: u64,
    generator: Box<dyn Generator>,
}

impl fmt::Debug for SequenceStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceStream")
            .field("id", &self.id.to_string())
            .field("next_index", &self.next_index)
            .finish()
    }
}

impl SequenceStream {
    pub fn id(&self) -> &SequenceId {
        &self.id
    }

    /// Index of the term the next call to [`Self::next_term`] returns.
    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    pub fn next_term(&mut self) -> Result<Term, SequenceError> {
        let value = self.generator.next_value()?;
        let index = self.next_index;
        self.next_index += 1;
        Ok(Term { index, value })
    }

    /// Advance until the next term has index `index`.
    pub fn skip_to(&mut self, index: u64) -> Result<(), SequenceError> {
        while self.next_index < index {
            self.next_term()?;
        }
        Ok(())
    }

    pub fn take_terms(&mut self, count: usize) -> Result<Vec<Term>, SequenceError> {
        (0..count).map(|_| self.next_term()).collect()
    }

    /// Snapshot: sequence id, next index, then the generator's own fields.
    pub fn state(&self) -> GeneratorState {
        let mut w = StateWriter::new();
        w.str(&self.id.to_string()).u64(self.next_index);
        self.generator.encode(&mut w);
        w.finish()
    }
}

impl Iterator for SequenceStream {
    type Item = Result<Term, SequenceError>;
    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_term())
    }
}

pub fn open(id: &SequenceId) -> Result<SequenceStream, SequenceError> {
    id.validate()?;
    Ok(SequenceStream {
        id: id.clone(),
        next_index: id.base_index(),
        generator: id.generator(),
    })
}

pub fn restore(state: &GeneratorState) -> Result<SequenceStream, SequenceError> {
    let mut r = StateReader::new(state)?;
    let id: SequenceId = r.str()?.parse()?;
    id.validate()?;
    let next_index = r.u64()?;
    if next_index < id.base_index() {
        return Err(SequenceError::BadState("index below the sequence base".into()));
    }
    let generator = id.decode_generator(&mut r)?;
    r.finish()?;
    Ok(SequenceStream {
        id,
        next_index,
        generator,
    })
}

/// The first `count` values of a sequence.
pub fn first_values(id: &SequenceId, count: usize) -> Result<Vec<ExactScalar>, SequenceError> {
    Ok(open(id)?.take_terms(count)?.into_iter().map(|t| t.value).collect())
}
