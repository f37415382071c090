//! Digit-by-digit square and cube root extraction.
//!
//! The input's digit places are split into groups of `k` ending at anchor
//! places (indices divisible by `k`). The leading group seeds the root from a
//! 9-entry power table; each later group contributes one root digit `B`,
//! estimated by dividing the brought-down remainder by `k * R^(k-1)` and then
//! removed from the remainder one binomial term per bring-down:
//!
//! * square: `2RB` then `B^2`
//! * cube: `3R^2 B`, then `3RB^2`, then `B^3`
//!
//! Every primitive goes through a [`Recorder`], which tallies it in
//! [`OpCounters`] and appends [`TraceEvent`]s.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::decimal::{DecimalNatural, Underflow};

/// Which root to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootKind {
    Square,
    Cube,
}

impl RootKind {
    pub fn exponent(self) -> u32 {
        match self {
            RootKind::Square => 2,
            RootKind::Cube => 3,
        }
    }

    /// Width of a digit group; the same number as the exponent.
    pub fn period(self) -> usize {
        self.exponent() as usize
    }

    pub fn from_exponent(k: u32) -> Option<Self> {
        match k {
            2 => Some(RootKind::Square),
            3 => Some(RootKind::Cube),
            _ => None,
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootKind::Square => "square",
            RootKind::Cube => "cube",
        })
    }
}

/// Internal invariant violations. None of these are reachable from valid
/// input; they indicate an engine bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("place marking is undefined for zero")]
    ZeroInput,
    #[error("leading group must be in 1..={max}, got {group}")]
    GroupOutOfRange { group: DecimalNatural, max: u32 },
    #[error("negative intermediate at place {position}: {minuend} - {subtrahend}")]
    NegativeIntermediate {
        position: usize,
        minuend: DecimalNatural,
        subtrahend: DecimalNatural,
    },
    #[error("loop invariant broken at anchor {anchor}: {detail}")]
    LoopInvariant { anchor: usize, detail: String },
    #[error("no iterations left")]
    Exhausted,
}

/// Tallies of primitive operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct OpCounters {
    #[serde(rename = "M")]
    pub multiplications: u64,
    #[serde(rename = "A")]
    pub additions: u64,
    #[serde(rename = "D")]
    pub divisions: u64,
    #[serde(rename = "S")]
    pub subtractions: u64,
    pub lookups: u64,
}

impl OpCounters {
    pub const fn new(
        multiplications: u64,
        additions: u64,
        divisions: u64,
        subtractions: u64,
        lookups: u64,
    ) -> Self {
        Self {
            multiplications,
            additions,
            divisions,
            subtractions,
            lookups,
        }
    }

    pub fn scaled(self, factor: u64) -> Self {
        Self {
            multiplications: self.multiplications * factor,
            additions: self.additions * factor,
            divisions: self.divisions * factor,
            subtractions: self.subtractions * factor,
            lookups: self.lookups * factor,
        }
    }

    /// Fields in `M, A, D, S, lookups` order.
    pub fn as_array(&self) -> [u64; 5] {
        [
            self.multiplications,
            self.additions,
            self.divisions,
            self.subtractions,
            self.lookups,
        ]
    }
}

impl Add for OpCounters {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            multiplications: self.multiplications + rhs.multiplications,
            additions: self.additions + rhs.additions,
            divisions: self.divisions + rhs.divisions,
            subtractions: self.subtractions + rhs.subtractions,
            lookups: self.lookups + rhs.lookups,
        }
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Saturating difference; counters never go negative.
impl Sub for OpCounters {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            multiplications: self.multiplications.saturating_sub(rhs.multiplications),
            additions: self.additions.saturating_sub(rhs.additions),
            divisions: self.divisions.saturating_sub(rhs.divisions),
            subtractions: self.subtractions.saturating_sub(rhs.subtractions),
            lookups: self.lookups.saturating_sub(rhs.lookups),
        }
    }
}

impl fmt::Display for OpCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}M + {}A + {}D + {}S + {} lookup",
            self.multiplications, self.additions, self.divisions, self.subtractions, self.lookups
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// operands `[x]`, result: highest anchor index.
    MarkPlaces,
    /// operands `[leading group]`, result: first root digit.
    Seed,
    /// operands `[remainder, digit]`, result `remainder * 10 + digit`.
    BringDown,
    /// operands `[dividend, divisor]`, result: trial quotient.
    DivideEstimate,
    /// operands `[trial]`, result 9.
    Clamp,
    /// operands `[digit, (10R + digit)^k, prefix]`, result `digit - 1`.
    DecrementAdjust,
    /// operands `[minuend, subtrahend]`, result: difference.
    Subtract,
    /// operands `[R, B]`, result `10R + B`.
    AccumulateRoot,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::MarkPlaces => "mark-places",
            EventKind::Seed => "seed",
            EventKind::BringDown => "bring-down",
            EventKind::DivideEstimate => "divide-estimate",
            EventKind::Clamp => "clamp",
            EventKind::DecrementAdjust => "decrement-adjust",
            EventKind::Subtract => "subtract",
            EventKind::AccumulateRoot => "accumulate-root",
        }
    }
}

/// One recorded engine action. `position` is the digit place the action
/// is aligned to; a subtrahend at position `p` is worth `subtrahend * 10^p`
/// of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub kind: EventKind,
    pub position: usize,
    pub operands: Vec<DecimalNatural>,
    pub result: DecimalNatural,
}

/// Performs engine primitives while counting them and tracing them.
#[derive(Debug, Default)]
pub struct Recorder {
    pub counters: OpCounters,
    pub trace: Vec<TraceEvent>,
    /// Number of loop-invariant checks evaluated.
    pub invariant_checks: u32,
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    fn event(&mut self, kind: EventKind, position: usize, operands: Vec<DecimalNatural>, result: DecimalNatural) {
        self.trace.push(TraceEvent {
            kind,
            position,
            operands,
            result,
        });
    }

    fn bring_down(&mut self, remainder: &DecimalNatural, digit: u8, position: usize) -> DecimalNatural {
        self.counters.additions += 1;
        let out = remainder.add_digit_shifted(digit);
        self.event(
            EventKind::BringDown,
            position,
            vec![remainder.clone(), DecimalNatural::from_digit(digit)],
            out.clone(),
        );
        out
    }

    fn subtract(
        &mut self,
        minuend: &DecimalNatural,
        subtrahend: &DecimalNatural,
        position: usize,
    ) -> Result<DecimalNatural, EngineError> {
        self.counters.subtractions += 1;
        let out = minuend.checked_sub(subtrahend).map_err(|Underflow { minuend, subtrahend }| {
            EngineError::NegativeIntermediate {
                position,
                minuend,
                subtrahend,
            }
        })?;
        self.event(
            EventKind::Subtract,
            position,
            vec![minuend.clone(), subtrahend.clone()],
            out.clone(),
        );
        Ok(out)
    }

    fn multiply_small(&mut self, a: &DecimalNatural, m: u32) -> DecimalNatural {
        self.counters.multiplications += 1;
        a.multiply_small(m)
    }

    fn power(&mut self, a: &DecimalNatural, e: u32) -> DecimalNatural {
        self.counters.multiplications += 1;
        a.power_small(e)
    }

    fn divide(&mut self, dividend: &DecimalNatural, divisor: &DecimalNatural, position: usize) -> DecimalNatural {
        self.counters.divisions += 1;
        let q = dividend.div_floor(divisor);
        self.event(
            EventKind::DivideEstimate,
            position,
            vec![dividend.clone(), divisor.clone()],
            q.clone(),
        );
        q
    }

    fn accumulate(&mut self, root: &DecimalNatural, digit: u8, position: usize) -> DecimalNatural {
        self.counters.additions += 1;
        let out = root.add_digit_shifted(digit);
        self.event(
            EventKind::AccumulateRoot,
            position,
            vec![root.clone(), DecimalNatural::from_digit(digit)],
            out.clone(),
        );
        out
    }
}

/// Anchor/intermediate classification of every digit place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceMarking {
    kind: RootKind,
    len: usize,
    highest_anchor: usize,
}

impl PlaceMarking {
    /// Number of digit places marked.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_anchor(&self, index: usize) -> bool {
        index.is_multiple_of(self.kind.period())
    }

    pub fn highest_anchor(&self) -> usize {
        self.highest_anchor
    }

    /// Anchor indices, ascending.
    pub fn anchors(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).step_by(self.kind.period())
    }

    /// Groups below the leading one; one root digit each.
    pub fn iterations(&self) -> usize {
        self.highest_anchor / self.kind.period()
    }
}

pub fn mark_places(x: &DecimalNatural, kind: RootKind) -> Result<PlaceMarking, EngineError> {
    let top = x.top_index().ok_or(EngineError::ZeroInput)?;
    let k = kind.period();
    Ok(PlaceMarking {
        kind,
        len: top + 1,
        highest_anchor: top / k * k,
    })
}

/// Value of the digits at and above the highest anchor.
pub fn leading_group_value(x: &DecimalNatural, marking: &PlaceMarking) -> DecimalNatural {
    x.shift_right(marking.highest_anchor())
}

const SQUARES: [u32; 10] = [0, 1, 4, 9, 16, 25, 36, 49, 64, 81];
const CUBES: [u32; 10] = [0, 1, 8, 27, 64, 125, 216, 343, 512, 729];

/// First root digit: the largest `A` in 1..=9 with `A^k <= group`, read from
/// a power table. Returns `A` and `A^k`.
pub fn initial_root_digit(group: &DecimalNatural, kind: RootKind) -> Result<(u8, DecimalNatural), EngineError> {
    let (table, max) = match kind {
        RootKind::Square => (&SQUARES, 99),
        RootKind::Cube => (&CUBES, 999),
    };
    let value = group
        .to_u64()
        .filter(|&v| (1..=u64::from(max)).contains(&v))
        .ok_or_else(|| EngineError::GroupOutOfRange {
            group: group.clone(),
            max,
        })?;
    let digit = table
        .iter()
        .rposition(|&p| u64::from(p) <= value)
        .expect("table[0] = 0 is always <= value");
    Ok((digit as u8, DecimalNatural::from(u64::from(table[digit]))))
}

/// Loop state between iterations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootState {
    /// Assembled root `R`.
    pub root: DecimalNatural,
    /// Running remainder `S`.
    pub remainder: DecimalNatural,
    /// Value `P` of every input digit consumed so far.
    pub prefix: DecimalNatural,
    /// Anchor index of the last consumed digit.
    pub anchor: usize,
    /// Groups left to consume.
    pub remaining: usize,
}

impl RootState {
    /// Checks `S = P - R^k` and `S < (R+1)^k - R^k`.
    pub fn check_invariant(&self, kind: RootKind) -> Result<(), EngineError> {
        let k = kind.exponent();
        let fail = |detail: String| EngineError::LoopInvariant {
            anchor: self.anchor,
            detail,
        };
        let power = self.root.power_small(k);
        let expected = self
            .prefix
            .checked_sub(&power)
            .map_err(|_| fail(format!("R^k = {power} exceeds P = {}", self.prefix)))?;
        if expected != self.remainder {
            return Err(fail(format!("S = {} but P - R^k = {expected}", self.remainder)));
        }
        let next = self.root.add(&DecimalNatural::one()).power_small(k);
        if self.prefix >= next {
            return Err(fail(format!("(R+1)^k = {next} <= P = {}", self.prefix)));
        }
        Ok(())
    }
}

fn checked_in_debug(state: &RootState, kind: RootKind, rec: &mut Recorder) -> Result<(), EngineError> {
    if cfg!(debug_assertions) {
        rec.invariant_checks += 1;
        state.check_invariant(kind)?;
    }
    Ok(())
}

/// Marks places, reads the leading group and subtracts its greatest power.
pub fn seed(x: &DecimalNatural, kind: RootKind, rec: &mut Recorder) -> Result<RootState, EngineError> {
    let marking = mark_places(x, kind)?;
    let anchor = marking.highest_anchor();
    rec.event(
        EventKind::MarkPlaces,
        anchor,
        vec![x.clone()],
        DecimalNatural::from(anchor as u64),
    );

    let group = leading_group_value(x, &marking);
    let (digit, power) = initial_root_digit(&group, kind)?;
    rec.counters.lookups += 1;
    let root = DecimalNatural::from_digit(digit);
    rec.event(EventKind::Seed, anchor, vec![group.clone()], root.clone());
    let remainder = rec.subtract(&group, &power, anchor)?;

    let state = RootState {
        root,
        remainder,
        prefix: group,
        anchor,
        remaining: marking.iterations(),
    };
    checked_in_debug(&state, kind, rec)?;
    Ok(state)
}

/// How the next root digit was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitChoice {
    /// `floor(lead / (k * R^(k-1)))`.
    pub trial: DecimalNatural,
    /// The trial exceeded 9 and was clamped.
    pub clamped: bool,
    /// Number of times the candidate was lowered.
    pub decrements: u8,
    pub digit: u8,
}

struct Selection {
    choice: DigitChoice,
    divisor: DecimalNatural,
}

fn choose_digit(
    root: &DecimalNatural,
    lead: &DecimalNatural,
    prefix: &DecimalNatural,
    kind: RootKind,
    position: usize,
    rec: &mut Recorder,
) -> Result<Selection, EngineError> {
    let k = kind.exponent();
    let divisor = match kind {
        RootKind::Square => rec.multiply_small(root, 2),
        RootKind::Cube => {
            let sq = rec.power(root, 2);
            rec.multiply_small(&sq, 3)
        }
    };
    let trial = rec.divide(lead, &divisor, position);

    let nine = DecimalNatural::from_digit(9);
    let clamped = trial > nine;
    let mut digit = if clamped {
        rec.event(EventKind::Clamp, position, vec![trial.clone()], nine);
        9
    } else {
        trial.to_u64().expect("trial <= 9") as u8
    };

    let mut decrements = 0;
    loop {
        let candidate = root.add_digit_shifted(digit);
        let power = rec.power(&candidate, k);
        if power <= *prefix {
            break;
        }
        if digit == 0 {
            return Err(EngineError::LoopInvariant {
                anchor: position,
                detail: format!("(10R)^k = {power} exceeds P = {prefix}"),
            });
        }
        rec.event(
            EventKind::DecrementAdjust,
            position,
            vec![DecimalNatural::from_digit(digit), power, prefix.clone()],
            DecimalNatural::from_digit(digit - 1),
        );
        digit -= 1;
        decrements += 1;
    }

    Ok(Selection {
        choice: DigitChoice {
            trial,
            clamped,
            decrements,
            digit,
        },
        divisor,
    })
}

/// Picks `B = max { b <= min(9, trial) : (10R + b)^k <= prefix }`.
///
/// `prefix` is the value of all digits consumed through the end of the
/// current group, and `R` must be the floor root of `prefix / 10^k`. The
/// dividend of the trial division is recovered from these as
/// `floor(prefix / 10^(k-1)) - 10 R^k`.
pub fn select_digit(
    root: &DecimalNatural,
    kind: RootKind,
    prefix: &DecimalNatural,
) -> Result<DigitChoice, EngineError> {
    let k = kind.exponent();
    let lead = prefix
        .shift_right(kind.period() - 1)
        .checked_sub(&root.power_small(k).multiply_small(10))
        .map_err(|_| EngineError::LoopInvariant {
            anchor: 0,
            detail: format!("R = {root} is too large for prefix {prefix}"),
        })?;
    let mut rec = Recorder::new();
    choose_digit(root, &lead, prefix, kind, 0, &mut rec).map(|s| s.choice)
}

/// Consumes the next group of `k` digits below the current anchor.
pub fn run_iteration(
    state: &RootState,
    x: &DecimalNatural,
    kind: RootKind,
    rec: &mut Recorder,
) -> Result<RootState, EngineError> {
    let k = kind.period();
    if state.remaining == 0 || state.anchor < k {
        return Err(EngineError::Exhausted);
    }
    let i = state.anchor;
    let next_anchor = i - k;

    let prefix = (1..=k).fold(state.prefix.clone(), |p, j| p.add_digit_shifted(x.digit_at(i - j)));

    let lead = rec.bring_down(&state.remainder, x.digit_at(i - 1), i - 1);
    let Selection { choice, divisor } = choose_digit(&state.root, &lead, &prefix, kind, i - 1, rec)?;
    let b = choice.digit;
    let b_value = DecimalNatural::from_digit(b);
    let root = rec.accumulate(&state.root, b, next_anchor);

    let first = rec.multiply_small(&divisor, u32::from(b));
    let mut remainder = rec.subtract(&lead, &first, i - 1)?;

    match kind {
        RootKind::Square => {
            let c = rec.bring_down(&remainder, x.digit_at(i - 2), i - 2);
            let sq = rec.power(&b_value, 2);
            remainder = rec.subtract(&c, &sq, i - 2)?;
        }
        RootKind::Cube => {
            let m = rec.bring_down(&remainder, x.digit_at(i - 2), i - 2);
            let b_sq = rec.power(&b_value, 2);
            let three_r = rec.multiply_small(&state.root, 3);
            let second = rec.multiply_small(&three_r, b_sq.to_u64().expect("B^2 <= 81") as u32);
            remainder = rec.subtract(&m, &second, i - 2)?;

            let n = rec.bring_down(&remainder, x.digit_at(i - 3), i - 3);
            let cube = rec.power(&b_value, 3);
            remainder = rec.subtract(&n, &cube, i - 3)?;
        }
    }

    let next = RootState {
        root,
        remainder,
        prefix,
        anchor: next_anchor,
        remaining: state.remaining - 1,
    };
    checked_in_debug(&next, kind, rec)?;
    Ok(next)
}

/// Floor root, remainder and the full record of how they were found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootResult {
    pub kind: RootKind,
    /// Digit count of the input.
    pub input_digits: usize,
    pub root: DecimalNatural,
    pub remainder: DecimalNatural,
    /// Groups consumed after seeding.
    pub iterations: usize,
    pub trace: Vec<TraceEvent>,
    pub counters: OpCounters,
    /// Counter increments of the seed followed by each iteration.
    pub stage_counters: Vec<OpCounters>,
    pub invariant_checks: u32,
}

impl RootResult {
    /// Number of clamp and decrement events.
    pub fn adjustments(&self) -> usize {
        self.trace
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Clamp | EventKind::DecrementAdjust))
            .count()
    }

    /// `(position, subtrahend)` of every subtraction, in order.
    pub fn subtrahends(&self) -> impl Iterator<Item = (usize, &DecimalNatural)> + '_ {
        self.trace
            .iter()
            .filter(|e| e.kind == EventKind::Subtract)
            .map(|e| (e.position, &e.operands[1]))
    }

    /// Sum of all subtrahends at their place values; equals `x - remainder`.
    pub fn subtracted_total(&self) -> DecimalNatural {
        self.subtrahends()
            .fold(DecimalNatural::zero(), |acc, (pos, s)| acc.add(&s.shift_left(pos)))
    }
}

fn try_extract(x: &DecimalNatural, kind: RootKind) -> Result<RootResult, EngineError> {
    let mut rec = Recorder::new();
    let mut stage_counters = Vec::new();
    let mut state = seed(x, kind, &mut rec)?;
    stage_counters.push(rec.counters);
    let iterations = state.remaining;
    while state.remaining > 0 {
        let before = rec.counters;
        state = run_iteration(&state, x, kind, &mut rec)?;
        stage_counters.push(rec.counters - before);
    }
    debug_assert_eq!(state.anchor, 0);
    Ok(RootResult {
        kind,
        input_digits: x.digit_count(),
        root: state.root,
        remainder: state.remainder,
        iterations,
        trace: rec.trace,
        counters: rec.counters,
        stage_counters,
        invariant_checks: rec.invariant_checks,
    })
}

/// Floor `k`-th root of `x` with remainder, trace and operation counts.
///
/// Zero short-circuits to root 0 with an empty trace.
///
/// # Panics
///
/// On an internal invariant violation, which indicates an engine bug.
pub fn extract_root(x: &DecimalNatural, kind: RootKind) -> RootResult {
    if x.is_zero() {
        return RootResult {
            kind,
            input_digits: 0,
            root: DecimalNatural::zero(),
            remainder: DecimalNatural::zero(),
            iterations: 0,
            trace: Vec::new(),
            counters: OpCounters::default(),
            stage_counters: Vec::new(),
            invariant_checks: 0,
        };
    }
    try_extract(x, kind).unwrap_or_else(|e| panic!("engine invariant violated for {x}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(s: &str) -> DecimalNatural {
        s.parse().unwrap()
    }

    fn subtrahends(rec_trace: &[TraceEvent]) -> Vec<String> {
        rec_trace
            .iter()
            .filter(|e| e.kind == EventKind::Subtract)
            .map(|e| e.operands[1].to_string())
            .collect()
    }

    #[test]
    fn marks_anchor_places() {
        let m = mark_places(&n("34965783"), RootKind::Cube).unwrap();
        assert_eq!(m.anchors().collect::<Vec<_>>(), vec![0, 3, 6]);
        assert_eq!(m.highest_anchor(), 6);
        assert!(m.is_anchor(0) && !m.is_anchor(1) && !m.is_anchor(5));

        let m = mark_places(&n("11943936"), RootKind::Square).unwrap();
        assert_eq!(m.anchors().collect::<Vec<_>>(), vec![0, 2, 4, 6]);
        assert_eq!(m.highest_anchor(), 6);

        let m = mark_places(&n("7"), RootKind::Cube).unwrap();
        assert_eq!(m.anchors().collect::<Vec<_>>(), vec![0]);
        assert_eq!(m.highest_anchor(), 0);
        assert_eq!(m.iterations(), 0);

        assert_eq!(mark_places(&DecimalNatural::zero(), RootKind::Square), Err(EngineError::ZeroInput));
    }

    #[test]
    fn iteration_count_follows_anchors() {
        // 1_000_000 has 7 digits; anchors 0,3,6 (cube) and 0,2,4,6 (square)
        let x = n("1000000");
        assert_eq!(mark_places(&x, RootKind::Cube).unwrap().iterations(), 2);
        assert_eq!(mark_places(&x, RootKind::Square).unwrap().iterations(), 3);
        let x = n("34965783");
        assert_eq!(mark_places(&x, RootKind::Cube).unwrap().iterations(), 2);
        assert_eq!(mark_places(&x, RootKind::Square).unwrap().iterations(), 3);
    }

    #[test]
    fn leading_groups() {
        let lead = |s: &str, kind| {
            let x = n(s);
            leading_group_value(&x, &mark_places(&x, kind).unwrap())
        };
        assert_eq!(lead("34965783", RootKind::Cube), n("34"));
        assert_eq!(lead("11943936", RootKind::Square), n("11"));
        assert_eq!(lead("8", RootKind::Cube), n("8"));
        assert_eq!(lead("999123", RootKind::Cube), n("999"));
        assert_eq!(lead("1000000", RootKind::Cube), n("1"));
    }

    #[test]
    fn initial_digit_lookup() {
        assert_eq!(initial_root_digit(&n("34"), RootKind::Cube).unwrap(), (3, n("27")));
        assert_eq!(initial_root_digit(&n("11"), RootKind::Square).unwrap(), (3, n("9")));
        assert_eq!(initial_root_digit(&n("1"), RootKind::Square).unwrap(), (1, n("1")));
        assert_eq!(initial_root_digit(&n("999"), RootKind::Cube).unwrap(), (9, n("729")));
        assert_eq!(initial_root_digit(&n("99"), RootKind::Square).unwrap(), (9, n("81")));
        assert!(initial_root_digit(&n("0"), RootKind::Cube).is_err());
        assert!(initial_root_digit(&n("100"), RootKind::Square).is_err());
        assert!(initial_root_digit(&n("1000"), RootKind::Cube).is_err());
    }

    #[test]
    fn initial_digit_matches_brute_force() {
        for kind in [RootKind::Square, RootKind::Cube] {
            let max = if kind == RootKind::Square { 99 } else { 999 };
            for g in 1u64..=max {
                let (a, p) = initial_root_digit(&g.into(), kind).unwrap();
                let k = kind.exponent();
                let brute = (1u64..=9).filter(|a| a.pow(k) <= g).max().unwrap();
                assert_eq!(u64::from(a), brute);
                assert_eq!(p, brute.pow(k).into());
            }
        }
    }

    #[test]
    fn select_digit_examples() {
        let c = select_digit(&n("3"), RootKind::Square, &n("1194")).unwrap();
        assert_eq!((c.trial.clone(), c.digit, c.clamped, c.decrements), (n("4"), 4, false, 0));

        let c = select_digit(&n("1"), RootKind::Square, &n("256")).unwrap();
        assert_eq!((c.trial.clone(), c.digit, c.clamped, c.decrements), (n("7"), 6, false, 1));

        let c = select_digit(&n("1"), RootKind::Cube, &n("3375")).unwrap();
        assert_eq!((c.trial.clone(), c.digit, c.clamped, c.decrements), (n("7"), 5, false, 2));

        let c = select_digit(&n("1"), RootKind::Square, &n("361")).unwrap();
        assert_eq!((c.trial.clone(), c.digit, c.clamped, c.decrements), (n("13"), 9, true, 0));
    }

    fn cube_seed_state() -> RootState {
        RootState {
            root: n("3"),
            remainder: n("7"),
            prefix: n("34"),
            anchor: 6,
            remaining: 2,
        }
    }

    #[test]
    fn cube_iterations_from_worked_example() {
        let x = n("34965783");
        let mut rec = Recorder::new();
        let s1 = run_iteration(&cube_seed_state(), &x, RootKind::Cube, &mut rec).unwrap();
        assert_eq!(subtrahends(&rec.trace), ["54", "36", "8"]);
        assert_eq!((s1.root.clone(), s1.remainder.clone()), (n("32"), n("2197")));
        assert_eq!((s1.prefix.clone(), s1.anchor, s1.remaining), (n("34965"), 3, 1));

        let minuends: Vec<String> = rec
            .trace
            .iter()
            .filter(|e| e.kind == EventKind::Subtract)
            .map(|e| e.operands[0].to_string())
            .collect();
        assert_eq!(minuends, ["79", "256", "2205"]);

        let mut rec = Recorder::new();
        let s2 = run_iteration(&s1, &x, RootKind::Cube, &mut rec).unwrap();
        assert_eq!(subtrahends(&rec.trace), ["21504", "4704", "343"]);
        assert_eq!((s2.root.clone(), s2.remainder.clone()), (n("327"), n("0")));
        assert_eq!(s2.remaining, 0);

        assert_eq!(run_iteration(&s2, &x, RootKind::Cube, &mut rec), Err(EngineError::Exhausted));
    }

    #[test]
    fn square_iterations_from_worked_example() {
        let x = n("11943936");
        let state = RootState {
            root: n("3"),
            remainder: n("2"),
            prefix: n("11"),
            anchor: 6,
            remaining: 3,
        };
        let mut rec = Recorder::new();
        let s1 = run_iteration(&state, &x, RootKind::Square, &mut rec).unwrap();
        assert_eq!(subtrahends(&rec.trace), ["24", "16"]);
        assert_eq!((s1.root.clone(), s1.remainder.clone()), (n("34"), n("38")));

        let mut rec = Recorder::new();
        let s2 = run_iteration(&s1, &x, RootKind::Square, &mut rec).unwrap();
        assert_eq!(subtrahends(&rec.trace), ["340", "25"]);
        assert_eq!((s2.root.clone(), s2.remainder.clone()), (n("345"), n("414")));
    }

    #[test]
    fn iteration_counts_follow_rules() {
        let mut rec = Recorder::new();
        run_iteration(&cube_seed_state(), &n("34965783"), RootKind::Cube, &mut rec).unwrap();
        assert_eq!(rec.counters, OpCounters::new(8, 4, 1, 3, 0));

        let r = extract_root(&n("11943936"), RootKind::Square);
        assert_eq!(r.stage_counters[0], OpCounters::new(0, 0, 0, 1, 1));
        for delta in &r.stage_counters[1..] {
            assert_eq!(*delta, OpCounters::new(4, 3, 1, 2, 0));
        }
    }

    #[test]
    fn decrement_probe_costs_one_multiplication() {
        let plain = extract_root(&n("225"), RootKind::Square); // 15^2, trial 6 -> 5
        assert_eq!(plain.adjustments(), 1);
        assert_eq!(plain.stage_counters[1], OpCounters::new(5, 3, 1, 2, 0));
    }

    #[test]
    fn extract_examples() {
        let cases = [
            ("34965783", RootKind::Cube, "327", "0"),
            ("11943936", RootKind::Square, "3456", "0"),
            ("0", RootKind::Square, "0", "0"),
            ("10", RootKind::Cube, "2", "2"),
            ("10", RootKind::Square, "3", "1"),
            ("1000000", RootKind::Square, "1000", "0"),
            ("1000000", RootKind::Cube, "100", "0"),
            ("361", RootKind::Square, "19", "0"),
            ("256", RootKind::Square, "16", "0"),
            ("3375", RootKind::Cube, "15", "0"),
            ("7", RootKind::Cube, "1", "6"),
            ("9", RootKind::Square, "3", "0"),
        ];
        for (x, kind, root, rem) in cases {
            let r = extract_root(&n(x), kind);
            assert_eq!((r.root.to_string(), r.remainder.to_string()), (root.to_string(), rem.to_string()), "{kind} {x}");
        }
    }

    #[test]
    fn zero_has_empty_trace() {
        let r = extract_root(&DecimalNatural::zero(), RootKind::Cube);
        assert!(r.trace.is_empty());
        assert_eq!(r.counters, OpCounters::default());
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn zero_digits_accumulate() {
        let r = extract_root(&n("1000000"), RootKind::Square);
        let accumulated: Vec<String> = r
            .trace
            .iter()
            .filter(|e| e.kind == EventKind::AccumulateRoot)
            .map(|e| e.result.to_string())
            .collect();
        assert_eq!(accumulated, ["10", "100", "1000"]);
        assert!(r.subtrahends().any(|(_, s)| s.is_zero()));
    }

    #[test]
    fn check_invariant_detects_bad_state() {
        let mut s = cube_seed_state();
        assert!(s.check_invariant(RootKind::Cube).is_ok());
        s.remainder = n("8");
        assert!(matches!(s.check_invariant(RootKind::Cube), Err(EngineError::LoopInvariant { .. })));
        let bad_root = RootState {
            root: n("2"),
            remainder: n("26"),
            prefix: n("34"),
            anchor: 6,
            remaining: 2,
        };
        assert!(bad_root.check_invariant(RootKind::Cube).is_err());
    }

    #[test]
    fn negative_intermediate_is_reported() {
        // state whose remainder is inconsistent with its prefix
        let state = RootState {
            root: n("3"),
            remainder: n("0"),
            prefix: n("34"),
            anchor: 6,
            remaining: 2,
        };
        let mut rec = Recorder::new();
        let err = run_iteration(&state, &n("34965783"), RootKind::Cube, &mut rec).unwrap_err();
        assert!(matches!(
            err,
            EngineError::NegativeIntermediate { .. } | EngineError::LoopInvariant { .. }
        ));
    }

    fn brute_digit(root: &DecimalNatural, prefix: &DecimalNatural, k: u32) -> u8 {
        (0u8..=9)
            .filter(|&b| root.add_digit_shifted(b).power_small(k) <= *prefix)
            .max()
            .unwrap()
    }

    proptest! {
        #[test]
        fn trial_never_underestimates(x in "[1-9][0-9]{0,40}", cube in any::<bool>()) {
            let kind = if cube { RootKind::Cube } else { RootKind::Square };
            let x = n(&x);
            let r = extract_root(&x, kind);
            let k = kind.exponent();
            let trials: Vec<u64> = r
                .trace
                .iter()
                .filter(|e| e.kind == EventKind::DivideEstimate)
                .map(|e| e.result.to_u64().unwrap())
                .collect();
            let digits: Vec<u64> = r
                .trace
                .iter()
                .filter(|e| e.kind == EventKind::AccumulateRoot)
                .map(|e| u64::from(e.operands[1].digit_at(0)))
                .collect();
            prop_assert_eq!(trials.len(), r.iterations);
            for (idx, (t, d)) in trials.iter().zip(&digits).enumerate() {
                prop_assert!(t >= d);
                // brute-force max digit from the prefix alone
                let anchor = r.iterations - idx - 1;
                let prefix = x.shift_right(anchor * kind.period());
                let prev = r.root.shift_right(anchor + 1);
                prop_assert_eq!(u64::from(brute_digit(&prev, &prefix, k)), *d);
            }
        }

        #[test]
        fn trace_replays_to_input(x in "[1-9][0-9]{0,50}", cube in any::<bool>()) {
            let kind = if cube { RootKind::Cube } else { RootKind::Square };
            let x = n(&x);
            let r = extract_root(&x, kind);
            prop_assert_eq!(r.subtracted_total().add(&r.remainder), x.clone());
            prop_assert_eq!(r.root.power_small(kind.exponent()).add(&r.remainder), x.clone());
            prop_assert_eq!(r.root.digit_count(), r.iterations + 1);
            prop_assert_eq!(r.invariant_checks as usize, r.iterations + 1);
        }

        #[test]
        fn perfect_powers_leave_no_remainder(root in "[1-9][0-9]{0,25}", cube in any::<bool>()) {
            let kind = if cube { RootKind::Cube } else { RootKind::Square };
            let root = n(&root);
            let r = extract_root(&root.power_small(kind.exponent()), kind);
            prop_assert_eq!(r.root, root);
            prop_assert!(r.remainder.is_zero());
        }

        #[test]
        fn counters_are_monotone(x in "[1-9][0-9]{0,30}") {
            let mut rec = Recorder::new();
            let x = n(&x);
            let mut state = seed(&x, RootKind::Cube, &mut rec).unwrap();
            let mut last = rec.counters;
            while state.remaining > 0 {
                state = run_iteration(&state, &x, RootKind::Cube, &mut rec).unwrap();
                let now = rec.counters;
                prop_assert!(now.as_array().iter().zip(last.as_array()).all(|(a, b)| *a >= b));
                last = now;
            }
        }
    }
}
