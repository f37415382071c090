//! Long-form text layout of an extraction, in the style of a hand-worked
//! tableau.
//!
//! ```text
//!  ^-^^-^^-
//!  34965783
//! -27
//!  __
//!   79           root: 3
//! -54
//! ```
//!
//! Every number is right-aligned under the input digit of its place. The
//! marker line puts `-` over anchor places and `^` over the others.
//! Subtrahend lines start with `-`; the line after each rule is the new
//! remainder with the next digit brought down. Digit adjustments appear as
//! side notes on the subtrahend line where they took effect.

use std::fmt::Write as _;

use crate::decimal::DecimalNatural;
use crate::engine::{mark_places, EventKind, RootResult, TraceEvent};

const ANCHOR: char = '-';
const INTERMEDIATE: char = '^';
const COMBINING_MACRON: char = '\u{0304}';
const COMBINING_CIRCUMFLEX: char = '\u{0302}';

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MarkerStyle {
    /// A separate marker line of `-` and `^`.
    #[default]
    Ascii,
    /// Combining macron/circumflex on the input digits themselves.
    Combining,
}

struct Layout {
    width: usize,
    out: String,
}

impl Layout {
    /// Column one left of the input's top digit is reserved for signs.
    fn column_of(&self, place: usize) -> usize {
        1 + (self.width - 1 - place)
    }

    /// Right-aligns `text` so its last character sits over `place`.
    fn line_at(&mut self, prefix: char, text: &str, place: usize, note: Option<&str>) {
        let end = self.column_of(place) + 1;
        let start = end.saturating_sub(text.len());
        let mut line = String::new();
        if start > 0 {
            line.push_str(&" ".repeat(start - 1));
            line.push(prefix);
        }
        line.push_str(text);
        if let Some(note) = note {
            let pad = (self.width + 4).saturating_sub(line.len()).max(2);
            line.push_str(&" ".repeat(pad));
            line.push_str(note);
        }
        self.out.push_str(line.trim_end());
        self.out.push('\n');
    }
}

/// Renders `result`, which must come from extracting `input`.
pub fn render_text(result: &RootResult, input: &DecimalNatural) -> String {
    render_with(result, input, MarkerStyle::Ascii)
}

pub fn render_with(result: &RootResult, input: &DecimalNatural, style: MarkerStyle) -> String {
    if input.is_zero() {
        return format!(" 0\nRoot result: {}\n", result.root);
    }
    let marking = mark_places(input, result.kind).expect("input is nonzero");
    let mut layout = Layout {
        width: input.digit_count(),
        out: String::new(),
    };

    let places = (0..layout.width).rev();
    match style {
        MarkerStyle::Ascii => {
            let markers: String = places
                .map(|p| if marking.is_anchor(p) { ANCHOR } else { INTERMEDIATE })
                .collect();
            let _ = writeln!(layout.out, " {markers}");
            let _ = writeln!(layout.out, " {input}");
        }
        MarkerStyle::Combining => {
            let mut line = String::from(" ");
            for p in places {
                line.push(char::from(b'0' + input.digit_at(p)));
                line.push(if marking.is_anchor(p) {
                    COMBINING_MACRON
                } else {
                    COMBINING_CIRCUMFLEX
                });
            }
            let _ = writeln!(layout.out, "{line}");
        }
    }

    let trace = &result.trace;
    let mut root = DecimalNatural::zero();
    let mut pending_note: Option<String> = None;
    let mut trial: Option<&DecimalNatural> = None;
    let mut adjusted = false;

    for (idx, event) in trace.iter().enumerate() {
        match event.kind {
            EventKind::Seed => root = event.result.clone(),
            EventKind::AccumulateRoot => {
                root = event.result.clone();
                if let (true, Some(t)) = (adjusted, trial) {
                    pending_note = Some(format!("(trial {t} -> {})", event.operands[1]));
                }
                adjusted = false;
            }
            EventKind::DivideEstimate => trial = Some(&event.result),
            EventKind::Clamp | EventKind::DecrementAdjust => adjusted = true,
            EventKind::Subtract => {
                let subtrahend = event.operands[1].to_string();
                layout.line_at('-', &subtrahend, event.position, pending_note.take().as_deref());
                layout.line_at(' ', &"_".repeat(subtrahend.len()), event.position, None);
                let (value, place) = next_minuend(&trace[idx + 1..]).unwrap_or((&event.result, event.position));
                layout.line_at(' ', &value.to_string(), place, Some(&format!("root: {root}")));
            }
            EventKind::MarkPlaces | EventKind::BringDown => {}
        }
    }
    let _ = writeln!(layout.out, "Root result: {}", result.root);
    layout.out
}

/// The bring-down that opens the next subtraction, if any.
fn next_minuend(rest: &[TraceEvent]) -> Option<(&DecimalNatural, usize)> {
    rest.iter()
        .take_while(|e| e.kind != EventKind::Subtract)
        .find(|e| e.kind == EventKind::BringDown)
        .map(|e| (&e.result, e.position))
}
