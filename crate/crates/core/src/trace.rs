//! Move traces shared by every search engine.
//!
//! An engine reports each improving move to a [`TraceSink`]. [`MoveTrace`]
//! keeps the moves in memory; [`JsonlSink`] streams them as one JSON object
//! per line so that million-step runs never accumulate in memory.

use std::io::Write;

use serde::Serialize;

use crate::rational::{format_rational, Rational};

/// Where a mover was before or after a move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// Side of a cut (`true` = side S).
    Side(bool),
    /// Exact 1-D position.
    Position(Rational),
    /// Point in ℝᵈ, exact coordinates.
    Point(Vec<Rational>),
    /// Tree attachment site: the node whose parent edge receives the leaf.
    Site(usize),
}

impl Location {
    pub fn render(&self) -> String {
        match self {
            Location::Side(s) => if *s { "S".into() } else { "S'".into() },
            Location::Position(p) => format_rational(p),
            Location::Point(ps) => ps.iter().map(format_rational).collect::<Vec<_>>().join(","),
            Location::Site(s) => format!("site:{s}"),
        }
    }
}

/// One improving move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveStep {
    pub mover: usize,
    pub from: Location,
    pub to: Location,
    pub before: Rational,
    pub after: Rational,
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    LocalOptimum,
    Cap,
}

/// Outcome of a search run whose moves went to a [`TraceSink`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSummary {
    pub iterations: u64,
    pub termination: Termination,
    /// Objective value of the final configuration.
    pub objective: Rational,
}

/// Receiver for the moves an engine performs.
pub trait TraceSink {
    fn record(&mut self, step: &MoveStep);
}

/// Counts moves and remembers the mover sequence, discarding locations.
#[derive(Debug, Default, Clone)]
pub struct MoverLog {
    pub movers: Vec<usize>,
}

impl TraceSink for MoverLog {
    fn record(&mut self, step: &MoveStep) {
        self.movers.push(step.mover);
    }
}

/// Discards everything.
#[derive(Debug, Default)]
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _step: &MoveStep) {}
}

/// Complete in-memory trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
    pub termination: Termination,
}

impl MoveTrace {
    pub fn new() -> Self {
        MoveTrace { steps: Vec::new(), termination: Termination::LocalOptimum }
    }

    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn movers(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.mover).collect()
    }

    /// True when every step strictly improves and consecutive steps chain.
    pub fn is_strictly_increasing(&self) -> bool {
        self.steps.iter().all(|s| s.after > s.before)
            && self.steps.windows(2).all(|w| w[0].after == w[1].before)
    }
}

impl Default for MoveTrace {
    fn default() -> Self {
        Self::new()
    }
}

impl TraceSink for MoveTrace {
    fn record(&mut self, step: &MoveStep) {
        self.steps.push(step.clone());
    }
}

#[derive(Serialize)]
struct JsonStep<'a> {
    step: usize,
    mover: &'a str,
    from: String,
    to: String,
    before: String,
    after: String,
}

/// Streams moves as JSON lines. `names` maps mover ids to printable names.
pub struct JsonlSink<W: Write> {
    out: W,
    names: Vec<String>,
    count: usize,
    error: Option<std::io::Error>,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(out: W, names: Vec<String>) -> Self {
        JsonlSink { out, names, count: 0, error: None }
    }

    /// Flush and surface the first write error, if any.
    pub fn finish(mut self) -> std::io::Result<usize> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.count)
    }
}

impl<W: Write> TraceSink for JsonlSink<W> {
    fn record(&mut self, step: &MoveStep) {
        if self.error.is_some() {
            return;
        }
        let fallback = step.mover.to_string();
        let mover = self.names.get(step.mover).map(String::as_str).unwrap_or(&fallback);
        let line = JsonStep {
            step: self.count,
            mover,
            from: step.from.render(),
            to: step.to.render(),
            before: format_rational(&step.before),
            after: format_rational(&step.after),
        };
        self.count += 1;
        let res = serde_json::to_writer(&mut self.out, &line)
            .map_err(std::io::Error::from)
            .and_then(|_| self.out.write_all(b"\n"));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }
}

/// Forwards each move to two sinks.
pub struct Tee<'a, 'b>(pub &'a mut dyn TraceSink, pub &'b mut dyn TraceSink);

impl TraceSink for Tee<'_, '_> {
    fn record(&mut self, step: &MoveStep) {
        self.0.record(step);
        self.1.record(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn jsonl_lines_are_stable() {
        let mut buf = Vec::new();
        let mut sink = JsonlSink::new(&mut buf, vec!["a".into(), "b".into()]);
        sink.record(&MoveStep {
            mover: 1,
            from: Location::Side(true),
            to: Location::Side(false),
            before: int(1),
            after: int(3),
        });
        assert_eq!(sink.finish().unwrap(), 1);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "{\"step\":0,\"mover\":\"b\",\"from\":\"S\",\"to\":\"S'\",\"before\":\"1\",\"after\":\"3\"}\n");
    }
}
