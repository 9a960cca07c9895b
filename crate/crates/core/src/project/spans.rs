use super::{check_alignment, unaligned_targets, CollisionRule, ProjectionPolicy, ProjectionReport};
use crate::align::Alignment;
use crate::corpus::Span;
use crate::error::{Error, Result};

/// What happened to one source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanOutcome {
    Projected(Span),
    /// None of the span's tokens is aligned.
    Unaligned,
    /// The covering target range exceeded the length ratio.
    TooLong(Span),
    /// The target range overlapped a span kept by the collision rule.
    Collision(Span),
    /// An event argument whose trigger did not survive.
    Orphaned,
}

impl SpanOutcome {
    pub fn span(&self) -> Option<&Span> {
        match self {
            SpanOutcome::Projected(s) => Some(s),
            _ => None,
        }
    }
}

/// Image of a single span: the smallest target range covering every
/// target token aligned to a token inside the span, subject to the
/// length-ratio filter. `targets_by_source` comes from
/// [`Alignment::targets_by_source`].
pub fn project_span(span: &Span, targets_by_source: &[Vec<usize>], policy: &ProjectionPolicy) -> SpanOutcome {
    let aligned = targets_by_source[span.start..=span.end].iter().flatten();
    let (lo, hi) = aligned.fold((usize::MAX, 0), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if lo == usize::MAX {
        return SpanOutcome::Unaligned;
    }
    let image = Span::new(lo, hi, span.label.clone());
    if policy.too_long(image.len(), span.len()) {
        SpanOutcome::TooLong(image)
    } else {
        SpanOutcome::Projected(image)
    }
}

/// Span-based projection with overlap resolution. Returns the surviving
/// target spans sorted by position, plus an account of every source span.
pub fn project_spans(
    source_spans: &[Span],
    src_len: usize,
    tgt_len: usize,
    alignment: &Alignment,
    policy: &ProjectionPolicy,
) -> Result<(Vec<Span>, ProjectionReport)> {
    check_alignment(alignment, src_len, tgt_len)?;
    for span in source_spans {
        span.check(src_len).map_err(Error::InvalidArgument)?;
    }
    let by_source = alignment.targets_by_source(src_len);
    let mut outcomes: Vec<SpanOutcome> = source_spans
        .iter()
        .map(|s| project_span(s, &by_source, policy))
        .collect();

    let mut order: Vec<usize> = (0..source_spans.len()).collect();
    let key = |i: &usize| {
        let src = &source_spans[*i];
        let tgt_len = outcomes[*i].span().map_or(0, Span::len);
        match policy.collision {
            CollisionRule::KeepEarliestSource => (0, src.start, src.end, *i),
            CollisionRule::KeepShortestTarget => (tgt_len, src.start, src.end, *i),
        }
    };
    order.sort_by_key(key);

    let mut kept: Vec<Span> = Vec::new();
    for i in order {
        let SpanOutcome::Projected(image) = &outcomes[i] else {
            continue;
        };
        if kept.iter().any(|k| k.overlaps(image)) {
            outcomes[i] = SpanOutcome::Collision(image.clone());
        } else {
            kept.push(image.clone());
        }
    }
    kept.sort();

    let mut report = ProjectionReport {
        unaligned_tokens: unaligned_targets(alignment, tgt_len),
        ..ProjectionReport::default()
    };
    for outcome in &outcomes {
        report.record(outcome);
    }
    Ok((kept, report))
}
