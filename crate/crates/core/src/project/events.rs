use super::{check_alignment, project_span, unaligned_targets, ProjectionPolicy, ProjectionReport, SpanOutcome};
use crate::align::Alignment;
use crate::corpus::{Argument, EventStructure};
use crate::error::{Error, Result};

/// Projects triggers and arguments span by span.
///
/// Overlap resolution is not applied here: arguments of different
/// triggers may legitimately share a span. An argument whose trigger was
/// dropped is dropped as orphaned; trigger indices are renumbered over the
/// surviving triggers.
pub fn project_events(
    source: &EventStructure,
    src_len: usize,
    tgt_len: usize,
    alignment: &Alignment,
    policy: &ProjectionPolicy,
) -> Result<(EventStructure, ProjectionReport)> {
    check_alignment(alignment, src_len, tgt_len)?;
    source.check(src_len).map_err(Error::InvalidArgument)?;
    let by_source = alignment.targets_by_source(src_len);
    let mut report = ProjectionReport {
        unaligned_tokens: unaligned_targets(alignment, tgt_len),
        ..ProjectionReport::default()
    };

    let mut out = EventStructure::default();
    let mut renumber: Vec<Option<usize>> = Vec::with_capacity(source.triggers.len());
    for trigger in &source.triggers {
        let outcome = project_span(trigger, &by_source, policy);
        report.record(&outcome);
        renumber.push(match outcome {
            SpanOutcome::Projected(span) => {
                out.triggers.push(span);
                Some(out.triggers.len() - 1)
            }
            _ => None,
        });
    }
    for arg in &source.arguments {
        let outcome = match renumber[arg.trigger] {
            None => SpanOutcome::Orphaned,
            Some(_) => project_span(&arg.span, &by_source, policy),
        };
        report.record(&outcome);
        if let (SpanOutcome::Projected(span), Some(trigger)) = (outcome, renumber[arg.trigger]) {
            out.arguments.push(Argument { span, trigger });
        }
    }
    Ok((out, report))
}
