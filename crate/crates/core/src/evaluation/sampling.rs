use super::EvaluationError;

/// Clips used per video by default.
pub const DEFAULT_CLIP_TARGET: usize = 6;

/// Indices of the clips used for a video with `available` clips.
///
/// Videos with at least `target` clips use the first `target`; shorter
/// videos repeat their clips cyclically until `target` indices are chosen.
pub fn cyclic_clip_sample(available: usize, target: usize) -> Result<Vec<usize>, EvaluationError> {
    if available == 0 {
        return Err(EvaluationError::NoClips);
    }
    if target == 0 {
        return Err(EvaluationError::ZeroClipTarget);
    }
    Ok((0..target).map(|i| i % available).collect())
}
