// Mono-to-binaural pipeline: time warp, amplitude scaling, refinement.
#pragma once

#include "zerobas/core.hpp"
#include "zerobas/features.hpp"
#include "zerobas/vocoder.hpp"

namespace zerobas {

/// GTW and AS only, each skippable via `config`. Disabled GTW duplicates the
/// mono input into both channels; disabled AS leaves gains at 1.
StereoPair spatialize(const Waveform& mono, const SampleTrajectory& traj,
                      const PipelineConfig& config);

/// Default order: spatialize, then refine each channel `config.iterations`
/// times. With `swap_order` the mono input is refined first.
StereoPair binauralize(const Waveform& mono, const SampleTrajectory& traj,
                       DenoisingVocoder& vocoder, const PipelineConfig& config,
                       const StftConfig& stft_cfg = {}, const MelConfig& mel_cfg = {});

}  // namespace zerobas
