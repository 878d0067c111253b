#include "zerobas/pipeline.hpp"

#include "zerobas/ampscale.hpp"
#include "zerobas/geowarp.hpp"

namespace zerobas {
namespace {

void check_inputs(const Waveform& mono, const SampleTrajectory& traj, const PipelineConfig& config) {
  config.validate();
  traj.validate();
  if (mono.channels() != 1) throw InvalidInput("pipeline input must be mono");
  if (traj.size() != mono.frames())
    throw InvalidInput("trajectory length differs from waveform length");
  if (traj.sample_rate != mono.sample_rate())
    throw InvalidInput("trajectory sample rate differs from waveform sample rate");
}

}  // namespace

StereoPair spatialize(const Waveform& mono, const SampleTrajectory& traj,
                      const PipelineConfig& config) {
  check_inputs(mono, traj, config);
  StereoPair pair = config.enable_gtw ? geometric_time_warp(mono, traj, config.speed_of_sound)
                                      : StereoPair(mono, mono);
  if (config.enable_as) pair = apply_gains(pair, compute_gains(traj));
  return pair;
}

StereoPair binauralize(const Waveform& mono, const SampleTrajectory& traj,
                       DenoisingVocoder& vocoder, const PipelineConfig& config,
                       const StftConfig& stft_cfg, const MelConfig& mel_cfg) {
  check_inputs(mono, traj, config);
  if (config.swap_order) {
    const Waveform refined =
        iterative_refine(mono, vocoder, config.iterations, config.noise_level, stft_cfg, mel_cfg);
    return spatialize(refined, traj, config);
  }
  return iterative_refine(spatialize(mono, traj, config), vocoder, config.iterations,
                          config.noise_level, stft_cfg, mel_cfg);
}

}  // namespace zerobas
