#pragma once

// Declarative readout line and a stage-by-stage noise propagator.
//
// The walk keeps every quantity referred to the signal source. Ahead of the
// parametric amplifier it tracks the normally-ordered occupancy at the
// current point (no vacuum); the amplifier turns that into symmetrized
// system noise using the equal signal/idler assumption. Lossy sections use
// the conjugated-field convention: (alpha, (1 - alpha)(n_env + 1)).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "radcool/physics.hpp"

namespace radcool {

struct SourceStage {
  Temperature temperature{0.0};
};

struct LossStage {
  double alpha = 1.0;
  Temperature env_temperature{0.0};
};

struct ParametricAmpStage {
  AmplifierSpec spec;
  Temperature device_temperature;
};

struct PostAmpStage {
  double gain = 1.0;
  double added_noise = 0.0;
};

using StageKind = std::variant<SourceStage, LossStage, ParametricAmpStage, PostAmpStage>;

struct ChainStage {
  StageKind kind;
  std::string label;  // empty -> generated from kind and index
};

std::string stage_label(const ChainStage& stage, std::size_t index);

class Chain {
 public:
  /// Validates ordering and ranges; throws ValidationError naming the stage.
  Chain(std::vector<ChainStage> stages, Frequency signal_frequency);

  const std::vector<ChainStage>& stages() const noexcept { return stages_; }
  Frequency signal_frequency() const noexcept { return frequency_; }

 private:
  std::vector<ChainStage> stages_;
  Frequency frequency_;
};

struct StageContribution {
  std::size_t index;
  std::string label;
  double quanta;  // referred to the source
};

struct ChainReport {
  double total_gain = 1.0;
  double output_noise_quanta = 0.0;
  double source_referred_noise_quanta = 0.0;
  std::vector<StageContribution> contributions;
};

ChainReport propagate(const Chain& chain);

/// Non-zero per-stage contributions, summing to the source-referred noise.
std::vector<StageContribution> stage_budget(const Chain& chain);

/// Source(t_src) -> Loss(alpha1, t_mxc) -> Loss(alpha2, t_plate) -> amplifier.
Chain canonical_chain(const AmplifierSpec& amp, const TransmissionPair& tp, Temperature t_dev,
                      Frequency f, Temperature t_src = Temperature(0.01));

// ---------------------------------------------------------------------------

inline std::string stage_label(const ChainStage& stage, std::size_t index) {
  if (!stage.label.empty()) return stage.label;
  const std::string idx = "[" + std::to_string(index) + "]";
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SourceStage>) return "source";
        else if constexpr (std::is_same_v<T, LossStage>) return "loss" + idx;
        else if constexpr (std::is_same_v<T, ParametricAmpStage>) return "amplifier";
        else return "post_amp" + idx;
      },
      stage.kind);
}

inline Chain::Chain(std::vector<ChainStage> stages, Frequency signal_frequency)
    : stages_(std::move(stages)), frequency_(signal_frequency) {
  if (stages_.empty()) throw ValidationError("stages", "chain is empty");
  bool seen_paramp = false;
  bool seen_post = false;
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const std::string where = "stages[" + std::to_string(i) + "]";
    const auto& kind = stages_[i].kind;
    if (std::holds_alternative<SourceStage>(kind)) {
      if (i != 0) throw ValidationError(where, "source must be the first and only source stage");
    } else if (i == 0) {
      throw ValidationError(where, "chain must start with a source stage");
    } else if (const auto* loss = std::get_if<LossStage>(&kind)) {
      if (!std::isfinite(loss->alpha) || !(loss->alpha > 0.0 && loss->alpha <= 1.0))
        throw ValidationError(where, "loss alpha must lie in (0, 1]");
    } else if (std::holds_alternative<ParametricAmpStage>(kind)) {
      if (seen_paramp) throw ValidationError(where, "at most one parametric amplifier");
      if (seen_post) throw ValidationError(where, "parametric amplifier must precede post amplifiers");
      seen_paramp = true;
    } else if (const auto* post = std::get_if<PostAmpStage>(&kind)) {
      if (std::isnan(post->gain) || post->gain < 1.0)
        throw ValidationError(where, "post amplifier gain must be >= 1");
      if (!std::isfinite(post->added_noise) || post->added_noise < 0.0)
        throw ValidationError(where, "post amplifier added noise must be non-negative");
      seen_post = true;
    }
  }
}

inline ChainReport propagate(const Chain& chain) {
  const Frequency f = chain.signal_frequency();
  const auto& stages = chain.stages();

  // Per-stage contributions, referred to the source.
  std::vector<double> contrib(stages.size(), 0.0);
  double gain = 1.0;
  bool amplified = false;

  auto occupancy = [&](Temperature t) { return thermal_occupancy(f, t).quanta(); };

  for (std::size_t i = 0; i < stages.size(); ++i) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SourceStage>) {
            contrib[i] = occupancy(s.temperature);
          } else if constexpr (std::is_same_v<T, LossStage>) {
            gain *= s.alpha;
            contrib[i] = (1.0 - s.alpha) * (occupancy(s.env_temperature) + 1.0) / gain;
          } else if constexpr (std::is_same_v<T, ParametricAmpStage>) {
            const auto& c = s.spec.coupling();
            const double port_weight = 2.0 * c.inverse_external_fraction();
            for (std::size_t j = 0; j < i; ++j) contrib[j] *= port_weight;
            const double n_dev = occupancy(s.device_temperature);
            contrib[i] =
                (c.loss_ratio() * (2.0 * n_dev + 0.5) + s.spec.n_exc().quanta() + 1.0) / gain;
            gain *= s.spec.gain();
            amplified = true;
          } else {
            if (!amplified) {
              // Symmetrized vacuum of the unamplified input.
              contrib[0] += 0.5 / gain;
              amplified = true;
            }
            contrib[i] = s.added_noise / gain;
            gain *= s.gain;
          }
        },
        stages[i].kind);
  }
  if (!amplified) contrib[0] += 0.5 / gain;

  ChainReport report;
  report.total_gain = gain;
  double total = 0.0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    total += contrib[i];
    report.contributions.push_back({i, stage_label(stages[i], i), contrib[i]});
  }
  report.source_referred_noise_quanta = total;
  report.output_noise_quanta = total * gain;
  return report;
}

inline std::vector<StageContribution> stage_budget(const Chain& chain) {
  auto report = propagate(chain);
  std::vector<StageContribution> out;
  for (auto& c : report.contributions)
    if (c.quanta != 0.0) out.push_back(std::move(c));
  return out;
}

inline Chain canonical_chain(const AmplifierSpec& amp, const TransmissionPair& tp,
                             Temperature t_dev, Frequency f, Temperature t_src) {
  std::vector<ChainStage> stages;
  stages.push_back({SourceStage{t_src}, "source"});
  stages.push_back({LossStage{tp.alpha1(), tp.t_mxc()}, "mxc_loss"});
  stages.push_back({LossStage{tp.alpha2(), tp.t_plate()}, "plate_loss"});
  stages.push_back({ParametricAmpStage{amp, t_dev}, "amplifier"});
  return Chain(std::move(stages), f);
}

}  // namespace radcool
