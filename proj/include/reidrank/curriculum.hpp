#pragma once

#include <variant>

namespace reidrank {
namespace curriculum {

/// Auxiliary-factor schedules. E is the normalized epoch index in [0, 1]
/// (completed epochs / total epochs, clamped); fractional E gives
/// per-iteration updates.
struct Fixed {
    double alpha = 0.3;  // constant, in [0, 1]
};
struct Exponential {
    double tau = 1.0;  // alpha(E) = exp(-tau * E) / 2
};
struct Cosine {
    double phi = 3.0;  // alpha(E) = (cos(pi * E) + phi) / (2 * (1 + phi))
};

using ScheduleConfig = std::variant<Fixed, Exponential, Cosine>;

void validate(const ScheduleConfig& config);  // throws ConfigError

/// Auxiliary weight at normalized epoch E in [0, 1]; throws ConfigError on
/// out-of-range E or invalid parameters.
double alpha(const ScheduleConfig& config, double epoch_fraction);

struct LossPair {
    double primary_loss = 0.0;
    double auxiliary_loss = 0.0;
};

/// (1 - alpha) * primary + alpha * auxiliary; alpha must be in [0, 1].
double combine(const LossPair& losses, double alpha_value);

}  // namespace curriculum
}  // namespace reidrank
