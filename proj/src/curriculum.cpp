#include "reidrank/curriculum.hpp"

#include <cmath>
#include <string>

#include "reidrank/errors.hpp"

namespace reidrank {
namespace curriculum {

void validate(const ScheduleConfig& config) {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Fixed>) {
                if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
                    throw ConfigError("fixed alpha must lie in [0, 1], got " +
                                      std::to_string(c.alpha));
                }
            } else if constexpr (std::is_same_v<T, Exponential>) {
                if (!(c.tau > 0.0)) {
                    throw ConfigError("tau must be > 0, got " + std::to_string(c.tau));
                }
            } else {
                if (!(c.phi > 0.0)) {
                    throw ConfigError("phi must be > 0, got " + std::to_string(c.phi));
                }
            }
        },
        config);
}

double alpha(const ScheduleConfig& config, double epoch_fraction) {
    validate(config);
    if (!(epoch_fraction >= 0.0 && epoch_fraction <= 1.0)) {
        throw ConfigError("normalized epoch index must lie in [0, 1], got " +
                          std::to_string(epoch_fraction));
    }
    return std::visit(
        [epoch_fraction](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Fixed>) {
                return c.alpha;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return 0.5 * std::exp(-c.tau * epoch_fraction);
            } else {
                return (std::cos(M_PI * epoch_fraction) + c.phi) / (2.0 * (1.0 + c.phi));
            }
        },
        config);
}

double combine(const LossPair& losses, double alpha_value) {
    if (!(alpha_value >= 0.0 && alpha_value <= 1.0)) {
        throw ConfigError("alpha must lie in [0, 1], got " + std::to_string(alpha_value));
    }
    if (!(losses.primary_loss >= 0.0) || !(losses.auxiliary_loss >= 0.0) ||
        !std::isfinite(losses.primary_loss) || !std::isfinite(losses.auxiliary_loss)) {
        throw DataError("losses must be finite and non-negative");
    }
    return (1.0 - alpha_value) * losses.primary_loss + alpha_value * losses.auxiliary_loss;
}

}  // namespace curriculum
}  // namespace reidrank
