#pragma once

#include <stdexcept>
#include <string>

namespace concentra {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CONCENTRA_DEFINE_ERROR(Name)                    \
  struct Name : Error {                                 \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

CONCENTRA_DEFINE_ERROR(DimensionMismatch);
CONCENTRA_DEFINE_ERROR(RankDeficient);
CONCENTRA_DEFINE_ERROR(NonFinite);
CONCENTRA_DEFINE_ERROR(UnsupportedDual);
CONCENTRA_DEFINE_ERROR(UnsupportedBody);
CONCENTRA_DEFINE_ERROR(NoGradient);
CONCENTRA_DEFINE_ERROR(MeanNearZero);
CONCENTRA_DEFINE_ERROR(HeavyTail);
CONCENTRA_DEFINE_ERROR(DegenerateDistribution);
CONCENTRA_DEFINE_ERROR(QuadratureFail);
CONCENTRA_DEFINE_ERROR(CardinalityExplosion);
CONCENTRA_DEFINE_ERROR(CoverageFail);
CONCENTRA_DEFINE_ERROR(VacuousBound);
CONCENTRA_DEFINE_ERROR(ConfigError);

#undef CONCENTRA_DEFINE_ERROR

}  // namespace concentra
