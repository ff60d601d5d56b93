#pragma once

#include <string>
#include <vector>

namespace hmot::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* name;
  Outcome (*run)();
};

Outcome OtOracleEquivalence();
Outcome GradientChecks();
Outcome SaturationProperty();
Outcome DecoderRoundTrips();
Outcome SpuriousMechanism();
Outcome MetricsGolden();
Outcome FitHarness();
Outcome PerturbationAudits();
Outcome CliRoundTrip();

/// Seconds since the first call; criteria use differences of it.
double Now();

}  // namespace hmot::acceptance
